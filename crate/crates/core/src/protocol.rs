//! Encode, transmit, decode.
//!
//! Messages `x ~ p` are encoded by applying `N_x` to the resource state, sent
//! unchanged, and decoded with a POVM `{M_y}`. The joint law is
//! `p(x, y) = p_x Tr[M_y N_x(ρ)]`; its mutual information never exceeds the
//! Holevo quantity of the encoding.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{ginibre, hermitian_eig, spectral_apply, ComplexMatrix, SeededRng, EIG_TOL};
use crate::qcore::{check_dims, CqEnsemble, DensityMatrix, EncodingEnsemble, Povm};

/// Eigenvalues of `ρ̄` above this span its support when building the PGM.
pub const PGM_SUPPORT_FLOOR: f64 = 1e-12;

/// `p(x, y)` for `n` messages and `m` outcomes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointDistribution {
    p_xy: Vec<Vec<f64>>,
}

impl JointDistribution {
    /// Entries down to `−1e-12` are clipped to zero; the total must be 1 within `1e-9`.
    pub fn new(mut p_xy: Vec<Vec<f64>>) -> Result<Self> {
        let m = p_xy.first().map(Vec::len).unwrap_or(0);
        if m == 0 || p_xy.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidDistribution("joint table must be a nonempty rectangle"));
        }
        for x in p_xy.iter_mut().flatten() {
            if !x.is_finite() || *x < -1e-12 {
                return Err(Error::InvalidDistribution("negative or non-finite entry"));
            }
            *x = x.max(0.0);
        }
        let total: f64 = p_xy.iter().flatten().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDistribution("entries must sum to 1"));
        }
        Ok(Self { p_xy })
    }

    pub fn table(&self) -> &[Vec<f64>] {
        &self.p_xy
    }

    pub fn messages(&self) -> usize {
        self.p_xy.len()
    }

    pub fn outcomes(&self) -> usize {
        self.p_xy[0].len()
    }

    pub fn marginal_x(&self) -> Vec<f64> {
        self.p_xy.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn marginal_y(&self) -> Vec<f64> {
        (0..self.outcomes())
            .map(|y| self.p_xy.iter().map(|r| r[y]).sum())
            .collect()
    }

    /// Total-variation distance to another table of the same shape.
    pub fn total_variation(&self, other: &Self) -> Result<f64> {
        check_dims(self.messages(), other.messages())?;
        check_dims(self.outcomes(), other.outcomes())?;
        let sum: f64 = self
            .p_xy
            .iter()
            .flatten()
            .zip(other.p_xy.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .sum();
        Ok(0.5 * sum)
    }
}

pub fn joint_distribution(rho: &DensityMatrix, e: &EncodingEnsemble, m: &Povm) -> Result<JointDistribution> {
    check_dims(e.dim(), rho.dim())?;
    check_dims(m.dim(), rho.dim())?;
    let cq = e.outputs(rho)?;
    let p_xy = cq
        .probs()
        .iter()
        .zip(cq.states())
        .map(|(p, s)| Ok(m.probabilities(s)?.into_iter().map(|q| p * q).collect()))
        .collect::<Result<Vec<Vec<f64>>>>()?;
    JointDistribution::new(p_xy)
}

fn entropy_bits(p: impl IntoIterator<Item = f64>) -> f64 {
    -p.into_iter().filter(|&x| x > 0.0).map(|x| x * x.log2()).sum::<f64>()
}

/// `H(X) + H(Y) − H(XY)`.
pub fn mutual_information(j: &JointDistribution) -> f64 {
    let hx = entropy_bits(j.marginal_x());
    let hy = entropy_bits(j.marginal_y());
    let hxy = entropy_bits(j.p_xy.iter().flatten().copied());
    let bound = (j.messages() as f64).log2().min((j.outcomes() as f64).log2());
    (hx + hy - hxy).clamp(0.0, bound)
}

/// Pretty good measurement `ρ̄^{-1/2} p_x ρ_x ρ̄^{-1/2}` on the support of `ρ̄`,
/// followed by a slack effect projecting onto its kernel.
pub fn pretty_good_measurement(e: &CqEnsemble) -> Result<Povm> {
    let avg = e.average()?;
    let d = avg.dim();
    let eig = hermitian_eig(avg.matrix(), EIG_TOL)?;
    let inv_sqrt: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&l| if l > PGM_SUPPORT_FLOOR { 1.0 / l.sqrt() } else { 0.0 })
        .collect();
    let support: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&l| if l > PGM_SUPPORT_FLOOR { 1.0 } else { 0.0 })
        .collect();
    let a = eig.recombine(&inv_sqrt);
    let mut effects: Vec<ComplexMatrix> = e
        .probs()
        .iter()
        .zip(e.states())
        .map(|(p, s)| (&(&a * s.matrix()) * &a).scale(*p).hermitian_part())
        .collect();
    effects.push(&ComplexMatrix::identity(d) - &eig.recombine(&support));
    Povm::new(effects)
}

/// Projective measurement in the eigenbasis of the average output.
pub fn average_eigenbasis_decoder(e: &CqEnsemble) -> Result<Povm> {
    let avg = e.average()?;
    Povm::projective(&avg.eigen().eigenvectors)
}

/// Default decoder menu: the pretty good measurement and the `ρ̄` eigenbasis.
pub fn default_decoders(rho: &DensityMatrix, e: &EncodingEnsemble) -> Result<Vec<Povm>> {
    let cq = e.outputs(rho)?;
    Ok(vec![pretty_good_measurement(&cq)?, average_eigenbasis_decoder(&cq)?])
}

/// Random POVM with `outcomes` effects `S^{-1/2} G_k G_k† S^{-1/2}`, `S = Σ_k G_k G_k†`.
pub fn random_povm(d: usize, outcomes: usize, rng: &mut SeededRng) -> Result<Povm> {
    let grams: Vec<ComplexMatrix> = (0..outcomes.max(1))
        .map(|_| {
            let g = ginibre(d, rng);
            &g * &g.adjoint()
        })
        .collect();
    let mut total = ComplexMatrix::zeros(d);
    for g in &grams {
        total = &total + g;
    }
    let inv_sqrt = spectral_apply(&total.hermitian_part(), |x| 1.0 / x.sqrt(), EIG_TOL)?;
    Povm::new(
        grams
            .iter()
            .map(|g| (&(&inv_sqrt * g) * &inv_sqrt).hermitian_part())
            .collect(),
    )
}

/// Best mutual information over a finite decoder list.
pub fn single_shot_lower_bound(rho: &DensityMatrix, e: &EncodingEnsemble, decoders: &[Povm]) -> Result<f64> {
    if decoders.is_empty() {
        return Err(Error::EmptyDecoderList);
    }
    let mut best = 0.0f64;
    for m in decoders {
        best = best.max(mutual_information(&joint_distribution(rho, e, m)?));
    }
    Ok(best)
}

/// Sampled counts `n(x, y)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShotRecord {
    pub counts: Vec<Vec<u64>>,
    pub shots: u64,
    pub seed: u64,
}

impl ShotRecord {
    pub fn empirical_joint(&self) -> Result<JointDistribution> {
        let n = self.shots as f64;
        JointDistribution::new(
            self.counts
                .iter()
                .map(|r| r.iter().map(|&c| c as f64 / n).collect())
                .collect(),
        )
    }
}

fn sample_index(cdf: &[f64], u: f64) -> usize {
    cdf.iter().position(|&c| u < c).unwrap_or(cdf.len() - 1)
}

fn cumulative(p: &[f64]) -> Vec<f64> {
    let total: f64 = p.iter().sum();
    let mut acc = 0.0;
    p.iter()
        .map(|x| {
            acc += x / total;
            acc
        })
        .collect()
}

/// Samples `x ~ p`, then `y` from the Born distribution of `N_x(ρ)`, `shots` times.
pub fn simulate_shots(
    rho: &DensityMatrix,
    e: &EncodingEnsemble,
    m: &Povm,
    shots: u64,
    rng: &mut SeededRng,
) -> Result<ShotRecord> {
    if shots == 0 {
        return Err(Error::InvalidDistribution("at least one shot is required"));
    }
    check_dims(e.dim(), rho.dim())?;
    check_dims(m.dim(), rho.dim())?;
    let seed = rng.seed();
    let cq = e.outputs(rho)?;
    let message_cdf = cumulative(cq.probs());
    let outcome_cdfs = cq
        .states()
        .iter()
        .map(|s| Ok(cumulative(&m.probabilities(s)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut counts = vec![vec![0u64; m.outcomes()]; e.len()];
    for _ in 0..shots {
        let x = sample_index(&message_cdf, rng.uniform());
        let y = sample_index(&outcome_cdfs[x], rng.uniform());
        counts[x][y] += 1;
    }
    Ok(ShotRecord { counts, shots, seed })
}

/// Plug-in mutual information with its asymptotic standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MiEstimate {
    pub value: f64,
    pub std_error: f64,
}

/// Plug-in estimate from counts; the standard error is
/// `sqrt(Var[log2 p(x,y)/(p(x)p(y))] / N)` under the empirical law.
pub fn empirical_mutual_information(r: &ShotRecord) -> Result<MiEstimate> {
    let j = r.empirical_joint()?;
    let (px, py) = (j.marginal_x(), j.marginal_y());
    let (mut first, mut second) = (0.0, 0.0);
    for (x, row) in j.table().iter().enumerate() {
        for (y, &p) in row.iter().enumerate() {
            if p > 0.0 {
                let i = (p / (px[x] * py[y])).log2();
                first += p * i;
                second += p * i * i;
            }
        }
    }
    let variance = (second - first * first).max(0.0);
    Ok(MiEstimate {
        value: first.max(0.0),
        std_error: (variance / r.shots as f64).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fec::chi_of_encoding;
    use crate::qcore::{binary_entropy, KrausChannel};
    use num_complex::Complex64;

    fn plus() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::pure(&[Complex64::new(s, 0.0), Complex64::new(s, 0.0)]).unwrap()
    }

    fn pin(s: &DensityMatrix) -> KrausChannel {
        KrausChannel::pinning(s)
    }

    fn orthogonal_ensemble() -> EncodingEnsemble {
        EncodingEnsemble::uniform(vec![
            pin(&DensityMatrix::basis_state(2, 0)),
            pin(&DensityMatrix::basis_state(2, 1)),
        ])
        .unwrap()
    }

    #[test]
    fn joint_examples() {
        let rho = plus();
        let j = joint_distribution(&rho, &orthogonal_ensemble(), &Povm::computational(2)).unwrap();
        for (x, row) in j.table().iter().enumerate() {
            for (y, p) in row.iter().enumerate() {
                let expected = if x == y { 0.5 } else { 0.0 };
                assert!((p - expected).abs() < 1e-12);
            }
        }

        let same = EncodingEnsemble::uniform(vec![KrausChannel::identity(2); 3]).unwrap();
        let j = joint_distribution(&rho, &same, &Povm::computational(2)).unwrap();
        assert!(mutual_information(&j) < 1e-12);

        let ground_mix = EncodingEnsemble::new(
            vec![0.6, 0.4],
            vec![pin(&DensityMatrix::basis_state(2, 0)), pin(&DensityMatrix::maximally_mixed(2))],
        )
        .unwrap();
        let j = joint_distribution(&rho, &ground_mix, &Povm::computational(2)).unwrap();
        let expected = [[0.6, 0.0], [0.2, 0.2]];
        for (row, exp) in j.table().iter().zip(expected) {
            for (a, b) in row.iter().zip(exp) {
                assert!((a - b).abs() < 1e-12);
            }
        }
        assert!((j.marginal_x()[0] - 0.6).abs() < 1e-12);
        assert!(mutual_information(&j) <= chi_of_encoding(&rho, &ground_mix).unwrap() + 1e-9);
    }

    #[test]
    fn mutual_information_examples() {
        let j = JointDistribution::new(vec![vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap();
        assert!((mutual_information(&j) - 1.0).abs() < 1e-14);
        let j = JointDistribution::new(vec![vec![0.12, 0.28], vec![0.18, 0.42]]).unwrap();
        assert!(mutual_information(&j) < 1e-12);
        let j = JointDistribution::new(vec![vec![0.3, 0.2], vec![0.2, 0.3]]).unwrap();
        // 1 − h(0.6)
        let expected = 1.0 - binary_entropy(0.6).unwrap();
        assert!((mutual_information(&j) - expected).abs() < 1e-14);
        assert!((expected - 0.02905).abs() < 1e-5);

        assert!(JointDistribution::new(vec![vec![0.5, 0.6]]).is_err());
        assert!(JointDistribution::new(vec![vec![1.1, -0.1]]).is_err());
        assert!(JointDistribution::new(vec![vec![0.5], vec![0.25, 0.25]]).is_err());
    }

    #[test]
    fn pgm_examples() {
        let z0 = DensityMatrix::basis_state(2, 0);
        let z1 = DensityMatrix::basis_state(2, 1);
        let cq = CqEnsemble::new(vec![0.5, 0.5], vec![z0.clone(), z1.clone()]).unwrap();
        let pgm = pretty_good_measurement(&cq).unwrap();
        assert_eq!(pgm.outcomes(), 3);
        assert!(pgm.effects()[0].distance(z0.matrix()) < 1e-12);
        assert!(pgm.effects()[1].distance(z1.matrix()) < 1e-12);
        assert!(pgm.effects()[2].frobenius_norm() < 1e-12);

        let cq = CqEnsemble::new(vec![1.0], vec![z0.clone()]).unwrap();
        let pgm = pretty_good_measurement(&cq).unwrap();
        assert!(pgm.effects()[0].distance(z0.matrix()) < 1e-12);
        assert!(pgm.effects()[1].distance(z1.matrix()) < 1e-12);

        let e = EncodingEnsemble::uniform(vec![pin(&z0), pin(&plus())]).unwrap();
        let rho = DensityMatrix::maximally_mixed(2);
        let pgm = pretty_good_measurement(&e.outputs(&rho).unwrap()).unwrap();
        let i = mutual_information(&joint_distribution(&rho, &e, &pgm).unwrap());
        // for two equiprobable pure states the PGM is the Helstrom measurement:
        // a binary symmetric channel with error (1 − 1/√2)/2
        let helstrom = 1.0 - binary_entropy((1.0 + std::f64::consts::FRAC_1_SQRT_2) / 2.0).unwrap();
        assert!((i - helstrom).abs() < 1e-12, "{i}");
        assert!(i > 0.399);
        let bound = single_shot_lower_bound(&rho, &e, &default_decoders(&rho, &e).unwrap()).unwrap();
        assert!(bound >= i - 1e-12);
        assert!(bound <= 0.600876 + 1e-6);
    }

    #[test]
    fn lower_bound_examples() {
        let rho = DensityMatrix::maximally_mixed(2);
        let e = orthogonal_ensemble();
        let b = single_shot_lower_bound(&rho, &e, &[Povm::computational(2)]).unwrap();
        assert!((b - chi_of_encoding(&rho, &e).unwrap()).abs() < 1e-12);

        let same = EncodingEnsemble::uniform(vec![KrausChannel::identity(2); 2]).unwrap();
        let b = single_shot_lower_bound(&plus(), &same, &default_decoders(&plus(), &same).unwrap()).unwrap();
        assert!(b < 1e-12);
        assert_eq!(single_shot_lower_bound(&rho, &e, &[]), Err(Error::EmptyDecoderList));
    }

    #[test]
    fn shot_examples() {
        let z0 = DensityMatrix::basis_state(2, 0);
        let single = EncodingEnsemble::uniform(vec![pin(&z0)]).unwrap();
        let r = simulate_shots(&z0, &single, &Povm::computational(2), 1000, &mut SeededRng::new(1)).unwrap();
        assert_eq!(r.counts, vec![vec![1000, 0]]);

        let rho = plus();
        let e = orthogonal_ensemble();
        let m = Povm::computational(2);
        let r = simulate_shots(&rho, &e, &m, 100_000, &mut SeededRng::new(7)).unwrap();
        assert_eq!(r.counts.iter().flatten().sum::<u64>(), 100_000);
        let est = empirical_mutual_information(&r).unwrap();
        assert!((est.value - 1.0).abs() < 0.01);

        let again = simulate_shots(&rho, &e, &m, 100_000, &mut SeededRng::new(7)).unwrap();
        assert_eq!(r, again);
        assert!(simulate_shots(&rho, &e, &m, 0, &mut SeededRng::new(7)).is_err());
    }
}
