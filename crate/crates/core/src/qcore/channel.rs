use num_complex::Complex64;

use super::state::{check_dims, DensityMatrix};
use crate::error::{Error, Result};
use crate::linalg::{basis_vector, hermitian_eig, ComplexMatrix, EIG_TOL};

/// Completeness tolerance, scaled by `d`.
pub const CHANNEL_TOL: f64 = 1e-9;

/// A CPTP map `ρ ↦ Σ_k K_k ρ K_k†`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    kraus: Vec<ComplexMatrix>,
}

impl KrausChannel {
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let d = kraus.first().ok_or(Error::InvalidChannel("no Kraus operators"))?.dim();
        for k in &kraus {
            check_dims(d, k.dim())?;
            if !k.is_finite() {
                return Err(Error::NonFinite);
            }
        }
        let defect = completeness_defect(&kraus);
        if defect > CHANNEL_TOL * d as f64 {
            return Err(Error::InvalidChannel("completeness"));
        }
        Ok(Self { kraus })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            kraus: vec![ComplexMatrix::identity(d)],
        }
    }

    /// Single-Kraus channel `ρ ↦ U ρ U†`.
    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        let d = u.dim();
        if (&u.adjoint() * &u).distance(&ComplexMatrix::identity(d)) > CHANNEL_TOL * d as f64 {
            return Err(Error::InvalidChannel("unitary"));
        }
        Ok(Self { kraus: vec![u] })
    }

    /// Replacement map sending every input to `sigma`.
    ///
    /// Kraus operators are `√λ_j |v_j⟩⟨i|` over the eigenpairs of `sigma` with
    /// `λ_j > 0` and all basis vectors `|i⟩`.
    pub fn pinning(sigma: &DensityMatrix) -> Self {
        let d = sigma.dim();
        let eig = sigma.eigen();
        let mut kraus = Vec::new();
        for (j, &lambda) in eig.eigenvalues.iter().enumerate() {
            if lambda <= 0.0 {
                continue;
            }
            let v: Vec<Complex64> = eig.eigenvector(j).iter().map(|z| z * lambda.sqrt()).collect();
            for i in 0..d {
                kraus.push(ComplexMatrix::outer(&v, &basis_vector(d, i)));
            }
        }
        Self { kraus }
    }

    /// `Σ_c w_c N_c`, realized by the Kraus operators `√w_c K`.
    pub fn mixture(weights: &[f64], channels: &[KrausChannel]) -> Result<Self> {
        if weights.len() != channels.len() || channels.is_empty() {
            return Err(Error::InvalidDistribution("one weight per channel"));
        }
        validate_probabilities(weights)?;
        let d = channels[0].dim();
        let mut kraus = Vec::new();
        for (w, ch) in weights.iter().zip(channels) {
            check_dims(d, ch.dim())?;
            if *w > 0.0 {
                kraus.extend(ch.kraus.iter().map(|k| k.scale(w.sqrt())));
            }
        }
        Self::new(kraus)
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn dim(&self) -> usize {
        self.kraus[0].dim()
    }

    /// Raw `Σ_k K_k A K_k†` on an arbitrary operator.
    pub fn apply_operator(&self, a: &ComplexMatrix) -> ComplexMatrix {
        let d = self.dim();
        let mut acc = ComplexMatrix::zeros(d);
        for k in &self.kraus {
            acc = &acc + &a.conjugate_by(k);
        }
        acc
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        check_dims(self.dim(), rho.dim())?;
        DensityMatrix::new(self.apply_operator(rho.matrix()))
    }

    /// `outer ∘ inner`, Kraus operators `A_i B_j`.
    pub fn compose(outer: &KrausChannel, inner: &KrausChannel) -> Result<Self> {
        check_dims(outer.dim(), inner.dim())?;
        let kraus = outer
            .kraus
            .iter()
            .flat_map(|a| inner.kraus.iter().map(move |b| a * b))
            .collect();
        Ok(Self { kraus })
    }

    /// `‖Σ_k K_k K_k† − I‖_F ≤ tol`.
    pub fn is_unital(&self, tol: f64) -> bool {
        let d = self.dim();
        self.apply_operator(&ComplexMatrix::identity(d))
            .distance(&ComplexMatrix::identity(d))
            <= tol
    }
}

/// `‖Σ_k K_k† K_k − I‖_F`.
pub fn completeness_defect(kraus: &[ComplexMatrix]) -> f64 {
    let d = kraus[0].dim();
    let mut acc = ComplexMatrix::zeros(d);
    for k in kraus {
        acc = &acc + &(&k.adjoint() * k);
    }
    acc.distance(&ComplexMatrix::identity(d))
}

pub(crate) fn validate_probabilities(p: &[f64]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::InvalidDistribution("empty"));
    }
    if p.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::InvalidDistribution("negative or non-finite entry"));
    }
    if (p.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidDistribution("entries must sum to 1"));
    }
    Ok(())
}

/// A positive operator-valued measure `{M_y}` with `Σ_y M_y = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    effects: Vec<ComplexMatrix>,
}

impl Povm {
    pub fn new(effects: Vec<ComplexMatrix>) -> Result<Self> {
        let d = effects.first().ok_or(Error::InvalidPovm("no effects"))?.dim();
        let mut total = ComplexMatrix::zeros(d);
        for m in &effects {
            check_dims(d, m.dim())?;
            if m.hermiticity_defect() > 1e-10 * d as f64 {
                return Err(Error::InvalidPovm("effects must be Hermitian"));
            }
            let eig = hermitian_eig(m, EIG_TOL)?;
            if eig.eigenvalues[0] < -1e-10 {
                return Err(Error::InvalidPovm("effects must be positive semidefinite"));
            }
            total = &total + m;
        }
        if total.distance(&ComplexMatrix::identity(d)) > CHANNEL_TOL * d as f64 {
            return Err(Error::InvalidPovm("effects must sum to identity"));
        }
        Ok(Self {
            effects: effects.iter().map(|m| m.hermitian_part()).collect(),
        })
    }

    /// Projective measurement onto the columns of a unitary.
    pub fn projective(basis: &ComplexMatrix) -> Result<Self> {
        let effects = (0..basis.dim())
            .map(|j| ComplexMatrix::projector(&basis.column(j)))
            .collect();
        Self::new(effects)
    }

    pub fn computational(d: usize) -> Self {
        Self::projective(&ComplexMatrix::identity(d)).expect("computational basis")
    }

    pub fn effects(&self) -> &[ComplexMatrix] {
        &self.effects
    }

    pub fn dim(&self) -> usize {
        self.effects[0].dim()
    }

    pub fn outcomes(&self) -> usize {
        self.effects.len()
    }

    /// Born-rule distribution `Tr(M_y ρ)`, clipped at zero.
    pub fn probabilities(&self, rho: &DensityMatrix) -> Result<Vec<f64>> {
        check_dims(self.dim(), rho.dim())?;
        Ok(self
            .effects
            .iter()
            .map(|m| rho.expectation(m).max(0.0))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{pauli, random_density_matrix, SeededRng};

    fn pin0() -> KrausChannel {
        KrausChannel::pinning(&DensityMatrix::basis_state(2, 0))
    }

    #[test]
    fn identity_is_noop() {
        let rho = DensityMatrix::new(random_density_matrix(3, &mut SeededRng::new(1))).unwrap();
        let out = KrausChannel::identity(3).apply(&rho).unwrap();
        assert!(out.matrix().distance(rho.matrix()) < 1e-15);
    }

    #[test]
    fn pinning_replaces_input() {
        let rho = DensityMatrix::new(random_density_matrix(2, &mut SeededRng::new(2))).unwrap();
        let out = pin0().apply(&rho).unwrap();
        assert!(out.matrix().distance(DensityMatrix::basis_state(2, 0).matrix()) < 1e-14);
        // the explicit two-operator form {|0⟩⟨0|, |0⟩⟨1|}
        assert_eq!(pin0().kraus().len(), 2);
    }

    #[test]
    fn unitary_preserves_spectrum() {
        let mut rng = SeededRng::new(3);
        let rho = DensityMatrix::new(random_density_matrix(3, &mut rng)).unwrap();
        let u = crate::linalg::haar_random_unitary(3, &mut rng);
        let out = KrausChannel::unitary(u).unwrap().apply(&rho).unwrap();
        for (a, b) in rho.spectrum().iter().zip(out.spectrum()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn composition_examples() {
        let mut rng = SeededRng::new(4);
        let rho = DensityMatrix::new(random_density_matrix(2, &mut rng)).unwrap();
        let z = KrausChannel::unitary(pauli::z()).unwrap();
        let zz = KrausChannel::compose(&z, &z).unwrap();
        assert!(zz.apply(&rho).unwrap().matrix().distance(rho.matrix()) < 1e-14);

        let absorbed = KrausChannel::compose(&pin0(), &z).unwrap();
        let out = absorbed.apply(&rho).unwrap();
        assert!(out.matrix().distance(DensityMatrix::basis_state(2, 0).matrix()) < 1e-14);

        let with_id = KrausChannel::compose(&KrausChannel::identity(2), &z).unwrap();
        assert!(with_id.apply(&rho).unwrap().matrix().distance(z.apply(&rho).unwrap().matrix()) < 1e-14);
    }

    #[test]
    fn unitality() {
        let x = KrausChannel::unitary(pauli::x()).unwrap();
        assert!(x.is_unital(1e-12));
        assert!(!pin0().is_unital(1e-6));
        let mix = KrausChannel::mixture(&[0.5, 0.5], &[KrausChannel::identity(2), x]).unwrap();
        assert!(mix.is_unital(1e-12));
    }

    #[test]
    fn incomplete_kraus_rejected() {
        let k = ComplexMatrix::diag(&[1.0, 0.5]);
        assert_eq!(KrausChannel::new(vec![k]), Err(Error::InvalidChannel("completeness")));
        assert!(KrausChannel::new(vec![]).is_err());
    }

    #[test]
    fn povm_validation() {
        assert!(Povm::new(vec![ComplexMatrix::diag(&[1.0, 0.0])]).is_err());
        assert!(Povm::new(vec![ComplexMatrix::diag(&[1.5, 0.0]), ComplexMatrix::diag(&[-0.5, 1.0])]).is_err());
        let z = Povm::computational(2);
        let p = z.probabilities(&DensityMatrix::maximally_mixed(2)).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[1] - 0.5).abs() < 1e-15);
    }
}
