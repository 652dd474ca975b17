//! The free encoding capacity engine.
//!
//! For a fixed ensemble the capacity is the Holevo quantity of
//! `{p_x, N_x(ρ)}`, which equals `Σ_x p_x D(N_x(ρ) ‖ ρ̄)`. Over a finite pool of
//! free channels the probabilities are optimized with the multiplicative
//! fixed point `p_x ← p_x 2^{D_x} / Z`. Every iterate yields an achievable
//! value `Σ p_x D_x` and an upper certificate `max_x D_x` on the optimum over
//! the pool's convex hull of outputs.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, spectral_apply, ComplexMatrix, EigenDecomposition, EIG_TOL, MAX_DIM};
use crate::qcore::{
    binary_entropy, check_dims, holevo_chi, relative_entropy, von_neumann_entropy, DensityMatrix,
    EncodingEnsemble, KrausChannel, RelativeEntropy, SUPPORT_EIGEN_FLOOR,
};
use crate::theories::{is_free_channel, is_stochastically_free, ResourceTheory, StochasticFreeInstrument, POOL_FREE_TOL};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_ITER: usize = 10_000;

/// Outputs closer than this in trace distance are merged before optimizing.
pub const DEDUP_TRACE_DISTANCE: f64 = 1e-10;

/// Result of a probability optimization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FecResult {
    /// Achievable Holevo quantity at the returned probabilities (bits).
    pub value: f64,
    /// `max_x D(ρ_x ‖ ρ̄)` at the returned probabilities; bounds the optimum.
    pub upper_certificate: f64,
    /// Probabilities over the inputs (pool channels or outputs).
    pub probs: Vec<f64>,
    /// Iterates spent, summed over every run a pool optimization made.
    pub iterations: usize,
    pub converged: bool,
    /// Largest drop of the achievable value between consecutive iterates.
    pub max_decrease: f64,
}

impl FecResult {
    pub fn gap(&self) -> f64 {
        self.upper_certificate - self.value
    }
}

/// Holevo quantity of `{p_x, N_x(ρ)}`.
pub fn chi_of_encoding(rho: &DensityMatrix, e: &EncodingEnsemble) -> Result<f64> {
    check_dims(e.dim(), rho.dim())?;
    holevo_chi(&e.outputs(rho)?)
}

/// `Σ_x p_x D(N_x(ρ) ‖ ρ̄)`.
pub fn lemma1_value(rho: &DensityMatrix, e: &EncodingEnsemble) -> Result<f64> {
    check_dims(e.dim(), rho.dim())?;
    let cq = e.outputs(rho)?;
    let avg = cq.average()?;
    let mut total = 0.0;
    for (p, s) in cq.probs().iter().zip(cq.states()) {
        if *p == 0.0 {
            continue;
        }
        match relative_entropy(s, &avg)? {
            RelativeEntropy::Finite(d) => total += p * d,
            RelativeEntropy::Infinite => return Err(Error::SupportViolation),
        }
    }
    Ok(total)
}

/// Weight of an output outside the support of `ρ̄` that makes its divergence infinite.
const SUPPORT_LEAK: f64 = 1e-12;

struct Evaluation {
    value: f64,
    divergences: Vec<f64>,
    upper: f64,
    average: EigenDecomposition,
}

/// Achievable value and per-output divergences `D(ρ_x ‖ ρ̄_p)`.
fn evaluate(outputs: &[DensityMatrix], entropies: &[f64], p: &[f64]) -> Result<Evaluation> {
    let d = outputs[0].dim();
    let mut avg = ComplexMatrix::zeros(d);
    for (s, &w) in outputs.iter().zip(p) {
        avg = &avg + &s.matrix().scale(w);
    }
    let eig = hermitian_eig(&avg.hermitian_part(), EIG_TOL)?;
    let avg_entropy: f64 = -eig
        .eigenvalues
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| l * l.log2())
        .sum::<f64>();
    let mean_entropy: f64 = entropies.iter().zip(p).map(|(s, w)| s * w).sum();
    let vectors: Vec<_> = (0..d).map(|j| eig.eigenvector(j)).collect();

    let divergences: Vec<f64> = outputs
        .iter()
        .zip(entropies)
        .zip(p)
        .map(|((s, &ent), &w)| {
            let mut cross = 0.0;
            for (mu, v) in eig.eigenvalues.iter().zip(&vectors) {
                let weight = s.matrix().expectation(v);
                if *mu <= 0.0 {
                    if weight > SUPPORT_LEAK {
                        cross = f64::NEG_INFINITY;
                    }
                    continue;
                }
                cross += weight * mu.log2();
            }
            // ρ̄ ≥ p_x ρ_x, so D(ρ_x‖ρ̄) ≤ −log2 p_x
            (-ent - cross).clamp(0.0, -w.log2())
        })
        .collect();
    let value = (avg_entropy - mean_entropy).max(0.0);
    let upper = divergences.iter().cloned().fold(0.0, f64::max).max(value);
    Ok(Evaluation {
        value,
        divergences,
        upper,
        average: eig,
    })
}

/// Iterates before the first Newton attempt, and between attempts.
const POLISH_START: usize = 30;
const POLISH_EVERY: usize = 10;
/// Weights below this are dropped from the Newton system.
const ACTIVE_FLOOR: f64 = 1e-9;

/// `∂D(ρ_x‖ρ̄)/∂p_y = −Tr[ρ_x Dlog2(ρ̄)[ρ_y]]` for `x, y` in `active`.
///
/// Uses the divided differences of `ln` in the eigenbasis of `ρ̄`; needs `ρ̄ > 0`.
fn divergence_jacobian(outputs: &[DensityMatrix], active: &[usize], avg: &EigenDecomposition) -> Vec<Vec<f64>> {
    let lam = &avg.eigenvalues;
    let d = lam.len();
    let v = &avg.eigenvectors;
    let rotated: Vec<ComplexMatrix> = active
        .iter()
        .map(|&x| outputs[x].matrix().conjugate_by(&v.adjoint()))
        .collect();
    let mut gamma = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            let (a, b) = (lam[i], lam[j]);
            gamma[i * d + j] = if (a - b).abs() <= 1e-9 * a.max(b) {
                2.0 / (a + b)
            } else {
                (a.ln() - b.ln()) / (a - b)
            };
        }
    }
    let scale = -1.0 / std::f64::consts::LN_2;
    let m = active.len();
    let mut jac = vec![vec![0.0; m]; m];
    for x in 0..m {
        for y in x..m {
            let mut acc = 0.0;
            for i in 0..d {
                for j in 0..d {
                    acc += (rotated[x][(i, j)].conj() * rotated[y][(i, j)]).re * gamma[i * d + j];
                }
            }
            jac[x][y] = scale * acc;
            jac[y][x] = scale * acc;
        }
    }
    jac
}

/// Least-norm solution of the symmetric system `a z = b` through its spectrum.
fn symmetric_pinv_solve(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let m = b.len();
    if m > MAX_DIM {
        return None;
    }
    let mat = ComplexMatrix::from_fn(m, |i, j| Complex64::new(a[i][j], 0.0));
    let eig = hermitian_eig(&mat, EIG_TOL).ok()?;
    let scale = eig.eigenvalues.iter().fold(0.0f64, |acc, l| acc.max(l.abs()));
    let mut z = vec![0.0; m];
    for (k, &mu) in eig.eigenvalues.iter().enumerate() {
        if mu.abs() <= 1e-11 * scale {
            continue;
        }
        let vk = eig.eigenvector(k);
        let coeff: Complex64 = vk.iter().zip(b).map(|(v, &bi)| v.conj() * bi).sum::<Complex64>() / mu;
        for (zi, vi) in z.iter_mut().zip(&vk) {
            *zi += (coeff * vi).re;
        }
    }
    Some(z)
}

/// One Newton step on the conditions `D_x = C` for every weighted output and
/// `Σ p = 1`, damped to stay in the simplex. Returns the candidate weights.
fn newton_candidate(outputs: &[DensityMatrix], p: &[f64], eval: &Evaluation) -> Option<Vec<f64>> {
    if eval.average.eigenvalues[0] <= SUPPORT_EIGEN_FLOOR {
        return None;
    }
    let active: Vec<usize> = (0..p.len()).filter(|&x| p[x] > ACTIVE_FLOOR).collect();
    let m = active.len();
    let jac = divergence_jacobian(outputs, &active, &eval.average);
    // [[J, −1], [−1ᵀ, 0]] [Δp; ΔC] = −[D − C; 1 − Σp]
    let mut system = vec![vec![0.0; m + 1]; m + 1];
    let mut rhs = vec![0.0; m + 1];
    let total: f64 = active.iter().map(|&x| p[x]).sum();
    for (r, &x) in active.iter().enumerate() {
        system[r][..m].copy_from_slice(&jac[r]);
        system[r][m] = -1.0;
        system[m][r] = -1.0;
        rhs[r] = -(eval.divergences[x] - eval.value);
    }
    rhs[m] = total - 1.0;
    let step = symmetric_pinv_solve(&system, &rhs)?;
    let mut alpha = 1.0;
    for _ in 0..30 {
        let mut candidate = vec![0.0; p.len()];
        let mut ok = true;
        for (r, &x) in active.iter().enumerate() {
            let w = p[x] + alpha * step[r];
            if w.is_nan() || w < 0.0 {
                ok = false;
                break;
            }
            candidate[x] = w;
        }
        if ok {
            let z: f64 = candidate.iter().sum();
            if z > 0.0 {
                return Some(candidate.into_iter().map(|w| w / z).collect());
            }
        }
        alpha *= 0.5;
    }
    None
}

/// Maximizes the Holevo quantity of `{p_x, outputs[x]}` over `p`.
///
/// Starts from the uniform distribution and applies the multiplicative update
/// `p_x ← p_x 2^{D_x} / Z`. When the optimal weights form a flat face that
/// update is slow, so a Newton step on the active conditions is tried
/// periodically and kept only if it raises the value and shrinks the gap.
/// Stops once `upper − value ≤ tol` or after `max_iter` iterates.
/// Non-convergence is reported, not raised.
pub fn optimize_probabilities(outputs: &[DensityMatrix], tol: f64, max_iter: usize) -> Result<FecResult> {
    if outputs.is_empty() {
        return Err(Error::EmptyPool);
    }
    let d = outputs[0].dim();
    for s in outputs {
        check_dims(d, s.dim())?;
    }
    let n = outputs.len();
    let entropies: Vec<f64> = outputs.iter().map(von_neumann_entropy).collect();
    let mut p = vec![1.0 / n as f64; n];
    let mut eval = evaluate(outputs, &entropies, &p)?;
    let mut max_decrease = 0.0f64;
    let max_iter = max_iter.max(1);

    for iteration in 1..=max_iter {
        let converged = eval.upper - eval.value <= tol;
        if converged || iteration == max_iter {
            return Ok(FecResult {
                value: eval.value,
                upper_certificate: eval.upper,
                probs: p,
                iterations: iteration,
                converged,
                max_decrease,
            });
        }
        if iteration >= POLISH_START && iteration % POLISH_EVERY == 0 {
            if let Some(candidate) = newton_candidate(outputs, &p, &eval) {
                let next = evaluate(outputs, &entropies, &candidate)?;
                if next.value >= eval.value && next.upper - next.value < eval.upper - eval.value {
                    p = candidate;
                    eval = next;
                    continue;
                }
            }
        }
        let mut z = 0.0;
        for (w, dx) in p.iter_mut().zip(&eval.divergences) {
            *w *= (dx - eval.upper).exp2();
            z += *w;
        }
        for w in p.iter_mut() {
            *w /= z;
        }
        let next = evaluate(outputs, &entropies, &p)?;
        max_decrease = max_decrease.max(eval.value - next.value);
        eval = next;
    }
    unreachable!("loop returns on the last iterate")
}

/// Optimizes over a finite pool of free channels applied to `rho`.
///
/// Outputs within trace distance [`DEDUP_TRACE_DISTANCE`] are merged; the
/// weight of a merged group is reported on its first member.
///
/// Optimal ensembles are often not unique. Ties are broken towards the
/// shortest prefix of the pool whose optimum still certifies within `tol`
/// against every output, so earlier pool entries take precedence.
pub fn fec_over_pool(
    rho: &DensityMatrix,
    pool: &[KrausChannel],
    tol: f64,
    max_iter: usize,
) -> Result<FecResult> {
    if pool.is_empty() {
        return Err(Error::EmptyPool);
    }
    let outputs = pool.iter().map(|c| c.apply(rho)).collect::<Result<Vec<_>>>()?;
    let (unique, owner) = deduplicate(&outputs)?;
    let full = optimize_probabilities(&unique, tol, max_iter)?;
    let inner = shortest_prefix(&unique, full, tol, max_iter)?;
    let mut probs = vec![0.0; pool.len()];
    for (u, &idx) in owner.iter().enumerate() {
        probs[idx] = inner.probs[u];
    }
    Ok(FecResult { probs, ..inner })
}

/// Scans prefixes upwards for the first one whose optimum certifies against
/// all outputs; `full` is the fallback.
fn shortest_prefix(outputs: &[DensityMatrix], full: FecResult, tol: f64, max_iter: usize) -> Result<FecResult> {
    let n = outputs.len();
    let entropies: Vec<f64> = outputs.iter().map(von_neumann_entropy).collect();
    let mut iterations = full.iterations;
    let mut max_decrease = full.max_decrease;
    for k in 1..n {
        let part = optimize_probabilities(&outputs[..k], tol, max_iter)?;
        iterations += part.iterations;
        max_decrease = max_decrease.max(part.max_decrease);
        if !part.converged {
            continue;
        }
        let mut probs = part.probs;
        probs.resize(n, 0.0);
        let eval = evaluate(outputs, &entropies, &probs)?;
        if eval.upper - eval.value <= tol {
            return Ok(FecResult {
                value: eval.value,
                upper_certificate: eval.upper,
                probs,
                iterations,
                converged: true,
                max_decrease,
            });
        }
    }
    Ok(FecResult { iterations, max_decrease, ..full })
}

/// Distinct outputs plus, for each, the index of its first occurrence.
fn deduplicate(outputs: &[DensityMatrix]) -> Result<(Vec<DensityMatrix>, Vec<usize>)> {
    let mut unique: Vec<DensityMatrix> = Vec::new();
    let mut owner = Vec::new();
    'outer: for (i, s) in outputs.iter().enumerate() {
        for u in &unique {
            // trace distance is at least half the Frobenius distance
            if s.matrix().distance(u.matrix()) > 2.0 * DEDUP_TRACE_DISTANCE {
                continue;
            }
            if s.trace_distance(u)? <= DEDUP_TRACE_DISTANCE {
                continue 'outer;
            }
        }
        unique.push(s.clone());
        owner.push(i);
    }
    Ok((unique, owner))
}

/// `log2 d − S(ρ)`.
pub fn purity_closed_form(rho: &DensityMatrix) -> f64 {
    (rho.dim() as f64).log2() - von_neumann_entropy(rho)
}

/// Brute-force maximum of `χ({p, a}, {1 − p, b})` over a uniform grid in `p`.
pub fn two_output_grid_search(a: &DensityMatrix, b: &DensityMatrix, grid: usize) -> Result<(f64, f64)> {
    check_dims(a.dim(), b.dim())?;
    let grid = grid.max(2);
    let (sa, sb) = (von_neumann_entropy(a), von_neumann_entropy(b));
    let mut best = (0.0, f64::NEG_INFINITY);
    for i in 0..=grid {
        let p = i as f64 / grid as f64;
        let mix = DensityMatrix::mixture(&[p, 1.0 - p], &[a, b])?;
        let chi = von_neumann_entropy(&mix) - p * sa - (1.0 - p) * sb;
        if chi > best.1 {
            best = (p, chi);
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransformBoundReport {
    pub c_rho: f64,
    pub c_sigma: f64,
    pub bound: f64,
}

/// Capacities at or below this make the target effectively free.
pub const FREE_CAPACITY_FLOOR: f64 = 1e-9;

fn validated_pool(t: &ResourceTheory, pool: Vec<KrausChannel>) -> Result<Vec<KrausChannel>> {
    for (i, c) in pool.iter().enumerate() {
        if !is_free_channel(t, c, POOL_FREE_TOL)? {
            return Err(Error::NotFree(i));
        }
    }
    Ok(pool)
}

/// Upper bound `min{C(ρ)/C(σ), 1}` on the probability of reaching `σ` from `ρ`.
///
/// `pool_for` supplies the channel pool used for each state.
pub fn transformation_bound<F>(
    t: &ResourceTheory,
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    pool_for: F,
    tol: f64,
) -> Result<TransformBoundReport>
where
    F: Fn(&DensityMatrix) -> Result<Vec<KrausChannel>>,
{
    check_dims(rho.dim(), sigma.dim())?;
    check_dims(t.dim(), rho.dim())?;
    let c_rho = fec_over_pool(rho, &validated_pool(t, pool_for(rho)?)?, tol, DEFAULT_MAX_ITER)?.value;
    let c_sigma = fec_over_pool(sigma, &validated_pool(t, pool_for(sigma)?)?, tol, DEFAULT_MAX_ITER)?.value;
    Ok(TransformBoundReport {
        c_rho,
        c_sigma,
        bound: ratio_bound(c_rho, c_sigma),
    })
}

pub fn ratio_bound(c_rho: f64, c_sigma: f64) -> f64 {
    if c_sigma <= FREE_CAPACITY_FLOOR {
        1.0
    } else {
        (c_rho / c_sigma).min(1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchTerm {
    pub index: usize,
    pub probability: f64,
    pub capacity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrongMonotonicityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub branches: Vec<BranchTerm>,
}

impl StrongMonotonicityReport {
    pub fn margin(&self) -> f64 {
        self.lhs - self.rhs
    }
}

/// The free channel that keeps branch `L` and pins the rest of the input to `target`:
/// `ρ ↦ L ρ L† + Tr[(I − L†L) ρ] τ`.
pub fn heralded_branch_channel(l: &ComplexMatrix, target: &DensityMatrix) -> Result<KrausChannel> {
    let d = l.dim();
    let complement = &ComplexMatrix::identity(d) - &(&l.adjoint() * l);
    let root = spectral_apply(&complement, f64::sqrt, EIG_TOL)?;
    let pin = KrausChannel::pinning(target);
    let mut kraus = vec![l.clone()];
    kraus.extend(pin.kraus().iter().map(|k| k * &root));
    KrausChannel::new(kraus)
}

/// Compares `C(ρ)` against `Σ_k p_k C(σ_k)` for a stochastically free instrument.
///
/// The right side uses `pool_for(σ_k)` for each branch. The left side uses
/// `pool_for(ρ)` together with every branch pool composed after that branch:
/// `N ∘ U_k` when `L_k ∝ U_k` is unitary, otherwise `N` after the heralded
/// branch channel. Matched pools keep both sides comparable.
pub fn strong_monotonicity_report<F>(
    t: &ResourceTheory,
    rho: &DensityMatrix,
    inst: &StochasticFreeInstrument,
    pool_for: F,
    tol: f64,
) -> Result<StrongMonotonicityReport>
where
    F: Fn(&DensityMatrix) -> Result<Vec<KrausChannel>>,
{
    check_dims(t.dim(), rho.dim())?;
    check_dims(t.dim(), inst.dim())?;
    if !is_stochastically_free(t, inst, 1e-9)? {
        return Err(Error::NotStochasticallyFree);
    }
    let target = t.reference_free_state();
    let mut lhs_pool = pool_for(rho)?;
    let mut rhs = 0.0;
    let mut branches = Vec::new();
    for branch in inst.branches(rho)? {
        let pool = pool_for(&branch.state)?;
        let capacity = fec_over_pool(&branch.state, &pool, tol, DEFAULT_MAX_ITER)?.value;
        rhs += branch.probability * capacity;
        branches.push(BranchTerm {
            index: branch.index,
            probability: branch.probability,
            capacity,
        });
        let prefix = match inst.unitary_part(branch.index) {
            Some(u) => KrausChannel::unitary(u)?,
            None => heralded_branch_channel(&inst.kraus()[branch.index], &target)?,
        };
        for n in &pool {
            lhs_pool.push(KrausChannel::compose(n, &prefix)?);
        }
    }
    let lhs = fec_over_pool(rho, &lhs_pool, tol, DEFAULT_MAX_ITER)?.value;
    Ok(StrongMonotonicityReport { lhs, rhs, branches })
}

/// `q ↦ h((1+q)/2) − (1−q)`: the Holevo quantity of `{q: |0⟩⟨0|, 1−q: I/2}`.
pub fn activity_qubit_objective(q: f64) -> f64 {
    binary_entropy((1.0 + q) / 2.0).expect("q in [0, 1]") - (1.0 - q)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ActivityReference {
    pub q_star: f64,
    pub c_star: f64,
}

/// Maximizes [`activity_qubit_objective`]: dense grid, then golden-section refinement.
pub fn activity_qubit_reference(grid_size: usize) -> ActivityReference {
    let n = grid_size.max(1001);
    let step = 1.0 / (n - 1) as f64;
    let best = (0..n)
        .map(|i| i as f64 * step)
        .max_by(|a, b| activity_qubit_objective(*a).total_cmp(&activity_qubit_objective(*b)))
        .expect("nonempty grid");
    let (mut lo, mut hi) = ((best - step).max(0.0), (best + step).min(1.0));
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (activity_qubit_objective(x1), activity_qubit_objective(x2));
    while hi - lo > 1e-12 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = activity_qubit_objective(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = activity_qubit_objective(x1);
        }
    }
    let q_star = 0.5 * (lo + hi);
    ActivityReference {
        q_star,
        c_star: activity_qubit_objective(q_star),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{pauli, random_density_matrix, SeededRng};
    use crate::qcore::binary_entropy;
    use crate::theories::cyclic_twirl_unitaries;
    use num_complex::Complex64;

    fn h(p: f64) -> f64 {
        binary_entropy(p).unwrap()
    }

    fn plus() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::pure(&[Complex64::new(s, 0.0), Complex64::new(s, 0.0)]).unwrap()
    }

    fn pin(s: &DensityMatrix) -> KrausChannel {
        KrausChannel::pinning(s)
    }

    fn ground_mix_ensemble() -> EncodingEnsemble {
        EncodingEnsemble::new(
            vec![0.6, 0.4],
            vec![pin(&DensityMatrix::basis_state(2, 0)), pin(&DensityMatrix::maximally_mixed(2))],
        )
        .unwrap()
    }

    #[test]
    fn chi_examples() {
        let rho = DensityMatrix::new(random_density_matrix(2, &mut SeededRng::new(1))).unwrap();
        let z = KrausChannel::unitary(pauli::z()).unwrap();
        let same = EncodingEnsemble::uniform(vec![z.clone(), z]).unwrap();
        assert!(chi_of_encoding(&rho, &same).unwrap() < 1e-12);

        let diag = DensityMatrix::diagonal(&[0.9, 0.1]).unwrap();
        let twirl = EncodingEnsemble::uniform(cyclic_twirl_unitaries(&diag)).unwrap();
        let c = chi_of_encoding(&diag, &twirl).unwrap();
        assert!((c - (1.0 - h(0.9))).abs() < 1e-12);
        assert!((c - 0.531004).abs() < 1e-6);

        let c = chi_of_encoding(&rho, &ground_mix_ensemble()).unwrap();
        assert!((c - (h(0.8) - 0.4)).abs() < 1e-12);
    }

    #[test]
    fn relative_entropy_form_examples() {
        let rho = DensityMatrix::new(random_density_matrix(2, &mut SeededRng::new(2))).unwrap();
        let single = EncodingEnsemble::uniform(vec![KrausChannel::identity(2)]).unwrap();
        assert!(lemma1_value(&rho, &single).unwrap() < 1e-12);

        let orth = EncodingEnsemble::uniform(vec![
            pin(&DensityMatrix::basis_state(2, 0)),
            pin(&DensityMatrix::basis_state(2, 1)),
        ])
        .unwrap();
        assert!((lemma1_value(&rho, &orth).unwrap() - 1.0).abs() < 1e-12);
        assert!((lemma1_value(&rho, &ground_mix_ensemble()).unwrap() - 0.321928).abs() < 1e-6);
    }

    #[test]
    fn optimizer_examples() {
        let z0 = DensityMatrix::basis_state(2, 0);
        let z1 = DensityMatrix::basis_state(2, 1);
        let r = optimize_probabilities(&[z0.clone(), z1], 1e-9, 10_000).unwrap();
        assert!(r.converged);
        assert!((r.value - 1.0).abs() < 1e-9);
        assert!((r.probs[0] - 0.5).abs() < 1e-9);

        let r = optimize_probabilities(&[z0.clone(), DensityMatrix::maximally_mixed(2)], 1e-9, 10_000).unwrap();
        assert!(r.converged);
        assert!((r.probs[0] - 0.6).abs() < 1e-3, "{:?}", r.probs);
        assert!((r.value - 0.321928).abs() < 1e-6);
        assert!(r.max_decrease <= 1e-12);

        let r = optimize_probabilities(&[z0.clone(), plus()], 1e-9, 10_000).unwrap();
        let (p_grid, v_grid) = two_output_grid_search(&z0, &plus(), 20_000).unwrap();
        assert!((r.probs[0] - 0.5).abs() < 1e-4);
        assert!((p_grid - 0.5).abs() < 1e-4);
        assert!((r.value - v_grid).abs() < 1e-6);
        assert!((r.value - 0.600876).abs() < 1e-6);

        assert_eq!(optimize_probabilities(&[], 1e-9, 10), Err(Error::EmptyPool));
    }

    #[test]
    fn nonconvergence_is_reported() {
        let z0 = DensityMatrix::basis_state(2, 0);
        let r = optimize_probabilities(&[z0, DensityMatrix::maximally_mixed(2)], 1e-15, 3).unwrap();
        assert!(!r.converged);
        assert_eq!(r.iterations, 3);
        assert!(r.value <= r.upper_certificate);
    }

    #[test]
    fn pool_examples() {
        let diag = DensityMatrix::diagonal(&[0.9, 0.1]).unwrap();
        let r = fec_over_pool(&diag, &cyclic_twirl_unitaries(&diag), 1e-9, 10_000).unwrap();
        assert!((r.value - 0.531004).abs() < 1e-6);

        let z0 = DensityMatrix::basis_state(2, 0);
        let pool = vec![KrausChannel::identity(2), pin(&z0)];
        let r = fec_over_pool(&DensityMatrix::basis_state(2, 1), &pool, 1e-9, 10_000).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9);

        let r = fec_over_pool(&z0, &pool, 1e-9, 10_000).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.probs, vec![1.0, 0.0]);

        assert_eq!(fec_over_pool(&z0, &[], 1e-9, 10), Err(Error::EmptyPool));
        let pool3 = vec![KrausChannel::identity(3)];
        assert!(matches!(fec_over_pool(&z0, &pool3, 1e-9, 10), Err(Error::DimMismatch { .. })));
    }

    #[test]
    fn closed_form_examples() {
        assert!((purity_closed_form(&plus()) - 1.0).abs() < 1e-14);
        assert!(purity_closed_form(&DensityMatrix::maximally_mixed(3)).abs() < 1e-14);
        let diag = DensityMatrix::diagonal(&[0.9, 0.1]).unwrap();
        assert!((purity_closed_form(&diag) - 0.531004).abs() < 1e-6);
    }

    fn purity_pool(rho: &DensityMatrix) -> Result<Vec<KrausChannel>> {
        Ok(cyclic_twirl_unitaries(rho))
    }

    #[test]
    fn transformation_bound_examples() {
        let t = ResourceTheory::purity(2);
        let diag = DensityMatrix::diagonal(&[0.9, 0.1]).unwrap();
        let r = transformation_bound(&t, &plus(), &diag, purity_pool, 1e-10).unwrap();
        assert_eq!(r.bound, 1.0);
        let r = transformation_bound(&t, &diag, &plus(), purity_pool, 1e-10).unwrap();
        assert!((r.bound - 0.531004).abs() < 1e-6);
        let r = transformation_bound(&t, &diag, &diag, purity_pool, 1e-10).unwrap();
        assert!((r.bound - 1.0).abs() < 1e-9);

        let mixed = DensityMatrix::maximally_mixed(2);
        let r = transformation_bound(&t, &diag, &mixed, purity_pool, 1e-10).unwrap();
        assert_eq!(r.bound, 1.0);

        // pool containing a non-unital map
        let bad = |_: &DensityMatrix| Ok(vec![pin(&DensityMatrix::basis_state(2, 0))]);
        assert_eq!(transformation_bound(&t, &diag, &plus(), bad, 1e-9), Err(Error::NotFree(0)));
    }

    #[test]
    fn strong_monotonicity_examples() {
        let purity = ResourceTheory::purity(2);
        let rho = DensityMatrix::new(random_density_matrix(2, &mut SeededRng::new(4))).unwrap();

        let id = StochasticFreeInstrument::new(vec![ComplexMatrix::identity(2)]).unwrap();
        let r = strong_monotonicity_report(&purity, &rho, &id, purity_pool, 1e-10).unwrap();
        assert!((r.lhs - r.rhs).abs() < 1e-8);

        let half = std::f64::consts::FRAC_1_SQRT_2;
        let iz = StochasticFreeInstrument::new(vec![
            ComplexMatrix::identity(2).scale(half),
            pauli::z().scale(half),
        ])
        .unwrap();
        let r = strong_monotonicity_report(&purity, &rho, &iz, purity_pool, 1e-10).unwrap();
        assert!(r.lhs >= r.rhs - 1e-8);
        assert!((r.rhs - purity_closed_form(&rho)).abs() < 1e-8);

        let pointed = ResourceTheory::pointed(DensityMatrix::basis_state(2, 0));
        let dephase = StochasticFreeInstrument::new(vec![
            ComplexMatrix::diag(&[1.0, 0.0]),
            ComplexMatrix::diag(&[0.0, 1.0]),
        ])
        .unwrap();
        let z0 = DensityMatrix::basis_state(2, 0);
        let pointed_pool = |_: &DensityMatrix| Ok(vec![KrausChannel::identity(2), pin(&z0)]);
        let r = strong_monotonicity_report(&pointed, &plus(), &dephase, pointed_pool, 1e-10).unwrap();
        // branches |0⟩ (capacity 0) and |1⟩ (capacity 1), each with probability 1/2
        assert!((r.rhs - 0.5).abs() < 1e-9);
        assert!(r.lhs >= r.rhs - 1e-8);

        assert_eq!(
            strong_monotonicity_report(&purity, &rho, &dephase, purity_pool, 1e-10).unwrap_err(),
            Error::NotStochasticallyFree
        );
    }

    #[test]
    fn heralded_branch_is_free() {
        let pointed = ResourceTheory::pointed(DensityMatrix::basis_state(2, 0));
        let l = ComplexMatrix::diag(&[0.6, 0.8]);
        let c = heralded_branch_channel(&l, &DensityMatrix::basis_state(2, 0)).unwrap();
        assert!(is_free_channel(&pointed, &c, 1e-9).unwrap());
    }

    #[test]
    fn activity_reference_examples() {
        let r = activity_qubit_reference(10_001);
        assert!((r.q_star - 0.6).abs() < 1e-4);
        assert!((r.c_star - (h(0.8) - 0.4)).abs() < 1e-9);
        assert!(activity_qubit_objective(0.0).abs() < 1e-15);
        assert!(activity_qubit_objective(1.0).abs() < 1e-15);
    }
}
