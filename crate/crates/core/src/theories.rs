//! Resource-theory descriptors: free states, free channels, stochastically
//! free instruments and default pools of extreme free channels.
//!
//! Free-channel membership is decided on the extreme points of the free set.
//! Channels are linear and every free set here is convex, so preserving the
//! extreme points is equivalent to preserving the whole set.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{haar_random_unitary, hermitian_eig, pauli, ComplexMatrix, SeededRng, EIG_TOL};
use crate::qcore::{check_dims, completeness_defect, DensityMatrix, Hamiltonian, KrausChannel, CHANNEL_TOL};

/// Tolerance used when checking that generated pool channels are free.
pub const POOL_FREE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub enum TheoryKind {
    /// Free state `I/d`; free operations are the unital channels.
    Purity,
    /// Free states are the passive states of the Hamiltonian.
    Activity(Hamiltonian),
    /// A single free state.
    Pointed(DensityMatrix),
    /// Free states are the mixtures of an orthonormal basis (diagonal in it).
    BasisContaining(ComplexMatrix),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResourceTheory {
    kind: TheoryKind,
    dim: usize,
}

impl ResourceTheory {
    pub fn purity(dim: usize) -> Self {
        Self {
            kind: TheoryKind::Purity,
            dim,
        }
    }

    pub fn activity(h: Hamiltonian) -> Self {
        let dim = h.dim();
        Self {
            kind: TheoryKind::Activity(h),
            dim,
        }
    }

    pub fn pointed(free_state: DensityMatrix) -> Self {
        let dim = free_state.dim();
        Self {
            kind: TheoryKind::Pointed(free_state),
            dim,
        }
    }

    /// Basis vectors are given as the columns of `basis`.
    pub fn basis_containing(basis: ComplexMatrix) -> Result<Self> {
        let d = basis.dim();
        if (&basis.adjoint() * &basis).distance(&ComplexMatrix::identity(d)) > 1e-10 {
            return Err(Error::InvalidTheory("basis must be orthonormal"));
        }
        Ok(Self {
            kind: TheoryKind::BasisContaining(basis),
            dim: d,
        })
    }

    pub fn computational_basis(dim: usize) -> Self {
        Self::basis_containing(ComplexMatrix::identity(dim)).expect("identity is orthonormal")
    }

    pub fn kind(&self) -> &TheoryKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            TheoryKind::Purity => "purity",
            TheoryKind::Activity(_) => "activity",
            TheoryKind::Pointed(_) => "pointed",
            TheoryKind::BasisContaining(_) => "basis",
        }
    }

    /// A free state that the theory's pinning map targets.
    pub fn reference_free_state(&self) -> DensityMatrix {
        match &self.kind {
            TheoryKind::Purity => DensityMatrix::maximally_mixed(self.dim),
            TheoryKind::Pointed(s) => s.clone(),
            TheoryKind::Activity(h) => {
                DensityMatrix::pure(&h.basis().column(0)).expect("energy eigenvector")
            }
            TheoryKind::BasisContaining(b) => DensityMatrix::pure(&b.column(0)).expect("basis vector"),
        }
    }
}

/// Free-set membership at tolerance `tol`.
pub fn is_free_state(t: &ResourceTheory, rho: &DensityMatrix, tol: f64) -> Result<bool> {
    check_dims(t.dim, rho.dim())?;
    Ok(match &t.kind {
        TheoryKind::Purity => {
            rho.matrix().distance(DensityMatrix::maximally_mixed(t.dim).matrix()) <= tol
        }
        TheoryKind::Pointed(sigma) => rho.matrix().distance(sigma.matrix()) <= tol,
        TheoryKind::Activity(h) => {
            let m = h.to_energy_basis(rho.matrix());
            max_off_diagonal(&m) <= tol
                && (1..t.dim).all(|i| m[(i, i)].re <= m[(i - 1, i - 1)].re + tol)
        }
        TheoryKind::BasisContaining(b) => {
            max_off_diagonal(&rho.matrix().conjugate_by(&b.adjoint())) <= tol
        }
    })
}

fn max_off_diagonal(m: &ComplexMatrix) -> f64 {
    let d = m.dim();
    let mut worst = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                worst = worst.max(m[(i, j)].norm());
            }
        }
    }
    worst
}

/// Extreme points of the free set.
pub fn free_extreme_states(t: &ResourceTheory) -> Vec<DensityMatrix> {
    let d = t.dim;
    match &t.kind {
        TheoryKind::Purity => vec![DensityMatrix::maximally_mixed(d)],
        TheoryKind::Pointed(s) => vec![s.clone()],
        TheoryKind::Activity(h) => (1..=d)
            .map(|k| {
                let pops: Vec<f64> = (0..d).map(|i| if i < k { 1.0 / k as f64 } else { 0.0 }).collect();
                DensityMatrix::new(h.from_energy_basis(&ComplexMatrix::diag(&pops)))
                    .expect("uniform mixture of lowest levels")
            })
            .collect(),
        TheoryKind::BasisContaining(b) => (0..d)
            .map(|k| DensityMatrix::pure(&b.column(k)).expect("basis vector"))
            .collect(),
    }
}

/// True iff `n` maps every extreme free state into the free set.
pub fn is_free_channel(t: &ResourceTheory, n: &KrausChannel, tol: f64) -> Result<bool> {
    check_dims(t.dim, n.dim())?;
    for sigma in free_extreme_states(t) {
        if !is_free_state(t, &n.apply(&sigma)?, tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A complete list of (possibly trace-decreasing) Kraus branches `L_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticFreeInstrument {
    kraus: Vec<ComplexMatrix>,
}

/// One outcome of an instrument on a state: `p_k = Tr(L_k ρ L_k†)`, `σ_k = L_k ρ L_k† / p_k`.
#[derive(Debug, Clone)]
pub struct Branch {
    pub index: usize,
    pub probability: f64,
    pub state: DensityMatrix,
}

/// Branches with probability at or below this are dropped.
pub const BRANCH_FLOOR: f64 = 1e-12;

impl StochasticFreeInstrument {
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let d = kraus.first().ok_or(Error::InvalidChannel("no Kraus operators"))?.dim();
        for k in &kraus {
            check_dims(d, k.dim())?;
        }
        if completeness_defect(&kraus) > CHANNEL_TOL * d as f64 {
            return Err(Error::InvalidChannel("completeness"));
        }
        Ok(Self { kraus })
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn dim(&self) -> usize {
        self.kraus[0].dim()
    }

    /// The channel obtained by forgetting the outcome.
    pub fn channel(&self) -> KrausChannel {
        KrausChannel::new(self.kraus.clone()).expect("instrument is complete")
    }

    pub fn branches(&self, rho: &DensityMatrix) -> Result<Vec<Branch>> {
        check_dims(self.dim(), rho.dim())?;
        let mut out = Vec::new();
        for (index, l) in self.kraus.iter().enumerate() {
            let unnormalized = rho.matrix().conjugate_by(l);
            let probability = unnormalized.trace().re;
            if probability <= BRANCH_FLOOR {
                continue;
            }
            out.push(Branch {
                index,
                probability,
                state: DensityMatrix::new(unnormalized.scale(1.0 / probability))?,
            });
        }
        Ok(out)
    }

    /// `Some(U)` when `L_k = c U` with `U` unitary.
    pub fn unitary_part(&self, k: usize) -> Option<ComplexMatrix> {
        let l = &self.kraus[k];
        let d = l.dim();
        let gram = &l.adjoint() * l;
        let c2 = gram.trace().re / d as f64;
        if c2 <= BRANCH_FLOOR {
            return None;
        }
        if gram.distance(&ComplexMatrix::identity(d).scale(c2)) > 1e-10 * d as f64 {
            return None;
        }
        Some(l.scale(1.0 / c2.sqrt()))
    }
}

/// Every branch sends each extreme free state to a free state or to (almost) nothing.
pub fn is_stochastically_free(
    t: &ResourceTheory,
    inst: &StochasticFreeInstrument,
    tol: f64,
) -> Result<bool> {
    check_dims(t.dim, inst.dim())?;
    for sigma in free_extreme_states(t) {
        for l in inst.kraus() {
            let out = sigma.matrix().conjugate_by(l);
            let p = out.trace().re;
            if p <= tol {
                continue;
            }
            let normalized = DensityMatrix::new(out.scale(1.0 / p))?;
            if !is_free_state(t, &normalized, tol)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Powers of the cyclic shift of `rho`'s eigenbasis, `|ψ_i⟩ ↦ |ψ_{i+1 mod d}⟩`.
///
/// Their uniform mixture maps `rho` to `I/d`.
pub fn cyclic_twirl_unitaries(rho: &DensityMatrix) -> Vec<KrausChannel> {
    let d = rho.dim();
    let v = &rho.eigen().eigenvectors;
    let shift = ComplexMatrix::from_fn(d, |i, j| if i == (j + 1) % d { one() } else { zero() });
    // S_ψ = V S V†
    let s = shift.conjugate_by(v);
    let mut out = Vec::with_capacity(d);
    let mut power = ComplexMatrix::identity(d);
    for _ in 0..d {
        out.push(KrausChannel::unitary(power.clone()).expect("permutation in an orthonormal basis"));
        power = &s * &power;
    }
    out
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Default pool of extreme free channels for encoding `rho`.
///
/// - purity: cyclic twirl of `rho`'s eigenbasis plus `n_random` Haar unitaries;
/// - pointed: identity, pinning to the free state, and `n_random` random
///   unitaries acting within the eigenspaces of the free state;
/// - activity (qubits only): identity, `Z`, pinning to the ground state,
///   pinning to `I/2`, and the bit-flip channel, all in the energy basis;
/// - basis-containing: the `d` pinning maps to the basis projectors.
///
/// Pool membership does not depend on `rho` except for purity.
pub fn default_channel_pool(
    t: &ResourceTheory,
    rho: &DensityMatrix,
    n_random: usize,
    rng: &mut SeededRng,
) -> Result<Vec<KrausChannel>> {
    check_dims(t.dim, rho.dim())?;
    let d = t.dim;
    let pool = match &t.kind {
        TheoryKind::Purity => {
            let mut pool = cyclic_twirl_unitaries(rho);
            for _ in 0..n_random {
                pool.push(KrausChannel::unitary(haar_random_unitary(d, rng))?);
            }
            pool
        }
        TheoryKind::Pointed(sigma) => {
            let mut pool = vec![KrausChannel::identity(d), KrausChannel::pinning(sigma)];
            for _ in 0..n_random {
                let candidate = KrausChannel::unitary(commutant_unitary(sigma, rng))?;
                if is_free_channel(t, &candidate, POOL_FREE_TOL)? {
                    pool.push(candidate);
                }
            }
            pool
        }
        TheoryKind::Activity(h) => {
            if d != 2 {
                return Err(Error::UnsupportedDim(d));
            }
            activity_qubit_dictionary(h)
                .into_iter()
                .map(|(_, c)| c)
                .collect()
        }
        TheoryKind::BasisContaining(b) => (0..d)
            .map(|k| KrausChannel::pinning(&DensityMatrix::pure(&b.column(k)).expect("basis vector")))
            .collect(),
    };
    Ok(pool)
}

/// The named qubit channels that preserve passivity: identity, `Z`, pin to the
/// ground state, pin to `I/2`, and bit flip `(ρ + XρX)/2`, in the energy basis.
pub fn activity_qubit_dictionary(h: &Hamiltonian) -> Vec<(&'static str, KrausChannel)> {
    let b = h.basis();
    let z = pauli::z().conjugate_by(b);
    let x = pauli::x().conjugate_by(b);
    let ground = DensityMatrix::pure(&b.column(0)).expect("energy eigenvector");
    let half = std::f64::consts::FRAC_1_SQRT_2;
    vec![
        ("identity", KrausChannel::identity(2)),
        ("z", KrausChannel::unitary(z).expect("Pauli Z is unitary")),
        ("pin-ground", KrausChannel::pinning(&ground)),
        ("pin-mixed", KrausChannel::pinning(&DensityMatrix::maximally_mixed(2))),
        (
            "bit-flip",
            KrausChannel::new(vec![ComplexMatrix::identity(2).scale(half), x.scale(half)])
                .expect("bit flip is complete"),
        ),
    ]
}

/// Random unitary that commutes with `sigma`: Haar within each eigenspace.
pub fn commutant_unitary(sigma: &DensityMatrix, rng: &mut SeededRng) -> ComplexMatrix {
    let d = sigma.dim();
    let eig = sigma.eigen();
    let mut block_diag = ComplexMatrix::zeros(d);
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && (eig.eigenvalues[end] - eig.eigenvalues[start]).abs() <= 1e-10 {
            end += 1;
        }
        let u = haar_random_unitary(end - start, rng);
        for i in start..end {
            for j in start..end {
                block_diag[(i, j)] = u[(i - start, j - start)];
            }
        }
        start = end;
    }
    block_diag.conjugate_by(&eig.eigenvectors)
}

/// Whether `a` is numerically unitary.
pub fn is_unitary(a: &ComplexMatrix, tol: f64) -> bool {
    (&a.adjoint() * a).distance(&ComplexMatrix::identity(a.dim())) <= tol
}

/// Hamiltonian from a Hermitian matrix; degenerate spectra are rejected.
pub fn hamiltonian_from_matrix(h: &ComplexMatrix) -> Result<Hamiltonian> {
    let eig = hermitian_eig(h, EIG_TOL)?;
    Hamiltonian::new(eig.eigenvalues.clone(), eig.eigenvectors.clone())
}
