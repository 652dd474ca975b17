use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{basis_vector, hermitian_eig, ComplexMatrix, EigenDecomposition, EIG_TOL};

/// Validation tolerance for Hermiticity (scaled by `d`), positivity and trace.
pub const STATE_TOL: f64 = 1e-10;

/// A `d×d` Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    eig: OnceLock<EigenDecomposition>,
}

impl PartialEq for DensityMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.mat == other.mat
    }
}

impl DensityMatrix {
    /// Validates `mat` and stores its Hermitian part.
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        let d = mat.dim();
        if !mat.is_finite() {
            return Err(Error::NonFinite);
        }
        if mat.hermiticity_defect() > STATE_TOL * d as f64 {
            return Err(Error::InvalidState("Hermitian"));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidState("unit trace"));
        }
        let mat = mat.hermitian_part();
        let eig = hermitian_eig(&mat, EIG_TOL)?;
        if eig.eigenvalues[0] < -STATE_TOL {
            return Err(Error::InvalidState("positive semidefinite"));
        }
        let cell = OnceLock::new();
        let _ = cell.set(eig);
        Ok(Self { mat, eig: cell })
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalized) nonzero vector.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let n = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidState("nonzero state vector"));
        }
        let v: Vec<Complex64> = psi.iter().map(|z| z / n).collect();
        Self::new(ComplexMatrix::projector(&v))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self::new(ComplexMatrix::identity(d).scale(1.0 / d as f64)).expect("I/d is a state")
    }

    pub fn basis_state(d: usize, k: usize) -> Self {
        Self::pure(&basis_vector(d, k)).expect("basis vector is a state")
    }

    /// Diagonal state with the given populations.
    pub fn diagonal(populations: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::diag(populations))
    }

    /// `Σ_k w_k ρ_k`; weights must form a probability vector.
    pub fn mixture(weights: &[f64], states: &[&DensityMatrix]) -> Result<Self> {
        if weights.len() != states.len() || states.is_empty() {
            return Err(Error::InvalidDistribution("one weight per state"));
        }
        let d = states[0].dim();
        let mut acc = ComplexMatrix::zeros(d);
        for (w, s) in weights.iter().zip(states) {
            if s.dim() != d {
                return Err(Error::DimMismatch {
                    expected: d,
                    found: s.dim(),
                });
            }
            acc = &acc + &s.mat.scale(*w);
        }
        Self::new(acc)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn eigen(&self) -> &EigenDecomposition {
        self.eig
            .get_or_init(|| hermitian_eig(&self.mat, EIG_TOL).expect("validated state diagonalizes"))
    }

    /// Eigenvalues clipped to `[0, ∞)`, ascending.
    pub fn spectrum(&self) -> Vec<f64> {
        self.eigen().eigenvalues.iter().map(|&l| l.max(0.0)).collect()
    }

    /// `½‖ρ − σ‖₁`.
    pub fn trace_distance(&self, other: &Self) -> Result<f64> {
        check_dims(self.dim(), other.dim())?;
        let diff = &self.mat - &other.mat;
        let eig = hermitian_eig(&diff, EIG_TOL)?;
        Ok(0.5 * eig.eigenvalues.iter().map(|l| l.abs()).sum::<f64>())
    }

    /// `U ρ U†`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<Self> {
        check_dims(self.dim(), u.dim())?;
        Self::new(self.mat.conjugate_by(u))
    }

    /// `Tr(ρ A)`, real part.
    pub fn expectation(&self, a: &ComplexMatrix) -> f64 {
        self.mat.trace_product(a).re
    }
}

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimMismatch { expected, found })
    }
}
