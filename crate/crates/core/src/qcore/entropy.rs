//! Entropic functionals, all in bits.

use super::ensemble::CqEnsemble;
use super::state::{check_dims, DensityMatrix};
use crate::error::{Error, Result};

/// Eigenvalues of the second argument below this are treated as outside its support.
pub const SUPPORT_EIGEN_FLOOR: f64 = 1e-12;
/// Weight of the first argument on that null space beyond which `D = +∞`.
pub const SUPPORT_WEIGHT_TOL: f64 = 1e-10;

/// Quantum relative entropy, either finite or `+∞` on a support violation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RelativeEntropy {
    Finite(f64),
    Infinite,
}

impl RelativeEntropy {
    pub fn is_finite(self) -> bool {
        matches!(self, RelativeEntropy::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            RelativeEntropy::Finite(v) => Some(v),
            RelativeEntropy::Infinite => None,
        }
    }
}

/// `x log2 x` with `0 log 0 = 0`.
fn xlog2x(x: f64) -> f64 {
    if x > 0.0 {
        x * x.log2()
    } else {
        0.0
    }
}

pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    let s: f64 = -rho.spectrum().iter().map(|&l| xlog2x(l)).sum::<f64>();
    s.max(0.0)
}

/// `D(ρ‖σ) = Tr ρ log2 ρ − Tr ρ log2 σ`, evaluated in the eigenbasis of `σ`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<RelativeEntropy> {
    check_dims(rho.dim(), sigma.dim())?;
    let eig = sigma.eigen();
    let mut cross = 0.0;
    for (j, &mu) in eig.eigenvalues.iter().enumerate() {
        let w = rho.matrix().expectation(&eig.eigenvector(j));
        if mu < SUPPORT_EIGEN_FLOOR {
            if w > SUPPORT_WEIGHT_TOL {
                return Ok(RelativeEntropy::Infinite);
            }
            continue;
        }
        cross += w * mu.log2();
    }
    let d = -von_neumann_entropy(rho) - cross;
    Ok(RelativeEntropy::Finite(d.max(0.0)))
}

/// `S(Σ p_x ρ_x) − Σ p_x S(ρ_x)`.
pub fn holevo_chi(e: &CqEnsemble) -> Result<f64> {
    let avg = e.average()?;
    let mean_entropy: f64 = e
        .probs()
        .iter()
        .zip(e.states())
        .map(|(p, s)| p * von_neumann_entropy(s))
        .sum();
    Ok((von_neumann_entropy(&avg) - mean_entropy).max(0.0))
}

/// Shannon entropy of a probability vector.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    if p.is_empty() || p.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::InvalidDistribution("entries must be finite and nonnegative"));
    }
    if (p.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidDistribution("entries must sum to 1"));
    }
    Ok(-p.iter().map(|&x| xlog2x(x)).sum::<f64>())
}

/// `h(p) = H(p, 1 − p)`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidDistribution("binary probability outside [0, 1]"));
    }
    Ok(-xlog2x(p) - xlog2x(1.0 - p))
}
