use num_complex::Complex64;

use super::matrix::{ComplexMatrix, MAX_DIM};
use crate::error::{Error, Result};

/// Off-diagonal Frobenius threshold, relative to `max(1, ‖A‖_F)`.
const OFF_DIAGONAL_TOL: f64 = 1e-12;

/// Eigenvalues below zero but above this are treated as round-off and clipped to 0.
pub const CLIP_TOL: f64 = 1e-10;

/// Spectral decomposition `A = V diag(λ) V†` of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Columns are the orthonormal eigenvectors, in eigenvalue order.
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k)
    }

    /// `V diag(f(λ)) V†` for the given already-mapped eigenvalues.
    pub fn recombine(&self, values: &[f64]) -> ComplexMatrix {
        let d = self.dim();
        let v = &self.eigenvectors;
        ComplexMatrix::from_fn(d, |i, j| {
            (0..d)
                .map(|k| v[(i, k)] * v[(j, k)].conj() * values[k])
                .sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.recombine(&self.eigenvalues)
    }
}

/// Diagonalizes a Hermitian matrix with cyclic complex Jacobi rotations.
///
/// Fails with `NotHermitian` when `‖A − A†‖_F > tol`. The Hermitian part of the
/// input is what gets diagonalized.
pub fn hermitian_eig(a: &ComplexMatrix, tol: f64) -> Result<EigenDecomposition> {
    let d = a.dim();
    if d == 0 || d > MAX_DIM {
        return Err(Error::UnsupportedDimension(d));
    }
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let defect = a.hermiticity_defect();
    if defect > tol {
        return Err(Error::NotHermitian(defect));
    }

    let mut m = a.hermitian_part();
    for i in 0..d {
        m[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
    }
    let mut v = ComplexMatrix::identity(d);
    let threshold = OFF_DIAGONAL_TOL * m.frobenius_norm().max(1.0);
    let max_rotations = 100 * d * d;
    let mut rotations = 0usize;

    loop {
        let off = off_diagonal_norm(&m);
        if off <= threshold {
            break;
        }
        if rotations >= max_rotations {
            return Err(Error::NoConvergence {
                off_norm: off,
                rotations,
            });
        }
        for p in 0..d {
            for q in (p + 1)..d {
                let apq = m[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                rotate(&mut m, &mut v, p, q, apq, mag);
                rotations += 1;
            }
        }
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let eigenvalues = order.iter().map(|&k| m[(k, k)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(d, |i, j| v[(i, order[j])]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let d = m.dim();
    let mut acc = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                acc += m[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Annihilates `m[p][q]` with `J = diag(1, ē) · R(θ)` on the (p, q) plane, where
/// `e = m[p][q] / |m[p][q]|`, and accumulates `V ← V J`.
fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, apq: Complex64, mag: f64) {
    let d = m.dim();
    let phase = apq / mag;
    let theta = (m[(q, q)].re - m[(p, p)].re) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let j_pp = Complex64::new(c, 0.0);
    let j_pq = Complex64::new(s, 0.0);
    let j_qp = -phase.conj() * s;
    let j_qq = phase.conj() * c;

    for k in 0..d {
        let akp = m[(k, p)];
        let akq = m[(k, q)];
        m[(k, p)] = akp * j_pp + akq * j_qp;
        m[(k, q)] = akp * j_pq + akq * j_qq;
    }
    for k in 0..d {
        let apk = m[(p, k)];
        let aqk = m[(q, k)];
        m[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
        m[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
    }
    m[(p, q)] = Complex64::new(0.0, 0.0);
    m[(q, p)] = Complex64::new(0.0, 0.0);
    m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);

    for k in 0..d {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * j_pp + vkq * j_qp;
        v[(k, q)] = vkp * j_pq + vkq * j_qq;
    }
}

/// Clips eigenvalues in `[-CLIP_TOL, 0)` to zero; anything lower is a domain error.
pub fn clip_eigenvalue(lambda: f64) -> Result<f64> {
    if lambda >= 0.0 {
        Ok(lambda)
    } else if lambda >= -CLIP_TOL {
        Ok(0.0)
    } else {
        Err(Error::DomainError(lambda))
    }
}

/// `V diag(f(λ)) V†` for a positive semidefinite Hermitian `a`.
pub fn spectral_apply(a: &ComplexMatrix, f: impl Fn(f64) -> f64, tol: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(a, tol)?;
    let mapped = eig
        .eigenvalues
        .iter()
        .map(|&l| {
            let x = clip_eigenvalue(l)?;
            let y = f(x);
            if y.is_finite() {
                Ok(y)
            } else {
                Err(Error::DomainError(x))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(eig.recombine(&mapped))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::pauli;

    #[test]
    fn diagonal_input() {
        let eig = hermitian_eig(&ComplexMatrix::diag(&[3.0, 1.0, 2.0]), 1e-12).unwrap();
        assert_eq!(eig.eigenvalues, vec![1.0, 2.0, 3.0]);
        // columns are the permuted identity: (e1, e2, e0)
        let expected = [1usize, 2, 0];
        for (col, &row) in expected.iter().enumerate() {
            assert!((eig.eigenvectors[(row, col)].norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn pauli_spectra() {
        for p in [pauli::x(), pauli::y(), pauli::z()] {
            let eig = hermitian_eig(&p, 1e-12).unwrap();
            assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-12);
            assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut a = ComplexMatrix::identity(2);
        a[(0, 1)] = Complex64::new(1.0, 0.0);
        assert!(matches!(hermitian_eig(&a, 1e-10), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn spectral_examples() {
        let log2 = |x: f64| x.log2();
        let z = spectral_apply(&ComplexMatrix::identity(3), log2, 1e-12).unwrap();
        assert!(z.frobenius_norm() < 1e-15);

        let r = spectral_apply(&ComplexMatrix::diag(&[4.0, 1.0]), f64::sqrt, 1e-12).unwrap();
        assert!(r.distance(&ComplexMatrix::diag(&[2.0, 1.0])) < 1e-14);

        let l = spectral_apply(&ComplexMatrix::diag(&[0.5, 0.5]), log2, 1e-12).unwrap();
        assert!(l.distance(&ComplexMatrix::diag(&[-1.0, -1.0])) < 1e-14);
    }

    #[test]
    fn clipping_and_domain() {
        let small_negative = ComplexMatrix::diag(&[1.0, -1e-12]);
        let r = spectral_apply(&small_negative, f64::sqrt, 1e-12).unwrap();
        assert!(r.distance(&ComplexMatrix::diag(&[1.0, 0.0])) < 1e-14);

        let negative = ComplexMatrix::diag(&[1.0, -1e-3]);
        assert!(matches!(
            spectral_apply(&negative, f64::sqrt, 1e-12),
            Err(Error::DomainError(_))
        ));
        // log2(0) is -inf
        assert!(matches!(
            spectral_apply(&ComplexMatrix::diag(&[1.0, 0.0]), f64::log2, 1e-12),
            Err(Error::DomainError(_))
        ));
    }

    #[test]
    fn degenerate_and_complex() {
        let mut a = ComplexMatrix::identity(3);
        a[(0, 2)] = Complex64::new(0.0, 0.5);
        a[(2, 0)] = Complex64::new(0.0, -0.5);
        let eig = hermitian_eig(&a, 1e-12).unwrap();
        assert!(eig.reconstruct().distance(&a) < 1e-13);
        assert!((eig.eigenvalues[0] - 0.5).abs() < 1e-13);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-13);
        assert!((eig.eigenvalues[2] - 1.5).abs() < 1e-13);
    }
}
