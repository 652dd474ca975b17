//! Seeded random sampling.
//!
//! The generator is ChaCha8 (counter-based) seeded from a 64-bit value through
//! `rand_chacha::ChaCha8Rng::seed_from_u64`. Uniform doubles use the top 53
//! bits of each 64-bit output; normal deviates come from Box–Muller on that
//! uniform stream. Sub-generators are derived from `(seed, name, index)` by
//! SHA-256, so every component of a run is reproducible in isolation.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use super::matrix::ComplexMatrix;

#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    inner: ChaCha8Rng,
    spare_normal: Option<f64>,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
            spare_normal: None,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Stable sub-seed for a named component and trial index.
    pub fn derive_seed(seed: u64, component: &str, index: u64) -> u64 {
        let mut h = Sha256::new();
        h.update(seed.to_le_bytes());
        h.update((component.len() as u64).to_le_bytes());
        h.update(component.as_bytes());
        h.update(index.to_le_bytes());
        let digest = h.finalize();
        u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
    }

    pub fn derive(seed: u64, component: &str, index: u64) -> Self {
        Self::new(Self::derive_seed(seed, component, index))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `0..n`.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0);
        ((self.uniform() * n as f64) as usize).min(n - 1)
    }

    /// Standard normal deviate (Box–Muller).
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        // 1 - u lies in (0, 1], so the log is finite
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (2.0 * PI * u2).sin_cos();
        self.spare_normal = Some(r * s);
        r * c
    }

    /// Complex normal with `E|z|² = 1`.
    pub fn complex_normal(&mut self) -> Complex64 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Complex64::new(self.normal() * s, self.normal() * s)
    }

    /// Uniform point on the probability simplex of size `n`.
    pub fn simplex(&mut self, n: usize) -> Vec<f64> {
        let w: Vec<f64> = (0..n).map(|_| -(1.0 - self.uniform()).ln() + 1e-300).collect();
        let total: f64 = w.iter().sum();
        w.into_iter().map(|x| x / total).collect()
    }
}

/// Matrix of independent standard complex normals.
pub fn ginibre(d: usize, rng: &mut SeededRng) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, |_, _| rng.complex_normal())
}

/// Haar-distributed unitary: Gram–Schmidt on a Ginibre matrix, which leaves the
/// triangular factor with a positive real diagonal.
pub fn haar_random_unitary(d: usize, rng: &mut SeededRng) -> ComplexMatrix {
    assert!(d >= 1, "dimension must be positive");
    let g = ginibre(d, rng);
    let mut cols: Vec<Vec<Complex64>> = (0..d).map(|j| g.column(j)).collect();
    for j in 0..d {
        // two passes of modified Gram–Schmidt keep the columns orthogonal to round-off
        for _ in 0..2 {
            for k in 0..j {
                let (done, rest) = cols.split_at_mut(j);
                let qk = &done[k];
                let cj = &mut rest[0];
                let proj: Complex64 = qk.iter().zip(cj.iter()).map(|(a, b)| a.conj() * b).sum();
                for (x, q) in cj.iter_mut().zip(qk) {
                    *x -= proj * q;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for x in cols[j].iter_mut() {
            *x /= norm;
        }
    }
    ComplexMatrix::from_fn(d, |i, j| cols[j][i])
}

/// `G G† / Tr(G G†)` with `G` Ginibre.
pub fn random_density_matrix(d: usize, rng: &mut SeededRng) -> ComplexMatrix {
    assert!(d >= 1, "dimension must be positive");
    let g = ginibre(d, rng);
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    w.hermitian_part().scale(1.0 / tr)
}

/// `(G + G†) / 2` with `G` Ginibre.
pub fn random_hermitian(d: usize, rng: &mut SeededRng) -> ComplexMatrix {
    ginibre(d, rng).hermitian_part()
}

/// Haar-random unit vector.
pub fn random_unit_vector(d: usize, rng: &mut SeededRng) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..d).map(|_| rng.complex_normal()).collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eig;

    fn unitarity_residual(u: &ComplexMatrix) -> f64 {
        (&u.adjoint() * u).distance(&ComplexMatrix::identity(u.dim()))
    }

    #[test]
    fn haar_scalar_has_unit_modulus() {
        let mut rng = SeededRng::new(1);
        let u = haar_random_unitary(1, &mut rng);
        assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn haar_is_unitary() {
        let mut rng = SeededRng::new(7);
        let u = haar_random_unitary(4, &mut rng);
        assert!(unitarity_residual(&u) < 1e-10);
    }

    #[test]
    fn same_seed_same_draw() {
        let a = haar_random_unitary(3, &mut SeededRng::new(99));
        let b = haar_random_unitary(3, &mut SeededRng::new(99));
        assert_eq!(a, b);
        let c = haar_random_unitary(3, &mut SeededRng::new(100));
        assert_ne!(a, c);
    }

    #[test]
    fn density_matrix_samples() {
        let one = random_density_matrix(1, &mut SeededRng::new(3));
        assert!((one[(0, 0)].re - 1.0).abs() < 1e-15 && one[(0, 0)].im == 0.0);

        let rho = random_density_matrix(3, &mut SeededRng::new(11));
        assert!((rho.trace().re - 1.0).abs() < 1e-12);
        let eig = hermitian_eig(&rho, 1e-12).unwrap();
        assert!(eig.eigenvalues.iter().all(|&l| l >= -1e-12));
    }

    #[test]
    fn derived_seeds_are_stable_and_distinct() {
        let a = SeededRng::derive_seed(42, "bounded", 0);
        assert_eq!(a, SeededRng::derive_seed(42, "bounded", 0));
        assert_ne!(a, SeededRng::derive_seed(42, "bounded", 1));
        assert_ne!(a, SeededRng::derive_seed(42, "monotone", 0));
        assert_ne!(a, SeededRng::derive_seed(43, "bounded", 0));
    }

    #[test]
    fn normal_moments() {
        let mut rng = SeededRng::new(5);
        let n = 200_000;
        let xs: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.01);
        assert!((var - 1.0).abs() < 0.01);
    }

    #[test]
    fn simplex_sums_to_one() {
        let p = SeededRng::new(8).simplex(5);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert!(p.iter().all(|&x| x > 0.0));
    }
}
