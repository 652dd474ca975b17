//! Hamiltonians, passive states and ergotropy.

use super::state::{check_dims, DensityMatrix};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// `H = Σ_i E_i |e_i⟩⟨e_i|` with strictly ascending energies.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    energies: Vec<f64>,
    basis: ComplexMatrix,
}

impl Hamiltonian {
    pub fn new(energies: Vec<f64>, basis: ComplexMatrix) -> Result<Self> {
        check_dims(energies.len(), basis.dim())?;
        if energies.is_empty() || energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::InvalidTheory("energies must be finite"));
        }
        if energies.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::DegenerateHamiltonian);
        }
        let d = basis.dim();
        if (&basis.adjoint() * &basis).distance(&ComplexMatrix::identity(d)) > 1e-10 * d as f64 {
            return Err(Error::InvalidTheory("energy basis must be orthonormal"));
        }
        Ok(Self { energies, basis })
    }

    /// Diagonal in the computational basis.
    pub fn diagonal(energies: Vec<f64>) -> Result<Self> {
        let d = energies.len();
        Self::new(energies, ComplexMatrix::identity(d))
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Columns are the energy eigenvectors, ascending in energy.
    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix::diag(&self.energies).conjugate_by(&self.basis)
    }

    /// `B† A B`: an operator written in the energy eigenbasis.
    pub fn to_energy_basis(&self, a: &ComplexMatrix) -> ComplexMatrix {
        a.conjugate_by(&self.basis.adjoint())
    }

    /// `B A B†`: an energy-basis operator mapped back.
    pub fn from_energy_basis(&self, a: &ComplexMatrix) -> ComplexMatrix {
        a.conjugate_by(&self.basis)
    }
}

/// The passive state with the spectrum of `rho`: largest population on the lowest level.
pub fn passify(rho: &DensityMatrix, h: &Hamiltonian) -> Result<DensityMatrix> {
    check_dims(h.dim(), rho.dim())?;
    let mut populations = rho.spectrum();
    populations.reverse();
    DensityMatrix::new(h.from_energy_basis(&ComplexMatrix::diag(&populations)))
}

/// `Tr(ρH) − Tr(ρ_P H)`.
pub fn ergotropy(rho: &DensityMatrix, h: &Hamiltonian) -> Result<f64> {
    check_dims(h.dim(), rho.dim())?;
    let energy = rho.expectation(&h.matrix());
    let mut populations = rho.spectrum();
    populations.reverse();
    let passive_energy: f64 = populations.iter().zip(h.energies()).map(|(p, e)| p * e).sum();
    Ok((energy - passive_energy).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{random_density_matrix, SeededRng};
    use num_complex::Complex64;

    fn h01() -> Hamiltonian {
        Hamiltonian::diagonal(vec![0.0, 1.0]).unwrap()
    }

    #[test]
    fn degenerate_rejected() {
        assert_eq!(Hamiltonian::diagonal(vec![0.0, 0.0]), Err(Error::DegenerateHamiltonian));
        assert_eq!(Hamiltonian::diagonal(vec![1.0, 0.0]), Err(Error::DegenerateHamiltonian));
    }

    #[test]
    fn ergotropy_examples() {
        let passive = DensityMatrix::diagonal(&[0.7, 0.3]).unwrap();
        assert!(ergotropy(&passive, &h01()).unwrap().abs() < 1e-14);

        let inverted = DensityMatrix::diagonal(&[0.2, 0.8]).unwrap();
        assert!((ergotropy(&inverted, &h01()).unwrap() - 0.6).abs() < 1e-14);

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = DensityMatrix::pure(&[Complex64::new(s, 0.0), Complex64::new(s, 0.0)]).unwrap();
        assert!((ergotropy(&plus, &h01()).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn passify_examples() {
        let inverted = DensityMatrix::diagonal(&[0.2, 0.8]).unwrap();
        let p = passify(&inverted, &h01()).unwrap();
        assert!(p.matrix().distance(&ComplexMatrix::diag(&[0.8, 0.2])) < 1e-14);

        let passive = DensityMatrix::diagonal(&[0.7, 0.3]).unwrap();
        let p = passify(&passive, &h01()).unwrap();
        assert!(p.matrix().distance(passive.matrix()) < 1e-14);

        let rho = DensityMatrix::new(random_density_matrix(2, &mut SeededRng::new(21))).unwrap();
        let p = passify(&rho, &h01()).unwrap();
        assert!(p.matrix()[(0, 1)].norm() < 1e-14);
        assert!(p.matrix()[(0, 0)].re >= p.matrix()[(1, 1)].re);
        assert!(ergotropy(&p, &h01()).unwrap() < 1e-10);
    }

    #[test]
    fn rotated_basis() {
        // energy eigenvectors |+⟩ (ground) and |−⟩
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let b = ComplexMatrix::from_fn(2, |i, j| {
            Complex64::new(if i == 1 && j == 1 { -s } else { s }, 0.0)
        });
        let h = Hamiltonian::new(vec![0.0, 1.0], b).unwrap();
        let plus = DensityMatrix::pure(&[Complex64::new(s, 0.0), Complex64::new(s, 0.0)]).unwrap();
        assert!(ergotropy(&plus, &h).unwrap() < 1e-14);
        let zero = DensityMatrix::basis_state(2, 0);
        assert!((ergotropy(&zero, &h).unwrap() - 0.5).abs() < 1e-14);
    }
}
