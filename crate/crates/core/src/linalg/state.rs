use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{Complex64, ComplexMatrix, ZERO};
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Number field for random draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

/// Register state. Normalization is not enforced; call [`StateVector::normalize`].
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::invalid(
                "state vector must have at least one amplitude",
            ));
        }
        Ok(Self { amplitudes })
    }

    /// Computational basis state `|index>`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, dim });
        }
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        for z in &mut self.amplitudes {
            *z /= norm;
        }
        Ok(())
    }

    /// Multiplies every amplitude by `factor`.
    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            amplitudes: self.amplitudes.iter().map(|&z| z * factor).collect(),
        }
    }
}

/// `U psi`.
pub fn apply(u: &ComplexMatrix, psi: &StateVector) -> Result<StateVector> {
    if u.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: psi.dim(),
        });
    }
    let amplitudes = (0..u.dim())
        .map(|i| {
            u.row(i)
                .iter()
                .zip(&psi.amplitudes)
                .map(|(a, b)| a * b)
                .sum()
        })
        .collect();
    Ok(StateVector { amplitudes })
}

/// `<psi|phi>`, antilinear in the first argument.
pub fn inner(psi: &StateVector, phi: &StateVector) -> Result<Complex64> {
    if psi.dim() != phi.dim() {
        return Err(Error::DimensionMismatch {
            expected: psi.dim(),
            found: phi.dim(),
        });
    }
    Ok(psi
        .amplitudes
        .iter()
        .zip(&phi.amplitudes)
        .map(|(a, b)| a.conj() * b)
        .sum())
}

/// Normalized state with i.i.d. standard-normal components (real and
/// imaginary parts both drawn for [`Field::Complex`], real first).
pub fn random_state<R: Rng + ?Sized>(dim: usize, field: Field, rng: &mut R) -> Result<StateVector> {
    if dim == 0 {
        return Err(Error::invalid("state dimension must be positive"));
    }
    let amplitudes = (0..dim)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = match field {
                Field::Real => 0.0,
                Field::Complex => rng.sample(StandardNormal),
            };
            Complex64::new(re, im)
        })
        .collect();
    let mut psi = StateVector { amplitudes };
    psi.normalize()?;
    Ok(psi)
}

pub fn random_state_seeded(dim: usize, field: Field, seed: u64) -> Result<StateVector> {
    random_state(dim, field, &mut rng_from_seed(seed))
}
