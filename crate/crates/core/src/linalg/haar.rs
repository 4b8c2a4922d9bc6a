//! Haar-distributed orthogonal and unitary matrices.
//!
//! Gram-Schmidt on the columns of a Gaussian matrix is the QR factorization
//! with a positive diagonal in R, which makes Q exactly Haar distributed.

use rand::Rng;
use rand_distr::StandardNormal;

use super::{Complex64, ComplexMatrix, Field};

pub fn haar_orthogonal<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    haar(dim, Field::Real, rng)
}

pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    haar(dim, Field::Complex, rng)
}

/// Circular orthogonal ensemble member `W^T W` with `W` Haar unitary.
pub fn coe_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let w = haar_unitary(dim, rng);
    w.transpose().matmul(&w).expect("same dimension")
}

fn haar<R: Rng + ?Sized>(dim: usize, field: Field, rng: &mut R) -> ComplexMatrix {
    loop {
        let mut cols: Vec<Vec<Complex64>> = (0..dim)
            .map(|_| {
                (0..dim)
                    .map(|_| {
                        let re: f64 = rng.sample(StandardNormal);
                        let im = match field {
                            Field::Real => 0.0,
                            Field::Complex => rng.sample(StandardNormal),
                        };
                        Complex64::new(re, im)
                    })
                    .collect()
            })
            .collect();
        if orthonormalize_columns(&mut cols) {
            return ComplexMatrix::from_columns(&cols).expect("square by construction");
        }
    }
}

/// Modified Gram-Schmidt with one reorthogonalization pass. Returns false if a
/// column is numerically dependent on its predecessors.
pub(crate) fn orthonormalize_columns(cols: &mut [Vec<Complex64>]) -> bool {
    for j in 0..cols.len() {
        let (done, rest) = cols.split_at_mut(j);
        let v = &mut rest[0];
        let initial: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for _ in 0..2 {
            for q in done.iter() {
                let proj: Complex64 = q.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
                for (x, a) in v.iter_mut().zip(q) {
                    *x -= proj * a;
                }
            }
        }
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm <= 1e-10 * initial.max(f64::MIN_POSITIVE) {
            return false;
        }
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
    true
}
