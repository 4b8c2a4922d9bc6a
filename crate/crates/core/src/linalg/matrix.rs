use std::ops::{Index, IndexMut};

use faer::Mat;
use rayon::prelude::*;

use super::{Complex64, ONE, ZERO};
use crate::error::{Error, Result};

/// Rows per rayon task in the dense kernels; small matrices stay serial.
const PAR_THRESHOLD: usize = 64;

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Builds from `dim * dim` row-major entries.
    pub fn from_row_major(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    pub fn from_real(dim: usize, data: &[f64]) -> Result<Self> {
        Self::from_row_major(dim, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Assembles a matrix from its columns.
    pub fn from_columns(columns: &[Vec<Complex64>]) -> Result<Self> {
        let dim = columns.len();
        if dim == 0 {
            return Err(Error::invalid("matrix needs at least one column"));
        }
        let mut m = Self::zeros(dim);
        for (j, col) in columns.iter().enumerate() {
            if col.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: col.len(),
                });
            }
            for (i, &z) in col.iter().enumerate() {
                m.data[i * dim + j] = z;
            }
        }
        Ok(m)
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self.data[i * self.dim + j]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    /// Dense product `self * other`.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        let kernel = |(i, out_row): (usize, &mut [Complex64])| {
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        };
        if n >= PAR_THRESHOLD {
            out.par_chunks_mut(n).enumerate().for_each(kernel);
        } else {
            out.chunks_mut(n).enumerate().for_each(kernel);
        }
        Ok(Self { dim: n, data: out })
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn mean_abs_entry(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).sum::<f64>() / self.data.len() as f64
    }

    pub fn max_imag(&self) -> f64 {
        self.data.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.max_imag() <= tol
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> f64 {
        self.to_faer()
            .singular_values()
            .map(|s| s.into_iter().fold(0.0, f64::max))
            .unwrap_or(f64::NAN)
    }

    pub fn to_faer(&self) -> Mat<Complex64> {
        Mat::from_fn(self.dim, self.dim, |i, j| self[(i, j)])
    }

    pub fn from_faer(m: &Mat<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        Ok(Self::from_fn(m.nrows(), |i, j| m[(i, j)]))
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(
            i < self.dim && j < self.dim,
            "index ({i}, {j}) out of bounds"
        );
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(
            i < self.dim && j < self.dim,
            "index ({i}, {j}) out of bounds"
        );
        &mut self.data[i * self.dim + j]
    }
}

/// Kronecker product with `a` as the leading (most significant) factor:
/// `out[(ia*nb + ib, ja*nb + jb)] = a[(ia, ja)] * b[(ib, jb)]`.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let nb = b.dim;
    let n = a.dim * nb;
    let mut out = ComplexMatrix::zeros(n);
    for ia in 0..a.dim {
        for ja in 0..a.dim {
            let x = a[(ia, ja)];
            if x == ZERO {
                continue;
            }
            for ib in 0..nb {
                let row = (ia * nb + ib) * n + ja * nb;
                for (jb, &y) in b.row(ib).iter().enumerate() {
                    out.data[row + jb] = x * y;
                }
            }
        }
    }
    out
}

/// `max_ij |(U^dagger U - I)_ij|`.
pub fn unitarity_defect(u: &ComplexMatrix) -> f64 {
    let n = u.dim;
    // Column-major copy so that (U^dagger U)_ij is a dot product of contiguous slices.
    let cols: Vec<Vec<Complex64>> = (0..n).map(|j| u.column(j)).collect();
    let row_defect = |i: usize| {
        let ci = &cols[i];
        (0..n)
            .map(|j| {
                let dot: Complex64 = ci.iter().zip(&cols[j]).map(|(a, b)| a.conj() * b).sum();
                let target = if i == j { ONE } else { ZERO };
                (dot - target).norm()
            })
            .fold(0.0, f64::max)
    };
    if n >= PAR_THRESHOLD {
        (0..n)
            .into_par_iter()
            .map(row_defect)
            .reduce(|| 0.0, f64::max)
    } else {
        (0..n).map(row_defect).fold(0.0, f64::max)
    }
}

/// Mean entrywise modulus of the symmetric part `(U + U^T)/2` and of the
/// antisymmetric part `(U - U^T)/2`.
pub fn sym_antisym_split(u: &ComplexMatrix) -> (f64, f64) {
    let n = u.dim;
    let mut sym = 0.0;
    let mut anti = 0.0;
    for i in 0..n {
        for j in 0..n {
            let a = u[(i, j)];
            let b = u[(j, i)];
            sym += ((a + b) * 0.5).norm();
            anti += ((a - b) * 0.5).norm();
        }
    }
    let count = (n * n) as f64;
    (sym / count, anti / count)
}
