//! Eigendecomposition of unitary matrices with explicit control over the
//! basis chosen inside degenerate eigenspaces.
//!
//! The two Hermitian parts `(U + U^dagger)/2` and `(U - U^dagger)/2i` of a
//! unitary commute, so an orthonormal eigenbasis of `U` is found by
//! diagonalizing one part and splitting every eigenspace of it with the
//! other, alternating until nothing splits further. Eigenvalues are the
//! Rayleigh quotients of the resulting vectors. Inside a cluster of
//! (numerically) equal eigenphases any orthonormal basis is equally valid;
//! [`ClusterBasis`] decides which one is reported.

#[cfg(test)]
use std::f64::consts::FRAC_PI_2;
use std::f64::consts::{PI, TAU};
use std::ops::Range;

use faer::{Mat, MatRef, Side};
use rand::Rng;

use super::haar::orthonormalize_columns;
use super::{
    haar_orthogonal, haar_unitary, unitarity_defect, Complex64, ComplexMatrix, UNITARITY_TOLERANCE,
    ZERO,
};
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Inputs with no imaginary part above this are treated as real.
const REAL_INPUT_TOLERANCE: f64 = 1e-13;
/// A cluster whose eigenvalue has |Im| below this is treated as real.
const REAL_EIGENVALUE_TOLERANCE: f64 = 1e-8;
/// Eigenvalues of a Hermitian part closer than this are not separated.
const SPLIT_TOLERANCE: f64 = 1e-9;

/// How eigenvectors are oriented inside degenerate clusters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClusterBasis {
    /// Rotate each cluster by a Haar-random orthogonal (real input, real
    /// eigenvalue) or unitary matrix drawn from the seed.
    Randomized { seed: u64 },
    /// Gram-Schmidt of the cluster projector applied to the computational
    /// basis vectors in index order. Independent of the solver and of any seed.
    Canonical,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigOptions {
    /// Phases closer than this (circularly) are one cluster. `None` selects
    /// `1e-8 * 2 pi / N`.
    pub degeneracy_tolerance: Option<f64>,
    pub basis: ClusterBasis,
}

impl EigOptions {
    pub fn randomized(seed: u64) -> Self {
        Self {
            degeneracy_tolerance: None,
            basis: ClusterBasis::Randomized { seed },
        }
    }

    pub fn canonical() -> Self {
        Self {
            degeneracy_tolerance: None,
            basis: ClusterBasis::Canonical,
        }
    }
}

/// Eigenphases `phi_k` (eigenvalue `exp(-i phi_k)`) sorted ascending in
/// `(-pi, pi]`, with eigenvectors as the columns of `vectors`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    pub phases: Vec<f64>,
    pub vectors: ComplexMatrix,
    /// Index ranges of phase clusters; they partition `0..N` in order.
    pub clusters: Vec<Range<usize>>,
    pub degeneracy_tolerance: f64,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.phases.len()
    }

    pub fn eigenvalue(&self, k: usize) -> Complex64 {
        Complex64::from_polar(1.0, -self.phases[k])
    }

    pub fn eigenvalues(&self) -> Vec<Complex64> {
        (0..self.dim()).map(|k| self.eigenvalue(k)).collect()
    }

    /// Clusters holding more than one eigenvector.
    pub fn degenerate_clusters(&self) -> impl Iterator<Item = &Range<usize>> {
        self.clusters.iter().filter(|r| r.len() > 1)
    }

    /// `V diag(exp(-i phi)) V^dagger`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.dim();
        let lambda = self.eigenvalues();
        let scaled = ComplexMatrix::from_fn(n, |i, k| self.vectors[(i, k)] * lambda[k]);
        scaled
            .matmul(&self.vectors.adjoint())
            .expect("square matrices of equal size")
    }

    /// `max_k || U v_k - lambda_k v_k ||`.
    pub fn max_eigenpair_residual(&self, u: &ComplexMatrix) -> Result<f64> {
        let uv = u.matmul(&self.vectors)?;
        Ok((0..self.dim())
            .map(|k| {
                let lambda = self.eigenvalue(k);
                (0..self.dim())
                    .map(|i| (uv[(i, k)] - lambda * self.vectors[(i, k)]).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max))
    }
}

pub fn default_degeneracy_tolerance(dim: usize) -> f64 {
    1e-8 * TAU / dim as f64
}

/// Eigendecomposition with seeded randomization inside degenerate clusters.
pub fn eig_unitary(u: &ComplexMatrix, degeneracy_tolerance: f64, seed: u64) -> Result<EigenSystem> {
    eig_unitary_with(
        u,
        &EigOptions {
            degeneracy_tolerance: Some(degeneracy_tolerance),
            basis: ClusterBasis::Randomized { seed },
        },
    )
}

pub fn eig_unitary_with(u: &ComplexMatrix, opts: &EigOptions) -> Result<EigenSystem> {
    let n = u.dim();
    let tol = opts
        .degeneracy_tolerance
        .unwrap_or_else(|| default_degeneracy_tolerance(n));
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::invalid(format!(
            "degeneracy tolerance must be positive, got {tol}"
        )));
    }
    let defect = unitarity_defect(u);
    if defect > UNITARITY_TOLERANCE || defect.is_nan() {
        return Err(Error::NonUnitaryInput {
            defect,
            tolerance: UNITARITY_TOLERANCE,
        });
    }

    let (raw, lambdas) = unitary_eigenvectors(&u.to_faer())?;
    let mut order: Vec<(f64, usize)> = lambdas
        .iter()
        .enumerate()
        .map(|(k, &lambda)| (phase_of(lambda, tol), k))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let phases: Vec<f64> = order.iter().map(|&(p, _)| p).collect();
    let raw_vectors: Vec<Vec<Complex64>> = order
        .iter()
        .map(|&(_, k)| (0..n).map(|i| raw[(i, k)]).collect())
        .collect();

    let clusters = cluster_ranges(&phases, tol);
    let real_input = u.is_real(REAL_INPUT_TOLERANCE);
    let mut rng = match opts.basis {
        ClusterBasis::Randomized { seed } => Some(rng_from_seed(seed)),
        ClusterBasis::Canonical => None,
    };

    let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for range in &clusters {
        let block = &raw_vectors[range.clone()];
        let mean_phase = range.clone().map(|k| phases[k]).sum::<f64>() / range.len() as f64;
        let real_cluster = real_input && mean_phase.sin().abs() <= REAL_EIGENVALUE_TOLERANCE;

        let mut basis = match (&opts.basis, real_cluster) {
            (ClusterBasis::Canonical, _) => canonical_basis(block, real_cluster)?,
            (ClusterBasis::Randomized { .. }, true) => real_basis(block)?,
            (ClusterBasis::Randomized { .. }, false) => block.to_vec(),
        };
        if let Some(rng) = rng.as_mut() {
            if basis.len() > 1 {
                basis = rotate(&basis, real_cluster, rng);
            }
        }
        if basis.len() == 1 {
            fix_global_phase(&mut basis[0]);
        }
        columns.extend(basis);
    }

    Ok(EigenSystem {
        phases,
        vectors: ComplexMatrix::from_columns(&columns)?,
        clusters,
        degeneracy_tolerance: tol,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Part {
    Real,
    Imag,
}

impl Part {
    fn other(self) -> Self {
        match self {
            Part::Real => Part::Imag,
            Part::Imag => Part::Real,
        }
    }

    fn of(self, w: &Mat<Complex64>) -> Mat<Complex64> {
        let m = w.nrows();
        match self {
            Part::Real => Mat::from_fn(m, m, |i, j| (w[(i, j)] + w[(j, i)].conj()) * 0.5),
            Part::Imag => Mat::from_fn(m, m, |i, j| {
                (w[(i, j)] - w[(j, i)].conj()) * Complex64::new(0.0, -0.5)
            }),
        }
    }
}

fn mul(a: MatRef<'_, Complex64>, b: MatRef<'_, Complex64>) -> Mat<Complex64> {
    a * b
}

fn select_columns(v: &Mat<Complex64>, cols: &[usize]) -> Mat<Complex64> {
    Mat::from_fn(v.nrows(), cols.len(), |i, c| v[(i, cols[c])])
}

/// Orthonormal eigenvectors of the unitary `u` as columns, in no particular
/// order, with their eigenvalues.
fn unitary_eigenvectors(u: &Mat<Complex64>) -> Result<(Mat<Complex64>, Vec<Complex64>)> {
    let n = u.nrows();
    let mut blocks = Vec::new();
    let (vectors, groups) = hermitian_groups(&Part::Real.of(u))?;
    if groups.len() == 1 {
        split(u, vectors, Part::Imag, true, &mut blocks)?;
    } else {
        for g in groups {
            split(
                u,
                select_columns(&vectors, &g),
                Part::Imag,
                false,
                &mut blocks,
            )?;
        }
    }
    let mut v = Mat::<Complex64>::zeros(n, n);
    let mut col = 0;
    for b in &blocks {
        for c in 0..b.ncols() {
            for i in 0..n {
                v[(i, col)] = b[(i, c)];
            }
            col += 1;
        }
    }
    let v = refine(u, &v);
    let uv = mul(u.as_ref(), v.as_ref());
    let lambdas = (0..n)
        .map(|k| (0..n).map(|i| v[(i, k)].conj() * uv[(i, k)]).sum())
        .collect();
    Ok((v, lambdas))
}

/// Refines the `u`-invariant subspace spanned by the orthonormal columns of
/// `q` using the given Hermitian part of `u` restricted to it.
fn split(
    u: &Mat<Complex64>,
    q: Mat<Complex64>,
    part: Part,
    other_failed: bool,
    out: &mut Vec<Mat<Complex64>>,
) -> Result<()> {
    if q.ncols() == 1 {
        out.push(q);
        return Ok(());
    }
    let restricted = q.adjoint() * mul(u.as_ref(), q.as_ref());
    let (vectors, groups) = hermitian_groups(&part.of(&restricted))?;
    if groups.len() == 1 {
        if other_failed {
            out.push(q);
            return Ok(());
        }
        return split(u, q, part.other(), true, out);
    }
    for g in groups {
        let sub = mul(q.as_ref(), select_columns(&vectors, &g).as_ref());
        split(u, sub, part.other(), false, out)?;
    }
    Ok(())
}

/// One first-order correction of the mixing between well-separated
/// eigenvalues, followed by reorthonormalization. Splitting on a Hermitian
/// part can mix vectors whose eigenvalues are far apart on the circle but
/// have nearly equal real (or imaginary) part.
fn refine(u: &Mat<Complex64>, v: &Mat<Complex64>) -> Mat<Complex64> {
    let m = v.ncols();
    let t = v.adjoint() * mul(u.as_ref(), v.as_ref());
    let mut e = Mat::<Complex64>::identity(m, m);
    for j in 0..m {
        for i in 0..m {
            let gap = t[(j, j)] - t[(i, i)];
            if i != j && gap.norm() > SPLIT_TOLERANCE && gap.norm() > 1e3 * t[(i, j)].norm() {
                e[(i, j)] = t[(i, j)] / gap;
            }
        }
    }
    let qr = mul(v.as_ref(), e.as_ref()).qr();
    let r = qr.R();
    let mut q = qr.compute_Q();
    for k in 0..m {
        let d = r[(k, k)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for i in 0..q.nrows() {
                q[(i, k)] *= phase;
            }
        }
    }
    q
}

/// Eigenvectors of Hermitian `h` and the column groups of numerically
/// equal eigenvalues.
fn hermitian_groups(h: &Mat<Complex64>) -> Result<(Mat<Complex64>, Vec<Vec<usize>>)> {
    let m = h.nrows();
    let eig = h
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| Error::NoConvergence(m))?;
    let values: Vec<f64> = eig.S().column_vector().iter().map(|z| z.re).collect();
    let mut idx: Vec<usize> = (0..m).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let mut groups: Vec<Vec<usize>> = vec![vec![idx[0]]];
    for w in idx.windows(2) {
        if values[w[1]] - values[w[0]] > SPLIT_TOLERANCE {
            groups.push(Vec::new());
        }
        groups.last_mut().expect("nonempty").push(w[1]);
    }
    Ok((eig.U().to_owned(), groups))
}

/// Eigenphase of `lambda = exp(-i phi)` in `(-pi, pi]`; phases within `tol`
/// of `-pi` are identified with `pi`.
fn phase_of(lambda: Complex64, tol: f64) -> f64 {
    let phi = 0.0 - lambda.arg();
    if phi <= -PI + tol {
        PI
    } else {
        phi
    }
}

/// Single-linkage clustering of sorted phases, with -pi and pi identified.
fn cluster_ranges(phases: &[f64], tol: f64) -> Vec<Range<usize>> {
    let mut clusters = Vec::new();
    let mut start = 0;
    for k in 1..phases.len() {
        if phases[k] - phases[k - 1] >= tol {
            clusters.push(start..k);
            start = k;
        }
    }
    clusters.push(start..phases.len());
    clusters
}

/// Real orthonormal basis of a conjugation-invariant subspace given by the
/// complex orthonormal columns of `block`. The columns of `M = [Re B | Im B]`
/// span that subspace and `M^T M` has eigenvalues 1 and 0 only, so its
/// leading eigenvectors `w` give the basis `M w`.
fn real_basis(block: &[Vec<Complex64>]) -> Result<Vec<Vec<Complex64>>> {
    let k = block.len();
    let n = block[0].len();
    let stacked = Mat::<f64>::from_fn(n, 2 * k, |i, j| {
        let z = block[j / 2][i];
        if j % 2 == 0 {
            z.re
        } else {
            z.im
        }
    });
    let gram = stacked.transpose() * &stacked;
    let eig = gram
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| Error::NoConvergence(n))?;
    let values: Vec<f64> = eig.S().column_vector().iter().copied().collect();
    let mut idx: Vec<usize> = (0..2 * k).collect();
    idx.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    let top = Mat::<f64>::from_fn(2 * k, k, |i, c| eig.U()[(i, idx[c])]);
    let spanned = &stacked * &top;
    let mut basis: Vec<Vec<Complex64>> = (0..k)
        .map(|c| {
            (0..n)
                .map(|i| Complex64::new(spanned[(i, c)], 0.0))
                .collect()
        })
        .collect();
    if !orthonormalize_columns(&mut basis) {
        return Err(Error::NoConvergence(n));
    }
    for v in &mut basis {
        fix_global_phase(v);
    }
    Ok(basis)
}

/// Orthonormalizes `P e_0, P e_1, ...` (P the cluster projector) in index
/// order until the cluster dimension is reached.
fn canonical_basis(block: &[Vec<Complex64>], real: bool) -> Result<Vec<Vec<Complex64>>> {
    let k = block.len();
    let n = block[0].len();
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(k);
    for i in 0..n {
        if basis.len() == k {
            break;
        }
        // Column i of P = sum_c b_c conj(b_c[i]).
        let mut v = vec![ZERO; n];
        for b in block {
            let w = b[i].conj();
            for (x, &y) in v.iter_mut().zip(b) {
                *x += y * w;
            }
        }
        if real {
            for x in &mut v {
                x.im = 0.0;
            }
        }
        let weight: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if weight <= 1e-8 {
            continue;
        }
        basis.push(v);
        if !orthonormalize_columns(&mut basis) {
            basis.pop();
        }
    }
    if basis.len() != k {
        return Err(Error::NoConvergence(n));
    }
    Ok(basis)
}

fn rotate<R: Rng + ?Sized>(
    basis: &[Vec<Complex64>],
    real: bool,
    rng: &mut R,
) -> Vec<Vec<Complex64>> {
    let k = basis.len();
    let n = basis[0].len();
    let r = if real {
        haar_orthogonal(k, rng)
    } else {
        haar_unitary(k, rng)
    };
    (0..k)
        .map(|c| {
            let mut v = vec![ZERO; n];
            for (j, b) in basis.iter().enumerate() {
                let w = r[(j, c)];
                for (x, &y) in v.iter_mut().zip(b) {
                    *x += y * w;
                }
            }
            v
        })
        .collect()
}

/// Makes the largest-modulus component real and positive.
fn fix_global_phase(v: &mut [Complex64]) {
    let pivot = v
        .iter()
        .enumerate()
        .fold((0, 0.0), |best, (i, z)| {
            if z.norm() > best.1 {
                (i, z.norm())
            } else {
                best
            }
        })
        .0;
    let norm = v[pivot].norm();
    if norm == 0.0 {
        return;
    }
    let phase = v[pivot].conj() / norm;
    for z in v.iter_mut() {
        *z *= phase;
    }
    v[pivot].im = 0.0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::haar_unitary;

    fn projector(es: &EigenSystem, range: &Range<usize>) -> ComplexMatrix {
        let n = es.dim();
        ComplexMatrix::from_fn(n, |i, j| {
            range
                .clone()
                .map(|k| es.vectors[(i, k)] * es.vectors[(j, k)].conj())
                .sum()
        })
    }

    fn with_spectrum(phases: &[f64], seed: u64) -> ComplexMatrix {
        let v = haar_unitary(phases.len(), &mut rng_from_seed(seed));
        let d = ComplexMatrix::diagonal(
            &phases
                .iter()
                .map(|&p| Complex64::from_polar(1.0, -p))
                .collect::<Vec<_>>(),
        );
        v.matmul(&d).unwrap().matmul(&v.adjoint()).unwrap()
    }

    #[test]
    fn close_distinct_phases_are_resolved() {
        let h = FRAC_PI_2;
        let phases = [
            0.0,
            1e-6,
            -1e-6,
            3e-6,
            h - 1e-7,
            h + 1e-7,
            -h,
            -h + 2e-7,
            PI,
            PI - 1e-6,
            -PI + 3e-6,
            1.0,
            1.0 + 1e-6,
            -2.0,
        ];
        for seed in 0..4 {
            let u = with_spectrum(&phases, seed);
            let es = eig_unitary(&u, 1e-9, seed).unwrap();
            assert_eq!(es.clusters.len(), phases.len());
            let mut want = phases.to_vec();
            want.sort_by(f64::total_cmp);
            for (got, want) in es.phases.iter().zip(&want) {
                assert!((got - want).abs() < 1e-12, "{got} vs {want}");
            }
            let r = es.max_eigenpair_residual(&u).unwrap();
            assert!(r < 1e-12);
        }
    }

    #[test]
    fn circuit_roundoff_in_degenerate_spectrum() {
        // Gate-by-gate QFT: four eigenvalues with multiplicity ~N/4, split by roundoff.
        let u = crate::algorithms::build_qft_circuit(7).unwrap();
        let es = eig_unitary(&u, default_degeneracy_tolerance(128), 2).unwrap();
        let sizes: Vec<usize> = es.clusters.iter().map(|r| r.len()).collect();
        assert_eq!(sizes, vec![32, 33, 31, 32]);
        assert!(es.reconstruct().max_abs_diff(&u).unwrap() < 1e-12);
    }

    #[test]
    fn identity_is_one_cluster() {
        let es = eig_unitary(
            &ComplexMatrix::identity(4),
            default_degeneracy_tolerance(4),
            1,
        )
        .unwrap();
        assert!(es.phases.iter().all(|&p| p.abs() < 1e-14));
        assert_eq!(es.clusters, vec![0..4]);
        assert!(unitarity_defect(&es.vectors) < 1e-12);
    }

    #[test]
    fn reflection_phases() {
        let d = ComplexMatrix::from_real(2, &[1.0, 0.0, 0.0, -1.0]).unwrap();
        let es = eig_unitary(&d, 1e-9, 0).unwrap();
        assert!(es.phases[0].abs() < 1e-15);
        assert_eq!(es.phases[1], PI);
        assert_eq!(es.clusters.len(), 2);
    }

    #[test]
    fn sign_convention_is_exp_minus_i_phi() {
        let theta = 0.3;
        let u =
            ComplexMatrix::diagonal(&[Complex64::from_polar(1.0, theta), Complex64::new(1.0, 0.0)]);
        let es = eig_unitary(&u, 1e-9, 0).unwrap();
        assert!((es.phases[0] + theta).abs() < 1e-14);
        assert!(es.max_eigenpair_residual(&u).unwrap() < 1e-12);
    }

    #[test]
    fn minus_one_cluster_is_not_split_across_the_branch_cut() {
        let eps = 1e-13;
        let u = ComplexMatrix::diagonal(&[
            Complex64::from_polar(1.0, PI - eps),
            Complex64::from_polar(1.0, -PI + eps),
            Complex64::new(1.0, 0.0),
        ]);
        let es = eig_unitary(&u, 1e-9, 0).unwrap();
        assert_eq!(es.clusters, vec![0..1, 1..3]);
        assert!(es.phases[1..].iter().all(|p| (p - PI).abs() < 1e-12));
    }

    #[test]
    fn rejects_non_unitary() {
        let m = ComplexMatrix::from_real(2, &[1.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(matches!(
            eig_unitary(&m, 1e-9, 0),
            Err(Error::NonUnitaryInput { .. })
        ));
    }

    #[test]
    fn random_unitary_reconstruction() {
        let mut rng = rng_from_seed(9);
        for n in [3, 17, 64] {
            let u = haar_unitary(n, &mut rng);
            let es = eig_unitary(&u, default_degeneracy_tolerance(n), 4).unwrap();
            assert!(es.reconstruct().max_abs_diff(&u).unwrap() < 1e-10);
            assert!(unitarity_defect(&es.vectors) < 1e-10);
            assert!(es.phases.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    fn degenerate_test_matrix() -> ComplexMatrix {
        // Real orthogonal matrix with eigenvalues {1 x3, -1 x2, exp(+-0.7i)}.
        let mut rng = rng_from_seed(21);
        let o = haar_orthogonal(7, &mut rng);
        let (c, s) = (0.7f64.cos(), 0.7f64.sin());
        let mut d = ComplexMatrix::identity(7);
        d[(3, 3)] = Complex64::new(-1.0, 0.0);
        d[(4, 4)] = Complex64::new(-1.0, 0.0);
        d[(5, 5)] = Complex64::new(c, 0.0);
        d[(5, 6)] = Complex64::new(-s, 0.0);
        d[(6, 5)] = Complex64::new(s, 0.0);
        d[(6, 6)] = Complex64::new(c, 0.0);
        o.matmul(&d).unwrap().matmul(&o.transpose()).unwrap()
    }

    #[test]
    fn degenerate_clusters_are_seeded_and_span_same_space() {
        let u = degenerate_test_matrix();
        let a = eig_unitary_with(&u, &EigOptions::randomized(5)).unwrap();
        let b = eig_unitary_with(&u, &EigOptions::randomized(5)).unwrap();
        let c = eig_unitary_with(&u, &EigOptions::randomized(6)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.clusters, c.clusters);
        let sizes: Vec<usize> = a.clusters.iter().map(|r| r.len()).collect();
        assert_eq!(sizes, vec![1, 3, 1, 2]);
        for r in a.degenerate_clusters() {
            assert!(a.vectors.max_abs_diff(&c.vectors).unwrap() > 1e-3);
            let pa = projector(&a, r);
            let pc = projector(&c, r);
            assert!(pa.max_abs_diff(&pc).unwrap() < 1e-8);
        }
        for es in [&a, &c] {
            assert!(es.reconstruct().max_abs_diff(&u).unwrap() < 1e-10);
            assert!(unitarity_defect(&es.vectors) < 1e-10);
        }
    }

    #[test]
    fn real_clusters_get_real_vectors() {
        let u = degenerate_test_matrix();
        for opts in [EigOptions::randomized(1), EigOptions::canonical()] {
            let es = eig_unitary_with(&u, &opts).unwrap();
            for r in es.degenerate_clusters() {
                for k in r.clone() {
                    for i in 0..7 {
                        assert_eq!(es.vectors[(i, k)].im, 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn canonical_basis_does_not_depend_on_seed_or_solver_basis() {
        let u = degenerate_test_matrix();
        let a = eig_unitary_with(&u, &EigOptions::canonical()).unwrap();
        assert!(a.reconstruct().max_abs_diff(&u).unwrap() < 1e-10);
        // The first canonical vector of a cluster is P e_0 normalized.
        let r = a.degenerate_clusters().next().unwrap().clone();
        let p = projector(&a, &r);
        let norm: f64 = (0..7).map(|i| p[(i, 0)].norm_sqr()).sum::<f64>().sqrt();
        for i in 0..7 {
            assert!((a.vectors[(i, r.start)] - p[(i, 0)] / norm).norm() < 1e-10);
        }
    }
}
