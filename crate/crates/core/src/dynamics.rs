//! Time-domain sensitivity diagnostics: fidelity decay under repeated
//! application, angle distributions of once-propagated states, and the
//! growth of matrix error with perturbation strength.

use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::algorithms::{build_grover, GroverSpec};
use crate::chaometrics::Histogram;
use crate::error::{Error, Result};
use crate::linalg::{apply, inner, random_state, ComplexMatrix, Field, StateVector};
use crate::perturbations::perturbed_grover_with;
use crate::rng::member_rng;

/// Minimum series length accepted by [`fourier_magnitude`].
pub const MIN_FOURIER_LENGTH: usize = 8;

/// `|<U^k psi0 | U'^k psi0>|^2` for `k = 1..=k_max`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlapSeries {
    pub iterations: Vec<usize>,
    pub fidelities: Vec<f64>,
}

impl OverlapSeries {
    pub fn len(&self) -> usize {
        self.fidelities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fidelities.is_empty()
    }

    /// Fidelities at iteration numbers satisfying `pred`.
    pub fn select<'a>(
        &'a self,
        pred: impl Fn(usize) -> bool + 'a,
    ) -> impl Iterator<Item = f64> + 'a {
        self.iterations
            .iter()
            .zip(&self.fidelities)
            .filter(move |(k, _)| pred(**k))
            .map(|(_, &f)| f)
    }
}

fn check_normalized(psi: &StateVector) -> Result<()> {
    let defect = (psi.norm_sqr() - 1.0).abs();
    if defect > 1e-10 {
        return Err(Error::invalid(format!(
            "initial state must be normalized (|norm^2 - 1| = {defect:e})"
        )));
    }
    Ok(())
}

/// Propagates `psi0` by `u` and `u_prime` side by side, one application per
/// step, and records the squared overlap after each step.
pub fn overlap_series(
    u: &ComplexMatrix,
    u_prime: &ComplexMatrix,
    psi0: &StateVector,
    k_max: usize,
) -> Result<OverlapSeries> {
    if u.dim() != u_prime.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: u_prime.dim(),
        });
    }
    if psi0.dim() != u.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: psi0.dim(),
        });
    }
    check_normalized(psi0)?;
    let mut exact = psi0.clone();
    let mut perturbed = psi0.clone();
    let mut fidelities = Vec::with_capacity(k_max);
    for _ in 0..k_max {
        exact = apply(u, &exact)?;
        perturbed = apply(u_prime, &perturbed)?;
        fidelities.push(inner(&exact, &perturbed)?.norm_sqr());
    }
    Ok(OverlapSeries {
        iterations: (1..=k_max).collect(),
        fidelities,
    })
}

/// One-sided amplitude spectrum `|X_j| / L` of the mean-removed series, at
/// frequencies `j / L` (cycles per iteration) for `j = 0..=L/2`.
pub fn fourier_magnitude(series: &OverlapSeries) -> Result<Vec<(f64, f64)>> {
    let len = series.len();
    if len < MIN_FOURIER_LENGTH {
        return Err(Error::invalid(format!(
            "Fourier analysis needs at least {MIN_FOURIER_LENGTH} points, got {len}"
        )));
    }
    let mean = series.fidelities.iter().sum::<f64>() / len as f64;
    let mut buf: Vec<Complex<f64>> = series
        .fidelities
        .iter()
        .map(|&f| Complex::new(f - mean, 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);
    Ok((0..=len / 2)
        .map(|j| (j as f64 / len as f64, buf[j].norm() / len as f64))
        .collect())
}

/// Share of the nonzero-frequency spectral power `|X_j|^2` carried by the
/// `top` strongest components. Zero for a spectrum with no power.
///
/// Power rather than magnitude: leakage tails of an off-grid line fall off
/// as `1/d` in magnitude, so their summed magnitude grows like `ln L` and a
/// single pure cosine would score below 0.5. In power the tails are
/// summable and such a line scores above 0.8.
pub fn spectral_peakedness(spectrum: &[(f64, f64)], top: usize) -> f64 {
    let mut mags: Vec<f64> = spectrum
        .iter()
        .filter(|(f, _)| *f > 0.0)
        .map(|&(_, m)| m * m)
        .collect();
    let total: f64 = mags.iter().sum();
    if total == 0.0 {
        return 0.0;
    }
    mags.sort_by(|a, b| b.total_cmp(a));
    mags.iter().take(top).sum::<f64>() / total
}

/// Hilbert-space angle `arccos(|<a|b>| / (|a| |b|))` in `[0, pi/2]`.
pub fn angle(a: &StateVector, b: &StateVector) -> Result<f64> {
    let na = a.norm_sqr();
    let nb = b.norm_sqr();
    if na == 0.0 || nb == 0.0 {
        return Err(Error::ZeroVector);
    }
    let c = inner(a, b)?.norm() / (na * nb).sqrt();
    Ok(c.clamp(0.0, 1.0).acos())
}

/// Pairwise angles with their mean-rescaled ("unfolded") values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleEnsemble {
    pub raw_angles: Vec<f64>,
    pub mean_angle: f64,
    pub unfolded: Vec<f64>,
    pub histogram: Histogram,
}

impl AngleEnsemble {
    pub fn from_raw(raw_angles: Vec<f64>, bins: usize) -> Result<Self> {
        if raw_angles.is_empty() {
            return Err(Error::EmptySample);
        }
        let mean_angle = raw_angles.iter().sum::<f64>() / raw_angles.len() as f64;
        if !(mean_angle > 0.0) {
            return Err(Error::invalid(
                "all propagated states coincide; angles cannot be unfolded",
            ));
        }
        let unfolded: Vec<f64> = raw_angles.iter().map(|a| a / mean_angle).collect();
        let histogram = Histogram::from_sample(&unfolded, bins)?;
        Ok(Self {
            raw_angles,
            mean_angle,
            unfolded,
            histogram,
        })
    }

    pub fn unfolded_std(&self) -> f64 {
        let n = self.unfolded.len() as f64;
        let mean = self.unfolded.iter().sum::<f64>() / n;
        (self
            .unfolded
            .iter()
            .map(|x| (x - mean).powi(2))
            .sum::<f64>()
            / n)
            .sqrt()
    }
}

/// All angles `alpha_{i,k}`, `i < k`, in row order.
pub fn pairwise_angles(states: &[StateVector]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(states.len() * states.len().saturating_sub(1) / 2);
    for i in 0..states.len() {
        for k in i + 1..states.len() {
            out.push(angle(&states[i], &states[k])?);
        }
    }
    Ok(out)
}

/// Propagates `psi0` once by every matrix and unfolds the pairwise angles.
pub fn angle_ensemble(
    matrices: &[ComplexMatrix],
    psi0: &StateVector,
    bins: usize,
) -> Result<AngleEnsemble> {
    if matrices.len() < 2 {
        return Err(Error::TooFewMatrices(matrices.len()));
    }
    let states: Vec<StateVector> = matrices
        .par_iter()
        .map(|m| apply(m, psi0))
        .collect::<Result<_>>()?;
    AngleEnsemble::from_raw(pairwise_angles(&states)?, bins)
}

/// Angles between `count` independent random states; state `i` is drawn
/// from stream `i` of `seed`.
pub fn random_vector_baseline(
    dim: usize,
    count: usize,
    field: Field,
    seed: u64,
    bins: usize,
) -> Result<AngleEnsemble> {
    if count < 2 {
        return Err(Error::invalid(format!(
            "baseline needs at least 2 vectors, got {count}"
        )));
    }
    let states: Vec<StateVector> = (0..count)
        .map(|i| random_state(dim, field, &mut member_rng(seed, i as u64)))
        .collect::<Result<_>>()?;
    AngleEnsemble::from_raw(pairwise_angles(&states)?, bins)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorPoint {
    pub epsilon: f64,
    pub error: f64,
}

/// Mean entrywise `|U' - U|` in units of the mean `|U|`, averaged over
/// `samples` independent-kind perturbations per strength. Sample `s` at
/// strength index `e` uses stream `e * samples + s` of `seed`.
pub fn matrix_error_sweep(
    spec: &GroverSpec,
    epsilons: &[f64],
    samples: usize,
    seed: u64,
) -> Result<Vec<ErrorPoint>> {
    if samples == 0 {
        return Err(Error::invalid(
            "error sweep needs at least one sample per epsilon",
        ));
    }
    if let Some(bad) = epsilons.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
        return Err(Error::invalid(format!(
            "epsilon must be positive, got {bad}"
        )));
    }
    let exact = build_grover(spec);
    let scale = exact.mean_abs_entry();
    epsilons
        .iter()
        .enumerate()
        .map(|(e, &epsilon)| {
            let errors: Vec<f64> = (0..samples)
                .into_par_iter()
                .map(|s| {
                    let mut rng = member_rng(seed, (e * samples + s) as u64);
                    let perturbed = perturbed_grover_with(spec, epsilon, &mut rng)?;
                    Ok(perturbed.sub(&exact)?.mean_abs_entry() / scale)
                })
                .collect::<Result<_>>()?;
            Ok(ErrorPoint {
                epsilon,
                error: errors.iter().sum::<f64>() / samples as f64,
            })
        })
        .collect()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::invalid("slope fit needs at least two points"));
    }
    if points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(Error::invalid("log-log fit needs positive coordinates"));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("log-log fit needs distinct abscissae"));
    }
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{haar_unitary, random_state_seeded, Complex64};
    use crate::rng::rng_from_seed;
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    #[test]
    fn identical_evolution_keeps_fidelity_one() {
        let u = haar_unitary(16, &mut rng_from_seed(1));
        let psi = random_state_seeded(16, Field::Complex, 2).unwrap();
        let s = overlap_series(&u, &u, &psi, 50).unwrap();
        assert_eq!(s.iterations, (1..=50).collect::<Vec<_>>());
        assert!(s.fidelities.iter().all(|f| (f - 1.0).abs() < 1e-12));
    }

    #[test]
    fn overlap_rejects_bad_inputs() {
        let u = ComplexMatrix::identity(4);
        let v = ComplexMatrix::identity(2);
        let psi = StateVector::basis(4, 0).unwrap();
        assert!(matches!(
            overlap_series(&u, &v, &psi, 3),
            Err(Error::DimensionMismatch { .. })
        ));
        let unnormalized = psi.scaled(Complex64::new(2.0, 0.0));
        assert!(overlap_series(&u, &u, &unnormalized, 3).is_err());
    }

    #[test]
    fn constant_series_has_flat_spectrum() {
        let s = OverlapSeries {
            iterations: (1..=32).collect(),
            fidelities: vec![0.7; 32],
        };
        let spec = fourier_magnitude(&s).unwrap();
        assert_eq!(spec.len(), 17);
        assert!(spec.iter().all(|&(_, m)| m < 1e-15));
        assert_eq!(spectral_peakedness(&spec, 3), 0.0);
    }

    #[test]
    fn cosine_gives_single_peak() {
        let len = 200;
        let f0 = 0.1;
        let s = OverlapSeries {
            iterations: (1..=len).collect(),
            fidelities: (1..=len)
                .map(|k| 0.5 + 0.3 * (TAU * f0 * k as f64).cos())
                .collect(),
        };
        let spec = fourier_magnitude(&s).unwrap();
        let (fpeak, mpeak) = spec
            .iter()
            .cloned()
            .fold((0.0, 0.0), |b, p| if p.1 > b.1 { p } else { b });
        assert!((fpeak - f0).abs() < 1e-12);
        assert!((mpeak - 0.15).abs() < 1e-12);
        assert!(spectral_peakedness(&spec, 1) > 0.99);
    }

    #[test]
    fn off_grid_line_stays_peaked_and_noise_does_not() {
        use rand::Rng;
        let len = 500;
        let line = OverlapSeries {
            iterations: (1..=len).collect(),
            fidelities: (1..=len)
                .map(|k| (TAU * 0.1234567 * k as f64).cos())
                .collect(),
        };
        assert!(spectral_peakedness(&fourier_magnitude(&line).unwrap(), 3) > 0.8);
        let mut rng = crate::rng::rng_from_seed(3);
        let noise = OverlapSeries {
            iterations: (1..=len).collect(),
            fidelities: (0..len).map(|_| rng.random::<f64>()).collect(),
        };
        assert!(spectral_peakedness(&fourier_magnitude(&noise).unwrap(), 3) < 0.15);
    }

    #[test]
    fn short_series_rejected() {
        let s = OverlapSeries {
            iterations: (1..=4).collect(),
            fidelities: vec![1.0; 4],
        };
        assert!(fourier_magnitude(&s).is_err());
    }

    #[test]
    fn angles_of_planar_vectors() {
        let v = |theta: f64| {
            StateVector::new(vec![
                Complex64::new(theta.cos(), 0.0),
                Complex64::new(theta.sin(), 0.0),
            ])
            .unwrap()
        };
        assert_eq!(angle(&v(0.3), &v(0.3)).unwrap(), 0.0);
        assert!((angle(&v(0.0), &v(FRAC_PI_2)).unwrap() - FRAC_PI_2).abs() < 1e-15);
        for beta in [0.01, 0.25, 0.7, 1.2, 1.5] {
            assert!(
                (angle(&v(0.1), &v(0.1 + beta)).unwrap() - beta).abs() < 1e-12,
                "{beta}"
            );
        }
        // Beyond pi/2 the modulus folds the angle back.
        assert!((angle(&v(0.0), &v(PI - 0.2)).unwrap() - 0.2).abs() < 1e-12);
        let zero = StateVector::new(vec![Complex64::new(0.0, 0.0); 2]).unwrap();
        assert_eq!(angle(&zero, &v(0.0)), Err(Error::ZeroVector));
    }

    #[test]
    fn two_matrix_ensemble_unfolds_to_one() {
        let mut rng = rng_from_seed(5);
        let mats = vec![haar_unitary(8, &mut rng), haar_unitary(8, &mut rng)];
        let psi = random_state_seeded(8, Field::Complex, 1).unwrap();
        let ens = angle_ensemble(&mats, &psi, 10).unwrap();
        assert_eq!(ens.unfolded, vec![1.0]);
        assert!(matches!(
            angle_ensemble(&mats[..1], &psi, 10),
            Err(Error::TooFewMatrices(1))
        ));
    }

    #[test]
    fn baseline_concentrates_near_right_angle() {
        let ens = random_vector_baseline(1024, 20, Field::Real, 3, 50).unwrap();
        assert_eq!(ens.raw_angles.len(), 190);
        assert!(ens.mean_angle > 1.4);
        assert!((ens.unfolded.iter().sum::<f64>() / 190.0 - 1.0).abs() < 1e-12);
        let two = random_vector_baseline(16, 2, Field::Complex, 3, 5).unwrap();
        assert_eq!(two.unfolded, vec![1.0]);
    }

    #[test]
    fn slope_fit() {
        let pts: Vec<(f64, f64)> = [1e-3, 1e-2, 1e-1]
            .iter()
            .map(|&x: &f64| (x, 3.0 * x.powf(1.5)))
            .collect();
        assert!((loglog_slope(&pts).unwrap() - 1.5).abs() < 1e-12);
        assert!(loglog_slope(&pts[..1]).is_err());
        assert!(loglog_slope(&[(1.0, 1.0), (1.0, 2.0)]).is_err());
    }

    #[test]
    fn error_sweep_shrinks_with_epsilon() {
        let spec = GroverSpec::new(3, 1).unwrap();
        let pts = matrix_error_sweep(&spec, &[1e-6, 1e-3], 3, 7).unwrap();
        assert!(pts[0].error < 1e-4);
        assert!(pts[0].error < pts[1].error);
        assert!(matrix_error_sweep(&spec, &[0.0], 3, 7).is_err());
    }
}
