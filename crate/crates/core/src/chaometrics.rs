//! Spectral statistics: unfolded eigenphase spacings, eigenvector
//! intensities, reference laws, and distribution distances.

use std::f64::consts::{PI, TAU};

use libm::erf;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::EigenSystem;

pub const DEFAULT_BINS: usize = 50;

/// A pronounced histogram peak exceeds this multiple of the median density.
pub const PEAK_FACTOR: f64 = 2.0;

/// Normalized histogram: `sum(density * width) == 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub densities: Vec<f64>,
    pub sample_count: usize,
}

impl Histogram {
    /// Uniform bins over the observed range of `sample`. A constant sample
    /// gets a unit-width range centered on its value.
    pub fn from_sample(sample: &[f64], bins: usize) -> Result<Self> {
        let (lo, hi) = finite_range(sample)?;
        let (lo, hi) = if hi > lo {
            (lo, hi)
        } else {
            (lo - 0.5, hi + 0.5)
        };
        Self::with_range(sample, bins, lo, hi)
    }

    /// Uniform bins on `[lo, hi]`; values outside are clamped into the end bins.
    pub fn with_range(sample: &[f64], bins: usize, lo: f64, hi: f64) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::EmptySample);
        }
        if bins == 0 || !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::invalid(format!(
                "bad histogram layout: {bins} bins on [{lo}, {hi}]"
            )));
        }
        let width = (hi - lo) / bins as f64;
        let mut counts = vec![0usize; bins];
        for &x in sample {
            let b = ((x - lo) / width).floor();
            let b = if b.is_nan() {
                0
            } else {
                (b.max(0.0) as usize).min(bins - 1)
            };
            counts[b] += 1;
        }
        let total = sample.len() as f64;
        Ok(Self {
            bin_edges: (0..=bins).map(|i| lo + i as f64 * width).collect(),
            densities: counts.iter().map(|&c| c as f64 / (total * width)).collect(),
            sample_count: sample.len(),
        })
    }

    pub fn bins(&self) -> usize {
        self.densities.len()
    }

    pub fn bin_centers(&self) -> Vec<f64> {
        self.bin_edges
            .windows(2)
            .map(|w| 0.5 * (w[0] + w[1]))
            .collect()
    }

    pub fn integral(&self) -> f64 {
        self.bin_edges
            .windows(2)
            .zip(&self.densities)
            .map(|(w, d)| d * (w[1] - w[0]))
            .sum()
    }

    /// Local maxima whose density exceeds `factor` times the median bin
    /// density. A maximum is strictly above its left neighbor and not below
    /// its right one, so a flat top counts once.
    pub fn count_peaks(&self, factor: f64) -> usize {
        let mut sorted = self.densities.clone();
        sorted.sort_by(f64::total_cmp);
        let mid = sorted.len() / 2;
        let median = if sorted.len() % 2 == 0 {
            0.5 * (sorted[mid - 1] + sorted[mid])
        } else {
            sorted[mid]
        };
        let threshold = factor * median;
        let d = &self.densities;
        (0..d.len())
            .filter(|&i| {
                let left = if i == 0 { f64::NEG_INFINITY } else { d[i - 1] };
                let right = if i + 1 == d.len() {
                    f64::NEG_INFINITY
                } else {
                    d[i + 1]
                };
                d[i] > threshold && d[i] > left && d[i] >= right
            })
            .count()
    }
}

fn finite_range(sample: &[f64]) -> Result<(f64, f64)> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let lo = sample.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = sample.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !lo.is_finite() || !hi.is_finite() {
        return Err(Error::invalid("sample contains non-finite values"));
    }
    Ok((lo, hi))
}

/// Nearest-neighbor spacings rescaled to unit mean.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpacingSample {
    pub spacings: Vec<f64>,
}

impl SpacingSample {
    pub fn mean(&self) -> f64 {
        self.spacings.iter().sum::<f64>() / self.spacings.len() as f64
    }

    pub fn histogram(&self, bins: usize) -> Result<Histogram> {
        Histogram::from_sample(&self.spacings, bins)
    }
}

/// `s_i = N (phi_{i+1} - phi_i) / 2 pi` over the sorted phases, plus the
/// wrap-around gap `phi_1 + 2 pi - phi_N`, divided by their mean.
pub fn eigenphase_spacings(es: &EigenSystem) -> Result<SpacingSample> {
    phase_spacings(&es.phases)
}

/// Same as [`eigenphase_spacings`] for a bare ascending phase list.
pub fn phase_spacings(phases: &[f64]) -> Result<SpacingSample> {
    let n = phases.len();
    if n < 2 {
        return Err(Error::invalid(format!(
            "need at least 2 eigenphases, got {n}"
        )));
    }
    let scale = n as f64 / TAU;
    let mut spacings: Vec<f64> = phases.windows(2).map(|w| (w[1] - w[0]) * scale).collect();
    spacings.push((phases[0] + TAU - phases[n - 1]) * scale);
    let mean = spacings.iter().sum::<f64>() / n as f64;
    for s in &mut spacings {
        *s /= mean;
    }
    Ok(SpacingSample { spacings })
}

/// Wigner surmise for the orthogonal ensemble, `(pi s / 2) exp(-pi s^2 / 4)`.
pub fn wigner_dyson_pdf(s: f64) -> f64 {
    if s < 0.0 {
        return 0.0;
    }
    0.5 * PI * s * (-0.25 * PI * s * s).exp()
}

pub fn wigner_dyson_cdf(s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    1.0 - (-0.25 * PI * s * s).exp()
}

pub fn poisson_pdf(s: f64) -> f64 {
    if s < 0.0 {
        0.0
    } else {
        (-s).exp()
    }
}

pub fn poisson_cdf(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else {
        1.0 - (-s).exp()
    }
}

/// `y = N |c_i|^2` for every component of every eigenvector, column by column.
pub fn eigenvector_component_sample(es: &EigenSystem) -> Vec<f64> {
    let n = es.dim();
    let scale = n as f64;
    (0..n)
        .flat_map(|k| (0..n).map(move |i| scale * es.vectors[(i, k)].norm_sqr()))
        .collect()
}

/// `exp(-y/2) / sqrt(2 pi y)`, defined for `y > 0`.
pub fn porter_thomas_pdf(y: f64) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::DomainError {
            function: "porter_thomas_pdf",
            value: y,
        });
    }
    Ok((-0.5 * y).exp() / (TAU * y).sqrt())
}

/// `erf(sqrt(y/2))`, zero for `y <= 0`.
pub fn porter_thomas_cdf(y: f64) -> f64 {
    if y <= 0.0 {
        return 0.0;
    }
    if y.is_infinite() {
        return 1.0;
    }
    erf((0.5 * y).sqrt())
}

/// Largest distance in the complex plane between an eigenvalue and the
/// nearest `m`-th root of unity.
pub fn root_of_unity_defect(es: &EigenSystem, m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::invalid("root order must be at least 1"));
    }
    let step = TAU / m as f64;
    Ok(es
        .phases
        .iter()
        .map(|&phi| {
            let theta = -phi;
            let offset = theta - (theta / step).round() * step;
            2.0 * (0.5 * offset).sin().abs()
        })
        .fold(0.0, f64::max))
}

/// One-sample Kolmogorov-Smirnov statistic `sup_x |F_n(x) - F(x)|`.
pub fn ks_distance(sample: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut sup = 0.0f64;
    let mut i = 0;
    while i < sorted.len() {
        // Ties: the empirical cdf jumps once over the whole run.
        let x = sorted[i];
        let mut j = i;
        while j < sorted.len() && sorted[j] == x {
            j += 1;
        }
        let f = cdf(x);
        sup = sup
            .max((f - i as f64 / n).abs())
            .max((j as f64 / n - f).abs());
        i = j;
    }
    Ok(sup)
}

/// Two-sample Kolmogorov-Smirnov statistic.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut sup = 0.0f64;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        sup = sup.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(sup)
}
