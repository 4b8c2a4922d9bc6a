use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde_json::{json, Value};

use super::output::{emit, Cell, Table};
use super::{Algorithm, Basis, CliError, Command, CommonArgs, ExperimentConfig, RunReport};
use crate::algorithms::{
    build_approximate_qft, build_grover, build_qft_circuit, build_qft_closed, GroverSpec, QftSpec,
    MAX_QUBITS,
};
use crate::chaometrics::{
    eigenphase_spacings, eigenvector_component_sample, ks_distance, poisson_cdf, porter_thomas_cdf,
    root_of_unity_defect, wigner_dyson_cdf, Histogram, PEAK_FACTOR,
};
use crate::dynamics::{
    angle_ensemble, fourier_magnitude, loglog_slope, matrix_error_sweep, overlap_series,
    random_vector_baseline, spectral_peakedness,
};
use crate::linalg::{
    eig_unitary_with, random_state, ComplexMatrix, EigOptions, EigenSystem, Field, StateVector,
};
use crate::perturbations::{
    digital_grover_family, perturbed_grover_with, perturbed_qft, PerturbationKind,
};
use crate::rng::{member_rng, STATE_STREAM};

/// Eigenvalues closer than this to +1 or -1 count as trivial.
const TRIVIAL_EIGENVALUE_DISTANCE: f64 = 1e-6;

pub(super) fn dispatch(command: &Command) -> Result<RunReport, CliError> {
    let files = match command {
        Command::Spectrum(a) => spectrum(&config("spectrum", a)?)?,
        Command::EvecStats(a) => evec_stats(&config("evec-stats", &a.common)?, a.basis)?,
        Command::SymSplit(a) => sym_split(&config("sym-split", &a.common)?, a.n_min, a.n_max)?,
        Command::Overlap(a) => overlap(&config("overlap", a)?)?,
        Command::Angles(a) => angles(&config("angles", a)?)?,
        Command::ErrorSweep(a) => {
            error_sweep(&config("error-sweep", &a.common)?, a.samples, &a.epsilons)?
        }
        Command::Roots(a) => roots(&config("roots", &a.common)?, a.max_root)?,
        Command::QftCheck(a) => qft_check(&config("qft-check", a)?)?,
    };
    Ok(RunReport { files })
}

fn config(name: &'static str, a: &CommonArgs) -> Result<ExperimentConfig, CliError> {
    let c = ExperimentConfig::from_common(name, a)?;
    c.validate_for()?;
    Ok(c)
}

fn grover_spec(c: &ExperimentConfig) -> Result<GroverSpec, CliError> {
    Ok(GroverSpec::new(c.n, c.require_grover()?)?)
}

fn exact_unitary(c: &ExperimentConfig) -> Result<ComplexMatrix, CliError> {
    Ok(match c.algorithm {
        Algorithm::Grover => build_grover(&grover_spec(c)?),
        Algorithm::Qft => build_qft_circuit(c.n)?,
    })
}

fn initial_state(c: &ExperimentConfig) -> Result<StateVector, CliError> {
    let field = match c.algorithm {
        Algorithm::Grover => Field::Real,
        Algorithm::Qft => Field::Complex,
    };
    Ok(random_state(
        c.dim(),
        field,
        &mut member_rng(c.seed, STATE_STREAM),
    )?)
}

fn perturbed(c: &ExperimentConfig, member: u64) -> Result<ComplexMatrix, CliError> {
    let mut rng = member_rng(c.seed, member);
    let eps = c.perturbation.epsilon;
    Ok(match c.algorithm {
        Algorithm::Grover => perturbed_grover_with(&grover_spec(c)?, eps, &mut rng)?,
        Algorithm::Qft => perturbed_qft(c.n, eps, &mut rng)?,
    })
}

fn spectral(c: &ExperimentConfig, basis: Basis) -> Result<EigenSystem, CliError> {
    let opts = match basis {
        Basis::Randomized => EigOptions::randomized(c.seed),
        Basis::Canonical => EigOptions::canonical(),
    };
    Ok(eig_unitary_with(&exact_unitary(c)?, &opts)?)
}

fn spectrum(c: &ExperimentConfig) -> Result<Vec<std::path::PathBuf>, CliError> {
    let es = spectral(c, Basis::Randomized)?;
    let spacings = eigenphase_spacings(&es)?;
    let mut phases = Table::new("spectrum_phases", &["index", "phase"]);
    for (i, &p) in es.phases.iter().enumerate() {
        phases.push(vec![i.into(), p.into()]);
    }
    let mut sp = Table::new("spectrum_spacings", &["index", "spacing"]);
    for (i, &s) in spacings.spacings.iter().enumerate() {
        sp.push(vec![i.into(), s.into()]);
    }
    let nontrivial = es
        .eigenvalues()
        .iter()
        .filter(|l| (*l - 1.0).norm().min((*l + 1.0).norm()) > TRIVIAL_EIGENVALUE_DISTANCE)
        .count();
    let zero_mass = spacings.spacings.iter().filter(|&&s| s < 1e-6).count() as f64
        / spacings.spacings.len() as f64;
    let summary = json!({
        "cluster_sizes": es.clusters.iter().map(|r| r.len()).collect::<Vec<_>>(),
        "eigenvalues_away_from_plus_minus_one": nontrivial,
        "spacing_mass_at_zero": zero_mass,
        "ks_wigner_dyson": ks_distance(&spacings.spacings, wigner_dyson_cdf)?,
        "ks_poisson": ks_distance(&spacings.spacings, poisson_cdf)?,
    });
    emit(c, json!({}), &[phases, sp], summary)
}

fn evec_stats(c: &ExperimentConfig, basis: Basis) -> Result<Vec<std::path::PathBuf>, CliError> {
    let es = spectral(c, basis)?;
    let mut y = eigenvector_component_sample(&es);
    y.sort_by(f64::total_cmp);
    let m = y.len() as f64;
    let mut t = Table::new("evec_stats", &["y", "empirical_cdf", "pt_cdf"]);
    for (i, &v) in y.iter().enumerate() {
        t.push(vec![
            v.into(),
            ((i + 1) as f64 / m).into(),
            porter_thomas_cdf(v).into(),
        ]);
    }
    let summary = json!({
        "samples": y.len(),
        "ks_porter_thomas": ks_distance(&y, porter_thomas_cdf)?,
    });
    emit(c, json!({ "basis": basis }), &[t], summary)
}

fn sym_split(
    c: &ExperimentConfig,
    n_min: usize,
    n_max: usize,
) -> Result<Vec<std::path::PathBuf>, CliError> {
    let xi = c.require_grover()?;
    if n_min < 2 || n_max > MAX_QUBITS || n_min > n_max {
        return Err(CliError::usage(format!(
            "need 2 <= --n-min <= --n-max <= {MAX_QUBITS}, got {n_min}..={n_max}"
        )));
    }
    if xi >= 1 << n_min {
        return Err(CliError::usage(format!(
            "--xi must be below 2^n-min = {}",
            1usize << n_min
        )));
    }
    let rows: Vec<(usize, f64, f64)> = (n_min..=n_max)
        .into_par_iter()
        .map(|n| {
            let (s, a) = crate::linalg::sym_antisym_split(&build_grover(&GroverSpec::new(n, xi)?));
            Ok((n, s, a))
        })
        .collect::<crate::Result<_>>()?;
    let mut t = Table::new("sym_split", &["n", "N", "mean_sym", "mean_antisym"]);
    for &(n, s, a) in &rows {
        t.push(vec![n.into(), (1usize << n).into(), s.into(), a.into()]);
    }
    let fit = |pick: fn(&(usize, f64, f64)) -> f64| -> Option<f64> {
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .map(|r| ((1u64 << r.0) as f64, pick(r)))
            .collect();
        loglog_slope(&pts).ok()
    };
    let summary = json!({
        "slope_sym": fit(|r| r.1),
        "slope_antisym": fit(|r| r.2),
    });
    emit(c, json!({ "n_min": n_min, "n_max": n_max }), &[t], summary)
}

fn overlap(c: &ExperimentConfig) -> Result<Vec<std::path::PathBuf>, CliError> {
    let u = exact_unitary(c)?;
    let up = perturbed(c, 0)?;
    let psi = initial_state(c)?;
    let series = overlap_series(&u, &up, &psi, c.iterations)?;
    let spectrum = fourier_magnitude(&series)?;
    let mut fid = Table::new("overlap_fidelity", &["k", "fidelity"]);
    for (&k, &f) in series.iterations.iter().zip(&series.fidelities) {
        fid.push(vec![k.into(), f.into()]);
    }
    let mut four = Table::new("overlap_spectrum", &["freq", "magnitude"]);
    for &(f, m) in &spectrum {
        four.push(vec![f.into(), m.into()]);
    }
    let min = |pred: fn(usize) -> bool| series.select(pred).fold(f64::INFINITY, f64::min);
    let summary = json!({
        "max_fidelity_from_k2": series.select(|k| k >= 2).fold(f64::NEG_INFINITY, f64::max),
        "min_fidelity": min(|_| true),
        "min_even_fidelity": min(|k| k % 2 == 0),
        "min_odd_fidelity": min(|k| k % 2 == 1),
        "spectral_peakedness_top3": spectral_peakedness(&spectrum, 3),
    });
    emit(c, json!({}), &[fid, four], summary)
}

fn angles(c: &ExperimentConfig) -> Result<Vec<std::path::PathBuf>, CliError> {
    let matrices: Vec<ComplexMatrix> = match c.perturbation.kind {
        PerturbationKind::Digital => {
            digital_grover_family(&grover_spec(c)?, c.perturbation.epsilon, c.seed)?
        }
        _ => (0..c.ensemble_size as u64)
            .into_par_iter()
            .map(|i| perturbed(c, i))
            .collect::<Result<_, _>>()?,
    };
    let psi = initial_state(c)?;
    let ens = angle_ensemble(&matrices, &psi, c.bins)?;
    let field = match c.algorithm {
        Algorithm::Grover => Field::Real,
        Algorithm::Qft => Field::Complex,
    };
    let base = random_vector_baseline(c.dim(), matrices.len(), field, c.seed, c.bins)?;
    let edges = &ens.histogram.bin_edges;
    let base_on_grid = Histogram::with_range(&base.unfolded, c.bins, edges[0], edges[c.bins])?;
    let mut t = Table::new("angles", &["bin_center", "density", "baseline_density"]);
    for ((x, d), b) in ens
        .histogram
        .bin_centers()
        .into_iter()
        .zip(&ens.histogram.densities)
        .zip(&base_on_grid.densities)
    {
        t.push(vec![x.into(), (*d).into(), (*b).into()]);
    }
    let summary = json!({
        "matrices": matrices.len(),
        "mean_angle": ens.mean_angle,
        "unfolded_std": ens.unfolded_std(),
        "baseline_unfolded_std": base.unfolded_std(),
        "peaks": ens.histogram.count_peaks(PEAK_FACTOR),
        "baseline_peaks": base.histogram.count_peaks(PEAK_FACTOR),
        "peak_factor": PEAK_FACTOR,
    });
    emit(c, json!({}), &[t], summary)
}

fn error_sweep(
    c: &ExperimentConfig,
    samples: usize,
    epsilons: &[f64],
) -> Result<Vec<std::path::PathBuf>, CliError> {
    if samples == 0 || epsilons.is_empty() {
        return Err(CliError::usage(
            "--samples and --epsilons must be non-empty",
        ));
    }
    let points = matrix_error_sweep(&grover_spec(c)?, epsilons, samples, c.seed)?;
    let mut t = Table::new("error_sweep", &["epsilon", "error"]);
    for p in &points {
        t.push(vec![p.epsilon.into(), p.error.into()]);
    }
    let pts: Vec<(f64, f64)> = points.iter().map(|p| (p.epsilon, p.error)).collect();
    let summary = json!({ "loglog_slope": loglog_slope(&pts).ok() });
    emit(
        c,
        json!({ "samples": samples, "epsilons": epsilons }),
        &[t],
        summary,
    )
}

fn roots(c: &ExperimentConfig, max_root: usize) -> Result<Vec<std::path::PathBuf>, CliError> {
    if max_root == 0 {
        return Err(CliError::usage("--max-root must be positive"));
    }
    let es = spectral(c, Basis::Randomized)?;
    let mut t = Table::new("roots", &["m", "defect"]);
    for m in 1..=max_root {
        t.push(vec![m.into(), root_of_unity_defect(&es, m)?.into()]);
    }
    emit(c, json!({ "max_root": max_root }), &[t], Value::Null)
}

fn qft_check(c: &ExperimentConfig) -> Result<Vec<std::path::PathBuf>, CliError> {
    let circuit = build_qft_circuit(c.n)?;
    let closed = build_qft_closed(c.n)?;
    let u2 = circuit.matmul(&circuit)?;
    let u4 = u2.matmul(&u2)?;
    let es = eig_unitary_with(&circuit, &EigOptions::randomized(c.seed))?;
    let phase_defect = es
        .phases
        .iter()
        .map(|&p| {
            [0.0, FRAC_PI_2, -FRAC_PI_2, PI, -PI]
                .iter()
                .map(|t| (p - t).abs())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    let mut res = Table::new("qft_check_residuals", &["quantity", "value"]);
    res.push(vec![
        Cell::Text("circuit_vs_closed"),
        circuit.max_abs_diff(&closed)?.into(),
    ]);
    res.push(vec![
        Cell::Text("u4_minus_identity"),
        u4.max_abs_diff(&ComplexMatrix::identity(c.dim()))?.into(),
    ]);
    res.push(vec![Cell::Text("eigenphase_defect"), phase_defect.into()]);
    let mut cut = Table::new("qft_check_cutoff", &["cutoff", "error"]);
    for m in 0..c.n {
        let approx = build_approximate_qft(&QftSpec::new(c.n, Some(m))?);
        cut.push(vec![m.into(), approx.sub(&closed)?.operator_norm().into()]);
    }
    emit(c, json!({}), &[res, cut], Value::Null)
}
