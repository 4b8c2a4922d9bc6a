//! Coherent perturbations of Grover's algorithm and the QFT.
//!
//! Rotation layers are tensor products of one small orthogonal rotation per
//! qubit, with angles uniform in `[-eps/2, eps/2]`. Draw order is part of the
//! contract: layers `V_1, ..., V_p` in that order, qubit 0 first within a
//! layer; QFT phase errors in circuit time order (`S_{0,1}, S_{0,2}, ...`).

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Uniform};
use serde::{Deserialize, Serialize};

use crate::algorithms::{grover_circuit, qft_circuit_with, qft_phase, GroverSpec};
use crate::error::{Error, Result};
use crate::linalg::{tensor_product, ComplexMatrix};
use crate::rng::rng_from_seed;

pub use crate::algorithms::single_qubit_rotation;

/// Largest `p` for which the digital family (2^p matrices) is built.
pub const MAX_DIGITAL_ITERATIONS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PerturbationKind {
    /// Fresh rotation layer for every `DO` factor.
    Independent,
    /// One layer `V+` or its inverse `V-` at every slot; all 2^p choices.
    Digital,
    /// Relative phase noise on the QFT conditional-phase gates.
    QftPhase,
}

impl PerturbationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PerturbationKind::Independent => "independent",
            PerturbationKind::Digital => "digital",
            PerturbationKind::QftPhase => "qft-phase",
        }
    }
}

impl fmt::Display for PerturbationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PerturbationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "independent" => Ok(Self::Independent),
            "digital" => Ok(Self::Digital),
            "qft-phase" => Ok(Self::QftPhase),
            other => Err(Error::invalid(format!(
                "unknown perturbation kind `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationSpec {
    pub kind: PerturbationKind,
    /// Radians for rotations, relative fraction for QFT phases.
    pub epsilon: f64,
    pub seed: u64,
}

impl PerturbationSpec {
    pub fn new(kind: PerturbationKind, epsilon: f64, seed: u64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::invalid(format!(
                "epsilon must lie in (0, 1], got {epsilon}"
            )));
        }
        Ok(Self {
            kind,
            epsilon,
            seed,
        })
    }
}

fn check_strength(epsilon: f64) -> Result<()> {
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::invalid(format!(
            "perturbation strength must be >= 0, got {epsilon}"
        )));
    }
    Ok(())
}

/// `n` uniform angles in `[-eps/2, eps/2]`.
pub fn draw_layer_angles<R: Rng + ?Sized>(n: usize, epsilon: f64, rng: &mut R) -> Result<Vec<f64>> {
    check_strength(epsilon)?;
    if epsilon == 0.0 {
        // Keep the draw count independent of epsilon.
        return Ok((0..n)
            .map(|_| {
                let _: u64 = rng.random();
                0.0
            })
            .collect());
    }
    let dist = Uniform::new_inclusive(-epsilon / 2.0, epsilon / 2.0)
        .map_err(|e| Error::invalid(e.to_string()))?;
    Ok((0..n).map(|_| dist.sample(rng)).collect())
}

/// `O(2, phi_1) (x) ... (x) O(2, phi_n)`.
pub fn rotation_layer_matrix(angles: &[f64]) -> Result<ComplexMatrix> {
    let (first, rest) = angles
        .split_first()
        .ok_or_else(|| Error::invalid("rotation layer needs at least one qubit"))?;
    Ok(rest
        .iter()
        .fold(single_qubit_rotation(*first), |acc, &phi| {
            tensor_product(&acc, &single_qubit_rotation(phi))
        }))
}

pub fn random_rotation_layer<R: Rng + ?Sized>(
    n: usize,
    epsilon: f64,
    rng: &mut R,
) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::invalid("rotation layer needs at least one qubit"));
    }
    rotation_layer_matrix(&draw_layer_angles(n, epsilon, rng)?)
}

/// Angles of `V_1, ..., V_p` for the independent kind.
pub fn independent_layers<R: Rng + ?Sized>(
    spec: &GroverSpec,
    epsilon: f64,
    rng: &mut R,
) -> Result<Vec<Vec<f64>>> {
    (0..spec.p)
        .map(|_| draw_layer_angles(spec.n, epsilon, rng))
        .collect()
}

/// `U_G' = (D O) V_1 ... (D O) V_p H` with independent layers.
pub fn perturbed_grover(spec: &GroverSpec, pert: &PerturbationSpec) -> Result<ComplexMatrix> {
    if pert.kind != PerturbationKind::Independent {
        return Err(Error::KindMismatch {
            expected: PerturbationKind::Independent.as_str(),
            found: pert.kind.as_str(),
        });
    }
    perturbed_grover_with(spec, pert.epsilon, &mut rng_from_seed(pert.seed))
}

/// Independent-kind perturbed Grover drawing from a caller-owned stream.
pub fn perturbed_grover_with<R: Rng + ?Sized>(
    spec: &GroverSpec,
    epsilon: f64,
    rng: &mut R,
) -> Result<ComplexMatrix> {
    let layers = independent_layers(spec, epsilon, rng)?;
    Ok(grover_circuit(spec, &layers)?.unitary())
}

/// All 2^p digital perturbations. Member `b` uses `V-` at slot `i`
/// (factor `V_{i+1}`) when bit `p-1-i` of `b` is set, so member 0 is all
/// `V+` and member 1 differs only in the last slot.
pub fn digital_grover_family(
    spec: &GroverSpec,
    epsilon: f64,
    seed: u64,
) -> Result<Vec<ComplexMatrix>> {
    if spec.p > MAX_DIGITAL_ITERATIONS {
        return Err(Error::FamilyTooLarge {
            p: spec.p,
            max: MAX_DIGITAL_ITERATIONS,
        });
    }
    let plus = draw_layer_angles(spec.n, epsilon, &mut rng_from_seed(seed))?;
    let minus: Vec<f64> = plus.iter().map(|a| -a).collect();
    use rayon::prelude::*;
    (0..1usize << spec.p)
        .into_par_iter()
        .map(|b| {
            let layers: Vec<Vec<f64>> = (0..spec.p)
                .map(|i| {
                    if (b >> (spec.p - 1 - i)) & 1 == 1 {
                        minus.clone()
                    } else {
                        plus.clone()
                    }
                })
                .collect();
            Ok(grover_circuit(spec, &layers)?.unitary())
        })
        .collect()
}

/// QFT with each conditional phase `pi/2^(k-j)` scaled by `1 + delta_jk`,
/// `delta_jk` uniform in `[-eps/2, eps/2]`.
pub fn perturbed_qft<R: Rng + ?Sized>(
    n: usize,
    epsilon: f64,
    rng: &mut R,
) -> Result<ComplexMatrix> {
    if n < 2 {
        return Err(Error::invalid(format!(
            "perturbed QFT needs n >= 2, got {n}"
        )));
    }
    crate::algorithms::QftSpec::new(n, None)?;
    let pairs = n * (n - 1) / 2;
    let deltas = draw_layer_angles(pairs, epsilon, rng)?;
    let mut next = deltas.into_iter();
    let circuit = qft_circuit_with(n, None, |j, k| {
        qft_phase(j, k) * (1.0 + next.next().expect("one draw per gate"))
    });
    Ok(circuit.unitary())
}

pub fn perturbed_qft_seeded(n: usize, pert: &PerturbationSpec) -> Result<ComplexMatrix> {
    if pert.kind != PerturbationKind::QftPhase {
        return Err(Error::KindMismatch {
            expected: PerturbationKind::QftPhase.as_str(),
            found: pert.kind.as_str(),
        });
    }
    perturbed_qft(n, pert.epsilon, &mut rng_from_seed(pert.seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{build_grover, build_qft_closed};
    use crate::linalg::unitarity_defect;
    use crate::rng::member_rng;

    #[test]
    fn rotation_basics() {
        assert_eq!(single_qubit_rotation(0.0), ComplexMatrix::identity(2));
        let q = single_qubit_rotation(std::f64::consts::FRAC_PI_2);
        let expected = ComplexMatrix::from_real(2, &[0.0, 1.0, -1.0, 0.0]).unwrap();
        assert!(q.max_abs_diff(&expected).unwrap() < 1e-16);
        let prod = single_qubit_rotation(0.37)
            .matmul(&single_qubit_rotation(-0.37))
            .unwrap();
        assert!(prod.max_abs_diff(&ComplexMatrix::identity(2)).unwrap() < 1e-15);
    }

    #[test]
    fn layer_is_orthogonal_and_close_to_identity() {
        let mut rng = member_rng(1, 0);
        let n = 5;
        let eps = 1e-3;
        let v = random_rotation_layer(n, eps, &mut rng).unwrap();
        assert_eq!(v.max_imag(), 0.0);
        let vvt = v.matmul(&v.transpose()).unwrap();
        assert!(vvt.max_abs_diff(&ComplexMatrix::identity(32)).unwrap() < 1e-12);
        let dist = v.max_abs_diff(&ComplexMatrix::identity(32)).unwrap();
        assert!(dist <= n as f64 * eps / 2.0 + eps * eps, "{dist}");

        let zero = random_rotation_layer(n, 0.0, &mut rng).unwrap();
        assert_eq!(zero, ComplexMatrix::identity(32));
    }

    #[test]
    fn vanishing_perturbation_recovers_grover() {
        let spec = GroverSpec::new(5, 2).unwrap();
        let pert = PerturbationSpec::new(PerturbationKind::Independent, 1e-15, 3).unwrap();
        let u = perturbed_grover(&spec, &pert).unwrap();
        assert!(u.max_abs_diff(&build_grover(&spec)).unwrap() < 1e-12);
    }

    #[test]
    fn perturbed_grover_is_deterministic_and_orthogonal() {
        let spec = GroverSpec::new(4, 9).unwrap();
        let pert = PerturbationSpec::new(PerturbationKind::Independent, 0.1, 42).unwrap();
        let a = perturbed_grover(&spec, &pert).unwrap();
        let b = perturbed_grover(&spec, &pert).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.max_imag(), 0.0);
        assert!(unitarity_defect(&a) < 1e-12);
        let other = perturbed_grover(&spec, &PerturbationSpec { seed: 43, ..pert }).unwrap();
        assert!(a.max_abs_diff(&other).unwrap() > 1e-6);
    }

    #[test]
    fn perturbed_grover_matches_literal_product() {
        let spec = GroverSpec::new(3, 5).unwrap();
        let eps = 0.2;
        let layers = independent_layers(&spec, eps, &mut rng_from_seed(8)).unwrap();
        let do_ = crate::algorithms::diffusion(3)
            .unwrap()
            .matmul(&crate::algorithms::oracle(3, 5).unwrap())
            .unwrap();
        // (DO) V_1 (DO) V_2 H, assembled left to right.
        let mut expected = ComplexMatrix::identity(8);
        for angles in &layers {
            expected = expected
                .matmul(&do_)
                .unwrap()
                .matmul(&rotation_layer_matrix(angles).unwrap())
                .unwrap();
        }
        expected = expected
            .matmul(&crate::algorithms::hadamard_all(3).unwrap())
            .unwrap();
        let got = perturbed_grover_with(&spec, eps, &mut rng_from_seed(8)).unwrap();
        assert!(got.max_abs_diff(&expected).unwrap() < 1e-13);
    }

    #[test]
    fn kind_mismatch() {
        let spec = GroverSpec::new(3, 1).unwrap();
        let pert = PerturbationSpec::new(PerturbationKind::Digital, 0.1, 0).unwrap();
        assert!(matches!(
            perturbed_grover(&spec, &pert),
            Err(Error::KindMismatch { .. })
        ));
        assert!(matches!(
            perturbed_qft_seeded(3, &pert),
            Err(Error::KindMismatch { .. })
        ));
    }

    #[test]
    fn epsilon_validation() {
        assert!(PerturbationSpec::new(PerturbationKind::Independent, 0.0, 0).is_err());
        assert!(PerturbationSpec::new(PerturbationKind::Independent, 1.5, 0).is_err());
        assert!(PerturbationSpec::new(PerturbationKind::Independent, 1.0, 0).is_ok());
        assert!(random_rotation_layer(2, -0.1, &mut rng_from_seed(0)).is_err());
    }

    #[test]
    fn digital_family_enumeration() {
        let spec = GroverSpec::new(2, 1).unwrap();
        assert_eq!(spec.p, 1);
        let fam = digital_grover_family(&spec, 0.1, 5).unwrap();
        assert_eq!(fam.len(), 2);
        let plus = draw_layer_angles(2, 0.1, &mut rng_from_seed(5)).unwrap();
        let minus: Vec<f64> = plus.iter().map(|a| -a).collect();
        let do_h = |angles: &[f64]| {
            crate::algorithms::diffusion(2)
                .unwrap()
                .matmul(&crate::algorithms::oracle(2, 1).unwrap())
                .unwrap()
                .matmul(&rotation_layer_matrix(angles).unwrap())
                .unwrap()
                .matmul(&crate::algorithms::hadamard_all(2).unwrap())
                .unwrap()
        };
        assert!(fam[0].max_abs_diff(&do_h(&plus)).unwrap() < 1e-14);
        assert!(fam[1].max_abs_diff(&do_h(&minus)).unwrap() < 1e-14);
    }

    #[test]
    fn digital_all_plus_is_uniform_layers() {
        let spec = GroverSpec::new(4, 3).unwrap();
        let fam = digital_grover_family(&spec, 0.1, 9).unwrap();
        assert_eq!(fam.len(), 1 << spec.p);
        let plus = draw_layer_angles(4, 0.1, &mut rng_from_seed(9)).unwrap();
        let uniform = grover_circuit(&spec, &vec![plus; spec.p])
            .unwrap()
            .unitary();
        assert_eq!(fam[0], uniform);
        for m in &fam {
            assert!(unitarity_defect(m) < 1e-12);
        }
    }

    #[test]
    fn digital_family_size_limit() {
        let spec = GroverSpec::new(5, 0).unwrap().with_iterations(13).unwrap();
        assert!(matches!(
            digital_grover_family(&spec, 0.1, 0),
            Err(Error::FamilyTooLarge { p: 13, .. })
        ));
    }

    #[test]
    fn perturbed_qft_limits() {
        let mut rng = rng_from_seed(4);
        let exact = perturbed_qft(5, 0.0, &mut rng).unwrap();
        assert!(exact.max_abs_diff(&build_qft_closed(5).unwrap()).unwrap() < 1e-12);
        let noisy = perturbed_qft(5, 0.1, &mut rng).unwrap();
        assert!(unitarity_defect(&noisy) < 1e-12);
        assert!(noisy.max_abs_diff(&exact).unwrap() > 1e-6);
        assert!(perturbed_qft(1, 0.1, &mut rng).is_err());
    }

    #[test]
    fn kind_parsing() {
        for k in [
            PerturbationKind::Independent,
            PerturbationKind::Digital,
            PerturbationKind::QftPhase,
        ] {
            assert_eq!(k.as_str().parse::<PerturbationKind>().unwrap(), k);
        }
        assert!("analog".parse::<PerturbationKind>().is_err());
    }
}
