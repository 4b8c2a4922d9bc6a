//! Exact unitaries of Grover search and the quantum Fourier transform.
//!
//! Basis index convention: qubit 0 is the most significant bit, so the basis
//! state `|b_0 b_1 ... b_{n-1}>` has index `sum_q b_q 2^(n-1-q)` and the
//! Kronecker product `A_0 (x) A_1 (x) ... (x) A_{n-1}` acts on qubit `q` with `A_q`.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{tensor_product, Complex64, ComplexMatrix, StateVector};

/// Largest register handled (dense 4096 x 4096 matrices).
pub const MAX_QUBITS: usize = 12;

fn check_qubits(n: usize, min: usize) -> Result<usize> {
    if n < min || n > MAX_QUBITS {
        return Err(Error::invalid(format!(
            "qubit count must be in {min}..={MAX_QUBITS}, got {n}"
        )));
    }
    Ok(1 << n)
}

/// One elementary operation on an `n`-qubit register.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    Hadamard(usize),
    /// `[[cos a, sin a], [-sin a, cos a]]` on one qubit.
    Rotation {
        qubit: usize,
        angle: f64,
    },
    /// `diag(1, 1, 1, exp(i phase))` on the pair `(j, k)`.
    ConditionalPhase {
        j: usize,
        k: usize,
        phase: f64,
    },
    /// Reverses the order of all qubits.
    BitReversal,
    /// Phase flip of basis state `xi`.
    Oracle {
        xi: usize,
    },
    /// Inversion about the uniform superposition, `D_ij = 2/N - delta_ij`.
    Diffusion,
}

impl Gate {
    /// Applies the gate in place to a state of `n` qubits.
    pub fn apply(&self, n: usize, amps: &mut [Complex64]) {
        let dim = amps.len();
        debug_assert_eq!(dim, 1 << n);
        match *self {
            Gate::Hadamard(q) => apply_single(
                n,
                q,
                amps,
                [
                    [FRAC_1_SQRT_2, FRAC_1_SQRT_2],
                    [FRAC_1_SQRT_2, -FRAC_1_SQRT_2],
                ],
            ),
            Gate::Rotation { qubit, angle } => {
                let (s, c) = angle.sin_cos();
                apply_single(n, qubit, amps, [[c, s], [-s, c]]);
            }
            Gate::ConditionalPhase { j, k, phase } => {
                let mask = bit(n, j) | bit(n, k);
                let factor = Complex64::from_polar(1.0, phase);
                for (i, z) in amps.iter_mut().enumerate() {
                    if i & mask == mask {
                        *z *= factor;
                    }
                }
            }
            Gate::BitReversal => {
                for i in 0..dim {
                    let r = reverse_bits(i, n);
                    if r > i {
                        amps.swap(i, r);
                    }
                }
            }
            Gate::Oracle { xi } => amps[xi] = -amps[xi],
            Gate::Diffusion => {
                let mean = amps.iter().sum::<Complex64>() * (2.0 / dim as f64);
                for z in amps.iter_mut() {
                    *z = mean - *z;
                }
            }
        }
    }

    /// The gate as a full `2^n x 2^n` matrix, single- and two-qubit gates
    /// embedded by tensor products with identities.
    pub fn to_matrix(&self, n: usize) -> ComplexMatrix {
        let dim = 1 << n;
        let real = |v: [f64; 4]| ComplexMatrix::from_real(2, &v).expect("2x2");
        match *self {
            Gate::Hadamard(q) => embed_single(
                n,
                q,
                &real([FRAC_1_SQRT_2, FRAC_1_SQRT_2, FRAC_1_SQRT_2, -FRAC_1_SQRT_2]),
            ),
            Gate::Rotation { qubit, angle } => {
                embed_single(n, qubit, &single_qubit_rotation(angle))
            }
            Gate::ConditionalPhase { j, k, phase } => {
                // I + (exp(i phase) - 1) |1><1|_j (x) |1><1|_k
                let one = real([0.0, 0.0, 0.0, 1.0]);
                let factors: Vec<ComplexMatrix> = (0..n)
                    .map(|q| {
                        if q == j || q == k {
                            one.clone()
                        } else {
                            ComplexMatrix::identity(2)
                        }
                    })
                    .collect();
                let both = kron_chain(&factors);
                let shift = Complex64::from_polar(1.0, phase) - 1.0;
                ComplexMatrix::identity(dim)
                    .add(&both.scale(shift))
                    .expect("same dimension")
            }
            Gate::BitReversal => {
                let mut m = ComplexMatrix::zeros(dim);
                for i in 0..dim {
                    m[(reverse_bits(i, n), i)] = Complex64::new(1.0, 0.0);
                }
                m
            }
            Gate::Oracle { xi } => {
                let mut m = ComplexMatrix::identity(dim);
                m[(xi, xi)] = Complex64::new(-1.0, 0.0);
                m
            }
            Gate::Diffusion => diffusion_matrix(dim),
        }
    }
}

/// `[[cos phi, sin phi], [-sin phi, cos phi]]`.
pub fn single_qubit_rotation(phi: f64) -> ComplexMatrix {
    let (s, c) = phi.sin_cos();
    ComplexMatrix::from_real(2, &[c, s, -s, c]).expect("2x2")
}

fn bit(n: usize, q: usize) -> usize {
    1 << (n - 1 - q)
}

fn reverse_bits(i: usize, n: usize) -> usize {
    if n == 0 {
        return i;
    }
    i.reverse_bits() >> (usize::BITS as usize - n)
}

fn apply_single(n: usize, q: usize, amps: &mut [Complex64], g: [[f64; 2]; 2]) {
    let stride = bit(n, q);
    for base in (0..amps.len()).step_by(2 * stride) {
        for i in base..base + stride {
            let a = amps[i];
            let b = amps[i + stride];
            amps[i] = a * g[0][0] + b * g[0][1];
            amps[i + stride] = a * g[1][0] + b * g[1][1];
        }
    }
}

fn kron_chain(factors: &[ComplexMatrix]) -> ComplexMatrix {
    factors[1..]
        .iter()
        .fold(factors[0].clone(), |acc, f| tensor_product(&acc, f))
}

fn embed_single(n: usize, q: usize, g: &ComplexMatrix) -> ComplexMatrix {
    let factors: Vec<ComplexMatrix> = (0..n)
        .map(|p| {
            if p == q {
                g.clone()
            } else {
                ComplexMatrix::identity(2)
            }
        })
        .collect();
    kron_chain(&factors)
}

/// A gate sequence in time order: `gates[0]` acts first.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub n: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            gates: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn push(&mut self, gate: Gate) -> &mut Self {
        self.gates.push(gate);
        self
    }

    pub fn apply_in_place(&self, amps: &mut [Complex64]) {
        for g in &self.gates {
            g.apply(self.n, amps);
        }
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: psi.dim(),
            });
        }
        let mut out = psi.clone();
        self.apply_in_place(out.amplitudes_mut());
        Ok(out)
    }

    /// The circuit unitary, column `j` obtained by propagating `|j>`.
    pub fn unitary(&self) -> ComplexMatrix {
        let dim = self.dim();
        let columns: Vec<Vec<Complex64>> = (0..dim)
            .into_par_iter()
            .map(|j| {
                let mut col = vec![Complex64::new(0.0, 0.0); dim];
                col[j] = Complex64::new(1.0, 0.0);
                self.apply_in_place(&mut col);
                col
            })
            .collect();
        ComplexMatrix::from_columns(&columns).expect("square by construction")
    }

    /// Dense product of the embedded gate matrices, last gate leftmost.
    /// `O(gates * N^3)`; intended for cross-checks on small registers.
    pub fn unitary_by_products(&self) -> ComplexMatrix {
        self.gates
            .iter()
            .fold(ComplexMatrix::identity(self.dim()), |acc, g| {
                g.to_matrix(self.n).matmul(&acc).expect("same dimension")
            })
    }
}

/// `H = H_0 (x) ... (x) H_{n-1}`.
pub fn hadamard_all(n: usize) -> Result<ComplexMatrix> {
    check_qubits(n, 1)?;
    let h = ComplexMatrix::from_real(
        2,
        &[FRAC_1_SQRT_2, FRAC_1_SQRT_2, FRAC_1_SQRT_2, -FRAC_1_SQRT_2],
    )?;
    Ok(kron_chain(&vec![h; n]))
}

/// Diagonal phase flip `O_ii = 1 - 2 delta_{i xi}`.
pub fn oracle(n: usize, xi: usize) -> Result<ComplexMatrix> {
    let dim = check_qubits(n, 1)?;
    if xi >= dim {
        return Err(Error::IndexOutOfRange { index: xi, dim });
    }
    Ok(Gate::Oracle { xi }.to_matrix(n))
}

/// `D_ij = 2/N - delta_ij`.
pub fn diffusion(n: usize) -> Result<ComplexMatrix> {
    Ok(diffusion_matrix(check_qubits(n, 1)?))
}

fn diffusion_matrix(dim: usize) -> ComplexMatrix {
    let off = 2.0 / dim as f64;
    ComplexMatrix::from_fn(dim, |i, j| {
        Complex64::new(if i == j { off - 1.0 } else { off }, 0.0)
    })
}

/// Rotation angle `theta` with `sin^2 theta = 1/N`.
pub fn grover_angle(n: usize) -> f64 {
    (1.0 / ((1u64 << n) as f64).sqrt()).asin()
}

/// Optimal iteration count `floor(pi / (4 theta))`.
pub fn grover_iterations(n: usize) -> usize {
    (PI / (4.0 * grover_angle(n))).floor() as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct GroverSpec {
    pub n: usize,
    pub xi: usize,
    pub p: usize,
}

impl GroverSpec {
    /// Spec with the optimal iteration count.
    pub fn new(n: usize, xi: usize) -> Result<Self> {
        let dim = check_qubits(n, 2)?;
        if xi >= dim {
            return Err(Error::IndexOutOfRange { index: xi, dim });
        }
        Ok(Self {
            n,
            xi,
            p: grover_iterations(n),
        })
    }

    pub fn with_iterations(self, p: usize) -> Result<Self> {
        if p == 0 {
            return Err(Error::invalid("Grover iteration count must be at least 1"));
        }
        Ok(Self { p, ..self })
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }
}

/// Time-ordered circuit for `(D O) V_1 ... (D O) V_p H`; `layers[i]` holds
/// the rotation angles of `V_{i+1}` (one per qubit), and an empty slice means
/// no perturbation.
pub fn grover_circuit(spec: &GroverSpec, layers: &[Vec<f64>]) -> Result<Circuit> {
    if !layers.is_empty() && layers.len() != spec.p {
        return Err(Error::DimensionMismatch {
            expected: spec.p,
            found: layers.len(),
        });
    }
    let mut c = Circuit::new(spec.n);
    for q in 0..spec.n {
        c.push(Gate::Hadamard(q));
    }
    for slot in (0..spec.p).rev() {
        if let Some(angles) = layers.get(slot) {
            if angles.len() != spec.n {
                return Err(Error::DimensionMismatch {
                    expected: spec.n,
                    found: angles.len(),
                });
            }
            for (qubit, &angle) in angles.iter().enumerate() {
                c.push(Gate::Rotation { qubit, angle });
            }
        }
        c.push(Gate::Oracle { xi: spec.xi });
        c.push(Gate::Diffusion);
    }
    Ok(c)
}

/// `U_G = (D O)^p H`.
pub fn build_grover(spec: &GroverSpec) -> ComplexMatrix {
    grover_circuit(spec, &[])
        .expect("unperturbed circuit")
        .unitary()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct QftSpec {
    pub n: usize,
    /// Drop conditional phases `S_{j,k}` with `k - j > cutoff`.
    pub cutoff: Option<usize>,
}

impl QftSpec {
    pub fn new(n: usize, cutoff: Option<usize>) -> Result<Self> {
        check_qubits(n, 1)?;
        if let Some(m) = cutoff {
            if m > n.saturating_sub(1) {
                return Err(Error::invalid(format!(
                    "QFT cutoff must be at most n - 1 = {}, got {m}",
                    n.saturating_sub(1)
                )));
            }
        }
        Ok(Self { n, cutoff })
    }
}

/// Time-ordered QFT circuit: `H_0, S_{0,1}, ..., S_{0,n-1}, H_1, ...,
/// S_{n-2,n-1}, H_{n-1}`, then the bit reversal `F`. `phase(j, k)` gives the
/// angle of `S_{j,k}`; gates with `k - j > cutoff` are omitted.
pub fn qft_circuit_with(
    n: usize,
    cutoff: Option<usize>,
    mut phase: impl FnMut(usize, usize) -> f64,
) -> Circuit {
    let mut c = Circuit::new(n);
    for j in 0..n {
        c.push(Gate::Hadamard(j));
        for k in j + 1..n {
            if cutoff.is_some_and(|m| k - j > m) {
                continue;
            }
            c.push(Gate::ConditionalPhase {
                j,
                k,
                phase: phase(j, k),
            });
        }
    }
    if n > 1 {
        c.push(Gate::BitReversal);
    }
    c
}

/// Ideal phase `pi / 2^(k - j)` of `S_{j,k}`.
pub fn qft_phase(j: usize, k: usize) -> f64 {
    PI / (1u64 << (k - j)) as f64
}

pub fn build_qft_circuit(n: usize) -> Result<ComplexMatrix> {
    check_qubits(n, 1)?;
    Ok(qft_circuit_with(n, None, qft_phase).unitary())
}

/// `U_lk = exp(2 pi i l k / N) / sqrt(N)`.
pub fn build_qft_closed(n: usize) -> Result<ComplexMatrix> {
    let dim = check_qubits(n, 1)?;
    let norm = 1.0 / (dim as f64).sqrt();
    // Reduce l*k mod N before scaling to keep the phase exact.
    Ok(ComplexMatrix::from_fn(dim, |l, k| {
        Complex64::from_polar(norm, TAU * ((l * k) % dim) as f64 / dim as f64)
    }))
}

pub fn build_approximate_qft(spec: &QftSpec) -> ComplexMatrix {
    qft_circuit_with(spec.n, spec.cutoff, qft_phase).unitary()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{apply, unitarity_defect};

    fn eye(n: usize) -> ComplexMatrix {
        ComplexMatrix::identity(1 << n)
    }

    #[test]
    fn single_hadamard() {
        let h = hadamard_all(1).unwrap();
        let r = FRAC_1_SQRT_2;
        let expected = ComplexMatrix::from_real(2, &[r, r, r, -r]).unwrap();
        assert_eq!(h, expected);
    }

    #[test]
    fn hadamard_entries_follow_bit_parity() {
        for n in 1..=6 {
            let h = hadamard_all(n).unwrap();
            let norm = 1.0 / ((1 << n) as f64).sqrt();
            for i in 0usize..1 << n {
                for j in 0..1 << n {
                    let sign = if (i & j).count_ones() % 2 == 0 {
                        1.0
                    } else {
                        -1.0
                    };
                    assert!((h[(i, j)].re - sign * norm).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn involutions() {
        for n in 1..=7 {
            let h = hadamard_all(n).unwrap();
            let o = oracle(n, (1 << n) - 1).unwrap();
            let d = diffusion(n).unwrap();
            for m in [h, o, d] {
                assert!(m.matmul(&m).unwrap().max_abs_diff(&eye(n)).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn uniform_superposition_from_zero_state() {
        let n = 4;
        let psi = apply(
            &hadamard_all(n).unwrap(),
            &StateVector::basis(16, 0).unwrap(),
        )
        .unwrap();
        assert!(psi
            .amplitudes()
            .iter()
            .all(|z| (z.re - 0.25).abs() < 1e-15 && z.im == 0.0));
    }

    #[test]
    fn oracle_definition() {
        let o = oracle(2, 3).unwrap();
        let expected =
            ComplexMatrix::diagonal(&[1.0, 1.0, 1.0, -1.0].map(|x| Complex64::new(x, 0.0)));
        assert_eq!(o, expected);
        assert!(matches!(
            oracle(2, 4),
            Err(Error::IndexOutOfRange { index: 4, dim: 4 })
        ));
    }

    #[test]
    fn diffusion_small_and_row_sums() {
        let d = diffusion(1).unwrap();
        assert_eq!(
            d,
            ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
        );
        let d = diffusion(5).unwrap();
        for i in 0..32 {
            let s: Complex64 = d.row(i).iter().sum();
            assert!((s.re - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn iteration_counts() {
        assert_eq!(grover_iterations(2), 1);
        assert_eq!(grover_iterations(5), 4);
        // pi / (4 asin(1/sqrt(128))) = 8.8…
        assert_eq!(grover_iterations(7), 8);
        assert!((grover_angle(5) - 0.177_710_6).abs() < 1e-7);
    }

    #[test]
    fn grover_matches_literal_matrix_product() {
        for (n, xi) in [(2, 1), (3, 5), (5, 2)] {
            let spec = GroverSpec::new(n, xi).unwrap();
            let dense_step = diffusion(n)
                .unwrap()
                .matmul(&oracle(n, xi).unwrap())
                .unwrap();
            let mut expected = hadamard_all(n).unwrap();
            for _ in 0..spec.p {
                expected = dense_step.matmul(&expected).unwrap();
            }
            let got = build_grover(&spec);
            assert!(got.max_abs_diff(&expected).unwrap() < 1e-13);
            assert!(got.max_imag() <= 1e-14);
            assert!(unitarity_defect(&got) < 1e-12);
        }
    }

    #[test]
    fn gate_embedding_matches_in_place_application() {
        let n = 4;
        let gates = [
            Gate::Hadamard(1),
            Gate::Rotation {
                qubit: 3,
                angle: 0.4,
            },
            Gate::ConditionalPhase {
                j: 0,
                k: 2,
                phase: 0.9,
            },
            Gate::BitReversal,
            Gate::Oracle { xi: 6 },
            Gate::Diffusion,
        ];
        for g in gates {
            let mut c = Circuit::new(n);
            c.push(g.clone());
            assert!(
                c.unitary().max_abs_diff(&g.to_matrix(n)).unwrap() < 1e-14,
                "{g:?}"
            );
        }
    }

    #[test]
    fn bit_reversal_on_indices() {
        assert_eq!(reverse_bits(0b0011, 4), 0b1100);
        assert_eq!(reverse_bits(0b10110, 5), 0b01101);
        assert_eq!(reverse_bits(1, 1), 1);
    }

    #[test]
    fn qft_single_qubit_is_hadamard() {
        assert_eq!(build_qft_circuit(1).unwrap(), hadamard_all(1).unwrap());
        assert!(
            build_qft_closed(1)
                .unwrap()
                .max_abs_diff(&hadamard_all(1).unwrap())
                .unwrap()
                < 1e-15
        );
    }

    #[test]
    fn qft_circuit_equals_closed_form() {
        for n in 1..=6 {
            let circuit = build_qft_circuit(n).unwrap();
            let closed = build_qft_closed(n).unwrap();
            assert!(circuit.max_abs_diff(&closed).unwrap() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn qft_product_of_embedded_gates_matches() {
        for n in 1..=4 {
            let c = qft_circuit_with(n, None, qft_phase);
            assert!(c.unitary_by_products().max_abs_diff(&c.unitary()).unwrap() < 1e-13);
        }
    }

    #[test]
    fn qft_square_is_index_negation() {
        let n = 4;
        let dim = 16;
        let u = build_qft_closed(n).unwrap();
        let u2 = u.matmul(&u).unwrap();
        for i in 0..dim {
            for j in 0..dim {
                let expected = if i == (dim - j) % dim { 1.0 } else { 0.0 };
                assert!((u2[(i, j)] - Complex64::new(expected, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn approximate_qft_extremes() {
        let n = 5;
        let full = build_approximate_qft(&QftSpec::new(n, Some(n - 1)).unwrap());
        assert_eq!(full, build_qft_circuit(n).unwrap());
        let bare = build_approximate_qft(&QftSpec::new(n, Some(0)).unwrap());
        let expected = Gate::BitReversal
            .to_matrix(n)
            .matmul(&hadamard_all(n).unwrap())
            .unwrap();
        assert!(bare.max_abs_diff(&expected).unwrap() < 1e-14);
        assert!(QftSpec::new(n, Some(n)).is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(GroverSpec::new(1, 0).is_err());
        assert!(matches!(
            GroverSpec::new(3, 8),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(GroverSpec::new(3, 7).unwrap().with_iterations(0).is_err());
        assert_eq!(
            GroverSpec::new(3, 7).unwrap().with_iterations(5).unwrap().p,
            5
        );
    }
}
