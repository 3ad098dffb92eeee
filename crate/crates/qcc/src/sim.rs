//! Dense-matrix verification simulator and noisy shot sampler.
//!
//! Two jobs: (1) build exact unitaries of small circuits so every rewrite in
//! the compiler can be checked for semantic equality, and (2) estimate the
//! success rate of compiled programs under a depolarizing + readout-flip
//! noise model seeded for reproducibility.
//!
//! Qubit `q` owns bit `q` of a basis index (qubit 0 is the least significant
//! bit). Both simulators are capped at 12 qubits, which keeps a dense
//! unitary comfortably under a gigabyte.

use crate::codegen::CompiledProgram;
use crate::error::{QccError, Result};
use crate::ir::{Circuit, Gate, GateKind};
use crate::machine::Machine;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

/// Largest qubit count the dense simulators accept.
pub const MAX_SIM_QUBITS: usize = 12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense complex matrix over `n_qubits` (column-major storage).
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    pub n_qubits: usize,
    pub dim: usize,
    pub(crate) data: Vec<Complex64>,
}

impl UnitaryMatrix {
    pub fn identity(n_qubits: usize) -> UnitaryMatrix {
        assert!(n_qubits <= MAX_SIM_QUBITS, "dense unitary capped at {} qubits", MAX_SIM_QUBITS);
        let dim = 1usize << n_qubits;
        let mut data = vec![ZERO; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = ONE;
        }
        UnitaryMatrix { n_qubits, dim, data }
    }

    /// Basis-permutation matrix: output bit `perm[h]` takes input bit `h`.
    pub fn permutation(perm: &[usize]) -> UnitaryMatrix {
        let n = perm.len();
        let mut m = UnitaryMatrix::identity(n);
        m.data.fill(ZERO);
        for b in 0..m.dim {
            let mut out = 0usize;
            for h in 0..n {
                if b >> h & 1 == 1 {
                    out |= 1 << perm[h];
                }
            }
            m.data[b * m.dim + out] = ONE;
        }
        m
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[col * self.dim + row]
    }

    /// Matrix product `self * rhs`.
    pub fn matmul(&self, rhs: &UnitaryMatrix) -> UnitaryMatrix {
        assert_eq!(self.dim, rhs.dim);
        let dim = self.dim;
        let mut out = vec![ZERO; dim * dim];
        for c in 0..dim {
            for k in 0..dim {
                let v = rhs.data[c * dim + k];
                if v == ZERO {
                    continue;
                }
                for r in 0..dim {
                    out[c * dim + r] += self.data[k * dim + r] * v;
                }
            }
        }
        UnitaryMatrix {
            n_qubits: self.n_qubits,
            dim,
            data: out,
        }
    }

    /// Applies `gate` on the left (column-by-column state update).
    fn apply_gate(&mut self, gate: &Gate) {
        let dim = self.dim;
        for c in 0..dim {
            let col = &mut self.data[c * dim..(c + 1) * dim];
            apply_gate_to_amplitudes(col, gate);
        }
    }
}

/// 2x2 matrix of a single-qubit gate, row-major `[m00, m01, m10, m11]`.
fn one_qubit_matrix(kind: GateKind, angle: Option<f64>) -> [Complex64; 4] {
    let i = Complex64::i();
    let c = |re: f64| Complex64::new(re, 0.0);
    match kind {
        GateKind::H => [
            c(FRAC_1_SQRT_2),
            c(FRAC_1_SQRT_2),
            c(FRAC_1_SQRT_2),
            c(-FRAC_1_SQRT_2),
        ],
        GateKind::X => [ZERO, ONE, ONE, ZERO],
        GateKind::Y => [ZERO, -i, i, ZERO],
        GateKind::Z => [ONE, ZERO, ZERO, c(-1.0)],
        GateKind::S => [ONE, ZERO, ZERO, i],
        GateKind::Sdg => [ONE, ZERO, ZERO, -i],
        GateKind::T => [ONE, ZERO, ZERO, Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)],
        GateKind::Tdg => [
            ONE,
            ZERO,
            ZERO,
            Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4),
        ],
        GateKind::Rx => {
            let t = angle.unwrap() / 2.0;
            [c(t.cos()), -i * t.sin(), -i * t.sin(), c(t.cos())]
        }
        GateKind::Ry => {
            let t = angle.unwrap() / 2.0;
            [c(t.cos()), c(-t.sin()), c(t.sin()), c(t.cos())]
        }
        GateKind::Rz => {
            let t = angle.unwrap() / 2.0;
            [Complex64::from_polar(1.0, -t), ZERO, ZERO, Complex64::from_polar(1.0, t)]
        }
        _ => unreachable!("{:?} is not a one-qubit gate", kind),
    }
}

/// In-place gate application on a state amplitude slice.
fn apply_gate_to_amplitudes(amps: &mut [Complex64], gate: &Gate) {
    match gate.kind {
        GateKind::Measure => {}
        k if k.arity() == 1 => {
            let m = one_qubit_matrix(k, gate.angle);
            let bit = 1usize << gate.qubits[0];
            for b in 0..amps.len() {
                if b & bit == 0 {
                    let (a0, a1) = (amps[b], amps[b | bit]);
                    amps[b] = m[0] * a0 + m[1] * a1;
                    amps[b | bit] = m[2] * a0 + m[3] * a1;
                }
            }
        }
        GateKind::Cnot => {
            let cb = 1usize << gate.qubits[0];
            let tb = 1usize << gate.qubits[1];
            for b in 0..amps.len() {
                if b & cb != 0 && b & tb == 0 {
                    amps.swap(b, b | tb);
                }
            }
        }
        GateKind::Cz => {
            let ab = 1usize << gate.qubits[0];
            let bb = 1usize << gate.qubits[1];
            for b in 0..amps.len() {
                if b & ab != 0 && b & bb != 0 {
                    amps[b] = -amps[b];
                }
            }
        }
        GateKind::Swap => {
            let ab = 1usize << gate.qubits[0];
            let bb = 1usize << gate.qubits[1];
            for b in 0..amps.len() {
                if b & ab != 0 && b & bb == 0 {
                    amps.swap(b, b ^ ab ^ bb);
                }
            }
        }
        GateKind::Xx => {
            // exp(-i * theta * X (x) X): couples |00>-|11> and |01>-|10>.
            let t = gate.angle.unwrap();
            let (cos, msin) = (Complex64::new(t.cos(), 0.0), Complex64::new(0.0, -t.sin()));
            let ab = 1usize << gate.qubits[0];
            let bb = 1usize << gate.qubits[1];
            for b in 0..amps.len() {
                if b & ab == 0 && b & bb == 0 {
                    let (a00, a11) = (amps[b], amps[b | ab | bb]);
                    amps[b] = cos * a00 + msin * a11;
                    amps[b | ab | bb] = cos * a11 + msin * a00;
                    let (a01, a10) = (amps[b | bb], amps[b | ab]);
                    amps[b | bb] = cos * a01 + msin * a10;
                    amps[b | ab] = cos * a10 + msin * a01;
                }
            }
        }
        GateKind::Toffoli => {
            let c1 = 1usize << gate.qubits[0];
            let c2 = 1usize << gate.qubits[1];
            let tb = 1usize << gate.qubits[2];
            for b in 0..amps.len() {
                if b & c1 != 0 && b & c2 != 0 && b & tb == 0 {
                    amps.swap(b, b | tb);
                }
            }
        }
        GateKind::Fredkin => {
            let cb = 1usize << gate.qubits[0];
            let ab = 1usize << gate.qubits[1];
            let bb = 1usize << gate.qubits[2];
            for b in 0..amps.len() {
                if b & cb != 0 && b & ab != 0 && b & bb == 0 {
                    amps.swap(b, b ^ ab ^ bb);
                }
            }
        }
        k => unreachable!("no simulation rule for {:?}", k),
    }
}

/// Exact unitary of a gate list over `n_qubits`. MEASUREs are skipped, so
/// the result is the unitary of the circuit with measurements stripped.
pub fn unitary_of(gates: &[Gate], n_qubits: usize) -> UnitaryMatrix {
    let mut u = UnitaryMatrix::identity(n_qubits);
    for g in gates {
        u.apply_gate(g);
    }
    u
}

/// Exact unitary of a circuit (measurements stripped).
pub fn circuit_unitary(c: &Circuit) -> UnitaryMatrix {
    unitary_of(&c.gates, c.num_qubits)
}

/// Whether `v = exp(i*phi) * u` for some global phase, within `tol` in
/// Frobenius norm. The phase minimizing `||v - exp(i*phi) u||_F` is
/// `arg(tr(u^dagger v))`; the difference is then measured entrywise, which
/// keeps the residual near machine precision for genuinely equivalent
/// matrices instead of losing half the digits to cancellation.
pub fn equivalent_up_to_phase(u: &UnitaryMatrix, v: &UnitaryMatrix, tol: f64) -> bool {
    if u.dim != v.dim {
        return false;
    }
    let mut tr = ZERO;
    for c in 0..u.dim {
        for r in 0..u.dim {
            tr += u.get(r, c).conj() * v.get(r, c);
        }
    }
    // The Frobenius-optimal aligning phase. A vanishing trace means the
    // matrices are orthogonal and any phase exposes the mismatch.
    let phase = if tr.norm() > 0.0 {
        tr / tr.norm()
    } else {
        ONE
    };
    let mut norm_sq = 0.0;
    for c in 0..u.dim {
        for r in 0..u.dim {
            norm_sq += (v.get(r, c) - phase * u.get(r, c)).norm_sqr();
        }
    }
    norm_sq.sqrt() < tol
}

/// Checks that a routed/lowered gate list implements the source circuit.
///
/// The compiled program acts on hardware qubits: program qubit `q` starts at
/// hardware slot `initial_mapping[q]`, and the inserted swap chains move the
/// state initially at slot `h` to slot `hw_permutation[h]`. Equivalence is
/// `U_compiled == P_perm * U_source_embedded` up to global phase.
pub fn routed_equivalent(
    source: &Circuit,
    compiled_gates: &[Gate],
    n_hw: usize,
    initial_mapping: &[usize],
    hw_permutation: &[usize],
    tol: f64,
) -> bool {
    let embedded: Vec<Gate> = source
        .gates
        .iter()
        .filter(|g| g.kind != GateKind::Measure)
        .map(|g| Gate {
            kind: g.kind,
            qubits: g.qubits.iter().map(|&q| initial_mapping[q]).collect(),
            angle: g.angle,
        })
        .collect();
    let u_src = unitary_of(&embedded, n_hw);
    let expected = UnitaryMatrix::permutation(hw_permutation).matmul(&u_src);
    let u_cmp = unitary_of(compiled_gates, n_hw);
    equivalent_up_to_phase(&u_cmp, &expected, tol)
}

/// Per-gate noise rates derived from a machine's calibration.
pub struct NoiseModel<'a> {
    machine: &'a Machine,
}

impl<'a> NoiseModel<'a> {
    pub fn new(machine: &'a Machine) -> NoiseModel<'a> {
        NoiseModel { machine }
    }

    /// Depolarizing probability charged to a gate. Z-axis rotations are free;
    /// other one-qubit gates pay the qubit's 1Q error; two-qubit gates pay
    /// the edge error.
    pub fn gate_error(&self, g: &Gate) -> f64 {
        match g.kind {
            GateKind::Measure => 0.0,
            k if k.is_z_axis() => 0.0,
            k if k.arity() == 1 => self.machine.err1q[g.qubits[0]],
            _ => self
                .machine
                .edge_between(g.qubits[0], g.qubits[1])
                .map(|e| e.err2q)
                .unwrap_or(0.0),
        }
    }

    /// Probability that the recorded readout of `q` is flipped.
    pub fn readout_error(&self, q: usize) -> f64 {
        self.machine.erro[q]
    }
}

/// Shot counts keyed by readout bitstring. Bit order: ascending program
/// qubit index, leftmost character = lowest measured program qubit.
pub type Histogram = BTreeMap<String, u64>;

/// Fraction of shots matching `correct`.
pub fn success_rate(hist: &Histogram, correct: &str) -> f64 {
    let total: u64 = hist.values().sum();
    if total == 0 {
        return 0.0;
    }
    *hist.get(correct).unwrap_or(&0) as f64 / total as f64
}

/// Samples `shots` executions of a compiled program under depolarizing gate
/// noise and readout bit-flips.
///
/// Each shot replays the full state evolution with a ChaCha stream derived
/// from `seed` and the shot index, so results are reproducible and
/// independent of scheduling.
pub fn run_noisy(
    program: &CompiledProgram,
    machine: &Machine,
    shots: u64,
    seed: u64,
) -> Result<Histogram> {
    if machine.num_qubits > MAX_SIM_QUBITS {
        return Err(QccError::Invalid(format!(
            "cannot simulate {} hardware qubits (cap {})",
            machine.num_qubits, MAX_SIM_QUBITS
        )));
    }
    let noise = NoiseModel::new(machine);
    // Classical bit order: ascending program qubit.
    let mut meas = program.measurements.clone();
    meas.sort_by_key(|&(prog, _)| prog);
    let bit_of_hw: BTreeMap<usize, usize> = meas
        .iter()
        .enumerate()
        .map(|(i, &(_, hw))| (hw, i))
        .collect();

    let counts = (0..shots)
        .into_par_iter()
        .fold(Histogram::new, |mut acc, shot| {
            let mut rng =
                ChaCha8Rng::seed_from_u64(seed ^ shot.wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let key = run_one_shot(program, machine, &noise, &bit_of_hw, &mut rng);
            *acc.entry(key).or_insert(0) += 1;
            acc
        })
        .reduce(Histogram::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });
    Ok(counts)
}

fn run_one_shot(
    program: &CompiledProgram,
    machine: &Machine,
    noise: &NoiseModel,
    bit_of_hw: &BTreeMap<usize, usize>,
    rng: &mut ChaCha8Rng,
) -> String {
    let n = machine.num_qubits;
    let mut amps = vec![ZERO; 1 << n];
    amps[0] = ONE;
    let mut readout = vec![b'0'; bit_of_hw.len()];

    for g in &program.instructions {
        if g.kind == GateKind::Measure {
            let q = g.qubits[0];
            let mut bit = measure_and_collapse(&mut amps, q, rng);
            if rng.gen::<f64>() < noise.readout_error(q) {
                bit = !bit;
            }
            if let Some(&pos) = bit_of_hw.get(&q) {
                readout[pos] = if bit { b'1' } else { b'0' };
            }
            continue;
        }
        apply_gate_to_amplitudes(&mut amps, g);
        let p = noise.gate_error(g);
        if p > 0.0 && rng.gen::<f64>() < p {
            apply_random_pauli(&mut amps, &g.qubits, rng);
        }
    }
    String::from_utf8(readout).unwrap()
}

/// Projective measurement of one qubit: samples an outcome, collapses and
/// renormalizes the state, and returns the sampled bit.
fn measure_and_collapse(amps: &mut [Complex64], q: usize, rng: &mut ChaCha8Rng) -> bool {
    let bit = 1usize << q;
    let p1: f64 = amps
        .iter()
        .enumerate()
        .filter(|(b, _)| b & bit != 0)
        .map(|(_, a)| a.norm_sqr())
        .sum();
    let one = rng.gen::<f64>() < p1;
    let keep_mask = if one { bit } else { 0 };
    let norm = if one { p1.sqrt() } else { (1.0 - p1).max(f64::MIN_POSITIVE).sqrt() };
    for (b, a) in amps.iter_mut().enumerate() {
        if b & bit == keep_mask {
            *a /= norm;
        } else {
            *a = ZERO;
        }
    }
    one
}

/// Uniform non-identity Pauli on the gate's qubits (3 choices for one qubit,
/// 15 for two).
fn apply_random_pauli(amps: &mut [Complex64], qubits: &[usize], rng: &mut ChaCha8Rng) {
    let paulis = [GateKind::X, GateKind::Y, GateKind::Z];
    match qubits.len() {
        1 => {
            let k = paulis[rng.gen_range(0..3)];
            apply_gate_to_amplitudes(amps, &Gate::new(k, vec![qubits[0]], None));
        }
        2 => {
            // Indices 1..15 in base 4 over {I,X,Y,Z} x {I,X,Y,Z}.
            let idx = rng.gen_range(1..16);
            let (p0, p1) = (idx / 4, idx % 4);
            if p0 > 0 {
                apply_gate_to_amplitudes(amps, &Gate::new(paulis[p0 - 1], vec![qubits[0]], None));
            }
            if p1 > 0 {
                apply_gate_to_amplitudes(amps, &Gate::new(paulis[p1 - 1], vec![qubits[1]], None));
            }
        }
        _ => unreachable!("noise acts on one- or two-qubit gates"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::Gate;

    fn approx(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn hadamard_squares_to_identity() {
        let u = unitary_of(&[Gate::h(0), Gate::h(0)], 1);
        assert!(equivalent_up_to_phase(&u, &UnitaryMatrix::identity(1), 1e-12));
    }

    #[test]
    fn cnot_matrix_is_the_textbook_permutation() {
        let u = unitary_of(&[Gate::cnot(0, 1)], 2);
        // Basis index b: bit 0 = control, bit 1 = target.
        assert!(approx(u.get(0b00, 0b00), ONE));
        assert!(approx(u.get(0b11, 0b01), ONE));
        assert!(approx(u.get(0b01, 0b11), ONE));
        assert!(approx(u.get(0b10, 0b10), ONE));
    }

    #[test]
    fn toffoli_native_matches_its_network() {
        let native = unitary_of(&[Gate::toffoli(0, 1, 2)], 3);
        let c = crate::ir::Circuit::new("t", 3, vec![Gate::toffoli(0, 1, 2)]);
        let network = circuit_unitary(&crate::ir::decompose_high_level(&c));
        // The six-CNOT network reproduces Toffoli exactly, not just up to
        // phase: check entrywise.
        for r in 0..8 {
            for c in 0..8 {
                assert!(
                    (native.get(r, c) - network.get(r, c)).norm() < 1e-12,
                    "entry ({r},{c})"
                );
            }
        }
    }

    #[test]
    fn fredkin_native_matches_its_network() {
        let native = unitary_of(&[Gate::fredkin(0, 1, 2)], 3);
        let c = crate::ir::Circuit::new("f", 3, vec![Gate::fredkin(0, 1, 2)]);
        let network = circuit_unitary(&crate::ir::decompose_high_level(&c));
        for r in 0..8 {
            for cc in 0..8 {
                assert!((native.get(r, cc) - network.get(r, cc)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn xx_is_the_ising_exponential() {
        // exp(-i pi/2 XX) must equal -i * X(x)X.
        let u = unitary_of(&[Gate::xx(std::f64::consts::FRAC_PI_2, 0, 1)], 2);
        let xx = unitary_of(&[Gate::x(0), Gate::x(1)], 2);
        for r in 0..4 {
            for c in 0..4 {
                assert!(approx(u.get(r, c), -Complex64::i() * xx.get(r, c)));
            }
        }
    }

    #[test]
    fn swap_gate_permutes_basis() {
        let u = unitary_of(&[Gate::swap(0, 1)], 2);
        assert!(approx(u.get(0b10, 0b01), ONE));
        assert!(approx(u.get(0b01, 0b10), ONE));
    }

    #[test]
    fn phase_equivalence_detects_global_phase_only() {
        let u = unitary_of(&[Gate::rz(1.0, 0)], 1);
        let v = unitary_of(&[Gate::rz(1.0, 0), Gate::z(0), Gate::z(0)], 1);
        assert!(equivalent_up_to_phase(&u, &v, 1e-12));
        let w = unitary_of(&[Gate::rz(1.1, 0)], 1);
        assert!(!equivalent_up_to_phase(&u, &w, 1e-9));
        let s = unitary_of(&[Gate::s(0)], 1);
        let z_half = unitary_of(&[Gate::rz(std::f64::consts::FRAC_PI_2, 0)], 1);
        // S equals RZ(pi/2) only up to a global e^{i pi/4}.
        assert!(equivalent_up_to_phase(&s, &z_half, 1e-12));
    }

    #[test]
    fn permutation_matrix_moves_bits() {
        // State at slot 0 moves to slot 2 and vice versa; slot 1 fixed.
        let p = UnitaryMatrix::permutation(&[2, 1, 0]);
        // |001> (bit 0 set) must map to |100> (bit 2 set).
        assert!(approx(p.get(0b100, 0b001), ONE));
        assert!(approx(p.get(0b001, 0b100), ONE));
        assert!(approx(p.get(0b010, 0b010), ONE));
    }
}
