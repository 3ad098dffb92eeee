//! Lowering routed circuits to native vendor gate sets and emitting them.
//!
//! Stages, in order:
//!
//! 1. SWAPs decompose into three CNOTs (middle one reversed, which is where
//!    the direction-correction cost on directed couplers comes from).
//! 2. On directed machines, CNOTs against the native coupler direction are
//!    wrapped in four Hadamards.
//! 3. Two-qubit gates lower to the target's native interaction: CNOT on
//!    IBM-style machines, CZ on Rigetti-style, XX on ion traps. Generated
//!    CNOTs always follow the native direction, so no second correction
//!    pass is needed.
//! 4. Single-qubit gates lower to RZ/RX pulses, either gate by gate or by
//!    accumulating maximal runs into one quaternion and emitting a single
//!    Z-X-Z triple per run.
//!
//! Every single-qubit unitary is tracked as a rotation quaternion, which
//! composes associatively with no trigonometric drift until the final
//! angle extraction.

use crate::ir::{Gate, GateKind};
use crate::machine::{GateSet, Machine};
use crate::router::RoutedCircuit;

const ANGLE_EPS: f64 = 1e-12;

/// Unit quaternion representing a single-qubit rotation; `w + xi + yj + zk`
/// maps to the special unitary `w*I - i*(x*X + y*Y + z*Z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const IDENTITY: Quaternion = Quaternion {
        w: 1.0,
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    /// Rotation by `angle` about the Bloch-sphere axis `(nx, ny, nz)`,
    /// which must be unit length.
    pub fn from_axis_angle(nx: f64, ny: f64, nz: f64, angle: f64) -> Self {
        let (s, c) = (angle / 2.0).sin_cos();
        Quaternion {
            w: c,
            x: s * nx,
            y: s * ny,
            z: s * nz,
        }
    }

    /// Hamilton product; `a.mul(b)` is the rotation `b` followed by `a`,
    /// matching matrix multiplication order.
    pub fn mul(self, b: Quaternion) -> Quaternion {
        let a = self;
        Quaternion {
            w: a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            x: a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            y: a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            z: a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        }
    }

    pub fn norm(self) -> f64 {
        (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn normalized(self) -> Quaternion {
        let n = self.norm();
        Quaternion {
            w: self.w / n,
            x: self.x / n,
            y: self.y / n,
            z: self.z / n,
        }
    }

    /// The quaternion of a single-qubit gate, up to global phase.
    pub fn of_gate(kind: GateKind, angle: Option<f64>) -> Quaternion {
        use std::f64::consts::{FRAC_1_SQRT_2, PI};
        match kind {
            GateKind::H => Quaternion {
                w: 0.0,
                x: FRAC_1_SQRT_2,
                y: 0.0,
                z: FRAC_1_SQRT_2,
            },
            GateKind::X => Quaternion::from_axis_angle(1.0, 0.0, 0.0, PI),
            GateKind::Y => Quaternion::from_axis_angle(0.0, 1.0, 0.0, PI),
            GateKind::Z => Quaternion::from_axis_angle(0.0, 0.0, 1.0, PI),
            GateKind::S => Quaternion::from_axis_angle(0.0, 0.0, 1.0, PI / 2.0),
            GateKind::Sdg => Quaternion::from_axis_angle(0.0, 0.0, 1.0, -PI / 2.0),
            GateKind::T => Quaternion::from_axis_angle(0.0, 0.0, 1.0, PI / 4.0),
            GateKind::Tdg => Quaternion::from_axis_angle(0.0, 0.0, 1.0, -PI / 4.0),
            GateKind::Rx => Quaternion::from_axis_angle(1.0, 0.0, 0.0, angle.unwrap()),
            GateKind::Ry => Quaternion::from_axis_angle(0.0, 1.0, 0.0, angle.unwrap()),
            GateKind::Rz => Quaternion::from_axis_angle(0.0, 0.0, 1.0, angle.unwrap()),
            other => panic!("{:?} is not a single-qubit gate", other),
        }
    }
}

/// Maps an angle into `(-pi, pi]`.
pub fn normalize_angle(t: f64) -> f64 {
    use std::f64::consts::PI;
    let mut a = t.rem_euclid(2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    }
    a
}

/// Extracts Z-X-Z Euler angles from a rotation quaternion: the returned
/// `(first, middle, last)` satisfy `U ~ RZ(last) * RX(middle) * RZ(first)`
/// with `first` applied first.
pub fn zxz_angles(q: Quaternion) -> (f64, f64, f64) {
    let q = q.normalized();
    let sin_half = (q.x * q.x + q.y * q.y).sqrt();
    let cos_half = (q.w * q.w + q.z * q.z).sqrt();
    let b = 2.0 * sin_half.atan2(cos_half);
    let sum_half = if cos_half > 1e-300 {
        q.z.atan2(q.w)
    } else {
        0.0
    };
    let diff_half = if sin_half > 1e-300 {
        q.y.atan2(q.x)
    } else {
        0.0
    };
    let last = sum_half + diff_half;
    let first = sum_half - diff_half;
    (first, b, last)
}

/// Emits the shortest RZ/RX pulse train implementing quaternion `q` on
/// hardware qubit `h`: at most three pulses with at most one RX.
pub fn emit_quaternion(q: Quaternion, h: usize, out: &mut Vec<Gate>) {
    let (first, middle, last) = zxz_angles(q);
    let middle = normalize_angle(middle);
    if middle.abs() < ANGLE_EPS {
        let merged = normalize_angle(first + last);
        if merged.abs() >= ANGLE_EPS {
            out.push(Gate::rz(merged, h));
        }
        return;
    }
    let first = normalize_angle(first);
    let last = normalize_angle(last);
    if first.abs() >= ANGLE_EPS {
        out.push(Gate::rz(first, h));
    }
    out.push(Gate::rx(middle, h));
    if last.abs() >= ANGLE_EPS {
        out.push(Gate::rz(last, h));
    }
}

/// Replaces every SWAP with three CNOTs on the same edge.
pub fn decompose_swaps(gates: &[Gate]) -> Vec<Gate> {
    let mut out = Vec::with_capacity(gates.len());
    for g in gates {
        if g.kind == GateKind::Swap {
            let (a, b) = (g.qubits[0], g.qubits[1]);
            out.push(Gate::cnot(a, b));
            out.push(Gate::cnot(b, a));
            out.push(Gate::cnot(a, b));
        } else {
            out.push(g.clone());
        }
    }
    out
}

/// On machines with directed couplers, wraps every CNOT that runs against
/// its edge's native direction in four Hadamards.
pub fn correct_directions(gates: &[Gate], machine: &Machine) -> Vec<Gate> {
    let mut out = Vec::with_capacity(gates.len());
    for g in gates {
        if g.kind == GateKind::Cnot {
            let (c, t) = (g.qubits[0], g.qubits[1]);
            let edge = machine
                .edge_between(c, t)
                .expect("routed gates sit on machine edges");
            if edge.directed && !(edge.a == c && edge.b == t) {
                out.push(Gate::h(c));
                out.push(Gate::h(t));
                out.push(Gate::cnot(t, c));
                out.push(Gate::h(c));
                out.push(Gate::h(t));
                continue;
            }
        }
        out.push(g.clone());
    }
    out
}

/// Returns the native control/target orientation for a CNOT on the edge
/// between `a` and `b`.
fn native_orientation(machine: &Machine, a: usize, b: usize) -> (usize, usize) {
    let edge = machine
        .edge_between(a, b)
        .expect("two-qubit gates sit on machine edges");
    if edge.directed {
        (edge.a, edge.b)
    } else {
        (a, b)
    }
}

/// Lowers CZ/XX/CNOT to the machine's native two-qubit interaction.
/// Single-qubit gates pass through untouched.
pub fn lower_two_qubit(gates: &[Gate], machine: &Machine) -> Vec<Gate> {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
    let target = machine.gate_set;
    let mut out = Vec::with_capacity(gates.len() * 2);
    // First align the interaction type: everything becomes the native kind
    // or a CNOT-conjugation of it, then CNOTs themselves lower per target.
    let mut staged = Vec::with_capacity(gates.len() * 2);
    for g in gates {
        match g.kind {
            GateKind::Cz if target != GateSet::Rigetti => {
                let (c, t) = native_orientation(machine, g.qubits[0], g.qubits[1]);
                staged.push(Gate::h(t));
                staged.push(Gate::cnot(c, t));
                staged.push(Gate::h(t));
            }
            GateKind::Xx if target != GateSet::IonTrap => {
                let (c, t) = native_orientation(machine, g.qubits[0], g.qubits[1]);
                staged.push(Gate::cnot(c, t));
                staged.push(Gate::rx(2.0 * g.angle.unwrap(), c));
                staged.push(Gate::cnot(c, t));
            }
            _ => staged.push(g.clone()),
        }
    }
    for g in &staged {
        match (g.kind, target) {
            (GateKind::Cnot, GateSet::Ibm) => out.push(g.clone()),
            (GateKind::Cz, GateSet::Rigetti) => out.push(g.clone()),
            (GateKind::Xx, GateSet::IonTrap) => out.push(g.clone()),
            (GateKind::Cnot, GateSet::Rigetti) => {
                let (c, t) = (g.qubits[0], g.qubits[1]);
                out.push(Gate::rz(FRAC_PI_2, t));
                out.push(Gate::rx(FRAC_PI_2, t));
                out.push(Gate::rz(FRAC_PI_2, t));
                out.push(Gate::cz(c, t));
                out.push(Gate::rz(FRAC_PI_2, t));
                out.push(Gate::rx(FRAC_PI_2, t));
                out.push(Gate::rz(FRAC_PI_2, t));
            }
            (GateKind::Cnot, GateSet::IonTrap) => {
                let (c, t) = (g.qubits[0], g.qubits[1]);
                out.push(Gate::ry(FRAC_PI_2, c));
                out.push(Gate::xx(FRAC_PI_4, c, t));
                out.push(Gate::ry(-FRAC_PI_2, c));
                out.push(Gate::rx(-FRAC_PI_2, t));
                out.push(Gate::rz(-FRAC_PI_2, c));
            }
            (GateKind::Cz, GateSet::Ibm) | (GateKind::Cz, GateSet::IonTrap) => {
                unreachable!("CZ was staged to CNOT form")
            }
            (GateKind::Xx, _) => unreachable!("XX was staged to CNOT form"),
            _ => out.push(g.clone()),
        }
    }
    out
}

/// Gate-by-gate single-qubit lowering: rotations already in the RZ/RX
/// basis pass through, everything else becomes its own Euler triple.
pub fn lower_one_qubit_naive(gates: &[Gate]) -> Vec<Gate> {
    let mut out = Vec::with_capacity(gates.len() * 2);
    for g in gates {
        match g.kind {
            GateKind::Measure => out.push(g.clone()),
            GateKind::Rz => {
                let a = normalize_angle(g.angle.unwrap());
                if a.abs() >= ANGLE_EPS {
                    out.push(Gate::rz(a, g.qubits[0]));
                }
            }
            GateKind::Rx => {
                let a = normalize_angle(g.angle.unwrap());
                if a.abs() >= ANGLE_EPS {
                    out.push(Gate::rx(a, g.qubits[0]));
                }
            }
            k if k.arity() == 1 => {
                emit_quaternion(Quaternion::of_gate(k, g.angle), g.qubits[0], &mut out);
            }
            _ => out.push(g.clone()),
        }
    }
    out
}

/// Run-merging single-qubit lowering: consecutive single-qubit gates on
/// the same qubit accumulate into one quaternion, flushed as a single
/// Euler triple when a two-qubit gate, a measurement, or the end of the
/// stream interrupts the run.
pub fn optimize_one_qubit(gates: &[Gate], num_hw_qubits: usize) -> Vec<Gate> {
    let mut pending: Vec<Option<Quaternion>> = vec![None; num_hw_qubits];
    let mut out = Vec::with_capacity(gates.len());
    let flush = |pending: &mut Vec<Option<Quaternion>>, q: usize, out: &mut Vec<Gate>| {
        if let Some(quat) = pending[q].take() {
            emit_quaternion(quat, q, out);
        }
    };
    for g in gates {
        match g.kind {
            GateKind::Measure => {
                flush(&mut pending, g.qubits[0], &mut out);
                out.push(g.clone());
            }
            k if k.arity() == 1 => {
                let q = g.qubits[0];
                let acc = pending[q].unwrap_or(Quaternion::IDENTITY);
                pending[q] = Some(Quaternion::of_gate(k, g.angle).mul(acc));
            }
            _ => {
                for &q in &g.qubits {
                    flush(&mut pending, q, &mut out);
                }
                out.push(g.clone());
            }
        }
    }
    for q in 0..num_hw_qubits {
        flush(&mut pending, q, &mut out);
    }
    out
}

/// Multiplies per-instruction success probabilities from the machine's
/// calibration: two-qubit gates pay their edge error, RX pulses the qubit's
/// 1Q error, RZ is free, measurements pay readout error.
pub fn estimate_reliability(gates: &[Gate], machine: &Machine) -> f64 {
    let mut rel = 1.0f64;
    for g in gates {
        match g.kind {
            GateKind::Measure => rel *= 1.0 - machine.erro[g.qubits[0]],
            k if k.is_two_qubit() => {
                let edge = machine
                    .edge_between(g.qubits[0], g.qubits[1])
                    .expect("native gates sit on machine edges");
                rel *= 1.0 - edge.err2q;
            }
            k if k.is_z_axis() => {}
            _ => rel *= 1.0 - machine.err1q[g.qubits[0]],
        }
    }
    rel
}

/// A fully lowered program ready for emission and simulation.
#[derive(Debug, Clone)]
pub struct CompiledProgram {
    pub name: String,
    pub target: GateSet,
    pub machine_name: String,
    pub num_hw_qubits: usize,
    /// Native gates plus trailing measurements, over hardware qubits.
    pub instructions: Vec<Gate>,
    pub initial_mapping: Vec<usize>,
    pub final_mapping: Vec<usize>,
    pub hw_permutation: Vec<usize>,
    /// Measured program qubits with the hardware qubit each is read from.
    pub measurements: Vec<(usize, usize)>,
    pub estimated_reliability: f64,
    pub swaps_inserted: usize,
}

impl CompiledProgram {
    /// Classical bit layout: bit `i` holds the i-th smallest measured
    /// program qubit.
    pub fn classical_bits(&self) -> Vec<(usize, usize)> {
        let mut bits: Vec<(usize, usize)> = self.measurements.clone();
        bits.sort_by_key(|&(prog, _)| prog);
        bits
    }
}

/// Lowers a routed circuit all the way to native gates.
pub fn generate(routed: &RoutedCircuit, machine: &Machine, optimize_single: bool) -> CompiledProgram {
    let gates = decompose_swaps(&routed.gates);
    let gates = if machine.gate_set == GateSet::Ibm {
        correct_directions(&gates, machine)
    } else {
        gates
    };
    let gates = lower_two_qubit(&gates, machine);
    let instructions = if optimize_single {
        optimize_one_qubit(&gates, machine.num_qubits)
    } else {
        lower_one_qubit_naive(&gates)
    };
    let estimated_reliability = estimate_reliability(&instructions, machine);
    CompiledProgram {
        name: routed.name.clone(),
        target: machine.gate_set,
        machine_name: machine.name.clone(),
        num_hw_qubits: routed.num_hw_qubits,
        instructions,
        initial_mapping: routed.initial_mapping.prog_to_hw.clone(),
        final_mapping: routed.final_mapping.clone(),
        hw_permutation: routed.hw_permutation.clone(),
        measurements: routed.measurements.clone(),
        estimated_reliability,
        swaps_inserted: routed.swaps_inserted,
    }
}

/// Renders the program in its target's textual format: OpenQASM 2.0 for
/// IBM-style machines, Quil for Rigetti-style, and a plain ion-trap
/// assembly listing.
pub fn emit(program: &CompiledProgram) -> String {
    match program.target {
        GateSet::Ibm => emit_qasm(program),
        GateSet::Rigetti => emit_quil(program),
        GateSet::IonTrap => emit_ion(program),
    }
}

fn bit_index_of(program: &CompiledProgram) -> Vec<(usize, usize)> {
    // (hw qubit, classical bit) pairs in measurement emission order.
    let bits = program.classical_bits();
    program
        .measurements
        .iter()
        .map(|&(prog, hw)| {
            let bit = bits.iter().position(|&(p, _)| p == prog).unwrap();
            (hw, bit)
        })
        .collect()
}

fn emit_qasm(program: &CompiledProgram) -> String {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\n");
    out.push_str("include \"qelib1.inc\";\n");
    out.push_str(&format!("qreg q[{}];\n", program.num_hw_qubits));
    let n_bits = program.measurements.len();
    if n_bits > 0 {
        out.push_str(&format!("creg c[{}];\n", n_bits));
    }
    let bit_pairs = bit_index_of(program);
    let mut next_measure = 0;
    for g in &program.instructions {
        match g.kind {
            GateKind::Cnot => {
                out.push_str(&format!("cx q[{}],q[{}];\n", g.qubits[0], g.qubits[1]))
            }
            GateKind::Rz => out.push_str(&format!(
                "rz({:.12}) q[{}];\n",
                g.angle.unwrap(),
                g.qubits[0]
            )),
            GateKind::Rx => out.push_str(&format!(
                "rx({:.12}) q[{}];\n",
                g.angle.unwrap(),
                g.qubits[0]
            )),
            GateKind::Measure => {
                let (hw, bit) = bit_pairs[next_measure];
                next_measure += 1;
                out.push_str(&format!("measure q[{}] -> c[{}];\n", hw, bit));
            }
            other => panic!("{:?} is not native to the IBM gate set", other),
        }
    }
    out
}

fn emit_quil(program: &CompiledProgram) -> String {
    let mut out = String::new();
    let n_bits = program.measurements.len();
    if n_bits > 0 {
        out.push_str(&format!("DECLARE ro BIT[{}]\n", n_bits));
    }
    let bit_pairs = bit_index_of(program);
    let mut next_measure = 0;
    for g in &program.instructions {
        match g.kind {
            GateKind::Cz => out.push_str(&format!("CZ {} {}\n", g.qubits[0], g.qubits[1])),
            GateKind::Rz => out.push_str(&format!(
                "RZ({:.12}) {}\n",
                g.angle.unwrap(),
                g.qubits[0]
            )),
            GateKind::Rx => out.push_str(&format!(
                "RX({:.12}) {}\n",
                g.angle.unwrap(),
                g.qubits[0]
            )),
            GateKind::Measure => {
                let (hw, bit) = bit_pairs[next_measure];
                next_measure += 1;
                out.push_str(&format!("MEASURE {} ro[{}]\n", hw, bit));
            }
            other => panic!("{:?} is not native to the Rigetti gate set", other),
        }
    }
    out
}

fn emit_ion(program: &CompiledProgram) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "; ion trap assembly for {}\n",
        program.machine_name
    ));
    out.push_str(&format!("qubits {}\n", program.num_hw_qubits));
    let bit_pairs = bit_index_of(program);
    let mut next_measure = 0;
    for g in &program.instructions {
        match g.kind {
            GateKind::Xx => out.push_str(&format!(
                "xx {:.12} q{} q{}\n",
                g.angle.unwrap(),
                g.qubits[0],
                g.qubits[1]
            )),
            GateKind::Rz => out.push_str(&format!(
                "rz {:.12} q{}\n",
                g.angle.unwrap(),
                g.qubits[0]
            )),
            GateKind::Rx => out.push_str(&format!(
                "rx {:.12} q{}\n",
                g.angle.unwrap(),
                g.qubits[0]
            )),
            GateKind::Measure => {
                let (hw, bit) = bit_pairs[next_measure];
                next_measure += 1;
                out.push_str(&format!("measure q{} -> bit{}\n", hw, bit));
            }
            other => panic!("{:?} is not native to the ion trap gate set", other),
        }
    }
    out
}
