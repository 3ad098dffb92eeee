//! Built-in benchmark circuits.
//!
//! Twelve small algorithm kernels with known correct outputs, plus a
//! parameterized random quantum-supremacy style generator for scaling
//! studies. Deterministic benchmarks record the bitstring a noiseless run
//! must produce every time (bits over the measured qubits in ascending
//! program order, lowest qubit leftmost), which doubles as the success
//! criterion under noise.

use crate::ir::{Circuit, Gate};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// A benchmark circuit with its expected noiseless outcome.
#[derive(Debug, Clone)]
pub struct Benchmark {
    pub name: String,
    pub circuit: Circuit,
    /// Measured-qubit bitstring a perfect machine outputs with
    /// probability one; `None` for sampling circuits.
    pub correct_output: Option<String>,
}

/// Names of the twelve standard benchmarks, in suite order.
pub fn list_benchmarks() -> Vec<&'static str> {
    vec![
        "bv4", "bv6", "bv8", "hs2", "hs4", "hs6", "qft4", "toffoli", "fredkin", "or", "peres",
        "adder",
    ]
}

/// Builds a standard benchmark by name.
pub fn generate(name: &str) -> Option<Benchmark> {
    match name {
        "bv4" => Some(bernstein_vazirani(4)),
        "bv6" => Some(bernstein_vazirani(6)),
        "bv8" => Some(bernstein_vazirani(8)),
        "hs2" => Some(hidden_shift(2)),
        "hs4" => Some(hidden_shift(4)),
        "hs6" => Some(hidden_shift(6)),
        "qft4" => Some(qft_prepared(4)),
        "toffoli" => Some(toffoli_bench()),
        "fredkin" => Some(fredkin_bench()),
        "or" => Some(or_bench()),
        "peres" => Some(peres_bench()),
        "adder" => Some(adder_bench()),
        _ => None,
    }
}

/// Bernstein-Vazirani on `n` qubits (`n - 1` data bits, one ancilla) with
/// the all-ones hidden string: the data qubits always read back 1.
fn bernstein_vazirani(n: usize) -> Benchmark {
    let anc = n - 1;
    let mut gates = vec![Gate::x(anc)];
    for q in 0..n {
        gates.push(Gate::h(q));
    }
    for d in 0..anc {
        gates.push(Gate::cnot(d, anc));
    }
    for d in 0..anc {
        gates.push(Gate::h(d));
    }
    for d in 0..anc {
        gates.push(Gate::measure(d));
    }
    Benchmark {
        name: format!("bv{}", n),
        circuit: Circuit::new(&format!("bv{}", n), n, gates),
        correct_output: Some("1".repeat(anc)),
    }
}

/// Hidden-shift kernel on `n` qubits (disjoint CZ pairs, all-ones shift):
/// every qubit reads back 1.
fn hidden_shift(n: usize) -> Benchmark {
    assert!(n % 2 == 0);
    let mut gates = Vec::new();
    for p in 0..n / 2 {
        let (a, b) = (2 * p, 2 * p + 1);
        gates.push(Gate::h(a));
        gates.push(Gate::h(b));
        gates.push(Gate::cz(a, b));
        gates.push(Gate::x(a));
        gates.push(Gate::x(b));
        gates.push(Gate::cz(a, b));
        gates.push(Gate::h(a));
        gates.push(Gate::h(b));
    }
    for q in 0..n {
        gates.push(Gate::measure(q));
    }
    Benchmark {
        name: format!("hs{}", n),
        circuit: Circuit::new(&format!("hs{}", n), n, gates),
        correct_output: Some("1".repeat(n)),
    }
}

/// Controlled phase by `theta` (control `a`, target `b`) as RZ/CNOT gates.
fn controlled_phase(theta: f64, a: usize, b: usize, gates: &mut Vec<Gate>) {
    gates.push(Gate::rz(theta / 2.0, a));
    gates.push(Gate::rz(theta / 2.0, b));
    gates.push(Gate::cnot(a, b));
    gates.push(Gate::rz(-theta / 2.0, b));
    gates.push(Gate::cnot(a, b));
}

/// Quantum Fourier transform applied to the uniform superposition. The
/// transform maps it back to the all-zeros state, so the measured output
/// is deterministic despite the rich gate structure.
fn qft_prepared(n: usize) -> Benchmark {
    let mut gates = Vec::new();
    for q in 0..n {
        gates.push(Gate::h(q));
    }
    for i in 0..n {
        gates.push(Gate::h(i));
        for j in i + 1..n {
            let theta = PI / (1 << (j - i)) as f64;
            controlled_phase(theta, j, i, &mut gates);
        }
    }
    for q in 0..n {
        gates.push(Gate::measure(q));
    }
    Benchmark {
        name: format!("qft{}", n),
        circuit: Circuit::new(&format!("qft{}", n), n, gates),
        correct_output: Some("0".repeat(n)),
    }
}

fn measured_all(name: &str, n: usize, mut gates: Vec<Gate>, correct: &str) -> Benchmark {
    for q in 0..n {
        gates.push(Gate::measure(q));
    }
    Benchmark {
        name: name.to_string(),
        circuit: Circuit::new(name, n, gates),
        correct_output: Some(correct.to_string()),
    }
}

/// Toffoli with both controls set: the target flips.
fn toffoli_bench() -> Benchmark {
    let gates = vec![Gate::x(0), Gate::x(1), Gate::toffoli(0, 1, 2)];
    measured_all("toffoli", 3, gates, "111")
}

/// Controlled swap with the control set: the 1 in qubit 1 moves to qubit 2.
fn fredkin_bench() -> Benchmark {
    let gates = vec![Gate::x(0), Gate::x(1), Gate::fredkin(0, 1, 2)];
    measured_all("fredkin", 3, gates, "101")
}

/// Logical OR of inputs (1, 0) computed into qubit 2 by conjugating a
/// Toffoli with X gates.
fn or_bench() -> Benchmark {
    let gates = vec![
        Gate::x(0),
        Gate::x(0),
        Gate::x(1),
        Gate::toffoli(0, 1, 2),
        Gate::x(0),
        Gate::x(1),
        Gate::x(2),
    ];
    measured_all("or", 3, gates, "101")
}

/// Peres gate (Toffoli then CNOT) on inputs (1, 1, 0).
fn peres_bench() -> Benchmark {
    let gates = vec![
        Gate::x(0),
        Gate::x(1),
        Gate::toffoli(0, 1, 2),
        Gate::cnot(0, 1),
    ];
    measured_all("peres", 3, gates, "101")
}

/// One-bit full adder computing 1 + 1 + 0: sum 0, carry 1.
fn adder_bench() -> Benchmark {
    let gates = vec![
        Gate::x(0),
        Gate::x(1),
        Gate::toffoli(0, 1, 3),
        Gate::cnot(0, 1),
        Gate::toffoli(1, 2, 3),
        Gate::cnot(1, 2),
    ];
    measured_all("adder", 4, gates, "1001")
}

/// Random circuit in the quantum supremacy style: layers of random
/// single-qubit gates from {sqrt(X), sqrt(Y), T} separated by CZs applied
/// to one of four cycling grid-edge classes. All qubits are measured;
/// there is no single correct output.
pub fn supremacy(rows: usize, cols: usize, depth: usize, seed: u64) -> Benchmark {
    assert!(rows >= 1 && cols >= 1 && rows * cols >= 2);
    let n = rows * cols;
    let index = |r: usize, c: usize| r * cols + c;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gates = Vec::new();
    for layer in 0..depth {
        for q in 0..n {
            match rng.gen_range(0..3u8) {
                0 => gates.push(Gate::rx(PI / 2.0, q)),
                1 => gates.push(Gate::ry(PI / 2.0, q)),
                _ => gates.push(Gate::t(q)),
            }
        }
        match layer % 4 {
            0 | 1 => {
                // Horizontal edges whose left column parity matches.
                let parity = layer % 4;
                for r in 0..rows {
                    for c in 0..cols.saturating_sub(1) {
                        if c % 2 == parity {
                            gates.push(Gate::cz(index(r, c), index(r, c + 1)));
                        }
                    }
                }
            }
            _ => {
                let parity = layer % 4 - 2;
                for r in 0..rows.saturating_sub(1) {
                    for c in 0..cols {
                        if r % 2 == parity {
                            gates.push(Gate::cz(index(r, c), index(r + 1, c)));
                        }
                    }
                }
            }
        }
    }
    for q in 0..n {
        gates.push(Gate::measure(q));
    }
    let name = format!("supremacy{}x{}d{}", rows, cols, depth);
    Benchmark {
        circuit: Circuit::new(&name, n, gates),
        name,
        correct_output: None,
    }
}
