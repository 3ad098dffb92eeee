//! Circuit intermediate representation.
//!
//! Circuits are flat gate lists over `qubits 0..n`. The text format is
//! line-oriented: a `qubits <n>` header followed by one gate per line,
//! lowercase mnemonics, `#` comments. Rotation gates take an angle argument
//! that may be a decimal or a `pi` fraction such as `pi/2`, `-pi/4`, `3pi/4`.
//!
//! Measurement is terminal per qubit: once a qubit is measured no later gate
//! may touch it. The parser enforces this so every later stage can assume it.

use crate::error::{QccError, Result};
use std::collections::BTreeMap;
use std::fmt;

/// Gate vocabulary of the IR.
///
/// `Swap`, `Toffoli` and `Fredkin` are convenience gates: routing only ever
/// sees one- and two-qubit primitives, so [`decompose_high_level`] rewrites
/// the three-qubit gates and the router itself introduces `Swap`s.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    S,
    Sdg,
    T,
    Tdg,
    Rx,
    Ry,
    Rz,
    Cnot,
    Cz,
    Xx,
    Swap,
    Toffoli,
    Fredkin,
    Measure,
}

impl GateKind {
    /// Number of qubit operands the gate takes.
    pub fn arity(self) -> usize {
        match self {
            GateKind::H
            | GateKind::X
            | GateKind::Y
            | GateKind::Z
            | GateKind::S
            | GateKind::Sdg
            | GateKind::T
            | GateKind::Tdg
            | GateKind::Rx
            | GateKind::Ry
            | GateKind::Rz
            | GateKind::Measure => 1,
            GateKind::Cnot | GateKind::Cz | GateKind::Xx | GateKind::Swap => 2,
            GateKind::Toffoli | GateKind::Fredkin => 3,
        }
    }

    /// Whether the gate carries a rotation angle.
    pub fn has_angle(self) -> bool {
        matches!(
            self,
            GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::Xx
        )
    }

    /// Whether the gate acts on two qubits (including the `Swap` pseudo-gate).
    pub fn is_two_qubit(self) -> bool {
        self.arity() == 2
    }

    /// Whether the gate is a rotation about the Z axis (or a fixed power of
    /// Z). These cost nothing on all supported hardware.
    pub fn is_z_axis(self) -> bool {
        matches!(
            self,
            GateKind::Z | GateKind::S | GateKind::Sdg | GateKind::T | GateKind::Tdg | GateKind::Rz
        )
    }

    /// Text mnemonic used by the circuit format.
    pub fn mnemonic(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::Rx => "rx",
            GateKind::Ry => "ry",
            GateKind::Rz => "rz",
            GateKind::Cnot => "cnot",
            GateKind::Cz => "cz",
            GateKind::Xx => "xx",
            GateKind::Swap => "swap",
            GateKind::Toffoli => "toffoli",
            GateKind::Fredkin => "fredkin",
            GateKind::Measure => "measure",
        }
    }

    fn from_mnemonic(s: &str) -> Option<GateKind> {
        Some(match s {
            "h" => GateKind::H,
            "x" => GateKind::X,
            "y" => GateKind::Y,
            "z" => GateKind::Z,
            "s" => GateKind::S,
            "sdg" => GateKind::Sdg,
            "t" => GateKind::T,
            "tdg" => GateKind::Tdg,
            "rx" => GateKind::Rx,
            "ry" => GateKind::Ry,
            "rz" => GateKind::Rz,
            "cnot" => GateKind::Cnot,
            "cz" => GateKind::Cz,
            "xx" => GateKind::Xx,
            "swap" => GateKind::Swap,
            "toffoli" => GateKind::Toffoli,
            "fredkin" => GateKind::Fredkin,
            "measure" => GateKind::Measure,
            _ => return None,
        })
    }
}

/// One gate application. Operand order is significant: controls come first
/// (`cnot c t`, `toffoli c1 c2 t`, `fredkin c a b`).
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    pub angle: Option<f64>,
}

impl Gate {
    /// Builds a gate, checking arity, operand distinctness, and angle
    /// presence. Panics on violation; the parser performs its own checked
    /// validation so this is only reachable from programming errors.
    pub fn new(kind: GateKind, qubits: Vec<usize>, angle: Option<f64>) -> Gate {
        assert_eq!(qubits.len(), kind.arity(), "{:?} operand count", kind);
        assert_eq!(angle.is_some(), kind.has_angle(), "{:?} angle", kind);
        for i in 0..qubits.len() {
            for j in i + 1..qubits.len() {
                assert_ne!(qubits[i], qubits[j], "{:?} repeats qubit {}", kind, qubits[i]);
            }
        }
        Gate { kind, qubits, angle }
    }

    pub fn h(q: usize) -> Gate {
        Gate::new(GateKind::H, vec![q], None)
    }
    pub fn x(q: usize) -> Gate {
        Gate::new(GateKind::X, vec![q], None)
    }
    pub fn y(q: usize) -> Gate {
        Gate::new(GateKind::Y, vec![q], None)
    }
    pub fn z(q: usize) -> Gate {
        Gate::new(GateKind::Z, vec![q], None)
    }
    pub fn s(q: usize) -> Gate {
        Gate::new(GateKind::S, vec![q], None)
    }
    pub fn sdg(q: usize) -> Gate {
        Gate::new(GateKind::Sdg, vec![q], None)
    }
    pub fn t(q: usize) -> Gate {
        Gate::new(GateKind::T, vec![q], None)
    }
    pub fn tdg(q: usize) -> Gate {
        Gate::new(GateKind::Tdg, vec![q], None)
    }
    pub fn rx(theta: f64, q: usize) -> Gate {
        Gate::new(GateKind::Rx, vec![q], Some(theta))
    }
    pub fn ry(theta: f64, q: usize) -> Gate {
        Gate::new(GateKind::Ry, vec![q], Some(theta))
    }
    pub fn rz(theta: f64, q: usize) -> Gate {
        Gate::new(GateKind::Rz, vec![q], Some(theta))
    }
    pub fn cnot(c: usize, t: usize) -> Gate {
        Gate::new(GateKind::Cnot, vec![c, t], None)
    }
    pub fn cz(a: usize, b: usize) -> Gate {
        Gate::new(GateKind::Cz, vec![a, b], None)
    }
    pub fn xx(theta: f64, a: usize, b: usize) -> Gate {
        Gate::new(GateKind::Xx, vec![a, b], Some(theta))
    }
    pub fn swap(a: usize, b: usize) -> Gate {
        Gate::new(GateKind::Swap, vec![a, b], None)
    }
    pub fn toffoli(c1: usize, c2: usize, t: usize) -> Gate {
        Gate::new(GateKind::Toffoli, vec![c1, c2, t], None)
    }
    pub fn fredkin(c: usize, a: usize, b: usize) -> Gate {
        Gate::new(GateKind::Fredkin, vec![c, a, b], None)
    }
    pub fn measure(q: usize) -> Gate {
        Gate::new(GateKind::Measure, vec![q], None)
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.mnemonic())?;
        if let Some(a) = self.angle {
            write!(f, " {}", a)?;
        }
        for q in &self.qubits {
            write!(f, " {}", q)?;
        }
        Ok(())
    }
}

/// A program: a named gate list over `num_qubits` program qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub name: String,
    pub num_qubits: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    /// Builds a circuit, asserting qubit ranges and measure-terminality.
    pub fn new(name: &str, num_qubits: usize, gates: Vec<Gate>) -> Circuit {
        let mut measured = vec![false; num_qubits];
        for g in &gates {
            for &q in &g.qubits {
                assert!(q < num_qubits, "qubit {} out of range in {}", q, g);
                assert!(!measured[q], "gate {} touches measured qubit {}", g, q);
            }
            if g.kind == GateKind::Measure {
                measured[g.qubits[0]] = true;
            }
        }
        Circuit {
            name: name.to_string(),
            num_qubits,
            gates,
        }
    }

    /// Program qubits with a MEASURE, in ascending order.
    pub fn measured_qubits(&self) -> Vec<usize> {
        let mut m: Vec<usize> = self
            .gates
            .iter()
            .filter(|g| g.kind == GateKind::Measure)
            .map(|g| g.qubits[0])
            .collect();
        m.sort_unstable();
        m
    }

    /// Serializes the circuit back to the text format. Angle values print
    /// with the shortest decimal form that round-trips, so
    /// `parse(print(c)) == c` holds up to the name.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("qubits {}\n", self.num_qubits));
        for g in &self.gates {
            out.push_str(&format!("{}\n", g));
        }
        out
    }
}

/// Parses an angle token: decimal literal or a signed `pi` fraction
/// (`pi`, `-pi`, `pi/2`, `-pi/4`, `3pi/4`, `2pi`).
fn parse_angle(tok: &str) -> Option<f64> {
    if let Some(idx) = tok.find("pi") {
        let (mult_s, tail) = (&tok[..idx], &tok[idx + 2..]);
        let mult: f64 = match mult_s {
            "" => 1.0,
            "-" => -1.0,
            s => s.parse::<i64>().ok()? as f64,
        };
        let div: f64 = match tail.strip_prefix('/') {
            None if tail.is_empty() => 1.0,
            Some(d) => {
                let k: i64 = d.parse().ok()?;
                if k == 0 {
                    return None;
                }
                k as f64
            }
            _ => return None,
        };
        Some(mult * std::f64::consts::PI / div)
    } else {
        tok.parse::<f64>().ok()
    }
}

/// Parses the circuit text format.
///
/// Errors carry 1-based line numbers and cover: missing or malformed
/// `qubits` header, unknown mnemonics, wrong operand counts, out-of-range or
/// repeated qubits, malformed angles, and gates after a MEASURE on the same
/// qubit.
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let err = |line: usize, msg: String| QccError::Parse { line, msg };
    let mut num_qubits: Option<usize> = None;
    let mut gates: Vec<Gate> = Vec::new();
    let mut measured: Vec<bool> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();

        let n = match num_qubits {
            None => {
                if toks[0] != "qubits" {
                    return Err(err(line_no, "expected `qubits <n>` header".into()));
                }
                if toks.len() != 2 {
                    return Err(err(line_no, "`qubits` takes exactly one count".into()));
                }
                let n: usize = toks[1]
                    .parse()
                    .map_err(|_| err(line_no, format!("bad qubit count `{}`", toks[1])))?;
                num_qubits = Some(n);
                measured = vec![false; n];
                continue;
            }
            Some(n) => n,
        };

        if toks[0] == "qubits" {
            return Err(err(line_no, "duplicate `qubits` header".into()));
        }
        let kind = GateKind::from_mnemonic(toks[0])
            .ok_or_else(|| err(line_no, format!("unknown gate `{}`", toks[0])))?;

        let mut rest = &toks[1..];
        let angle = if kind.has_angle() {
            if rest.is_empty() {
                return Err(err(line_no, format!("{} requires an angle", toks[0])));
            }
            let a = parse_angle(rest[0])
                .ok_or_else(|| err(line_no, format!("bad angle `{}`", rest[0])))?;
            rest = &rest[1..];
            Some(a)
        } else {
            None
        };

        if rest.len() != kind.arity() {
            return Err(err(
                line_no,
                format!(
                    "{} takes {} qubit operand(s), got {}",
                    toks[0],
                    kind.arity(),
                    rest.len()
                ),
            ));
        }
        let mut qubits = Vec::with_capacity(rest.len());
        for t in rest {
            let q: usize = t
                .parse()
                .map_err(|_| err(line_no, format!("bad qubit index `{}`", t)))?;
            if q >= n {
                return Err(err(
                    line_no,
                    format!("qubit {} out of range (machine header says {})", q, n),
                ));
            }
            if qubits.contains(&q) {
                return Err(err(line_no, format!("qubit {} repeated in one gate", q)));
            }
            qubits.push(q);
        }
        for &q in &qubits {
            if measured[q] {
                return Err(err(
                    line_no,
                    format!("qubit {} already measured; measurement must come last", q),
                ));
            }
        }
        if kind == GateKind::Measure {
            measured[qubits[0]] = true;
        }
        gates.push(Gate { kind, qubits, angle });
    }

    let n = num_qubits.ok_or_else(|| err(1, "empty input: missing `qubits <n>` header".into()))?;
    Ok(Circuit {
        name: String::new(),
        num_qubits: n,
        gates,
    })
}

/// Expands TOFFOLI and FREDKIN into the one/two-qubit vocabulary.
///
/// TOFFOLI uses the canonical six-CNOT network (15 gates: 6 CNOT, 2 H and
/// 7 T-or-Tdg); FREDKIN conjugates it with CNOTs (17 gates). Everything else
/// passes through unchanged.
pub fn decompose_high_level(c: &Circuit) -> Circuit {
    let mut gates: Vec<Gate> = Vec::with_capacity(c.gates.len());
    for g in &c.gates {
        match g.kind {
            GateKind::Toffoli => {
                let (a, b, t) = (g.qubits[0], g.qubits[1], g.qubits[2]);
                gates.extend(toffoli_network(a, b, t));
            }
            GateKind::Fredkin => {
                let (c0, a, b) = (g.qubits[0], g.qubits[1], g.qubits[2]);
                gates.push(Gate::cnot(b, a));
                gates.extend(toffoli_network(c0, a, b));
                gates.push(Gate::cnot(b, a));
            }
            _ => gates.push(g.clone()),
        }
    }
    Circuit::new(&c.name, c.num_qubits, gates)
}

fn toffoli_network(a: usize, b: usize, t: usize) -> Vec<Gate> {
    vec![
        Gate::h(t),
        Gate::cnot(b, t),
        Gate::tdg(t),
        Gate::cnot(a, t),
        Gate::t(t),
        Gate::cnot(b, t),
        Gate::tdg(t),
        Gate::cnot(a, t),
        Gate::t(b),
        Gate::t(t),
        Gate::h(t),
        Gate::cnot(a, b),
        Gate::t(a),
        Gate::tdg(b),
        Gate::cnot(a, b),
    ]
}

/// Returns the gates in dependency order. Gates conflict exactly when they
/// share a qubit, and the input order is already a valid linearization, so
/// the result preserves it; the function exists to make the dependency
/// structure explicit and checkable.
pub fn dependency_schedule(c: &Circuit) -> Vec<Gate> {
    // Kahn's algorithm over the shares-a-qubit DAG, popping the smallest
    // ready index first, which reproduces the input order.
    let n = c.gates.len();
    let mut last_use: Vec<Option<usize>> = vec![None; c.num_qubits];
    let mut succs: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    for (i, g) in c.gates.iter().enumerate() {
        for &q in &g.qubits {
            if let Some(p) = last_use[q] {
                succs[p].push(i);
                indeg[i] += 1;
            }
            last_use[q] = Some(i);
        }
    }
    let mut ready: std::collections::BinaryHeap<std::cmp::Reverse<usize>> = indeg
        .iter()
        .enumerate()
        .filter(|(_, &d)| d == 0)
        .map(|(i, _)| std::cmp::Reverse(i))
        .collect();
    let mut order = Vec::with_capacity(n);
    while let Some(std::cmp::Reverse(i)) = ready.pop() {
        order.push(c.gates[i].clone());
        for &s in &succs[i] {
            indeg[s] -= 1;
            if indeg[s] == 0 {
                ready.push(std::cmp::Reverse(s));
            }
        }
    }
    assert_eq!(order.len(), n);
    order
}

/// Assigns each gate its earliest layer: gates in the same layer touch
/// disjoint qubits and may run concurrently.
pub fn schedule_layers(c: &Circuit) -> Vec<usize> {
    let mut qubit_depth = vec![0usize; c.num_qubits];
    let mut layers = Vec::with_capacity(c.gates.len());
    for g in &c.gates {
        let layer = g.qubits.iter().map(|&q| qubit_depth[q]).max().unwrap_or(0);
        layers.push(layer);
        for &q in &g.qubits {
            qubit_depth[q] = layer + 1;
        }
    }
    layers
}

/// Two-qubit interaction counts and the measured-qubit set of a circuit.
///
/// Pair counts are kept per ordered `(first-operand, second-operand)` pair
/// so direction-sensitive backends can score them faithfully;
/// [`InteractionProfile::pairs`] aggregates to unordered pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteractionProfile {
    pub num_qubits: usize,
    /// Ordered (control, target) pair -> number of two-qubit gates.
    pub ordered_pairs: BTreeMap<(usize, usize), usize>,
    /// Measured program qubits, ascending.
    pub measured: Vec<usize>,
}

impl InteractionProfile {
    /// Unordered pair counts, keyed by `(min, max)`.
    pub fn pairs(&self) -> BTreeMap<(usize, usize), usize> {
        let mut out = BTreeMap::new();
        for (&(a, b), &n) in &self.ordered_pairs {
            let key = (a.min(b), a.max(b));
            *out.entry(key).or_insert(0) += n;
        }
        out
    }

    /// Number of two-qubit gates counted, with multiplicity.
    pub fn two_qubit_gate_count(&self) -> usize {
        self.ordered_pairs.values().sum()
    }

    /// Distinct program qubits that participate in any operation.
    pub fn degree(&self, q: usize) -> usize {
        let mut ds = std::collections::BTreeSet::new();
        for &(a, b) in self.ordered_pairs.keys() {
            if a == q {
                ds.insert(b);
            }
            if b == q {
                ds.insert(a);
            }
        }
        ds.len()
    }
}

/// Collects the interaction profile of a decomposed circuit.
///
/// The input must be free of three-qubit gates (run
/// [`decompose_high_level`] first).
pub fn interaction_profile(c: &Circuit) -> InteractionProfile {
    let mut ordered_pairs: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for g in &c.gates {
        assert!(
            g.kind.arity() <= 2,
            "interaction profile requires decomposed circuits, found {}",
            g
        );
        if g.kind.is_two_qubit() {
            *ordered_pairs.entry((g.qubits[0], g.qubits[1])).or_insert(0) += 1;
        }
    }
    InteractionProfile {
        num_qubits: c.num_qubits,
        ordered_pairs,
        measured: c.measured_qubits(),
    }
}
