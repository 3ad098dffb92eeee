//! Hardware machine descriptions.
//!
//! A machine is a connected qubit graph with per-edge two-qubit error rates,
//! per-qubit one-qubit and readout error rates, and a gate-set family that
//! decides lowering: `ibm` (directed CNOT), `rigetti` (CZ), or `iontrap`
//! (XX, all-to-all in practice).
//!
//! Machines load from JSON; unknown fields are rejected so typos fail loudly.

use crate::error::{QccError, Result};
use serde::{Deserialize, Serialize};

/// Native two-qubit embodiment family of a machine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GateSet {
    #[serde(rename = "ibm")]
    Ibm,
    #[serde(rename = "rigetti")]
    Rigetti,
    #[serde(rename = "iontrap")]
    IonTrap,
}

impl GateSet {
    pub fn name(self) -> &'static str {
        match self {
            GateSet::Ibm => "ibm",
            GateSet::Rigetti => "rigetti",
            GateSet::IonTrap => "iontrap",
        }
    }

    pub fn from_name(s: &str) -> Option<GateSet> {
        match s {
            "ibm" => Some(GateSet::Ibm),
            "rigetti" => Some(GateSet::Rigetti),
            "iontrap" => Some(GateSet::IonTrap),
            _ => None,
        }
    }
}

/// Coupler between two qubits. When `directed` is true the native two-qubit
/// gate runs control `a` -> target `b`; the reverse orientation costs extra
/// single-qubit corrections.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub err2q: f64,
    #[serde(default)]
    pub directed: bool,
}

/// A hardware target: topology plus calibration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Machine {
    pub name: String,
    pub num_qubits: usize,
    pub gate_set: GateSet,
    pub edges: Vec<Edge>,
    pub err1q: Vec<f64>,
    pub erro: Vec<f64>,
}

impl Machine {
    /// Validates and returns the machine. Checks ranges, duplicate edges,
    /// vector lengths, and connectivity.
    pub fn validated(self) -> Result<Machine> {
        let bad = |msg: String| Err(QccError::Machine(msg));
        if self.num_qubits == 0 {
            return bad("num_qubits must be positive".into());
        }
        if self.err1q.len() != self.num_qubits {
            return bad(format!(
                "err1q has {} entries for {} qubits",
                self.err1q.len(),
                self.num_qubits
            ));
        }
        if self.erro.len() != self.num_qubits {
            return bad(format!(
                "erro has {} entries for {} qubits",
                self.erro.len(),
                self.num_qubits
            ));
        }
        for (field, rates) in [("err1q", &self.err1q), ("erro", &self.erro)] {
            for (i, &r) in rates.iter().enumerate() {
                if !(0.0..1.0).contains(&r) {
                    return bad(format!("{field}[{i}] = {r} outside [0, 1)"));
                }
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.a >= self.num_qubits || e.b >= self.num_qubits {
                return bad(format!("edges[{i}] touches qubit outside 0..{}", self.num_qubits));
            }
            if e.a == e.b {
                return bad(format!("edges[{i}] is a self-loop on qubit {}", e.a));
            }
            if !(0.0..1.0).contains(&e.err2q) {
                return bad(format!("edges[{i}].err2q = {} outside [0, 1)", e.err2q));
            }
            if !seen.insert((e.a.min(e.b), e.a.max(e.b))) {
                return bad(format!("duplicate edge between {} and {}", e.a, e.b));
            }
        }
        if self.num_qubits > 1 {
            let mut reach = vec![false; self.num_qubits];
            let mut stack = vec![0usize];
            reach[0] = true;
            while let Some(u) = stack.pop() {
                for e in &self.edges {
                    for (x, y) in [(e.a, e.b), (e.b, e.a)] {
                        if x == u && !reach[y] {
                            reach[y] = true;
                            stack.push(y);
                        }
                    }
                }
            }
            if let Some(q) = reach.iter().position(|&r| !r) {
                return bad(format!("qubit {q} is disconnected from qubit 0"));
            }
        }
        Ok(self)
    }

    /// The edge covering the unordered pair `{u, v}`, if any.
    pub fn edge_between(&self, u: usize, v: usize) -> Option<&Edge> {
        self.edges
            .iter()
            .find(|e| (e.a == u && e.b == v) || (e.a == v && e.b == u))
    }

    /// Undirected neighbors of `q`, ascending.
    pub fn neighbors(&self, q: usize) -> Vec<usize> {
        let mut ns: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|e| {
                if e.a == q {
                    Some(e.b)
                } else if e.b == q {
                    Some(e.a)
                } else {
                    None
                }
            })
            .collect();
        ns.sort_unstable();
        ns
    }

    /// Mean two-qubit reliability (1 - err2q) over all edges.
    pub fn mean_edge_reliability(&self) -> f64 {
        let s: f64 = self.edges.iter().map(|e| 1.0 - e.err2q).sum();
        s / self.edges.len() as f64
    }

    /// Mean one-qubit error rate over all qubits.
    pub fn mean_err1q(&self) -> f64 {
        self.err1q.iter().sum::<f64>() / self.err1q.len() as f64
    }

    /// Serializes to pretty JSON, the same schema [`load_machine`] reads.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("machine serializes")
    }
}

/// Parses a machine from JSON text.
pub fn parse_machine(json: &str) -> Result<Machine> {
    let m: Machine =
        serde_json::from_str(json).map_err(|e| QccError::Machine(e.to_string()))?;
    let m = m.validated()?;
    if m.gate_set != GateSet::Ibm && m.edges.iter().any(|e| e.directed) {
        eprintln!(
            "warning: machine '{}' marks directed edges but its gate set ({}) is symmetric",
            m.name,
            m.gate_set.name()
        );
    }
    Ok(m)
}

/// Loads and validates a machine description file.
pub fn load_machine(path: &std::path::Path) -> Result<Machine> {
    let text = std::fs::read_to_string(path)?;
    parse_machine(&text)
}

fn preset(
    name: &str,
    gate_set: GateSet,
    num_qubits: usize,
    edges: Vec<Edge>,
    err1q: Vec<f64>,
    erro: Vec<f64>,
) -> Machine {
    Machine {
        name: name.to_string(),
        num_qubits,
        gate_set,
        edges,
        err1q,
        erro,
    }
    .validated()
    .expect("preset machines are valid")
}

fn edge(a: usize, b: usize, err2q: f64) -> Edge {
    Edge {
        a,
        b,
        err2q,
        directed: false,
    }
}

fn dedge(a: usize, b: usize, err2q: f64) -> Edge {
    Edge {
        a,
        b,
        err2q,
        directed: true,
    }
}

/// Four qubits in a line with CZ couplers.
pub fn line4() -> Machine {
    preset(
        "line4",
        GateSet::Rigetti,
        4,
        vec![edge(0, 1, 0.045), edge(1, 2, 0.028), edge(2, 3, 0.052)],
        vec![0.0021, 0.0016, 0.0024, 0.0019],
        vec![0.041, 0.033, 0.038, 0.047],
    )
}

/// Five-qubit bowtie with directed CNOTs: two triangles joined at qubit 2.
pub fn ibmq5() -> Machine {
    preset(
        "ibmq5",
        GateSet::Ibm,
        5,
        vec![
            dedge(1, 0, 0.024),
            dedge(2, 0, 0.031),
            dedge(2, 1, 0.036),
            dedge(3, 2, 0.028),
            dedge(3, 4, 0.021),
            dedge(2, 4, 0.042),
        ],
        vec![0.0012, 0.0019, 0.0023, 0.0014, 0.0017],
        vec![0.036, 0.029, 0.044, 0.031, 0.052],
    )
}

/// Fourteen qubits in a 2x7 grid with directed CNOTs. Qubits 0-6 form the
/// top row, 7-13 the bottom row.
pub fn grid14() -> Machine {
    let mut edges = Vec::new();
    let mut k = 0usize;
    let rate = |k: usize| 0.022 + 0.036 * ((k * 7 % 19) as f64 / 19.0);
    for r in 0..2usize {
        for c in 0..6usize {
            let a = r * 7 + c;
            edges.push(dedge(a, a + 1, rate(k)));
            k += 1;
        }
    }
    for c in 0..7usize {
        edges.push(dedge(c, c + 7, rate(k)));
        k += 1;
    }
    let err1q: Vec<f64> = (0..14).map(|q| 0.0012 + 0.0001 * (q * 5 % 11) as f64).collect();
    let erro: Vec<f64> = (0..14).map(|q| 0.028 + 0.002 * (q * 3 % 13) as f64).collect();
    preset("grid14", GateSet::Ibm, 14, edges, err1q, erro)
}

/// Five fully connected trapped-ion qubits.
pub fn ion5() -> Machine {
    let mut edges = Vec::new();
    let mut k = 0usize;
    for a in 0..5usize {
        for b in a + 1..5 {
            edges.push(edge(a, b, 0.018 + 0.004 * (k % 4) as f64));
            k += 1;
        }
    }
    preset(
        "ion5",
        GateSet::IonTrap,
        5,
        edges,
        vec![0.0008, 0.0011, 0.0009, 0.0012, 0.0010],
        vec![0.012, 0.017, 0.014, 0.019, 0.015],
    )
}

/// Eight-qubit 2x4 grid used throughout the documentation: qubits 0-3 on
/// top, 4-7 below, with the well-known (1,6) routing example built in
/// (edge (1,5) at reliability 0.9, edge (5,6) at 0.8).
pub fn example8() -> Machine {
    preset(
        "example8",
        GateSet::Rigetti,
        8,
        vec![
            edge(0, 1, 0.15),
            edge(1, 2, 0.30),
            edge(2, 3, 0.10),
            edge(4, 5, 0.12),
            edge(5, 6, 0.20),
            edge(6, 7, 0.14),
            edge(0, 4, 0.08),
            edge(1, 5, 0.10),
            edge(2, 6, 0.05),
            edge(3, 7, 0.18),
        ],
        vec![0.002; 8],
        vec![0.03; 8],
    )
}

/// All built-in machines by name.
pub fn builtin_machines() -> Vec<Machine> {
    vec![line4(), ibmq5(), grid14(), ion5(), example8()]
}

/// Looks up one built-in machine.
pub fn builtin(name: &str) -> Option<Machine> {
    builtin_machines().into_iter().find(|m| m.name == name)
}
