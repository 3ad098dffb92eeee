//! End-to-end two-qubit reliability matrix.
//!
//! For every ordered hardware pair `(i, j)` the matrix answers: if a
//! two-qubit gate needs control `i` and target `j`, what is the best success
//! probability achievable by swapping `i`'s state next to `j` and running
//! the gate there, and along which path?
//!
//! One inserted SWAP costs three native two-qubit gates, so a swap hop over
//! an edge with gate reliability `f` contributes `f^3`. On machines with
//! directed couplers a SWAP always contains one reversed CNOT, and a final
//! CNOT against the native direction needs four Hadamard corrections; both
//! effects multiply in a `(1 - err1q)^4` factor using the mean 1Q error of
//! the edge's endpoints.
//!
//! Everything runs in log domain (costs `-ln f`, sums instead of products)
//! and paths are found exactly with per-source Dijkstra. Ties between
//! equally reliable routes resolve to the lexicographically smallest node
//! sequence so results are stable across runs.

use crate::machine::{GateSet, Machine};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Which calibration the matrix reflects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReliabilityMode {
    /// Per-edge and per-qubit calibrated rates.
    NoiseAware,
    /// Every edge replaced by the machine-wide mean two-qubit reliability
    /// (and mean 1Q error for direction corrections): reliability then
    /// depends only on hop structure, which optimizes communication alone.
    Uniform,
}

/// All-pairs end-to-end reliabilities with explicit swap-path witnesses.
#[derive(Debug, Clone)]
pub struct ReliabilityMatrix {
    pub num_qubits: usize,
    pub mode: ReliabilityMode,
    /// Log-domain cost (-ln reliability) per ordered pair, row-major;
    /// diagonal entries are unused.
    cost: Vec<f64>,
    /// Witness swap path per ordered pair: node sequence from `i` to the
    /// chosen final neighbor `t'` of `j` (`[i]` alone when `i` is adjacent).
    paths: Vec<Vec<usize>>,
    /// Readout reliabilities 1 - erro.
    rro: Vec<f64>,
}

impl ReliabilityMatrix {
    /// End-to-end reliability for control `i`, target `j`. The diagonal is
    /// meaningless and querying it is a programming error.
    pub fn r2q(&self, i: usize, j: usize) -> f64 {
        assert_ne!(i, j, "r2q diagonal is undefined");
        (-self.cost[i * self.num_qubits + j]).exp()
    }

    /// Natural log of [`Self::r2q`] (always <= 0), exact in the internal
    /// representation.
    pub fn r2q_log(&self, i: usize, j: usize) -> f64 {
        assert_ne!(i, j, "r2q diagonal is undefined");
        -self.cost[i * self.num_qubits + j]
    }

    /// Readout reliability of qubit `q`.
    pub fn rro(&self, q: usize) -> f64 {
        self.rro[q]
    }

    /// Natural log of the readout reliability.
    pub fn rro_log(&self, q: usize) -> f64 {
        self.rro[q].ln()
    }

    /// Best swap route for control `i`, target `j`: the hardware qubits to
    /// swap the control state along, ending at the chosen neighbor `t'` of
    /// `j` where the gate finally runs. Adjacent pairs return `([i], i)`.
    pub fn best_swap_path(&self, i: usize, j: usize) -> (&[usize], usize) {
        assert_ne!(i, j, "no swap path from a qubit to itself");
        let p = &self.paths[i * self.num_qubits + j];
        (p, *p.last().expect("connected machines always have a route"))
    }
}

/// Heap entry ordered by (cost, lexicographic path), smallest first.
struct Entry {
    cost: f64,
    path: Vec<usize>,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Entry {}
impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed: BinaryHeap is a max-heap and we want the smallest.
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.path.cmp(&self.path))
    }
}

/// Computes the reliability matrix with direction corrections applied
/// exactly when the machine's gate set is directed (IBM-style CNOT).
pub fn compute_reliability_matrix(m: &Machine, mode: ReliabilityMode) -> ReliabilityMatrix {
    compute_reliability_matrix_with(m, mode, m.gate_set == GateSet::Ibm)
}

/// As [`compute_reliability_matrix`] but with the direction-correction
/// model explicitly enabled or disabled.
pub fn compute_reliability_matrix_with(
    m: &Machine,
    mode: ReliabilityMode,
    direction_corrections: bool,
) -> ReliabilityMatrix {
    let n = m.num_qubits;
    let uniform_rel = m.mean_edge_reliability();
    let uniform_e1 = m.mean_err1q();

    let edge_rel = |a: usize, b: usize| -> f64 {
        match mode {
            ReliabilityMode::Uniform => uniform_rel,
            ReliabilityMode::NoiseAware => 1.0 - m.edge_between(a, b).unwrap().err2q,
        }
    };
    let err1q_of = |q: usize| -> f64 {
        match mode {
            ReliabilityMode::Uniform => uniform_e1,
            ReliabilityMode::NoiseAware => m.err1q[q],
        }
    };
    let correction_cost = |u: usize, v: usize| -> f64 {
        let mean = 0.5 * (err1q_of(u) + err1q_of(v));
        -4.0 * (1.0 - mean).ln()
    };

    // Swap-hop cost over an edge: three native 2Q gates, plus one reversed
    // CNOT's corrections when the coupler is directed.
    let hop_cost = |u: usize, v: usize| -> f64 {
        let mut c = -3.0 * edge_rel(u, v).ln();
        if direction_corrections && m.edge_between(u, v).unwrap().directed {
            c += correction_cost(u, v);
        }
        c
    };
    // Final gate cost for control `k` -> target `j` on their shared edge.
    let final_cost = |k: usize, j: usize| -> f64 {
        let e = m.edge_between(k, j).unwrap();
        let mut c = -edge_rel(k, j).ln();
        if direction_corrections && e.directed && !(e.a == k && e.b == j) {
            c += correction_cost(k, j);
        }
        c
    };

    // Per-source Dijkstra over swap hops with lexicographic tie-breaking.
    // dist[s][v] = cheapest swap-chain cost from s to v, path[s][v] its
    // lexicographically smallest witness.
    let mut dist = vec![vec![f64::INFINITY; n]; n];
    let mut spath: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); n]; n];
    let neighbors: Vec<Vec<usize>> = (0..n).map(|q| m.neighbors(q)).collect();
    for s in 0..n {
        let mut heap = BinaryHeap::new();
        heap.push(Entry {
            cost: 0.0,
            path: vec![s],
        });
        let mut settled = vec![false; n];
        while let Some(Entry { cost, path }) = heap.pop() {
            let u = *path.last().unwrap();
            if settled[u] {
                continue;
            }
            settled[u] = true;
            dist[s][u] = cost;
            spath[s][u] = path.clone();
            for &v in &neighbors[u] {
                if !settled[v] {
                    let mut p = path.clone();
                    p.push(v);
                    heap.push(Entry {
                        cost: cost + hop_cost(u, v),
                        path: p,
                    });
                }
            }
        }
    }

    let mut cost = vec![f64::INFINITY; n * n];
    let mut paths: Vec<Vec<usize>> = vec![Vec::new(); n * n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                cost[i * n + j] = 0.0;
                continue;
            }
            let mut best: Option<(f64, &Vec<usize>)> = None;
            for &k in &neighbors[j] {
                let total = dist[i][k] + final_cost(k, j);
                let w = &spath[i][k];
                let better = match best {
                    None => true,
                    Some((bc, bp)) => match total.total_cmp(&bc) {
                        Ordering::Less => true,
                        Ordering::Greater => false,
                        Ordering::Equal => w < bp,
                    },
                };
                if better {
                    best = Some((total, w));
                }
            }
            let (c, p) = best.expect("machine is connected");
            cost[i * n + j] = c;
            paths[i * n + j] = p.clone();
        }
    }

    ReliabilityMatrix {
        num_qubits: n,
        mode,
        cost,
        paths,
        rro: m.erro.iter().map(|e| 1.0 - e).collect(),
    }
}

/// Renders the matrix as CSV: row = control, column = target, readout
/// reliabilities as a trailing block. Diagonal entries print as 0, a value
/// no real entry can take.
pub fn matrix_to_csv(rm: &ReliabilityMatrix) -> String {
    let n = rm.num_qubits;
    let mut out = String::new();
    out.push_str("control");
    for j in 0..n {
        out.push_str(&format!(",q{}", j));
    }
    out.push('\n');
    for i in 0..n {
        out.push_str(&format!("q{}", i));
        for j in 0..n {
            if i == j {
                out.push_str(",0");
            } else {
                out.push_str(&format!(",{:.11e}", rm.r2q(i, j)));
            }
        }
        out.push('\n');
    }
    out.push_str("readout");
    for q in 0..n {
        out.push_str(&format!(",{:.11e}", rm.rro(q)));
    }
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{builtin, Edge, GateSet, Machine};

    #[test]
    fn documented_example_routes_through_the_strong_edge() {
        let m = builtin("example8").unwrap();
        let rm = compute_reliability_matrix(&m, ReliabilityMode::NoiseAware);
        // Swapping 1 next to 6 via qubit 5 costs 0.9^3, the gate itself 0.8.
        let expect = 0.9f64.powi(3) * 0.8;
        assert!((rm.r2q(1, 6) - expect).abs() < 1e-12, "{}", rm.r2q(1, 6));
        let (path, t) = rm.best_swap_path(1, 6);
        assert_eq!(path, &[1, 5]);
        assert_eq!(t, 5);
        // The reverse entry takes a different route: swap across the strong
        // 6-2 edge, then run the gate on 2-1. The roles of the swap edge and
        // the gate edge flip, so the matrix is asymmetric even here.
        let reverse = 0.95f64.powi(3) * 0.7;
        assert!((rm.r2q(6, 1) - reverse).abs() < 1e-12, "{}", rm.r2q(6, 1));
        let (path, t) = rm.best_swap_path(6, 1);
        assert_eq!(path, &[6, 2]);
        assert_eq!(t, 2);
    }

    #[test]
    fn adjacent_pairs_use_the_direct_edge_when_it_wins() {
        let m = builtin("example8").unwrap();
        let rm = compute_reliability_matrix(&m, ReliabilityMode::NoiseAware);
        assert!((rm.r2q(2, 6) - 0.95).abs() < 1e-12);
        let (path, t) = rm.best_swap_path(2, 6);
        assert_eq!((path, t), (&[2][..], 2));
    }

    #[test]
    fn readout_reliability_is_one_minus_erro() {
        let m = builtin("ibmq5").unwrap();
        let rm = compute_reliability_matrix(&m, ReliabilityMode::NoiseAware);
        for q in 0..5 {
            assert_eq!(rm.rro(q), 1.0 - m.erro[q]);
        }
    }

    #[test]
    fn uniform_mode_depends_only_on_hop_and_correction_structure() {
        let m = builtin("grid14").unwrap();
        let rm = compute_reliability_matrix(&m, ReliabilityMode::Uniform);
        // Horizontally adjacent native-direction pairs all get one gate at
        // mean reliability: identical entries.
        let a = rm.r2q(0, 1);
        let b = rm.r2q(8, 9);
        assert!((a - b).abs() < 1e-12);
        // Reversed adjacent pairs share one correction factor.
        let ra = rm.r2q(1, 0);
        let rb = rm.r2q(9, 8);
        assert!((ra - rb).abs() < 1e-12);
        assert!(ra < a);
    }

    #[test]
    fn direction_corrections_can_be_disabled() {
        let m = builtin("ibmq5").unwrap();
        let with = compute_reliability_matrix(&m, ReliabilityMode::NoiseAware);
        let without = compute_reliability_matrix_with(&m, ReliabilityMode::NoiseAware, false);
        // Edge 1->0 is native; 0->1 is reversed.
        assert!(with.r2q(0, 1) < without.r2q(0, 1));
        assert!((without.r2q(0, 1) - without.r2q(1, 0)).abs() < 1e-15);
    }

    #[test]
    fn ties_resolve_to_the_lexicographically_smallest_path() {
        // Diamond: 0-1-3 and 0-2-3 with identical rates; both routes to a
        // gate on 3 tie, so the witness must prefer node 1.
        let m = Machine {
            name: "diamond".into(),
            num_qubits: 4,
            gate_set: GateSet::Rigetti,
            edges: vec![
                Edge { a: 0, b: 1, err2q: 0.05, directed: false },
                Edge { a: 0, b: 2, err2q: 0.05, directed: false },
                Edge { a: 1, b: 3, err2q: 0.05, directed: false },
                Edge { a: 2, b: 3, err2q: 0.05, directed: false },
            ],
            err1q: vec![0.001; 4],
            erro: vec![0.01; 4],
        }
        .validated()
        .unwrap();
        let rm = compute_reliability_matrix(&m, ReliabilityMode::NoiseAware);
        let (path, t) = rm.best_swap_path(0, 3);
        assert_eq!(path, &[0, 1]);
        assert_eq!(t, 1);
    }

    #[test]
    #[should_panic(expected = "diagonal")]
    fn diagonal_queries_panic() {
        let m = builtin("line4").unwrap();
        let rm = compute_reliability_matrix(&m, ReliabilityMode::NoiseAware);
        let _ = rm.r2q(1, 1);
    }

    #[test]
    fn csv_dump_has_one_row_per_qubit() {
        let m = builtin("line4").unwrap();
        let rm = compute_reliability_matrix(&m, ReliabilityMode::NoiseAware);
        let csv = matrix_to_csv(&rm);
        assert_eq!(csv.lines().count(), 1 + 4 + 1);
        assert!(csv.lines().nth(1).unwrap().starts_with("q0,0,"));
    }
}
