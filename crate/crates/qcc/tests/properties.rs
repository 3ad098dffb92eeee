//! Randomized structural properties of the compiler stages.

use proptest::prelude::*;
use qcc::codegen::{emit_quaternion, estimate_reliability, Quaternion};
use qcc::ir::{dependency_schedule, parse_circuit, Circuit, Gate, GateKind};
use qcc::machine::{Edge, GateSet, Machine};
use qcc::pipeline::{compile, OptLevel};
use qcc::mapper::MapObjective;
use qcc::reliability::{compute_reliability_matrix, ReliabilityMode};
use qcc::sim::{equivalent_up_to_phase, unitary_of};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn gate_strategy(n: usize) -> impl Strategy<Value = Gate> {
    let q = 0..n;
    let pair = (0..n, 0..n).prop_filter("distinct", |(a, b)| a != b);
    let triple = (0..n, 0..n, 0..n)
        .prop_filter("distinct", |(a, b, c)| a != b && b != c && a != c);
    let angle = -7.0f64..7.0f64;
    let mut options = vec![
        q.clone().prop_map(Gate::h).boxed(),
        q.clone().prop_map(Gate::x).boxed(),
        q.clone().prop_map(Gate::y).boxed(),
        q.clone().prop_map(Gate::z).boxed(),
        q.clone().prop_map(Gate::s).boxed(),
        q.clone().prop_map(Gate::sdg).boxed(),
        q.clone().prop_map(Gate::t).boxed(),
        q.clone().prop_map(Gate::tdg).boxed(),
        (angle.clone(), q.clone()).prop_map(|(a, q)| Gate::rx(a, q)).boxed(),
        (angle.clone(), q.clone()).prop_map(|(a, q)| Gate::ry(a, q)).boxed(),
        (angle.clone(), q.clone()).prop_map(|(a, q)| Gate::rz(a, q)).boxed(),
    ];
    if n >= 2 {
        options.push(pair.clone().prop_map(|(a, b)| Gate::cnot(a, b)).boxed());
        options.push(pair.clone().prop_map(|(a, b)| Gate::cz(a, b)).boxed());
        options.push(pair.clone().prop_map(|(a, b)| Gate::swap(a, b)).boxed());
        options.push(
            (angle, pair)
                .prop_map(|(t, (a, b))| Gate::xx(t, a, b))
                .boxed(),
        );
    }
    if n >= 3 {
        options.push(
            triple
                .clone()
                .prop_map(|(a, b, c)| Gate::toffoli(a, b, c))
                .boxed(),
        );
        options.push(
            triple
                .prop_map(|(a, b, c)| Gate::fredkin(a, b, c))
                .boxed(),
        );
    }
    proptest::strategy::Union::new(options)
}

fn circuit_strategy() -> impl Strategy<Value = Circuit> {
    (1usize..6).prop_flat_map(|n| {
        (
            proptest::collection::vec(gate_strategy(n), 0..25),
            proptest::collection::vec(proptest::bool::ANY, n),
        )
            .prop_map(move |(mut gates, measure_mask)| {
                for (q, take) in measure_mask.iter().enumerate() {
                    if *take {
                        gates.push(Gate::measure(q));
                    }
                }
                Circuit::new("prop", n, gates)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn text_format_round_trips(circuit in circuit_strategy()) {
        let parsed = parse_circuit(&circuit.to_text()).unwrap();
        prop_assert_eq!(parsed.num_qubits, circuit.num_qubits);
        prop_assert_eq!(parsed.gates, circuit.gates);
    }

    #[test]
    fn scheduling_preserves_per_qubit_gate_order(circuit in circuit_strategy()) {
        let ordered = dependency_schedule(&circuit);
        prop_assert_eq!(ordered.len(), circuit.gates.len());
        for q in 0..circuit.num_qubits {
            let touches = |g: &&Gate| g.qubits.contains(&q);
            let before: Vec<&Gate> = circuit.gates.iter().filter(touches).collect();
            let after: Vec<&Gate> = ordered.iter().filter(touches).collect();
            prop_assert_eq!(before, after, "qubit {} saw a reordered gate", q);
        }
    }

    #[test]
    fn quaternion_products_stay_unit_and_resynthesize(
        axes in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, -7.0f64..7.0), 1..12)
    ) {
        let mut q = Quaternion::IDENTITY;
        for (nx, ny, nz, angle) in axes {
            let len = (nx * nx + ny * ny + nz * nz).sqrt();
            if len < 1e-3 {
                continue;
            }
            q = Quaternion::from_axis_angle(nx / len, ny / len, nz / len, angle).mul(q);
        }
        prop_assert!((q.norm() - 1.0).abs() < 1e-9, "norm drifted to {}", q.norm());

        let mut out = Vec::new();
        emit_quaternion(q, 0, &mut out);
        prop_assert!(out.len() <= 3);
        let pulses = out.iter().filter(|g| g.kind != GateKind::Rz).count();
        prop_assert!(pulses <= 1);
    }

    #[test]
    fn zxz_synthesis_reproduces_the_rotation(
        ops in proptest::collection::vec((0u8..3, -7.0f64..7.0), 1..10)
    ) {
        let gates: Vec<Gate> = ops
            .iter()
            .map(|&(axis, angle)| match axis {
                0 => Gate::rx(angle, 0),
                1 => Gate::ry(angle, 0),
                _ => Gate::rz(angle, 0),
            })
            .collect();
        let mut q = Quaternion::IDENTITY;
        for g in &gates {
            q = Quaternion::of_gate(g.kind, g.angle).mul(q);
        }
        let mut synth = Vec::new();
        emit_quaternion(q, 0, &mut synth);
        prop_assert!(
            equivalent_up_to_phase(&unitary_of(&gates, 1), &unitary_of(&synth, 1), 1e-9),
            "synthesized train diverged"
        );
    }
}

fn random_connected_machine(seed: u64) -> Machine {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=7);
    let mut edges = Vec::new();
    for b in 1..n {
        let a = rng.gen_range(0..b);
        edges.push(Edge { a, b, err2q: rng.gen_range(0.005..0.2), directed: false });
    }
    for _ in 0..rng.gen_range(0..n) {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b && !edges.iter().any(|e| (e.a, e.b) == (a, b) || (e.a, e.b) == (b, a)) {
            edges.push(Edge { a, b, err2q: rng.gen_range(0.005..0.2), directed: false });
        }
    }
    Machine {
        name: format!("prop{}", seed),
        num_qubits: n,
        gate_set: GateSet::Rigetti,
        edges,
        err1q: (0..n).map(|_| rng.gen_range(0.0..0.01)).collect(),
        erro: (0..n).map(|_| rng.gen_range(0.01..0.1)).collect(),
    }
    .validated()
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reliability_entries_stay_in_unit_range(seed in 0u64..10_000) {
        let m = random_connected_machine(seed);
        let rm = compute_reliability_matrix(&m, ReliabilityMode::NoiseAware);
        for i in 0..m.num_qubits {
            for j in 0..m.num_qubits {
                if i == j {
                    continue;
                }
                let r = rm.r2q(i, j);
                prop_assert!(r > 0.0 && r <= 1.0, "r2q({},{}) = {}", i, j, r);
            }
            let ro = rm.rro(i);
            prop_assert!(ro > 0.0 && ro <= 1.0);
        }
    }

    #[test]
    fn degrading_an_edge_never_raises_reliability(seed in 0u64..10_000) {
        let m = random_connected_machine(seed);
        let rm = compute_reliability_matrix(&m, ReliabilityMode::NoiseAware);
        let mut worse = m.clone();
        let k = seed as usize % worse.edges.len();
        worse.edges[k].err2q = (worse.edges[k].err2q * 3.0).min(0.9);
        let rm2 = compute_reliability_matrix(&worse, ReliabilityMode::NoiseAware);
        for i in 0..m.num_qubits {
            for j in 0..m.num_qubits {
                if i == j {
                    continue;
                }
                prop_assert!(
                    rm2.r2q(i, j) <= rm.r2q(i, j) + 1e-12,
                    "worsening edge {} raised r2q({},{})",
                    k, i, j
                );
            }
        }
    }

    #[test]
    fn estimates_stay_in_unit_range_and_shrink_with_extra_work(seed in 0u64..10_000) {
        let m = random_connected_machine(seed);
        let n = m.num_qubits.min(3);
        let mut gates = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        for _ in 0..6 {
            let q = rng.gen_range(0..n);
            gates.push(Gate::h(q));
            if n >= 2 {
                let mut t = rng.gen_range(0..n);
                while t == q {
                    t = rng.gen_range(0..n);
                }
                gates.push(Gate::cnot(q, t));
            }
        }
        for q in 0..n {
            gates.push(Gate::measure(q));
        }
        let circuit = Circuit::new("walk", n, gates);
        let (program, report) =
            compile(&circuit, &m, OptLevel::NoiseOpt, MapObjective::SumLog).unwrap();
        prop_assert!(report.estimated_reliability > 0.0);
        prop_assert!(report.estimated_reliability <= 1.0);

        let est_full = estimate_reliability(&program.instructions, &m);
        let est_prefix =
            estimate_reliability(&program.instructions[..program.instructions.len() / 2], &m);
        prop_assert!(est_full <= est_prefix + 1e-12, "extra gates raised the estimate");
    }
}
