//! Routing: making every two-qubit gate executable on a machine edge.
//!
//! Gates arrive in dependency order on program qubits. The router tracks
//! where every program qubit's state currently lives on hardware. Adjacent
//! operands execute in place; when a two-qubit gate needs qubits that are
//! not adjacent it swaps the control state along the most reliable path
//! from the reliability matrix, then runs the gate on the final edge.
//! Inserted SWAPs permute the hardware state, so the routed circuit records
//! the full permutation along with where each measured program qubit ended
//! up.

use crate::ir::{Circuit, Gate, GateKind};
use crate::machine::Machine;
use crate::mapper::Mapping;
use crate::reliability::ReliabilityMatrix;

/// A circuit rewritten onto hardware qubits with SWAPs inserted.
#[derive(Debug, Clone)]
pub struct RoutedCircuit {
    pub name: String,
    /// Gate stream over hardware qubit indices.
    pub gates: Vec<Gate>,
    pub num_hw_qubits: usize,
    pub initial_mapping: Mapping,
    /// Where each program qubit's state lives after all swaps.
    pub final_mapping: Vec<usize>,
    /// The state that starts on hardware qubit `h` ends on
    /// `hw_permutation[h]`.
    pub hw_permutation: Vec<usize>,
    /// Measured program qubits in emission order with the hardware qubit
    /// each was read from.
    pub measurements: Vec<(usize, usize)>,
    pub swaps_inserted: usize,
}

/// Routes a decomposed, scheduled circuit onto `machine` starting from
/// `initial`, swapping along the most reliable paths in `rm`.
pub fn route(
    circuit: &Circuit,
    initial: &Mapping,
    rm: &ReliabilityMatrix,
    machine: &Machine,
) -> RoutedCircuit {
    assert_eq!(
        initial.num_prog_qubits(),
        circuit.num_qubits,
        "mapping does not cover the circuit"
    );
    assert!(
        circuit.num_qubits <= machine.num_qubits,
        "circuit needs {} qubits but machine '{}' has {}",
        circuit.num_qubits,
        machine.num_qubits,
        machine.name
    );
    let n_h = machine.num_qubits;
    // location[h] = where the state that started on hardware qubit h now
    // lives; occupant is its inverse.
    let mut location: Vec<usize> = (0..n_h).collect();
    let mut occupant: Vec<usize> = (0..n_h).collect();
    let live = |location: &[usize], p: usize| location[initial.hw(p)];

    let mut gates: Vec<Gate> = Vec::with_capacity(circuit.gates.len());
    let mut measurements = Vec::new();
    let mut swaps_inserted = 0usize;

    for gate in &circuit.gates {
        match gate.kind {
            GateKind::Measure => {
                let h = live(&location, gate.qubits[0]);
                gates.push(Gate::measure(h));
                measurements.push((gate.qubits[0], h));
            }
            k if k.arity() == 1 => {
                let h = live(&location, gate.qubits[0]);
                gates.push(Gate::new(gate.kind, vec![h], gate.angle));
            }
            k if k.arity() == 2 => {
                let (a, b) = (gate.qubits[0], gate.qubits[1]);
                let ha = live(&location, a);
                let hb = live(&location, b);
                if machine.edge_between(ha, hb).is_some() {
                    gates.push(Gate::new(gate.kind, vec![ha, hb], gate.angle));
                    continue;
                }
                // Non-adjacent: swap the control state along the stored most
                // reliable path, then run the gate across the final link.
                // The path never touches hb, so the target operand stays in
                // place and its end is adjacent to hb.
                let (path, gate_slot) = rm.best_swap_path(ha, hb);
                let path = path.to_vec();
                for hop in path.windows(2) {
                    let edge = machine
                        .edge_between(hop[0], hop[1])
                        .expect("swap paths follow machine edges");
                    gates.push(Gate::swap(edge.a, edge.b));
                    swaps_inserted += 1;
                    let (ou, ov) = (occupant[edge.a], occupant[edge.b]);
                    location[ou] = edge.b;
                    location[ov] = edge.a;
                    occupant[edge.a] = ov;
                    occupant[edge.b] = ou;
                }
                debug_assert_eq!(live(&location, a), gate_slot);
                debug_assert_eq!(live(&location, b), hb);
                debug_assert!(machine.edge_between(gate_slot, hb).is_some());
                gates.push(Gate::new(gate.kind, vec![gate_slot, hb], gate.angle));
            }
            _ => panic!("routing requires decomposed gates, found {}", gate),
        }
    }

    let final_mapping = (0..circuit.num_qubits)
        .map(|p| location[initial.hw(p)])
        .collect();
    RoutedCircuit {
        name: circuit.name.clone(),
        gates,
        num_hw_qubits: n_h,
        initial_mapping: initial.clone(),
        final_mapping,
        hw_permutation: location,
        measurements,
        swaps_inserted,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::parse_circuit;
    use crate::machine::builtin;
    use crate::mapper::trivial_map;
    use crate::reliability::{compute_reliability_matrix, ReliabilityMode};
    use crate::sim::routed_equivalent;

    fn route_on(name: &str, text: &str) -> RoutedCircuit {
        let circuit = parse_circuit(text).unwrap();
        let machine = builtin(name).unwrap();
        let rm = compute_reliability_matrix(&machine, ReliabilityMode::NoiseAware);
        route(
            &circuit,
            &trivial_map(circuit.num_qubits),
            &rm,
            &machine,
        )
    }

    #[test]
    fn adjacent_gates_need_no_swaps() {
        let routed = route_on("line4", "qubits 2\nh 0\ncnot 0 1\nmeasure 0\nmeasure 1\n");
        assert_eq!(routed.swaps_inserted, 0);
        assert_eq!(routed.final_mapping, vec![0, 1]);
        assert_eq!(routed.measurements, vec![(0, 0), (1, 1)]);
    }

    #[test]
    fn distant_gates_swap_along_the_line() {
        let routed = route_on("line4", "qubits 4\ncnot 0 3\nmeasure 0\nmeasure 3\n");
        assert_eq!(routed.swaps_inserted, 2);
        let cnot = routed
            .gates
            .iter()
            .find(|g| g.kind == GateKind::Cnot)
            .unwrap();
        assert_eq!(cnot.qubits, vec![2, 3]);
        assert_eq!(routed.measurements, vec![(0, 2), (3, 3)]);
        // Qubit 0's state moved to 2; the displaced states shifted down.
        assert_eq!(routed.hw_permutation, vec![2, 0, 1, 3]);
    }

    #[test]
    fn routed_circuits_implement_the_source_unitary() {
        let text = "qubits 4\nh 0\ncnot 0 3\nt 1\ncz 1 2\ncnot 3 1\nx 2\n";
        let circuit = parse_circuit(text).unwrap();
        for name in ["line4", "ibmq5", "example8"] {
            let machine = builtin(name).unwrap();
            let rm = compute_reliability_matrix(&machine, ReliabilityMode::NoiseAware);
            let m0 = trivial_map(circuit.num_qubits);
            let routed = route(&circuit, &m0, &rm, &machine);
            assert!(
                routed_equivalent(
                    &circuit,
                    &routed.gates,
                    machine.num_qubits,
                    &m0.prog_to_hw,
                    &routed.hw_permutation,
                    1e-9,
                ),
                "machine {}",
                name
            );
        }
    }

    #[test]
    fn measurements_follow_displaced_states() {
        let routed = route_on("example8", "qubits 3\ncnot 0 2\nmeasure 0\nmeasure 1\nmeasure 2\n");
        for (prog, hw) in &routed.measurements {
            assert_eq!(routed.final_mapping[*prog], *hw);
        }
    }

    #[test]
    fn nonidentity_initial_mappings_are_respected() {
        let circuit = parse_circuit("qubits 2\ncnot 0 1\n").unwrap();
        let machine = builtin("line4").unwrap();
        let rm = compute_reliability_matrix(&machine, ReliabilityMode::NoiseAware);
        let m0 = Mapping {
            prog_to_hw: vec![3, 2],
        };
        let routed = route(&circuit, &m0, &rm, &machine);
        assert_eq!(routed.swaps_inserted, 0);
        assert_eq!(routed.gates[0].qubits, vec![3, 2]);
    }
}
