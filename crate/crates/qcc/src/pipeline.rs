//! The end-to-end compile pipeline and its report structure.
//!
//! Compilation always runs parse, high-level decomposition, dependency
//! scheduling, placement, routing, lowering. The optimization level decides
//! how much calibration data steers each stage:
//!
//! * `none`: identity placement, hop-count routing, gate-by-gate lowering.
//! * `1q`: as `none` plus run-merged single-qubit resynthesis.
//! * `comm`: placement and routing optimize communication structure on a
//!   uniform-reliability matrix, plus single-qubit resynthesis.
//! * `noise`: placement and routing optimize end-to-end reliability from
//!   the machine's calibration, plus single-qubit resynthesis.

use crate::codegen::{self, CompiledProgram};
use crate::ir::{decompose_high_level, dependency_schedule, interaction_profile, Circuit, GateKind};
use crate::machine::Machine;
use crate::mapper::{map_qubits, trivial_map, MapObjective, Mapping};
use crate::reliability::{compute_reliability_matrix, ReliabilityMatrix, ReliabilityMode};
use crate::router::route;
use crate::{QccError, Result};
use serde::Serialize;
use std::time::Instant;

/// How aggressively calibration data steers compilation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptLevel {
    NoOpt,
    OneQOpt,
    CommOpt,
    NoiseOpt,
}

impl OptLevel {
    pub fn name(self) -> &'static str {
        match self {
            OptLevel::NoOpt => "none",
            OptLevel::OneQOpt => "1q",
            OptLevel::CommOpt => "comm",
            OptLevel::NoiseOpt => "noise",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "none" => Some(OptLevel::NoOpt),
            "1q" => Some(OptLevel::OneQOpt),
            "comm" => Some(OptLevel::CommOpt),
            "noise" => Some(OptLevel::NoiseOpt),
            _ => None,
        }
    }

    pub fn all() -> [OptLevel; 4] {
        [
            OptLevel::NoOpt,
            OptLevel::OneQOpt,
            OptLevel::CommOpt,
            OptLevel::NoiseOpt,
        ]
    }
}

/// Gate counts over the final native instruction stream. RZ is listed
/// separately because it is implemented in software on every target and
/// costs no fidelity.
#[derive(Debug, Clone, Serialize)]
pub struct GateCounts {
    pub two_qubit: usize,
    pub single_qubit_pulses: usize,
    pub rz: usize,
    pub measurements: usize,
}

/// Everything a caller might want to know about one compilation.
#[derive(Debug, Clone, Serialize)]
pub struct CompileReport {
    pub circuit: String,
    pub machine: String,
    pub target: String,
    pub opt_level: String,
    pub objective: String,
    pub num_prog_qubits: usize,
    pub num_hw_qubits: usize,
    pub gate_counts: GateCounts,
    pub swaps_inserted: usize,
    pub estimated_reliability: f64,
    pub mapper_score: Option<f64>,
    pub mapping_ms: f64,
    pub seed: u64,
    pub initial_mapping: Vec<usize>,
    pub final_mapping: Vec<usize>,
}

fn count_gates(program: &CompiledProgram) -> GateCounts {
    let mut counts = GateCounts {
        two_qubit: 0,
        single_qubit_pulses: 0,
        rz: 0,
        measurements: 0,
    };
    for g in &program.instructions {
        match g.kind {
            GateKind::Measure => counts.measurements += 1,
            GateKind::Rz => counts.rz += 1,
            k if k.is_two_qubit() => counts.two_qubit += 1,
            _ => counts.single_qubit_pulses += 1,
        }
    }
    counts
}

/// Compiles `circuit` for `machine` at the given level. The objective only
/// matters at the `noise` level; communication-aware placement always
/// optimizes the product objective.
pub fn compile(
    circuit: &Circuit,
    machine: &Machine,
    opt_level: OptLevel,
    objective: MapObjective,
) -> Result<(CompiledProgram, CompileReport)> {
    if circuit.num_qubits > machine.num_qubits {
        return Err(QccError::TooLarge {
            needed: circuit.num_qubits,
            available: machine.num_qubits,
            machine: machine.name.clone(),
        });
    }
    let lowered = decompose_high_level(circuit);
    let scheduled = Circuit::new(
        &lowered.name,
        lowered.num_qubits,
        dependency_schedule(&lowered),
    );
    let profile = interaction_profile(&scheduled);

    let routing_mode = match opt_level {
        OptLevel::NoiseOpt => ReliabilityMode::NoiseAware,
        _ => ReliabilityMode::Uniform,
    };
    let rm = compute_reliability_matrix(machine, routing_mode);

    let map_start = Instant::now();
    let (mapping, mapper_score): (Mapping, Option<f64>) = match opt_level {
        OptLevel::NoOpt | OptLevel::OneQOpt => (trivial_map(scheduled.num_qubits), None),
        OptLevel::CommOpt => {
            let r = map_qubits(&profile, &rm, MapObjective::SumLog);
            (r.mapping, Some(r.score))
        }
        OptLevel::NoiseOpt => {
            let r = map_qubits(&profile, &rm, objective);
            (r.mapping, Some(r.score))
        }
    };
    let mapping_ms = map_start.elapsed().as_secs_f64() * 1e3;

    let routed = route(&scheduled, &mapping, &rm, machine);
    let program = codegen::generate(&routed, machine, opt_level != OptLevel::NoOpt);

    let report = CompileReport {
        circuit: circuit.name.clone(),
        machine: machine.name.clone(),
        target: machine.gate_set.name().to_string(),
        opt_level: opt_level.name().to_string(),
        objective: match opt_level {
            OptLevel::NoiseOpt => objective.name().to_string(),
            OptLevel::CommOpt => MapObjective::SumLog.name().to_string(),
            _ => "none".to_string(),
        },
        num_prog_qubits: circuit.num_qubits,
        num_hw_qubits: machine.num_qubits,
        gate_counts: count_gates(&program),
        swaps_inserted: program.swaps_inserted,
        estimated_reliability: program.estimated_reliability,
        mapper_score,
        mapping_ms,
        seed: 1,
        initial_mapping: program.initial_mapping.clone(),
        final_mapping: program.final_mapping.clone(),
    };
    Ok((program, report))
}

/// Reliability matrix used for routing and placement at a level; exposed
/// so callers can dump what the compiler saw.
pub fn reliability_for_level(machine: &Machine, opt_level: OptLevel) -> ReliabilityMatrix {
    let mode = match opt_level {
        OptLevel::NoiseOpt => ReliabilityMode::NoiseAware,
        _ => ReliabilityMode::Uniform,
    };
    compute_reliability_matrix(machine, mode)
}

/// Compiles at every optimization level for side-by-side comparison.
pub fn compare(
    circuit: &Circuit,
    machine: &Machine,
    objective: MapObjective,
) -> Result<Vec<CompileReport>> {
    let mut reports = Vec::new();
    for level in OptLevel::all() {
        let (_, report) = compile(circuit, machine, level, objective)?;
        reports.push(report);
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::generate;
    use crate::machine::builtin;
    use crate::sim::routed_equivalent;

    #[test]
    fn every_level_compiles_and_stays_equivalent() {
        let bench = generate("toffoli").unwrap();
        let machine = builtin("ibmq5").unwrap();
        for level in OptLevel::all() {
            let (program, report) =
                compile(&bench.circuit, &machine, level, MapObjective::SumLog).unwrap();
            assert_eq!(report.opt_level, level.name());
            assert!(report.estimated_reliability > 0.0);
            let decomposed = decompose_high_level(&bench.circuit);
            assert!(
                routed_equivalent(
                    &decomposed,
                    &program.instructions,
                    program.num_hw_qubits,
                    &program.initial_mapping,
                    &program.hw_permutation,
                    1e-9,
                ),
                "level {}",
                level.name()
            );
        }
    }

    #[test]
    fn single_qubit_optimization_never_adds_pulses() {
        let bench = generate("bv4").unwrap();
        let machine = builtin("ibmq5").unwrap();
        let (_, none) = compile(&bench.circuit, &machine, OptLevel::NoOpt, MapObjective::SumLog)
            .unwrap();
        let (_, oneq) = compile(
            &bench.circuit,
            &machine,
            OptLevel::OneQOpt,
            MapObjective::SumLog,
        )
        .unwrap();
        assert!(
            oneq.gate_counts.single_qubit_pulses <= none.gate_counts.single_qubit_pulses
        );
        assert_eq!(oneq.gate_counts.two_qubit, none.gate_counts.two_qubit);
    }

    #[test]
    fn oversized_circuits_error_with_machine_context() {
        let bench = generate("bv8").unwrap();
        let machine = builtin("ibmq5").unwrap();
        let err = compile(
            &bench.circuit,
            &machine,
            OptLevel::NoOpt,
            MapObjective::SumLog,
        )
        .unwrap_err();
        match err {
            QccError::TooLarge {
                needed, available, ..
            } => {
                assert_eq!(needed, 8);
                assert_eq!(available, 5);
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn comparison_covers_all_four_levels() {
        let bench = generate("hs4").unwrap();
        let machine = builtin("line4").unwrap();
        let reports = compare(&bench.circuit, &machine, MapObjective::SumLog).unwrap();
        assert_eq!(reports.len(), 4);
        let levels: Vec<&str> = reports.iter().map(|r| r.opt_level.as_str()).collect();
        assert_eq!(levels, vec!["none", "1q", "comm", "noise"]);
    }

    #[test]
    fn reports_serialize_to_json() {
        let bench = generate("peres").unwrap();
        let machine = builtin("ion5").unwrap();
        let (_, report) = compile(
            &bench.circuit,
            &machine,
            OptLevel::NoiseOpt,
            MapObjective::MaxMin,
        )
        .unwrap();
        let json = serde_json::to_string_pretty(&report).unwrap();
        assert!(json.contains("\"estimated_reliability\""));
        assert!(json.contains("\"maxmin\""));
    }
}
