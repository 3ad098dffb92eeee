//! Python bindings for the qcc compiler.
//!
//! The module mirrors the command line: parse or generate a circuit, pick a
//! machine, compile at an optimization level, then inspect, emit, or
//! simulate the result.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use qcc::ir::parse_circuit;
use qcc::machine::{builtin, builtin_machines, parse_machine};
use qcc::mapper::MapObjective;
use qcc::pipeline::{compile as compile_rs, OptLevel};
use qcc::reliability::{compute_reliability_matrix, ReliabilityMode};
use qcc::sim::{run_noisy, success_rate};
use std::collections::BTreeMap;

fn err(e: qcc::QccError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A parsed quantum circuit over program qubits.
#[pyclass(frozen)]
struct Circuit {
    inner: qcc::ir::Circuit,
}

#[pymethods]
impl Circuit {
    /// Parses the textual gate format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Circuit {
            inner: parse_circuit(text).map_err(err)?,
        })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn num_qubits(&self) -> usize {
        self.inner.num_qubits
    }

    #[getter]
    fn num_gates(&self) -> usize {
        self.inner.gates.len()
    }

    fn measured_qubits(&self) -> Vec<usize> {
        self.inner.measured_qubits()
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn __repr__(&self) -> String {
        format!(
            "Circuit(name={:?}, qubits={}, gates={})",
            self.inner.name,
            self.inner.num_qubits,
            self.inner.gates.len()
        )
    }
}

/// A hardware target: topology, gate set, and calibration data.
#[pyclass(frozen)]
struct Machine {
    inner: qcc::machine::Machine,
}

#[pymethods]
impl Machine {
    /// Looks up a built-in machine by name.
    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        builtin(name)
            .map(|inner| Machine { inner })
            .ok_or_else(|| {
                PyValueError::new_err(format!(
                    "unknown machine '{}': expected one of {}",
                    name,
                    Machine::builtin_names().join(", ")
                ))
            })
    }

    /// Names of all built-in machines.
    #[staticmethod]
    fn builtin_names() -> Vec<String> {
        builtin_machines().into_iter().map(|m| m.name).collect()
    }

    /// Parses a machine description from JSON text.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Machine {
            inner: parse_machine(text).map_err(err)?,
        })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn num_qubits(&self) -> usize {
        self.inner.num_qubits
    }

    #[getter]
    fn gate_set(&self) -> String {
        self.inner.gate_set.name().to_string()
    }

    #[getter]
    fn num_edges(&self) -> usize {
        self.inner.edges.len()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn __repr__(&self) -> String {
        format!(
            "Machine(name={:?}, qubits={}, gate_set={:?})",
            self.inner.name,
            self.inner.num_qubits,
            self.inner.gate_set.name()
        )
    }
}

/// A compiled program in the target machine's native gate set.
#[pyclass(frozen)]
struct CompiledProgram {
    inner: qcc::codegen::CompiledProgram,
}

#[pymethods]
impl CompiledProgram {
    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn target(&self) -> String {
        self.inner.target.name().to_string()
    }

    #[getter]
    fn estimated_reliability(&self) -> f64 {
        self.inner.estimated_reliability
    }

    #[getter]
    fn swaps_inserted(&self) -> usize {
        self.inner.swaps_inserted
    }

    #[getter]
    fn num_instructions(&self) -> usize {
        self.inner.instructions.len()
    }

    #[getter]
    fn initial_mapping(&self) -> Vec<usize> {
        self.inner.initial_mapping.clone()
    }

    #[getter]
    fn final_mapping(&self) -> Vec<usize> {
        self.inner.final_mapping.clone()
    }

    /// Renders the program in its target's textual format.
    fn emit(&self) -> String {
        qcc::codegen::emit(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "CompiledProgram(name={:?}, target={:?}, instructions={}, reliability={:.6})",
            self.inner.name,
            self.inner.target.name(),
            self.inner.instructions.len(),
            self.inner.estimated_reliability
        )
    }
}

fn parse_level(opt: &str) -> PyResult<OptLevel> {
    OptLevel::from_name(opt).ok_or_else(|| {
        PyValueError::new_err(format!(
            "unknown optimization level '{}': expected none, 1q, comm, or noise",
            opt
        ))
    })
}

fn parse_objective(objective: &str) -> PyResult<MapObjective> {
    MapObjective::from_name(objective).ok_or_else(|| {
        PyValueError::new_err(format!(
            "unknown objective '{}': expected sumlog or maxmin",
            objective
        ))
    })
}

/// Compiles a circuit for a machine. Returns the compiled program and a
/// JSON report string with gate counts, mappings, and timings.
#[pyfunction]
#[pyo3(signature = (circuit, machine, opt = "noise", objective = "sumlog"))]
fn compile(
    circuit: &Circuit,
    machine: &Machine,
    opt: &str,
    objective: &str,
) -> PyResult<(CompiledProgram, String)> {
    let level = parse_level(opt)?;
    let obj = parse_objective(objective)?;
    let (program, report) =
        compile_rs(&circuit.inner, &machine.inner, level, obj).map_err(err)?;
    Ok((
        CompiledProgram { inner: program },
        serde_json::to_string(&report).expect("report serializes"),
    ))
}

/// Runs the compiled program on the machine's noise model and returns a
/// histogram mapping measured bitstrings to shot counts.
#[pyfunction]
#[pyo3(signature = (program, machine, shots = 1024, seed = 1))]
fn simulate(
    program: &CompiledProgram,
    machine: &Machine,
    shots: u64,
    seed: u64,
) -> PyResult<BTreeMap<String, u64>> {
    run_noisy(&program.inner, &machine.inner, shots, seed).map_err(err)
}

/// Fraction of shots in `histogram` that produced `correct`.
#[pyfunction]
fn histogram_success(histogram: BTreeMap<String, u64>, correct: &str) -> f64 {
    success_rate(&histogram, correct)
}

/// Names of the built-in benchmark circuits.
#[pyfunction]
fn list_benchmarks() -> Vec<String> {
    qcc::bench::list_benchmarks()
        .iter()
        .map(|s| s.to_string())
        .collect()
}

/// Generates a built-in benchmark. Returns the circuit and, when the
/// benchmark is deterministic, its correct output bitstring.
#[pyfunction]
fn benchmark(name: &str) -> PyResult<(Circuit, Option<String>)> {
    let b = qcc::bench::generate(name)
        .ok_or_else(|| PyValueError::new_err(format!("unknown benchmark '{}'", name)))?;
    Ok((Circuit { inner: b.circuit }, b.correct_output))
}

/// End-to-end two-qubit reliability matrix and per-qubit readout vector.
/// Diagonal entries are zero. `uniform` swaps calibration for machine-wide
/// means, leaving only the hop structure.
#[pyfunction]
#[pyo3(signature = (machine, uniform = false))]
fn reliability_matrix(machine: &Machine, uniform: bool) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mode = if uniform {
        ReliabilityMode::Uniform
    } else {
        ReliabilityMode::NoiseAware
    };
    let rm = compute_reliability_matrix(&machine.inner, mode);
    let n = machine.inner.num_qubits;
    let matrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { 0.0 } else { rm.r2q(i, j) })
                .collect()
        })
        .collect();
    let readout = (0..n).map(|q| rm.rro(q)).collect();
    (matrix, readout)
}

#[pymodule]
fn qcc_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Circuit>()?;
    m.add_class::<Machine>()?;
    m.add_class::<CompiledProgram>()?;
    m.add_function(wrap_pyfunction!(compile, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(histogram_success, m)?)?;
    m.add_function(wrap_pyfunction!(list_benchmarks, m)?)?;
    m.add_function(wrap_pyfunction!(benchmark, m)?)?;
    m.add_function(wrap_pyfunction!(reliability_matrix, m)?)?;
    Ok(())
}
