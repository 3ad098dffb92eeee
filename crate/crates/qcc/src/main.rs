use clap::{Parser, Subcommand};
use qcc::codegen::emit;
use qcc::ir::parse_circuit;
use qcc::machine::{builtin, builtin_machines, load_machine, GateSet, Machine};
use qcc::mapper::MapObjective;
use qcc::pipeline::{compare, compile, reliability_for_level, OptLevel};
use qcc::reliability::matrix_to_csv;
use qcc::sim::{run_noisy, success_rate};
use qcc::QccError;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "qcc",
    version,
    about = "Noise-adaptive quantum circuit compiler for IBM, Rigetti, and ion trap backends"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a circuit file for a machine and emit native code
    Compile {
        /// Circuit file in the textual gate format
        circuit: PathBuf,
        /// Built-in machine name or path to a machine JSON file
        #[arg(long)]
        machine: String,
        /// Optimization level: none, 1q, comm, or noise
        #[arg(long, default_value = "noise")]
        opt: String,
        /// Placement objective at the noise level: sumlog or maxmin
        #[arg(long, default_value = "sumlog")]
        objective: String,
        /// Write the emitted program here instead of stdout
        #[arg(long)]
        emit: Option<PathBuf>,
        /// Write a JSON compile report here
        #[arg(long)]
        report: Option<PathBuf>,
        /// Fail unless the machine targets this gate set: ibm, rigetti, iontrap
        #[arg(long)]
        target: Option<String>,
        /// Write the reliability matrix used for this compile as CSV
        #[arg(long)]
        dump_reliability: Option<PathBuf>,
        /// Seed recorded in the report; compilation itself is deterministic
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Write built-in benchmark circuits as circuit files
    Bench {
        /// Generate the full twelve-benchmark suite
        #[arg(long)]
        all: bool,
        /// Generate benchmarks whose name starts with this prefix
        #[arg(long)]
        family: Option<String>,
        /// Generate a random supremacy-style grid circuit
        #[arg(long, num_args = 3, value_names = ["ROWS", "COLS", "DEPTH"])]
        supremacy: Option<Vec<usize>>,
        /// Seed for random circuit generation
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output directory
        #[arg(long, default_value = "benchmarks")]
        out: PathBuf,
    },
    /// Compile a circuit and run the noisy simulator on the result
    Simulate {
        circuit: PathBuf,
        #[arg(long)]
        machine: String,
        #[arg(long, default_value = "noise")]
        opt: String,
        #[arg(long, default_value = "sumlog")]
        objective: String,
        #[arg(long, default_value_t = 1024)]
        shots: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Report the observed frequency of this bitstring
        #[arg(long)]
        expect: Option<String>,
    },
    /// Compile at every optimization level and print a CSV comparison
    Compare {
        circuit: PathBuf,
        #[arg(long)]
        machine: String,
        #[arg(long, default_value = "sumlog")]
        objective: String,
    },
    /// Compile every circuit in a directory against every machine in another
    Sweep {
        /// Directory of circuit files (*.qc)
        #[arg(long)]
        suite: PathBuf,
        /// Directory of machine files (*.json)
        #[arg(long)]
        machines: PathBuf,
        #[arg(long, default_value = "noise")]
        opt: String,
        #[arg(long, default_value = "sumlog")]
        objective: String,
    },
    /// Export the built-in machine descriptions as JSON files
    Machines {
        #[arg(long, default_value = "machines")]
        out: PathBuf,
    },
}

fn resolve_machine(spec: &str) -> Result<Machine, QccError> {
    if Path::new(spec).is_file() {
        return load_machine(Path::new(spec));
    }
    builtin(spec).ok_or_else(|| {
        QccError::Machine(format!(
            "unknown machine '{}': not a file and not one of {}",
            spec,
            builtin_machines()
                .iter()
                .map(|m| m.name.as_str())
                .collect::<Vec<_>>()
                .join(", ")
        ))
    })
}

fn parse_opt(s: &str) -> Result<OptLevel, QccError> {
    OptLevel::from_name(s).ok_or_else(|| {
        QccError::Invalid(format!(
            "unknown optimization level '{}': expected none, 1q, comm, or noise",
            s
        ))
    })
}

fn parse_objective(s: &str) -> Result<MapObjective, QccError> {
    MapObjective::from_name(s).ok_or_else(|| {
        QccError::Invalid(format!(
            "unknown objective '{}': expected sumlog or maxmin",
            s
        ))
    })
}

fn load_circuit(path: &Path) -> Result<qcc::ir::Circuit, QccError> {
    let text = fs::read_to_string(path)?;
    let mut circ = parse_circuit(&text)?;
    if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
        circ.name = stem.to_string();
    }
    Ok(circ)
}

fn run(cli: Cli) -> Result<(), QccError> {
    match cli.command {
        Command::Compile {
            circuit,
            machine,
            opt,
            objective,
            emit: emit_path,
            report,
            target,
            dump_reliability,
            seed,
        } => {
            let circ = load_circuit(&circuit)?;
            let m = resolve_machine(&machine)?;
            let level = parse_opt(&opt)?;
            let obj = parse_objective(&objective)?;
            if let Some(t) = target {
                let wanted = GateSet::from_name(&t).ok_or_else(|| {
                    QccError::Invalid(format!(
                        "unknown target '{}': expected ibm, rigetti, or iontrap",
                        t
                    ))
                })?;
                if wanted != m.gate_set {
                    return Err(QccError::Invalid(format!(
                        "machine '{}' targets the {} gate set, not {}",
                        m.name,
                        m.gate_set.name(),
                        wanted.name()
                    )));
                }
            }
            let (program, mut rep) = compile(&circ, &m, level, obj)?;
            rep.seed = seed;
            if let Some(path) = dump_reliability {
                fs::write(&path, matrix_to_csv(&reliability_for_level(&m, level)))?;
            }
            if let Some(path) = report {
                fs::write(&path, serde_json::to_string_pretty(&rep).unwrap())?;
            }
            let text = emit(&program);
            match emit_path {
                Some(path) => {
                    fs::write(&path, &text)?;
                    eprintln!(
                        "compiled {} for {}: {} two-qubit gates, {} swaps, estimated reliability {:.6}",
                        rep.circuit,
                        rep.machine,
                        rep.gate_counts.two_qubit,
                        rep.swaps_inserted,
                        rep.estimated_reliability
                    );
                }
                None => print!("{}", text),
            }
            Ok(())
        }
        Command::Bench {
            all,
            family,
            supremacy,
            seed,
            out,
        } => {
            let mut selected = Vec::new();
            if all {
                for name in qcc::bench::list_benchmarks() {
                    selected.push(qcc::bench::generate(name).unwrap());
                }
            }
            if let Some(prefix) = family {
                let before = selected.len();
                for name in qcc::bench::list_benchmarks() {
                    if name.starts_with(&prefix) && !selected.iter().any(|b| b.name == name) {
                        selected.push(qcc::bench::generate(name).unwrap());
                    }
                }
                if selected.len() == before {
                    return Err(QccError::Invalid(format!(
                        "no benchmark matches family '{}'",
                        prefix
                    )));
                }
            }
            if let Some(dims) = supremacy {
                selected.push(qcc::bench::supremacy(dims[0], dims[1], dims[2], seed));
            }
            if selected.is_empty() {
                return Err(QccError::Invalid(
                    "nothing selected: pass --all, --family, or --supremacy".into(),
                ));
            }
            fs::create_dir_all(&out)?;
            for bench in selected {
                let path = out.join(format!("{}.qc", bench.name));
                fs::write(&path, bench.circuit.to_text())?;
                println!(
                    "wrote {} ({} qubits, {} gates)",
                    path.display(),
                    bench.circuit.num_qubits,
                    bench.circuit.gates.len()
                );
            }
            Ok(())
        }
        Command::Simulate {
            circuit,
            machine,
            opt,
            objective,
            shots,
            seed,
            expect,
        } => {
            let circ = load_circuit(&circuit)?;
            let m = resolve_machine(&machine)?;
            let level = parse_opt(&opt)?;
            let obj = parse_objective(&objective)?;
            let (program, rep) = compile(&circ, &m, level, obj)?;
            let histogram = run_noisy(&program, &m, shots, seed)?;
            println!(
                "# {} on {} at opt {}: estimated reliability {:.6}",
                rep.circuit, rep.machine, rep.opt_level, rep.estimated_reliability
            );
            let mut rows: Vec<(&String, &u64)> = histogram.iter().collect();
            rows.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(b.0)));
            for (bits, count) in rows {
                println!("{} {}", bits, count);
            }
            if let Some(bits) = expect {
                println!("# success {:.6}", success_rate(&histogram, &bits));
            }
            Ok(())
        }
        Command::Compare {
            circuit,
            machine,
            objective,
        } => {
            let circ = load_circuit(&circuit)?;
            let m = resolve_machine(&machine)?;
            let obj = parse_objective(&objective)?;
            let reports = compare(&circ, &m, obj)?;
            println!("level,two_qubit,pulses,rz,swaps,estimated_reliability,mapping_ms");
            for r in reports {
                println!(
                    "{},{},{},{},{},{:.9},{:.3}",
                    r.opt_level,
                    r.gate_counts.two_qubit,
                    r.gate_counts.single_qubit_pulses,
                    r.gate_counts.rz,
                    r.swaps_inserted,
                    r.estimated_reliability,
                    r.mapping_ms
                );
            }
            Ok(())
        }
        Command::Sweep {
            suite,
            machines,
            opt,
            objective,
        } => {
            let level = parse_opt(&opt)?;
            let obj = parse_objective(&objective)?;
            let mut circuit_paths: Vec<PathBuf> = fs::read_dir(&suite)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().map(|x| x == "qc").unwrap_or(false))
                .collect();
            circuit_paths.sort();
            let mut machine_paths: Vec<PathBuf> = fs::read_dir(&machines)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().map(|x| x == "json").unwrap_or(false))
                .collect();
            machine_paths.sort();
            if circuit_paths.is_empty() {
                return Err(QccError::Invalid(format!(
                    "no .qc circuits in {}",
                    suite.display()
                )));
            }
            if machine_paths.is_empty() {
                return Err(QccError::Invalid(format!(
                    "no .json machines in {}",
                    machines.display()
                )));
            }
            let loaded: Vec<Machine> = machine_paths
                .iter()
                .map(|p| load_machine(p))
                .collect::<Result<_, _>>()?;
            print!("circuit");
            for m in &loaded {
                print!(",{}", m.name);
            }
            println!();
            for path in &circuit_paths {
                let circ = load_circuit(path)?;
                print!("{}", circ.name);
                for m in &loaded {
                    match compile(&circ, m, level, obj) {
                        Ok((_, rep)) => print!(",{:.9}", rep.estimated_reliability),
                        Err(QccError::TooLarge { .. }) => print!(",X"),
                        Err(other) => return Err(other),
                    }
                }
                println!();
            }
            Ok(())
        }
        Command::Machines { out } => {
            fs::create_dir_all(&out)?;
            for m in builtin_machines() {
                let path = out.join(format!("{}.json", m.name));
                fs::write(&path, m.to_json())?;
                println!(
                    "wrote {} ({} qubits, {} gate set)",
                    path.display(),
                    m.num_qubits,
                    m.gate_set.name()
                );
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err);
            match err {
                QccError::TooLarge { .. } => ExitCode::from(2),
                _ => ExitCode::from(3),
            }
        }
    }
}
