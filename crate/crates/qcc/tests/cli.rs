//! End-to-end tests for the qcc binary: every subcommand, the exit code
//! contract (0 success, 2 program too large, 3 bad input), and byte-level
//! determinism of emitted programs.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qcc(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcc"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("process not killed by signal")
}

/// Writes the benchmark suite into `dir/benchmarks` and returns that path.
fn write_suite(dir: &Path) -> std::path::PathBuf {
    let out = qcc(&["bench", "--all", "--out", "benchmarks"], dir);
    assert_eq!(code(&out), 0, "bench --all failed: {}", stderr(&out));
    dir.join("benchmarks")
}

#[test]
fn bench_writes_the_full_suite() {
    let tmp = tempfile::tempdir().unwrap();
    let suite = write_suite(tmp.path());
    let names: Vec<String> = fs::read_dir(&suite)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    assert_eq!(names.len(), 12);
    for expected in [
        "bv4.qc", "bv6.qc", "bv8.qc", "hs2.qc", "hs4.qc", "hs6.qc", "qft4.qc", "toffoli.qc",
        "fredkin.qc", "or.qc", "peres.qc", "adder.qc",
    ] {
        assert!(names.iter().any(|n| n == expected), "missing {}", expected);
    }
}

#[test]
fn bench_family_and_supremacy_selection() {
    let tmp = tempfile::tempdir().unwrap();
    let out = qcc(&["bench", "--family", "bv", "--out", "fam"], tmp.path());
    assert_eq!(code(&out), 0);
    let names: Vec<String> = fs::read_dir(tmp.path().join("fam"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    assert_eq!(names.len(), 3);

    let out = qcc(
        &["bench", "--supremacy", "2", "2", "4", "--seed", "9", "--out", "sup"],
        tmp.path(),
    );
    assert_eq!(code(&out), 0);
    assert_eq!(fs::read_dir(tmp.path().join("sup")).unwrap().count(), 1);

    let out = qcc(&["bench", "--family", "nosuch", "--out", "x"], tmp.path());
    assert_eq!(code(&out), 3);

    let out = qcc(&["bench", "--out", "y"], tmp.path());
    assert_eq!(code(&out), 3, "bench with nothing selected must fail");
}

#[test]
fn compile_emits_report_and_reliability_dump() {
    let tmp = tempfile::tempdir().unwrap();
    let suite = write_suite(tmp.path());
    let bv4 = suite.join("bv4.qc");
    let out = qcc(
        &[
            "compile",
            bv4.to_str().unwrap(),
            "--machine",
            "grid14",
            "--opt",
            "comm",
            "--emit",
            "bv4.qasm",
            "--report",
            "bv4.json",
            "--dump-reliability",
            "rel.csv",
        ],
        tmp.path(),
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    let qasm = fs::read_to_string(tmp.path().join("bv4.qasm")).unwrap();
    assert!(qasm.starts_with("OPENQASM 2.0;"), "grid14 emits OpenQASM");
    assert!(qasm.contains("cx "), "compiled BV needs entangling gates");

    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("bv4.json")).unwrap()).unwrap();
    assert_eq!(report["machine"], "grid14");
    assert_eq!(report["opt_level"], "comm");
    assert_eq!(
        report["swaps_inserted"], 0,
        "a four-qubit star fits the grid without swaps"
    );
    let est = report["estimated_reliability"].as_f64().unwrap();
    assert!(est > 0.0 && est <= 1.0);

    let rel = fs::read_to_string(tmp.path().join("rel.csv")).unwrap();
    assert_eq!(
        rel.lines().count(),
        16,
        "header, one row per grid qubit, readout row"
    );
    assert_eq!(rel.lines().next().unwrap().split(',').count(), 15);
}

#[test]
fn compile_is_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let suite = write_suite(tmp.path());
    let qft4 = suite.join("qft4.qc");
    let args = [
        "compile",
        qft4.to_str().unwrap(),
        "--machine",
        "ibmq5",
        "--opt",
        "noise",
        "--seed",
        "7",
    ];
    let first = qcc(&args, tmp.path());
    let second = qcc(&args, tmp.path());
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout, "same inputs, same bytes");
}

#[test]
fn compile_rejects_oversized_circuits_with_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let suite = write_suite(tmp.path());
    let bv8 = suite.join("bv8.qc");
    let out = qcc(
        &["compile", bv8.to_str().unwrap(), "--machine", "line4"],
        tmp.path(),
    );
    assert_eq!(code(&out), 2, "eight qubits cannot fit a four-qubit line");
    assert!(stderr(&out).contains("error"));
}

#[test]
fn compile_rejects_bad_inputs_with_exit_3() {
    let tmp = tempfile::tempdir().unwrap();
    let suite = write_suite(tmp.path());
    let bv4 = suite.join("bv4.qc");

    let out = qcc(
        &["compile", bv4.to_str().unwrap(), "--machine", "nosuch"],
        tmp.path(),
    );
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("unknown machine"));

    let out = qcc(
        &["compile", bv4.to_str().unwrap(), "--machine", "line4", "--target", "ibm"],
        tmp.path(),
    );
    assert_eq!(code(&out), 3, "line4 speaks the rigetti gate set");
    assert!(stderr(&out).contains("gate set"));

    let out = qcc(
        &["compile", bv4.to_str().unwrap(), "--machine", "ion5", "--opt", "max"],
        tmp.path(),
    );
    assert_eq!(code(&out), 3);

    fs::write(tmp.path().join("broken.qc"), "qubits 2\nfrobnicate 0 1\n").unwrap();
    let out = qcc(&["compile", "broken.qc", "--machine", "ion5"], tmp.path());
    assert_eq!(code(&out), 3);
}

#[test]
fn simulate_reports_success_rate() {
    let tmp = tempfile::tempdir().unwrap();
    let suite = write_suite(tmp.path());
    let bv4 = suite.join("bv4.qc");
    let out = qcc(
        &[
            "simulate",
            bv4.to_str().unwrap(),
            "--machine",
            "ion5",
            "--shots",
            "512",
            "--seed",
            "3",
            "--expect",
            "111",
        ],
        tmp.path(),
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    let success: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("# success "))
        .expect("success line present")
        .parse()
        .unwrap();
    assert!(
        success > 0.7,
        "ion5 noise is mild, BV should mostly succeed, got {}",
        success
    );
}

#[test]
fn compare_prints_one_csv_row_per_level() {
    let tmp = tempfile::tempdir().unwrap();
    let suite = write_suite(tmp.path());
    let bv4 = suite.join("bv4.qc");
    let out = qcc(
        &["compare", bv4.to_str().unwrap(), "--machine", "grid14"],
        tmp.path(),
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5, "header plus four levels:\n{}", text);
    assert!(lines[0].starts_with("level,two_qubit,"));

    let field = |line: &str, idx: usize| -> f64 {
        line.split(',').nth(idx).unwrap().parse().unwrap()
    };
    let by_level: std::collections::HashMap<&str, &str> = lines[1..]
        .iter()
        .map(|l| (l.split(',').next().unwrap(), *l))
        .collect();
    let none = by_level["none"];
    let oneq = by_level["1q"];
    let comm = by_level["comm"];
    let noise = by_level["noise"];
    assert!(field(oneq, 2) <= field(none, 2), "pulse count never grows");
    assert!(field(comm, 1) <= field(none, 1), "placement never adds 2Q gates");
    assert!(field(noise, 1) <= field(none, 1));
    assert!(
        field(noise, 5) >= field(comm, 5),
        "noise-aware placement never trails on its own estimate"
    );
}

#[test]
fn machines_roundtrip_through_json_files() {
    let tmp = tempfile::tempdir().unwrap();
    let out = qcc(&["machines", "--out", "m"], tmp.path());
    assert_eq!(code(&out), 0);
    let dir = tmp.path().join("m");
    let mut names: Vec<String> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["example8.json", "grid14.json", "ibmq5.json", "ion5.json", "line4.json"]);

    let suite = write_suite(tmp.path());
    let bv4 = suite.join("bv4.qc");
    let ion = dir.join("ion5.json");
    let via_file = qcc(
        &["compile", bv4.to_str().unwrap(), "--machine", ion.to_str().unwrap()],
        tmp.path(),
    );
    let via_name = qcc(
        &["compile", bv4.to_str().unwrap(), "--machine", "ion5"],
        tmp.path(),
    );
    assert_eq!(code(&via_file), 0, "{}", stderr(&via_file));
    assert_eq!(via_file.stdout, via_name.stdout, "exported file equals builtin");
}

#[test]
fn sweep_grids_reliability_with_x_for_oversize() {
    let tmp = tempfile::tempdir().unwrap();
    let suite = write_suite(tmp.path());
    qcc(&["machines", "--out", "all"], tmp.path());
    fs::create_dir(tmp.path().join("m")).unwrap();
    for name in ["ion5.json", "line4.json"] {
        fs::copy(tmp.path().join("all").join(name), tmp.path().join("m").join(name)).unwrap();
    }
    let out = qcc(
        &[
            "sweep",
            "--suite",
            suite.to_str().unwrap(),
            "--machines",
            "m",
            "--opt",
            "comm",
        ],
        tmp.path(),
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "circuit,ion5,line4");
    assert_eq!(lines.len(), 13, "header plus twelve circuits");
    let row = |name: &str| -> Vec<String> {
        lines
            .iter()
            .find(|l| l.starts_with(&format!("{},", name)))
            .unwrap_or_else(|| panic!("row {} missing:\n{}", name, text))
            .split(',')
            .map(str::to_string)
            .collect()
    };
    let bv8 = row("bv8");
    assert_eq!(bv8[1], "X", "eight qubits overflow ion5");
    assert_eq!(bv8[2], "X", "eight qubits overflow line4");
    let bv4 = row("bv4");
    let ion_est: f64 = bv4[1].parse().unwrap();
    assert!(ion_est > 0.0 && ion_est < 1.0);
    let toffoli = row("toffoli");
    let line_est: f64 = toffoli[2].parse().unwrap();
    assert!(line_est > 0.0 && line_est < 1.0, "three qubits fit the line");

    let empty = tempfile::tempdir().unwrap();
    let out = qcc(
        &[
            "sweep",
            "--suite",
            empty.path().to_str().unwrap(),
            "--machines",
            "m",
        ],
        tmp.path(),
    );
    assert_eq!(code(&out), 3, "an empty suite is an input error");
}
