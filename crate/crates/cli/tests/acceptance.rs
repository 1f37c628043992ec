//! Command-line acceptance: determinism, CSV layout and exit statuses.
//! Runs as a plain binary and prints PASS/FAIL lines.

use std::f64::consts::FRAC_PI_3;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const HEADER: &str = "tau,tau_scaled,c_t1_0,c_t12_t1,c_t12_0,L,bound";

fn optolg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_optolg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn check(name: &str, ok: bool, detail: String, failures: &mut usize) {
    if !ok {
        *failures += 1;
    }
    println!(
        "criterion 10 {} {name}: {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
}

fn error_line(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).trim().to_string()
}

fn csv_well_formed(text: &str, rows: usize) -> Result<(), String> {
    if text.contains('\r') {
        return Err("CR in output".into());
    }
    if !text.ends_with('\n') {
        return Err("missing final LF".into());
    }
    let lines: Vec<&str> = text.lines().collect();
    if lines[0] != HEADER {
        return Err(format!("header `{}`", lines[0]));
    }
    if lines.len() != rows + 1 {
        return Err(format!("{} data rows, expected {rows}", lines.len() - 1));
    }
    for line in &lines[1..] {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 || fields.iter().any(|f| f.parse::<f64>().is_err()) {
            return Err(format!("bad row `{line}`"));
        }
    }
    Ok(())
}

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let mut failures = 0;

    let config = path("weak.cfg");
    fs::write(
        &config,
        "# weak-coupling sweep\nregime = weak\nobservable = cavity\ngrid_start = 0\ngrid_stop = 2\ngrid_count = 201\n",
    )
    .unwrap();

    let (a, b) = (path("a.csv"), path("b.csv"));
    let run_a = optolg(&["lg-sweep", "--config", &config, "--csv", &a, "--svg", &path("a.svg")]);
    let run_b = optolg(&["lg-sweep", "--config", &config, "--csv", &b]);
    let bytes_a = fs::read(&a).unwrap_or_default();
    let bytes_b = fs::read(&b).unwrap_or_default();
    check(
        "determinism",
        run_a.status.code() == Some(0)
            && run_b.status.code() == Some(0)
            && !bytes_a.is_empty()
            && bytes_a == bytes_b,
        format!("two runs of one config, {} identical CSV bytes", bytes_a.len()),
        &mut failures,
    );

    let layout = csv_well_formed(&String::from_utf8_lossy(&bytes_a), 201);
    let report = String::from_utf8_lossy(&run_a.stdout).into_owned();
    check(
        "CSV columns",
        layout.is_ok() && report.contains("max L > 1"),
        format!(
            "header, 7 numeric columns, LF endings: {}; report verdict present: {}",
            layout.clone().err().unwrap_or_else(|| "ok".into()),
            report.contains("max L > 1")
        ),
        &mut failures,
    );

    let demo = path("demo.csv");
    let out = optolg(&["classical-demo", "--grid", "0:1:7", "--csv", &demo]);
    let row = fs::read_to_string(&demo)
        .unwrap_or_default()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|f| f.parse::<f64>().unwrap()).collect::<Vec<_>>())
        .find(|r| (r[0] - FRAC_PI_3).abs() < 1e-15);
    check(
        "classical row",
        out.status.code() == Some(0)
            && row.as_ref().is_some_and(|r| (r[5] - 1.5).abs() < 1e-12),
        format!("row at tau = pi/3: {:?}", row.map(|r| r[5])),
        &mut failures,
    );

    let bad_csv = path("bad.csv");
    let bad_svg = path("bad.svg");
    let out = optolg(&["lg-sweep", "--grid", "1:1:10", "--csv", &bad_csv, "--svg", &bad_svg]);
    let err = error_line(&out);
    check(
        "exit 2 on invalid grid",
        out.status.code() == Some(2)
            && !Path::new(&bad_csv).exists()
            && !Path::new(&bad_svg).exists()
            && err.starts_with("error: code=2 "),
        format!("status {:?}, `{err}`", out.status.code()),
        &mut failures,
    );

    let unknown = path("unknown.cfg");
    fs::write(&unknown, "grid_start = 0\nkapa = 0.1\n").unwrap();
    let out = optolg(&["lg-sweep", "--config", &unknown]);
    let err = error_line(&out);
    check(
        "exit 2 on unknown key",
        out.status.code() == Some(2) && err.contains("line 2") && err.contains("kapa"),
        format!("status {:?}, `{err}`", out.status.code()),
        &mut failures,
    );

    let out = optolg(&["displacement", "--set", "drive=500"]);
    let err = error_line(&out);
    check(
        "exit 3 on solver failure",
        out.status.code() == Some(3) && err.starts_with("error: code=3 kind=solver"),
        format!("status {:?}, `{err}`", out.status.code()),
        &mut failures,
    );

    let gate_csv = path("gate.csv");
    let out = optolg(&[
        "lg-sweep",
        "--grid",
        "0:0.5:21",
        "--set",
        "n_c=2",
        "--set",
        "n_m=2",
        "--convergence-gate",
        "--csv",
        &gate_csv,
    ]);
    let err = error_line(&out);
    check(
        "exit 4 on convergence gate",
        out.status.code() == Some(4) && !Path::new(&gate_csv).exists(),
        format!("status {:?}, `{err}`", out.status.code()),
        &mut failures,
    );

    let out = optolg(&["classical-demo", "--grid", "0:1:5", "--csv", &path("missing/dir/x.csv")]);
    check(
        "exit 1 on unwritable output",
        out.status.code() == Some(1),
        format!("status {:?}, `{}`", out.status.code(), error_line(&out)),
        &mut failures,
    );

    if failures > 0 {
        println!("{failures} command-line acceptance checks failed");
        std::process::exit(1);
    }
}
