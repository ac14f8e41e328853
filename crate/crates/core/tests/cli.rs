use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn nldirac(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nldirac"))
        .args(args)
        .current_dir(dir)
        .env_remove("NLDIRAC_OUT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    fs::write(dir.join(name), body).unwrap();
    name.to_string()
}

const HOMOGENEOUS: &str = "\
[grid]
dims = 1
points = 16
lengths = 16

[nonlinearity]
spec = f_of_z identity_Z

[initial]
kind = homogeneous
c = 1

[run]
dt = 1e-3
steps = 2000
output_every = 500

[output]
directory = out
series_name = homog
snapshots = on
";

fn summary_value(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .parse()
        .unwrap()
}

#[test]
fn verify_passes_and_fault_fails() {
    let tmp = TempDir::new().unwrap();
    let ok = nldirac(tmp.path(), &["verify"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stderr(&ok));
    let text = stdout(&ok);
    assert_eq!(text.lines().count(), 9);
    assert!(text.lines().all(|l| l.contains(" PASS")));

    let bad = nldirac(tmp.path(), &["verify", "--inject-fault"]);
    assert_eq!(bad.status.code(), Some(4));
    let text = stdout(&bad);
    assert!(text.contains("verify_clifford FAIL {g1,g2} - 2eta:"), "{text}");
    assert!(text.contains("verify_n_iso PASS"));
}

#[test]
fn simulate_homogeneous_run() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "homog.cfg", HOMOGENEOUS);
    let out = nldirac(tmp.path(), &["--threads", "2", "simulate", &cfg]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!((summary_value(&text, "omega") - 1.0).abs() <= 1e-5, "{text}");
    assert!(summary_value(&text, "charge_drift") <= 1e-10);

    let dir = tmp.path().join("out");
    let series = fs::read_to_string(dir.join("homog.csv")).unwrap();
    let mut lines = series.lines();
    assert_eq!(lines.next(), Some("t,Q,s_int,p_int,residual"));
    assert_eq!(lines.count(), 5);
    assert!(fs::read_to_string(dir.join("homog_probe.csv")).unwrap().starts_with("t,re,im\n"));
    for snap in ["homog_initial.snap", "homog_final.snap"] {
        assert!(fs::read(dir.join(snap)).unwrap().starts_with(b"NLDIRAC1"));
    }
    let echo = fs::read_to_string(dir.join("config.echo")).unwrap();
    assert!(echo.contains("threads = 2"), "{echo}");
}

#[test]
fn output_directory_from_environment() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "homog.cfg", &HOMOGENEOUS.replace("steps = 2000", "steps = 10"));
    let target = tmp.path().join("elsewhere");
    let out = Command::new(env!("CARGO_BIN_EXE_nldirac"))
        .args(["simulate", &cfg])
        .current_dir(tmp.path())
        .env("NLDIRAC_OUT", &target)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(target.join("homog.csv").exists());
    assert!(!tmp.path().join("out").exists());
}

#[test]
fn configuration_errors_exit_2() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "bad.cfg", &HOMOGENEOUS.replace("steps = 2000", "steps = many"));
    let out = nldirac(tmp.path(), &["simulate", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 15") && stderr(&out).contains("[run] steps"), "{}", stderr(&out));

    let missing = nldirac(tmp.path(), &["simulate", "absent.cfg"]);
    assert_eq!(missing.status.code(), Some(2));
    assert_eq!(nldirac(tmp.path(), &["launch"]).status.code(), Some(2));
}

#[test]
fn oversized_step_exits_3() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "fast.cfg", &HOMOGENEOUS.replace("dt = 1e-3", "dt = 5"));
    let out = nldirac(tmp.path(), &["simulate", &cfg]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    assert!(stderr(&out).contains("stability"));
}

#[test]
fn dispersion_table() {
    let tmp = TempDir::new().unwrap();
    let body = HOMOGENEOUS
        .replace("points = 16", "points = 64")
        .replace("f_of_z identity_Z", "dirac_mass 1")
        .replace("steps = 2000", "steps = 13000");
    let cfg = write_config(tmp.path(), "free.cfg", &body);
    let out = nldirac(tmp.path(), &["dispersion", &cfg, "--p-indices", "0,2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = fs::read_to_string(tmp.path().join("out/homog_dispersion.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "p_index,p,omega_measured,omega_theory,rel_err");
    assert_eq!(rows.len(), 3);
    for row in &rows[1..] {
        let rel: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
        assert!(rel <= 1e-6, "{row}");
    }

    let empty = nldirac(tmp.path(), &["dispersion", &cfg]);
    assert_eq!(empty.status.code(), Some(0));
    let csv = fs::read_to_string(tmp.path().join("out/homog_dispersion.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1);

    let nonlinear = write_config(tmp.path(), "nl.cfg", HOMOGENEOUS);
    assert_eq!(nldirac(tmp.path(), &["dispersion", &nonlinear, "--p-indices", "1"]).status.code(), Some(2));
}

#[test]
fn covariance_command() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "homog.cfg", HOMOGENEOUS);
    for transform in ["boost 3 0.7", "rot 1 2 1.0", "parity", "gauge sine 3 0.5 2", "gauge constant 1.2"] {
        let out = nldirac(tmp.path(), &["covariance", &cfg, "--transform", transform]);
        assert_eq!(out.status.code(), Some(0), "{transform}: {}", stderr(&out));
        assert!(stdout(&out).trim_end().ends_with("PASS"), "{}", stdout(&out));
    }

    let iz = write_config(tmp.path(), "iz.cfg", &HOMOGENEOUS.replace("f_of_z identity_Z", "f_of_z poly 0+0i 0+1i"));
    let out = nldirac(tmp.path(), &["covariance", &iz, "--transform", "parity"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("parity_witness = 5.656854"), "{}", stdout(&out));

    let bad = nldirac(tmp.path(), &["covariance", &cfg, "--transform", "shear 1 2"]);
    assert_eq!(bad.status.code(), Some(2));
}
