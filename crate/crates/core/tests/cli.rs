use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn tdsim(args: &[&str], out_dir: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_tdsim"));
    cmd.args(args).env_remove("TDSIM_OUT_DIR");
    if let Some(d) = out_dir {
        cmd.env("TDSIM_OUT_DIR", d);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const CONFIG: &str = r#"
n_grid = [16, 32, 64, 128]
seeds = [1, 2]

[problem]
kind = "grover"
n_qubits = 2
schedule = "linear"
time_scale = 40.0

[[schemes]]
family = "hdr"
base = "Strang"

[output]
dir = "ignored"
csv = "run.csv"
svg = "run.svg"
"#;

fn write_config(dir: &Path, extra: &str) -> std::path::PathBuf {
    let p = dir.join("bench.toml");
    fs::write(&p, format!("{CONFIG}{extra}")).unwrap();
    p
}

#[test]
fn bench_writes_into_env_directory() {
    let d = tempfile::tempdir().unwrap();
    let out = d.path().join("out");
    let cfg = write_config(d.path(), "");
    let o = tdsim(&["bench", cfg.to_str().unwrap()], Some(&out));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for name in ["run.csv", "run.svg", "run.csv.meta.json"] {
        assert!(out.join(name).is_file(), "missing {name}");
    }
    assert!(!d.path().join("ignored").exists());
    assert!(stdout(&o).contains("PASS records"));
}

#[test]
fn out_dir_flag_wins_over_env() {
    let d = tempfile::tempdir().unwrap();
    let env_dir = d.path().join("env");
    let flag_dir = d.path().join("flag");
    let cfg = write_config(d.path(), "");
    let o = tdsim(
        &["bench", cfg.to_str().unwrap(), "--out-dir", flag_dir.to_str().unwrap()],
        Some(&env_dir),
    );
    assert!(o.status.success());
    assert!(flag_dir.join("run.csv").is_file());
    assert!(!env_dir.exists());
}

#[test]
fn failing_check_exits_with_one() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write_config(
        d.path(),
        "\n[[checks.slope]]\nseries = \"hdr-Strang\"\nmin = -4.5\nmax = -3.5\n",
    );
    let o = tdsim(&["bench", cfg.to_str().unwrap()], Some(d.path()));
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL slope hdr-Strang"));
}

#[test]
fn bad_config_exits_with_two() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path().join("bad.toml");
    fs::write(&p, "n_grid = [32, 16]\nsurprise = 1\n").unwrap();
    let o = tdsim(&["bench", p.to_str().unwrap()], Some(d.path()));
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    let missing = tdsim(&["bench", "/nonexistent/config.toml"], Some(d.path()));
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn audit_gates_passes() {
    let o = tdsim(&["audit-gates"], None);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("PASS gate counts"));
    assert!(!text.contains("MISMATCH"));
}

#[test]
fn verify_order_on_a_short_grid() {
    let d = tempfile::tempdir().unwrap();
    let o = tdsim(
        &[
            "verify-order",
            "--families",
            "hdr",
            "--bases",
            "Strang,FRS",
            "--n-grid",
            "32,64,128,256",
            "--seeds",
            "2",
            "--out-dir",
            d.path().to_str().unwrap(),
        ],
        None,
    );
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(d.path().join("verify-order.csv").is_file());
    assert!(d.path().join("verify-order.svg").is_file());
}

#[test]
fn verify_order_rejects_unknown_family() {
    let o = tdsim(&["verify-order", "--families", "qdrift"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn qdrift_bias_reports_three_checks() {
    let o = tdsim(&["qdrift-bias", "--from-exp", "6", "--to-exp", "10", "--seeds", "4"], None);
    let text = stdout(&o);
    assert!(text.contains("bias slope"));
    assert!(text.contains("PASS bias bound"));
    assert!(text.contains("sampling rate"));
}

#[test]
fn analog_sweep_keeps_invariants() {
    let o = tdsim(&["analog-sweep", "--halvings", "4"], None);
    let text = stdout(&o);
    assert!(text.contains("PASS quadrature"), "{text}");
    assert!(text.contains("PASS time-independent exactness"), "{text}");
    assert!(text.contains("richardson slope"));
}
