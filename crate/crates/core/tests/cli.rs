use std::path::Path;
use std::process::{Command, Output};

fn rissop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rissop")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

const SMALL: &str = r#"
name = "small"
seed = 11
trials = 2000
schemes = ["mrt_no_ris", "mrt_rand", "ao_cs", "ao_man", "mrt_ps"]

[system]
n_t = 3
n_r = 1
n_e = 2
n_s = 6
alpha = 0.8
beta = 0.8
r_s = 1.0
snr_db = 6.0

[sweep]
axis = "snr_db"
values = [0.0, 6.0]
"#;

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn sweep_is_byte_identical_and_complete() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.toml", SMALL);
    let a = rissop(&["sweep", "--config", &cfg]);
    let b = rissop(&["sweep", "--config", &cfg]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("scenario,scheme,sweep_axis,sweep_value"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 10);
    for row in &rows {
        let f: Vec<&str> = row.split(',').collect();
        assert_eq!(f.len(), 18, "{row}");
        assert!(!f[13].is_empty(), "Monte Carlo column filled: {row}");
        assert!(f[16].is_empty(), "wall time off by default: {row}");
        assert_eq!(f[17], "11");
    }
}

#[test]
fn seed_and_trials_flags_override_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.toml", SMALL);
    let out = dir.path().join("out.csv");
    let o = rissop(&["sweep", "--config", &cfg, "--seed", "5", "--trials", "0", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(out).unwrap();
    for row in text.lines().skip(1) {
        let f: Vec<&str> = row.split(',').collect();
        assert!(f[13].is_empty() && f[14].is_empty(), "{row}");
        assert_eq!(f[17], "5");
    }
}

#[test]
fn point_commands() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.toml", SMALL);
    let o = rissop(&["sop-theory", "--config", &cfg]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 6);
    let o = rissop(&["sop-mc", "--config", &cfg, "--trials", "5000"]);
    assert!(o.status.success());
    for row in stdout(&o).lines().skip(1) {
        let f: Vec<f64> = row.split(',').skip(1).map(|x| x.parse().unwrap()).collect();
        assert!((f[0] - f[1]).abs() <= 5.0 * f[2] + 1e-3, "{row}");
    }
    let o = rissop(&["optimize", "--config", &cfg, "--iter-max", "5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("iteration,p_out,z\n0,"));
    assert!(text.contains("# scheme ao_cs"));
}

#[test]
fn configuration_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let typo = write(dir.path(), "t.toml", &SMALL.replace("alpha = 0.8", "alpah = 0.8"));
    assert_eq!(rissop(&["sweep", "--config", &typo]).status.code(), Some(1));
    let multi = write(dir.path(), "m.toml", &SMALL.replace("n_r = 1", "n_r = 2"));
    let o = rissop(&["sweep", "--config", &multi]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("ao_cs"));
    assert_eq!(rissop(&["sweep"]).status.code(), Some(1));
    assert_eq!(rissop(&["sweep", "--config", "/nonexistent.toml"]).status.code(), Some(1));
}

#[test]
fn numerical_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.toml", SMALL);
    assert_eq!(rissop(&["optimize", "--config", &cfg, "--iter-max", "0"]).status.code(), Some(2));
}

#[test]
fn validate_reports_and_fails_on_corruption() {
    let o = rissop(&["validate", "--only", "9"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("[PASS] 9."));
    let o = rissop(&["validate", "--only", "2,9", "--tolerance-scale", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).lines().count(), 2);
    assert!(stdout(&o).contains("[FAIL] 9."));
    assert_eq!(rissop(&["validate", "--only", "42"]).status.code(), Some(1));
}

#[test]
fn shipped_scenarios_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let mut n = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        ris_sop::harness::Scenario::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        n += 1;
    }
    assert!(n >= 4);
}
