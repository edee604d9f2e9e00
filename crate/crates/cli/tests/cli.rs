use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use pauli_lab::RunConfig;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pauli-lab"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("run.toml");
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn spectrum_writes_reports_and_resolved_config() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "l = 3.0\nh = 0.2\n[spectrum]\nk = 3\n");
    let o = run(tmp.path(), &["spectrum", "--config", &cfg, "--weight", "|z1|^4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let echo = fs::read_to_string(tmp.path().join("spectrum.resolved.toml")).unwrap();
    let resolved = RunConfig::from_toml(&echo).unwrap();
    assert_eq!(resolved.weight, "|z1|^4");
    assert_eq!(resolved.l, 3.0);
    assert_eq!(resolved.spectrum.k, 3);

    let csv = fs::read_to_string(tmp.path().join("spectrum.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("spectrum.json")).unwrap()).unwrap();
    let ev = json["result"]["eigenvalues"].as_array().unwrap();
    assert_eq!(ev.len(), 3);
    assert!(ev.windows(2).all(|p| p[0].as_f64() <= p[1].as_f64()));
}

#[test]
fn dump_operator_writes_matrix_market() {
    let tmp = tempfile::tempdir().unwrap();
    let mtx = tmp.path().join("op.mtx");
    let cfg = write_config(tmp.path(), "l = 1.0\nh = 0.25\n[spectrum]\nk = 1\n");
    let o = run(
        tmp.path(),
        &["spectrum", "--config", &cfg, "--dump-operator", mtx.to_str().unwrap()],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(&mtx).unwrap();
    assert!(text.starts_with("%%MatrixMarket matrix coordinate complex hermitian"));
    let size = text.lines().find(|l| !l.starts_with('%')).unwrap();
    assert!(size.starts_with("49 49 "));
}

#[test]
fn dump_operator_is_spectrum_only() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(tmp.path(), &["criteria", "--dump-operator", "x.mtx"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn configuration_errors_exit_with_two() {
    let tmp = tempfile::tempdir().unwrap();
    let cases: &[(&str, &[&str])] = &[
        ("", &["spectrum", "--weight", "|z1|^3"]),
        ("", &["criteria", "--weight", "-|z1|^2"]),
        ("", &["spectrum", "--weight", "|z1|^2 + |z2|^2"]),
        ("", &["doubling", "--weight", "x1^2*y2^2"]),
        ("", &["spectrum", "--threads", "0"]),
        ("unknown_key = 1\n", &["spectrum"]),
        ("[spectrum]\noperator = \"pauli\"\n", &["spectrum"]),
        ("[spectrum]\noperator = \"dirac\"\n", &["spectrum", "--weight", "|z1|^2 + |z2|^2"]),
    ];
    for (text, args) in cases {
        let cfg = write_config(tmp.path(), text);
        let mut all = args.to_vec();
        all.extend(["--config", &cfg]);
        let o = run(tmp.path(), &all);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(stderr(&o).contains("configuration error"), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(run(tmp.path(), &["eigen"]).status.code(), Some(2));
}

#[test]
fn unconverged_solve_exits_with_three() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "l = 3.0\nh = 0.1\n[spectrum]\nk = 4\n[spectrum.solver]\nmethod = \"krylov\"\nshift_invert = false\nmax_iter = 3\n",
    );
    let o = run(tmp.path(), &["spectrum", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    // Partial results are still written.
    assert!(tmp.path().join("spectrum.json").exists());
}

#[test]
fn criteria_output_is_independent_of_thread_count() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for (dir, threads) in [(&a, "1"), (&b, "4")] {
        let o = run(dir.path(), &["criteria", "--weight", "|z1|^2 + |z2|^4", "--threads", threads]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let read = |d: &tempfile::TempDir| fs::read(d.path().join("criteria.json")).unwrap();
    assert_eq!(read(&a), read(&b));
}

#[test]
fn identity_skips_dirac_square_in_two_variables() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "l = 1.0\n[identity]\nh = 0.25\nlevels = 2\n");
    let o = run(tmp.path(), &["identity", "--config", &cfg, "--weight", "|z1|^2 + |z2|^2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("identity.json")).unwrap()).unwrap();
    assert_eq!(json["reports"].as_array().unwrap().len(), 2);
    assert_eq!(json["skipped"].as_array().unwrap().len(), 1);
}

#[test]
fn doubling_reports_each_decoupled_part() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(tmp.path(), &["doubling", "--weight", "|z1|^2 + |z2|^4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("doubling.json")).unwrap()).unwrap();
    let parts = json["parts"].as_array().unwrap();
    assert_eq!(parts.len(), 2);
    // Δ|z|² = 4 is Lebesgue measure up to scale.
    assert!((parts[0]["report"]["c_est"].as_f64().unwrap() - 4.0).abs() < 1e-9);
}

#[test]
fn shipped_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let p = entry.unwrap().path();
        if p.extension().is_some_and(|e| e == "toml") {
            RunConfig::load(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
            seen += 1;
        }
    }
    assert!(seen >= 5);
}
