use std::path::Path;
use std::process::{Command, Output};

use pauli_cli::commands::{run_setup, validate_setup, Status};
use pauli_cli::output::{read_series_csv, read_vtk, snapshot_file_name, ErrorTable};
use pauli_cli::{CliError, RunConfig};
use pauli_core::{sample_fields, EMFields};

fn write_config(dir: &Path, field: &str, initial: &str, n: usize, dt: f64, t: f64, extra: &str) -> std::path::PathBuf {
    let out = dir.join("out");
    let text = format!(
        r#"{{"grid": {{"lengths": [10, 10, 10], "counts": [{n}, {n}, {n}]}},
            "field_preset": "{field}", "initial_preset": "{initial}",
            "epsilon": 0.5, "dt": {dt}, "t_final": {t},
            "output_dir": {out:?}{extra}}}"#
    );
    let path = dir.join("config.json");
    std::fs::write(&path, text).unwrap();
    path
}

fn pauli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pauli")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn run_writes_series_and_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "experiment2", "spin-up", 8, 0.1, 0.3, r#", "snapshot_stride": 2"#);
    let o = pauli(&["run", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));

    let out = dir.path().join("out");
    let text = std::fs::read_to_string(out.join("series.csv")).unwrap();
    assert_eq!(text.lines().next(), Some("t,mass,l2_u1,l2_u2,alpha,energy"));
    let rows = read_series_csv(&out.join("series.csv")).unwrap();
    assert_eq!(rows.len(), 3);
    for (i, r) in rows.iter().enumerate() {
        assert!((r.time - 0.1 * (i + 1) as f64).abs() < 1e-12);
        assert!((r.alpha - (r.l2_u1 + r.l2_u2)).abs() < 1e-12);
    }
    for step in [0, 2] {
        let snap = read_vtk(&out.join(snapshot_file_name(step))).unwrap();
        assert_eq!(snap.dims, [8, 8, 8]);
        assert_eq!(snap.scalars.len(), 2);
        assert_eq!(snap.scalars[0].0, "abs_u1");
        assert_eq!(snap.scalars[0].1.len(), 512);
    }
    assert!(!out.join(snapshot_file_name(1)).exists());
    assert!(!out.join(snapshot_file_name(3)).exists());
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "experiment9", "spin-up", 8, 0.1, 0.3, "");
    let o = pauli(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown preset"), "{}", stderr(&o));

    let cfg = write_config(dir.path(), "experiment1", "spin-up", 8, 0.3, 1.0, "");
    assert_eq!(pauli(&["run", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));

    let missing = dir.path().join("nope.json");
    assert_eq!(pauli(&["validate", "--config", missing.to_str().unwrap()]).status.code(), Some(2));

    let cfg = write_config(dir.path(), "experiment1", "spin-up", 4, 0.1, 0.2, "");
    let o = pauli(&["converge", "--config", cfg.to_str().unwrap(), "--dt", "0.1", "--dt-ref", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("strictly smaller"), "{}", stderr(&o));
}

#[test]
fn thread_cap_must_be_positive() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "experiment1", "spin-up", 6, 0.1, 0.1, "");
    let o = Command::new(env!("CARGO_BIN_EXE_pauli"))
        .args(["run", "--config", cfg.to_str().unwrap()])
        .env("PAULI_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_pauli"))
        .args(["run", "--config", cfg.to_str().unwrap()])
        .env("PAULI_THREADS", "1")
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn validate_decoupled_preset_passes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "experiment1", "spin-up", 8, 0.1, 1.0, "");
    let o = pauli(&["validate", "--config", cfg.to_str().unwrap()]);
    let text = stdout(&o);
    assert!(text.contains("PASS coulomb-gauge"), "{text}");
    assert!(text.contains("PASS coupling-unitary"), "{text}");
    assert!(text.contains("PASS u2-influence-free"), "{text}");
    assert!(text.contains("PASS coupling-alpha-norm"), "{text}");
}

#[test]
fn validate_coupled_preset_skips_decoupling() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "experiment2", "spin-up", 8, 0.1, 1.0, "");
    let o = pauli(&["validate", "--config", cfg.to_str().unwrap()]);
    let text = stdout(&o);
    assert!(text.contains("SKIP u2-influence-free"), "{text}");
    assert!(text.contains("PASS coupling-mass"), "{text}");
    // a rotation of spin-up spreads the norm over both components, so the
    // sum of component norms grows
    assert!(text.contains("FAIL coupling-alpha-norm"), "{text}");
    assert_eq!(o.status.code(), Some(3));
}

fn broken_setup() -> pauli_cli::Setup {
    let config = RunConfig::from_json(
        r#"{"grid": {"lengths": [10, 10, 10], "counts": [8, 8, 8]},
            "field_preset": "experiment1", "initial_preset": "gaussian-pair",
            "epsilon": 0.5, "dt": 0.1, "t_final": 0.2}"#,
    )
    .unwrap();
    let mut setup = config.setup().unwrap();
    let k = std::f64::consts::TAU / 10.0;
    // A = (sin(k x1), 0, 0) has div A = k cos(k x1)
    setup.fields = EMFields::custom(
        "compressive",
        move |x: [f64; 3]| [(k * x[0]).sin(), 0.0, 0.0],
        |_| 0.0,
        |_| [0.0; 3],
    );
    setup.samples = sample_fields(&setup.fields, &setup.grid).unwrap();
    setup
}

#[test]
fn non_solenoidal_field_is_rejected() {
    let setup = broken_setup();
    let report = validate_setup(&setup, 1e-6).unwrap();
    assert_eq!(report.get("coulomb-gauge").unwrap().status, Status::Fail);
    assert!(!report.passed());

    let dir = tempfile::tempdir().unwrap();
    let err = run_setup(&setup, 1e-6, dir.path()).unwrap_err();
    assert!(matches!(err, CliError::Validation(_)), "{err}");
    assert_eq!(err.exit_code(), 3);
    assert!(!dir.path().join("series.csv").exists());
}

#[test]
fn converge_and_oracle_write_tables() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "experiment1", "gaussian-pair", 6, 0.1, 0.4, "");
    let o = pauli(&["converge", "--config", cfg.to_str().unwrap(), "--dt", "0.4", "0.2", "0.1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let table = ErrorTable::read(&dir.path().join("out/converge.csv")).unwrap();
    assert_eq!(table.header, "dt,max_abs_error,max_rel_error");
    assert_eq!(table.rows.len(), 3);
    assert!(table.rows.windows(2).all(|w| w[1][1] < w[0][1]));
    assert!(table.slope.unwrap() > 0.5);

    let cfg = write_config(dir.path(), "experiment2", "spin-up", 6, 0.1, 0.2, "");
    let o = pauli(&["oracle", "--config", cfg.to_str().unwrap(), "--dt", "0.1", "0.05"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let table = ErrorTable::read(&dir.path().join("out/oracle.csv")).unwrap();
    assert_eq!(table.header, "dt,alpha_error");
    assert_eq!(table.rows.len(), 2);
    assert!(table.slope.is_some());
}

#[test]
fn oracle_refuses_large_grids() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "experiment2", "spin-up", 13, 0.1, 0.2, "");
    let o = pauli(&["oracle", "--config", cfg.to_str().unwrap(), "--dt", "0.1"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn zero_field_mass_is_constant() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "zero", "gaussian-pair", 10, 0.1, 0.5, "");
    let o = pauli(&["run", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = read_series_csv(&dir.path().join("out/series.csv")).unwrap();
    for r in &rows {
        assert!((r.mass - rows[0].mass).abs() <= 1e-12 * rows[0].mass);
    }
}

#[test]
fn repeated_runs_are_bit_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let cfg = write_config(dir.path(), "experiment2", "spin-up", 8, 0.1, 0.3, "");
        assert!(pauli(&["run", "--config", cfg.to_str().unwrap()]).status.success());
    }
    let read = |d: &tempfile::TempDir, f: &str| std::fs::read(d.path().join("out").join(f)).unwrap();
    assert_eq!(read(&a, "series.csv"), read(&b, "series.csv"));
    assert_eq!(read(&a, &snapshot_file_name(0)), read(&b, &snapshot_file_name(0)));
}

#[test]
fn divergence_keeps_partial_output() {
    let config = RunConfig::from_json(
        r#"{"grid": {"lengths": [10, 10, 10], "counts": [4, 4, 4]},
            "field_preset": "zero", "initial_preset": "spin-up",
            "epsilon": 0.5, "dt": 0.1, "t_final": 0.2}"#,
    )
    .unwrap();
    let mut setup = config.setup().unwrap();
    setup.fields = EMFields::custom("huge-phi", |_| [0.0; 3], |_| 1e300, |_| [0.0; 3]);
    setup.samples = sample_fields(&setup.fields, &setup.grid).unwrap();
    setup.solver = pauli_core::SolverConfig::new(1e-300, 1e10, 2e10, pauli_core::SplittingOrder::Lie).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let err = run_setup(&setup, 1e-6, dir.path()).unwrap_err();
    assert_eq!(err.exit_code(), 4, "{err}");
    assert!(err.to_string().contains("step 1"), "{err}");
    let text = std::fs::read_to_string(dir.path().join("series.csv")).unwrap();
    assert_eq!(text.lines().next(), Some("t,mass,l2_u1,l2_u2,alpha,energy"));
    assert!(dir.path().join(snapshot_file_name(0)).exists());
}

#[test]
fn experiment1_run_snapshots_at_half_and_full_time() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "experiment1", "gaussian-pair", 25, 0.05, 1.0, "");
    let o = pauli(&["run", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = dir.path().join("out");
    assert_eq!(read_series_csv(&out.join("series.csv")).unwrap().len(), 20);
    let mut snaps: Vec<String> = std::fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".vtk"))
        .collect();
    snaps.sort();
    assert_eq!(snaps, ["snapshot_00000.vtk", "snapshot_00010.vtk", "snapshot_00020.vtk"]);
    let snap = read_vtk(&out.join("snapshot_00010.vtk")).unwrap();
    assert_eq!(snap.dims, [25; 3]);
    assert!((snap.spacing[0] - 0.4).abs() < 1e-12);
}
