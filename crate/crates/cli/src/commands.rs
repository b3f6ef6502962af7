//! The four subcommands. Each returns its result instead of printing so the
//! acceptance suite can drive them in-process.

use std::fmt;
use std::path::PathBuf;

use pauli_core::oracle::fit_slope;
use pauli_core::{
    advection_step, alpha_norm, component_l2, convergence_study, coupling_step, evolve,
    kinetic_step, potential_step, precompute_propagators, state_error, validate_fields,
    NullSink, Solver, SpinorField,
};

use crate::config::{RunConfig, Setup};
use crate::error::CliError;
use crate::output::{ErrorTable, RunSink, CONVERGE_FILE, CONVERGE_HEADER, ORACLE_FILE, ORACLE_HEADER};

/// Steps taken by `validate` (fewer if the configured run is shorter).
pub const VALIDATE_STEPS: usize = 3;

/// Hard gauge check performed before every run.
pub fn require_gauge(setup: &Setup, tol: f64) -> Result<(), CliError> {
    let v = validate_fields(&setup.samples, &setup.grid, tol)?;
    if !v.passed() {
        return Err(CliError::Validation(format!(
            "field validation failed for \"{}\": max |div A| = {:e}, max |curl A - B| = {:e}, tolerance {:e}",
            setup.fields.name(),
            v.divergence_max,
            v.curl_residual_max,
            tol
        )));
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub steps: usize,
    pub series: PathBuf,
    pub snapshots: Vec<PathBuf>,
    pub final_state: SpinorField<f64>,
}

pub fn cmd_run(config: &RunConfig) -> Result<RunReport, CliError> {
    let setup = config.setup()?;
    run_setup(&setup, config.gauge_tol, &config.output_dir)
}

pub fn run_setup(setup: &Setup, gauge_tol: f64, output_dir: &std::path::Path) -> Result<RunReport, CliError> {
    require_gauge(setup, gauge_tol)?;
    let solver = Solver::with_samples(&setup.fields, setup.samples.clone(), &setup.grid, setup.solver)?;
    let mut sink = RunSink::create(output_dir, &setup.grid)?;
    let final_state = solver.run(setup.initial.clone(), &mut sink)?;
    Ok(RunReport {
        steps: sink.rows,
        series: output_dir.join(crate::output::SERIES_FILE),
        snapshots: sink.snapshots,
        final_state,
    })
}

/// Default coarse step sizes and reference step for `converge`.
pub const DEFAULT_CONVERGE_DTS: [f64; 3] = [0.4, 0.2, 0.1];
pub const DEFAULT_REFERENCE_DT: f64 = 0.05;
/// Default step sizes for `oracle`.
pub const DEFAULT_ORACLE_DTS: [f64; 4] = [0.1, 0.05, 0.025, 0.0125];

pub fn cmd_converge(config: &RunConfig, dts: &[f64], dt_ref: f64) -> Result<ErrorTable, CliError> {
    if dts.is_empty() {
        return Err(CliError::Config("converge needs at least one --dt".into()));
    }
    if let Some(bad) = dts.iter().find(|&&dt| !(dt_ref < dt)) {
        return Err(CliError::Config(format!(
            "reference dt {dt_ref} must be strictly smaller than every coarse dt (got {bad})"
        )));
    }
    let setup = config.setup()?;
    let coarse = dts
        .iter()
        .map(|&dt| config.solver_config(dt))
        .collect::<Result<Vec<_>, _>>()?;
    let reference_cfg = config.solver_config(dt_ref)?;
    require_gauge(&setup, config.gauge_tol)?;

    let run = |cfg| evolve(setup.initial.clone(), &setup.fields, &setup.grid, cfg, &mut NullSink);
    let reference = run(&reference_cfg)?;
    let mut rows = Vec::with_capacity(coarse.len());
    for cfg in &coarse {
        let e = state_error(&run(cfg)?, &reference, &setup.grid)?;
        rows.push(vec![cfg.dt, e.max_abs, e.rel]);
    }
    let x: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let y: Vec<f64> = rows.iter().map(|r| r[1]).collect();
    let table = ErrorTable {
        header: CONVERGE_HEADER.into(),
        rows,
        slope: fit_slope(&x, &y),
    };
    std::fs::create_dir_all(&config.output_dir)?;
    table.write(&config.output_dir.join(CONVERGE_FILE))?;
    Ok(table)
}

pub fn cmd_oracle(config: &RunConfig, dts: &[f64]) -> Result<ErrorTable, CliError> {
    if dts.is_empty() {
        return Err(CliError::Config("oracle needs at least one --dt".into()));
    }
    let setup = config.setup()?;
    require_gauge(&setup, config.gauge_tol)?;
    let study = convergence_study(
        &setup.initial,
        &setup.fields,
        &setup.grid,
        config.epsilon,
        dts,
        config.t_final,
        config.order()?,
    )?;
    let table = ErrorTable {
        header: ORACLE_HEADER.into(),
        rows: study.rows.iter().map(|r| vec![r.dt, r.alpha_error]).collect(),
        slope: study.slope,
    };
    std::fs::create_dir_all(&config.output_dir)?;
    table.write(&config.output_dir.join(ORACLE_FILE))?;
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &'static str, ok: bool, detail: String) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.checks.push(Check { name, status, detail });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "SKIP",
            };
            writeln!(f, "{tag} {}: {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

pub fn cmd_validate(config: &RunConfig) -> Result<ValidationReport, CliError> {
    let setup = config.setup()?;
    validate_setup(&setup, config.gauge_tol)
}

fn rel_change(before: f64, after: f64) -> f64 {
    if before == 0.0 {
        after.abs()
    } else {
        ((after - before) / before).abs()
    }
}

/// Runs the invariant suite for up to [`VALIDATE_STEPS`] steps.
pub fn validate_setup(setup: &Setup, gauge_tol: f64) -> Result<ValidationReport, CliError> {
    let grid = &setup.grid;
    let mut report = ValidationReport::default();

    let v = validate_fields(&setup.samples, grid, gauge_tol)?;
    report.push(
        "coulomb-gauge",
        v.coulomb_gauge_ok,
        format!("max |div A| = {:.3e} (tol {gauge_tol:e})", v.divergence_max),
    );
    report.push(
        "curl-equals-b",
        v.curl_ok,
        format!("max |curl A - B| = {:.3e} (tol {gauge_tol:e})", v.curl_residual_max),
    );

    let mut cfg = setup.solver;
    let steps = cfg.steps()?.clamp(1, VALIDATE_STEPS);
    cfg.t_final = cfg.dt * steps as f64;
    let lie = precompute_propagators(&setup.fields, &setup.samples, grid, &cfg)?;
    let phase = lie.phase_modulus_defect();
    report.push("phases-unimodular", phase <= 1e-14, format!("max ||p| - 1| = {phase:.3e} (tol 1e-14)"));
    let unitary = lie.coupling_unitarity_defect();
    report.push("coupling-unitary", unitary <= 1e-13, format!("max |M^H M - I| = {unitary:.3e} (tol 1e-13)"));

    let norms = |s: &SpinorField<f64>| component_l2(s, grid);
    let (mut pot, mut kin, mut cpl_alpha, mut cpl_mass) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut adv_growth = f64::NEG_INFINITY;
    let mut state = setup.initial.clone();
    for _ in 0..steps {
        let n0 = norms(&state)?;
        let s = potential_step(state, &lie)?;
        let n1 = norms(&s)?;
        pot = pot.max(rel_change(n0.0, n1.0)).max(rel_change(n0.1, n1.1));
        let s = kinetic_step(s, &lie, grid)?;
        let n2 = norms(&s)?;
        kin = kin.max(rel_change(n1.0, n2.0)).max(rel_change(n1.1, n2.1));
        let s = advection_step(s, &lie, grid)?;
        let n3 = norms(&s)?;
        adv_growth = adv_growth.max((n3.0 + n3.1) - (n2.0 + n2.1));
        let s = coupling_step(s, &lie)?;
        let n4 = norms(&s)?;
        cpl_alpha = cpl_alpha.max(rel_change(n3.0 + n3.1, n4.0 + n4.1));
        cpl_mass = cpl_mass.max(rel_change(n3.0 * n3.0 + n3.1 * n3.1, n4.0 * n4.0 + n4.1 * n4.1));
        state = s;
    }
    report.push("potential-step-norms", pot <= 1e-12, format!("max relative change {pot:.3e} (tol 1e-12)"));
    report.push("kinetic-step-norms", kin <= 1e-12, format!("max relative change {kin:.3e} (tol 1e-12)"));
    report.push(
        "advection-alpha-nonincreasing",
        adv_growth <= 1e-10,
        format!("max alpha increase {adv_growth:.3e} (slack 1e-10)"),
    );
    report.push(
        "coupling-alpha-norm",
        cpl_alpha <= 1e-12,
        format!("max relative change {cpl_alpha:.3e} (tol 1e-12)"),
    );
    report.push(
        "coupling-mass",
        cpl_mass <= 1e-12,
        format!("max relative change {cpl_mass:.3e} (tol 1e-12)"),
    );

    let solver = Solver::with_samples(&setup.fields, setup.samples.clone(), grid, cfg)?;
    let mut state = setup.initial.clone();
    let mut prev = alpha_norm(&state, grid)?;
    let mut growth = f64::NEG_INFINITY;
    for _ in 0..steps {
        state = solver.step(state)?;
        let a = alpha_norm(&state, grid)?;
        growth = growth.max(a - prev);
        prev = a;
    }
    report.push(
        "step-alpha-nonincreasing",
        growth <= 1e-10,
        format!("max alpha increase {growth:.3e} over {steps} steps (slack 1e-10)"),
    );

    if setup.samples.in_plane_field_vanishes() {
        let identity = lie.coupling_matrices().iter().all(|m| {
            m[0][0].re == 1.0 && m[1][1].re == 1.0 && m[0][0].im == 0.0 && m[1][1].im == 0.0
                && m[0][1].norm() == 0.0 && m[1][0].norm() == 0.0
        });
        let mut up = setup.initial.clone();
        up.component_mut(1).iter_mut().for_each(|z| *z = 0.0.into());
        let mut full = setup.initial.clone();
        for _ in 0..steps {
            up = solver.step(up)?;
            full = solver.step(full)?;
        }
        let u2_zero = up.component(1).iter().all(|z| z.re == 0.0 && z.im == 0.0);
        let u1_same = up.component(0) == full.component(0);
        report.push(
            "u2-influence-free",
            identity && u2_zero && u1_same,
            format!(
                "coupling identity: {identity}, u2 stays zero: {u2_zero}, u1 independent of u2: {u1_same}"
            ),
        );
    } else {
        report.checks.push(Check {
            name: "u2-influence-free",
            status: Status::Skip,
            detail: "B1/B2 do not vanish, the spin components couple".into(),
        });
    }
    Ok(report)
}
