//! End-to-end checks on the constant-field weight `|z|²`: magnetic field
//! `B = 2`, electric potential `V = 2`, Landau levels of `P+` at `4, 8, …`
//! and of `P−` at `0, 4, …`, each with density `1/π` per unit area.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use pauli_core::criteria::{self, SeriesOptions, NO_COMPACT_RESOLVENT};
use pauli_core::discretize::{self, Identity, IdentityResidualReport, Sign};
use pauli_core::eigensolve::{self, counting_function, SolverOptions};
use pauli_core::grid::Grid;
use pauli_core::measure::{self, DoublingOptions};
use pauli_core::{parse_weight, WeightSpec};
use serde::Serialize;

use crate::commands::{write_json, Outcome};
use crate::config::{LandauConfig, RunConfig};
use crate::error::CliError;

pub const ORDER_RANGE: (f64, f64) = (1.5, 2.5);
pub const LEVEL_TOL: f64 = 0.05;
pub const ZERO_MODE_TOL: f64 = 0.25;
pub const GROWTH: f64 = 0.20;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct LandauReport {
    pub weight: String,
    pub checks: Vec<Check>,
    pub passed: usize,
    pub total: usize,
    pub converged: bool,
}

impl LandauReport {
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "{tag} {}: {}", c.name, c.detail);
        }
        let _ = writeln!(s, "{}/{} checks passed", self.passed, self.total);
        s
    }
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check {
        name: name.into(),
        passed,
        detail,
    }
}

fn fmt_list(v: &[f64], prec: usize) -> String {
    let items: Vec<String> = v.iter().map(|x| format!("{x:.prec$}")).collect();
    format!("[{}]", items.join(", "))
}

fn identity_check(name: &str, r: &IdentityResidualReport) -> Check {
    let (lo, hi) = ORDER_RANGE;
    let mut ok = r.orders_within(lo, hi);
    let mut detail = format!(
        "errors {} orders {}",
        fmt_list(&r.max_interior_error, 3),
        fmt_list(&r.observed_orders, 2)
    );
    if let Some(off) = &r.offdiagonal_max_entry {
        ok &= off.iter().all(|&x| x == 0.0);
        let _ = write!(detail, "; off-diagonal max {}", fmt_list(off, 1));
    }
    if let Some(orders) = &r.commutator_orders {
        ok &= orders.iter().all(|&p| p >= lo && p <= hi);
        let _ = write!(detail, "; field orders {}", fmt_list(orders, 2));
    }
    check(name, ok, detail)
}

/// Distance of `x` to the nearest value of `levels`, relative to that value.
pub fn level_error(x: f64, levels: &[f64]) -> f64 {
    levels
        .iter()
        .map(|&l| (x - l).abs() / l)
        .fold(f64::INFINITY, f64::min)
}

/// `4L²/π`: Landau degeneracy `B/2π` times the area `(2L)²`.
pub fn zero_mode_estimate(l: f64) -> f64 {
    4.0 * l * l / PI
}

pub fn run_suite(lc: &LandauConfig) -> Result<LandauReport, CliError> {
    let w = parse_weight("|z1|^2")?;
    let mut checks = Vec::new();
    let mut converged = true;

    let g = Grid::new(1, lc.identity_l, lc.identity_h)?;
    for (name, which) in [
        ("identity 2.2", Identity::Box00),
        ("identity 2.3", Identity::Box0n),
        ("dirac square", Identity::DiracSquare),
    ] {
        let r = discretize::identity_residual(&w, &g, which, lc.identity_levels)?;
        checks.push(identity_check(name, &r));
    }

    checks.push(levels_check(&w, lc, &mut converged)?);

    let solver = SolverOptions {
        kernel_tol: lc.kernel_tol,
        ..lc.solver.clone()
    };
    let mut zero = Vec::new();
    let mut below = Vec::new();
    for &l in &lc.sweep_l {
        let g = Grid::new(1, l, lc.sweep_h)?;
        zero.push(counting_function(&discretize::pauli(&w, &g, Sign::Minus)?, lc.kernel_tol, &solver)?);
        below.push(counting_function(&discretize::pauli(&w, &g, Sign::Plus)?, lc.lambda, &solver)?);
    }
    let estimates: Vec<f64> = lc.sweep_l.iter().map(|&l| zero_mode_estimate(l)).collect();
    let increasing = zero.windows(2).all(|p| p[1] > p[0]);
    let close = zero
        .iter()
        .zip(&estimates)
        .all(|(&c, &e)| (c as f64 - e).abs() <= ZERO_MODE_TOL * e);
    checks.push(check(
        "zero modes",
        increasing && close,
        format!(
            "P- counts below {} at L = {}: {:?}, 4L²/π = {}",
            lc.kernel_tol,
            fmt_list(&lc.sweep_l, 0),
            zero,
            fmt_list(&estimates, 1)
        ),
    ));
    let grows = below.len() >= 2
        && below
            .windows(2)
            .all(|p| p[1] as f64 >= (1.0 + GROWTH) * p[0] as f64 && p[1] > p[0]);
    checks.push(check(
        "P+ counting growth",
        grows,
        format!("P+ counts below {} at L = {}: {:?}", lc.lambda, fmt_list(&lc.sweep_l, 0), below),
    ));

    checks.push(criteria_check()?);
    checks.push(doubling_check(&w)?);

    let passed = checks.iter().filter(|c| c.passed).count();
    Ok(LandauReport {
        weight: w.to_string(),
        total: checks.len(),
        passed,
        checks,
        converged,
    })
}

fn levels_check(w: &WeightSpec, lc: &LandauConfig, converged: &mut bool) -> Result<Check, CliError> {
    let g = Grid::new(1, lc.l, lc.h)?;
    let plus = eigensolve::smallest_eigs_with(&discretize::pauli(w, &g, Sign::Plus)?, 6, &lc.solver)?;
    let minus = eigensolve::smallest_eigs_with(&discretize::pauli(w, &g, Sign::Minus)?, 1, &lc.solver)?;
    *converged &= plus.converged && minus.converged;
    let worst = plus
        .eigenvalues
        .iter()
        .map(|&x| level_error(x, &[4.0, 8.0]))
        .fold(0.0, f64::max);
    let lowest_minus = minus.eigenvalues[0];
    Ok(check(
        "landau levels",
        worst <= LEVEL_TOL && lowest_minus <= 0.01,
        format!(
            "P+ lowest six {} (max deviation {:.2}%), P- lowest {:.2e}",
            fmt_list(&plus.eigenvalues, 4),
            100.0 * worst,
            lowest_minus
        ),
    ))
}

fn criteria_check() -> Result<Check, CliError> {
    let w = parse_weight("|z1|^2 + |z2|^2")?;
    let r = criteria::classify(&w, &SeriesOptions::default())?;
    let values = r.series_15v.values();
    let target = PI * PI;
    let constant = values.iter().all(|&v| (v - target).abs() <= 1e-8 * target);
    let c = &r.classification;
    let ok = constant && c.theorems.iter().any(|t| t == "2.2") && c.pplus == NO_COMPACT_RESOLVENT && c.pminus == NO_COMPACT_RESOLVENT;
    Ok(check(
        "criteria |z1|^2 + |z2|^2",
        ok,
        format!(
            "theorems {:?}, P- {}, P+ {}, ball integral range [{:.12}, {:.12}] vs π² = {:.12}",
            c.theorems,
            c.pminus,
            c.pplus,
            values.iter().copied().fold(f64::INFINITY, f64::min),
            values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            target
        ),
    ))
}

fn doubling_check(w: &WeightSpec) -> Result<Check, CliError> {
    let density = |z: Complex64| w.laplacian(&[z.re, z.im]).expect("n = 1");
    let rep = measure::doubling_report(
        density,
        &measure::default_centers(),
        &measure::DEFAULT_RADII,
        DoublingOptions::default(),
    )?;
    let worst = rep
        .samples
        .iter()
        .filter_map(|s| s.ratio)
        .map(|q| (q - 4.0).abs())
        .fold(0.0, f64::max);
    Ok(check(
        "doubling",
        worst <= 1e-10 && rep.passes(),
        format!(
            "density Δφ = 4: {} samples, max |ratio − 4| = {worst:.1e}, C_est = {}",
            rep.samples.len(),
            rep.c_est
        ),
    ))
}

pub fn landau(cfg: &RunConfig, out: &Path) -> Result<Outcome, CliError> {
    let report = run_suite(&cfg.landau)?;
    let json_path = out.join("landau.json");
    write_json(&json_path, &report)?;
    let txt_path = out.join("landau.txt");
    let summary = report.summary();
    std::fs::write(&txt_path, &summary)?;
    Ok(Outcome {
        files: vec![json_path, txt_path],
        unconverged: !report.converged,
        checks_failed: report.passed < report.total,
        summary,
    })
}
