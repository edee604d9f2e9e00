//! One function per subcommand. Each writes its reports into the output
//! directory and returns what it wrote.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use pauli_core::criteria;
use pauli_core::discretize::{self, Identity, IdentityResidualReport, Sign};
use pauli_core::eigensolve::{self, compactness_proxy, SpectrumResult};
use pauli_core::grid::Grid;
use pauli_core::measure::{self, DoublingOptions, DoublingReport};
use num_complex::Complex64;
use pauli_core::{parse_weight, parse_weight_in, WeightSpec};
use serde::Serialize;

use crate::config::{OperatorKind, RunConfig};
use crate::error::CliError;

/// Files written by a subcommand and whether its numerics are trustworthy.
#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    /// Some iterative result missed its tolerance (results are still written).
    pub unconverged: bool,
    /// Some acceptance check failed (`landau` only).
    pub checks_failed: bool,
    pub summary: String,
}

pub fn weight_of(cfg: &RunConfig) -> Result<WeightSpec, CliError> {
    Ok(match cfg.n {
        Some(n) => parse_weight_in(&cfg.weight, n)?,
        None => parse_weight(&cfg.weight)?,
    })
}

/// Hard error unless the Levi matrix is positive semidefinite on the
/// criteria sample set and on every node of `grids`.
pub fn certify(w: &WeightSpec, cfg: &RunConfig, grids: &[&Grid]) -> Result<(), CliError> {
    let mut points = criteria::sample_points(w.n(), &cfg.criteria)?;
    for g in grids {
        points.extend(g.points());
    }
    w.certify_plurisubharmonic(points.iter().map(Vec::as_slice))?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)
        .map_err(|e| CliError::Numerical(format!("cannot serialize report: {e}")))?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct SpectrumReport<'a> {
    weight: String,
    operator: OperatorKind,
    grid: &'a Grid,
    result: &'a SpectrumResult,
}

pub fn spectrum(cfg: &RunConfig, out: &Path) -> Result<Outcome, CliError> {
    let w = weight_of(cfg)?;
    let g = Grid::new(w.n(), cfg.l, cfg.h)?;
    certify(&w, cfg, &[&g])?;
    let sc = &cfg.spectrum;
    let op = match sc.operator {
        OperatorKind::PauliPlus => discretize::pauli(&w, &g, Sign::Plus)?,
        OperatorKind::PauliMinus => discretize::pauli(&w, &g, Sign::Minus)?,
        OperatorKind::Dirac => discretize::dirac(&w, &g)?,
        OperatorKind::Box00 => discretize::box00(&w, &g)?,
        OperatorKind::Box0n => discretize::box0n(&w, &g)?,
    };
    let mut files = Vec::new();
    if let Some(path) = &sc.dump_operator {
        op.write_matrix_market(BufWriter::new(File::create(path)?))?;
        files.push(path.clone());
    }
    let result = if sc.operator == OperatorKind::Dirac {
        drop(op);
        eigensolve::dirac_spectrum(&w, &g, sc.k, &sc.solver)?
    } else {
        eigensolve::smallest_eigs_with(&op, sc.k, &sc.solver)?
    };
    let csv_path = out.join("spectrum.csv");
    result.write_csv(BufWriter::new(File::create(&csv_path)?))?;
    let json_path = out.join("spectrum.json");
    write_json(
        &json_path,
        &SpectrumReport {
            weight: w.to_string(),
            operator: sc.operator,
            grid: &g,
            result: &result,
        },
    )?;
    files.extend([csv_path, json_path]);
    let lowest = result.eigenvalues.first().copied().unwrap_or(f64::NAN);
    Ok(Outcome {
        files,
        unconverged: !result.converged,
        checks_failed: false,
        summary: format!(
            "{} eigenvalues, lowest {lowest:.6}, max residual {:.2e}{}",
            result.eigenvalues.len(),
            result.max_residual(),
            if result.converged { "" } else { " (NOT converged)" }
        ),
    })
}

#[derive(Serialize)]
struct IdentityFile {
    weight: String,
    half_width: f64,
    reports: Vec<IdentityResidualReport>,
    /// Identities that do not apply to this weight's dimension.
    skipped: Vec<String>,
}

pub fn identity(cfg: &RunConfig, out: &Path) -> Result<Outcome, CliError> {
    let w = weight_of(cfg)?;
    let g = Grid::new(w.n(), cfg.l, cfg.identity.h)?;
    certify(&w, cfg, &[&g])?;
    let mut file = IdentityFile {
        weight: w.to_string(),
        half_width: cfg.l,
        reports: Vec::new(),
        skipped: Vec::new(),
    };
    for &which in &cfg.identity.which {
        if which == Identity::DiracSquare && w.n() != 1 {
            file.skipped.push(format!("{which}: defined for n = 1 only"));
            continue;
        }
        file.reports.push(discretize::identity_residual(&w, &g, which, cfg.identity.levels)?);
    }
    let path = out.join("identity.json");
    write_json(&path, &file)?;
    let summary = file
        .reports
        .iter()
        .map(|r| match r.observed_order {
            Some(p) => format!("{}: order {p:.2}", r.which),
            None => format!("{}: exact", r.which),
        })
        .collect::<Vec<_>>()
        .join(", ");
    Ok(Outcome {
        files: vec![path],
        summary,
        ..Default::default()
    })
}

#[derive(Serialize)]
struct DoublingPart {
    part: String,
    report: DoublingReport,
}

#[derive(Serialize)]
struct DoublingFile {
    weight: String,
    /// One report per decoupled part `φ_j`, for the density `Δφ_j`.
    parts: Vec<DoublingPart>,
}

pub fn doubling(cfg: &RunConfig, out: &Path) -> Result<Outcome, CliError> {
    let w = weight_of(cfg)?;
    let parts: Vec<WeightSpec> = match (w.n(), w.decoupled_parts()) {
        (1, _) => vec![w.clone()],
        (_, Some(p)) => p.to_vec(),
        _ => {
            return Err(CliError::Config(
                "doubling needs n = 1 or a decoupled weight".into(),
            ))
        }
    };
    certify(&w, cfg, &[])?;
    let dc = &cfg.doubling;
    let centers: Vec<Complex64> = match &dc.centers {
        Some(c) => c.iter().map(|&[x, y]| Complex64::new(x, y)).collect(),
        None => measure::default_centers(),
    };
    let opts = DoublingOptions {
        rule: dc.rule,
        claimed_constant: dc.claimed_constant,
    };
    let mut file = DoublingFile {
        weight: w.to_string(),
        parts: Vec::new(),
    };
    for p in &parts {
        let density = |z: Complex64| p.laplacian(&[z.re, z.im]).expect("one complex variable");
        file.parts.push(DoublingPart {
            part: p.to_string(),
            report: measure::doubling_report(density, &centers, &dc.radii, opts)?,
        });
    }
    let path = out.join("doubling.json");
    write_json(&path, &file)?;
    let summary = file
        .parts
        .iter()
        .map(|p| format!("{}: C_est {:.4} ({:?})", p.part, p.report.c_est, p.report.status))
        .collect::<Vec<_>>()
        .join(", ");
    Ok(Outcome {
        files: vec![path],
        summary,
        ..Default::default()
    })
}

pub fn criteria(cfg: &RunConfig, out: &Path) -> Result<Outcome, CliError> {
    let w = weight_of(cfg)?;
    certify(&w, cfg, &[])?;
    let report = criteria::classify(&w, &cfg.criteria)?;
    let path = out.join("criteria.json");
    write_json(&path, &report)?;
    let c = &report.classification;
    let cited = if c.theorems.is_empty() {
        "no theorem".to_string()
    } else {
        format!("Theorem {}", c.theorems.join(" + "))
    };
    Ok(Outcome {
        files: vec![path],
        summary: format!("{cited}: P- {}, P+ {}", c.pminus, c.pplus),
        ..Default::default()
    })
}

pub fn proxy(cfg: &RunConfig, out: &Path) -> Result<Outcome, CliError> {
    let w = weight_of(cfg)?;
    let pc = &cfg.proxy;
    let grids = pc
        .l_values
        .iter()
        .map(|&l| Grid::new(w.n(), l, pc.h))
        .collect::<Result<Vec<_>, _>>()?;
    certify(&w, cfg, &grids.iter().collect::<Vec<_>>())?;
    drop(grids);
    let report = compactness_proxy(&w, &pc.l_values, pc.h, &pc.options())?;
    let json_path = out.join("proxy.json");
    write_json(&json_path, &report)?;
    let csv_path = out.join("proxy.csv");
    let mut csv = BufWriter::new(File::create(&csv_path)?);
    writeln!(csv, "L,pminus_zero_count,pplus_gap,pplus_eig_k,pplus_count_below")?;
    for i in 0..report.l_values.len() {
        writeln!(
            csv,
            "{:?},{},{:?},{:?},{}",
            report.l_values[i],
            report.pminus_zero_counts[i],
            report.pplus_gap[i],
            report.pplus_eig_growth[i],
            report.pplus_counts_below[i]
        )?;
    }
    csv.flush()?;
    Ok(Outcome {
        files: vec![json_path, csv_path],
        unconverged: !report.converged,
        checks_failed: false,
        summary: format!("P-: {}; P+: {}", report.verdict_pminus, report.verdict_pplus),
    })
}
