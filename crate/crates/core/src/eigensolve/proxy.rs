//! Finite-volume evidence for (non-)compactness of the Pauli resolvents.
//!
//! A resolvent is compact exactly when the spectrum is discrete, i.e. when
//! the number of eigenvalues below any fixed level stays finite. On a box of
//! half-width `L` this shows up as counts that stop changing once `L` is
//! large, while a non-compact case keeps adding eigenvalues in proportion to
//! the volume.
//!
//! Decision rule, applied to a series over increasing `L`:
//!
//! * *grows*: at least three values, each step strictly increasing by at
//!   least 20%;
//! * *stable*: the last step changes the value by less than 5%.

use serde::{Deserialize, Serialize};

use super::{counting_function, smallest_eigs_with, SolverOptions, DEFAULT_KERNEL_TOL};
use crate::discretize::{pauli, Sign};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::weights::WeightSpec;

pub const KERNEL_GROWS: &str = "kernel grows — resolvent not compact (proxy)";
pub const GAP_STABLE: &str = "gap stable, spectrum discrete (proxy)";
pub const CLUSTER_GROWS: &str = "near-zero cluster grows — not compact (proxy)";
pub const INCONCLUSIVE: &str = "inconclusive";

const GROWTH: f64 = 0.20;
const STABLE: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProxyOptions {
    /// Index of the tracked `P+` eigenvalue (1-based).
    pub k: usize,
    /// Level `Λ` below which `P+` eigenvalues are counted.
    pub lambda: f64,
    pub kernel_tol: f64,
    pub solver: SolverOptions,
}

impl Default for ProxyOptions {
    fn default() -> Self {
        Self {
            k: 6,
            lambda: 10.0,
            kernel_tol: DEFAULT_KERNEL_TOL,
            solver: SolverOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompactnessProxy {
    pub weight: String,
    pub n: usize,
    pub h: f64,
    pub l_values: Vec<f64>,
    /// `P−` eigenvalues below `kernel_tol`, per `L`.
    pub pminus_zero_counts: Vec<usize>,
    /// Smallest `P+` eigenvalue, per `L`.
    pub pplus_gap: Vec<f64>,
    /// `k`-th smallest `P+` eigenvalue, per `L`.
    pub pplus_eig_growth: Vec<f64>,
    pub lambda: f64,
    /// `P+` eigenvalues below `lambda`, per `L`.
    pub pplus_counts_below: Vec<usize>,
    pub kernel_tol: f64,
    pub k: usize,
    pub verdict_pminus: String,
    pub verdict_pplus: String,
    pub converged: bool,
}

/// Every step strictly increases by at least 20%, over at least three values.
pub fn grows(series: &[f64]) -> bool {
    series.len() >= 3 && series.windows(2).all(|p| p[1] > p[0] && p[1] >= (1.0 + GROWTH) * p[0])
}

/// The last step changes the value by less than 5% (two zeros are stable).
pub fn stabilizes(series: &[f64]) -> bool {
    match series {
        [.., a, b] => (b - a).abs() < STABLE * a.abs().max(b.abs()) || (a == b),
        _ => false,
    }
}

pub fn compactness_proxy(
    w: &WeightSpec,
    l_values: &[f64],
    h: f64,
    opts: &ProxyOptions,
) -> Result<CompactnessProxy> {
    if l_values.len() < 3 || l_values.windows(2).any(|p| p[1] <= p[0]) {
        return Err(Error::InvalidArgument(
            "compactness proxy needs at least three increasing L values".into(),
        ));
    }
    if opts.k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let mut out = CompactnessProxy {
        weight: w.to_string(),
        n: w.n(),
        h,
        l_values: l_values.to_vec(),
        pminus_zero_counts: Vec::new(),
        pplus_gap: Vec::new(),
        pplus_eig_growth: Vec::new(),
        lambda: opts.lambda,
        pplus_counts_below: Vec::new(),
        kernel_tol: opts.kernel_tol,
        k: opts.k,
        verdict_pminus: INCONCLUSIVE.into(),
        verdict_pplus: INCONCLUSIVE.into(),
        converged: true,
    };
    for &l in l_values {
        let g = Grid::new(w.n(), l, h)?;
        let pm = pauli(w, &g, Sign::Minus)?;
        out.pminus_zero_counts.push(counting_function(&pm, opts.kernel_tol, &opts.solver)?);
        drop(pm);
        let pp = pauli(w, &g, Sign::Plus)?;
        let spec = smallest_eigs_with(&pp, opts.k, &opts.solver)?;
        out.converged &= spec.converged;
        out.pplus_gap.push(spec.eigenvalues[0]);
        out.pplus_eig_growth.push(spec.eigenvalues[opts.k - 1]);
        out.pplus_counts_below.push(counting_function(&pp, opts.lambda, &opts.solver)?);
    }
    let as_f64 = |v: &[usize]| v.iter().map(|&c| c as f64).collect::<Vec<_>>();
    if grows(&as_f64(&out.pminus_zero_counts)) {
        out.verdict_pminus = KERNEL_GROWS.into();
    }
    let counts = as_f64(&out.pplus_counts_below);
    out.verdict_pplus = if grows(&counts) {
        CLUSTER_GROWS.into()
    } else if stabilizes(&counts) && stabilizes(&out.pplus_gap) {
        GAP_STABLE.into()
    } else {
        INCONCLUSIVE.into()
    };
    Ok(out)
}
