//! Lowest eigenvalues of sparse Hermitian operators, eigenvalue counting and
//! the finite-volume compactness proxy.
//!
//! Three paths compute the bottom of the spectrum:
//!
//! * dense diagonalization for small operators (`dim ≤ dense_limit`);
//! * block Krylov on `(Op − σ)⁻¹` with a banded `LDL†` factorization, `σ`
//!   chosen below the spectrum and confirmed by the factor's inertia;
//! * block Krylov on `Op` itself when the band is too wide to factor.
//!
//! Counting eigenvalues below a threshold uses the inertia of `Op − λI`
//! (Sylvester's law), which is exact up to rounding in the pivots and does not
//! depend on resolving clusters.

pub mod banded;
mod krylov;
mod proxy;

use std::io::Write;

use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::discretize;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::sparse::{CsrMatrix, SparseHermitianOperator};
use crate::weights::WeightSpec;

pub use banded::{BandedLdl, DEFAULT_BAND_LIMIT};
pub use proxy::{compactness_proxy, CompactnessProxy, ProxyOptions};

/// Default eigenvalue threshold below which a Pauli mode counts as a zero mode.
pub const DEFAULT_KERNEL_TOL: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Dense below `dense_limit`, shift-invert when the band fits, plain
    /// Krylov otherwise.
    #[default]
    Auto,
    Dense,
    /// Krylov; shift-invert if `shift_invert` is set and the band fits.
    Krylov,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverOptions {
    /// Bound on `‖Op v − λv‖₂` for unit `v`.
    pub tol: f64,
    /// Cap on spectral-transform applications.
    pub max_iter: usize,
    pub kernel_tol: f64,
    pub shift_invert: bool,
    pub method: Method,
    pub dense_limit: usize,
    pub band_limit: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            max_iter: 5000,
            kernel_tol: DEFAULT_KERNEL_TOL,
            shift_invert: true,
            method: Method::Auto,
            dense_limit: 3000,
            band_limit: DEFAULT_BAND_LIMIT,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum SolvePath {
    Dense,
    ShiftInvert { shift: f64 },
    Krylov,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    /// `‖Op v − λv‖₂ / ‖v‖₂` per pair.
    pub residuals: Vec<f64>,
    /// Computed eigenvalues below `kernel_tol`.
    pub near_kernel_count: usize,
    pub kernel_tol: f64,
    /// Fraction of each eigenvector's ℓ² mass on the two outermost interior
    /// layers; empty when the operator carries no grid layout.
    pub boundary_mass: Vec<f64>,
    pub converged: bool,
    pub path: SolvePath,
    /// Spectral-transform applications (0 on the dense path).
    pub iterations: usize,
    /// Unit eigenvectors, same order as `eigenvalues`.
    #[serde(skip)]
    pub eigenvectors: Vec<Vec<Complex64>>,
}

impl SpectrumResult {
    /// CSV with columns `index, eigenvalue, residual, boundary_mass`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["index", "eigenvalue", "residual", "boundary_mass"])?;
        for (i, (&ev, &r)) in self.eigenvalues.iter().zip(&self.residuals).enumerate() {
            let bm = self.boundary_mass.get(i).map(|b| format!("{b:?}")).unwrap_or_default();
            w.write_record([i.to_string(), format!("{ev:?}"), format!("{r:?}"), bm])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

pub fn smallest_eigs(op: &SparseHermitianOperator, k: usize, tol: f64) -> Result<SpectrumResult> {
    smallest_eigs_with(
        op,
        k,
        &SolverOptions {
            tol,
            ..Default::default()
        },
    )
}

pub fn smallest_eigs_with(
    op: &SparseHermitianOperator,
    k: usize,
    opts: &SolverOptions,
) -> Result<SpectrumResult> {
    let dim = op.dim();
    if k == 0 || k > dim {
        return Err(Error::InvalidArgument(format!(
            "requested {k} eigenpairs of a {dim}-dimensional operator"
        )));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {}", opts.tol)));
    }
    let use_dense = match opts.method {
        Method::Dense => true,
        Method::Krylov => false,
        Method::Auto => dim <= opts.dense_limit,
    };
    let (values, vectors, converged, path, iterations) = if use_dense {
        let (v, x) = dense_lowest(op.matrix(), k);
        (v, x, true, SolvePath::Dense, 0)
    } else {
        iterative_lowest(op.matrix(), k, opts)?
    };
    let residuals = vectors
        .iter()
        .zip(&values)
        .map(|(v, &lambda)| residual(op.matrix(), v, lambda))
        .collect::<Vec<_>>();
    let converged = converged && residuals.iter().all(|&r| r <= opts.tol);
    let boundary_mass = match op.layout() {
        Some(l) => vectors.iter().map(|v| boundary_fraction(&l.grid, v)).collect(),
        None => Vec::new(),
    };
    Ok(SpectrumResult {
        near_kernel_count: values.iter().filter(|&&v| v < opts.kernel_tol).count(),
        kernel_tol: opts.kernel_tol,
        eigenvalues: values,
        residuals,
        boundary_mass,
        converged,
        path,
        iterations,
        eigenvectors: vectors,
    })
}

fn residual(a: &CsrMatrix, v: &[Complex64], lambda: f64) -> f64 {
    let av = a.apply(v);
    let r: f64 = av.iter().zip(v).map(|(x, y)| (x - lambda * y).norm_sqr()).sum();
    let n: f64 = v.iter().map(|x| x.norm_sqr()).sum();
    (r / n).sqrt()
}

/// Mass fraction on interior layers 0 and 1; vectors stacking several copies
/// of the grid are folded onto it.
fn boundary_fraction(g: &Grid, v: &[Complex64]) -> f64 {
    let dim = g.dim();
    let mut edge = 0.0;
    let mut total = 0.0;
    for (i, x) in v.iter().enumerate() {
        let m = x.norm_sqr();
        total += m;
        if g.layer(i % dim) < 2 {
            edge += m;
        }
    }
    if total > 0.0 {
        edge / total
    } else {
        0.0
    }
}

fn to_faer(a: &CsrMatrix) -> faer::Mat<Complex64> {
    let mut m = faer::Mat::<Complex64>::zeros(a.nrows(), a.ncols());
    for (i, j, v) in a.entries() {
        m[(i, j)] = v;
    }
    m
}

/// All eigenvalues, ascending, by dense diagonalization.
pub fn dense_eigenvalues(a: &CsrMatrix) -> Vec<f64> {
    match to_faer(a).self_adjoint_eigenvalues(faer::Side::Lower) {
        Ok(ev) => ev,
        Err(_) => {
            let mut ev: Vec<f64> = a.to_dense().symmetric_eigenvalues().iter().copied().collect();
            ev.sort_by(f64::total_cmp);
            ev
        }
    }
}

fn dense_lowest(a: &CsrMatrix, k: usize) -> (Vec<f64>, Vec<Vec<Complex64>>) {
    if let Ok(eig) = to_faer(a).self_adjoint_eigen(faer::Side::Lower) {
        let k = k.min(a.nrows());
        let values = (0..k).map(|i| eig.S()[i].re).collect();
        let vectors = (0..k)
            .map(|i| eig.U().col(i).iter().copied().collect())
            .collect();
        return (values, vectors);
    }
    let eig = SymmetricEigen::new(a.to_dense());
    let mut order: Vec<usize> = (0..a.nrows()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    order.truncate(k);
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = order
        .iter()
        .map(|&i| eig.eigenvectors.column(i).iter().copied().collect())
        .collect();
    (values, vectors)
}

/// Smallest Gershgorin bound on the spectrum.
fn gershgorin_lower(a: &CsrMatrix) -> f64 {
    (0..a.nrows())
        .map(|i| {
            let (c, v) = a.row(i);
            let mut d = 0.0;
            let mut off = 0.0;
            for (&j, x) in c.iter().zip(v) {
                if j == i {
                    d = x.re;
                } else {
                    off += x.norm();
                }
            }
            d - off
        })
        .fold(f64::INFINITY, f64::min)
}

/// Factors `a − σI` for some `σ` strictly below the spectrum, starting just
/// below zero and stepping down until the factorization has no negative
/// pivot.
fn factor_below_spectrum(a: &CsrMatrix, band_limit: usize) -> Result<BandedLdl> {
    let floor = gershgorin_lower(a);
    let mut sigma = -(1e-3 * a.norm1()).clamp(1e-3, 0.5);
    loop {
        if sigma <= floor {
            sigma = floor - 1.0;
        }
        match BandedLdl::factor(a, sigma, band_limit) {
            Ok(f) if f.negative_count() == 0 => return Ok(f),
            Ok(_) | Err(Error::Breakdown { .. }) if sigma > floor - 1.0 => {
                sigma = 4.0 * sigma - 1.0;
            }
            Ok(_) => {
                return Err(Error::InvalidArgument(
                    "no shift below the Gershgorin bound gave a definite factorization".into(),
                ))
            }
            Err(e) => return Err(e),
        }
    }
}

const MAX_PLAIN_BASIS_FLOOR: usize = 120;

type Lowest = (Vec<f64>, Vec<Vec<Complex64>>, bool, SolvePath, usize);

fn iterative_lowest(a: &CsrMatrix, k: usize, opts: &SolverOptions) -> Result<Lowest> {
    let block = krylov::default_block(k);
    let mut params = krylov::Params {
        k,
        tol: opts.tol,
        max_applications: opts.max_iter,
        block,
        max_basis: k + 5 * block,
    };
    if opts.shift_invert {
        match factor_below_spectrum(a, opts.band_limit) {
            Ok(f) => {
                let out = krylov::solve(a, &params, |x| f.solve(x));
                let path = SolvePath::ShiftInvert { shift: f.shift() };
                return Ok((out.values, out.vectors, out.converged, path, out.applications));
            }
            Err(Error::BandTooWide { .. }) | Err(Error::Breakdown { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    // Without a factorization convergence is governed by ‖Op‖/gap, so keep a
    // much larger subspace between restarts.
    params.max_basis = (k + 20 * block).max(MAX_PLAIN_BASIS_FLOOR);
    let out = krylov::solve(a, &params, |x| a.apply(x));
    Ok((out.values, out.vectors, out.converged, SolvePath::Krylov, out.applications))
}

/// Number of eigenvalues strictly below `lambda`.
///
/// Uses the inertia of `Op − λI` when the band fits in `band_limit`, dense
/// diagonalization when the operator is small, and otherwise grows a Krylov
/// solve until an eigenvalue at or above `lambda` appears.
pub fn counting_function(op: &SparseHermitianOperator, lambda: f64, opts: &SolverOptions) -> Result<usize> {
    match banded::count_below(op.matrix(), lambda, opts.band_limit) {
        Ok(c) => return Ok(c),
        Err(Error::BandTooWide { .. }) | Err(Error::Breakdown { .. }) => {}
        Err(e) => return Err(e),
    }
    if op.dim() <= opts.dense_limit {
        return Ok(dense_eigenvalues(op.matrix()).iter().filter(|&&e| e < lambda).count());
    }
    let mut k = 16.min(op.dim());
    loop {
        let r = smallest_eigs_with(op, k, opts)?;
        if !r.converged {
            return Err(Error::InvalidArgument(format!(
                "eigensolver did not converge while counting below {lambda}"
            )));
        }
        let c = r.eigenvalues.iter().filter(|&&e| e < lambda).count();
        if c < k || k == op.dim() {
            return Ok(c);
        }
        k = (2 * k).min(op.dim());
    }
}

/// Count of eigenvalues below `eps`, capped at `max_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelCount {
    pub count: usize,
    /// All `max_k` inspected eigenvalues lie below `eps`; the true count is
    /// at least `count`.
    pub saturated: bool,
}

impl std::fmt::Display for KernelCount {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.saturated {
            write!(f, "≥ {}", self.count)
        } else {
            write!(f, "{}", self.count)
        }
    }
}

pub fn near_kernel_count(
    op: &SparseHermitianOperator,
    eps: f64,
    max_k: usize,
    opts: &SolverOptions,
) -> Result<KernelCount> {
    if !(eps > 0.0) || max_k == 0 {
        return Err(Error::InvalidArgument(format!(
            "near-kernel count needs eps > 0 and max_k ≥ 1 (got {eps}, {max_k})"
        )));
    }
    let c = counting_function(op, eps, opts)?;
    Ok(KernelCount {
        count: c.min(max_k),
        saturated: c >= max_k,
    })
}

/// Smallest-magnitude eigenvalues of the Dirac operator (`n = 1`).
///
/// With `𝒟 = [[0, U], [U†, 0]]` the eigenvalues are `±s` for the singular
/// values `s` of `U`, obtained from the `k` lowest eigenpairs of the block
/// `UU†` of `𝒟²`. Returned eigenvalues come in `(−s, +s)` pairs, ascending;
/// residuals and boundary masses refer to `𝒟` itself.
pub fn dirac_spectrum(w: &WeightSpec, g: &Grid, k: usize, opts: &SolverOptions) -> Result<SpectrumResult> {
    let d = discretize::dirac(w, g)?;
    let dim = g.dim();
    let u = d.matrix().block(0, dim, dim, dim);
    let uu = SparseHermitianOperator::symmetrized(u.mul(&u.adjoint()), d.layout().cloned());
    let top = smallest_eigs_with(&uu, k, opts)?;
    let ud = u.adjoint();
    let mut pairs: Vec<(f64, Vec<Complex64>)> = Vec::with_capacity(2 * k);
    for (mu, v) in top.eigenvalues.iter().zip(&top.eigenvectors) {
        let s = mu.max(0.0).sqrt();
        let lower: Vec<Complex64> = if s > 0.0 {
            ud.apply(v).into_iter().map(|x| x / s).collect()
        } else {
            vec![Complex64::new(0.0, 0.0); dim]
        };
        for sign in [-1.0, 1.0] {
            let mut x: Vec<Complex64> = v.iter().map(|z| z * std::f64::consts::FRAC_1_SQRT_2).collect();
            x.extend(lower.iter().map(|z| z * (sign * std::f64::consts::FRAC_1_SQRT_2)));
            pairs.push((sign * s, x));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let residuals: Vec<f64> = pairs.iter().map(|(l, x)| residual(d.matrix(), x, *l)).collect();
    let boundary_mass = pairs.iter().map(|(_, x)| boundary_fraction(g, x)).collect();
    let eigenvalues: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    Ok(SpectrumResult {
        near_kernel_count: eigenvalues.iter().filter(|e| e.abs() < opts.kernel_tol).count(),
        kernel_tol: opts.kernel_tol,
        converged: top.converged,
        path: top.path,
        iterations: top.iterations,
        eigenvectors: pairs.into_iter().map(|p| p.1).collect(),
        eigenvalues,
        residuals,
        boundary_mass,
    })
}
