//! Finite-difference assembly of the magnetic operators on a [`Grid`].
//!
//! First-order terms use centered differences, second-order terms the
//! 3-point stencil per axis. With `A` the magnetic potential and `V = ½Δφ`,
//!
//! ```text
//! P± = −Δ_h + i Σ_a (D_a A_a + A_a D_a) + |A|² ± V
//! ```
//!
//! which is the expansion of `Σ_a (−i∂_a − A_a)² ± V` with the pure
//! second-derivative part kept compact.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::sparse::{CsrMatrix, Layout, SparseHermitianOperator};
use crate::weights::WeightSpec;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn check(w: &WeightSpec, g: &Grid) -> Result<()> {
    if w.n() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.axes(),
            got: 2 * w.n(),
        });
    }
    Ok(())
}

fn layout(g: &Grid, components: usize) -> Option<Layout> {
    Some(Layout {
        grid: g.clone(),
        components,
    })
}

/// Assembles a matrix on the grid's unknowns from a per-row closure.
fn assemble<F>(g: &Grid, row: F) -> CsrMatrix
where
    F: Fn(usize) -> Vec<(usize, Complex64)> + Sync + Send,
{
    let dim = g.dim();
    let rows: Vec<_> = (0..dim).into_par_iter().map(&row).collect();
    CsrMatrix::from_rows(dim, dim, rows)
}

/// Magnetic potential at every unknown.
fn potentials(w: &WeightSpec, g: &Grid) -> Vec<Vec<f64>> {
    (0..g.dim())
        .into_par_iter()
        .map(|k| w.magnetic_potential_unchecked(&g.point(k)))
        .collect()
}

fn electric(w: &WeightSpec, g: &Grid) -> Vec<f64> {
    (0..g.dim())
        .into_par_iter()
        .map(|k| w.electric_potential_unchecked(&g.point(k)))
        .collect()
}

/// Centered difference along `axis` (no factor `−i`).
fn centered_difference(g: &Grid, axis: usize) -> CsrMatrix {
    let c = 0.5 / g.h();
    assemble(g, |k| {
        let mut row = Vec::with_capacity(2);
        if let Some(m) = g.neighbor(k, axis, false) {
            row.push((m, re(-c)));
        }
        if let Some(p) = g.neighbor(k, axis, true) {
            row.push((p, re(c)));
        }
        row
    })
}

/// `−Δ_h`, the 3-point Dirichlet Laplacian over all `2n` axes.
pub fn negative_laplacian(g: &Grid) -> SparseHermitianOperator {
    let inv_h2 = 1.0 / (g.h() * g.h());
    let m = assemble(g, |k| {
        let mut row = vec![(k, re(2.0 * g.axes() as f64 * inv_h2))];
        for a in 0..g.axes() {
            for forward in [false, true] {
                if let Some(j) = g.neighbor(k, a, forward) {
                    row.push((j, re(-inv_h2)));
                }
            }
        }
        row
    });
    SparseHermitianOperator::symmetrized(m, layout(g, 1))
}

/// Covariant derivatives `(𝒜_{x_j}, 𝒜_{y_j})` for complex coordinate `j`
/// (0-based): `𝒜 = −i·D_c − diag(A)`.
pub fn covariant_pair(
    w: &WeightSpec,
    g: &Grid,
    j: usize,
) -> Result<(SparseHermitianOperator, SparseHermitianOperator)> {
    check(w, g)?;
    if j >= g.n() {
        return Err(Error::InvalidArgument(format!(
            "coordinate index {j} out of range for n = {}",
            g.n()
        )));
    }
    let a = potentials(w, g);
    let build = |axis: usize| {
        let d = centered_difference(g, axis).scale(-I);
        let diag: Vec<Complex64> = a.iter().map(|ak| re(-ak[axis])).collect();
        let m = d.add(&CsrMatrix::diagonal(&diag));
        SparseHermitianOperator::symmetrized(m, layout(g, 1))
    };
    Ok((build(2 * j), build(2 * j + 1)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Row `k` of `−Δ_A + s·diag(V)`, given the potentials `a_k`, `v_k` at `k`
/// and `a_at(m, axis)`, the `axis` component of `A` at neighbour `m`.
fn magnetic_row<F>(g: &Grid, k: usize, s: f64, a_k: &[f64], v_k: f64, a_at: F) -> Vec<(usize, Complex64)>
where
    F: Fn(usize, usize) -> f64,
{
    let inv_h2 = 1.0 / (g.h() * g.h());
    let half_inv_h = 0.5 / g.h();
    let a2: f64 = a_k.iter().map(|x| x * x).sum();
    let mut row = vec![(k, re(2.0 * g.axes() as f64 * inv_h2 + a2 + s * v_k))];
    for (axis, &aka) in a_k.iter().enumerate() {
        if let Some(m) = g.neighbor(k, axis, false) {
            row.push((m, Complex64::new(-inv_h2, -(a_at(m, axis) + aka) * half_inv_h)));
        }
        if let Some(p) = g.neighbor(k, axis, true) {
            row.push((p, Complex64::new(-inv_h2, (a_at(p, axis) + aka) * half_inv_h)));
        }
    }
    row
}

/// `−Δ_A + s·diag(V)` with `s` real.
fn magnetic_schrodinger(w: &WeightSpec, g: &Grid, s: f64) -> CsrMatrix {
    let a = potentials(w, g);
    let v = electric(w, g);
    assemble(g, |k| magnetic_row(g, k, s, &a[k], v[k], |m, axis| a[m][axis]))
}

/// Pauli operator `P± = −Δ_A ± V`.
pub fn pauli(w: &WeightSpec, g: &Grid, sign: Sign) -> Result<SparseHermitianOperator> {
    check(w, g)?;
    let m = magnetic_schrodinger(w, g, sign.value());
    Ok(SparseHermitianOperator::symmetrized(m, layout(g, 1)))
}

/// Dirac operator `[[0, 𝒜₁ − i𝒜₂], [𝒜₁ + i𝒜₂, 0]]` for `n = 1`, unknowns
/// ordered as the upper component followed by the lower one.
pub fn dirac(w: &WeightSpec, g: &Grid) -> Result<SparseHermitianOperator> {
    check(w, g)?;
    if g.n() != 1 {
        return Err(Error::UnsupportedDimension(g.n()));
    }
    let (a1, a2) = covariant_pair(w, g, 0)?;
    let upper = a1.matrix().lin_comb(re(1.0), a2.matrix(), -I);
    let lower = upper.adjoint();
    let dim = g.dim();
    let mut rows: Vec<Vec<(usize, Complex64)>> = Vec::with_capacity(2 * dim);
    for i in 0..dim {
        let (c, v) = upper.row(i);
        rows.push(c.iter().map(|&j| j + dim).zip(v.iter().copied()).collect());
    }
    for i in 0..dim {
        let (c, v) = lower.row(i);
        rows.push(c.iter().copied().zip(v.iter().copied()).collect());
    }
    let m = CsrMatrix::from_rows(2 * dim, 2 * dim, rows);
    SparseHermitianOperator::try_new(m, layout(g, 2))
}

/// `□_φ^{(0,0)}` conjugated to the unweighted space: `¼P−`.
pub fn box00(w: &WeightSpec, g: &Grid) -> Result<SparseHermitianOperator> {
    Ok(pauli(w, g, Sign::Minus)?.scaled(0.25))
}

/// `□_φ^{(0,n)}` on the coefficient of a `(0,n)`-form, conjugated to the
/// unweighted space: `¼P+`.
pub fn box0n(w: &WeightSpec, g: &Grid) -> Result<SparseHermitianOperator> {
    Ok(pauli(w, g, Sign::Plus)?.scaled(0.25))
}

/// `□_φ^{(0,0)} f = −Σ_j ∂²f/∂z_j∂z̄_j + Σ_j φ_{z_j} ∂f/∂z̄_j` acting on the
/// weighted space, with Wirtinger stencils `∂_z̄ = ½(D_x + iD_y)`. Self-adjoint
/// in `L²(e^{−φ})`, so not Hermitian as a plain matrix.
pub fn box00_direct(w: &WeightSpec, g: &Grid) -> Result<CsrMatrix> {
    check(w, g)?;
    Ok(wirtinger_direct(w, g, false))
}

/// `□_φ^{(0,n)} u = Σ_j (φ_{z_j z̄_j} u + φ_{z_j} ∂u/∂z̄_j − ∂²u/∂z_j∂z̄_j)` in the
/// weighted space.
pub fn box0n_direct(w: &WeightSpec, g: &Grid) -> Result<CsrMatrix> {
    check(w, g)?;
    Ok(wirtinger_direct(w, g, true))
}

fn wirtinger_direct(w: &WeightSpec, g: &Grid, with_trace: bool) -> CsrMatrix {
    assemble(g, |k| {
        let p = g.point(k);
        let trace = if with_trace { 0.25 * w.laplacian_unchecked(&p) } else { 0.0 };
        wirtinger_row(g, k, &w.dz_unchecked(&p), trace)
    })
}

/// Row `k` of the Wirtinger assembly, given `φ_{z_j}` and the zeroth-order
/// coefficient at `k`.
fn wirtinger_row(g: &Grid, k: usize, phi_z: &[Complex64], zeroth: f64) -> Vec<(usize, Complex64)> {
    let inv_h2 = 1.0 / (g.h() * g.h());
    let quarter_inv_h = 0.25 / g.h();
    let mut row = vec![(k, re(0.5 * g.axes() as f64 * inv_h2 + zeroth))];
    for (j, &fz) in phi_z.iter().enumerate() {
        // φ_z · ½(D_x + iD_y), D centered: coefficient ±¼h⁻¹ on x, ±¼ih⁻¹ on y
        for (axis, unit) in [(2 * j, re(1.0)), (2 * j + 1, I)] {
            let c = fz * unit * quarter_inv_h;
            if let Some(m) = g.neighbor(k, axis, false) {
                row.push((m, re(-0.25 * inv_h2) - c));
            }
            if let Some(q) = g.neighbor(k, axis, true) {
                row.push((q, re(-0.25 * inv_h2) + c));
            }
        }
    }
    row
}

/// Diagonal operator `diag(e^{s·φ(node)})`.
#[derive(Clone, Debug, PartialEq)]
pub struct Scaling {
    diag: Vec<f64>,
}

impl Scaling {
    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        v.iter().zip(&self.diag).map(|(x, d)| x * d).collect()
    }

    pub fn apply_inverse(&self, v: &[Complex64]) -> Vec<Complex64> {
        v.iter().zip(&self.diag).map(|(x, d)| x / d).collect()
    }

    pub fn to_csr(&self) -> CsrMatrix {
        let d: Vec<Complex64> = self.diag.iter().map(|&x| re(x)).collect();
        CsrMatrix::diagonal(&d)
    }
}

/// `diag(e^{s·φ})` on the grid's unknowns; refuses exponents above 700.
pub fn conjugation_scaling(w: &WeightSpec, g: &Grid, s: f64) -> Result<Scaling> {
    check(w, g)?;
    if !s.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "scaling exponent must be finite, got {s}"
        )));
    }
    let expo: Vec<f64> = (0..g.dim())
        .into_par_iter()
        .map(|k| s * w.eval_unchecked(&g.point(k)))
        .collect();
    let worst = expo.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    if worst > 700.0 {
        return Err(Error::ScalingOverflow(worst));
    }
    Ok(Scaling {
        diag: expo.into_iter().map(f64::exp).collect(),
    })
}

/// Which identity [`identity_residual`] checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Identity {
    /// `e^{−φ/2} □^{(0,0)} e^{φ/2} = ¼(−Δ_A − V)`
    #[serde(rename = "2.2")]
    Box00,
    /// `e^{−φ/2} □^{(0,n)} e^{φ/2} = ¼(−Δ_A + V)`
    #[serde(rename = "2.3")]
    Box0n,
    /// `𝒟² = diag(P−, P+)`
    #[serde(rename = "dirac-square")]
    DiracSquare,
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Identity::Box00 => "2.2",
            Identity::Box0n => "2.3",
            Identity::DiracSquare => "dirac-square",
        })
    }
}

impl FromStr for Identity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "2.2" => Ok(Identity::Box00),
            "2.3" => Ok(Identity::Box0n),
            "dirac-square" => Ok(Identity::DiracSquare),
            _ => Err(Error::InvalidArgument(format!(
                "unknown identity {s:?} (expected 2.2, 2.3 or dirac-square)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityResidualReport {
    pub which: Identity,
    pub test_functions: usize,
    pub h_values: Vec<f64>,
    /// Max over test functions and interior unknowns, per spacing.
    pub max_interior_error: Vec<f64>,
    /// `log₂(e(h)/e(h/2))` per consecutive pair.
    pub observed_orders: Vec<f64>,
    /// Mean of `observed_orders`; `None` when every error is at rounding
    /// level (the two sides agree exactly).
    pub observed_order: Option<f64>,
    /// Dirac only: largest entry of the off-diagonal blocks of `𝒟²`, per spacing.
    pub offdiagonal_max_entry: Option<Vec<f64>>,
    /// Dirac only: `i[𝒜₂, 𝒜₁]g` against `B·g`, per spacing.
    pub commutator_error: Option<Vec<f64>>,
    pub commutator_orders: Option<Vec<f64>>,
}

impl IdentityResidualReport {
    /// Every pairwise order lies in `[lo, hi]` (vacuous for exact agreement).
    pub fn orders_within(&self, lo: f64, hi: f64) -> bool {
        self.observed_order.is_none() || self.observed_orders.iter().all(|&p| p >= lo && p <= hi)
    }
}

/// Errors below this are treated as rounding noise when estimating orders.
const EXACT: f64 = 1e-12;

/// Checks an identity by applying both sides to the smooth test family
/// [`test_functions`] on `g` and on `refinement_levels − 1` successive halvings
/// of its spacing.
///
/// Errors are compared at the same physical points on every level: the
/// unknowns of `g` at least two layers from its boundary. For the
/// conjugation identities the rows are built on the fly at those points, so
/// refined grids are never assembled and the node cap does not apply to
/// them; the conjugation `e^{∓φ/2}` enters as the neighbour ratios
/// `e^{(φ_m − φ_k)/2}`.
pub fn identity_residual(
    w: &WeightSpec,
    g: &Grid,
    which: Identity,
    refinement_levels: usize,
) -> Result<IdentityResidualReport> {
    check(w, g)?;
    if refinement_levels < 2 {
        return Err(Error::InvalidArgument(
            "need at least two refinement levels".into(),
        ));
    }
    if which == Identity::DiracSquare && g.n() != 1 {
        return Err(Error::UnsupportedDimension(g.n()));
    }
    let family = test_functions(g.n());
    let points: Vec<Vec<usize>> = (0..g.dim())
        .filter(|&k| g.layer(k) >= 2)
        .map(|k| g.multi_index(k))
        .filter(|idx| in_support(g, idx))
        .collect();
    let mut h_values = Vec::new();
    let mut errors = Vec::new();
    let mut offdiag = Vec::new();
    let mut commutator = Vec::new();
    for level in 0..refinement_levels {
        let factor = 1usize << level;
        match which {
            Identity::Box00 | Identity::Box0n => {
                let grid = Grid::with_cap(g.n(), g.half_width(), g.h() / factor as f64, usize::MAX)?;
                errors.push(conjugation_error(w, g, &grid, which, factor, &family, &points));
                h_values.push(grid.h());
            }
            Identity::DiracSquare => {
                let grid = g.refined(factor)?;
                let nodes: Vec<usize> = points.iter().map(|idx| grid.index_from_coarse(idx, factor)).collect();
                let samples: Vec<Vec<Complex64>> = family
                    .iter()
                    .map(|f| (0..grid.dim()).map(|k| f.eval(&grid.point(k), g.half_width())).collect())
                    .collect();
                let max_err = |a: &[Complex64], b: &[Complex64]| {
                    nodes.iter().map(|&k| (a[k] - b[k]).norm()).fold(0.0, f64::max)
                };
                let d = dirac(w, &grid)?;
                let d2 = d.mul(d.matrix());
                let dim = grid.dim();
                let off = d2
                    .entries()
                    .filter(|&(i, j, _)| (i < dim) != (j < dim))
                    .map(|(_, _, v)| v.norm())
                    .fold(0.0, f64::max);
                offdiag.push(off);
                let top = d2.block(0, dim, 0, dim);
                let bottom = d2.block(dim, dim, dim, dim);
                let pm = pauli(w, &grid, Sign::Minus)?;
                let pp = pauli(w, &grid, Sign::Plus)?;
                let (a1, a2) = covariant_pair(w, &grid, 0)?;
                let comm = a2.mul(a1.matrix()).sub(&a1.mul(a2.matrix())).scale(I);
                let b = electric(w, &grid);
                let mut err = 0.0f64;
                let mut cerr = 0.0f64;
                for s in &samples {
                    err = err.max(max_err(&top.apply(s), &pm.apply(s)));
                    err = err.max(max_err(&bottom.apply(s), &pp.apply(s)));
                    let bs: Vec<Complex64> = s.iter().zip(&b).map(|(x, bk)| x * bk).collect();
                    cerr = cerr.max(max_err(&comm.apply(s), &bs));
                }
                errors.push(err);
                commutator.push(cerr);
                h_values.push(grid.h());
            }
        }
    }
    let (observed_orders, observed_order) = orders(&errors);
    let (commutator_error, commutator_orders) = if which == Identity::DiracSquare {
        let (o, _) = orders(&commutator);
        (Some(commutator), Some(o))
    } else {
        (None, None)
    };
    Ok(IdentityResidualReport {
        which,
        test_functions: family.len(),
        h_values,
        max_interior_error: errors,
        observed_orders,
        observed_order,
        offdiagonal_max_entry: (which == Identity::DiracSquare).then_some(offdiag),
        commutator_error,
        commutator_orders,
    })
}

/// Whether some stencil neighbour of the node can see a nonzero test value;
/// elsewhere both sides of every identity vanish.
fn in_support(g: &Grid, idx: &[usize]) -> bool {
    idx.iter().all(|&i| g.coord(i).abs() < 0.5 * g.half_width() + g.h())
}

/// Max over test functions and `points` of `|e^{−φ/2} □ e^{φ/2} f − ¼P∓ f|`
/// on `grid`, whose spacing is `factor` times finer than `coarse`.
fn conjugation_error(
    w: &WeightSpec,
    coarse: &Grid,
    grid: &Grid,
    which: Identity,
    factor: usize,
    family: &[TestFunction],
    points: &[Vec<usize>],
) -> f64 {
    let (sign, with_trace) = match which {
        Identity::Box00 => (-1.0, false),
        _ => (1.0, true),
    };
    points
        .par_iter()
        .map(|idx| {
            let k = grid.index_from_coarse(idx, factor);
            let p = grid.point(k);
            let reference = magnetic_row(
                grid,
                k,
                sign,
                &w.magnetic_potential_unchecked(&p),
                w.electric_potential_unchecked(&p),
                |m, axis| w.magnetic_potential_unchecked(&grid.point(m))[axis],
            );
            let trace = if with_trace { 0.25 * w.laplacian_unchecked(&p) } else { 0.0 };
            let direct = wirtinger_row(grid, k, &w.dz_unchecked(&p), trace);
            let phi_k = w.eval_unchecked(&p);
            // Both rows share the column set {k} ∪ neighbours.
            let columns: Vec<(usize, f64, Vec<Complex64>)> = reference
                .iter()
                .map(|&(m, _)| {
                    let q = grid.point(m);
                    let ratio = (0.5 * (w.eval_unchecked(&q) - phi_k)).exp();
                    (m, ratio, family.iter().map(|f| f.eval(&q, coarse.half_width())).collect())
                })
                .collect();
            let lookup = |m: usize| columns.iter().find(|c| c.0 == m).expect("shared stencil");
            (0..family.len())
                .map(|t| {
                    let lhs: Complex64 = direct
                        .iter()
                        .map(|&(m, c)| {
                            let (_, ratio, vals) = lookup(m);
                            c * ratio * vals[t]
                        })
                        .sum();
                    let rhs: Complex64 = reference
                        .iter()
                        .map(|&(m, c)| c * lookup(m).2[t])
                        .sum::<Complex64>()
                        * 0.25;
                    (lhs - rhs).norm()
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}

fn orders(errors: &[f64]) -> (Vec<f64>, Option<f64>) {
    let o: Vec<f64> = errors.windows(2).map(|p| (p[0] / p[1]).log2()).collect();
    if errors.iter().all(|&e| e <= EXACT) {
        return (o, None);
    }
    let mean = o.iter().sum::<f64>() / o.len() as f64;
    (o, Some(mean))
}

/// Smooth step: 1 for `t ≤ a`, 0 for `t ≥ b`, `C^∞` in between.
fn smooth_cutoff(t: f64, a: f64, b: f64) -> f64 {
    if t <= a {
        return 1.0;
    }
    if t >= b {
        return 0.0;
    }
    let f = |u: f64| if u > 0.0 { (-1.0 / u).exp() } else { 0.0 };
    let u = (b - t) / (b - a);
    f(u) / (f(u) + f(1.0 - u))
}

/// A member of the identity test family, written in scaled coordinates
/// `ξ = 6x/L`: a low-order polynomial times `e^{−2|ξ|²}`, multiplied by a
/// cutoff equal to 1 on `[−L/4, L/4]^{2n}` and vanishing outside
/// `[−L/2, L/2]^{2n}`. The Gaussian is below `e^{−4.5}` where the cutoff
/// starts acting, so the cutoff's large high derivatives stay out of the
/// leading error terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TestFunction {
    /// `e^{−2|ξ|²}`
    Gaussian,
    /// `ξ₁ e^{−2|ξ|²}`
    LinearX,
    /// `(ξ₁ + i η₁) e^{−2|ξ|²}`
    Holomorphic,
    /// `(1 + ξ₁² − i ξ₁η₁) e^{−2|ξ|²}`
    MixedQuadratic,
    /// `(1 + i η_n) e^{−2|ξ − c|²}`, `c = (½, −¼, ½, −¼)`
    Shifted,
    /// `(ξ_n − i η_n)·ξ₁ e^{−2|ξ|²}`
    AntiHolomorphic,
}

pub fn test_functions(_n: usize) -> Vec<TestFunction> {
    use TestFunction::*;
    vec![
        Gaussian,
        LinearX,
        Holomorphic,
        MixedQuadratic,
        Shifted,
        AntiHolomorphic,
    ]
}

impl TestFunction {
    pub fn eval(self, p: &[f64], half_width: f64) -> Complex64 {
        let cut: f64 = p
            .iter()
            .map(|&x| smooth_cutoff(x.abs(), 0.25 * half_width, 0.5 * half_width))
            .product();
        if cut == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let s = 6.0 / half_width;
        let q: Vec<f64> = p.iter().map(|x| s * x).collect();
        let gauss = |c: &[f64]| {
            let d2: f64 = q
                .iter()
                .zip(c.iter().chain(std::iter::repeat(&0.0)))
                .map(|(x, c)| (x - c) * (x - c))
                .sum();
            (-2.0 * d2).exp()
        };
        let g0 = gauss(&[]);
        let (x1, y1) = (q[0], q[1]);
        let (xn, yn) = (q[q.len() - 2], q[q.len() - 1]);
        let v = match self {
            TestFunction::Gaussian => re(g0),
            TestFunction::LinearX => re(x1 * g0),
            TestFunction::Holomorphic => Complex64::new(x1, y1) * g0,
            TestFunction::MixedQuadratic => Complex64::new(1.0 + x1 * x1, -x1 * y1) * g0,
            TestFunction::Shifted => Complex64::new(1.0, yn) * gauss(&[0.5, -0.25, 0.5, -0.25]),
            TestFunction::AntiHolomorphic => Complex64::new(xn, -yn) * x1 * g0,
        };
        v * cut
    }
}
