//! Polynomial weights φ on ℂⁿ and their exact calculus.
//!
//! Real coordinates are ordered `(x₁, y₁, …, xₙ, yₙ)` with `z_j = x_j + i y_j`.
//! All derivatives are taken symbolically on the expanded polynomial, so the
//! magnetic potential, electric potential and Levi matrix carry no
//! discretization error.

mod parse;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::hermitian_eigenvalues;
use crate::poly::Polynomial;

/// A real polynomial weight on ℂⁿ.
#[derive(Clone, Debug)]
pub struct WeightSpec {
    n: usize,
    poly: Polynomial,
    decoupled_parts: Option<Vec<WeightSpec>>,
    grad: Vec<Polynomial>,
    hess: Vec<Polynomial>,
}

/// Serializable view of a weight: canonical term list plus structure flags.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct WeightSummary {
    pub n: usize,
    pub terms: Vec<(f64, Vec<u32>)>,
    pub decoupled: bool,
}

impl std::fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.poly.fmt(f)
    }
}

impl PartialEq for WeightSpec {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.poly == other.poly
    }
}

impl WeightSpec {
    pub fn from_polynomial(n: usize, poly: Polynomial) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        if poly.nvars() != 2 * n {
            return Err(Error::DimensionMismatch {
                expected: 2 * n,
                got: poly.nvars(),
            });
        }
        Ok(Self::build(n, poly, true))
    }

    fn build(n: usize, poly: Polynomial, detect: bool) -> Self {
        let d = 2 * n;
        let grad: Vec<Polynomial> = (0..d).map(|a| poly.derivative(a)).collect();
        let hess: Vec<Polynomial> = (0..d * d)
            .map(|ab| grad[ab / d].derivative(ab % d))
            .collect();
        let decoupled_parts = if detect {
            split_decoupled(n, &poly)
        } else {
            None
        };
        Self {
            n,
            poly,
            decoupled_parts,
            grad,
            hess,
        }
    }

    /// φ ≡ 0 on ℂⁿ.
    pub fn zero(n: usize) -> Self {
        Self::build(n, Polynomial::zero(2 * n), true)
    }

    /// `Σ_j |z_j|^{2k}`.
    pub fn radial_power_sum(n: usize, k: u32) -> Self {
        let d = 2 * n;
        let mut p = Polynomial::zero(d);
        for j in 0..n {
            let x = Polynomial::variable(d, 2 * j);
            let y = Polynomial::variable(d, 2 * j + 1);
            p = p.add(&x.mul(&x).add(&y.mul(&y)).pow(k));
        }
        Self::build(n, p, true)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.poly
    }

    /// Canonical `(coefficient, exponents)` list over `(x₁, y₁, …)`.
    pub fn terms(&self) -> Vec<(f64, Vec<u32>)> {
        self.poly.terms().map(|(c, e)| (c, e.to_vec())).collect()
    }

    pub fn summary(&self) -> WeightSummary {
        WeightSummary {
            n: self.n,
            terms: self.terms(),
            decoupled: self.is_decoupled(),
        }
    }

    pub fn decoupled_parts(&self) -> Option<&[WeightSpec]> {
        self.decoupled_parts.as_deref()
    }

    pub fn is_decoupled(&self) -> bool {
        self.decoupled_parts.is_some()
    }

    /// `t·φ`.
    pub fn scaled(&self, t: f64) -> Self {
        Self::build(self.n, self.poly.scale(t), true)
    }

    /// `φ + c`.
    pub fn shifted(&self, c: f64) -> Self {
        Self::build(
            self.n,
            self.poly.add(&Polynomial::constant(2 * self.n, c)),
            true,
        )
    }

    fn check(&self, p: &[f64]) -> Result<()> {
        if p.len() != 2 * self.n {
            return Err(Error::DimensionMismatch {
                expected: 2 * self.n,
                got: p.len(),
            });
        }
        Ok(())
    }

    pub fn eval(&self, p: &[f64]) -> Result<f64> {
        self.check(p)?;
        Ok(self.poly.eval(p))
    }

    pub(crate) fn eval_unchecked(&self, p: &[f64]) -> f64 {
        self.poly.eval(p)
    }

    /// Real gradient `(φ_{x₁}, φ_{y₁}, …)`.
    pub fn gradient(&self, p: &[f64]) -> Result<Vec<f64>> {
        self.check(p)?;
        Ok(self.gradient_unchecked(p))
    }

    pub(crate) fn gradient_unchecked(&self, p: &[f64]) -> Vec<f64> {
        self.grad.iter().map(|g| g.eval(p)).collect()
    }

    /// `A = ½(−φ_{y₁}, φ_{x₁}, …, −φ_{yₙ}, φ_{xₙ})`.
    pub fn magnetic_potential(&self, p: &[f64]) -> Result<Vec<f64>> {
        self.check(p)?;
        Ok(self.magnetic_potential_unchecked(p))
    }

    pub(crate) fn magnetic_potential_unchecked(&self, p: &[f64]) -> Vec<f64> {
        let g = self.gradient_unchecked(p);
        let mut a = vec![0.0; 2 * self.n];
        for j in 0..self.n {
            a[2 * j] = -0.5 * g[2 * j + 1];
            a[2 * j + 1] = 0.5 * g[2 * j];
        }
        a
    }

    /// Real Laplacian Δφ over all `2n` coordinates.
    pub fn laplacian(&self, p: &[f64]) -> Result<f64> {
        self.check(p)?;
        Ok(self.laplacian_unchecked(p))
    }

    pub(crate) fn laplacian_unchecked(&self, p: &[f64]) -> f64 {
        let d = 2 * self.n;
        (0..d).map(|a| self.hess[a * d + a].eval(p)).sum()
    }

    /// `V = ½Δφ`.
    pub fn electric_potential(&self, p: &[f64]) -> Result<f64> {
        Ok(0.5 * self.laplacian(p)?)
    }

    pub(crate) fn electric_potential_unchecked(&self, p: &[f64]) -> f64 {
        0.5 * self.laplacian_unchecked(p)
    }

    /// Wirtinger derivatives `∂φ/∂z_j = ½(φ_{x_j} − i φ_{y_j})`.
    pub fn dz(&self, p: &[f64]) -> Result<Vec<Complex64>> {
        self.check(p)?;
        Ok(self.dz_unchecked(p))
    }

    pub(crate) fn dz_unchecked(&self, p: &[f64]) -> Vec<Complex64> {
        let g = self.gradient_unchecked(p);
        (0..self.n)
            .map(|j| Complex64::new(0.5 * g[2 * j], -0.5 * g[2 * j + 1]))
            .collect()
    }

    fn second(&self, a: usize, b: usize, p: &[f64]) -> f64 {
        self.hess[a * 2 * self.n + b].eval(p)
    }

    /// `tr M_φ = Δφ/4` as a polynomial.
    pub fn trace_polynomial(&self) -> Polynomial {
        let d = 2 * self.n;
        (0..d)
            .fold(Polynomial::zero(d), |acc, a| acc.add(&self.hess[a * d + a]))
            .scale(0.25)
    }

    /// `M_φ(p)` with `M_{jk} = ∂²φ/∂z_j∂z̄_k`.
    pub fn levi_matrix(&self, p: &[f64]) -> Result<LeviMatrix> {
        self.check(p)?;
        Ok(self.levi_unchecked(p))
    }

    pub(crate) fn levi_unchecked(&self, p: &[f64]) -> LeviMatrix {
        let n = self.n;
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for j in 0..n {
            let (xj, yj) = (2 * j, 2 * j + 1);
            entries[j * n + j] = Complex64::new(
                0.25 * (self.second(xj, xj, p) + self.second(yj, yj, p)),
                0.0,
            );
            for k in j + 1..n {
                let (xk, yk) = (2 * k, 2 * k + 1);
                let re = 0.25 * (self.second(xj, xk, p) + self.second(yj, yk, p));
                let im = 0.25 * (self.second(xj, yk, p) - self.second(yj, xk, p));
                entries[j * n + k] = Complex64::new(re, im);
                entries[k * n + j] = Complex64::new(re, -im);
            }
        }
        LeviMatrix { n, entries }
    }

    /// Ascending eigenvalues of the Levi matrix; `μ_φ` is the first entry.
    pub fn levi_spectrum(&self, p: &[f64]) -> Result<Vec<f64>> {
        Ok(self.levi_matrix(p)?.eigenvalues())
    }

    /// Checks that the Levi matrix is positive semidefinite at every point,
    /// with tolerance `−10⁻¹⁰·scale` where scale is the largest spectral
    /// radius seen (at least 1). Passing says nothing about points outside
    /// the sample set.
    pub fn certify_plurisubharmonic<'a, I>(&self, points: I) -> Result<PshCertificate>
    where
        I: IntoIterator<Item = &'a [f64]>,
    {
        let mut worst: Option<(f64, Vec<f64>)> = None;
        let mut scale = 1.0_f64;
        let mut count = 0;
        for p in points {
            self.check(p)?;
            let ev = self.levi_unchecked(p).eigenvalues();
            scale = scale.max(ev.iter().fold(0.0_f64, |m, v| m.max(v.abs())));
            if worst.as_ref().is_none_or(|(w, _)| ev[0] < *w) {
                worst = Some((ev[0], p.to_vec()));
            }
            count += 1;
        }
        let (min_eigenvalue, argmin) = worst.unwrap_or((0.0, vec![0.0; 2 * self.n]));
        if min_eigenvalue < -1e-10 * scale {
            return Err(Error::NotPlurisubharmonic {
                point: argmin,
                eigenvalue: min_eigenvalue,
            });
        }
        Ok(PshCertificate {
            points_checked: count,
            min_levi_eigenvalue: min_eigenvalue,
            scale,
            note: "certified on sample set only".to_string(),
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PshCertificate {
    pub points_checked: usize,
    pub min_levi_eigenvalue: f64,
    pub scale: f64,
    pub note: String,
}

/// Parses a weight expression; the dimension is the largest coordinate index.
pub fn parse_weight(text: &str) -> Result<WeightSpec> {
    let (n, poly) = parse::parse_polynomial(text, None)?;
    Ok(WeightSpec::build(n, poly, true))
}

/// Parses a weight expression on ℂⁿ for a given `n`.
pub fn parse_weight_in(text: &str, n: usize) -> Result<WeightSpec> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let (n, poly) = parse::parse_polynomial(text, Some(n))?;
    Ok(WeightSpec::build(n, poly, true))
}

fn split_decoupled(n: usize, poly: &Polynomial) -> Option<Vec<WeightSpec>> {
    let mut parts: Vec<Vec<(f64, Vec<u32>)>> = vec![Vec::new(); n];
    for (c, e) in poly.terms() {
        let owners: Vec<usize> = (0..n).filter(|&j| e[2 * j] + e[2 * j + 1] > 0).collect();
        match owners.as_slice() {
            // constants are attributed to the first coordinate
            [] => parts[0].push((c, vec![0, 0])),
            [j] => parts[*j].push((c, vec![e[2 * j], e[2 * j + 1]])),
            _ => return None,
        }
    }
    Some(
        parts
            .into_iter()
            .map(|t| WeightSpec::build(1, Polynomial::from_terms(2, t), false))
            .collect(),
    )
}

/// Complex Hessian `(∂²φ/∂z_j∂z̄_k)` at a point; Hermitian by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct LeviMatrix {
    n: usize,
    entries: Vec<Complex64>,
}

impl LeviMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.entries[j * self.n + k]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|j| self.entries[j * self.n + j].re).sum()
    }

    /// Ascending eigenvalues: closed form for n ≤ 2, cyclic Jacobi otherwise.
    pub fn eigenvalues(&self) -> Vec<f64> {
        match self.n {
            1 => vec![self.entries[0].re],
            2 => {
                let a = self.entries[0].re;
                let d = self.entries[3].re;
                let b = self.entries[1].norm();
                let mean = 0.5 * (a + d);
                let rad = (0.5 * (a - d)).hypot(b);
                vec![mean - rad, mean + rad]
            }
            _ => hermitian_eigenvalues(self.n, &self.entries),
        }
    }

    pub fn smallest_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// Sum of the `q` smallest eigenvalues.
    pub fn partial_sum(&self, q: usize) -> f64 {
        self.eigenvalues().iter().take(q).sum()
    }
}
