//! Radial evaluation of the Levi-matrix growth conditions and a
//! theorem-based classification of the Pauli operators.
//!
//! Limits at infinity are estimated from finite samples: for each radius `R`
//! a quantity is evaluated at `R·d` for a fixed set of unit directions `d`
//! and the minimum is kept. A series *diverges* when its last three values
//! strictly increase and the final value is at least ten times the first.
//! Verdicts are numerical evidence; a failing verdict always names the
//! sample point that witnesses it.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{default_centers, doubling_report, DoublingOptions, DoublingStatus, DEFAULT_RADII as DISK_RADII};
use crate::poly::Polynomial;
use crate::quadrature::gauss_legendre_on;
use crate::weights::{PshCertificate, WeightSpec};

pub const DEFAULT_RADII: [f64; 6] = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0];
/// Directions per radius for `n = 1` and `n = 2`.
pub const DEFAULT_DIRECTIONS: [usize; 2] = [16, 64];
pub const DEFAULT_ORDER: usize = 10;
const MIN_ORDER: usize = 8;
const MIN_DIRECTIONS: [usize; 2] = [8, 32];

pub const NO_COMPACT_RESOLVENT: &str = "no compact resolvent";
pub const COMPACT_INVERSE: &str = "compact inverse";
pub const INCONCLUSIVE: &str = "inconclusive";
pub const OUTSIDE_THEOREMS: &str = "inconclusive — outside implemented theorems";
pub const DIRAC_NOT_COMPACT: &str = "𝒟 has no compact resolvent";

/// Scalar functions of the Levi matrix sampled along spheres.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Quantity {
    /// Smallest Levi eigenvalue `μ_φ`.
    Mu,
    /// `|z|²·μ_φ`.
    Z2Mu,
    /// Sum of the `q` smallest Levi eigenvalues.
    Sq(usize),
    /// `∫_{B₁(z)} tr M_φ dλ` over the real unit ball around `z`.
    BallIntegral,
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Mu => f.write_str("mu"),
            Self::Z2Mu => f.write_str("z2mu"),
            Self::Sq(q) => write!(f, "sq({q})"),
            Self::BallIntegral => f.write_str("ball_integral"),
        }
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "mu" => Ok(Self::Mu),
            "z2mu" => Ok(Self::Z2Mu),
            "ball_integral" => Ok(Self::BallIntegral),
            t => t
                .strip_prefix("sq(")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|q| q.trim().parse().ok())
                .map(Self::Sq)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown quantity {s:?}"))),
        }
    }
}

impl From<Quantity> for String {
    fn from(q: Quantity) -> Self {
        q.to_string()
    }
}

impl TryFrom<String> for Quantity {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Unit directions in `ℝ²ⁿ`.
///
/// `n = 1`: `count` equispaced angles starting at 0.
/// `n = 2`: the eight signed coordinate axes, then points of the additive
/// recurrence `frac(½ + k·(g⁻¹, g⁻², g⁻³))` with `g⁴ = g + 1`, mapped to the
/// 3-sphere by `(u, a, b) ↦ (√u·e^{2πia}, √(1−u)·e^{2πib})`, which is
/// area-preserving.
pub fn sphere_directions(n: usize, count: usize) -> Result<Vec<Vec<f64>>> {
    match n {
        1 | 2 if count < MIN_DIRECTIONS[n - 1] => Err(Error::InvalidArgument(format!(
            "need at least {} directions for n = {n}, got {count}",
            MIN_DIRECTIONS[n - 1]
        ))),
        1 => Ok((0..count)
            .map(|k| {
                let t = TAU * k as f64 / count as f64;
                vec![t.cos(), t.sin()]
            })
            .collect()),
        2 => {
            let mut out = Vec::with_capacity(count);
            for a in 0..4 {
                for s in [1.0, -1.0] {
                    let mut d = vec![0.0; 4];
                    d[a] = s;
                    out.push(d);
                }
            }
            let g = 1.220_744_084_605_759_5_f64;
            let alpha = [1.0 / g, 1.0 / (g * g), 1.0 / (g * g * g)];
            for k in 1..=count - 8 {
                let [u, a, b] = alpha.map(|al| (0.5 + k as f64 * al).fract());
                let (r1, r2) = (u.sqrt(), (1.0 - u).sqrt());
                let (ta, tb) = (TAU * a, TAU * b);
                out.push(vec![r1 * ta.cos(), r1 * ta.sin(), r2 * tb.cos(), r2 * tb.sin()]);
            }
            Ok(out)
        }
        _ => Err(Error::UnsupportedDimension(n)),
    }
}

/// `∫_{B₁(center)} f dλ` for a polynomial `f` on `ℂⁿ`, `n ∈ {1, 2}`.
///
/// With `t = |w − z|²` (and, for `n = 2`, `u` the share of `t` carried by the
/// second coordinate) the angular averages of a polynomial are polynomials in
/// `t` and `u`, so Gauss–Legendre in `t`, `u` and equispaced angles make the
/// rule exact for polynomials of degree below `2·order`.
pub fn ball_integral_of(f: &Polynomial, center: &[f64], order: usize) -> Result<f64> {
    if order < MIN_ORDER {
        return Err(Error::InvalidArgument(format!(
            "quadrature order must be at least {MIN_ORDER}, got {order}"
        )));
    }
    let n = center.len() / 2;
    if f.nvars() != center.len() {
        return Err(Error::DimensionMismatch {
            expected: f.nvars(),
            got: center.len(),
        });
    }
    let gl = gauss_legendre_on(order, 0.0, 1.0);
    let m = 2 * order;
    let ring: Vec<(f64, f64)> = (0..m).map(|k| (TAU * k as f64 / m as f64).sin_cos()).collect();
    let dtheta = TAU / m as f64;
    let total = match n {
        1 => {
            let mut s = 0.0;
            for &(t, wt) in &gl {
                let rho = t.sqrt();
                let mut acc = 0.0;
                for &(sn, cs) in &ring {
                    acc += f.eval(&[center[0] + rho * cs, center[1] + rho * sn]);
                }
                s += 0.5 * wt * dtheta * acc;
            }
            s
        }
        2 => {
            let mut s = 0.0;
            let mut p = [0.0; 4];
            for &(t, wt) in &gl {
                for &(u, wu) in &gl {
                    let (r1, r2) = ((t * (1.0 - u)).sqrt(), (t * u).sqrt());
                    let mut acc = 0.0;
                    for &(s1, c1) in &ring {
                        p[0] = center[0] + r1 * c1;
                        p[1] = center[1] + r1 * s1;
                        for &(s2, c2) in &ring {
                            p[2] = center[2] + r2 * c2;
                            p[3] = center[3] + r2 * s2;
                            acc += f.eval(&p);
                        }
                    }
                    s += 0.25 * t * wt * wu * dtheta * dtheta * acc;
                }
            }
            s
        }
        _ => return Err(Error::UnsupportedDimension(n)),
    };
    if !total.is_finite() {
        return Err(Error::NonFinite(format!(
            "ball integral at {center:?} overflowed"
        )));
    }
    Ok(total)
}

/// `∫_{B₁(z)} tr M_φ dλ`.
pub fn ball_integral(w: &WeightSpec, center: &[f64], order: usize) -> Result<f64> {
    ball_integral_of(&w.trace_polynomial(), center, order)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SeriesOptions {
    pub radii: Vec<f64>,
    /// Directions per radius; `None` picks the per-dimension default.
    pub directions: Option<usize>,
    /// Gauss–Legendre order per axis for ball integrals.
    pub order: usize,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        Self {
            radii: DEFAULT_RADII.to_vec(),
            directions: None,
            order: DEFAULT_ORDER,
        }
    }
}

impl SeriesOptions {
    fn direction_count(&self, n: usize) -> usize {
        self.directions
            .unwrap_or(DEFAULT_DIRECTIONS[n.clamp(1, 2) - 1])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub radius: f64,
    /// Minimum over the sampled directions.
    pub value: f64,
    /// Sample point attaining the minimum (lowest direction index on ties).
    pub argmin: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialSeries {
    pub quantity: Quantity,
    pub points: Vec<SeriesPoint>,
}

impl RadialSeries {
    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.value).collect()
    }
}

pub fn radial_series(w: &WeightSpec, quantity: Quantity, opts: &SeriesOptions) -> Result<RadialSeries> {
    let n = w.n();
    if n > 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    check_radii(&opts.radii)?;
    if let Quantity::Sq(q) = quantity {
        if q == 0 || q > n {
            return Err(Error::InvalidArgument(format!("s_q needs 1 ≤ q ≤ {n}, got {q}")));
        }
    }
    if quantity == Quantity::BallIntegral && opts.order < MIN_ORDER {
        return Err(Error::InvalidArgument(format!(
            "quadrature order must be at least {MIN_ORDER}, got {}",
            opts.order
        )));
    }
    let dirs = sphere_directions(n, opts.direction_count(n))?;
    let trace = (quantity == Quantity::BallIntegral).then(|| w.trace_polynomial());
    let mut points = Vec::with_capacity(opts.radii.len());
    for &r in &opts.radii {
        let samples: Vec<(Vec<f64>, f64)> = dirs
            .par_iter()
            .map(|d| {
                let p: Vec<f64> = d.iter().map(|x| r * x).collect();
                let v = match quantity {
                    Quantity::Mu => Ok(w.levi_unchecked(&p).smallest_eigenvalue()),
                    Quantity::Z2Mu => Ok(r * r * w.levi_unchecked(&p).smallest_eigenvalue()),
                    Quantity::Sq(q) => Ok(w.levi_unchecked(&p).partial_sum(q)),
                    Quantity::BallIntegral => {
                        ball_integral_of(trace.as_ref().expect("built above"), &p, opts.order)
                    }
                }?;
                Ok((p, v))
            })
            .collect::<Result<_>>()?;
        let (argmin, value) = samples
            .into_iter()
            .reduce(|a, b| if b.1 < a.1 { b } else { a })
            .expect("at least one direction");
        if !value.is_finite() {
            return Err(Error::NonFinite(format!("{quantity} at radius {r}")));
        }
        points.push(SeriesPoint { radius: r, value, argmin });
    }
    Ok(RadialSeries { quantity, points })
}

fn check_radii(radii: &[f64]) -> Result<()> {
    if radii.is_empty() || radii.iter().any(|&r| !(r > 0.0) || !r.is_finite()) {
        return Err(Error::InvalidArgument("radii must be positive and finite".into()));
    }
    if radii.windows(2).any(|p| p[1] <= p[0]) {
        return Err(Error::InvalidArgument("radii must be strictly increasing".into()));
    }
    Ok(())
}

/// Last three values strictly increasing and the final one at least ten times
/// the first (for a non-positive first value: final value positive).
pub fn diverges(values: &[f64]) -> bool {
    let k = values.len();
    if k < 3 {
        return false;
    }
    let tail_up = values[k - 3] < values[k - 2] && values[k - 2] < values[k - 1];
    let (first, last) = (values[0], values[k - 1]);
    tail_up && if first > 0.0 { last >= 10.0 * first } else { last > 0.0 }
}

/// Last step changes by less than 5%, or does not increase.
fn levels_off(values: &[f64]) -> bool {
    match values {
        [.., a, b] => b <= a || (b - a).abs() < 0.05 * a.abs().max(b.abs()),
        _ => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConditionStatus {
    #[serde(rename = "holds (numerically)")]
    Holds,
    #[serde(rename = "fails (witness found)")]
    Fails,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub point: Vec<f64>,
    pub radius: f64,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionVerdict {
    pub status: ConditionStatus,
    pub witness: Option<Witness>,
}

impl ConditionVerdict {
    pub fn holds(&self) -> bool {
        self.status == ConditionStatus::Holds
    }

    fn from_last(series: &RadialSeries, status: ConditionStatus) -> Self {
        let witness = (status == ConditionStatus::Fails).then(|| {
            let p = series.points.last().expect("non-empty series");
            Witness {
                point: p.argmin.clone(),
                radius: p.radius,
                value: p.value,
            }
        });
        Self { status, witness }
    }
}

/// Verdict on `lim_{|z|→∞} q(z) = ∞`.
pub fn limit_verdict(series: &RadialSeries) -> ConditionVerdict {
    let v = series.values();
    let status = if diverges(&v) {
        ConditionStatus::Holds
    } else if v.len() >= 2 && levels_off(&v) {
        ConditionStatus::Fails
    } else {
        ConditionStatus::Inconclusive
    };
    ConditionVerdict::from_last(series, status)
}

/// Verdict on `liminf_{|z|→∞} q(z) > 0`: fails on a (numerically) zero
/// sample among the last three radii, holds when the tail is positive and
/// not decaying.
pub fn liminf_positive_verdict(series: &RadialSeries) -> ConditionVerdict {
    let v = series.values();
    let scale = v.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    let tail = &v[v.len().saturating_sub(3)..];
    let status = if tail.iter().any(|&x| x <= 1e-12 * scale) {
        ConditionStatus::Fails
    } else if tail.windows(2).all(|p| p[1] >= p[0] || (p[0] - p[1]) < 0.05 * p[0]) {
        ConditionStatus::Holds
    } else {
        ConditionStatus::Inconclusive
    };
    let mut out = ConditionVerdict { status, witness: None };
    if status == ConditionStatus::Fails {
        let (i, _) = series
            .points
            .iter()
            .enumerate()
            .rev()
            .take(3)
            .find(|(_, p)| p.value <= 1e-12 * scale)
            .expect("tail sample at zero");
        let p = &series.points[i];
        out.witness = Some(Witness {
            point: p.argmin.clone(),
            radius: p.radius,
            value: p.value,
        });
    }
    out
}

/// Sampled doubling check of `Δφ_j dλ` for one decoupled part.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DoublingCheck {
    pub part: String,
    pub c_est: Option<f64>,
    pub status: Option<DoublingStatus>,
    /// `"doubling: sample-consistent"` or the reason the check failed.
    pub note: String,
}

impl DoublingCheck {
    pub fn passes(&self) -> bool {
        self.status == Some(DoublingStatus::ConsistentWithDoubling)
    }
}

pub fn doubling_check(part: &WeightSpec) -> DoublingCheck {
    let density = |w: Complex64| part.laplacian_unchecked(&[w.re, w.im]);
    let mut out = DoublingCheck {
        part: part.to_string(),
        c_est: None,
        status: None,
        note: String::new(),
    };
    match doubling_report(density, &default_centers(), &DISK_RADII, DoublingOptions::default()) {
        Ok(rep) => {
            out.c_est = rep.c_est.is_finite().then_some(rep.c_est);
            out.status = Some(rep.status);
            out.note = match rep.status {
                DoublingStatus::ConsistentWithDoubling => "doubling: sample-consistent".into(),
                DoublingStatus::Inconsistent => "doubling: violated on samples".into(),
                DoublingStatus::Trivial => "doubling: trivial measure".into(),
            };
        }
        Err(e) => out.note = format!("doubling: {e}"),
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub pminus: String,
    pub pplus: String,
    /// Every theorem whose hypotheses hold numerically, in citation order.
    pub theorems: Vec<String>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PshCheck {
    pub certified: bool,
    pub certificate: Option<PshCertificate>,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriteriaReport {
    pub weight: String,
    pub n: usize,
    pub decoupled: bool,
    pub radii: Vec<f64>,
    pub directions: usize,
    pub order: usize,
    /// `min_{|z|=R} μ_φ`.
    pub series_12: RadialSeries,
    /// `min_{|z|=R} |z|²μ_φ`.
    pub series_16: RadialSeries,
    /// `min_{|z|=R} s_q`, one series per `q = 1..n`.
    pub series_17: Vec<RadialSeries>,
    /// Same samples as `series_12`, judged by the divergence rule.
    pub series_21: RadialSeries,
    /// `min_{|z|=R} ∫_{B₁(z)} tr M_φ dλ`.
    pub series_15v: RadialSeries,
    /// Keyed by condition: `1.2`, `1.6`, `1.7(q=…)`, `2.1`, `1.5(v)`.
    pub verdicts: BTreeMap<String, ConditionVerdict>,
    pub plurisubharmonic: PshCheck,
    pub doubling: Vec<DoublingCheck>,
    pub classification: Classification,
    /// Only for `n = 1`.
    pub dirac: Option<String>,
}

/// The origin and every `radius·direction` of the radial series.
pub fn sample_points(n: usize, opts: &SeriesOptions) -> Result<Vec<Vec<f64>>> {
    let dirs = sphere_directions(n, opts.direction_count(n))?;
    let mut samples: Vec<Vec<f64>> = vec![vec![0.0; 2 * n]];
    for &r in &opts.radii {
        samples.extend(dirs.iter().map(|d| d.iter().map(|x| r * x).collect()));
    }
    Ok(samples)
}

/// Computes every radial series, judges the conditions and classifies `P±`.
pub fn classify(w: &WeightSpec, opts: &SeriesOptions) -> Result<CriteriaReport> {
    let n = w.n();
    let mu = radial_series(w, Quantity::Mu, opts)?;
    let z2mu = radial_series(w, Quantity::Z2Mu, opts)?;
    let sq = (1..=n)
        .map(|q| radial_series(w, Quantity::Sq(q), opts))
        .collect::<Result<Vec<_>>>()?;
    let ball = radial_series(w, Quantity::BallIntegral, opts)?;

    let mut verdicts = BTreeMap::new();
    verdicts.insert("1.2".to_string(), liminf_positive_verdict(&mu));
    verdicts.insert("1.6".to_string(), limit_verdict(&z2mu));
    for (q, s) in sq.iter().enumerate() {
        verdicts.insert(format!("1.7(q={})", q + 1), limit_verdict(s));
    }
    verdicts.insert("2.1".to_string(), limit_verdict(&mu));
    verdicts.insert("1.5(v)".to_string(), limit_verdict(&ball));

    let directions = opts.direction_count(n);
    let samples = sample_points(n, opts)?;
    let plurisubharmonic = match w.certify_plurisubharmonic(samples.iter().map(Vec::as_slice)) {
        Ok(c) => PshCheck {
            certified: true,
            certificate: Some(c),
            failure: None,
        },
        Err(e) => PshCheck {
            certified: false,
            certificate: None,
            failure: Some(e.to_string()),
        },
    };

    let doubling: Vec<DoublingCheck> = w
        .decoupled_parts()
        .map(|parts| parts.iter().map(doubling_check).collect())
        .unwrap_or_default();

    let classification = decide(w, &verdicts, &plurisubharmonic, &doubling);
    let mut report = CriteriaReport {
        weight: w.to_string(),
        n,
        decoupled: w.is_decoupled(),
        radii: opts.radii.clone(),
        directions,
        order: opts.order,
        series_12: mu.clone(),
        series_16: z2mu,
        series_17: sq,
        series_21: mu,
        series_15v: ball,
        verdicts,
        plurisubharmonic,
        doubling,
        classification,
        dirac: None,
    };
    if n == 1 {
        report.dirac = Some(dirac_verdict(w, &report)?);
    }
    Ok(report)
}

fn decide(
    w: &WeightSpec,
    verdicts: &BTreeMap<String, ConditionVerdict>,
    psh: &PshCheck,
    doubling: &[DoublingCheck],
) -> Classification {
    let mut c = Classification {
        pminus: OUTSIDE_THEOREMS.into(),
        pplus: OUTSIDE_THEOREMS.into(),
        theorems: Vec::new(),
        notes: Vec::new(),
    };
    if w.is_decoupled() && !doubling.is_empty() && doubling.iter().all(DoublingCheck::passes) {
        c.theorems.push("2.2".into());
        c.pminus = NO_COMPACT_RESOLVENT.into();
        c.pplus = match verdicts["1.5(v)"].status {
            ConditionStatus::Holds => COMPACT_INVERSE,
            ConditionStatus::Fails => NO_COMPACT_RESOLVENT,
            ConditionStatus::Inconclusive => INCONCLUSIVE,
        }
        .into();
    } else if w.is_decoupled() {
        c.notes.push("decoupled, but some Δφ_j fails the sampled doubling check".into());
    }
    if psh.certified && verdicts["2.1"].holds() {
        c.theorems.push("2.1".into());
        c.pminus = NO_COMPACT_RESOLVENT.into();
        if c.pplus == NO_COMPACT_RESOLVENT {
            c.notes.push("conflicting numerical verdicts for P+".into());
            c.pplus = INCONCLUSIVE.into();
        } else {
            c.pplus = COMPACT_INVERSE.into();
        }
    }
    c
}

/// Verdict for the Dirac operator (`n = 1`): not compact whenever the
/// doubling hypothesis is sample-consistent and `P−` has no compact resolvent.
pub fn dirac_verdict(w: &WeightSpec, report: &CriteriaReport) -> Result<String> {
    if w.n() != 1 {
        return Err(Error::UnsupportedDimension(w.n()));
    }
    let doubling_ok = !report.doubling.is_empty() && report.doubling.iter().all(DoublingCheck::passes);
    Ok(if doubling_ok && report.classification.pminus == NO_COMPACT_RESOLVENT {
        DIRAC_NOT_COMPACT.into()
    } else {
        INCONCLUSIVE.into()
    })
}
