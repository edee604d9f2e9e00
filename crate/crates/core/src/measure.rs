//! Disk masses of densities on ℂ and sampled doubling checks.
//!
//! A measure `dμ = ρ dλ` is doubling when `μ(D(z,r)) ≤ C·μ(D(z,r/2))` for all
//! centers and radii; this module can only look at a finite lattice of disks,
//! so the constant it reports is a lower bound for the true one.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{composite_gauss_legendre, gauss_legendre_on};

/// Equal angular panels used by [`disk_mass`]; each carries `rule` nodes.
pub const ANGULAR_PANELS: usize = 8;

/// Radii of the default doubling lattice.
pub const DEFAULT_RADII: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 4.0];

/// Default quadrature order per direction.
pub const DEFAULT_RULE: usize = 16;

/// Centers on a 9×9 grid over `[−8, 8]²`.
pub fn default_centers() -> Vec<Complex64> {
    let ticks: Vec<f64> = (0..9).map(|i| -8.0 + 2.0 * i as f64).collect();
    ticks
        .iter()
        .flat_map(|&y| ticks.iter().map(move |&x| Complex64::new(x, y)))
        .collect()
}

/// `∫_{D(center, r)} ρ dλ` by Gauss–Legendre in polar coordinates: `rule`
/// radial nodes and `rule` nodes on each of [`ANGULAR_PANELS`] angular panels.
pub fn disk_mass<F>(density: F, center: Complex64, r: f64, rule: usize) -> Result<f64>
where
    F: Fn(Complex64) -> f64,
{
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "disk radius must be positive, got {r}"
        )));
    }
    if rule == 0 {
        return Err(Error::InvalidArgument(
            "quadrature rule must be positive".into(),
        ));
    }
    let radial = gauss_legendre_on(rule, 0.0, r);
    let angular = composite_gauss_legendre(rule, ANGULAR_PANELS, 0.0, std::f64::consts::TAU);
    let mut total = 0.0;
    for &(rho, wr) in &radial {
        let mut ring = 0.0;
        for &(theta, wt) in &angular {
            let w = center + Complex64::from_polar(rho, theta);
            let v = density(w);
            if v < 0.0 {
                return Err(Error::NegativeDensity {
                    value: v,
                    re: w.re,
                    im: w.im,
                });
            }
            ring += wt * v;
        }
        total += wr * rho * ring;
    }
    Ok(total)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DoublingSample {
    pub center: [f64; 2],
    pub radius: f64,
    /// `μ(D(z, r))`
    pub mass: f64,
    /// `μ(D(z, r/2))`
    pub mass_half: f64,
    /// `μ(D(z, 2r))`
    pub mass_double: f64,
    /// `μ(D(z,r)) / μ(D(z,r/2))`; `None` when the smaller disk has no mass.
    pub ratio: Option<f64>,
    /// `μ(D(z,2r)) / μ(D(z,r))`; `None` when the disk has no mass.
    pub growth: Option<f64>,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum DoublingStatus {
    /// Every sampled disk satisfies both inequalities with the estimated
    /// constant. This is sampled evidence, not a proof of doubling.
    ConsistentWithDoubling,
    /// Some sample breaks the growth inequality implied by the estimate.
    Inconsistent,
    /// All sampled masses vanish.
    Trivial,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DoublingReport {
    /// Largest observed ratio; a lower bound for the doubling constant.
    pub c_est: f64,
    pub samples: Vec<DoublingSample>,
    /// Samples whose ratio exceeds the constant being tested (the claimed
    /// one when given, otherwise `c_est`).
    pub violations_14: usize,
    /// Smallest observed `μ(D(z,2r))/μ(D(z,r))`.
    pub min_growth_15: f64,
    /// `1 + c_est⁻³`.
    pub growth_bound_15: f64,
    /// Indices of samples with `μ(D(z,2r)) < (1 + c_est⁻³)·μ(D(z,r))`.
    pub violations_15: Vec<usize>,
    /// Samples with a vanishing disk mass (`0/0` ratios), excluded from `c_est`.
    pub indeterminate: usize,
    pub status: DoublingStatus,
}

impl DoublingReport {
    /// Nontrivial and consistent on every sample.
    pub fn passes(&self) -> bool {
        self.status == DoublingStatus::ConsistentWithDoubling
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DoublingOptions {
    pub rule: usize,
    pub claimed_constant: Option<f64>,
}

impl Default for DoublingOptions {
    fn default() -> Self {
        Self {
            rule: DEFAULT_RULE,
            claimed_constant: None,
        }
    }
}

pub fn doubling_report<F>(
    density: F,
    centers: &[Complex64],
    radii: &[f64],
    opts: DoublingOptions,
) -> Result<DoublingReport>
where
    F: Fn(Complex64) -> f64,
{
    if centers.is_empty() || radii.is_empty() {
        return Err(Error::InvalidArgument(
            "doubling report needs at least one center and one radius".into(),
        ));
    }
    if let Some(&r) = radii.iter().find(|&&r| !(r > 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "radii must be positive, got {r}"
        )));
    }
    let mut samples = Vec::with_capacity(centers.len() * radii.len());
    for &c in centers {
        for &r in radii {
            let mass = disk_mass(&density, c, r, opts.rule)?;
            let mass_half = disk_mass(&density, c, 0.5 * r, opts.rule)?;
            let mass_double = disk_mass(&density, c, 2.0 * r, opts.rule)?;
            samples.push(DoublingSample {
                center: [c.re, c.im],
                radius: r,
                mass,
                mass_half,
                mass_double,
                ratio: (mass_half > 0.0).then(|| mass / mass_half),
                growth: (mass > 0.0).then(|| mass_double / mass),
            });
        }
    }

    let indeterminate = samples.iter().filter(|s| s.ratio.is_none()).count();
    let c_est = samples
        .iter()
        .filter_map(|s| s.ratio)
        .fold(f64::NEG_INFINITY, f64::max);
    if indeterminate == samples.len() {
        return Ok(DoublingReport {
            c_est: f64::NAN,
            samples,
            violations_14: 0,
            min_growth_15: f64::NAN,
            growth_bound_15: f64::NAN,
            violations_15: Vec::new(),
            indeterminate,
            status: DoublingStatus::Trivial,
        });
    }

    let tested = opts.claimed_constant.unwrap_or(c_est);
    let violations_14 = samples
        .iter()
        .filter(|s| s.ratio.is_some_and(|q| q > tested))
        .count();
    let growth_bound_15 = 1.0 + c_est.powi(-3);
    let min_growth_15 = samples
        .iter()
        .filter_map(|s| s.growth)
        .fold(f64::INFINITY, f64::min);
    let violations_15: Vec<usize> = samples
        .iter()
        .enumerate()
        .filter(|(_, s)| s.mass_double < growth_bound_15 * s.mass)
        .map(|(i, _)| i)
        .collect();
    let status = if violations_15.is_empty() && violations_14 == 0 {
        DoublingStatus::ConsistentWithDoubling
    } else {
        DoublingStatus::Inconsistent
    };
    Ok(DoublingReport {
        c_est,
        samples,
        violations_14,
        min_growth_15,
        growth_bound_15,
        violations_15,
        indeterminate,
        status,
    })
}
