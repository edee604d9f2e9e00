//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use pauli_core::criteria::{self, ConditionStatus, Quantity, SeriesOptions, NO_COMPACT_RESOLVENT};
use pauli_core::discretize::{self, Identity, Sign};
use pauli_core::eigensolve::{self, counting_function, SolverOptions};
use pauli_core::grid::Grid;
use pauli_core::measure::{self, DoublingOptions};
use pauli_core::{parse_weight, WeightSpec};
use pauli_lab::RunConfig;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn landau_weight() -> WeightSpec {
    parse_weight("|z1|^2").unwrap()
}

fn identity_criterion(which: Identity) -> Verdict {
    let t = Instant::now();
    let g = Grid::new(1, 6.0, 0.2).unwrap();
    let r = discretize::identity_residual(&landau_weight(), &g, which, 3).unwrap();
    let elapsed = t.elapsed();
    let mut pass = r.orders_within(1.5, 2.5) && r.observed_order.is_some() && elapsed < Duration::from_secs(30);
    let mut detail = format!(
        "h = {:?}, max interior error {:?}, orders {:?}, {:.1} s",
        r.h_values,
        r.max_interior_error,
        r.observed_orders,
        elapsed.as_secs_f64()
    );
    if let (Some(off), Some(orders)) = (&r.offdiagonal_max_entry, &r.commutator_orders) {
        pass &= off.iter().all(|&x| x == 0.0) && orders.iter().all(|&p| (1.5..=2.5).contains(&p));
        detail += &format!("; off-diagonal max {off:?}; field B orders {orders:?}");
    }
    verdict(pass, detail)
}

fn criterion_4() -> Verdict {
    let t = Instant::now();
    let w = landau_weight();
    let g = Grid::new(1, 8.0, 0.1).unwrap();
    let opts = SolverOptions::default();
    let plus = eigensolve::smallest_eigs_with(&discretize::pauli(&w, &g, Sign::Plus).unwrap(), 6, &opts).unwrap();
    let minus = eigensolve::smallest_eigs_with(&discretize::pauli(&w, &g, Sign::Minus).unwrap(), 1, &opts).unwrap();
    let elapsed = t.elapsed();
    let near = |x: f64| [4.0, 8.0].iter().any(|&l| (x - l).abs() <= 0.05 * l);
    let pass = plus.eigenvalues.iter().all(|&x| near(x))
        && minus.eigenvalues[0] <= 0.01
        && plus.converged
        && minus.converged
        && elapsed < Duration::from_secs(300);
    verdict(
        pass,
        format!(
            "P+ lowest six {:?}, P- lowest {:.3e}, {:.1} s",
            plus.eigenvalues,
            minus.eigenvalues[0],
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_5() -> Verdict {
    let w = landau_weight();
    let opts = SolverOptions::default();

    // Oracle first: inertia counts against full dense spectra at L = 4.
    let g = Grid::new(1, 4.0, 0.2).unwrap();
    let pm = discretize::pauli(&w, &g, Sign::Minus).unwrap();
    let dense = eigensolve::dense_eigenvalues(pm.matrix());
    let oracle_ok = [0.01, 0.1, 1.0, 4.5].iter().all(|&eps| {
        counting_function(&pm, eps, &opts).unwrap() == dense.iter().filter(|&&e| e < eps).count()
    });
    let oracle_count = dense.iter().filter(|&&e| e < 0.1).count();

    let ls = [4.0, 6.0, 8.0];
    let counts: Vec<usize> = ls
        .iter()
        .map(|&l| {
            let g = Grid::new(1, l, 0.1).unwrap();
            counting_function(&discretize::pauli(&w, &g, Sign::Minus).unwrap(), 0.1, &opts).unwrap()
        })
        .collect();
    let targets: Vec<f64> = ls.iter().map(|l| 4.0 * l * l / PI).collect();
    let increasing = counts.windows(2).all(|p| p[1] > p[0]);
    let close = counts
        .iter()
        .zip(&targets)
        .all(|(&c, &t)| (c as f64 - t).abs() <= 0.25 * t);
    verdict(
        oracle_ok && increasing && close,
        format!(
            "dense oracle (L = 4, h = 0.2) agrees: {oracle_ok}, {oracle_count} modes below 0.1; \
             counts at L = 4, 6, 8 (h = 0.1): {counts:?} vs 4L²/π = {:.1?}; increasing {increasing}, within 25% {close}",
            targets
        ),
    )
}

fn criterion_6() -> Verdict {
    let w = landau_weight();
    let opts = SolverOptions::default();
    let counts: Vec<usize> = [4.0, 6.0, 8.0]
        .iter()
        .map(|&l| {
            let g = Grid::new(1, l, 0.1).unwrap();
            counting_function(&discretize::pauli(&w, &g, Sign::Plus).unwrap(), 10.0, &opts).unwrap()
        })
        .collect();
    let grows = counts.windows(2).all(|p| p[1] as f64 >= 1.2 * p[0] as f64 && p[1] > p[0]);

    let mut pass = grows;
    let mut detail = format!("P+ counts below 10 at L = 4, 6, 8: {counts:?}");
    for (text, target) in [("|z1|^2", PI), ("|z1|^2 + |z2|^2", PI * PI)] {
        let r = criteria::classify(&parse_weight(text).unwrap(), &SeriesOptions::default()).unwrap();
        let v = r.series_15v.values();
        let constant = v.iter().all(|&x| (x - target).abs() <= 1e-8 * target);
        let c = &r.classification;
        pass &= constant
            && c.theorems.iter().any(|t| t == "2.2")
            && c.pminus == NO_COMPACT_RESOLVENT
            && c.pplus == NO_COMPACT_RESOLVENT;
        detail += &format!(
            "; {text}: theorems {:?}, P+ {}, ball integral {:.12} (target {target:.12})",
            c.theorems, c.pplus, v[0]
        );
    }
    verdict(pass, detail)
}

fn criterion_7() -> Verdict {
    let w = parse_weight("|z1|^4").unwrap();
    let mu = criteria::radial_series(&w, Quantity::Mu, &SeriesOptions::default()).unwrap();
    let worst = mu
        .points
        .iter()
        .map(|p| (p.value - 4.0 * p.radius * p.radius).abs() / (4.0 * p.radius * p.radius))
        .fold(0.0, f64::max);
    let r = criteria::classify(&w, &SeriesOptions::default()).unwrap();
    let holds = r.verdicts["2.1"].status == ConditionStatus::Holds;
    let opts = SolverOptions::default();
    let counts: Vec<usize> = [3.0, 4.0, 5.0]
        .iter()
        .map(|&l| {
            let g = Grid::new(1, l, 0.1).unwrap();
            counting_function(&discretize::pauli(&w, &g, Sign::Plus).unwrap(), 20.0, &opts).unwrap()
        })
        .collect();
    let (a, b) = (counts[1] as f64, counts[2] as f64);
    let stable = (b - a).abs() < 0.05 * a.max(b) || a == b;
    verdict(
        worst <= 1e-12 && holds && stable,
        format!(
            "max |μ − 4R²|/4R² = {worst:.1e}; (2.1) {:?}, theorems {:?}, P+ {}; P+ counts below 20 at L = 3, 4, 5: {counts:?}",
            r.verdicts["2.1"].status, r.classification.theorems, r.classification.pplus
        ),
    )
}

fn criterion_8() -> Verdict {
    let opts = DoublingOptions::default();
    let leb = measure::doubling_report(|_| 1.0, &measure::default_centers(), &measure::DEFAULT_RADII, opts).unwrap();
    let leb_err = leb
        .samples
        .iter()
        .map(|s| (s.ratio.unwrap() - 4.0).abs())
        .fold(0.0, f64::max);
    let origin = [Complex64::new(0.0, 0.0)];
    let sq = measure::doubling_report(|w| w.norm_sqr(), &origin, &measure::DEFAULT_RADII, opts).unwrap();
    let sq_err = sq
        .samples
        .iter()
        .map(|s| (s.ratio.unwrap() - 16.0).abs())
        .fold(0.0, f64::max);
    let lattice = measure::doubling_report(|w| w.norm_sqr(), &measure::default_centers(), &measure::DEFAULT_RADII, opts).unwrap();
    let growth_ok = [&leb, &sq, &lattice].iter().all(|r| r.violations_15.is_empty());
    verdict(
        leb_err <= 1e-10 && sq_err <= 1e-8 && growth_ok,
        format!(
            "Lebesgue max |ratio − 4| = {leb_err:.1e}; |w|² at 0 max |ratio − 16| = {sq_err:.1e}; \
             growth inequality holds on all samples: {growth_ok} (C_est {} / {} / {:.4})",
            leb.c_est, sq.c_est, lattice.c_est
        ),
    )
}

fn run_landau(dir: &Path) -> (i32, Vec<u8>, Vec<u8>) {
    let status = Command::new(env!("CARGO_BIN_EXE_pauli-lab"))
        .args(["landau", "--out"])
        .arg(dir)
        .output()
        .expect("binary runs");
    (
        status.status.code().unwrap_or(-1),
        std::fs::read(dir.join("landau.json")).unwrap_or_default(),
        std::fs::read(dir.join("landau.txt")).unwrap_or_default(),
    )
}

fn criterion_9() -> Verdict {
    let tmp = tempfile::tempdir().unwrap();
    let (c1, j1, t1) = run_landau(&tmp.path().join("a"));
    let (c2, j2, t2) = run_landau(&tmp.path().join("b"));
    let same = !j1.is_empty() && j1 == j2 && t1 == t2 && c1 == c2;
    verdict(
        same,
        format!("two landau runs: exit codes {c1}/{c2}, landau.json {} bytes, byte-identical reports: {same}", j1.len()),
    )
}

fn shipped_weights() -> Vec<(String, WeightSpec)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut files: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    files.sort();
    files
        .iter()
        .map(|p| {
            let cfg = RunConfig::load(p).unwrap();
            let w = pauli_lab::commands::weight_of(&cfg).unwrap();
            (cfg.weight, w)
        })
        .collect()
}

fn criterion_10() -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    let opts = SolverOptions::default();
    for (text, w) in shipped_weights() {
        let g = if w.n() == 1 { Grid::new(1, 4.0, 0.1) } else { Grid::new(2, 2.0, 0.4) }.unwrap();
        let mut ops = vec![
            discretize::pauli(&w, &g, Sign::Plus).unwrap(),
            discretize::pauli(&w, &g, Sign::Minus).unwrap(),
            discretize::box00(&w, &g).unwrap(),
            discretize::box0n(&w, &g).unwrap(),
        ];
        if w.n() == 1 {
            ops.push(discretize::dirac(&w, &g).unwrap());
        }
        let hermitian = ops.iter().all(|op| op.matrix().hermitian_defect() == 0.0);
        let pp = &ops[0];
        let floor = -1e-8 * pp.matrix().norm1();
        let below = counting_function(pp, floor, &opts).unwrap();
        let lowest = eigensolve::smallest_eigs_with(pp, 1, &opts).unwrap().eigenvalues[0];
        pass &= hermitian && below == 0 && lowest >= floor;
        parts.push(format!("{text}: hermitian {hermitian}, P+ min {lowest:.4}"));
    }
    verdict(pass, parts.join("; "))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("conjugation identity (2.2)", || identity_criterion(Identity::Box00)),
        ("conjugation identity (2.3)", || identity_criterion(Identity::Box0n)),
        ("Dirac decomposition", || identity_criterion(Identity::DiracSquare)),
        ("Landau levels", criterion_4),
        ("zero-mode growth", criterion_5),
        ("non-compactness for |z|^2", criterion_6),
        ("compact inverse for |z|^4", criterion_7),
        ("doubling measure", criterion_8),
        ("determinism", criterion_9),
        ("Hermiticity and PSD", criterion_10),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let v = f();
        let tag = if v.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag} {name}: {}", i + 1, v.detail);
        if !v.pass {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 10 criteria pass");
    } else {
        println!("acceptance: {} of 10 pass; failing: {failed:?}", 10 - failed.len());
        std::process::exit(1);
    }
}
