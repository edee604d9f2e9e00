use std::f64::consts::PI;

use num_complex::Complex64;
use pauli_core::criteria::{self, SeriesOptions, COMPACT_INVERSE, NO_COMPACT_RESOLVENT};
use pauli_core::discretize::{self, Identity, Sign};
use pauli_core::eigensolve::{
    self, counting_function, dense_eigenvalues, near_kernel_count, Method, SolverOptions,
};
use pauli_core::grid::Grid;
use pauli_core::measure::{self, DoublingOptions};
use pauli_core::{parse_weight, parse_weight_in};

/// Lowest eigenvalue of the 3-point Dirichlet Laplacian with `m` interior
/// nodes and spacing `h`, summed over `axes` axes.
fn discrete_box_ground_state(axes: usize, m: usize, h: f64) -> f64 {
    let s = (PI / (2.0 * (m + 1) as f64)).sin();
    axes as f64 * 4.0 * s * s / (h * h)
}

#[test]
fn free_pauli_matches_discrete_box_spectrum() {
    let w = pauli_core::WeightSpec::zero(1);
    let g = Grid::new(1, PI / 2.0, PI / 40.0).unwrap();
    let r = eigensolve::smallest_eigs(&discretize::pauli(&w, &g, Sign::Plus).unwrap(), 3, 1e-9).unwrap();
    let exact = discrete_box_ground_state(2, g.interior_per_axis(), g.h());
    assert!((r.eigenvalues[0] - exact).abs() < 1e-9, "{} vs {exact}", r.eigenvalues[0]);
    // The continuum value (π/2L)²·2 = 2 is approached from below.
    assert!((r.eigenvalues[0] - 2.0).abs() < 2e-3);
}

#[test]
fn free_pauli_in_two_variables() {
    let w = pauli_core::WeightSpec::zero(2);
    let g = Grid::new(2, PI / 2.0, PI / 6.0).unwrap();
    let r = eigensolve::smallest_eigs(&discretize::pauli(&w, &g, Sign::Plus).unwrap(), 1, 1e-9).unwrap();
    let exact = discrete_box_ground_state(4, g.interior_per_axis(), g.h());
    assert!((r.eigenvalues[0] - exact).abs() < 1e-8, "{} vs {exact}", r.eigenvalues[0]);
}

#[test]
fn krylov_and_dense_agree_on_landau_operator() {
    let w = parse_weight("|z1|^2").unwrap();
    let g = Grid::new(1, 4.0, 0.2).unwrap();
    let op = discretize::pauli(&w, &g, Sign::Plus).unwrap();
    let dense = dense_eigenvalues(op.matrix());
    for shift_invert in [true, false] {
        let opts = SolverOptions {
            method: Method::Krylov,
            shift_invert,
            tol: 1e-8,
            ..SolverOptions::default()
        };
        let r = eigensolve::smallest_eigs_with(&op, 6, &opts).unwrap();
        assert!(r.converged);
        for (a, b) in r.eigenvalues.iter().zip(&dense) {
            assert!((a - b).abs() < 1e-7, "{a} vs {b}");
        }
        assert!(r.residuals.iter().all(|&x| x <= 1e-8));
    }
}

#[test]
fn eigenvectors_satisfy_the_eigen_equation() {
    let w = parse_weight("|z1|^4").unwrap();
    let g = Grid::new(1, 3.0, 0.1).unwrap();
    let op = discretize::pauli(&w, &g, Sign::Plus).unwrap();
    let r = eigensolve::smallest_eigs(&op, 4, 1e-8).unwrap();
    for (lambda, v) in r.eigenvalues.iter().zip(&r.eigenvectors) {
        let av = op.matrix().apply(v);
        let res: f64 = av
            .iter()
            .zip(v)
            .map(|(a, x)| (a - x * lambda).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(res <= 1e-8, "residual {res}");
    }
}

#[test]
fn box_operators_are_quarter_pauli() {
    let w = parse_weight("|z1|^4").unwrap();
    let g = Grid::new(1, 2.0, 0.2).unwrap();
    let quarter = |s| dense_eigenvalues(discretize::pauli(&w, &g, s).unwrap().matrix());
    let b00 = dense_eigenvalues(discretize::box00(&w, &g).unwrap().matrix());
    let b0n = dense_eigenvalues(discretize::box0n(&w, &g).unwrap().matrix());
    for (b, p) in b00.iter().zip(quarter(Sign::Minus)) {
        assert!((b - p / 4.0).abs() < 1e-10);
    }
    for (b, p) in b0n.iter().zip(quarter(Sign::Plus)) {
        assert!((b - p / 4.0).abs() < 1e-10);
    }
}

#[test]
fn identities_converge_at_second_order_on_quartic_weights() {
    let w = parse_weight("|z1|^4").unwrap();
    let g = Grid::new(1, 3.0, 0.1).unwrap();
    for which in [Identity::Box00, Identity::Box0n, Identity::DiracSquare] {
        let r = discretize::identity_residual(&w, &g, which, 3).unwrap();
        assert!(r.orders_within(1.5, 2.5), "{which}: {:?}", r.observed_orders);
    }
}

#[test]
fn identities_converge_in_two_variables() {
    let w = parse_weight("|z1|^2 + |z2|^4").unwrap();
    let g = Grid::new(2, 2.0, 0.2).unwrap();
    for which in [Identity::Box00, Identity::Box0n] {
        let r = discretize::identity_residual(&w, &g, which, 3).unwrap();
        assert!(r.orders_within(1.5, 2.5), "{which}: {:?}", r.observed_orders);
        // The finest level has 79⁴ unknowns, far above the assembly cap.
        assert_eq!(r.h_values.len(), 3);
    }
}

#[test]
fn kernel_counts_distinguish_the_pauli_pair() {
    let w = parse_weight("|z1|^2").unwrap();
    let g = Grid::new(1, 4.0, 0.2).unwrap();
    let opts = SolverOptions::default();
    let minus = near_kernel_count(&discretize::pauli(&w, &g, Sign::Minus).unwrap(), 0.1, 64, &opts).unwrap();
    let plus = near_kernel_count(&discretize::pauli(&w, &g, Sign::Plus).unwrap(), 0.1, 64, &opts).unwrap();
    assert!(minus.count >= 4 && !minus.saturated);
    assert_eq!(plus.count, 0);
    // The P+ gap sits near the first Landau level 4.
    let plus_op = discretize::pauli(&w, &g, Sign::Plus).unwrap();
    assert_eq!(counting_function(&plus_op, 3.0, &opts).unwrap(), 0);
}

#[test]
fn dirac_spectrum_matches_dense_dirac() {
    let w = parse_weight("|z1|^2").unwrap();
    let g = Grid::new(1, 2.0, 0.25).unwrap();
    let r = eigensolve::dirac_spectrum(&w, &g, 4, &SolverOptions::default()).unwrap();
    let dense = dense_eigenvalues(discretize::dirac(&w, &g).unwrap().matrix());
    for s in &r.eigenvalues {
        assert!(dense.iter().any(|e| (e - s).abs() < 1e-7), "{s}");
    }
    let n = r.eigenvalues.len();
    for i in 0..n {
        assert!((r.eigenvalues[i] + r.eigenvalues[n - 1 - i]).abs() < 1e-12);
    }
    assert!(r.residuals.iter().all(|&x| x < 1e-5));
}

#[test]
fn matrix_market_export_round_trips() {
    let w = parse_weight("|z1|^2").unwrap();
    let g = Grid::new(1, 1.0, 0.25).unwrap();
    let op = discretize::pauli(&w, &g, Sign::Plus).unwrap();
    let mut buf = Vec::new();
    op.write_matrix_market(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('%'));
    let header: Vec<usize> = lines.next().unwrap().split_whitespace().map(|t| t.parse().unwrap()).collect();
    assert_eq!(header[..2], [op.dim(), op.dim()]);
    let mut count = 0;
    for line in lines {
        let f: Vec<&str> = line.split_whitespace().collect();
        let (i, j): (usize, usize) = (f[0].parse().unwrap(), f[1].parse().unwrap());
        let v = Complex64::new(f[2].parse().unwrap(), f[3].parse().unwrap());
        assert!(i >= j);
        assert_eq!(op.matrix().get(i - 1, j - 1), v);
        count += 1;
    }
    assert_eq!(count, header[2]);
    let lower = op.matrix().entries().filter(|(i, j, _)| i >= j).count();
    assert_eq!(count, lower);
}

#[test]
fn polynomial_density_is_doubling() {
    // Δ|z|⁴ = 16|z|², a polynomial density of the admissible kind.
    let w = parse_weight("|z1|^4").unwrap();
    let density = |z: Complex64| w.laplacian(&[z.re, z.im]).unwrap();
    let rep = measure::doubling_report(density, &measure::default_centers(), &measure::DEFAULT_RADII, DoublingOptions::default()).unwrap();
    assert!(rep.passes());
    assert!(rep.c_est <= 16.0 + 1e-9 && rep.c_est > 4.0);
    let at_origin = rep
        .samples
        .iter()
        .find(|s| s.center == [0.0, 0.0])
        .unwrap();
    assert!((at_origin.ratio.unwrap() - 16.0).abs() < 1e-9);
}

#[test]
fn criteria_for_shipped_weights() {
    let opts = SeriesOptions::default();
    let bidisk = criteria::classify(&parse_weight("|z1|^2 + |z2|^2").unwrap(), &opts).unwrap();
    assert_eq!(bidisk.classification.pminus, NO_COMPACT_RESOLVENT);
    assert_eq!(bidisk.classification.pplus, NO_COMPACT_RESOLVENT);

    let quartic = criteria::classify(&parse_weight("|z1|^4 + |z2|^4").unwrap(), &opts).unwrap();
    assert_eq!(quartic.classification.pplus, COMPACT_INVERSE);
    assert!(quartic.classification.theorems.iter().any(|t| t == "2.2"));

    let degenerate = criteria::classify(&parse_weight_in("x1^2", 2).unwrap(), &opts).unwrap();
    assert!(!degenerate.verdicts["1.2"].holds());
    assert!(degenerate.verdicts["1.2"].witness.is_some());

    let json = serde_json::to_value(&quartic).unwrap();
    for key in ["1.2", "1.6", "2.1", "1.5(v)"] {
        assert!(json["verdicts"].get(key).is_some(), "missing {key}");
    }
}
