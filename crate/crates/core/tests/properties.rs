use num_complex::Complex64;
use pauli_core::criteria::{self, Quantity, SeriesOptions};
use pauli_core::discretize::{self, Sign};
use pauli_core::eigensolve::{counting_function, dense_eigenvalues, SolverOptions};
use pauli_core::grid::Grid;
use pauli_core::measure::disk_mass;
use pauli_core::poly::Polynomial;
use pauli_core::sparse::{CsrMatrix, SparseHermitianOperator};
use pauli_core::{parse_weight_in, WeightSpec};
use proptest::prelude::*;

/// Non-negative combinations of even powers of linear forms. These are
/// convex, hence plurisubharmonic.
fn convex_weight(n: usize) -> impl Strategy<Value = WeightSpec> {
    let vars = 2 * n;
    let term = (
        prop::collection::vec(-4i32..=4, vars),
        1u32..=2,
        1i32..=8,
    );
    prop::collection::vec(term, 1..=3).prop_filter_map("zero weight", move |terms| {
        let mut p = Polynomial::zero(vars);
        for (a, k, c) in terms {
            let mut lin = Polynomial::zero(vars);
            for (i, &ai) in a.iter().enumerate() {
                lin = lin.add(&Polynomial::variable(vars, i).scale(ai as f64 / 4.0));
            }
            p = p.add(&lin.pow(2 * k).scale(c as f64 / 4.0));
        }
        (!p.is_zero()).then(|| WeightSpec::from_polynomial(n, p).unwrap())
    })
}

fn point(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0..3.0f64, 2 * n)
}

fn small_grid(n: usize) -> Grid {
    match n {
        1 => Grid::new(1, 2.0, 0.25).unwrap(),
        _ => Grid::new(2, 1.0, 0.5).unwrap(),
    }
}

fn random_matrix(dim: usize) -> impl Strategy<Value = CsrMatrix> {
    prop::collection::vec((0..dim, 0..dim, -2.0..2.0f64, -2.0..2.0f64), 0..4 * dim).prop_map(
        move |t| {
            let t: Vec<_> = t.into_iter().map(|(i, j, a, b)| (i, j, Complex64::new(a, b))).collect();
            CsrMatrix::from_triplets(dim, dim, &t)
        },
    )
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn levi_trace_is_quarter_laplacian(w in (1usize..=2).prop_flat_map(convex_weight), seed in point(2)) {
        let p = &seed[..2 * w.n()];
        let m = w.levi_matrix(p).unwrap();
        let lap = w.laplacian(p).unwrap();
        prop_assert!(close(m.trace(), lap / 4.0, 1e-12));
        prop_assert!(close(w.electric_potential(p).unwrap(), lap / 2.0, 1e-12));
        prop_assert!(close(w.trace_polynomial().eval(p), lap / 4.0, 1e-12));
        for j in 0..w.n() {
            for k in 0..w.n() {
                prop_assert_eq!(m.get(j, k), m.get(k, j).conj());
            }
        }
    }

    #[test]
    fn convex_weights_have_semidefinite_levi(w in convex_weight(2), p in point(2)) {
        let scale = w.levi_matrix(&p).unwrap().entries().iter().map(|z| z.norm()).fold(1.0, f64::max);
        prop_assert!(w.levi_spectrum(&p).unwrap()[0] >= -1e-10 * scale);
    }

    #[test]
    fn display_round_trips(w in (1usize..=2).prop_flat_map(convex_weight)) {
        let again = parse_weight_in(&w.to_string(), w.n()).unwrap();
        prop_assert_eq!(again.polynomial(), w.polynomial());
        prop_assert_eq!(again.is_decoupled(), w.is_decoupled());
    }

    #[test]
    fn decoupled_levi_spectrum_is_part_spectra(a in convex_weight(1), b in convex_weight(1), p in point(2)) {
        let w = parse_weight_in(&format!("{a} + ({})", b.to_string().replace("x1", "x2").replace("y1", "y2")), 2).unwrap();
        prop_assert!(w.is_decoupled());
        let mut expected = [a.laplacian(&p[..2]).unwrap() / 4.0, b.laplacian(&p[2..]).unwrap() / 4.0];
        expected.sort_by(f64::total_cmp);
        let got = w.levi_spectrum(&p).unwrap();
        for (g, e) in got.iter().zip(expected) {
            prop_assert!(close(*g, e, 1e-10));
        }
    }

    #[test]
    fn assembled_operators_are_exactly_hermitian(w in (1usize..=2).prop_flat_map(convex_weight)) {
        let g = small_grid(w.n());
        for op in [
            discretize::pauli(&w, &g, Sign::Plus).unwrap(),
            discretize::pauli(&w, &g, Sign::Minus).unwrap(),
            discretize::box00(&w, &g).unwrap(),
            discretize::box0n(&w, &g).unwrap(),
        ] {
            prop_assert_eq!(op.matrix().hermitian_defect(), 0.0);
        }
        if w.n() == 1 {
            prop_assert_eq!(discretize::dirac(&w, &g).unwrap().matrix().hermitian_defect(), 0.0);
        }
    }

    #[test]
    fn gauge_shift_changes_no_operator(w in (1usize..=2).prop_flat_map(convex_weight), c in -50.0..50.0f64) {
        let g = small_grid(w.n());
        let shifted = w.shifted(c);
        for sign in [Sign::Plus, Sign::Minus] {
            let (a, b) = (discretize::pauli(&w, &g, sign).unwrap(), discretize::pauli(&shifted, &g, sign).unwrap());
            prop_assert_eq!(a.matrix(), b.matrix());
        }
        let (a, b) = (discretize::box0n(&w, &g).unwrap(), discretize::box0n(&shifted, &g).unwrap());
        prop_assert_eq!(a.matrix(), b.matrix());
    }

    #[test]
    fn pauli_difference_is_twice_the_potential(w in (1usize..=2).prop_flat_map(convex_weight)) {
        let g = small_grid(w.n());
        let plus = discretize::pauli(&w, &g, Sign::Plus).unwrap();
        let d = plus.matrix().sub(discretize::pauli(&w, &g, Sign::Minus).unwrap().matrix());
        let scale = plus.matrix().max_abs();
        for (i, j, v) in d.entries() {
            let expected = if i == j { 2.0 * w.electric_potential(&g.point(i)).unwrap() } else { 0.0 };
            prop_assert!((v - Complex64::new(expected, 0.0)).norm() <= 1e-12 * scale, "entry ({i}, {j})");
        }
    }

    #[test]
    fn pauli_plus_is_semidefinite(w in convex_weight(1)) {
        let g = small_grid(1);
        let op = discretize::pauli(&w, &g, Sign::Plus).unwrap();
        let lowest = dense_eigenvalues(op.matrix())[0];
        prop_assert!(lowest >= -1e-8 * op.matrix().norm1(), "lowest {lowest}");
    }

    #[test]
    fn dirac_square_is_block_diagonal(w in convex_weight(1)) {
        let g = small_grid(1);
        let d = discretize::dirac(&w, &g).unwrap();
        let sq = d.matrix().mul(d.matrix());
        let dim = g.dim();
        prop_assert_eq!(sq.block(0, dim, dim, dim).max_abs(), 0.0);
        prop_assert_eq!(sq.block(dim, dim, 0, dim).max_abs(), 0.0);
    }

    #[test]
    fn scaling_scales_pauli_in_t(w in convex_weight(1), t in 0.25..4.0f64) {
        let g = small_grid(1);
        let base = discretize::pauli(&w, &g, Sign::Plus).unwrap();
        let scaled = discretize::pauli(&w.scaled(t), &g, Sign::Plus).unwrap();
        let free = discretize::negative_laplacian(&g);
        // Entries are c₀ + t·c₁ + t²·c₂ with c₂ the |A|² diagonal.
        for (i, j, v) in scaled.matrix().entries() {
            let a2: f64 = w.magnetic_potential(&g.point(i)).unwrap().iter().map(|a| a * a).sum();
            let f = free.matrix().get(i, j);
            let b = base.matrix().get(i, j);
            let quad = if i == j { a2 } else { 0.0 };
            let expected = f + (b - f - quad) * t + quad * t * t;
            prop_assert!((v - expected).norm() <= 1e-10 * (1.0 + expected.norm()));
        }
    }

    #[test]
    fn counting_is_monotone_and_matches_dense(w in convex_weight(1), a in 0.0..20.0f64, b in 0.0..20.0f64) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let g = small_grid(1);
        let op = discretize::pauli(&w, &g, Sign::Minus).unwrap();
        let opts = SolverOptions::default();
        let c_lo = counting_function(&op, lo, &opts).unwrap();
        let c_hi = counting_function(&op, hi, &opts).unwrap();
        prop_assert!(c_lo <= c_hi);
        let dense = dense_eigenvalues(op.matrix());
        prop_assert_eq!(c_hi, dense.iter().filter(|&&e| e < hi).count());
    }

    #[test]
    fn symmetrized_is_hermitian_and_adjoint_involutive(m in random_matrix(12)) {
        prop_assert_eq!(&m.adjoint().adjoint(), &m);
        let h = SparseHermitianOperator::symmetrized(m, None);
        prop_assert_eq!(h.matrix().hermitian_defect(), 0.0);
    }

    #[test]
    fn product_matches_dense(a in random_matrix(8), b in random_matrix(8)) {
        let sparse = a.mul(&b).to_dense();
        let dense = a.to_dense() * b.to_dense();
        prop_assert!((sparse - dense).norm() <= 1e-12 * (1.0 + a.to_dense().norm() * b.to_dense().norm()));
    }

    #[test]
    fn grid_indexing_round_trips(n in 1usize..=2, k_frac in 0.0..1.0f64) {
        let g = small_grid(n);
        let k = ((g.dim() as f64 * k_frac) as usize).min(g.dim() - 1);
        let idx = g.multi_index(k);
        let flat = idx.iter().enumerate().map(|(a, &i)| i * g.stride(a)).sum::<usize>();
        prop_assert_eq!(flat, k);
        for axis in 0..g.axes() {
            if let Some(p) = g.neighbor(k, axis, true) {
                prop_assert_eq!(g.neighbor(p, axis, false), Some(k));
                prop_assert!(close(g.point(p)[axis] - g.point(k)[axis], g.h(), 1e-12));
            }
        }
    }

    #[test]
    fn lebesgue_mass_is_translation_invariant(x in -20.0..20.0f64, y in -20.0..20.0f64, r in 0.1..10.0f64) {
        let m = disk_mass(|_| 1.0, Complex64::new(x, y), r, 16).unwrap();
        prop_assert!(close(m, std::f64::consts::PI * r * r, 1e-10));
    }

    #[test]
    fn disk_mass_is_additive_and_monotone(w in convex_weight(1), x in -5.0..5.0f64, y in -5.0..5.0f64, r in 0.1..4.0f64) {
        let c = Complex64::new(x, y);
        let lap = |z: Complex64| w.laplacian(&[z.re, z.im]).unwrap().max(0.0);
        let one = |_: Complex64| 1.0;
        let both = disk_mass(|z| lap(z) + one(z), c, r, 16).unwrap();
        let sum = disk_mass(lap, c, r, 16).unwrap() + disk_mass(one, c, r, 16).unwrap();
        prop_assert!(close(both, sum, 1e-10));
        prop_assert!(disk_mass(lap, c, r, 16).unwrap() <= disk_mass(lap, c, 1.5 * r, 16).unwrap());
    }

    #[test]
    fn ball_integral_is_additive(a in convex_weight(2), b in convex_weight(2), c in point(2)) {
        let sum = WeightSpec::from_polynomial(2, a.polynomial().add(b.polynomial())).unwrap();
        let lhs = criteria::ball_integral(&sum, &c, 10).unwrap();
        let rhs = criteria::ball_integral(&a, &c, 10).unwrap() + criteria::ball_integral(&b, &c, 10).unwrap();
        prop_assert!(close(lhs, rhs, 1e-10));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn mu_series_scales_with_t(w in convex_weight(2), t in 0.25..4.0f64) {
        let opts = SeriesOptions { radii: vec![1.0, 4.0], directions: Some(32), order: 8 };
        let base = criteria::radial_series(&w, Quantity::Mu, &opts).unwrap().values();
        let scaled = criteria::radial_series(&w.scaled(t), Quantity::Mu, &opts).unwrap().values();
        for (b, s) in base.iter().zip(&scaled) {
            prop_assert!((s - t * b).abs() <= 1e-9 * (1.0 + t * b.abs()));
        }
    }
}
