use berkpot::plane::{
    classical_green, fekete_points, lagrange_log_abs, leja_extremal, vandermonde_log, FeketeMode, PlaneCompact,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn configuration() -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), 2..9)
        .prop_map(|v| v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())
        .prop_filter("distinct points", |v: &Vec<Complex64>| {
            v.iter().enumerate().all(|(i, a)| v[i + 1..].iter().all(|b| (a - b).norm() > 1e-3))
        })
}

proptest! {
    #[test]
    fn vandermonde_is_invariant_under_rigid_motions(
        pts in configuration(),
        theta in 0.0..std::f64::consts::TAU,
        shift in (-5.0..5.0f64, -5.0..5.0f64),
    ) {
        let motion = Complex64::from_polar(1.0, theta);
        let shift = Complex64::new(shift.0, shift.1);
        let moved: Vec<Complex64> = pts.iter().map(|z| motion * z + shift).collect();
        let (a, b) = (vandermonde_log(&pts).unwrap(), vandermonde_log(&moved).unwrap());
        prop_assert!((a - b).abs() <= 1e-12, "{} vs {}", a, b);
    }

    #[test]
    fn cardinal_function_is_one_at_its_node(pts in configuration()) {
        prop_assert_eq!(lagrange_log_abs(&pts, pts[0]).unwrap(), 0.0);
    }

    #[test]
    fn reordering_later_nodes_barely_moves_the_value(
        pts in configuration(),
        z in (3.5..6.0f64, -2.0..2.0f64),
    ) {
        let z = Complex64::new(z.0, z.1);
        let n = pts.len() - 1;
        let mut rev = pts.clone();
        rev[1..].reverse();
        let (a, b) = (lagrange_log_abs(&pts, z).unwrap() / n as f64, lagrange_log_abs(&rev, z).unwrap() / n as f64);
        let m = pts.len() as f64;
        prop_assert!((a - b).abs() <= 2.0 * m.ln() / n as f64);
        prop_assert!((a - b).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn exhaustive_dominates_greedy(m in 8usize..16, n in 1usize..5, which in 0usize..3) {
        let e = match which {
            0 => PlaneCompact::unit_circle(m),
            1 => PlaneCompact::interval(-1.0, 1.0, m),
            _ => PlaneCompact::disk(Complex64::new(0.5, -1.0), 2.0, m),
        };
        prop_assume!(n < m);
        let ex = fekete_points(&e, n, FeketeMode::Exhaustive).unwrap();
        let gr = fekete_points(&e, n, FeketeMode::Greedy).unwrap();
        prop_assert!(ex.log_vandermonde >= gr.log_vandermonde - 1e-12);
    }
}

#[test]
fn circle_error_within_log_rate() {
    let e = PlaneCompact::unit_circle(256);
    for x in [1.5, 2.0, 3.0] {
        let z = Complex64::new(0.0, x);
        let g = classical_green(&e, z).unwrap();
        for n in [16usize, 32, 64] {
            let l = leja_extremal(&e, z, n, FeketeMode::Greedy).unwrap();
            let bound = 3.0 * (n as f64).ln() / n as f64;
            assert!((l - g).abs() <= bound, "z={z} n={n}: {} > {bound}", (l - g).abs());
        }
    }
}
