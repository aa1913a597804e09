use num_complex::Complex64;
use proptest::prelude::*;

use varheat_core::coefficient::DEFAULT_TAU_TOL;
use varheat_core::oracles::{crank_nicolson, dn_bruteforce, dn_via_det, InterfacePartition};
use varheat_core::simplex::Simplex;
use varheat_core::transform::{psi_kernel, Contour, ContourShape};
use varheat_core::{Conductivity, SeriesSpec, TravelTimeMap};

fn catalog() -> Vec<(Conductivity, TravelTimeMap)> {
    [Conductivity::parabolic24(), Conductivity::rational9000()]
        .into_iter()
        .map(|c| {
            let tt = TravelTimeMap::build(&c, DEFAULT_TAU_TOL).unwrap();
            (c, tt)
        })
        .collect()
}

fn interval() -> impl Strategy<Value = (f64, f64)> {
    (0.0..=1.0f64, 0.0..=1.0f64).prop_map(|(a, b)| if a <= b { (a, b) } else { (b, a) })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn series_is_odd_in_k(which in 0usize..2, (a, b) in interval(), re in -6.0..6.0f64, im in -2.0..2.0f64) {
        let cat = catalog();
        let (c, tt) = &cat[which];
        let sx = Simplex::new(c, tt, SeriesSpec::new(2).unwrap().with_quad_order(16).unwrap());
        let k = Complex64::new(re, im);
        let plus = sx.sum(a, b, k).unwrap();
        let minus = sx.sum(a, b, -k).unwrap();
        prop_assert!((plus + minus).norm() < 1e-12 * plus.norm().max(1.0));
    }

    #[test]
    fn series_is_real_for_real_k(which in 0usize..2, (a, b) in interval(), k in -8.0..8.0f64) {
        let cat = catalog();
        let (c, tt) = &cat[which];
        let sx = Simplex::new(c, tt, SeriesSpec::new(2).unwrap().with_quad_order(16).unwrap());
        let v = sx.sum(a, b, Complex64::new(k, 0.0)).unwrap();
        prop_assert!(v.im.abs() < 1e-12);
        prop_assert!((v.re - sx.sum_real(a, b, k).unwrap()).abs() < 1e-13);
    }

    #[test]
    fn terms_respect_factorial_bound(which in 0usize..2, (a, b) in interval(), re in -8.0..8.0f64, im in -3.0..3.0f64, n in 0usize..4) {
        let cat = catalog();
        let (c, tt) = &cat[which];
        let sx = Simplex::new(c, tt, SeriesSpec::new(3).unwrap().with_quad_order(12).unwrap());
        let k = Complex64::new(re, im);
        let v = sx.term(n, a, b, k).unwrap().norm();
        prop_assert!(v <= sx.term_bound(n, a, b, k) * (1.0 + 1e-12) + 1e-15);
    }

    #[test]
    fn kernel_is_symmetric(x in 0.0..=1.0f64, y in 0.0..=1.0f64, re in 0.1..6.0f64, im in 0.0..2.0f64) {
        let cat = catalog();
        let (c, tt) = &cat[0];
        let spec = SeriesSpec::new(2).unwrap().with_quad_order(12).unwrap();
        let k = Complex64::new(re, im);
        prop_assert_eq!(psi_kernel(c, tt, k, x, y, &spec).unwrap(), psi_kernel(c, tt, k, y, x, &spec).unwrap());
    }

    #[test]
    fn travel_time_is_increasing(which in 0usize..2, x in 0.0..1.0f64, dx in 1e-6..0.5f64) {
        let cat = catalog();
        let (_, tt) = &cat[which];
        prop_assert!(tt.tau(x) < tt.tau((x + dx).min(1.0)));
    }

    #[test]
    fn regularized_terms_match_plain(n in 0usize..3, (a, b) in interval(), r in 0.5..6.0f64, arg in 0.0..std::f64::consts::PI) {
        let cat = catalog();
        let (c, tt) = &cat[0];
        let sx = Simplex::new(c, tt, SeriesSpec::new(2).unwrap().with_quad_order(12).unwrap());
        let k = Complex64::from_polar(r, arg);
        let shift = tt.total();
        let reg = sx.regularized_term(n, a, b, k, shift).unwrap();
        let plain = sx.term(n, a, b, k).unwrap() * (Complex64::i() * k * shift).exp();
        prop_assert!((reg - plain).norm() < 1e-11 * plain.norm().max(1e-3));
    }

    #[test]
    fn contour_nodes_are_mirror_symmetric(r in 0.1..2.0f64, delta in 0.05..0.75f64, extra in 1.0..20.0f64, density in 5usize..60, omega in any::<bool>()) {
        let contour = Contour {
            shape: if omega { ContourShape::BoundaryOmega } else { ContourShape::AngledRays },
            r,
            delta,
            kmax: Some(r + extra),
            nodes_per_unit: density,
        };
        prop_assert!(contour.validate().is_ok());
        let nodes = contour.nodes(r + extra);
        let n = nodes.len();
        for i in 0..n / 2 {
            let (a, b) = (nodes[i], nodes[n - 1 - i]);
            prop_assert!((a.k + b.k.conj()).norm() < 1e-14 * a.k.norm().max(1.0));
            prop_assert!((a.weight - b.weight.conj()).norm() < 1e-14);
        }
    }

    #[test]
    fn determinant_identity_on_random_partitions(
        cuts in proptest::collection::vec(0.01..0.99f64, 0..9),
        sigmas in proptest::collection::vec(0.2..2.0f64, 10),
        re in -5.0..5.0f64,
        im in -2.0..2.0f64,
    ) {
        let mut nodes = vec![0.0];
        let mut inner = cuts.clone();
        inner.sort_by(|a, b| a.partial_cmp(b).unwrap());
        inner.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        nodes.extend(inner);
        nodes.push(1.0);
        let cells = nodes.len() - 1;
        let part = InterfacePartition::new(nodes, sigmas[..cells].to_vec()).unwrap();
        let lf = part.lambda_factors();
        prop_assert!(lf.ratio.iter().all(|r| r.abs() < 1.0));
        let k = Complex64::new(re, im);
        let brute = dn_bruteforce(&part, k).unwrap();
        prop_assert!((dn_via_det(&part, k) - brute).norm() < 1e-10 * brute.norm().max(1.0));
    }

    #[test]
    fn crank_nicolson_keeps_nonnegative_data_bounded(amp in 0.1..3.0f64, p in 1.0..3.0f64, t in 0.01..1.0f64) {
        let c = Conductivity::parabolic24();
        let q0 = |x: f64| amp * (x * (1.0 - x)).powf(p);
        let peak = amp * 0.25f64.powf(p);
        let sol = crank_nicolson(&c, q0, t, 64, 64).unwrap();
        prop_assert!(sol.range.0 >= -1e-12 * peak && sol.range.1 <= peak * (1.0 + 1e-12));
    }
}
