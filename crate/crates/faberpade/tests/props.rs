//! Property-based checks of the algebraic building blocks: conformal map
//! round trips, polynomial arithmetic, rate fitting on synthetic data, and
//! the expression printer/parser pair.

use faberpade::analysis::fit_geometric_rate;
use faberpade::conformal::Domain;
use faberpade::funcsys::parse_function_expression;
use faberpade::poly::ComplexPoly;
use faberpade::Complex64;
use proptest::prelude::*;

fn unit_circle_point(angle: f64) -> Complex64 {
    Complex64::new(angle.cos(), angle.sin())
}

/// Exterior points `w` with `1.05 ≤ |w| ≤ 4`.
fn exterior_w() -> impl Strategy<Value = Complex64> {
    (1.05f64..4.0, 0.0f64..std::f64::consts::TAU)
        .prop_map(|(r, t)| r * unit_circle_point(t))
}

fn bounded_complex(limit: f64) -> impl Strategy<Value = Complex64> {
    (-limit..limit, -limit..limit).prop_map(|(re, im)| Complex64::new(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        failure_persistence: None,
        .. ProptestConfig::default()
    })]

    #[test]
    fn disk_exterior_map_round_trips(
        offset in -0.8f64..0.8,
        angle in 0.0f64..std::f64::consts::TAU,
        radius in 0.3f64..3.0,
        w in exterior_w(),
    ) {
        // The origin must lie in the compact set: keep |center| < radius.
        let center = radius * offset * unit_circle_point(angle);
        let domain = Domain::disk(center, radius).unwrap();
        let z = domain.psi(w).unwrap();
        let back = domain.phi(z).unwrap();
        prop_assert!((back - w).norm() <= 1e-9 * w.norm(), "w={w} back={back}");
    }

    #[test]
    fn ellipse_exterior_map_round_trips(
        offset in -0.8f64..0.8,
        angle in 0.0f64..std::f64::consts::TAU,
        semi_major in 1.0f64..3.0,
        ratio in 0.15f64..0.95,
        w in exterior_w(),
    ) {
        let semi_minor = semi_major * ratio;
        // Keep the origin strictly inside: |center| < semi_minor suffices.
        let center = semi_minor * offset * unit_circle_point(angle);
        let domain = Domain::ellipse(center, semi_major, semi_minor).unwrap();
        let z = domain.psi(w).unwrap();
        let back = domain.phi(z).unwrap();
        prop_assert!((back - w).norm() <= 1e-8 * w.norm(), "w={w} back={back}");
    }

    #[test]
    fn segment_exterior_map_round_trips(
        half_re in 0.3f64..2.0,
        half_im in -1.0f64..1.0,
        w in exterior_w(),
    ) {
        // Endpoints symmetric about the origin keep it inside the segment.
        let half = Complex64::new(half_re, half_im);
        let domain = Domain::segment(-half, half).unwrap();
        let z = domain.psi(w).unwrap();
        let back = domain.phi(z).unwrap();
        prop_assert!((back - w).norm() <= 1e-8 * w.norm(), "w={w} back={back}");
    }

    #[test]
    fn polynomial_product_evaluates_pointwise(
        p_coeffs in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..7),
        q_coeffs in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..7),
        z in bounded_complex(1.5),
    ) {
        let p = ComplexPoly::new(p_coeffs.iter().map(|&(a, b)| Complex64::new(a, b)).collect());
        let q = ComplexPoly::new(q_coeffs.iter().map(|&(a, b)| Complex64::new(a, b)).collect());
        let product = p.mul(&q);
        let direct = p.eval(z) * q.eval(z);
        let via_product = product.eval(z);
        let scale: f64 = p_coeffs.len() as f64 * q_coeffs.len() as f64
            * 4.0 * 1.5f64.powi((p_coeffs.len() + q_coeffs.len()) as i32);
        prop_assert!((direct - via_product).norm() <= 1e-12 * scale.max(1.0));
    }

    #[test]
    fn subtraction_evaluates_pointwise(
        p_coeffs in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..7),
        q_coeffs in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..7),
        z in bounded_complex(1.5),
    ) {
        let p = ComplexPoly::new(p_coeffs.iter().map(|&(a, b)| Complex64::new(a, b)).collect());
        let q = ComplexPoly::new(q_coeffs.iter().map(|&(a, b)| Complex64::new(a, b)).collect());
        let diff = p.sub(&q).eval(z);
        let direct = p.eval(z) - q.eval(z);
        prop_assert!((diff - direct).norm() <= 1e-10);
    }

    #[test]
    fn construction_from_roots_vanishes_at_the_roots(
        roots in prop::collection::vec(bounded_complex(2.0), 1..6),
    ) {
        let p = ComplexPoly::from_roots(&roots);
        for &r in &roots {
            let bound: f64 = (0..=roots.len())
                .map(|k| p.coeff(k).norm() * r.norm().max(1.0).powi(k as i32))
                .sum();
            prop_assert!(p.eval(r).norm() <= 1e-12 * bound.max(1.0));
        }
    }

    #[test]
    fn exact_geometric_data_recovers_its_rate(
        theta in 0.15f64..0.9,
        scale in 0.1f64..10.0,
    ) {
        let ns: Vec<usize> = (1..=40).collect();
        let errors: Vec<f64> = ns.iter().map(|&n| scale * theta.powi(n as i32)).collect();
        let fit = fit_geometric_rate(&ns, &errors).unwrap();
        prop_assert!(
            (fit.rate - theta).abs() <= 1e-6 * theta,
            "theta={theta} fitted={}",
            fit.rate
        );
    }

    #[test]
    fn expression_display_round_trips(
        coeff_re in -3i32..4,
        coeff_im in -3i32..4,
        loc_re in 2i32..6,
        loc_im in -2i32..3,
        order in 1usize..3,
        tail_c0 in -2i32..3,
    ) {
        prop_assume!(coeff_re != 0 || coeff_im != 0);
        let expr = format!(
            "({coeff_re}{im:+}i)/(z-({loc_re}{lim:+}i))^{order} + poly({tail_c0})",
            im = coeff_im,
            lim = loc_im,
        );
        let f = parse_function_expression(&expr).unwrap();
        let printed = f.to_string();
        let g = parse_function_expression(&printed)
            .unwrap_or_else(|e| panic!("reparse of '{printed}' failed: {e}"));
        for point in [
            Complex64::new(0.3, 0.7),
            Complex64::new(-0.9, 0.1),
            Complex64::new(0.0, -0.5),
        ] {
            let a = f.evaluate(point).unwrap();
            let b = g.evaluate(point).unwrap();
            prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0), "at {point}: {a} vs {b}");
        }
    }
}
