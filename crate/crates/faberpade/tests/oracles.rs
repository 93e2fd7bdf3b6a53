//! Cross-checks of the core numerics against independent computation routes:
//! the defining property of the basis polynomials on image circles, the
//! interpolation conditions re-verified on a different contour, an exact
//! leading-coefficient identity, and invariances of the denominator.

use faberpade::approximant::{simultaneous_pade_faber, QuadratureSettings};
use faberpade::analysis::poly_roots;
use faberpade::conformal::Domain;
use faberpade::faber::{faber_coefficients, faber_polynomials};
use faberpade::funcsys::{parse_function_expression, FunctionSystem, MultiIndex};
use faberpade::poly::ComplexPoly;
use faberpade::Complex64;

/// Direct (slow) Fourier bin of sampled values: `(1/N) Σ_j v_j e^{-2πijk/N}`.
fn fourier_bin(values: &[Complex64], k: usize) -> Complex64 {
    let n = values.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, v) in values.iter().enumerate() {
        let angle = -2.0 * std::f64::consts::PI * (j * k) as f64 / n as f64;
        acc += v * Complex64::new(angle.cos(), angle.sin());
    }
    acc / n as f64
}

/// The degree-`n` basis polynomial composed with the exterior map must be
/// `w^n` plus strictly negative powers: on the circle `|w| = R` its Fourier
/// coefficients for the powers `0..n` vanish and the power `n` carries
/// weight `R^n` exactly.
fn check_polynomial_property(domain: &Domain, n: usize) {
    let basis = faber_polynomials(domain, n);
    let big_r = 3.0f64;
    let nodes = 512;
    let values: Vec<Complex64> = (0..nodes)
        .map(|j| {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / nodes as f64;
            let w = big_r * Complex64::new(theta.cos(), theta.sin());
            let z = domain.psi(w).expect("|w| > 1");
            basis.eval_all(z)[n]
        })
        .collect();
    let scale = big_r.powi(n as i32);
    for k in 0..n {
        let residue = fourier_bin(&values, k).norm() / scale;
        assert!(
            residue <= 1e-10,
            "degree {n}: spurious power {k} with relative weight {residue:.3e}"
        );
    }
    let top = fourier_bin(&values, n) / scale;
    assert!(
        (top - Complex64::new(1.0, 0.0)).norm() <= 1e-10,
        "degree {n}: leading weight {top}"
    );
}

#[test]
fn basis_polynomials_have_pure_leading_power_on_a_disk() {
    let domain = Domain::disk(Complex64::new(0.5, 0.2), 1.5).unwrap();
    for n in [1, 4, 9] {
        check_polynomial_property(&domain, n);
    }
}

#[test]
fn basis_polynomials_have_pure_leading_power_on_an_ellipse() {
    let domain = Domain::ellipse(Complex64::new(0.0, 0.0), 2.0, 1.0).unwrap();
    for n in [2, 7, 11] {
        check_polynomial_property(&domain, n);
    }
}

#[test]
fn basis_polynomials_have_pure_leading_power_on_a_segment() {
    let domain = Domain::segment(Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)).unwrap();
    for n in [1, 6, 12] {
        check_polynomial_property(&domain, n);
    }
}

#[test]
fn basis_polynomials_have_pure_leading_power_on_a_rotated_segment() {
    let domain = Domain::segment(Complex64::new(-1.0, -1.0), Complex64::new(2.0, 2.0)).unwrap();
    for n in [3, 8] {
        check_polynomial_property(&domain, n);
    }
}

/// Re-verifies the defining conditions of a solved approximant by
/// integrating `z^k·Q·F_α` on a contour the solver never saw (different
/// level, different node count): the degree-`n` coefficient must vanish for
/// every `k < m_α`.
#[test]
fn interpolation_conditions_hold_on_an_independent_contour() {
    let domain = Domain::disk(Complex64::new(0.0, 0.0), 1.0).unwrap();
    let system = FunctionSystem::from_functions(vec![
        parse_function_expression("1/(z-2) + log(z-4)").unwrap(),
        parse_function_expression("1/(z-3)").unwrap(),
    ])
    .unwrap();
    let m = MultiIndex::new(vec![1, 1]).unwrap();
    let n = 8;
    let quad = QuadratureSettings::new(domain.clone()).with_rho(1.8);
    let result = simultaneous_pade_faber(&system, &m, n, &quad).unwrap();
    assert!(result.unique);

    let q = result.denominator.clone();
    for alpha in 0..system.len() {
        let f = system.function(alpha).clone();
        for k in 0..m.component(alpha) {
            let g = |z: Complex64| z.powu(k as u32) * q.eval(z) * f.evaluate(z).unwrap();
            // Contour level 1.5 and 2048 nodes differ from the solver's 1.8
            // and its default node count.
            let coeffs = faber_coefficients(&domain, g, n + 1, 1.5, Some(2048)).unwrap();
            let scale = (0..=n)
                .map(|l| coeffs.value(l).norm())
                .fold(0.0f64, f64::max);
            let residue = coeffs.value(n).norm();
            assert!(
                residue <= 1e-8 * scale,
                "component {alpha}, shift {k}: {residue:.3e} vs scale {scale:.3e}"
            );
        }
    }
}

/// The degree-`n` coefficient of `z^k Φ_{n-k}` equals `capacity^k`: the
/// monomial factor only contributes through the leading term.
#[test]
fn monomial_shift_scales_the_leading_coefficient_by_capacity_powers() {
    let domain = Domain::ellipse(Complex64::new(0.3, 0.1), 2.0, 1.0).unwrap();
    let basis = faber_polynomials(&domain, 12);
    let cap = domain.capacity();
    for (n, k) in [(5usize, 2usize), (8, 3), (12, 5)] {
        let p = basis.poly(n - k).mul_monomial(k);
        let coeffs =
            faber_coefficients(&domain, |z| p.eval(z), n + 1, 1.4, None).unwrap();
        let expected = cap.powi(k as i32);
        let got = coeffs.value(n);
        assert!(
            (got - Complex64::new(expected, 0.0)).norm() <= 1e-9 * expected,
            "n={n} k={k}: got {got}, expected {expected}"
        );
    }
}

/// Rescaling each component function must not move the denominator: the
/// interpolation conditions scale row-wise, leaving the solution space
/// unchanged.
#[test]
fn denominator_is_invariant_under_component_rescaling() {
    let domain = Domain::disk(Complex64::new(0.0, 0.0), 1.0).unwrap();
    let quad = QuadratureSettings::new(domain).with_rho(1.8);
    let m = MultiIndex::new(vec![1, 1]).unwrap();

    let plain = FunctionSystem::from_functions(vec![
        parse_function_expression("1/(z-2) + log(z-4)").unwrap(),
        parse_function_expression("1/(z-3)").unwrap(),
    ])
    .unwrap();
    let scaled = FunctionSystem::from_functions(vec![
        parse_function_expression("3/(z-2) + 3*log(z-4)").unwrap(),
        parse_function_expression("(0+2i)/(z-3)").unwrap(),
    ])
    .unwrap();

    let a = simultaneous_pade_faber(&plain, &m, 10, &quad).unwrap();
    let b = simultaneous_pade_faber(&scaled, &m, 10, &quad).unwrap();
    let dist: f64 = a
        .denominator_coefficients
        .iter()
        .zip(b.denominator_coefficients.iter())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    assert!(dist <= 1e-10, "denominators differ by {dist:.3e}");
}

/// Translating the domain and the function together translates the
/// denominator roots accordingly.
#[test]
fn translation_moves_the_recovered_pole_with_the_domain() {
    let m = MultiIndex::new(vec![1]).unwrap();

    let centered = Domain::disk(Complex64::new(0.0, 0.0), 1.0).unwrap();
    let shifted = Domain::disk(Complex64::new(1.0, 0.0), 1.0).unwrap();
    let f_centered = FunctionSystem::from_functions(vec![
        parse_function_expression("1/(z-2)").unwrap(),
    ])
    .unwrap();
    let f_shifted = FunctionSystem::from_functions(vec![
        parse_function_expression("1/(z-3)").unwrap(),
    ])
    .unwrap();

    let a = simultaneous_pade_faber(
        &f_centered,
        &m,
        6,
        &QuadratureSettings::new(centered).with_rho(1.5),
    )
    .unwrap();
    let b = simultaneous_pade_faber(
        &f_shifted,
        &m,
        6,
        &QuadratureSettings::new(shifted).with_rho(1.5),
    )
    .unwrap();

    let root_a = poly_roots(&a.denominator).unwrap()[0];
    let root_b = poly_roots(&b.denominator).unwrap()[0];
    assert!((root_a - Complex64::new(2.0, 0.0)).norm() <= 1e-10);
    assert!((root_b - (root_a + Complex64::new(1.0, 0.0))).norm() <= 1e-10);
}

/// The computed polynomial basis matches the explicit closed form on a disk:
/// `Φ_n(z) = ((z - c)/r)^n`.
#[test]
fn disk_basis_matches_the_closed_form() {
    let center = Complex64::new(0.4, -0.3);
    let radius = 1.7;
    let domain = Domain::disk(center, radius).unwrap();
    let basis = faber_polynomials(&domain, 10);
    for n in 0..=10usize {
        let mut expected = ComplexPoly::one();
        let factor = ComplexPoly::new(vec![
            -center / radius,
            Complex64::new(1.0 / radius, 0.0),
        ]);
        for _ in 0..n {
            expected = expected.mul(&factor);
        }
        let diff_scale: f64 = (0..=n)
            .map(|k| (basis.poly(n).coeff(k) - expected.coeff(k)).norm())
            .fold(0.0, f64::max);
        let lead = expected.coeff(n).norm();
        assert!(
            diff_scale <= 1e-12 * lead.max(1.0),
            "degree {n} differs by {diff_scale:.3e}"
        );
    }
}
