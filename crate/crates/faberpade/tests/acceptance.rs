//! Acceptance suite: nine end-to-end criteria, each asserting its numerical
//! bounds and wall-clock budget and printing one verdict line (visible with
//! `cargo test --test acceptance -- --nocapture`).

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use faberpade::analysis::{
    declared_metadata, fit_geometric_rate, poly_roots, run_direct_experiment,
    run_inverse_experiment, sup_error_on_compact, system_poles_rational, DeclaredPole,
};
use faberpade::approximant::{
    incomplete_pade_faber, simultaneous_pade_faber_from_context, QuadratureSettings,
    SolveContext,
};
use faberpade::conformal::Domain;
use faberpade::faber::{faber_coefficients, faber_polynomials, estimate_rho0};
use faberpade::funcsys::{parse_function_expression, FunctionSystem, MultiIndex};
use faberpade::poly::ComplexPoly;
use faberpade::Complex64;

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

struct Criterion {
    name: &'static str,
    start: Instant,
    budget_ms: u128,
}

impl Criterion {
    fn begin(name: &'static str, budget_ms: u128) -> Self {
        Criterion {
            name,
            start: Instant::now(),
            budget_ms,
        }
    }

    fn pass(self) {
        let elapsed = self.start.elapsed().as_millis();
        println!(
            "acceptance {}: pass ({} ms of {} ms budget)",
            self.name, elapsed, self.budget_ms
        );
        assert!(
            elapsed <= self.budget_ms,
            "{} exceeded its budget: {} ms > {} ms",
            self.name,
            elapsed,
            self.budget_ms
        );
    }
}

fn unit_disk() -> Domain {
    Domain::disk(Complex64::new(0.0, 0.0), 1.0).unwrap()
}

fn system_of(exprs: &[&str]) -> FunctionSystem {
    FunctionSystem::from_functions(
        exprs
            .iter()
            .map(|e| parse_function_expression(e).unwrap())
            .collect(),
    )
    .unwrap()
}

fn coefficient_distance(coeffs: &[Complex64], p: &ComplexPoly) -> f64 {
    let len = coeffs.len().max(p.degree().map_or(0, |d| d + 1));
    (0..len)
        .map(|j| {
            let a = coeffs.get(j).copied().unwrap_or(Complex64::new(0.0, 0.0));
            (a - p.coeff(j)).norm_sqr()
        })
        .sum::<f64>()
        .sqrt()
}

// ---------------------------------------------------------------------------
// Criterion 1: exact recovery of a rational pair at every admissible degree
// ---------------------------------------------------------------------------

#[test]
fn criterion_1_rational_pair_is_recovered_exactly() {
    let c = Criterion::begin("criterion 1 (rational pair, exact denominators)", 1000);
    let system = system_of(&["1/(z-2)", "1/(z-3)"]);
    let m = MultiIndex::new(vec![1, 1]).unwrap();
    let quad = QuadratureSettings::new(unit_disk()).with_rho(1.8);
    let ctx = SolveContext::new(&system, &m, 20, &quad).unwrap();
    let target = ComplexPoly::from_roots(&[Complex64::new(2.0, 0.0), Complex64::new(3.0, 0.0)]);

    for n in 3..=20usize {
        let result = simultaneous_pade_faber_from_context(&ctx, &m, n).unwrap();
        let dist = coefficient_distance(&result.denominator_coefficients, &target);
        assert!(dist <= 1e-9, "n={n}: distance {dist:.3e}");
    }
    c.pass();
}

// ---------------------------------------------------------------------------
// Criterion 2: geometric rate 1/2 for a pole at 2 before a branch point at 4
// ---------------------------------------------------------------------------

#[test]
fn criterion_2_log_tail_rate_is_one_half() {
    let c = Criterion::begin("criterion 2 (disk log-tail rate 0.5)", 5000);
    let system = system_of(&["1/(z-2) + log(z-4)"]);
    let m = MultiIndex::new(vec![1]).unwrap();
    let domain = unit_disk();
    let metadata = declared_metadata(
        &system,
        &m,
        &domain,
        &[DeclaredPole {
            xi: Complex64::new(2.0, 0.0),
            tau: 1,
            rho: vec![4.0],
        }],
    )
    .unwrap();
    assert!((metadata.predicted_rate - 0.5).abs() <= 1e-12);

    let quad = QuadratureSettings::new(domain).with_rho(1.8);
    let ns: Vec<usize> = (10..=80).collect();
    let report = run_direct_experiment(&system, &m, &metadata, &ns, &quad).unwrap();
    assert!(
        (report.fitted_rate - 0.5).abs() <= 0.05,
        "fitted {} outside 0.5 ± 0.05",
        report.fitted_rate
    );
    assert!(report.converged);
    c.pass();
}

// ---------------------------------------------------------------------------
// Criterion 3: segment rate matches the level-curve ratio
// ---------------------------------------------------------------------------

#[test]
fn criterion_3_segment_rate_matches_the_level_ratio() {
    let c = Criterion::begin("criterion 3 (segment log-tail rate)", 5000);
    let domain = Domain::segment(Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)).unwrap();
    let system = system_of(&["1/(z-2) + log(z-5)"]);
    let m = MultiIndex::new(vec![1]).unwrap();

    let barrier = domain.phi(Complex64::new(5.0, 0.0)).unwrap().norm();
    let metadata = declared_metadata(
        &system,
        &m,
        &domain,
        &[DeclaredPole {
            xi: Complex64::new(2.0, 0.0),
            tau: 1,
            rho: vec![barrier],
        }],
    )
    .unwrap();
    let predicted = metadata.predicted_rate;
    // (2 + √3) / (5 + √24)
    let expected = (2.0 + 3f64.sqrt()) / (5.0 + 24f64.sqrt());
    assert!((predicted - expected).abs() <= 1e-12);

    let quad = QuadratureSettings::new(domain).with_rho(3.0);
    let ns: Vec<usize> = (10..=80).collect();
    let report = run_direct_experiment(&system, &m, &metadata, &ns, &quad).unwrap();
    let log_gap = (report.fitted_rate.ln() - predicted.ln()).abs();
    assert!(
        log_gap <= 0.1 * predicted.ln().abs(),
        "fitted {} vs predicted {predicted}: log gap {log_gap:.4}",
        report.fitted_rate
    );
    c.pass();
}

// ---------------------------------------------------------------------------
// Criterion 4: uniform error decays faster on an inner circle
// ---------------------------------------------------------------------------

#[test]
fn criterion_4_sup_error_rate_on_an_inner_circle() {
    let c = Criterion::begin("criterion 4 (sup error on |z| = 0.5)", 5000);
    let system = system_of(&["1/(z-2) + log(z-4)"]);
    let m = MultiIndex::new(vec![1]).unwrap();
    let quad = QuadratureSettings::new(unit_disk()).with_rho(1.8);
    let ctx = SolveContext::new(&system, &m, 80, &quad).unwrap();

    let points: Vec<Complex64> = (0..64)
        .map(|j| {
            let t = 2.0 * std::f64::consts::PI * j as f64 / 64.0;
            0.5 * Complex64::new(t.cos(), t.sin())
        })
        .collect();
    let f = system.function(0);

    let ns: Vec<usize> = (10..=80).collect();
    let mut sups = Vec::with_capacity(ns.len());
    for &n in &ns {
        let result = simultaneous_pade_faber_from_context(&ctx, &m, n).unwrap();
        sups.push(sup_error_on_compact(&result, 0, 0, &points, f).unwrap());
    }
    let fit = fit_geometric_rate(&ns, &sups).unwrap();
    assert!(
        fit.rate <= 0.25 + 0.05,
        "sup-error rate {} exceeds 0.30",
        fit.rate
    );
    c.pass();
}

// ---------------------------------------------------------------------------
// Criterion 5: the inverse analysis detects the pole, and refuses an entire
// function
// ---------------------------------------------------------------------------

#[test]
fn criterion_5_inverse_detects_the_pole_and_rejects_entire_data() {
    let c = Criterion::begin("criterion 5 (inverse verdicts)", 10000);
    let m = MultiIndex::new(vec![1]).unwrap();

    let system = system_of(&["1/(z-2) + log(z-4)"]);
    let quad = QuadratureSettings::new(unit_disk()).with_rho(1.8);
    let ns: Vec<usize> = (10..=80).collect();
    let verdict = run_inverse_experiment(&system, &m, &ns, &quad, 0.1).unwrap();
    assert!(verdict.converged, "log-tail data must converge");
    assert_eq!(verdict.pole_count, 1);
    let root = verdict.limit_roots[0];
    assert!(
        (root - Complex64::new(2.0, 0.0)).norm() <= 1e-3,
        "limit root {root}"
    );
    assert!(
        (verdict.theta - 0.5).abs() <= 0.05,
        "theta {} outside 0.5 ± 0.05",
        verdict.theta
    );

    // Control: an entire function must be reported as not converged.
    let entire = system_of(&["exp(1*z)"]);
    let default_quad = QuadratureSettings::new(unit_disk());
    let control_ns: Vec<usize> = (10..=60).collect();
    let control = run_inverse_experiment(&entire, &m, &control_ns, &default_quad, 0.1).unwrap();
    assert!(!control.converged, "entire data must not converge");
    c.pass();
}

// ---------------------------------------------------------------------------
// Criterion 6: basis-layer identities
// ---------------------------------------------------------------------------

#[test]
fn criterion_6_basis_layer_identities() {
    let c = Criterion::begin("criterion 6 (basis identities)", 3000);

    // (a) Unit-disk coefficients of 1/(z-2) are -2^{-(n+1)}.
    let disk = unit_disk();
    let coeffs = faber_coefficients(
        &disk,
        |z| Complex64::new(1.0, 0.0) / (z - Complex64::new(2.0, 0.0)),
        101,
        2f64.sqrt(),
        None,
    )
    .unwrap();
    for n in 0..=100usize {
        let expected = -(2f64.powi(-(n as i32) - 1));
        let got = coeffs.value(n);
        assert!(
            (got - Complex64::new(expected, 0.0)).norm() <= 1e-12,
            "coefficient {n}: {got} vs {expected}"
        );
    }

    // (b) Segment basis polynomials are twice the Chebyshev polynomials.
    let segment = Domain::segment(Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)).unwrap();
    let basis = faber_polynomials(&segment, 20);
    let mut cheb: Vec<Vec<f64>> = vec![vec![1.0], vec![0.0, 1.0]];
    for n in 2..=20usize {
        let mut next = vec![0.0; n + 1];
        for (k, &v) in cheb[n - 1].iter().enumerate() {
            next[k + 1] += 2.0 * v;
        }
        for (k, &v) in cheb[n - 2].iter().enumerate() {
            next[k] -= v;
        }
        cheb.push(next);
    }
    for n in 1..=20usize {
        for k in 0..=n {
            let expected = 2.0 * cheb[n][k];
            let got = basis.poly(n).coeff(k);
            assert!(
                (got - Complex64::new(expected, 0.0)).norm() <= 1e-8,
                "degree {n}, coefficient {k}: {got} vs {expected}"
            );
        }
    }

    // (c) Growth on the level curve ρ = 2: max |Φ_64| has exponent log 2.
    let ellipse = Domain::ellipse(Complex64::new(0.0, 0.0), 2.0, 1.0).unwrap();
    let ellipse_basis = faber_polynomials(&ellipse, 64);
    let mut max_abs = 0.0f64;
    for j in 0..512 {
        let t = 2.0 * std::f64::consts::PI * j as f64 / 512.0;
        let w = 2.0 * Complex64::new(t.cos(), t.sin());
        let z = ellipse.psi(w).unwrap();
        max_abs = max_abs.max(ellipse_basis.eval_all(z)[64].norm());
    }
    let exponent = max_abs.ln() / 64.0;
    assert!(
        (exponent - 2f64.ln()).abs() <= 0.01 * 2f64.ln(),
        "growth exponent {exponent} vs ln 2"
    );

    // (d) The convergence-level estimator lands within 2% on both shapes.
    let disk_coeffs = faber_coefficients(
        &disk,
        |z| Complex64::new(1.0, 0.0) / (z - Complex64::new(2.0, 0.0)),
        60,
        1.4,
        None,
    )
    .unwrap();
    let rho0_disk = estimate_rho0(&disk_coeffs).unwrap();
    assert!(
        (rho0_disk - 2.0).abs() <= 0.02 * 2.0,
        "disk estimate {rho0_disk}"
    );

    let seg_coeffs = faber_coefficients(
        &segment,
        |z| Complex64::new(1.0, 0.0) / (z - Complex64::new(2.0, 0.0)),
        60,
        3.0,
        None,
    )
    .unwrap();
    let rho0_seg = estimate_rho0(&seg_coeffs).unwrap();
    let expected_seg = 2.0 + 3f64.sqrt();
    assert!(
        (rho0_seg - expected_seg).abs() <= 0.02 * expected_seg,
        "segment estimate {rho0_seg} vs {expected_seg}"
    );

    c.pass();
}

// ---------------------------------------------------------------------------
// Criterion 7: random rational systems against an exact-arithmetic oracle
// ---------------------------------------------------------------------------

/// Exact complex rational arithmetic over the Gaussian rationals.
#[derive(Clone, PartialEq)]
struct Gq {
    re: BigRational,
    im: BigRational,
}

impl Gq {
    fn zero() -> Self {
        Gq {
            re: BigRational::from(BigInt::from(0)),
            im: BigRational::from(BigInt::from(0)),
        }
    }

    fn from_ints(re: i64, im: i64) -> Self {
        Gq {
            re: BigRational::from(BigInt::from(re)),
            im: BigRational::from(BigInt::from(im)),
        }
    }

    fn is_zero(&self) -> bool {
        self.re == BigRational::from(BigInt::from(0))
            && self.im == BigRational::from(BigInt::from(0))
    }

    fn add(&self, other: &Gq) -> Gq {
        Gq {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
        }
    }

    fn sub(&self, other: &Gq) -> Gq {
        Gq {
            re: &self.re - &other.re,
            im: &self.im - &other.im,
        }
    }

    fn mul(&self, other: &Gq) -> Gq {
        Gq {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    fn div(&self, other: &Gq) -> Gq {
        let denom = &other.re * &other.re + &other.im * &other.im;
        Gq {
            re: (&self.re * &other.re + &self.im * &other.im) / &denom,
            im: (&self.im * &other.re - &self.re * &other.im) / &denom,
        }
    }

    fn scale_int(&self, k: i64) -> Gq {
        let f = BigRational::from(BigInt::from(k));
        Gq {
            re: &self.re * &f,
            im: &self.im * &f,
        }
    }

    fn pow(&self, e: usize) -> Gq {
        let mut acc = Gq::from_ints(1, 0);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

/// One pole of one component function: a Gaussian-integer location and the
/// principal-part coefficients `l_0 .. l_{order-1}` (of `(z-ξ)^{-(j+1)}`).
#[derive(Clone)]
struct OraclePole {
    a: i64,
    b: i64,
    coeffs: Vec<(i64, i64)>,
}

type OracleFunction = Vec<OraclePole>;

fn int_binomial(n: usize, k: usize) -> i64 {
    let mut value = 1i64;
    for j in 0..k {
        value = value * (n - j) as i64 / (j + 1) as i64;
    }
    value
}

/// The `(z-ζ)^{-(r+1)}` Laurent coefficient of `z^i F_α`, exactly.
fn oracle_shifted_laurent(f: &OracleFunction, i: usize, zeta: (i64, i64), r: usize) -> Gq {
    let Some(pole) = f.iter().find(|p| (p.a, p.b) == zeta) else {
        return Gq::zero();
    };
    let order = pole.coeffs.len();
    if r >= order {
        return Gq::zero();
    }
    let z = Gq::from_ints(zeta.0, zeta.1);
    let mut value = Gq::zero();
    let s_max = i.min(order - 1 - r);
    for s in 0..=s_max {
        let (lre, lim) = pole.coeffs[r + s];
        let term = z
            .pow(i - s)
            .mul(&Gq::from_ints(lre, lim))
            .scale_int(int_binomial(i, s));
        value = value.add(&term);
    }
    value
}

/// The functional row over the combination space: one entry per column
/// `(α, i)` with `i < m_α`.
fn oracle_row(
    functions: &[OracleFunction],
    orders: &[usize],
    zeta: (i64, i64),
    r: usize,
) -> Vec<Gq> {
    let mut row = Vec::new();
    for (f, &ma) in functions.iter().zip(orders.iter()) {
        for i in 0..ma {
            row.push(oracle_shifted_laurent(f, i, zeta, r));
        }
    }
    row
}

/// Rank over the Gaussian rationals by fraction-exact elimination.
fn oracle_rank(mut rows: Vec<Vec<Gq>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0usize;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = row[col].div(&pivot_row[col]);
            for (entry, p) in row.iter_mut().zip(pivot_row.iter()) {
                *entry = entry.sub(&factor.mul(p));
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Brute-force system poles: for each candidate location, the largest `t`
/// such that every order `1..=t` is achievable by some combination that is
/// holomorphic at all other candidates on or inside the same level.
fn oracle_system_poles(
    functions: &[OracleFunction],
    orders: &[usize],
) -> Vec<((i64, i64), usize)> {
    // Candidate locations with their maximal orders.
    let mut candidates: Vec<((i64, i64), usize)> = Vec::new();
    for f in functions {
        for p in f {
            match candidates.iter_mut().find(|(loc, _)| *loc == (p.a, p.b)) {
                Some((_, max_order)) => *max_order = (*max_order).max(p.coeffs.len()),
                None => candidates.push(((p.a, p.b), p.coeffs.len())),
            }
        }
    }

    let level_sq = |(a, b): (i64, i64)| a * a + b * b;
    let mut result = Vec::new();
    for &(xi, max_order) in &candidates {
        let mut tau = 0usize;
        for t in 1..=max_order {
            // Killing rows: everything at or below the level of ξ, and the
            // orders above t at ξ itself.
            let mut killing: Vec<Vec<Gq>> = Vec::new();
            for &(zeta, zeta_order) in &candidates {
                if zeta == xi {
                    for r in t..zeta_order {
                        killing.push(oracle_row(functions, orders, xi, r));
                    }
                } else if level_sq(zeta) <= level_sq(xi) {
                    for r in 0..zeta_order {
                        killing.push(oracle_row(functions, orders, zeta, r));
                    }
                }
            }
            let functional = oracle_row(functions, orders, xi, t - 1);
            let base_rank = oracle_rank(killing.clone());
            let mut extended = killing;
            extended.push(functional);
            if oracle_rank(extended) > base_rank {
                tau = t;
            } else {
                break;
            }
        }
        if tau > 0 {
            result.push((xi, tau));
        }
    }
    result.sort();
    result
}

#[test]
fn criterion_7_random_rational_systems_match_the_exact_oracle() {
    let c = Criterion::begin("criterion 7 (50 random systems vs exact oracle)", 30000);
    let mut rng = ChaCha8Rng::seed_from_u64(20260819);
    let domain = unit_disk();

    for case in 0..50 {
        // Draw a random rational system on the integer grid.
        let function_count = rng.gen_range(1..=3usize);
        let mut functions: Vec<OracleFunction> = Vec::new();
        let mut expressions: Vec<String> = Vec::new();
        for _ in 0..function_count {
            let pole_count = rng.gen_range(1..=2usize);
            let mut poles: Vec<OraclePole> = Vec::new();
            while poles.len() < pole_count {
                let a = rng.gen_range(2..=6i64);
                let b = rng.gen_range(-2..=2i64);
                if poles.iter().any(|p| (p.a, p.b) == (a, b)) {
                    continue;
                }
                let order = rng.gen_range(1..=2usize);
                let mut coeffs: Vec<(i64, i64)> = Vec::new();
                for j in 0..order {
                    let lead = j == order - 1;
                    loop {
                        let re = rng.gen_range(-3..=3i64);
                        let im = rng.gen_range(-3..=3i64);
                        if lead && re == 0 && im == 0 {
                            continue;
                        }
                        coeffs.push((re, im));
                        break;
                    }
                }
                poles.push(OraclePole { a, b, coeffs });
            }
            let mut terms: Vec<String> = Vec::new();
            for p in &poles {
                for (j, &(re, im)) in p.coeffs.iter().enumerate() {
                    if re == 0 && im == 0 {
                        continue;
                    }
                    let power = if j == 0 {
                        String::new()
                    } else {
                        format!("^{}", j + 1)
                    };
                    terms.push(format!(
                        "({re}{im:+}i)/(z-({a}{b:+}i)){power}",
                        a = p.a,
                        b = p.b
                    ));
                }
            }
            expressions.push(terms.join(" + "));
            functions.push(poles);
        }
        let orders: Vec<usize> = (0..function_count)
            .map(|_| rng.gen_range(1..=2usize))
            .collect();

        let expr_refs: Vec<&str> = expressions.iter().map(|s| s.as_str()).collect();
        let system = system_of(&expr_refs);
        let m = MultiIndex::new(orders.clone()).unwrap();

        let metadata = system_poles_rational(&system, &m, &domain)
            .unwrap_or_else(|e| panic!("case {case}: {e} (system {expressions:?})"));
        let total: usize = metadata.system_poles.iter().map(|p| p.tau).sum();
        assert!(
            total <= m.total(),
            "case {case}: total order {total} exceeds |m| = {}",
            m.total()
        );

        let mut computed: Vec<((i64, i64), usize)> = metadata
            .system_poles
            .iter()
            .map(|p| {
                let a = p.xi.re.round() as i64;
                let b = p.xi.im.round() as i64;
                assert!(
                    (p.xi - Complex64::new(a as f64, b as f64)).norm() <= 1e-9,
                    "case {case}: pole {} off the grid",
                    p.xi
                );
                ((a, b), p.tau)
            })
            .collect();
        computed.sort();

        let expected = oracle_system_poles(&functions, &orders);
        let oracle_total: usize = expected.iter().map(|&(_, t)| t).sum();
        assert!(oracle_total <= m.total(), "case {case}: oracle bound");
        assert_eq!(
            computed, expected,
            "case {case}: system {expressions:?}, m {orders:?}"
        );
    }
    c.pass();
}

// ---------------------------------------------------------------------------
// Criterion 8: an incomplete approximant still locks one root onto the pole
// ---------------------------------------------------------------------------

#[test]
fn criterion_8_incomplete_approximant_finds_the_pole() {
    let c = Criterion::begin("criterion 8 (incomplete approximants)", 5000);
    let f = parse_function_expression("1/(z-2) + log(z-4)").unwrap();
    let quad = QuadratureSettings::new(unit_disk()).with_rho(1.8);

    let mut last = None;
    for n in 10..=40usize {
        last = Some(incomplete_pade_faber(&f, 2, 1, n, &quad).unwrap());
    }
    let result = last.unwrap();
    let roots = poly_roots(&result.denominator).unwrap();
    let nearest = roots
        .iter()
        .map(|r| (r - Complex64::new(2.0, 0.0)).norm())
        .fold(f64::INFINITY, f64::min);
    assert!(
        nearest <= 1e-3,
        "no root within 1e-3 of 2 (closest at distance {nearest:.3e})"
    );
    c.pass();
}

// ---------------------------------------------------------------------------
// Criterion 9: the CLI is deterministic at the byte level
// ---------------------------------------------------------------------------

#[test]
fn criterion_9_cli_outputs_are_byte_identical() {
    let c = Criterion::begin("criterion 9 (CLI determinism)", 2000);
    let config = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs/solve_rational.cfg");
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();

    for dir in [&dir_a, &dir_b] {
        let out = std::process::Command::new(env!("CARGO_BIN_EXE_faberpade"))
            .arg(config.to_str().unwrap())
            .arg("--out")
            .arg(dir.path().to_str().unwrap())
            .output()
            .expect("binary should spawn");
        assert!(
            out.status.success(),
            "stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }

    for name in ["denominators.csv", "rates.csv", "roots_paths.csv", "summary.txt"] {
        let a = std::fs::read(dir_a.path().join(name)).unwrap();
        let b = std::fs::read(dir_b.path().join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between runs");
    }
    c.pass();
}
