//! Direct and inverse experiment harnesses.
//!
//! The direct harness measures how fast the computed denominators approach
//! the predicted limit polynomial and compares the fitted geometric rate
//! against the predicted one. The inverse harness uses nothing but the
//! computed denominator sequence: it detects stabilization, estimates the
//! limit polynomial and the convergence rate, and reports the implied pole
//! count. [`sup_error_on_compact`] measures the approximation error itself
//! on a caller-supplied compact set.

use std::sync::atomic::{AtomicUsize, Ordering};

use num_complex::Complex64;

use super::{fit_geometric_rate, poly_roots, AnalysisError, RateFit, SystemMetadata};
use crate::approximant::{
    simultaneous_pade_faber_from_context, ApproximantError, PadeFaberResult, QuadratureSettings,
    SolveContext,
};
use crate::funcsys::{FunctionSystem, MeromorphicFunction, MultiIndex};
use crate::poly::ComplexPoly;

/// Coefficient-norm level below which a denominator error counts as an exact
/// hit (relative to the limit polynomial's norm where one is in play).
pub const EXACT_RECOVERY_TOL: f64 = 1e-9;

/// Length of the uniqueness run that fixes `n₀` in the inverse harness.
pub const INVERSE_UNIQUE_WINDOW: usize = 5;

/// Relative threshold on the leading coefficient of the inverse limit
/// polynomial for it to count as having full degree.
const INVERSE_DEGREE_TOL: f64 = 1e-8;

/// Largest root count solved by exhaustive assignment; beyond this the
/// tracker falls back to greedy disjoint pairing.
const ASSIGNMENT_EXHAUSTIVE_LIMIT: usize = 8;

/// The trajectory of the computed root assigned to one predicted pole.
#[derive(Debug, Clone)]
pub struct RootPath {
    /// The predicted pole this path is anchored to.
    pub pole: Complex64,
    /// `(n, root)` pairs for every degree where a root was assigned.
    pub path: Vec<(usize, Complex64)>,
}

/// Outcome of a direct-type experiment.
#[derive(Debug, Clone)]
pub struct RateReport {
    /// The solved degrees, ascending.
    pub n_values: Vec<usize>,
    /// `‖Q_n − predicted‖` in coefficient norm, per degree.
    pub errors: Vec<f64>,
    /// Geometric rate fitted to `errors` (0 on exact recovery).
    pub fitted_rate: f64,
    /// The rate in the role of the theorem's θ; equals `fitted_rate`.
    pub theta_estimate: f64,
    /// The metadata's predicted rate.
    pub predicted_rate: f64,
    /// Tracked trajectory of each predicted pole (with multiplicity).
    pub root_paths: Vec<RootPath>,
    /// Whether the fitted rate indicates geometric convergence.
    pub converged: bool,
    /// Whether every error was below [`EXACT_RECOVERY_TOL`].
    pub exact_recovery: bool,
    /// Fit diagnostics when a fit was performed.
    pub fit: Option<RateFit>,
}

/// Outcome of an inverse-type experiment.
#[derive(Debug, Clone)]
pub struct InverseVerdict {
    /// `|m|` when converged, 0 otherwise.
    pub pole_count: usize,
    /// Limit polynomial estimated from the last quartile of the sequence.
    pub limit_q: ComplexPoly,
    /// Roots of the limit polynomial (empty when it is degree-deficient).
    pub limit_roots: Vec<Complex64>,
    /// Fitted geometric rate of `‖Q_n − limit‖`.
    pub theta: f64,
    /// Whether stabilization, rate, and degree checks all passed.
    pub converged: bool,
    /// First degree opening a run of [`INVERSE_UNIQUE_WINDOW`] consecutive
    /// unique solves, when one exists.
    pub n0: Option<usize>,
}

/// Solves the whole degree list against one shared context, fanning the
/// independent per-degree solves out across worker threads.
fn solve_sequence(
    system: &FunctionSystem,
    m: &MultiIndex,
    ns: &[usize],
    quad: &QuadratureSettings,
) -> Result<Vec<PadeFaberResult>, AnalysisError> {
    assert!(!ns.is_empty(), "degree list must be non-empty");
    let n_max = *ns.iter().max().expect("non-empty");
    let ctx = SolveContext::new(system, m, n_max.max(1), quad)?;

    let workers = std::thread::available_parallelism()
        .map(|p| p.get())
        .unwrap_or(1)
        .min(ns.len());
    let mut slots: Vec<Option<Result<PadeFaberResult, ApproximantError>>> = Vec::new();
    slots.resize_with(ns.len(), || None);

    if workers <= 1 {
        for (i, &n) in ns.iter().enumerate() {
            slots[i] = Some(simultaneous_pade_faber_from_context(&ctx, m, n));
        }
    } else {
        let next = AtomicUsize::new(0);
        let computed = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|_| {
                    let ctx = &ctx;
                    let next = &next;
                    scope.spawn(move || {
                        let mut out = Vec::new();
                        loop {
                            let i = next.fetch_add(1, Ordering::Relaxed);
                            if i >= ns.len() {
                                break;
                            }
                            out.push((i, simultaneous_pade_faber_from_context(ctx, m, ns[i])));
                        }
                        out
                    })
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("solver worker panicked"))
                .collect::<Vec<_>>()
        });
        for (i, result) in computed {
            slots[i] = Some(result);
        }
    }

    let mut results = Vec::with_capacity(ns.len());
    for slot in slots {
        results.push(slot.expect("every degree solved")?);
    }
    Ok(results)
}

fn sorted_degrees(ns: &[usize]) -> Vec<usize> {
    let mut ns = ns.to_vec();
    ns.sort_unstable();
    ns.dedup();
    ns
}

/// Fits a geometric rate to the informative prefix of an error sequence.
///
/// Once an error drops to `floor` (the numerical-identity threshold scaled by
/// the magnitude of the reference object) the sequence has hit the working
/// precision of the pipeline and later values carry no rate information; they
/// wander on a noise plateau whose apparent slope reflects round-off, not the
/// approximation. This fits only the samples before the first such drop. If
/// the whole sequence sits at the floor — or the prefix is too short to fit —
/// the data is treated as an immediate plateau and the rate is zero.
fn fit_rate_above_floor(
    ns: &[usize],
    errors: &[f64],
    floor: f64,
) -> Result<(f64, Option<RateFit>), AnalysisError> {
    let cut = errors.iter().position(|&e| e <= floor).unwrap_or(errors.len());
    if cut == errors.len() {
        let fit = fit_geometric_rate(ns, errors)?;
        return Ok((fit.rate, Some(fit)));
    }
    if cut < 8 {
        return Ok((0.0, None));
    }
    let fit = fit_geometric_rate(&ns[..cut], &errors[..cut])?;
    Ok((fit.rate, Some(fit)))
}

/// `‖coeffs − p‖₂` over the union of index ranges.
fn coefficient_distance(coeffs: &[Complex64], p: &ComplexPoly) -> f64 {
    let len = coeffs.len().max(p.degree().map_or(0, |d| d + 1));
    (0..len)
        .map(|j| {
            let a = coeffs.get(j).copied().unwrap_or_default();
            (a - p.coeff(j)).norm_sqr()
        })
        .sum::<f64>()
        .sqrt()
}

fn assignment_cost(targets: &[Complex64], roots: &[Complex64], perm: &[usize]) -> f64 {
    targets
        .iter()
        .zip(perm.iter())
        .map(|(&t, &j)| (t - roots[j]).norm())
        .sum()
}

/// Assigns computed roots to target positions: a minimal-total-distance
/// bijection when the counts match and are small, greedy globally-nearest
/// disjoint pairs otherwise. Entry `i` is the root given to `targets[i]`.
fn assign_roots(targets: &[Complex64], roots: &[Complex64]) -> Vec<Option<Complex64>> {
    if targets.is_empty() || roots.is_empty() {
        return vec![None; targets.len()];
    }
    if targets.len() == roots.len() && targets.len() <= ASSIGNMENT_EXHAUSTIVE_LIMIT {
        // Exhaustive minimal-cost assignment (Heap's algorithm over
        // permutations; the sizes here are tiny).
        let k = targets.len();
        let mut perm: Vec<usize> = (0..k).collect();
        let mut best_cost = assignment_cost(targets, roots, &perm);
        let mut best = perm.clone();
        let mut c = vec![0usize; k];
        let mut i = 0usize;
        while i < k {
            if c[i] < i {
                if i % 2 == 0 {
                    perm.swap(0, i);
                } else {
                    perm.swap(c[i], i);
                }
                let cost = assignment_cost(targets, roots, &perm);
                if cost < best_cost {
                    best_cost = cost;
                    best = perm.clone();
                }
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        return best.into_iter().map(|j| Some(roots[j])).collect();
    }

    // Greedy: repeatedly take the globally nearest unused (target, root)
    // pair.
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(targets.len() * roots.len());
    for (ti, &t) in targets.iter().enumerate() {
        for (rj, &r) in roots.iter().enumerate() {
            pairs.push(((t - r).norm(), ti, rj));
        }
    }
    pairs.sort_by(|a, b| a.partial_cmp(b).expect("distances are finite"));
    let mut taken_target = vec![false; targets.len()];
    let mut taken_root = vec![false; roots.len()];
    let mut assigned = vec![None; targets.len()];
    for (_, ti, rj) in pairs {
        if !taken_target[ti] && !taken_root[rj] {
            taken_target[ti] = true;
            taken_root[rj] = true;
            assigned[ti] = Some(roots[rj]);
        }
    }
    assigned
}

/// Runs the direct experiment: solves every degree, measures
/// `‖Q_n − predicted‖`, fits the geometric rate, and tracks each predicted
/// pole's root trajectory. The fit uses only the informative prefix of the
/// error sequence — samples that have already dropped to the numerical
/// floor are excluded (see [`fit_rate_above_floor`]).
///
/// Refuses with `HypothesisViolation` when the metadata's total system-pole
/// order falls short of `|m|` — the convergence theorem's hypothesis.
pub fn run_direct_experiment(
    system: &FunctionSystem,
    m: &MultiIndex,
    metadata: &SystemMetadata,
    ns: &[usize],
    quad: &QuadratureSettings,
) -> Result<RateReport, AnalysisError> {
    if metadata.total_order() != m.total() {
        return Err(AnalysisError::HypothesisViolation {
            total_tau: metadata.total_order(),
            required: m.total(),
        });
    }
    let ns = sorted_degrees(ns);
    let results = solve_sequence(system, m, &ns, quad)?;

    let mut targets: Vec<Complex64> = Vec::with_capacity(m.total());
    for pole in &metadata.system_poles {
        targets.extend(std::iter::repeat(pole.xi).take(pole.tau));
    }
    let mut root_paths: Vec<RootPath> = targets
        .iter()
        .map(|&pole| RootPath {
            pole,
            path: Vec::new(),
        })
        .collect();

    let mut errors = Vec::with_capacity(ns.len());
    for (i, result) in results.iter().enumerate() {
        errors.push(coefficient_distance(
            &result.denominator_coefficients,
            &metadata.predicted_q,
        ));
        let roots = poly_roots(&result.denominator)?;
        for (t, assigned) in assign_roots(&targets, &roots).into_iter().enumerate() {
            if let Some(root) = assigned {
                root_paths[t].path.push((ns[i], root));
            }
        }
    }

    let exact_recovery = errors.iter().all(|&e| e <= EXACT_RECOVERY_TOL);
    let predicted_norm = (0..=m.total())
        .map(|j| metadata.predicted_q.coeff(j).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let (fitted_rate, fit) = if exact_recovery {
        (0.0, None)
    } else {
        fit_rate_above_floor(&ns, &errors, EXACT_RECOVERY_TOL * (1.0 + predicted_norm))?
    };

    Ok(RateReport {
        n_values: ns,
        errors,
        fitted_rate,
        theta_estimate: fitted_rate,
        predicted_rate: metadata.predicted_rate,
        root_paths,
        converged: fitted_rate < 1.0,
        exact_recovery,
        fit,
    })
}

/// Runs the inverse experiment on nothing but the computed denominator
/// sequence: finds the stabilization degree `n₀` (uniqueness for
/// [`INVERSE_UNIQUE_WINDOW`] consecutive solves), estimates the limit
/// polynomial by averaging the last quartile, fits the rate of
/// `‖Q_n − limit‖` over the informative prefix (samples at the numerical
/// floor are excluded, see [`fit_rate_above_floor`]), and declares
/// convergence when the rate clears `1 − tol`, the limit has full degree,
/// and `n₀` exists. A converged verdict implies the system has exactly `|m|`
/// poles in the detected region.
pub fn run_inverse_experiment(
    system: &FunctionSystem,
    m: &MultiIndex,
    ns: &[usize],
    quad: &QuadratureSettings,
    tol: f64,
) -> Result<InverseVerdict, AnalysisError> {
    let ns = sorted_degrees(ns);
    let results = solve_sequence(system, m, &ns, quad)?;

    let mut n0 = None;
    if results.len() >= INVERSE_UNIQUE_WINDOW {
        for start in 0..=(results.len() - INVERSE_UNIQUE_WINDOW) {
            if results[start..start + INVERSE_UNIQUE_WINDOW]
                .iter()
                .all(|r| r.unique)
            {
                n0 = Some(ns[start]);
                break;
            }
        }
    }

    let coeff_len = m.total() + 1;
    let quartile = (results.len() + 3) / 4;
    let tail = &results[results.len() - quartile..];
    let mut average = vec![Complex64::new(0.0, 0.0); coeff_len];
    for result in tail {
        for (j, &c) in result.denominator_coefficients.iter().enumerate() {
            average[j] += c;
        }
    }
    for c in &mut average {
        *c /= quartile as f64;
    }
    let limit_q = ComplexPoly::new(average.clone());

    let errors: Vec<f64> = results
        .iter()
        .map(|r| {
            r.denominator_coefficients
                .iter()
                .zip(average.iter())
                .map(|(&a, &b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .collect();

    let limit_norm = average.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let (theta, _) = fit_rate_above_floor(&ns, &errors, EXACT_RECOVERY_TOL * (1.0 + limit_norm))?;

    let max_coeff = average.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    let deg_ok = average[m.total()].norm() > INVERSE_DEGREE_TOL * max_coeff;
    let converged = n0.is_some() && theta < 1.0 - tol && deg_ok;
    let limit_roots = if deg_ok {
        poly_roots(&limit_q)?
    } else {
        Vec::new()
    };

    Ok(InverseVerdict {
        pole_count: if converged { m.total() } else { 0 },
        limit_q,
        limit_roots,
        theta,
        converged,
        n0,
    })
}

/// Max over the sample points of `|P_{α,k}/Q − z^k F_α|`.
///
/// Sample points must avoid the roots of `Q` (else `DenominatorZero`
/// propagates) and the poles and branch cuts of `f` (else `BadSamplePoint`).
pub fn sup_error_on_compact(
    result: &PadeFaberResult,
    alpha: usize,
    k: usize,
    sample_points: &[Complex64],
    f: &MeromorphicFunction,
) -> Result<f64, AnalysisError> {
    let mut worst = 0.0f64;
    for &z in sample_points {
        let approx = result.evaluate_power(alpha, k, z)?;
        let truth = z.powu(k as u32)
            * f.evaluate(z)
                .map_err(|_| AnalysisError::BadSamplePoint { at: z })?;
        worst = worst.max((approx - truth).norm());
    }
    Ok(worst)
}
