//! System poles of a function system and their characteristic radii.
//!
//! A point `ξ` is a system pole of order `τ` of **F** with respect to **m**
//! when, for every `t = 1..=τ`, some polynomial combination
//! `Σ v_α F_α` (`deg v_α < m_α`) is holomorphic on a neighborhood of the
//! closed canonical domain through `ξ` except for a pole at `ξ` of exact
//! order `t`. For purely rational systems this is decidable by linear
//! algebra: a combination is a point of `C^|m|` (the coefficients of the
//! `v_α`), holomorphy constraints and Laurent coefficients at each candidate
//! point are linear functionals, and "exact order t achievable" means the
//! order-`t` functional does not vanish identically on the nullspace of the
//! constraint set.
//!
//! For systems with transcendental tails no finite procedure computes the
//! radii `ρ_{ξ,t}`; they are supplied as hand-derived declarations and
//! validated for internal consistency instead.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::AnalysisError;
use crate::conformal::Domain;
use crate::funcsys::{FunctionSystem, MeromorphicFunction, MultiIndex, Tail};
use crate::poly::ComplexPoly;

/// Relative threshold deciding "pole of exact order t": the order-t Laurent
/// functional must exceed this, relative to its own norm, on some direction
/// of the holomorphy-constraint nullspace.
pub const EXACT_ORDER_TOL: f64 = 1e-12;

/// Relative rank tolerance for the constraint-matrix nullspaces.
const NULL_TOL: f64 = 1e-9;

/// How the metadata was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Computed by exact linear algebra on a rational system.
    ComputedRational,
    /// Hand-derived declarations, validated for consistency.
    DeclaredCatalog,
}

/// One system pole with its characteristic radii.
#[derive(Debug, Clone)]
pub struct SystemPole {
    /// Location ξ.
    pub xi: Complex64,
    /// Order τ as a system pole.
    pub tau: usize,
    /// `|Φ(ξ)|`.
    pub level: f64,
    /// `ρ_{ξ,t}` for `t = 1..=τ` (index `t-1`); `+∞` when no finite
    /// singularity barrier exists.
    pub rho: Vec<f64>,
    /// `𝛒_ξ = min over t ≤ τ of ρ_{ξ,t}`.
    pub bold_rho: f64,
}

impl SystemPole {
    /// `𝛒_{ξ,t} = min over k ≤ t of ρ_{ξ,k}`.
    ///
    /// # Panics
    /// Panics if `t` is 0 or exceeds `tau`.
    pub fn bold_rho_at(&self, t: usize) -> f64 {
        assert!(t >= 1 && t <= self.tau, "order {t} out of 1..={}", self.tau);
        self.rho[..t].iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// System poles, radii, and the predicted limit objects for one `(F, m)`
/// pair on one domain.
#[derive(Debug, Clone)]
pub struct SystemMetadata {
    /// The system poles, sorted by `(level, re, im)`.
    pub system_poles: Vec<SystemPole>,
    /// `ρ*_α` per component (index of the largest canonical domain where the
    /// approximants of `F_α` converge).
    pub rho_star: Vec<f64>,
    /// The monic polynomial with the system poles as zeros, with
    /// multiplicity.
    pub predicted_q: ComplexPoly,
    /// `max over ξ of |Φ(ξ)| / 𝛒_ξ` — the exact denominator convergence
    /// rate when the direct hypotheses hold.
    pub predicted_rate: f64,
    /// Where the numbers came from.
    pub provenance: Provenance,
}

impl SystemMetadata {
    /// Total system-pole order `Σ τ`.
    pub fn total_order(&self) -> usize {
        self.system_poles.iter().map(|p| p.tau).sum()
    }

    /// The system pole nearest `xi`, if one matches to relative precision
    /// `1e-9`.
    pub fn pole_near(&self, xi: Complex64) -> Option<&SystemPole> {
        self.system_poles
            .iter()
            .find(|p| (p.xi - xi).norm() <= 1e-9 * (1.0 + xi.norm()))
    }
}

/// A hand-derived declaration for one system pole of a transcendental
/// system: its location, order, and radii `ρ_{ξ,t}` for `t = 1..=tau`.
#[derive(Debug, Clone)]
pub struct DeclaredPole {
    pub xi: Complex64,
    pub tau: usize,
    pub rho: Vec<f64>,
}

/// Outcome of the polynomial-independence test.
#[derive(Debug, Clone)]
pub struct IndependenceReport {
    /// True when no nonzero combination `Σ v_α F_α` (deg `v_α < m_α`) is a
    /// polynomial.
    pub independent: bool,
    /// When dependent: the coefficient polynomials `(v_1, …, v_d)` of one
    /// such combination.
    pub witness: Option<Vec<ComplexPoly>>,
}

// ---------------------------------------------------------------------------
// Combination-space machinery
// ---------------------------------------------------------------------------

/// A pole location shared by the system, with the largest order any single
/// `z^i F_α` attains there.
struct Candidate {
    location: Complex64,
    level: f64,
    max_order: usize,
}

fn require_rational(system: &FunctionSystem) -> Result<(), AnalysisError> {
    for (alpha, f) in system.functions().iter().enumerate() {
        match f.tail() {
            Tail::None | Tail::Polynomial(_) => {}
            _ => return Err(AnalysisError::NonRationalSystem { alpha }),
        }
    }
    Ok(())
}

/// Distinct pole locations across the system (exact-value deduplication;
/// locations originating from the same literal are bit-identical), sorted by
/// `(level, re, im)`. `level` is `|Φ|` when a domain is given, `|ξ|`
/// otherwise (any fixed order works for the independence test).
fn collect_candidates(
    system: &FunctionSystem,
    domain: Option<&Domain>,
) -> Result<Vec<Candidate>, AnalysisError> {
    let mut cands: Vec<Candidate> = Vec::new();
    for f in system.functions() {
        for term in f.rational_part() {
            let entry = cands
                .iter_mut()
                .find(|c| c.location == term.location);
            match entry {
                Some(c) => c.max_order = c.max_order.max(term.order()),
                None => {
                    let level = match domain {
                        Some(d) => d.phi(term.location)?.norm(),
                        None => term.location.norm(),
                    };
                    cands.push(Candidate {
                        location: term.location,
                        level,
                        max_order: term.order(),
                    });
                }
            }
        }
    }
    cands.sort_by(|a, b| {
        (a.level, a.location.re, a.location.im)
            .partial_cmp(&(b.level, b.location.re, b.location.im))
            .expect("candidate levels are finite")
    });
    Ok(cands)
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut value = 1.0f64;
    for j in 0..k {
        value = value * (n - j) as f64 / (j + 1) as f64;
    }
    value
}

/// The Laurent coefficient of `(z - ζ)^{-(r+1)}` of `z^i F`, given the
/// principal part of `F` at ζ. With `z^i = Σ_s C(i,s) ζ^{i-s} (z-ζ)^s`,
/// multiplying the principal coefficient `l_{r+s}` down to order `r+1`.
fn shifted_laurent(f: &MeromorphicFunction, i: usize, zeta: Complex64, r: usize) -> Complex64 {
    let Some(term) = f.rational_part().iter().find(|t| t.location == zeta) else {
        return Complex64::new(0.0, 0.0);
    };
    let order = term.order();
    if r >= order {
        return Complex64::new(0.0, 0.0);
    }
    let mut value = Complex64::new(0.0, 0.0);
    let s_max = i.min(order - 1 - r);
    for s in 0..=s_max {
        value += Complex64::new(binomial(i, s), 0.0)
            * zeta.powu((i - s) as u32)
            * term.laurent[r + s];
    }
    value
}

/// The functional row `A_{ζ,r}` over the combination space: entry for column
/// `(α, i)` is the `(z-ζ)^{-(r+1)}` Laurent coefficient of `z^i F_α`.
fn laurent_row(
    system: &FunctionSystem,
    m: &MultiIndex,
    zeta: Complex64,
    r: usize,
) -> Vec<Complex64> {
    let mut row = Vec::with_capacity(m.total());
    for (alpha, f) in system.functions().iter().enumerate() {
        for i in 0..m.component(alpha) {
            row.push(shifted_laurent(f, i, zeta, r));
        }
    }
    row
}

/// Orthonormal basis of the nullspace of the row-balanced constraint matrix,
/// at relative rank tolerance [`NULL_TOL`]. An empty constraint set yields
/// the standard basis of `C^cols`.
fn constraint_nullspace(rows: &[Vec<Complex64>], cols: usize) -> Vec<Vec<Complex64>> {
    if rows.is_empty() {
        return (0..cols)
            .map(|j| {
                let mut v = vec![Complex64::new(0.0, 0.0); cols];
                v[j] = Complex64::new(1.0, 0.0);
                v
            })
            .collect();
    }
    // Pad with zero rows to at least `cols` rows so the economy SVD carries
    // the complete right singular basis.
    let rdim = rows.len().max(cols);
    let mut mat = DMatrix::<Complex64>::zeros(rdim, cols);
    for (i, row) in rows.iter().enumerate() {
        let scale = row.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
        let s = if scale > 0.0 { 1.0 / scale } else { 1.0 };
        for (j, &v) in row.iter().enumerate() {
            mat[(i, j)] = v * s;
        }
    }
    let svd = mat.svd(false, true);
    let v_t = svd.v_t.expect("V^T was requested");
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .partial_cmp(&svd.singular_values[a])
            .expect("singular values are finite")
    });
    let sigma_max = svd.singular_values[order[0]];
    order
        .iter()
        .filter(|&&j| svd.singular_values[j] <= NULL_TOL * sigma_max)
        .map(|&j| (0..cols).map(|i| v_t[(j, i)].conj()).collect())
        .collect()
}

fn functional_dot(f: &[Complex64], v: &[Complex64]) -> Complex64 {
    f.iter().zip(v.iter()).map(|(&a, &b)| a * b).sum()
}

fn l2_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Whether some combination has a pole of exact order `t` at `cands[idx]`
/// while holomorphic at every candidate point inside or on the same level
/// curve.
fn order_achievable(
    system: &FunctionSystem,
    m: &MultiIndex,
    cands: &[Candidate],
    idx: usize,
    t: usize,
) -> bool {
    let xi = cands[idx].location;
    let level = cands[idx].level;
    let dim = m.total();

    let mut killing: Vec<Vec<Complex64>> = Vec::new();
    for (j, cand) in cands.iter().enumerate() {
        if j == idx {
            // Kill orders strictly above t at ξ itself.
            for r in t..cand.max_order {
                killing.push(laurent_row(system, m, xi, r));
            }
        } else if cand.level <= level * (1.0 + 1e-12) {
            for r in 0..cand.max_order {
                killing.push(laurent_row(system, m, cand.location, r));
            }
        }
    }

    let functional = laurent_row(system, m, xi, t - 1);
    let scale = l2_norm(&functional);
    if scale == 0.0 {
        return false;
    }
    let basis = constraint_nullspace(&killing, dim);
    basis
        .iter()
        .any(|v| functional_dot(&functional, v).norm() > EXACT_ORDER_TOL * scale)
}

// ---------------------------------------------------------------------------
// Public operations
// ---------------------------------------------------------------------------

/// Computes the system poles of a purely rational system (tails `None` or
/// `Polynomial` only) with respect to **m** on `domain`, by exact linear
/// algebra on Laurent functionals.
///
/// For rational systems every combination is again rational, so no finite
/// singularity barrier exists beyond the killed poles: all radii are `+∞`
/// and the predicted rate is `0` (the exact-recovery phenomenon).
pub fn system_poles_rational(
    system: &FunctionSystem,
    m: &MultiIndex,
    domain: &Domain,
) -> Result<SystemMetadata, AnalysisError> {
    require_rational(system)?;
    m.check_system(system)?;
    system.validate_on(domain)?;
    let cands = collect_candidates(system, Some(domain))?;

    let mut system_poles: Vec<SystemPole> = Vec::new();
    for idx in 0..cands.len() {
        let mut tau = 0usize;
        for t in 1..=cands[idx].max_order {
            if order_achievable(system, m, &cands, idx, t) {
                tau = t;
            } else {
                break;
            }
        }
        if tau > 0 {
            system_poles.push(SystemPole {
                xi: cands[idx].location,
                tau,
                level: cands[idx].level,
                rho: vec![f64::INFINITY; tau],
                bold_rho: f64::INFINITY,
            });
        }
    }

    let total: usize = system_poles.iter().map(|p| p.tau).sum();
    if total > m.total() {
        return Err(AnalysisError::CountBound {
            computed: total,
            bound: m.total(),
        });
    }

    let mut roots = Vec::with_capacity(total);
    for p in &system_poles {
        roots.extend(std::iter::repeat(p.xi).take(p.tau));
    }

    Ok(SystemMetadata {
        system_poles,
        rho_star: vec![f64::INFINITY; system.len()],
        predicted_q: ComplexPoly::from_roots(&roots),
        predicted_rate: 0.0,
        provenance: Provenance::ComputedRational,
    })
}

/// Builds metadata from hand-derived declarations for a system whose radii
/// cannot be computed (transcendental tails), validating them against the
/// definitions: orders at least 1, one radius per order, radii no smaller
/// than the pole's own level, distinct locations, and total order within the
/// dimension bound. `ρ*_α` is derived from the declarations and the
/// singularity structure of each component.
pub fn declared_metadata(
    system: &FunctionSystem,
    m: &MultiIndex,
    domain: &Domain,
    declarations: &[DeclaredPole],
) -> Result<SystemMetadata, AnalysisError> {
    m.check_system(system)?;
    system.validate_on(domain)?;

    let mut system_poles: Vec<SystemPole> = Vec::new();
    for decl in declarations {
        if decl.tau == 0 {
            return Err(AnalysisError::InconsistentDeclaration {
                detail: format!("pole {} declared with order 0", decl.xi),
            });
        }
        if decl.rho.len() != decl.tau {
            return Err(AnalysisError::InconsistentDeclaration {
                detail: format!(
                    "pole {} declares {} radii for order {}",
                    decl.xi,
                    decl.rho.len(),
                    decl.tau
                ),
            });
        }
        let level = match domain.phi(decl.xi) {
            Ok(w) => w.norm(),
            Err(_) => {
                return Err(AnalysisError::InconsistentDeclaration {
                    detail: format!("declared pole {} does not lie outside the domain", decl.xi),
                })
            }
        };
        if system_poles
            .iter()
            .any(|p| p.xi == decl.xi)
        {
            return Err(AnalysisError::InconsistentDeclaration {
                detail: format!("pole {} declared twice", decl.xi),
            });
        }
        let bold_rho = decl.rho.iter().copied().fold(f64::INFINITY, f64::min);
        if !(bold_rho >= level * (1.0 - 1e-12)) {
            return Err(AnalysisError::InconsistentDeclaration {
                detail: format!(
                    "pole {} declares meromorphy radius {} below its own level {}",
                    decl.xi, bold_rho, level
                ),
            });
        }
        system_poles.push(SystemPole {
            xi: decl.xi,
            tau: decl.tau,
            level,
            rho: decl.rho.clone(),
            bold_rho,
        });
    }
    system_poles.sort_by(|a, b| {
        (a.level, a.xi.re, a.xi.im)
            .partial_cmp(&(b.level, b.xi.re, b.xi.im))
            .expect("levels are finite")
    });

    let total: usize = system_poles.iter().map(|p| p.tau).sum();
    if total > m.total() {
        return Err(AnalysisError::InconsistentDeclaration {
            detail: format!(
                "total declared order {} exceeds the dimension bound {}",
                total,
                m.total()
            ),
        });
    }

    let predicted_rate = system_poles
        .iter()
        .map(|p| {
            if p.bold_rho.is_infinite() {
                0.0
            } else {
                p.level / p.bold_rho
            }
        })
        .fold(0.0f64, f64::max);

    let mut roots = Vec::with_capacity(total);
    for p in &system_poles {
        roots.extend(std::iter::repeat(p.xi).take(p.tau));
    }
    let predicted_q = ComplexPoly::from_roots(&roots);

    // ρ*_α: first find ρ_α, the index of the largest canonical domain in
    // which every singularity of F_α is a declared system pole of at least
    // its pole order; branch points and undeclared or under-declared poles
    // cap it. Then take the minimum with 𝛒_{ξ_j, τ̂_j} over the poles ξ_j
    // of F_α inside that domain.
    let mut rho_star = Vec::with_capacity(system.len());
    for f in system.functions() {
        let mut rho_alpha = f64::INFINITY;
        let mut good: Vec<(f64, usize, &SystemPole)> = Vec::new(); // (level, pole order, decl)
        for term in f.rational_part() {
            let level = domain.phi(term.location)?.norm();
            match system_poles.iter().find(|p| p.xi == term.location) {
                Some(p) if term.order() <= p.tau => good.push((level, term.order(), p)),
                _ => rho_alpha = rho_alpha.min(level),
            }
        }
        match f.tail() {
            Tail::LogBranch { branch_point, .. } | Tail::PowBranch { branch_point, .. } => {
                rho_alpha = rho_alpha.min(domain.phi(*branch_point)?.norm());
            }
            _ => {}
        }
        let mut star = rho_alpha;
        for (level, pole_order, p) in good {
            if level < rho_alpha {
                star = star.min(p.bold_rho_at(pole_order));
            }
        }
        rho_star.push(star);
    }

    Ok(SystemMetadata {
        system_poles,
        rho_star,
        predicted_q,
        predicted_rate,
        provenance: Provenance::DeclaredCatalog,
    })
}

/// Whether no nonzero combination `Σ v_α F_α` with `deg v_α < m_α` is a
/// polynomial, decided by the rank of the full pole-Laurent constraint
/// matrix of the combination space. When dependent, the witness is one
/// combination whose poles all cancel.
pub fn polynomial_independence(
    system: &FunctionSystem,
    m: &MultiIndex,
) -> Result<IndependenceReport, AnalysisError> {
    require_rational(system)?;
    m.check_system(system)?;
    let cands = collect_candidates(system, None)?;

    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    for cand in &cands {
        for r in 0..cand.max_order {
            rows.push(laurent_row(system, m, cand.location, r));
        }
    }
    let basis = constraint_nullspace(&rows, m.total());
    if basis.is_empty() {
        return Ok(IndependenceReport {
            independent: true,
            witness: None,
        });
    }

    // Split the first nullspace direction into the coefficient polynomials.
    let v = &basis[0];
    let mut witness = Vec::with_capacity(system.len());
    let mut offset = 0usize;
    for alpha in 0..system.len() {
        let ma = m.component(alpha);
        witness.push(ComplexPoly::new(v[offset..offset + ma].to_vec()));
        offset += ma;
    }
    Ok(IndependenceReport {
        independent: false,
        witness: Some(witness),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcsys::parse_function_expression;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn unit_disk() -> Domain {
        Domain::disk(c(0.0, 0.0), 1.0).unwrap()
    }

    fn system(exprs: &[&str]) -> FunctionSystem {
        FunctionSystem::from_functions(
            exprs
                .iter()
                .map(|e| parse_function_expression(e).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn simple_and_double_pole_give_order_two() {
        let sys = system(&["1/(z-2)", "1/(z-2)^2"]);
        let m = MultiIndex::new(vec![1, 1]).unwrap();
        let meta = system_poles_rational(&sys, &m, &unit_disk()).unwrap();
        assert_eq!(meta.system_poles.len(), 1);
        assert_eq!(meta.system_poles[0].xi, c(2.0, 0.0));
        assert_eq!(meta.system_poles[0].tau, 2);
        assert_eq!(meta.total_order(), 2);
        assert_eq!(meta.predicted_rate, 0.0);
        assert!(meta.system_poles[0].bold_rho.is_infinite());
        // predicted Q = (z-2)^2
        assert!((meta.predicted_q.coeff(0) - c(4.0, 0.0)).norm() <= 1e-12);
        assert!((meta.predicted_q.coeff(1) - c(-4.0, 0.0)).norm() <= 1e-12);
    }

    #[test]
    fn duplicated_function_caps_the_order_at_one() {
        let sys = system(&["1/(z-2)", "1/(z-2)"]);
        let m = MultiIndex::new(vec![1, 1]).unwrap();
        let meta = system_poles_rational(&sys, &m, &unit_disk()).unwrap();
        assert_eq!(meta.system_poles.len(), 1);
        assert_eq!(meta.system_poles[0].tau, 1);
        // Fewer system poles than |m|: the deficiency signal.
        assert!(meta.total_order() < m.total());
    }

    #[test]
    fn high_multi_index_cannot_raise_a_simple_pole() {
        let sys = system(&["1/(z-2)"]);
        let m = MultiIndex::new(vec![2]).unwrap();
        let meta = system_poles_rational(&sys, &m, &unit_disk()).unwrap();
        assert_eq!(meta.system_poles.len(), 1);
        assert_eq!(meta.system_poles[0].tau, 1);
    }

    #[test]
    fn shadowed_pole_is_not_a_system_pole() {
        // F = 1/(z-2) + 1/(z-3), m = (1): any combination cF keeps the pole
        // at 2, so no combination is holomorphic on the closed domain through
        // 3 — the level-3 pole is shadowed and only 2 is a system pole.
        let sys = system(&["1/(z-2) + 1/(z-3)"]);
        let m = MultiIndex::new(vec![1]).unwrap();
        let meta = system_poles_rational(&sys, &m, &unit_disk()).unwrap();
        assert_eq!(meta.system_poles.len(), 1);
        assert_eq!(meta.system_poles[0].xi, c(2.0, 0.0));
        assert_eq!(meta.system_poles[0].tau, 1);
    }

    #[test]
    fn two_separate_poles_are_both_found() {
        let sys = system(&["1/(z-2)", "1/(z-3)"]);
        let m = MultiIndex::new(vec![1, 1]).unwrap();
        let meta = system_poles_rational(&sys, &m, &unit_disk()).unwrap();
        assert_eq!(meta.system_poles.len(), 2);
        assert_eq!(meta.system_poles[0].xi, c(2.0, 0.0));
        assert_eq!(meta.system_poles[1].xi, c(3.0, 0.0));
        assert_eq!(meta.total_order(), 2);
    }

    #[test]
    fn non_rational_system_is_rejected() {
        let sys = system(&["1/(z-2) + log(z-4)"]);
        let m = MultiIndex::new(vec![1]).unwrap();
        assert!(matches!(
            system_poles_rational(&sys, &m, &unit_disk()),
            Err(AnalysisError::NonRationalSystem { alpha: 0 })
        ));
    }

    #[test]
    fn independence_of_distinct_poles() {
        let sys = system(&["1/(z-2)", "1/(z-3)"]);
        let m = MultiIndex::new(vec![1, 1]).unwrap();
        let report = polynomial_independence(&sys, &m).unwrap();
        assert!(report.independent);
        assert!(report.witness.is_none());
    }

    #[test]
    fn duplicated_function_is_dependent_with_difference_witness() {
        let sys = system(&["1/(z-2)", "1/(z-2)"]);
        let m = MultiIndex::new(vec![1, 1]).unwrap();
        let report = polynomial_independence(&sys, &m).unwrap();
        assert!(!report.independent);
        let w = report.witness.unwrap();
        // Witness (a, -a): the residues cancel.
        let a = w[0].coeff(0);
        let b = w[1].coeff(0);
        assert!(a.norm() > 0.1);
        assert!((a + b).norm() <= 1e-9);
    }

    #[test]
    fn residue_cancellation_is_detected() {
        // F2 = z/(z-2) = 1 + 2/(z-2): residues 1 and 2 at z = 2, so
        // 2·F1 − F2 is a polynomial.
        let sys = system(&["1/(z-2)", "poly(1) + 2/(z-2)"]);
        let m = MultiIndex::new(vec![1, 1]).unwrap();
        let report = polynomial_independence(&sys, &m).unwrap();
        assert!(!report.independent);
        let w = report.witness.unwrap();
        let a = w[0].coeff(0);
        let b = w[1].coeff(0);
        // (v1, v2) proportional to (2, -1).
        assert!((a - 2.0 * (-b)).norm() <= 1e-9 * (1.0 + a.norm()), "a={a}, b={b}");
    }

    #[test]
    fn declared_disk_example_predicts_one_half() {
        let sys = system(&["1/(z-2) + log(z-4)"]);
        let m = MultiIndex::new(vec![1]).unwrap();
        let decls = vec![DeclaredPole {
            xi: c(2.0, 0.0),
            tau: 1,
            rho: vec![4.0],
        }];
        let meta = declared_metadata(&sys, &m, &unit_disk(), &decls).unwrap();
        assert_eq!(meta.provenance, Provenance::DeclaredCatalog);
        assert!((meta.predicted_rate - 0.5).abs() <= 1e-12);
        assert!((meta.rho_star[0] - 4.0).abs() <= 1e-12);
        assert!((meta.predicted_q.coeff(0) - c(-2.0, 0.0)).norm() <= 1e-12);
    }

    #[test]
    fn declared_segment_example_matches_joukowski_levels() {
        let domain = Domain::segment(c(-1.0, 0.0), c(1.0, 0.0)).unwrap();
        let sys = system(&["1/(z-2) + log(z-5)"]);
        let m = MultiIndex::new(vec![1]).unwrap();
        let level5 = domain.phi(c(5.0, 0.0)).unwrap().norm();
        let decls = vec![DeclaredPole {
            xi: c(2.0, 0.0),
            tau: 1,
            rho: vec![level5],
        }];
        let meta = declared_metadata(&sys, &m, &domain, &decls).unwrap();
        let expected = (2.0 + 3.0f64.sqrt()) / (5.0 + 24.0f64.sqrt());
        assert!(
            (meta.predicted_rate - expected).abs() <= 1e-10,
            "rate {} vs {}",
            meta.predicted_rate,
            expected
        );
    }

    #[test]
    fn radius_below_own_level_is_inconsistent() {
        let sys = system(&["1/(z-2) + log(z-4)"]);
        let m = MultiIndex::new(vec![1]).unwrap();
        let decls = vec![DeclaredPole {
            xi: c(2.0, 0.0),
            tau: 1,
            rho: vec![1.5],
        }];
        assert!(matches!(
            declared_metadata(&sys, &m, &unit_disk(), &decls),
            Err(AnalysisError::InconsistentDeclaration { .. })
        ));
    }

    #[test]
    fn over_declared_total_order_is_inconsistent() {
        let sys = system(&["1/(z-2) + log(z-4)"]);
        let m = MultiIndex::new(vec![1]).unwrap();
        let decls = vec![DeclaredPole {
            xi: c(2.0, 0.0),
            tau: 2,
            rho: vec![4.0, 4.0],
        }];
        assert!(matches!(
            declared_metadata(&sys, &m, &unit_disk(), &decls),
            Err(AnalysisError::InconsistentDeclaration { .. })
        ));
    }

    #[test]
    fn undeclared_pole_caps_rho_star() {
        // Two poles, only the nearer declared: ρ*_α stops at the undeclared
        // one's level.
        let sys = system(&["1/(z-2) + 1/(z-3) + log(z-5)"]);
        let m = MultiIndex::new(vec![2]).unwrap();
        let decls = vec![DeclaredPole {
            xi: c(2.0, 0.0),
            tau: 1,
            rho: vec![3.0],
        }];
        let meta = declared_metadata(&sys, &m, &unit_disk(), &decls).unwrap();
        assert!((meta.rho_star[0] - 3.0).abs() <= 1e-12);
    }

    #[test]
    fn bold_rho_is_the_running_minimum() {
        // Exact order 1 at 2 forces the combination onto F1 alone (barrier
        // 6); exact order 2 forces F2 in (barrier 4): ρ = [6, 4].
        let sys = system(&["1/(z-2) + log(z-6)", "1/(z-2)^2 + log(z-4)"]);
        let m = MultiIndex::new(vec![1, 1]).unwrap();
        let decls = vec![DeclaredPole {
            xi: c(2.0, 0.0),
            tau: 2,
            rho: vec![6.0, 4.0],
        }];
        let meta = declared_metadata(&sys, &m, &unit_disk(), &decls).unwrap();
        let p = meta.pole_near(c(2.0, 0.0)).unwrap();
        assert_eq!(p.bold_rho_at(1), 6.0);
        assert_eq!(p.bold_rho_at(2), 4.0);
        assert_eq!(p.bold_rho, 4.0);
        assert!((meta.predicted_rate - 0.5).abs() <= 1e-12);
        // Component barriers: F1 sees 𝛒_{2,1}∧6 = 6, F2 sees 𝛒_{2,2}∧4 = 4.
        assert!((meta.rho_star[0] - 6.0).abs() <= 1e-12);
        assert!((meta.rho_star[1] - 4.0).abs() <= 1e-12);
    }
}
