//! Simultaneous Padé–Faber approximants: assembling and solving the defining
//! linear system, numerator reconstruction, and the incomplete variant.
//!
//! For a system **F** = (F_1,…,F_d) and multi-index **m**, the degree-n
//! approximant is a nonzero polynomial `Q` with `deg Q ≤ |m|` such that the
//! Faber expansion of `z^k·Q·F_α` has vanishing coefficient at index `n` for
//! every α and every `k = 0..m_α−1`, together with numerators `P_{α,k}` that
//! truncate those expansions at index `n−1`. The full homogeneous system of
//! `(n+1)|m|` equations reduces analytically to these `|m|` constraints: the
//! numerator coefficients absorb every index below `n`, so only the index-n
//! conditions constrain `Q`. This gives an `|m| × (|m|+1)` nullspace problem
//! per degree instead of one of dimension `(n+1)|m|`.
//!
//! The nullspace is computed by singular value decomposition of the
//! row-balanced matrix, padded with structurally zero rows to a square shape
//! so that the full right singular basis is available. The returned
//! representative is the minimum-norm monic element of the nullspace when a
//! monic element exists, and the smallest-singular-value direction with the
//! unit coefficient-sum normalization otherwise.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::conformal::{ConformalError, Domain};
use crate::faber::{
    default_node_count, default_rho, faber_coefficients_from_samples, faber_polynomials,
    FaberBasis, FaberCoefficients, FaberError,
};
use crate::funcsys::{FunctionError, FunctionSystem, MultiIndex};
use crate::poly::ComplexPoly;

/// Relative rank tolerance of the nullspace solve: singular values at or
/// below `RANK_TOL · σ_max` count as zero. Quadrature delivers entries to
/// roughly 1e−12 relative accuracy, so 1e−9 separates genuine rank
/// deficiency from noise with three decades of margin.
pub const RANK_TOL: f64 = 1e-9;

/// Threshold on the leading coefficient below which the monic normalization
/// is abandoned for the unit-sum one.
pub const MONIC_TOL: f64 = 1e-8;

/// Errors from assembling or solving the approximation problem.
#[derive(Debug, Clone, PartialEq)]
pub enum ApproximantError {
    /// Quadrature failure (divergent contour, singular node, bad settings).
    Faber(FaberError),
    /// Structural problem with the system or multi-index.
    Function(FunctionError),
    /// Conformal-map failure while validating singularity levels.
    Conformal(ConformalError),
    /// The sampling level is at or beyond the first singularity of the
    /// system; coefficients of index n would not converge.
    RhoBeyondSingularity { rho: f64, level: f64 },
    /// The incomplete variant requires `1 ≤ m_star ≤ m`.
    IncompatibleOrders { m: usize, m_star: usize },
    /// Approximants are defined for degree `n ≥ 1`.
    BadDegree { n: usize },
    /// Evaluation of `P/Q` at a zero of the denominator.
    DenominatorZero { at: Complex64 },
}

impl fmt::Display for ApproximantError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ApproximantError::Faber(e) => write!(f, "{e}"),
            ApproximantError::Function(e) => write!(f, "{e}"),
            ApproximantError::Conformal(e) => write!(f, "{e}"),
            ApproximantError::RhoBeyondSingularity { rho, level } => write!(
                f,
                "sampling level rho = {rho} reaches the first singularity level {level}"
            ),
            ApproximantError::IncompatibleOrders { m, m_star } => {
                write!(f, "incomplete orders must satisfy 1 <= m* <= m (got m = {m}, m* = {m_star})")
            }
            ApproximantError::BadDegree { n } => {
                write!(f, "approximant degree must be at least 1 (got {n})")
            }
            ApproximantError::DenominatorZero { at } => {
                write!(f, "denominator vanishes at {at}")
            }
        }
    }
}

impl std::error::Error for ApproximantError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            ApproximantError::Faber(e) => Some(e),
            ApproximantError::Function(e) => Some(e),
            ApproximantError::Conformal(e) => Some(e),
            _ => None,
        }
    }
}

impl From<FaberError> for ApproximantError {
    fn from(e: FaberError) -> Self {
        ApproximantError::Faber(e)
    }
}

impl From<FunctionError> for ApproximantError {
    fn from(e: FunctionError) -> Self {
        ApproximantError::Function(e)
    }
}

impl From<ConformalError> for ApproximantError {
    fn from(e: ConformalError) -> Self {
        ApproximantError::Conformal(e)
    }
}

/// Where and how to integrate: the domain plus optional overrides for the
/// contour level and node count. `None` fields resolve to defaults —
/// the geometric-mean level between the boundary and the first singularity,
/// and a node count padded well past the largest coefficient index.
#[derive(Debug, Clone)]
pub struct QuadratureSettings {
    pub domain: Domain,
    pub rho: Option<f64>,
    pub node_count: Option<usize>,
}

impl QuadratureSettings {
    /// Settings with all defaults for a domain.
    pub fn new(domain: Domain) -> Self {
        QuadratureSettings {
            domain,
            rho: None,
            node_count: None,
        }
    }

    /// Overrides the contour level.
    pub fn with_rho(mut self, rho: f64) -> Self {
        self.rho = Some(rho);
        self
    }

    /// Overrides the quadrature node count (must be a power of two).
    pub fn with_node_count(mut self, node_count: usize) -> Self {
        self.node_count = Some(node_count);
        self
    }
}

/// Precomputed Faber-coefficient tables for one system on one contour:
/// everything the solves for all degrees `n ≤ n_max` need. Each component
/// function is sampled on the contour exactly once; monomial factors are
/// applied at the nodes.
pub struct SolveContext {
    domain: Domain,
    rho: f64,
    node_count: usize,
    count: usize,
    /// `tables[alpha][p]` holds the coefficients of `z^p · F_α`.
    tables: Vec<Vec<FaberCoefficients>>,
    basis: FaberBasis,
}

impl SolveContext {
    /// Builds tables for powers `0..=max_power[alpha]` of each component,
    /// with coefficient indices `0..=n_max`.
    pub fn with_powers(
        system: &FunctionSystem,
        max_powers: &[usize],
        n_max: usize,
        quad: &QuadratureSettings,
    ) -> Result<Self, ApproximantError> {
        assert_eq!(max_powers.len(), system.len());
        system.validate_on(&quad.domain)?;
        let level = system.singularity_level(&quad.domain)?;
        let rho = quad.rho.unwrap_or_else(|| default_rho(level));
        if let Some(level) = level {
            if rho >= level {
                return Err(ApproximantError::RhoBeyondSingularity { rho, level });
            }
        }
        let count = n_max + 1;
        let node_count = quad
            .node_count
            .unwrap_or_else(|| default_node_count(count));
        let sample = quad.domain.sample_level_curve(rho, node_count)?;

        let mut tables = Vec::with_capacity(system.len());
        for (alpha, f) in system.functions().iter().enumerate() {
            // One evaluation of F_α per node; poles or cuts on the contour
            // surface as non-finite samples.
            let nan = Complex64::new(f64::NAN, 0.0);
            let f_values: Vec<Complex64> = sample
                .points
                .iter()
                .map(|&z| f.evaluate(z).unwrap_or(nan))
                .collect();
            let mut powers = Vec::with_capacity(max_powers[alpha] + 1);
            let mut values = f_values;
            for p in 0..=max_powers[alpha] {
                if p > 0 {
                    for (v, &z) in values.iter_mut().zip(sample.points.iter()) {
                        *v *= z;
                    }
                }
                powers.push(faber_coefficients_from_samples(&sample, &values, count)?);
            }
            tables.push(powers);
        }

        let basis = faber_polynomials(&quad.domain, n_max.max(1));
        Ok(SolveContext {
            domain: quad.domain.clone(),
            rho,
            node_count,
            count,
            tables,
            basis,
        })
    }

    /// Builds the context needed for simultaneous approximants of every
    /// degree up to `n_max`: component α needs powers up to `|m| + m_α − 1`.
    pub fn new(
        system: &FunctionSystem,
        m: &MultiIndex,
        n_max: usize,
        quad: &QuadratureSettings,
    ) -> Result<Self, ApproximantError> {
        m.check_system(system)?;
        let total = m.total();
        let max_powers: Vec<usize> = m.components().iter().map(|&ma| total + ma - 1).collect();
        SolveContext::with_powers(system, &max_powers, n_max, quad)
    }

    /// The Faber coefficient `[z^p F_α]_ℓ`.
    pub fn coefficient(&self, alpha: usize, power: usize, ell: usize) -> Complex64 {
        self.tables[alpha][power].value(ell)
    }

    /// Largest degree `n` this context can solve.
    pub fn max_n(&self) -> usize {
        self.count - 1
    }

    /// The resolved contour level.
    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// The resolved node count.
    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// The domain of approximation.
    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// The Faber basis up to degree `max_n` (used for numerators).
    pub fn basis(&self) -> &FaberBasis {
        &self.basis
    }
}

/// The reduced linear system for the denominator at one degree.
#[derive(Debug, Clone)]
pub struct DenominatorMatrix {
    /// `entries[row][j] = [z^{j+k} F_α]_n` for `row` labeled `(α, k)`;
    /// every row has one more column than the number of rows of the
    /// simultaneous problem (columns `j = 0..=deg_bound`).
    pub entries: Vec<Vec<Complex64>>,
    /// Row labels `(alpha, k)` with 0-based component index α.
    pub row_labels: Vec<(usize, usize)>,
    /// The coefficient index n at which the constraints are imposed.
    pub n: usize,
}

impl DenominatorMatrix {
    /// Number of columns, `deg_bound + 1`.
    pub fn cols(&self) -> usize {
        self.entries.first().map_or(0, |r| r.len())
    }

    /// Largest entry magnitude (the natural residual scale).
    pub fn scale(&self) -> f64 {
        self.entries
            .iter()
            .flat_map(|r| r.iter())
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}

/// Normalization carried by a solved denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Leading coefficient exactly 1.
    Monic,
    /// Coefficient moduli sum to 1, largest-modulus coefficient rotated to
    /// the positive real axis.
    UnitSum,
}

/// Outcome of the nullspace solve for one degree.
#[derive(Debug, Clone)]
pub struct DenominatorSolution {
    /// The denominator polynomial built from `coefficients`.
    pub denominator: ComplexPoly,
    /// The normalized coefficient vector λ_0..λ_{cols−1} (kept separately
    /// because the polynomial strips trailing zeros).
    pub coefficients: Vec<Complex64>,
    /// Which normalization was applied.
    pub normalization: Normalization,
    /// Whether the nullspace is one-dimensional at the rank tolerance.
    pub unique: bool,
    /// Dimension of the nullspace at the rank tolerance.
    pub nullity: usize,
    /// Singular values of the row-balanced system, descending.
    pub singular_values: Vec<f64>,
}

/// Builds the reduced `|m| × (|m|+1)` system at degree `n` from a context.
pub fn denominator_matrix_from_context(
    ctx: &SolveContext,
    m: &MultiIndex,
    n: usize,
) -> Result<DenominatorMatrix, ApproximantError> {
    if n == 0 {
        return Err(ApproximantError::BadDegree { n });
    }
    assert!(n <= ctx.max_n(), "context holds coefficients up to {}", ctx.max_n());
    let total = m.total();
    let mut entries = Vec::with_capacity(total);
    let mut row_labels = Vec::with_capacity(total);
    for (alpha, &ma) in m.components().iter().enumerate() {
        for k in 0..ma {
            let row: Vec<Complex64> = (0..=total)
                .map(|j| ctx.coefficient(alpha, j + k, n))
                .collect();
            entries.push(row);
            row_labels.push((alpha, k));
        }
    }
    Ok(DenominatorMatrix {
        entries,
        row_labels,
        n,
    })
}

/// Assembles the reduced defining system for one degree. Standalone
/// entry point: builds a fresh context. Callers solving many degrees should
/// build one [`SolveContext`] and use [`denominator_matrix_from_context`].
pub fn denominator_matrix(
    system: &FunctionSystem,
    m: &MultiIndex,
    n: usize,
    quad: &QuadratureSettings,
) -> Result<DenominatorMatrix, ApproximantError> {
    let ctx = SolveContext::new(system, m, n.max(1), quad)?;
    denominator_matrix_from_context(&ctx, m, n)
}

/// Solves the homogeneous system for a denominator.
///
/// Rows are balanced to unit max-norm, the matrix is padded with zero rows to
/// a square shape (which adds exactly `cols − rows` structural zero singular
/// values and leaves the nullspace unchanged), and the full SVD of the padded
/// matrix yields the nullspace basis: right singular vectors whose singular
/// value is at most [`RANK_TOL`] times the largest.
pub fn solve_denominator(matrix: &DenominatorMatrix) -> DenominatorSolution {
    let rows = matrix.entries.len();
    let cols = matrix.cols().max(rows + 1);

    let mut padded = DMatrix::<Complex64>::zeros(cols, cols);
    for (i, row) in matrix.entries.iter().enumerate() {
        let scale = row.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
        let s = if scale > 0.0 { 1.0 / scale } else { 1.0 };
        for (j, &v) in row.iter().enumerate() {
            padded[(i, j)] = v * s;
        }
    }

    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("V^T was requested");
    // Defensive sort: descending singular values with their vectors.
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .partial_cmp(&svd.singular_values[a])
            .expect("singular values are finite")
    });
    let sigma: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    // Right singular vector for sorted position j.
    let vector = |j: usize| -> Vec<Complex64> {
        let row = order[j];
        (0..cols).map(|i| v_t[(row, i)].conj()).collect()
    };

    let sigma_max = sigma[0];
    let tol = RANK_TOL * sigma_max;
    let mut null_positions: Vec<usize> = (0..cols).filter(|&j| sigma[j] <= tol).collect();
    if null_positions.is_empty() {
        // Cannot happen with the zero-row padding, but stay total.
        null_positions.push(cols - 1);
    }
    let nullity = null_positions.len();
    let unique = nullity == 1;

    // Projection of the top-coefficient axis onto the nullspace: the
    // minimum-norm monic candidate (up to scaling).
    let e_top = cols - 1;
    let mut projection = vec![Complex64::new(0.0, 0.0); cols];
    let mut projection_weight = 0.0f64;
    for &j in &null_positions {
        let x = vector(j);
        let y = x[e_top].conj();
        projection_weight += y.norm_sqr();
        for (p, &xi) in projection.iter_mut().zip(x.iter()) {
            *p += y * xi;
        }
    }
    let candidate: Vec<Complex64> = if projection_weight.sqrt() > MONIC_TOL {
        projection
    } else {
        vector(*null_positions.last().expect("at least one null direction"))
    };

    // Normalization switch.
    let max_abs = candidate.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    let top = candidate[e_top];
    let (coefficients, normalization) = if top.norm() > MONIC_TOL * max_abs {
        let inv = top.inv();
        (
            candidate.iter().map(|&c| c * inv).collect::<Vec<_>>(),
            Normalization::Monic,
        )
    } else {
        let sum: f64 = candidate.iter().map(|c| c.norm()).sum();
        let scaled: Vec<Complex64> = candidate.iter().map(|&c| c / sum).collect();
        let arg_max = scaled
            .iter()
            .enumerate()
            .max_by(|a, b| {
                a.1.norm()
                    .partial_cmp(&b.1.norm())
                    .expect("coefficient moduli are finite")
            })
            .map(|(i, _)| i)
            .expect("nonempty coefficient vector");
        let phase = Complex64::from_polar(1.0, -scaled[arg_max].arg());
        (
            scaled.iter().map(|&c| c * phase).collect::<Vec<_>>(),
            Normalization::UnitSum,
        )
    };

    // Report the singular values of the unpadded system: all but the
    // structural zeros contributed by the padding rows.
    let structural = cols - rows.min(cols);
    let reported = sigma[..cols - structural].to_vec();

    DenominatorSolution {
        denominator: ComplexPoly::new(coefficients.clone()),
        coefficients,
        normalization,
        unique,
        nullity,
        singular_values: reported,
    }
}

/// A complete `(n, m)` approximant: denominator, numerators, and solve
/// diagnostics.
#[derive(Debug, Clone)]
pub struct PadeFaberResult {
    /// Expansion degree n.
    pub n: usize,
    /// The multi-index **m** (a single component for the incomplete variant).
    pub m: MultiIndex,
    /// For the incomplete variant, the number of enforced constraints m*.
    pub m_star: Option<usize>,
    /// The denominator `Q_{n,m}`.
    pub denominator: ComplexPoly,
    /// Normalized coefficient vector of the denominator (length `|m|+1`).
    pub denominator_coefficients: Vec<Complex64>,
    /// Which normalization the denominator carries.
    pub normalization: Normalization,
    /// Numerators `P_{n,m,k,α}` in monomial form, keyed by `(α, k)`.
    pub numerators: BTreeMap<(usize, usize), ComplexPoly>,
    /// The same numerators as Faber coefficient vectors `[z^k Q F_α]_ℓ`,
    /// `ℓ = 0..n−1` (the stable evaluation path).
    pub numerator_faber: BTreeMap<(usize, usize), Vec<Complex64>>,
    /// Whether the denominator was unique at the rank tolerance.
    pub unique: bool,
    /// Nullspace dimension at the rank tolerance.
    pub nullity: usize,
    /// Singular values of the row-balanced defining system, descending.
    pub singular_values: Vec<f64>,
    /// Largest residual `|[Q z^k F_α]_n|` over all rows, evaluated with the
    /// unit-sum scaling of `Q` against the raw (unbalanced) matrix.
    pub defect: f64,
    /// The natural scale for `defect`: the largest matrix entry magnitude.
    pub defect_scale: f64,
    /// Domain of approximation (needed for stable evaluation).
    pub domain: Domain,
}

impl PadeFaberResult {
    /// The rational approximant `R_α = P_{α,0}/Q` at `z`, evaluated through
    /// the Faber-coefficient form of the numerator (stable at high degree).
    pub fn evaluate(&self, alpha: usize, z: Complex64) -> Result<Complex64, ApproximantError> {
        self.evaluate_power(alpha, 0, z)
    }

    /// `P_{α,k}/Q` at `z` — the approximant of `z^k F_α` for any of the
    /// stored power rows.
    ///
    /// # Panics
    /// Panics when `(alpha, k)` is not one of the constraint rows of this
    /// solve.
    pub fn evaluate_power(
        &self,
        alpha: usize,
        k: usize,
        z: Complex64,
    ) -> Result<Complex64, ApproximantError> {
        let weights = self
            .numerator_faber
            .get(&(alpha, k))
            .expect("numerator for a stored (alpha, k) row");
        let q = self.denominator.eval(z);
        // Relative cancellation test: compare |Q(z)| against the magnitude
        // the evaluation passes through.
        let q_scale: f64 = self
            .denominator_coefficients
            .iter()
            .enumerate()
            .map(|(j, c)| c.norm() * z.norm().powi(j as i32))
            .sum();
        if q.norm() <= 1e-12 * q_scale.max(f64::MIN_POSITIVE) {
            return Err(ApproximantError::DenominatorZero { at: z });
        }
        let p = evaluate_faber_combination(&self.domain, weights, z);
        Ok(p / q)
    }
}

/// Evaluates `Σ_ℓ w_ℓ Φ_ℓ(z)` by the point recurrence.
fn evaluate_faber_combination(domain: &Domain, weights: &[Complex64], z: Complex64) -> Complex64 {
    if weights.is_empty() {
        return Complex64::new(0.0, 0.0);
    }
    let values = crate::faber::eval_faber_at(domain, weights.len() - 1, z);
    weights
        .iter()
        .zip(values.iter())
        .map(|(&w, &phi)| w * phi)
        .sum()
}

/// The Faber coefficients `[z^k Q F_α]_ℓ` for `ℓ = 0..=upto`, assembled from
/// the context tables by linearity.
fn combination_coefficients(
    ctx: &SolveContext,
    q: &[Complex64],
    alpha: usize,
    k: usize,
    upto: usize,
) -> Vec<Complex64> {
    (0..=upto)
        .map(|ell| {
            q.iter()
                .enumerate()
                .map(|(j, &qj)| qj * ctx.coefficient(alpha, j + k, ell))
                .sum()
        })
        .collect()
}

/// Builds the numerator `P = Σ_{ℓ=0}^{n−1} [z^k Q F_α]_ℓ Φ_ℓ` in monomial
/// form from a context, together with its Faber coefficient vector.
fn numerator_from_context(
    ctx: &SolveContext,
    q: &[Complex64],
    n: usize,
    alpha: usize,
    k: usize,
) -> (ComplexPoly, Vec<Complex64>) {
    if n == 0 {
        return (ComplexPoly::zero(), Vec::new());
    }
    let weights = combination_coefficients(ctx, q, alpha, k, n - 1);
    let mut p = ComplexPoly::zero();
    for (ell, &w) in weights.iter().enumerate() {
        if w != Complex64::new(0.0, 0.0) {
            p = p.add(&ctx.basis().poly(ell).scale(w));
        }
    }
    (p, weights)
}

/// The numerator `P_{n,m,k,α} = Σ_{ℓ=0}^{n−1} [z^k Q F_α]_ℓ Φ_ℓ` as a
/// polynomial of degree ≤ n−1.
pub fn numerator(
    system: &FunctionSystem,
    q: &ComplexPoly,
    n: usize,
    alpha: usize,
    k: usize,
    quad: &QuadratureSettings,
) -> Result<ComplexPoly, ApproximantError> {
    let deg_q = q.degree().unwrap_or(0);
    let max_powers: Vec<usize> = (0..system.len())
        .map(|a| if a == alpha { deg_q + k } else { 0 })
        .collect();
    let ctx = SolveContext::with_powers(system, &max_powers, n.max(1), quad)?;
    let q_coeffs: Vec<Complex64> = (0..=deg_q).map(|j| q.coeff(j)).collect();
    Ok(numerator_from_context(&ctx, &q_coeffs, n, alpha, k).0)
}

/// Solves the full `(n, m)` problem from a prepared context: matrix, SVD
/// nullspace, numerators for every `(α, k)`, and diagnostics.
pub fn simultaneous_pade_faber_from_context(
    ctx: &SolveContext,
    m: &MultiIndex,
    n: usize,
) -> Result<PadeFaberResult, ApproximantError> {
    let matrix = denominator_matrix_from_context(ctx, m, n)?;
    let solution = solve_denominator(&matrix);
    assemble_result(ctx, m, None, n, &matrix, solution)
}

fn assemble_result(
    ctx: &SolveContext,
    m: &MultiIndex,
    m_star: Option<usize>,
    n: usize,
    matrix: &DenominatorMatrix,
    solution: DenominatorSolution,
) -> Result<PadeFaberResult, ApproximantError> {
    // Residual of the defining constraints with the unit-sum scaling.
    let sum: f64 = solution.coefficients.iter().map(|c| c.norm()).sum();
    let defect = if sum > 0.0 {
        matrix
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .zip(solution.coefficients.iter())
                    .map(|(&a, &l)| a * (l / sum))
                    .sum::<Complex64>()
                    .norm()
            })
            .fold(0.0f64, f64::max)
    } else {
        0.0
    };

    let mut numerators = BTreeMap::new();
    let mut numerator_faber = BTreeMap::new();
    for &(alpha, k) in &matrix.row_labels {
        let (p, w) = numerator_from_context(ctx, &solution.coefficients, n, alpha, k);
        numerators.insert((alpha, k), p);
        numerator_faber.insert((alpha, k), w);
    }

    Ok(PadeFaberResult {
        n,
        m: m.clone(),
        m_star,
        denominator: solution.denominator,
        denominator_coefficients: solution.coefficients,
        normalization: solution.normalization,
        numerators,
        numerator_faber,
        unique: solution.unique,
        nullity: solution.nullity,
        singular_values: solution.singular_values,
        defect,
        defect_scale: matrix.scale(),
        domain: ctx.domain().clone(),
    })
}

/// Computes the `(n, m)` simultaneous Padé–Faber approximant of a system.
pub fn simultaneous_pade_faber(
    system: &FunctionSystem,
    m: &MultiIndex,
    n: usize,
    quad: &QuadratureSettings,
) -> Result<PadeFaberResult, ApproximantError> {
    let ctx = SolveContext::new(system, m, n.max(1), quad)?;
    simultaneous_pade_faber_from_context(&ctx, m, n)
}

/// Computes the incomplete `(n, m, m*)` Padé–Faber approximant of a single
/// function: `deg Q ≤ m`, constraints `[z^k Q F]_n = 0` for `k = 0..m*−1`
/// only. The solution set has dimension ≥ `m − m* + 1`; the returned
/// representative is the minimum-norm monic element.
pub fn incomplete_pade_faber(
    f: &crate::funcsys::MeromorphicFunction,
    m: usize,
    m_star: usize,
    n: usize,
    quad: &QuadratureSettings,
) -> Result<PadeFaberResult, ApproximantError> {
    if m_star == 0 || m_star > m {
        return Err(ApproximantError::IncompatibleOrders { m, m_star });
    }
    if n == 0 {
        return Err(ApproximantError::BadDegree { n });
    }
    let system = FunctionSystem::from_functions(vec![f.clone()])?;
    let ctx = SolveContext::with_powers(&system, &[m + m_star - 1], n, quad)?;

    let mut entries = Vec::with_capacity(m_star);
    let mut row_labels = Vec::with_capacity(m_star);
    for k in 0..m_star {
        let row: Vec<Complex64> = (0..=m).map(|j| ctx.coefficient(0, j + k, n)).collect();
        entries.push(row);
        row_labels.push((0usize, k));
    }
    let matrix = DenominatorMatrix {
        entries,
        row_labels: row_labels.clone(),
        n,
    };
    let solution = solve_denominator(&matrix);

    // Only the k = 0 numerator is part of the incomplete approximant.
    let reduced = DenominatorMatrix {
        entries: matrix.entries.clone(),
        row_labels: vec![(0, 0)],
        n,
    };
    let m_index = MultiIndex::new(vec![m])?;
    let mut result = assemble_result(&ctx, &m_index, Some(m_star), n, &reduced, solution)?;
    // The defect must still be measured against every enforced constraint.
    let sum: f64 = result
        .denominator_coefficients
        .iter()
        .map(|c| c.norm())
        .sum();
    if sum > 0.0 {
        result.defect = matrix
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .zip(result.denominator_coefficients.iter())
                    .map(|(&a, &l)| a * (l / sum))
                    .sum::<Complex64>()
                    .norm()
            })
            .fold(0.0f64, f64::max);
        result.defect_scale = matrix.scale();
    }
    Ok(result)
}

/// Evaluates `R_α = P_{α,0}/Q` at `z`.
pub fn evaluate_approximant(
    result: &PadeFaberResult,
    alpha: usize,
    z: Complex64,
) -> Result<Complex64, ApproximantError> {
    result.evaluate(alpha, z)
}
