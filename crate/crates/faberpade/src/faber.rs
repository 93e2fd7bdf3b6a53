//! Faber polynomials and Faber coefficients on canonical compact sets.
//!
//! For a domain `E` with exterior map `Ψ(w) = cap·w + c_0 + c_1/w + …`, the
//! Faber polynomial `Φ_n` is the polynomial part of `Φ(z)^n`. Matching
//! Laurent expansions at infinity yields a three-term-style recurrence driven
//! directly by the finitely many map coefficients:
//!
//! ```text
//! Φ_0 = 1,    Φ_1 = (z − c_0)/cap,
//! Φ_j = [ (z − c_0)·Φ_{j−1} − Σ_{k=1}^{j−1} c_k·Φ_{j−1−k} − (j−1)·c_{j−1} ] / cap.
//! ```
//!
//! Faber coefficients of a function `G` analytic in a neighbourhood of `E`
//! are contour integrals over a level curve `Γ_ρ`; substituting `z = Ψ(w)`
//! turns them into plain Fourier coefficients of `w ↦ G(Ψ(ρ·e^{iθ}))`, which
//! are computed here with an FFT:
//!
//! ```text
//! [G]_n = ρ^{−n} · (1/N) Σ_k G(Ψ(ρ·e^{iθ_k})) e^{−i n θ_k},   θ_k = 2πk/N.
//! ```
//!
//! The module stores the raw Fourier data together with `ρ` so that
//! magnitudes like `ρ^{−n}` never have to be formed when only logarithms are
//! needed (rate fits), and evaluates partial sums by running the recurrence
//! on point values, which is numerically stable where expanded monomial
//! coefficients are not.

use std::fmt;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::analysis::fit_geometric_rate;
use crate::conformal::{ConformalError, Domain};
use crate::poly::ComplexPoly;

/// Minimum number of coefficients required by [`estimate_rho0`].
pub const RHO0_MIN_COEFFICIENTS: usize = 32;

/// Errors from Faber coefficient computation and expansion analysis.
#[derive(Debug, Clone, PartialEq)]
pub enum FaberError {
    /// Sampling the level curve failed (bad `rho` or node count).
    Conformal(ConformalError),
    /// An operation needed more coefficients than are available.
    TooFewCoefficients { have: usize, need: usize },
    /// The requested coefficient count is too large for the node count;
    /// `count` must not exceed half the number of quadrature nodes.
    TooManyCoefficients { count: usize, node_count: usize },
    /// The integrand was non-finite at a quadrature node (pole or branch cut
    /// on the contour).
    NonFiniteSample { index: usize, at: Complex64 },
    /// Trailing coefficients depend on the quadrature resolution, which
    /// signals that the integrand is not analytic in the closed annulus up
    /// to the sampling level curve: the coefficient integrals diverge and a
    /// smaller `rho` is required.
    QuadratureDivergence { rho: f64 },
}

impl fmt::Display for FaberError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FaberError::Conformal(e) => write!(f, "{e}"),
            FaberError::TooFewCoefficients { have, need } => {
                write!(f, "too few Faber coefficients: have {have}, need {need}")
            }
            FaberError::TooManyCoefficients { count, node_count } => write!(
                f,
                "coefficient count {count} exceeds half the node count {node_count}"
            ),
            FaberError::NonFiniteSample { index, at } => write!(
                f,
                "integrand is not finite at quadrature node {index} (z = {at})"
            ),
            FaberError::QuadratureDivergence { rho } => write!(
                f,
                "trailing coefficients are resolution-dependent at rho = {rho}: \
                 the integrand is singular inside the level curve, choose a smaller rho"
            ),
        }
    }
}

impl std::error::Error for FaberError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            FaberError::Conformal(e) => Some(e),
            _ => None,
        }
    }
}

impl From<ConformalError> for FaberError {
    fn from(e: ConformalError) -> Self {
        FaberError::Conformal(e)
    }
}

/// The Faber polynomials `Φ_0, …, Φ_N` of a domain, in coefficient form,
/// together with the domain for stable point evaluation.
#[derive(Debug, Clone)]
pub struct FaberBasis {
    domain: Domain,
    polys: Vec<ComplexPoly>,
}

impl FaberBasis {
    /// The domain the basis belongs to.
    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// Largest degree in the basis.
    pub fn max_degree(&self) -> usize {
        self.polys.len() - 1
    }

    /// The polynomial `Φ_n` in coefficient form.
    ///
    /// # Panics
    /// Panics if `n > self.max_degree()`.
    pub fn poly(&self, n: usize) -> &ComplexPoly {
        &self.polys[n]
    }

    /// All polynomials, indexed by degree.
    pub fn polys(&self) -> &[ComplexPoly] {
        &self.polys
    }

    /// Evaluates `Φ_0(z), …, Φ_N(z)` by running the recurrence on point
    /// values. This is stable for degrees where evaluation through expanded
    /// monomial coefficients loses most digits to cancellation.
    pub fn eval_all(&self, z: Complex64) -> Vec<Complex64> {
        eval_faber_at(&self.domain, self.max_degree(), z)
    }
}

/// Computes the Faber polynomials of `domain` up to `max_degree` via the
/// Laurent-coefficient recurrence.
pub fn faber_polynomials(domain: &Domain, max_degree: usize) -> FaberBasis {
    let (cap, c0, tail) = domain.laurent_data();
    let inv_cap = Complex64::new(1.0 / cap, 0.0);
    // (z - c0) as a multiplier.
    let shift = ComplexPoly::new(vec![-c0, Complex64::new(1.0, 0.0)]);

    let mut polys: Vec<ComplexPoly> = Vec::with_capacity(max_degree + 1);
    polys.push(ComplexPoly::one());
    if max_degree >= 1 {
        polys.push(shift.scale(inv_cap));
    }
    for j in 2..=max_degree {
        let mut next = shift.mul(&polys[j - 1]);
        for (k, &ck) in tail.iter().enumerate().take(j - 1) {
            // k is 0-based: tail[k] is the Laurent coefficient c_{k+1}.
            next = next.sub(&polys[j - 2 - k].scale(ck));
        }
        if j - 1 <= tail.len() {
            let extra = Complex64::new((j - 1) as f64, 0.0) * tail[j - 2];
            next = next.sub(&ComplexPoly::constant(extra));
        }
        polys.push(next.scale(inv_cap));
    }
    FaberBasis {
        domain: domain.clone(),
        polys,
    }
}

/// Runs the Faber recurrence on point values: returns
/// `[Φ_0(z), …, Φ_{max_degree}(z)]`.
pub(crate) fn eval_faber_at(domain: &Domain, max_degree: usize, z: Complex64) -> Vec<Complex64> {
    let (cap, c0, tail) = domain.laurent_data();
    let inv_cap = 1.0 / cap;
    let shift = z - c0;

    let mut vals = Vec::with_capacity(max_degree + 1);
    vals.push(Complex64::new(1.0, 0.0));
    if max_degree >= 1 {
        vals.push(shift * inv_cap);
    }
    for j in 2..=max_degree {
        let mut next = shift * vals[j - 1];
        for (k, &ck) in tail.iter().enumerate().take(j - 1) {
            next -= ck * vals[j - 2 - k];
        }
        if j - 1 <= tail.len() {
            next -= Complex64::new((j - 1) as f64, 0.0) * tail[j - 2];
        }
        vals.push(next * inv_cap);
    }
    vals
}

/// Faber coefficients `[G]_0, …, [G]_{count−1}` of a function, stored as the
/// raw Fourier data `c_n = ρ^n·[G]_n` of the transplanted integrand together
/// with the level `ρ`, so magnitudes can be combined in log space.
#[derive(Debug, Clone)]
pub struct FaberCoefficients {
    raw: Vec<Complex64>,
    rho: f64,
    node_count: usize,
}

impl FaberCoefficients {
    fn from_raw(raw: Vec<Complex64>, rho: f64, node_count: usize) -> Self {
        FaberCoefficients {
            raw,
            rho,
            node_count,
        }
    }

    /// Number of stored coefficients (indices `0..count`).
    pub fn count(&self) -> usize {
        self.raw.len()
    }

    /// Level-curve parameter the coefficients were computed on.
    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Number of quadrature nodes used.
    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// The raw Fourier coefficient `c_n = ρ^n·[G]_n`.
    ///
    /// # Panics
    /// Panics if `n >= self.count()`.
    pub fn raw(&self, n: usize) -> Complex64 {
        self.raw[n]
    }

    /// The Faber coefficient `[G]_n = ρ^{−n}·c_n`.
    ///
    /// Computed in log space when the exponent is large, so extreme `ρ^n`
    /// never overflows: the result underflows to zero (or saturates to
    /// infinity) only when the true value does.
    ///
    /// # Panics
    /// Panics if `n >= self.count()`.
    pub fn value(&self, n: usize) -> Complex64 {
        let c = self.raw[n];
        let exponent = -(n as f64) * self.rho.ln();
        if exponent.abs() < 600.0 {
            return c * exponent.exp();
        }
        if c == Complex64::new(0.0, 0.0) {
            return c;
        }
        let magnitude = (c.norm().ln() + exponent).exp();
        Complex64::from_polar(magnitude, c.arg())
    }

    /// All Faber coefficients as values.
    pub fn values(&self) -> Vec<Complex64> {
        (0..self.count()).map(|n| self.value(n)).collect()
    }

    /// `ln |[G]_n|`, finite even where the value itself would underflow;
    /// `-inf` when the raw coefficient is exactly zero.
    ///
    /// # Panics
    /// Panics if `n >= self.count()`.
    pub fn log_abs(&self, n: usize) -> f64 {
        let m = self.raw[n].norm();
        if m == 0.0 {
            f64::NEG_INFINITY
        } else {
            m.ln() - (n as f64) * self.rho.ln()
        }
    }
}

/// Default quadrature node count for a given number of coefficients: the
/// smallest power of two at least `max(512, 8·(count+16))`, which keeps the
/// highest requested bin far away from the aliasing range.
pub fn default_node_count(count: usize) -> usize {
    512usize.max(8 * (count + 16)).next_power_of_two()
}

/// Fallback level parameter when no singularity information is available.
pub const DEFAULT_RHO_ENTIRE: f64 = 2.0;

/// Default level parameter for the coefficient contour: the geometric mean
/// between the domain boundary (level 1) and the first singularity level, or
/// [`DEFAULT_RHO_ENTIRE`] when the integrand has no finite singularity.
pub fn default_rho(singularity_level: Option<f64>) -> f64 {
    match singularity_level {
        Some(level) if level.is_finite() && level > 1.0 => level.sqrt(),
        _ => DEFAULT_RHO_ENTIRE,
    }
}

/// Computes Faber coefficients `[G]_0..[G]_{count−1}` of `g` on `domain` by
/// FFT over the level curve `Γ_rho`.
///
/// `node_count` must be a power of two and defaults to
/// [`default_node_count`]. The computation runs a consistency check between
/// the full node set and its half-resolution subset: genuine coefficients
/// agree to aliasing accuracy, while an integrand that is singular between
/// the domain and the contour produces resolution-dependent trailing bins
/// and is reported as [`FaberError::QuadratureDivergence`].
pub fn faber_coefficients<G>(
    domain: &Domain,
    g: G,
    count: usize,
    rho: f64,
    node_count: Option<usize>,
) -> Result<FaberCoefficients, FaberError>
where
    G: Fn(Complex64) -> Complex64,
{
    if count == 0 {
        return Err(FaberError::TooFewCoefficients { have: 0, need: 1 });
    }
    let nodes = node_count.unwrap_or_else(|| default_node_count(count));
    if nodes < 2 * count {
        return Err(FaberError::TooManyCoefficients {
            count,
            node_count: nodes,
        });
    }
    let sample = domain.sample_level_curve(rho, nodes)?;
    let values: Vec<Complex64> = sample.points.iter().map(|&z| g(z)).collect();
    faber_coefficients_from_samples(&sample, &values, count)
}

/// Computes Faber coefficients from already-evaluated integrand values at the
/// nodes of `sample` (as produced by [`Domain::sample_level_curve`]). This is
/// the path for callers that sample a function once and reuse the values for
/// several derived integrands.
pub fn faber_coefficients_from_samples(
    sample: &crate::conformal::ContourSample,
    values: &[Complex64],
    count: usize,
) -> Result<FaberCoefficients, FaberError> {
    let nodes = sample.points.len();
    if count == 0 {
        return Err(FaberError::TooFewCoefficients { have: 0, need: 1 });
    }
    if nodes < 2 * count {
        return Err(FaberError::TooManyCoefficients {
            count,
            node_count: nodes,
        });
    }
    assert_eq!(
        values.len(),
        nodes,
        "one integrand value per quadrature node"
    );
    for (index, v) in values.iter().enumerate() {
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(FaberError::NonFiniteSample {
                index,
                at: sample.points[index],
            });
        }
    }

    let raw = dft_bins(values, count);

    // Resolution consistency check on the trailing quarter of the bins. The
    // even-indexed samples are exactly the nodes of the half-resolution rule
    // on the same contour, so no extra evaluations of the integrand are
    // needed.
    if nodes >= 8 * count && count >= 8 {
        let halved: Vec<Complex64> = values.iter().step_by(2).copied().collect();
        let raw_half = dft_bins(&halved, count);
        let max_all = raw.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
        if max_all > 0.0 {
            for n in (3 * count) / 4..count {
                let a = raw[n];
                let b = raw_half[n];
                let scale = a.norm().max(b.norm());
                if scale > 1e-10 * max_all && (a - b).norm() > 0.5 * scale {
                    return Err(FaberError::QuadratureDivergence { rho: sample.rho });
                }
            }
        }
    }

    Ok(FaberCoefficients::from_raw(raw, sample.rho, nodes))
}

/// First `count` normalized DFT bins of `samples`: `(1/N)·Σ_k x_k e^{−inθ_k}`.
fn dft_bins(samples: &[Complex64], count: usize) -> Vec<Complex64> {
    let n = samples.len();
    let mut buffer = samples.to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buffer);
    let scale = 1.0 / n as f64;
    buffer
        .into_iter()
        .take(count)
        .map(|c| c * scale)
        .collect()
}

/// Evaluates the partial sum `Σ_{n=0}^{degree} [G]_n Φ_n(z)` using the point
/// recurrence for the basis values.
pub fn faber_partial_sum(
    domain: &Domain,
    coeffs: &FaberCoefficients,
    degree: usize,
    z: Complex64,
) -> Result<Complex64, FaberError> {
    if degree >= coeffs.count() {
        return Err(FaberError::TooFewCoefficients {
            have: coeffs.count(),
            need: degree + 1,
        });
    }
    let basis_values = eval_faber_at(domain, degree, z);
    let mut acc = Complex64::new(0.0, 0.0);
    for (n, &phi) in basis_values.iter().enumerate() {
        acc += coeffs.value(n) * phi;
    }
    Ok(acc)
}

/// Estimates the largest level `ρ_0` such that the Faber series of `G`
/// converges inside `Γ_{ρ_0}`, from the decay rate of its coefficients:
/// `ρ_0 = 1 / limsup |[G]_n|^{1/n}`.
///
/// Returns `+∞` when the expansion terminates (polynomial `G`) or the
/// coefficients decay faster than any geometric sequence down to the noise
/// floor. Requires at least [`RHO0_MIN_COEFFICIENTS`] coefficients.
pub fn estimate_rho0(coeffs: &FaberCoefficients) -> Result<f64, FaberError> {
    let count = coeffs.count();
    if count < RHO0_MIN_COEFFICIENTS {
        return Err(FaberError::TooFewCoefficients {
            have: count,
            need: RHO0_MIN_COEFFICIENTS,
        });
    }

    let logs: Vec<f64> = (0..count).map(|n| coeffs.log_abs(n)).collect();
    let max_log = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max_log == f64::NEG_INFINITY {
        // Identically zero expansion.
        return Ok(f64::INFINITY);
    }

    // Keep indices whose coefficient is within 14 digits of the largest;
    // everything below is indistinguishable from quadrature noise.
    let kept: Vec<(usize, f64)> = logs
        .iter()
        .enumerate()
        .filter(|&(_, &l)| l - max_log > 1e-14f64.ln())
        .map(|(n, &l)| (n, (l - max_log).exp()))
        .collect();

    let last_kept = kept.last().map(|&(n, _)| n).unwrap_or(0);
    if kept.len() < 8 {
        // Degenerate expansion with a handful of significant terms.
        return Ok(f64::INFINITY);
    }
    if last_kept < (3 * count) / 4 && kept.last().map(|&(_, v)| v).unwrap_or(0.0) > 1e-8 {
        // The coefficients stop abruptly while still far above the noise
        // floor: a terminating (polynomial) expansion.
        return Ok(f64::INFINITY);
    }

    let ns: Vec<usize> = kept.iter().map(|&(n, _)| n).collect();
    let values: Vec<f64> = kept.iter().map(|&(_, v)| v).collect();

    // Super-geometric (entire-function) detection: with factorial-like decay
    // the log-coefficient slope keeps steepening, so a fit over the late half
    // of the window is markedly steeper than over the early half. Genuine
    // geometric decay with algebraic prefactors shifts the slope by O(1/n)
    // only, far below the margin.
    if kept.len() >= 16 {
        let mid = kept.len() / 2;
        let early = fit_geometric_rate(&ns[..mid], &values[..mid]);
        let late = fit_geometric_rate(&ns[mid..], &values[mid..]);
        if let (Ok(early), Ok(late)) = (early, late) {
            if late.log_slope < early.log_slope - 0.3 {
                return Ok(f64::INFINITY);
            }
        }
    }

    let report = fit_geometric_rate(&ns, &values).map_err(|_| FaberError::TooFewCoefficients {
        have: kept.len(),
        need: 8,
    })?;
    if report.all_zero || report.rate <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(1.0 / report.rate)
}
