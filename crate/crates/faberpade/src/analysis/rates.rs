//! Geometric rate estimation from noisy error sequences.
//!
//! Error sequences produced by the experiment drivers typically look like
//! `C * rate^n * n^b` down to a floating-point noise floor, often with an
//! oscillating subsequence dipping well below the dominant envelope (e.g.
//! when every other approximant is accidentally better). The estimator here
//! is built to recover `rate` from exactly that shape:
//!
//! 1. values at or below an absolute floor are discarded as exact hits;
//! 2. the sequence is truncated at its global minimum, cutting off the
//!    V-shaped tail where rounding noise starts growing again;
//! 3. the upper concave envelope of the remaining `(n, log e_n)` points is
//!    extracted, so dips below the dominant behaviour do not bias the fit;
//! 4. a least-squares line through the envelope vertices gives the slope,
//!    and `rate = exp(slope)`.

use std::fmt;

/// Values at or below this threshold are treated as exact (zero) errors and
/// excluded from the fit.
pub const RATE_ZERO_FLOOR: f64 = 1e-15;

/// Minimum number of usable samples required for a fit.
pub const RATE_MIN_SAMPLES: usize = 8;

/// How many points immediately left of a detected noise-floor minimum are
/// discarded along with the tail. Near the crossing the decaying signal and
/// the growing noise branch are comparable, so the bottom of the V is rounded
/// and would bias the slope; a few indices away the contamination decays
/// geometrically and is negligible.
const NOISE_GUARD_TRIM: usize = 4;

/// Outcome of [`fit_geometric_rate`].
#[derive(Debug, Clone)]
pub struct RateFit {
    /// Estimated geometric rate `exp(log_slope)`; `0.0` when every sample was
    /// at the zero floor (see [`RateFit::all_zero`]).
    pub rate: f64,
    /// Least-squares slope of `log e_n` against `n` over the envelope.
    pub log_slope: f64,
    /// Number of samples that survived the zero-floor filter.
    pub samples_kept: usize,
    /// Number of samples discarded as effectively zero.
    pub samples_dropped: usize,
    /// Index `n` of the global minimum where the sequence was truncated, if
    /// the noise-floor guard removed a trailing segment.
    pub truncated_at: Option<usize>,
    /// Number of envelope vertices the line was fitted through.
    pub envelope_size: usize,
    /// True when every error was at or below the zero floor; `rate` is `0.0`
    /// and the approximation should be considered exact.
    pub all_zero: bool,
}

/// Errors from [`fit_geometric_rate`].
#[derive(Debug, Clone, PartialEq)]
pub enum RateFitError {
    /// `ns` and `errors` have different lengths.
    LengthMismatch { ns: usize, errors: usize },
    /// Fewer than [`RATE_MIN_SAMPLES`] nonzero samples remain after filtering.
    TooFewSamples { have: usize, need: usize },
    /// The surviving samples admit no finite least-squares line (e.g. all at
    /// a single `n`).
    Degenerate,
}

impl fmt::Display for RateFitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RateFitError::LengthMismatch { ns, errors } => {
                write!(f, "length mismatch: {ns} indices vs {errors} errors")
            }
            RateFitError::TooFewSamples { have, need } => {
                write!(f, "too few nonzero samples for a rate fit: {have} < {need}")
            }
            RateFitError::Degenerate => {
                write!(f, "samples do not determine a finite slope")
            }
        }
    }
}

impl std::error::Error for RateFitError {}

/// Fits `e_n ~ C * rate^n` to the positive entries of an error sequence and
/// returns the estimated `rate` together with fit diagnostics.
///
/// `ns` and `errors` must have equal length; entries need not be sorted.
/// Negative error values are clamped to zero (they can only arise from
/// caller bugs, and treating them as exact hits is the conservative choice).
pub fn fit_geometric_rate(ns: &[usize], errors: &[f64]) -> Result<RateFit, RateFitError> {
    if ns.len() != errors.len() {
        return Err(RateFitError::LengthMismatch {
            ns: ns.len(),
            errors: errors.len(),
        });
    }

    // Sort by n and keep, for duplicate n, the largest error (the envelope
    // cares only about the dominant value at each index).
    let mut pairs: Vec<(usize, f64)> = ns.iter().copied().zip(errors.iter().copied()).collect();
    pairs.sort_by_key(|&(n, _)| n);
    pairs.dedup_by(|next, last| {
        if next.0 == last.0 {
            last.1 = last.1.max(next.1);
            true
        } else {
            false
        }
    });

    let total = pairs.len();
    let kept: Vec<(usize, f64)> = pairs
        .into_iter()
        .filter(|&(_, e)| e.is_finite() && e > RATE_ZERO_FLOOR)
        .collect();
    let dropped = total - kept.len();

    if kept.is_empty() {
        return Ok(RateFit {
            rate: 0.0,
            log_slope: f64::NEG_INFINITY,
            samples_kept: 0,
            samples_dropped: dropped,
            truncated_at: None,
            envelope_size: 0,
            all_zero: true,
        });
    }
    if kept.len() < RATE_MIN_SAMPLES {
        return Err(RateFitError::TooFewSamples {
            have: kept.len(),
            need: RATE_MIN_SAMPLES,
        });
    }

    // Truncate after the global minimum: beyond it the sequence is assumed to
    // be dominated by rounding noise growing back up. Ties resolve to the
    // last occurrence so the truncation is as mild as possible. Skip the
    // guard when it would leave too few points.
    let argmin = kept
        .iter()
        .enumerate()
        .fold(0usize, |best, (i, &(_, e))| {
            if e <= kept[best].1 {
                i
            } else {
                best
            }
        });
    let (window, truncated_at) = if argmin + 1 >= RATE_MIN_SAMPLES && argmin + 1 < kept.len() {
        let upto = argmin + 1;
        let trim = NOISE_GUARD_TRIM.min(upto - RATE_MIN_SAMPLES);
        (&kept[..upto - trim], Some(kept[argmin].0))
    } else {
        (&kept[..], None)
    };

    let logs: Vec<(f64, f64)> = window
        .iter()
        .map(|&(n, e)| (n as f64, e.ln()))
        .collect();
    let hull = upper_envelope(&logs);

    let (slope, _intercept) = least_squares_line(&hull).ok_or(RateFitError::Degenerate)?;
    if !slope.is_finite() {
        return Err(RateFitError::Degenerate);
    }

    Ok(RateFit {
        rate: slope.exp(),
        log_slope: slope,
        samples_kept: kept.len(),
        samples_dropped: dropped,
        truncated_at,
        envelope_size: hull.len(),
        all_zero: false,
    })
}

/// Upper concave envelope of points with strictly increasing x, keeping
/// collinear points (so runs lying exactly on the envelope all contribute to
/// the subsequent fit). Input must be sorted by x with no duplicates.
fn upper_envelope(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(points.len());
    for &p in points {
        // Pop the previous vertex while it lies strictly below the chord from
        // its predecessor to the candidate point, i.e. while the slope to the
        // candidate strictly increases. The relative tolerance keeps points
        // that are collinear up to rounding on the envelope.
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let s_in = (b.1 - a.1) / (b.0 - a.0);
            let s_out = (p.1 - b.1) / (p.0 - b.0);
            if s_out > s_in + 1e-9 * (1.0 + s_in.abs()) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

/// Ordinary least squares for `y = intercept + slope * x`.
/// Returns `None` when fewer than two distinct x values are present.
fn least_squares_line(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum();
    if sxx <= 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some((slope, mean_y - slope * mean_x))
}
