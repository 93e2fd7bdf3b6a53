//! Everything downstream of the solves: polynomial roots, system poles and
//! their characteristic radii, predicted rates, rate fitting, and the
//! direct/inverse experiment harnesses.

mod experiments;
mod poles;
mod rates;
mod roots;

pub use experiments::*;
pub use poles::*;
pub use rates::*;
pub use roots::*;

use std::fmt;

use num_complex::Complex64;

use crate::approximant::ApproximantError;
use crate::conformal::ConformalError;
use crate::funcsys::FunctionError;

/// Errors from the analysis layer.
#[derive(Debug, Clone, PartialEq)]
pub enum AnalysisError {
    /// The zero polynomial has no well-defined root set.
    ZeroPolynomial,
    /// System-pole computation requires a purely rational system (tails
    /// `None` or `Polynomial` only).
    NonRationalSystem { alpha: usize },
    /// A hand-declared metadata entry contradicts the definitions.
    InconsistentDeclaration { detail: String },
    /// The computed total system-pole order exceeded the dimension bound —
    /// numerically inconsistent rank decisions.
    CountBound { computed: usize, bound: usize },
    /// The direct harness requires total system-pole order equal to the
    /// full multi-index order.
    HypothesisViolation { total_tau: usize, required: usize },
    /// A sample point for the sup-norm hit a pole or branch cut of the
    /// reference function.
    BadSamplePoint { at: Complex64 },
    /// Rate-fit failure.
    Rate(RateFitError),
    /// Solve failure.
    Approximant(ApproximantError),
    /// Conformal-map failure.
    Conformal(ConformalError),
    /// System/multi-index shape failure.
    Function(FunctionError),
}

impl fmt::Display for AnalysisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalysisError::ZeroPolynomial => {
                write!(f, "the zero polynomial has no root set")
            }
            AnalysisError::NonRationalSystem { alpha } => write!(
                f,
                "system-pole computation needs a rational system, but function {} has a transcendental tail",
                alpha + 1
            ),
            AnalysisError::InconsistentDeclaration { detail } => {
                write!(f, "inconsistent metadata declaration: {detail}")
            }
            AnalysisError::CountBound { computed, bound } => write!(
                f,
                "computed total system-pole order {computed} exceeds the dimension bound {bound}"
            ),
            AnalysisError::HypothesisViolation {
                total_tau,
                required,
            } => write!(
                f,
                "direct-theorem hypothesis violated: total system-pole order {total_tau} != |m| = {required}"
            ),
            AnalysisError::BadSamplePoint { at } => {
                write!(f, "sample point {at} hits a singularity of the reference function")
            }
            AnalysisError::Rate(e) => write!(f, "{e}"),
            AnalysisError::Approximant(e) => write!(f, "{e}"),
            AnalysisError::Conformal(e) => write!(f, "{e}"),
            AnalysisError::Function(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for AnalysisError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            AnalysisError::Rate(e) => Some(e),
            AnalysisError::Approximant(e) => Some(e),
            AnalysisError::Conformal(e) => Some(e),
            AnalysisError::Function(e) => Some(e),
            _ => None,
        }
    }
}

impl From<RateFitError> for AnalysisError {
    fn from(e: RateFitError) -> Self {
        AnalysisError::Rate(e)
    }
}

impl From<ApproximantError> for AnalysisError {
    fn from(e: ApproximantError) -> Self {
        AnalysisError::Approximant(e)
    }
}

impl From<ConformalError> for AnalysisError {
    fn from(e: ConformalError) -> Self {
        AnalysisError::Conformal(e)
    }
}

impl From<FunctionError> for AnalysisError {
    fn from(e: FunctionError) -> Self {
        AnalysisError::Function(e)
    }
}
