//! Simultaneous Padé–Faber approximation on canonical compact sets.
//!
//! This crate computes simultaneous Padé–Faber approximants of systems of
//! functions that are analytic on a compact set `E` of the complex plane, and
//! provides the experimental machinery to study how the approximants' common
//! denominators detect the poles of the system.
//!
//! The pieces fit together as follows:
//!
//! * [`conformal`] — canonical compact sets (disks, ellipses, segments and
//!   sets given by a finite exterior Laurent map), their exterior conformal
//!   maps `Φ`/`Ψ`, logarithmic capacities and level curves `Γ_ρ`.
//! * [`faber`] — Faber polynomials `Φ_n` of a domain, Faber coefficients
//!   `[G]_n` of a function via contour quadrature, partial sums, and radius
//!   estimation from coefficient decay.
//! * [`funcsys`] — a small closed class of meromorphic functions (rational
//!   parts plus an optional polynomial/exponential/logarithmic/power tail),
//!   exact evaluation with fixed branch conventions, and a text grammar for
//!   building systems.
//! * [`approximant`] — the solver: the reduced `|m| × (|m|+1)` linear system
//!   for the common denominator, SVD nullspace solve with a uniqueness flag,
//!   and numerator reconstruction by truncated Faber expansion.
//! * [`analysis`] — polynomial roots, system-pole computation for rational
//!   systems, declared metadata for transcendental ones, geometric rate
//!   fitting, and the direct/inverse experiment drivers.
//! * [`cli`] — config-file driven experiment runner behind the `faberpade`
//!   binary, emitting CSV tables and a text summary.
//!
//! Everything on the computational path is deterministic: same inputs, same
//! bytes out.

pub mod analysis;
pub mod approximant;
pub mod cli;
pub mod conformal;
pub mod faber;
pub mod funcsys;
pub mod poly;

pub use num_complex::Complex64;
