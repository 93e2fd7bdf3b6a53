//! Systems of meromorphic functions: exact rational parts plus a declared
//! analytic tail, with evaluation, singularity metadata, and a small
//! expression parser used by the CLI.
//!
//! # Expression grammar
//!
//! A function is a `+`/`-` separated sum of terms:
//!
//! ```text
//! expression := ['-'] term (('+' | '-') term)*
//! term       := coef '/' '(' 'z' '-' location ')' ['^' integer]      pole term
//!             | 'poly' '(' complex {',' complex} ')'                 polynomial tail
//!             | 'exp' '(' complex '*' 'z' ')'                        exponential tail
//!             | [coef '*'] 'log' '(' 'z' '-' location ')'            logarithmic tail
//!             | [coef '*'] '(' 'z' '-' location ')' '^' real        power tail (non-integer exponent)
//! coef       := ['-'] number ['i'] | ['-'] 'i' | '(' complex ')'
//! location   := complex | '(' complex ')'
//! complex    := real | real 'i' | real ('+'|'-') real 'i' | ['-'] 'i'
//! ```
//!
//! Numbers are ordinary decimal literals with optional exponent
//! (`2`, `-3.5`, `1e-3`). A compound complex coefficient must be
//! parenthesized: `(1+2i)/(z-3)`. At most one tail term may appear in a sum.
//!
//! # Branch cuts
//!
//! `log(z-b)` and `(z-b)^p` are made single-valued by cutting along the ray
//! from the branch point directed away from the origin, `{b·t : t ≥ 1}`.
//! Every canonical domain contains 0, so the cut stays outside the domain and
//! outside every sampling contour that matters. Concretely, with β = arg(b),
//! `log(z-b) = ln|z-b| + i·θ` where `θ ∈ (β, β+2π)`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::conformal::{ConformalError, Domain};
use crate::poly::ComplexPoly;

/// One pole with its full principal part: `laurent[j]` is the coefficient of
/// `(z - location)^{-(j+1)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleTerm {
    pub location: Complex64,
    pub laurent: Vec<Complex64>,
}

impl PoleTerm {
    /// Pole order: the largest power with nonzero coefficient. Construction
    /// trims the Laurent vector, so this is simply its length.
    pub fn order(&self) -> usize {
        self.laurent.len()
    }
}

/// The analytic (non-rational) part of a function. At most one per function.
#[derive(Debug, Clone, PartialEq)]
pub enum Tail {
    /// No tail.
    None,
    /// A polynomial.
    Polynomial(ComplexPoly),
    /// `exp(scale·z)`.
    Exp { scale: Complex64 },
    /// `coefficient · log(z - branch_point)` with the standard cut.
    LogBranch {
        branch_point: Complex64,
        coefficient: Complex64,
    },
    /// `coefficient · (z - branch_point)^exponent`, exponent a non-integer
    /// real, with the standard cut.
    PowBranch {
        branch_point: Complex64,
        exponent: f64,
        coefficient: Complex64,
    },
}

/// Construction-time invariant violations.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionError {
    /// Power tails require a non-integer real exponent; integer powers belong
    /// in the rational part.
    IntegerPowExponent { exponent: f64 },
    /// Branch cuts are rays away from the origin, which is undefined for a
    /// branch point at the origin (and the origin lies in every domain).
    BranchPointAtOrigin,
    /// A singular point of the function lies inside or on the boundary of
    /// the domain, so the function is not holomorphic on a neighbourhood.
    SingularityInDomain { point: Complex64 },
    /// A system needs at least one function, and exactly one name per
    /// function.
    BadSystemShape { functions: usize, names: usize },
    /// Multi-index components must all be at least 1.
    BadMultiIndex,
    /// The multi-index length must match the number of functions.
    DimensionMismatch { functions: usize, indices: usize },
}

impl fmt::Display for FunctionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionError::IntegerPowExponent { exponent } => write!(
                f,
                "power-tail exponent {exponent} is an integer; use a pole or polynomial term"
            ),
            FunctionError::BranchPointAtOrigin => {
                write!(f, "branch point at the origin has no cut direction")
            }
            FunctionError::SingularityInDomain { point } => {
                write!(f, "singular point {point} does not lie outside the domain")
            }
            FunctionError::BadSystemShape { functions, names } => write!(
                f,
                "system needs at least one function and one name each (got {functions} functions, {names} names)"
            ),
            FunctionError::BadMultiIndex => {
                write!(f, "multi-index components must all be at least 1")
            }
            FunctionError::DimensionMismatch { functions, indices } => write!(
                f,
                "multi-index has {indices} components for {functions} functions"
            ),
        }
    }
}

impl std::error::Error for FunctionError {}

/// Evaluation failures at singular points.
#[derive(Debug, Clone, PartialEq)]
pub enum EvalError {
    /// The point coincides with a pole location.
    PoleEvaluation { location: Complex64 },
    /// The point lies on the declared branch cut (or at the branch point).
    OnBranchCut { branch_point: Complex64 },
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::PoleEvaluation { location } => {
                write!(f, "evaluation at pole {location}")
            }
            EvalError::OnBranchCut { branch_point } => {
                write!(f, "evaluation on the branch cut from {branch_point}")
            }
        }
    }
}

impl std::error::Error for EvalError {}

/// A rational function plus at most one declared analytic tail.
#[derive(Debug, Clone, PartialEq)]
pub struct MeromorphicFunction {
    rational_part: Vec<PoleTerm>,
    tail: Tail,
}

impl MeromorphicFunction {
    /// Builds a function from pole terms and a tail, normalizing the
    /// representation: terms at the same location are merged, trailing zero
    /// Laurent coefficients trimmed, vanished terms dropped, and a tail with
    /// zero coefficient reduced to `Tail::None`.
    pub fn new(rational_part: Vec<PoleTerm>, tail: Tail) -> Result<Self, FunctionError> {
        let tail = match tail {
            Tail::LogBranch {
                coefficient,
                branch_point,
            } => {
                if coefficient == Complex64::new(0.0, 0.0) {
                    Tail::None
                } else if branch_point == Complex64::new(0.0, 0.0) {
                    return Err(FunctionError::BranchPointAtOrigin);
                } else {
                    Tail::LogBranch {
                        branch_point,
                        coefficient,
                    }
                }
            }
            Tail::PowBranch {
                branch_point,
                exponent,
                coefficient,
            } => {
                if !exponent.is_finite() || exponent.fract() == 0.0 {
                    return Err(FunctionError::IntegerPowExponent { exponent });
                }
                if coefficient == Complex64::new(0.0, 0.0) {
                    Tail::None
                } else if branch_point == Complex64::new(0.0, 0.0) {
                    return Err(FunctionError::BranchPointAtOrigin);
                } else {
                    Tail::PowBranch {
                        branch_point,
                        exponent,
                        coefficient,
                    }
                }
            }
            other => other,
        };

        // Merge pole terms at identical locations, preserving first-seen
        // order, then trim top zeros.
        let mut merged: Vec<PoleTerm> = Vec::new();
        for term in rational_part {
            match merged
                .iter_mut()
                .find(|t| t.location == term.location)
            {
                Some(existing) => {
                    if existing.laurent.len() < term.laurent.len() {
                        existing
                            .laurent
                            .resize(term.laurent.len(), Complex64::new(0.0, 0.0));
                    }
                    for (j, &c) in term.laurent.iter().enumerate() {
                        existing.laurent[j] += c;
                    }
                }
                None => merged.push(term),
            }
        }
        for term in &mut merged {
            while term
                .laurent
                .last()
                .is_some_and(|c| *c == Complex64::new(0.0, 0.0))
            {
                term.laurent.pop();
            }
        }
        merged.retain(|t| !t.laurent.is_empty());

        Ok(MeromorphicFunction {
            rational_part: merged,
            tail,
        })
    }

    /// The zero function.
    pub fn zero() -> Self {
        MeromorphicFunction {
            rational_part: Vec::new(),
            tail: Tail::None,
        }
    }

    /// A single simple pole `c/(z-a)`.
    pub fn simple_pole(location: Complex64, coefficient: Complex64) -> Self {
        MeromorphicFunction::new(
            vec![PoleTerm {
                location,
                laurent: vec![coefficient],
            }],
            Tail::None,
        )
        .expect("simple pole terms always satisfy the invariants")
    }

    /// The pole terms (locations pairwise distinct, top coefficients
    /// nonzero).
    pub fn rational_part(&self) -> &[PoleTerm] {
        &self.rational_part
    }

    /// The analytic tail.
    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    /// True when the function has neither poles nor tail.
    pub fn is_zero(&self) -> bool {
        self.rational_part.is_empty() && self.tail == Tail::None
    }

    /// Evaluates the function at `z`.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64, EvalError> {
        let mut acc = Complex64::new(0.0, 0.0);
        for term in &self.rational_part {
            let dz = z - term.location;
            if dz.norm() <= 1e-13 * (1.0 + term.location.norm()) {
                return Err(EvalError::PoleEvaluation {
                    location: term.location,
                });
            }
            let inv = dz.inv();
            let mut power = inv;
            for &c in &term.laurent {
                acc += c * power;
                power *= inv;
            }
        }
        match &self.tail {
            Tail::None => {}
            Tail::Polynomial(p) => acc += p.eval(z),
            Tail::Exp { scale } => acc += (scale * z).exp(),
            Tail::LogBranch {
                branch_point,
                coefficient,
            } => {
                acc += coefficient * branch_log(z, *branch_point)?;
            }
            Tail::PowBranch {
                branch_point,
                exponent,
                coefficient,
            } => {
                let log = branch_log(z, *branch_point)?;
                acc += coefficient * (log * *exponent).exp();
            }
        }
        Ok(acc)
    }

    /// All singular points: pole locations and branch points.
    pub fn singularities(&self) -> Vec<Complex64> {
        let mut out: Vec<Complex64> = self.rational_part.iter().map(|t| t.location).collect();
        match &self.tail {
            Tail::LogBranch { branch_point, .. } | Tail::PowBranch { branch_point, .. } => {
                out.push(*branch_point)
            }
            _ => {}
        }
        out
    }

    /// Pole locations with their exact orders, sorted by real then imaginary
    /// part for determinism.
    pub fn true_poles(&self) -> Vec<(Complex64, usize)> {
        let mut poles: Vec<(Complex64, usize)> = self
            .rational_part
            .iter()
            .map(|t| (t.location, t.order()))
            .collect();
        poles.sort_by(|a, b| {
            (a.0.re, a.0.im)
                .partial_cmp(&(b.0.re, b.0.im))
                .expect("pole locations are finite")
        });
        poles
    }

    /// The level `min |Φ(s)|` of the function's singularities with respect to
    /// a domain, or `None` when the function is entire. Errors when a
    /// singular point lies inside the domain.
    pub fn singularity_level(&self, domain: &Domain) -> Result<Option<f64>, ConformalError> {
        let mut level: Option<f64> = None;
        for s in self.singularities() {
            let l = domain.phi(s)?.norm();
            level = Some(level.map_or(l, |cur: f64| cur.min(l)));
        }
        Ok(level)
    }

    /// Checks that every singular point lies strictly outside the domain, so
    /// the function is holomorphic on a neighbourhood of it.
    pub fn validate_on(&self, domain: &Domain) -> Result<(), FunctionError> {
        for s in self.singularities() {
            let outside = match domain.phi(s) {
                Ok(w) => w.norm() > 1.0,
                Err(_) => false,
            };
            if !outside {
                return Err(FunctionError::SingularityInDomain { point: s });
            }
        }
        Ok(())
    }
}

/// `log(z - b)` with the cut along the ray from `b` away from the origin:
/// value `ln|z-b| + i·θ` with `θ ∈ (β, β+2π)`, `β = arg(b)`.
fn branch_log(z: Complex64, branch_point: Complex64) -> Result<Complex64, EvalError> {
    let zeta = z - branch_point;
    let scale = 1.0 + branch_point.norm();
    if zeta.norm() <= 1e-13 * scale {
        return Err(EvalError::OnBranchCut { branch_point });
    }
    let beta = branch_point.arg();
    // Angle of zeta measured from the cut direction, in (-π, π].
    let delta = (zeta * Complex64::from_polar(1.0, -beta)).arg();
    if delta.abs() <= 1e-12 {
        return Err(EvalError::OnBranchCut { branch_point });
    }
    let theta = beta + if delta > 0.0 { delta } else { delta + 2.0 * std::f64::consts::PI };
    Ok(Complex64::new(zeta.norm().ln(), theta))
}

/// A system **F** = (F_1, …, F_d) with display names.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSystem {
    functions: Vec<MeromorphicFunction>,
    names: Vec<String>,
}

impl FunctionSystem {
    /// Builds a system; requires `d ≥ 1` and one name per function.
    pub fn new(
        functions: Vec<MeromorphicFunction>,
        names: Vec<String>,
    ) -> Result<Self, FunctionError> {
        if functions.is_empty() || functions.len() != names.len() {
            return Err(FunctionError::BadSystemShape {
                functions: functions.len(),
                names: names.len(),
            });
        }
        Ok(FunctionSystem { functions, names })
    }

    /// Builds a system with default names `F1, …, Fd`.
    pub fn from_functions(functions: Vec<MeromorphicFunction>) -> Result<Self, FunctionError> {
        let names = (1..=functions.len()).map(|i| format!("F{i}")).collect();
        FunctionSystem::new(functions, names)
    }

    /// Number of component functions.
    pub fn len(&self) -> usize {
        self.functions.len()
    }

    /// True when the system is empty (never holds for a constructed system).
    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    /// The component functions.
    pub fn functions(&self) -> &[MeromorphicFunction] {
        &self.functions
    }

    /// Component `alpha` (0-based).
    pub fn function(&self, alpha: usize) -> &MeromorphicFunction {
        &self.functions[alpha]
    }

    /// Display names, parallel to `functions`.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// The level `min |Φ(s)|` over all singularities of the system, or
    /// `None` when every component is entire.
    pub fn singularity_level(&self, domain: &Domain) -> Result<Option<f64>, ConformalError> {
        let mut level: Option<f64> = None;
        for f in &self.functions {
            if let Some(l) = f.singularity_level(domain)? {
                level = Some(level.map_or(l, |cur: f64| cur.min(l)));
            }
        }
        Ok(level)
    }

    /// Checks every component is holomorphic on a neighbourhood of the
    /// domain.
    pub fn validate_on(&self, domain: &Domain) -> Result<(), FunctionError> {
        for f in &self.functions {
            f.validate_on(domain)?;
        }
        Ok(())
    }
}

/// A multi-index **m** = (m_1, …, m_d) of positive integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiIndex {
    m: Vec<usize>,
}

impl MultiIndex {
    /// Builds a multi-index; every component must be at least 1.
    pub fn new(m: Vec<usize>) -> Result<Self, FunctionError> {
        if m.is_empty() || m.iter().any(|&v| v == 0) {
            return Err(FunctionError::BadMultiIndex);
        }
        Ok(MultiIndex { m })
    }

    /// Number of components d.
    pub fn len(&self) -> usize {
        self.m.len()
    }

    /// Never true for a constructed multi-index.
    pub fn is_empty(&self) -> bool {
        self.m.is_empty()
    }

    /// Component m_α (0-based α).
    pub fn component(&self, alpha: usize) -> usize {
        self.m[alpha]
    }

    /// The components.
    pub fn components(&self) -> &[usize] {
        &self.m
    }

    /// |**m**| = Σ m_α.
    pub fn total(&self) -> usize {
        self.m.iter().sum()
    }

    /// Checks the multi-index matches a system's dimension.
    pub fn check_system(&self, system: &FunctionSystem) -> Result<(), FunctionError> {
        if self.len() != system.len() {
            return Err(FunctionError::DimensionMismatch {
                functions: system.len(),
                indices: self.len(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.m.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

/// Formats a complex number in the grammar's literal syntax.
fn fmt_complex(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.re == 0.0 {
        format!("{}i", c.im)
    } else if c.im < 0.0 {
        format!("{}-{}i", c.re, -c.im)
    } else {
        format!("{}+{}i", c.re, c.im)
    }
}

/// Formats a complex number for coefficient position: compound literals get
/// parenthesized so `/` and `*` bind unambiguously.
fn fmt_coefficient(c: Complex64) -> String {
    let s = fmt_complex(c);
    if c.re != 0.0 && c.im != 0.0 {
        format!("({s})")
    } else {
        s
    }
}

/// Formats a pole/branch location for the `(z-…)` position, parenthesizing
/// anything that is not a simple nonnegative literal.
fn fmt_location(c: Complex64) -> String {
    let s = fmt_complex(c);
    let simple = (c.im == 0.0 && c.re >= 0.0) || (c.re == 0.0 && c.im >= 0.0);
    if simple {
        s
    } else {
        format!("({s})")
    }
}

impl fmt::Display for MeromorphicFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = Vec::new();
        for term in &self.rational_part {
            let loc = fmt_location(term.location);
            for (j, &c) in term.laurent.iter().enumerate() {
                if c == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let power = if j == 0 {
                    String::new()
                } else {
                    format!("^{}", j + 1)
                };
                terms.push(format!("{}/(z-{loc}){power}", fmt_coefficient(c)));
            }
        }
        match &self.tail {
            Tail::None => {}
            Tail::Polynomial(p) => {
                let coeffs: Vec<String> = if p.is_zero() {
                    vec!["0".to_string()]
                } else {
                    p.coeffs().iter().map(|&c| fmt_complex(c)).collect()
                };
                terms.push(format!("poly({})", coeffs.join(",")));
            }
            Tail::Exp { scale } => terms.push(format!("exp({}*z)", fmt_complex(*scale))),
            Tail::LogBranch {
                branch_point,
                coefficient,
            } => {
                let body = format!("log(z-{})", fmt_location(*branch_point));
                if *coefficient == Complex64::new(1.0, 0.0) {
                    terms.push(body);
                } else {
                    terms.push(format!("{}*{body}", fmt_coefficient(*coefficient)));
                }
            }
            Tail::PowBranch {
                branch_point,
                exponent,
                coefficient,
            } => {
                let body = format!("(z-{})^{}", fmt_location(*branch_point), exponent);
                if *coefficient == Complex64::new(1.0, 0.0) {
                    terms.push(body);
                } else {
                    terms.push(format!("{}*{body}", fmt_coefficient(*coefficient)));
                }
            }
        }
        if terms.is_empty() {
            return write!(f, "poly(0)");
        }
        write!(f, "{}", terms.join(" + "))
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

/// A parse failure, with the 1-based column and what was expected there.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    /// 1-based character position of the failure.
    pub position: usize,
    /// Description of the expected tokens.
    pub expected: String,
    /// What was actually found.
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at column {}: expected {}, found {}",
            self.position, self.expected, self.found
        )
    }
}

impl std::error::Error for ParseError {}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Self {
        Parser {
            chars: text.chars().collect(),
            pos: 0,
        }
    }

    fn error<T>(&self, expected: &str) -> Result<T, ParseError> {
        let found = match self.chars.get(self.pos) {
            Some(c) => format!("'{c}'"),
            None => "end of input".to_string(),
        };
        Err(ParseError {
            position: self.pos + 1,
            expected: expected.to_string(),
            found,
        })
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char, expected: &str) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.error(expected)
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        let end = self.pos + kw.len();
        if end <= self.chars.len() && self.chars[self.pos..end].iter().collect::<String>() == kw {
            self.pos = end;
            true
        } else {
            false
        }
    }

    /// Parses a plain real number (no sign), e.g. `2`, `3.5`, `1e-3`.
    fn number(&mut self) -> Result<f64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self
            .chars
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_digit())
        {
            self.pos += 1;
        }
        if self.chars.get(self.pos) == Some(&'.') {
            self.pos += 1;
            while self
                .chars
                .get(self.pos)
                .is_some_and(|c| c.is_ascii_digit())
            {
                self.pos += 1;
            }
        }
        if self.pos == start {
            return self.error("a number");
        }
        if matches!(self.chars.get(self.pos), Some('e') | Some('E')) {
            // Exponent part only when followed by digits (with optional sign).
            let mut probe = self.pos + 1;
            if matches!(self.chars.get(probe), Some('+') | Some('-')) {
                probe += 1;
            }
            if self.chars.get(probe).is_some_and(|c| c.is_ascii_digit()) {
                self.pos = probe;
                while self
                    .chars
                    .get(self.pos)
                    .is_some_and(|c| c.is_ascii_digit())
                {
                    self.pos += 1;
                }
            }
        }
        let slice: String = self.chars[start..self.pos].iter().collect();
        slice
            .parse::<f64>()
            .map_err(|_| ParseError {
                position: start + 1,
                expected: "a number".to_string(),
                found: format!("'{slice}'"),
            })
    }

    /// Parses a signed real, `['-'|'+'] number`.
    fn signed_number(&mut self) -> Result<f64, ParseError> {
        let sign = if self.eat('-') {
            -1.0
        } else {
            self.eat('+');
            1.0
        };
        Ok(sign * self.number()?)
    }

    /// Parses a complex literal: `real`, `real i`, `real ± real i`, `±i`.
    fn complex(&mut self) -> Result<Complex64, ParseError> {
        let sign = if self.eat('-') {
            -1.0
        } else {
            self.eat('+');
            1.0
        };
        if self.eat('i') {
            return Ok(Complex64::new(0.0, sign));
        }
        let first = sign * self.number()?;
        if self.eat('i') {
            return Ok(Complex64::new(0.0, first));
        }
        // Possible imaginary continuation `± y i`; backtrack if it is a term
        // separator instead.
        let save = self.pos;
        let cont_sign = match self.peek() {
            Some('+') => 1.0,
            Some('-') => -1.0,
            _ => return Ok(Complex64::new(first, 0.0)),
        };
        self.pos += 1;
        if self.eat('i') {
            return Ok(Complex64::new(first, cont_sign));
        }
        let magnitude = match self.number() {
            Ok(v) => v,
            Err(_) => {
                self.pos = save;
                return Ok(Complex64::new(first, 0.0));
            }
        };
        if self.eat('i') {
            Ok(Complex64::new(first, cont_sign * magnitude))
        } else {
            self.pos = save;
            Ok(Complex64::new(first, 0.0))
        }
    }

    /// Parses a coefficient: simple literal or parenthesized complex.
    fn coefficient(&mut self) -> Result<Complex64, ParseError> {
        if self.peek() == Some('(') {
            self.pos += 1;
            let c = self.complex()?;
            self.expect(')', "')' closing the coefficient")?;
            return Ok(c);
        }
        let sign = if self.eat('-') { -1.0 } else { 1.0 };
        if self.eat('i') {
            return Ok(Complex64::new(0.0, sign));
        }
        let v = sign * self.number()?;
        if self.eat('i') {
            Ok(Complex64::new(0.0, v))
        } else {
            Ok(Complex64::new(v, 0.0))
        }
    }

    /// Parses `'(' 'z' '-' location ')'` and returns the location.
    fn z_minus_location(&mut self) -> Result<Complex64, ParseError> {
        self.expect('(', "'('")?;
        self.expect('z', "'z'")?;
        self.skip_ws();
        let location = if self.eat('-') {
            if self.peek() == Some('(') {
                self.pos += 1;
                let c = self.complex()?;
                self.expect(')', "')' closing the location")?;
                c
            } else {
                self.complex()?
            }
        } else if self.eat('+') {
            -(self.complex()?)
        } else {
            return self.error("'-' or '+' after 'z'");
        };
        self.expect(')', "')'")?;
        Ok(location)
    }

    /// Parses a positive integer (pole order).
    fn pole_order(&mut self) -> Result<usize, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self
            .chars
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_digit())
        {
            self.pos += 1;
        }
        if self.pos == start {
            return self.error("a positive integer order");
        }
        let slice: String = self.chars[start..self.pos].iter().collect();
        match slice.parse::<usize>() {
            Ok(k) if k >= 1 => Ok(k),
            _ => Err(ParseError {
                position: start + 1,
                expected: "a positive integer order".to_string(),
                found: format!("'{slice}'"),
            }),
        }
    }
}

/// What one parsed term contributes to the function being assembled.
enum Term {
    Pole {
        location: Complex64,
        order: usize,
        coefficient: Complex64,
    },
    Tail(Tail),
}

fn parse_term(p: &mut Parser, negate: bool) -> Result<Term, ParseError> {
    let sign = if negate {
        Complex64::new(-1.0, 0.0)
    } else {
        Complex64::new(1.0, 0.0)
    };

    if p.eat_keyword("poly") {
        p.expect('(', "'(' after 'poly'")?;
        let mut coeffs = vec![p.complex()?];
        while p.eat(',') {
            coeffs.push(p.complex()?);
        }
        p.expect(')', "',' or ')'")?;
        if negate {
            for c in &mut coeffs {
                *c = -*c;
            }
        }
        return Ok(Term::Tail(Tail::Polynomial(ComplexPoly::new(coeffs))));
    }
    if p.eat_keyword("exp") {
        if negate {
            return Err(ParseError {
                position: p.pos + 1,
                expected: "an exponential tail cannot be negated (it has no coefficient)"
                    .to_string(),
                found: "'-exp'".to_string(),
            });
        }
        p.expect('(', "'(' after 'exp'")?;
        let scale = p.complex()?;
        p.expect('*', "'*' in 'exp(s*z)'")?;
        p.expect('z', "'z' in 'exp(s*z)'")?;
        p.expect(')', "')'")?;
        return Ok(Term::Tail(Tail::Exp { scale }));
    }
    if p.eat_keyword("log") {
        let branch_point = p.z_minus_location()?;
        return Ok(Term::Tail(Tail::LogBranch {
            branch_point,
            coefficient: sign,
        }));
    }

    // Remaining forms start with a coefficient or with '(z-…'.
    p.skip_ws();
    if p.peek() == Some('(') {
        // Lookahead: '(z' begins a power term, otherwise it is a
        // parenthesized coefficient.
        let mut probe = p.pos + 1;
        while p.chars.get(probe).is_some_and(|c| c.is_whitespace()) {
            probe += 1;
        }
        if p.chars.get(probe) == Some(&'z') {
            let branch_point = p.z_minus_location()?;
            p.expect('^', "'^' with a non-integer exponent")?;
            let exponent = p.signed_number()?;
            return Ok(Term::Tail(Tail::PowBranch {
                branch_point,
                exponent,
                coefficient: sign,
            }));
        }
    }

    let mut coefficient = p.coefficient()?;
    if negate {
        coefficient = -coefficient;
    }
    if p.eat('/') {
        let location = p.z_minus_location()?;
        let order = if p.eat('^') { p.pole_order()? } else { 1 };
        return Ok(Term::Pole {
            location,
            order,
            coefficient,
        });
    }
    if p.eat('*') {
        if p.eat_keyword("log") {
            let branch_point = p.z_minus_location()?;
            return Ok(Term::Tail(Tail::LogBranch {
                branch_point,
                coefficient,
            }));
        }
        let branch_point = p.z_minus_location()?;
        p.expect('^', "'^' with a non-integer exponent")?;
        let exponent = p.signed_number()?;
        return Ok(Term::Tail(Tail::PowBranch {
            branch_point,
            exponent,
            coefficient,
        }));
    }
    p.error("'/' (pole term) or '*' (tail term) after the coefficient")
}

/// Parses a function expression (see the module docs for the grammar).
pub fn parse_function_expression(text: &str) -> Result<MeromorphicFunction, ParseError> {
    let mut p = Parser::new(text);
    let mut pole_terms: BTreeMap<(u64, u64), (Complex64, Vec<Complex64>)> = BTreeMap::new();
    let mut pole_order_seen: Vec<Complex64> = Vec::new();
    let mut tail = Tail::None;
    let mut tail_position = 0usize;

    let mut negate = p.eat('-');
    loop {
        let term_start = p.pos;
        match parse_term(&mut p, negate)? {
            Term::Pole {
                location,
                order,
                coefficient,
            } => {
                let key = (location.re.to_bits(), location.im.to_bits());
                let entry = pole_terms.entry(key).or_insert_with(|| {
                    pole_order_seen.push(location);
                    (location, Vec::new())
                });
                if entry.1.len() < order {
                    entry.1.resize(order, Complex64::new(0.0, 0.0));
                }
                entry.1[order - 1] += coefficient;
            }
            Term::Tail(t) => {
                if tail != Tail::None {
                    return Err(ParseError {
                        position: term_start + 1,
                        expected: format!(
                            "at most one tail term per function (previous tail at column {tail_position})"
                        ),
                        found: "a second tail term".to_string(),
                    });
                }
                tail = t;
                tail_position = term_start + 1;
            }
        }
        p.skip_ws();
        match p.peek() {
            Some('+') => {
                p.pos += 1;
                negate = false;
            }
            Some('-') => {
                p.pos += 1;
                negate = true;
            }
            None => break,
            Some(_) => return p.error("'+', '-', or end of input"),
        }
    }

    let rational: Vec<PoleTerm> = pole_order_seen
        .iter()
        .map(|loc| {
            let key = (loc.re.to_bits(), loc.im.to_bits());
            let (location, laurent) = pole_terms[&key].clone();
            PoleTerm { location, laurent }
        })
        .collect();

    MeromorphicFunction::new(rational, tail).map_err(|e| ParseError {
        position: text.chars().count() + 1,
        expected: format!("a well-formed function ({e})"),
        found: "structural violation".to_string(),
    })
}
