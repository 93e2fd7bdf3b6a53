//! Config-driven experiment runner behind the `faberpade` binary.
//!
//! # Config format
//!
//! Line-based `key = value` pairs under `[section]` headers; `#` starts a
//! comment; blank lines are ignored. Complex literals use the same grammar
//! as function-expression coefficients (`2`, `-0.5i`, `1+2i`, `1.5e-3-2i`).
//!
//! ```text
//! [domain]
//! type = disk          # disk | ellipse | segment
//! center = 0+0i        # disk, ellipse (default 0+0i)
//! radius = 1.0         # disk (default 1)
//! semi_major = 2.0     # ellipse (required)
//! semi_minor = 1.0     # ellipse (required)
//! a = -1+0i            # segment endpoint (default -1)
//! b = 1+0i             # segment endpoint (default 1)
//!
//! [system]
//! f1 = 1/(z-2) + log(z-4)
//! f2 = 1/(z-3)         # consecutive indices starting at f1
//!
//! [approximation]
//! mode = direct        # solve | direct | inverse | incomplete (default solve)
//! m = 1,1              # one positive order per function
//! n = 8                # single degree, or:
//! n_min = 10
//! n_max = 60
//! n_step = 1           # (default 1)
//! m_star = 1           # incomplete mode only
//! tol = 0.1            # inverse rate margin (default 0.1)
//!
//! [quadrature]
//! rho = 1.8            # contour level override
//! nodes = 1024         # node count override (power of two)
//!
//! [metadata]
//! pole = 2+0i : 1 : 4.0    # xi : tau : rho_1,…,rho_tau (repeatable)
//!
//! [output]
//! dir = out            # output directory (default "out")
//! ```
//!
//! # Outputs
//!
//! Every run writes four files into the output directory, all deterministic
//! for a fixed config:
//!
//! - `denominators.csv` — per degree: `n`, uniqueness flag, defect, the
//!   denominator coefficients as `re`/`im` pairs, and its roots (padded with
//!   `NaN` up to the nominal degree).
//! - `rates.csv` — `n,error` rows (reference: the predicted polynomial in
//!   direct mode, the estimated limit in inverse mode) plus footer rows
//!   `fitted_rate`, `predicted_rate`, `theta` as applicable.
//! - `roots_paths.csv` — `label,n,re,im` root trajectories: anchored to the
//!   predicted poles in direct mode, indexed by sort order otherwise.
//! - `summary.txt` — resolved settings (defaults marked), verdicts, and the
//!   emitted file list.
//!
//! Floating-point values in CSV files carry 17 significant digits, so
//! re-parsing them is lossless.
//!
//! # Exit codes
//!
//! `0` success, `1` usage or config error, `2` numerical or I/O failure.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::Parser as ClapParser;
use num_complex::Complex64;

use crate::analysis::{
    declared_metadata, poly_roots, run_direct_experiment, run_inverse_experiment,
    system_poles_rational, AnalysisError, DeclaredPole, SystemMetadata,
};
use crate::approximant::{
    incomplete_pade_faber, simultaneous_pade_faber_from_context, PadeFaberResult,
    QuadratureSettings, SolveContext,
};
use crate::conformal::Domain;
use crate::faber::{default_node_count, default_rho};
use crate::funcsys::{parse_function_expression, FunctionSystem, MultiIndex, Tail};

/// Experiment kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Solve the approximants and emit the denominators only.
    Solve,
    /// Direct experiment against predicted metadata, plus the inverse
    /// cross-check on the same data.
    Direct,
    /// Inverse experiment from the computed sequence alone.
    Inverse,
    /// Incomplete (single-function, `m* ≤ m`) solve sequence.
    Incomplete,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Solve => "solve",
            Mode::Direct => "direct",
            Mode::Inverse => "inverse",
            Mode::Incomplete => "incomplete",
        }
    }
}

/// A structurally validated experiment description.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub domain: Domain,
    /// Human-readable domain description for the summary.
    pub domain_desc: String,
    /// The function expressions as written.
    pub expressions: Vec<String>,
    pub system: FunctionSystem,
    pub m: MultiIndex,
    pub mode: Mode,
    /// Expanded, ascending degree list.
    pub degrees: Vec<usize>,
    pub m_star: Option<usize>,
    pub tol: f64,
    pub rho: Option<f64>,
    pub nodes: Option<usize>,
    pub declarations: Vec<DeclaredPole>,
    pub out_dir: Option<PathBuf>,
    /// Defaults applied during parsing, echoed into the summary.
    pub defaults_applied: Vec<String>,
}

/// Parse/validation failure, carrying the line (0 when the problem is an
/// absence) and the key involved.
#[derive(Debug, Clone)]
pub struct ConfigError {
    pub line: usize,
    pub key: String,
    pub detail: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "config error (line {}, key '{}'): {}",
            self.line, self.key, self.detail
        )
    }
}

impl std::error::Error for ConfigError {}

fn config_error(line: usize, key: &str, detail: impl Into<String>) -> ConfigError {
    ConfigError {
        line,
        key: key.to_string(),
        detail: detail.into(),
    }
}

/// One `key = value` occurrence.
#[derive(Debug, Clone)]
struct Entry {
    line: usize,
    key: String,
    value: String,
    used: bool,
}

/// Entries grouped per section, in file order.
#[derive(Debug, Default)]
struct Sections {
    domain: Vec<Entry>,
    system: Vec<Entry>,
    approximation: Vec<Entry>,
    quadrature: Vec<Entry>,
    metadata: Vec<Entry>,
    output: Vec<Entry>,
}

impl Sections {
    fn of(&mut self, name: &str) -> Option<&mut Vec<Entry>> {
        match name {
            "domain" => Some(&mut self.domain),
            "system" => Some(&mut self.system),
            "approximation" => Some(&mut self.approximation),
            "quadrature" => Some(&mut self.quadrature),
            "metadata" => Some(&mut self.metadata),
            "output" => Some(&mut self.output),
            _ => None,
        }
    }
}

/// Takes the single occurrence of `key`, rejecting duplicates.
fn take_one(entries: &mut [Entry], key: &str) -> Result<Option<(usize, String)>, ConfigError> {
    let mut found: Option<(usize, String)> = None;
    for e in entries.iter_mut().filter(|e| e.key == key) {
        if found.is_some() {
            return Err(config_error(e.line, key, "duplicate key"));
        }
        e.used = true;
        found = Some((e.line, e.value.clone()));
    }
    Ok(found)
}

fn require(
    entries: &mut [Entry],
    key: &str,
    section: &str,
) -> Result<(usize, String), ConfigError> {
    take_one(entries, key)?
        .ok_or_else(|| config_error(0, key, format!("missing required key in [{section}]")))
}

fn reject_unused(entries: &[Entry], section: &str) -> Result<(), ConfigError> {
    for e in entries.iter().filter(|e| !e.used) {
        return Err(config_error(
            e.line,
            &e.key,
            format!("unknown key in [{section}]"),
        ));
    }
    Ok(())
}

/// Parses a complex literal through the function-expression grammar, so the
/// accepted forms match coefficient literals exactly.
fn parse_complex_literal(line: usize, key: &str, text: &str) -> Result<Complex64, ConfigError> {
    let trimmed = text.trim();
    let err = || config_error(line, key, format!("invalid complex literal '{trimmed}'"));
    let f = parse_function_expression(&format!("poly({trimmed})")).map_err(|_| err())?;
    if !f.rational_part().is_empty() {
        return Err(err());
    }
    match f.tail() {
        Tail::None => Ok(Complex64::new(0.0, 0.0)),
        Tail::Polynomial(p) if p.degree().map_or(true, |d| d == 0) => Ok(p.coeff(0)),
        _ => Err(err()),
    }
}

fn parse_real(line: usize, key: &str, text: &str) -> Result<f64, ConfigError> {
    text.trim()
        .parse::<f64>()
        .map_err(|_| config_error(line, key, format!("invalid number '{}'", text.trim())))
}

fn parse_int(line: usize, key: &str, text: &str) -> Result<usize, ConfigError> {
    text.trim()
        .parse::<usize>()
        .map_err(|_| config_error(line, key, format!("invalid integer '{}'", text.trim())))
}

fn split_sections(text: &str) -> Result<Sections, ConfigError> {
    let mut sections = Sections::default();
    let mut current: Option<String> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| config_error(line_no, line, "malformed section header"))?
                .trim()
                .to_string();
            if sections.of(&name).is_none() {
                return Err(config_error(
                    line_no,
                    &name,
                    "unknown section (expected domain, system, approximation, quadrature, metadata, or output)",
                ));
            }
            current = Some(name);
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(config_error(line_no, line, "expected 'key = value'"));
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        let Some(section) = current.as_deref() else {
            return Err(config_error(line_no, &key, "key before any [section]"));
        };
        sections.of(section).expect("validated above").push(Entry {
            line: line_no,
            key,
            value,
            used: false,
        });
    }
    Ok(sections)
}

fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}{}i", z.re, z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

fn build_domain(
    entries: &mut Vec<Entry>,
    defaults: &mut Vec<String>,
) -> Result<(Domain, String), ConfigError> {
    let (type_line, kind) = require(entries, "type", "domain")?;
    let kind = kind.to_lowercase();
    let result = match kind.as_str() {
        "disk" => {
            let center = match take_one(entries, "center")? {
                Some((l, v)) => parse_complex_literal(l, "center", &v)?,
                None => {
                    defaults.push("domain.center = 0".to_string());
                    Complex64::new(0.0, 0.0)
                }
            };
            let radius = match take_one(entries, "radius")? {
                Some((l, v)) => parse_real(l, "radius", &v)?,
                None => {
                    defaults.push("domain.radius = 1".to_string());
                    1.0
                }
            };
            let domain = Domain::disk(center, radius)
                .map_err(|e| config_error(type_line, "radius", e.to_string()))?;
            let desc = format!("disk center={} radius={}", fmt_complex(center), radius);
            (domain, desc)
        }
        "ellipse" => {
            let center = match take_one(entries, "center")? {
                Some((l, v)) => parse_complex_literal(l, "center", &v)?,
                None => {
                    defaults.push("domain.center = 0".to_string());
                    Complex64::new(0.0, 0.0)
                }
            };
            let (l_major, major) = require(entries, "semi_major", "domain")?;
            let semi_major = parse_real(l_major, "semi_major", &major)?;
            let (l_minor, minor) = require(entries, "semi_minor", "domain")?;
            let semi_minor = parse_real(l_minor, "semi_minor", &minor)?;
            let domain = Domain::ellipse(center, semi_major, semi_minor)
                .map_err(|e| config_error(type_line, "semi_major", e.to_string()))?;
            let desc = format!(
                "ellipse center={} semi_major={} semi_minor={}",
                fmt_complex(center),
                semi_major,
                semi_minor
            );
            (domain, desc)
        }
        "segment" => {
            let a = match take_one(entries, "a")? {
                Some((l, v)) => parse_complex_literal(l, "a", &v)?,
                None => {
                    defaults.push("domain.a = -1".to_string());
                    Complex64::new(-1.0, 0.0)
                }
            };
            let b = match take_one(entries, "b")? {
                Some((l, v)) => parse_complex_literal(l, "b", &v)?,
                None => {
                    defaults.push("domain.b = 1".to_string());
                    Complex64::new(1.0, 0.0)
                }
            };
            let domain = Domain::segment(a, b)
                .map_err(|e| config_error(type_line, "a", e.to_string()))?;
            let desc = format!("segment a={} b={}", fmt_complex(a), fmt_complex(b));
            (domain, desc)
        }
        other => {
            return Err(config_error(
                type_line,
                "type",
                format!("unknown domain type '{other}' (expected disk, ellipse, or segment)"),
            ))
        }
    };
    reject_unused(entries, "domain")?;
    Ok(result)
}

fn build_system(
    entries: &mut Vec<Entry>,
) -> Result<(FunctionSystem, Vec<String>), ConfigError> {
    let mut expressions = Vec::new();
    let mut functions = Vec::new();
    for index in 1.. {
        match take_one(entries, &format!("f{index}"))? {
            Some((line, value)) => {
                let key = format!("f{index}");
                let f = parse_function_expression(&value)
                    .map_err(|e| config_error(line, &key, e.to_string()))?;
                expressions.push(value);
                functions.push(f);
            }
            None => break,
        }
    }
    if functions.is_empty() {
        return Err(config_error(0, "f1", "missing required key in [system]"));
    }
    reject_unused(entries, "system")?;
    let system = FunctionSystem::from_functions(functions)
        .map_err(|e| config_error(0, "f1", e.to_string()))?;
    Ok((system, expressions))
}

struct Approximation {
    mode: Mode,
    m: MultiIndex,
    degrees: Vec<usize>,
    m_star: Option<usize>,
    tol: f64,
}

fn build_approximation(
    entries: &mut Vec<Entry>,
    system: &FunctionSystem,
    defaults: &mut Vec<String>,
) -> Result<Approximation, ConfigError> {
    let mode = match take_one(entries, "mode")? {
        Some((line, value)) => match value.to_lowercase().as_str() {
            "solve" => Mode::Solve,
            "direct" => Mode::Direct,
            "inverse" => Mode::Inverse,
            "incomplete" => Mode::Incomplete,
            other => {
                return Err(config_error(
                    line,
                    "mode",
                    format!("unknown mode '{other}' (expected solve, direct, inverse, or incomplete)"),
                ))
            }
        },
        None => {
            defaults.push("approximation.mode = solve".to_string());
            Mode::Solve
        }
    };

    let (m_line, m_text) = require(entries, "m", "approximation")?;
    let mut orders = Vec::new();
    for part in m_text.split(',') {
        orders.push(parse_int(m_line, "m", part)?);
    }
    let m = MultiIndex::new(orders).map_err(|e| config_error(m_line, "m", e.to_string()))?;
    m.check_system(system)
        .map_err(|e| config_error(m_line, "m", e.to_string()))?;

    let single = take_one(entries, "n")?;
    let n_min = take_one(entries, "n_min")?;
    let n_max = take_one(entries, "n_max")?;
    let n_step = take_one(entries, "n_step")?;
    let degrees = match (single, n_min, n_max) {
        (Some((line, value)), None, None) => {
            if n_step.is_some() {
                return Err(config_error(line, "n_step", "n_step requires n_min/n_max"));
            }
            let n = parse_int(line, "n", &value)?;
            if n < 1 {
                return Err(config_error(line, "n", "n must be at least 1"));
            }
            vec![n]
        }
        (None, Some((lo_line, lo_text)), Some((hi_line, hi_text))) => {
            let lo = parse_int(lo_line, "n_min", &lo_text)?;
            let hi = parse_int(hi_line, "n_max", &hi_text)?;
            if lo < 1 {
                return Err(config_error(lo_line, "n_min", "n_min must be at least 1"));
            }
            if hi < lo {
                return Err(config_error(hi_line, "n_max", "n_max must be ≥ n_min"));
            }
            let step = match n_step {
                Some((line, value)) => {
                    let s = parse_int(line, "n_step", &value)?;
                    if s < 1 {
                        return Err(config_error(line, "n_step", "n_step must be at least 1"));
                    }
                    s
                }
                None => {
                    defaults.push("approximation.n_step = 1".to_string());
                    1
                }
            };
            (lo..=hi).step_by(step).collect()
        }
        (None, None, None) => {
            return Err(config_error(
                0,
                "n",
                "missing degrees: give n, or n_min and n_max",
            ))
        }
        _ => {
            return Err(config_error(
                0,
                "n",
                "give either a single n or the n_min/n_max pair, not both",
            ))
        }
    };

    let m_star = match take_one(entries, "m_star")? {
        Some((line, value)) => {
            if mode != Mode::Incomplete {
                return Err(config_error(
                    line,
                    "m_star",
                    "m_star is only meaningful in incomplete mode",
                ));
            }
            Some(parse_int(line, "m_star", &value)?)
        }
        None => None,
    };
    if mode == Mode::Incomplete {
        let m_star = m_star
            .ok_or_else(|| config_error(0, "m_star", "incomplete mode requires m_star"))?;
        if system.len() != 1 || m.len() != 1 {
            return Err(config_error(
                0,
                "m_star",
                "incomplete mode works on a single function with a single order",
            ));
        }
        if m_star < 1 || m_star > m.component(0) {
            return Err(config_error(
                0,
                "m_star",
                format!("m_star must lie in 1..={}", m.component(0)),
            ));
        }
    }

    let tol = match take_one(entries, "tol")? {
        Some((line, value)) => {
            let t = parse_real(line, "tol", &value)?;
            if !(0.0..1.0).contains(&t) {
                return Err(config_error(line, "tol", "tol must lie in [0, 1)"));
            }
            t
        }
        None => {
            if matches!(mode, Mode::Inverse | Mode::Direct) {
                defaults.push("approximation.tol = 0.1".to_string());
            }
            0.1
        }
    };

    reject_unused(entries, "approximation")?;
    Ok(Approximation {
        mode,
        m,
        degrees,
        m_star,
        tol,
    })
}

fn build_quadrature(
    entries: &mut Vec<Entry>,
) -> Result<(Option<f64>, Option<usize>), ConfigError> {
    let rho = match take_one(entries, "rho")? {
        Some((line, value)) => {
            let r = parse_real(line, "rho", &value)?;
            if r <= 1.0 {
                return Err(config_error(line, "rho", "rho must exceed 1"));
            }
            Some(r)
        }
        None => None,
    };
    let nodes = match take_one(entries, "nodes")? {
        Some((line, value)) => {
            let n = parse_int(line, "nodes", &value)?;
            if !n.is_power_of_two() {
                return Err(config_error(line, "nodes", "nodes must be a power of two"));
            }
            Some(n)
        }
        None => None,
    };
    reject_unused(entries, "quadrature")?;
    Ok((rho, nodes))
}

fn build_metadata(entries: &mut Vec<Entry>) -> Result<Vec<DeclaredPole>, ConfigError> {
    let mut declarations = Vec::new();
    for e in entries.iter_mut() {
        if e.key != "pole" {
            continue;
        }
        e.used = true;
        let parts: Vec<&str> = e.value.split(':').collect();
        if parts.len() != 3 {
            return Err(config_error(
                e.line,
                "pole",
                "expected 'xi : tau : rho_1,…,rho_tau'",
            ));
        }
        let xi = parse_complex_literal(e.line, "pole", parts[0])?;
        let tau = parse_int(e.line, "pole", parts[1])?;
        let mut rho = Vec::new();
        for part in parts[2].split(',') {
            let text = part.trim();
            let value = if text == "inf" {
                f64::INFINITY
            } else {
                parse_real(e.line, "pole", text)?
            };
            rho.push(value);
        }
        declarations.push(DeclaredPole { xi, tau, rho });
    }
    reject_unused(entries, "metadata")?;
    Ok(declarations)
}

fn build_output(entries: &mut Vec<Entry>) -> Result<Option<PathBuf>, ConfigError> {
    let dir = take_one(entries, "dir")?.map(|(_, v)| PathBuf::from(v));
    reject_unused(entries, "output")?;
    Ok(dir)
}

/// Parses and validates a config file.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let mut sections = split_sections(text)?;
    let mut defaults = Vec::new();

    let (domain, domain_desc) = build_domain(&mut sections.domain, &mut defaults)?;
    let (system, expressions) = build_system(&mut sections.system)?;
    let approx = build_approximation(&mut sections.approximation, &system, &mut defaults)?;
    let (rho, nodes) = build_quadrature(&mut sections.quadrature)?;
    let declarations = build_metadata(&mut sections.metadata)?;
    let out_dir = build_output(&mut sections.output)?;

    system
        .validate_on(&domain)
        .map_err(|e| config_error(0, "f1", e.to_string()))?;

    if approx.mode == Mode::Direct && declarations.is_empty() {
        let rational = system
            .functions()
            .iter()
            .all(|f| matches!(f.tail(), Tail::None | Tail::Polynomial(_)));
        if !rational {
            return Err(config_error(
                0,
                "pole",
                "direct mode on a non-rational system requires [metadata] pole declarations",
            ));
        }
    }

    Ok(ExperimentConfig {
        domain,
        domain_desc,
        expressions,
        system,
        m: approx.m,
        mode: approx.mode,
        degrees: approx.degrees,
        m_star: approx.m_star,
        tol: approx.tol,
        rho,
        nodes,
        declarations,
        out_dir,
        defaults_applied: defaults,
    })
}

/// What a successful run produced.
#[derive(Debug)]
pub struct RunArtifacts {
    /// Paths of the emitted files, in emission order.
    pub files: Vec<PathBuf>,
    /// One verdict line per experiment performed.
    pub summary_lines: Vec<String>,
    /// Process exit status implied by the run (always 0 on success).
    pub exit_status: i32,
}

/// Runtime failure of a run.
#[derive(Debug)]
pub enum RunError {
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    Numeric(AnalysisError),
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Io { path, source } => write!(f, "i/o error on {}: {source}", path.display()),
            RunError::Numeric(e) => write!(f, "numerical failure: {e}"),
        }
    }
}

impl std::error::Error for RunError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            RunError::Io { source, .. } => Some(source),
            RunError::Numeric(e) => Some(e),
        }
    }
}

impl From<AnalysisError> for RunError {
    fn from(e: AnalysisError) -> Self {
        RunError::Numeric(e)
    }
}

impl From<crate::approximant::ApproximantError> for RunError {
    fn from(e: crate::approximant::ApproximantError) -> Self {
        RunError::Numeric(AnalysisError::from(e))
    }
}

fn fmt_full(v: f64) -> String {
    format!("{:.16e}", v)
}

fn fmt_short(v: f64) -> String {
    format!("{:.6e}", v)
}

fn write_file(path: &Path, content: &str) -> Result<(), RunError> {
    std::fs::write(path, content).map_err(|source| RunError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Roots of a solved denominator, (re, im)-sorted, padded with NaN to the
/// nominal degree.
fn padded_roots(result: &PadeFaberResult, degree: usize) -> Result<Vec<Complex64>, RunError> {
    let mut roots = poly_roots(&result.denominator).map_err(RunError::Numeric)?;
    roots.truncate(degree);
    while roots.len() < degree {
        roots.push(Complex64::new(f64::NAN, f64::NAN));
    }
    Ok(roots)
}

fn denominators_csv(
    degrees: &[usize],
    results: &[PadeFaberResult],
    degree: usize,
) -> Result<String, RunError> {
    let mut header = String::from("n,unique,defect");
    for j in 0..=degree {
        header.push_str(&format!(",q{j}_re,q{j}_im"));
    }
    for r in 1..=degree {
        header.push_str(&format!(",root{r}_re,root{r}_im"));
    }
    let mut out = header;
    out.push('\n');
    for (i, result) in results.iter().enumerate() {
        let mut row = format!(
            "{},{},{}",
            degrees[i],
            result.unique,
            fmt_full(result.defect)
        );
        for j in 0..=degree {
            let c = result
                .denominator_coefficients
                .get(j)
                .copied()
                .unwrap_or_default();
            row.push_str(&format!(",{},{}", fmt_full(c.re), fmt_full(c.im)));
        }
        for root in padded_roots(result, degree)? {
            row.push_str(&format!(",{},{}", fmt_full(root.re), fmt_full(root.im)));
        }
        out.push_str(&row);
        out.push('\n');
    }
    Ok(out)
}

fn rates_csv(
    degrees: &[usize],
    errors: &[f64],
    fitted: Option<f64>,
    predicted: Option<f64>,
    theta: Option<f64>,
) -> String {
    let mut out = String::from("n,error\n");
    for (n, e) in degrees.iter().zip(errors.iter()) {
        out.push_str(&format!("{n},{}\n", fmt_full(*e)));
    }
    if let Some(v) = fitted {
        out.push_str(&format!("fitted_rate,{}\n", fmt_full(v)));
    }
    if let Some(v) = predicted {
        out.push_str(&format!("predicted_rate,{}\n", fmt_full(v)));
    }
    if let Some(v) = theta {
        out.push_str(&format!("theta,{}\n", fmt_full(v)));
    }
    out
}

/// Root trajectories as `label,n,re,im` rows.
fn roots_paths_csv(paths: &[(String, Vec<(usize, Complex64)>)]) -> String {
    let mut out = String::from("label,n,re,im\n");
    for (label, path) in paths {
        for (n, z) in path {
            out.push_str(&format!(
                "{label},{n},{},{}\n",
                fmt_full(z.re),
                fmt_full(z.im)
            ));
        }
    }
    out
}

/// Sort-order root trajectories for modes without predicted poles.
fn indexed_paths(
    degrees: &[usize],
    results: &[PadeFaberResult],
    degree: usize,
) -> Result<Vec<(String, Vec<(usize, Complex64)>)>, RunError> {
    let mut paths: Vec<(String, Vec<(usize, Complex64)>)> = (1..=degree)
        .map(|i| (format!("path{i}"), Vec::new()))
        .collect();
    for (i, result) in results.iter().enumerate() {
        let roots = poly_roots(&result.denominator).map_err(RunError::Numeric)?;
        for (slot, root) in roots.into_iter().take(degree).enumerate() {
            paths[slot].1.push((degrees[i], root));
        }
    }
    Ok(paths)
}

fn coefficient_distance_to(coeffs: &[Complex64], p: &crate::poly::ComplexPoly) -> f64 {
    let len = coeffs.len().max(p.degree().map_or(0, |d| d + 1));
    (0..len)
        .map(|j| {
            let a = coeffs.get(j).copied().unwrap_or_default();
            (a - p.coeff(j)).norm_sqr()
        })
        .sum::<f64>()
        .sqrt()
}

/// Builds metadata for direct mode: declarations when present, the rational
/// computation otherwise.
fn resolve_metadata(config: &ExperimentConfig) -> Result<SystemMetadata, AnalysisError> {
    if config.declarations.is_empty() {
        system_poles_rational(&config.system, &config.m, &config.domain)
    } else {
        declared_metadata(
            &config.system,
            &config.m,
            &config.domain,
            &config.declarations,
        )
    }
}

/// Runs the experiment described by `config`, writing the four output files
/// into `out_dir`.
pub fn run(config: &ExperimentConfig, out_dir: &Path) -> Result<RunArtifacts, RunError> {
    std::fs::create_dir_all(out_dir).map_err(|source| RunError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;

    let mut quad = QuadratureSettings::new(config.domain.clone());
    if let Some(rho) = config.rho {
        quad = quad.with_rho(rho);
    }
    if let Some(nodes) = config.nodes {
        quad = quad.with_node_count(nodes);
    }

    let degrees = &config.degrees;
    let n_max = *degrees.iter().max().expect("validated non-empty");

    // Solve the sequence once for the denominator table.
    let nominal_degree;
    let results: Vec<PadeFaberResult> = match config.mode {
        Mode::Incomplete => {
            let m = config.m.component(0);
            let m_star = config.m_star.expect("validated in parse");
            nominal_degree = m;
            degrees
                .iter()
                .map(|&n| {
                    incomplete_pade_faber(config.system.function(0), m, m_star, n, &quad)
                })
                .collect::<Result<_, _>>()?
        }
        _ => {
            nominal_degree = config.m.total();
            let ctx = SolveContext::new(&config.system, &config.m, n_max, &quad)?;
            degrees
                .iter()
                .map(|&n| simultaneous_pade_faber_from_context(&ctx, &config.m, n))
                .collect::<Result<_, _>>()?
        }
    };

    // Resolved quadrature settings, for the summary.
    let level = config
        .system
        .singularity_level(&config.domain)
        .map_err(|e| RunError::Numeric(AnalysisError::from(e)))?;
    let resolved_rho = config.rho.unwrap_or_else(|| default_rho(level));
    let resolved_nodes = config.nodes.unwrap_or_else(|| default_node_count(n_max + 1));

    let mut summary = Vec::new();
    summary.push(format!("mode: {}", config.mode.name()));
    summary.push(format!("domain: {}", config.domain_desc));
    for (i, expr) in config.expressions.iter().enumerate() {
        summary.push(format!("f{}: {}", i + 1, expr));
    }
    summary.push(format!("m: {}", config.m));
    if let Some(m_star) = config.m_star {
        summary.push(format!("m_star: {m_star}"));
    }
    summary.push(format!(
        "degrees: {}..{} ({} values)",
        degrees.first().unwrap(),
        n_max,
        degrees.len()
    ));
    summary.push(format!(
        "rho: {}{}",
        resolved_rho,
        if config.rho.is_none() { " (default)" } else { "" }
    ));
    summary.push(format!(
        "nodes: {}{}",
        resolved_nodes,
        if config.nodes.is_none() { " (default)" } else { "" }
    ));
    for decl in &config.declarations {
        summary.push(format!(
            "declared pole: {} order {} radii {}",
            fmt_complex(decl.xi),
            decl.tau,
            decl.rho
                .iter()
                .map(|r| r.to_string())
                .collect::<Vec<_>>()
                .join(",")
        ));
    }
    for d in &config.defaults_applied {
        summary.push(format!("default applied: {d}"));
    }

    let mut verdict_lines: Vec<String> = Vec::new();
    let rates_content;
    let paths_content;

    match config.mode {
        Mode::Solve | Mode::Incomplete => {
            rates_content = rates_csv(degrees, &[], None, None, None);
            paths_content = roots_paths_csv(&indexed_paths(degrees, &results, nominal_degree)?);
            let last = results.last().expect("non-empty");
            let roots = poly_roots(&last.denominator).map_err(RunError::Numeric)?;
            let roots_text = roots
                .iter()
                .map(|r| fmt_complex(*r))
                .collect::<Vec<_>>()
                .join(", ");
            verdict_lines.push(format!(
                "{}: final denominator at n={} unique={} roots [{}]",
                config.mode.name(),
                n_max,
                last.unique,
                roots_text
            ));
        }
        Mode::Direct => {
            let metadata = resolve_metadata(config)?;
            let report =
                run_direct_experiment(&config.system, &config.m, &metadata, degrees, &quad)?;
            let verdict = run_inverse_experiment(&config.system, &config.m, degrees, &quad, config.tol)?;

            rates_content = rates_csv(
                &report.n_values,
                &report.errors,
                Some(report.fitted_rate),
                Some(report.predicted_rate),
                Some(verdict.theta),
            );
            let labeled: Vec<(String, Vec<(usize, Complex64)>)> = report
                .root_paths
                .iter()
                .enumerate()
                .map(|(i, p)| (format!("pole{}", i + 1), p.path.clone()))
                .collect();
            paths_content = roots_paths_csv(&labeled);

            verdict_lines.push(format!(
                "direct: fitted_rate={} predicted_rate={} exact_recovery={} converged={}",
                fmt_short(report.fitted_rate),
                fmt_short(report.predicted_rate),
                report.exact_recovery,
                report.converged
            ));
            verdict_lines.push(format!(
                "inverse: converged={} pole_count={} theta={} n0={}",
                verdict.converged,
                verdict.pole_count,
                fmt_short(verdict.theta),
                verdict
                    .n0
                    .map(|n| n.to_string())
                    .unwrap_or_else(|| "none".to_string())
            ));
            let limit_coeffs: Vec<Complex64> = (0..=config.m.total())
                .map(|j| verdict.limit_q.coeff(j))
                .collect();
            let gap = coefficient_distance_to(&limit_coeffs, &metadata.predicted_q);
            let agrees = verdict.converged && report.converged && gap <= 1e-6;
            verdict_lines.push(format!(
                "equivalence check: limit-vs-predicted distance {} -> {}",
                fmt_short(gap),
                if agrees { "consistent" } else { "inconsistent" }
            ));
        }
        Mode::Inverse => {
            let verdict = run_inverse_experiment(&config.system, &config.m, degrees, &quad, config.tol)?;
            let errors: Vec<f64> = results
                .iter()
                .map(|r| coefficient_distance_to(&r.denominator_coefficients, &verdict.limit_q))
                .collect();
            let predicted = if config.declarations.is_empty() {
                None
            } else {
                declared_metadata(
                    &config.system,
                    &config.m,
                    &config.domain,
                    &config.declarations,
                )
                .map(|meta| meta.predicted_rate)
                .ok()
            };
            rates_content = rates_csv(degrees, &errors, None, predicted, Some(verdict.theta));
            paths_content = roots_paths_csv(&indexed_paths(degrees, &results, nominal_degree)?);

            let roots_text = verdict
                .limit_roots
                .iter()
                .map(|r| fmt_complex(*r))
                .collect::<Vec<_>>()
                .join(", ");
            verdict_lines.push(format!(
                "inverse: converged={} pole_count={} theta={} n0={} limit_roots [{}]",
                verdict.converged,
                verdict.pole_count,
                fmt_short(verdict.theta),
                verdict
                    .n0
                    .map(|n| n.to_string())
                    .unwrap_or_else(|| "none".to_string()),
                roots_text
            ));
        }
    }

    summary.extend(verdict_lines.iter().cloned());
    summary.push(
        "files: denominators.csv, rates.csv, roots_paths.csv, summary.txt".to_string(),
    );

    let denominators_content = denominators_csv(degrees, &results, nominal_degree)?;
    let summary_content = summary.join("\n") + "\n";

    let files = vec![
        out_dir.join("denominators.csv"),
        out_dir.join("rates.csv"),
        out_dir.join("roots_paths.csv"),
        out_dir.join("summary.txt"),
    ];
    write_file(&files[0], &denominators_content)?;
    write_file(&files[1], &rates_content)?;
    write_file(&files[2], &paths_content)?;
    write_file(&files[3], &summary_content)?;

    Ok(RunArtifacts {
        files,
        summary_lines: verdict_lines,
        exit_status: 0,
    })
}

/// Command-line arguments of the `faberpade` binary.
#[derive(Debug, ClapParser)]
#[command(
    name = "faberpade",
    version,
    about = "Simultaneous Padé–Faber approximation experiments"
)]
struct Args {
    /// Path to the experiment config file.
    config: PathBuf,
    /// Output directory (overrides the config's [output] dir).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Quadrature node count override (power of two).
    #[arg(long)]
    nodes: Option<usize>,
    /// Contour level override (must exceed 1).
    #[arg(long)]
    rho: Option<f64>,
    /// Run twice and require byte-identical outputs.
    #[arg(long)]
    seed_check: bool,
}

/// Entry point for the `faberpade` binary. Returns the process exit code:
/// 0 success, 1 usage/config error, 2 numerical or I/O failure.
pub fn run_main() -> i32 {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };

    let text = match std::fs::read_to_string(&args.config) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("cannot read config {}: {e}", args.config.display());
            return 1;
        }
    };
    let mut config = match parse_config(&text) {
        Ok(config) => config,
        Err(e) => {
            eprintln!("{e}");
            return 1;
        }
    };
    if let Some(rho) = args.rho {
        if rho <= 1.0 {
            eprintln!("config error (line 0, key 'rho'): rho must exceed 1");
            return 1;
        }
        config.rho = Some(rho);
    }
    if let Some(nodes) = args.nodes {
        if !nodes.is_power_of_two() {
            eprintln!("config error (line 0, key 'nodes'): nodes must be a power of two");
            return 1;
        }
        config.nodes = Some(nodes);
    }

    let out_dir = args
        .out
        .clone()
        .or_else(|| config.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"));

    let artifacts = match run(&config, &out_dir) {
        Ok(artifacts) => artifacts,
        Err(e) => {
            eprintln!("{e}");
            return 2;
        }
    };

    if args.seed_check {
        let check_dir = out_dir.join("seed-check-tmp");
        let second = match run(&config, &check_dir) {
            Ok(second) => second,
            Err(e) => {
                eprintln!("seed check rerun failed: {e}");
                return 2;
            }
        };
        for (a, b) in artifacts.files.iter().zip(second.files.iter()) {
            let left = std::fs::read(a);
            let right = std::fs::read(b);
            match (left, right) {
                (Ok(left), Ok(right)) if left == right => {}
                _ => {
                    eprintln!(
                        "seed check failed: {} differs between runs",
                        a.file_name().unwrap_or_default().to_string_lossy()
                    );
                    return 2;
                }
            }
        }
        if let Err(e) = std::fs::remove_dir_all(&check_dir) {
            eprintln!("cannot clean up {}: {e}", check_dir.display());
            return 2;
        }
        println!("seed check passed: outputs byte-identical across runs");
    }

    for line in &artifacts.summary_lines {
        println!("{line}");
    }
    for file in &artifacts.files {
        println!("wrote {}", file.display());
    }
    0
}
