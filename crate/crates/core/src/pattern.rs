//! Measurement patterns: the JSON document model and its validation.
//!
//! A pattern names a graph, optional input preparations, an ordered list of
//! measurement steps (computational basis or an adaptive equatorial angle),
//! the unmeasured output sites, and per-logical-output XOR expressions for
//! Pauli byproducts and classical relabeling. Outcome labels are `s<site>`.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::QuantumError;
use crate::graph::Graph;
use crate::state::{Basis, PureState};

/// Longest pattern accepted by exhaustive enumeration (`2¹⁶` branches).
pub const MAX_EXHAUSTIVE_STEPS: usize = 16;

#[derive(Debug, Error)]
pub enum PatternError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("{field}: unknown site {site}")]
    UnknownSite { field: String, site: usize },

    #[error("{field}: site {site} is measured more than once")]
    DuplicateStep { field: String, site: usize },

    #[error("{field}: site {site} is neither measured nor an output")]
    UncoveredSite { field: String, site: usize },

    #[error("{field}: label {label} is not measured before it is used")]
    DependencyOrder { field: String, label: String },

    #[error("{field}: unknown label {label:?}")]
    UnknownLabel { field: String, label: String },

    #[error("{field}: logical output {index} does not exist")]
    UnknownOutput { field: String, index: usize },

    #[error("{0} steps exceed the exhaustive limit of {MAX_EXHAUSTIVE_STEPS}")]
    TooManySteps(usize),

    #[error("forced bit-string has {found} bits, pattern has {expected} steps")]
    ForcedLength { expected: usize, found: usize },

    #[error("invalid bit-string {0:?}")]
    InvalidBits(String),

    #[error("shot count must be at least 1")]
    NoShots,

    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

pub type Result<T> = std::result::Result<T, PatternError>;

impl From<serde_json::Error> for PatternError {
    fn from(e: serde_json::Error) -> Self {
        let message = e.to_string();
        // serde_json appends " at line L column C"; keep just the message.
        let message = match message.rfind(" at line ") {
            Some(k) => message[..k].to_string(),
            None => message,
        };
        PatternError::Syntax { line: e.line(), column: e.column(), message }
    }
}

/// A single term of an XOR expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    /// The constant bit 1.
    One,
    /// The outcome of measuring a site.
    Outcome(usize),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::One => write!(f, "1"),
            Term::Outcome(site) => write!(f, "s{site}"),
        }
    }
}

impl FromStr for Term {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "1" {
            return Ok(Term::One);
        }
        parse_label(s).map(Term::Outcome)
    }
}

/// Site index from an outcome label `s<site>`.
pub fn parse_label(s: &str) -> std::result::Result<usize, String> {
    s.strip_prefix('s')
        .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
        .and_then(|d| d.parse().ok())
        .ok_or_else(|| s.to_string())
}

pub fn label(site: usize) -> String {
    format!("s{site}")
}

/// Read-only view of the outcomes measured so far.
pub trait Outcomes {
    fn outcome(&self, site: usize) -> Option<u8>;
}

impl Outcomes for BTreeMap<usize, u8> {
    fn outcome(&self, site: usize) -> Option<u8> {
        self.get(&site).copied()
    }
}

/// XOR of outcome bits and constants; the empty expression is 0.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct XorExpr {
    terms: Vec<Term>,
}

impl TryFrom<Vec<String>> for XorExpr {
    type Error = String;

    fn try_from(v: Vec<String>) -> std::result::Result<Self, String> {
        let terms = v
            .iter()
            .map(|s| s.parse())
            .collect::<std::result::Result<_, String>>()
            .map_err(|l| format!("invalid label {l:?}"))?;
        Ok(Self { terms })
    }
}

impl From<XorExpr> for Vec<String> {
    fn from(e: XorExpr) -> Self {
        e.terms.iter().map(Term::to_string).collect()
    }
}

impl XorExpr {
    pub fn new(terms: impl IntoIterator<Item = Term>) -> Self {
        Self { terms: terms.into_iter().collect() }
    }

    /// XOR of the outcomes of `sites`.
    pub fn of(sites: &[usize]) -> Self {
        Self::new(sites.iter().map(|&s| Term::Outcome(s)))
    }

    /// Appends the constant 1.
    pub fn flipped(mut self) -> Self {
        self.terms.push(Term::One);
        self
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn sites(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.iter().filter_map(|t| match t {
            Term::Outcome(s) => Some(*s),
            Term::One => None,
        })
    }

    pub fn eval(&self, outcomes: &impl Outcomes) -> Result<u8> {
        self.terms.iter().try_fold(0u8, |acc, t| match *t {
            Term::One => Ok(acc ^ 1),
            Term::Outcome(site) => outcomes
                .outcome(site)
                .map(|b| acc ^ b)
                .ok_or_else(|| PatternError::UnknownLabel { field: "expression".into(), label: label(site) }),
        })
    }
}

/// `(−1)^{⊕ sign_deps} · angle + Σ_{(s, δ) ∈ offsets, s = 1} δ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleExpression {
    pub angle: f64,
    #[serde(default, skip_serializing_if = "XorExpr::is_empty")]
    pub sign_deps: XorExpr,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub offsets: Vec<Offset>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "(String, f64)", into = "(String, f64)")]
pub struct Offset {
    pub site: usize,
    pub radians: f64,
}

impl TryFrom<(String, f64)> for Offset {
    type Error = String;

    fn try_from((l, radians): (String, f64)) -> std::result::Result<Self, String> {
        let site = parse_label(&l).map_err(|l| format!("invalid label {l:?}"))?;
        Ok(Self { site, radians })
    }
}

impl From<Offset> for (String, f64) {
    fn from(o: Offset) -> Self {
        (label(o.site), o.radians)
    }
}

impl AngleExpression {
    pub fn fixed(angle: f64) -> Self {
        Self { angle, sign_deps: XorExpr::default(), offsets: Vec::new() }
    }

    pub fn with_sign_deps(mut self, deps: XorExpr) -> Self {
        self.sign_deps = deps;
        self
    }

    pub fn eval(&self, outcomes: &impl Outcomes) -> Result<f64> {
        let sign = if self.sign_deps.eval(outcomes)? == 1 { -1.0 } else { 1.0 };
        let mut angle = sign * self.angle;
        for o in &self.offsets {
            let bit = XorExpr::of(&[o.site]).eval(outcomes)?;
            if bit == 1 {
                angle += o.radians;
            }
        }
        Ok(angle)
    }

    fn sites(&self) -> impl Iterator<Item = usize> + '_ {
        self.sign_deps.sites().chain(self.offsets.iter().map(|o| o.site))
    }
}

/// Measurement basis of a step or readout: `"Z"` or an angle expression.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BasisDoc", into = "BasisDoc")]
pub enum StepBasis {
    Z,
    Angle(AngleExpression),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum BasisDoc {
    Named(String),
    Angle(AngleExpression),
}

impl TryFrom<BasisDoc> for StepBasis {
    type Error = String;

    fn try_from(d: BasisDoc) -> std::result::Result<Self, String> {
        match d {
            BasisDoc::Named(s) if s == "Z" => Ok(StepBasis::Z),
            BasisDoc::Named(s) => Err(format!("unknown basis {s:?}, expected \"Z\" or an angle object")),
            BasisDoc::Angle(a) => Ok(StepBasis::Angle(a)),
        }
    }
}

impl From<StepBasis> for BasisDoc {
    fn from(b: StepBasis) -> Self {
        match b {
            StepBasis::Z => BasisDoc::Named("Z".into()),
            StepBasis::Angle(a) => BasisDoc::Angle(a),
        }
    }
}

impl StepBasis {
    /// Fixed equatorial basis `B(angle)`.
    pub fn equatorial(angle: f64) -> Self {
        StepBasis::Angle(AngleExpression::fixed(angle))
    }

    pub fn resolve(&self, outcomes: &impl Outcomes) -> Result<Basis> {
        match self {
            StepBasis::Z => Ok(Basis::Computational),
            StepBasis::Angle(a) => Ok(Basis::Equatorial(a.eval(outcomes)?)),
        }
    }

    fn sites(&self) -> Vec<usize> {
        match self {
            StepBasis::Z => Vec::new(),
            StepBasis::Angle(a) => a.sites().collect(),
        }
    }
}

/// Single-qubit input preparation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InputState {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1")]
    One,
}

impl InputState {
    pub fn state(self) -> PureState {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        let (a0, a1) = match self {
            InputState::Plus => (h, h),
            InputState::Minus => (h, -h),
            InputState::Zero => (C64::new(1.0, 0.0), C64::new(0.0, 0.0)),
            InputState::One => (C64::new(0.0, 0.0), C64::new(1.0, 0.0)),
        };
        PureState::qubit(a0, a1).expect("normalized literal")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub site: usize,
    pub basis: StepBasis,
}

impl Step {
    pub fn new(site: usize, basis: StepBasis) -> Self {
        Self { site, basis }
    }
}

/// Pauli byproduct `σx^x σz^z` on one logical output.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Byproduct {
    #[serde(default)]
    pub x: XorExpr,
    #[serde(default)]
    pub z: XorExpr,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementPattern {
    pub name: String,
    pub graph: Graph,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub inputs: BTreeMap<usize, InputState>,
    pub steps: Vec<Step>,
    pub outputs: Vec<usize>,
    /// Basis for the final classical readout of each output site
    /// (computational when absent).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub readout: BTreeMap<usize, StepBasis>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub byproducts: BTreeMap<usize, Byproduct>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub relabel: BTreeMap<usize, XorExpr>,
}

impl FromStr for MeasurementPattern {
    type Err = PatternError;

    fn from_str(s: &str) -> Result<Self> {
        parse_pattern(s)
    }
}

/// Parses and validates a pattern document.
pub fn parse_pattern(doc: &str) -> Result<MeasurementPattern> {
    let p: MeasurementPattern = serde_json::from_str(doc)?;
    p.validate()?;
    Ok(p)
}

impl MeasurementPattern {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("pattern serialization is infallible")
    }

    pub fn num_logical(&self) -> usize {
        self.outputs.len()
    }

    pub fn byproduct(&self, logical: usize) -> Byproduct {
        self.byproducts.get(&logical).cloned().unwrap_or_default()
    }

    pub fn relabel_expr(&self, logical: usize) -> XorExpr {
        self.relabel.get(&logical).cloned().unwrap_or_default()
    }

    pub fn readout_basis(&self, logical: usize) -> StepBasis {
        self.readout.get(&self.outputs[logical]).cloned().unwrap_or(StepBasis::Z)
    }

    /// Checks the structural invariants: every site is measured exactly once
    /// or is an output, adaptive angles depend only on earlier outcomes, and
    /// byproduct/relabel expressions reference measured sites only.
    pub fn validate(&self) -> Result<()> {
        let n = self.graph.num_sites();
        let site_in_range = |field: String, site: usize| {
            if site < n {
                Ok(())
            } else {
                Err(PatternError::UnknownSite { field, site })
            }
        };
        for &site in self.inputs.keys() {
            site_in_range(format!("inputs.{site}"), site)?;
        }

        let mut measured = BTreeSet::new();
        for (k, step) in self.steps.iter().enumerate() {
            let field = format!("steps[{k}]");
            site_in_range(format!("{field}.site"), step.site)?;
            for dep in step.basis.sites() {
                self.check_label(&format!("{field}.basis"), dep, &measured)?;
            }
            if !measured.insert(step.site) {
                return Err(PatternError::DuplicateStep { field: format!("{field}.site"), site: step.site });
            }
        }

        let mut seen = BTreeSet::new();
        for (k, &site) in self.outputs.iter().enumerate() {
            let field = format!("outputs[{k}]");
            site_in_range(field.clone(), site)?;
            if measured.contains(&site) || !seen.insert(site) {
                return Err(PatternError::DuplicateStep { field, site });
            }
        }
        if let Some(site) = (0..n).find(|s| !measured.contains(s) && !seen.contains(s)) {
            return Err(PatternError::UncoveredSite { field: "outputs".into(), site });
        }

        for (&site, basis) in &self.readout {
            let field = format!("readout.{site}");
            if !seen.contains(&site) {
                return Err(PatternError::UnknownSite { field, site });
            }
            for dep in basis.sites() {
                self.check_label(&field, dep, &measured)?;
            }
        }
        for (&index, b) in &self.byproducts {
            self.check_logical("byproducts", index)?;
            for (axis, e) in [("x", &b.x), ("z", &b.z)] {
                for dep in e.sites() {
                    self.check_label(&format!("byproducts.{index}.{axis}"), dep, &measured)?;
                }
            }
        }
        for (&index, e) in &self.relabel {
            self.check_logical("relabel", index)?;
            for dep in e.sites() {
                self.check_label(&format!("relabel.{index}"), dep, &measured)?;
            }
        }
        Ok(())
    }

    fn check_label(&self, field: &str, site: usize, measured: &BTreeSet<usize>) -> Result<()> {
        if measured.contains(&site) {
            Ok(())
        } else if site < self.graph.num_sites() {
            Err(PatternError::DependencyOrder { field: field.into(), label: label(site) })
        } else {
            Err(PatternError::UnknownLabel { field: field.into(), label: label(site) })
        }
    }

    fn check_logical(&self, field: &str, index: usize) -> Result<()> {
        if index < self.outputs.len() {
            Ok(())
        } else {
            Err(PatternError::UnknownOutput { field: format!("{field}.{index}"), index })
        }
    }
}
