//! Built-in consistency checks: ordering equivalences, ideal stabilizer
//! values, and branch determinism of every catalog pattern and parameter
//! grid.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;

use crate::algorithms::{
    catalog, cnot_oracle, cnot_pattern, cphase_oracle, cphase_pattern, deutsch_oracle, deutsch_pattern,
    grover_pattern, rotation_oracle, rotation_pattern, CatalogEntry, ControlOp, Expected, LogicalInput,
    OracleFunction, RotationOrdering, RotationSpec, Tag,
};
use crate::lab::{make_c4, table1_witness, verify_ordering, QubitOrdering};
use crate::pattern::{MeasurementPattern, Result};
use crate::runtime::{corrected_distribution, run_exhaustive};
use crate::state::PureState;

pub const FIDELITY_TOL: f64 = 1e-9;

/// `(α, β)` settings of the single-qubit rotation grid with `β ≠ 0`.
pub const ROTATION_GRID_BETA: [(f64, f64); 4] =
    [(0.0, FRAC_PI_2), (-FRAC_PI_2, 0.0), (-FRAC_PI_2, FRAC_PI_2), (-FRAC_PI_2, -FRAC_PI_4)];

/// `(α, 0)` settings of the single-qubit rotation grid.
pub const ROTATION_GRID_ALPHA: [(f64, f64); 4] = [(0.0, 0.0), (FRAC_PI_2, 0.0), (FRAC_PI_4, 0.0), (-FRAC_PI_4, 0.0)];

pub const CNOT_ALPHAS: [f64; 2] = [FRAC_PI_2, FRAC_PI_4];

pub const CPHASE_GRID: [(f64, f64); 7] = [
    (0.0, 0.0),
    (PI, 0.0),
    (FRAC_PI_2, 0.0),
    (-FRAC_PI_2, 0.0),
    (FRAC_PI_2, FRAC_PI_2),
    (FRAC_PI_2, -FRAC_PI_2),
    (FRAC_PI_4, FRAC_PI_2),
];

/// `2πk/16` for `k = 0…15`.
pub fn equatorial_grid() -> Vec<f64> {
    (0..16).map(|k| 2.0 * PI * k as f64 / 16.0).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub group: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {}: {}", self.name, self.detail)
    }
}

type GridCheck = fn() -> Result<(bool, String)>;

fn check(group: &'static str, name: impl Into<String>, outcome: Result<(bool, String)>) -> Check {
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    Check { group, name: name.into(), passed, detail }
}

/// Smallest fidelity between any corrected branch output and `oracle`,
/// and the total branch probability.
pub fn worst_branch_fidelity(p: &MeasurementPattern, oracle: &PureState) -> Result<(f64, f64)> {
    let mut worst: f64 = 1.0;
    let mut total = 0.0;
    for b in run_exhaustive(p)? {
        worst = worst.min(b.corrected()?.fidelity(oracle)?);
        total += b.record.probability;
    }
    Ok((worst, total))
}

/// Probability that the relabeled readout equals `bits`.
pub fn success_probability(p: &MeasurementPattern, bits: &str) -> Result<f64> {
    Ok(corrected_distribution(p)?.get(bits).copied().unwrap_or(0.0))
}

fn state_verdict(worst: f64, total: f64) -> (bool, String) {
    let ok = (worst - 1.0).abs() < FIDELITY_TOL && (total - 1.0).abs() < FIDELITY_TOL;
    (ok, format!("worst fidelity {worst:.12}, total probability {total:.12}"))
}

fn bits_verdict(p: f64, bits: &str) -> (bool, String) {
    ((p - 1.0).abs() < FIDELITY_TOL, format!("P({bits}) = {p:.12}"))
}

/// Checks one catalog entry, optionally against a replacement pattern.
pub fn check_entry(entry: &CatalogEntry, pattern: &MeasurementPattern) -> Check {
    let outcome = match &entry.expected {
        Expected::State(oracle) => worst_branch_fidelity(pattern, oracle).map(|(w, t)| state_verdict(w, t)),
        Expected::Bits(bits) => success_probability(pattern, bits).map(|p| bits_verdict(p, bits)),
    };
    check("pattern", format!("pattern {}", entry.pattern.name), outcome)
}

fn worst_over<I>(items: I) -> Result<(bool, String)>
where
    I: IntoIterator<Item = Result<(f64, f64)>>,
{
    let mut worst: f64 = 1.0;
    let mut worst_total: f64 = 1.0;
    let mut count = 0;
    for item in items {
        let (w, t) = item?;
        worst = worst.min(w);
        if (t - 1.0).abs() > (worst_total - 1.0).abs() {
            worst_total = t;
        }
        count += 1;
    }
    let (ok, detail) = state_verdict(worst, worst_total);
    Ok((ok, format!("{count} settings, {detail}")))
}

pub fn rotation_grid() -> Result<(bool, String)> {
    let mut specs = Vec::new();
    for &(alpha, beta) in ROTATION_GRID_BETA.iter().chain(&ROTATION_GRID_ALPHA) {
        for input in [LogicalInput::Plus, LogicalInput::Minus] {
            for ordering in [RotationOrdering::A, RotationOrdering::B] {
                specs.push(RotationSpec { alpha, beta, input, ordering });
            }
        }
    }
    worst_over(specs.iter().map(|s| worst_branch_fidelity(&rotation_pattern(s), &rotation_oracle(s))))
}

pub fn cnot_grid() -> Result<(bool, String)> {
    let alphas: Vec<f64> = CNOT_ALPHAS.iter().copied().chain(equatorial_grid()).collect();
    let settings = [ControlOp::Hadamard, ControlOp::Identity].into_iter().flat_map(|op| alphas.iter().map(move |&a| (op, a)));
    worst_over(settings.map(|(op, a)| worst_branch_fidelity(&cnot_pattern(op, a), &cnot_oracle(op, a))))
}

pub fn cphase_grid() -> Result<(bool, String)> {
    worst_over(CPHASE_GRID.iter().map(|&(a, b)| worst_branch_fidelity(&cphase_pattern(a, b), &cphase_oracle(a, b))))
}

pub fn grover_tags() -> Result<(bool, String)> {
    let mut worst: f64 = 1.0;
    for tag in Tag::ALL {
        worst = worst.min(success_probability(&grover_pattern(tag), &tag.to_string())?);
    }
    Ok(((worst - 1.0).abs() < FIDELITY_TOL, format!("4 tags, worst success probability {worst:.12}")))
}

pub fn deutsch_functions() -> Result<(bool, String)> {
    let mut worst: f64 = 1.0;
    for f in OracleFunction::ALL {
        let p = deutsch_pattern(f.canonical());
        worst = worst.min(success_probability(&p, &deutsch_oracle(f))?);
    }
    Ok(((worst - 1.0).abs() < FIDELITY_TOL, format!("4 functions, worst success probability {worst:.12}")))
}

/// Runs every check whose name or group contains `filter`. Patterns in
/// `overrides` replace the catalog pattern of the same name.
pub fn run_checks(filter: Option<&str>, overrides: &[MeasurementPattern]) -> Vec<Check> {
    let selected = |group: &str, name: &str| filter.is_none_or(|f| group.contains(f) || name.contains(f));
    let mut out = Vec::new();

    for o in QubitOrdering::all() {
        let name = format!("ordering {}", o.id);
        if selected("ordering", &name) {
            let outcome = verify_ordering(&o).map(|r| (r.passed, format!("fidelity {:.12}", r.fidelity)));
            out.push(check("ordering", name, outcome.map_err(Into::into)));
        }
    }

    if selected("stabilizer", "table1 ideal stabilizers") {
        let outcome = table1_witness(&make_c4()).map(|r| {
            let worst = r.expectations.iter().fold(f64::INFINITY, |m, &e| m.min(e));
            ((worst - 1.0).abs() < FIDELITY_TOL, format!("min expectation {worst:.12}, fidelity {:.12}", r.fidelity))
        });
        out.push(check("stabilizer", "table1 ideal stabilizers", outcome.map_err(Into::into)));
    }

    for entry in catalog() {
        let name = format!("pattern {}", entry.pattern.name);
        if selected("pattern", &name) {
            let pattern = overrides.iter().find(|p| p.name == entry.pattern.name).unwrap_or(&entry.pattern);
            out.push(check_entry(&entry, pattern));
        }
    }
    for p in overrides {
        if !catalog().iter().any(|e| e.pattern.name == p.name) {
            let detail = format!("no built-in oracle for pattern {:?}", p.name);
            out.push(Check { group: "pattern", name: format!("pattern {}", p.name), passed: false, detail });
        }
    }

    let grids: [(&str, GridCheck); 5] = [
        ("grid rotation", rotation_grid),
        ("grid cnot", cnot_grid),
        ("grid cphase", cphase_grid),
        ("grid grover", grover_tags),
        ("grid deutsch", deutsch_functions),
    ];
    for (name, f) in grids {
        if selected("grid", name) {
            out.push(check("grid", name, f()));
        }
    }
    out
}
