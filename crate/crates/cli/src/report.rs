//! Serializable run reports.

use std::collections::BTreeMap;
use std::io::Write;

use mbqc_core::pattern::{MeasurementPattern, Result};
use mbqc_core::runtime::{corrected_distribution, readout_distribution, run_pattern, sample_shots, Branch, RunMode};
use mbqc_core::PureState;
use serde::{Deserialize, Serialize};

/// Rounds to the 6 decimal places used in every report.
pub fn round6(x: f64) -> f64 {
    // Adding 0.0 folds -0.0 into 0.0.
    (x * 1e6).round() / 1e6 + 0.0
}

fn round_map(m: BTreeMap<String, f64>) -> BTreeMap<String, f64> {
    m.into_iter().map(|(k, v)| (k, round6(v))).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchReport {
    /// Outcome bits in step order.
    pub bits: String,
    pub outcomes: BTreeMap<String, u8>,
    pub probability: f64,
    /// `[x, z]` byproduct exponents per logical output.
    pub byproducts: Vec<[u8; 2]>,
    /// Corrected logical output as `[re, im]` amplitude pairs.
    pub corrected_output: Vec<[f64; 2]>,
    /// Relabeled readout distribution conditioned on this branch.
    pub readout: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    /// Probability (or frequency, when sampling) of each relabeled readout.
    pub distribution: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<BTreeMap<String, usize>>,
    /// Smallest fidelity of a corrected branch output with the oracle.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_fidelity: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub pattern: String,
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shots: Option<usize>,
    pub branches: Vec<BranchReport>,
    pub summary: Summary,
}

fn branch_report(p: &MeasurementPattern, b: &Branch) -> Result<BranchReport> {
    let corrected = b.corrected()?;
    Ok(BranchReport {
        bits: b.record.bit_string(),
        outcomes: b.record.labelled(),
        probability: round6(b.record.probability),
        byproducts: b.byproducts.iter().map(|x| [x.x, x.z]).collect(),
        corrected_output: corrected.amplitudes().iter().map(|a| [round6(a.re), round6(a.im)]).collect(),
        readout: round_map(readout_distribution(p, b)?),
    })
}

pub struct RunOptions {
    pub mode: RunMode,
    pub shots: Option<usize>,
    pub oracle: Option<PureState>,
}

pub fn build_report(p: &MeasurementPattern, opts: &RunOptions) -> Result<RunReport> {
    let branches = run_pattern(p, &opts.mode)?;
    let oracle_fidelity = match &opts.oracle {
        Some(o) => {
            let mut worst: f64 = 1.0;
            for b in &branches {
                worst = worst.min(b.corrected()?.fidelity(o)?);
            }
            Some(round6(worst))
        }
        None => None,
    };
    let (mode, seed, distribution, counts) = match &opts.mode {
        RunMode::Exhaustive => ("exhaustive", None, corrected_distribution(p)?, None),
        RunMode::Forced(_) => ("forced", None, readout_distribution(p, &branches[0])?, None),
        RunMode::Sample(seed) => {
            let shots = opts.shots.unwrap_or(1);
            let counts = sample_shots(p, shots, *seed)?;
            let dist = counts.iter().map(|(k, &c)| (k.clone(), c as f64 / shots as f64)).collect();
            ("sample", Some(*seed), dist, Some(counts))
        }
    };
    Ok(RunReport {
        pattern: p.name.clone(),
        mode: mode.into(),
        seed,
        shots: opts.shots.filter(|_| seed.is_some()),
        branches: branches.iter().map(|b| branch_report(p, b)).collect::<Result<_>>()?,
        summary: Summary { distribution: round_map(distribution), counts, oracle_fidelity },
    })
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible") + "\n"
    }

    /// Rows `section,key,probability,count`: one `branch` row per branch
    /// (key = outcome bits) and one `readout` row per relabeled readout.
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["section", "key", "probability", "count"])?;
        for b in &self.branches {
            w.write_record(["branch", &b.bits, &format!("{:.6}", b.probability), ""])?;
        }
        for (k, p) in &self.summary.distribution {
            let count = self.summary.counts.as_ref().and_then(|c| c.get(k)).map(|c| c.to_string()).unwrap_or_default();
            w.write_record(["readout", k, &format!("{p:.6}"), &count])?;
        }
        w.flush()
    }
}
