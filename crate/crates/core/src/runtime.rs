//! Pattern execution: exhaustive branch enumeration, forced and sampled
//! branches, byproduct correction, relabeling and shot sampling.
//!
//! Sampling is counter-seeded: shot `k` draws from a ChaCha8 stream `k` of
//! the given seed, so results do not depend on evaluation order or thread
//! count.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::QuantumError;
use crate::gate::Gate;
use crate::pattern::{label, MeasurementPattern, Outcomes, PatternError, Result, XorExpr, MAX_EXHAUSTIVE_STEPS};
use crate::state::{OutcomePolicy, PureState};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunMode {
    Exhaustive,
    /// One branch drawn from the Born distribution.
    Sample(u64),
    /// One branch with outcomes given in step order.
    Forced(Vec<u8>),
}

/// Outcomes of one branch, in step order, and its Born probability.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeRecord {
    pub outcomes: Vec<(usize, u8)>,
    pub probability: f64,
}

impl Outcomes for OutcomeRecord {
    fn outcome(&self, site: usize) -> Option<u8> {
        self.outcomes.iter().find(|(s, _)| *s == site).map(|&(_, b)| b)
    }
}

impl OutcomeRecord {
    /// Outcome bits in step order, e.g. `"010"`.
    pub fn bit_string(&self) -> String {
        self.outcomes.iter().map(|&(_, b)| char::from(b'0' + b)).collect()
    }

    pub fn labelled(&self) -> BTreeMap<String, u8> {
        self.outcomes.iter().map(|&(s, b)| (label(s), b)).collect()
    }
}

/// Evaluated `σx^x σz^z` exponents for one logical output.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ByproductBits {
    pub x: u8,
    pub z: u8,
}

#[derive(Debug, Clone)]
pub struct Branch {
    pub record: OutcomeRecord,
    /// Unmeasured sites, ordered as the pattern's `outputs`.
    pub output: PureState,
    pub byproducts: Vec<ByproductBits>,
}

impl Branch {
    pub fn corrected(&self) -> Result<PureState> {
        correct_byproducts(&self.output, &self.byproducts)
    }
}

/// `(∏ CZ) ⊗_j |in_j⟩`, with `|+⟩` where no input is given.
pub fn prepare(p: &MeasurementPattern) -> Result<PureState> {
    let n = p.graph.num_sites();
    let mut state = PureState::plus_state(0)?;
    for site in 0..n {
        let q = p.inputs.get(&site).map_or_else(|| PureState::plus_state(1), |i| Ok(i.state()))?;
        state = state.tensor(&q)?;
    }
    Ok(p.graph.edges().try_fold(state, |s, (a, b)| s.apply_cz(a, b))?)
}

/// Current register state plus the site held by each register position.
#[derive(Clone)]
struct Partial {
    state: PureState,
    sites: Vec<usize>,
    record: OutcomeRecord,
}

impl Partial {
    fn start(p: &MeasurementPattern) -> Result<Self> {
        Ok(Self {
            state: prepare(p)?,
            sites: (0..p.graph.num_sites()).collect(),
            record: OutcomeRecord { outcomes: Vec::new(), probability: 1.0 },
        })
    }

    fn measure(&self, p: &MeasurementPattern, k: usize, policy: OutcomePolicy<'_>) -> Result<Self> {
        let step = &p.steps[k];
        let basis = step.basis.resolve(&self.record)?;
        let q = self.sites.iter().position(|&s| s == step.site).expect("validated pattern");
        let m = self.state.measure(q, &basis, policy)?;
        let mut sites = self.sites.clone();
        sites.remove(q);
        let mut record = self.record.clone();
        record.outcomes.push((step.site, m.outcome));
        record.probability *= m.probability;
        Ok(Self { state: m.state, sites, record })
    }

    fn finish(self, p: &MeasurementPattern) -> Result<Branch> {
        let order: Vec<usize> =
            p.outputs.iter().map(|o| self.sites.iter().position(|s| s == o).expect("validated pattern")).collect();
        let output = self.state.permute(&order)?;
        let byproducts = (0..p.num_logical())
            .map(|a| {
                let b = p.byproduct(a);
                Ok(ByproductBits { x: b.x.eval(&self.record)?, z: b.z.eval(&self.record)? })
            })
            .collect::<Result<_>>()?;
        Ok(Branch { record: self.record, output, byproducts })
    }
}

pub fn run_pattern(p: &MeasurementPattern, mode: &RunMode) -> Result<Vec<Branch>> {
    p.validate()?;
    match mode {
        RunMode::Exhaustive => run_exhaustive(p),
        RunMode::Forced(bits) => Ok(vec![run_forced(p, bits)?]),
        RunMode::Sample(seed) => {
            let mut rng = shot_rng(*seed, 0);
            Ok(vec![run_sampled(p, &mut rng)?])
        }
    }
}

/// Every branch with probability above `1e-12`, in lexicographic outcome
/// order.
pub fn run_exhaustive(p: &MeasurementPattern) -> Result<Vec<Branch>> {
    if p.steps.len() > MAX_EXHAUSTIVE_STEPS {
        return Err(PatternError::TooManySteps(p.steps.len()));
    }
    let mut out = Vec::new();
    let mut stack = vec![(0usize, Partial::start(p)?)];
    while let Some((k, partial)) = stack.pop() {
        if k == p.steps.len() {
            out.push(partial.finish(p)?);
            continue;
        }
        // Push outcome 1 first so outcome 0 is explored first.
        for s in [1u8, 0] {
            match partial.measure(p, k, OutcomePolicy::Forced(s)) {
                Ok(next) => stack.push((k + 1, next)),
                Err(PatternError::Quantum(QuantumError::ImpossibleBranch { .. })) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(out)
}

pub fn run_forced(p: &MeasurementPattern, bits: &[u8]) -> Result<Branch> {
    if bits.len() != p.steps.len() {
        return Err(PatternError::ForcedLength { expected: p.steps.len(), found: bits.len() });
    }
    let mut partial = Partial::start(p)?;
    for (k, &s) in bits.iter().enumerate() {
        partial = partial.measure(p, k, OutcomePolicy::Forced(s))?;
    }
    partial.finish(p)
}

pub fn run_sampled(p: &MeasurementPattern, rng: &mut ChaCha8Rng) -> Result<Branch> {
    let mut partial = Partial::start(p)?;
    for k in 0..p.steps.len() {
        partial = partial.measure(p, k, OutcomePolicy::Sample(rng))?;
    }
    partial.finish(p)
}

/// Parses a bit-string such as `"0110"`.
pub fn parse_bits(s: &str) -> Result<Vec<u8>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(PatternError::InvalidBits(s.to_string())),
        })
        .collect()
}

/// Undoes `∏_a σx^{x_a} σz^{z_a}` on the logical outputs.
pub fn correct_byproducts(output: &PureState, bits: &[ByproductBits]) -> Result<PureState> {
    if bits.len() != output.num_qubits() {
        return Err(QuantumError::CountMismatch { expected: output.num_qubits(), found: bits.len() }.into());
    }
    let mut state = output.clone();
    for (q, b) in bits.iter().enumerate() {
        if b.x == 1 {
            state = state.apply_gate(&Gate::x(), &[q])?;
        }
        if b.z == 1 {
            state = state.apply_gate(&Gate::z(), &[q])?;
        }
    }
    Ok(state)
}

/// XORs each readout bit with its relabel expression.
pub fn relabel(readout: &[u8], exprs: &[XorExpr], outcomes: &impl Outcomes) -> Result<Vec<u8>> {
    if readout.len() != exprs.len() {
        return Err(QuantumError::CountMismatch { expected: exprs.len(), found: readout.len() }.into());
    }
    readout.iter().zip(exprs).map(|(&r, e)| Ok(r ^ e.eval(outcomes)?)).collect()
}

fn relabel_exprs(p: &MeasurementPattern) -> Vec<XorExpr> {
    (0..p.num_logical()).map(|a| p.relabel_expr(a)).collect()
}

fn bits_to_string(bits: &[u8]) -> String {
    bits.iter().map(|&b| char::from(b'0' + b)).collect()
}

/// Distribution of relabeled readout strings for one branch: the corrected
/// output is measured site by site in the pattern's readout bases.
pub fn readout_distribution(p: &MeasurementPattern, branch: &Branch) -> Result<BTreeMap<String, f64>> {
    let exprs = relabel_exprs(p);
    let mut dist = BTreeMap::new();
    let mut stack = vec![(branch.corrected()?, Vec::<u8>::new(), 1.0)];
    while let Some((state, bits, prob)) = stack.pop() {
        let a = bits.len();
        if a == p.num_logical() {
            let corrected = relabel(&bits, &exprs, &branch.record)?;
            *dist.entry(bits_to_string(&corrected)).or_insert(0.0) += prob;
            continue;
        }
        let basis = p.readout_basis(a).resolve(&branch.record)?;
        for s in [0u8, 1] {
            match state.measure_forced(0, &basis, s) {
                Ok(m) => {
                    let mut next = bits.clone();
                    next.push(s);
                    stack.push((m.state, next, prob * m.probability));
                }
                Err(QuantumError::ImpossibleBranch { .. }) => {}
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(dist)
}

/// Exact probability of each relabeled readout string over all branches.
pub fn corrected_distribution(p: &MeasurementPattern) -> Result<BTreeMap<String, f64>> {
    let mut total = BTreeMap::new();
    for b in run_exhaustive(p)? {
        for (k, v) in readout_distribution(p, &b)? {
            *total.entry(k).or_insert(0.0) += b.record.probability * v;
        }
    }
    Ok(total)
}

/// The generator for shot `shot` under `seed`.
pub fn shot_rng(seed: u64, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot);
    rng
}

/// One complete shot: sampled branch, byproduct correction, sampled
/// readout, relabeling.
pub fn sample_shot(p: &MeasurementPattern, rng: &mut ChaCha8Rng) -> Result<String> {
    let branch = run_sampled(p, rng)?;
    let mut state = branch.corrected()?;
    let mut bits = Vec::with_capacity(p.num_logical());
    for a in 0..p.num_logical() {
        let basis = p.readout_basis(a).resolve(&branch.record)?;
        let m = state.measure_sampled(0, &basis, rng)?;
        bits.push(m.outcome);
        state = m.state;
    }
    Ok(bits_to_string(&relabel(&bits, &relabel_exprs(p), &branch.record)?))
}

/// Histogram of relabeled readout strings over `shots` seeded shots.
pub fn sample_shots(p: &MeasurementPattern, shots: usize, seed: u64) -> Result<BTreeMap<String, usize>> {
    if shots == 0 {
        return Err(PatternError::NoShots);
    }
    p.validate()?;
    let results: Vec<String> =
        (0..shots as u64).into_par_iter().map(|k| sample_shot(p, &mut shot_rng(seed, k))).collect::<Result<_>>()?;
    let mut counts = BTreeMap::new();
    for r in results {
        *counts.entry(r).or_insert(0) += 1;
    }
    Ok(counts)
}
