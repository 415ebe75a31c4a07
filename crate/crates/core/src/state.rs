//! Dense pure states and projective single-qubit measurement.
//!
//! Register convention: qubit 0 is the most significant bit of the basis
//! index, so `|q0 q1 … q(n-1)⟩` has index `Σ q_k 2^(n-1-k)`.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64 as C64;
use rand::Rng;

use crate::error::{QuantumError, Result};
use crate::gate::{Gate, ONE, ZERO};

/// Largest register the dense kernel accepts.
pub const MAX_QUBITS: usize = 10;

/// Branches below this Born probability are treated as impossible.
pub const MIN_BRANCH_PROBABILITY: f64 = 1e-12;

/// Single-qubit measurement basis.
#[derive(Debug, Clone, PartialEq)]
pub enum Basis {
    /// `{|0⟩, |1⟩}`; outcome `s` selects `|s⟩`.
    Computational,
    /// `B(φ) = {|φ+⟩, |φ−⟩}` with `|φ±⟩ = (e^{iφ/2}|0⟩ ± e^{-iφ/2}|1⟩)/√2`;
    /// outcome 0 selects `|φ+⟩`.
    Equatorial(f64),
    /// Arbitrary orthonormal pair; outcome `s` selects `vectors[s]`.
    Custom([[C64; 2]; 2]),
}

impl Basis {
    /// The basis vector selected by outcome `s`.
    pub fn vector(&self, s: u8) -> [C64; 2] {
        match self {
            Basis::Computational => {
                if s == 0 {
                    [ONE, ZERO]
                } else {
                    [ZERO, ONE]
                }
            }
            Basis::Equatorial(phi) => {
                let sign = if s == 0 { 1.0 } else { -1.0 };
                [
                    C64::from_polar(FRAC_1_SQRT_2, phi / 2.0),
                    C64::from_polar(sign * FRAC_1_SQRT_2, -phi / 2.0),
                ]
            }
            Basis::Custom(v) => v[s as usize],
        }
    }

    /// The pair obtained by applying `u` to both basis vectors.
    pub fn rotated(&self, u: &Gate) -> Basis {
        Basis::Custom([u.apply_to(self.vector(0)), u.apply_to(self.vector(1))])
    }
}

/// Normalized amplitude vector over `n ≤ 10` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n: usize,
    amps: Vec<C64>,
}

/// How a measurement picks its outcome.
pub enum OutcomePolicy<'r> {
    Forced(u8),
    Sample(&'r mut dyn rand::RngCore),
}

/// Result of a single-qubit projective measurement.
#[derive(Debug, Clone)]
pub struct Measured {
    pub outcome: u8,
    pub probability: f64,
    /// Post-measurement state with the measured qubit removed.
    pub state: PureState,
}

fn check_capacity(n: usize) -> Result<()> {
    if n > MAX_QUBITS {
        Err(QuantumError::Capacity(n, MAX_QUBITS))
    } else {
        Ok(())
    }
}

/// Inserts `bit` at qubit position `q` of an `(n-1)`-qubit index, yielding
/// an `n`-qubit index.
#[inline]
fn insert_bit(idx: usize, q: usize, n: usize, bit: usize) -> usize {
    let shift = n - 1 - q;
    let low = idx & ((1 << shift) - 1);
    let high = idx >> shift;
    (high << (shift + 1)) | (bit << shift) | low
}

impl PureState {
    /// `|+⟩^⊗n`; for `n = 0` the scalar 1.
    pub fn plus_state(n: usize) -> Result<Self> {
        check_capacity(n)?;
        let dim = 1usize << n;
        let a = C64::new((dim as f64).sqrt().recip(), 0.0);
        Ok(Self { n, amps: vec![a; dim] })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis_state(n: usize, index: usize) -> Result<Self> {
        check_capacity(n)?;
        let dim = 1usize << n;
        if index >= dim {
            return Err(QuantumError::IndexOutOfRange { index, n });
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Ok(Self { n, amps })
    }

    /// Normalizes the given amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let dim = amps.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(QuantumError::CountMismatch { expected: dim.next_power_of_two().max(1), found: dim });
        }
        let n = dim.trailing_zeros() as usize;
        check_capacity(n)?;
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(QuantumError::ImpossibleBranch { outcome: 0, probability: 0.0 });
        }
        Ok(Self { n, amps: amps.into_iter().map(|a| a / norm).collect() })
    }

    /// Single-qubit state from two amplitudes.
    pub fn qubit(a0: C64, a1: C64) -> Result<Self> {
        Self::from_amplitudes(vec![a0, a1])
    }

    /// Tensor product `self ⊗ other`; `self` occupies the high qubits.
    pub fn tensor(&self, other: &PureState) -> Result<Self> {
        check_capacity(self.n + other.n)?;
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        Ok(Self { n: self.n + other.n, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n {
            Err(QuantumError::IndexOutOfRange { index: q, n: self.n })
        } else {
            Ok(())
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.n != other.n {
            return Err(QuantumError::DimensionMismatch { expected: self.n, found: other.n });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|⟨self|other⟩|²`; insensitive to global phase.
    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Applies `g` to `targets` (first target = most significant gate bit).
    pub fn apply_gate(&self, g: &Gate, targets: &[usize]) -> Result<Self> {
        if targets.len() != g.arity() {
            return Err(QuantumError::ArityMismatch { arity: g.arity(), targets: targets.len() });
        }
        for (k, &t) in targets.iter().enumerate() {
            self.check_qubit(t)?;
            if targets[..k].contains(&t) {
                return Err(QuantumError::DuplicateTarget(t));
            }
        }
        let mut out = self.clone();
        match *targets {
            [q] => {
                let mask = 1usize << (self.n - 1 - q);
                for i in (0..self.amps.len()).filter(|i| i & mask == 0) {
                    let v = g.apply_to([self.amps[i], self.amps[i | mask]]);
                    out.amps[i] = v[0];
                    out.amps[i | mask] = v[1];
                }
            }
            [q0, q1] => {
                let m0 = 1usize << (self.n - 1 - q0);
                let m1 = 1usize << (self.n - 1 - q1);
                for i in (0..self.amps.len()).filter(|i| i & (m0 | m1) == 0) {
                    let idx = [i, i | m1, i | m0, i | m0 | m1];
                    for (r, &dst) in idx.iter().enumerate() {
                        out.amps[dst] = (0..4).map(|c| g.entry(r, c) * self.amps[idx[c]]).sum();
                    }
                }
            }
            _ => unreachable!("arity checked above"),
        }
        Ok(out)
    }

    /// Controlled-Z between `i` and `j`: negates every amplitude with both
    /// qubits set.
    pub fn apply_cz(&self, i: usize, j: usize) -> Result<Self> {
        self.check_qubit(i)?;
        self.check_qubit(j)?;
        if i == j {
            return Err(QuantumError::InvalidEdge(i, j));
        }
        let mask = (1usize << (self.n - 1 - i)) | (1usize << (self.n - 1 - j));
        let mut out = self.clone();
        for (k, a) in out.amps.iter_mut().enumerate() {
            if k & mask == mask {
                *a = -*a;
            }
        }
        Ok(out)
    }

    /// Unnormalized projection of `qubit` onto `basis.vector(s)`, with the
    /// qubit removed.
    fn project(&self, qubit: usize, basis: &Basis, s: u8) -> Vec<C64> {
        let v = basis.vector(s);
        let (c0, c1) = (v[0].conj(), v[1].conj());
        (0..1usize << (self.n - 1))
            .map(|r| {
                c0 * self.amps[insert_bit(r, qubit, self.n, 0)] + c1 * self.amps[insert_bit(r, qubit, self.n, 1)]
            })
            .collect()
    }

    /// Born probabilities of outcomes 0 and 1.
    pub fn outcome_probabilities(&self, qubit: usize, basis: &Basis) -> Result<[f64; 2]> {
        self.check_qubit(qubit)?;
        let p = |s| self.project(qubit, basis, s).iter().map(|a| a.norm_sqr()).sum::<f64>();
        Ok([p(0), p(1)])
    }

    /// Measures `qubit` with a prescribed outcome.
    pub fn measure_forced(&self, qubit: usize, basis: &Basis, outcome: u8) -> Result<Measured> {
        self.check_qubit(qubit)?;
        let outcome = outcome & 1;
        let proj = self.project(qubit, basis, outcome);
        let probability: f64 = proj.iter().map(|a| a.norm_sqr()).sum();
        if probability <= MIN_BRANCH_PROBABILITY {
            return Err(QuantumError::ImpossibleBranch { outcome, probability });
        }
        let norm = probability.sqrt();
        let state = PureState { n: self.n - 1, amps: proj.into_iter().map(|a| a / norm).collect() };
        Ok(Measured { outcome, probability, state })
    }

    /// Measures `qubit`, drawing the outcome from the Born distribution.
    pub fn measure_sampled<R: Rng + ?Sized>(&self, qubit: usize, basis: &Basis, rng: &mut R) -> Result<Measured> {
        let [p0, _] = self.outcome_probabilities(qubit, basis)?;
        let u: f64 = rng.random();
        let outcome = if u < p0 { 0 } else { 1 };
        self.measure_forced(qubit, basis, outcome)
    }

    pub fn measure(&self, qubit: usize, basis: &Basis, policy: OutcomePolicy<'_>) -> Result<Measured> {
        match policy {
            OutcomePolicy::Forced(s) => self.measure_forced(qubit, basis, s),
            OutcomePolicy::Sample(rng) => self.measure_sampled(qubit, basis, rng),
        }
    }

    /// Reorders qubits: qubit `k` of the result is qubit `order[k]` of `self`.
    pub fn permute(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.n {
            return Err(QuantumError::DimensionMismatch { expected: self.n, found: order.len() });
        }
        for (k, &q) in order.iter().enumerate() {
            self.check_qubit(q)?;
            if order[..k].contains(&q) {
                return Err(QuantumError::DuplicateTarget(q));
            }
        }
        let n = self.n;
        let mut amps = vec![ZERO; self.amps.len()];
        for (new_idx, a) in amps.iter_mut().enumerate() {
            let old_idx = order.iter().enumerate().fold(0usize, |acc, (k, &q)| {
                let bit = (new_idx >> (n - 1 - k)) & 1;
                acc | (bit << (n - 1 - q))
            });
            *a = self.amps[old_idx];
        }
        Ok(Self { n, amps })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn plus() -> PureState {
        PureState::plus_state(1).unwrap()
    }

    fn close(a: C64, b: C64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn plus_state_examples() {
        let s = plus();
        assert!(close(s.amplitude(0), C64::new(FRAC_1_SQRT_2, 0.0)));
        assert!(close(s.amplitude(1), C64::new(FRAC_1_SQRT_2, 0.0)));
        let s2 = PureState::plus_state(2).unwrap();
        assert!(s2.amplitudes().iter().all(|&a| close(a, C64::new(0.5, 0.0))));
        let s0 = PureState::plus_state(0).unwrap();
        assert_eq!(s0.amplitudes(), &[ONE]);
        assert!(matches!(PureState::plus_state(11), Err(QuantumError::Capacity(11, 10))));
    }

    #[test]
    fn qubit_zero_is_most_significant() {
        let s = PureState::basis_state(3, 0).unwrap().apply_gate(&Gate::x(), &[0]).unwrap();
        assert_eq!(s.amplitude(0b100), ONE);
    }

    #[test]
    fn gate_examples() {
        let zero = PureState::basis_state(1, 0).unwrap();
        assert!(zero.apply_gate(&Gate::h(), &[0]).unwrap().fidelity(&plus()).unwrap() > 1.0 - 1e-12);
        let one = zero.apply_gate(&Gate::x(), &[0]).unwrap();
        assert_eq!(one.amplitude(1), ONE);
        // Rz(π)|+⟩ against the hand-multiplied 2x2 product: (e^{-iπ/2}, e^{iπ/2})/√2 ∝ |−⟩
        let out = plus().apply_gate(&Gate::rz(PI), &[0]).unwrap();
        let minus = PureState::qubit(ONE, -ONE).unwrap();
        assert!((out.fidelity(&minus).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn apply_gate_rejects_bad_targets() {
        let s = PureState::plus_state(2).unwrap();
        assert!(matches!(s.apply_gate(&Gate::h(), &[2]), Err(QuantumError::IndexOutOfRange { .. })));
        assert!(matches!(s.apply_gate(&Gate::cz(), &[1, 1]), Err(QuantumError::DuplicateTarget(1))));
        assert!(matches!(s.apply_gate(&Gate::cz(), &[1]), Err(QuantumError::ArityMismatch { .. })));
    }

    #[test]
    fn cz_examples() {
        let s11 = PureState::basis_state(2, 3).unwrap().apply_cz(0, 1).unwrap();
        assert_eq!(s11.amplitude(3), -ONE);
        let pp = PureState::plus_state(2).unwrap().apply_cz(0, 1).unwrap();
        let h = C64::new(0.5, 0.0);
        assert!(close(pp.amplitude(0), h) && close(pp.amplitude(1), h));
        assert!(close(pp.amplitude(2), h) && close(pp.amplitude(3), -h));
        let back = pp.apply_cz(1, 0).unwrap();
        assert_eq!(back, PureState::plus_state(2).unwrap());
        assert!(matches!(pp.apply_cz(1, 1), Err(QuantumError::InvalidEdge(1, 1))));
    }

    #[test]
    fn cz_matches_gate_matrix() {
        let s = PureState::from_amplitudes((0..8).map(|k| C64::new(k as f64, 1.0 - k as f64)).collect()).unwrap();
        let a = s.apply_cz(0, 2).unwrap();
        let b = s.apply_gate(&Gate::cz(), &[2, 0]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn measurement_examples() {
        let m = plus().measure_forced(0, &Basis::Equatorial(0.0), 0).unwrap();
        assert!((m.probability - 1.0).abs() < 1e-12);
        assert!(matches!(
            plus().measure_forced(0, &Basis::Equatorial(0.0), 1),
            Err(QuantumError::ImpossibleBranch { outcome: 1, .. })
        ));
        let zero = PureState::basis_state(1, 0).unwrap();
        let [p0, p1] = zero.outcome_probabilities(0, &Basis::Equatorial(0.0)).unwrap();
        assert!((p0 - 0.5).abs() < 1e-12 && (p1 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn measurement_transfers_rotation() {
        // CZ(|χ⟩⊗|+⟩), measure qubit 0 in B(α): remaining σx^s H Rz(α)|χ⟩.
        let chi = PureState::qubit(C64::new(0.6, 0.1), C64::new(-0.3, 0.7)).unwrap();
        for alpha in [0.0, 0.4, -1.3, PI / 2.0, 2.9] {
            let state = chi.tensor(&plus()).unwrap().apply_cz(0, 1).unwrap();
            for s in 0..2u8 {
                let m = state.measure_forced(0, &Basis::Equatorial(alpha), s).unwrap();
                assert!((m.probability - 0.5).abs() < 1e-9);
                let mut expect = chi.apply_gate(&Gate::rz(alpha), &[0]).unwrap().apply_gate(&Gate::h(), &[0]).unwrap();
                if s == 1 {
                    expect = expect.apply_gate(&Gate::x(), &[0]).unwrap();
                }
                assert!((m.state.fidelity(&expect).unwrap() - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn measurement_removes_correct_qubit() {
        // |0⟩|1⟩|0⟩: measuring qubit 1 leaves |00⟩.
        let s = PureState::basis_state(3, 0b010).unwrap();
        let m = s.measure_forced(1, &Basis::Computational, 1).unwrap();
        assert_eq!(m.state.num_qubits(), 2);
        assert_eq!(m.state.amplitude(0), ONE);
    }

    #[test]
    fn permute_moves_qubits() {
        let s = PureState::basis_state(3, 0b100).unwrap();
        let p = s.permute(&[1, 2, 0]).unwrap();
        assert_eq!(p.amplitude(0b001), ONE);
    }
}
