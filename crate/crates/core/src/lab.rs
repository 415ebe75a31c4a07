//! Two-photon, four-qubit laboratory encoding.
//!
//! The physical register is always `(π_A, π_B, k_A, k_B)`: polarization of
//! photons A and B, then linear momentum of A and B, with `H, ℓ ↔ 0` and
//! `V, r ↔ 1`. Cluster positions are 0-based.

use std::fmt;
use std::io::Write;

use num_complex::Complex64 as C64;

use crate::density::{DensityMatrix, StateRef};
use crate::error::{QuantumError, Result};
use crate::gate::Gate;
use crate::graph::{build_cluster, witness_fidelity, Graph};
use crate::noise::UniformNoise;
use crate::pauli::PauliString;
use crate::state::{Basis, PureState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Photon {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dof {
    Polarization,
    Momentum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PhysicalQubitLabel {
    pub photon: Photon,
    pub dof: Dof,
}

impl PhysicalQubitLabel {
    pub const PI_A: Self = Self { photon: Photon::A, dof: Dof::Polarization };
    pub const PI_B: Self = Self { photon: Photon::B, dof: Dof::Polarization };
    pub const K_A: Self = Self { photon: Photon::A, dof: Dof::Momentum };
    pub const K_B: Self = Self { photon: Photon::B, dof: Dof::Momentum };

    /// Position in the `(π_A, π_B, k_A, k_B)` register.
    pub fn register_index(self) -> usize {
        match (self.dof, self.photon) {
            (Dof::Polarization, Photon::A) => 0,
            (Dof::Polarization, Photon::B) => 1,
            (Dof::Momentum, Photon::A) => 2,
            (Dof::Momentum, Photon::B) => 3,
        }
    }

    /// Names of the `|0⟩` and `|1⟩` states.
    pub fn basis_labels(self) -> [&'static str; 2] {
        match self.dof {
            Dof::Polarization => ["H", "V"],
            Dof::Momentum => ["ℓ", "r"],
        }
    }
}

impl fmt::Display for PhysicalQubitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dof = match self.dof {
            Dof::Polarization => "π",
            Dof::Momentum => "k",
        };
        let photon = match self.photon {
            Photon::A => "A",
            Photon::B => "B",
        };
        write!(f, "{dof}_{photon}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceCluster {
    Linear,
    Box,
}

impl ReferenceCluster {
    pub fn graph(self) -> Graph {
        match self {
            ReferenceCluster::Linear => Graph::path(4),
            ReferenceCluster::Box => Graph::cycle(4),
        }
    }
}

/// Assignment of physical qubits to cluster positions, with the local
/// unitaries `U_j` such that `(⊗_j U_j)|reference⟩ = C4` (reordered).
#[derive(Debug, Clone, PartialEq)]
pub struct QubitOrdering {
    pub id: char,
    pub positions: [PhysicalQubitLabel; 4],
    pub local_unitaries: [Gate; 4],
    pub reference: ReferenceCluster,
}

fn mul(a: Gate, b: Gate) -> Gate {
    a.compose(&b).expect("single-qubit gates")
}

impl QubitOrdering {
    pub const IDS: [char; 5] = ['a', 'b', 'c', 'd', 'e'];

    pub fn get(id: char) -> Option<Self> {
        use PhysicalQubitLabel as L;
        let (h, x, z, i) = (Gate::h, Gate::x, Gate::z, Gate::identity);
        let (positions, local_unitaries, reference) = match id {
            'a' => ([L::K_B, L::K_A, L::PI_A, L::PI_B], [mul(x(), h()), z(), i(), h()], ReferenceCluster::Linear),
            'b' => ([L::PI_B, L::PI_A, L::K_A, L::K_B], [h(), z(), x(), mul(z(), h())], ReferenceCluster::Linear),
            'c' => ([L::K_A, L::K_B, L::PI_B, L::PI_A], [mul(z(), h()), x(), i(), h()], ReferenceCluster::Linear),
            'd' => ([L::PI_A, L::PI_B, L::K_B, L::K_A], [h(), i(), x(), mul(z(), h())], ReferenceCluster::Linear),
            'e' => ([L::K_B, L::PI_A, L::K_A, L::PI_B], [mul(x(), h()), h(), mul(z(), h()), h()], ReferenceCluster::Box),
            _ => return None,
        };
        Some(Self { id, positions, local_unitaries, reference })
    }

    pub fn all() -> Vec<Self> {
        Self::IDS.iter().filter_map(|&id| Self::get(id)).collect()
    }

    /// Register indices of the physical qubits at each cluster position.
    pub fn register_order(&self) -> [usize; 4] {
        self.positions.map(PhysicalQubitLabel::register_index)
    }

    /// Replaces `U_j`; used for negative controls.
    pub fn with_unitary(mut self, position: usize, u: Gate) -> Self {
        self.local_unitaries[position] = u;
        self
    }

    /// `(⊗_j U_j)|reference⟩`, in cluster-position order.
    pub fn transformed_reference(&self) -> Result<PureState> {
        let mut state = build_cluster(&self.reference.graph())?;
        for (j, u) in self.local_unitaries.iter().enumerate() {
            state = state.apply_gate(u, &[j])?;
        }
        Ok(state)
    }
}

/// `Ξ^{+−} = Φ⁺_π ⊗ ψ⁻_k` on `(π_A, π_B, k_A, k_B)`.
pub fn hyperentangled_state() -> PureState {
    let mut amps = vec![C64::new(0.0, 0.0); 16];
    for p in [0usize, 1] {
        let pol = p << 3 | p << 2;
        amps[pol | 0b01] = C64::new(0.5, 0.0);
        amps[pol | 0b10] = C64::new(-0.5, 0.0);
    }
    PureState::from_amplitudes(amps).expect("normalized literal")
}

/// CZ between `k_A` and `π_A` applied to [`hyperentangled_state`].
pub fn make_c4() -> PureState {
    hyperentangled_state().apply_cz(2, 0).expect("fixed register")
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderingReport {
    pub id: char,
    pub fidelity: f64,
    pub passed: bool,
}

impl fmt::Display for OrderingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "pass" } else { "FAIL" };
        write!(f, "ordering {}: {verdict} (fidelity {:.12})", self.id, self.fidelity)
    }
}

/// Compares `(⊗ U_j)|reference⟩` with C4 reordered into cluster positions.
pub fn verify_ordering(o: &QubitOrdering) -> Result<OrderingReport> {
    let target = make_c4().permute(&o.register_order())?;
    let fidelity = o.transformed_reference()?.fidelity(&target)?;
    Ok(OrderingReport { id: o.id, fidelity, passed: (fidelity - 1.0).abs() < 1e-9 })
}

/// A cluster-basis measurement as performed in the laboratory.
#[derive(Debug, Clone, PartialEq)]
pub struct LabMeasurement {
    pub qubit: PhysicalQubitLabel,
    /// `U_j|b_0⟩` and `U_j|b_1⟩` in the physical `{|0⟩, |1⟩}` coordinates.
    pub basis: Basis,
}

impl LabMeasurement {
    /// `|⟨v_r|v_c⟩|` over the pair; 0 for `r ≠ c` and 1 on the diagonal.
    pub fn gram(&self) -> [[f64; 2]; 2] {
        let v = [self.basis.vector(0), self.basis.vector(1)];
        let dot = |a: [C64; 2], b: [C64; 2]| (a[0].conj() * b[0] + a[1].conj() * b[1]).norm();
        [[dot(v[0], v[0]), dot(v[0], v[1])], [dot(v[1], v[0]), dot(v[1], v[1])]]
    }

    /// The pair written in the physical qubit's own labels.
    pub fn describe(&self) -> String {
        let [l0, l1] = self.qubit.basis_labels();
        let vec = |s: u8| {
            let v = self.basis.vector(s);
            format!("({:+.4}{:+.4}i)|{l0}⟩ + ({:+.4}{:+.4}i)|{l1}⟩", v[0].re, v[0].im, v[1].re, v[1].im)
        };
        format!("{}: {{ {} ; {} }}", self.qubit, vec(0), vec(1))
    }
}

/// Laboratory basis `U_j|b_±⟩` for a cluster-basis measurement at `position`.
pub fn to_lab_basis(basis: &Basis, position: usize, o: &QubitOrdering) -> Result<LabMeasurement> {
    if position >= 4 {
        return Err(QuantumError::IndexOutOfRange { index: position, n: 4 });
    }
    Ok(LabMeasurement { qubit: o.positions[position], basis: basis.rotated(&o.local_unitaries[position]) })
}

/// Stabilizers of C4 over `(π_A, π_B, k_A, k_B)`, in table order.
pub const TABLE1_WORDS: [&str; 16] = [
    "-IIZZ", "-ZIXX", "+XXZI", "+ZZII", "-ZIYY", "-XXIZ", "-ZZZZ", "+YXXY", "-IZYY", "+XYXY", "-YXYX", "-IZXX",
    "-YYZI", "+YYIZ", "-XYYX", "+IIII",
];

/// Measured expectation values reported for the experimental state, in
/// table order.
pub const MEASURED_EXPECTATIONS: [f64; 16] = [
    0.9941, 0.8486, 0.9372, 0.9105, 0.8386, 0.9354, 0.8963, 0.7455, 0.8215, 0.8139, 0.7944, 0.8498, 0.9350, 0.9346,
    0.8186, 1.0,
];

pub fn table1_stabilizers() -> Vec<PauliString> {
    TABLE1_WORDS.iter().map(|w| w.parse().expect("valid literal")).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessReport {
    pub stabilizers: Vec<PauliString>,
    pub expectations: Vec<f64>,
    pub fidelity: f64,
}

impl WitnessReport {
    /// CSV rows `k,pauli_word,sign,expectation` and a `fidelity` footer row.
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["k", "pauli_word", "sign", "expectation"])?;
        for (k, (s, e)) in self.stabilizers.iter().zip(&self.expectations).enumerate() {
            let sign = if s.is_negative() { "-1" } else { "+1" };
            w.write_record([(k + 1).to_string(), s.word(), sign.to_string(), format!("{e:.6}")])?;
        }
        w.write_record(["fidelity".to_string(), String::new(), String::new(), format!("{:.6}", self.fidelity)])?;
        w.flush()
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("in-memory write");
        String::from_utf8(buf).expect("ascii output")
    }
}

/// Evaluates the sixteen table stabilizers on a four-qubit register.
pub fn table1_witness<'a>(state: impl Into<StateRef<'a>>) -> Result<WitnessReport> {
    let state = state.into();
    let stabilizers = table1_stabilizers();
    let expectations = stabilizers
        .iter()
        .map(|s| match state {
            StateRef::Pure(p) => s.expectation(p),
            StateRef::Mixed(m) => s.expectation_dm(m),
        })
        .collect::<Result<Vec<f64>>>()?;
    // Round-off can push ±1 a hair outside [−1, 1].
    let clamped: Vec<f64> = expectations.iter().map(|e| e.clamp(-1.0, 1.0)).collect();
    let fidelity = witness_fidelity(&clamped)?;
    Ok(WitnessReport { stabilizers, expectations, fidelity })
}

/// C4 after `noise` on every qubit.
pub fn noisy_c4(noise: UniformNoise) -> Result<DensityMatrix> {
    noise.apply(&DensityMatrix::from_pure(&make_c4()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Calibration {
    /// `(p, F(p))` for every scanned point.
    pub scan: Vec<(f64, f64)>,
    /// Smallest scanned `p` with `F(p) ≤ target`, if any.
    pub p: Option<f64>,
    pub target: f64,
}

impl Calibration {
    pub fn is_monotone_decreasing(&self) -> bool {
        self.scan.windows(2).all(|w| w[1].1 < w[0].1)
    }

    pub fn fidelity_at_p(&self) -> Option<f64> {
        let p = self.p?;
        self.scan.iter().find(|(q, _)| *q == p).map(|&(_, f)| f)
    }
}

/// Scans uniform depolarizing `p = k·step` over `[0, 1]` and records the
/// witness fidelity of C4 at each point.
pub fn calibrate_depolarizing(target: f64, step: f64) -> Result<Calibration> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(QuantumError::InvalidProbability(step));
    }
    let points = (1.0 / step).round() as usize;
    let scan = (0..=points)
        .map(|k| {
            let p = (k as f64 * step).min(1.0);
            let rho = noisy_c4(UniformNoise::Depolarizing(p))?;
            Ok((p, table1_witness(&rho)?.fidelity))
        })
        .collect::<Result<Vec<_>>>()?;
    let p = scan.iter().find(|(_, f)| *f <= target).map(|&(p, _)| p);
    Ok(Calibration { scan, p, target })
}
