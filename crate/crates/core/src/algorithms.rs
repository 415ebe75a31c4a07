//! Pattern builders and dense-matrix oracles for the five experiments:
//! single-qubit rotation, CNOT, CZ, two-qubit Grover search and Deutsch.
//!
//! Builders work in the cluster frame. [`lab_frame`] maps a cluster-frame
//! output into the laboratory frame of a given qubit ordering.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;

use crate::error::{QuantumError, Result};
use crate::gate::Gate;
use crate::graph::Graph;
use crate::lab::QubitOrdering;
use crate::pattern::{AngleExpression, Byproduct, MeasurementPattern, Step, StepBasis, XorExpr};
use crate::state::PureState;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogicalInput {
    Plus,
    Minus,
}

impl LogicalInput {
    pub fn state(self) -> PureState {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let sign = if self == LogicalInput::Plus { 1.0 } else { -1.0 };
        PureState::qubit(C64::new(s, 0.0), C64::new(sign * s, 0.0)).expect("normalized")
    }
}

/// Which ordering the rotation runs in; the output sits on `π_B` for `a`
/// and on `k_B` for `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RotationOrdering {
    A,
    B,
}

impl RotationOrdering {
    pub fn ordering(self) -> QubitOrdering {
        QubitOrdering::get(if self == RotationOrdering::A { 'a' } else { 'b' }).expect("known ordering")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationSpec {
    pub alpha: f64,
    pub beta: f64,
    pub input: LogicalInput,
    pub ordering: RotationOrdering,
}

/// Rotation `R_x(β) R_z(α)` on a 4-path.
///
/// Site 0 is measured in Z and selects the logical input through the byproduct
/// `z` term; site 1 in `B(α)`; site 2 in `B(±β)` with the sign fed forward
/// from sites 0 and 1. The output is site 3.
pub fn rotation_pattern(spec: &RotationSpec) -> MeasurementPattern {
    let base = if spec.input == LogicalInput::Plus { spec.beta } else { -spec.beta };
    let mut z = XorExpr::of(&[1, 0]);
    if spec.input == LogicalInput::Minus {
        z = z.flipped();
    }
    let name = match spec.ordering {
        RotationOrdering::A => "rotation_a",
        RotationOrdering::B => "rotation_b",
    };
    MeasurementPattern {
        name: name.into(),
        graph: Graph::path(4),
        inputs: BTreeMap::new(),
        steps: vec![
            Step::new(0, StepBasis::Z),
            Step::new(1, StepBasis::equatorial(spec.alpha)),
            Step::new(2, StepBasis::Angle(AngleExpression::fixed(base).with_sign_deps(XorExpr::of(&[0, 1])))),
        ],
        outputs: vec![3],
        readout: BTreeMap::new(),
        byproducts: [(0, Byproduct { x: XorExpr::of(&[2]), z })].into(),
        relabel: BTreeMap::new(),
    }
}

/// `R_x(β) R_z(α)|χ_in⟩`.
pub fn rotation_oracle(spec: &RotationSpec) -> PureState {
    spec.input
        .state()
        .apply_gate(&Gate::rz(spec.alpha), &[0])
        .and_then(|s| s.apply_gate(&Gate::rx(spec.beta), &[0]))
        .expect("single qubit")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ControlOp {
    Identity,
    Hadamard,
}

impl ControlOp {
    pub fn gate(self) -> Gate {
        match self {
            ControlOp::Identity => Gate::identity(),
            ControlOp::Hadamard => Gate::h(),
        }
    }
}

/// CNOT with control `𝒪|+⟩` and equatorial target `R_z(α)|+⟩` on a 4-path.
///
/// Site 0 is measured in `B(0)` for `𝒪 = H` or in Z for `𝒪 = 1`, site 3 in
/// `B(α)`. Outputs are site 1 (control) and site 2 (target); the target keeps
/// a Hadamard, which the `B(0)` readout of site 2 undoes.
pub fn cnot_pattern(op: ControlOp, alpha: f64) -> MeasurementPattern {
    let (name, first, byproducts) = match op {
        ControlOp::Hadamard => (
            "cnot_h",
            StepBasis::equatorial(0.0),
            [
                (0, Byproduct { x: XorExpr::of(&[0]), z: XorExpr::of(&[3]) }),
                (1, Byproduct { x: XorExpr::of(&[3]), z: XorExpr::of(&[0]) }),
            ],
        ),
        ControlOp::Identity => (
            "cnot_id",
            StepBasis::Z,
            [
                (0, Byproduct { x: XorExpr::default(), z: XorExpr::of(&[0, 3]) }),
                (1, Byproduct { x: XorExpr::of(&[3]), z: XorExpr::default() }),
            ],
        ),
    };
    MeasurementPattern {
        name: name.into(),
        graph: Graph::path(4),
        inputs: BTreeMap::new(),
        steps: vec![Step::new(0, first), Step::new(3, StepBasis::equatorial(alpha))],
        outputs: vec![1, 2],
        readout: [(2, StepBasis::equatorial(0.0))].into(),
        byproducts: byproducts.into(),
        relabel: BTreeMap::new(),
    }
}

fn two_qubit(control: &PureState, target: &PureState) -> PureState {
    control.tensor(target).expect("two qubits")
}

/// `(1 ⊗ H) CNOT (𝒪|+⟩ ⊗ R_z(α)|+⟩)`, the corrected cluster-frame output.
pub fn cnot_oracle(op: ControlOp, alpha: f64) -> PureState {
    let plus = PureState::plus_state(1).expect("one qubit");
    let c = plus.apply_gate(&op.gate(), &[0]).expect("one qubit");
    let t = plus.apply_gate(&Gate::rz(alpha), &[0]).expect("one qubit");
    two_qubit(&c, &t)
        .apply_gate(&Gate::cnot(), &[0, 1])
        .and_then(|s| s.apply_gate(&Gate::h(), &[1]))
        .expect("two qubits")
}

/// Laboratory-frame output of one CNOT branch:
/// `Σ^{s_c} σx^{(c)} CNOT(𝒪 σz^{s_o}|+⟩ ⊗ R_z(α)|+⟩)` with `Σ = σz ⊗ σz`,
/// where `s_o` is the outcome of site 0 and `s_c` of site 3.
pub fn cnot_lab_oracle(op: ControlOp, alpha: f64, s_o: u8, s_c: u8) -> PureState {
    let plus = PureState::plus_state(1).expect("one qubit");
    let mut c = plus;
    if s_o == 1 {
        c = c.apply_gate(&Gate::z(), &[0]).expect("one qubit");
    }
    c = c.apply_gate(&op.gate(), &[0]).expect("one qubit");
    let t = PureState::plus_state(1).and_then(|p| p.apply_gate(&Gate::rz(alpha), &[0])).expect("one qubit");
    let mut s = two_qubit(&c, &t).apply_gate(&Gate::cnot(), &[0, 1]).expect("two qubits");
    s = s.apply_gate(&Gate::x(), &[0]).expect("two qubits");
    if s_c == 1 {
        s = s.apply_gate(&Gate::z(), &[0]).and_then(|s| s.apply_gate(&Gate::z(), &[1])).expect("two qubits");
    }
    s
}

/// CZ between `|+⟩` and `R_x(β) R_z(α)|+⟩` on a 4-path.
///
/// Site 0 is measured in `B(α)`, site 1 in `B(±β)` with the sign fed forward
/// from site 0. Outputs are site 3 (control) and site 2 (target).
pub fn cphase_pattern(alpha: f64, beta: f64) -> MeasurementPattern {
    MeasurementPattern {
        name: "cphase".into(),
        graph: Graph::path(4),
        inputs: BTreeMap::new(),
        steps: vec![
            Step::new(0, StepBasis::equatorial(alpha)),
            Step::new(1, StepBasis::Angle(AngleExpression::fixed(beta).with_sign_deps(XorExpr::of(&[0])))),
        ],
        outputs: vec![3, 2],
        readout: BTreeMap::new(),
        byproducts: [
            (0, Byproduct { x: XorExpr::default(), z: XorExpr::of(&[1]) }),
            (1, Byproduct { x: XorExpr::of(&[1]), z: XorExpr::of(&[0]) }),
        ]
        .into(),
        relabel: BTreeMap::new(),
    }
}

/// `R_x(β) R_z(α)|+⟩`.
pub fn cphase_target(alpha: f64, beta: f64) -> PureState {
    PureState::plus_state(1)
        .and_then(|p| p.apply_gate(&Gate::rz(alpha), &[0]))
        .and_then(|p| p.apply_gate(&Gate::rx(beta), &[0]))
        .expect("one qubit")
}

/// `CZ (|+⟩ ⊗ R_x(β) R_z(α)|+⟩)`.
pub fn cphase_oracle(alpha: f64, beta: f64) -> PureState {
    let plus = PureState::plus_state(1).expect("one qubit");
    two_qubit(&plus, &cphase_target(alpha, beta)).apply_cz(0, 1).expect("two qubits")
}

/// `(|−⟩ ⊗ σx|Φ⟩ + |+⟩ ⊗ σx σz|Φ⟩)/√2` with `|Φ⟩ = R_x(β) R_z(α)|+⟩`.
pub fn cphase_lab_oracle(alpha: f64, beta: f64) -> PureState {
    let phi = cphase_target(alpha, beta);
    let a = two_qubit(&LogicalInput::Minus.state(), &phi.apply_gate(&Gate::x(), &[0]).expect("one qubit"));
    let xz = phi.apply_gate(&Gate::z(), &[0]).and_then(|p| p.apply_gate(&Gate::x(), &[0])).expect("one qubit");
    let b = two_qubit(&LogicalInput::Plus.state(), &xz);
    let amps = a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| x + y).collect();
    PureState::from_amplitudes(amps).expect("nonzero")
}

/// A two-bit search tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tag(pub u8, pub u8);

impl Tag {
    pub const ALL: [Tag; 4] = [Tag(0, 0), Tag(0, 1), Tag(1, 0), Tag(1, 1)];

    /// Measurement angles `(α, β)` on sites 0 and 3 that tag this item.
    pub fn angles(self) -> (f64, f64) {
        let flip = |b: u8| if b == 0 { PI } else { 0.0 };
        (flip(self.1), flip(self.0))
    }

    pub fn index(self) -> usize {
        (self.0 as usize) << 1 | self.1 as usize
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.0, self.1)
    }
}

impl FromStr for Tag {
    type Err = QuantumError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "00" => Ok(Tag(0, 0)),
            "01" => Ok(Tag(0, 1)),
            "10" => Ok(Tag(1, 0)),
            "11" => Ok(Tag(1, 1)),
            _ => Err(QuantumError::UnknownName(s.to_string())),
        }
    }
}

/// One Grover iteration on the box cluster.
///
/// Sites 0 and 3 are measured in `B(α)`, `B(β)` to tag the item; sites 1
/// and 2 are read out in `B(π)` and relabeled with the outcomes of sites 3
/// and 0 respectively.
pub fn grover_pattern(tag: Tag) -> MeasurementPattern {
    let (alpha, beta) = tag.angles();
    MeasurementPattern {
        name: format!("grover_{tag}"),
        graph: Graph::cycle(4),
        inputs: BTreeMap::new(),
        steps: vec![Step::new(0, StepBasis::equatorial(alpha)), Step::new(3, StepBasis::equatorial(beta))],
        outputs: vec![1, 2],
        readout: [(1, StepBasis::equatorial(PI)), (2, StepBasis::equatorial(PI))].into(),
        byproducts: BTreeMap::new(),
        relabel: [(0, XorExpr::of(&[3])), (1, XorExpr::of(&[0]))].into(),
    }
}

/// `G|++⟩` with `G = (2|++⟩⟨++| − 1)·(1 − 2|tag⟩⟨tag|)`.
pub fn grover_oracle(tag: Tag) -> PureState {
    let plus = PureState::plus_state(2).expect("two qubits");
    let mut amps: Vec<C64> = plus.amplitudes().to_vec();
    amps[tag.index()] = -amps[tag.index()];
    let mean: C64 = amps.iter().sum::<C64>() / 4.0;
    let out = amps.iter().map(|a| 2.0 * mean - a).collect();
    PureState::from_amplitudes(out).expect("nonzero")
}

/// The four one-bit functions; `f2` and `f4` differ from `f1` and `f3` only
/// by a global phase on the oracle and share their patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleFunction {
    F1,
    F2,
    F3,
    F4,
}

impl OracleFunction {
    pub const ALL: [OracleFunction; 4] = [Self::F1, Self::F2, Self::F3, Self::F4];

    pub fn eval(self, x: u8) -> u8 {
        match self {
            Self::F1 => 0,
            Self::F2 => 1,
            Self::F3 => x,
            Self::F4 => 1 - x,
        }
    }

    pub fn is_constant(self) -> bool {
        self.eval(0) == self.eval(1)
    }

    /// The function whose pattern is used.
    pub fn canonical(self) -> Self {
        if self.is_constant() {
            Self::F1
        } else {
            Self::F3
        }
    }
}

impl FromStr for OracleFunction {
    type Err = QuantumError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "f1" => Ok(Self::F1),
            "f2" => Ok(Self::F2),
            "f3" => Ok(Self::F3),
            "f4" => Ok(Self::F4),
            _ => Err(QuantumError::UnknownName(s.to_string())),
        }
    }
}

/// Deutsch's algorithm on a 4-path.
///
/// Site 3 is measured in `B(π)`; site 1 in Z for a constant function or in
/// `B(π/2)` for a balanced one. Site 0 (query) is read out in `B(0)` or
/// `B(π/2)`, site 2 (ancilla) in Z.
pub fn deutsch_pattern(f: OracleFunction) -> MeasurementPattern {
    let constant = f.is_constant();
    let (name, middle, query_readout, query_relabel) = if constant {
        ("deutsch_f1", StepBasis::Z, StepBasis::equatorial(0.0), XorExpr::of(&[1]))
    } else {
        ("deutsch_f3", StepBasis::equatorial(FRAC_PI_2), StepBasis::equatorial(FRAC_PI_2), XorExpr::of(&[1, 3]))
    };
    MeasurementPattern {
        name: name.into(),
        graph: Graph::path(4),
        inputs: BTreeMap::new(),
        steps: vec![Step::new(3, StepBasis::equatorial(PI)), Step::new(1, middle)],
        outputs: vec![0, 2],
        readout: [(0, query_readout), (2, StepBasis::Z)].into(),
        byproducts: BTreeMap::new(),
        relabel: [(0, query_relabel), (1, XorExpr::of(&[3]))].into(),
    }
}

/// Readout of the circuit `(H ⊗ H) U_f (H ⊗ H)|0⟩|1⟩`, with
/// `U_f|x⟩|y⟩ = |x⟩|y ⊕ f(x)⟩`, as a bit-string `"qa"`.
pub fn deutsch_oracle(f: OracleFunction) -> String {
    let h2 = |s: PureState| s.apply_gate(&Gate::h(), &[0]).and_then(|s| s.apply_gate(&Gate::h(), &[1]));
    let start = PureState::basis_state(2, 0b01).and_then(h2).expect("two qubits");
    let mut amps = vec![C64::new(0.0, 0.0); 4];
    for x in 0..2u8 {
        for y in 0..2u8 {
            let from = (x as usize) << 1 | y as usize;
            let to = (x as usize) << 1 | (y ^ f.eval(x)) as usize;
            amps[to] += start.amplitude(from);
        }
    }
    let out = PureState::from_amplitudes(amps).and_then(h2).expect("two qubits");
    let k = (0..4).max_by(|&a, &b| out.amplitude(a).norm().total_cmp(&out.amplitude(b).norm())).expect("four");
    format!("{:02b}", k)
}

/// Applies `U_j` of `ordering` to each logical output sitting at cluster
/// position `positions[k]`.
pub fn lab_frame(state: &PureState, ordering: &QubitOrdering, positions: &[usize]) -> Result<PureState> {
    positions.iter().enumerate().try_fold(state.clone(), |s, (k, &j)| s.apply_gate(&ordering.local_unitaries[j], &[k]))
}

/// Expected result of a catalog pattern after correction and relabeling.
#[derive(Debug, Clone)]
pub enum Expected {
    /// Corrected cluster-frame output state.
    State(PureState),
    /// Relabeled readout string with probability 1.
    Bits(String),
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub pattern: MeasurementPattern,
    pub expected: Expected,
    pub description: &'static str,
}

/// Rotation settings shipped in the catalog.
pub const CATALOG_ROTATION: (f64, f64) = (-FRAC_PI_2, FRAC_PI_2);
pub const CATALOG_CNOT_H_ALPHA: f64 = FRAC_PI_2;
pub const CATALOG_CNOT_ID_ALPHA: f64 = std::f64::consts::FRAC_PI_4;
pub const CATALOG_CPHASE: (f64, f64) = (FRAC_PI_2, FRAC_PI_2);

/// One shipped pattern per experiment, with its oracle.
pub fn catalog() -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    for ordering in [RotationOrdering::A, RotationOrdering::B] {
        let spec = RotationSpec {
            alpha: CATALOG_ROTATION.0,
            beta: CATALOG_ROTATION.1,
            input: LogicalInput::Plus,
            ordering,
        };
        out.push(CatalogEntry {
            pattern: rotation_pattern(&spec),
            expected: Expected::State(rotation_oracle(&spec)),
            description: "single-qubit rotation Rx(pi/2) Rz(-pi/2) on |+>",
        });
    }
    out.push(CatalogEntry {
        pattern: cnot_pattern(ControlOp::Hadamard, CATALOG_CNOT_H_ALPHA),
        expected: Expected::State(cnot_oracle(ControlOp::Hadamard, CATALOG_CNOT_H_ALPHA)),
        description: "CNOT with control H|+> and target Rz(pi/2)|+>",
    });
    out.push(CatalogEntry {
        pattern: cnot_pattern(ControlOp::Identity, CATALOG_CNOT_ID_ALPHA),
        expected: Expected::State(cnot_oracle(ControlOp::Identity, CATALOG_CNOT_ID_ALPHA)),
        description: "CNOT with control |+> and target Rz(pi/4)|+>",
    });
    out.push(CatalogEntry {
        pattern: cphase_pattern(CATALOG_CPHASE.0, CATALOG_CPHASE.1),
        expected: Expected::State(cphase_oracle(CATALOG_CPHASE.0, CATALOG_CPHASE.1)),
        description: "CZ with target Rx(pi/2) Rz(pi/2)|+>",
    });
    for tag in Tag::ALL {
        out.push(CatalogEntry {
            pattern: grover_pattern(tag),
            expected: Expected::Bits(tag.to_string()),
            description: "two-qubit Grover search, one iteration",
        });
    }
    for f in [OracleFunction::F1, OracleFunction::F3] {
        out.push(CatalogEntry {
            pattern: deutsch_pattern(f),
            expected: Expected::Bits(deutsch_oracle(f)),
            description: if f.is_constant() { "Deutsch algorithm, constant f" } else { "Deutsch algorithm, balanced f" },
        });
    }
    out
}

pub fn catalog_entry(name: &str) -> Option<CatalogEntry> {
    catalog().into_iter().find(|e| e.pattern.name == name)
}
