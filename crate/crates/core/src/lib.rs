//! Dense simulator for one-way (measurement-based) quantum computation on
//! small cluster states.
//!
//! Qubit 0 is the most significant bit of every basis index. Measurement
//! removes the measured qubit from the register.

pub mod algorithms;
pub mod density;
pub mod error;
pub mod gate;
pub mod graph;
pub mod lab;
pub mod noise;
pub mod pattern;
pub mod pauli;
pub mod runtime;
pub mod state;
pub mod verify;

pub use density::{fidelity, DensityMatrix, StateRef};
pub use error::{QuantumError, Result};
pub use gate::Gate;
pub use graph::{build_cluster, prune_z_measurement, stabilizer_group, witness_fidelity, Graph, StabilizerGroup};
pub use noise::{apply_channel, NoiseChannel, NoiseKind, UniformNoise};
pub use pauli::{Pauli, PauliString};
pub use state::{Basis, Measured, OutcomePolicy, PureState, MAX_QUBITS};
pub use pattern::{parse_pattern, AngleExpression, Byproduct, InputState, MeasurementPattern, PatternError, Step, StepBasis, XorExpr};
pub use runtime::{correct_byproducts, relabel, run_pattern, sample_shots, Branch, ByproductBits, OutcomeRecord, RunMode};
pub use lab::{make_c4, table1_witness, to_lab_basis, verify_ordering, QubitOrdering, WitnessReport};
pub use algorithms::{
    cnot_pattern, cphase_pattern, deutsch_pattern, grover_pattern, rotation_pattern, ControlOp, LogicalInput,
    OracleFunction, RotationOrdering, RotationSpec, Tag,
};
pub use verify::{run_checks, Check};
