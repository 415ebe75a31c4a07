//! One- and two-qubit unitaries.
//!
//! Matrices are stored row-major. For two-qubit gates the first target is the
//! more significant bit of the 4x4 basis index, matching the register
//! convention of [`PureState`](crate::PureState).

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64 as C64;

use crate::error::{QuantumError, Result};

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

const UNITARY_TOL: f64 = 1e-9;

#[derive(Clone, PartialEq)]
pub struct Gate {
    arity: usize,
    matrix: Vec<C64>,
}

impl fmt::Debug for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dim = self.dim();
        writeln!(f, "Gate({}q) [", self.arity)?;
        for r in 0..dim {
            write!(f, "  ")?;
            for c in 0..dim {
                let z = self.matrix[r * dim + c];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Gate {
    /// Builds a gate from a row-major matrix, checking `U†U = 1`.
    pub fn from_matrix(arity: usize, matrix: Vec<C64>) -> Result<Self> {
        if !(1..=2).contains(&arity) {
            return Err(QuantumError::ArityMismatch { arity, targets: arity });
        }
        let dim = 1 << arity;
        if matrix.len() != dim * dim {
            return Err(QuantumError::CountMismatch { expected: dim * dim, found: matrix.len() });
        }
        let gate = Self { arity, matrix };
        let dev = gate.unitarity_deviation();
        if dev > UNITARY_TOL {
            return Err(QuantumError::NotUnitary(dev));
        }
        Ok(gate)
    }

    /// Single-qubit operator without the unitarity check (Kraus operators).
    pub(crate) fn kraus_unchecked(m: Vec<C64>) -> Self {
        debug_assert_eq!(m.len(), 4);
        Self { arity: 1, matrix: m }
    }

    fn single(m: [C64; 4]) -> Self {
        Self { arity: 1, matrix: m.to_vec() }
    }

    pub fn identity() -> Self {
        Self::single([ONE, ZERO, ZERO, ONE])
    }

    pub fn h() -> Self {
        let s = C64::new(FRAC_1_SQRT_2, 0.0);
        Self::single([s, s, s, -s])
    }

    pub fn x() -> Self {
        Self::single([ZERO, ONE, ONE, ZERO])
    }

    pub fn y() -> Self {
        Self::single([ZERO, -I, I, ZERO])
    }

    pub fn z() -> Self {
        Self::single([ONE, ZERO, ZERO, -ONE])
    }

    /// `Rz(a) = exp(-i a σz / 2)`.
    pub fn rz(angle: f64) -> Self {
        Self::single([C64::from_polar(1.0, -angle / 2.0), ZERO, ZERO, C64::from_polar(1.0, angle / 2.0)])
    }

    /// `Rx(b) = exp(-i b σx / 2)`.
    pub fn rx(angle: f64) -> Self {
        let c = C64::new((angle / 2.0).cos(), 0.0);
        let s = C64::new(0.0, -(angle / 2.0).sin());
        Self::single([c, s, s, c])
    }

    pub fn cz() -> Self {
        let mut m = vec![ZERO; 16];
        m[0] = ONE;
        m[5] = ONE;
        m[10] = ONE;
        m[15] = -ONE;
        Self { arity: 2, matrix: m }
    }

    /// Controlled-NOT with the first target as control.
    pub fn cnot() -> Self {
        let mut m = vec![ZERO; 16];
        m[0] = ONE;
        m[5] = ONE;
        m[11] = ONE;
        m[14] = ONE;
        Self { arity: 2, matrix: m }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        1 << self.arity
    }

    pub fn matrix(&self) -> &[C64] {
        &self.matrix
    }

    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.matrix[row * self.dim() + col]
    }

    /// Matrix product `self · other` (apply `other` first).
    pub fn compose(&self, other: &Gate) -> Result<Gate> {
        if self.arity != other.arity {
            return Err(QuantumError::ArityMismatch { arity: self.arity, targets: other.arity });
        }
        let dim = self.dim();
        let mut m = vec![ZERO; dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                m[r * dim + c] = (0..dim).map(|k| self.entry(r, k) * other.entry(k, c)).sum();
            }
        }
        Ok(Gate { arity: self.arity, matrix: m })
    }

    /// Kronecker product `self ⊗ other` of two single-qubit gates.
    pub fn tensor(&self, other: &Gate) -> Result<Gate> {
        if self.arity != 1 || other.arity != 1 {
            return Err(QuantumError::ArityMismatch { arity: 2, targets: self.arity + other.arity });
        }
        let mut m = vec![ZERO; 16];
        for (r, c) in (0..4).flat_map(|r| (0..4).map(move |c| (r, c))) {
            m[r * 4 + c] = self.entry(r >> 1, c >> 1) * other.entry(r & 1, c & 1);
        }
        Ok(Gate { arity: 2, matrix: m })
    }

    pub fn adjoint(&self) -> Gate {
        let dim = self.dim();
        let mut m = vec![ZERO; dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                m[c * dim + r] = self.entry(r, c).conj();
            }
        }
        Gate { arity: self.arity, matrix: m }
    }

    /// Largest entry of `|U†U − 1|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let dim = self.dim();
        let mut worst: f64 = 0.0;
        for r in 0..dim {
            for c in 0..dim {
                let dot: C64 = (0..dim).map(|k| self.entry(k, r).conj() * self.entry(k, c)).sum();
                let target = if r == c { ONE } else { ZERO };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }

    /// Applies a single-qubit gate to a 2-vector.
    pub fn apply_to(&self, v: [C64; 2]) -> [C64; 2] {
        debug_assert_eq!(self.arity, 1);
        [
            self.matrix[0] * v[0] + self.matrix[1] * v[1],
            self.matrix[2] * v[0] + self.matrix[3] * v[1],
        ]
    }
}
