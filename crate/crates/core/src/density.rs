//! Density matrices for noisy states.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{QuantumError, Result};
use crate::gate::{Gate, ZERO};
use crate::state::{PureState, MAX_QUBITS};

/// `2ⁿ×2ⁿ` density operator, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    data: Vec<C64>,
}

impl DensityMatrix {
    pub fn from_pure(state: &PureState) -> Self {
        let amps = state.amplitudes();
        let dim = amps.len();
        let mut data = vec![ZERO; dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                data[r * dim + c] = amps[r] * amps[c].conj();
            }
        }
        Self { n: state.num_qubits(), data }
    }

    /// `1/2ⁿ`.
    pub fn maximally_mixed(n: usize) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(QuantumError::Capacity(n, MAX_QUBITS));
        }
        let dim = 1usize << n;
        let mut data = vec![ZERO; dim * dim];
        for k in 0..dim {
            data[k * dim + k] = C64::new(1.0 / dim as f64, 0.0);
        }
        Ok(Self { n, data })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim() + col]
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|k| self.entry(k, k)).sum()
    }

    /// Largest `|ρ − ρ†|` entry.
    pub fn hermiticity_deviation(&self) -> f64 {
        let dim = self.dim();
        let mut worst: f64 = 0.0;
        for r in 0..dim {
            for c in r..dim {
                worst = worst.max((self.entry(r, c) - self.entry(c, r).conj()).norm());
            }
        }
        worst
    }

    /// Eigenvalues of the hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let dim = self.dim();
        let m = DMatrix::from_fn(dim, dim, |r, c| (self.entry(r, c) + self.entry(c, r).conj()) * 0.5);
        let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    pub fn purity(&self) -> f64 {
        // Tr ρ² = Σ |ρ_rc|² for hermitian ρ
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `ρ → Σ_k K ρ K†` with single-qubit Kraus operators acting on `qubit`.
    pub fn apply_kraus(&self, kraus: &[Gate], qubit: usize) -> Result<Self> {
        if qubit >= self.n {
            return Err(QuantumError::IndexOutOfRange { index: qubit, n: self.n });
        }
        let dim = self.dim();
        let mask = 1usize << (self.n - 1 - qubit);
        let mut out = vec![ZERO; dim * dim];
        for k in kraus {
            // K ρ K†: left-multiply rows, then right-multiply by K† on columns.
            let mut left = self.data.clone();
            for c in 0..dim {
                for r in (0..dim).filter(|r| r & mask == 0) {
                    let v = k.apply_to([self.data[r * dim + c], self.data[(r | mask) * dim + c]]);
                    left[r * dim + c] = v[0];
                    left[(r | mask) * dim + c] = v[1];
                }
            }
            let kc = k.adjoint();
            for r in 0..dim {
                for c in (0..dim).filter(|c| c & mask == 0) {
                    let a = left[r * dim + c];
                    let b = left[r * dim + (c | mask)];
                    // row vector times K†
                    out[r * dim + c] += a * kc.entry(0, 0) + b * kc.entry(1, 0);
                    out[r * dim + (c | mask)] += a * kc.entry(0, 1) + b * kc.entry(1, 1);
                }
            }
        }
        Ok(Self { n: self.n, data: out })
    }

    /// `⟨target|ρ|target⟩`.
    pub fn fidelity(&self, target: &PureState) -> Result<f64> {
        if target.num_qubits() != self.n {
            return Err(QuantumError::DimensionMismatch { expected: self.n, found: target.num_qubits() });
        }
        let t = target.amplitudes();
        let dim = self.dim();
        let mut acc = ZERO;
        for r in 0..dim {
            let row: C64 = (0..dim).map(|c| self.data[r * dim + c] * t[c]).sum();
            acc += t[r].conj() * row;
        }
        Ok(acc.re)
    }
}

/// Either representation, for operations defined on both.
#[derive(Debug, Clone, Copy)]
pub enum StateRef<'a> {
    Pure(&'a PureState),
    Mixed(&'a DensityMatrix),
}

impl<'a> From<&'a PureState> for StateRef<'a> {
    fn from(s: &'a PureState) -> Self {
        StateRef::Pure(s)
    }
}

impl<'a> From<&'a DensityMatrix> for StateRef<'a> {
    fn from(s: &'a DensityMatrix) -> Self {
        StateRef::Mixed(s)
    }
}

/// `⟨target|ρ|target⟩` or `|⟨target|ψ⟩|²`.
pub fn fidelity<'a>(actual: impl Into<StateRef<'a>>, target: &PureState) -> Result<f64> {
    match actual.into() {
        StateRef::Pure(p) => p.fidelity(target),
        StateRef::Mixed(m) => m.fidelity(target),
    }
}
