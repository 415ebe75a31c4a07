//! Signed Pauli strings and their expectation values.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;

use crate::density::DensityMatrix;
use crate::error::{QuantumError, Result};
use crate::gate::{I, ONE};
use crate::state::PureState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    fn has_x(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    fn has_z(self) -> bool {
        matches!(self, Pauli::Z | Pauli::Y)
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    /// `self · other = i^k · result`, returned as `(k mod 4, result)`.
    fn mul(self, other: Pauli) -> (u8, Pauli) {
        use Pauli::*;
        match (self, other) {
            (I, p) | (p, I) => (0, p),
            (a, b) if a == b => (0, I),
            (X, Y) => (1, Z),
            (Y, Z) => (1, X),
            (Z, X) => (1, Y),
            (Y, X) => (3, Z),
            (Z, Y) => (3, X),
            (X, Z) => (3, Y),
            _ => unreachable!(),
        }
    }
}

/// `±P₀⊗P₁⊗…`; letter `k` acts on qubit `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    negative: bool,
    letters: Vec<Pauli>,
}

impl PauliString {
    pub fn new(negative: bool, letters: Vec<Pauli>) -> Self {
        Self { negative, letters }
    }

    pub fn identity(n: usize) -> Self {
        Self { negative: false, letters: vec![Pauli::I; n] }
    }

    /// A single letter on qubit `q` of an `n`-qubit register.
    pub fn single(n: usize, q: usize, p: Pauli) -> Self {
        let mut letters = vec![Pauli::I; n];
        letters[q] = p;
        Self { negative: false, letters }
    }

    pub fn num_qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn sign(&self) -> f64 {
        if self.negative {
            -1.0
        } else {
            1.0
        }
    }

    pub fn negated(&self) -> Self {
        Self { negative: !self.negative, letters: self.letters.clone() }
    }

    pub fn with_sign(&self, negative: bool) -> Self {
        Self { negative, letters: self.letters.clone() }
    }

    /// Unsigned letters as a word, e.g. `"XZZI"`.
    pub fn word(&self) -> String {
        self.letters.iter().map(|p| p.as_char()).collect()
    }

    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|&&p| p != Pauli::I).count()
    }

    pub fn is_identity(&self) -> bool {
        !self.negative && self.weight() == 0
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = self
            .letters
            .iter()
            .zip(&other.letters)
            .filter(|(a, b)| **a != Pauli::I && **b != Pauli::I && a != b)
            .count();
        anti % 2 == 0
    }

    /// Product `self · other`. Only defined for commuting strings, whose
    /// product is again a signed hermitian Pauli string.
    pub fn mul(&self, other: &PauliString) -> Result<PauliString> {
        if self.letters.len() != other.letters.len() {
            return Err(QuantumError::DimensionMismatch { expected: self.letters.len(), found: other.letters.len() });
        }
        let mut phase = 2 * (self.negative as u8) + 2 * (other.negative as u8);
        let letters = self
            .letters
            .iter()
            .zip(&other.letters)
            .map(|(&a, &b)| {
                let (k, p) = a.mul(b);
                phase += k;
                p
            })
            .collect();
        match phase % 4 {
            0 => Ok(PauliString { negative: false, letters }),
            2 => Ok(PauliString { negative: true, letters }),
            _ => Err(QuantumError::Anticommuting),
        }
    }

    /// Bit masks `(x, z)` over basis indices plus the number of `Y` letters.
    fn masks(&self) -> (usize, usize, usize) {
        let n = self.letters.len();
        let mut x = 0;
        let mut z = 0;
        let mut ys = 0;
        for (q, p) in self.letters.iter().enumerate() {
            let bit = 1usize << (n - 1 - q);
            if p.has_x() {
                x |= bit;
            }
            if p.has_z() {
                z |= bit;
            }
            if *p == Pauli::Y {
                ys += 1;
            }
        }
        (x, z, ys)
    }

    /// `P|k⟩ = coeff(k)·|k ⊕ x⟩` for the unsigned letters.
    #[inline]
    fn coeff(k: usize, z: usize, ys: usize) -> C64 {
        // Y = i·X·Z, so each Y contributes a factor i; Z bits add (−1)^{k·z}.
        let mut c = match ys % 4 {
            0 => ONE,
            1 => I,
            2 => -ONE,
            _ => -I,
        };
        if (k & z).count_ones() % 2 == 1 {
            c = -c;
        }
        c
    }

    /// Applies the (signed) operator to a pure state.
    pub fn apply(&self, state: &PureState) -> Result<PureState> {
        self.check_dim(state.num_qubits())?;
        let (x, z, ys) = self.masks();
        let amps = state.amplitudes();
        let mut out = vec![C64::new(0.0, 0.0); amps.len()];
        for (k, a) in amps.iter().enumerate() {
            out[k ^ x] = Self::coeff(k, z, ys) * a * self.sign();
        }
        PureState::from_amplitudes(out)
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if self.letters.len() != n {
            Err(QuantumError::DimensionMismatch { expected: n, found: self.letters.len() })
        } else {
            Ok(())
        }
    }

    /// `sign·⟨ψ|P|ψ⟩`.
    pub fn expectation(&self, state: &PureState) -> Result<f64> {
        self.check_dim(state.num_qubits())?;
        let (x, z, ys) = self.masks();
        let amps = state.amplitudes();
        let v: C64 = amps
            .iter()
            .enumerate()
            .map(|(k, a)| amps[k ^ x].conj() * Self::coeff(k, z, ys) * a)
            .sum();
        Ok(self.sign() * v.re)
    }

    /// `sign·Tr[ρP]`.
    pub fn expectation_dm(&self, rho: &DensityMatrix) -> Result<f64> {
        self.check_dim(rho.num_qubits())?;
        let (x, z, ys) = self.masks();
        // Tr[ρP] = Σ_k ⟨k|ρP|k⟩ = Σ_k coeff(k)·ρ[k, k⊕x]
        let v: C64 = (0..rho.dim()).map(|k| Self::coeff(k, z, ys) * rho.entry(k, k ^ x)).sum();
        Ok(self.sign() * v.re)
    }

    /// All `4^n` unsigned strings in lexicographic `I < X < Y < Z` order.
    pub fn enumerate(n: usize) -> impl Iterator<Item = PauliString> {
        (0..4usize.pow(n as u32)).map(move |mut code| {
            let mut letters = vec![Pauli::I; n];
            for q in (0..n).rev() {
                letters[q] = Pauli::ALL[code % 4];
                code /= 4;
            }
            PauliString { negative: false, letters }
        })
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.negative { '-' } else { '+' }, self.word())
    }
}

impl FromStr for PauliString {
    type Err = QuantumError;

    /// Parses `"XZ"`, `"+XZ"` or `"-XZ"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (negative, body) = match s.as_bytes().first() {
            Some(b'-') => (true, &s[1..]),
            Some(b'+') => (false, &s[1..]),
            _ => (false, s),
        };
        let letters = body
            .chars()
            .map(|c| Pauli::from_char(c).ok_or_else(|| QuantumError::InvalidPauli(s.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { negative, letters })
    }
}
