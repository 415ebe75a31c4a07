//! Single-qubit noise channels in Kraus form.
//!
//! - depolarizing(p): `ρ → (1−p)ρ + p·1/2`, so every single-qubit Pauli
//!   expectation on the target scales by `1−p`.
//! - dephasing(p): `ρ → (1−p)ρ + p·ZρZ`, so `⟨X⟩` and `⟨Y⟩` scale by `1−2p`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;

use crate::density::DensityMatrix;
use crate::error::{QuantumError, Result};
use crate::gate::Gate;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseKind {
    Depolarizing,
    Dephasing,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseChannel {
    pub kind: NoiseKind,
    pub p: f64,
    pub target: usize,
}

fn scaled(g: Gate, s: f64) -> Gate {
    let m = g.matrix().iter().map(|z| z * s).collect::<Vec<C64>>();
    // Kraus operators are not unitary; bypass the unitarity check.
    Gate::kraus_unchecked(m)
}

impl NoiseChannel {
    pub fn new(kind: NoiseKind, p: f64, target: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) || p.is_nan() {
            return Err(QuantumError::InvalidProbability(p));
        }
        Ok(Self { kind, p, target })
    }

    pub fn depolarizing(p: f64, target: usize) -> Result<Self> {
        Self::new(NoiseKind::Depolarizing, p, target)
    }

    pub fn dephasing(p: f64, target: usize) -> Result<Self> {
        Self::new(NoiseKind::Dephasing, p, target)
    }

    pub fn kraus_operators(&self) -> Vec<Gate> {
        let p = self.p;
        match self.kind {
            NoiseKind::Depolarizing => vec![
                scaled(Gate::identity(), (1.0 - 0.75 * p).sqrt()),
                scaled(Gate::x(), (p / 4.0).sqrt()),
                scaled(Gate::y(), (p / 4.0).sqrt()),
                scaled(Gate::z(), (p / 4.0).sqrt()),
            ],
            NoiseKind::Dephasing => vec![scaled(Gate::identity(), (1.0 - p).sqrt()), scaled(Gate::z(), p.sqrt())],
        }
    }

    /// Largest entry of `|Σ K†K − 1|`.
    pub fn completeness_deviation(&self) -> f64 {
        let ks = self.kraus_operators();
        let mut worst: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                let s: C64 = ks
                    .iter()
                    .map(|k| (0..2).map(|j| k.entry(j, r).conj() * k.entry(j, c)).sum::<C64>())
                    .sum();
                let target = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((s - target).norm());
            }
        }
        worst
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        rho.apply_kraus(&self.kraus_operators(), self.target)
    }
}

/// `ρ → Σ K ρ K†` for `ch`.
pub fn apply_channel(rho: &DensityMatrix, ch: &NoiseChannel) -> Result<DensityMatrix> {
    ch.apply(rho)
}

/// A channel of the same kind and strength on every qubit, or none.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UniformNoise {
    None,
    Depolarizing(f64),
    Dephasing(f64),
}

impl UniformNoise {
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let (kind, p) = match *self {
            UniformNoise::None => return Ok(rho.clone()),
            UniformNoise::Depolarizing(p) => (NoiseKind::Depolarizing, p),
            UniformNoise::Dephasing(p) => (NoiseKind::Dephasing, p),
        };
        (0..rho.num_qubits()).try_fold(rho.clone(), |acc, q| NoiseChannel::new(kind, p, q)?.apply(&acc))
    }
}

impl fmt::Display for UniformNoise {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UniformNoise::None => write!(f, "none"),
            UniformNoise::Depolarizing(p) => write!(f, "depolarizing:{p}"),
            UniformNoise::Dephasing(p) => write!(f, "dephasing:{p}"),
        }
    }
}

impl FromStr for UniformNoise {
    type Err = String;

    /// `none`, `depolarizing:P` or `dephasing:P` with `P ∈ [0, 1]`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "none" {
            return Ok(UniformNoise::None);
        }
        let (kind, p) = s.split_once(':').ok_or_else(|| format!("expected none|depolarizing:P|dephasing:P, got {s:?}"))?;
        let p: f64 = p.parse().map_err(|_| format!("invalid probability {p:?}"))?;
        if !(0.0..=1.0).contains(&p) {
            return Err(format!("probability {p} outside [0, 1]"));
        }
        match kind {
            "depolarizing" => Ok(UniformNoise::Depolarizing(p)),
            "dephasing" => Ok(UniformNoise::Dephasing(p)),
            _ => Err(format!("unknown noise kind {kind:?}")),
        }
    }
}
