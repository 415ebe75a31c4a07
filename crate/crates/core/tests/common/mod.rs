//! Small dense linear-algebra oracle, independent of the library kernels.
#![allow(dead_code)]

use std::f64::consts::FRAC_1_SQRT_2;

use mbqc_core::PureState;
use num_complex::Complex64 as C64;

pub type Ket = Vec<C64>;
pub type M2 = [[C64; 2]; 2];

pub const TOL: f64 = 1e-9;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn r(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn i2() -> M2 {
    [[r(1.0), r(0.0)], [r(0.0), r(1.0)]]
}

pub fn h() -> M2 {
    let s = FRAC_1_SQRT_2;
    [[r(s), r(s)], [r(s), r(-s)]]
}

pub fn x() -> M2 {
    [[r(0.0), r(1.0)], [r(1.0), r(0.0)]]
}

pub fn y() -> M2 {
    [[r(0.0), c(0.0, -1.0)], [c(0.0, 1.0), r(0.0)]]
}

pub fn z() -> M2 {
    [[r(1.0), r(0.0)], [r(0.0), r(-1.0)]]
}

pub fn rz(a: f64) -> M2 {
    [[C64::from_polar(1.0, -a / 2.0), r(0.0)], [r(0.0), C64::from_polar(1.0, a / 2.0)]]
}

pub fn rx(b: f64) -> M2 {
    let (co, si) = ((b / 2.0).cos(), (b / 2.0).sin());
    [[r(co), c(0.0, -si)], [c(0.0, -si), r(co)]]
}

pub fn mm(a: M2, b: M2) -> M2 {
    let mut out = [[r(0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn plus() -> Ket {
    vec![r(FRAC_1_SQRT_2), r(FRAC_1_SQRT_2)]
}

pub fn minus() -> Ket {
    vec![r(FRAC_1_SQRT_2), r(-FRAC_1_SQRT_2)]
}

pub fn ket0() -> Ket {
    vec![r(1.0), r(0.0)]
}

pub fn ket1() -> Ket {
    vec![r(0.0), r(1.0)]
}

pub fn kron(a: &[C64], b: &[C64]) -> Ket {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

pub fn add(a: &[C64], b: &[C64]) -> Ket {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[C64], s: f64) -> Ket {
    a.iter().map(|x| x * s).collect()
}

/// `m` on qubit `q` of an `n`-qubit ket, qubit 0 most significant.
pub fn on(m: M2, q: usize, psi: &[C64]) -> Ket {
    let n = psi.len().trailing_zeros() as usize;
    let bit = 1 << (n - 1 - q);
    let mut out = psi.to_vec();
    for k in 0..psi.len() {
        if k & bit == 0 {
            let (a, b) = (psi[k], psi[k | bit]);
            out[k] = m[0][0] * a + m[0][1] * b;
            out[k | bit] = m[1][0] * a + m[1][1] * b;
        }
    }
    out
}

pub fn apply1(m: M2, psi: &[C64]) -> Ket {
    on(m, 0, psi)
}

/// CNOT with control qubit `c` and target `t`.
pub fn cnot(c: usize, t: usize, psi: &[C64]) -> Ket {
    let n = psi.len().trailing_zeros() as usize;
    let (cb, tb) = (1 << (n - 1 - c), 1 << (n - 1 - t));
    (0..psi.len()).map(|k| if k & cb != 0 { psi[k ^ tb] } else { psi[k] }).collect()
}

pub fn cz(a: usize, b: usize, psi: &[C64]) -> Ket {
    let n = psi.len().trailing_zeros() as usize;
    let (ab, bb) = (1 << (n - 1 - a), 1 << (n - 1 - b));
    psi.iter().enumerate().map(|(k, v)| if k & ab != 0 && k & bb != 0 { -v } else { *v }).collect()
}

pub fn norm_sqr(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

/// `|⟨a|b⟩|² / (‖a‖²‖b‖²)`.
pub fn fid(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len(), "dimension mismatch");
    let ip: C64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    ip.norm_sqr() / (norm_sqr(a) * norm_sqr(b))
}

pub fn ket(s: &PureState) -> Ket {
    s.amplitudes().to_vec()
}

/// Graph state from its amplitude formula: `2^{-n/2} (−1)^{Σ_E x_a x_b}`.
pub fn graph_state(n: usize, edges: &[(usize, usize)]) -> Ket {
    let norm = (1u64 << n) as f64;
    (0..1usize << n)
        .map(|k| {
            let bit = |q: usize| (k >> (n - 1 - q)) & 1;
            let parity = edges.iter().map(|&(a, b)| bit(a) & bit(b)).sum::<usize>() & 1;
            r(if parity == 1 { -1.0 } else { 1.0 } / norm.sqrt())
        })
        .collect()
}

/// The four-qubit cluster on `(π_A, π_B, k_A, k_B)` written out by amplitude.
pub fn c4_literal() -> Ket {
    let mut v = vec![r(0.0); 16];
    v[0b0001] = r(0.5);
    v[0b0010] = r(-0.5);
    v[0b1101] = r(0.5);
    v[0b1110] = r(0.5);
    v
}

/// `sign·⟨ψ|P|ψ⟩` by applying the Pauli letters one qubit at a time.
pub fn pauli_expectation(word: &str, negative: bool, psi: &[C64]) -> f64 {
    let mut phi = psi.to_vec();
    for (q, ch) in word.chars().enumerate() {
        let m = match ch {
            'I' => continue,
            'X' => x(),
            'Y' => y(),
            'Z' => z(),
            other => panic!("bad letter {other}"),
        };
        phi = on(m, q, &phi);
    }
    let v: C64 = psi.iter().zip(&phi).map(|(a, b)| a.conj() * b).sum();
    if negative {
        -v.re
    } else {
        v.re
    }
}
