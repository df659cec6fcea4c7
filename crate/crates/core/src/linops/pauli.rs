use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::dims::Dims;
use super::operator::{c, cr, CMat, Operator};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(ch: char) -> Result<Pauli> {
        match ch {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            other => Err(Error::Pauli(format!("unknown Pauli letter {other:?}"))),
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn matrix(self) -> CMat {
        let z = cr(0.0);
        let o = cr(1.0);
        match self {
            Pauli::I => CMat::from_row_slice(2, 2, &[o, z, z, o]),
            Pauli::X => CMat::from_row_slice(2, 2, &[z, o, o, z]),
            Pauli::Y => CMat::from_row_slice(2, 2, &[z, c(0.0, -1.0), c(0.0, 1.0), z]),
            Pauli::Z => CMat::from_row_slice(2, 2, &[o, z, z, -o]),
        }
    }

    pub fn operator(self) -> Operator {
        Operator::new(self.matrix(), Dims::qubits(1)).expect("2x2")
    }

    /// a*b = i^k * c, returned as (k, c).
    pub fn mul(self, other: Pauli) -> (u8, Pauli) {
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

/// Pauli string with an exact phase i^phase.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    phase: u8,
    ops: Vec<Pauli>,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        PauliString {
            phase: 0,
            ops: vec![Pauli::I; n],
        }
    }

    pub fn new(ops: Vec<Pauli>) -> Self {
        PauliString { phase: 0, ops }
    }

    /// Parses labels like "XZI", "-XX" or "iZ".
    pub fn parse(label: &str) -> Result<Self> {
        let mut phase = 0u8;
        let mut rest = label.trim();
        if let Some(r) = rest.strip_prefix('-') {
            phase = 2;
            rest = r;
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        }
        if let Some(r) = rest.strip_prefix('i') {
            phase = (phase + 1) % 4;
            rest = r;
        }
        let ops = rest
            .chars()
            .map(Pauli::from_char)
            .collect::<Result<Vec<_>>>()?;
        if ops.is_empty() {
            return Err(Error::Pauli("empty label".into()));
        }
        Ok(PauliString { phase, ops })
    }

    /// Single-site operator `p` at `site` on `n` qubits.
    pub fn single(n: usize, site: usize, p: Pauli) -> Self {
        let mut s = PauliString::identity(n);
        s.ops[site] = p;
        s
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn ops(&self) -> &[Pauli] {
        &self.ops
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn label(&self) -> String {
        self.ops.iter().map(|p| p.to_char()).collect()
    }

    /// Real sign when the phase is ±1.
    pub fn sign(&self) -> Option<f64> {
        match self.phase {
            0 => Some(1.0),
            2 => Some(-1.0),
            _ => None,
        }
    }

    pub fn mul(&self, other: &PauliString) -> Result<PauliString> {
        if self.len() != other.len() {
            return Err(Error::Pauli("length mismatch".into()));
        }
        let mut phase = (self.phase + other.phase) % 4;
        let ops = self
            .ops
            .iter()
            .zip(&other.ops)
            .map(|(&a, &b)| {
                let (k, p) = a.mul(b);
                phase = (phase + k) % 4;
                p
            })
            .collect();
        Ok(PauliString { phase, ops })
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = self
            .ops
            .iter()
            .zip(&other.ops)
            .filter(|(&a, &b)| a != Pauli::I && b != Pauli::I && a != b)
            .count();
        anti % 2 == 0
    }

    pub fn to_operator(&self) -> Operator {
        let n = self.ops.len();
        let mut m = CMat::from_element(1, 1, cr(1.0));
        for p in &self.ops {
            m = m.kronecker(&p.matrix());
        }
        let ph = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)][self.phase as usize];
        Operator::new(m * ph, Dims::qubits(n)).expect("qubit dims")
    }

    pub fn to_sum(&self) -> Result<PauliSum> {
        let s = self
            .sign()
            .ok_or_else(|| Error::Pauli(format!("non-Hermitian phase on {}", self.label())))?;
        let mut out = PauliSum::new();
        out.add_term(&self.label(), s)?;
        Ok(out)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["+", "+i", "-", "-i"][self.phase as usize];
        write!(f, "{prefix}{}", self.label())
    }
}

/// Real-weighted sum of Pauli strings, kept canonical (no zero coefficients).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PauliSum {
    terms: BTreeMap<String, f64>,
}

impl PauliSum {
    pub fn new() -> Self {
        PauliSum::default()
    }

    pub fn from_terms<'a>(terms: impl IntoIterator<Item = (&'a str, f64)>) -> Result<Self> {
        let mut s = PauliSum::new();
        for (l, v) in terms {
            s.add_term(l, v)?;
        }
        Ok(s)
    }

    pub fn add_term(&mut self, label: &str, coeff: f64) -> Result<()> {
        if label.is_empty() || label.chars().any(|ch| !"IXYZ".contains(ch)) {
            return Err(Error::Pauli(format!("bad label {label:?}")));
        }
        if let Some(n) = self.num_qubits() {
            if n != label.len() {
                return Err(Error::Pauli(format!(
                    "label {label} has length {}, expected {n}",
                    label.len()
                )));
            }
        }
        let e = self.terms.entry(label.to_string()).or_insert(0.0);
        *e += coeff;
        if *e == 0.0 {
            self.terms.remove(label);
        }
        Ok(())
    }

    pub fn add(&self, other: &PauliSum) -> Result<PauliSum> {
        let mut out = self.clone();
        for (l, &v) in &other.terms {
            out.add_term(l, v)?;
        }
        Ok(out)
    }

    pub fn scale(&self, s: f64) -> PauliSum {
        let mut out = PauliSum::new();
        for (l, &v) in &self.terms {
            if v * s != 0.0 {
                out.terms.insert(l.clone(), v * s);
            }
        }
        out
    }

    pub fn terms(&self) -> &BTreeMap<String, f64> {
        &self.terms
    }

    pub fn coeff(&self, label: &str) -> f64 {
        self.terms.get(label).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_qubits(&self) -> Option<usize> {
        self.terms.keys().next().map(|l| l.len())
    }

    /// Dense matrix; `n` is required only for the empty sum.
    pub fn to_operator(&self, n: Option<usize>) -> Result<Operator> {
        let n = self
            .num_qubits()
            .or(n)
            .ok_or_else(|| Error::Pauli("empty sum needs an explicit qubit count".into()))?;
        let mut acc = Operator::zeros(Dims::qubits(n));
        for (l, &v) in &self.terms {
            let p = PauliString::parse(l)?;
            if p.len() != n {
                return Err(Error::Pauli(format!("label {l} is not {n} qubits")));
            }
            acc = &acc + &p.to_operator().scale(v);
        }
        Ok(acc)
    }

    /// Coefficients Tr[op σ_L]/2^n; entries below `cutoff` in magnitude are dropped.
    pub fn from_operator(op: &Operator, cutoff: f64) -> Result<PauliSum> {
        if !op.dims().is_qubits() {
            return Err(Error::Pauli("expansion needs qubit subsystems".into()));
        }
        op.ensure_hermitian()?;
        let n = op.dims().len();
        let dim = op.dim();
        let mut out = PauliSum::new();
        for code in 0..4usize.pow(n as u32) {
            let mut ops = Vec::with_capacity(n);
            let mut x = code;
            for _ in 0..n {
                ops.push([Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][x % 4]);
                x /= 4;
            }
            ops.reverse();
            let p = PauliString::new(ops);
            let v = pauli_trace(op, &p) / dim as f64;
            if v.abs() > cutoff {
                out.terms.insert(p.label(), v);
            }
        }
        Ok(out)
    }
}

/// Re Tr[op σ] computed from the permutation structure of the Pauli string.
pub fn pauli_trace(op: &Operator, p: &PauliString) -> f64 {
    let n = p.len();
    let dim = 1usize << n;
    let mut flip = 0usize;
    for (k, &q) in p.ops().iter().enumerate() {
        if matches!(q, Pauli::X | Pauli::Y) {
            flip |= 1 << (n - 1 - k);
        }
    }
    let mut acc = c(0.0, 0.0);
    // σ|j> = f(j)|j ^ flip>, so Tr[op σ] = Σ_j op[j, j^flip] f(j).
    for j in 0..dim {
        let mut f = c(1.0, 0.0);
        for (k, &q) in p.ops().iter().enumerate() {
            let bit = (j >> (n - 1 - k)) & 1;
            f *= match (q, bit) {
                (Pauli::Z, 1) => c(-1.0, 0.0),
                (Pauli::Y, 0) => c(0.0, 1.0),
                (Pauli::Y, 1) => c(0.0, -1.0),
                _ => c(1.0, 0.0),
            };
        }
        acc += op.entry(j, j ^ flip) * f;
    }
    let ph = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)][p.phase() as usize];
    (acc * ph).re
}
