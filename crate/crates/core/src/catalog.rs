//! Constructors for the witness and state families.
//!
//! Operators are stored as displayed (unnormalized where the family is
//! naturally unnormalized); [`Witness::normalize`] yields the trace-one copy
//! used for window computations.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::{ghz_generators, graph_projector, Graph};
use crate::linops::{
    bell_projector, c, cr, generalized_bell, pauli_op, tensor, weyl, CMat, CVec, Dims, Operator,
    Pauli, PauliString, XShapedOperator,
};
use crate::mirror::MirrorPair;
use crate::sepopt::SeparabilityModel;

const CONSTRAINT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub op: Operator,
    pub family: String,
    pub params: BTreeMap<String, f64>,
    pub normalized: bool,
    pub model: SeparabilityModel,
}

impl Witness {
    pub fn new(op: Operator, family: &str) -> Self {
        let normalized = (op.trace_re() - 1.0).abs() <= 1e-12;
        Witness {
            op,
            family: family.to_string(),
            params: BTreeMap::new(),
            normalized,
            model: SeparabilityModel::FullyProduct,
        }
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn with_model(mut self, model: SeparabilityModel) -> Self {
        self.model = model;
        self
    }

    pub fn dims(&self) -> &Dims {
        self.op.dims()
    }

    /// Trace-one copy.
    pub fn normalize(&self) -> Result<Witness> {
        let tr = self.op.trace_re();
        if tr <= 0.0 {
            return Err(Error::Constraint(format!(
                "cannot normalize {}: trace {tr}",
                self.family
            )));
        }
        let mut w = self.clone();
        w.op = self.op.scale(1.0 / tr);
        w.normalized = true;
        Ok(w)
    }

    /// Same family metadata around a different operator.
    pub fn relabel(&self, op: Operator, family: &str) -> Witness {
        let mut w = Witness::new(op, family);
        w.params = self.params.clone();
        w.model = self.model;
        w
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StateSpec {
    pub op: Operator,
    pub family: String,
    pub params: BTreeMap<String, f64>,
}

impl StateSpec {
    /// Checks positivity (λ_min ≥ -1e-10) and unit trace (1e-12).
    pub fn new(op: Operator, family: &str) -> Result<Self> {
        op.ensure_hermitian()?;
        let lam = op.min_eigenvalue();
        if lam < -1e-10 {
            return Err(Error::Constraint(format!(
                "{family}: negative eigenvalue {lam:.3e}"
            )));
        }
        let tr = op.trace_re();
        if (tr - 1.0).abs() > 1e-12 {
            return Err(Error::Constraint(format!("{family}: trace {tr}")));
        }
        Ok(StateSpec {
            op,
            family: family.to_string(),
            params: BTreeMap::new(),
        })
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn from_vector(v: &CVec, dims: Dims, family: &str) -> Result<Self> {
        StateSpec::new(Operator::projector(v, dims)?, family)
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::Dims(format!("need at least 2 qubits, got {n}")))
    } else {
        Ok(())
    }
}

fn pauli_sum_op(gens: &[PauliString]) -> Operator {
    let n = gens[0].len();
    gens.iter()
        .fold(Operator::zeros(Dims::qubits(n)), |acc, g| &acc + &g.to_operator())
}

pub fn ghz_vector(n: usize) -> CVec {
    let mut v = CVec::zeros(1 << n);
    v[0] = cr(0.5f64.sqrt());
    v[(1 << n) - 1] = cr(0.5f64.sqrt());
    v
}

pub fn ghz_state(n: usize) -> Result<StateSpec> {
    check_n(n)?;
    Ok(StateSpec::from_vector(&ghz_vector(n), Dims::qubits(n), "ghz")?.with_param("n", n as f64))
}

/// (|0101...> - |1010...>)/√2.
pub fn ghz_a_state(n: usize) -> Result<StateSpec> {
    check_n(n)?;
    let alt: usize = (0..n).filter(|k| k % 2 == 1).map(|k| 1 << (n - 1 - k)).sum();
    let mut v = CVec::zeros(1 << n);
    v[alt] = cr(0.5f64.sqrt());
    v[((1 << n) - 1) ^ alt] = cr(-(0.5f64.sqrt()));
    Ok(StateSpec::from_vector(&v, Dims::qubits(n), "ghz-alternating")?.with_param("n", n as f64))
}

/// (½I - |GHZ><GHZ|)/(2^{n-1} - 1), trace one.
pub fn canonical_ghz_witness(n: usize) -> Result<Witness> {
    check_n(n)?;
    let d = Dims::qubits(n);
    let p = Operator::projector(&ghz_vector(n), d.clone())?;
    let op = (&Operator::identity(d).scale(0.5) - &p).scale(1.0 / ((1u64 << (n - 1)) - 1) as f64);
    Ok(Witness::new(op, "ghz-canonical")
        .with_param("n", n as f64)
        .with_model(SeparabilityModel::Biseparable))
}

/// W_c with M = |GHZ><GHZ|; μ I - W = M/(2^{n-1} - 1).
pub fn canonical_ghz_pair(n: usize) -> Result<MirrorPair> {
    let w = canonical_ghz_witness(n)?;
    let m = Operator::projector(&ghz_vector(n), Dims::qubits(n))?;
    let mu = 1.0 / ((1u64 << n) - 2) as f64;
    let c = 1.0 / ((1u64 << (n - 1)) - 1) as f64;
    Ok(MirrorPair::rescaled(w, m, mu, c))
}

/// Trace-one alternative witness (I - Σg/(n-1))/2^n and its mirror.
pub fn alternative_ghz_witness(n: usize) -> Result<MirrorPair> {
    check_n(n)?;
    let gens = ghz_generators(n)?;
    let d = Dims::qubits(n);
    let s = pauli_sum_op(&gens).scale(1.0 / (n - 1) as f64);
    let id = Operator::identity(d);
    let scale = 1.0 / (1u64 << n) as f64;
    let w = Witness::new((&id - &s).scale(scale), "ghz-alternative")
        .with_param("n", n as f64)
        .with_model(SeparabilityModel::Biseparable);
    let m = (&id + &s).scale(scale);
    Ok(MirrorPair::with_m(w, m, 2.0 * scale))
}

fn two_measurement_from_projectors(
    red: Operator,
    blue: Operator,
    family: &str,
    n: usize,
) -> Result<MirrorPair> {
    let id = Operator::identity(Dims::qubits(n));
    let rb = &red + &blue;
    let raw = &id.scale(1.5) - &rb;
    let wn = raw.trace_re();
    let mn = rb.trace_re();
    let w = Witness::new(raw.scale(1.0 / wn), family)
        .with_param("n", n as f64)
        .with_model(SeparabilityModel::Biseparable);
    let m = rb.scale(1.0 / mn);
    Ok(MirrorPair::rescaled(w, m, 1.5 / wn, mn / wn))
}

/// Two-measurement witness of a two-colourable graph, both operators trace one.
pub fn two_measurement_witness(g: &Graph) -> Result<MirrorPair> {
    let col = g
        .two_coloring()
        .ok_or_else(|| Error::Graph("graph is not two-colourable".into()))?;
    let gens = g.generators();
    let pick = |set: &std::collections::BTreeSet<usize>| -> Result<Operator> {
        let sel: Vec<PauliString> = set.iter().map(|&v| gens[v].clone()).collect();
        if sel.is_empty() {
            Ok(Operator::identity(Dims::qubits(g.n())))
        } else {
            graph_projector(&sel)
        }
    };
    two_measurement_from_projectors(pick(&col.red)?, pick(&col.blue)?, "graph-two-measurement", g.n())
}

/// GHZ two-measurement witness: settings X...X and Z...Z.
pub fn two_measurement_ghz(n: usize) -> Result<MirrorPair> {
    check_n(n)?;
    let gens = ghz_generators(n)?;
    let red = graph_projector(&gens[..1])?;
    let blue = graph_projector(&gens[1..])?;
    two_measurement_from_projectors(red, blue, "ghz-two-measurement", n)
}

/// (n-1)I - Σg and (n-1)I + Σg for arbitrary commuting generators.
pub fn stabilizer_witness(gens: &[PauliString], family: &str) -> Result<MirrorPair> {
    let n = gens
        .first()
        .ok_or_else(|| Error::Graph("no generators".into()))?
        .len();
    crate::graphs::stabilizer_elements(gens)?;
    let k = gens.len() as f64;
    let id = Operator::identity(Dims::qubits(n)).scale(k - 1.0);
    let s = pauli_sum_op(gens);
    let w = Witness::new(&id - &s, family)
        .with_param("n", n as f64)
        .with_model(SeparabilityModel::Biseparable);
    Ok(MirrorPair::with_m(w, &id + &s, 2.0 * (k - 1.0)))
}

pub fn graph_witness(g: &Graph) -> Result<MirrorPair> {
    stabilizer_witness(&g.generators(), "graph")
}

/// The graph-witness construction on the GHZ generators X...X, Z_i Z_{i+1}.
pub fn ghz_graph_witness(n: usize) -> Result<MirrorPair> {
    check_n(n)?;
    stabilizer_witness(&ghz_generators(n)?, "ghz-graph")
}

fn bit_sign(b: u8) -> f64 {
    if b % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn check_bits(i: [u8; 3]) -> Result<()> {
    if i.iter().any(|&b| b > 1) {
        Err(Error::Constraint(format!("indices must be bits, got {i:?}")))
    } else {
        Ok(())
    }
}

fn three_qubit_terms(i: [u8; 3]) -> Operator {
    let [a, b, cc] = i;
    let terms = [
        ("ZZZ", 1.0),
        ("XXX", bit_sign(a)),
        ("XYY", bit_sign(b)),
        ("YXY", bit_sign(cc)),
        ("YYX", bit_sign(a + b + cc + 1)),
    ];
    terms
        .iter()
        .fold(Operator::zeros(Dims::qubits(3)), |acc, (l, s)| {
            &acc + &pauli_op(l).scale(*s)
        })
}

/// I - ZZZ - (-1)^{i1} XXX - (-1)^{i2} XYY - (-1)^{i3} YXY - (-1)^{i1+i2+i3+1} YYX.
pub fn w3q(i: [u8; 3]) -> Result<Witness> {
    check_bits(i)?;
    let op = &Operator::identity(Dims::qubits(3)) - &three_qubit_terms(i);
    Ok(params3(Witness::new(op, "three-qubit"), i))
}

pub fn m3q(i: [u8; 3]) -> Result<Witness> {
    check_bits(i)?;
    let op = &Operator::identity(Dims::qubits(3)) + &three_qubit_terms(i);
    Ok(params3(Witness::new(op, "three-qubit-mirror"), i))
}

fn params3(w: Witness, i: [u8; 3]) -> Witness {
    w.with_param("i1", i[0] as f64)
        .with_param("i2", i[1] as f64)
        .with_param("i3", i[2] as f64)
}

pub fn w3q_pair(i: [u8; 3]) -> Result<MirrorPair> {
    Ok(MirrorPair::with_m(w3q(i)?, m3q(i)?.op, 2.0))
}

/// All eight index triples in binary order.
pub fn bit_triples() -> Vec<[u8; 3]> {
    (0..8u8).map(|k| [k >> 2 & 1, k >> 1 & 1, k & 1]).collect()
}

/// Pauli strings carrying W[0,0,0] to W[i] by conjugation.
pub fn local_pauli_equivalences() -> Vec<([u8; 3], &'static str)> {
    vec![
        ([1, 1, 1], "ZZZ"),
        ([1, 1, 0], "ZXX"),
        ([1, 0, 1], "XZX"),
        ([1, 0, 0], "XXZ"),
        ([0, 1, 1], "YYI"),
        ([0, 1, 0], "YIY"),
        ([0, 0, 1], "IYY"),
    ]
}

/// Y on each of `n` qubits.
pub fn y_all(n: usize) -> Operator {
    tensor(&vec![Pauli::Y.operator(); n]).expect("nonempty")
}

/// Three-qubit X-shaped matrix divided by ν = Σ(s_i + t_i), with no positivity check.
pub fn x_operator(s: [f64; 4], t: [f64; 4], u: [crate::linops::C64; 4]) -> Result<Operator> {
    let nu: f64 = s.iter().sum::<f64>() + t.iter().sum::<f64>();
    if nu <= 0.0 {
        return Err(Error::Constraint(format!("normalization ν = {nu} must be positive")));
    }
    let x = XShapedOperator::new(s.to_vec(), t.to_vec(), u.to_vec())?;
    Ok(x.expand().scale(1.0 / nu))
}

/// X-shaped three-qubit state; requires s_i, t_i > 0, s_i t_i = 1, |u_i| ≤ 1.
pub fn rho_ppt(s: [f64; 4], t: [f64; 4], u: [crate::linops::C64; 4]) -> Result<StateSpec> {
    for k in 0..4 {
        if s[k] <= 0.0 || t[k] <= 0.0 {
            return Err(Error::Constraint(format!("s_{0}, t_{0} must be positive", k + 1)));
        }
        if (s[k] * t[k] - 1.0).abs() > CONSTRAINT_TOL {
            return Err(Error::Constraint(format!(
                "s_{0} t_{0} = {1} != 1",
                k + 1,
                s[k] * t[k]
            )));
        }
        if u[k].norm() > 1.0 + CONSTRAINT_TOL {
            return Err(Error::Constraint(format!("|u_{}| > 1", k + 1)));
        }
    }
    StateSpec::new(x_operator(s, t, u)?, "x-shaped-ppt")
}

pub fn rho_xyz(x: f64, y: f64, z: f64) -> Result<StateSpec> {
    let zero = cr(0.0);
    Ok(rho_ppt(
        [1.0, x, y, z],
        [1.0, 1.0 / x, 1.0 / y, 1.0 / z],
        [cr(1.0), zero, zero, zero],
    )?
    .with_param("x", x)
    .with_param("y", y)
    .with_param("z", z))
}

/// Parameters (s, t, u) of ρ(b, c).
pub fn rho_bc_params(b: f64, cc: f64) -> ([f64; 4], [f64; 4], [crate::linops::C64; 4]) {
    (
        [1.0, 1.0, 1.0, b],
        [1.0, 1.0, 1.0, cc],
        [cr(-1.0), cr(-1.0), cr(1.0), cr(-1.0)],
    )
}

/// ρ(b, c); a state only when bc ≥ 1.
pub fn rho_bc(b: f64, cc: f64) -> Result<StateSpec> {
    if b <= 0.0 || cc <= 0.0 || b * cc < 1.0 - CONSTRAINT_TOL {
        return Err(Error::Constraint(format!("need b, c > 0 and bc >= 1, got b={b}, c={cc}")));
    }
    let (s, t, u) = rho_bc_params(b, cc);
    Ok(StateSpec::new(x_operator(s, t, u)?, "x-shaped-bc")?
        .with_param("b", b)
        .with_param("c", cc))
}

/// Σ α_s |i,i+s><i,i+s| - Σ_{i≠j} |ii><jj| without constraint checks.
pub fn covariant_operator(alpha: &[f64]) -> Operator {
    let n = alpha.len();
    let mut m = CMat::zeros(n * n, n * n);
    for i in 0..n {
        for (s, a) in alpha.iter().enumerate() {
            let k = i * n + (i + s) % n;
            m[(k, k)] += cr(*a);
        }
        for j in 0..n {
            if i != j {
                m[(i * n + i, j * n + j)] -= cr(1.0);
            }
        }
    }
    Operator::new(m, Dims::uniform(n, 2)).expect("square")
}

/// Residuals of Σα = n-1 and A Aᵀ = I + (n-2) J for the circulant A.
pub fn covariant_residuals(alpha: &[f64]) -> (f64, f64) {
    let n = alpha.len();
    let sum = (alpha.iter().sum::<f64>() - (n as f64 - 1.0)).abs();
    let a = |k: usize, l: usize| alpha[(l + n - k) % n];
    let mut worst: f64 = 0.0;
    for k in 0..n {
        for l in 0..n {
            let v: f64 = (0..n).map(|m| a(k, m) * a(l, m)).sum();
            let target = if k == l { 1.0 } else { 0.0 } + (n as f64 - 2.0);
            worst = worst.max((v - target).abs());
        }
    }
    (sum, worst)
}

pub fn covariant_witness(alpha: &[f64]) -> Result<Witness> {
    if alpha.len() < 2 {
        return Err(Error::Dims("need at least two coefficients".into()));
    }
    let (r1, r2) = covariant_residuals(alpha);
    if r1 > CONSTRAINT_TOL || r2 > CONSTRAINT_TOL {
        return Err(Error::Constraint(format!(
            "covariant constraints violated: sum residual {r1:.3e}, circulant residual {r2:.3e}"
        )));
    }
    let mut w = Witness::new(covariant_operator(alpha), "covariant");
    for (s, a) in alpha.iter().enumerate() {
        w = w.with_param(&format!("alpha{s}"), *a);
    }
    Ok(w)
}

/// W[a,b,c] on 3⊗3; a,b,c ≥ 0, a+b+c ≥ 2 and bc ≥ (1-a)² when a ≤ 1.
pub fn choi_abc(a: f64, b: f64, cc: f64) -> Result<Witness> {
    let tol = 1e-12;
    if a < -tol || b < -tol || cc < -tol {
        return Err(Error::Constraint("a, b, c must be nonnegative".into()));
    }
    if a + b + cc < 2.0 - tol {
        return Err(Error::Constraint(format!("a+b+c = {} < 2", a + b + cc)));
    }
    if a <= 1.0 && b * cc < (1.0 - a).powi(2) - tol {
        return Err(Error::Constraint(format!(
            "bc = {} < (1-a)^2 = {}",
            b * cc,
            (1.0 - a).powi(2)
        )));
    }
    Ok(Witness::new(covariant_operator(&[a, b, cc]), "choi")
        .with_param("a", a)
        .with_param("b", b)
        .with_param("c", cc))
}

pub fn choi_phi_params(phi: f64) -> [f64; 3] {
    let r3 = 3f64.sqrt();
    [
        2.0 / 3.0 * (1.0 + phi.cos()),
        (2.0 - phi.cos() - r3 * phi.sin()) / 3.0,
        (2.0 - phi.cos() + r3 * phi.sin()) / 3.0,
    ]
}

pub fn choi_phi(phi: f64) -> Result<Witness> {
    let [a, b, cc] = choi_phi_params(phi);
    Ok(choi_abc(a, b, cc)?.with_param("phi", phi))
}

pub fn wabcd(a: f64, b: f64, cc: f64, d: f64) -> Result<Witness> {
    let w = covariant_witness(&[a, b, cc, d])?;
    let mut out = w.relabel(w.op.clone(), "wabcd");
    out.params.clear();
    Ok(out
        .with_param("a", a)
        .with_param("b", b)
        .with_param("c", cc)
        .with_param("d", d))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WitnessClass {
    I,
    II,
}

impl std::str::FromStr for WitnessClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" | "I" | "i" | "class1" => Ok(WitnessClass::I),
            "2" | "II" | "ii" | "class2" => Ok(WitnessClass::II),
            _ => Err(Error::Parse(format!("unknown class {s:?}"))),
        }
    }
}

pub fn class_params(class: WitnessClass, theta: f64) -> [f64; 4] {
    match class {
        WitnessClass::I => {
            let a = (2.0 - theta.sin()) / 2.0;
            let b = (1.0 + theta.cos()) / 2.0;
            [a, b, 2.0 - a, 1.0 - b]
        }
        WitnessClass::II => {
            let a = (1.0 + theta.cos()) / 2.0;
            let b = (2.0 - theta.sin()) / 2.0;
            [a, b, 1.0 - a, 2.0 - b]
        }
    }
}

pub fn wabcd_class(class: WitnessClass, theta: f64) -> Result<Witness> {
    let [a, b, cc, d] = class_params(class, theta);
    let fam = match class {
        WitnessClass::I => "class-i",
        WitnessClass::II => "class-ii",
    };
    let w = wabcd(a, b, cc, d)?;
    Ok(w.relabel(w.op.clone(), fam)
        .with_param("theta", theta))
}

/// Unnormalized ρ_x: the covariant operator with α = (3, x, 1, 1/x); trace 4(4 + x + 1/x).
pub fn rho_x_unnormalized(x: f64) -> Result<Operator> {
    if x <= 0.0 {
        return Err(Error::Constraint(format!("x must be positive, got {x}")));
    }
    Ok(covariant_operator(&[3.0, x, 1.0, 1.0 / x]))
}

pub fn rho_x(x: f64) -> Result<StateSpec> {
    let raw = rho_x_unnormalized(x)?;
    let tr = raw.trace_re();
    Ok(StateSpec::new(raw.scale(1.0 / tr), "rho-x")?
        .with_param("x", x)
        .with_param("trace", tr))
}

/// W[1,1,1,0] with the mirror (4/3) I - W, built as stated (see the notes on block-positivity).
pub fn m1110_pair() -> Result<MirrorPair> {
    let w = wabcd_class(WitnessClass::I, 0.0)?;
    let m = &Operator::identity(w.dims().clone()).scale(4.0 / 3.0) - &w.op;
    Ok(MirrorPair::with_m(w, m, 4.0 / 3.0))
}

pub struct Pair33 {
    pub pair: MirrorPair,
    pub rho_w: StateSpec,
    pub rho_m: StateSpec,
    pub u: Operator,
}

fn rows(text: &[[f64; 9]; 9]) -> Vec<Vec<f64>> {
    text.iter().map(|r| r.to_vec()).collect()
}

/// The 3⊗3 pair with W + M = 4I, the detected PPT states and the local unitary.
pub fn pair33() -> Result<Pair33> {
    let d = Dims::uniform(3, 2);
    let w = [
        [0., 0., 0., 0., 1., 0., 0., 0., 1.],
        [0., 3., 0., 0., 0., -2., -2., 0., 0.],
        [0., 0., 3., -2., 0., 0., 0., -2., 0.],
        [0., 0., -2., 3., 0., 0., 0., -2., 0.],
        [1., 0., 0., 0., 0., 0., 0., 0., 1.],
        [0., -2., 0., 0., 0., 3., -2., 0., 0.],
        [0., -2., 0., 0., 0., -2., 3., 0., 0.],
        [0., 0., -2., -2., 0., 0., 0., 3., 0.],
        [1., 0., 0., 0., 1., 0., 0., 0., 0.],
    ];
    let rw = [
        [3., 0., 0., 0., 0., 0., 0., 0., 0.],
        [0., 1., 0., 0., 0., 1., 1., 0., 0.],
        [0., 0., 1., 1., 0., 0., 0., 1., 0.],
        [0., 0., 1., 1., 0., 0., 0., 1., 0.],
        [0., 0., 0., 0., 3., 0., 0., 0., 0.],
        [0., 1., 0., 0., 0., 1., 1., 0., 0.],
        [0., 1., 0., 0., 0., 1., 1., 0., 0.],
        [0., 0., 1., 1., 0., 0., 0., 1., 0.],
        [0., 0., 0., 0., 0., 0., 0., 0., 3.],
    ];
    let rm = [
        [1., 0., 0., 0., 1., 0., 0., 0., 1.],
        [0., 2., 0., 0., 0., -1., -1., 0., 0.],
        [0., 0., 2., -1., 0., 0., 0., -1., 0.],
        [0., 0., -1., 2., 0., 0., 0., -1., 0.],
        [1., 0., 0., 0., 1., 0., 0., 0., 1.],
        [0., -1., 0., 0., 0., 2., -1., 0., 0.],
        [0., -1., 0., 0., 0., -1., 2., 0., 0.],
        [0., 0., -1., -1., 0., 0., 0., 2., 0.],
        [1., 0., 0., 0., 1., 0., 0., 0., 1.],
    ];
    let wop = Operator::from_real_rows(&rows(&w), d.clone())?;
    let witness = Witness::new(wop, "pair33");
    let m = &Operator::identity(d.clone()).scale(4.0) - &witness.op;
    let rho_w = StateSpec::new(Operator::from_real_rows(&rows(&rw), d.clone())?.scale(1.0 / 15.0), "pair33-rho-w")?;
    let rho_m = StateSpec::new(Operator::from_real_rows(&rows(&rm), d)?.scale(1.0 / 15.0), "pair33-rho-m")?;
    let om = c((2.0 * PI / 3.0).cos(), (2.0 * PI / 3.0).sin());
    let one = cr(1.0);
    let s = cr(1.0 / 3f64.sqrt());
    let u = CMat::from_row_slice(3, 3, &[one, one, om, one, om, one, om.conj(), om, om]) * s;
    Ok(Pair33 {
        pair: MirrorPair::with_m(witness, m, 4.0),
        rho_w,
        rho_m,
        u: Operator::from_matrix(u)?,
    })
}

/// U ⊗ U* for the 3⊗3 pair.
pub fn pair33_local(u: &Operator) -> Operator {
    u.kron(&u.conj())
}

/// τ = ½(P_00 + P_jk) on n⊗n.
pub fn tau_state(n: usize, j: usize, k: usize) -> Result<StateSpec> {
    if n < 2 {
        return Err(Error::Dims(format!("local dimension {n} < 2")));
    }
    let p = &bell_projector(n, 0, 0) + &bell_projector(n, j % n, k % n);
    Ok(StateSpec::new(p.scale(0.5), "tau")?
        .with_param("n", n as f64)
        .with_param("j", (j % n) as f64)
        .with_param("k", (k % n) as f64))
}

/// I ⊗ U_jk, the local unitary pairing a class witness with its partner on τ.
pub fn weyl_local(n: usize, j: usize, k: usize) -> Operator {
    Operator::identity(Dims::new(vec![n]).expect("n >= 2")).kron(&weyl(n, j % n, k % n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BellExample {
    /// ¼(II - XX - ZZ) and ¼(II + XX + ZZ).
    Example1,
    /// |ψ⁻><ψ⁻|^Γ and |φ⁺><φ⁺|.
    Example2,
}

impl std::str::FromStr for BellExample {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "example1" | "1" => Ok(BellExample::Example1),
            "example2" | "2" => Ok(BellExample::Example2),
            _ => Err(Error::Parse(format!("unknown example {s:?}"))),
        }
    }
}

pub fn phi_plus() -> CVec {
    generalized_bell(2, 0, 0)
}

pub fn psi_minus() -> CVec {
    let s = 0.5f64.sqrt();
    CVec::from_vec(vec![cr(0.0), cr(s), cr(-s), cr(0.0)])
}

pub fn bell_pair_witness(which: BellExample) -> Result<MirrorPair> {
    let d = Dims::qubits(2);
    let id = Operator::identity(d.clone());
    match which {
        BellExample::Example1 => {
            let s = &pauli_op("XX") + &pauli_op("ZZ");
            let w = Witness::new((&id - &s).scale(0.25), "bell-example1");
            Ok(MirrorPair::with_m(w, (&id + &s).scale(0.25), 0.5))
        }
        BellExample::Example2 => {
            let pm = Operator::projector(&psi_minus(), d.clone())?;
            let w = Witness::new(pm.partial_transpose(&[1])?, "bell-example2");
            let m = Operator::projector(&phi_plus(), d)?;
            Ok(MirrorPair::with_m(w, m, 0.5))
        }
    }
}

/// X-shaped three-qubit witness with s = (0, s2, s3, s4), t = 1/s and corner e^{iθ}.
pub fn w_opt_x(s2: f64, s3: f64, s4: f64, theta: f64) -> Result<XShapedOperator> {
    if s2 <= 0.0 || s3 <= 0.0 || s4 <= 0.0 {
        return Err(Error::Constraint("s_i must be positive".into()));
    }
    XShapedOperator::new(
        vec![0.0, s2, s3, s4],
        vec![0.0, 1.0 / s2, 1.0 / s3, 1.0 / s4],
        vec![c(theta.cos(), theta.sin()), cr(0.0), cr(0.0), cr(0.0)],
    )
}

pub fn w_opt(s2: f64, s3: f64, s4: f64, theta: f64) -> Result<Witness> {
    let x = w_opt_x(s2, s3, s4, theta)?;
    Ok(Witness::new(x.expand(), "x-shaped-optimal")
        .with_param("s2", s2)
        .with_param("s3", s3)
        .with_param("s4", s4)
        .with_param("theta", theta)
        .with_model(SeparabilityModel::Biseparable))
}

/// max{s_i, 1/s_i}, the smallest admissible mirror scalar for `w_opt`.
pub fn w_opt_beta(s2: f64, s3: f64, s4: f64) -> f64 {
    [s2, s3, s4]
        .iter()
        .flat_map(|&s| [s, 1.0 / s])
        .fold(1.0, f64::max)
}

/// Every witness family at default parameters (block-positive ones only).
pub fn default_witnesses() -> Result<Vec<Witness>> {
    let mut out = vec![];
    for ex in [BellExample::Example1, BellExample::Example2] {
        out.push(bell_pair_witness(ex)?.w);
    }
    let e1 = bell_pair_witness(BellExample::Example1)?;
    out.push(e1.w.relabel(e1.m.clone(), "bell-example1-mirror"));
    out.push(canonical_ghz_witness(3)?);
    let alt = alternative_ghz_witness(3)?;
    out.push(alt.w.relabel(alt.m.clone(), "ghz-alternative-mirror"));
    out.push(alt.w);
    out.push(two_measurement_ghz(3)?.w);
    let cluster = graph_witness(&Graph::named(crate::graphs::GraphKind::LinearCluster(4))?)?;
    out.push(cluster.w.relabel(cluster.m.clone(), "graph-mirror"));
    out.push(cluster.w);
    out.push(ghz_graph_witness(3)?.w);
    out.push(two_measurement_witness(&Graph::named(crate::graphs::GraphKind::LinearCluster(4))?)?.w);
    for i in bit_triples() {
        out.push(w3q(i)?);
        out.push(m3q(i)?);
    }
    out.push(choi_phi(PI / 3.0)?);
    out.push(choi_abc(1.0, 0.0, 1.0)?);
    out.push(choi_abc(0.0, 1.0, 1.0)?);
    out.push(covariant_witness(&[1.0, 1.0, 0.0])?);
    out.push(wabcd_class(WitnessClass::I, 0.0)?);
    out.push(wabcd_class(WitnessClass::II, PI / 2.0)?);
    let p = pair33()?;
    out.push(p.pair.w.relabel(p.pair.m.clone(), "pair33-mirror"));
    out.push(p.pair.w);
    out.push(w_opt(2.0, 3.0, 0.5, PI / 4.0)?);
    Ok(out)
}

/// Every state family at default parameters.
pub fn default_states() -> Result<Vec<StateSpec>> {
    let p = pair33()?;
    Ok(vec![
        ghz_state(3)?,
        ghz_a_state(4)?,
        rho_ppt([1.0; 4], [1.0; 4], [cr(1.0); 4])?,
        rho_xyz(0.5, 0.5, 2.0)?,
        rho_bc(2.0, 0.5)?,
        rho_x(2.0)?,
        tau_state(4, 1, 1)?,
        p.rho_w,
        p.rho_m,
        StateSpec::from_vector(&phi_plus(), Dims::qubits(2), "phi-plus")?,
        StateSpec::from_vector(&psi_minus(), Dims::qubits(2), "psi-minus")?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_ghz_value() {
        for n in 2..=5 {
            let w = canonical_ghz_witness(n).unwrap();
            assert!(w.normalized);
            let v = w.op.expect(&ghz_state(n).unwrap().op);
            assert!((v + 1.0 / ((1u64 << n) - 2) as f64).abs() < 1e-12);
            let pair = canonical_ghz_pair(n).unwrap();
            assert!(pair.identity_residual() < 1e-12);
        }
    }

    #[test]
    fn alternative_pair_identity() {
        let p = alternative_ghz_witness(3).unwrap();
        let v = p.w.op.expect(&ghz_state(3).unwrap().op);
        assert!((v + 1.0 / 16.0).abs() < 1e-12);
        assert!((p.m.trace_re() - 1.0).abs() < 1e-12);
        assert!(p.identity_residual() < 1e-12);
    }

    #[test]
    fn two_measurement_ghz_values() {
        let p = two_measurement_ghz(3).unwrap();
        assert!((p.mu - 0.25).abs() < 1e-15);
        let v = p.w.op.expect(&ghz_state(3).unwrap().op);
        assert!((v + 1.0 / 12.0).abs() < 1e-12);
        assert!(p.m.min_eigenvalue() >= -1e-12);
        assert!((p.rescale - 6.0 / 6.0).abs() < 1e-12);
        assert!(p.identity_residual() < 1e-12);
    }

    #[test]
    fn graph_and_ghz_pairs() {
        let p = ghz_graph_witness(3).unwrap();
        let gens = &(&pauli_op("XXX") + &pauli_op("ZZI")) + &pauli_op("IZZ");
        let expect = &Operator::identity(Dims::qubits(3)).scale(2.0) - &gens;
        assert!(p.w.op.max_abs_diff(&expect) < 1e-15);
        let u = pauli_op("ZYZ");
        assert!(p.w.op.conjugate_by(&u).max_abs_diff(&p.m) < 1e-12);
    }

    #[test]
    fn three_qubit_mirror_by_y() {
        for i in bit_triples() {
            let w = w3q(i).unwrap();
            let m = m3q(i).unwrap();
            assert!(w.op.conjugate_by(&y_all(3)).max_abs_diff(&m.op) < 1e-12);
            assert!((&w.op + &m.op).max_abs_diff(&Operator::identity(Dims::qubits(3)).scale(2.0)) < 1e-12);
        }
    }

    #[test]
    fn local_equivalence_table() {
        let w0 = w3q([0, 0, 0]).unwrap().op;
        for (i, label) in local_pauli_equivalences() {
            let u = pauli_op(label);
            assert!(w0.conjugate_by(&u).max_abs_diff(&w3q(i).unwrap().op) < 1e-12, "{label}");
        }
    }

    #[test]
    fn xyz_matrix_layout() {
        let r = rho_xyz(2.0, 3.0, 5.0).unwrap();
        let nu = 2.0 + 2.0 + 3.0 + 5.0 + 0.5 + 1.0 / 3.0 + 0.2;
        assert!((r.op.entry(1, 1).re * nu - 2.0).abs() < 1e-12);
        assert!((r.op.entry(4, 4).re * nu - 0.2).abs() < 1e-12);
        assert!((r.op.entry(7, 0).re * nu - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bc_matrix_layout() {
        let r = rho_bc(2.0, 0.5).unwrap();
        let nu = 8.5;
        assert!((r.op.entry(2, 5).re * nu - 1.0).abs() < 1e-12);
        assert!((r.op.entry(3, 4).re * nu + 1.0).abs() < 1e-12);
        assert!((r.op.entry(4, 4).re * nu - 0.5).abs() < 1e-12);
        assert!(rho_bc(0.5, 0.5).is_err());
    }

    #[test]
    fn choi_family_constraints() {
        for k in 0..24 {
            let phi = 2.0 * PI * k as f64 / 24.0;
            let [a, b, cc] = choi_phi_params(phi);
            assert!((a + b + cc - 2.0).abs() < 1e-12);
            assert!((a * a + b * b + cc * cc - 2.0).abs() < 1e-12);
            assert!(choi_phi(phi).is_ok());
        }
        let p = choi_phi_params(PI / 3.0);
        assert!((p[0] - 1.0).abs() < 1e-12 && p[1].abs() < 1e-12 && (p[2] - 1.0).abs() < 1e-12);
        let p = choi_phi_params(PI);
        assert!(p[0].abs() < 1e-12 && (p[1] - 1.0).abs() < 1e-12);
        assert!(choi_abc(0.5, 0.1, 0.1).is_err());
    }

    #[test]
    fn covariant_constraints() {
        assert_eq!(covariant_residuals(&[0.0, 1.0, 1.0]), (0.0, 0.0));
        let w = covariant_witness(&[1.0, 1.0, 0.0]).unwrap();
        assert!(w.op.max_abs_diff(&choi_abc(1.0, 1.0, 0.0).unwrap().op) < 1e-15);
        assert!(covariant_witness(&[1.0, 1.0, 1.0]).is_err());
        for th in [0.3, PI / 2.0, 2.0] {
            for cl in [WitnessClass::I, WitnessClass::II] {
                let (r1, r2) = covariant_residuals(&class_params(cl, th));
                assert!(r1 < 1e-12 && r2 < 1e-12);
            }
        }
    }

    #[test]
    fn class_special_points() {
        let p = class_params(WitnessClass::I, 0.0);
        assert_eq!(p, [1.0, 1.0, 1.0, 0.0]);
        let p = class_params(WitnessClass::I, PI / 2.0);
        for (x, y) in p.iter().zip([0.5, 0.5, 1.5, 0.5]) {
            assert!((x - y).abs() < 1e-12);
        }
        let p = class_params(WitnessClass::II, PI / 2.0);
        for (x, y) in p.iter().zip([0.5, 0.5, 0.5, 1.5]) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn rho_x_trace_constant() {
        let r = rho_x(2.0).unwrap();
        assert!((r.params["trace"] - 4.0 * (4.0 + 2.0 + 0.5)).abs() < 1e-12);
        assert!(rho_x(0.0).is_err());
    }

    #[test]
    fn pair33_identities() {
        let p = pair33().unwrap();
        assert!(p.pair.identity_residual() < 1e-15);
        assert!((p.pair.w.op.expect(&p.rho_w.op) + 0.4).abs() < 1e-12);
        assert!((p.pair.m.expect(&p.rho_m.op) + 0.4).abs() < 1e-12);
        let v = pair33_local(&p.u);
        assert!(p.pair.w.op.conjugate_by(&v).max_abs_diff(&p.pair.m) < 1e-10);
    }

    #[test]
    fn tau_rank_two() {
        let t = tau_state(4, 1, 1).unwrap();
        let ev = t.op.eigenvalues();
        assert_eq!(ev.iter().filter(|&&e| e > 1e-9).count(), 2);
        assert!(t.op.partial_transpose(&[1]).unwrap().min_eigenvalue() < -1e-3);
    }

    #[test]
    fn bell_examples() {
        let e1 = bell_pair_witness(BellExample::Example1).unwrap();
        let phi = Operator::projector(&phi_plus(), Dims::qubits(2)).unwrap();
        let psi = Operator::projector(&psi_minus(), Dims::qubits(2)).unwrap();
        assert!((e1.w.op.expect(&phi) + 0.25).abs() < 1e-12);
        assert!((e1.m.expect(&psi) + 0.25).abs() < 1e-12);
        let e2 = bell_pair_witness(BellExample::Example2).unwrap();
        assert!(e2.identity_residual() < 1e-15);
        assert!(e2.m.min_eigenvalue().abs() < 1e-12);
    }

    #[test]
    fn ghz_a_vector() {
        let s = ghz_a_state(4).unwrap();
        assert!((s.op.entry(0b0101, 0b0101).re - 0.5).abs() < 1e-15);
        assert!((s.op.entry(0b0101, 0b1010).re + 0.5).abs() < 1e-15);
        let s = ghz_a_state(3).unwrap();
        assert!((s.op.entry(0b010, 0b101).re + 0.5).abs() < 1e-15);
    }

    #[test]
    fn w_opt_layout() {
        let w = w_opt(2.0, 3.0, 0.5, PI / 4.0).unwrap();
        assert!(w.op.entry(0, 0).norm() < 1e-15);
        assert!((w.op.entry(6, 6).re - 0.5).abs() < 1e-15);
        assert!((w_opt_beta(2.0, 3.0, 0.5) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn default_states_valid() {
        for s in default_states().unwrap() {
            assert!(s.op.min_eigenvalue() >= -1e-10, "{}", s.family);
            assert!((s.op.trace_re() - 1.0).abs() <= 1e-12, "{}", s.family);
        }
    }
}
