//! Detection verdicts, PPT tests, local-unitary checks, X-shaped optimality,
//! Pauli coefficients of X-shaped states and decomposability certificates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{
    choi_phi, choi_phi_params, class_params, covariant_operator, default_states, wabcd_class,
    weyl_local, x_operator, StateSpec, Witness, WitnessClass,
};
use crate::error::{Error, Result};
use crate::linops::{c, cr, pauli_trace, tensor, Operator, PauliString, XShapedOperator, C64};
use crate::mirror::{compute_mu, MirrorPair, POSITIVE_TOL};
use crate::sepopt::{spanning_dimension, zero_set_search, ProductState, SeesawConfig, ZeroSearch};

/// Threshold below which an expectation counts as negative.
pub const DETECT_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    Lower,
    Upper,
    None,
}

#[derive(Clone, Debug, Serialize)]
pub struct DetectionVerdict {
    pub value: f64,
    pub bound_violated: Bound,
    pub witness: String,
    pub state: String,
}

impl DetectionVerdict {
    pub fn detected(&self) -> bool {
        self.bound_violated != Bound::None
    }
}

fn check_dims(a: &Operator, b: &Operator) -> Result<()> {
    if a.dims() != b.dims() {
        return Err(Error::DimMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

fn verdict(value: f64, upper: Option<f64>, witness: &str, state: &str) -> DetectionVerdict {
    let bound = if value < -DETECT_TOL {
        Bound::Lower
    } else if upper.is_some_and(|mu| value > mu + DETECT_TOL) {
        Bound::Upper
    } else {
        Bound::None
    };
    DetectionVerdict {
        value,
        bound_violated: bound,
        witness: witness.to_string(),
        state: state.to_string(),
    }
}

/// Tr[Wρ] against the lower bound 0.
pub fn detect(w: &Witness, rho: &StateSpec) -> Result<DetectionVerdict> {
    check_dims(&w.op, &rho.op)?;
    Ok(verdict(w.op.expect(&rho.op), None, &w.family, &rho.family))
}

/// Tr[Wρ] against the window [0, μ]; an upper violation means M detects ρ.
pub fn detect_pair(pair: &MirrorPair, rho: &StateSpec) -> Result<DetectionVerdict> {
    check_dims(&pair.w.op, &rho.op)?;
    Ok(verdict(
        pair.w.op.expect(&rho.op),
        Some(pair.mu),
        &pair.w.family,
        &rho.family,
    ))
}

pub fn min_pt_eigenvalue(rho: &Operator, subset: &[usize]) -> Result<f64> {
    Ok(rho.partial_transpose(subset)?.min_eigenvalue())
}

/// λ_min(ρ^Γ) ≥ -1e-10 for the partial transpose over `subset`.
pub fn is_ppt(rho: &Operator, subset: &[usize]) -> Result<bool> {
    Ok(min_pt_eigenvalue(rho, subset)? >= -POSITIVE_TOL)
}

/// Every nontrivial bipartition, one side listed (subsets of subsystems 1..k).
pub fn bipartitions(k: usize) -> Vec<Vec<usize>> {
    (1..(1usize << (k - 1)))
        .map(|mask| (1..k).filter(|&p| mask >> (p - 1) & 1 == 1).collect())
        .collect()
}

pub fn is_ppt_all(rho: &Operator) -> Result<bool> {
    for s in bipartitions(rho.dims().len()) {
        if !is_ppt(rho, &s)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// ‖(⊗U) A (⊗U)† - B‖_max ≤ 1e-10.
pub fn lu_equivalent_by(a: &Operator, b: &Operator, locals: &[Operator]) -> Result<bool> {
    check_dims(a, b)?;
    for u in locals {
        u.ensure_unitary()?;
    }
    let full = tensor(locals)?;
    if full.dim() != a.dim() {
        return Err(Error::DimMismatch {
            expected: a.dim(),
            found: full.dim(),
        });
    }
    let full = full.with_dims(a.dims().clone())?;
    Ok(a.conjugate_by(&full).max_abs_diff(b) <= 1e-10)
}

/// Single-qubit factors of a Pauli string.
pub fn pauli_locals(p: &PauliString) -> Vec<Operator> {
    p.ops().iter().map(|q| q.operator()).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct XOptimality {
    pub corner_condition: bool,
    /// Row index i of the distinguished pair (i, ī).
    pub slot: Option<usize>,
    pub r: Option<f64>,
    pub zero_states: Option<usize>,
    pub spanning_dimension: Option<usize>,
    pub spanning: Option<bool>,
}

/// Corner condition: exactly one slot i has s_i = t_i = 0 and |u_i| = r > 0, and every
/// other slot has u_j = 0 and sqrt(s_j t_j) = r. Optionally cross-checked by a zero-set search.
pub fn xshaped_optimality_check(x: &XShapedOperator, search: Option<&ZeroSearch>) -> Result<XOptimality> {
    let tol = 1e-10;
    let l = x.half_len();
    let mut found = None;
    for j in 0..l {
        if x.s[j].abs() <= tol && x.t[j].abs() <= tol && x.u[j].norm() > tol {
            if found.is_some() {
                found = None;
                break;
            }
            found = Some((j, x.u[j].norm()));
        }
    }
    let ok = found.is_some_and(|(i, r)| {
        (0..l).filter(|&j| j != i).all(|j| {
            x.u[j].norm() <= tol && x.s[j] >= 0.0 && x.t[j] >= 0.0 && ((x.s[j] * x.t[j]).sqrt() - r).abs() <= tol
        })
    });
    let (zero_states, span, cond_ii) = match search {
        Some(cfg) => {
            let op = x.expand();
            let n = x.num_qubits();
            let cands: Vec<ProductState> = (0..1usize << n)
                .map(|k| {
                    let digits: Vec<usize> = (0..n).map(|q| k >> (n - 1 - q) & 1).collect();
                    ProductState::basis(op.dims().clone(), &digits)
                })
                .collect::<Result<_>>()?;
            let zs = zero_set_search(&op, 1 << n, cfg, &cands)?;
            let dim = spanning_dimension(&zs);
            (Some(zs.len()), Some(dim), Some(dim == op.dim()))
        }
        None => (None, None, None),
    };
    Ok(XOptimality {
        corner_condition: ok,
        slot: found.map(|f| f.0),
        r: found.map(|f| f.1),
        zero_states,
        spanning_dimension: span,
        spanning: cond_ii,
    })
}

/// Pauli coefficients r_ijk = Tr[ρ σ_i⊗σ_j⊗σ_k] of a three-qubit X-shaped state.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct RCoeffs {
    pub r000: f64,
    pub r300: f64,
    pub r030: f64,
    pub r003: f64,
    pub r330: f64,
    pub r303: f64,
    pub r033: f64,
    pub r333: f64,
    pub r111: f64,
    pub r112: f64,
    pub r121: f64,
    pub r211: f64,
    pub r122: f64,
    pub r212: f64,
    pub r221: f64,
    pub r222: f64,
}

impl RCoeffs {
    pub const LABELS: [&'static str; 16] = [
        "000", "300", "030", "003", "330", "303", "033", "333", "111", "112", "121", "211", "122",
        "212", "221", "222",
    ];

    pub fn get(&self, label: &str) -> Option<f64> {
        Some(match label {
            "000" => self.r000,
            "300" => self.r300,
            "030" => self.r030,
            "003" => self.r003,
            "330" => self.r330,
            "303" => self.r303,
            "033" => self.r033,
            "333" => self.r333,
            "111" => self.r111,
            "112" => self.r112,
            "121" => self.r121,
            "211" => self.r211,
            "122" => self.r122,
            "212" => self.r212,
            "221" => self.r221,
            "222" => self.r222,
            _ => return None,
        })
    }

    fn set(&mut self, label: &str, v: f64) {
        let slot = match label {
            "000" => &mut self.r000,
            "300" => &mut self.r300,
            "030" => &mut self.r030,
            "003" => &mut self.r003,
            "330" => &mut self.r330,
            "303" => &mut self.r303,
            "033" => &mut self.r033,
            "333" => &mut self.r333,
            "111" => &mut self.r111,
            "112" => &mut self.r112,
            "121" => &mut self.r121,
            "211" => &mut self.r211,
            "122" => &mut self.r122,
            "212" => &mut self.r212,
            "221" => &mut self.r221,
            "222" => &mut self.r222,
            _ => return,
        };
        *slot = v;
    }

    pub fn max_abs_diff(&self, other: &RCoeffs) -> f64 {
        Self::LABELS
            .iter()
            .map(|l| (self.get(l).unwrap() - other.get(l).unwrap()).abs())
            .fold(0.0, f64::max)
    }
}

fn label_to_pauli(label: &str) -> String {
    label
        .chars()
        .map(|ch| match ch {
            '0' => 'I',
            '1' => 'X',
            '2' => 'Y',
            _ => 'Z',
        })
        .collect()
}

/// Closed forms for the X-shaped family; they agree with direct traces.
pub fn rijk(s: [f64; 4], t: [f64; 4], u: [C64; 4]) -> RCoeffs {
    let nu: f64 = s.iter().sum::<f64>() + t.iter().sum::<f64>();
    let re = |k: usize| u[k].re;
    let im = |k: usize| u[k].im;
    let q = 2.0 / nu;
    let lin = |a: [f64; 4], b: [f64; 4]| -> f64 {
        (0..4).map(|k| a[k] * s[k] + b[k] * t[k]).sum::<f64>() / nu
    };
    RCoeffs {
        r000: 1.0,
        r300: lin([1., 1., 1., 1.], [-1., -1., -1., -1.]),
        r030: lin([1., 1., -1., -1.], [-1., -1., 1., 1.]),
        r003: lin([1., -1., 1., -1.], [-1., 1., -1., 1.]),
        r330: lin([1., 1., -1., -1.], [1., 1., -1., -1.]),
        r303: lin([1., -1., 1., -1.], [1., -1., 1., -1.]),
        r033: lin([1., -1., -1., 1.], [1., -1., -1., 1.]),
        r333: lin([1., -1., -1., 1.], [-1., 1., 1., -1.]),
        r111: q * (re(0) + re(1) + re(2) + re(3)),
        r112: -q * (im(0) - im(1) + im(2) - im(3)),
        r121: -q * (im(0) + im(1) - im(2) - im(3)),
        r211: -q * (im(0) + im(1) + im(2) + im(3)),
        r122: q * (-re(0) + re(1) + re(2) - re(3)),
        r212: -q * (re(0) - re(1) + re(2) - re(3)),
        r221: -q * (re(0) + re(1) - re(2) - re(3)),
        r222: q * (im(0) - im(1) - im(2) + im(3)),
    }
}

/// Variant with the signs of r112, r121, r212, r221 flipped and r003 dropped; disagrees with direct traces.
pub fn rijk_flipped(s: [f64; 4], t: [f64; 4], u: [C64; 4]) -> RCoeffs {
    let mut r = rijk(s, t, u);
    r.r112 = -r.r112;
    r.r121 = -r.r121;
    r.r212 = -r.r212;
    r.r221 = -r.r221;
    r.r003 = 0.0;
    r
}

/// Coefficients by direct trace against a three-qubit operator.
pub fn rijk_direct(rho: &Operator) -> Result<RCoeffs> {
    if rho.dims().as_slice() != [2, 2, 2] {
        return Err(Error::Dims("expected a three-qubit operator".into()));
    }
    let mut r = RCoeffs::default();
    for l in RCoeffs::LABELS {
        let p = PauliString::parse(&label_to_pauli(l))?;
        r.set(l, pauli_trace(rho, &p));
    }
    Ok(r)
}

fn sgn(k: u32) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// 1 - r333 - (-1)^{i1} r111 - (-1)^{i2} r122 - (-1)^{i3} r212 - (-1)^{i1+i2+i3+1} r221.
pub fn expectation_via_coeffs(i: [u8; 3], r: &RCoeffs) -> f64 {
    let [a, b, cc] = i.map(u32::from);
    r.r000
        - r.r333
        - sgn(a) * r.r111
        - sgn(b) * r.r122
        - sgn(cc) * r.r212
        - sgn(a + b + cc + 1) * r.r221
}

/// Tr[W[i] ρ(b,c)] from direct traces: (2c + 6 + 4((-1)^{i1} - (-1)^{i2} + (-1)^{i3} + (-1)^{i1+i2+i3}))/(b+c+6).
pub fn bc_expectation(i: [u8; 3], b: f64, cc: f64) -> f64 {
    let [x, y, z] = i.map(u32::from);
    (2.0 * cc + 6.0 + 4.0 * (sgn(x) - sgn(y) + sgn(z) + sgn(x + y + z))) / (b + cc + 6.0)
}

/// (2c + 6 + 4((-1)^{i1} - (-1)^{i3} + (-1)^{i1+i2+i3+1}))/(b+c+6), what the flipped coefficients give once r122 is also set to zero.
pub fn bc_expectation_flipped(i: [u8; 3], b: f64, cc: f64) -> f64 {
    let [x, y, z] = i.map(u32::from);
    (2.0 * cc + 6.0 + 4.0 * (sgn(x) - sgn(z) + sgn(x + y + z + 1))) / (b + cc + 6.0)
}

/// ρ(b,c) as an operator without the bc ≥ 1 restriction.
pub fn bc_operator(b: f64, cc: f64) -> Result<Operator> {
    let (s, t, u) = crate::catalog::rho_bc_params(b, cc);
    x_operator(s, t, u)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DecompTier {
    Nondecomposable,
    Decomposable,
    Undecided,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompCertificate {
    pub tier: DecompTier,
    pub reason: String,
    pub detected_value: Option<f64>,
    pub detecting_state: Option<String>,
    pub residual: Option<f64>,
    pub iterations: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct DecompConfig {
    pub samples: usize,
    pub seed: u64,
    pub ap_max_iter: usize,
    pub ap_tol: f64,
}

impl Default for DecompConfig {
    fn default() -> Self {
        DecompConfig {
            samples: 1000,
            seed: 42,
            ap_max_iter: 10_000,
            ap_tol: 1e-8,
        }
    }
}

/// Covariant d⊗d PPT state with off-diagonal β = ±1, α_0 ≥ 1 (≥ d-1 for β < 0) and α_s α_{-s} ≥ 1.
fn random_covariant_ppt<R: Rng>(d: usize, rng: &mut R) -> (Operator, String) {
    let beta = if rng.random::<bool>() { 1.0 } else { -1.0 };
    let mut alpha = vec![0.0; d];
    let base0: f64 = if beta < 0.0 { (d - 1) as f64 } else { 1.0 };
    alpha[0] = base0 * (1.0 + 0.2 * rng.random::<f64>().powi(3));
    for s in 1..=d / 2 {
        let g: f64 = rng.random_range(-2.5..2.5);
        let e1 = 1.0 + 0.2 * rng.random::<f64>().powi(3);
        let e2 = 1.0 + 0.2 * rng.random::<f64>().powi(3);
        if 2 * s == d {
            alpha[s] = e1;
        } else {
            alpha[s] = g.exp() * e1;
            alpha[d - s] = (-g).exp() * e2;
        }
    }
    let mut op = covariant_operator(&alpha);
    if beta > 0.0 {
        op = flip_couplings(&op);
    }
    let desc = format!("covariant alpha={alpha:?} beta={beta}");
    (op.normalized(), desc)
}

/// Flip the sign of every off-diagonal entry: 2·diag(X) - X.
fn flip_couplings(op: &Operator) -> Operator {
    let diag: Vec<f64> = (0..op.dim()).map(|k| op.entry(k, k).re).collect();
    let d = Operator::diagonal(&diag, op.dims().clone()).expect("square");
    &d.scale(2.0) - op
}

/// Three-qubit X-shaped PPT state with s_i t_i = 1 and |u_i| ≤ 1.
fn random_x_ppt<R: Rng>(rng: &mut R) -> (Operator, String) {
    let mut s = [0.0; 4];
    let mut t = [0.0; 4];
    let mut u = [cr(0.0); 4];
    for k in 0..4 {
        let g: f64 = rng.random_range(-2.0..2.0);
        s[k] = g.exp();
        t[k] = (-g).exp();
        let r: f64 = rng.random::<f64>().sqrt();
        let ph: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        u[k] = c(r * ph.cos(), r * ph.sin());
    }
    let op = x_operator(s, t, u).expect("positive normalization");
    (op, format!("x-shaped s={s:?} u={u:?}"))
}

fn catalog_ppt_states(op: &Operator) -> Result<Vec<(Operator, String)>> {
    let mut out = Vec::new();
    for s in default_states()? {
        if s.op.dims() == op.dims() && is_ppt_all(&s.op)? {
            out.push((s.op, s.family));
        }
    }
    Ok(out)
}

/// Split W = P + Q^Γ with P, Q ≥ 0 by alternating projections.
pub fn alternating_projections(w: &Operator, max_iter: usize, tol: f64) -> Result<(bool, f64, usize)> {
    if w.dims().len() != 2 {
        return Err(Error::Dims("alternating projections need a bipartite operator".into()));
    }
    let pt = |x: &Operator| x.partial_transpose(&[1]).expect("bipartite");
    let w = w.hermitian_part();
    let mut p = w.psd_part();
    let mut q = Operator::zeros(w.dims().clone());
    let mut res = f64::INFINITY;
    for it in 1..=max_iter {
        let r = &(&w - &p) - &pt(&q);
        res = r.max_abs();
        if res <= tol {
            return Ok((true, res, it));
        }
        p = (&p + &r.scale(0.5)).psd_part();
        q = (&q + &pt(&r).scale(0.5)).psd_part();
    }
    Ok((false, res, max_iter))
}

type Sampler = Box<dyn Fn(&mut ChaCha8Rng) -> (Operator, String) + Sync>;

pub fn decomposability_certificate(
    w: &Operator,
    extra_states: &[StateSpec],
    cfg: &DecompConfig,
) -> Result<DecompCertificate> {
    w.ensure_hermitian()?;
    let mut probes = catalog_ppt_states(w)?;
    for s in extra_states {
        if s.op.dims() == w.dims() && is_ppt_all(&s.op)? {
            probes.push((s.op.clone(), s.family.clone()));
        }
    }
    for (rho, name) in &probes {
        let v = w.expect(rho);
        if v < -1e-8 {
            return Ok(DecompCertificate {
                tier: DecompTier::Nondecomposable,
                reason: "detects a PPT state".into(),
                detected_value: Some(v),
                detecting_state: Some(name.clone()),
                residual: None,
                iterations: None,
            });
        }
    }
    let dims = w.dims().as_slice().to_vec();
    let sampler: Option<Sampler> =
        if dims.len() == 2 && dims[0] == dims[1] {
            let d = dims[0];
            Some(Box::new(move |rng| random_covariant_ppt(d, rng)))
        } else if dims == [2, 2, 2] {
            Some(Box::new(random_x_ppt::<ChaCha8Rng>))
        } else {
            None
        };
    if let Some(sample) = sampler {
        let hit = (0..cfg.samples)
            .into_par_iter()
            .map(|k| {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(k as u64);
                let (rho, name) = sample(&mut rng);
                (k, w.expect(&rho), rho, name)
            })
            .filter(|(_, v, _, _)| *v < -1e-8)
            .min_by_key(|(k, _, _, _)| *k);
        if let Some((_, v, rho, name)) = hit {
            if is_ppt_all(&rho)? && rho.min_eigenvalue() >= -POSITIVE_TOL {
                return Ok(DecompCertificate {
                    tier: DecompTier::Nondecomposable,
                    reason: "detects a sampled PPT state".into(),
                    detected_value: Some(v),
                    detecting_state: Some(name),
                    residual: None,
                    iterations: None,
                });
            }
        }
    }
    let decomposable = |reason: &str, residual: Option<f64>, iterations: Option<usize>| DecompCertificate {
        tier: DecompTier::Decomposable,
        reason: reason.into(),
        detected_value: None,
        detecting_state: None,
        residual,
        iterations,
    };
    if w.min_eigenvalue() >= -POSITIVE_TOL {
        return Ok(decomposable("positive semidefinite", None, None));
    }
    if dims.len() == 2 {
        if w.partial_transpose(&[1])?.min_eigenvalue() >= -POSITIVE_TOL {
            return Ok(decomposable("positive partial transpose", None, None));
        }
        let (ok, res, it) = alternating_projections(w, cfg.ap_max_iter, cfg.ap_tol)?;
        if ok {
            return Ok(decomposable("alternating projections converged", Some(res), Some(it)));
        }
        return Ok(DecompCertificate {
            tier: DecompTier::Undecided,
            reason: "alternating projections did not converge".into(),
            detected_value: None,
            detecting_state: None,
            residual: Some(res),
            iterations: Some(it),
        });
    }
    Ok(DecompCertificate {
        tier: DecompTier::Undecided,
        reason: "no PPT detection and no bipartite split available".into(),
        detected_value: None,
        detecting_state: None,
        residual: None,
        iterations: None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MirrorFamily {
    ChoiPhi,
    Class1,
    Class2,
}

impl std::str::FromStr for MirrorFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "choi-phi" | "choi_phi" | "choi" => Ok(MirrorFamily::ChoiPhi),
            "class1" | "class-i" => Ok(MirrorFamily::Class1),
            "class2" | "class-ii" => Ok(MirrorFamily::Class2),
            _ => Err(Error::Parse(format!("unknown family {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyTier {
    Positive,
    DecomposableEw,
    NondecomposableEw,
    Undecided,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassRow {
    pub param: f64,
    pub a: f64,
    pub mu: f64,
    pub lambda_min_m: f64,
    pub tier: FamilyTier,
}

pub fn family_witness(family: MirrorFamily, param: f64) -> Result<Witness> {
    match family {
        MirrorFamily::ChoiPhi => choi_phi(param),
        MirrorFamily::Class1 => wabcd_class(WitnessClass::I, param),
        MirrorFamily::Class2 => wabcd_class(WitnessClass::II, param),
    }
}

fn family_a(family: MirrorFamily, param: f64) -> f64 {
    match family {
        MirrorFamily::ChoiPhi => choi_phi_params(param)[0],
        MirrorFamily::Class1 => class_params(WitnessClass::I, param)[0],
        MirrorFamily::Class2 => class_params(WitnessClass::II, param)[0],
    }
}

/// Tier of M = μI - W for one sample of a family.
pub fn classify_mirror_sample(
    family: MirrorFamily,
    param: f64,
    cfg: &SeesawConfig,
    dcfg: &DecompConfig,
) -> Result<ClassRow> {
    let w = family_witness(family, param)?;
    let mu = compute_mu(&w, cfg)?;
    let m = &Operator::identity(w.dims().clone()).scale(mu) - &w.op;
    let lam = m.min_eigenvalue();
    let tier = if lam >= -POSITIVE_TOL {
        FamilyTier::Positive
    } else {
        match decomposability_certificate(&m, &[], dcfg)?.tier {
            DecompTier::Decomposable => FamilyTier::DecomposableEw,
            DecompTier::Nondecomposable => FamilyTier::NondecomposableEw,
            DecompTier::Undecided => FamilyTier::Undecided,
        }
    };
    Ok(ClassRow {
        param,
        a: family_a(family, param),
        mu,
        lambda_min_m: lam,
        tier,
    })
}

pub fn classify_mirror_family(
    family: MirrorFamily,
    samples: &[f64],
    cfg: &SeesawConfig,
    dcfg: &DecompConfig,
) -> Result<Vec<ClassRow>> {
    samples
        .par_iter()
        .map(|&p| classify_mirror_sample(family, p, cfg, dcfg))
        .collect()
}

/// Weyl indices (j, k) for which τ_jk and the partner (I⊗U_jk) W (I⊗U_jk)† give the expected traces.
pub fn tau_index_scan(w: &Witness, expect_w: f64, expect_m: f64, tol: f64) -> Result<Vec<(usize, usize)>> {
    let n = w.dims().as_slice()[0];
    let mut out = Vec::new();
    for j in 0..n {
        for k in 0..n {
            let tau = crate::catalog::tau_state(n, j, k)?;
            let m = w.op.conjugate_by(&weyl_local(n, j, k).with_dims(w.dims().clone())?);
            if (w.op.expect(&tau.op) - expect_w).abs() <= tol && (m.expect(&tau.op) - expect_m).abs() <= tol {
                out.push((j, k));
            }
        }
    }
    Ok(out)
}

/// Largest white-noise weight p with Tr[W((1-p)ρ + p I/d)] still negative; None if ρ is not detected.
pub fn noise_threshold(w: &Operator, rho: &Operator) -> Option<f64> {
    let a = w.expect(rho);
    if a >= 0.0 {
        return None;
    }
    let b = w.trace_re() / w.dim() as f64;
    Some(a / (a - b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{m3q, phi_plus, rho_bc, rho_x, w3q, w_opt_x, y_all};
    use crate::linops::{pauli_op, Dims};
    use std::f64::consts::PI;

    #[test]
    fn rijk_matches_direct_traces() {
        let s = [0.7, 1.3, 2.0, 0.4];
        let t = [1.1, 0.5, 0.9, 2.5];
        let u = [c(0.3, -0.2), c(-0.1, 0.4), c(0.25, 0.15), c(-0.35, -0.05)];
        let op = x_operator(s, t, u).unwrap();
        let direct = rijk_direct(&op).unwrap();
        assert!(rijk(s, t, u).max_abs_diff(&direct) < 1e-14);
        assert!(rijk_flipped(s, t, u).max_abs_diff(&direct) > 1e-3);
    }

    #[test]
    fn expectation_by_coefficients() {
        for i in crate::catalog::bit_triples() {
            for (b, cc) in [(2.0, 0.5), (1.0, 1.0), (4.0, 0.25)] {
                let rho = bc_operator(b, cc).unwrap();
                let r = rijk_direct(&rho).unwrap();
                let direct = w3q(i).unwrap().op.expect(&rho);
                assert!((expectation_via_coeffs(i, &r) - direct).abs() < 1e-12);
                assert!((bc_expectation(i, b, cc) - direct).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn bc_values_at_example_point() {
        let (b, cc) = (2.0, 0.5);
        assert!((bc_expectation_flipped([1, 1, 0], b, cc) - 2.0 * (cc - 3.0) / (b + cc + 6.0)).abs() < 1e-15);
        assert!((bc_expectation([1, 1, 0], b, cc) - (2.0 * cc + 14.0) / (b + cc + 6.0)).abs() < 1e-15);
        assert!(bc_expectation([0, 0, 1], b, cc) < 0.0);
    }

    #[test]
    fn flipped_coefficients_give_flipped_pattern() {
        for i in crate::catalog::bit_triples() {
            for (b, cc) in [(2.0, 0.5), (0.25, 4.0)] {
                let (s, t, u) = crate::catalog::rho_bc_params(b, cc);
                let mut r = rijk_flipped(s, t, u);
                r.r122 = 0.0;
                assert!((expectation_via_coeffs(i, &r) - bc_expectation_flipped(i, b, cc)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ppt_checks() {
        let phi = Operator::projector(&phi_plus(), Dims::qubits(2)).unwrap();
        assert!(!is_ppt_all(&phi).unwrap());
        assert!(is_ppt_all(&rho_bc(2.0, 0.5).unwrap().op).unwrap());
        assert!(is_ppt_all(&rho_x(3.0).unwrap().op).unwrap());
        assert_eq!(bipartitions(3).len(), 3);
    }

    #[test]
    fn lu_checks() {
        let w = w3q([1, 1, 0]).unwrap().op;
        let m = m3q([1, 1, 0]).unwrap().op;
        let ys = vec![pauli_op("Y"); 3];
        assert!(lu_equivalent_by(&w, &m, &ys).unwrap());
        assert!(w.conjugate_by(&y_all(3)).max_abs_diff(&m) < 1e-12);
        let ids = vec![Operator::identity(Dims::new(vec![2]).unwrap()); 3];
        assert!(!lu_equivalent_by(&w, &m, &ids).unwrap());
        let bad = vec![pauli_op("Y").scale(2.0), pauli_op("Y"), pauli_op("Y")];
        assert!(lu_equivalent_by(&w, &m, &bad).is_err());
    }

    #[test]
    fn x_corner_condition() {
        let x = w_opt_x(2.0, 3.0, 0.5, PI / 4.0).unwrap();
        let r = xshaped_optimality_check(&x, None).unwrap();
        assert!(r.corner_condition);
        assert_eq!(r.slot, Some(0));
        assert!((r.r.unwrap() - 1.0).abs() < 1e-12);
        let mut y = x.clone();
        y.u[1] = cr(0.5);
        assert!(!xshaped_optimality_check(&y, None).unwrap().corner_condition);
    }

    #[test]
    fn ap_splits_partial_transpose() {
        let q = Operator::projector(&phi_plus(), Dims::qubits(2)).unwrap();
        let w = q.partial_transpose(&[1]).unwrap();
        let cert = decomposability_certificate(&w, &[], &DecompConfig::default()).unwrap();
        assert_eq!(cert.tier, DecompTier::Decomposable);
    }

    #[test]
    fn choi_nondecomposable() {
        let w = choi_phi(PI / 3.0).unwrap();
        let cert = decomposability_certificate(&w.op, &[], &DecompConfig::default()).unwrap();
        assert_eq!(cert.tier, DecompTier::Nondecomposable);
    }

    #[test]
    fn noise_threshold_linear() {
        let w = crate::catalog::bell_pair_witness(crate::catalog::BellExample::Example1).unwrap();
        let phi = Operator::projector(&phi_plus(), Dims::qubits(2)).unwrap();
        let p = noise_threshold(&w.w.op, &phi).unwrap();
        let mix = &phi.scale(1.0 - p) + &Operator::identity(Dims::qubits(2)).scale(p / 4.0);
        assert!(w.w.op.expect(&mix).abs() < 1e-12);
    }
}
