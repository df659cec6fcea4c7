//! Optimization of Hermitian observables over pure product states.
//!
//! The seesaw fixes every party but one and replaces that party's local
//! vector by an extremal eigenvector of the effective operator. Each update
//! can only improve the objective, so the value sequence is monotone.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linops::{
    c, cr, hermitian_eigen, haar_vector, kron_vecs, permutation_map, CMat, CVec, Dims, Operator,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Min,
    Max,
}

impl Sense {
    fn sign(self) -> f64 {
        match self {
            Sense::Min => -1.0,
            Sense::Max => 1.0,
        }
    }
}

/// Which pure states count as separable.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeparabilityModel {
    /// Product over every subsystem.
    #[default]
    FullyProduct,
    /// Product across some bipartition of the subsystems.
    Biseparable,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeesawConfig {
    pub restarts: usize,
    pub tol: f64,
    pub max_sweeps: usize,
    pub seed: u64,
    /// Also start from every computational-basis product state (small spaces only).
    pub basis_starts: bool,
    pub model: SeparabilityModel,
}

impl Default for SeesawConfig {
    fn default() -> Self {
        SeesawConfig {
            restarts: 64,
            tol: 1e-11,
            max_sweeps: 500,
            seed: 42,
            basis_starts: true,
            model: SeparabilityModel::FullyProduct,
        }
    }
}

impl SeesawConfig {
    pub fn with_model(mut self, model: SeparabilityModel) -> Self {
        self.model = model;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Product of local vectors; `groups[p]` lists the subsystems held by party p.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductState {
    dims: Dims,
    groups: Vec<Vec<usize>>,
    locals: Vec<CVec>,
}

impl ProductState {
    /// Fully product state, one unit vector per subsystem.
    pub fn new(dims: Dims, locals: Vec<CVec>) -> Result<Self> {
        let groups = (0..dims.len()).map(|k| vec![k]).collect();
        ProductState::grouped(dims, groups, locals)
    }

    pub fn grouped(dims: Dims, groups: Vec<Vec<usize>>, locals: Vec<CVec>) -> Result<Self> {
        let mut seen = vec![false; dims.len()];
        for g in &groups {
            for &k in g {
                if k >= dims.len() || seen[k] {
                    return Err(Error::Dims("groups must partition the subsystems".into()));
                }
                seen[k] = true;
            }
        }
        if seen.iter().any(|s| !s) || groups.len() != locals.len() {
            return Err(Error::Dims("groups must partition the subsystems".into()));
        }
        let mut normed = Vec::with_capacity(locals.len());
        for (g, v) in groups.iter().zip(locals) {
            let d: usize = g.iter().map(|&k| dims.as_slice()[k]).product();
            if v.len() != d {
                return Err(Error::DimMismatch {
                    expected: d,
                    found: v.len(),
                });
            }
            let n = v.norm();
            if n == 0.0 {
                return Err(Error::Dims("zero local vector".into()));
            }
            normed.push(v / cr(n));
        }
        Ok(ProductState {
            dims,
            groups,
            locals: normed,
        })
    }

    /// Computational-basis product state |d0 d1 ...>.
    pub fn basis(dims: Dims, digits: &[usize]) -> Result<Self> {
        let locals = digits
            .iter()
            .zip(dims.as_slice())
            .map(|(&x, &d)| {
                let mut v = CVec::zeros(d);
                v[x] = cr(1.0);
                v
            })
            .collect();
        ProductState::new(dims, locals)
    }

    pub fn dims(&self) -> &Dims {
        &self.dims
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn locals(&self) -> &[CVec] {
        &self.locals
    }

    /// Full state vector in the natural (big-endian) subsystem order.
    pub fn to_vector(&self) -> CVec {
        let perm: Vec<usize> = self.groups.iter().flatten().copied().collect();
        let permuted = kron_vecs(&self.locals);
        let map = permutation_map(&self.dims, &perm);
        CVec::from_fn(self.dims.total(), |i, _| permuted[map[i]])
    }

    pub fn expectation(&self, op: &Operator) -> f64 {
        op.expect_vec(&self.to_vector())
    }

    pub fn fidelity(&self, other: &ProductState) -> f64 {
        self.to_vector().dotc(&other.to_vector()).norm_sqr()
    }

    /// Local vectors as (re, im) pairs, for reporting.
    pub fn to_pairs(&self) -> Vec<Vec<(f64, f64)>> {
        self.locals
            .iter()
            .map(|v| v.iter().map(|z| (z.re, z.im)).collect())
            .collect()
    }
}

impl Serialize for ProductState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            dims: &'a [usize],
            groups: &'a [Vec<usize>],
            locals: Vec<Vec<(f64, f64)>>,
        }
        Repr {
            dims: self.dims.as_slice(),
            groups: &self.groups,
            locals: self.to_pairs(),
        }
        .serialize(s)
    }
}

/// Outcome of one seesaw run from one starting point.
#[derive(Clone, Debug)]
pub struct RunTrace {
    pub value: f64,
    pub locals: Vec<CVec>,
    pub sweeps: usize,
    pub converged: bool,
    pub monotone: bool,
    pub history: Vec<f64>,
}

/// Best-of-restarts result for one sense.
#[derive(Clone, Debug, Serialize)]
pub struct OptResult {
    pub value: f64,
    pub state: ProductState,
    pub runs: usize,
    /// Runs ending within 1e-6 of the best value.
    pub hits: usize,
    /// Distinct final values (clustered at 1e-6).
    pub basins: usize,
    pub monotone: bool,
    pub converged_runs: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundsReport {
    pub lower: f64,
    pub upper: f64,
    pub arg_lower: ProductState,
    pub arg_upper: ProductState,
    pub restarts_used: usize,
    pub converged_basins: usize,
    pub seed: u64,
    pub model: SeparabilityModel,
    pub monotone: bool,
}

struct Layout {
    groups: Vec<Vec<usize>>,
    op: CMat,
    pdims: Vec<usize>,
}

fn layouts(op: &Operator, model: SeparabilityModel) -> Result<Vec<Layout>> {
    let k = op.dims().len();
    let dims = op.dims().as_slice();
    let fully = || -> Layout {
        Layout {
            groups: (0..k).map(|p| vec![p]).collect(),
            op: op.data().clone(),
            pdims: dims.to_vec(),
        }
    };
    match model {
        SeparabilityModel::FullyProduct => Ok(vec![fully()]),
        SeparabilityModel::Biseparable if k <= 2 => Ok(vec![fully()]),
        SeparabilityModel::Biseparable => {
            let mut out = Vec::new();
            // Cuts A|B with subsystem 0 in A and B nonempty.
            for mask in 0..(1usize << (k - 1)) {
                let a: Vec<usize> = std::iter::once(0)
                    .chain((1..k).filter(|&p| mask >> (p - 1) & 1 == 1))
                    .collect();
                let b: Vec<usize> = (1..k).filter(|&p| mask >> (p - 1) & 1 == 0).collect();
                if b.is_empty() {
                    continue;
                }
                let perm: Vec<usize> = a.iter().chain(&b).copied().collect();
                let permuted = op.permute(&perm)?;
                let da = a.iter().map(|&p| dims[p]).product();
                let db = b.iter().map(|&p| dims[p]).product();
                out.push(Layout {
                    groups: vec![a, b],
                    op: permuted.into_data(),
                    pdims: vec![da, db],
                });
            }
            Ok(out)
        }
    }
}

/// Effective operator on party `j`: the other parties contracted with their local vectors.
fn effective(op: &CMat, pdims: &[usize], locals: &[CVec], j: usize) -> CMat {
    let dtot = op.nrows();
    let k = pdims.len();
    let mut strides = vec![1usize; k];
    for p in (0..k.saturating_sub(1)).rev() {
        strides[p] = strides[p + 1] * pdims[p + 1];
    }
    let dj = pdims[j];
    let mut w = vec![cr(1.0); dtot];
    let mut a = vec![0usize; dtot];
    for (idx, (wi, ai)) in w.iter_mut().zip(a.iter_mut()).enumerate() {
        for p in 0..k {
            let digit = (idx / strides[p]) % pdims[p];
            if p == j {
                *ai = digit;
            } else {
                *wi *= locals[p][digit];
            }
        }
    }
    let mut t = CMat::zeros(dtot, dj);
    for y in 0..dtot {
        let (b, wy) = (a[y], w[y]);
        let col = op.column(y);
        let mut tc = t.column_mut(b);
        for x in 0..dtot {
            tc[x] += col[x] * wy;
        }
    }
    let mut e = CMat::zeros(dj, dj);
    for x in 0..dtot {
        let wx = w[x].conj();
        for b in 0..dj {
            e[(a[x], b)] += wx * t[(x, b)];
        }
    }
    (&e + e.adjoint()) * cr(0.5)
}

/// Extremal eigenpair with deterministic tie-breaking and phase.
fn extremal(e: &CMat, sense: Sense) -> (f64, CVec) {
    let s = hermitian_eigen(e);
    let n = s.values.len();
    let target = match sense {
        Sense::Min => s.values[0],
        Sense::Max => s.values[n - 1],
    };
    let tie = 1e-12 * (1.0 + target.abs());
    let mut best: Option<CVec> = None;
    for k in 0..n {
        if (s.values[k] - target).abs() > tie {
            continue;
        }
        let v: CVec = s.vectors.column(k).into_owned();
        best = match best {
            None => Some(v),
            Some(b) => {
                if lex_abs_greater(&v, &b) {
                    Some(v)
                } else {
                    Some(b)
                }
            }
        };
    }
    let mut v = best.expect("nonempty spectrum");
    if let Some(z) = v.iter().find(|z| z.norm() > 1e-12).copied() {
        let ph = z.conj() / cr(z.norm());
        v *= ph;
    }
    (target, v)
}

fn lex_abs_greater(a: &CVec, b: &CVec) -> bool {
    for (x, y) in a.iter().zip(b.iter()) {
        let (ax, ay) = (x.norm(), y.norm());
        if (ax - ay).abs() > 1e-12 {
            return ax > ay;
        }
    }
    false
}

fn objective(op: &CMat, pdims: &[usize], locals: &[CVec]) -> f64 {
    let e = effective(op, pdims, locals, 0);
    (locals[0].adjoint() * e * &locals[0])[(0, 0)].re
}

/// One seesaw run from `init` on an operator already laid out party by party.
pub fn seesaw_run(
    op: &CMat,
    pdims: &[usize],
    sense: Sense,
    init: Vec<CVec>,
    tol: f64,
    max_sweeps: usize,
) -> RunTrace {
    let mut locals = init;
    let sign = sense.sign();
    let mut val = objective(op, pdims, &locals);
    let mut history = vec![val];
    let mut monotone = true;
    let mut converged = false;
    let mut sweeps = 0;
    while sweeps < max_sweeps {
        sweeps += 1;
        let mut last = val;
        for j in 0..pdims.len() {
            let e = effective(op, pdims, &locals, j);
            let (lam, v) = extremal(&e, sense);
            locals[j] = v;
            last = lam;
        }
        let gain = sign * (last - val);
        if gain < -1e-12 * (1.0 + val.abs()) {
            monotone = false;
        }
        history.push(last);
        val = last;
        if gain < tol {
            converged = true;
            break;
        }
    }
    RunTrace {
        value: val,
        locals,
        sweeps,
        converged,
        monotone,
        history,
    }
}

struct Start {
    layout: usize,
    locals: Vec<CVec>,
}

fn starts(layouts: &[Layout], cfg: &SeesawConfig) -> Vec<Start> {
    let mut out = Vec::new();
    for (li, l) in layouts.iter().enumerate() {
        for r in 0..cfg.restarts {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(((li as u64) << 32) | r as u64);
            let locals = l.pdims.iter().map(|&d| haar_vector(d, &mut rng)).collect();
            out.push(Start { layout: li, locals });
        }
        let dtot: usize = l.pdims.iter().product();
        if cfg.basis_starts && dtot <= 64 {
            let pd = Dims::new(l.pdims.clone()).expect("party dims");
            for idx in 0..dtot {
                let digits = pd.digits(idx);
                let locals = digits
                    .iter()
                    .zip(&l.pdims)
                    .map(|(&x, &d)| {
                        let mut v = CVec::zeros(d);
                        v[x] = cr(1.0);
                        v
                    })
                    .collect();
                out.push(Start { layout: li, locals });
            }
        }
    }
    out
}

/// Best product state for `sense` over all restarts.
pub fn seesaw(op: &Operator, sense: Sense, cfg: &SeesawConfig) -> Result<OptResult> {
    op.ensure_hermitian()?;
    let op = op.hermitian_part();
    let lays = layouts(&op, cfg.model)?;
    let st = starts(&lays, cfg);
    let runs: Vec<(usize, RunTrace)> = st
        .into_par_iter()
        .map(|s| {
            let l = &lays[s.layout];
            let tr = seesaw_run(&l.op, &l.pdims, sense, s.locals, cfg.tol, cfg.max_sweeps);
            (s.layout, tr)
        })
        .collect();
    let sign = sense.sign();
    let mut best = 0;
    for (i, (_, tr)) in runs.iter().enumerate() {
        if sign * tr.value > sign * runs[best].1.value {
            best = i;
        }
    }
    let (bl, btr) = &runs[best];
    let bv = btr.value;
    let hits = runs
        .iter()
        .filter(|(_, t)| (t.value - bv).abs() <= 1e-6)
        .count();
    let mut vals: Vec<f64> = runs.iter().map(|(_, t)| t.value).collect();
    vals.sort_by(|a, b| a.total_cmp(b));
    let basins = 1 + vals.windows(2).filter(|w| w[1] - w[0] > 1e-6).count();
    let state = ProductState::grouped(
        op.dims().clone(),
        lays[*bl].groups.clone(),
        btr.locals.clone(),
    )?;
    Ok(OptResult {
        value: bv,
        state,
        runs: runs.len(),
        hits,
        basins,
        monotone: runs.iter().all(|(_, t)| t.monotone),
        converged_runs: runs.iter().filter(|(_, t)| t.converged).count(),
    })
}

/// As `seesaw`, rerunning with 512 restarts when the best value was hit fewer than twice.
pub fn seesaw_escalating(op: &Operator, sense: Sense, cfg: &SeesawConfig) -> Result<OptResult> {
    let first = seesaw(op, sense, cfg)?;
    if first.hits >= 2 || cfg.restarts >= 512 {
        return Ok(first);
    }
    let wide = SeesawConfig {
        restarts: 512,
        ..cfg.clone()
    };
    let second = seesaw(op, sense, &wide)?;
    let sign = sense.sign();
    Ok(if sign * second.value >= sign * first.value {
        second
    } else {
        first
    })
}

pub fn separable_bounds(op: &Operator, cfg: &SeesawConfig) -> Result<BoundsReport> {
    let lo = seesaw(op, Sense::Min, cfg)?;
    let hi = seesaw(op, Sense::Max, cfg)?;
    Ok(BoundsReport {
        lower: lo.value,
        upper: hi.value,
        restarts_used: lo.runs + hi.runs,
        converged_basins: lo.basins + hi.basins,
        seed: cfg.seed,
        model: cfg.model,
        monotone: lo.monotone && hi.monotone,
        arg_lower: lo.state,
        arg_upper: hi.state,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockPositivity {
    pub holds: bool,
    pub lower: f64,
    pub counterexample: Option<ProductState>,
}

/// Evidence of block-positivity: the seesaw minimum is at least `-tol`.
pub fn block_positive(op: &Operator, tol: f64, cfg: &SeesawConfig) -> Result<BlockPositivity> {
    let lo = seesaw(op, Sense::Min, cfg)?;
    let holds = lo.value >= -tol;
    Ok(BlockPositivity {
        holds,
        lower: lo.value,
        counterexample: if holds { None } else { Some(lo.state) },
    })
}

#[derive(Clone, Debug)]
pub struct ZeroSearch {
    pub restarts: usize,
    pub seed: u64,
    pub zero_tol: f64,
    pub max_sweeps: usize,
}

impl Default for ZeroSearch {
    fn default() -> Self {
        ZeroSearch {
            restarts: 256,
            seed: 42,
            zero_tol: 1e-8,
            max_sweeps: 5000,
        }
    }
}

/// Product states with vanishing expectation, from seesaw minima and `candidates`.
pub fn zero_set_search(
    op: &Operator,
    target: usize,
    cfg: &ZeroSearch,
    candidates: &[ProductState],
) -> Result<Vec<ProductState>> {
    op.ensure_hermitian()?;
    let op = op.hermitian_part();
    let dims = op.dims().clone();
    let mut found: Vec<(ProductState, CVec)> = Vec::new();
    let push = |s: ProductState, found: &mut Vec<(ProductState, CVec)>| {
        let v = s.to_vector();
        if found.iter().all(|(_, w)| w.dotc(&v).norm_sqr() <= 1.0 - 1e-6) {
            found.push((s, v));
        }
    };
    for s in candidates {
        if s.dims() == &dims && s.expectation(&op).abs() <= cfg.zero_tol {
            push(s.clone(), &mut found);
        }
    }
    let pdims = dims.as_slice().to_vec();
    let batch = 64;
    let mut done = 0;
    while done < cfg.restarts && found.len() < target.max(1) * 4 {
        let runs: Vec<RunTrace> = (done..(done + batch).min(cfg.restarts))
            .into_par_iter()
            .map(|r| {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(r as u64);
                let init = pdims.iter().map(|&d| haar_vector(d, &mut rng)).collect();
                seesaw_run(op.data(), &pdims, Sense::Min, init, 1e-15, cfg.max_sweeps)
            })
            .collect();
        done = (done + batch).min(cfg.restarts);
        for tr in runs {
            if tr.value.abs() <= cfg.zero_tol {
                let s = ProductState::new(dims.clone(), tr.locals)?;
                push(s, &mut found);
            }
        }
    }
    Ok(found.into_iter().map(|(s, _)| s).collect())
}

/// Numerical rank of the flattened product vectors (relative cutoff 1e-8).
pub fn spanning_dimension(states: &[ProductState]) -> usize {
    if states.is_empty() {
        return 0;
    }
    let d = states[0].dims().total();
    let m = CMat::from_fn(states.len(), d, |i, j| states[i].to_vector()[j]);
    let sv = m.svd(false, false).singular_values;
    let top = sv.iter().copied().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > 1e-8 * top).count()
}

/// Uniform grid over a qubit's Bloch sphere, used by tests and oracles.
pub fn bloch_vector(theta: f64, phi: f64) -> CVec {
    CVec::from_vec(vec![
        cr((theta / 2.0).cos()),
        c(phi.cos(), phi.sin()) * (theta / 2.0).sin(),
    ])
}
