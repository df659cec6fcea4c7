//! Mirrored pairs W + M = μI, separability windows and related transforms.

use serde::{Deserialize, Serialize};

use crate::catalog::Witness;
use crate::error::{Error, Result};
use crate::linops::{Operator, HERM_TOL};
use crate::sepopt::{
    block_positive, seesaw, seesaw_escalating, BoundsReport, SeesawConfig, SeparabilityModel,
    Sense,
};

/// Upper edge of the "positive" band for λ_min of a mirror.
pub const POSITIVE_TOL: f64 = 1e-10;
/// λ_min must fall below this for a mirror to be called a witness.
pub const WITNESS_GAP: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MirrorClass {
    Positive,
    Witness,
    Undetermined,
}

#[derive(Clone, Debug, Serialize)]
pub struct MirrorPair {
    pub w: Witness,
    pub m: Operator,
    pub mu: f64,
    /// c in μI - W = c·M; 1 for canonical pairs.
    pub rescale: f64,
    pub class: MirrorClass,
}

fn spectral_class(m: &Operator) -> MirrorClass {
    if m.min_eigenvalue() >= -POSITIVE_TOL {
        MirrorClass::Positive
    } else {
        MirrorClass::Undetermined
    }
}

impl MirrorPair {
    /// Canonical pair with M = μI - W.
    pub fn canonical(w: Witness, mu: f64) -> MirrorPair {
        let m = &Operator::identity(w.dims().clone()).scale(mu) - &w.op;
        MirrorPair::with_m(w, m, mu)
    }

    /// Pair with an explicitly given M (expected to equal μI - W).
    pub fn with_m(w: Witness, m: Operator, mu: f64) -> MirrorPair {
        MirrorPair::rescaled(w, m, mu, 1.0)
    }

    /// Pair whose stored M satisfies μI - W = c·M.
    pub fn rescaled(w: Witness, m: Operator, mu: f64, c: f64) -> MirrorPair {
        let class = spectral_class(&m);
        MirrorPair {
            w,
            m,
            mu,
            rescale: c,
            class,
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.rescale == 1.0
    }

    /// μI - W.
    pub fn canonical_m(&self) -> Operator {
        &Operator::identity(self.w.dims().clone()).scale(self.mu) - &self.w.op
    }

    /// ‖(μI - W) - c·M‖_max.
    pub fn identity_residual(&self) -> f64 {
        self.canonical_m()
            .max_abs_diff(&self.m.scale(self.rescale))
    }

    pub fn window(&self) -> Window {
        Window {
            lo: 0.0,
            hi: self.mu,
        }
    }

    /// Full classification of M, using the optimizer when M is not positive.
    pub fn classify(&mut self, cfg: &SeesawConfig) -> Result<MirrorClass> {
        self.class = classify_operator(&self.m, self.w.model, cfg)?;
        Ok(self.class)
    }
}

/// Positive if λ_min ≥ -1e-10; witness if λ_min < -1e-7 and block-positive; otherwise undetermined.
pub fn classify_operator(
    m: &Operator,
    model: SeparabilityModel,
    cfg: &SeesawConfig,
) -> Result<MirrorClass> {
    let lam = m.min_eigenvalue();
    if lam >= -POSITIVE_TOL {
        return Ok(MirrorClass::Positive);
    }
    if lam >= -WITNESS_GAP {
        return Ok(MirrorClass::Undetermined);
    }
    let bp = block_positive(m, WITNESS_GAP, &cfg.clone().with_model(model))?;
    Ok(if bp.holds {
        MirrorClass::Witness
    } else {
        MirrorClass::Undetermined
    })
}

/// M = μI - W, rejected with the violating product state when M is not block-positive.
pub fn mirror_of(w: &Witness, mu: f64, cfg: &SeesawConfig) -> Result<MirrorPair> {
    let mut pair = MirrorPair::canonical(w.clone(), mu);
    let bp = block_positive(&pair.m, WITNESS_GAP, &cfg.clone().with_model(w.model))?;
    if !bp.holds {
        return Err(Error::NotBlockPositive {
            value: bp.lower,
            state: bp
                .counterexample
                .map(|s| s.to_pairs())
                .unwrap_or_default(),
        });
    }
    pair.classify(cfg)?;
    Ok(pair)
}

/// u_W, the largest expectation over separable states in the witness's model.
pub fn compute_mu(w: &Witness, cfg: &SeesawConfig) -> Result<f64> {
    Ok(compute_mu_report(w, cfg)?.value)
}

#[derive(Clone, Debug, Serialize)]
pub struct MuReport {
    pub value: f64,
    pub restarts_used: usize,
    pub hits: usize,
    pub basins: usize,
}

pub fn compute_mu_report(w: &Witness, cfg: &SeesawConfig) -> Result<MuReport> {
    let r = seesaw_escalating(&w.op, Sense::Max, &cfg.clone().with_model(w.model))?;
    if r.converged_runs == 0 {
        return Err(Error::NoConvergence(format!(
            "no restart converged for {}",
            w.family
        )));
    }
    Ok(MuReport {
        value: r.value,
        restarts_used: r.runs,
        hits: r.hits,
        basins: r.basins,
    })
}

/// W + pI with p = max(0, -λ_min).
pub fn spa(w: &Operator) -> Result<(Operator, f64)> {
    w.ensure_hermitian()?;
    let p = (-w.min_eigenvalue()).max(0.0);
    Ok((&w.hermitian_part() + &Operator::identity(w.dims().clone()).scale(p), p))
}

/// -W + qI with q = λ_max.
pub fn mspa(w: &Operator) -> Result<(Operator, f64)> {
    w.ensure_hermitian()?;
    let (_, q) = w.eig_extremes()?;
    Ok((&Operator::identity(w.dims().clone()).scale(q) - &w.hermitian_part(), q))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
}

impl Window {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64, tol: f64) -> bool {
        x >= self.lo - tol && x <= self.hi + tol
    }
}

/// [0, u_W] for the trace-normalized witness.
pub fn window(w: &Witness, cfg: &SeesawConfig) -> Result<Window> {
    let wn = if w.normalized { w.clone() } else { w.normalize()? };
    Ok(Window {
        lo: 0.0,
        hi: compute_mu(&wn, cfg)?,
    })
}

/// (W - εP, M + εP/c) with the same μ.
pub fn finer_shift(
    pair: &MirrorPair,
    p: &Operator,
    eps: f64,
    cfg: &SeesawConfig,
) -> Result<MirrorPair> {
    if eps < 0.0 {
        return Err(Error::Constraint(format!("ε must be nonnegative, got {eps}")));
    }
    if !p.is_psd() {
        return Err(Error::Constraint("shift operator must be positive semidefinite".into()));
    }
    let w_op = &pair.w.op - &p.scale(eps);
    if eps > 0.0 {
        let bp = block_positive(&w_op, WITNESS_GAP, &cfg.clone().with_model(pair.w.model))?;
        if !bp.holds {
            return Err(Error::NotBlockPositive {
                value: bp.lower,
                state: bp
                    .counterexample
                    .map(|s| s.to_pairs())
                    .unwrap_or_default(),
            });
        }
    }
    let w = pair.w.relabel(w_op, &pair.w.family).with_param("eps", eps);
    let m = &pair.m + &p.scale(eps / pair.rescale);
    Ok(MirrorPair::rescaled(w, m, pair.mu, pair.rescale))
}

#[derive(Clone, Debug, Serialize)]
pub struct PovmCloud {
    pub w: Operator,
    pub m: Operator,
    pub lower: f64,
    pub upper: f64,
    pub mu: f64,
    pub bounds: BoundsReport,
}

/// W = O - l_O I and M = u_O I - O from the separable range [l_O, u_O] of O.
pub fn povm_cloud(o: &Operator, cfg: &SeesawConfig) -> Result<PovmCloud> {
    o.ensure_hermitian()?;
    let b = crate::sepopt::separable_bounds(o, cfg)?;
    if b.arg_lower.expectation(o) - b.lower > 1e-6 {
        return Err(Error::NoConvergence("lower bound inconsistent".into()));
    }
    let id = Operator::identity(o.dims().clone());
    let h = o.hermitian_part();
    Ok(PovmCloud {
        w: &h - &id.scale(b.lower),
        m: &id.scale(b.upper) - &h,
        lower: b.lower,
        upper: b.upper,
        mu: b.upper - b.lower,
        bounds: b,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneralizedPair {
    pub m: Operator,
    pub k: Operator,
}

impl GeneralizedPair {
    /// (Tr[Wρ], Tr[Mρ], Tr[Kρ]) for each probe state.
    pub fn probe(&self, w: &Operator, states: &[Operator]) -> Vec<(f64, f64, f64)> {
        states
            .iter()
            .map(|r| (w.expect(r), self.m.expect(r), self.k.expect(r)))
            .collect()
    }

    /// True when some probe state is detected by both W and M.
    pub fn detects_jointly(&self, w: &Operator, states: &[Operator]) -> bool {
        self.probe(w, states)
            .iter()
            .any(|&(a, b, _)| a < -HERM_TOL && b < -HERM_TOL)
    }
}

/// M = (I ⊗ U) W (I ⊗ U)† with U acting on the last subsystem, and K = W + M.
pub fn generalized_pair(w: &Witness, u_local: &Operator) -> Result<GeneralizedPair> {
    u_local.ensure_unitary()?;
    let dims = w.dims().as_slice();
    let last = *dims.last().expect("nonempty dims");
    if u_local.dim() != last {
        return Err(Error::DimMismatch {
            expected: last,
            found: u_local.dim(),
        });
    }
    let rest: usize = dims[..dims.len() - 1].iter().product();
    let id = Operator::identity(crate::linops::Dims::new(vec![rest])?);
    let full = id.kron(u_local).with_dims(w.dims().clone())?;
    let m = w.op.conjugate_by(&full);
    let k = &w.op + &m;
    Ok(GeneralizedPair { m, k })
}

/// Smallest separable expectation of K, for checking that K is block-positive.
pub fn generalized_lower(pair: &GeneralizedPair, model: SeparabilityModel, cfg: &SeesawConfig) -> Result<f64> {
    Ok(seesaw(&pair.k, Sense::Min, &cfg.clone().with_model(model))?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{alternative_ghz_witness, bell_pair_witness, pair33, BellExample};
    use crate::linops::{pauli_op, Dims};

    #[test]
    fn example2_mirror_positive() {
        let e2 = bell_pair_witness(BellExample::Example2).unwrap();
        let p = mirror_of(&e2.w, 0.5, &SeesawConfig::default()).unwrap();
        assert_eq!(p.class, MirrorClass::Positive);
        assert!(p.m.max_abs_diff(&e2.m) < 1e-15);
    }

    #[test]
    fn example1_mirror_witness() {
        let e1 = bell_pair_witness(BellExample::Example1).unwrap();
        let p = mirror_of(&e1.w, 0.5, &SeesawConfig::default()).unwrap();
        assert_eq!(p.class, MirrorClass::Witness);
        assert!(p.m.max_abs_diff(&e1.m) < 1e-15);
    }

    #[test]
    fn mirror_below_upper_bound_rejected() {
        let e1 = bell_pair_witness(BellExample::Example1).unwrap();
        match mirror_of(&e1.w, 0.3, &SeesawConfig::default()) {
            Err(Error::NotBlockPositive { value, state }) => {
                assert!(value < -0.1);
                assert_eq!(state.len(), 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn alternative_mu() {
        let p = alternative_ghz_witness(3).unwrap();
        let mu = compute_mu(&p.w, &SeesawConfig::default()).unwrap();
        assert!((mu - 0.25).abs() < 1e-7);
    }

    #[test]
    fn spa_mspa_sum() {
        let w = bell_pair_witness(BellExample::Example1).unwrap().w.op;
        let (a, p) = spa(&w).unwrap();
        let (b, q) = mspa(&w).unwrap();
        assert!((p - 0.25).abs() < 1e-12);
        let sum = &a + &b;
        assert!(sum.max_abs_diff(&Operator::identity(Dims::qubits(2)).scale(p + q)) < 1e-12);
        assert!(a.min_eigenvalue().abs() < 1e-12);
        assert!(b.min_eigenvalue().abs() < 1e-12);
        let id = Operator::identity(Dims::qubits(2));
        assert_eq!(spa(&id).unwrap().1, 0.0);
    }

    #[test]
    fn povm_cloud_xx_zz() {
        let o = &pauli_op("XX") + &pauli_op("ZZ");
        let pc = povm_cloud(&o, &SeesawConfig::default()).unwrap();
        assert!((pc.lower + 1.0).abs() < 1e-9 && (pc.upper - 1.0).abs() < 1e-9);
        assert!((pc.mu - 2.0).abs() < 1e-9);
    }

    #[test]
    fn pair33_classified_witness() {
        let p = pair33().unwrap();
        let pair = mirror_of(&p.pair.w, 4.0, &SeesawConfig::default()).unwrap();
        assert_eq!(pair.class, MirrorClass::Witness);
    }

    #[test]
    fn finer_shift_keeps_window() {
        let e1 = bell_pair_witness(BellExample::Example1).unwrap();
        let psi = Operator::projector(&crate::catalog::psi_minus(), Dims::qubits(2)).unwrap();
        let s = finer_shift(&e1, &psi, 0.05, &SeesawConfig::default()).unwrap();
        assert_eq!(s.mu, e1.mu);
        assert!(s.identity_residual() < 1e-12);
        let z = finer_shift(&e1, &psi, 0.0, &SeesawConfig::default()).unwrap();
        assert!(z.w.op.max_abs_diff(&e1.w.op) < 1e-15);
    }

    #[test]
    fn generalized_identity_unitary() {
        let e1 = bell_pair_witness(BellExample::Example1).unwrap();
        let g = generalized_pair(&e1.w, &Operator::identity(Dims::new(vec![2]).unwrap())).unwrap();
        assert!(g.k.max_abs_diff(&e1.w.op.scale(2.0)) < 1e-15);
    }
}
