//! The golden acceptance suite: twelve numbered criteria, each a list of checks.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::{
    bc_expectation, bc_expectation_flipped, bc_operator, classify_mirror_family,
    decomposability_certificate, expectation_via_coeffs, is_ppt_all, lu_equivalent_by,
    rijk_direct, tau_index_scan, xshaped_optimality_check, DecompConfig, DecompTier, FamilyTier,
    MirrorFamily,
};
use crate::catalog::{
    alternative_ghz_witness, bell_pair_witness, bit_triples, canonical_ghz_pair, ghz_a_state,
    ghz_state, graph_witness, local_pauli_equivalences, m1110_pair, m3q, pair33, rho_bc,
    rho_x, rho_x_unnormalized, rho_xyz, tau_state, two_measurement_ghz, w3q, w3q_pair, w_opt,
    w_opt_x, wabcd_class, weyl_local, y_all, BellExample, WitnessClass,
};
use crate::error::Result;
use crate::graphs::{Graph, GraphKind};
use crate::linops::{
    bell_projector, c, cr, random_density, random_hermitian, weyl, CMat, Dims, Operator,
    PauliString,
};
use crate::mirror::{compute_mu, MirrorPair};
use crate::sepopt::{
    block_positive, bloch_vector, seesaw, spanning_dimension, zero_set_search, ProductState,
    SeesawConfig, Sense, ZeroSearch,
};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub label: String,
    pub passed: bool,
    pub skipped: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl CriterionOutcome {
    pub fn failed_checks(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed && !c.skipped).collect()
    }

    /// One summary line: PASS/FAIL, id, name and the failing check labels.
    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let mut s = format!("{status} [{:>2}] {}", self.id, self.name);
        let failed = self.failed_checks();
        if !failed.is_empty() {
            let labels: Vec<&str> = failed.iter().map(|c| c.label.as_str()).collect();
            s.push_str(&format!(" (failed: {})", labels.join("; ")));
        }
        let skipped = self.checks.iter().filter(|c| c.skipped).count();
        if skipped > 0 {
            s.push_str(&format!(" ({skipped} skipped)"));
        }
        s
    }
}

#[derive(Clone, Debug)]
pub struct AcceptanceConfig {
    pub seed: u64,
    pub restarts: usize,
    /// Skip optimizer-heavy checks.
    pub quick: bool,
}

impl Default for AcceptanceConfig {
    fn default() -> Self {
        AcceptanceConfig {
            seed: 42,
            restarts: 64,
            quick: false,
        }
    }
}

impl AcceptanceConfig {
    fn seesaw(&self) -> SeesawConfig {
        SeesawConfig::default()
            .with_seed(self.seed)
            .with_restarts(self.restarts)
    }
}

pub const NAMES: [&str; 12] = [
    "exact mirror identities",
    "GHZ closed forms",
    "window values by optimization",
    "three-qubit bound-entanglement detection",
    "Pauli-coefficient equivalence",
    "optimality evidence",
    "X-shaped optimality",
    "4x4 class I",
    "4x4 class II and tau",
    "3x3 pair",
    "mirror-family classification",
    "property suites",
];

fn check(label: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        label: label.into(),
        passed,
        skipped: false,
        detail: detail.into(),
    }
}

fn skipped(label: impl Into<String>) -> Check {
    Check {
        label: label.into(),
        passed: true,
        skipped: true,
        detail: "skipped in quick mode".into(),
    }
}

/// Worst absolute error over a list of (got, want) pairs.
fn worst(pairs: impl IntoIterator<Item = (f64, f64)>) -> f64 {
    pairs
        .into_iter()
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

fn pow2(n: usize) -> f64 {
    (1u64 << n) as f64
}

pub fn run_criterion(id: u8, cfg: &AcceptanceConfig) -> Result<CriterionOutcome> {
    let checks = match id {
        1 => c1()?,
        2 => c2()?,
        3 => c3(cfg)?,
        4 => c4()?,
        5 => c5()?,
        6 => c6(cfg)?,
        7 => c7()?,
        8 => c8()?,
        9 => c9()?,
        10 => c10(cfg)?,
        11 => c11(cfg)?,
        12 => c12(cfg)?,
        _ => {
            return Err(crate::Error::Parse(format!("no criterion {id}")));
        }
    };
    let passed = checks.iter().all(|c| c.passed || c.skipped);
    Ok(CriterionOutcome {
        id,
        name: NAMES[id as usize - 1].to_string(),
        passed,
        checks,
    })
}

pub fn run_all(cfg: &AcceptanceConfig) -> Result<Vec<CriterionOutcome>> {
    (1..=12).map(|id| run_criterion(id, cfg)).collect()
}

fn c1() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let e1 = bell_pair_witness(BellExample::Example1)?;
    let sum = &e1.w.op + &e1.m;
    let err = sum.max_abs_diff(&Operator::identity(Dims::qubits(2)).scale(0.5));
    out.push(check("two-qubit W + M = I/2", err <= 1e-12, format!("max error {err:.2e}")));

    let mut err = 0.0f64;
    for n in 2..=6 {
        let p = alternative_ghz_witness(n)?;
        let id = Operator::identity(Dims::qubits(n)).scale(2.0 / pow2(n));
        err = err.max((&p.w.op + &p.m).max_abs_diff(&id));
    }
    out.push(check("W_a + M_a = 2^{1-n} I, n = 2..6", err <= 1e-12, format!("max error {err:.2e}")));

    let mut kinds = Vec::new();
    for n in 2..=6 {
        kinds.push(GraphKind::LinearCluster(n));
        kinds.push(GraphKind::GhzStar(n));
    }
    kinds.extend([GraphKind::Grid(2, 2), GraphKind::Grid(2, 3)]);
    let mut err = 0.0f64;
    for k in &kinds {
        let g = Graph::named(*k)?;
        let p = graph_witness(&g)?;
        let id = Operator::identity(Dims::qubits(g.n())).scale(2.0 * (g.n() as f64 - 1.0));
        err = err.max((&p.w.op + &p.m).max_abs_diff(&id));
    }
    out.push(check(
        "graph W + M = 2(n-1) I (paths, stars, grids, n <= 6)",
        err <= 1e-12,
        format!("{} graphs, max error {err:.2e}", kinds.len()),
    ));

    let mut err = 0.0f64;
    for i in bit_triples() {
        let p = w3q_pair(i)?;
        err = err.max((&p.w.op + &p.m).max_abs_diff(&Operator::identity(Dims::qubits(3)).scale(2.0)));
    }
    out.push(check("W[i] + M[i] = 2I for all 8 triples", err <= 1e-12, format!("max error {err:.2e}")));

    let p = pair33()?;
    let err = (&p.pair.w.op + &p.pair.m).max_abs_diff(&Operator::identity(Dims::uniform(3, 2)).scale(4.0));
    out.push(check("3x3 pair W + M = 4I", err <= 1e-12, format!("max error {err:.2e}")));

    let mut err = 0.0f64;
    for n in 3..=6 {
        err = err.max(two_measurement_ghz(n)?.identity_residual());
    }
    out.push(check(
        "mu_2m I - W_2m proportional to M_2m, n = 3..6",
        err <= 1e-12,
        format!("max error {err:.2e}"),
    ));
    Ok(out)
}

fn c2() -> Result<Vec<Check>> {
    let mut ec = 0.0f64;
    let mut ea = 0.0f64;
    let mut e2 = 0.0f64;
    let mut em = 0.0f64;
    for n in 2..=6 {
        let ghz = ghz_state(n)?.op;
        let d = pow2(n) - 2.0;
        ec = ec.max((canonical_ghz_pair(n)?.w.op.expect(&ghz) + 1.0 / d).abs());
        let a = alternative_ghz_witness(n)?;
        let va = -1.0 / ((n as f64 - 1.0) * pow2(n));
        ea = ea.max((a.w.op.expect(&ghz) - va).abs());
        em = em.max((a.m.expect(&ghz_a_state(n)?.op) - va).abs());
        e2 = e2.max((two_measurement_ghz(n)?.w.op.expect(&ghz) + 1.0 / (2.0 * d)).abs());
    }
    Ok(vec![
        check("Tr[W_c GHZ] = -1/(2^n - 2), n = 2..6", ec <= 1e-12, format!("max error {ec:.2e}")),
        check("Tr[W_a GHZ] = -1/((n-1) 2^n), n = 2..6", ea <= 1e-12, format!("max error {ea:.2e}")),
        check("Tr[W_2m GHZ] = -1/(2(2^n - 2)), n = 2..6", e2 <= 1e-12, format!("max error {e2:.2e}")),
        check("M_a detects the alternating GHZ state with the same value", em <= 1e-12, format!("max error {em:.2e}")),
    ])
}

/// (μ_c, μ_2m, μ_a) for the normalized GHZ witnesses, by optimization.
pub fn ghz_windows_by_optimization(n: usize, cfg: &SeesawConfig) -> Result<[f64; 3]> {
    Ok([
        compute_mu(&canonical_ghz_pair(n)?.w, cfg)?,
        compute_mu(&two_measurement_ghz(n)?.w, cfg)?,
        compute_mu(&alternative_ghz_witness(n)?.w, cfg)?,
    ])
}

/// Closed-form (μ_c, μ_2m, μ_a).
pub fn ghz_windows_closed(n: usize) -> [f64; 3] {
    let d = pow2(n) - 2.0;
    [1.0 / d, 1.5 / d, 2.0 / pow2(n)]
}

fn c3(cfg: &AcceptanceConfig) -> Result<Vec<Check>> {
    if cfg.quick {
        return Ok(vec![skipped("compute_mu for n = 3, 4, 5")]);
    }
    let sc = cfg.seesaw();
    let mut out = Vec::new();
    for n in 3..=5 {
        let got = ghz_windows_by_optimization(n, &sc)?;
        let want = ghz_windows_closed(n);
        let err = worst(got.iter().copied().zip(want));
        out.push(check(
            format!("windows at n = {n}"),
            err <= 1e-6,
            format!("mu_c, mu_2m, mu_a = {got:?}, expected {want:?}, max error {err:.2e}"),
        ));
        let ok = got[0] <= got[1] + 1e-6 && got[1] <= got[2] + 1e-6;
        out.push(check(format!("hierarchy at n = {n}"), ok, format!("{got:?}")));
    }
    Ok(out)
}

const GRID: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 4.0];

fn c4() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let mut all_ppt = true;
    for b in GRID {
        all_ppt &= is_ppt_all(&rho_bc(b, 1.0 / b)?.op)?;
    }
    out.push(check("rho(b,c) PPT on every bipartition for bc = 1", all_ppt, "5 points"));

    let w110 = w3q([1, 1, 0])?.op;
    let m110 = m3q([1, 1, 0])?.op;
    let y = y_all(3);
    let mut err = 0.0f64;
    let mut err_direct = 0.0f64;
    let mut err_mirror = 0.0f64;
    for b in GRID {
        for cc in GRID {
            let rho = bc_operator(b, cc)?;
            let v = w110.expect(&rho);
            err = err.max((v - 2.0 * (cc - 3.0) / (b + cc + 6.0)).abs());
            err_direct = err_direct.max((v - (2.0 * cc + 14.0) / (b + cc + 6.0)).abs());
            err_mirror = err_mirror.max((m110.expect(&rho.conjugate_by(&y)) - v).abs());
        }
    }
    out.push(check(
        "Tr[W[1,1,0] rho(b,c)] = 2(c-3)/(b+c+6) on a 5x5 grid",
        err <= 1e-12,
        format!("max error {err:.3e}; the direct trace equals (2c+14)/(b+c+6) to {err_direct:.1e}"),
    ));

    let w010 = w3q([0, 1, 0])?.op;
    let w011 = w3q([0, 1, 1])?.op;
    let xs = [0.5, 1.0, 2.0];
    let mut err = 0.0f64;
    let mut err_direct = 0.0f64;
    let mut err_011 = 0.0f64;
    for x in xs {
        for yv in xs {
            for z in xs {
                let rho = rho_xyz(x, yv, z)?.op;
                let nu = 2.0 + x + 1.0 / x + yv + 1.0 / yv + z + 1.0 / z;
                let stated = 2.0 * (x + yv + 1.0 / z - 3.0) / nu;
                let v = w010.expect(&rho);
                err = err.max((v - stated).abs());
                err_direct = err_direct.max((v - 2.0 * (1.0 + x + yv + 1.0 / z) / nu).abs());
                err_011 = err_011.max((w011.expect(&rho) - stated).abs());
            }
        }
    }
    out.push(check(
        "Tr[W[0,1,0] rho(x,y,z)] = 2(x+y+1/z-3)/nu on a 3^3 grid",
        err <= 1e-12,
        format!(
            "max error {err:.3e}; the direct trace is 2(1+x+y+1/z)/nu (error {err_direct:.1e}) and the stated value belongs to W[0,1,1] (error {err_011:.1e})"
        ),
    ));
    out.push(check(
        "Tr[M[1,1,0] Y rho Y] equals the W[1,1,0] value",
        err_mirror <= 1e-12,
        format!("max error {err_mirror:.2e}"),
    ));
    Ok(out)
}

fn c5() -> Result<Vec<Check>> {
    let mut err = 0.0f64;
    let mut err_general = 0.0f64;
    let mut err_stated = 0.0f64;
    for i in bit_triples() {
        let w = w3q(i)?.op;
        for b in GRID {
            for cc in GRID {
                let rho = bc_operator(b, cc)?;
                let direct = w.expect(&rho);
                let r = rijk_direct(&rho)?;
                err = err.max((expectation_via_coeffs(i, &r) - direct).abs());
                err_general = err_general.max((bc_expectation(i, b, cc) - direct).abs());
                err_stated = err_stated.max((bc_expectation_flipped(i, b, cc) - direct).abs());
            }
        }
    }
    Ok(vec![
        check(
            "coefficient expansion matches direct traces (8 witnesses x 25 points)",
            err <= 1e-12,
            format!("max error {err:.2e}"),
        ),
        check(
            "general formula (2c+6+4(...))/(b+c+6) reproduced",
            err_stated <= 1e-12,
            format!(
                "stated sign pattern: max error {err_stated:.3e}; corrected pattern (-1)^i1 - (-1)^i2 + (-1)^i3 + (-1)^(i1+i2+i3): max error {err_general:.1e}"
            ),
        ),
    ])
}

/// Apply a single-qubit operator to every factor of a product state.
fn transport(s: &ProductState, locals: &[CMat]) -> Result<ProductState> {
    let v = s
        .locals()
        .iter()
        .zip(locals)
        .map(|(l, u)| u * l)
        .collect();
    ProductState::new(s.dims().clone(), v)
}

fn basis_candidates(dims: &Dims) -> Result<Vec<ProductState>> {
    (0..dims.total())
        .map(|k| ProductState::basis(dims.clone(), &dims.digits(k)))
        .collect()
}

fn c6(cfg: &AcceptanceConfig) -> Result<Vec<Check>> {
    if cfg.quick {
        return Ok(vec![skipped("zero-set searches")]);
    }
    let zs = ZeroSearch {
        seed: cfg.seed,
        ..ZeroSearch::default()
    };
    let mut out = Vec::new();
    let w000 = w3q([0, 0, 0])?.op;
    let zeros = zero_set_search(&w000, 8, &zs, &basis_candidates(w000.dims())?)?;
    let span = spanning_dimension(&zeros);
    out.push(check(
        "W[0,0,0] zero set: >= 8 states spanning 8 dimensions",
        zeros.len() >= 8 && span == 8,
        format!("{} states, spanning dimension {span}", zeros.len()),
    ));

    let mut transports: Vec<([u8; 3], String)> = vec![([0, 0, 0], "III".into())];
    transports.extend(local_pauli_equivalences().into_iter().map(|(i, p)| (i, p.to_string())));
    let mut worst_val = 0.0f64;
    let mut min_span = usize::MAX;
    for (i, label) in transports {
        let p = PauliString::parse(&label)?;
        let y = crate::linops::Pauli::Y.matrix();
        let locals: Vec<CMat> = p.ops().iter().map(|q| &y * q.matrix()).collect();
        let m = m3q(i)?.op;
        let moved: Vec<ProductState> = zeros.iter().map(|s| transport(s, &locals)).collect::<Result<_>>()?;
        for s in &moved {
            worst_val = worst_val.max(s.expectation(&m).abs());
        }
        min_span = min_span.min(spanning_dimension(&moved));
    }
    out.push(check(
        "transported zero sets of all M[i]",
        worst_val <= 1e-8 && min_span == 8,
        format!("max |<M>| {worst_val:.2e}, minimum spanning dimension {min_span}"),
    ));

    let p = pair33()?;
    for (name, op) in [("W", &p.pair.w.op), ("M", &p.pair.m)] {
        let z = zero_set_search(op, 9, &zs, &basis_candidates(op.dims())?)?;
        let span = spanning_dimension(&z);
        out.push(check(
            format!("3x3 pair {name} zero set spans 9 dimensions"),
            span == 9,
            format!("{} states, spanning dimension {span}", z.len()),
        ));
    }
    Ok(out)
}

fn c7() -> Result<Vec<Check>> {
    let x = w_opt_x(2.0, 3.0, 0.5, PI / 4.0)?;
    let r = xshaped_optimality_check(&x, None)?;
    let w = w_opt(2.0, 3.0, 0.5, PI / 4.0)?;
    let m = &Operator::identity(w.dims().clone()).scale(3.0) - &w.op;
    let lam = m.min_eigenvalue();
    Ok(vec![
        check(
            "W_opt satisfies the corner condition",
            r.corner_condition,
            format!("slot {:?}, r = {:?}", r.slot, r.r),
        ),
        check("3I - W_opt is positive semidefinite", lam >= -1e-10, format!("lambda_min = {lam:.3e}")),
    ])
}

fn c8() -> Result<Vec<Check>> {
    let m = m1110_pair()?.m;
    let value = |x: f64| -> Result<f64> { Ok(m.expect(&rho_x_unnormalized(x)?)) };
    let formula = |x: f64| 4.0 / (3.0 * x) * (x * x - 5.0 * x + 4.0);
    let roots = [value(1.0)?, value(4.0)?];
    let neg = [value(1.5)?, value(2.0)?, value(3.0)?];
    let mut err = 0.0f64;
    for x in [0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0] {
        err = err.max((value(x)? - formula(x)).abs());
    }
    let mut ppt = true;
    for x in [0.5, 1.0, 2.0, 3.0, 4.0, 5.0] {
        ppt &= is_ppt_all(&rho_x(x)?.op)?;
    }
    Ok(vec![
        check(
            "Tr[M rho_x] vanishes at x = 1 and x = 4",
            roots.iter().all(|v| v.abs() <= 1e-9),
            format!("values {roots:?}; unnormalized trace matches (4/3x)(x^2-5x+4) to {err:.1e}"),
        ),
        check("Tr[M rho_x] < 0 at x = 1.5, 2, 3", neg.iter().all(|&v| v < 0.0), format!("values {neg:?}")),
        check("rho_x PPT at x = 0.5, 1, 2, 3, 4, 5", ppt, ""),
    ])
}

fn c9() -> Result<Vec<Check>> {
    let (j, k) = (1, 1);
    let tau = tau_state(4, j, k)?;
    let lam = tau.op.partial_transpose(&[1])?.min_eigenvalue();
    let mut out = vec![check("tau is NPT", lam < -1e-10, format!("lambda_min(tau^T_B) = {lam:.4}"))];
    let u = weyl_local(4, j, k).with_dims(Dims::uniform(4, 2))?;
    let mut err = 0.0f64;
    let mut sum_neg = true;
    let mut scan_ok = true;
    for theta in [PI / 6.0, PI / 4.0, PI / 2.0] {
        let w = wabcd_class(WitnessClass::II, theta)?;
        let m = w.op.conjugate_by(&u);
        let ew = (theta.cos() - theta.sin() - 3.0) / 4.0;
        let em = (theta.cos() + theta.sin() - 3.0) / 4.0;
        let vw = w.op.expect(&tau.op);
        let vm = m.expect(&tau.op);
        err = err.max((vw - ew).abs()).max((vm - em).abs());
        sum_neg &= vw + vm < 0.0;
        scan_ok &= tau_index_scan(&w, ew, em, 1e-10)?.contains(&(j, k));
    }
    out.push(check(
        "Tr[W tau] and Tr[M tau] at theta = pi/6, pi/4, pi/2",
        err <= 1e-10 && scan_ok,
        format!("(j,k) = ({j},{k}), max error {err:.2e}"),
    ));
    out.push(check("Tr[(W + M) tau] < 0", sum_neg, ""));
    Ok(out)
}

fn c10(cfg: &AcceptanceConfig) -> Result<Vec<Check>> {
    let p = pair33()?;
    let vw = p.pair.w.op.expect(&p.rho_w.op);
    let vm = p.pair.m.expect(&p.rho_m.op);
    let ppt = is_ppt_all(&p.rho_w.op)? && is_ppt_all(&p.rho_m.op)?;
    let lu = lu_equivalent_by(&p.pair.w.op, &p.pair.m, &[p.u.clone(), p.u.conj()])?;
    let mut out = vec![
        check(
            "Tr[W rho_W] = Tr[M rho_M] = -2/5",
            (vw + 0.4).abs() <= 1e-12 && (vm + 0.4).abs() <= 1e-12,
            format!("{vw}, {vm}"),
        ),
        check("rho_W and rho_M are PPT", ppt, ""),
        check("(U x U*) W (U x U*)^dagger = M", lu, ""),
    ];
    if cfg.quick {
        out.push(skipped("block-positivity and decomposability certificates"));
        return Ok(out);
    }
    let sc = cfg.seesaw();
    let dc = DecompConfig {
        seed: cfg.seed,
        ..DecompConfig::default()
    };
    for (name, op) in [("W", &p.pair.w.op), ("M", &p.pair.m)] {
        let bp = block_positive(op, 1e-7, &sc)?;
        out.push(check(format!("{name} block-positive"), bp.holds, format!("separable minimum {:.3e}", bp.lower)));
        let cert = decomposability_certificate(op, &[], &dc)?;
        out.push(check(
            format!("{name} nondecomposable"),
            cert.tier == DecompTier::Nondecomposable,
            format!("{} ({:?})", cert.reason, cert.detecting_state),
        ));
    }
    Ok(out)
}

fn c11(cfg: &AcceptanceConfig) -> Result<Vec<Check>> {
    if cfg.quick {
        return Ok(vec![skipped("family classification sweeps")]);
    }
    let sc = cfg.seesaw();
    let dc = DecompConfig {
        seed: cfg.seed,
        ..DecompConfig::default()
    };
    let phis: Vec<f64> = [1.0, 2.0, 3.0, 4.0, 5.0].iter().map(|k| k * PI / 3.0).collect();
    let rows = classify_mirror_family(MirrorFamily::ChoiPhi, &phis, &sc, &dc)?;
    let ok = rows.iter().all(|r| {
        if r.a <= 1.0 / 3.0 + 1e-12 {
            r.tier == FamilyTier::Positive
        } else {
            r.tier == FamilyTier::DecomposableEw
        }
    });
    let summary: Vec<String> = rows.iter().map(|r| format!("a={:.4}:{:?}", r.a, r.tier)).collect();
    let rows2 = classify_mirror_family(MirrorFamily::Class2, &[3.0 * PI / 4.0, PI / 4.0], &sc, &dc)?;
    let ok2 = rows2[0].tier == FamilyTier::Positive && rows2[1].tier == FamilyTier::DecomposableEw;
    Ok(vec![
        check("choi_phi sweep labels", ok, summary.join(", ")),
        check(
            "class II: positive at 3pi/4, decomposable at pi/4",
            ok2,
            format!("{:?}, {:?}", rows2[0].tier, rows2[1].tier),
        ),
    ])
}

/// Extremes of a two-qubit observable over product states by Bloch-grid search and pattern-search polish.
pub fn grid_oracle(h: &Operator) -> (f64, f64) {
    let f = |x: &[f64; 4]| -> f64 {
        let v = bloch_vector(x[0], x[1]).kronecker(&bloch_vector(x[2], x[3]));
        h.expect_vec(&v)
    };
    let nt = 13;
    let np = 24;
    let mut pts: Vec<([f64; 4], f64)> = Vec::with_capacity((nt * np) * (nt * np));
    let ang = |i: usize, j: usize| [PI * i as f64 / (nt - 1) as f64, 2.0 * PI * j as f64 / np as f64];
    for i1 in 0..nt {
        for j1 in 0..np {
            for i2 in 0..nt {
                for j2 in 0..np {
                    let a = ang(i1, j1);
                    let b = ang(i2, j2);
                    let x = [a[0], a[1], b[0], b[1]];
                    pts.push((x, f(&x)));
                }
            }
        }
    }
    let polish = |sign: f64| -> f64 {
        let mut cand = pts.clone();
        cand.sort_by(|a, b| (sign * b.1).total_cmp(&(sign * a.1)));
        let mut best = f64::NEG_INFINITY;
        for (x0, v0) in cand.into_iter().take(8) {
            let mut x = x0;
            let mut v = sign * v0;
            let mut step = PI / (nt - 1) as f64;
            while step > 1e-9 {
                let mut moved = false;
                for d in 0..4 {
                    for s in [step, -step] {
                        let mut y = x;
                        y[d] += s;
                        let fy = sign * f(&y);
                        if fy > v {
                            x = y;
                            v = fy;
                            moved = true;
                        }
                    }
                }
                if !moved {
                    step *= 0.5;
                }
            }
            best = best.max(v);
        }
        sign * best
    };
    (polish(-1.0), polish(1.0))
}

fn c12(cfg: &AcceptanceConfig) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let samples = if cfg.quick { 1000 } else { 10_000 };
    let mut pairs: Vec<MirrorPair> = vec![
        bell_pair_witness(BellExample::Example1)?,
        bell_pair_witness(BellExample::Example2)?,
        canonical_ghz_pair(3)?,
        alternative_ghz_witness(3)?,
        two_measurement_ghz(3)?,
        graph_witness(&Graph::named(GraphKind::LinearCluster(4))?)?,
        pair33()?.pair,
    ];
    for i in bit_triples() {
        pairs.push(w3q_pair(i)?);
    }
    let mut violations = 0;
    for (pi, p) in pairs.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(pi as u64);
        let m = p.m.scale(p.rescale);
        for _ in 0..samples {
            let rho = random_density(p.w.dims(), &mut rng);
            if p.w.op.expect(&rho) < 0.0 && m.expect(&rho) < 0.0 {
                violations += 1;
            }
        }
    }
    out.push(check(
        "no state detected by both W and M",
        violations == 0,
        format!("{} pairs x {samples} random states, {violations} violations", pairs.len()),
    ));

    if cfg.quick {
        out.push(skipped("seesaw monotonicity"));
        out.push(skipped("two-qubit grid oracle"));
    } else {
        let sc = cfg.seesaw();
        let mut monotone = true;
        let mut count = 0;
        let ops = [
            w3q([0, 0, 0])?.op,
            canonical_ghz_pair(3)?.w.op,
            pair33()?.pair.w.op,
            wabcd_class(WitnessClass::I, 0.3)?.op,
        ];
        for op in &ops {
            for sense in [Sense::Min, Sense::Max] {
                let r = seesaw(op, sense, &sc)?;
                monotone &= r.monotone;
                count += r.runs;
            }
        }
        out.push(check("seesaw monotone on every run", monotone, format!("{count} runs")));

        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut err = 0.0f64;
        for _ in 0..20 {
            let h = random_hermitian(&Dims::qubits(2), &mut rng);
            let (lo, hi) = grid_oracle(&h);
            let slo = seesaw(&h, Sense::Min, &sc)?.value;
            let shi = seesaw(&h, Sense::Max, &sc)?.value;
            err = err.max((lo - slo).abs()).max((hi - shi).abs());
        }
        out.push(check("grid oracle agrees with seesaw on 20 observables", err <= 1e-5, format!("max difference {err:.2e}")));
    }

    let mut werr = 0.0f64;
    let mut berr = 0.0f64;
    for n in 2..=4 {
        let om = |e: usize| {
            let a = 2.0 * PI * (e % n) as f64 / n as f64;
            c(a.cos(), a.sin())
        };
        for m1 in 0..n {
            for k1 in 0..n {
                for m2 in 0..n {
                    for k2 in 0..n {
                        let lhs = weyl(n, m1, k1).matmul(&weyl(n, m2, k2));
                        let rhs = weyl(n, (m1 + m2) % n, (k1 + k2) % n);
                        let rhs = Operator::from_matrix(rhs.data() * om(m1 * k2))?;
                        werr = werr.max(lhs.max_abs_diff(&rhs));
                    }
                }
            }
        }
        let bells: Vec<_> = (0..n * n)
            .map(|x| crate::linops::generalized_bell(n, x / n, x % n))
            .collect();
        for (a, va) in bells.iter().enumerate() {
            for (b, vb) in bells.iter().enumerate() {
                let want = if a == b { cr(1.0) } else { cr(0.0) };
                berr = berr.max((va.dotc(vb) - want).norm());
            }
        }
        let total = (0..n * n).fold(Operator::zeros(Dims::uniform(n, 2)), |acc, x| {
            &acc + &bell_projector(n, x / n, x % n)
        });
        berr = berr.max(total.max_abs_diff(&Operator::identity(Dims::uniform(n, 2))));
    }
    out.push(check(
        "Weyl composition U_mk U_m'k' = w^(mk') U_(m+m')(k+k'), n = 2..4",
        werr <= 1e-12,
        format!("max error {werr:.2e}"),
    ));
    out.push(check("generalized Bell basis orthonormal and complete, n = 2..4", berr <= 1e-12, format!("max error {berr:.2e}")));
    Ok(out)
}
