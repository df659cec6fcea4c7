//! `verify-pair` cases: identity, classification, LU relations and trace values.

use ewitness::acceptance::Check;
use ewitness::analysis::{
    bc_expectation, bc_expectation_flipped, bc_operator, is_ppt_all, lu_equivalent_by,
    pauli_locals,
};
use ewitness::catalog::{self, BellExample, WitnessClass};
use ewitness::graphs::graph_projector;
use ewitness::linops::Operator;
use ewitness::mirror::{compute_mu, MirrorClass, MirrorPair};
use ewitness::sepopt::{block_positive, SeesawConfig};
use ewitness::{Dims, Error, Result};

use crate::resolve::{parse_graph, parse_real};

fn check(label: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        label: label.into(),
        passed,
        skipped: false,
        detail: detail.into(),
    }
}

fn close(label: &str, got: f64, want: f64, tol: f64) -> Check {
    check(
        label,
        (got - want).abs() <= tol,
        format!("got {got}, expected {want}"),
    )
}

fn identity(p: &MirrorPair) -> Check {
    let r = p.identity_residual();
    check(
        format!("mu I - W = c M (mu = {}, c = {})", p.mu, p.rescale),
        r <= 1e-12,
        format!("residual {r:.2e}"),
    )
}

fn mu_check(p: &MirrorPair, cfg: &SeesawConfig) -> Result<Check> {
    let mu = compute_mu(&p.w, cfg)?;
    Ok(close("separable maximum equals mu", mu, p.mu, 1e-6))
}

fn class_check(p: &mut MirrorPair, want: MirrorClass, cfg: &SeesawConfig) -> Result<Check> {
    let got = p.classify(cfg)?;
    Ok(check(
        format!("M classified as {want:?}"),
        got == want,
        format!("{got:?}, lambda_min(M) = {:.4}", p.m.min_eigenvalue()),
    ))
}

fn psd(v: &ewitness::linops::CVec, dims: Dims) -> Result<Operator> {
    Operator::projector(v, dims)
}

pub fn verify(case: &str, cfg: &SeesawConfig) -> Result<Vec<Check>> {
    let (kind, arg) = match case.split_once(':') {
        Some((k, a)) => (k, Some(a)),
        None => (case, None),
    };
    let need = || arg.ok_or_else(|| Error::Parse(format!("case {kind} needs an argument")));
    let mut out = Vec::new();
    match kind {
        "example1" => {
            let mut p = catalog::bell_pair_witness(BellExample::Example1)?;
            let phi = psd(&catalog::phi_plus(), Dims::qubits(2))?;
            let psi = psd(&catalog::psi_minus(), Dims::qubits(2))?;
            out.push(identity(&p));
            out.push(close("Tr[W phi+] = -1/4", p.w.op.expect(&phi), -0.25, 1e-12));
            out.push(close("Tr[M psi-] = -1/4", p.m.expect(&psi), -0.25, 1e-12));
            out.push(mu_check(&p, cfg)?);
            out.push(class_check(&mut p, MirrorClass::Witness, cfg)?);
        }
        "example2" => {
            let mut p = catalog::bell_pair_witness(BellExample::Example2)?;
            let phi = psd(&catalog::phi_plus(), Dims::qubits(2))?;
            out.push(identity(&p));
            out.push(close("Tr[W phi+] = -1/2", p.w.op.expect(&phi), -0.5, 1e-12));
            out.push(mu_check(&p, cfg)?);
            out.push(class_check(&mut p, MirrorClass::Positive, cfg)?);
        }
        "ghz-alt" => {
            let n: usize = need()?
                .parse()
                .map_err(|_| Error::Parse(format!("bad size in {case:?}")))?;
            let p = catalog::alternative_ghz_witness(n)?;
            let want = -1.0 / ((n as f64 - 1.0) * (1u64 << n) as f64);
            out.push(identity(&p));
            out.push(close("Tr[W_a GHZ] = -1/((n-1)2^n)", p.w.op.expect(&catalog::ghz_state(n)?.op), want, 1e-12));
            out.push(close(
                "Tr[M_a GHZ_alt] = -1/((n-1)2^n)",
                p.m.expect(&catalog::ghz_a_state(n)?.op),
                want,
                1e-12,
            ));
            out.push(mu_check(&p, cfg)?);
        }
        "graph" => {
            let g = parse_graph(need()?)?;
            let p = catalog::graph_witness(&g)?;
            let gens = g.generators();
            let state = graph_projector(&gens)?;
            out.push(identity(&p));
            out.push(close("Tr[W |G><G|] = -1", p.w.op.expect(&state), -1.0, 1e-12));
            let u = g.mirror_unitary();
            let lu = lu_equivalent_by(&p.w.op, &p.m, &pauli_locals(&u))?;
            out.push(check(format!("M = U W U^dagger with U = {u}"), lu, ""));
        }
        "w3q" => {
            let a = need()?;
            let i: [u8; 3] = a
                .chars()
                .map(|c| c.to_digit(2).map(|d| d as u8))
                .collect::<Option<Vec<u8>>>()
                .and_then(|v| v.try_into().ok())
                .ok_or_else(|| Error::Parse(format!("bad index triple {a:?}")))?;
            let p = catalog::w3q_pair(i)?;
            out.push(identity(&p));
            let ys = vec![Operator::from_matrix(ewitness::linops::Pauli::Y.matrix())?; 3];
            out.push(check("M[i] = Y^3 W[i] Y^3", lu_equivalent_by(&p.w.op, &p.m, &ys)?, ""));
            let (b, c) = (2.0, 0.5);
            let rho = bc_operator(b, c)?;
            let v = p.w.op.expect(&rho);
            let want = bc_expectation(i, b, c);
            out.push(check(
                "Tr[W[i] rho(2,1/2)] = (2c+6+4((-1)^i1-(-1)^i2+(-1)^i3+(-1)^(i1+i2+i3)))/(b+c+6)",
                (v - want).abs() <= 1e-12,
                format!(
                    "got {v}, detected: {}; stated sign pattern gives {}",
                    v < 0.0,
                    bc_expectation_flipped(i, b, c)
                ),
            ));
            let ym = p.m.expect(&rho.conjugate_by(&catalog::y_all(3)));
            out.push(close("Tr[M[i] Y rho Y] equals Tr[W[i] rho]", ym, v, 1e-12));
        }
        "pair33" => {
            let p = catalog::pair33()?;
            out.push(identity(&p.pair));
            out.push(close("Tr[W rho_W] = -2/5", p.pair.w.op.expect(&p.rho_w.op), -0.4, 1e-12));
            out.push(close("Tr[M rho_M] = -2/5", p.pair.m.expect(&p.rho_m.op), -0.4, 1e-12));
            out.push(check("rho_W PPT", is_ppt_all(&p.rho_w.op)?, ""));
            out.push(check("rho_M PPT", is_ppt_all(&p.rho_m.op)?, ""));
            out.push(check(
                "(U x U*) W (U x U*)^dagger = M",
                lu_equivalent_by(&p.pair.w.op, &p.pair.m, &[p.u.clone(), p.u.conj()])?,
                "",
            ));
            for (name, op) in [("W", &p.pair.w.op), ("M", &p.pair.m)] {
                let bp = block_positive(op, 1e-7, cfg)?;
                out.push(check(format!("{name} block-positive"), bp.holds, format!("minimum {:.3e}", bp.lower)));
            }
        }
        "class1" | "class2" => {
            let theta = parse_real(need()?)?;
            let class = if kind == "class1" { WitnessClass::I } else { WitnessClass::II };
            let w = catalog::wabcd_class(class, theta)?;
            let bp = block_positive(&w.op, 1e-7, cfg)?;
            out.push(check("W block-positive", bp.holds, format!("minimum {:.3e}", bp.lower)));
            let mu = compute_mu(&w, cfg)?;
            let mut pair = MirrorPair::canonical(w.clone(), mu);
            out.push(identity(&pair));
            let cls = pair.classify(cfg)?;
            out.push(check("mirror classified", true, format!("mu = {mu}, M is {cls:?}")));
            if class == WitnessClass::II {
                let tau = catalog::tau_state(4, 1, 1)?;
                let m = w.op.conjugate_by(&catalog::weyl_local(4, 1, 1).with_dims(w.dims().clone())?);
                out.push(close(
                    "Tr[W tau] = (cos t - sin t - 3)/4",
                    w.op.expect(&tau.op),
                    (theta.cos() - theta.sin() - 3.0) / 4.0,
                    1e-10,
                ));
                out.push(close(
                    "Tr[M tau] = (cos t + sin t - 3)/4",
                    m.expect(&tau.op),
                    (theta.cos() + theta.sin() - 3.0) / 4.0,
                    1e-10,
                ));
            } else if theta.abs() < 1e-12 {
                let m = catalog::m1110_pair()?.m;
                for x in [1.0, 4.0] {
                    let v = m.expect(&catalog::rho_x_unnormalized(x)?);
                    out.push(close(&format!("Tr[M1110 rho_x] = 0 at x = {x}"), v, 0.0, 1e-9));
                }
            }
        }
        _ => return Err(Error::Parse(format!("unknown case {case:?}"))),
    }
    Ok(out)
}
