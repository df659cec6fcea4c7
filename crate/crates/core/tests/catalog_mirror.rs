use std::f64::consts::PI;

use ewitness::analysis::{decomposability_certificate, is_ppt_all, DecompConfig, DecompTier};
use ewitness::catalog::{
    choi_phi, default_states, default_witnesses, m1110_pair, w3q_pair, wabcd_class, WitnessClass,
};
use ewitness::mirror::{classify_operator, compute_mu, mirror_of, window, MirrorClass};
use ewitness::sepopt::{block_positive, SeesawConfig};
use ewitness::Error;

#[test]
fn every_default_witness_is_block_positive_and_detects_something() {
    let cfg = SeesawConfig::default().with_restarts(32);
    let states = default_states().unwrap();
    for w in default_witnesses().unwrap() {
        let bp = block_positive(&w.op, 1e-7, &cfg.clone().with_model(w.model)).unwrap();
        assert!(bp.holds, "{} has separable minimum {}", w.family, bp.lower);
        assert!(w.op.min_eigenvalue() < -1e-9, "{} is positive semidefinite", w.family);
    }
    for s in &states {
        assert!((s.op.trace_re() - 1.0).abs() < 1e-12, "{}", s.family);
    }
}

#[test]
fn ppt_entangled_catalog_states() {
    let ppt: Vec<String> = default_states()
        .unwrap()
        .into_iter()
        .filter(|s| is_ppt_all(&s.op).unwrap())
        .map(|s| s.family)
        .collect();
    for name in ["x-shaped-bc", "rho-x", "pair33-rho-w", "pair33-rho-m"] {
        assert!(ppt.iter().any(|f| f == name), "{name} missing from {ppt:?}");
    }
    assert!(!ppt.iter().any(|f| f == "tau" || f == "ghz"));
}

#[test]
fn stated_mirror_of_class_one_witness_is_rejected() {
    let p = m1110_pair().unwrap();
    let cfg = SeesawConfig::default();
    match mirror_of(&p.w, 4.0 / 3.0, &cfg) {
        Err(Error::NotBlockPositive { value, state }) => {
            assert!((value + 1.0 / 6.0).abs() < 1e-8, "{value}");
            assert_eq!(state.len(), 2);
        }
        other => panic!("expected rejection, got {:?}", other.map(|p| p.mu)),
    }
    let mu = compute_mu(&p.w, &cfg).unwrap();
    assert!((mu - 1.5).abs() < 1e-8);
    assert!(mirror_of(&p.w, mu, &cfg).is_ok());
}

#[test]
fn three_qubit_mirrors_are_witnesses() {
    let cfg = SeesawConfig::default().with_restarts(16);
    for i in [[0, 0, 0], [1, 1, 0]] {
        let p = w3q_pair(i).unwrap();
        let class = classify_operator(&p.m, p.w.model, &cfg).unwrap();
        assert_eq!(class, MirrorClass::Witness);
        let win = window(&p.w, &cfg).unwrap();
        assert!((win.hi - 0.25).abs() < 1e-8, "{win:?}");
    }
}

#[test]
fn decomposability_tiers() {
    let dc = DecompConfig::default();
    let choi = choi_phi(PI / 3.0).unwrap();
    let cert = decomposability_certificate(&choi.op, &[], &dc).unwrap();
    assert_eq!(cert.tier, DecompTier::Nondecomposable);
    let w = wabcd_class(WitnessClass::II, PI / 4.0).unwrap();
    let mu = compute_mu(&w, &SeesawConfig::default()).unwrap();
    let m = &ewitness::Operator::identity(w.dims().clone()).scale(mu) - &w.op;
    let cert = decomposability_certificate(&m, &[], &dc).unwrap();
    assert_eq!(cert.tier, DecompTier::Decomposable);
    assert!(cert.iterations.unwrap() > 1);
    let tight = DecompConfig {
        ap_max_iter: 5,
        ..dc
    };
    let cert = decomposability_certificate(&m, &[], &tight).unwrap();
    assert_eq!(cert.tier, DecompTier::Undecided);
}
