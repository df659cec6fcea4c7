use std::f64::consts::PI;

use super::dims::Dims;
use super::operator::{c, cr, CMat, CVec, Operator};

/// U_{mk}|l> = ω^{ml}|l+k>, ω = exp(2πi/n).
pub fn weyl(n: usize, m: usize, k: usize) -> Operator {
    let mut u = CMat::zeros(n, n);
    for l in 0..n {
        let ang = 2.0 * PI * ((m * l) % n) as f64 / n as f64;
        u[((l + k) % n, l)] = c(ang.cos(), ang.sin());
    }
    Operator::from_matrix(u).expect("square")
}

/// (I ⊗ U_{kl})|ψ00>, |ψ00> = n^{-1/2} Σ|jj>.
pub fn generalized_bell(n: usize, k: usize, l: usize) -> CVec {
    let u = weyl(n, k, l);
    let s = 1.0 / (n as f64).sqrt();
    let mut out = CVec::zeros(n * n);
    for j in 0..n {
        for a in 0..n {
            out[j * n + a] += u.entry(a, j) * cr(s);
        }
    }
    out
}

pub fn bell_projector(n: usize, k: usize, l: usize) -> Operator {
    Operator::projector(&generalized_bell(n, k, l), Dims::uniform(n, 2)).expect("n*n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_action() {
        let u = weyl(2, 0, 1);
        assert_eq!(u.entry(1, 0), cr(1.0));
        assert_eq!(u.entry(0, 0), cr(0.0));
        assert_eq!(weyl(4, 0, 0), Operator::identity(Dims::new(vec![4]).unwrap()));
    }

    #[test]
    fn trace_orthogonality_in_three_dimensions() {
        let a = weyl(3, 1, 2);
        let b = weyl(3, 0, 1);
        assert!((a.matmul(&a.adjoint()).trace() - cr(3.0)).norm() < 1e-12);
        assert!(a.matmul(&b.adjoint()).trace().norm() < 1e-12);
    }

    #[test]
    fn bell_states_small_cases() {
        let s = 0.5f64.sqrt();
        let phi = generalized_bell(2, 0, 0);
        let want = [s, 0.0, 0.0, s];
        for (z, w) in phi.iter().zip(want) {
            assert!((z - cr(w)).norm() < 1e-15);
        }
        let a = generalized_bell(3, 0, 1);
        let b = generalized_bell(3, 1, 0);
        assert!(a.dotc(&b).norm() < 1e-15);
        let p00 = bell_projector(4, 0, 0);
        let p11 = bell_projector(4, 1, 1);
        assert!(p00.matmul(&p11).max_abs() < 1e-15);
        assert!((p00.trace_re() - 1.0).abs() < 1e-15);
    }
}
