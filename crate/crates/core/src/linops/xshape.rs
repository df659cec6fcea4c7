use serde::{Deserialize, Serialize};

use super::dims::Dims;
use super::operator::{cr, CMat, Operator, C64};
use crate::error::{Error, Result};

/// Operator supported on the diagonal and anti-diagonal.
///
/// With N = 2L: `s[j]` sits at (j, j), `t[j]` at (N-1-j, N-1-j) and `u[j]` at
/// (j, N-1-j), with its conjugate mirrored below the diagonal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XShapedOperator {
    pub s: Vec<f64>,
    pub t: Vec<f64>,
    pub u: Vec<C64>,
}

impl XShapedOperator {
    pub fn new(s: Vec<f64>, t: Vec<f64>, u: Vec<C64>) -> Result<Self> {
        let l = s.len();
        if t.len() != l || u.len() != l {
            return Err(Error::Dims(format!(
                "X-shape lengths differ: s={}, t={}, u={}",
                l,
                t.len(),
                u.len()
            )));
        }
        if l == 0 || !l.is_power_of_two() {
            return Err(Error::Dims(format!("half length {l} is not a power of two")));
        }
        Ok(XShapedOperator { s, t, u })
    }

    pub fn half_len(&self) -> usize {
        self.s.len()
    }

    pub fn num_qubits(&self) -> usize {
        (2 * self.s.len()).trailing_zeros() as usize
    }

    pub fn expand(&self) -> Operator {
        let l = self.s.len();
        let n = 2 * l;
        let mut m = CMat::zeros(n, n);
        for j in 0..l {
            m[(j, j)] = cr(self.s[j]);
            m[(n - 1 - j, n - 1 - j)] = cr(self.t[j]);
            m[(j, n - 1 - j)] = self.u[j];
            m[(n - 1 - j, j)] = self.u[j].conj();
        }
        Operator::new(m, Dims::qubits(self.num_qubits())).expect("power of two")
    }

    /// Reads an operator back; `None` when entries off the X are nonzero.
    pub fn from_operator(op: &Operator, tol: f64) -> Option<Self> {
        let n = op.dim();
        if n < 2 || !n.is_power_of_two() {
            return None;
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && i + j != n - 1 && op.entry(i, j).norm() > tol {
                    return None;
                }
            }
        }
        let l = n / 2;
        Some(XShapedOperator {
            s: (0..l).map(|j| op.entry(j, j).re).collect(),
            t: (0..l).map(|j| op.entry(n - 1 - j, n - 1 - j).re).collect(),
            u: (0..l).map(|j| op.entry(j, n - 1 - j)).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linops::operator::c;

    #[test]
    fn one_qubit_case() {
        let x = XShapedOperator::new(vec![1.5], vec![-0.5], vec![c(0.2, 0.3)]).unwrap();
        let m = x.expand();
        assert_eq!(m.entry(0, 0), cr(1.5));
        assert_eq!(m.entry(1, 1), cr(-0.5));
        assert_eq!(m.entry(0, 1), c(0.2, 0.3));
        assert_eq!(m.entry(1, 0), c(0.2, -0.3));
    }

    #[test]
    fn ghz_diagonal_state_has_unit_trace() {
        let x = XShapedOperator::new(vec![1.0; 4], vec![1.0; 4], vec![cr(1.0); 4]).unwrap();
        let rho = x.expand().normalized();
        assert!((rho.trace_re() - 1.0).abs() < 1e-15);
        assert!(rho.is_psd());
    }

    #[test]
    fn mirrored_second_half() {
        let x = XShapedOperator::new(
            vec![0.0, 2.0, 2.0, 2.0],
            vec![0.0, 0.5, 0.5, 0.5],
            vec![cr(1.0), cr(0.0), cr(0.0), cr(0.0)],
        )
        .unwrap();
        let m = x.expand();
        let diag: Vec<f64> = (0..8).map(|i| m.entry(i, i).re).collect();
        assert_eq!(diag, vec![0.0, 2.0, 2.0, 2.0, 0.5, 0.5, 0.5, 0.0]);
        assert_eq!(m.entry(0, 7), cr(1.0));
        assert_eq!(m.entry(7, 0), cr(1.0));
        assert_eq!(XShapedOperator::from_operator(&m, 1e-12).unwrap(), x);
    }

    #[test]
    fn length_mismatch() {
        assert!(XShapedOperator::new(vec![1.0; 2], vec![1.0; 3], vec![cr(0.0); 2]).is_err());
        assert!(XShapedOperator::new(vec![1.0; 3], vec![1.0; 3], vec![cr(0.0); 3]).is_err());
    }
}
