use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered subsystem dimensions. The first subsystem is the most significant
/// digit of a composite basis index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Dims(Vec<usize>);

impl Dims {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Dims("no subsystems".into()));
        }
        if let Some(d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::Dims(format!("subsystem dimension {d} < 2")));
        }
        Ok(Dims(dims))
    }

    pub fn qubits(n: usize) -> Self {
        Dims(vec![2; n.max(1)])
    }

    pub fn uniform(d: usize, k: usize) -> Self {
        Dims(vec![d; k])
    }

    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn is_qubits(&self) -> bool {
        self.0.iter().all(|&d| d == 2)
    }

    pub fn concat(&self, other: &Dims) -> Dims {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Dims(v)
    }

    /// Place values of each subsystem digit, big-endian.
    pub fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.0.len()];
        for k in (0..self.0.len().saturating_sub(1)).rev() {
            s[k] = s[k + 1] * self.0[k + 1];
        }
        s
    }

    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.0.len()];
        for k in (0..self.0.len()).rev() {
            out[k] = index % self.0[k];
            index /= self.0[k];
        }
        out
    }

    pub fn index(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.0)
            .fold(0, |acc, (&x, &d)| acc * d + x)
    }
}

impl TryFrom<Vec<usize>> for Dims {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Dims::new(v)
    }
}

impl From<Dims> for Vec<usize> {
    fn from(d: Dims) -> Self {
        d.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digits_round_trip() {
        let d = Dims::new(vec![2, 3, 4]).unwrap();
        for i in 0..d.total() {
            assert_eq!(d.index(&d.digits(i)), i);
        }
        assert_eq!(d.digits(5), vec![0, 1, 1]);
        assert_eq!(d.strides(), vec![12, 4, 1]);
    }

    #[test]
    fn rejects_small_entries() {
        assert!(Dims::new(vec![2, 1]).is_err());
        assert!(Dims::new(vec![]).is_err());
    }
}
