use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::dims::Dims;
use crate::error::{Error, Result};

pub type C64 = nalgebra::Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// Tolerance for Hermiticity and positivity checks.
pub const HERM_TOL: f64 = 1e-10;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Dense complex square matrix carrying a subsystem signature.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    data: CMat,
    dims: Dims,
}

/// Eigenvalues in ascending order with matching eigenvector columns.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

impl Operator {
    pub fn new(data: CMat, dims: Dims) -> Result<Self> {
        if data.nrows() != data.ncols() {
            return Err(Error::Dims(format!(
                "matrix is {}x{}, not square",
                data.nrows(),
                data.ncols()
            )));
        }
        if data.nrows() != dims.total() {
            return Err(Error::DimMismatch {
                expected: dims.total(),
                found: data.nrows(),
            });
        }
        Ok(Operator { data, dims })
    }

    /// Single-subsystem operator of the matrix's own size.
    pub fn from_matrix(data: CMat) -> Result<Self> {
        let d = data.nrows();
        Operator::new(data, Dims::new(vec![d])?)
    }

    pub fn from_real_rows(rows: &[Vec<f64>], dims: Dims) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dims("ragged rows".into()));
        }
        Operator::new(CMat::from_fn(n, n, |i, j| cr(rows[i][j])), dims)
    }

    pub fn identity(dims: Dims) -> Self {
        let n = dims.total();
        Operator {
            data: CMat::identity(n, n),
            dims,
        }
    }

    pub fn zeros(dims: Dims) -> Self {
        let n = dims.total();
        Operator {
            data: CMat::zeros(n, n),
            dims,
        }
    }

    pub fn diagonal(values: &[f64], dims: Dims) -> Result<Self> {
        let n = values.len();
        let mut m = CMat::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = cr(v);
        }
        Operator::new(m, dims)
    }

    /// |v><v| for a (not necessarily normalized) vector.
    pub fn projector(v: &CVec, dims: Dims) -> Result<Self> {
        Operator::new(v * v.adjoint(), dims)
    }

    pub fn data(&self) -> &CMat {
        &self.data
    }

    pub fn into_data(self) -> CMat {
        self.data
    }

    pub fn dims(&self) -> &Dims {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn with_dims(&self, dims: Dims) -> Result<Self> {
        Operator::new(self.data.clone(), dims)
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.data[(i, j)]
    }

    pub fn trace(&self) -> C64 {
        self.data.trace()
    }

    pub fn trace_re(&self) -> f64 {
        self.data.trace().re
    }

    /// Tr[self * other] without forming the product.
    pub fn trace_with(&self, other: &Operator) -> C64 {
        let n = self.dim();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            for k in 0..n {
                acc += self.data[(i, k)] * other.data[(k, i)];
            }
        }
        acc
    }

    /// Real part of Tr[self * other]; the expectation value for Hermitian pairs.
    pub fn expect(&self, rho: &Operator) -> f64 {
        self.trace_with(rho).re
    }

    /// <v|self|v> (real part).
    pub fn expect_vec(&self, v: &CVec) -> f64 {
        (v.adjoint() * &self.data * v)[(0, 0)].re
    }

    pub fn scale(&self, s: f64) -> Operator {
        Operator {
            data: &self.data * cr(s),
            dims: self.dims.clone(),
        }
    }

    pub fn adjoint(&self) -> Operator {
        Operator {
            data: self.data.adjoint(),
            dims: self.dims.clone(),
        }
    }

    pub fn conj(&self) -> Operator {
        Operator {
            data: self.data.map(|z| z.conj()),
            dims: self.dims.clone(),
        }
    }

    pub fn transpose(&self) -> Operator {
        Operator {
            data: self.data.transpose(),
            dims: self.dims.clone(),
        }
    }

    pub fn matmul(&self, other: &Operator) -> Operator {
        Operator {
            data: &self.data * &other.data,
            dims: self.dims.clone(),
        }
    }

    /// U A U†.
    pub fn conjugate_by(&self, u: &Operator) -> Operator {
        Operator {
            data: &u.data * &self.data * u.data.adjoint(),
            dims: self.dims.clone(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.data[(i, j)] - self.data[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_error() <= HERM_TOL
    }

    pub fn ensure_hermitian(&self) -> Result<()> {
        let e = self.hermiticity_error();
        if e > HERM_TOL {
            Err(Error::NotHermitian(e))
        } else {
            Ok(())
        }
    }

    pub fn hermitian_part(&self) -> Operator {
        Operator {
            data: (&self.data + self.data.adjoint()) * cr(0.5),
            dims: self.dims.clone(),
        }
    }

    pub fn unitarity_error(&self) -> f64 {
        let n = self.dim();
        let p = self.data.adjoint() * &self.data;
        (p - CMat::identity(n, n))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn ensure_unitary(&self) -> Result<()> {
        let e = self.unitarity_error();
        if e > HERM_TOL {
            Err(Error::NotUnitary(e))
        } else {
            Ok(())
        }
    }

    /// Full eigendecomposition of the Hermitian part, ascending.
    pub fn spectrum(&self) -> Spectrum {
        hermitian_eigen(&self.hermitian_part().data)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let h = self.hermitian_part().data;
        let mut v: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        v.sort_by(|a, b| a.total_cmp(b));
        v
    }

    pub fn eig_extremes(&self) -> Result<(f64, f64)> {
        self.ensure_hermitian()?;
        let v = self.eigenvalues();
        Ok((v[0], v[v.len() - 1]))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn is_psd(&self) -> bool {
        self.min_eigenvalue() >= -HERM_TOL
    }

    /// Projection onto the positive semidefinite cone.
    pub fn psd_part(&self) -> Operator {
        let s = self.spectrum();
        let n = self.dim();
        let mut out = CMat::zeros(n, n);
        for (k, &l) in s.values.iter().enumerate() {
            if l > 0.0 {
                let col = s.vectors.column(k);
                out += col * col.adjoint() * cr(l);
            }
        }
        Operator {
            data: out,
            dims: self.dims.clone(),
        }
    }

    pub fn normalized(&self) -> Operator {
        let t = self.trace_re();
        self.scale(1.0 / t)
    }

    pub fn kron(&self, other: &Operator) -> Operator {
        Operator {
            data: self.data.kronecker(&other.data),
            dims: self.dims.concat(&other.dims),
        }
    }

    /// Transpose on the listed subsystems.
    pub fn partial_transpose(&self, subset: &[usize]) -> Result<Operator> {
        let k = self.dims.len();
        for &s in subset {
            if s >= k {
                return Err(Error::SubsystemRange { index: s, count: k });
            }
        }
        if subset.is_empty() {
            return Ok(self.clone());
        }
        let n = self.dim();
        let dims = self.dims.as_slice();
        let strides = self.dims.strides();
        let mut mask = vec![false; k];
        for &s in subset {
            mask[s] = true;
        }
        let mut out = CMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let (mut a, mut b) = (i, j);
                for p in 0..k {
                    if mask[p] {
                        let di = (i / strides[p]) % dims[p];
                        let dj = (j / strides[p]) % dims[p];
                        a = a - di * strides[p] + dj * strides[p];
                        b = b - dj * strides[p] + di * strides[p];
                    }
                }
                out[(a, b)] = self.data[(i, j)];
            }
        }
        Ok(Operator {
            data: out,
            dims: self.dims.clone(),
        })
    }

    /// Reorder subsystems: subsystem `perm[q]` of `self` becomes subsystem `q`.
    pub fn permute(&self, perm: &[usize]) -> Result<Operator> {
        let k = self.dims.len();
        let mut seen = vec![false; k];
        if perm.len() != k {
            return Err(Error::Dims("permutation length".into()));
        }
        for &p in perm {
            if p >= k || seen[p] {
                return Err(Error::Dims("invalid permutation".into()));
            }
            seen[p] = true;
        }
        let new_dims = Dims::new(perm.iter().map(|&p| self.dims.as_slice()[p]).collect())?;
        let map = permutation_map(&self.dims, perm);
        let n = self.dim();
        let mut out = CMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(map[i], map[j])] = self.data[(i, j)];
            }
        }
        Ok(Operator {
            data: out,
            dims: new_dims,
        })
    }
}

/// For each old composite index, the new index after `perm` (see `Operator::permute`).
pub fn permutation_map(dims: &Dims, perm: &[usize]) -> Vec<usize> {
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims.as_slice()[p]).collect();
    let nd = Dims::new(new_dims).expect("valid dims");
    (0..dims.total())
        .map(|i| {
            let d = dims.digits(i);
            let nd_digits: Vec<usize> = perm.iter().map(|&p| d[p]).collect();
            nd.index(&nd_digits)
        })
        .collect()
}

pub fn hermitian_eigen(h: &CMat) -> Spectrum {
    let eig = SymmetricEigen::new(h.clone());
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let n = h.nrows();
    let mut vectors = CMat::zeros(n, n);
    for (k, &i) in idx.iter().enumerate() {
        vectors.set_column(k, &eig.eigenvectors.column(i));
    }
    Spectrum {
        values: idx.iter().map(|&i| eig.eigenvalues[i]).collect(),
        vectors,
    }
}

/// Kronecker product of a sequence of operators.
pub fn tensor(factors: &[Operator]) -> Result<Operator> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::Dims("empty tensor product".into()))?;
    Ok(rest.iter().fold(first.clone(), |acc, f| acc.kron(f)))
}

pub fn kron_vecs(vs: &[CVec]) -> CVec {
    let mut out = CVec::from_element(1, cr(1.0));
    for v in vs {
        out = out.kronecker(v);
    }
    out
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        Operator {
            data: &self.data + &rhs.data,
            dims: self.dims.clone(),
        }
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        Operator {
            data: &self.data - &rhs.data,
            dims: self.dims.clone(),
        }
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.scale(-1.0)
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        self.matmul(rhs)
    }
}

#[derive(Serialize, Deserialize)]
struct OperatorJson {
    dims: Vec<usize>,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl Serialize for Operator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.dim();
        let re = (0..n)
            .map(|i| (0..n).map(|j| self.data[(i, j)].re).collect())
            .collect();
        let im = (0..n)
            .map(|i| (0..n).map(|j| self.data[(i, j)].im).collect())
            .collect();
        OperatorJson {
            dims: self.dims.as_slice().to_vec(),
            re,
            im,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Operator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = OperatorJson::deserialize(d)?;
        let n = j.re.len();
        if j.im.len() != n || j.re.iter().chain(j.im.iter()).any(|r| r.len() != n) {
            return Err(D::Error::custom("re/im must be square and of equal size"));
        }
        let dims = Dims::new(j.dims).map_err(D::Error::custom)?;
        let m = CMat::from_fn(n, n, |a, b| c(j.re[a][b], j.im[a][b]));
        Operator::new(m, dims).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pauli_x() -> Operator {
        Operator::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]], Dims::qubits(1)).unwrap()
    }

    fn pauli_z() -> Operator {
        Operator::diagonal(&[1.0, -1.0], Dims::qubits(1)).unwrap()
    }

    fn phi_plus() -> Operator {
        let s = 0.5f64.sqrt();
        let v = CVec::from_vec(vec![cr(s), cr(0.0), cr(0.0), cr(s)]);
        Operator::projector(&v, Dims::qubits(2)).unwrap()
    }

    #[test]
    fn tensor_identity_and_paulis() {
        let i2 = Operator::identity(Dims::qubits(1));
        let i4 = tensor(&[i2.clone(), i2]).unwrap();
        assert_eq!(i4, Operator::identity(Dims::qubits(2)));
        let xx = tensor(&[pauli_x(), pauli_x()]).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i + j == 3 { 1.0 } else { 0.0 };
                assert_eq!(xx.entry(i, j), cr(want));
            }
        }
        let zz = tensor(&[pauli_z(), pauli_z()]).unwrap();
        let diag: Vec<f64> = (0..4).map(|i| zz.entry(i, i).re).collect();
        assert_eq!(diag, vec![1.0, -1.0, -1.0, 1.0]);
        assert!(tensor(&[]).is_err());
    }

    #[test]
    fn big_endian_kron() {
        // Z on the first qubit flips the sign of the upper half.
        let zi = tensor(&[pauli_z(), Operator::identity(Dims::qubits(1))]).unwrap();
        let diag: Vec<f64> = (0..4).map(|i| zi.entry(i, i).re).collect();
        assert_eq!(diag, vec![1.0, 1.0, -1.0, -1.0]);
    }

    #[test]
    fn partial_transpose_of_bell_state() {
        let g = phi_plus().partial_transpose(&[1]).unwrap();
        let ev = g.eigenvalues();
        let want = [-0.5, 0.5, 0.5, 0.5];
        for (a, b) in ev.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(phi_plus().partial_transpose(&[]).unwrap(), phi_plus());
        assert!(phi_plus().partial_transpose(&[2]).is_err());
    }

    #[test]
    fn full_partial_transpose_is_transpose() {
        let m = CMat::from_fn(6, 6, |i, j| c(i as f64 + 0.5 * j as f64, (i * j) as f64 - 1.0));
        let op = Operator::new(m, Dims::new(vec![2, 3]).unwrap()).unwrap();
        let full = op.partial_transpose(&[0, 1]).unwrap();
        assert!(full.max_abs_diff(&op.transpose()) < 1e-15);
    }

    #[test]
    fn extremes_of_simple_operators() {
        assert_eq!(Operator::identity(Dims::qubits(2)).eig_extremes().unwrap(), (1.0, 1.0));
        let (lo, hi) = pauli_z().eig_extremes().unwrap();
        assert!((lo + 1.0).abs() < 1e-14 && (hi - 1.0).abs() < 1e-14);
        let bad = Operator::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]], Dims::qubits(1))
            .unwrap();
        assert!(bad.eig_extremes().is_err());
    }

    #[test]
    fn permute_swaps_subsystems() {
        let xz = tensor(&[pauli_x(), pauli_z()]).unwrap();
        let zx = tensor(&[pauli_z(), pauli_x()]).unwrap();
        assert!(xz.permute(&[1, 0]).unwrap().max_abs_diff(&zx) < 1e-15);
    }

    #[test]
    fn json_round_trip() {
        let op = phi_plus();
        let s = serde_json::to_string(&op).unwrap();
        let back: Operator = serde_json::from_str(&s).unwrap();
        assert!(back.max_abs_diff(&op) < 1e-15);
        assert_eq!(back.dims(), op.dims());
    }
}
