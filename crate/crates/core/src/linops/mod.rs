//! Dense complex operators on composite systems: tensor algebra, partial
//! transpose, spectra, Pauli and Weyl expansions.

mod dims;
mod operator;
mod pauli;
mod weyl;
mod xshape;

pub use dims::Dims;
pub use operator::{
    c, cr, hermitian_eigen, kron_vecs, permutation_map, tensor, CMat, CVec, Operator, Spectrum,
    C64, HERM_TOL,
};
pub use pauli::{pauli_trace, Pauli, PauliString, PauliSum};
pub use weyl::{bell_projector, generalized_bell, weyl};
pub use xshape::XShapedOperator;

/// Pauli expansion of a Hermitian qubit operator (coefficients Tr[op σ]/2^n).
pub fn matrix_to_pauli(op: &Operator) -> crate::Result<PauliSum> {
    PauliSum::from_operator(op, 1e-14)
}

pub fn pauli_to_matrix(p: &PauliSum) -> crate::Result<Operator> {
    p.to_operator(None)
}

/// Tensor product of single-qubit Paulis given as a label, e.g. "YIY".
pub fn pauli_op(label: &str) -> Operator {
    PauliString::parse(label)
        .expect("valid Pauli label")
        .to_operator()
}

/// Random unit vector (complex Gaussian, normalized).
pub fn haar_vector<R: rand::Rng + ?Sized>(d: usize, rng: &mut R) -> CVec {
    use rand_distr::StandardNormal;
    let v = CVec::from_fn(d, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let n = v.norm();
    v / cr(n)
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix.
pub fn haar_unitary<R: rand::Rng + ?Sized>(d: usize, rng: &mut R) -> Operator {
    use rand_distr::StandardNormal;
    let g = CMat::from_fn(d, d, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let mut u = q.clone();
    for j in 0..d {
        let z = r[(j, j)];
        let ph = if z.norm() > 0.0 { z / cr(z.norm()) } else { cr(1.0) };
        for i in 0..d {
            u[(i, j)] = q[(i, j)] * ph;
        }
    }
    Operator::from_matrix(u).expect("square")
}

/// Random density matrix G G† / Tr (Ginibre ensemble).
pub fn random_density<R: rand::Rng + ?Sized>(dims: &Dims, rng: &mut R) -> Operator {
    use rand_distr::StandardNormal;
    let n = dims.total();
    let g = CMat::from_fn(n, n, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let m = &g * g.adjoint();
    Operator::new(m, dims.clone()).expect("dims").normalized()
}

/// Random Hermitian operator with Gaussian entries.
pub fn random_hermitian<R: rand::Rng + ?Sized>(dims: &Dims, rng: &mut R) -> Operator {
    use rand_distr::StandardNormal;
    let n = dims.total();
    let g = CMat::from_fn(n, n, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    Operator::new(&g + g.adjoint(), dims.clone())
        .expect("dims")
        .scale(0.5)
}
