//! Bogdanov-Lee homomorphic encryption of single field elements.
//!
//! Column `i` of the secret `k x n` matrix `G` is `(x_i, .., x_i^k)`, truncated
//! to `(x_i, .., x_i^l, 0, .., 0)` when `i` is in the secret set `L` of size
//! `3l`. The public key is `P = S G`, and `c = x P + m 1 + e`.

use rand::seq::index;
use rand::Rng;

use super::random_error;
use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::grs::random_support;
use crate::matrix::Matrix;
use crate::vector;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlPublicKey {
    pub ell: usize,
    /// `k x n`.
    pub gen: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlSecretKey {
    pub ell: usize,
    /// Sorted positions of size `3l`.
    pub l: Vec<usize>,
    pub x: Vec<Fe>,
    pub g: Matrix,
    pub s: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlKeys {
    pub public: BlPublicKey,
    pub secret: BlSecretKey,
}

pub fn validate(q: u32, n: usize, k: usize, ell: usize) -> Result<()> {
    let ok = ell >= 1 && 3 * ell < n && ell < k && n >= 3 * ell + k && (n as u64) < q as u64;
    if !ok {
        return Err(Error::Parameter(format!(
            "need 1 <= l < k, 3l < n, n - 3l >= k and n < q; got n={n}, k={k}, l={ell}, q={q}"
        )));
    }
    Ok(())
}

pub fn keygen<R: Rng + ?Sized>(f: &Field, n: usize, k: usize, ell: usize, rng: &mut R) -> Result<BlKeys> {
    validate(f.order(), n, k, ell)?;
    let mut l = index::sample(rng, n, 3 * ell).into_vec();
    l.sort_unstable();
    let x = random_support(f, n, true, rng)?;
    let mut in_l = vec![false; n];
    for &i in &l {
        in_l[i] = true;
    }
    let mut g = Matrix::zeros(f, k, n);
    for i in 0..n {
        let rows = if in_l[i] { ell } else { k };
        let mut v = x[i];
        for j in 0..rows {
            g.set(j, i, v);
            v = f.mul(v, x[i]);
        }
    }
    let s = Matrix::random_invertible(f, k, rng);
    let gen = s.mul(&g);
    Ok(BlKeys { public: BlPublicKey { ell, gen }, secret: BlSecretKey { ell, l, x, g, s } })
}

/// A solution of `gen y^T = 0`, `sum_{i in L} y_i = 1`, `y_i = 0` off `L`,
/// as a full-length vector, or `None` if the system is inconsistent.
///
/// Kernel vectors are folded in until every position of `L` that can be
/// nonzero is, so that noise anywhere on `L` reaches the inner product.
pub fn decryption_vector(gen: &Matrix, l: &[usize]) -> Option<Vec<Fe>> {
    let f = gen.field();
    let ones = Matrix::from_rows(f, l.len(), &[vec![Fe::ONE; l.len()]]);
    let system = gen.select_cols(l).vstack(&ones);
    let mut rhs = vec![Fe::ZERO; system.rows()];
    rhs[system.rows() - 1] = Fe::ONE;
    let mut sol = system.solve(&rhs)?;
    let kernel = system.nullspace();
    for i in 0..sol.len() {
        if !sol[i].is_zero() {
            continue;
        }
        let Some(h) = kernel.row_iter().find(|h| !h[i].is_zero()) else { continue };
        // smallest coefficient that keeps every nonzero entry nonzero
        let coef = f.elements().skip(1).find(|&c| {
            sol.iter().zip(h).all(|(&s, &hj)| s.is_zero() || !f.add(s, f.mul(c, hj)).is_zero())
        });
        if let Some(c) = coef {
            f.axpy(&mut sol, c, h);
        }
    }
    let mut y = vec![Fe::ZERO; gen.cols()];
    for (&i, v) in l.iter().zip(sol) {
        y[i] = v;
    }
    Some(y)
}

impl BlPublicKey {
    pub fn field(&self) -> &Field {
        self.gen.field()
    }

    pub fn n(&self) -> usize {
        self.gen.cols()
    }

    pub fn k(&self) -> usize {
        self.gen.rows()
    }

    pub fn code(&self) -> Result<LinearCode> {
        LinearCode::from_generator(&self.gen)
    }

    /// Encrypts with noise from the `q`-ary symmetric channel of rate `eta`.
    pub fn encrypt<R: Rng + ?Sized>(&self, m: Fe, eta: f64, rng: &mut R) -> Vec<Fe> {
        let f = self.field();
        let e: Vec<Fe> = (0..self.n())
            .map(|_| if rng.gen_bool(eta) { f.random_nonzero(rng) } else { Fe::ZERO })
            .collect();
        self.encrypt_with_error(m, &e, rng)
    }

    pub fn encrypt_with_error<R: Rng + ?Sized>(&self, m: Fe, e: &[Fe], rng: &mut R) -> Vec<Fe> {
        let f = self.field();
        let x = f.random_vec(self.k(), rng);
        let mut c = self.gen.left_mul_vec(&x);
        for (ci, &ei) in c.iter_mut().zip(e) {
            *ci = f.add(f.add(*ci, m), ei);
        }
        c
    }

    /// Encrypts with `weight` errors placed uniformly; used for tests that
    /// need a fixed noise level.
    pub fn encrypt_with_weight<R: Rng + ?Sized>(&self, m: Fe, weight: usize, rng: &mut R) -> Vec<Fe> {
        let e = random_error(self.field(), self.n(), weight, rng);
        self.encrypt_with_error(m, &e, rng)
    }
}

impl BlSecretKey {
    pub fn decrypt(&self, c: &[Fe]) -> Result<Fe> {
        if c.len() != self.g.cols() {
            return Err(Error::Domain(format!("ciphertext has length {}, expected {}", c.len(), self.g.cols())));
        }
        let y = decryption_vector(&self.g, &self.l)
            .ok_or_else(|| Error::Domain("secret decryption system is inconsistent".into()))?;
        Ok(vector::inner_product(self.g.field(), &y, c))
    }
}
