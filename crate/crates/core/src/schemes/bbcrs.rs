//! McEliece over a GRS code hidden by a permutation plus a rank-one matrix.
//!
//! `G_pub = S^{-1} G_sec Q^{-1}` with `Q = Pi + alpha^T beta`. Writing
//! `Q = (I + b^T a) Pi` with `b = alpha` and `a = beta Pi^{-1}`, the public
//! code is `{p + <p, lambda> a : p in C}` where `C = C_sec Pi^{-1}` and
//! `lambda = -b / (1 + <a, b>)`.

use rand::Rng;

use super::{apply_permutation, invert_permutation, random_error, random_permutation};
use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::grs::GrsSpec;
use crate::matrix::{rank_one_update_inverse, Matrix};
use crate::vector;

/// How the rank-one part `alpha^T beta` of `Q` is drawn.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RankOnePart {
    /// Uniform `alpha`, `beta`, resampled until `Q` is invertible.
    #[default]
    Random,
    /// As `Random`, also rejecting keys where `a` lies in `C` or `lambda`
    /// lies in the dual of `C`; such keys hide nothing.
    NonDegenerate,
    /// `alpha = beta = 0`, so `Q` is a permutation.
    Zero,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BbcrsPublicKey {
    /// `k x n`.
    pub gen: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BbcrsSecretKey {
    pub spec: GrsSpec,
    pub s: Matrix,
    /// `Pi[i][perm[i]] = 1`.
    pub perm: Vec<usize>,
    pub alpha: Vec<Fe>,
    pub beta: Vec<Fe>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BbcrsKeys {
    pub public: BbcrsPublicKey,
    pub secret: BbcrsSecretKey,
}

/// Outcome of secret-key decryption.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BbcrsDecryption {
    pub message: Vec<Fe>,
    /// The guess for `<e, alpha>` that produced `message`.
    pub gamma: Fe,
    /// Another public codeword was also within decoding distance.
    pub ambiguous: bool,
}

/// A message whose encoding lies within decoding distance of a ciphertext.
pub(crate) struct Candidate {
    pub dist: usize,
    pub message: Vec<Fe>,
    pub guess: Fe,
}

/// The closest candidate, ties going to the smallest message, and whether a
/// different message was also found. Any decryptor that enumerates all
/// codewords within distance `t` picks the same one.
pub(crate) fn closest(candidates: Vec<Candidate>) -> Option<(Candidate, bool)> {
    let ambiguous = candidates.iter().any(|c| c.message != candidates[0].message);
    let best = candidates.into_iter().min_by(|x, y| (x.dist, &x.message).cmp(&(y.dist, &y.message)))?;
    Some((best, ambiguous))
}

pub fn validate(q: u32, n: usize, k: usize) -> Result<()> {
    if !(1 <= k && k < n && n as u64 <= q as u64) {
        return Err(Error::Parameter(format!("need 1 <= k < n <= q, got k={k}, n={n}, q={q}")));
    }
    Ok(())
}

pub fn keygen<R: Rng + ?Sized>(
    f: &Field,
    n: usize,
    k: usize,
    rank_one: RankOnePart,
    rng: &mut R,
) -> Result<BbcrsKeys> {
    validate(f.order(), n, k)?;
    let spec = GrsSpec::random(f, n, k, rng)?;
    let s = Matrix::random_invertible(f, k, rng);
    let perm = random_permutation(n, rng);
    let mut secret = BbcrsSecretKey { spec, s, perm, alpha: vec![Fe::ZERO; n], beta: vec![Fe::ZERO; n] };
    if rank_one != RankOnePart::Zero {
        let hidden = secret.hidden_spec().code();
        let hidden_dual = hidden.dual()?;
        loop {
            secret.alpha = f.random_vec(n, rng);
            secret.beta = f.random_vec(n, rng);
            let Some(lambda) = secret.lambda() else { continue };
            let degenerate = hidden.contains(&secret.a()) || hidden_dual.contains(&lambda);
            if rank_one == RankOnePart::Random || !degenerate {
                break;
            }
        }
    }
    let gen = secret.public_generator();
    Ok(BbcrsKeys { public: BbcrsPublicKey { gen }, secret })
}

impl BbcrsPublicKey {
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

    /// Number of errors added by [`Self::encrypt`]: `floor((n - k) / 2)`.
    pub fn error_weight(&self) -> usize {
        (self.n() - self.k()) / 2
    }

    pub fn encrypt<R: Rng + ?Sized>(&self, m: &[Fe], rng: &mut R) -> Vec<Fe> {
        self.encrypt_with_weight(m, self.error_weight(), rng)
    }

    pub fn encrypt_with_weight<R: Rng + ?Sized>(&self, m: &[Fe], weight: usize, rng: &mut R) -> Vec<Fe> {
        let e = random_error(self.field(), self.n(), weight, rng);
        vector::add(self.field(), &self.gen.left_mul_vec(m), &e)
    }
}

impl BbcrsSecretKey {
    pub fn field(&self) -> &Field {
        self.spec.field()
    }

    /// `b = alpha`.
    pub fn b(&self) -> Vec<Fe> {
        self.alpha.clone()
    }

    /// `a = beta Pi^{-1}`.
    pub fn a(&self) -> Vec<Fe> {
        apply_permutation(&self.beta, &invert_permutation(&self.perm))
    }

    /// `lambda = -b / (1 + <a, b>)`, or `None` when `Q` is singular.
    pub fn lambda(&self) -> Option<Vec<Fe>> {
        let f = self.field();
        let denom = f.add(Fe::ONE, vector::inner_product(f, &self.a(), &self.b()));
        let c = f.neg(f.inv(denom).ok()?);
        Some(vector::scale(f, &self.b(), c))
    }

    /// `Q = Pi + alpha^T beta`.
    pub fn q_matrix(&self) -> Matrix {
        let f = self.field();
        let outer = Matrix::row_vector(f, &self.alpha).transpose().mul(&Matrix::row_vector(f, &self.beta));
        Matrix::permutation(f, &self.perm).add(&outer)
    }

    /// `Q^{-1} = Pi^{-1} (I + b^T a)^{-1}`.
    pub fn q_inverse(&self) -> Option<Matrix> {
        let p_inv = rank_one_update_inverse(self.field(), &self.a(), &self.b())?;
        let pi_inv = Matrix::permutation(self.field(), &invert_permutation(&self.perm));
        Some(pi_inv.mul(&p_inv))
    }

    /// Spec of `C = C_sec Pi^{-1}`, the GRS code the public code is built on.
    pub fn hidden_spec(&self) -> GrsSpec {
        let x = self.perm.iter().map(|&p| self.spec.x()[p]).collect();
        let y = self.perm.iter().map(|&p| self.spec.y()[p]).collect();
        GrsSpec::new(self.field(), self.spec.k(), x, y).expect("permuting keeps a valid spec")
    }

    /// Whether `a` lies in `C` or `lambda` lies in the dual of `C`, in which
    /// case the public code equals `C`.
    pub fn is_degenerate(&self) -> bool {
        let hidden = self.hidden_spec().code();
        let lambda = self.lambda().expect("key has invertible Q");
        hidden.contains(&self.a()) || hidden.dual().is_ok_and(|d| d.contains(&lambda))
    }

    pub fn decrypt(&self, c: &[Fe]) -> Result<Vec<Fe>> {
        self.decrypt_detailed(c).map(|d| d.message)
    }

    /// `S^{-1} G_sec Q^{-1}`.
    pub fn public_generator(&self) -> Matrix {
        let q_inv = self.q_inverse().expect("key has invertible Q");
        self.s.inverse().expect("S is invertible").mul(&self.spec.generator()).mul(&q_inv)
    }

    /// Tries every `gamma` for `e alpha^T beta = gamma beta` and decodes
    /// `c Q - gamma beta` in `C_sec`. A wrong `gamma` can still land within
    /// decoding distance of some codeword, so candidates are kept only if
    /// re-encryption is within `floor((n - k) / 2)` of `c`.
    pub fn decrypt_detailed(&self, c: &[Fe]) -> Result<BbcrsDecryption> {
        let f = self.field();
        let n = self.spec.n();
        if c.len() != n {
            return Err(Error::Domain(format!("ciphertext has length {}, expected {n}", c.len())));
        }
        let mut cq = apply_permutation(c, &self.perm);
        f.axpy(&mut cq, vector::inner_product(f, c, &self.alpha), &self.beta);
        let gen = self.public_generator();
        let t = self.spec.capacity();
        let mut candidates = Vec::new();
        for gamma in f.elements() {
            let mut word = cq.clone();
            f.axpy(&mut word, f.neg(gamma), &self.beta);
            let Ok(decoded) = self.spec.decode(&word) else { continue };
            let message = self.s.left_mul_vec(&decoded.message);
            let dist = vector::distance(&gen.left_mul_vec(&message), c);
            if dist <= t {
                candidates.push(Candidate { dist, message, guess: gamma });
            }
        }
        let (best, ambiguous) = closest(candidates).ok_or(Error::DecodingFailure)?;
        Ok(BbcrsDecryption { message: best.message, gamma: best.guess, ambiguous })
    }
}
