//! McEliece over a GRS code with `r` random columns inserted.
//!
//! `G_pub = S^{-1} [G | C_1 .. C_r] Q^{-1}` where `G` generates `GRS_k(x, y)`
//! of length `n`, the `C_i` are uniformly random columns, `S` is invertible and
//! `Q` is a permutation.

use rand::Rng;

use super::{apply_permutation, invert_permutation, random_error, random_permutation};
use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::grs::GrsSpec;
use crate::matrix::Matrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WieschebrinkPublicKey {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    /// `k x (n + r)`.
    pub gen: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WieschebrinkSecretKey {
    pub spec: GrsSpec,
    /// `k x r`, the inserted columns.
    pub random_cols: Matrix,
    pub s: Matrix,
    /// Column `i` of `[G | C]` lands at public position `perm[i]`.
    pub perm: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WieschebrinkKeys {
    pub public: WieschebrinkPublicKey,
    pub secret: WieschebrinkSecretKey,
}

pub fn validate(q: u32, n: usize, k: usize, r: usize) -> Result<()> {
    if !(1 <= k && k < n && n as u64 <= q as u64) {
        return Err(Error::Parameter(format!("need 1 <= k < n <= q, got k={k}, n={n}, q={q}")));
    }
    if r == 0 {
        return Err(Error::Parameter("need at least one random column".into()));
    }
    Ok(())
}

pub fn keygen<R: Rng + ?Sized>(f: &Field, n: usize, k: usize, r: usize, rng: &mut R) -> Result<WieschebrinkKeys> {
    validate(f.order(), n, k, r)?;
    let spec = GrsSpec::random(f, n, k, rng)?;
    let random_cols = Matrix::random(f, k, r, rng);
    let s = Matrix::random_invertible(f, k, rng);
    let perm = random_permutation(n + r, rng);
    let extended = spec.generator().hstack(&random_cols);
    let mixed = s.inverse().expect("S is invertible").mul(&extended);
    let rows: Vec<Vec<Fe>> = mixed.row_iter().map(|row| apply_permutation(row, &perm)).collect();
    let gen = Matrix::from_rows(f, n + r, &rows);
    Ok(WieschebrinkKeys {
        public: WieschebrinkPublicKey { n, k, r, gen },
        secret: WieschebrinkSecretKey { spec, random_cols, s, perm },
    })
}

impl WieschebrinkPublicKey {
    pub fn field(&self) -> &Field {
        self.gen.field()
    }

    pub fn code(&self) -> Result<LinearCode> {
        LinearCode::from_generator(&self.gen)
    }

    /// Number of errors added by [`Self::encrypt`]: `floor((n - k) / 2)`.
    pub fn error_weight(&self) -> usize {
        (self.n - self.k) / 2
    }

    pub fn encrypt<R: Rng + ?Sized>(&self, m: &[Fe], rng: &mut R) -> Vec<Fe> {
        let e = random_error(self.field(), self.n + self.r, self.error_weight(), rng);
        self.encrypt_with_error(m, &e)
    }

    pub fn encrypt_with_error(&self, m: &[Fe], e: &[Fe]) -> Vec<Fe> {
        let c = self.gen.left_mul_vec(m);
        crate::vector::add(self.field(), &c, e)
    }
}

impl WieschebrinkSecretKey {
    /// Public positions holding the inserted random columns.
    pub fn random_positions(&self) -> Vec<usize> {
        let n = self.spec.n();
        let mut pos: Vec<usize> = self.perm[n..].to_vec();
        pos.sort_unstable();
        pos
    }

    pub fn decrypt(&self, c: &[Fe]) -> Result<Vec<Fe>> {
        if c.len() != self.perm.len() {
            return Err(Error::Domain(format!(
                "ciphertext has length {}, expected {}",
                c.len(),
                self.perm.len()
            )));
        }
        let unmixed = apply_permutation(c, &invert_permutation(&self.perm));
        let decoded = self.spec.decode(&unmixed[..self.spec.n()])?;
        Ok(self.s.left_mul_vec(&decoded.message))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn shapes_and_determinism() {
        let f = Field::of_order(31).unwrap();
        let a = keygen(&f, 20, 5, 3, &mut ChaCha20Rng::seed_from_u64(1)).unwrap();
        let b = keygen(&f, 20, 5, 3, &mut ChaCha20Rng::seed_from_u64(1)).unwrap();
        assert_eq!(a.public.gen.shape(), (5, 23));
        assert_eq!(a, b);
        assert_eq!(a.public.gen.rank(), 5);
        assert!(keygen(&f, 20, 5, 0, &mut ChaCha20Rng::seed_from_u64(1)).is_err());
    }

    #[test]
    fn public_code_is_permuted_extended_code() {
        let f = Field::of_order(31).unwrap();
        let keys = keygen(&f, 20, 5, 3, &mut ChaCha20Rng::seed_from_u64(2)).unwrap();
        let sk = &keys.secret;
        let extended = sk.spec.generator().hstack(&sk.random_cols);
        let unmixed: Vec<Vec<Fe>> = keys
            .public
            .gen
            .row_iter()
            .map(|r| apply_permutation(r, &invert_permutation(&sk.perm)))
            .collect();
        assert_eq!(
            LinearCode::from_rows(&f, 23, &unmixed).unwrap(),
            LinearCode::from_generator(&extended).unwrap()
        );
    }

    #[test]
    fn round_trip_at_full_weight() {
        let f = Field::of_order(64).unwrap();
        for seed in 0..200 {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let keys = keygen(&f, 56, 20, 6, &mut rng).unwrap();
            let m = f.random_vec(20, &mut rng);
            let c = keys.public.encrypt(&m, &mut rng);
            assert_eq!(keys.secret.decrypt(&c).unwrap(), m);
        }
    }

    #[test]
    fn round_trip_without_errors() {
        let f = Field::of_order(31).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let keys = keygen(&f, 20, 5, 3, &mut rng).unwrap();
        let m = f.random_vec(5, &mut rng);
        let c = keys.public.encrypt_with_error(&m, &vec![Fe::ZERO; 23]);
        assert_eq!(keys.secret.decrypt(&c).unwrap(), m);
    }

    #[test]
    fn too_many_errors_are_detected_or_visibly_wrong() {
        let f = Field::of_order(31).unwrap();
        for seed in 0..50 {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let keys = keygen(&f, 20, 6, 3, &mut rng).unwrap();
            let pk = &keys.public;
            let m = f.random_vec(6, &mut rng);
            let sk = &keys.secret;
            // put all errors on GRS positions so none are absorbed by deletion
            let mut e = vec![Fe::ZERO; 23];
            for &p in sk.perm[..pk.error_weight() + 3].iter() {
                e[p] = f.random_nonzero(&mut rng);
            }
            let c = pk.encrypt_with_error(&m, &e);
            if let Ok(m2) = sk.decrypt(&c) {
                assert_ne!(m2, m);
                let reencrypted = pk.encrypt_with_error(&m2, &vec![Fe::ZERO; 23]);
                let grs_part: Vec<usize> = sk.perm[..20].to_vec();
                let dist = grs_part.iter().filter(|&&p| reencrypted[p] != c[p]).count();
                assert!(dist <= pk.error_weight());
            }
        }
    }
}
