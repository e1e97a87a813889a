//! The three GRS-based encryption schemes under attack.

pub mod bbcrs;
pub mod bl;
pub mod wieschebrink;

use rand::seq::index;
use rand::Rng;

use crate::field::{Fe, Field};

pub use bbcrs::{BbcrsKeys, BbcrsPublicKey, BbcrsSecretKey, RankOnePart};
pub use bl::{BlKeys, BlPublicKey, BlSecretKey};
pub use wieschebrink::{WieschebrinkKeys, WieschebrinkPublicKey, WieschebrinkSecretKey};

/// Error vector of length `n` with exactly `weight` nonzero entries at
/// uniformly chosen positions.
pub fn random_error<R: Rng + ?Sized>(f: &Field, n: usize, weight: usize, rng: &mut R) -> Vec<Fe> {
    let mut e = vec![Fe::ZERO; n];
    for i in index::sample(rng, n, weight) {
        e[i] = f.random_nonzero(rng);
    }
    e
}

/// Inverse of a permutation given as `perm[i] = image of i`.
pub fn invert_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &j) in perm.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

/// `v * Pi` for the permutation matrix with `Pi[i][perm[i]] = 1`: entry `i`
/// moves to position `perm[i]`.
pub fn apply_permutation(v: &[Fe], perm: &[usize]) -> Vec<Fe> {
    let mut out = vec![Fe::ZERO; v.len()];
    for (i, &j) in perm.iter().enumerate() {
        out[j] = v[i];
    }
    out
}

pub(crate) fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    index::sample(rng, n, n).into_vec()
}
