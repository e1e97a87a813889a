//! Seeded fixtures shared by the benchmarks.

use grscrack::schemes::{bbcrs, bl, wieschebrink, BbcrsKeys, BlKeys, RankOnePart, WieschebrinkKeys};
use grscrack::{Field, GrsSpec, LinearCode};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn field(q: u64) -> Field {
    Field::of_order(q).expect("benchmark fields are valid")
}

pub fn random_code(q: u64, n: usize, k: usize, seed: u64) -> LinearCode {
    LinearCode::random(&field(q), n, k, &mut rng(seed))
}

pub fn grs(q: u64, n: usize, k: usize, seed: u64) -> GrsSpec {
    GrsSpec::random(&field(q), n, k, &mut rng(seed)).expect("valid GRS shape")
}

pub fn wieschebrink_keys(q: u64, n: usize, k: usize, r: usize, seed: u64) -> WieschebrinkKeys {
    wieschebrink::keygen(&field(q), n, k, r, &mut rng(seed)).expect("valid Wieschebrink shape")
}

pub fn bl_keys(q: u64, n: usize, k: usize, ell: usize, seed: u64) -> BlKeys {
    bl::keygen(&field(q), n, k, ell, &mut rng(seed)).expect("valid Bogdanov-Lee shape")
}

pub fn bbcrs_keys(q: u64, n: usize, k: usize, seed: u64) -> BbcrsKeys {
    bbcrs::keygen(&field(q), n, k, RankOnePart::Random, &mut rng(seed)).expect("valid BBCRS shape")
}
