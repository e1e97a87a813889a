//! Key recovery for the permutation-plus-rank-one McEliece variant.
//!
//! The public code is `{p + <p, lambda> a : p in C}` for a GRS code `C`, so
//! it shares the codimension-one subcode `C_lperp = C ∩ <lambda>^perp` with
//! `C`. Triples from `C_lperp` are spotted because their products with a
//! public basis span at most `2k + 2` dimensions; `C_lperp^2 = C^2` then
//! exposes the support of `C`, and any valid pair `(a0, lambda0)` lets a
//! decoder for `C` decrypt. Rates above one half go through the dual, which
//! has the same shape with the roles of `a` and `b` swapped.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::filtration::recover_grs;
use super::{par_map, AttackOptions, AttackStats};
use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::grs::{dual_multipliers, evaluation_matrix, GrsSpec};
use crate::matrix::{rank_capped, EchelonBasis, Matrix};
use crate::schemes::bbcrs::{closest, Candidate};
use crate::vector;

/// Key-equivalent material: the hidden GRS code and a valid pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BbcrsCrack {
    pub c_spec: GrsSpec,
    pub a0: Vec<Fe>,
    pub lambda0: Vec<Fe>,
    /// The hidden code was recovered through the dual of the public code.
    pub dual_path: bool,
}

/// Default cap on sampled triples, `50 q^3`.
pub fn default_trial_cap(f: &Field) -> u64 {
    50 * (f.order() as u64).pow(3)
}

pub fn attack_bbcrs<R: Rng + ?Sized>(
    public: &LinearCode,
    opts: &AttackOptions,
    rng: &mut R,
) -> Result<(BbcrsCrack, AttackStats)> {
    let (n, k) = (public.len(), public.dim());
    let mut stats = AttackStats::default();
    if k == n {
        return Err(Error::Parameter("public code is the full space".into()));
    }
    let low = 2 * k + 2 < n;
    let high = 2 * k > n + 2;
    let start = Instant::now();
    let hidden = if low || high {
        let work = if low { public.clone() } else { public.dual()? };
        let spec = hidden_spec(&work, opts, rng, &mut stats)?;
        if low {
            spec
        } else {
            spec.dual_spec()
        }
    } else {
        // a public code that is itself GRS needs no rank-one separation
        recover_grs(public).map_err(|_| {
            Error::Unsupported(format!(
                "unsupported rate: k = {k} lies in [(n - 2) / 2, (n + 2) / 2] for n = {n}"
            ))
        })?
    };
    stats.phase("recover hidden GRS code", start);
    let start = Instant::now();
    let (a0, lambda0) = valid_pair(&hidden, public, rng)?;
    stats.phase("valid pair", start);
    Ok((BbcrsCrack { c_spec: hidden, a0, lambda0, dual_path: high }, stats))
}

/// GRS spec of the code `C` with `work = {p + <p, l> a : p in C}`.
fn hidden_spec<R: Rng + ?Sized>(
    work: &LinearCode,
    opts: &AttackOptions,
    rng: &mut R,
    stats: &mut AttackStats,
) -> Result<GrsSpec> {
    let k = work.dim();
    if work.square_dim() == 2 * k - 1 {
        if let Ok(spec) = recover_grs(work) {
            return Ok(spec);
        }
    }
    // random triples already span at most 3k - 3 products
    if k < 6 {
        return Err(Error::Unsupported(format!(
            "dimension {k} is below 6, where every triple passes the product test"
        )));
    }
    let cap = opts.trial_cap.unwrap_or_else(|| default_trial_cap(work.field()));
    let seed: u64 = rng.gen();
    let mut next = 0u64;
    loop {
        let Some(t) = find_triple(work, seed, next, cap, opts.jobs) else {
            stats.trials = cap;
            return Err(Error::TrialCapExceeded {
                trials: cap,
                context: "no triple spanned few enough products".into(),
            });
        };
        stats.trials = t + 1;
        next = t + 1;
        let mut sub = substream(seed, t, true);
        let triple = draw_triple(work, &mut substream(seed, t, false));
        let Some(basis) = extend_basis(work, triple, &mut sub) else { continue };
        let Ok(candidate) = LinearCode::from_rows(work.field(), work.len(), &basis) else { continue };
        if candidate.dim() != k - 1 || candidate.square_dim() > 2 * k - 1 {
            continue;
        }
        if let Ok(spec) = structure_from_subcode(&candidate, k) {
            if candidate.is_subcode_of(&spec.code()) {
                return Ok(spec);
            }
        }
    }
}

/// Stream `t` of the run seeded by `seed`; the second family feeds the
/// extension phase so that it never overlaps the triple draws.
fn substream(seed: u64, t: u64, extension: bool) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(if extension { t | 1 << 63 } else { t });
    rng
}

fn draw_triple(work: &LinearCode, rng: &mut ChaCha20Rng) -> [Vec<Fe>; 3] {
    std::array::from_fn(|_| work.random_codeword(rng))
}

/// `dim <z_i * g_j> <= 2k + 2`.
fn products_are_small(work: &LinearCode, zs: &[&[Fe]]) -> bool {
    let f = work.field();
    let k = work.dim();
    let gen = work.generator();
    let rows = zs.iter().flat_map(|z| gen.row_iter().map(move |g| vector::cw_product(f, z, g)));
    rank_capped(f, work.len(), rows, 2 * k + 3) <= 2 * k + 2
}

fn triple_accepted(work: &LinearCode, z: &[Vec<Fe>; 3]) -> bool {
    let f = work.field();
    let independent = rank_capped(f, work.len(), z.iter().cloned(), 3) == 3;
    independent && products_are_small(work, &[&z[0], &z[1], &z[2]])
}

/// Index of the first accepted triple in `[from, cap)`. Batches run in
/// parallel but the lowest index wins, so the answer does not depend on
/// `jobs`.
fn find_triple(work: &LinearCode, seed: u64, from: u64, cap: u64, jobs: usize) -> Option<u64> {
    let batch = if jobs <= 1 { 1 } else { 64 * jobs as u64 };
    let mut lo = from;
    while lo < cap {
        let hi = (lo + batch).min(cap);
        let idx: Vec<u64> = (lo..hi).collect();
        let hits = par_map(jobs, &idx, |&t| triple_accepted(work, &draw_triple(work, &mut substream(seed, t, false))));
        if let Some(pos) = hits.iter().position(|&h| h) {
            return Some(lo + pos as u64);
        }
        lo = hi;
    }
    None
}

/// Grows an accepted triple to `k - 1` vectors. A new vector must pass the
/// product test against each pair from the triple; a single pair lets through
/// outsiders at a rate close to `1 / q` when `n` is near `3k - 3`. `None` if
/// a vector takes more than `10 q` draws.
fn extend_basis(work: &LinearCode, triple: [Vec<Fe>; 3], rng: &mut ChaCha20Rng) -> Option<Vec<Vec<Fe>>> {
    let f = work.field();
    let k = work.dim();
    let per_vector = 10 * f.order() as u64;
    let mut span = EchelonBasis::new(f, work.len());
    for z in &triple {
        span.insert(z.clone());
    }
    let mut basis: Vec<Vec<Fe>> = triple.into();
    while basis.len() < k - 1 {
        let mut found = false;
        for _ in 0..per_vector {
            let z = work.random_codeword(rng);
            if span.contains(&z) {
                continue;
            }
            let pairs = [(0, 1), (0, 2), (1, 2)];
            if !pairs.iter().all(|&(i, j)| products_are_small(work, &[&basis[i], &basis[j], &z])) {
                continue;
            }
            span.insert(z.clone());
            basis.push(z);
            found = true;
            break;
        }
        if !found {
            return None;
        }
    }
    Some(basis)
}

/// Recovers `GRS_k(x, y)` from a codimension-one subcode: the square gives
/// `GRS_{2k-1}(x, y * y)` and hence `x`; then `w = 1 / y` is the solution of
/// `<h * c, w> = 0` for every generator `c` of the subcode and every parity
/// check `h` of the plain Reed-Solomon code of dimension `k` on `x`.
fn structure_from_subcode(sub: &LinearCode, k: usize) -> Result<GrsSpec> {
    let f = sub.field();
    let n = sub.len();
    let x = recover_grs(&sub.square())?.x().to_vec();
    let ones = vec![Fe::ONE; n];
    let checks = evaluation_matrix(f, n - k, &x, &dual_multipliers(f, &x, &ones));
    let rows: Vec<Vec<Fe>> = checks
        .row_iter()
        .flat_map(|h| sub.generator().row_iter().map(move |c| vector::cw_product(f, h, c)))
        .collect();
    let solutions = Matrix::from_rows(f, n, &rows).nullspace();
    if solutions.rows() != 1 {
        return Err(Error::AttackFailed(format!("multiplier system has {} free directions", solutions.rows())));
    }
    let y = solutions
        .row(0)
        .iter()
        .map(|&w| f.inv(w))
        .collect::<Result<Vec<_>>>()
        .map_err(|_| Error::AttackFailed("multiplier solution has a zero entry".into()))?;
    GrsSpec::new(f, k, x, y)
}

/// A pair with `p -> p + <lambda0, p> a0` mapping `C` onto `public`. Both
/// vectors are zero when the codes coincide.
fn valid_pair<R: Rng + ?Sized>(spec: &GrsSpec, public: &LinearCode, rng: &mut R) -> Result<(Vec<Fe>, Vec<Fe>)> {
    let f = public.field();
    let n = public.len();
    let hidden = spec.code();
    if hidden == *public {
        return Ok((vec![Fe::ZERO; n], vec![Fe::ZERO; n]));
    }
    let common = hidden
        .intersect(public)
        .filter(|c| c.dim() + 1 == public.dim())
        .ok_or_else(|| Error::AttackFailed("hidden and public codes do not share a hyperplane".into()))?;
    let outside = |code: &LinearCode| code.generator().row_iter().find(|r| !common.contains(r)).map(<[Fe]>::to_vec);
    let (u, v) = outside(&hidden).zip(outside(public)).expect("both codes strictly contain the hyperplane");
    let checks = common.dual()?;
    for _ in 0..1000 {
        let lambda0 = checks.random_codeword(rng);
        let lu = vector::inner_product(f, &lambda0, &u);
        if lu.is_zero() || vector::inner_product(f, &lambda0, &v).is_zero() {
            continue;
        }
        let a0 = vector::scale(f, &vector::sub(f, &v, &u), f.inv(lu)?);
        return Ok((a0, lambda0));
    }
    Err(Error::AttackFailed("no lambda0 avoided both duals".into()))
}

/// Tries every `alpha`: decodes `c + alpha a0` in `C`, maps the codeword back
/// into the public code, and keeps messages whose encoding is within decoding
/// distance of `c`. The selection rule matches secret-key decryption.
pub fn crack_decrypt(crack: &BbcrsCrack, public: &Matrix, c: &[Fe]) -> Result<Vec<Fe>> {
    let f = public.field();
    if c.len() != public.cols() {
        return Err(Error::Domain(format!("ciphertext has length {}, expected {}", c.len(), public.cols())));
    }
    let t = crack.c_spec.capacity();
    let solver = public.transpose();
    let mut candidates = Vec::new();
    let alphas: Vec<Fe> =
        if vector::is_zero(&crack.a0) { vec![Fe::ZERO] } else { f.elements().collect() };
    for alpha in alphas {
        let mut word = c.to_vec();
        f.axpy(&mut word, alpha, &crack.a0);
        let Ok(decoded) = crack.c_spec.decode(&word) else { continue };
        let mut cw = decoded.codeword;
        let shift = vector::inner_product(f, &crack.lambda0, &cw);
        f.axpy(&mut cw, shift, &crack.a0);
        let dist = vector::distance(&cw, c);
        if dist > t {
            continue;
        }
        if let Some(message) = solver.solve(&cw) {
            candidates.push(Candidate { dist, message, guess: alpha });
        }
    }
    closest(candidates).map(|(best, _)| best.message).ok_or(Error::DecodingFailure)
}

/// Rank of the `3 x 3k` matrix of the relations `z_i * z_j - z_j * z_i = 0`
/// among the products `z_i * g_j`, with `z_i = sum_j a_ij g_j`. It is 3
/// exactly when the `z_i` span at least two dimensions.
pub fn relation_rank_check(z: [&[Fe]; 3], public: &LinearCode) -> Result<usize> {
    let f = public.field();
    let k = public.dim();
    let solver = public.generator().transpose();
    let coords = z
        .iter()
        .map(|zi| solver.solve(zi).ok_or_else(|| Error::Domain("vector is not in the code".into())))
        .collect::<Result<Vec<_>>>()?;
    let mut a = Matrix::zeros(f, 3, 3 * k);
    // (row, block of +a_src, source, block of -a_other, other)
    for (row, (plus_block, plus_src), (minus_block, minus_src)) in
        [(0, (0, 1), (1, 0)), (1, (0, 2), (2, 0)), (2, (1, 2), (2, 1))]
    {
        for j in 0..k {
            a.set(row, plus_block * k + j, coords[plus_src][j]);
            a.set(row, minus_block * k + j, f.neg(coords[minus_src][j]));
        }
    }
    Ok(a.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::bbcrs::{keygen, RankOnePart};

    fn run(n: usize, k: usize, seed: u64, rank_one: RankOnePart) -> (BbcrsCrack, AttackStats) {
        let f = Field::of_order(16).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let keys = keygen(&f, n, k, rank_one, &mut rng).unwrap();
        let public = keys.public.code().unwrap();
        let (crack, stats) = attack_bbcrs(&public, &AttackOptions::default(), &mut rng).unwrap();
        for _ in 0..10 {
            let m = f.random_vec(k, &mut rng);
            let c = keys.public.encrypt(&m, &mut rng);
            assert_eq!(crack_decrypt(&crack, &keys.public.gen, &c).unwrap(), keys.secret.decrypt(&c).unwrap());
        }
        (crack, stats)
    }

    #[test]
    fn low_rate_key() {
        let (crack, stats) = run(15, 6, 1, RankOnePart::NonDegenerate);
        assert!(!crack.dual_path);
        assert!(stats.trials > 0);
    }

    #[test]
    fn high_rate_key_uses_the_dual() {
        let (crack, _) = run(15, 9, 2, RankOnePart::NonDegenerate);
        assert!(crack.dual_path);
    }

    #[test]
    fn degenerate_key_needs_no_search() {
        let (crack, stats) = run(15, 6, 3, RankOnePart::Zero);
        assert_eq!(stats.trials, 0);
        assert!(vector::is_zero(&crack.a0));
    }

    #[test]
    fn dead_zone_is_unsupported() {
        let f = Field::of_order(16).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let keys = keygen(&f, 15, 7, RankOnePart::NonDegenerate, &mut rng).unwrap();
        let err = attack_bbcrs(&keys.public.code().unwrap(), &AttackOptions::default(), &mut rng).unwrap_err();
        assert!(matches!(err, Error::Unsupported(_)), "{err}");
    }

    #[test]
    fn parallel_search_matches_sequential() {
        let f = Field::of_order(16).unwrap();
        let keys = keygen(&f, 15, 6, RankOnePart::NonDegenerate, &mut ChaCha20Rng::seed_from_u64(5)).unwrap();
        let public = keys.public.code().unwrap();
        let seq = attack_bbcrs(&public, &AttackOptions::default(), &mut ChaCha20Rng::seed_from_u64(6)).unwrap();
        let par = AttackOptions { jobs: 4, ..Default::default() };
        let par = attack_bbcrs(&public, &par, &mut ChaCha20Rng::seed_from_u64(6)).unwrap();
        assert_eq!(seq.0, par.0);
        assert_eq!(seq.1.trials, par.1.trials);
    }

    #[test]
    fn relation_rank() {
        let f = Field::of_order(16).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        let code = LinearCode::random(&f, 15, 6, &mut rng);
        let z1 = code.random_codeword(&mut rng);
        let z2 = vector::scale(&f, &z1, f.element(2).unwrap());
        let z3 = vector::scale(&f, &z1, f.element(3).unwrap());
        assert!(relation_rank_check([&z1, &z2, &z3], &code).unwrap() < 3);
        let z2 = code.random_codeword(&mut rng);
        assert_eq!(relation_rank_check([&z1, &z2, &z3], &code).unwrap(), 3);
    }
}
