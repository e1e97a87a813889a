//! Locating the inserted random columns of a Wieschebrink public key.
//!
//! With `C'` the public code of length `n + r`, `dim C'^2 = 2k - 1 + r` for
//! typical keys. Deleting a random position lowers this by one and deleting a
//! GRS position leaves it unchanged, which settles the case
//! `2k - 1 + r <= n`. Otherwise the code is first shortened on a set `I` of
//! `a` positions holding `a0` random and `a1` GRS positions, for which
//! `dim = 2(k - a1) - 1 + r - a0`; shortening one more position then costs two
//! dimensions at a GRS position and one at a random position.

use std::time::Instant;

use rand::seq::index;
use rand::Rng;

use super::{filtration::recover_grs, par_map, AttackOptions, AttackStats};
use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::field::Fe;
use crate::grs::GrsSpec;
use crate::matrix::Matrix;
use crate::vector;

pub const DEFAULT_TRIAL_CAP: u64 = 100;

/// Key-equivalent material for a Wieschebrink public key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WieschebrinkCrack {
    /// Sorted public positions holding the random columns.
    pub random_positions: Vec<usize>,
    /// GRS spec of the public code punctured at `random_positions`.
    pub recovered_spec: GrsSpec,
}

/// Kind of a public position, as read from square dimensions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Grs,
    Random,
}

pub fn attack_wieschebrink<R: Rng + ?Sized>(
    public: &LinearCode,
    n: usize,
    k: usize,
    r: usize,
    opts: &AttackOptions,
    rng: &mut R,
) -> Result<(WieschebrinkCrack, AttackStats)> {
    let len = public.len();
    if len != n + r || public.dim() != k || k >= n {
        return Err(Error::Parameter(format!(
            "public code is [{len}, {}], expected [{}, {k}] with k < n",
            public.dim(),
            n + r
        )));
    }
    let mut stats = AttackStats::default();
    let start = Instant::now();
    let random_positions = if r == 0 {
        Vec::new()
    } else {
        let direct = if 2 * k - 1 + r <= n { direct_branch(public, r, opts.jobs) } else { None };
        match direct {
            Some(pos) => pos,
            None => shortening_branch(public, n, k, r, opts, rng, &mut stats)?,
        }
    };
    stats.phase("locate random columns", start);
    let start = Instant::now();
    let grs_part = public.puncture(&random_positions)?;
    let recovered_spec = recover_grs(&grs_part)?;
    stats.phase("recover GRS structure", start);
    Ok((WieschebrinkCrack { random_positions, recovered_spec }, stats))
}

/// Punctures each position in turn; `None` if the readings do not single out
/// exactly `r` positions.
fn direct_branch(public: &LinearCode, r: usize, jobs: usize) -> Option<Vec<usize>> {
    let full = public.square_dim();
    let positions: Vec<usize> = (0..public.len()).collect();
    let drops = par_map(jobs, &positions, |&i| {
        public.puncture(&[i]).map(|c| full - c.square_dim()).unwrap_or(usize::MAX)
    });
    let random: Vec<usize> = positions.iter().copied().filter(|&i| drops[i] == 1).collect();
    let consistent = random.len() == r && drops.iter().all(|&d| d <= 1);
    consistent.then_some(random)
}

/// Dimension of the square of `public` shortened on `set`, or `None` if the
/// shortened code is zero.
fn shortened_square_dim(public: &LinearCode, set: &[usize]) -> Option<usize> {
    public.shorten(set).ok().map(|c| c.square_dim())
}

/// Classifies every position outside `set` by the drop in square dimension
/// when it is added to the shortening set; `None` on an unexpected drop.
fn classify_against(public: &LinearCode, set: &[usize], base: usize, jobs: usize) -> Option<Vec<(usize, Kind)>> {
    let mut in_set = vec![false; public.len()];
    for &i in set {
        in_set[i] = true;
    }
    let others: Vec<usize> = (0..public.len()).filter(|&i| !in_set[i]).collect();
    let readings = par_map(jobs, &others, |&j| {
        let mut extended = set.to_vec();
        extended.push(j);
        shortened_square_dim(public, &extended)
    });
    others
        .iter()
        .zip(readings)
        .map(|(&j, d)| match base.checked_sub(d?) {
            Some(1) => Some((j, Kind::Random)),
            Some(2) => Some((j, Kind::Grs)),
            _ => None,
        })
        .collect()
}

fn shortening_branch<R: Rng + ?Sized>(
    public: &LinearCode,
    n: usize,
    k: usize,
    r: usize,
    opts: &AttackOptions,
    rng: &mut R,
    stats: &mut AttackStats,
) -> Result<Vec<usize>> {
    let len = n + r;
    // a > 2k - 1 + r - n makes room in the square; two extra positions give
    // margin for the random positions that land in the set
    let a = (2 * k + r + 2).saturating_sub(n).clamp(1, k - 1);
    let cap = opts.trial_cap.unwrap_or(DEFAULT_TRIAL_CAP);
    let min_a1 = (2 * k).saturating_sub(n);
    while stats.trials < cap {
        stats.trials += 1;
        let set = index::sample(rng, len, a).into_vec();
        let Some(d) = shortened_square_dim(public, &set) else { continue };
        // d = 2k - 1 + r - a - a1
        let Some(a1) = (2 * k - 1 + r).checked_sub(a + d) else { continue };
        if a1 > a || a1 < min_a1 || a - a1 > r {
            continue;
        }
        let Some(outside) = classify_against(public, &set, d, opts.jobs) else { continue };
        let random_outside = outside.iter().filter(|(_, kind)| *kind == Kind::Random).count();
        if random_outside != r - (a - a1) {
            continue;
        }
        if a == a1 {
            return Ok(sorted(outside, Kind::Random));
        }
        // second round: shorten on known GRS positions only, then classify
        // the members of the first set
        let known: Vec<usize> = outside.iter().filter(|(_, kind)| *kind == Kind::Grs).map(|&(j, _)| j).collect();
        if known.len() < a {
            continue;
        }
        let pick = index::sample(rng, known.len(), a);
        let second: Vec<usize> = pick.iter().map(|i| known[i]).collect();
        let Some(d2) = shortened_square_dim(public, &second) else { continue };
        if d2 + 2 * a != 2 * k - 1 + r {
            continue;
        }
        let Some(inside) = classify_against(public, &second, d2, opts.jobs) else { continue };
        let mut random: Vec<usize> = inside
            .into_iter()
            .filter(|&(j, kind)| kind == Kind::Random && set.contains(&j))
            .map(|(j, _)| j)
            .collect();
        if random.len() != a - a1 {
            continue;
        }
        random.extend(outside.iter().filter(|(_, kind)| *kind == Kind::Random).map(|&(j, _)| j));
        random.sort_unstable();
        return Ok(random);
    }
    Err(Error::TrialCapExceeded {
        trials: stats.trials,
        context: "no shortening set gave consistent square dimensions".into(),
    })
}

fn sorted(items: Vec<(usize, Kind)>, kind: Kind) -> Vec<usize> {
    let mut v: Vec<usize> = items.into_iter().filter(|&(_, k)| k == kind).map(|(j, _)| j).collect();
    v.sort_unstable();
    v
}

/// Decrypts with a crack: drop the random positions, decode in the recovered
/// GRS code, and solve `m G_pub = codeword` on the remaining positions.
pub fn crack_decrypt(crack: &WieschebrinkCrack, public: &Matrix, c: &[Fe]) -> Result<Vec<Fe>> {
    if c.len() != public.cols() {
        return Err(Error::Domain(format!("ciphertext has length {}, expected {}", c.len(), public.cols())));
    }
    let word = vector::delete(c, &crack.random_positions);
    let decoded = crack.recovered_spec.decode(&word)?;
    let g = public.delete_cols(&crack.random_positions);
    g.transpose().solve(&decoded.codeword).ok_or(Error::DecodingFailure)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::schemes::wieschebrink::keygen;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn run(q: u64, n: usize, k: usize, r: usize, seed: u64) {
        let f = Field::of_order(q).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let keys = keygen(&f, n, k, r, &mut rng).unwrap();
        let public = keys.public.code().unwrap();
        let (crack, _) = attack_wieschebrink(&public, n, k, r, &AttackOptions::default(), &mut rng).unwrap();
        assert_eq!(crack.random_positions, keys.secret.random_positions());
        for _ in 0..10 {
            let m = f.random_vec(k, &mut rng);
            let c = keys.public.encrypt(&m, &mut rng);
            assert_eq!(crack_decrypt(&crack, &keys.public.gen, &c).unwrap(), m);
        }
    }

    #[test]
    fn direct_branch_small() {
        for seed in 0..5 {
            run(31, 24, 6, 3, seed);
        }
    }

    #[test]
    fn shortening_branch_small() {
        // 2k - 1 + r = 31 > n = 30
        for seed in 0..5 {
            run(31, 30, 14, 4, seed);
        }
    }

    #[test]
    fn shortening_branch_high_rate() {
        for seed in 0..3 {
            run(64, 64, 40, 10, seed);
        }
    }

    #[test]
    fn rejects_wrong_shape() {
        let f = Field::of_order(31).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(0);
        let code = LinearCode::random(&f, 20, 5, &mut rng);
        assert!(attack_wieschebrink(&code, 20, 5, 3, &AttackOptions::default(), &mut rng).is_err());
    }
}
