//! Recovering the secret set `L` of a Bogdanov-Lee public key.
//!
//! For a position set `I` with `J = I ∩ L`, `|J| <= l - 1` and
//! `|I| - |J| >= 2k`, the restriction satisfies `dim C_I^2 = 2k - 1 + |J|`.
//! The reading saturates at `|J| = l - 1`, so only sets reading at most
//! `l - 2` are trusted. Removing a member of `J` lowers the reading by one;
//! swapping a known outsider for a fresh position raises it exactly when the
//! fresh position lies in `L`.

use std::time::Instant;

use rand::seq::index;
use rand::Rng;

use super::{par_map, AttackOptions, AttackStats};
use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::matrix::Matrix;
use crate::schemes::bl::decryption_vector;
use crate::vector;

pub const DEFAULT_TRIAL_CAP: u64 = 100;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlCrack {
    pub field: Field,
    /// Sorted positions of `L`.
    pub l: Vec<usize>,
    /// A solution of the public decryption system.
    pub y: Vec<Fe>,
}

fn restricted_square_dim(public: &LinearCode, set: &[usize]) -> Option<usize> {
    let c = public.restrict(set).ok()?;
    (c.dim() == public.dim()).then(|| c.square_dim())
}

pub fn attack_bl<R: Rng + ?Sized>(
    public: &LinearCode,
    ell: usize,
    opts: &AttackOptions,
    rng: &mut R,
) -> Result<(BlCrack, AttackStats)> {
    let (n, k) = (public.len(), public.dim());
    if ell < 2 || 3 * ell >= n || 2 * k + ell > n {
        return Err(Error::Parameter(format!("need 2 <= l, 3l < n and 2k + l <= n; got n={n}, k={k}, l={ell}")));
    }
    let mut stats = AttackStats::default();
    let start = Instant::now();
    let size = 2 * k + ell;
    let base = 2 * k - 1;
    let cap = opts.trial_cap.unwrap_or(DEFAULT_TRIAL_CAP);
    let l = loop {
        if stats.trials >= cap {
            return Err(Error::TrialCapExceeded {
                trials: stats.trials,
                context: "no restriction set gave a trusted reading".into(),
            });
        }
        stats.trials += 1;
        let mut set = index::sample(rng, n, size).into_vec();
        set.sort_unstable();
        let Some(d) = restricted_square_dim(public, &set) else { continue };
        let Some(j) = d.checked_sub(base) else { continue };
        if j + 2 > ell {
            continue;
        }
        if let Some(l) = recover_from(public, &set, d, j, ell, opts.jobs) {
            break l;
        }
    };
    stats.phase("locate L", start);
    let start = Instant::now();
    let y = decryption_vector(public.generator(), &l)
        .ok_or_else(|| Error::AttackFailed("public decryption system is inconsistent".into()))?;
    stats.phase("solve decryption system", start);
    Ok((BlCrack { field: public.field().clone(), l, y }, stats))
}

/// Extracts `J` by removal and the rest of `L` by swapping; `None` if any
/// reading is off the expected values.
fn recover_from(public: &LinearCode, set: &[usize], d: usize, j: usize, ell: usize, jobs: usize) -> Option<Vec<usize>> {
    let n = public.len();
    let drops = par_map(jobs, set, |&x| {
        let rest: Vec<usize> = set.iter().copied().filter(|&i| i != x).collect();
        restricted_square_dim(public, &rest).and_then(|dx| d.checked_sub(dx))
    });
    let mut found = Vec::new();
    let mut outsider = None;
    for (&x, drop) in set.iter().zip(drops) {
        match drop? {
            0 => outsider = outsider.or(Some(x)),
            1 => found.push(x),
            _ => return None,
        }
    }
    if found.len() != j {
        return None;
    }
    let x0 = outsider?;
    let mut in_set = vec![false; n];
    for &i in set {
        in_set[i] = true;
    }
    let fresh: Vec<usize> = (0..n).filter(|&i| !in_set[i]).collect();
    let base: Vec<usize> = set.iter().copied().filter(|&i| i != x0).collect();
    let rises = par_map(jobs, &fresh, |&y| {
        let mut swapped = base.clone();
        swapped.push(y);
        restricted_square_dim(public, &swapped).and_then(|dy| dy.checked_sub(d))
    });
    for (&y, rise) in fresh.iter().zip(rises) {
        match rise? {
            0 => {}
            1 => found.push(y),
            _ => return None,
        }
    }
    found.sort_unstable();
    (found.len() == 3 * ell).then_some(found)
}

/// Decrypts as `<y, c>` with the crack's solution of the public system.
pub fn crack_decrypt(crack: &BlCrack, public: &Matrix, c: &[Fe]) -> Result<Fe> {
    if c.len() != public.cols() {
        return Err(Error::Domain(format!("ciphertext has length {}, expected {}", c.len(), public.cols())));
    }
    Ok(vector::inner_product(public.field(), &crack.y, c))
}
