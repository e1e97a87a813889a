//! Seeded timing runs of the attacks over fixed parameter presets.
//!
//! Each trial draws a fresh key from `seed + trial`, times the attack call
//! alone, and counts the trial a success when the crack matches the key and
//! decrypts a handful of fresh ciphertexts like the secret key does.

use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::attacks::{self, AttackOptions};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::schemes::{bbcrs, bl, wieschebrink, RankOnePart};

/// Ciphertexts checked per successful attack.
const CHECKS: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Wieschebrink,
    Bl,
    Bbcrs,
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wieschebrink" => Ok(Scheme::Wieschebrink),
            "bl" => Ok(Scheme::Bl),
            "bbcrs" => Ok(Scheme::Bbcrs),
            _ => Err(Error::Parameter(format!("unknown scheme {s:?}; expected wieschebrink, bl or bbcrs"))),
        }
    }
}

/// One parameter row. `r` is the number of random columns for Wieschebrink,
/// `l` for Bogdanov-Lee, and 0 for BBCRS.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchCase {
    pub scheme: Scheme,
    pub q: u64,
    pub n: usize,
    pub k: usize,
    pub r: usize,
    /// Published mean attack time, when there is one.
    pub reference_seconds: Option<f64>,
}

/// One output row; the CSV columns are exactly these fields.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub q: u64,
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub trials: usize,
    pub mean_seconds: f64,
    pub success_rate: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub trials: usize,
    pub cases: Vec<BenchCase>,
}

pub const PRESET_NAMES: [&str; 4] = ["table1-small", "table1-full", "bbcrs-desk", "bl-desk"];

fn wieschebrink_case(q: u64, n: usize, k: usize, r: usize, t: f64) -> BenchCase {
    BenchCase { scheme: Scheme::Wieschebrink, q, n, k, r, reference_seconds: Some(t) }
}

pub fn preset(name: &str) -> Result<Preset> {
    let published = [
        wieschebrink_case(128, 128, 79, 20, 9.22),
        wieschebrink_case(256, 256, 169, 39, 103.84),
        wieschebrink_case(512, 384, 245, 64, 517.78),
        wieschebrink_case(512, 512, 335, 83, 1517.98),
    ];
    let (trials, cases) = match name {
        "table1-small" => (10, published[..1].to_vec()),
        "table1-full" => (100, published.to_vec()),
        "bbcrs-desk" => (
            20,
            vec![BenchCase { scheme: Scheme::Bbcrs, q: 16, n: 15, k: 6, r: 0, reference_seconds: None }],
        ),
        "bl-desk" => (
            20,
            vec![BenchCase { scheme: Scheme::Bl, q: 257, n: 200, k: 20, r: 8, reference_seconds: None }],
        ),
        _ => {
            return Err(Error::Parameter(format!(
                "unknown preset {name:?}; expected one of {}",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    let name = PRESET_NAMES.iter().find(|&&p| p == name).expect("matched above");
    Ok(Preset { name, trials, cases })
}

/// Outcome of one trial: attack seconds, or `None` when the trial failed.
pub fn run_trial(case: &BenchCase, seed: u64, opts: &AttackOptions) -> Result<Option<f64>> {
    let f = Field::of_order(case.q)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let (n, k, r) = (case.n, case.k, case.r);
    match case.scheme {
        Scheme::Wieschebrink => {
            let keys = wieschebrink::keygen(&f, n, k, r, &mut rng)?;
            let public = keys.public.code()?;
            let start = Instant::now();
            let outcome = attacks::attack_wieschebrink(&public, n, k, r, opts, &mut rng);
            let secs = start.elapsed().as_secs_f64();
            let Ok((crack, _)) = outcome else { return Ok(None) };
            let ok = crack.random_positions == keys.secret.random_positions()
                && (0..CHECKS).all(|_| {
                    let m = f.random_vec(k, &mut rng);
                    let c = keys.public.encrypt(&m, &mut rng);
                    attacks::wieschebrink::crack_decrypt(&crack, &keys.public.gen, &c).ok() == Some(m)
                });
            Ok(ok.then_some(secs))
        }
        Scheme::Bl => {
            let keys = bl::keygen(&f, n, k, r, &mut rng)?;
            let public = keys.public.code()?;
            let start = Instant::now();
            let outcome = attacks::attack_bl(&public, r, opts, &mut rng);
            let secs = start.elapsed().as_secs_f64();
            let Ok((crack, _)) = outcome else { return Ok(None) };
            let ok = crack.l == keys.secret.l
                && (0..CHECKS).all(|_| {
                    let c = keys.public.encrypt(f.random(&mut rng), 0.0, &mut rng);
                    attacks::bl::crack_decrypt(&crack, &keys.public.gen, &c).ok() == keys.secret.decrypt(&c).ok()
                });
            Ok(ok.then_some(secs))
        }
        Scheme::Bbcrs => {
            let keys = bbcrs::keygen(&f, n, k, RankOnePart::Random, &mut rng)?;
            let public = keys.public.code()?;
            let start = Instant::now();
            let outcome = attacks::attack_bbcrs(&public, opts, &mut rng);
            let secs = start.elapsed().as_secs_f64();
            let Ok((crack, _)) = outcome else { return Ok(None) };
            let ok = (0..CHECKS).all(|_| {
                let m = f.random_vec(k, &mut rng);
                let c = keys.public.encrypt(&m, &mut rng);
                attacks::bbcrs::crack_decrypt(&crack, &keys.public.gen, &c).ok() == keys.secret.decrypt(&c).ok()
            });
            Ok(ok.then_some(secs))
        }
    }
}

/// Runs `trials` trials of `case` with seeds `seed, seed + 1, ..`. The mean
/// is over successful trials; it is 0 when none succeeded.
pub fn run_case(case: &BenchCase, trials: usize, seed: u64, opts: &AttackOptions) -> Result<BenchRow> {
    let mut times = Vec::new();
    for t in 0..trials {
        if let Some(secs) = run_trial(case, seed.wrapping_add(t as u64), opts)? {
            times.push(secs);
        }
    }
    let mean_seconds = if times.is_empty() { 0.0 } else { times.iter().sum::<f64>() / times.len() as f64 };
    Ok(BenchRow {
        q: case.q,
        n: case.n,
        k: case.k,
        r: case.r,
        trials,
        mean_seconds,
        success_rate: if trials == 0 { 0.0 } else { times.len() as f64 / trials as f64 },
    })
}
