//! Cross-module properties on fuzzed instances.

use grscrack::attacks::{self, AttackOptions, SubcodeChain};
use grscrack::io::{Crack, PublicKey, SecretKey};
use grscrack::schemes::{bbcrs, bl, random_error, wieschebrink, RankOnePart};
use grscrack::{vector, Fe, Field, GrsSpec, LinearCode};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// GRS spec whose first two support points are 0 and 1.
fn normalized_spec(f: &Field, n: usize, k: usize, seed: u64) -> GrsSpec {
    let spec = GrsSpec::random(f, n, k, &mut rng(seed)).unwrap();
    let mut x = spec.x().to_vec();
    for (pos, val) in [(0, Fe::ZERO), (1, Fe::ONE)] {
        match x.iter().position(|&v| v == val) {
            Some(at) => x.swap(at, pos),
            None => x[pos] = val,
        }
    }
    GrsSpec::new(f, k, x, spec.y().to_vec()).unwrap()
}

/// Span of `y_l x_l^(i + t) (x_l - 1)^j` for `t < k - i - j`.
fn oracle_subcode(spec: &GrsSpec, i: usize, j: usize) -> LinearCode {
    let f = spec.field();
    let rows: Vec<Vec<Fe>> = (0..spec.k() - i - j)
        .map(|t| {
            spec.x()
                .iter()
                .zip(spec.y())
                .map(|(&a, &b)| f.mul(b, f.mul(f.pow(a, (i + t) as u64), f.pow(f.sub(a, Fe::ONE), j as u64))))
                .collect()
        })
        .collect();
    LinearCode::from_rows(f, spec.n(), &rows).unwrap()
}

fn field_of(q: u64) -> Field {
    Field::of_order(q).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_axioms(q in prop::sample::select(vec![2u64, 7, 16, 27, 64, 251, 256]), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = field_of(q);
        let e = |v: u32| f.element(v % f.order()).unwrap();
        let (a, b, c) = (e(a), e(b), e(c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), Fe::ZERO);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe::ONE);
            prop_assert_eq!(f.pow(a, u64::from(f.order() - 1)), Fe::ONE);
        }
    }

    #[test]
    fn grs_decoding_corrects_up_to_capacity(q in prop::sample::select(vec![16u64, 31, 64]), seed in any::<u64>()) {
        let f = field_of(q);
        let mut g = rng(seed);
        let n = g.gen_range(4..=q.min(40) as usize);
        let k = g.gen_range(1..n);
        let spec = GrsSpec::random(&f, n, k, &mut g).unwrap();
        let m = f.random_vec(k, &mut g);
        let w = g.gen_range(0..=spec.capacity());
        let cw = spec.encode(&m);
        let received = vector::add(&f, &cw, &random_error(&f, n, w, &mut g));
        let decoded = spec.decode(&received).unwrap();
        prop_assert_eq!(decoded.message, m);
        prop_assert_eq!(decoded.codeword, cw);
    }

    #[test]
    fn dual_spec_describes_the_dual(seed in any::<u64>()) {
        let f = field_of(64);
        let mut g = rng(seed);
        let n = g.gen_range(3..=40);
        let k = g.gen_range(1..n);
        let spec = GrsSpec::random(&f, n, k, &mut g).unwrap();
        prop_assert_eq!(spec.dual_spec().code(), spec.code().dual().unwrap());
    }

    #[test]
    fn subcode_chain_matches_definition(seed in any::<u64>()) {
        let f = field_of(64);
        let mut g = rng(seed);
        let n = g.gen_range(8..=40);
        let k = g.gen_range(2..=n / 2);
        let spec = normalized_spec(&f, n, k, seed);
        let chain = SubcodeChain::build(&spec.code()).unwrap();
        for (&(i, j), code) in chain.iter() {
            prop_assert_eq!(code.dim(), k - i - j);
            prop_assert_eq!(code, &oracle_subcode(&spec, i, j), "C({}, {})", i, j);
        }
    }

    #[test]
    fn recover_grs_round_trips(seed in any::<u64>()) {
        let f = field_of(49);
        let mut g = rng(seed);
        let n = g.gen_range(3..=49);
        let k = g.gen_range(1..n);
        let code = GrsSpec::random(&f, n, k, &mut g).unwrap().code();
        let found = attacks::recover_grs(&code).unwrap();
        prop_assert_eq!(found.code(), code);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn key_records_round_trip(seed in any::<u64>()) {
        let mut g = rng(seed);
        let f31 = field_of(31);
        let f257 = field_of(257);
        let f16 = field_of(16);
        let w = wieschebrink::keygen(&f31, 24, 6, 3, &mut g).unwrap();
        let b = bl::keygen(&f257, 80, 8, 4, &mut g).unwrap();
        let c = bbcrs::keygen(&f16, 15, 6, RankOnePart::Random, &mut g).unwrap();
        let publics = [PublicKey::Wieschebrink(w.public), PublicKey::Bl(b.public), PublicKey::Bbcrs(c.public)];
        let secrets = [SecretKey::Wieschebrink(w.secret), SecretKey::Bl(b.secret), SecretKey::Bbcrs(c.secret)];
        for pk in publics {
            let back: PublicKey = serde_json::from_str(&serde_json::to_string(&pk).unwrap()).unwrap();
            prop_assert_eq!(back, pk);
        }
        for sk in secrets {
            let back: SecretKey = serde_json::from_str(&serde_json::to_string(&sk).unwrap()).unwrap();
            prop_assert_eq!(back, sk);
        }
    }

    #[test]
    fn wieschebrink_public_code_is_grs_off_the_random_columns(seed in any::<u64>()) {
        let f = field_of(64);
        let keys = wieschebrink::keygen(&f, 40, 12, 5, &mut rng(seed)).unwrap();
        let punctured = keys.public.code().unwrap().puncture(&keys.secret.random_positions()).unwrap();
        prop_assert!(attacks::recover_grs(&punctured).is_ok());
        let report = keys.public.code().unwrap().square_dim_report();
        prop_assert!(report.dim_sq <= 2 * 12 - 1 + 5);
    }
}

/// Serialized cracks decrypt exactly like the secret key, for every scheme.
#[test]
fn every_crack_record_decrypts() {
    let opts = AttackOptions::default();
    for seed in 0..3u64 {
        let mut g = rng(seed);
        let cases: Vec<(PublicKey, SecretKey)> = {
            let f31 = field_of(31);
            let f257 = field_of(257);
            let f16 = field_of(16);
            let w = wieschebrink::keygen(&f31, 24, 6, 3, &mut g).unwrap();
            let b = bl::keygen(&f257, 80, 8, 4, &mut g).unwrap();
            let c = bbcrs::keygen(&f16, 15, 6, RankOnePart::Random, &mut g).unwrap();
            vec![
                (PublicKey::Wieschebrink(w.public), SecretKey::Wieschebrink(w.secret)),
                (PublicKey::Bl(b.public), SecretKey::Bl(b.secret)),
                (PublicKey::Bbcrs(c.public), SecretKey::Bbcrs(c.secret)),
            ]
        };
        for (pk, sk) in cases {
            let code = LinearCode::from_generator(pk.generator()).unwrap();
            let crack = match &pk {
                PublicKey::Wieschebrink(p) => {
                    Crack::Wieschebrink(attacks::attack_wieschebrink(&code, p.n, p.k, p.r, &opts, &mut g).unwrap().0)
                }
                PublicKey::Bl(p) => Crack::Bl(attacks::attack_bl(&code, p.ell, &opts, &mut g).unwrap().0),
                PublicKey::Bbcrs(_) => Crack::Bbcrs(attacks::attack_bbcrs(&code, &opts, &mut g).unwrap().0),
            };
            let crack: Crack = serde_json::from_str(&serde_json::to_string(&crack).unwrap()).unwrap();
            for _ in 0..30 {
                let c = match &pk {
                    PublicKey::Wieschebrink(p) => p.encrypt(&p.field().random_vec(p.k, &mut g), &mut g),
                    PublicKey::Bl(p) => p.encrypt(p.field().random(&mut g), 0.0, &mut g),
                    PublicKey::Bbcrs(p) => p.encrypt(&p.field().random_vec(p.k(), &mut g), &mut g),
                };
                assert_eq!(crack.decrypt(&pk, &c).unwrap(), sk.decrypt(&c).unwrap(), "{} seed {seed}", pk.scheme());
            }
        }
    }
}
