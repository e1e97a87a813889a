//! JSON records for codes, keys, ciphertexts and cracks.
//!
//! Field elements are written as integer codes and every record that holds
//! elements carries its field, so records load without outside context.
//! Keys and cracks are tagged by `"scheme"`.

use serde::{Deserialize, Serialize};

use crate::attacks::{BbcrsCrack, BlCrack, WieschebrinkCrack};
use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::field::{Fe, Field, FieldSpec};
use crate::grs::GrsSpec;
use crate::matrix::Matrix;
use crate::schemes::{
    BbcrsPublicKey, BbcrsSecretKey, BlPublicKey, BlSecretKey, WieschebrinkPublicKey, WieschebrinkSecretKey,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub cols: usize,
    pub rows: Vec<Vec<u32>>,
}

/// Support and multipliers of a GRS code over a field given elsewhere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrsJson {
    pub k: usize,
    pub x: Vec<u32>,
    pub y: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeJson {
    pub field: FieldSpec,
    pub generator: MatrixJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrsSpecJson {
    pub field: FieldSpec,
    #[serde(flatten)]
    pub spec: GrsJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CiphertextJson {
    pub c: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MessageJson {
    pub m: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "lowercase")]
pub enum PublicKeyJson {
    Wieschebrink { field: FieldSpec, n: usize, k: usize, r: usize, gen: MatrixJson },
    Bl { field: FieldSpec, ell: usize, gen: MatrixJson },
    Bbcrs { field: FieldSpec, gen: MatrixJson },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "lowercase")]
pub enum SecretKeyJson {
    Wieschebrink { field: FieldSpec, spec: GrsJson, random_cols: MatrixJson, s: MatrixJson, perm: Vec<usize> },
    Bl { field: FieldSpec, ell: usize, l: Vec<usize>, x: Vec<u32>, g: MatrixJson, s: MatrixJson },
    Bbcrs { field: FieldSpec, spec: GrsJson, s: MatrixJson, perm: Vec<usize>, alpha: Vec<u32>, beta: Vec<u32> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "lowercase")]
pub enum CrackJson {
    Wieschebrink { field: FieldSpec, random_positions: Vec<usize>, recovered_spec: GrsJson },
    Bl { field: FieldSpec, l: Vec<usize>, y: Vec<u32> },
    Bbcrs { field: FieldSpec, c_spec: GrsJson, a0: Vec<u32>, lambda0: Vec<u32>, dual_path: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PublicKeyJson", into = "PublicKeyJson")]
pub enum PublicKey {
    Wieschebrink(WieschebrinkPublicKey),
    Bl(BlPublicKey),
    Bbcrs(BbcrsPublicKey),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SecretKeyJson", into = "SecretKeyJson")]
pub enum SecretKey {
    Wieschebrink(WieschebrinkSecretKey),
    Bl(BlSecretKey),
    Bbcrs(BbcrsSecretKey),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CrackJson", into = "CrackJson")]
pub enum Crack {
    Wieschebrink(WieschebrinkCrack),
    Bl(BlCrack),
    Bbcrs(BbcrsCrack),
}

pub fn codes(v: &[Fe]) -> Vec<u32> {
    v.iter().map(|e| e.code()).collect()
}

/// Elements from integer codes; `what` names the record field in errors.
pub fn elements(f: &Field, what: &str, codes: &[u32]) -> Result<Vec<Fe>> {
    f.elements_from(codes).map_err(|e| Error::Format(format!("{what}: {e}")))
}

fn field(spec: &FieldSpec) -> Result<Field> {
    Field::new(spec.clone()).map_err(|e| Error::Format(format!("field: {e}")))
}

fn matrix_json(m: &Matrix) -> MatrixJson {
    MatrixJson { cols: m.cols(), rows: m.row_iter().map(codes).collect() }
}

fn matrix(f: &Field, what: &str, m: &MatrixJson) -> Result<Matrix> {
    let rows = m
        .rows
        .iter()
        .map(|r| {
            if r.len() != m.cols {
                return Err(Error::Format(format!("{what}: row of length {}, expected {}", r.len(), m.cols)));
            }
            elements(f, what, r)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_rows(f, m.cols, &rows))
}

fn grs_json(spec: &GrsSpec) -> GrsJson {
    GrsJson { k: spec.k(), x: codes(spec.x()), y: codes(spec.y()) }
}

fn grs(f: &Field, what: &str, g: &GrsJson) -> Result<GrsSpec> {
    let x = elements(f, &format!("{what}.x"), &g.x)?;
    let y = elements(f, &format!("{what}.y"), &g.y)?;
    GrsSpec::new(f, g.k, x, y).map_err(|e| Error::Format(format!("{what}: {e}")))
}

fn check_len<T>(what: &str, v: &[T], len: usize) -> Result<()> {
    if v.len() != len {
        return Err(Error::Format(format!("{what}: length {}, expected {len}", v.len())));
    }
    Ok(())
}

fn check_shape(what: &str, m: &Matrix, rows: usize, cols: usize) -> Result<()> {
    if m.shape() != (rows, cols) {
        return Err(Error::Format(format!("{what}: shape {:?}, expected ({rows}, {cols})", m.shape())));
    }
    Ok(())
}

fn check_invertible(what: &str, m: &Matrix) -> Result<()> {
    if m.rows() != m.cols() || m.rank() != m.rows() {
        return Err(Error::Format(format!("{what}: not an invertible square matrix")));
    }
    Ok(())
}

fn check_permutation(what: &str, perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    let ok = perm.len() == n && perm.iter().all(|&j| j < n && !std::mem::replace(&mut seen[j], true));
    if !ok {
        return Err(Error::Format(format!("{what}: not a permutation of 0..{n}")));
    }
    Ok(())
}

/// Strictly increasing positions below `n`.
fn check_positions(what: &str, pos: &[usize], n: usize) -> Result<()> {
    let ok = pos.windows(2).all(|w| w[0] < w[1]) && pos.last().is_none_or(|&p| p < n);
    if !ok {
        return Err(Error::Format(format!("{what}: positions must be increasing and below {n}")));
    }
    Ok(())
}

impl From<&LinearCode> for CodeJson {
    fn from(c: &LinearCode) -> Self {
        CodeJson { field: c.field().spec().clone(), generator: matrix_json(c.generator()) }
    }
}

impl TryFrom<&CodeJson> for LinearCode {
    type Error = Error;

    fn try_from(j: &CodeJson) -> Result<Self> {
        let f = field(&j.field)?;
        let g = matrix(&f, "generator", &j.generator)?;
        LinearCode::from_generator(&g).map_err(|e| Error::Format(format!("generator: {e}")))
    }
}

impl From<&GrsSpec> for GrsSpecJson {
    fn from(s: &GrsSpec) -> Self {
        GrsSpecJson { field: s.field().spec().clone(), spec: grs_json(s) }
    }
}

impl TryFrom<&GrsSpecJson> for GrsSpec {
    type Error = Error;

    fn try_from(j: &GrsSpecJson) -> Result<Self> {
        grs(&field(&j.field)?, "spec", &j.spec)
    }
}

impl From<PublicKey> for PublicKeyJson {
    fn from(k: PublicKey) -> Self {
        match k {
            PublicKey::Wieschebrink(pk) => PublicKeyJson::Wieschebrink {
                field: pk.field().spec().clone(),
                n: pk.n,
                k: pk.k,
                r: pk.r,
                gen: matrix_json(&pk.gen),
            },
            PublicKey::Bl(pk) => {
                PublicKeyJson::Bl { field: pk.field().spec().clone(), ell: pk.ell, gen: matrix_json(&pk.gen) }
            }
            PublicKey::Bbcrs(pk) => PublicKeyJson::Bbcrs { field: pk.field().spec().clone(), gen: matrix_json(&pk.gen) },
        }
    }
}

impl TryFrom<PublicKeyJson> for PublicKey {
    type Error = Error;

    fn try_from(j: PublicKeyJson) -> Result<Self> {
        Ok(match j {
            PublicKeyJson::Wieschebrink { field: spec, n, k, r, gen } => {
                let f = field(&spec)?;
                let gen = matrix(&f, "gen", &gen)?;
                check_shape("gen", &gen, k, n + r)?;
                PublicKey::Wieschebrink(WieschebrinkPublicKey { n, k, r, gen })
            }
            PublicKeyJson::Bl { field: spec, ell, gen } => {
                let f = field(&spec)?;
                PublicKey::Bl(BlPublicKey { ell, gen: matrix(&f, "gen", &gen)? })
            }
            PublicKeyJson::Bbcrs { field: spec, gen } => {
                let f = field(&spec)?;
                PublicKey::Bbcrs(BbcrsPublicKey { gen: matrix(&f, "gen", &gen)? })
            }
        })
    }
}

impl From<SecretKey> for SecretKeyJson {
    fn from(k: SecretKey) -> Self {
        match k {
            SecretKey::Wieschebrink(sk) => SecretKeyJson::Wieschebrink {
                field: sk.spec.field().spec().clone(),
                spec: grs_json(&sk.spec),
                random_cols: matrix_json(&sk.random_cols),
                s: matrix_json(&sk.s),
                perm: sk.perm,
            },
            SecretKey::Bl(sk) => SecretKeyJson::Bl {
                field: sk.g.field().spec().clone(),
                ell: sk.ell,
                l: sk.l,
                x: codes(&sk.x),
                g: matrix_json(&sk.g),
                s: matrix_json(&sk.s),
            },
            SecretKey::Bbcrs(sk) => SecretKeyJson::Bbcrs {
                field: sk.spec.field().spec().clone(),
                spec: grs_json(&sk.spec),
                s: matrix_json(&sk.s),
                perm: sk.perm,
                alpha: codes(&sk.alpha),
                beta: codes(&sk.beta),
            },
        }
    }
}

impl TryFrom<SecretKeyJson> for SecretKey {
    type Error = Error;

    fn try_from(j: SecretKeyJson) -> Result<Self> {
        Ok(match j {
            SecretKeyJson::Wieschebrink { field: fs, spec, random_cols, s, perm } => {
                let f = field(&fs)?;
                let spec = grs(&f, "spec", &spec)?;
                let random_cols = matrix(&f, "random_cols", &random_cols)?;
                let s = matrix(&f, "s", &s)?;
                check_shape("random_cols", &random_cols, spec.k(), random_cols.cols())?;
                check_invertible("s", &s)?;
                check_shape("s", &s, spec.k(), spec.k())?;
                check_permutation("perm", &perm, spec.n() + random_cols.cols())?;
                SecretKey::Wieschebrink(WieschebrinkSecretKey { spec, random_cols, s, perm })
            }
            SecretKeyJson::Bl { field: fs, ell, l, x, g, s } => {
                let f = field(&fs)?;
                let g = matrix(&f, "g", &g)?;
                let s = matrix(&f, "s", &s)?;
                let x = elements(&f, "x", &x)?;
                check_len("x", &x, g.cols())?;
                check_len("l", &l, 3 * ell)?;
                check_positions("l", &l, g.cols())?;
                check_invertible("s", &s)?;
                check_shape("s", &s, g.rows(), g.rows())?;
                SecretKey::Bl(BlSecretKey { ell, l, x, g, s })
            }
            SecretKeyJson::Bbcrs { field: fs, spec, s, perm, alpha, beta } => {
                let f = field(&fs)?;
                let spec = grs(&f, "spec", &spec)?;
                let s = matrix(&f, "s", &s)?;
                let alpha = elements(&f, "alpha", &alpha)?;
                let beta = elements(&f, "beta", &beta)?;
                check_invertible("s", &s)?;
                check_shape("s", &s, spec.k(), spec.k())?;
                check_permutation("perm", &perm, spec.n())?;
                check_len("alpha", &alpha, spec.n())?;
                check_len("beta", &beta, spec.n())?;
                let sk = BbcrsSecretKey { spec, s, perm, alpha, beta };
                if sk.q_inverse().is_none() {
                    return Err(Error::Format("alpha, beta: Q is not invertible".into()));
                }
                SecretKey::Bbcrs(sk)
            }
        })
    }
}

impl From<Crack> for CrackJson {
    fn from(c: Crack) -> Self {
        match c {
            Crack::Wieschebrink(c) => CrackJson::Wieschebrink {
                field: c.recovered_spec.field().spec().clone(),
                random_positions: c.random_positions,
                recovered_spec: grs_json(&c.recovered_spec),
            },
            Crack::Bl(c) => CrackJson::Bl { field: c.field.spec().clone(), l: c.l, y: codes(&c.y) },
            Crack::Bbcrs(c) => CrackJson::Bbcrs {
                field: c.c_spec.field().spec().clone(),
                c_spec: grs_json(&c.c_spec),
                a0: codes(&c.a0),
                lambda0: codes(&c.lambda0),
                dual_path: c.dual_path,
            },
        }
    }
}

impl TryFrom<CrackJson> for Crack {
    type Error = Error;

    fn try_from(j: CrackJson) -> Result<Self> {
        Ok(match j {
            CrackJson::Wieschebrink { field: fs, random_positions, recovered_spec } => {
                let f = field(&fs)?;
                let recovered_spec = grs(&f, "recovered_spec", &recovered_spec)?;
                let len = recovered_spec.n() + random_positions.len();
                check_positions("random_positions", &random_positions, len)?;
                Crack::Wieschebrink(WieschebrinkCrack { random_positions, recovered_spec })
            }
            CrackJson::Bl { field: fs, l, y } => {
                let f = field(&fs)?;
                let y = elements(&f, "y", &y)?;
                check_positions("l", &l, y.len())?;
                Crack::Bl(BlCrack { field: f, l, y })
            }
            CrackJson::Bbcrs { field: fs, c_spec, a0, lambda0, dual_path } => {
                let f = field(&fs)?;
                let c_spec = grs(&f, "c_spec", &c_spec)?;
                let a0 = elements(&f, "a0", &a0)?;
                let lambda0 = elements(&f, "lambda0", &lambda0)?;
                check_len("a0", &a0, c_spec.n())?;
                check_len("lambda0", &lambda0, c_spec.n())?;
                Crack::Bbcrs(BbcrsCrack { c_spec, a0, lambda0, dual_path })
            }
        })
    }
}

impl PublicKey {
    pub fn field(&self) -> &Field {
        match self {
            PublicKey::Wieschebrink(pk) => pk.field(),
            PublicKey::Bl(pk) => pk.field(),
            PublicKey::Bbcrs(pk) => pk.field(),
        }
    }

    pub fn generator(&self) -> &Matrix {
        match self {
            PublicKey::Wieschebrink(pk) => &pk.gen,
            PublicKey::Bl(pk) => &pk.gen,
            PublicKey::Bbcrs(pk) => &pk.gen,
        }
    }

    pub fn scheme(&self) -> &'static str {
        match self {
            PublicKey::Wieschebrink(_) => "wieschebrink",
            PublicKey::Bl(_) => "bl",
            PublicKey::Bbcrs(_) => "bbcrs",
        }
    }
}

impl SecretKey {
    pub fn field(&self) -> &Field {
        match self {
            SecretKey::Wieschebrink(sk) => sk.spec.field(),
            SecretKey::Bl(sk) => sk.g.field(),
            SecretKey::Bbcrs(sk) => sk.spec.field(),
        }
    }

    /// Messages are vectors; a Bogdanov-Lee message is a single element.
    pub fn decrypt(&self, c: &[Fe]) -> Result<Vec<Fe>> {
        match self {
            SecretKey::Wieschebrink(sk) => sk.decrypt(c),
            SecretKey::Bl(sk) => sk.decrypt(c).map(|m| vec![m]),
            SecretKey::Bbcrs(sk) => sk.decrypt(c),
        }
    }
}

impl Crack {
    pub fn scheme(&self) -> &'static str {
        match self {
            Crack::Wieschebrink(_) => "wieschebrink",
            Crack::Bl(_) => "bl",
            Crack::Bbcrs(_) => "bbcrs",
        }
    }

    /// Decrypts with the crack and the public key it was computed from.
    pub fn decrypt(&self, public: &PublicKey, c: &[Fe]) -> Result<Vec<Fe>> {
        match (self, public) {
            (Crack::Wieschebrink(cr), PublicKey::Wieschebrink(pk)) => {
                crate::attacks::wieschebrink::crack_decrypt(cr, &pk.gen, c)
            }
            (Crack::Bl(cr), PublicKey::Bl(pk)) => crate::attacks::bl::crack_decrypt(cr, &pk.gen, c).map(|m| vec![m]),
            (Crack::Bbcrs(cr), PublicKey::Bbcrs(pk)) => crate::attacks::bbcrs::crack_decrypt(cr, &pk.gen, c),
            _ => Err(Error::Parameter(format!(
                "crack is for {} but the public key is for {}",
                self.scheme(),
                public.scheme()
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::{bbcrs, bl, wieschebrink, RankOnePart};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn round_trip<T>(v: &T) -> T
    where
        T: Serialize + for<'de> Deserialize<'de> + PartialEq + std::fmt::Debug,
    {
        let text = serde_json::to_string(v).unwrap();
        let back: T = serde_json::from_str(&text).unwrap();
        assert_eq!(&back, v);
        back
    }

    #[test]
    fn keys_round_trip() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let f = Field::of_order(64).unwrap();
        let w = wieschebrink::keygen(&f, 30, 8, 3, &mut rng).unwrap();
        round_trip(&PublicKey::Wieschebrink(w.public));
        round_trip(&SecretKey::Wieschebrink(w.secret));
        let f = Field::of_order(257).unwrap();
        let b = bl::keygen(&f, 40, 6, 3, &mut rng).unwrap();
        round_trip(&PublicKey::Bl(b.public));
        round_trip(&SecretKey::Bl(b.secret));
        let f = Field::of_order(16).unwrap();
        let c = bbcrs::keygen(&f, 15, 6, RankOnePart::Random, &mut rng).unwrap();
        round_trip(&PublicKey::Bbcrs(c.public));
        round_trip(&SecretKey::Bbcrs(c.secret));
    }

    #[test]
    fn records_carry_a_scheme_tag() {
        let f = Field::of_order(16).unwrap();
        let c = bbcrs::keygen(&f, 15, 6, RankOnePart::Random, &mut ChaCha20Rng::seed_from_u64(2)).unwrap();
        let v = serde_json::to_value(PublicKey::Bbcrs(c.public)).unwrap();
        assert_eq!(v["scheme"], "bbcrs");
        assert_eq!(v["field"]["p"], 2);
    }

    #[test]
    fn codes_and_specs_round_trip() {
        let f = Field::of_order(31).unwrap();
        let spec = GrsSpec::random(&f, 12, 5, &mut ChaCha20Rng::seed_from_u64(3)).unwrap();
        let j = GrsSpecJson::from(&spec);
        assert_eq!(GrsSpec::try_from(&round_trip(&j)).unwrap(), spec);
        let code = spec.code();
        let j = CodeJson::from(&code);
        assert_eq!(LinearCode::try_from(&round_trip(&j)).unwrap(), code);
    }

    #[test]
    fn malformed_records_name_the_field() {
        let f = Field::of_order(16).unwrap();
        let c = bbcrs::keygen(&f, 15, 6, RankOnePart::Random, &mut ChaCha20Rng::seed_from_u64(4)).unwrap();
        let mut v = serde_json::to_value(SecretKey::Bbcrs(c.secret)).unwrap();
        v["alpha"][0] = 16.into();
        let err = serde_json::from_value::<SecretKey>(v.clone()).unwrap_err().to_string();
        assert!(err.contains("alpha"), "{err}");
        v["alpha"][0] = 0.into();
        v["perm"][0] = v["perm"][1].clone();
        let err = serde_json::from_value::<SecretKey>(v.clone()).unwrap_err().to_string();
        assert!(err.contains("perm"), "{err}");
        v.as_object_mut().unwrap().remove("beta");
        let err = serde_json::from_value::<SecretKey>(v).unwrap_err().to_string();
        assert!(err.contains("beta"), "{err}");
    }

    #[test]
    fn bad_field_is_rejected() {
        let j = r#"{"field": {"p": 4, "m": 1, "modulus": [0, 1]}, "generator": {"cols": 2, "rows": [[1, 0]]}}"#;
        let code: CodeJson = serde_json::from_str(j).unwrap();
        let err = LinearCode::try_from(&code).unwrap_err().to_string();
        assert!(err.contains("field"), "{err}");
    }
}
