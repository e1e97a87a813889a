//! Arithmetic in finite fields `GF(p^m)`.
//!
//! Elements are encoded as a single integer in `[0, q)`: the coefficients
//! `(c_0, .., c_{m-1})` of the polynomial representative, read as base-`p`
//! digits. Code `0` is the additive identity and code `1` the multiplicative
//! identity, for every `(p, m)`.
//!
//! Fields with `q <= 2^16` multiply through log/antilog tables built from a
//! generator found at construction time; larger fields fall back to
//! polynomial arithmetic on the digit representation.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 20;

const TABLE_LIMIT: u32 = 1 << 16;
const ADD_TABLE_LIMIT: u32 = 1 << 10;

/// Primitive polynomials over GF(2), bit `i` is the coefficient of `x^i`.
const BINARY_MODULI: [u32; 17] = [
    0, 0b11, 0b111, 0b1011, 0x13, 0x25, 0x43, 0x83, 0x11d, 0x211, 0x409, 0x805, 0x1053, 0x201b,
    0x4443, 0x8003, 0x1100b,
];

/// A field element, stored as its integer code.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
#[repr(transparent)]
pub struct Fe(u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub const fn code(self) -> u32 {
        self.0
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Serializable description of `GF(p^m)`: `{"p": .., "m": .., "modulus": [..]}`.
///
/// `modulus` lists the `m + 1` coefficients of the monic defining polynomial,
/// constant term first. Prime fields use `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub m: u32,
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.m)
    }

    /// Prime field `GF(p)`.
    pub fn prime(p: u32) -> Result<Self> {
        Self::with_default_modulus(p, 1)
    }

    /// `GF(p^m)` with the default modulus: a fixed primitive polynomial table
    /// for `p = 2`, otherwise the smallest monic irreducible polynomial in code
    /// order.
    pub fn with_default_modulus(p: u32, m: u32) -> Result<Self> {
        check_size(p, m)?;
        let modulus = if m == 1 {
            vec![0, 1]
        } else if p == 2 && (m as usize) < BINARY_MODULI.len() {
            let bits = BINARY_MODULI[m as usize];
            (0..=m).map(|i| (bits >> i) & 1).collect()
        } else {
            smallest_irreducible(p, m)
        };
        Ok(FieldSpec { p, m, modulus })
    }

    /// Field of order `q`, which must be a prime power.
    pub fn from_order(q: u64) -> Result<Self> {
        let (p, m) = prime_power(q).ok_or_else(|| {
            Error::InvalidField(format!("field order {q} is not a prime power"))
        })?;
        Self::with_default_modulus(p, m)
    }

    pub fn validate(&self) -> Result<()> {
        check_size(self.p, self.m)?;
        let m = self.m as usize;
        if self.modulus.len() != m + 1 {
            return Err(Error::InvalidField(format!(
                "modulus must have {} coefficients, got {}",
                m + 1,
                self.modulus.len()
            )));
        }
        if self.modulus.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidField("modulus coefficient out of range".into()));
        }
        if self.modulus[m] != 1 {
            return Err(Error::InvalidField("modulus is not monic".into()));
        }
        if m >= 2 && !is_irreducible(&self.modulus, self.p) {
            return Err(Error::InvalidField("modulus is reducible".into()));
        }
        Ok(())
    }
}

fn check_size(p: u32, m: u32) -> Result<()> {
    if !is_prime(p as u64) {
        return Err(Error::InvalidField(format!("characteristic {p} is not prime")));
    }
    if m == 0 {
        return Err(Error::InvalidField("extension degree must be at least 1".into()));
    }
    match (p as u64).checked_pow(m) {
        Some(q) if q <= MAX_ORDER => Ok(()),
        _ => Err(Error::InvalidField(format!("field {p}^{m} exceeds 2^20 elements"))),
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let (mut rest, mut m) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p as u32, m))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Polynomials over GF(p) as coefficient vectors, constant term first.

fn trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let p64 = p as u64;
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db] as u64, p64);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let f = (*r.last().unwrap() as u64 * lead_inv) % p64;
        for (i, &bc) in b.iter().enumerate() {
            let t = (f * bc as u64) % p64;
            r[shift + i] = ((r[shift + i] as u64 + p64 - t) % p64) as u32;
        }
        trim(&mut r);
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    acc
}

fn digits_of(mut code: u64, p: u64, len: usize) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let d = code % p;
            code /= p;
            d as u32
        })
        .collect()
}

/// Trial division by every monic polynomial of degree `1..=m/2`.
fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let m = modulus.len() - 1;
    for d in 1..=m / 2 {
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let mut divisor = digits_of(low, p as u64, d);
            divisor.push(1);
            if poly_rem(modulus, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u32, m: u32) -> Vec<u32> {
    let count = (p as u64).pow(m);
    (0..count)
        .map(|low| {
            let mut cand = digits_of(low, p as u64, m as usize);
            cand.push(1);
            cand
        })
        .find(|cand| is_irreducible(cand, p))
        .expect("irreducible polynomials exist in every degree")
}

#[derive(Debug)]
enum AddKind {
    Xor,
    ModP,
    Table(Vec<u32>),
    Digits,
}

#[derive(Debug)]
enum MulKind {
    Log { log: Vec<u32>, exp: Vec<u32> },
    ModP,
    Poly,
}

#[derive(Debug)]
struct Inner {
    spec: FieldSpec,
    p: u32,
    m: u32,
    q: u32,
    add: AddKind,
    mul: MulKind,
    neg: Option<Vec<u32>>,
}

/// An arithmetic context for `GF(p^m)`. Cheap to clone and shareable across
/// threads; all tables are immutable after construction.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.m)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Field {}

impl Field {
    pub fn new(spec: FieldSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Self::build(spec, true))
    }

    /// `GF(q)` with the default modulus.
    pub fn of_order(q: u64) -> Result<Self> {
        Self::new(FieldSpec::from_order(q)?)
    }

    /// Builds the field without tables or prime-field shortcuts, using
    /// polynomial arithmetic only. Used to cross-check the fast paths.
    pub fn reference(spec: FieldSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Self::build(spec, false))
    }

    fn build(spec: FieldSpec, fast: bool) -> Self {
        let (p, m) = (spec.p, spec.m);
        let q = spec.order() as u32;
        let mut inner = Inner {
            spec,
            p,
            m,
            q,
            add: AddKind::Digits,
            mul: MulKind::Poly,
            neg: None,
        };
        if fast {
            inner.add = if p == 2 {
                AddKind::Xor
            } else if m == 1 {
                AddKind::ModP
            } else {
                AddKind::Digits
            };
            if m == 1 {
                inner.mul = MulKind::ModP;
            }
            if q <= TABLE_LIMIT {
                inner.mul = build_log_tables(&inner);
            }
            if p != 2 && m > 1 {
                let neg: Vec<u32> = (0..q).map(|a| inner.neg_digits(a)).collect();
                if q <= ADD_TABLE_LIMIT {
                    let mut table = vec![0u32; (q * q) as usize];
                    for a in 0..q {
                        for b in 0..q {
                            table[(a * q + b) as usize] = inner.add_digits(a, b);
                        }
                    }
                    inner.add = AddKind::Table(table);
                }
                inner.neg = Some(neg);
            }
        }
        Field(Arc::new(inner))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.m
    }

    pub fn order(&self) -> u32 {
        self.0.q
    }

    /// Checked conversion from an integer code.
    pub fn element(&self, code: u32) -> Result<Fe> {
        if code < self.0.q {
            Ok(Fe(code))
        } else {
            Err(Error::Domain(format!(
                "element code {code} out of range for a field of order {}",
                self.0.q
            )))
        }
    }

    /// Checked conversion of a slice of codes.
    pub fn elements_from(&self, codes: &[u32]) -> Result<Vec<Fe>> {
        codes.iter().map(|&c| self.element(c)).collect()
    }

    /// All `q` elements in code order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        (0..self.0.q).map(Fe)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        Fe(rng.gen_range(0..self.0.q))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        Fe(rng.gen_range(1..self.0.q))
    }

    pub fn random_vec<R: Rng + ?Sized>(&self, len: usize, rng: &mut R) -> Vec<Fe> {
        (0..len).map(|_| self.random(rng)).collect()
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let inner = &*self.0;
        Fe(match &inner.add {
            AddKind::Xor => a.0 ^ b.0,
            AddKind::ModP => {
                let s = a.0 + b.0;
                if s >= inner.p {
                    s - inner.p
                } else {
                    s
                }
            }
            AddKind::Table(t) => t[(a.0 * inner.q + b.0) as usize],
            AddKind::Digits => inner.add_digits(a.0, b.0),
        })
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        let inner = &*self.0;
        if inner.p == 2 {
            return a;
        }
        if let Some(neg) = &inner.neg {
            return Fe(neg[a.0 as usize]);
        }
        if inner.m == 1 {
            return Fe(if a.0 == 0 { 0 } else { inner.p - a.0 });
        }
        Fe(inner.neg_digits(a.0))
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        let inner = &*self.0;
        match &inner.mul {
            MulKind::Log { log, exp } => {
                if a.0 == 0 || b.0 == 0 {
                    Fe::ZERO
                } else {
                    Fe(exp[(log[a.0 as usize] + log[b.0 as usize]) as usize])
                }
            }
            MulKind::ModP => Fe(((a.0 as u64 * b.0 as u64) % inner.p as u64) as u32),
            MulKind::Poly => Fe(inner.mul_poly(a.0, b.0)),
        }
    }

    /// Multiplicative inverse; fails on zero.
    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let inner = &*self.0;
        Ok(match &inner.mul {
            MulKind::Log { log, exp } => Fe(exp[((inner.q - 1) - log[a.0 as usize]) as usize]),
            _ => self.pow(a, inner.q as u64 - 2),
        })
    }

    /// `a / b`; fails when `b` is zero.
    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` with the convention `0^0 = 1`.
    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.is_zero() {
            return Fe::ZERO;
        }
        let inner = &*self.0;
        if let MulKind::Log { log, exp } = &inner.mul {
            let order = (inner.q - 1) as u64;
            let l = (log[a.0 as usize] as u64 * (e % order)) % order;
            return Fe(exp[l as usize]);
        }
        let (mut base, mut e, mut acc) = (a, e, Fe::ONE);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// The element whose code is the integer `n mod p` (the image of `n` in the
    /// prime subfield).
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// `dst[i] += coef * src[i]`. This is the elimination kernel.
    #[inline]
    pub fn axpy(&self, dst: &mut [Fe], coef: Fe, src: &[Fe]) {
        debug_assert_eq!(dst.len(), src.len());
        if coef.is_zero() {
            return;
        }
        let inner = &*self.0;
        match (&inner.mul, &inner.add) {
            (MulKind::Log { log, exp }, AddKind::Xor) => {
                let lc = log[coef.0 as usize] as usize;
                for (d, s) in dst.iter_mut().zip(src) {
                    if s.0 != 0 {
                        d.0 ^= exp[lc + log[s.0 as usize] as usize];
                    }
                }
            }
            (MulKind::Log { log, exp }, AddKind::ModP) => {
                let lc = log[coef.0 as usize] as usize;
                let p = inner.p;
                for (d, s) in dst.iter_mut().zip(src) {
                    if s.0 != 0 {
                        let v = d.0 + exp[lc + log[s.0 as usize] as usize];
                        d.0 = if v >= p { v - p } else { v };
                    }
                }
            }
            _ => {
                for (d, s) in dst.iter_mut().zip(src) {
                    if s.0 != 0 {
                        *d = self.add(*d, self.mul(coef, *s));
                    }
                }
            }
        }
    }

    /// `v[i] *= c`.
    #[inline]
    pub fn scale_in_place(&self, v: &mut [Fe], c: Fe) {
        if c == Fe::ONE {
            return;
        }
        for x in v.iter_mut() {
            *x = self.mul(*x, c);
        }
    }
}

impl Inner {
    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.m {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * place;
            place *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    fn neg_digits(&self, mut a: u32) -> u32 {
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.m {
            let d = (self.p - a % self.p) % self.p;
            out += d * place;
            place *= self.p;
            a /= self.p;
        }
        out
    }

    fn mul_poly(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let m = self.m as usize;
        let da = digits_of(a as u64, p, m);
        let db = digits_of(b as u64, p, m);
        let mut prod = vec![0u32; 2 * m - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p) as u32;
            }
        }
        let rem = poly_rem(&prod, &self.spec.modulus, self.p);
        rem.iter().rev().fold(0u32, |acc, &d| acc * self.p + d)
    }

    fn pow_poly(&self, a: u32, mut e: u64) -> u32 {
        let (mut base, mut acc) = (a, 1u32);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_poly(acc, base);
            }
            base = self.mul_poly(base, base);
            e >>= 1;
        }
        acc
    }
}

fn build_log_tables(inner: &Inner) -> MulKind {
    let q = inner.q;
    let order = (q - 1) as u64;
    let factors = prime_factors(order);
    let generator = (1..q)
        .find(|&g| {
            inner.pow_poly(g, order) == 1
                && factors.iter().all(|&r| inner.pow_poly(g, order / r) != 1)
        })
        .expect("the multiplicative group of a finite field is cyclic");
    let mut log = vec![0u32; q as usize];
    let mut exp = vec![0u32; 2 * (q as usize)];
    let mut x = 1u32;
    for i in 0..(q - 1) {
        exp[i as usize] = x;
        log[x as usize] = i;
        x = inner.mul_poly(x, generator);
    }
    for i in (q - 1)..(2 * q) {
        exp[i as usize] = exp[(i - (q - 1)) as usize];
    }
    MulKind::Log { log, exp }
}
