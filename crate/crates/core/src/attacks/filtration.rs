//! Recovery of `(x, y)` from a generator matrix of a GRS code.
//!
//! Positions 0 and 1 are taken as the support points 0 and 1. `C(i, j)` is the
//! subcode of evaluations of multiples of `x^i (x - 1)^j`; it is computed from
//! `C(i, j)` and `C(i - 1, j)` using
//! `C(i + 1, j) = {c in C(i, j) : c * C(i - 1, j) in C(i, j)^2}`.
//! The two one-dimensional ends `C(k - 1, 0)` and `C(k - 2, 1)` reveal the
//! support through the ratio of their generators.

use std::collections::BTreeMap;

use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::grs::GrsSpec;
use crate::matrix::Matrix;
use crate::poly;
use crate::vector;

/// The subcodes `C(i, j)` computed so far, keyed by `(i, j)`.
#[derive(Clone, Debug)]
pub struct SubcodeChain {
    base: LinearCode,
    codes: BTreeMap<(usize, usize), LinearCode>,
}

impl SubcodeChain {
    /// Computes `C(i, 0)` for `i < k` and `C(i, 1)` for `i < k - 1`.
    pub fn build(code: &LinearCode) -> Result<Self> {
        let k = code.dim();
        let n = code.len();
        if k < 2 || 2 * k > n {
            return Err(Error::Parameter(format!("filtration needs 2 <= k <= n/2, got n={n}, k={k}")));
        }
        let mut chain = SubcodeChain { base: code.clone(), codes: BTreeMap::new() };
        chain.codes.insert((0, 0), code.clone());
        let shortened = |pos: &[usize]| {
            code.vanishing_subcode(pos).map_err(|_| not_grs(format!("no codeword vanishes on {pos:?}")))
        };
        chain.insert(1, 0, shortened(&[0])?)?;
        chain.insert(0, 1, shortened(&[1])?)?;
        if k >= 3 {
            chain.insert(1, 1, shortened(&[0, 1])?)?;
        }
        for j in 0..=1 {
            for i in 1..k - 1 - j {
                let next = filtration_step(&chain.codes[&(i, j)], &chain.codes[&(i - 1, j)])?;
                chain.insert(i + 1, j, next)?;
            }
        }
        Ok(chain)
    }

    fn insert(&mut self, i: usize, j: usize, code: LinearCode) -> Result<()> {
        let expected = self.base.dim() - i - j;
        if code.dim() != expected {
            return Err(not_grs(format!("C({i},{j}) has dimension {}, expected {expected}", code.dim())));
        }
        self.codes.insert((i, j), code);
        Ok(())
    }

    pub fn base(&self) -> &LinearCode {
        &self.base
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&LinearCode> {
        self.codes.get(&(i, j))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &LinearCode)> {
        self.codes.iter()
    }
}

fn not_grs(msg: String) -> Error {
    Error::NotGrs(msg)
}

/// Words `c` of `cur = C(i, j)` with `c * prev` inside `cur^2`, where
/// `prev = C(i - 1, j)`.
///
/// Each pair `(h, d)` with `h` in `prev` and `d` orthogonal to `cur^2` gives
/// the linear condition `<c, h * d> = 0`. For a GRS code the solutions form a
/// hyperplane of `cur`, so the first nonzero condition already determines it;
/// the hyperplane is then checked against the defining inclusion directly.
pub fn filtration_step(cur: &LinearCode, prev: &LinearCode) -> Result<LinearCode> {
    let f = cur.field();
    let sq = cur.square();
    let checks = sq.dual().map_err(|_| not_grs("square of a subcode fills the space".into()))?;
    let g = cur.generator();
    let condition = checks
        .generator()
        .row_iter()
        .flat_map(|d| prev.generator().row_iter().map(move |h| (h, d)))
        .map(|(h, d)| g.mul_vec(&vector::cw_product(f, h, d)))
        .find(|row| !vector::is_zero(row))
        .ok_or_else(|| not_grs("filtration system is trivial".into()))?;
    let kernel = Matrix::row_vector(f, &condition).nullspace();
    let next = LinearCode::from_generator(&kernel.mul(g))
        .map_err(|_| not_grs("filtration hyperplane is zero".into()))?;
    let inside = next.generator().row_iter().all(|c| {
        prev.generator().row_iter().all(|h| sq.contains(&vector::cw_product(f, c, h)))
    });
    if !inside {
        return Err(not_grs("filtration hyperplane fails the product test".into()));
    }
    Ok(next)
}

/// Recovers a spec with `GRS(spec) = code` for `2 <= k <= n/2`, or
/// [`Error::NotGrs`] when the code is not GRS.
pub fn attack_filtration(code: &LinearCode) -> Result<GrsSpec> {
    let f = code.field();
    let (n, k) = (code.len(), code.dim());
    if k == 1 {
        return recover_dimension_one(code);
    }
    let chain = SubcodeChain::build(code)?;
    let c = chain.get(k - 1, 0).expect("chain end").generator().row(0).to_vec();
    let c1 = chain.get(k - 2, 1).expect("chain end").generator().row(0).to_vec();
    if c[1].is_zero() || (2..n).any(|i| c[i].is_zero() || c1[i].is_zero()) {
        return Err(not_grs("chain ends vanish outside the normalized positions".into()));
    }
    // c1 / c evaluates nu (x - 1) / x on positions 2..n
    let v: Vec<Fe> = (2..n).map(|i| f.div(c1[i], c[i]).expect("c[i] nonzero")).collect();
    let nu = choose_nu(f, &v)?;
    let mut x = vec![Fe::ZERO, Fe::ONE];
    for &vi in &v {
        let t = f.sub(Fe::ONE, f.div(vi, nu).expect("nu nonzero"));
        x.push(f.inv(t).expect("nu avoids every v_i"));
    }
    // c evaluates a multiple of x^(k-1)
    let mut y = vec![Fe::ZERO; n];
    for i in 1..n {
        y[i] = f.div(c[i], f.pow(x[i], (k - 1) as u64)).expect("support nonzero off position 0");
    }
    y[0] = multiplier_at_zero(code, &x, &y)?;
    let spec = GrsSpec::new(f, k, x, y).map_err(|e| not_grs(format!("recovered spec invalid: {e}")))?;
    if spec.code() != *code {
        return Err(not_grs("recovered spec generates a different code".into()));
    }
    Ok(spec)
}

/// Dualizes when `2k > n`, so any GRS code with `k < n` is accepted.
pub fn recover_grs(code: &LinearCode) -> Result<GrsSpec> {
    let (n, k) = (code.len(), code.dim());
    if k == n {
        return Err(Error::Parameter("the full space has no GRS description with k < n".into()));
    }
    if 2 * k <= n {
        attack_filtration(code)
    } else {
        Ok(attack_filtration(&code.dual()?)?.dual_spec())
    }
}

/// The third normalization. The ratio `v_i` equals `nu (a_i - 1) / a_i`, and
/// `a'_i = 1 / (1 - v_i / nu')` is a Moebius image of the true support fixing
/// 0 and 1 for any nonzero `nu'` outside `{v_i}`; the pole stays off the
/// support exactly under that condition. `nu' = nu` always qualifies, and it
/// is the only choice when the support is the whole field.
fn choose_nu(f: &Field, v: &[Fe]) -> Result<Fe> {
    let mut used = vec![false; f.order() as usize];
    for &vi in v {
        used[vi.code() as usize] = true;
    }
    f.elements()
        .skip(1)
        .find(|e| !used[e.code() as usize])
        .ok_or_else(|| not_grs("ratio takes every nonzero value".into()))
}

/// Both chain ends vanish at position 0, so the multiplier there is read off
/// a codeword that does not: interpolate its polynomial on `k` other positions
/// and divide by the value at 0.
fn multiplier_at_zero(code: &LinearCode, x: &[Fe], y: &[Fe]) -> Result<Fe> {
    let f = code.field();
    let k = code.dim();
    for row in code.generator().row_iter().filter(|r| !r[0].is_zero()) {
        let xs = &x[1..=k];
        let ys: Vec<Fe> = (1..=k).map(|i| f.div(row[i], y[i]).expect("y nonzero")).collect();
        let p = poly::interpolate(f, xs, &ys)?;
        let at_zero = poly::eval(f, &p, Fe::ZERO);
        if !at_zero.is_zero() {
            return f.div(row[0], at_zero);
        }
    }
    Err(not_grs("no codeword determines the multiplier at position 0".into()))
}

fn recover_dimension_one(code: &LinearCode) -> Result<GrsSpec> {
    let f = code.field();
    let y = code.generator().row(0).to_vec();
    if y.iter().any(|v| v.is_zero()) {
        return Err(not_grs("one-dimensional code has a zero coordinate".into()));
    }
    let n = code.len();
    if n as u64 > f.order() as u64 {
        return Err(not_grs("length exceeds the field size".into()));
    }
    let x = f.elements().take(n).collect();
    GrsSpec::new(f, 1, x, y)
}

/// `GRS_k(x, y)` without the `k < n` restriction of [`GrsSpec`].
pub fn grs_code_any_dimension(f: &Field, k: usize, x: &[Fe], y: &[Fe]) -> Result<LinearCode> {
    LinearCode::from_generator(&crate::grs::evaluation_matrix(f, k, x, y))
}
