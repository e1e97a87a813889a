//! Dense univariate polynomials over `GF(q)`, coefficients lowest degree first.

use crate::error::{Error, Result};
use crate::field::{Fe, Field};

pub fn trim(p: &mut Vec<Fe>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Degree, with `None` for the zero polynomial.
pub fn degree(p: &[Fe]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn eval(f: &Field, p: &[Fe], x: Fe) -> Fe {
    p.iter().rev().fold(Fe::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
}

pub fn mul(f: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Fe::ZERO; a.len() + b.len() - 1];
    for (i, &c) in a.iter().enumerate() {
        f.axpy(&mut out[i..i + b.len()], c, b);
    }
    trim(&mut out);
    out
}

/// Quotient and remainder of `a / b`.
pub fn divrem(f: &Field, a: &[Fe], b: &[Fe]) -> Result<(Vec<Fe>, Vec<Fe>)> {
    let db = degree(b).ok_or(Error::DivisionByZero)?;
    let lead_inv = f.inv(b[db])?;
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() <= db {
        return Ok((Vec::new(), r));
    }
    let mut q = vec![Fe::ZERO; r.len() - db];
    for i in (0..q.len()).rev() {
        let c = f.mul(r[i + db], lead_inv);
        q[i] = c;
        if !c.is_zero() {
            f.axpy(&mut r[i..=i + db], f.neg(c), &b[..=db]);
        }
    }
    r.truncate(db);
    trim(&mut r);
    trim(&mut q);
    Ok((q, r))
}

/// Lagrange interpolation through `(xs[i], ys[i])`; the points must be distinct.
pub fn interpolate(f: &Field, xs: &[Fe], ys: &[Fe]) -> Result<Vec<Fe>> {
    assert_eq!(xs.len(), ys.len());
    let mut out = vec![Fe::ZERO; xs.len()];
    for (i, (&xi, &yi)) in xs.iter().zip(ys).enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut basis = vec![Fe::ONE];
        let mut denom = Fe::ONE;
        for (j, &xj) in xs.iter().enumerate() {
            if j != i {
                basis = mul(f, &basis, &[f.neg(xj), Fe::ONE]);
                denom = f.mul(denom, f.sub(xi, xj));
            }
        }
        let c = f.div(yi, denom).map_err(|_| Error::Domain("interpolation points repeat".into()))?;
        f.axpy(&mut out[..basis.len()], c, &basis);
    }
    trim(&mut out);
    Ok(out)
}
