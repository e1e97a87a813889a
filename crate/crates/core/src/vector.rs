//! Words of `GF(q)^n` as plain slices.

use crate::field::{Fe, Field};

/// Componentwise (Schur) product `(a_1 b_1, .., a_n b_n)`.
pub fn cw_product(f: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    assert_eq!(a.len(), b.len(), "length mismatch in componentwise product");
    a.iter().zip(b).map(|(&x, &y)| f.mul(x, y)).collect()
}

/// `sum a_i b_i`.
pub fn inner_product(f: &Field, a: &[Fe], b: &[Fe]) -> Fe {
    assert_eq!(a.len(), b.len(), "length mismatch in inner product");
    a.iter().zip(b).fold(Fe::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

pub fn add(f: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

pub fn sub(f: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| f.sub(x, y)).collect()
}

pub fn scale(f: &Field, a: &[Fe], c: Fe) -> Vec<Fe> {
    a.iter().map(|&x| f.mul(x, c)).collect()
}

/// Hamming weight.
pub fn weight(a: &[Fe]) -> usize {
    a.iter().filter(|x| !x.is_zero()).count()
}

pub fn distance(a: &[Fe], b: &[Fe]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

pub fn is_zero(a: &[Fe]) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// Keeps the coordinates listed in `positions`, in that order.
pub fn select(a: &[Fe], positions: &[usize]) -> Vec<Fe> {
    positions.iter().map(|&i| a[i]).collect()
}

/// Deletes the coordinates listed in `positions`.
pub fn delete(a: &[Fe], positions: &[usize]) -> Vec<Fe> {
    let mut drop = vec![false; a.len()];
    for &i in positions {
        drop[i] = true;
    }
    a.iter().zip(drop).filter(|(_, d)| !d).map(|(&x, _)| x).collect()
}
