//! Generalized Reed-Solomon codes `GRS_k(x, y)`.

use rand::seq::index;
use rand::Rng;

use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::matrix::Matrix;
use crate::poly;
use crate::vector;

/// `GRS_k(x, y) = {(y_1 p(x_1), .., y_n p(x_n)) : deg p < k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrsSpec {
    field: Field,
    k: usize,
    x: Vec<Fe>,
    y: Vec<Fe>,
}

/// Result of a successful bounded-distance decode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoded {
    pub codeword: Vec<Fe>,
    /// Coefficients of the evaluated polynomial, length `k`.
    pub message: Vec<Fe>,
    pub errors: usize,
}

impl GrsSpec {
    /// Checks `1 <= k < n <= q`, distinct support and nonzero multipliers.
    pub fn new(field: &Field, k: usize, x: Vec<Fe>, y: Vec<Fe>) -> Result<Self> {
        let n = x.len();
        if y.len() != n {
            return Err(Error::Parameter(format!("support has {n} points but {} multipliers", y.len())));
        }
        if !(1 <= k && k < n && n as u64 <= field.order() as u64) {
            return Err(Error::Parameter(format!(
                "GRS code needs 1 <= k < n <= q, got k={k}, n={n}, q={}",
                field.order()
            )));
        }
        let q = field.order();
        if let Some(e) = x.iter().chain(&y).find(|e| e.code() >= q) {
            return Err(Error::Domain(format!("element {e} out of range")));
        }
        let mut seen = vec![false; q as usize];
        for &xi in &x {
            if std::mem::replace(&mut seen[xi.code() as usize], true) {
                return Err(Error::Parameter(format!("support point {xi} repeats")));
            }
        }
        if y.iter().any(|v| v.is_zero()) {
            return Err(Error::Parameter("multipliers must be nonzero".into()));
        }
        Ok(GrsSpec { field: field.clone(), k, x, y })
    }

    /// Random distinct support and random nonzero multipliers.
    pub fn random<R: Rng + ?Sized>(field: &Field, n: usize, k: usize, rng: &mut R) -> Result<Self> {
        let x = random_support(field, n, false, rng)?;
        let y = (0..n).map(|_| field.random_nonzero(rng)).collect();
        Self::new(field, k, x, y)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn x(&self) -> &[Fe] {
        &self.x
    }

    pub fn y(&self) -> &[Fe] {
        &self.y
    }

    /// Error-correction capacity `floor((n - k) / 2)`.
    pub fn capacity(&self) -> usize {
        (self.n() - self.k) / 2
    }

    /// Same support and multipliers, another dimension.
    pub fn with_dimension(&self, k: usize) -> Result<Self> {
        Self::new(&self.field, k, self.x.clone(), self.y.clone())
    }

    /// `k x n` matrix with row `j` equal to `(y_i x_i^j)_i`.
    pub fn generator(&self) -> Matrix {
        evaluation_matrix(&self.field, self.k, &self.x, &self.y)
    }

    pub fn code(&self) -> LinearCode {
        LinearCode::from_generator(&self.generator()).expect("GRS generator has full rank")
    }

    pub fn encode(&self, msg: &[Fe]) -> Vec<Fe> {
        assert_eq!(msg.len(), self.k, "message length differs from k");
        let f = &self.field;
        self.x
            .iter()
            .zip(&self.y)
            .map(|(&xi, &yi)| f.mul(yi, poly::eval(f, msg, xi)))
            .collect()
    }

    /// Berlekamp-Welch decoding up to `floor((n - k) / 2)` errors.
    ///
    /// Solves `N(x_i) = r_i / y_i * E(x_i)` with `E` monic of degree `t` and
    /// `deg N < t + k`, then checks that `E` divides `N` and that the result
    /// is within distance `t` of the received word.
    pub fn decode(&self, received: &[Fe]) -> Result<Decoded> {
        assert_eq!(received.len(), self.n(), "received word length differs from n");
        let f = &self.field;
        let (n, k, t) = (self.n(), self.k, self.capacity());
        let r: Vec<Fe> = received
            .iter()
            .zip(&self.y)
            .map(|(&ri, &yi)| f.div(ri, yi).expect("multipliers are nonzero"))
            .collect();
        // unknowns: N_0..N_{t+k-1}, then E_0..E_{t-1}
        let cols = 2 * t + k;
        let mut a = Matrix::zeros(f, n, cols);
        let mut rhs = Vec::with_capacity(n);
        for i in 0..n {
            let row = a.row_mut(i);
            let mut pw = Fe::ONE;
            for j in 0..t + k {
                row[j] = pw;
                if j < t {
                    row[t + k + j] = f.neg(f.mul(r[i], pw));
                }
                if j == t {
                    rhs.push(f.mul(r[i], pw));
                }
                pw = f.mul(pw, self.x[i]);
            }
        }
        let sol = a.solve(&rhs).ok_or(Error::DecodingFailure)?;
        let num = sol[..t + k].to_vec();
        let mut err_loc = sol[t + k..].to_vec();
        err_loc.push(Fe::ONE);
        let (mut msg, rem) = poly::divrem(f, &num, &err_loc)?;
        if !rem.is_empty() || msg.len() > k {
            return Err(Error::DecodingFailure);
        }
        msg.resize(k, Fe::ZERO);
        let codeword = self.encode(&msg);
        let errors = vector::distance(&codeword, received);
        if errors > t {
            return Err(Error::DecodingFailure);
        }
        Ok(Decoded { codeword, message: msg, errors })
    }

    /// Spec of the dual code: `GRS_{n-k}(x, y')` with
    /// `y'_i = 1 / (y_i prod_{j != i} (x_i - x_j))`.
    pub fn dual_spec(&self) -> GrsSpec {
        let f = &self.field;
        let y = dual_multipliers(f, &self.x, &self.y);
        GrsSpec { field: f.clone(), k: self.n() - self.k, x: self.x.clone(), y }
    }
}

/// Multipliers of the dual GRS code on support `x`.
pub fn dual_multipliers(f: &Field, x: &[Fe], y: &[Fe]) -> Vec<Fe> {
    (0..x.len())
        .map(|i| {
            let prod = x
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(y[i], |acc, (_, &xj)| f.mul(acc, f.sub(x[i], xj)));
            f.inv(prod).expect("support points are distinct")
        })
        .collect()
}

/// Rows `(y_i x_i^j)_i` for `j < k`, with no restriction on `k`.
pub fn evaluation_matrix(f: &Field, k: usize, x: &[Fe], y: &[Fe]) -> Matrix {
    let n = x.len();
    let mut m = Matrix::zeros(f, k, n);
    for i in 0..n {
        let mut v = y[i];
        for j in 0..k {
            m.set(j, i, v);
            v = f.mul(v, x[i]);
        }
    }
    m
}

/// `n` distinct field elements in random order, optionally excluding zero.
pub fn random_support<R: Rng + ?Sized>(
    f: &Field,
    n: usize,
    nonzero: bool,
    rng: &mut R,
) -> Result<Vec<Fe>> {
    let offset = u32::from(nonzero);
    let avail = (f.order() - offset) as usize;
    if n > avail {
        return Err(Error::Parameter(format!("need {n} distinct support points, field offers {avail}")));
    }
    Ok(index::sample(rng, avail, n)
        .into_iter()
        .map(|i| f.element(i as u32 + offset).expect("index below q"))
        .collect())
}
