//! Linear codes stored by their canonical generator matrix.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::matrix::{EchelonBasis, Matrix};
use crate::vector;

/// A nonzero linear code of length `n` over `GF(q)`.
///
/// The generator is kept in reduced row echelon form with no zero rows, so two
/// values describe the same code iff they compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    gen: Matrix,
}

/// Square-code dimensions of a code and of its dual, and the GRS verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareDimReport {
    pub n: usize,
    pub k: usize,
    pub dim_sq: usize,
    /// Absent when the code is the full space.
    pub dim_dual_sq: Option<usize>,
    /// `2k - 1`, the square dimension of a GRS code of this size.
    pub grs_dim: usize,
    /// `min(n, k(k+1)/2)`, the typical square dimension of a random code.
    pub random_dim: usize,
    pub grs_like: bool,
}

impl LinearCode {
    /// Code spanned by the rows of `m`; fails with [`Error::ZeroCode`] if the
    /// rows span nothing.
    pub fn from_generator(m: &Matrix) -> Result<Self> {
        let mut basis = EchelonBasis::new(m.field(), m.cols());
        for r in m.row_iter() {
            basis.insert(r.to_vec());
            if basis.is_full() {
                break;
            }
        }
        Self::from_basis(basis)
    }

    pub fn from_rows<R: AsRef<[Fe]>>(field: &Field, n: usize, rows: &[R]) -> Result<Self> {
        let mut basis = EchelonBasis::new(field, n);
        for r in rows {
            basis.insert(r.as_ref().to_vec());
        }
        Self::from_basis(basis)
    }

    pub fn from_basis(basis: EchelonBasis) -> Result<Self> {
        if basis.rank() == 0 {
            return Err(Error::ZeroCode);
        }
        let (gen, _) = basis.into_rref();
        Ok(LinearCode { gen })
    }

    /// Takes a matrix already in reduced row echelon form without zero rows.
    pub fn from_rref_unchecked(gen: Matrix) -> Self {
        debug_assert_eq!(gen.rref().matrix, gen);
        LinearCode { gen }
    }

    pub fn full_space(field: &Field, n: usize) -> Self {
        LinearCode { gen: Matrix::identity(field, n) }
    }

    /// Code spanned by `k` uniformly random words, resampled until they are
    /// independent.
    pub fn random<R: Rng + ?Sized>(field: &Field, n: usize, k: usize, rng: &mut R) -> Self {
        assert!(1 <= k && k <= n, "random code needs 1 <= k <= n");
        loop {
            let m = Matrix::random(field, k, n, rng);
            if let Ok(c) = Self::from_generator(&m) {
                if c.dim() == k {
                    return c;
                }
            }
        }
    }

    pub fn field(&self) -> &Field {
        self.gen.field()
    }

    pub fn len(&self) -> usize {
        self.gen.cols()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.gen.rows()
    }

    pub fn generator(&self) -> &Matrix {
        &self.gen
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.len()
    }

    fn basis(&self) -> EchelonBasis {
        let mut b = EchelonBasis::new(self.field(), self.len());
        for r in self.gen.row_iter() {
            b.insert(r.to_vec());
        }
        b
    }

    pub fn encode(&self, msg: &[Fe]) -> Vec<Fe> {
        self.gen.left_mul_vec(msg)
    }

    /// Random codeword, uniform over the code.
    pub fn random_codeword<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Fe> {
        let m = self.field().random_vec(self.dim(), rng);
        self.encode(&m)
    }

    pub fn contains(&self, v: &[Fe]) -> bool {
        assert_eq!(v.len(), self.len(), "word length differs from code length");
        // the generator is in RREF, so the coordinates at the pivots determine
        // the only candidate message
        let pivots = self.pivots();
        let msg: Vec<Fe> = pivots.iter().map(|&p| v[p]).collect();
        self.encode(&msg) == v
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.gen
            .row_iter()
            .map(|r| r.iter().position(|x| !x.is_zero()).expect("no zero rows"))
            .collect()
    }

    /// Whether every codeword of `self` lies in `other`.
    pub fn is_subcode_of(&self, other: &LinearCode) -> bool {
        self.gen.row_iter().all(|r| other.contains(r))
    }

    /// Parity-check matrix: a basis of the dual, possibly with zero rows when
    /// the code is the full space.
    pub fn parity_check(&self) -> Matrix {
        self.gen.nullspace()
    }

    /// Dual code; the dual of the full space is the zero code and is refused.
    pub fn dual(&self) -> Result<LinearCode> {
        if self.is_full() {
            return Err(Error::ZeroCode);
        }
        Ok(LinearCode { gen: self.parity_check() })
    }

    /// Codewords vanishing on `positions`, at full length.
    pub fn vanishing_subcode(&self, positions: &[usize]) -> Result<LinearCode> {
        if positions.is_empty() {
            return Ok(self.clone());
        }
        let sub = self.gen.select_cols(positions);
        // messages u with u * G[:, I] = 0
        let kernel = sub.transpose().nullspace();
        if kernel.rows() == 0 {
            return Err(Error::ZeroCode);
        }
        Self::from_generator(&kernel.mul(&self.gen))
    }

    /// Codewords vanishing on `positions`, with those positions deleted.
    pub fn shorten(&self, positions: &[usize]) -> Result<LinearCode> {
        if positions.is_empty() {
            return Ok(self.clone());
        }
        let sub = self.vanishing_subcode(positions)?;
        Self::from_generator(&sub.gen.delete_cols(positions))
    }

    /// Deletes `positions`.
    pub fn puncture(&self, positions: &[usize]) -> Result<LinearCode> {
        Self::from_generator(&self.gen.delete_cols(positions))
    }

    /// Keeps exactly `positions`, in the given order.
    pub fn restrict(&self, positions: &[usize]) -> Result<LinearCode> {
        Self::from_generator(&self.gen.select_cols(positions))
    }

    /// Applies the column permutation sending position `i` to `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> LinearCode {
        let mut inverse = vec![0; perm.len()];
        for (i, &j) in perm.iter().enumerate() {
            inverse[j] = i;
        }
        Self::from_generator(&self.gen.select_cols(&inverse)).expect("permutation keeps rank")
    }

    /// Multiplies coordinate `i` of every codeword by `scale[i]`.
    pub fn scale_positions(&self, scale: &[Fe]) -> Result<LinearCode> {
        let rows: Vec<Vec<Fe>> =
            self.gen.row_iter().map(|r| vector::cw_product(self.field(), r, scale)).collect();
        Self::from_rows(self.field(), self.len(), &rows)
    }

    pub fn sum(&self, other: &LinearCode) -> LinearCode {
        self.check_compatible(other);
        let mut b = self.basis();
        for r in other.gen.row_iter() {
            if b.is_full() {
                break;
            }
            b.insert(r.to_vec());
        }
        Self::from_basis(b).expect("sum of nonzero codes is nonzero")
    }

    /// Intersection, or `None` when it is the zero code.
    pub fn intersect(&self, other: &LinearCode) -> Option<LinearCode> {
        self.check_compatible(other);
        let h = self.parity_check().vstack(&other.parity_check());
        if h.rows() == 0 {
            return Some(self.clone());
        }
        let k = h.nullspace();
        (k.rows() > 0).then(|| LinearCode { gen: k })
    }

    /// Subcode of words orthogonal to `v`, or `None` when that is zero.
    pub fn orthogonal_subcode(&self, v: &[Fe]) -> Option<LinearCode> {
        let f = self.field();
        let ips: Vec<Fe> = self.gen.row_iter().map(|r| vector::inner_product(f, r, v)).collect();
        let m = Matrix::from_rows(f, 1, &ips.iter().map(|&x| [x]).collect::<Vec<_>>());
        let kernel = m.transpose().nullspace();
        if kernel.rows() == 0 {
            return None;
        }
        Self::from_generator(&kernel.mul(&self.gen)).ok()
    }

    fn check_compatible(&self, other: &LinearCode) {
        assert_eq!(self.field(), other.field(), "codes over different fields");
        assert_eq!(self.len(), other.len(), "codes of different lengths");
    }

    /// Span of all `a * b` with `a` in `self`, `b` in `other`.
    pub fn star_product(&self, other: &LinearCode) -> LinearCode {
        self.check_compatible(other);
        let f = self.field();
        let mut b = EchelonBasis::new(f, self.len());
        'outer: for r in self.gen.row_iter() {
            for s in other.gen.row_iter() {
                if b.is_full() {
                    break 'outer;
                }
                b.insert(vector::cw_product(f, r, s));
            }
        }
        Self::from_basis(b).expect("product of nonzero codes is nonzero")
    }

    /// `self * self`, generated by the products `g_i * g_j` with `i <= j`.
    pub fn square(&self) -> LinearCode {
        Self::from_basis(self.square_basis(usize::MAX)).expect("square of a nonzero code")
    }

    pub fn square_dim(&self) -> usize {
        self.square_basis(usize::MAX).rank()
    }

    /// `min(dim(self^2), cap)`, stopping elimination once the cap is reached.
    pub fn square_dim_capped(&self, cap: usize) -> usize {
        self.square_basis(cap).rank()
    }

    fn square_basis(&self, cap: usize) -> EchelonBasis {
        let f = self.field();
        let k = self.dim();
        let mut b = EchelonBasis::new(f, self.len());
        for i in 0..k {
            let gi = self.gen.row(i);
            for j in i..k {
                if b.is_full() || b.rank() >= cap {
                    return b;
                }
                b.insert(vector::cw_product(f, gi, self.gen.row(j)));
            }
        }
        b
    }

    /// Square-code distinguisher statistics.
    pub fn square_dim_report(&self) -> SquareDimReport {
        let (n, k) = (self.len(), self.dim());
        let dim_sq = self.square_dim();
        let dim_dual_sq = self.dual().ok().map(|d| d.square_dim());
        let grs_dim = 2 * k - 1;
        let grs_like = if grs_dim <= n {
            dim_sq == grs_dim
        } else {
            dim_dual_sq.is_some_and(|d| d + 1 == 2 * (n - k))
        };
        SquareDimReport {
            n,
            k,
            dim_sq,
            dim_dual_sq,
            grs_dim,
            random_dim: n.min(k * (k + 1) / 2),
            grs_like,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn gf(q: u64) -> Field {
        Field::of_order(q).unwrap()
    }

    fn code(f: &Field, rows: &[&[u32]]) -> LinearCode {
        let rows: Vec<Vec<Fe>> = rows.iter().map(|r| f.elements_from(r).unwrap()).collect();
        LinearCode::from_rows(f, rows[0].len(), &rows).unwrap()
    }

    #[test]
    fn zero_code_is_refused() {
        let f = gf(7);
        assert!(matches!(
            LinearCode::from_generator(&Matrix::zeros(&f, 2, 3)),
            Err(Error::ZeroCode)
        ));
        assert!(LinearCode::full_space(&f, 3).dual().is_err());
    }

    #[test]
    fn dual_of_repetition_code() {
        let f = gf(7);
        let c = code(&f, &[&[1, 1, 1]]);
        let d = c.dual().unwrap();
        assert_eq!(d.dim(), 2);
        for r in d.generator().row_iter() {
            assert!(vector::inner_product(&f, r, c.generator().row(0)).is_zero());
        }
        assert_eq!(d.dual().unwrap(), c);
    }

    #[test]
    fn puncture_and_restrict_examples() {
        let f = gf(7);
        let c = code(&f, &[&[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(c.puncture(&[2]).unwrap(), LinearCode::full_space(&f, 2));
        assert_eq!(c.puncture(&[]).unwrap(), c);
        assert_eq!(c.restrict(&[0, 1, 2]).unwrap(), c);
        assert_eq!(c.shorten(&[]).unwrap(), c);
        assert!(c.restrict(&[2]).is_err());
    }

    #[test]
    fn repetition_code_square_and_products() {
        let f = gf(7);
        let c = code(&f, &[&[1, 1, 1, 1]]);
        assert_eq!(c.square(), c);
        assert_eq!(c.star_product(&c), c);
        assert_eq!(c.intersect(&c), Some(c.clone()));
    }

    #[test]
    fn random_codes_have_generic_products() {
        let f = gf(251);
        let mut full = 0;
        for seed in 0..100 {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let a = LinearCode::random(&f, 30, 4, &mut rng);
            let b = LinearCode::random(&f, 30, 5, &mut rng);
            let d = a.star_product(&b).dim();
            assert!(d <= 20);
            full += usize::from(d == 20);
        }
        assert!(full >= 95, "only {full} of 100 products reached dimension 20");
    }

    #[test]
    fn orthogonal_subcode_has_codimension_one() {
        let f = gf(31);
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        for _ in 0..20 {
            let c = LinearCode::random(&f, 12, 5, &mut rng);
            let lambda = f.random_vec(12, &mut rng);
            let sub = c.orthogonal_subcode(&lambda).unwrap();
            let line = LinearCode::from_rows(&f, 12, &[lambda.clone()]).unwrap();
            let via_dual = c.intersect(&line.dual().unwrap()).unwrap();
            assert_eq!(sub, via_dual);
            let orthogonal = c.dual().unwrap().contains(&lambda);
            assert_eq!(sub.dim(), if orthogonal { 5 } else { 4 });
        }
    }

    fn arb_code(q: u64, n: usize) -> impl Strategy<Value = LinearCode> {
        (1..n, any::<u64>()).prop_map(move |(k, seed)| {
            LinearCode::random(&gf(q), n, k, &mut ChaCha20Rng::seed_from_u64(seed))
        })
    }

    fn arb_positions(n: usize, max: usize) -> impl Strategy<Value = Vec<usize>> {
        proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 0..=max)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn dual_is_an_involution(c in arb_code(13, 10)) {
            let d = c.dual().unwrap();
            prop_assert_eq!(d.dim() + c.dim(), 10);
            for r in c.generator().row_iter() {
                for s in d.generator().row_iter() {
                    prop_assert!(vector::inner_product(c.field(), r, s).is_zero());
                }
            }
            prop_assert_eq!(d.dual().unwrap(), c);
        }

        #[test]
        fn shorten_is_dual_to_puncture(c in arb_code(13, 10), pos in arb_positions(10, 3)) {
            if let (Ok(s), Ok(p)) = (c.shorten(&pos), c.dual().unwrap().puncture(&pos)) {
                if !p.is_full() {
                    prop_assert_eq!(s.dual().unwrap(), p);
                }
            }
        }

        #[test]
        fn shortening_composes(c in arb_code(13, 10), a in 0usize..10, b in 0usize..9) {
            let b_orig = if b >= a { b + 1 } else { b };
            let two = c.shorten(&[a]).and_then(|s| s.shorten(&[b]));
            let union = c.shorten(&[a, b_orig]);
            match (two, union) {
                (Ok(x), Ok(y)) => prop_assert_eq!(x, y),
                (Err(_), Err(_)) => {}
                _ => prop_assert!(false, "shortening disagreed on emptiness"),
            }
        }

        #[test]
        fn product_bounds_and_symmetry(a in arb_code(13, 12), b in arb_code(13, 12)) {
            let ab = a.star_product(&b);
            prop_assert!(ab.dim() <= a.dim() * b.dim());
            prop_assert_eq!(&ab, &b.star_product(&a));
            let k = a.dim();
            prop_assert!(a.square().dim() <= 12usize.min(k * (k + 1) / 2));
            prop_assert_eq!(a.square(), a.star_product(&a));
        }

        #[test]
        fn product_is_monotone(a in arb_code(13, 12), b in arb_code(13, 12), c in arb_code(13, 12)) {
            let bigger = a.sum(&c);
            prop_assert!(a.star_product(&b).is_subcode_of(&bigger.star_product(&b)));
        }

        #[test]
        fn sum_and_intersection_dimensions(a in arb_code(7, 9), b in arb_code(7, 9)) {
            let s = a.sum(&b);
            let i = a.intersect(&b).map_or(0, |c| c.dim());
            prop_assert_eq!(s.dim() + i, a.dim() + b.dim());
            if let Some(c) = a.intersect(&b) {
                prop_assert!(c.is_subcode_of(&a) && c.is_subcode_of(&b));
            }
        }

        #[test]
        fn rref_is_idempotent_and_rank_is_transpose_invariant(seed in any::<u64>(), r in 1usize..8, c in 1usize..8) {
            let f = gf(16);
            let m = Matrix::random(&f, r, c, &mut ChaCha20Rng::seed_from_u64(seed));
            let once = m.rref();
            prop_assert_eq!(&once.matrix.rref().matrix, &once.matrix);
            prop_assert_eq!(m.rank(), m.transpose().rank());
            prop_assert_eq!(m.nullspace().rows() + m.rank(), c);
        }
    }
}
