//! Dense matrices over an exact field, with rank and reduced row-echelon
//! form.
//!
//! Pivot lists returned to callers are 1-based column indices: the `i`-th
//! pivot is the smallest `a` such that the first `a` columns have rank `i`.

use crate::error::Error;
use crate::exactalg::field::Field;

#[derive(Clone, Debug, PartialEq)]
pub struct ExactMatrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> ExactMatrix<F> {
    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        Self {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn identity(field: F, size: usize) -> Self {
        let mut m = Self::zeros(field, size, size);
        for i in 0..size {
            m.data[i * size + i] = m.field.one();
        }
        m
    }

    /// Row-major entries; fails unless `data.len() == rows * cols`.
    pub fn from_vec(field: F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Result<Self, Error> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn from_i64_rows(field: F, rows: &[Vec<i64>]) -> Result<Self, Error> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let data = rows.iter().flat_map(|r| r.iter().map(|&v| field.from_i64(v))).collect();
        Self::from_vec(field, rows.len(), cols, data)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// 0-based access.
    pub fn get(&self, r: usize, c: usize) -> &F::Elem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn as_slice(&self) -> &[F::Elem] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field.clone(), self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn rank(&self) -> usize {
        let mut data = self.data.clone();
        row_reduce(&self.field, &mut data, self.rows, self.cols).len()
    }

    /// Reduced row-echelon form together with the 1-based pivot columns.
    pub fn rref_pivots(&self) -> (Self, Vec<usize>) {
        let mut data = self.data.clone();
        let pivots = row_reduce(&self.field, &mut data, self.rows, self.cols);
        let reduced = Self {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        };
        (reduced, pivots.into_iter().map(|c| c + 1).collect())
    }
}

/// In-place Gauss-Jordan elimination of a row-major `rows x cols` block.
/// Returns the 0-based pivot columns in increasing order; afterwards the first
/// `pivots.len()` rows hold the reduced row-echelon form and the rest are zero.
pub fn row_reduce<F: Field>(field: &F, data: &mut [F::Elem], rows: usize, cols: usize) -> Vec<usize> {
    debug_assert_eq!(data.len(), rows * cols);
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..cols {
        if top == rows {
            break;
        }
        let Some(found) = (top..rows).find(|&r| !field.is_zero(&data[r * cols + col])) else {
            continue;
        };
        if found != top {
            for c in 0..cols {
                data.swap(found * cols + c, top * cols + c);
            }
        }
        let inv = field.inv(&data[top * cols + col]).expect("pivot is nonzero");
        for c in col..cols {
            data[top * cols + c] = field.mul(&data[top * cols + c], &inv);
        }
        for r in 0..rows {
            if r == top || field.is_zero(&data[r * cols + col]) {
                continue;
            }
            let factor = data[r * cols + col].clone();
            for c in col..cols {
                let t = field.mul(&factor, &data[top * cols + c]);
                data[r * cols + c] = field.sub(&data[r * cols + c], &t);
            }
        }
        pivots.push(col);
        top += 1;
    }
    pivots
}

/// A subspace of `F^width` kept in reduced row-echelon form, grown one vector
/// at a time.
///
/// Because the basis stays fully reduced, inserting a vector only subtracts
/// basis rows at the pivot positions where the incoming vector is nonzero.
#[derive(Clone, Debug)]
pub struct EchelonBasis<F: Field> {
    field: F,
    width: usize,
    rows: Vec<Vec<F::Elem>>,
    /// `pivot_row[c]` is the basis row with pivot in column `c`.
    pivot_row: Vec<Option<usize>>,
}

impl<F: Field> EchelonBasis<F> {
    pub fn new(field: F, width: usize) -> Self {
        Self {
            field,
            width,
            rows: Vec::new(),
            pivot_row: vec![None; width],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.width
    }

    /// Number of pivots in columns `0..prefix`. With leading-entry pivots this
    /// is the rank of the projection onto the first `prefix` coordinates.
    pub fn rank_in_prefix(&self, prefix: usize) -> usize {
        self.pivot_row[..prefix.min(self.width)]
            .iter()
            .filter(|p| p.is_some())
            .count()
    }

    pub fn pivots(&self) -> Vec<usize> {
        (0..self.width).filter(|&c| self.pivot_row[c].is_some()).collect()
    }

    /// Reduces `v` modulo the current span.
    pub fn reduce(&self, mut v: Vec<F::Elem>) -> Vec<F::Elem> {
        debug_assert_eq!(v.len(), self.width);
        for c in 0..self.width {
            if self.field.is_zero(&v[c]) {
                continue;
            }
            if let Some(r) = self.pivot_row[c] {
                let factor = v[c].clone();
                let row = &self.rows[r];
                for k in c..self.width {
                    if !self.field.is_zero(&row[k]) {
                        let t = self.field.mul(&factor, &row[k]);
                        v[k] = self.field.sub(&v[k], &t);
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: Vec<F::Elem>) -> bool {
        self.reduce(v).iter().all(|x| self.field.is_zero(x))
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: Vec<F::Elem>) -> bool {
        let mut v = self.reduce(v);
        let Some(lead) = v.iter().position(|x| !self.field.is_zero(x)) else {
            return false;
        };
        let inv = self.field.inv(&v[lead]).expect("leading entry is nonzero");
        for x in v[lead..].iter_mut() {
            *x = self.field.mul(x, &inv);
        }
        // keep the other rows reduced in the new pivot column
        for row in self.rows.iter_mut() {
            if self.field.is_zero(&row[lead]) {
                continue;
            }
            let factor = row[lead].clone();
            for k in lead..self.width {
                if !self.field.is_zero(&v[k]) {
                    let t = self.field.mul(&factor, &v[k]);
                    row[k] = self.field.sub(&row[k], &t);
                }
            }
        }
        self.pivot_row[lead] = Some(self.rows.len());
        self.rows.push(v);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::field::{PrimeField, Rationals};
    use proptest::prelude::*;

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    #[test]
    fn rank_examples() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(ExactMatrix::zeros(f, 4, 4).rank(), 0);
        assert_eq!(ExactMatrix::identity(f, 3).rank(), 3);
        let m = ExactMatrix::from_i64_rows(f2(), &[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn f2_rank_by_row_combinations() {
        // rank over F_2 equals log2 of the number of distinct row combinations
        let rows = [vec![1, 1], vec![1, 1]];
        let mut seen = std::collections::HashSet::new();
        for mask in 0..4u32 {
            let mut acc = [0i64; 2];
            for (i, r) in rows.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    acc[0] ^= r[0];
                    acc[1] ^= r[1];
                }
            }
            seen.insert(acc);
        }
        assert_eq!(seen.len(), 2);
    }

    #[test]
    fn pivot_examples() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(ExactMatrix::identity(f, 3).rref_pivots().1, vec![1, 2, 3]);
        assert!(ExactMatrix::zeros(f, 3, 3).rref_pivots().1.is_empty());
        // N_R: unit R x R block in the top right corner of a d x d zero matrix
        let (d, r) = (4, 2);
        let mut n = ExactMatrix::zeros(f, d, d);
        for i in 0..r {
            n.set(i, d - r + i, 1);
        }
        assert_eq!(n.rref_pivots().1, vec![3, 4]);
    }

    #[test]
    fn rref_over_rationals() {
        let q = Rationals;
        let m = ExactMatrix::from_i64_rows(q, &[vec![2, 4, 6], vec![1, 2, 4], vec![3, 6, 10]]).unwrap();
        let (r, piv) = m.rref_pivots();
        assert_eq!(piv, vec![1, 3]);
        assert_eq!(*r.get(0, 1), q.from_i64(2));
        assert!(q.is_zero(r.get(2, 2)));
    }

    #[test]
    fn dimension_mismatch() {
        assert!(ExactMatrix::from_vec(f2(), 2, 2, vec![0, 1, 1]).is_err());
    }

    #[test]
    fn echelon_basis_prefix_rank() {
        let f = PrimeField::new(11).unwrap();
        let mut b = EchelonBasis::new(f, 4);
        assert!(b.insert(vec![0, 0, 1, 2]));
        assert!(b.insert(vec![0, 3, 1, 0]));
        assert!(!b.insert(vec![0, 6, 2, 0]));
        assert_eq!(b.rank(), 2);
        assert_eq!(b.rank_in_prefix(2), 1);
        assert_eq!(b.rank_in_prefix(3), 2);
        assert!(b.contains(vec![0, 3, 2, 2]));
        assert!(!b.contains(vec![1, 0, 0, 0]));
    }

    fn matrix_strategy() -> impl Strategy<Value = (usize, usize, Vec<u64>)> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| (Just(r), Just(c), proptest::collection::vec(0u64..3, r * c)))
    }

    proptest! {
        #[test]
        fn rank_matches_pivots_and_transpose((r, c, data) in matrix_strategy()) {
            let f = PrimeField::new(3).unwrap();
            let m = ExactMatrix::from_vec(f, r, c, data).unwrap();
            let (_, piv) = m.rref_pivots();
            prop_assert_eq!(m.rank(), piv.len());
            prop_assert_eq!(m.rank(), m.transpose().rank());
            prop_assert!(piv.windows(2).all(|w| w[0] < w[1]));
            // pivot a_i is the first prefix of columns reaching rank i
            for (i, &a) in piv.iter().enumerate() {
                let prefix = |k: usize| {
                    let mut sub = ExactMatrix::zeros(f, r, k);
                    for row in 0..r {
                        for col in 0..k {
                            sub.set(row, col, *m.get(row, col));
                        }
                    }
                    sub.rank()
                };
                prop_assert_eq!(prefix(a), i + 1);
                prop_assert_eq!(prefix(a - 1), i);
            }
        }

        #[test]
        fn rank_invariant_under_permutations((r, c, data) in matrix_strategy(), seed in 0u64..1000) {
            let f = PrimeField::new(3).unwrap();
            let m = ExactMatrix::from_vec(f, r, c, data).unwrap();
            let mut rows: Vec<usize> = (0..r).collect();
            let mut cols: Vec<usize> = (0..c).collect();
            rows.rotate_left(seed as usize % r);
            cols.reverse();
            let mut p = ExactMatrix::zeros(f, r, c);
            for (i, &ri) in rows.iter().enumerate() {
                for (j, &cj) in cols.iter().enumerate() {
                    p.set(i, j, *m.get(ri, cj));
                }
            }
            prop_assert_eq!(m.rank(), p.rank());
        }

        #[test]
        fn echelon_basis_agrees_with_rank((r, c, data) in matrix_strategy()) {
            let f = PrimeField::new(3).unwrap();
            let m = ExactMatrix::from_vec(f, r, c, data.clone()).unwrap();
            let mut b = EchelonBasis::new(f, c);
            for row in data.chunks(c) {
                b.insert(row.to_vec());
            }
            prop_assert_eq!(b.rank(), m.rank());
            let piv: Vec<usize> = m.rref_pivots().1.into_iter().map(|p| p - 1).collect();
            prop_assert_eq!(b.pivots(), piv);
        }
    }
}
