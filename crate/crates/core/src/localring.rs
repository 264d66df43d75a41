//! Ideals of `A = k[[x,y]]` given by polynomial generators, computed inside
//! the truncation `A / m^cap`.
//!
//! Everything is linear algebra on the monomial basis of `A / m^cap` in the
//! graded order (degree ascending, then `x`-power descending). Since the
//! pivot of each echelon row is its lowest-degree monomial, a single echelon
//! basis of `I` in `A / m^cap` yields the image of `I` in every `A / m^j`,
//! `j <= cap`, as the pivot count in the first `#monomials(deg < j)` columns.

use crate::error::Error;
use crate::exactalg::{monomial_count, monomials_below, EchelonBasis, Field, TruncatedPoly};
use crate::hstype::{validate_type, HSType};

/// Generators of an ideal `I ⊂ A`, all truncated at the same cap.
#[derive(Clone, Debug)]
pub struct IdealBasis<F: Field> {
    field: F,
    cap: u32,
    gens: Vec<TruncatedPoly<F>>,
}

impl<F: Field> IdealBasis<F> {
    pub fn new(gens: Vec<TruncatedPoly<F>>) -> Result<Self, Error> {
        let first = gens
            .first()
            .ok_or_else(|| Error::InvalidIdeal("no generators".into()))?;
        let (field, cap) = (first.field().clone(), first.cap());
        if gens.iter().any(|g| g.cap() != cap || *g.field() != field) {
            return Err(Error::InvalidIdeal("generators disagree on cap or field".into()));
        }
        if gens.iter().all(TruncatedPoly::is_zero) {
            return Err(Error::InvalidIdeal("all generators vanish".into()));
        }
        Ok(Self { field, cap, gens })
    }

    /// The monomial ideal generated by `x^a y^b` for the given exponents.
    pub fn monomial(field: F, cap: u32, exps: &[(u32, u32)]) -> Result<Self, Error> {
        Self::new(
            exps.iter()
                .map(|&e| TruncatedPoly::monomial(field.clone(), cap, e))
                .collect(),
        )
    }

    /// `m^d = (x^d, x^{d-1} y, ..., y^d)`.
    pub fn power_of_maximal(field: F, d: u32, cap: u32) -> Result<Self, Error> {
        let exps: Vec<_> = (0..=d).map(|b| (d - b, b)).collect();
        Self::monomial(field, cap, &exps)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn gens(&self) -> &[TruncatedPoly<F>] {
        &self.gens
    }

    pub fn with_cap(&self, cap: u32) -> Self {
        Self {
            field: self.field.clone(),
            cap,
            gens: self.gens.iter().map(|g| g.with_cap(cap)).collect(),
        }
    }

    /// Echelon basis of `(I + m^deg) / m^deg`, spanned by the products of the
    /// generators with all monomials of degree `< deg` (those from the subset
    /// `gens`, and with multipliers of degree at least `min_shift`).
    fn span_basis(&self, deg: u32, gens: &[TruncatedPoly<F>], min_shift: u32) -> EchelonBasis<F> {
        let mut basis = EchelonBasis::new(self.field.clone(), monomial_count(deg));
        for g in gens {
            let Some(ord) = g.order() else { continue };
            if ord >= deg {
                continue;
            }
            for shift in monomials_below(deg - ord) {
                if shift.0 + shift.1 < min_shift {
                    continue;
                }
                if basis.is_full() {
                    return basis;
                }
                basis.insert(g.shift(shift).dense_below(deg));
            }
        }
        basis
    }

    fn basis(&self) -> EchelonBasis<F> {
        self.span_basis(self.cap, &self.gens, 0)
    }

    /// `dim (I + m^j) / m^j`, the dimension of the image of `I` in `A / m^j`.
    pub fn span_in_quotient(&self, j: u32) -> Result<usize, Error> {
        if j > self.cap {
            return Err(Error::CapTooSmall {
                cap: self.cap,
                needed: j,
            });
        }
        Ok(self.span_basis(j, &self.gens, 0).rank())
    }

    /// Hilbert-Samuel function `χ(i) = dim A / (I + m^{i+1})` for
    /// `0 <= i < cap`.
    pub fn hilbert_samuel(&self) -> Vec<usize> {
        let basis = self.basis();
        (1..=self.cap)
            .map(|j| {
                let total = monomial_count(j);
                total - basis.rank_in_prefix(total)
            })
            .collect()
    }

    /// The sequence `t_j = χ(j) - χ(j-1)` up to its first zero, which must
    /// occur strictly below the cap.
    fn raw_type(&self) -> Result<Vec<u32>, Error> {
        let chi = self.hilbert_samuel();
        let mut t = Vec::new();
        let mut prev = 0;
        for &c in &chi {
            let tj = c - prev;
            if tj == 0 {
                return Ok(t);
            }
            t.push(tj as u32);
            prev = c;
        }
        Err(Error::NonStabilized { cap: self.cap })
    }

    /// `dim_k A / I`.
    pub fn colength(&self) -> Result<u32, Error> {
        Ok(self.raw_type()?.iter().sum())
    }

    pub fn hs_type(&self) -> Result<HSType, Error> {
        validate_type(&self.raw_type()?)
    }

    /// Minimal number of generators `μ(I) = dim I / mI`.
    ///
    /// Needs `cap >= colength + 2`, so that `m^cap ⊂ mI` and the quotient
    /// is seen exactly inside `A / m^cap`.
    pub fn min_generators(&self) -> Result<usize, Error> {
        let n = self.colength()?;
        if self.cap < n + 2 {
            return Err(Error::CapTooSmall {
                cap: self.cap,
                needed: n + 2,
            });
        }
        let mut w = self.span_basis(self.cap, &self.gens, 1);
        let mut mu = 0;
        for g in &self.gens {
            if w.insert(g.dense_below(self.cap)) {
                mu += 1;
            }
        }
        Ok(mu)
    }

    /// Whether the span of the given monomials meets `I` only in zero inside
    /// `A / m^cap`.
    pub fn meets_monomials_trivially(&self, monomials: &[(u32, u32)]) -> bool {
        let mut basis = self.basis();
        monomials.iter().all(|&e| {
            let mono = TruncatedPoly::monomial(self.field.clone(), self.cap, e);
            basis.insert(mono.dense_below(self.cap))
        })
    }

    /// Whether every monomial of degree `j` lies in `I + m^cap`.
    pub fn contains_degree(&self, j: u32) -> bool {
        if j >= self.cap {
            return true;
        }
        let basis = self.basis();
        let gained = basis.rank_in_prefix(monomial_count(j + 1)) - basis.rank_in_prefix(monomial_count(j));
        gained == j as usize + 1
    }

    /// Whether `I` and `J` have the same image in `A / m^cap`.
    pub fn same_span(&self, gens: &[TruncatedPoly<F>]) -> bool {
        let mine = self.basis();
        let theirs = self.span_basis(self.cap, gens, 0);
        mine.rank() == theirs.rank() && gens.iter().all(|g| mine.contains(g.dense_below(self.cap)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::PrimeField;

    fn f7() -> PrimeField {
        PrimeField::new(7).unwrap()
    }

    fn poly(cap: u32, terms: &[((u32, u32), i64)]) -> TruncatedPoly<PrimeField> {
        let f = f7();
        TruncatedPoly::from_terms(f, cap, terms.iter().map(|&(e, c)| (e, f.from_i64(c))))
    }

    #[test]
    fn span_examples() {
        let f = f7();
        let m = IdealBasis::power_of_maximal(f, 1, 6).unwrap();
        assert_eq!(m.span_in_quotient(3).unwrap(), 5);
        let m2 = IdealBasis::power_of_maximal(f, 2, 6).unwrap();
        assert_eq!(m2.span_in_quotient(3).unwrap(), 3);
        assert!(m2.span_in_quotient(7).is_err());
    }

    #[test]
    fn span_of_complete_intersection() {
        // (x^3, y^2 - x^2): standard monomials modulo m^6 are 1, x, y, x^2, xy, x^2 y
        let i = IdealBasis::new(vec![poly(6, &[((3, 0), 1)]), poly(6, &[((0, 2), 1), ((2, 0), -1)])]).unwrap();
        assert_eq!(i.span_in_quotient(6).unwrap(), 15);
        assert_eq!(i.colength().unwrap(), 6);
        assert_eq!(i.hs_type().unwrap().as_slice(), &[1, 2, 2, 1]);
    }

    #[test]
    fn colength_and_type_examples() {
        let f = f7();
        for d in 1..5 {
            let n = d * (d + 1) / 2;
            let i = IdealBasis::power_of_maximal(f, d, n + 2).unwrap();
            assert_eq!(i.colength().unwrap(), n);
            assert_eq!(i.hs_type().unwrap(), HSType::power_of_maximal(d).unwrap());
            assert_eq!(i.min_generators().unwrap(), d as usize + 1);
        }
        let i = IdealBasis::monomial(f, 6, &[(3, 0), (1, 1), (0, 2)]).unwrap();
        assert_eq!(i.colength().unwrap(), 4);
        assert_eq!(i.hs_type().unwrap().as_slice(), &[1, 2, 1]);
    }

    #[test]
    fn non_stabilized() {
        let f = f7();
        // (x^5) alone has infinite colength
        let i = IdealBasis::monomial(f, 8, &[(5, 0)]).unwrap();
        assert!(matches!(i.colength(), Err(Error::NonStabilized { cap: 8 })));
        // (x^3, y^3) has type (1,2,3,2,1); cap 4 cannot see the end
        let i = IdealBasis::monomial(f, 4, &[(3, 0), (0, 3)]).unwrap();
        assert!(i.colength().is_err());
        assert_eq!(i.with_cap(6).colength().unwrap(), 9);
    }

    #[test]
    fn generator_counts() {
        // curvilinear (y, x^n) and a disguised version (y - x^2, x^n)
        for n in 2..7 {
            let i = IdealBasis::new(vec![poly(n + 2, &[((0, 1), 1)]), poly(n + 2, &[((n, 0), 1)])]).unwrap();
            assert_eq!(i.min_generators().unwrap(), 2);
            let j = IdealBasis::new(vec![
                poly(n + 2, &[((0, 1), 1), ((2, 0), -1)]),
                poly(n + 2, &[((n, 0), 1)]),
                poly(n + 2, &[((n - 1, 1), 1)]),
            ])
            .unwrap();
            assert_eq!(j.colength().unwrap(), n);
            assert_eq!(j.min_generators().unwrap(), 2);
        }
        // a point of the Veronese conic: (x^3, xy - 3x^2, y^2 - 9x^2) over F_7
        let i = IdealBasis::new(vec![
            poly(6, &[((3, 0), 1)]),
            poly(6, &[((1, 1), 1), ((2, 0), -3)]),
            poly(6, &[((0, 2), 1), ((2, 0), -9)]),
        ])
        .unwrap();
        assert_eq!(i.colength().unwrap(), 4);
        assert_eq!(i.min_generators().unwrap(), 3);
        assert!(i.with_cap(5).min_generators().is_err());
    }

    #[test]
    fn chart_condition() {
        let f = f7();
        let i = IdealBasis::monomial(f, 6, &[(2, 0), (1, 1), (0, 2)]).unwrap();
        assert!(i.meets_monomials_trivially(&[(0, 0), (1, 0), (0, 1)]));
        assert!(!i.meets_monomials_trivially(&[(0, 0), (1, 1)]));
        assert!(i.contains_degree(2));
        assert!(!i.contains_degree(1));
    }
}
