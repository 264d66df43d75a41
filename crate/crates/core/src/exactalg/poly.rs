//! Bivariate polynomials in `x, y` truncated at a total-degree cap, i.e.
//! elements of `k[[x,y]] / (x,y)^cap`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::Error;
use crate::exactalg::field::Field;

/// Exponent pair `(a, b)` of the monomial `x^a y^b`.
pub type Exponent = (u32, u32);

/// Number of monomials of total degree `< deg`.
pub fn monomial_count(deg: u32) -> usize {
    let d = deg as usize;
    d * (d + 1) / 2
}

/// Position of `x^a y^b` in the graded order: degree ascending, then the
/// power of `x` descending.
pub fn monomial_index((a, b): Exponent) -> usize {
    monomial_count(a + b) + b as usize
}

/// All monomials of total degree `< deg`, in [`monomial_index`] order.
pub fn monomials_below(deg: u32) -> Vec<Exponent> {
    (0..deg).flat_map(|t| (0..=t).map(move |b| (t - b, b))).collect()
}

#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedPoly<F: Field> {
    field: F,
    cap: u32,
    coeffs: BTreeMap<Exponent, F::Elem>,
}

impl<F: Field> TruncatedPoly<F> {
    pub fn zero(field: F, cap: u32) -> Self {
        Self {
            field,
            cap,
            coeffs: BTreeMap::new(),
        }
    }

    /// `c * x^a y^b`, or zero when the monomial is at or above the cap.
    pub fn term(field: F, cap: u32, exp: Exponent, c: F::Elem) -> Self {
        let mut p = Self::zero(field, cap);
        p.add_term(exp, c);
        p
    }

    pub fn monomial(field: F, cap: u32, exp: Exponent) -> Self {
        let one = field.one();
        Self::term(field, cap, exp, one)
    }

    pub fn x(field: F, cap: u32) -> Self {
        Self::monomial(field, cap, (1, 0))
    }

    pub fn y(field: F, cap: u32) -> Self {
        Self::monomial(field, cap, (0, 1))
    }

    pub fn constant(field: F, cap: u32, c: F::Elem) -> Self {
        Self::term(field, cap, (0, 0), c)
    }

    pub fn from_terms(field: F, cap: u32, terms: impl IntoIterator<Item = (Exponent, F::Elem)>) -> Self {
        let mut p = Self::zero(field, cap);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &F::Elem)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, exp: Exponent) -> F::Elem {
        self.coeffs.get(&exp).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Lowest total degree of a nonzero term; `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.coeffs.keys().map(|(a, b)| a + b).min()
    }

    pub fn add_term(&mut self, exp: Exponent, c: F::Elem) {
        if exp.0 + exp.1 >= self.cap || self.field.is_zero(&c) {
            return;
        }
        let field = &self.field;
        match self.coeffs.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = field.add(o.get(), &c);
                if field.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<(), Error> {
        if self.cap != other.cap {
            return Err(Error::DimensionMismatch(format!(
                "truncation caps {} and {} differ",
                self.cap, other.cap
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.add_term(*e, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, Error> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            field: self.field.clone(),
            cap: self.cap,
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, self.field.neg(c))).collect(),
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let mut out = Self::zero(self.field.clone(), self.cap);
        for (e, v) in &self.coeffs {
            out.add_term(*e, self.field.mul(v, c));
        }
        out
    }

    /// Product truncated at the cap.
    pub fn mul(&self, other: &Self) -> Result<Self, Error> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.field.clone(), self.cap);
        for ((a1, b1), c1) in &self.coeffs {
            for ((a2, b2), c2) in &other.coeffs {
                if a1 + b1 + a2 + b2 < self.cap {
                    out.add_term((a1 + a2, b1 + b2), self.field.mul(c1, c2));
                }
            }
        }
        Ok(out)
    }

    /// `x^a y^b * self`, truncated.
    pub fn shift(&self, (a, b): Exponent) -> Self {
        let mut out = Self::zero(self.field.clone(), self.cap);
        for ((a1, b1), c) in &self.coeffs {
            out.add_term((a1 + a, b1 + b), c.clone());
        }
        out
    }

    /// Drops all terms of degree `>= cap` and records the new cap.
    pub fn with_cap(&self, cap: u32) -> Self {
        let mut out = Self::zero(self.field.clone(), cap);
        for (e, c) in &self.coeffs {
            out.add_term(*e, c.clone());
        }
        out
    }

    /// Coefficient vector over the monomials of degree `< deg`, in
    /// [`monomial_index`] order. Terms of higher degree are dropped.
    pub fn dense_below(&self, deg: u32) -> Vec<F::Elem> {
        let mut v = vec![self.field.zero(); monomial_count(deg)];
        for (e, c) in &self.coeffs {
            if e.0 + e.1 < deg {
                v[monomial_index(*e)] = c.clone();
            }
        }
        v
    }
}

impl<F: Field> fmt::Debug for TruncatedPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (mod m^{})", self.cap)
    }
}

impl<F: Field> fmt::Display for TruncatedPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut terms: Vec<_> = self.coeffs.iter().collect();
        terms.sort_by_key(|(e, _)| std::cmp::Reverse(monomial_index(**e)));
        for ((a, b), c) in terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono = match (a, b) {
                (0, 0) => String::new(),
                _ => {
                    let px = match a {
                        0 => String::new(),
                        1 => "x".to_string(),
                        _ => format!("x^{a}"),
                    };
                    let py = match b {
                        0 => String::new(),
                        1 => "y".to_string(),
                        _ => format!("y^{b}"),
                    };
                    [px, py]
                        .into_iter()
                        .filter(|s| !s.is_empty())
                        .collect::<Vec<_>>()
                        .join("*")
                }
            };
            if mono.is_empty() {
                write!(f, "{c}")?;
            } else if self.field.is_one(c) {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{c}*{mono}")?;
            }
        }
        Ok(())
    }
}

/// Determinant of a square matrix of truncated polynomials.
///
/// Laplace expansion along rows, memoized over the set of columns already
/// used, so the cost is `O(n 2^n)` polynomial products instead of `n!`.
/// Every product is truncated at the shared cap.
pub fn det_poly<F: Field>(m: &[Vec<TruncatedPoly<F>>]) -> Result<TruncatedPoly<F>, Error> {
    let n = m.len();
    if n == 0 {
        return Err(Error::DimensionMismatch("empty matrix".into()));
    }
    if n > 20 {
        return Err(Error::DimensionMismatch(format!("{n}x{n} is too large for expansion")));
    }
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::DimensionMismatch("matrix is not square".into()));
    }
    let field = m[0][0].field().clone();
    let cap = m[0][0].cap();
    if m.iter().flatten().any(|p| p.cap() != cap) {
        return Err(Error::DimensionMismatch("entries have different caps".into()));
    }
    // level k: determinants of the first k rows against every k-subset of columns
    let mut level: HashMap<u32, TruncatedPoly<F>> = HashMap::new();
    level.insert(0, TruncatedPoly::constant(field.clone(), cap, field.one()));
    for row in m {
        let mut next: HashMap<u32, TruncatedPoly<F>> = HashMap::new();
        for (mask, minor) in &level {
            if minor.is_zero() {
                continue;
            }
            for (c, entry) in row.iter().enumerate() {
                if mask >> c & 1 == 1 || entry.is_zero() {
                    continue;
                }
                let new_mask = mask | 1 << c;
                // position of column c within the sorted column set, from the right
                let above = (new_mask >> (c + 1)).count_ones();
                let mut term = entry.mul(minor)?;
                if above % 2 == 1 {
                    term = term.neg();
                }
                let slot = next
                    .entry(new_mask)
                    .or_insert_with(|| TruncatedPoly::zero(field.clone(), cap));
                *slot = slot.add(&term)?;
            }
        }
        level = next;
    }
    Ok(level
        .remove(&((1u32 << n) - 1))
        .unwrap_or_else(|| TruncatedPoly::zero(field, cap)))
}
