//! Affine chart `Z_P` of a Hilbert-Samuel stratum, parametrized by
//! deformations `β` of the relation matrix of the monomial ideal of the
//! normal pattern `P`.
//!
//! Indices of `M_P` and `β` are 1-based throughout: rows `1..=d+1`, columns
//! `1..=d`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::exactalg::{det_poly, ExactMatrix, Field, TruncatedPoly};
use crate::hstype::{gamma_from_shape, jumping_indices, GammaProfile, HSType, NormalPattern};
use crate::localring::IdealBasis;

/// The monomial generators `u_s = x^{k_s} y^s`, `s = 0..=d`.
pub fn monomial_ideal<F: Field>(p: &NormalPattern, field: F, cap: u32) -> Result<IdealBasis<F>, Error> {
    let exps: Vec<_> = (0..=p.order() as usize).map(|s| (p.k(s), s as u32)).collect();
    IdealBasis::monomial(field, cap, &exps)
}

/// The `(d+1) x d` relation matrix `M_P` of the monomial ideal:
/// `(M_P)_ii = -y`, `(M_P)_(j+1)j = x^{k_{j-1} - k_j}`, zero elsewhere.
#[derive(Clone, Debug)]
pub struct ResolutionMatrix<F: Field> {
    d: usize,
    entries: Vec<Vec<TruncatedPoly<F>>>,
}

impl<F: Field> ResolutionMatrix<F> {
    pub fn new(p: &NormalPattern, field: F, cap: u32) -> Self {
        let d = p.order() as usize;
        let zero = TruncatedPoly::zero(field.clone(), cap);
        let mut entries = vec![vec![zero; d]; d + 1];
        for j in 1..=d {
            entries[j - 1][j - 1] = TruncatedPoly::y(field.clone(), cap).neg();
            let step = p.k(j - 1) - p.k(j);
            entries[j][j - 1] = TruncatedPoly::monomial(field.clone(), cap, (step, 0));
        }
        Self { d, entries }
    }

    pub fn order(&self) -> usize {
        self.d
    }

    /// 1-based entry.
    pub fn entry(&self, i: usize, j: usize) -> &TruncatedPoly<F> {
        &self.entries[i - 1][j - 1]
    }

    pub fn rows(&self) -> &[Vec<TruncatedPoly<F>>] {
        &self.entries
    }

    /// `M_P + β`.
    pub fn deformed(&self, beta: &BetaMatrix<F>) -> Result<Self, Error> {
        if beta.order() != self.d {
            return Err(Error::DimensionMismatch(format!(
                "beta of order {} against M_P of order {}",
                beta.order(),
                self.d
            )));
        }
        let cap = self.entries[0][0].cap();
        let mut entries = self.entries.clone();
        for i in 1..=self.d {
            for j in i..=self.d {
                let b = beta.entry_poly(i, j, cap);
                entries[i - 1][j - 1] = entries[i - 1][j - 1].add(&b)?;
            }
        }
        Ok(Self { d: self.d, entries })
    }

    /// The `d + 1` maximal minors: minor `s` deletes row `s + 1` and carries
    /// the sign `(-1)^s`.
    pub fn maximal_minors(&self) -> Result<Vec<TruncatedPoly<F>>, Error> {
        (0..=self.d)
            .map(|s| {
                let sub: Vec<Vec<_>> = self
                    .entries
                    .iter()
                    .enumerate()
                    .filter(|&(r, _)| r != s)
                    .map(|(_, row)| row.clone())
                    .collect();
                let det = det_poly(&sub)?;
                Ok(if s % 2 == 1 { det.neg() } else { det })
            })
            .collect()
    }
}

/// One free coefficient of `β`: the coefficient of `x^power` in `β_ij`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BetaSlot {
    pub i: usize,
    pub j: usize,
    pub power: u32,
}

/// Whether row `i` and column `j` fall in the same block, i.e.
/// `k_{j-1} + j = k_{i-1} + i`; then the constant term of `β_ij` vanishes.
pub fn same_block(p: &NormalPattern, i: usize, j: usize) -> bool {
    p.k(j - 1) as usize + j == p.k(i - 1) as usize + i
}

/// The admissible coefficient positions of `β` for the pattern, in
/// row-major order and ascending power.
pub fn beta_slots(p: &NormalPattern) -> Vec<BetaSlot> {
    let d = p.order() as usize;
    let mut slots = Vec::new();
    for i in 1..=d {
        for j in i..=d {
            let len = p.k(j - 1) - p.k(j);
            let start = u32::from(same_block(p, i, j));
            slots.extend((start..len).map(|power| BetaSlot { i, j, power }));
        }
    }
    slots
}

/// A deformation parameter `β`: a `(d+1) x d` matrix of polynomials in `x`
/// obeying
/// 1. `β_ij = 0` for `i > j` (so the last row vanishes);
/// 2. `deg β_ij <= k_{j-1} - k_j - 1`;
/// 3. `β_ij(0) = 0` when `k_{j-1} + j = k_{i-1} + i`.
#[derive(Clone, Debug, PartialEq)]
pub struct BetaMatrix<F: Field> {
    field: F,
    pattern: NormalPattern,
    /// `coeffs[i-1][j-1][power]`; all-zero vectors for the forced entries.
    coeffs: Vec<Vec<Vec<F::Elem>>>,
}

impl<F: Field> BetaMatrix<F> {
    pub fn zero(pattern: &NormalPattern, field: F) -> Self {
        let d = pattern.order() as usize;
        let coeffs = (1..=d + 1)
            .map(|_| {
                (1..=d)
                    .map(|j| vec![field.zero(); (pattern.k(j - 1) - pattern.k(j)) as usize])
                    .collect()
            })
            .collect();
        Self {
            field,
            pattern: pattern.clone(),
            coeffs,
        }
    }

    /// Builds `β` from its free coefficients, given in [`beta_slots`] order.
    pub fn from_free(pattern: &NormalPattern, field: F, values: Vec<F::Elem>) -> Result<Self, Error> {
        let slots = beta_slots(pattern);
        if slots.len() != values.len() {
            return Err(Error::InvalidBeta(format!(
                "{} values for {} free coefficients",
                values.len(),
                slots.len()
            )));
        }
        let mut beta = Self::zero(pattern, field);
        for (slot, v) in slots.into_iter().zip(values) {
            beta.coeffs[slot.i - 1][slot.j - 1][slot.power as usize] = v;
        }
        Ok(beta)
    }

    /// Builds `β` from arbitrary coefficient lists and checks the three
    /// constraints. `entries[i-1][j-1]` lists the coefficients of `β_ij` by
    /// ascending power; missing entries are zero.
    pub fn from_entries(pattern: &NormalPattern, field: F, entries: Vec<Vec<Vec<F::Elem>>>) -> Result<Self, Error> {
        let d = pattern.order() as usize;
        let mut beta = Self::zero(pattern, field.clone());
        if entries.len() > d + 1 || entries.iter().any(|row| row.len() > d) {
            return Err(Error::InvalidBeta("matrix larger than (d+1) x d".into()));
        }
        for (r, row) in entries.into_iter().enumerate() {
            for (c, poly) in row.into_iter().enumerate() {
                let (i, j) = (r + 1, c + 1);
                let nonzero: Vec<usize> = (0..poly.len()).filter(|&k| !field.is_zero(&poly[k])).collect();
                let Some(&top) = nonzero.last() else { continue };
                if i > j {
                    return Err(Error::InvalidBeta(format!(
                        "entry ({i},{j}) below the diagonal is nonzero"
                    )));
                }
                let len = (pattern.k(j - 1) - pattern.k(j)) as usize;
                if top >= len {
                    return Err(Error::InvalidBeta(format!(
                        "entry ({i},{j}) has degree {top}, bound is {}",
                        len as i64 - 1
                    )));
                }
                if same_block(pattern, i, j) && nonzero[0] == 0 {
                    return Err(Error::InvalidBeta(format!("entry ({i},{j}) must vanish at the origin")));
                }
                for (k, v) in poly.into_iter().enumerate().take(len) {
                    beta.coeffs[r][c][k] = v;
                }
            }
        }
        Ok(beta)
    }

    pub fn pattern(&self) -> &NormalPattern {
        &self.pattern
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn order(&self) -> usize {
        self.pattern.order() as usize
    }

    /// Coefficient list of `β_ij` (1-based), ascending powers of `x`.
    pub fn entry(&self, i: usize, j: usize) -> &[F::Elem] {
        &self.coeffs[i - 1][j - 1]
    }

    /// The free coefficients in [`beta_slots`] order.
    pub fn free_values(&self) -> Vec<F::Elem> {
        beta_slots(&self.pattern)
            .into_iter()
            .map(|s| self.coeffs[s.i - 1][s.j - 1][s.power as usize].clone())
            .collect()
    }

    pub fn entry_poly(&self, i: usize, j: usize, cap: u32) -> TruncatedPoly<F> {
        TruncatedPoly::from_terms(
            self.field.clone(),
            cap,
            self.entry(i, j)
                .iter()
                .enumerate()
                .map(|(k, c)| ((k as u32, 0), c.clone())),
        )
    }

    /// `β̄(0)`: constant terms of the top `d x d` block.
    pub fn constant_block(&self) -> ExactMatrix<F> {
        let d = self.order();
        let mut m = ExactMatrix::zeros(self.field.clone(), d, d);
        for i in 1..=d {
            for j in 1..=d {
                if let Some(c) = self.entry(i, j).first() {
                    m.set(i - 1, j - 1, c.clone());
                }
            }
        }
        m
    }

    /// Checks that `β̄(0)` vanishes outside the rows allowed by `Γ`.
    pub fn constant_block_fits(&self, gamma: &GammaProfile) -> bool {
        let m = self.constant_block();
        let d = self.order();
        (1..=d).all(|i| (1..=d).all(|j| gamma.allows(i, j) || self.field.is_zero(m.get(i - 1, j - 1))))
    }
}

/// `(n_T, n_e)`: the dimensions of the chart and of the space of constant
/// parts `β̄(0)`.
pub fn beta_dims(t: &HSType) -> (u32, u32) {
    let jumps = jumping_indices(t);
    let es: Vec<u32> = jumps.nonzero().into_iter().map(|(_, e)| e).collect();
    let d = t.order();
    let n_t = t.n() - d - es.iter().map(|e| e * (e - 1) / 2).sum::<u32>();
    let n_e = (d * d - es.iter().map(|e| e * e).sum::<u32>()) / 2;
    (n_t, n_e)
}

/// The deterministic sampling stream for sample number `index` under `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A `β` whose free coefficients are drawn from `rng`.
pub fn sample_beta_with<F: Field, R: rand::Rng + ?Sized>(p: &NormalPattern, field: F, rng: &mut R) -> BetaMatrix<F> {
    let values = beta_slots(p).iter().map(|_| field.sample(rng)).collect();
    BetaMatrix::from_free(p, field, values).expect("slot count matches")
}

/// Deterministic sample `β` for the chart of `t`.
pub fn sample_beta<F: Field>(t: &HSType, field: F, seed: u64) -> BetaMatrix<F> {
    sample_beta_with(&t.partition(), field, &mut sample_rng(seed, 0))
}

/// `I(β)`: the ideal of maximal minors of `M_P + β`, truncated at `cap`.
pub fn ideal_from_beta<F: Field>(beta: &BetaMatrix<F>, cap: u32) -> Result<IdealBasis<F>, Error> {
    let mp = ResolutionMatrix::new(beta.pattern(), beta.field().clone(), cap);
    IdealBasis::new(mp.deformed(beta)?.maximal_minors()?)
}

/// `d + 1 - rank β̄(0)`.
pub fn mu_predicted<F: Field>(beta: &BetaMatrix<F>) -> usize {
    beta.order() + 1 - beta.constant_block().rank()
}

/// The profile the forced zeros of `β̄(0)` should follow.
pub fn constant_block_profile(p: &NormalPattern) -> GammaProfile {
    gamma_from_shape(&jumping_indices(&p.hs_type()).shape())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::PrimeField;
    use crate::hstype::validate_type;

    fn f23() -> PrimeField {
        PrimeField::new(23).unwrap()
    }

    fn pattern(k: &[u32]) -> NormalPattern {
        NormalPattern::new(k.to_vec()).unwrap()
    }

    fn exps(i: &IdealBasis<PrimeField>) -> Vec<Vec<(u32, u32)>> {
        i.gens().iter().map(|g| g.terms().map(|(e, _)| *e).collect()).collect()
    }

    #[test]
    fn monomial_ideal_examples() {
        let f = f23();
        let i = monomial_ideal(&pattern(&[2, 1]), f, 5).unwrap();
        assert_eq!(exps(&i), vec![vec![(2, 0)], vec![(1, 1)], vec![(0, 2)]]);
        let i = monomial_ideal(&pattern(&[8, 6, 5, 2, 1]), f, 24).unwrap();
        assert_eq!(
            exps(&i),
            vec![
                vec![(8, 0)],
                vec![(6, 1)],
                vec![(5, 2)],
                vec![(2, 3)],
                vec![(1, 4)],
                vec![(0, 5)]
            ]
        );
        let i = monomial_ideal(&pattern(&[5]), f, 7).unwrap();
        assert_eq!(exps(&i), vec![vec![(5, 0)], vec![(0, 1)]]);
    }

    #[test]
    fn resolution_matrix_subdiagonal() {
        let f = f23();
        let m = ResolutionMatrix::new(&pattern(&[8, 6, 5, 2, 1]), f, 24);
        let steps: Vec<_> = (1..=5)
            .map(|j| m.entry(j + 1, j).terms().map(|(e, _)| *e).collect::<Vec<_>>())
            .collect();
        assert_eq!(
            steps,
            vec![vec![(2, 0)], vec![(1, 0)], vec![(3, 0)], vec![(1, 0)], vec![(1, 0)]]
        );
        assert_eq!(*m.entry(3, 3), TruncatedPoly::y(f, 24).neg());
        assert!(m.entry(1, 3).is_zero());
    }

    #[test]
    fn minors_of_mp_for_k21() {
        let f = f23();
        let m = ResolutionMatrix::new(&pattern(&[2, 1]), f, 5);
        let minors = m.maximal_minors().unwrap();
        let expect = [(2, 0), (1, 1), (0, 2)];
        for (g, e) in minors.iter().zip(expect) {
            assert_eq!(*g, TruncatedPoly::monomial(f, 5, e));
        }
    }

    #[test]
    fn dims_examples() {
        assert_eq!(beta_dims(&validate_type(&[1, 2, 3, 4, 5, 3, 3, 1]).unwrap()), (15, 8));
        assert_eq!(beta_dims(&HSType::curvilinear(7).unwrap()), (6, 0));
        assert_eq!(beta_dims(&HSType::power_of_maximal(4).unwrap()), (0, 0));
        assert_eq!(beta_slots(&pattern(&[8, 6, 5, 2, 1])).len(), 15);
    }

    #[test]
    fn worked_example_slots() {
        // free slots of the 22-point example, as (i, j, power)
        let got: Vec<_> = beta_slots(&pattern(&[8, 6, 5, 2, 1]))
            .into_iter()
            .map(|s| (s.i, s.j, s.power))
            .collect();
        let expect = vec![
            (1, 1, 1),
            (1, 2, 0),
            (1, 3, 0),
            (1, 3, 1),
            (1, 3, 2),
            (1, 4, 0),
            (1, 5, 0),
            (2, 3, 1),
            (2, 3, 2),
            (2, 4, 0),
            (2, 5, 0),
            (3, 3, 1),
            (3, 3, 2),
            (3, 4, 0),
            (3, 5, 0),
        ];
        assert_eq!(got, expect);
    }

    #[test]
    fn sampling_is_deterministic() {
        let t = validate_type(&[1, 2, 3, 4, 5, 3, 3, 1]).unwrap();
        let a = sample_beta(&t, f23(), 42);
        let b = sample_beta(&t, f23(), 42);
        assert_eq!(a, b);
        assert_eq!(a.free_values().len(), 15);
        assert_ne!(a, sample_beta(&t, f23(), 43));
    }

    #[test]
    fn zero_beta_gives_monomial_ideal() {
        let f = f23();
        for t in crate::hstype::enumerate_types(6) {
            let p = t.partition();
            let beta = BetaMatrix::zero(&p, f);
            let i = ideal_from_beta(&beta, 8).unwrap();
            let m = monomial_ideal(&p, f, 8).unwrap();
            assert!(i.same_span(m.gens()));
            assert_eq!(mu_predicted(&beta), p.order() as usize + 1);
        }
    }

    #[test]
    fn constraint_violations_are_rejected() {
        let f = f23();
        let p = pattern(&[3, 1]);
        // below the diagonal
        assert!(BetaMatrix::from_entries(&p, f, vec![vec![], vec![vec![1]]]).is_err());
        // degree too large: k_0 - k_1 - 1 = 1
        assert!(BetaMatrix::from_entries(&p, f, vec![vec![vec![0, 0, 1]]]).is_err());
        // constant term on the diagonal
        assert!(BetaMatrix::from_entries(&p, f, vec![vec![vec![1]]]).is_err());
        let ok = BetaMatrix::from_entries(&p, f, vec![vec![vec![0, 4], vec![5]]]).unwrap();
        assert_eq!(ok.free_values(), vec![4, 5]);
        assert!(BetaMatrix::from_free(&p, f, vec![1]).is_err());
    }

    #[test]
    fn veronese_chart_generators() {
        // k = (3, 1): beta_11 = a x, beta_12 = b gives (x^3, xy - a x^2, y^2 - ... )
        let f = f23();
        let p = pattern(&[3, 1]);
        let beta = BetaMatrix::from_entries(&p, f, vec![vec![vec![0, 3], vec![0]]]).unwrap();
        let i = ideal_from_beta(&beta, 6).unwrap();
        let shown: Vec<String> = i.gens().iter().map(|g| g.to_string()).collect();
        assert_eq!(shown, vec!["x^3", "x*y + 20*x^2", "y^2 + 20*x*y"]);
        assert_eq!(i.hs_type().unwrap().as_slice(), &[1, 2, 1]);
        assert_eq!(i.min_generators().unwrap(), 3);
    }
}
