//! Brill-Noether loci: on a single Hilbert-Samuel stratum, in the local
//! punctual Hilbert scheme, and in `Hilb_n(S) x S` for a smooth surface `S`.
//!
//! A locus is described only by its nonemptiness and dimension. On the
//! global side the surface enters only through `dim Hilb_n(S) x S = 2n + 2`.

use std::fmt;

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

use crate::degloci::{dim_deg_gamma, dim_mat_e};
use crate::error::{Error, Result};
use crate::exactalg::{Field, TruncatedPoly};
use crate::hstype::{enumerate_types, gamma_from_shape, HSType};
use crate::localring::IdealBasis;
use crate::refs;

/// Dimension of a locus, with the empty locus kept distinct from every
/// integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dim {
    Empty,
    Value(i64),
}

impl Dim {
    pub fn value(self) -> Option<i64> {
        match self {
            Dim::Empty => None,
            Dim::Value(v) => Some(v),
        }
    }

    pub fn is_empty(self) -> bool {
        self == Dim::Empty
    }
}

impl From<Option<i64>> for Dim {
    fn from(v: Option<i64>) -> Self {
        v.map_or(Dim::Empty, Dim::Value)
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dim::Empty => f.write_str("empty"),
            Dim::Value(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for Dim {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Dim::Empty => s.serialize_str("empty"),
            Dim::Value(v) => s.serialize_i64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for Dim {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(i64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Int(v) => Ok(Dim::Value(v)),
            Repr::Str(s) if s == "empty" => Ok(Dim::Empty),
            Repr::Str(s) => Err(de::Error::custom(format!("unexpected dimension `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "level", rename_all = "lowercase")]
pub enum Query {
    Stratum { t: HSType, r: u32 },
    Local { r: u32, n: u32 },
    Global { r: u32, n: u32 },
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Query::Stratum { t, r } => write!(f, "stratum T=({t}) r={r}"),
            Query::Local { r, n } => write!(f, "local r={r} n={n}"),
            Query::Global { r, n } => write!(f, "global r={r} n={n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BNReport {
    pub query: Query,
    pub nonempty: bool,
    pub dim: Dim,
    /// The dimension is certified exact rather than an upper bound.
    pub tight: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub refs: Vec<String>,
}

impl BNReport {
    fn new(query: Query, dim: Dim, witness: Option<String>, refs: &[&str]) -> Self {
        let nonempty = !dim.is_empty();
        Self {
            query,
            nonempty,
            dim,
            tight: nonempty,
            witness: if nonempty { witness } else { None },
            refs: refs.iter().map(|s| s.to_string()).collect(),
        }
    }

    /// Agreement of query and numbers, ignoring witness and references.
    pub fn same_result(&self, other: &Self) -> bool {
        self.query == other.query
            && self.nonempty == other.nonempty
            && self.dim == other.dim
            && self.tight == other.tight
    }
}

fn tri(r: i64) -> i64 {
    r * (r + 1) / 2
}

/// `ρ^loc_{r,n} = n - r(r+1)/2`.
pub fn rho_local(r: u32, n: u32) -> i64 {
    n as i64 - tri(r as i64)
}

/// `ρ_{r,n} = 2n + 2 - r(r+1)`.
pub fn rho_global(r: u32, n: u32) -> i64 {
    2 * n as i64 + 2 - 2 * tri(r as i64)
}

/// `BN_{=r}(Z_T)`: ideals of type `T` with exactly `r + 1` generators.
///
/// Computed as `D_{d-r}(Mat_e) x A^{n - d(d+1)/2}` and checked against the
/// nonemptiness range `[r_min, d]`, the dimension bound and its equality
/// criterion.
pub fn bn_stratum(t: &HSType, r: u32) -> Result<BNReport> {
    let query = Query::Stratum { t: t.clone(), r };
    let refs = [refs::STRATUM_BN];
    let d = t.order();
    let n = t.n() as i64;
    let jumps = t.jumping_indices();
    let e = jumps.shape();
    let predicted = jumps.r_min() <= r && r <= d;
    if r > d {
        return Ok(BNReport::new(query, Dim::Empty, None, &refs));
    }
    let rank = (d - r) as usize;
    let locus = dim_mat_e(&e, rank)?;
    let fail = |what: &str| {
        Err(Error::violation(
            refs::STRATUM_BN,
            format!("T = ({t}), r = {r}: {what}"),
        ))
    };
    if locus.nonempty != predicted {
        return fail("nonemptiness");
    }
    let dim = locus.dim.map(|x| x + n - tri(d as i64));
    let bound = n - tri(r as i64) - (d - r) as i64;
    if let Some(x) = dim {
        if x > bound {
            return fail("dimension exceeds bound");
        }
    }
    if e.len() > rank && dim != Some(bound) {
        return fail("bound not attained");
    }
    let witness = if r == d && t.n() == tri(d as i64) as u32 {
        format!("m^{d}")
    } else {
        let a = dim_deg_gamma(&gamma_from_shape(&e), rank)?
            .maximizers
            .first()
            .map(ToString::to_string)
            .unwrap_or_default();
        format!("constant block of rank {rank} with echelon sequence ({a}) in shape ({e})")
    };
    Ok(BNReport::new(query, dim.into(), Some(witness), &refs))
}

/// `BN^loc_{r,n}`: ideals of colength `n` supported at the origin needing at
/// least `r + 1` generators.
///
/// For `r >= 1` this is the closed form in `ρ^loc_{r,n}`. For `r = 0` the
/// locus is the whole punctual Hilbert scheme, of dimension `n - 1` for
/// `n >= 1` (the curvilinear stratum is dense), and the point `A` for `n = 0`.
pub fn bn_local(r: u32, n: u32) -> BNReport {
    let query = Query::Local { r, n };
    if r == 0 {
        let (dim, witness) = if n == 0 {
            (0, "the unit ideal".to_string())
        } else {
            (n as i64 - 1, format!("curvilinear ideal (y, x^{n})"))
        };
        return BNReport::new(query, Dim::Value(dim), Some(witness), &[refs::CURVILINEAR]);
    }
    let rho = rho_local(r, n);
    if rho < 0 {
        return BNReport::new(query, Dim::Empty, None, &[refs::LOCAL_BN]);
    }
    let witness = if rho == 0 {
        format!("m^{r}")
    } else {
        format!("an ideal of order {r} and colength {n} with {} generators", r + 1)
    };
    let refs: &[&str] = if rho == 0 {
        &[refs::LOCAL_BN, refs::LOCAL_POINT]
    } else {
        &[refs::LOCAL_BN]
    };
    BNReport::new(query, Dim::Value(rho), Some(witness), refs)
}

/// The contribution of one stratum to `BN^loc_{r,n}`: `dim BN_{>=r}(Z_T)`,
/// the largest `dim BN_{=r'}(Z_T)` over `r' >= r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratumContribution {
    pub t: HSType,
    pub dim: i64,
}

/// All types of colength `n` whose stratum meets `BN^loc_{r,n}`.
pub fn local_contributions(r: u32, n: u32) -> Result<Vec<StratumContribution>> {
    let mut out = Vec::new();
    for t in enumerate_types(n) {
        let mut best: Option<i64> = None;
        for rr in r.max(1)..=t.order() {
            if let Dim::Value(x) = bn_stratum(&t, rr)?.dim {
                best = best.max(Some(x));
            }
        }
        if let Some(dim) = best {
            out.push(StratumContribution { t, dim });
        }
    }
    Ok(out)
}

/// `BN^loc_{r,n}` as the union of its intersections with the strata.
pub fn bn_local_via_strata(r: u32, n: u32) -> Result<BNReport> {
    let query = Query::Local { r, n };
    if n == 0 {
        let dim = if r == 0 { Dim::Value(0) } else { Dim::Empty };
        return Ok(BNReport::new(
            query,
            dim,
            Some("the unit ideal".into()),
            &[refs::LOCAL_VIA_STRATA],
        ));
    }
    let contributions = local_contributions(r, n)?;
    let dim = contributions.iter().map(|c| c.dim).max();
    let witness = contributions
        .iter()
        .find(|c| Some(c.dim) == dim)
        .map(|c| format!("stratum of type ({})", c.t));
    Ok(BNReport::new(query, dim.into(), witness, &[refs::LOCAL_VIA_STRATA]))
}

/// Dimensions of `BN^(m)_{r,n}`, the pairs `(I, p)` where `I` has colength
/// `m` at `p`, for every `m` where the stratum is nonempty.
///
/// Each is `dim BN^loc_{r,m} + 2` for the point `p` plus `2(n - m)` for the
/// rest of the subscheme.
pub fn multiplicity_strata(r: u32, n: u32) -> Result<Vec<(u32, i64)>> {
    let strata: Vec<(u32, i64)> = (0..=n)
        .filter_map(|m| bn_local(r, m).dim.value().map(|x| (m, x + 2 * (n - m + 1) as i64)))
        .collect();
    if strata.windows(2).any(|w| w[1].1 >= w[0].1) {
        return Err(Error::violation(
            refs::MULTIPLICITY_STRATA,
            format!("r = {r}, n = {n}: not strictly decreasing in m"),
        ));
    }
    if r >= 1 {
        for &(m, x) in &strata {
            if x != 2 * n as i64 + 2 - m as i64 - tri(r as i64) {
                return Err(Error::violation(
                    refs::MULTIPLICITY_STRATA,
                    format!("r = {r}, n = {n}, m = {m}: dimension {x}"),
                ));
            }
        }
    }
    Ok(strata)
}

/// `BN_{r,n} ⊂ Hilb_n(S) x S`, as the largest multiplicity stratum.
pub fn bn_global(r: u32, n: u32) -> Result<BNReport> {
    let query = Query::Global { r, n };
    let strata = multiplicity_strata(r, n)?;
    let top = strata.first().copied();
    let dim = top.map(|(_, x)| x);
    let rho = rho_global(r, n);
    let consistent = match dim {
        Some(x) => x == rho && rho >= 2,
        None => rho < 2,
    };
    if !consistent {
        return Err(Error::violation(
            refs::GLOBAL_BN,
            format!("r = {r}, n = {n}: strata give {}, rho = {rho}", Dim::from(dim)),
        ));
    }
    if r >= 1 {
        if let Some((m, _)) = top {
            if m as i64 != tri(r as i64) {
                return Err(Error::violation(
                    refs::MULTIPLICITY_STRATA,
                    format!("r = {r}, n = {n}: maximum at m = {m}"),
                ));
            }
        }
    }
    let witness = top.map(|(m, _)| match (r, m) {
        (0, 0) => "a general point of Hilb_n(S) x S".to_string(),
        _ => format!("(m_p^{r} J, p) with J of colength {} away from p", n - m),
    });
    Ok(BNReport::new(
        query,
        dim.into(),
        witness,
        &[refs::GLOBAL_BN, refs::MULTIPLICITY_STRATA],
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecursionEntry {
    pub r: u32,
    pub n: u32,
    pub dim: Dim,
    /// `dim BN_{=r,n}`: the locus needing exactly `r + 1` generators.
    pub exact_dim: Dim,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecursionReport {
    pub n_max: u32,
    pub entries: Vec<RecursionEntry>,
    /// Number of `(r, n, r')` preimage checks performed.
    pub preimages: usize,
}

/// Derives `dim BN_{r,n}` for all `r, n <= n_max` by induction on `n`, using
/// only the nested correspondence
/// `BN_{r-1,n-r} <- Hilb^†_{n-r,n} -> BN_{r,n}` with `Grass(r, r')` fibers
/// over `BN_{=r'-1,n-r}`, and compares with the closed form and with
/// [`bn_global`].
pub fn nested_recursion_verify(n_max: u32) -> Result<RecursionReport> {
    let size = n_max as usize + 2;
    // dims[r][n] = dim BN_{r,n}, exact[r][n] = dim BN_{=r,n}
    let mut dims = vec![vec![None::<i64>; size]; size + 1];
    let mut exact = vec![vec![None::<i64>; size]; size + 1];
    let mut preimages = 0;
    let fail = |r: u32, n: u32, rr: u32, what: String| {
        Err(Error::violation(
            refs::NESTED_RECURSION,
            format!("r = {r}, n = {n}, r' = {rr}: {what}"),
        ))
    };

    for n in 0..=n_max {
        let nu = n as usize;
        for r in 0..=n_max + 1 {
            let ru = r as usize;
            dims[ru][nu] = if n == 0 {
                (r == 0).then_some(2)
            } else if r > n {
                None
            } else if r == 0 {
                Some(2 * n as i64 + 2)
            } else {
                if rho_global(r - 1, n - r) != rho_global(r, n) {
                    return fail(r, n, r, "rho_{r-1,n-r} != rho_{r,n}".into());
                }
                let mut best = None;
                for rr in r..=n - r + 1 {
                    let shift = (rr as i64 - 1) * (rr as i64 - r as i64);
                    if shift < 0 || (shift == 0) != (rr == r) {
                        return fail(r, n, rr, format!("(r'-1)(r'-r) = {shift}"));
                    }
                    let Some(base) = exact[rr as usize - 1][nu - ru] else {
                        continue;
                    };
                    let fiber = r as i64 * (rr as i64 - r as i64);
                    let preimage = base + fiber;
                    preimages += 1;
                    if preimage != rho_global(r, n) - shift {
                        return fail(r, n, rr, format!("preimage dimension {preimage}"));
                    }
                    best = best.max(Some(preimage));
                }
                best
            };
        }
        for s in 0..=n_max as usize {
            exact[s][nu] = match (dims[s][nu], dims[s + 1][nu]) {
                (Some(x), None) => Some(x),
                (Some(x), Some(y)) if y < x => Some(x),
                _ => None,
            };
        }
    }

    let mut entries = Vec::new();
    for n in 0..=n_max {
        for r in 0..=n_max {
            let dim = dims[r as usize][n as usize];
            let rho = rho_global(r, n);
            let closed = (rho >= 2).then_some(rho);
            let by_count = n as i64 >= tri(r as i64);
            if dim != closed || dim.is_some() != by_count {
                return fail(
                    r,
                    n,
                    r,
                    format!("derived {}, closed form {}", Dim::from(dim), Dim::from(closed)),
                );
            }
            let global = bn_global(r, n)?;
            if global.dim != Dim::from(dim) {
                return fail(
                    r,
                    n,
                    r,
                    format!("derived {}, strata give {}", Dim::from(dim), global.dim),
                );
            }
            entries.push(RecursionEntry {
                r,
                n,
                dim: dim.into(),
                exact_dim: exact[r as usize][n as usize].into(),
            });
        }
    }
    Ok(RecursionReport {
        n_max,
        entries,
        preimages,
    })
}

/// Colength of the Veronese ideal `(f_0, ..., f_r)`.
pub fn veronese_colength(r: u32) -> u32 {
    r * (r + 1) / 2 + 1
}

/// `f_0 = x^{r+1}`, `f_i = x^{r-i} y^i - a_i x^r` for `1 <= i <= r`.
pub fn veronese_ideal<F: Field>(field: &F, a: &[F::Elem], cap: u32) -> Result<IdealBasis<F>> {
    let r = a.len() as u32;
    let mut gens = vec![TruncatedPoly::monomial(field.clone(), cap, (r + 1, 0))];
    for (i, ai) in (1..=r).zip(a) {
        gens.push(TruncatedPoly::from_terms(
            field.clone(),
            cap,
            [((r - i, i), field.one()), ((r, 0), field.neg(ai))],
        ));
    }
    IdealBasis::new(gens)
}

/// `a_i - a_1 a_{i-1} = 0` for `2 <= i <= r`, i.e. `a_i = a_1^i`.
pub fn on_veronese_curve<F: Field>(field: &F, a: &[F::Elem]) -> bool {
    a.windows(2)
        .all(|w| field.sub(&w[1], &field.mul(&a[0], &w[0])) == field.zero())
}

/// Whether the Veronese ideal with parameters `a` needs `r + 1` generators,
/// computed with the local ring.
pub fn veronese_check<F: Field>(field: &F, a: &[F::Elem]) -> Result<bool> {
    let r = a.len() as u32;
    if r < 2 {
        return Err(Error::InvalidIdeal(format!("Veronese ideal needs r >= 2, got {r}")));
    }
    let n = veronese_colength(r);
    let p = field.characteristic();
    if p != 0 && p <= n as u64 {
        return Err(Error::CharacteristicTooSmall { p, bound: n as u64 + 1 });
    }
    let ideal = veronese_ideal(field, a, n + 2)?;
    Ok(ideal.min_generators()? == r as usize + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::PrimeField;
    use crate::hstype::validate_type;

    fn ty(t: &[u32]) -> HSType {
        validate_type(t).unwrap()
    }

    #[test]
    fn dim_serde() {
        assert_eq!(serde_json::to_string(&Dim::Empty).unwrap(), "\"empty\"");
        assert_eq!(serde_json::to_string(&Dim::Value(-3)).unwrap(), "-3");
        assert_eq!(serde_json::from_str::<Dim>("7").unwrap(), Dim::Value(7));
        assert!(serde_json::from_str::<Dim>("\"none\"").is_err());
    }

    #[test]
    fn report_round_trip() {
        let rep = bn_stratum(&ty(&[1, 2, 3, 4, 5, 3, 3, 1]), 2).unwrap();
        let json = serde_json::to_string(&rep).unwrap();
        assert_eq!(serde_json::from_str::<BNReport>(&json).unwrap(), rep);
        let rep = bn_local(3, 5);
        let json = serde_json::to_string(&rep).unwrap();
        assert!(json.contains("\"dim\":\"empty\""));
        assert_eq!(serde_json::from_str::<BNReport>(&json).unwrap(), rep);
    }

    #[test]
    fn stratum_examples() {
        for d in 1..7 {
            let rep = bn_stratum(&HSType::power_of_maximal(d).unwrap(), d).unwrap();
            assert_eq!(rep.dim, Dim::Value(0));
            assert_eq!(rep.witness.as_deref(), Some(format!("m^{d}").as_str()));
        }
        let rep = bn_stratum(&ty(&[1, 2, 3, 4, 5, 3, 3, 1]), 2).unwrap();
        assert_eq!(rep.dim, Dim::Value(15));
        assert!(bn_stratum(&ty(&[1, 2, 3, 4, 5, 3, 3, 1]), 1).unwrap().dim.is_empty());
        assert!(bn_stratum(&ty(&[1, 2, 3, 4, 5, 3, 3, 1]), 6).unwrap().dim.is_empty());
    }

    #[test]
    fn grassmann_strata() {
        for d in 1..=6u32 {
            for l in 1..=d {
                let t = HSType::grassmannian(d, l).unwrap();
                for r in 0..=d + 1 {
                    let rep = bn_stratum(&t, r).unwrap();
                    let expected = (l.max(d - l) <= r && r <= d).then(|| (l + r * (d - r)) as i64);
                    assert_eq!(rep.dim, Dim::from(expected), "d {d} l {l} r {r}");
                }
            }
        }
    }

    #[test]
    fn local_examples() {
        let rep = bn_local(2, 3);
        assert_eq!(rep.dim, Dim::Value(0));
        assert_eq!(rep.witness.as_deref(), Some("m^2"));
        assert_eq!(bn_local(2, 4).dim, Dim::Value(1));
        assert!(bn_local(3, 5).dim.is_empty());
        assert_eq!(bn_local(0, 5).dim, Dim::Value(4));
        for n in 1..9 {
            assert_eq!(bn_local(1, n).dim, Dim::Value(n as i64 - 1));
        }
    }

    #[test]
    fn local_via_strata_agrees() {
        for n in 0..=10 {
            for r in 0..=5 {
                let a = bn_local(r, n);
                let b = bn_local_via_strata(r, n).unwrap();
                assert!(a.same_result(&b), "r {r} n {n}: {a:?} vs {b:?}");
            }
        }
        for r in 1..=4 {
            let n = r * (r + 1) / 2;
            let c = local_contributions(r, n).unwrap();
            assert_eq!(c.len(), 1);
            assert_eq!(c[0].t, HSType::power_of_maximal(r).unwrap());
        }
    }

    #[test]
    fn global_examples() {
        for n in 0..8 {
            assert_eq!(bn_global(0, n).unwrap().dim, Dim::Value(2 * n as i64 + 2));
        }
        assert_eq!(bn_global(1, 1).unwrap().dim, Dim::Value(2));
        assert_eq!(bn_global(2, 3).unwrap().dim, Dim::Value(2));
        assert_eq!(bn_global(2, 5).unwrap().dim, Dim::Value(6));
        assert_eq!(bn_global(3, 8).unwrap().dim, Dim::Value(6));
        assert!(bn_global(3, 5).unwrap().dim.is_empty());
        assert_eq!(multiplicity_strata(2, 5).unwrap(), vec![(3, 6), (4, 5), (5, 4)]);
    }

    #[test]
    fn recursion() {
        let rep = nested_recursion_verify(30).unwrap();
        let dim = |r: u32, n: u32| rep.entries.iter().find(|e| e.r == r && e.n == n).unwrap().dim;
        assert_eq!(dim(1, 1), Dim::Value(2));
        assert_eq!(dim(2, 3), Dim::Value(2));
        assert_eq!(dim(3, 6), Dim::Value(2));
        assert_eq!(dim(0, 1), Dim::Value(4));
        assert_eq!(dim(1, 2), Dim::Value(4));
        assert!(rep.preimages > 0);
    }

    #[test]
    fn veronese_examples() {
        let f = PrimeField::new(101).unwrap();
        assert!(veronese_check(&f, &[3, 9]).unwrap());
        assert!(!veronese_check(&f, &[3, 10]).unwrap());
        for r in 2..=5 {
            assert!(veronese_check(&f, &vec![0; r]).unwrap());
        }
        let small = PrimeField::new(3).unwrap();
        assert!(matches!(
            veronese_check(&small, &[1, 1]),
            Err(Error::CharacteristicTooSmall { p: 3, .. })
        ));
        assert!(on_veronese_curve(&f, &[2, 4, 8]));
        assert!(!on_veronese_curve(&f, &[2, 4, 9]));
    }
}
