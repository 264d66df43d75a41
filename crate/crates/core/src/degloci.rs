//! Degeneracy loci of `d x d` matrices of a fixed profile `Γ`, stratified by
//! rank `R` and echelon sequence `a`, together with an exhaustive census over
//! small prime fields.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactalg::{row_reduce, PrimeField};
use crate::hstype::{gamma_from_shape, join, GammaProfile, Shape};
use crate::refs;

pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Pivot columns `a_1 < ... < a_R` of a row-echelon form, 1-based.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct EchelonSeq(Vec<usize>);

impl EchelonSeq {
    pub fn new(a: Vec<usize>, d: usize) -> Result<Self> {
        let increasing = a.windows(2).all(|w| w[0] < w[1]);
        let in_range = a.iter().all(|&x| (1..=d).contains(&x));
        if !increasing || !in_range {
            return Err(Error::InvalidEchelon(a, d));
        }
        Ok(Self(a))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// The sequence `a_i = d + i - R` of the matrix with ones in its top
    /// right corner.
    pub fn rightmost(d: usize, r: usize) -> Self {
        Self((1..=r).map(|i| d + i - r).collect())
    }

    /// All strictly increasing sequences of length `r` in `[1, d]`, in
    /// lexicographic order.
    pub fn all(d: usize, r: usize) -> Vec<Self> {
        fn go(start: usize, d: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<EchelonSeq>) {
            if left == 0 {
                out.push(EchelonSeq(cur.clone()));
                return;
            }
            for x in start..=d + 1 - left {
                cur.push(x);
                go(x + 1, d, left - 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if r <= d {
            go(1, d, r, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl From<EchelonSeq> for Vec<usize> {
    fn from(a: EchelonSeq) -> Self {
        a.0
    }
}

impl fmt::Display for EchelonSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join(&self.0))
    }
}

/// `ρ^Γ(a) = Rd - R(R-1)/2 + Σ (Γ(a_i) - a_i)`.
pub fn rho_gamma(gamma: &GammaProfile, a: &EchelonSeq) -> i64 {
    let d = gamma.d() as i64;
    let r = a.rank() as i64;
    let shift: i64 = a.0.iter().map(|&x| gamma.at(x) as i64 - x as i64).sum();
    r * d - r * (r - 1) / 2 + shift
}

/// Whether some matrix of profile `Γ` has echelon sequence `a`, i.e.
/// `Γ(a_i) >= i` for all `i`.
pub fn is_realizable(gamma: &GammaProfile, a: &EchelonSeq) -> bool {
    a.0.iter().enumerate().all(|(i, &x)| gamma.at(x) as usize > i)
}

/// The nonemptiness criterion `Γ(k) - k >= R - d` for all `k`.
pub fn degeneracy_nonempty(gamma: &GammaProfile, r: usize) -> bool {
    let d = gamma.d() as i64;
    r <= gamma.d() && (1..=gamma.d()).all(|k| gamma.at(k) as i64 - k as i64 >= r as i64 - d)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegLocus {
    pub rank: usize,
    pub nonempty: bool,
    pub dim: Option<i64>,
    pub maximizers: Vec<EchelonSeq>,
}

/// Nonemptiness and dimension of the rank-`R` locus of profile `Γ`, with all
/// echelon sequences attaining the dimension.
pub fn dim_deg_gamma(gamma: &GammaProfile, r: usize) -> Result<DegLocus> {
    let nonempty = degeneracy_nonempty(gamma, r);
    let realizable: Vec<_> = EchelonSeq::all(gamma.d(), r)
        .into_iter()
        .filter(|a| is_realizable(gamma, a))
        .collect();
    if nonempty != !realizable.is_empty() {
        return Err(Error::violation(
            refs::DEGENERACY_NONEMPTY,
            format!("profile {:?}, R = {r}: criterion says {nonempty}", gamma.values()),
        ));
    }
    let dim = realizable.iter().map(|a| rho_gamma(gamma, a)).max();
    let maximizers = realizable
        .into_iter()
        .filter(|a| Some(rho_gamma(gamma, a)) == dim)
        .collect();
    Ok(DegLocus {
        rank: r,
        nonempty,
        dim,
        maximizers,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShapeLocus {
    pub rank: usize,
    pub nonempty: bool,
    pub dim: Option<i64>,
    pub bound: i64,
    /// Whether the dimension attains the bound.
    pub tight: bool,
}

/// `R(2d - R - 1)/2`.
pub fn shape_bound(d: usize, r: usize) -> i64 {
    let (d, r) = (d as i64, r as i64);
    r * (2 * d - r - 1) / 2
}

/// The rank-`R` locus in matrices of shape `e`, checked against the shape
/// bound and, for two blocks, the Grassmannian description.
pub fn dim_mat_e(e: &Shape, r: usize) -> Result<ShapeLocus> {
    let d = e.d() as usize;
    let locus = dim_deg_gamma(&gamma_from_shape(e), r)?;
    let fail = |reference, what: &str| Err(Error::violation(reference, format!("shape {e}, R = {r}: {what}")));

    let predicted = r + e.max_part() as usize <= d;
    if locus.nonempty != predicted {
        return fail(refs::SHAPE_NONEMPTY, "nonemptiness");
    }
    let bound = shape_bound(d, r);
    if let Some(dim) = locus.dim {
        if dim > bound {
            return fail(refs::SHAPE_BOUND, "dimension exceeds bound");
        }
        if e.len() > r && dim != bound {
            return fail(refs::SHAPE_BOUND, "bound not attained");
        }
    }
    if let [e1, e2] = *e.parts() {
        let expect_nonempty = r as u32 <= e1.min(e2);
        let expect_dim = (r * (d - r)) as i64;
        if locus.nonempty != expect_nonempty || (expect_nonempty && locus.dim != Some(expect_dim)) {
            return fail(refs::TWO_BLOCKS, "two-block locus");
        }
    }
    Ok(ShapeLocus {
        rank: r,
        nonempty: locus.nonempty,
        dim: locus.dim,
        bound,
        tight: locus.dim == Some(bound),
    })
}

/// Exact counts of the matrices of shape `e` over `F_q`, by rank and echelon
/// sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCensus {
    q: u64,
    shape: Shape,
    counts: BTreeMap<(usize, EchelonSeq), u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRow {
    pub q: u64,
    pub e: String,
    #[serde(rename = "R")]
    pub rank: usize,
    pub a: String,
    pub count: u64,
}

impl RankCensus {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn counts(&self) -> &BTreeMap<(usize, EchelonSeq), u64> {
        &self.counts
    }

    pub fn count(&self, r: usize, a: &EchelonSeq) -> u64 {
        self.counts.get(&(r, a.clone())).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Number of matrices of rank `R`.
    pub fn rank_count(&self, r: usize) -> u64 {
        self.counts.iter().filter(|((k, _), _)| *k == r).map(|(_, c)| c).sum()
    }

    pub fn max_rank(&self) -> usize {
        self.counts.keys().map(|(r, _)| *r).max().unwrap_or(0)
    }

    pub fn rows(&self) -> Vec<CensusRow> {
        self.counts
            .iter()
            .map(|((r, a), &count)| CensusRow {
                q: self.q,
                e: self.shape.to_string(),
                rank: *r,
                a: a.to_string(),
                count,
            })
            .collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in self.rows() {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

impl Serialize for RankCensus {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            rank: usize,
            a: &'a EchelonSeq,
            count: u64,
        }
        #[derive(Serialize)]
        struct Repr<'a> {
            q: u64,
            shape: &'a Shape,
            total: u64,
            counts: Vec<Entry<'a>>,
        }
        Repr {
            q: self.q,
            shape: &self.shape,
            total: self.total(),
            counts: self
                .counts
                .iter()
                .map(|((rank, a), &count)| Entry { rank: *rank, a, count })
                .collect(),
        }
        .serialize(s)
    }
}

/// Free entries `(i, j)` of a profile, 0-based, in row-major order.
fn free_positions(gamma: &GammaProfile) -> Vec<(usize, usize)> {
    let d = gamma.d();
    (1..=d)
        .flat_map(|i| {
            (1..=d)
                .filter(move |&j| gamma.allows(i, j))
                .map(move |j| (i - 1, j - 1))
        })
        .collect()
}

fn check_budget(q: u64, free: usize, budget: u64) -> Result<u64> {
    let needed = (q as u128).checked_pow(free as u32);
    match needed {
        Some(n) if n <= budget as u128 => Ok(n as u64),
        Some(n) => Err(Error::BudgetExceeded {
            needed: n.to_string(),
            budget,
        }),
        None => Err(Error::BudgetExceeded {
            needed: format!("{q}^{free}"),
            budget,
        }),
    }
}

/// Enumerates all `q^{n_e}` matrices of shape `e` over `F_q` (q prime).
///
/// Entries are filled in row-major order like an odometer; the first few
/// entries are fixed per parallel shard.
pub fn census(e: &Shape, q: u64, budget: u64) -> Result<RankCensus> {
    let field = PrimeField::new(q)?;
    let gamma = gamma_from_shape(e);
    let d = gamma.d();
    let free = free_positions(&gamma);
    check_budget(q, free.len(), budget)?;

    let mut prefix_len = 0;
    while prefix_len < free.len() && q.pow(prefix_len as u32) < 256 {
        prefix_len += 1;
    }
    let shards = q.pow(prefix_len as u32);
    let (prefix, suffix) = free.split_at(prefix_len);

    let merged = (0..shards)
        .into_par_iter()
        .map(|shard| {
            let mut counts: HashMap<Vec<usize>, u64> = HashMap::new();
            let mut matrix = vec![0u64; d * d];
            let mut rest = shard;
            for &(i, j) in prefix.iter().rev() {
                matrix[i * d + j] = rest % q;
                rest /= q;
            }
            let mut scratch = vec![0u64; d * d];
            loop {
                scratch.copy_from_slice(&matrix);
                let pivots = row_reduce(&field, &mut scratch, d, d);
                *counts.entry(pivots).or_default() += 1;
                // advance the odometer, last entry fastest
                let mut carried = true;
                for &(i, j) in suffix.iter().rev() {
                    let v = &mut matrix[i * d + j];
                    *v += 1;
                    if *v < q {
                        carried = false;
                        break;
                    }
                    *v = 0;
                }
                if carried {
                    break;
                }
            }
            counts
        })
        .reduce(HashMap::new, |mut acc, part| {
            for (k, v) in part {
                *acc.entry(k).or_default() += v;
            }
            acc
        });

    let counts = merged
        .into_iter()
        .map(|(pivots, c)| {
            let a = EchelonSeq(pivots.into_iter().map(|p| p + 1).collect());
            ((a.rank(), a), c)
        })
        .collect();
    Ok(RankCensus {
        q,
        shape: e.clone(),
        counts,
    })
}

/// All echelon sequences realized by some matrix of profile `Γ`.
pub fn predicted_sequences(gamma: &GammaProfile) -> BTreeSet<(usize, EchelonSeq)> {
    (0..=gamma.d())
        .flat_map(|r| EchelonSeq::all(gamma.d(), r))
        .filter(|a| is_realizable(gamma, a))
        .map(|a| (a.rank(), a))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RealizationReport {
    pub shape: Shape,
    pub q: u64,
    pub realized: usize,
    pub max_rank: usize,
    pub total: u64,
}

/// Runs the census for `e` over `F_q` and checks that the realized
/// `(R, a)` pairs are exactly the predicted ones.
pub fn verify_realization(e: &Shape, q: u64, budget: u64) -> Result<RealizationReport> {
    let c = census(e, q, budget)?;
    check_census(&c)?;
    Ok(RealizationReport {
        shape: e.clone(),
        q,
        realized: c.counts.len(),
        max_rank: c.max_rank(),
        total: c.total(),
    })
}

fn check_census(c: &RankCensus) -> Result<()> {
    let e = &c.shape;
    let gamma = gamma_from_shape(e);
    let d = e.d() as usize;
    let predicted = predicted_sequences(&gamma);
    let realized: BTreeSet<_> = c.counts.keys().cloned().collect();
    if let Some((r, a)) = realized.symmetric_difference(&predicted).next() {
        let what = if realized.contains(&(*r, a.clone())) {
            "realized but not predicted"
        } else {
            "predicted but not realized"
        };
        return Err(Error::violation(
            refs::ECHELON_REALIZATION,
            format!("shape {e}, q = {}: (R = {r}, a = ({a})) {what}", c.q),
        ));
    }
    let max_rank = c.max_rank();
    if max_rank != d - e.max_part() as usize {
        return Err(Error::violation(
            refs::SHAPE_NONEMPTY,
            format!("shape {e}, q = {}: max rank {max_rank}", c.q),
        ));
    }
    let expected_total = check_budget(c.q, e.free_entries() as usize, u64::MAX)?;
    if c.total() != expected_total {
        return Err(Error::violation(
            refs::BETA_DIMENSIONS,
            format!("shape {e}, q = {}: {} matrices counted", c.q, c.total()),
        ));
    }
    for r in 0..=d {
        if (c.rank_count(r) > 0) != degeneracy_nonempty(&gamma, r) {
            return Err(Error::violation(
                refs::DEGENERACY_NONEMPTY,
                format!("shape {e}, q = {}, R = {r}", c.q),
            ));
        }
    }
    Ok(())
}

/// Echelon sequences of rank `R` whose counts grow fastest from the first
/// census to the second, compared exactly by cross-multiplication.
pub fn growth_argmax(small: &RankCensus, large: &RankCensus, r: usize) -> Vec<EchelonSeq> {
    let seqs: Vec<_> = small
        .counts
        .keys()
        .filter(|(k, _)| *k == r)
        .map(|(_, a)| a.clone())
        .collect();
    let ratio = |a: &EchelonSeq| (large.count(r, a) as u128, small.count(r, a) as u128);
    let mut best: Vec<EchelonSeq> = Vec::new();
    for a in seqs {
        let (num, den) = ratio(&a);
        match best.first().map(ratio) {
            None => best.push(a),
            Some((bn, bd)) => match (num * bd).cmp(&(bn * den)) {
                std::cmp::Ordering::Greater => best = vec![a],
                std::cmp::Ordering::Equal => best.push(a),
                std::cmp::Ordering::Less => {}
            },
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankFit {
    pub rank: usize,
    pub counts: Vec<u64>,
    /// Coefficients of the interpolating polynomial through all points,
    /// constant term first, as exact fractions.
    pub coefficients: Vec<String>,
    /// Smallest degree whose interpolant through the first points already
    /// reproduces all of them, if any is below the number of points minus one.
    pub consistent_degree: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusFit {
    pub shape: Shape,
    pub qs: Vec<u64>,
    pub ranks: Vec<RankFit>,
}

/// Newton interpolation; returns the monomial coefficients.
fn interpolate(xs: &[BigRational], ys: &[BigRational]) -> Vec<BigRational> {
    let n = xs.len();
    let mut div = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            div[i] = (&div[i] - &div[i - 1]) / (&xs[i] - &xs[i - level]);
        }
    }
    let mut coeffs = vec![BigRational::zero(); n];
    for k in (0..n).rev() {
        // coeffs = coeffs * (x - xs[k]) + div[k]
        let mut next = vec![BigRational::zero(); n];
        for i in 0..n {
            if i + 1 < n {
                next[i + 1] += &coeffs[i];
            }
            next[i] -= &coeffs[i] * &xs[k];
        }
        next[0] += &div[k];
        coeffs = next;
    }
    while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    coeffs
}

fn evaluate(coeffs: &[BigRational], x: &BigRational) -> BigRational {
    coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

/// Fits the per-rank counts of shape `e` across the given primes by
/// polynomials in `q`. Nothing is asserted about the outcome.
pub fn census_fit(e: &Shape, qs: &[u64], budget: u64) -> Result<CensusFit> {
    let censuses = qs.iter().map(|&q| census(e, q, budget)).collect::<Result<Vec<_>>>()?;
    let xs: Vec<BigRational> = qs.iter().map(|&q| BigRational::from_integer(BigInt::from(q))).collect();
    let ranks = (0..=e.d() as usize)
        .map(|r| {
            let counts: Vec<u64> = censuses.iter().map(|c| c.rank_count(r)).collect();
            let ys: Vec<BigRational> = counts
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect();
            let coefficients = interpolate(&xs, &ys).iter().map(ToString::to_string).collect();
            let consistent_degree = (0..xs.len().saturating_sub(1)).find(|&deg| {
                let partial = interpolate(&xs[..=deg], &ys[..=deg]);
                xs.iter().zip(&ys).all(|(x, y)| evaluate(&partial, x) == *y)
            });
            RankFit {
                rank: r,
                counts,
                coefficients,
                consistent_degree,
            }
        })
        .collect();
    Ok(CensusFit {
        shape: e.clone(),
        qs: qs.to_vec(),
        ranks,
    })
}
