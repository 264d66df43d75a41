//! Hilbert-Samuel types of ideals of finite colength in `k[[x,y]]`, and the
//! combinatorial data derived from them: jumping indices, normal patterns
//! (strictly decreasing partitions), stratum dimensions and the row profile
//! of shape-`e` matrices.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A Hilbert-Samuel type `T = (t_0, t_1, ...)` with trailing zeros dropped.
///
/// Invariant: `t_j = j + 1` for `j < d` and `d >= t_d >= t_{d+1} >= ... > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct HSType {
    t: Vec<u32>,
    n: u32,
    d: u32,
}

impl HSType {
    pub fn as_slice(&self) -> &[u32] {
        &self.t
    }

    /// Colength `|T|`.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Order: the largest `k` with `I ⊂ m^k`.
    pub fn order(&self) -> u32 {
        self.d
    }

    /// `t_j`, zero past the end.
    pub fn t(&self, j: usize) -> u32 {
        self.t.get(j).copied().unwrap_or(0)
    }

    /// The curvilinear type `(1, 1, ..., 1)` of colength `n`.
    pub fn curvilinear(n: u32) -> Result<Self, Error> {
        validate_type(&vec![1; n as usize])
    }

    /// The type `(1, 2, ..., d)` of `m^d`.
    pub fn power_of_maximal(d: u32) -> Result<Self, Error> {
        validate_type(&(1..=d).collect::<Vec<_>>())
    }

    /// The type `(1, 2, ..., d, l)` of the Grassmannian stratum
    /// `m^{d+1} ⊂ I ⊂ m^d`, for `0 <= l <= d`.
    pub fn grassmannian(d: u32, l: u32) -> Result<Self, Error> {
        let mut t: Vec<u32> = (1..=d).collect();
        t.push(l);
        validate_type(&t)
    }

    pub fn is_curvilinear(&self) -> bool {
        self.d == 1
    }

    pub fn jumping_indices(&self) -> JumpVector {
        jumping_indices(self)
    }

    pub fn partition(&self) -> NormalPattern {
        partition_from_type(self)
    }
}

impl TryFrom<Vec<u32>> for HSType {
    type Error = Error;

    fn try_from(t: Vec<u32>) -> Result<Self, Error> {
        validate_type(&t)
    }
}

impl From<HSType> for Vec<u32> {
    fn from(t: HSType) -> Self {
        t.t
    }
}

impl fmt::Display for HSType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", join(&self.t))
    }
}

pub(crate) fn join<T: fmt::Display>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub fn validate_type(t: &[u32]) -> Result<HSType, Error> {
    let reject = |reason: String| Error::InvalidType { t: t.to_vec(), reason };
    let end = t.iter().rposition(|&x| x != 0).map_or(0, |p| p + 1);
    let t = &t[..end];
    if t.is_empty() {
        return Err(reject("empty type (colength 0)".into()));
    }
    let mut d = t.len();
    for (j, &tj) in t.iter().enumerate() {
        if tj > j as u32 + 1 {
            return Err(reject(format!("t_{j} = {tj} exceeds {}", j + 1)));
        }
        if tj < j as u32 + 1 {
            d = j;
            break;
        }
    }
    if d == 0 {
        return Err(reject("t_0 must be 1".into()));
    }
    for j in d + 1..t.len() {
        if t[j] > t[j - 1] {
            return Err(reject(format!("t_{j} = {} exceeds t_{} = {}", t[j], j - 1, t[j - 1])));
        }
    }
    if t[d..].contains(&0) {
        return Err(reject("zero entry before the tail".into()));
    }
    Ok(HSType {
        t: t.to_vec(),
        n: t.iter().sum(),
        d: d as u32,
    })
}

/// Jumping indices `e_j = t_{j-1} - t_j` for `j >= d`, stored sparsely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JumpVector {
    order: u32,
    nonzero: BTreeMap<u32, u32>,
}

impl JumpVector {
    pub fn get(&self, j: u32) -> u32 {
        self.nonzero.get(&j).copied().unwrap_or(0)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Nonzero `(j, e_j)` pairs with `j` decreasing.
    pub fn nonzero(&self) -> Vec<(u32, u32)> {
        self.nonzero.iter().rev().map(|(&j, &e)| (j, e)).collect()
    }

    /// `e = (e_{i_1}, ..., e_{i_t})` with `i_1 > ... > i_t`.
    pub fn shape(&self) -> Shape {
        Shape(self.nonzero.values().rev().copied().collect())
    }

    pub fn sum(&self) -> u32 {
        self.nonzero.values().sum()
    }

    /// `r_min = max_j e_j`.
    pub fn r_min(&self) -> u32 {
        self.nonzero.values().copied().max().unwrap_or(0)
    }
}

pub fn jumping_indices(t: &HSType) -> JumpVector {
    let d = t.order() as usize;
    let nonzero = (d..=t.as_slice().len())
        .filter_map(|j| {
            let e = t.t(j - 1) - t.t(j);
            (e > 0).then_some((j as u32, e))
        })
        .collect();
    JumpVector {
        order: t.order(),
        nonzero,
    }
}

/// A composition `e = (e_1, ..., e_s)` of `d` into positive parts, read as the
/// diagonal block sizes of a shape-`e` matrix from the top left.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Shape(Vec<u32>);

impl Shape {
    pub fn new(parts: Vec<u32>) -> Result<Self, Error> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::InvalidShape(parts));
        }
        Ok(Self(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn d(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_part(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// `n_e = (d^2 - sum e_i^2) / 2`, the number of free entries.
    pub fn free_entries(&self) -> u32 {
        let d = self.d();
        (d * d - self.0.iter().map(|e| e * e).sum::<u32>()) / 2
    }

    /// All compositions of `d`, in lexicographic order.
    pub fn compositions(d: u32) -> Vec<Shape> {
        fn go(rest: u32, prefix: &mut Vec<u32>, out: &mut Vec<Shape>) {
            if rest == 0 {
                out.push(Shape(prefix.clone()));
                return;
            }
            for part in 1..=rest {
                prefix.push(part);
                go(rest - part, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if d > 0 {
            go(d, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl TryFrom<Vec<u32>> for Shape {
    type Error = Error;

    fn try_from(v: Vec<u32>) -> Result<Self, Error> {
        Shape::new(v)
    }
}

impl From<Shape> for Vec<u32> {
    fn from(s: Shape) -> Self {
        s.0
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", join(&self.0))
    }
}

/// Normal pattern of a type, recorded by its row lengths
/// `k_0 > k_1 > ... > k_{d-1} > 0` (with `k_d = 0` implicit). Row `s` holds
/// the monomials `x^i y^s`, `i < k_s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct NormalPattern {
    k: Vec<u32>,
}

impl NormalPattern {
    pub fn new(k: Vec<u32>) -> Result<Self, Error> {
        let strict = k.windows(2).all(|w| w[0] > w[1]);
        if k.is_empty() || !strict || k.last() == Some(&0) {
            return Err(Error::InvalidPartition { k });
        }
        Ok(Self { k })
    }

    pub fn rows(&self) -> &[u32] {
        &self.k
    }

    /// `k_s` for `0 <= s <= d`; `k_d = 0`.
    pub fn k(&self, s: usize) -> u32 {
        self.k.get(s).copied().unwrap_or(0)
    }

    pub fn n(&self) -> u32 {
        self.k.iter().sum()
    }

    pub fn order(&self) -> u32 {
        self.k.len() as u32
    }

    /// Monomials of `P`, row by row.
    pub fn monomials(&self) -> Vec<(u32, u32)> {
        self.k
            .iter()
            .enumerate()
            .flat_map(|(s, &ks)| (0..ks).map(move |i| (i, s as u32)))
            .collect()
    }

    pub fn hs_type(&self) -> HSType {
        type_from_partition(self)
    }
}

impl TryFrom<Vec<u32>> for NormalPattern {
    type Error = Error;

    fn try_from(k: Vec<u32>) -> Result<Self, Error> {
        NormalPattern::new(k)
    }
}

impl From<NormalPattern> for Vec<u32> {
    fn from(p: NormalPattern) -> Self {
        p.k
    }
}

impl fmt::Display for NormalPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", join(&self.k))
    }
}

/// `k_s = #{j : t_j > s}`.
pub fn partition_from_type(t: &HSType) -> NormalPattern {
    let k = (0..t.order())
        .map(|s| t.as_slice().iter().filter(|&&tj| tj > s).count() as u32)
        .collect();
    NormalPattern { k }
}

/// `t_j = #{s : s <= j < s + k_s}`, the number of degree-`j` monomials of `P`.
pub fn type_from_partition(p: &NormalPattern) -> HSType {
    let len = p
        .rows()
        .iter()
        .enumerate()
        .map(|(s, &ks)| s + ks as usize)
        .max()
        .unwrap_or(0);
    let t: Vec<u32> = (0..len)
        .map(|j| {
            p.rows()
                .iter()
                .enumerate()
                .filter(|&(s, &ks)| s <= j && j < s + ks as usize)
                .count() as u32
        })
        .collect();
    validate_type(&t).expect("strictly decreasing partitions give valid types")
}

/// All types of colength `n`, one per strictly decreasing partition of `n`,
/// with partitions in descending lexicographic order.
pub fn enumerate_types(n: u32) -> Vec<HSType> {
    strict_partitions(n)
        .into_iter()
        .map(|k| type_from_partition(&NormalPattern { k }))
        .collect()
}

/// Partitions of `n` into distinct parts, descending lexicographically.
pub fn strict_partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=max.min(rest)).rev() {
            prefix.push(part);
            go(rest - part, part - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        go(n, n, &mut Vec::new(), &mut out);
    }
    out
}

/// Both closed forms of the stratum dimension:
/// `n - sum e_j(e_j+1)/2` and `n - d - sum e_j(e_j-1)/2`.
pub fn dim_stratum_forms(t: &HSType) -> (i64, i64) {
    let jumps = jumping_indices(t);
    let n = t.n() as i64;
    let d = t.order() as i64;
    let es: Vec<i64> = jumps.nonzero().into_iter().map(|(_, e)| e as i64).collect();
    let first = n - es.iter().map(|e| e * (e + 1) / 2).sum::<i64>();
    let second = n - d - es.iter().map(|e| e * (e - 1) / 2).sum::<i64>();
    (first, second)
}

pub fn dim_stratum(t: &HSType) -> u32 {
    let (a, b) = dim_stratum_forms(t);
    assert_eq!(a, b, "stratum dimension forms disagree for {t}");
    a as u32
}

/// A nondecreasing profile `Γ: {1..d} → {0..d}` with `Γ(i) <= i - 1`.
/// A `d x d` matrix is of type `Γ` when `M_ij = 0` for `i > Γ(j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GammaProfile(Vec<u32>);

impl GammaProfile {
    pub fn new(values: Vec<u32>) -> Result<Self, Error> {
        let nondecreasing = values.windows(2).all(|w| w[0] <= w[1]);
        let strictly_upper = values.iter().enumerate().all(|(i, &g)| g as usize <= i);
        if values.is_empty() || !nondecreasing || !strictly_upper {
            return Err(Error::InvalidProfile(values));
        }
        Ok(Self(values))
    }

    pub fn d(&self) -> usize {
        self.0.len()
    }

    /// `Γ(i)`, 1-based.
    pub fn at(&self, i: usize) -> u32 {
        self.0[i - 1]
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    /// Whether row `i` may be nonzero in column `j` (both 1-based).
    pub fn allows(&self, i: usize, j: usize) -> bool {
        i as u32 <= self.at(j)
    }
}

/// `Γ(i) = e_1 + ... + e_k` for `e_1 + ... + e_k < i <= e_1 + ... + e_{k+1}`.
pub fn gamma_from_shape(e: &Shape) -> GammaProfile {
    let mut values = Vec::with_capacity(e.d() as usize);
    let mut before = 0;
    for &part in e.parts() {
        values.extend(std::iter::repeat_n(before, part as usize));
        before += part;
    }
    GammaProfile(values)
}
