//! Invariant sweeps over the whole library, collecting violations instead of
//! stopping at the first one.

use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bn::{
    bn_global, bn_local, bn_local_via_strata, bn_stratum, local_contributions, multiplicity_strata,
    nested_recursion_verify, on_veronese_curve, rho_local, veronese_check, Dim,
};
use crate::degloci::{census, dim_deg_gamma, dim_mat_e, growth_argmax, verify_realization, DEFAULT_BUDGET};
use crate::error::Error;
use crate::exactalg::{Field, FieldSpec, PrimeField, Rationals};
use crate::hstype::{
    dim_stratum_forms, enumerate_types, gamma_from_shape, join, partition_from_type, type_from_partition, HSType, Shape,
};
use crate::iarrobino::{
    beta_dims, constant_block_profile, ideal_from_beta, mu_predicted, sample_beta_with, sample_rng,
};
use crate::refs;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Hstype,
    Iarrobino,
    Degloci,
    Bn,
    Veronese,
    Recursion,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] = [
        Suite::Hstype,
        Suite::Iarrobino,
        Suite::Degloci,
        Suite::Bn,
        Suite::Veronese,
        Suite::Recursion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Hstype => "hstype",
            Suite::Iarrobino => "iarrobino",
            Suite::Degloci => "degloci",
            Suite::Bn => "bn",
            Suite::Veronese => "veronese",
            Suite::Recursion => "recursion",
            Suite::All => "all",
        }
    }

    /// Size parameter used when none is given.
    pub fn default_n_max(self) -> u32 {
        match self {
            Suite::Hstype => 16,
            Suite::Iarrobino => 8,
            Suite::Degloci => 5,
            Suite::Bn => 12,
            Suite::Veronese => 5,
            Suite::Recursion | Suite::All => 30,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub reference: String,
    pub detail: String,
}

impl From<Error> for Violation {
    fn from(e: Error) -> Self {
        match e {
            Error::Violation { reference, detail } => Violation {
                reference: reference.to_string(),
                detail,
            },
            other => Violation {
                reference: "error".into(),
                detail: other.to_string(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub suite: &'static str,
    pub n_max: u32,
    pub checks: u64,
    pub passed: bool,
    pub violations: Vec<Violation>,
    /// Mismatches in runs that are reported but not asserted, such as charts
    /// in characteristic below the colength.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub observations: Vec<Violation>,
    pub millis: u64,
}

/// Accumulates checks for one suite.
#[derive(Default)]
struct Tally {
    checks: u64,
    violations: Vec<Violation>,
    observations: Vec<Violation>,
    observe_only: bool,
}

impl Tally {
    fn check(&mut self, ok: bool, reference: &'static str, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.push(Violation {
                reference: reference.to_string(),
                detail: detail(),
            });
        }
    }

    fn push(&mut self, v: Violation) {
        if self.observe_only {
            self.observations.push(v);
        } else {
            self.violations.push(v);
        }
    }

    fn record<T>(&mut self, r: Result<T, Error>) -> Option<T> {
        self.checks += 1;
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.push(e.into());
                None
            }
        }
    }

    fn merge(&mut self, other: Tally) {
        self.checks += other.checks;
        self.violations.extend(other.violations);
        self.observations.extend(other.observations);
    }
}

/// Settings shared by all suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Ground field for the sampled suites; each has its own default.
    pub field: Option<FieldSpec>,
    /// Truncation order for chart ideals, `n + 2` when absent.
    pub cap: Option<u32>,
    pub budget: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            field: None,
            cap: None,
            budget: DEFAULT_BUDGET,
        }
    }
}

pub fn run(suite: Suite, n_max: Option<u32>, config: &SuiteConfig) -> Vec<SuiteResult> {
    match suite {
        Suite::All => Suite::EACH
            .par_iter()
            .map(|&s| run_one(s, n_max.map(|k| k.min(s.default_n_max())), config))
            .collect(),
        s => vec![run_one(s, n_max, config)],
    }
}

fn with_prime(p: u64, f: impl FnOnce(PrimeField) -> Tally) -> Tally {
    match PrimeField::new(p) {
        Ok(field) => f(field),
        Err(e) => {
            let mut t = Tally::default();
            t.record::<()>(Err(e));
            t
        }
    }
}

fn run_one(suite: Suite, n_max: Option<u32>, config: &SuiteConfig) -> SuiteResult {
    let n_max = n_max.unwrap_or(suite.default_n_max());
    let start = Instant::now();
    let SuiteConfig { seed, cap, budget, .. } = *config;
    let tally = match suite {
        Suite::Hstype => hstype_suite(n_max),
        Suite::Iarrobino => match config.field {
            Some(FieldSpec::Rational) => iarrobino_suite(n_max, 20, Rationals, seed, cap),
            Some(FieldSpec::Prime(p)) => with_prime(p, |f| iarrobino_suite(n_max, 20, f, seed, cap)),
            None => with_prime(23, |f| iarrobino_suite(n_max, 20, f, seed, cap)),
        },
        Suite::Degloci => degloci_suite(n_max, budget),
        Suite::Bn => bn_suite(n_max),
        Suite::Veronese => match config.field {
            Some(FieldSpec::Rational) => veronese_suite(n_max, Rationals, seed),
            Some(FieldSpec::Prime(p)) => with_prime(p, |f| veronese_suite(n_max, f, seed)),
            None => with_prime(101, |f| veronese_suite(n_max, f, seed)),
        },
        Suite::Recursion => recursion_suite(n_max),
        Suite::All => unreachable!("expanded by run"),
    };
    SuiteResult {
        suite: suite.name(),
        n_max,
        checks: tally.checks,
        passed: tally.violations.is_empty(),
        violations: tally.violations,
        observations: tally.observations,
        millis: start.elapsed().as_millis() as u64,
    }
}

fn hstype_suite(n_max: u32) -> Tally {
    let mut t = Tally::default();
    for n in 1..=n_max {
        for ty in enumerate_types(n) {
            let (a, b) = dim_stratum_forms(&ty);
            let (n_t, _) = beta_dims(&ty);
            t.check(a == b && a == n_t as i64, refs::STRATUM_DIMENSION, || {
                format!("T = ({ty}): forms {a}, {b}, chart {n_t}")
            });
            let jumps = ty.jumping_indices();
            t.check(jumps.sum() == ty.order(), refs::JUMPING_INDICES, || {
                format!("T = ({ty})")
            });
            let p = partition_from_type(&ty);
            t.check(
                type_from_partition(&p) == ty && p.n() == n && p.order() == ty.order(),
                refs::NORMAL_PATTERN,
                || format!("T = ({ty}), k = ({p})"),
            );
        }
    }
    t
}

/// Checks sampled points of every chart of colength `<= n_max` against the
/// local ring.
fn iarrobino_suite<F: Field>(n_max: u32, samples: u64, field: F, seed: u64, cap: Option<u32>) -> Tally {
    let types: Vec<HSType> = (1..=n_max).flat_map(enumerate_types).collect();
    let parts: Vec<Tally> = types
        .par_iter()
        .enumerate()
        .map(|(idx, ty)| {
            let n = ty.n();
            let p = field.characteristic();
            let mut t = Tally {
                observe_only: p != 0 && p < n as u64,
                ..Tally::default()
            };
            let pattern = ty.partition();
            let profile = constant_block_profile(&pattern);
            for s in 0..samples {
                let mut rng = sample_rng(seed, ((idx as u64) << 32) | s);
                let beta = sample_beta_with(&pattern, field.clone(), &mut rng);
                let Some(ideal) = t.record(ideal_from_beta(&beta, cap.unwrap_or(n + 2))) else {
                    continue;
                };
                let tag = || format!("T = ({ty}), sample {s}");
                t.check(beta.constant_block_fits(&profile), refs::BETA_CONSTRAINTS, tag);
                if let Some(c) = t.record(ideal.colength()) {
                    t.check(c == n, refs::MINORS_GENERATE, || format!("{}: colength {c}", tag()));
                }
                if let Some(h) = t.record(ideal.hs_type()) {
                    t.check(h == *ty, refs::MINORS_GENERATE, || format!("{}: type ({h})", tag()));
                }
                t.check(
                    ideal.meets_monomials_trivially(&pattern.monomials()),
                    refs::MINORS_GENERATE,
                    || format!("{}: chart condition", tag()),
                );
                if let Some(mu) = t.record(ideal.min_generators()) {
                    let predicted = mu_predicted(&beta);
                    t.check(mu == predicted, refs::GENERATOR_COUNT, || {
                        format!("{}: mu {mu}, predicted {predicted}", tag())
                    });
                }
            }
            t
        })
        .collect();
    let mut t = Tally::default();
    parts.into_iter().for_each(|p| t.merge(p));
    t
}

fn degloci_suite(d_max: u32, budget: u64) -> Tally {
    let mut t = Tally::default();
    for d in 1..=d_max {
        for e in Shape::compositions(d) {
            for q in [2, 3] {
                t.record(verify_realization(&e, q, budget));
            }
            for r in 0..=d as usize {
                t.record(dim_mat_e(&e, r));
            }
            if d <= 4 {
                growth_checks(&mut t, &e, budget);
            }
        }
    }
    for d in 2..=8u32 {
        for e1 in 1..d {
            let e = Shape::new(vec![e1, d - e1]).expect("positive parts");
            for r in 0..=d as usize {
                t.record(dim_mat_e(&e, r));
            }
        }
    }
    t
}

fn growth_checks(t: &mut Tally, e: &Shape, budget: u64) {
    let (Some(c2), Some(c3)) = (t.record(census(e, 2, budget)), t.record(census(e, 3, budget))) else {
        return;
    };
    let gamma = gamma_from_shape(e);
    for r in 0..=e.d() as usize {
        let Some(locus) = t.record(dim_deg_gamma(&gamma, r)) else {
            continue;
        };
        for a in growth_argmax(&c2, &c3, r) {
            t.check(locus.maximizers.contains(&a), refs::DEGENERACY_DIMENSION, || {
                format!("shape {e}, R = {r}: fastest growth at ({a})")
            });
        }
    }
}

fn bn_suite(n_max: u32) -> Tally {
    let mut t = Tally::default();
    for n in 0..=n_max {
        for r in 0..=n_max {
            let local = bn_local(r, n);
            if let Some(via) = t.record(bn_local_via_strata(r, n)) {
                t.check(local.same_result(&via), refs::LOCAL_VIA_STRATA, || {
                    format!("r = {r}, n = {n}: closed form {}, strata {}", local.dim, via.dim)
                });
            }
            t.check(local.nonempty == (rho_local(r, n) >= 0), refs::LOCAL_BN, || {
                format!("r = {r}, n = {n}: nonemptiness")
            });
            if r >= 1 && n >= 1 {
                order_split_checks(&mut t, r, n);
            }
            t.record(multiplicity_strata(r, n));
            t.record(bn_global(r, n));
        }
    }
    for d in 1..=6u32 {
        for l in 0..=d {
            let Some(ty) = t.record(HSType::grassmannian(d, l)) else {
                continue;
            };
            for r in 0..=d + 1 {
                let expected = (l.max(d - l) <= r && r <= d).then(|| (l + r * (d - r)) as i64);
                if let Some(rep) = t.record(bn_stratum(&ty, r)) {
                    t.check(rep.dim == Dim::from(expected), refs::GRASSMANN_STRATUM, || {
                        format!("d = {d}, l = {l}, r = {r}: {}", rep.dim)
                    });
                }
            }
        }
    }
    t
}

/// Types of order `r` attain `ρ^loc_{r,n}`; types of larger order stay
/// strictly below it.
fn order_split_checks(t: &mut Tally, r: u32, n: u32) {
    let rho = rho_local(r, n);
    let Some(contributions) = t.record(local_contributions(r, n)) else {
        return;
    };
    let at_order = contributions.iter().filter(|c| c.t.order() == r).map(|c| c.dim).max();
    if rho >= 0 {
        t.check(at_order == Some(rho), refs::LOCAL_BN, || {
            format!("r = {r}, n = {n}: order-r maximum {at_order:?}")
        });
    }
    for c in contributions.iter().filter(|c| c.t.order() > r) {
        t.check(c.dim < rho, refs::LOCAL_BN, || {
            format!("r = {r}, n = {n}: type ({}) reaches {}", c.t, c.dim)
        });
    }
    if rho == 0 {
        t.check(
            contributions.len() == 1 && contributions[0].t == HSType::power_of_maximal(r).expect("valid"),
            refs::LOCAL_POINT,
            || format!("r = {r}: {} contributing types", contributions.len()),
        );
    }
}

/// `μ(I) = r + 1` against the closed Veronese condition for `2 <= r <= r_max`
/// on all vectors `(t, ..., t^r)`, `t <= 10`, on 50 perturbations of such
/// vectors and on 50 uniformly random vectors.
fn veronese_suite<F: Field>(r_max: u32, field: F, seed: u64) -> Tally {
    let parts: Vec<Tally> = (2..=r_max)
        .into_par_iter()
        .map(|r| {
            let mut t = Tally::default();
            let mut rng = sample_rng(seed, r as u64);
            let curve = |s: &F::Elem| (1..=r as u64).map(|i| field.pow(s, i)).collect::<Vec<_>>();
            let mut vectors: Vec<Vec<F::Elem>> = (0..=10).map(|s| curve(&field.from_i64(s))).collect();
            for _ in 0..50 {
                let mut a = curve(&field.sample(&mut rng));
                let i = rng.random_range(0..r as usize);
                let delta = loop {
                    let v = field.sample(&mut rng);
                    if !field.is_zero(&v) {
                        break v;
                    }
                };
                a[i] = field.add(&a[i], &delta);
                vectors.push(a);
            }
            for _ in 0..50 {
                vectors.push((0..r).map(|_| field.sample(&mut rng)).collect());
            }
            for a in vectors {
                let checked = veronese_check(&field, &a).map_err(|e| Error::Violation {
                    reference: refs::VERONESE,
                    detail: e.to_string(),
                });
                if let Some(full) = t.record(checked) {
                    let closed = on_veronese_curve(&field, &a);
                    t.check(full == closed, refs::VERONESE, || {
                        format!("r = {r}, a = ({}): generators {full}, curve {closed}", join(&a))
                    });
                }
            }
            t
        })
        .collect();
    let mut t = Tally::default();
    parts.into_iter().for_each(|p| t.merge(p));
    t
}

fn recursion_suite(n_max: u32) -> Tally {
    let mut t = Tally::default();
    t.record(nested_recursion_verify(n_max));
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        for s in Suite::EACH {
            let k = match s {
                Suite::Recursion => 12,
                Suite::Degloci => 3,
                Suite::Veronese => 3,
                _ => 6,
            };
            let res = run(
                s,
                Some(k),
                &SuiteConfig {
                    seed: 7,
                    ..Default::default()
                },
            );
            assert!(res[0].passed, "{:?}", res[0].violations);
            assert!(res[0].checks > 0);
        }
    }

    #[test]
    fn violations_are_reported() {
        let mut t = Tally::default();
        t.check(false, refs::VERONESE, || "boom".into());
        t.record::<()>(Err(Error::NotPrime(4)));
        assert_eq!(t.checks, 2);
        assert_eq!(t.violations[0].reference, refs::VERONESE);
        assert_eq!(t.violations[1].reference, "error");
    }
}
