use std::collections::{BTreeMap, BTreeSet};

use bnloci::bn::{bn_global, multiplicity_strata, on_veronese_curve, rho_global, veronese_check, Dim};
use bnloci::degloci::{degeneracy_nonempty, dim_deg_gamma, is_realizable, rho_gamma, EchelonSeq};
use bnloci::exactalg::{ExactMatrix, Field, PrimeField, Rationals};
use bnloci::hstype::{
    dim_stratum, enumerate_types, partition_from_type, type_from_partition, validate_type, GammaProfile,
};
use bnloci::iarrobino::{constant_block_profile, ideal_from_beta, mu_predicted, sample_beta};
use proptest::prelude::*;

#[test]
fn types_up_to_twenty() {
    for n in 1..=20 {
        for t in enumerate_types(n) {
            assert_eq!(t.as_slice().iter().sum::<u32>(), n);
            assert_eq!(t.jumping_indices().sum(), t.order());
            assert_eq!(type_from_partition(&partition_from_type(&t)), t);
            let dim = dim_stratum(&t);
            assert!(dim < n);
            assert_eq!(dim == n - 1, t.is_curvilinear(), "T = ({t})");
        }
    }
}

/// Independent staircase check: strictly increasing by one up to the order,
/// then nonincreasing and positive.
fn is_staircase(t: &[u32]) -> bool {
    let d = t.iter().enumerate().take_while(|&(j, &x)| x == j as u32 + 1).count();
    !t.is_empty() && t[d..].iter().all(|&x| x > 0 && x <= d as u32) && t[d..].windows(2).all(|w| w[0] >= w[1])
}

proptest! {
    #[test]
    fn validate_accepts_exactly_staircases(t in prop::collection::vec(1u32..6, 1..8)) {
        prop_assert_eq!(validate_type(&t).is_ok(), is_staircase(&t));
    }
}

fn all_types_up_to(n: u32) -> Vec<bnloci::hstype::HSType> {
    (1..=n).flat_map(enumerate_types).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn chart_points_have_predicted_generators(idx in 0usize..all_types_up_to(7).len(), seed in any::<u64>()) {
        let t = &all_types_up_to(7)[idx];
        let f = PrimeField::new(23).unwrap();
        let beta = sample_beta(t, f, seed);
        let ideal = ideal_from_beta(&beta, t.n() + 2).unwrap();
        prop_assert_eq!(&ideal.hs_type().unwrap(), t);
        let mu = ideal.min_generators().unwrap();
        prop_assert_eq!(mu, mu_predicted(&beta));
        let jumps = t.jumping_indices();
        prop_assert!((jumps.r_min() as usize) < mu && mu <= t.order() as usize + 1);
        prop_assert!(beta.constant_block_fits(&constant_block_profile(&t.partition())));
    }
}

#[test]
fn chart_points_over_rationals() {
    for n in 1..=6 {
        for t in enumerate_types(n) {
            for seed in 0..3 {
                let beta = sample_beta(&t, Rationals, seed);
                let ideal = ideal_from_beta(&beta, n + 2).unwrap();
                assert_eq!(ideal.colength().unwrap(), n);
                assert_eq!(ideal.hs_type().unwrap(), t);
                assert_eq!(ideal.min_generators().unwrap(), mu_predicted(&beta));
            }
        }
    }
}

fn profile() -> impl Strategy<Value = GammaProfile> {
    (1usize..=4)
        .prop_flat_map(|d| prop::collection::vec(0u32..=4, d))
        .prop_map(|mut raw| {
            raw.sort_unstable();
            let mut v: Vec<u32> = raw.iter().enumerate().map(|(i, &g)| g.min(i as u32)).collect();
            for i in 1..v.len() {
                v[i] = v[i].max(v[i - 1]);
            }
            GammaProfile::new(v).unwrap()
        })
}

/// Every matrix of profile `Γ` over `F_2`, bucketed by pivot sequence.
fn brute_census(gamma: &GammaProfile) -> BTreeMap<Vec<usize>, u64> {
    let d = gamma.d();
    let f = PrimeField::new(2).unwrap();
    let free: Vec<(usize, usize)> = (1..=d)
        .flat_map(|i| (1..=d).map(move |j| (i, j)))
        .filter(|&(i, j)| gamma.allows(i, j))
        .collect();
    let mut out = BTreeMap::new();
    for mask in 0u64..1 << free.len() {
        let mut m = ExactMatrix::zeros(f, d, d);
        for (bit, &(i, j)) in free.iter().enumerate() {
            m.set(i - 1, j - 1, mask >> bit & 1);
        }
        *out.entry(m.rref_pivots().1).or_default() += 1;
    }
    out
}

proptest! {
    #[test]
    fn degeneracy_lemma_for_profiles(gamma in profile()) {
        let d = gamma.d();
        let census = brute_census(&gamma);
        let realized: BTreeSet<Vec<usize>> = census.keys().cloned().collect();
        let predicted: BTreeSet<Vec<usize>> = (0..=d)
            .flat_map(|r| EchelonSeq::all(d, r))
            .filter(|a| is_realizable(&gamma, a))
            .map(|a| a.as_slice().to_vec())
            .collect();
        prop_assert_eq!(&realized, &predicted);
        for r in 0..=d {
            let locus = dim_deg_gamma(&gamma, r).unwrap();
            prop_assert_eq!(locus.nonempty, realized.iter().any(|a| a.len() == r));
            prop_assert_eq!(locus.nonempty, degeneracy_nonempty(&gamma, r));
            if locus.nonempty {
                let dim = locus.dim.unwrap();
                prop_assert!(locus.maximizers.iter().all(|a| rho_gamma(&gamma, a) == dim));
            }
        }
    }

    #[test]
    fn global_numbers(r in 0u32..12, n in 0u32..60) {
        let strata = multiplicity_strata(r, n).unwrap();
        prop_assert!(strata.windows(2).all(|w| w[0].1 > w[1].1));
        let rep = bn_global(r, n).unwrap();
        let rho = rho_global(r, n);
        prop_assert_eq!(rep.nonempty, rho >= 2);
        prop_assert_eq!(rep.nonempty, 2 * n >= r * (r + 1));
        if rep.nonempty {
            prop_assert_eq!(rep.dim, Dim::Value(rho));
        }
    }

    #[test]
    fn veronese_agrees_with_curve(r in 2usize..=4, t in 0u64..101, perturb in prop::option::of((0usize..4, 1u64..101))) {
        let f = PrimeField::new(101).unwrap();
        let mut a: Vec<u64> = (1..=r as u64).map(|i| f.pow(&t, i)).collect();
        if let Some((i, delta)) = perturb {
            let i = i % r;
            a[i] = f.add(&a[i], &delta);
        }
        prop_assert_eq!(veronese_check(&f, &a).unwrap(), on_veronese_curve(&f, &a));
    }
}
