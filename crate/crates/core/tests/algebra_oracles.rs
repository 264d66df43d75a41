use bnloci::exactalg::{det_poly, ExactMatrix, Field, PrimeField, Rationals, TruncatedPoly};
use bnloci::hstype::validate_type;
use bnloci::localring::IdealBasis;
use itertools::Itertools;
use proptest::prelude::*;

fn f7() -> PrimeField {
    PrimeField::new(7).unwrap()
}

/// Sign of a permutation by counting inversions.
fn sign(perm: &[usize]) -> i64 {
    let inversions = (0..perm.len())
        .flat_map(|i| (i + 1..perm.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| perm[i] > perm[j])
        .count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn leibniz(m: &[Vec<TruncatedPoly<PrimeField>>]) -> TruncatedPoly<PrimeField> {
    let n = m.len();
    let f = *m[0][0].field();
    let cap = m[0][0].cap();
    let mut acc = TruncatedPoly::zero(f, cap);
    for perm in (0..n).permutations(n) {
        let mut term = TruncatedPoly::constant(f, cap, f.from_i64(sign(&perm)));
        for (row, &col) in perm.iter().enumerate() {
            term = term.mul(&m[row][col]).unwrap();
        }
        acc = acc.add(&term).unwrap();
    }
    acc
}

/// Sparse polynomial entries: each term is kept with probability about 1/3.
fn sparse_poly(cap: u32) -> impl Strategy<Value = TruncatedPoly<PrimeField>> {
    prop::collection::vec((0u32..3, 0u32..3, 0i64..7, 0u8..3), 0..4).prop_map(move |terms| {
        TruncatedPoly::from_terms(
            f7(),
            cap,
            terms
                .into_iter()
                .filter(|t| t.3 == 0)
                .map(|(a, b, c, _)| ((a, b), f7().from_i64(c))),
        )
    })
}

fn square(n: usize, cap: u32) -> impl Strategy<Value = Vec<Vec<TruncatedPoly<PrimeField>>>> {
    prop::collection::vec(prop::collection::vec(sparse_poly(cap), n), n)
}

proptest! {
    #[test]
    fn det_matches_leibniz(m in (1usize..=4).prop_flat_map(|n| square(n, 6))) {
        prop_assert!(det_poly(&m).unwrap() == leibniz(&m));
    }

    #[test]
    fn rational_rank_bounds_modular_rank(
        rows in prop::collection::vec(prop::collection::vec(-3i64..4, 4), 1..5)
    ) {
        // rank over Q is at least the rank over F_7 of the reduction
        let q = ExactMatrix::from_i64_rows(Rationals, &rows).unwrap();
        let p = ExactMatrix::from_i64_rows(f7(), &rows).unwrap();
        prop_assert!(q.rank() >= p.rank());
        prop_assert_eq!(q.rank(), q.transpose().rank());
    }
}

/// Minimal generator count by dropping generators one at a time while the
/// ideal stays the same.
fn greedy_mu(ideal: &IdealBasis<PrimeField>) -> usize {
    let mut kept: Vec<_> = ideal.gens().iter().filter(|g| !g.is_zero()).cloned().collect();
    let mut i = 0;
    while i < kept.len() {
        let mut without = kept.clone();
        without.remove(i);
        if !without.is_empty() && ideal.same_span(&without) {
            kept = without;
        } else {
            i += 1;
        }
    }
    kept.len()
}

fn random_ideal() -> impl Strategy<Value = IdealBasis<PrimeField>> {
    (
        1u32..=4,
        1u32..=4,
        prop::collection::vec(prop::collection::vec((0u32..3, 0u32..3, 1i64..7), 1..4), 0..4),
    )
        .prop_map(|(a, b, polys)| {
            let cap = a * b + 3;
            let mut gens = vec![
                TruncatedPoly::monomial(f7(), cap, (a, 0)),
                TruncatedPoly::monomial(f7(), cap, (0, b)),
            ];
            for terms in polys {
                let g = TruncatedPoly::from_terms(
                    f7(),
                    cap,
                    // keep generators inside the maximal ideal
                    terms
                        .into_iter()
                        .map(|(i, j, c)| ((i.max(1 - j.min(1)), j), f7().from_i64(c))),
                );
                gens.push(g);
            }
            IdealBasis::new(gens).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn ideal_invariants(ideal in random_ideal()) {
        let n = ideal.colength().unwrap();
        let t = ideal.hs_type().unwrap();
        prop_assert_eq!(t.n(), n);
        prop_assert!(validate_type(t.as_slice()).is_ok());
        // m^n ⊂ I
        prop_assert!(ideal.contains_degree(n));
        if ideal.cap() >= n + 2 {
            prop_assert_eq!(ideal.min_generators().unwrap(), greedy_mu(&ideal));
        }
    }
}

#[test]
fn greedy_oracle_examples() {
    let f = f7();
    // (x^2, xy, y^2) plus the redundant x^3 and x^2 + xy
    let cap = 6;
    let gens = vec![
        TruncatedPoly::monomial(f, cap, (2, 0)),
        TruncatedPoly::monomial(f, cap, (1, 1)),
        TruncatedPoly::monomial(f, cap, (0, 2)),
        TruncatedPoly::monomial(f, cap, (3, 0)),
        TruncatedPoly::from_terms(f, cap, [((2, 0), 1), ((1, 1), 1)]),
    ];
    let ideal = IdealBasis::new(gens).unwrap();
    assert_eq!(greedy_mu(&ideal), 3);
    assert_eq!(ideal.min_generators().unwrap(), 3);
}
