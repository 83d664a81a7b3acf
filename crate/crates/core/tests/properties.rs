//! Invariants of the kernel beyond the acceptance gate, plus the gate's
//! kernel properties under the `proptest!` harness.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, RngSeed};

use shqa::cartan::CartanData;
use shqa::identities::{check_identity, IdentityName};
use shqa::lweight::{AMonomial, LWeight};
use shqa::qchar::{qc_kr_sl2, qc_neg_prefund_rank1, TruncatedQChar};
use shqa::qfield::{q_binomial, Direction, RatQ, ZRational};
use shqa::suite::diagrams_up_to;

use common::*;

fn config(seed: u64) -> Config {
    Config {
        cases: CASES,
        rng_algorithm: RngAlgorithm::ChaCha,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..Config::default()
    }
}

proptest! {
    #![proptest_config(config(11))]

    #[test]
    fn ratq_field(a in ratq(), b in ratq(), c in ratq()) {
        field_axioms(&a, &b, &c)?;
    }

    #[test]
    fn normalizing_is_idempotent(a in ratq()) {
        let again = RatQ::new(a.numer().clone(), a.denom().clone()).unwrap();
        prop_assert_eq!(again, a);
    }

    #[test]
    fn series_log_exp(s in unit_series()) {
        series_roundtrip(&s)?;
    }

    #[test]
    fn lweight_group(a in lweight(), b in lweight(), c in lweight()) {
        group_laws(&a, &b, &c)?;
    }

    #[test]
    fn qchar_product(a in qchar(), b in qchar(), c in qchar()) {
        product_laws(&a, &b, &c)?;
    }

    #[test]
    fn dominance_order(chain in weight_chain()) {
        let (cd, l, c1, c2, o) = chain;
        partial_order(&cd, &l, &c1, &c2, &o)?;
    }
}

proptest! {
    #![proptest_config(Config { cases: 200, ..config(12) })]

    #[test]
    fn expansion_is_multiplicative(
        a in -3i64..=3, b in -3i64..=3, c in -3i64..=3,
        inverse in prop::bool::ANY,
    ) {
        let f = ZRational::one_minus(RatQ::q_pow(a)).mul(&ZRational::one_minus(RatQ::q_pow(b)).inv().unwrap());
        let g = ZRational::one_minus(RatQ::q_pow(c)).inv().unwrap();
        let dir = if inverse { Direction::InZInverse } else { Direction::InZ };
        let fg = f.mul(&g).series_expand(dir, 5).unwrap();
        let prod = f.series_expand(dir, 5).unwrap().mul(&g.series_expand(dir, 5).unwrap()).unwrap();
        prop_assert_eq!(fg, prod);
    }

    #[test]
    fn varpi_and_restriction_are_homomorphisms(a in lweight(), b in lweight(), mask in 1u8..8) {
        let cd = CartanData::from_name("A3").unwrap();
        let j: BTreeSet<usize> = (1..=3).filter(|i| mask & (1 << (i - 1)) != 0).collect();
        prop_assert_eq!(a.mul(&b).varpi(&cd), a.varpi(&cd).mul(&b.varpi(&cd)));
        prop_assert_eq!(a.mul(&b).res_j(&j), a.res_j(&j).mul(&b.res_j(&j)));
        let inside = a.res_j(&j);
        prop_assert_eq!(inside.res_j(&j), inside);
    }

    #[test]
    fn a_monomials_are_free(
        x in prop::collection::vec((1usize..=3, -3i64..=3, 1u32..=2), 0..=3),
        y in prop::collection::vec((1usize..=3, -3i64..=3, 1u32..=2), 0..=3),
    ) {
        let cd = CartanData::from_name("A3").unwrap();
        let (mx, my) = (AMonomial::from_entries(x), AMonomial::from_entries(y));
        prop_assert_eq!(mx == my, mx.to_lweight(&cd) == my.to_lweight(&cd));
    }

    #[test]
    fn json_round_trips(w in lweight(), c in qchar()) {
        let w2: LWeight = serde_json::from_str(&serde_json::to_string(&w).unwrap()).unwrap();
        prop_assert_eq!(w2, w);
        let c2: TruncatedQChar = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        prop_assert_eq!(c2, c);
    }
}

#[test]
fn q_binomials_are_symmetric_laurent_polynomials() {
    let q = RatQ::q_pow(1);
    for m in 0..=7 {
        for p in 0..=m {
            let b = q_binomial(m, p, &q).unwrap();
            assert!(b.is_laurent(), "[{m} {p}] = {b}");
            assert_eq!(b, q_binomial(m, m - p, &q).unwrap());
        }
    }
    assert!(q_binomial(2, 3, &q).is_err());
}

#[test]
fn simple_roots_have_zero_degree_and_dc_columns() {
    for (t, r) in diagrams_up_to(5) {
        let cd = shqa::cartan::dynkin_data(t, r).unwrap();
        for i in cd.nodes() {
            let a = LWeight::a(&cd, i, 2);
            assert!(a.degree(&cd).is_zero(), "{} node {i}", cd.name());
            let col: Vec<i64> = cd.nodes().map(|k| cd.dc(k, i)).collect();
            assert_eq!(a.varpi(&cd).0, col, "{} node {i}", cd.name());
        }
    }
}

#[test]
fn prefundamental_is_the_kr_limit() {
    let a1 = CartanData::from_name("A1").unwrap();
    for depth in 0..=6 {
        let limit = qc_neg_prefund_rank1(&a1, 1, 0, depth).unwrap();
        let kr = qc_kr_sl2(&a1, 1, 0, depth + 1, depth).unwrap();
        assert_eq!(limit.terms(), kr.terms(), "depth {depth}");
    }
}

#[test]
fn identities_are_depth_stable() {
    let a2 = CartanData::from_name("A2").unwrap();
    for name in [IdentityName::QqTilde, IdentityName::QqStar, IdentityName::InflatedTSystem] {
        for depth in 0..=5 {
            let r = check_identity(name, &a2, 1, 0, depth, Some(2)).unwrap();
            assert!(r.pass, "{name} at depth {depth}: {:?}", r.mismatch);
        }
    }
}

#[test]
fn closed_families_have_nonnegative_degrees() {
    // A-monomials store inverse powers as unsigned exponents; a term with a
    // positive power of A could not be represented at all.
    let a2 = CartanData::from_name("A2").unwrap();
    let families: Vec<TruncatedQChar> = vec![
        qc_kr_sl2(&a2, 1, 0, 3, 6).unwrap(),
        qc_neg_prefund_rank1(&a2, 2, 1, 6).unwrap(),
        shqa::qchar::qc_neg_prefund_sl3_pair(&a2, 1, 2, 0, 6).unwrap(),
    ];
    for c in families {
        assert_eq!(c.mult(&AMonomial::identity()), 1);
        let by_degree: BTreeMap<u32, u64> = c.terms().iter().fold(BTreeMap::new(), |mut acc, (m, &k)| {
            *acc.entry(m.degree()).or_insert(0) += k;
            acc
        });
        assert!(by_degree.keys().all(|&d| d <= 6));
    }
}
