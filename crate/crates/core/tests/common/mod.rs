//! Strategies and fixed-seed runners for the kernel properties.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, RngSeed, TestCaseError, TestRunner};

use shqa::cartan::{CartanData, TorusWeight};
use shqa::lweight::{AMonomial, LWeight};
use shqa::qchar::{qc_product, TruncatedQChar};
use shqa::qfield::{Direction, LaurentQ, RatQ, ZSeries};

pub const CASES: u32 = 1000;

/// A runner with `CASES` cases, the ChaCha generator and a fixed seed.
pub fn runner(seed: u64) -> TestRunner {
    TestRunner::new(Config {
        cases: CASES,
        rng_algorithm: RngAlgorithm::ChaCha,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..Config::default()
    })
}

pub fn laurent() -> impl Strategy<Value = LaurentQ> {
    prop::collection::vec((-3i64..=3, -4i64..=4), 0..=3).prop_map(|terms| {
        LaurentQ::from_terms(
            terms
                .into_iter()
                .map(|(e, c)| (e, BigRational::from_integer(BigInt::from(c)))),
        )
    })
}

pub fn ratq() -> impl Strategy<Value = RatQ> {
    (laurent(), laurent()).prop_map(|(n, d)| {
        if d.is_zero() {
            RatQ::from_laurent(n)
        } else {
            RatQ::new(n, d).expect("nonzero denominator")
        }
    })
}

/// A series with leading coefficient 1, in either direction.
pub fn unit_series() -> impl Strategy<Value = ZSeries> {
    (
        prop::bool::ANY,
        -2i64..=2,
        prop::collection::vec(laurent().prop_map(RatQ::from_laurent), 0..=5),
    )
        .prop_map(|(inverse, lead, tail)| {
            let dir = if inverse { Direction::InZInverse } else { Direction::InZ };
            let mut coeffs = vec![RatQ::one()];
            coeffs.extend(tail);
            ZSeries::new(dir, lead, coeffs)
        })
}

pub fn diagram() -> impl Strategy<Value = CartanData> {
    prop::sample::select(vec!["A1", "A2", "A3", "B2", "C3", "G2", "D4"])
        .prop_map(|n| CartanData::from_name(n).unwrap())
}

/// A diagram, a weight `λ` and two nonnegative root combinations.
pub fn weight_chain() -> impl Strategy<Value = (CartanData, TorusWeight, Vec<i64>, Vec<i64>, TorusWeight)> {
    diagram().prop_flat_map(|cd| {
        let n = cd.rank();
        (
            Just(cd),
            prop::collection::vec(-6i64..=6, n).prop_map(TorusWeight),
            prop::collection::vec(0i64..=3, n),
            prop::collection::vec(0i64..=3, n),
            prop::collection::vec(-6i64..=6, n).prop_map(TorusWeight),
        )
    })
}

/// `λ · Π α_j^{-c_j}`.
pub fn lower(cd: &CartanData, lambda: &TorusWeight, c: &[i64]) -> TorusWeight {
    cd.nodes()
        .fold(lambda.clone(), |acc, j| acc.mul(&cd.alpha(j).pow(-c[j - 1])))
}

pub fn lweight() -> impl Strategy<Value = LWeight> {
    (
        prop::collection::vec((1usize..=3, -4i64..=4, -3i64..=3), 0..=4),
        prop::collection::vec((1usize..=3, -5i64..=5), 0..=2),
    )
        .prop_map(|(psi, torus)| {
            let w = psi
                .into_iter()
                .fold(LWeight::identity(), |acc, (i, k, e)| acc.mul(&LWeight::psi_gen(i, k, e)));
            torus
                .into_iter()
                .fold(w, |acc, (i, e)| acc.mul(&LWeight::torus_gen(i, e)))
        })
}

/// A small character over `A_3` with the identity term present.
pub fn qchar() -> impl Strategy<Value = TruncatedQChar> {
    (
        lweight(),
        2u32..=4,
        prop::collection::vec((prop::collection::vec((1usize..=3, -2i64..=2, 1u32..=2), 1..=2), 1u64..=3), 0..=4),
    )
        .prop_map(|(top, depth, raw)| {
            let mut terms = BTreeMap::new();
            terms.insert(AMonomial::identity(), 1u64);
            for (vars, mult) in raw {
                *terms.entry(AMonomial::from_entries(vars)).or_insert(0) += mult;
            }
            TruncatedQChar::new(top, depth, terms, None).unwrap()
        })
}

fn check(cond: bool, what: &str) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(what.to_string()))
    }
}

pub fn field_axioms(a: &RatQ, b: &RatQ, c: &RatQ) -> Result<(), TestCaseError> {
    check(a.add(b) == b.add(a), "addition commutes")?;
    check(a.mul(b) == b.mul(a), "multiplication commutes")?;
    check(a.add(&b.add(c)) == a.add(b).add(c), "addition associates")?;
    check(a.mul(&b.mul(c)) == a.mul(b).mul(c), "multiplication associates")?;
    check(a.mul(&b.add(c)) == a.mul(b).add(&a.mul(c)), "distributivity")?;
    check(a.add(&RatQ::zero()) == *a, "additive identity")?;
    check(a.mul(&RatQ::one()) == *a, "multiplicative identity")?;
    check(a.add(&a.neg()).is_zero(), "additive inverse")?;
    if a.is_zero() {
        check(RatQ::one().div(a).is_err(), "division by zero is an error")?;
    } else {
        check(a.mul(&a.inv().unwrap()).is_one(), "multiplicative inverse")?;
        check(b.div(a).unwrap().mul(a) == *b, "division")?;
    }
    let reparsed = RatQ::parse(&a.to_string()).map_err(|e| TestCaseError::fail(e.to_string()))?;
    check(reparsed == *a, "render and parse round trip")
}

pub fn series_roundtrip(s: &ZSeries) -> Result<(), TestCaseError> {
    let log = s.log().map_err(|e| TestCaseError::fail(e.to_string()))?;
    let back = log.exp().map_err(|e| TestCaseError::fail(e.to_string()))?;
    let normalized = ZSeries::new(s.direction(), 0, s.coeffs().to_vec());
    check(back == normalized, "exp(log s) = s / z^lead")?;
    let again = back.log().map_err(|e| TestCaseError::fail(e.to_string()))?;
    check(again == log, "log(exp t) = t")
}

pub fn partial_order(
    cd: &CartanData,
    lambda: &TorusWeight,
    c1: &[i64],
    c2: &[i64],
    other: &TorusWeight,
) -> Result<(), TestCaseError> {
    let mu = lower(cd, lambda, c1);
    let nu = lower(cd, &mu, c2);
    check(cd.weight_leq(lambda, lambda), "reflexive")?;
    check(cd.weight_leq(&mu, lambda), "lowering by roots stays below")?;
    check(cd.weight_leq(&nu, &mu) && cd.weight_leq(&nu, lambda), "transitive along the chain")?;
    if c1.iter().any(|&x| x > 0) {
        check(!cd.weight_leq(lambda, &mu), "antisymmetric on a strict step")?;
    }
    if cd.weight_leq(lambda, other) && cd.weight_leq(other, lambda) {
        check(lambda == other, "antisymmetric")?;
    }
    if cd.weight_leq(other, &mu) {
        check(cd.weight_leq(other, lambda), "transitive through a random weight")?;
    }
    Ok(())
}

pub fn group_laws(a: &LWeight, b: &LWeight, c: &LWeight) -> Result<(), TestCaseError> {
    check(a.mul(&b.mul(c)) == a.mul(b).mul(c), "associative")?;
    check(a.mul(b) == b.mul(a), "commutative")?;
    check(a.mul(&LWeight::identity()) == *a, "identity")?;
    check(a.mul(&a.inv()).is_identity(), "inverse")?;
    check(a.div(b).mul(b) == *a, "division")?;
    check(a.pow(3) == a.mul(a).mul(a), "powers")
}

pub fn product_laws(a: &TruncatedQChar, b: &TruncatedQChar, c: &TruncatedQChar) -> Result<(), TestCaseError> {
    let p = |x: &TruncatedQChar, y: &TruncatedQChar| qc_product(x, y).unwrap();
    check(p(a, b) == p(b, a), "commutative")?;
    check(p(&p(a, b), c) == p(a, &p(b, c)), "associative")?;
    let one = TruncatedQChar::one(a.depth(), None);
    check(p(a, &one) == *a, "unit")
}

/// Runs one property with a fixed seed; the error carries the minimal
/// failing input.
pub fn run<S, F>(seed: u64, strategy: S, test: F) -> Result<(), String>
where
    S: Strategy,
    S::Value: std::fmt::Debug,
    F: Fn(S::Value) -> Result<(), TestCaseError>,
{
    runner(seed).run(&strategy, test).map_err(|e| e.to_string())
}

/// The five kernel properties, each over `CASES` cases.
pub fn kernel_properties() -> Vec<(&'static str, Result<(), String>)> {
    vec![
        (
            "RatQ field axioms",
            run(0x5eed_0001, (ratq(), ratq(), ratq()), |(a, b, c)| field_axioms(&a, &b, &c)),
        ),
        (
            "series log/exp round trip",
            run(0x5eed_0002, unit_series(), |s| series_roundtrip(&s)),
        ),
        (
            "dominance partial order",
            run(0x5eed_0003, weight_chain(), |(cd, l, c1, c2, o)| partial_order(&cd, &l, &c1, &c2, &o)),
        ),
        (
            "LWeight group laws",
            run(0x5eed_0004, (lweight(), lweight(), lweight()), |(a, b, c)| group_laws(&a, &b, &c)),
        ),
        (
            "qc_product commutative and associative",
            run(0x5eed_0005, (qchar(), qchar(), qchar()), |(a, b, c)| product_laws(&a, &b, &c)),
        ),
    ]
}
