//! Exact checks of Grothendieck-ring identities between q-characters.
//!
//! Each side of an identity is a sum of classes; each class is a torus
//! prefactor times a product of simple modules whose truncated q-characters
//! are taken from the closed forms of [`crate::qchar`]. The summands of both
//! sides are aligned to the highest ℓ-weight `Ψ_0` of the left-hand side
//! (every summand's top is `Ψ_0` times an `A^{-1}`-monomial), truncated at
//! absolute depth `D` below `Ψ_0`, multiplied out to ℓ-weights and compared
//! exactly.
//!
//! ```
//! use shqa::cartan::CartanData;
//! use shqa::identities::{check_identity, IdentityName};
//!
//! let a2 = CartanData::from_name("A2").unwrap();
//! let report = check_identity(IdentityName::QqTilde, &a2, 1, 0, 6, None).unwrap();
//! assert!(report.pass);
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cartan::{CartanData, Node};
use crate::error::{Error, Result};
use crate::lweight::{build_named_weight, AMonomial, LWeight, NamedWeight, Spec};
use crate::qchar::{
    a_monomial_between, qc_inflation, qc_kr_sl2, qc_neg_prefund_rank1, qc_product_all, TruncatedQChar,
};

/// The identities that can be checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityName {
    /// `[L(Ψ_{j,a})][L(Ψ_{j,a}^{-1})] = 1 + [−2ω_j][L(Ψ_{j,aq_j^2})][L(Ψ_{j,aq_j^{-2}}^{-1})]` over `{j}`.
    Wronskian,
    /// `[L(Ψ_{j,a})][L(Ψ̃_{j,a})] = [L(Ψ_p)] + [−α_j][L(Ψ_{j,aq_j^2})][L(Ψ̃_{j,aq_j^{-2}})]`.
    QqTilde,
    /// `[L(Ψ_{j,a})][L(Ψ*_{j,a})] = [ω_j][L(Ψ_{p_1})] + [ω_j − α_j][L(Ψ_{p_2})]`.
    QqStar,
    /// `[L(Ψ_{j,a})][L(Y_{j,aq_j^{-1}})] = [ω_j][L(Ψ_{j,aq_j^{-2}})] + [−ω_j][L(Ψ_{j,aq_j^2})]` over `{j}`.
    BaxterQt,
    /// `[T_{k,a}][T_{k,aq_j^{-2}}] = [T_{k+1,a}][T_{k−1,aq_j^{-2}}] + 1` over `{j}`.
    TSystem,
    /// `[V_{k,a}][V_{k,aq_j^{-2}}] = [V_{k+1,a}][V_{k−1,aq_j^{-2}}] + [k(2ω_j − α_j)][L(Ψ_p(a))][L(Ψ_p(aq_j^{−2(k+1)}))]`.
    InflatedTSystem,
}

impl IdentityName {
    pub const ALL: [IdentityName; 6] = [
        IdentityName::Wronskian,
        IdentityName::QqTilde,
        IdentityName::QqStar,
        IdentityName::BaxterQt,
        IdentityName::TSystem,
        IdentityName::InflatedTSystem,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityName::Wronskian => "wronskian",
            IdentityName::QqTilde => "qq_tilde",
            IdentityName::QqStar => "qq_star",
            IdentityName::BaxterQt => "baxter_qt",
            IdentityName::TSystem => "t_system",
            IdentityName::InflatedTSystem => "inflated_t_system",
        }
    }

    /// Accepts `snake_case` or `kebab-case` names.
    pub fn from_name(s: &str) -> Result<Self> {
        let norm = s.replace('-', "_").to_ascii_lowercase();
        Self::ALL
            .into_iter()
            .find(|n| n.name() == norm)
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }

    /// Whether the identity takes a KR length parameter.
    pub fn uses_length(self) -> bool {
        matches!(self, IdentityName::TSystem | IdentityName::InflatedTSystem)
    }

    /// Whether the identity lives over the rank-one subdiagram `{j}`.
    pub fn is_rank_one(self) -> bool {
        matches!(
            self,
            IdentityName::Wronskian | IdentityName::BaxterQt | IdentityName::TSystem
        )
    }
}

impl fmt::Display for IdentityName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters an identity was checked with.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityParams {
    #[serde(rename = "type")]
    pub dynkin: String,
    pub node: Node,
    pub spec: Spec,
    pub length: Option<u32>,
    pub depth: u32,
}

/// The first ℓ-weight whose multiplicities differ between the two sides.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    /// Position below the left-hand top.
    pub monomial: String,
    pub weight: LWeight,
    pub lhs: u64,
    pub rhs: u64,
}

/// Result of [`check_identity`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: IdentityName,
    pub params: IdentityParams,
    pub pass: bool,
    /// Number of distinct ℓ-weights compared on each side.
    pub lhs_weights: usize,
    pub rhs_weights: usize,
    pub mismatch: Option<Mismatch>,
}

/// One class in a sum: a torus prefactor times a product of simple modules.
#[derive(Clone, Debug)]
pub struct Summand {
    pub prefactor: LWeight,
    pub factors: Vec<TruncatedQChar>,
}

impl Summand {
    pub fn new(prefactor: LWeight, factors: Vec<TruncatedQChar>) -> Self {
        Self { prefactor, factors }
    }

    /// The character of the class.
    pub fn character(&self) -> Result<TruncatedQChar> {
        let prod = qc_product_all(&self.factors)?;
        let top = self.prefactor.mul(prod.top());
        prod.with_top(top)
    }
}

/// The multiplicities of a character at positions `S·M` below `reference`
/// (with `top = reference · S`), keeping absolute degrees `≤ depth`.
pub fn aligned_terms(
    cd: &CartanData,
    reference: &LWeight,
    c: &TruncatedQChar,
    depth: u32,
) -> Result<BTreeMap<AMonomial, u64>> {
    let shift = a_monomial_between(cd, reference, c.top(), c.support())?;
    let s = shift.degree();
    if s <= depth && c.depth() < depth - s {
        return Err(Error::Precondition(format!(
            "character of depth {} cannot fill absolute depth {depth} at offset {s}",
            c.depth()
        )));
    }
    Ok(c
        .terms()
        .iter()
        .filter(|(m, _)| m.degree() + s <= depth)
        .map(|(m, &mult)| (m.mul(&shift), mult))
        .collect())
}

fn side_terms(
    cd: &CartanData,
    reference: &LWeight,
    side: &[Summand],
    depth: u32,
) -> Result<(BTreeMap<AMonomial, u64>, Option<BTreeSet<Node>>)> {
    let mut out = BTreeMap::new();
    let mut support = None;
    for s in side {
        let c = s.character()?;
        support = c.support().cloned();
        for (m, mult) in aligned_terms(cd, reference, &c, depth)? {
            *out.entry(m).or_insert(0) += mult;
        }
    }
    Ok((out, support))
}

fn materialize_map(
    cd: &CartanData,
    reference: &LWeight,
    terms: &BTreeMap<AMonomial, u64>,
    support: Option<&BTreeSet<Node>>,
) -> BTreeMap<LWeight, (AMonomial, u64)> {
    let mut out: BTreeMap<LWeight, (AMonomial, u64)> = BTreeMap::new();
    for (m, &mult) in terms {
        let a = match support {
            None => m.to_lweight(cd),
            Some(j) => m.to_lweight_in(cd, j),
        };
        let e = out.entry(reference.mul(&a)).or_insert((m.clone(), 0));
        e.1 += mult;
    }
    out
}

/// Compares two sides at absolute depth `depth` below the first left-hand
/// summand's top. Returns `(lhs size, rhs size, first mismatch)`.
pub fn compare_sides(
    cd: &CartanData,
    lhs: &[Summand],
    rhs: &[Summand],
    depth: u32,
) -> Result<(usize, usize, Option<Mismatch>)> {
    let first = lhs
        .first()
        .ok_or_else(|| Error::Argument("empty left-hand side".into()))?;
    let reference = first.character()?.top().clone();
    let (lt, ls) = side_terms(cd, &reference, lhs, depth)?;
    let (rt, rs) = side_terms(cd, &reference, rhs, depth)?;
    let lm = materialize_map(cd, &reference, &lt, ls.as_ref());
    let rm = materialize_map(cd, &reference, &rt, rs.as_ref());
    let keys: BTreeSet<&LWeight> = lm.keys().chain(rm.keys()).collect();
    let mut mismatch = None;
    // Report the mismatch closest to the top (smallest degree first).
    let mut best: Option<(u32, Mismatch)> = None;
    for w in keys {
        let (l, r) = (lm.get(w), rm.get(w));
        let (lv, rv) = (l.map_or(0, |x| x.1), r.map_or(0, |x| x.1));
        if lv != rv {
            let m = l.or(r).map(|x| x.0.clone()).expect("key from one side");
            let deg = m.degree();
            if best.as_ref().map_or(true, |(d, _)| deg < *d) {
                best = Some((
                    deg,
                    Mismatch {
                        monomial: m.to_string(),
                        weight: w.clone(),
                        lhs: lv,
                        rhs: rv,
                    },
                ));
            }
        }
    }
    if let Some((_, m)) = best {
        mismatch = Some(m);
    }
    Ok((lm.len(), rm.len(), mismatch))
}

fn single(top: LWeight, depth: u32, support: Option<&BTreeSet<Node>>) -> Result<TruncatedQChar> {
    TruncatedQChar::single(top, depth, support.cloned())
}

/// The two sides of an identity, as sums of classes.
pub fn identity_sides(
    name: IdentityName,
    cd: &CartanData,
    j: Node,
    k: Spec,
    depth: u32,
    length: Option<u32>,
) -> Result<(Vec<Summand>, Vec<Summand>)> {
    cd.check_node(j)?;
    let dj = cd.d(j);
    let jset: BTreeSet<Node> = std::iter::once(j).collect();
    let js = Some(&jset);
    let len = length.unwrap_or(1);
    if name.uses_length() && len == 0 {
        return Err(Error::Argument("KR length must be at least 1".into()));
    }
    if !name.is_rank_one() && cd.rank() < 2 {
        return Err(Error::Argument(format!("{name} needs a diagram of rank at least 2")));
    }
    let psi = |kk: Spec| LWeight::psi_gen(j, kk, 1);
    let named = |w: NamedWeight, kk: Spec| build_named_weight(cd, w, j, kk);
    let id = LWeight::identity;
    Ok(match name {
        IdentityName::Wronskian => (
            vec![Summand::new(
                id(),
                vec![single(psi(k), depth, js)?, qc_neg_prefund_rank1(cd, j, k, depth)?],
            )],
            vec![
                Summand::new(id(), vec![TruncatedQChar::one(depth, Some(jset.clone()))]),
                Summand::new(
                    LWeight::omega(cd, j, -2),
                    vec![
                        single(psi(k + 2 * dj), depth, js)?,
                        qc_neg_prefund_rank1(cd, j, k - 2 * dj, depth)?,
                    ],
                ),
            ],
        ),
        IdentityName::QqTilde => {
            let tilde = |kk: Spec| -> Result<TruncatedQChar> {
                qc_inflation(&qc_neg_prefund_rank1(cd, j, kk, depth)?, &named(NamedWeight::PsiTilde, kk)?)
            };
            (
                vec![Summand::new(id(), vec![single(psi(k), depth, None)?, tilde(k)?])],
                vec![
                    Summand::new(id(), vec![single(named(NamedWeight::QqPsiP, k)?, depth, None)?]),
                    Summand::new(
                        LWeight::alpha(cd, j, -1),
                        vec![single(psi(k + 2 * dj), depth, None)?, tilde(k - 2 * dj)?],
                    ),
                ],
            )
        }
        IdentityName::QqStar => {
            let star = qc_inflation(&qc_kr_sl2(cd, j, k, 1, depth)?, &named(NamedWeight::PsiStar, k)?)?;
            (
                vec![Summand::new(id(), vec![single(psi(k), depth, None)?, star])],
                vec![
                    Summand::new(
                        LWeight::omega(cd, j, 1),
                        vec![single(named(NamedWeight::QqstarPsiP1, k)?, depth, None)?],
                    ),
                    Summand::new(
                        LWeight::omega(cd, j, 1).mul(&LWeight::alpha(cd, j, -1)),
                        vec![single(named(NamedWeight::QqstarPsiP2, k)?, depth, None)?],
                    ),
                ],
            )
        }
        IdentityName::BaxterQt => (
            vec![Summand::new(
                id(),
                vec![single(psi(k), depth, js)?, qc_kr_sl2(cd, j, k, 1, depth)?],
            )],
            vec![
                Summand::new(LWeight::omega(cd, j, 1), vec![single(psi(k - 2 * dj), depth, js)?]),
                Summand::new(LWeight::omega(cd, j, -1), vec![single(psi(k + 2 * dj), depth, js)?]),
            ],
        ),
        IdentityName::TSystem => {
            let t = |l: u32, kk: Spec| qc_kr_sl2(cd, j, kk, l, depth);
            let b = k - 2 * dj;
            (
                vec![Summand::new(id(), vec![t(len, k)?, t(len, b)?])],
                vec![
                    Summand::new(id(), vec![t(len + 1, k)?, t(len - 1, b)?]),
                    Summand::new(id(), vec![TruncatedQChar::one(depth, Some(jset.clone()))]),
                ],
            )
        }
        IdentityName::InflatedTSystem => {
            let psi_p = |kk: Spec| named(NamedWeight::NewTPsiP, kk);
            // V_{l,b} = inflation of T_{l,b} with top m_{l,b q_j^{1−2l}} Ψ_p(b); V_{0,b} = L(Ψ_p(b)).
            let v = |l: u32, kk: Spec| -> Result<TruncatedQChar> {
                if l == 0 {
                    return single(psi_p(kk)?, depth, None);
                }
                let t = qc_kr_sl2(cd, j, kk, l, depth)?;
                let top = t.top().mul(&psi_p(kk)?);
                qc_inflation(&t, &top)
            };
            let b = k - 2 * dj;
            let kk = len as i64;
            let pref = LWeight::omega(cd, j, 2 * kk).mul(&LWeight::alpha(cd, j, -kk));
            (
                vec![Summand::new(id(), vec![v(len, k)?, v(len, b)?])],
                vec![
                    Summand::new(id(), vec![v(len + 1, k)?, v(len - 1, b)?]),
                    Summand::new(
                        pref,
                        vec![
                            single(psi_p(k)?, depth, None)?,
                            single(psi_p(k - 2 * dj * (kk + 1))?, depth, None)?,
                        ],
                    ),
                ],
            )
        }
    })
}

/// Checks an identity exactly at the given depth.
pub fn check_identity(
    name: IdentityName,
    cd: &CartanData,
    j: Node,
    k: Spec,
    depth: u32,
    length: Option<u32>,
) -> Result<IdentityReport> {
    let (lhs, rhs) = identity_sides(name, cd, j, k, depth, length)?;
    let (lhs_weights, rhs_weights, mismatch) = compare_sides(cd, &lhs, &rhs, depth)?;
    Ok(IdentityReport {
        identity: name,
        params: IdentityParams {
            dynkin: cd.name(),
            node: j,
            spec: k,
            length: if name.uses_length() { Some(length.unwrap_or(1)) } else { None },
            depth,
        },
        pass: mismatch.is_none(),
        lhs_weights,
        rhs_weights,
        mismatch,
    })
}

/// The character of the radical of a product whose simple head has the
/// character `top_simple`: the termwise difference, relative to the common
/// highest ℓ-weight.
pub fn decompose_rad_top(product: &TruncatedQChar, top_simple: &TruncatedQChar) -> Result<TruncatedQChar> {
    if product.top() != top_simple.top() {
        return Err(Error::Precondition(format!(
            "highest ℓ-weights differ: {} vs {}",
            product.top(),
            top_simple.top()
        )));
    }
    if product.support() != top_simple.support() {
        return Err(Error::Support("characters have different supports".into()));
    }
    let depth = product.depth().min(top_simple.depth());
    let mut terms = BTreeMap::new();
    let keys: BTreeSet<&AMonomial> = product.terms().keys().chain(top_simple.terms().keys()).collect();
    for m in keys {
        if m.degree() > depth {
            continue;
        }
        let (a, b) = (product.mult(m), top_simple.mult(m));
        if b > a {
            return Err(Error::NegativeMultiplicity(format!(
                "{m}: product has {a}, top simple has {b}"
            )));
        }
        if a > b {
            terms.insert(m.clone(), a - b);
        }
    }
    TruncatedQChar::new(product.top().clone(), depth, terms, product.support().cloned())
}

/// Whether two characters (possibly with different tops) agree on all
/// ℓ-weights within absolute depth `depth` below `reference`.
pub fn same_character_below(
    cd: &CartanData,
    reference: &LWeight,
    a: &TruncatedQChar,
    b: &TruncatedQChar,
    depth: u32,
) -> Result<bool> {
    let ta = aligned_terms(cd, reference, a, depth)?;
    let tb = aligned_terms(cd, reference, b, depth)?;
    Ok(ta == tb)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cd(name: &str) -> CartanData {
        CartanData::from_name(name).unwrap()
    }

    #[test]
    fn rank_one_identities() {
        let a1 = cd("A1");
        for name in [IdentityName::Wronskian, IdentityName::BaxterQt] {
            let r = check_identity(name, &a1, 1, 0, 6, None).unwrap();
            assert!(r.pass, "{r:?}");
        }
        for l in 1..=4 {
            let r = check_identity(IdentityName::TSystem, &a1, 1, 3, 6, Some(l)).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn inflated_identities_a2() {
        let a2 = cd("A2");
        for j in 1..=2 {
            for name in [IdentityName::QqTilde, IdentityName::QqStar] {
                let r = check_identity(name, &a2, j, 0, 6, None).unwrap();
                assert!(r.pass, "{r:?}");
            }
            let r = check_identity(IdentityName::InflatedTSystem, &a2, j, 3, 6, Some(1)).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn wrong_identity_fails() {
        // Dropping the second class of the Wronskian relation must fail.
        let a1 = cd("A1");
        let (lhs, mut rhs) = identity_sides(IdentityName::Wronskian, &a1, 1, 0, 4, None).unwrap();
        rhs.pop();
        let (_, _, mismatch) = compare_sides(&a1, &lhs, &rhs, 4).unwrap();
        let m = mismatch.unwrap();
        assert_eq!((m.lhs, m.rhs), (1, 0));
        assert_eq!(m.monomial, "A[1,0]^-1");
    }

    #[test]
    fn names() {
        assert_eq!(IdentityName::from_name("qq-tilde").unwrap(), IdentityName::QqTilde);
        assert!(IdentityName::from_name("nope").is_err());
        assert!(check_identity(IdentityName::QqTilde, &cd("A1"), 1, 0, 3, None).is_err());
    }

    #[test]
    fn rad_top_negative_control() {
        let a1 = cd("A1");
        let c = qc_neg_prefund_rank1(&a1, 1, 0, 3).unwrap();
        let zero = decompose_rad_top(&c, &c).unwrap();
        assert!(zero.is_empty());
        let other = qc_kr_sl2(&a1, 1, 0, 2, 3).unwrap();
        assert!(decompose_rad_top(&c, &other).is_err());
    }
}
