//! Depth-truncated q-characters.
//!
//! A q-character of a highest-ℓ-weight module is `[Ψ] · Σ_M mult(M) · M`
//! where `M` ranges over monomials in the inverse simple ℓ-roots
//! `A_{i,a}^{-1}`. A [`TruncatedQChar`] stores the highest ℓ-weight `Ψ`
//! together with the multiplicities of all monomials of total degree at most
//! the depth `D`.
//!
//! Characters of modules over a subdiagram `J` carry `support = Some(J)`:
//! their ℓ-weights are `J`-tuples, and a monomial `M` materializes as
//! `Ψ · res_J(M)`. The embedding `ι_J` reinterprets the same monomials over
//! the whole diagram.
//!
//! ```
//! use shqa::cartan::CartanData;
//! use shqa::qchar::{qc_neg_prefund_rank1, qc_kr_sl2};
//!
//! let a1 = CartanData::from_name("A1").unwrap();
//! let prefund = qc_neg_prefund_rank1(&a1, 1, 0, 4).unwrap();
//! assert_eq!(prefund.len(), 5); // 1 + A^{-1} + A^{-1}A^{-1} + …
//! // The KR characters converge to it (compare relative to their tops).
//! let kr = qc_kr_sl2(&a1, 1, 0, 5, 4).unwrap();
//! assert_eq!(kr.terms(), prefund.terms());
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cartan::{CartanData, Coweight, Node};
use crate::error::{Error, Result};
use crate::lweight::{kr_highest_weight, AMonomial, LWeight, Spec, VarEntry, YMonomial};

/// Term maps larger than this are multiplied in parallel.
const PARALLEL_PRODUCT_THRESHOLD: usize = 64;

/// A highest ℓ-weight with depth-truncated multiplicities of
/// `A^{-1}`-monomials relative to it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "QCharJson", try_from = "QCharJson")]
pub struct TruncatedQChar {
    top: LWeight,
    depth: u32,
    terms: BTreeMap<AMonomial, u64>,
    support: Option<BTreeSet<Node>>,
}

impl TruncatedQChar {
    /// Builds a character, dropping terms beyond the depth and zero
    /// multiplicities; errors if a term leaves the support.
    pub fn new(
        top: LWeight,
        depth: u32,
        terms: BTreeMap<AMonomial, u64>,
        support: Option<BTreeSet<Node>>,
    ) -> Result<Self> {
        if let Some(j) = &support {
            if let Some(m) = terms.keys().find(|m| !m.supported_on(j)) {
                return Err(Error::Support(format!("term {m} outside {j:?}")));
            }
            if !top.nodes().is_subset(j) {
                return Err(Error::Support(format!("top {top} outside {j:?}")));
            }
        }
        let terms = terms
            .into_iter()
            .filter(|(m, c)| *c > 0 && m.degree() <= depth)
            .collect();
        Ok(Self {
            top,
            depth,
            terms,
            support,
        })
    }

    /// The character `[Ψ]` of a one-dimensional module.
    pub fn single(top: LWeight, depth: u32, support: Option<BTreeSet<Node>>) -> Result<Self> {
        let mut terms = BTreeMap::new();
        terms.insert(AMonomial::identity(), 1);
        Self::new(top, depth, terms, support)
    }

    /// The unit `1` (trivial module).
    pub fn one(depth: u32, support: Option<BTreeSet<Node>>) -> Self {
        Self::single(LWeight::identity(), depth, support).expect("identity is supported everywhere")
    }

    pub fn top(&self) -> &LWeight {
        &self.top
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn terms(&self) -> &BTreeMap<AMonomial, u64> {
        &self.terms
    }

    pub fn support(&self) -> Option<&BTreeSet<Node>> {
        self.support.as_ref()
    }

    /// Number of stored terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Multiplicity of a monomial (0 if absent).
    pub fn mult(&self, m: &AMonomial) -> u64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    /// Total multiplicity.
    pub fn total(&self) -> u64 {
        self.terms.values().sum()
    }

    /// Replaces the highest ℓ-weight (e.g. to multiply by a torus factor).
    pub fn with_top(&self, top: LWeight) -> Result<Self> {
        Self::new(top, self.depth, self.terms.clone(), self.support.clone())
    }

    /// Lowers the depth (never raises it).
    pub fn truncate(&self, depth: u32) -> Self {
        let depth = depth.min(self.depth);
        Self {
            top: self.top.clone(),
            depth,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= depth)
                .map(|(m, c)| (m.clone(), *c))
                .collect(),
            support: self.support.clone(),
        }
    }

    /// The ℓ-weight `top · M` of a term (read inside the support).
    pub fn weight_of(&self, cd: &CartanData, m: &AMonomial) -> LWeight {
        let a = match &self.support {
            None => m.to_lweight(cd),
            Some(j) => m.to_lweight_in(cd, j),
        };
        self.top.mul(&a)
    }
}

impl fmt::Display for TruncatedQChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] * (", self.top)?;
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| if *c == 1 { m.to_string() } else { format!("{c}*{m}") })
            .collect();
        write!(f, "{}) + O(depth > {})", parts.join(" + "), self.depth)
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    #[serde(rename = "A")]
    a: Vec<VarEntry>,
    mult: u64,
}

#[derive(Serialize, Deserialize)]
struct QCharJson {
    top: LWeight,
    depth: u32,
    terms: Vec<TermJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    support: Option<BTreeSet<Node>>,
}

impl From<TruncatedQChar> for QCharJson {
    fn from(c: TruncatedQChar) -> Self {
        Self {
            terms: c
                .terms
                .iter()
                .map(|(m, &mult)| TermJson { a: m.entries(), mult })
                .collect(),
            top: c.top,
            depth: c.depth,
            support: c.support,
        }
    }
}

impl TryFrom<QCharJson> for TruncatedQChar {
    type Error = String;
    fn try_from(j: QCharJson) -> std::result::Result<Self, String> {
        let mut terms = BTreeMap::new();
        for t in j.terms {
            let m = AMonomial::from_var_entries(&t.a).map_err(|e| e.to_string())?;
            *terms.entry(m).or_insert(0) += t.mult;
        }
        TruncatedQChar::new(j.top, j.depth, terms, j.support).map_err(|e| e.to_string())
    }
}

fn convolve(
    a: &BTreeMap<AMonomial, u64>,
    b: &BTreeMap<AMonomial, u64>,
    depth: u32,
) -> BTreeMap<AMonomial, u64> {
    let row = |(ma, ca): (&AMonomial, &u64)| {
        let mut out = BTreeMap::new();
        let room = depth.saturating_sub(ma.degree());
        if ma.degree() > depth {
            return out;
        }
        for (mb, cb) in b {
            if mb.degree() <= room {
                *out.entry(ma.mul(mb)).or_insert(0u64) += ca * cb;
            }
        }
        out
    };
    let merge = |mut x: BTreeMap<AMonomial, u64>, y: BTreeMap<AMonomial, u64>| {
        for (m, c) in y {
            *x.entry(m).or_insert(0) += c;
        }
        x
    };
    if a.len() * b.len() >= PARALLEL_PRODUCT_THRESHOLD * PARALLEL_PRODUCT_THRESHOLD {
        let rows: Vec<(&AMonomial, &u64)> = a.iter().collect();
        rows.into_par_iter().map(row).reduce(BTreeMap::new, merge)
    } else {
        a.iter().map(row).fold(BTreeMap::new(), merge)
    }
}

/// Product of characters (the q-character shadow of the fusion product):
/// tops multiply, term maps convolve, depth is the smaller operand depth.
pub fn qc_product(a: &TruncatedQChar, b: &TruncatedQChar) -> Result<TruncatedQChar> {
    if a.support != b.support {
        return Err(Error::Support(format!(
            "product of characters with different supports {:?} and {:?}",
            a.support, b.support
        )));
    }
    let depth = a.depth.min(b.depth);
    Ok(TruncatedQChar {
        top: a.top.mul(&b.top),
        depth,
        terms: convolve(&a.terms, &b.terms, depth),
        support: a.support.clone(),
    })
}

/// Product of a nonempty list of characters.
pub fn qc_product_all(factors: &[TruncatedQChar]) -> Result<TruncatedQChar> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::Argument("empty product".into()))?;
    rest.iter().try_fold(first.clone(), |acc, f| qc_product(&acc, f))
}

/// `ι_J`: reinterprets a `J`-character's monomials over the whole diagram
/// and installs the given highest ℓ-weight.
pub fn qc_embed_j(c: &TruncatedQChar, top_override: LWeight) -> Result<TruncatedQChar> {
    if let Some(j) = &c.support {
        if let Some(m) = c.terms.keys().find(|m| !m.supported_on(j)) {
            return Err(Error::Support(format!("term {m} outside {j:?}")));
        }
    }
    TruncatedQChar::new(top_override, c.depth, c.terms.clone(), None)
}

/// `res_J` of a character whose terms are all `J`-supported.
pub fn qc_restrict_j(c: &TruncatedQChar, j: &BTreeSet<Node>) -> Result<TruncatedQChar> {
    if let Some(m) = c.terms.keys().find(|m| !m.supported_on(j)) {
        return Err(Error::Support(format!(
            "term {m} is not supported on {j:?}; restriction of mixed support is refused"
        )));
    }
    TruncatedQChar::new(c.top.res_j(j), c.depth, c.terms.clone(), Some(j.clone()))
}

/// Multiplies out `top · M` for every term; returns pairwise distinct
/// ℓ-weights with summed multiplicities, sorted.
pub fn qc_materialize(cd: &CartanData, c: &TruncatedQChar) -> Vec<(LWeight, u64)> {
    let mut out: BTreeMap<LWeight, u64> = BTreeMap::new();
    for (m, &mult) in &c.terms {
        *out.entry(c.weight_of(cd, m)).or_insert(0) += mult;
    }
    out.into_iter().collect()
}

fn singleton(j: Node) -> BTreeSet<Node> {
    std::iter::once(j).collect()
}

/// The `A^{-1}`-ladder `1 + Σ_{s=0}^{len−1} A_{j,k}^{-1} A_{j,k−2d_j}^{-1} ⋯ A_{j,k−2sd_j}^{-1}`
/// (`len = None` for the infinite ladder), truncated at `depth`.
fn ladder(cd: &CartanData, j: Node, k: Spec, len: Option<u32>, depth: u32) -> BTreeMap<AMonomial, u64> {
    let step = 2 * cd.d(j);
    let top_len = len.map_or(depth, |l| l.min(depth));
    let mut terms = BTreeMap::new();
    let mut m = AMonomial::identity();
    terms.insert(m.clone(), 1);
    for s in 0..top_len as i64 {
        m = m.mul(&AMonomial::var(j, k - step * s, 1));
        terms.insert(m.clone(), 1);
    }
    terms
}

/// Kirillov–Reshetikhin character at node `j`: highest ℓ-weight
/// `m^{(j)}_{len, q^k q_j^{1−2len}} = Y_{j,k+d_j(1−2len)} ⋯ Y_{j,k−d_j}` and
/// normalized character `1 + Σ_{s=0}^{len−1} A_{j,k}^{-1} ⋯ A_{j,k−2sd_j}^{-1}`,
/// as a character of the subdiagram `{j}`. Length 0 is the trivial character.
pub fn qc_kr_sl2(cd: &CartanData, j: Node, k: Spec, length: u32, depth: u32) -> Result<TruncatedQChar> {
    cd.check_node(j)?;
    let top = if length == 0 {
        LWeight::identity()
    } else {
        let base = k + cd.d(j) * (1 - 2 * length as i64);
        kr_highest_weight(cd, j, base, length)?.to_lweight(cd)
    };
    TruncatedQChar::new(top, depth, ladder(cd, j, k, Some(length), depth), Some(singleton(j)))
}

/// Negative prefundamental character at node `j`: highest ℓ-weight
/// `Ψ_{j,q^k}^{-1}` and the infinite ladder
/// `1 + Σ_{s≥0} A_{j,k}^{-1} ⋯ A_{j,k−2sd_j}^{-1}`, over the subdiagram `{j}`.
pub fn qc_neg_prefund_rank1(cd: &CartanData, j: Node, k: Spec, depth: u32) -> Result<TruncatedQChar> {
    cd.check_node(j)?;
    TruncatedQChar::new(LWeight::psi_gen(j, k, -1), depth, ladder(cd, j, k, None, depth), Some(singleton(j)))
}

/// Checks that `j1, j2` span a type `A_2` subdiagram.
pub fn check_a2_pair(cd: &CartanData, j1: Node, j2: Node) -> Result<()> {
    cd.check_node(j1)?;
    cd.check_node(j2)?;
    if j1 == j2 || cd.c(j1, j2) != -1 || cd.c(j2, j1) != -1 {
        return Err(Error::Argument(format!(
            "nodes {j1}, {j2} do not span an A2 subdiagram of {}",
            cd.name()
        )));
    }
    Ok(())
}

/// The monomial `A_{j1,k}^{-1} ⋯ A_{j1,k+2(1−n)d}^{-1} · A_{j2,k+d}^{-1} ⋯ A_{j2,k+(3−2m)d}^{-1}`.
pub fn sl3_pair_monomial(d: i64, j1: Node, j2: Node, k: Spec, n: u32, m: u32) -> AMonomial {
    let first = (0..n as i64).map(|s| (j1, k - 2 * d * s, 1));
    let second = (0..m as i64).map(|s| (j2, k + d - 2 * d * s, 1));
    AMonomial::from_entries(first.chain(second))
}

/// Negative prefundamental character of an `A_2` subdiagram `{j1, j2}`:
/// highest ℓ-weight `Ψ_{j1,q^k}^{-1}` and one term of multiplicity 1 per
/// `n ≥ m ≥ 0` (see [`sl3_pair_monomial`]), truncated at `depth`.
pub fn qc_neg_prefund_sl3_pair(
    cd: &CartanData,
    j1: Node,
    j2: Node,
    k: Spec,
    depth: u32,
) -> Result<TruncatedQChar> {
    check_a2_pair(cd, j1, j2)?;
    let d = cd.d(j1);
    let mut terms = BTreeMap::new();
    for n in 0..=depth {
        for m in 0..=n.min(depth - n) {
            terms.insert(sl3_pair_monomial(d, j1, j2, k, n, m), 1);
        }
    }
    let support: BTreeSet<Node> = [j1, j2].into_iter().collect();
    TruncatedQChar::new(LWeight::psi_gen(j1, k, -1), depth, terms, Some(support))
}

/// The `J`-trivial factor `Ψ_p = Ψ_top · ι(top_W)^{-1}` of a candidate
/// inflation, checked to be a product of torus factors and positive `Ψ`'s.
fn inflation_factor(top_w: &LWeight, psi_top: &LWeight, j: &BTreeSet<Node>) -> std::result::Result<LWeight, String> {
    if &psi_top.res_j(j) != top_w {
        return Err(format!(
            "restriction of the top {psi_top} to {j:?} is not the top {top_w} of the module being inflated"
        ));
    }
    let psi_p = psi_top.div(top_w);
    if !psi_p.is_j_trivial(j) {
        return Err(format!("factor {psi_p} is not trivial on {j:?}"));
    }
    if let Some(((i, k), e)) = psi_p.psi().iter().find(|(_, &e)| e < 0) {
        return Err(format!("factor {psi_p} contains Psi[{i},{k}]^{e} with a negative exponent"));
    }
    Ok(psi_p)
}

/// The character of the inflation with highest ℓ-weight `psi_top` of the
/// `J`-module whose character is `chi_w`: `ι_J(χ̄(W)) · [psi_top]`.
pub fn qc_inflation(chi_w: &TruncatedQChar, psi_top: &LWeight) -> Result<TruncatedQChar> {
    let j = chi_w
        .support
        .as_ref()
        .ok_or_else(|| Error::Precondition("the inflated character must be a subdiagram character".into()))?;
    inflation_factor(&chi_w.top, psi_top, j).map_err(Error::Precondition)?;
    qc_embed_j(chi_w, psi_top.clone())
}

/// Outcome of [`verify_inflation`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum InflationVerdict {
    /// The character has the shape `ι_J(χ̄(W)) [Ψ^J Ψ_p]` with this `Ψ_p`.
    Certified { psi_p: LWeight },
    /// The first reason the shape fails.
    Failed { reason: String },
}

impl InflationVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, InflationVerdict::Certified { .. })
    }
}

/// Decides whether `chi_v` has the q-character shape of an inflation of the
/// `J`-module with character `chi_w`.
pub fn verify_inflation(
    chi_v: &TruncatedQChar,
    chi_w: &TruncatedQChar,
    j: &BTreeSet<Node>,
) -> Result<InflationVerdict> {
    if chi_v.depth != chi_w.depth {
        return Err(Error::Precondition(format!(
            "depths differ: {} vs {}",
            chi_v.depth, chi_w.depth
        )));
    }
    if chi_w.support.as_ref().is_some_and(|s| s != j) {
        return Err(Error::Precondition(format!(
            "the subdiagram character is supported on {:?}, not {j:?}",
            chi_w.support
        )));
    }
    let fail = |reason: String| Ok(InflationVerdict::Failed { reason });
    if let Some(m) = chi_v.terms.keys().find(|m| !m.supported_on(j)) {
        return fail(format!("term {m} is not supported on {j:?}"));
    }
    for m in chi_v.terms.keys().chain(chi_w.terms.keys()) {
        let (a, b) = (chi_v.mult(m), chi_w.mult(m));
        if a != b {
            return fail(format!("multiplicity of {m} is {a}, expected {b}"));
        }
    }
    match inflation_factor(&chi_w.top, &chi_v.top, j) {
        Ok(psi_p) => Ok(InflationVerdict::Certified { psi_p }),
        Err(reason) => fail(reason),
    }
}

/// `{ℓ : −d_i < ℓ ≤ r^∨ h^∨ + d_i − d_j}`: the finite set containing every
/// spectral exponent at which an external node `i` can enter an inflation
/// of a prefundamental module at the internal node `j`.
pub fn candidate_spectral_set(cd: &CartanData, i: Node, j: Node) -> Result<BTreeSet<Spec>> {
    cd.check_node(i)?;
    cd.check_node(j)?;
    if i == j {
        return Err(Error::Argument("the external node must differ from the internal node".into()));
    }
    let (di, dj) = (cd.d(i), cd.d(j));
    let hi = cd.lacing() * cd.dual_coxeter() + di - dj;
    Ok((-di + 1..=hi).collect())
}

/// Constructor data of an inflation built from the character of `V′`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InflationData {
    /// External node → spectral exponents `b` with some `M · A_{i,b}^{-1}`
    /// (`M` a `J`-monomial) occurring.
    pub candidates: BTreeMap<Node, BTreeSet<Spec>>,
    /// `n_{i,b} = max_M (mult(M A_{i,b}^{-1}) + mult(M) − 2)`, clamped at 0.
    pub multiplicities: BTreeMap<(Node, Spec), u64>,
    /// `Ψ_p = Π Ψ_{i,b}^{n_{i,b}}`.
    pub psi_p: LWeight,
    /// `μ = ν + Σ n_{i,b} ω_i^∨` with `ν` the degree of the top.
    pub mu: Coweight,
}

/// Assembles [`InflationData`] from a caller-supplied character of `V′`.
pub fn build_inflation_data(
    cd: &CartanData,
    chi_vprime: &TruncatedQChar,
    j: &BTreeSet<Node>,
) -> Result<InflationData> {
    let mut candidates: BTreeMap<Node, BTreeSet<Spec>> = BTreeMap::new();
    let mut multiplicities: BTreeMap<(Node, Spec), u64> = BTreeMap::new();
    // Terms whose external part is a single A_{i,b}^{-1}.
    for (m, &mult) in &chi_vprime.terms {
        if mult == 0 {
            continue;
        }
        let external: Vec<(&(Node, Spec), &u32)> = m.vars().iter().filter(|((i, _), _)| !j.contains(i)).collect();
        if let [(&(i, b), &1)] = external.as_slice() {
            candidates.entry(i).or_default().insert(b);
            let inner = m
                .checked_div(&AMonomial::var(i, b, 1))
                .expect("the external factor divides the term");
            let n = (mult + chi_vprime.mult(&inner)).saturating_sub(2);
            let e = multiplicities.entry((i, b)).or_insert(0);
            *e = (*e).max(n);
        }
    }
    let mut psi_p = LWeight::identity();
    let mut mu = chi_vprime.top.degree(cd);
    for (&(i, b), &n) in &multiplicities {
        psi_p = psi_p.mul(&LWeight::psi_gen(i, b, n as i64));
        mu = mu.add(&cd.fundamental_coweight(i).scale(n as i64));
    }
    Ok(InflationData {
        candidates,
        multiplicities,
        psi_p,
        mu,
    })
}

/// The `A^{-1}`-monomial `M` with `weight = reference · M`, read inside the
/// support (`None` = whole diagram). Errors if no such monomial exists.
pub fn a_monomial_between(
    cd: &CartanData,
    reference: &LWeight,
    weight: &LWeight,
    support: Option<&BTreeSet<Node>>,
) -> Result<AMonomial> {
    let ratio = weight.div(reference);
    match support {
        None => AMonomial::from_ratio(cd, &ratio),
        Some(j) => a_monomial_from_ratio_in(cd, &ratio, j),
    }
}

/// [`AMonomial::from_ratio`] for ℓ-weights of the subdiagram `j`, where the
/// roots are `res_J(A_{i,b})`.
fn a_monomial_from_ratio_in(cd: &CartanData, ratio: &LWeight, j: &BTreeSet<Node>) -> Result<AMonomial> {
    let not_in_image = || Error::NotInImage(format!("{ratio} is not a monomial in inverse simple ℓ-roots of {j:?}"));
    if !ratio.nodes().is_subset(j) {
        return Err(not_in_image());
    }
    let restrict = |y: &YMonomial| -> YMonomial {
        y.vars()
            .iter()
            .filter(|((i, _), _)| j.contains(i))
            .fold(YMonomial::identity(), |acc, (&(i, k), &e)| acc.mul(&YMonomial::var(i, k, e)))
    };
    let mut y = ratio.to_y_monomial(cd)?;
    let floor = match y.vars().keys().map(|&(_, k)| k).min() {
        None => return Ok(AMonomial::identity()),
        Some(lo) => lo - 6 * cd.symmetrizers().iter().max().copied().unwrap_or(1),
    };
    let mut out = AMonomial::identity();
    while let Some(level) = y.top_level() {
        if level < floor {
            return Err(not_in_image());
        }
        let tops: Vec<(Node, i64)> = y
            .vars()
            .iter()
            .filter(|(&(_, k), _)| k == level)
            .map(|(&(i, _), &e)| (i, e))
            .collect();
        for (i, e) in tops {
            if e > 0 {
                return Err(not_in_image());
            }
            let b = level - cd.d(i);
            out = out.mul(&AMonomial::var(i, b, (-e) as u32));
            y = y.mul(&restrict(&YMonomial::a(cd, i, b)).pow(-e));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cd(name: &str) -> CartanData {
        CartanData::from_name(name).unwrap()
    }

    fn set(nodes: &[Node]) -> BTreeSet<Node> {
        nodes.iter().copied().collect()
    }

    #[test]
    fn kr_examples() {
        let a1 = cd("A1");
        let c = qc_kr_sl2(&a1, 1, 0, 1, 6).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.mult(&AMonomial::var(1, 0, 1)), 1);
        assert_eq!(qc_kr_sl2(&a1, 1, 0, 0, 6).unwrap(), TruncatedQChar::one(6, Some(set(&[1]))));
        assert_eq!(qc_kr_sl2(&a1, 1, 0, 3, 2).unwrap().len(), 3);
        // Materialized ℓ-weights: Y_{1,-1} and Y_{1,-1} A_{1,0}^{-1} = Y_{1,1}^{-1}.
        let mat = qc_materialize(&a1, &c);
        let weights: Vec<LWeight> = mat.iter().map(|(w, _)| w.clone()).collect();
        assert!(weights.contains(&LWeight::y(&a1, 1, -1, 1)));
        assert!(weights.contains(&LWeight::y(&a1, 1, 1, -1)));
    }

    #[test]
    fn sl3_pair_counts() {
        let a2 = cd("A2");
        for depth in 0..7u32 {
            let c = qc_neg_prefund_sl3_pair(&a2, 1, 2, 0, depth).unwrap();
            let oracle = (0..=depth).flat_map(|n| (0..=n).map(move |m| (n, m))).filter(|(n, m)| n + m <= depth).count();
            assert_eq!(c.len(), oracle);
        }
        assert_eq!(qc_neg_prefund_sl3_pair(&a2, 1, 2, 0, 5).unwrap().len(), 12);
        let d1 = qc_neg_prefund_sl3_pair(&a2, 1, 2, 0, 1).unwrap();
        assert!(d1.terms().contains_key(&AMonomial::var(1, 0, 1)));
        assert!(qc_neg_prefund_sl3_pair(&cd("A3"), 1, 3, 0, 2).is_err());
    }

    #[test]
    fn product_depth_and_unit() {
        let a1 = cd("A1");
        let x = qc_neg_prefund_rank1(&a1, 1, 0, 5).unwrap();
        let y = qc_kr_sl2(&a1, 1, 2, 2, 2).unwrap();
        assert_eq!(qc_product(&x, &y).unwrap().depth(), 2);
        let one = TruncatedQChar::one(5, Some(set(&[1])));
        assert_eq!(qc_product(&one, &x).unwrap(), x);
    }

    #[test]
    fn inflation_round_trip_qq_tilde() {
        let a2 = cd("A2");
        let j = set(&[1]);
        let w = qc_neg_prefund_rank1(&a2, 1, 0, 4).unwrap();
        let top = crate::lweight::psi_tilde(&a2, 1, 0);
        let v = qc_inflation(&w, &top).unwrap();
        let verdict = verify_inflation(&v, &w, &j).unwrap();
        assert_eq!(
            verdict,
            InflationVerdict::Certified {
                psi_p: LWeight::psi_gen(2, 1, 1)
            }
        );
        // Perturb a multiplicity.
        let mut terms = v.terms().clone();
        *terms.get_mut(&AMonomial::var(1, 0, 1)).unwrap() += 1;
        let bad = TruncatedQChar::new(v.top().clone(), 4, terms, None).unwrap();
        match verify_inflation(&bad, &w, &j).unwrap() {
            InflationVerdict::Failed { reason } => assert!(reason.contains("A[1,0]^-1")),
            other => panic!("expected failure, got {other:?}"),
        }
        // Negative external factor is rejected.
        let neg_top = LWeight::psi_gen(1, 0, -1).mul(&LWeight::psi_gen(2, 1, -1));
        assert!(qc_inflation(&w, &neg_top).is_err());
    }

    #[test]
    fn trivial_inflation() {
        let j = set(&[1]);
        let w = TruncatedQChar::one(3, Some(j.clone()));
        let top = LWeight::psi_gen(2, 1, 1);
        let v = qc_inflation(&w, &top).unwrap();
        assert_eq!(v.len(), 1);
        assert!(verify_inflation(&v, &w, &j).unwrap().is_certified());
    }

    #[test]
    fn embed_restrict_round_trip() {
        let a2 = cd("A2");
        let j = set(&[1]);
        let w = qc_neg_prefund_rank1(&a2, 1, 0, 4).unwrap();
        let v = qc_embed_j(&w, crate::lweight::psi_tilde(&a2, 1, 0)).unwrap();
        let back = qc_restrict_j(&v, &j).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn candidate_sets() {
        assert_eq!(candidate_spectral_set(&cd("A2"), 2, 1).unwrap(), (0..=3).collect());
        assert_eq!(candidate_spectral_set(&cd("B2"), 2, 1).unwrap(), (0..=5).collect());
        assert!(candidate_spectral_set(&cd("A2"), 1, 1).is_err());
    }

    #[test]
    fn inflation_data_synthetic() {
        let a2 = cd("A2");
        let j = set(&[1]);
        let top = LWeight::psi_gen(1, 0, -1);
        for (m2, expect) in [(2u64, 1u64), (1, 0)] {
            let mut terms = BTreeMap::new();
            terms.insert(AMonomial::identity(), 1);
            terms.insert(AMonomial::var(2, 1, 1), m2);
            let c = TruncatedQChar::new(top.clone(), 3, terms, None).unwrap();
            let data = build_inflation_data(&a2, &c, &j).unwrap();
            assert_eq!(data.candidates[&2], set(&[1]).into_iter().map(|x| x as i64).collect());
            assert_eq!(data.multiplicities[&(2, 1)], expect);
            assert_eq!(data.psi_p, LWeight::psi_gen(2, 1, expect as i64));
            assert_eq!(data.mu.0, vec![-1, expect as i64]);
        }
        let only_j = qc_neg_prefund_rank1(&a2, 1, 0, 3).unwrap();
        let only_j = qc_embed_j(&only_j, top.clone()).unwrap();
        let data = build_inflation_data(&a2, &only_j, &j).unwrap();
        assert!(data.candidates.is_empty() && data.psi_p.is_identity());
        assert_eq!(data.mu, top.degree(&a2));
    }

    #[test]
    fn json_round_trip() {
        let a2 = cd("A2");
        let c = qc_neg_prefund_sl3_pair(&a2, 1, 2, 3, 4).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        let back: TruncatedQChar = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn monomial_between_in_subdiagram() {
        let a2 = cd("A2");
        let j = set(&[1]);
        let top = LWeight::psi_gen(1, 0, -1);
        let m = AMonomial::from_entries([(1, 0, 1), (1, -2, 1)]);
        let w = top.mul(&m.to_lweight_in(&a2, &j));
        assert_eq!(a_monomial_between(&a2, &top, &w, Some(&j)).unwrap(), m);
    }
}
