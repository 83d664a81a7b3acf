//! The ℓ-weight group: canonical forms, the `Ψ`, `Y`, `A` generators, and
//! the maps and predicates used by q-characters and inflations.
//!
//! An ℓ-weight is an `I`-tuple of rational functions of `z`. Every ℓ-weight
//! handled here is a product of a torus part (a constant `q^{e_i}` at each
//! node) and generators `Ψ_{i,q^k}`, whose only nontrivial component is
//! `1 − q^k z` at node `i`. All spectral parameters are powers `q^k`, and are
//! stored as the integer `k`.
//!
//! ```
//! use shqa::cartan::CartanData;
//! use shqa::lweight::LWeight;
//!
//! let a1 = CartanData::from_name("A1").unwrap();
//! let y = LWeight::y(&a1, 1, 0, 1);
//! assert_eq!(y.to_string(), "t[1]^1 * Psi[1,-1] * Psi[1,1]^-1");
//! // A_{1,1} = Y_{1,0} Y_{1,2}.
//! assert_eq!(LWeight::a(&a1, 1, 1), y.mul(&LWeight::y(&a1, 1, 2, 1)));
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cartan::{CartanData, Coweight, Node, TorusWeight};
use crate::error::{Error, Result};

/// Integer `k` standing for the spectral parameter `q^k`.
pub type Spec = i64;

/// A product `[γ] · Π Ψ_{i,q^k}^{n_{i,k}}` in canonical (pruned, sorted) form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "LWeightJson", try_from = "LWeightJson")]
pub struct LWeight {
    torus: BTreeMap<Node, i64>,
    psi: BTreeMap<(Node, Spec), i64>,
}

fn bump<K: Ord>(map: &mut BTreeMap<K, i64>, key: K, by: i64) {
    if by == 0 {
        return;
    }
    *map.entry(key).or_insert(0) += by;
}

fn prune<K: Ord>(map: &mut BTreeMap<K, i64>) {
    map.retain(|_, e| *e != 0);
}

impl LWeight {
    /// The identity ℓ-weight.
    pub fn identity() -> Self {
        Self::default()
    }

    /// `Ψ_{i,q^k}^{exp}`.
    pub fn psi_gen(i: Node, k: Spec, exp: i64) -> Self {
        let mut w = Self::default();
        bump(&mut w.psi, (i, k), exp);
        prune(&mut w.psi);
        w
    }

    /// Constant ℓ-weight `q^{e}` at node `i`.
    pub fn torus_gen(i: Node, e: i64) -> Self {
        let mut w = Self::default();
        bump(&mut w.torus, i, e);
        prune(&mut w.torus);
        w
    }

    /// Constant ℓ-weight `[γ]` for a torus weight given as an exponent vector.
    pub fn from_torus(t: &TorusWeight) -> Self {
        let mut w = Self::default();
        for (idx, &e) in t.0.iter().enumerate() {
            bump(&mut w.torus, idx + 1, e);
        }
        prune(&mut w.torus);
        w
    }

    /// `[ω_i]^n`.
    pub fn omega(cd: &CartanData, i: Node, n: i64) -> Self {
        Self::torus_gen(i, cd.d(i) * n)
    }

    /// `[α_j]^n`.
    pub fn alpha(cd: &CartanData, j: Node, n: i64) -> Self {
        Self::from_torus(&cd.alpha(j).pow(n))
    }

    /// `Y_{i,q^k}^{exp} = [ω_i]^{exp} Ψ_{i,q^{k−d_i}}^{exp} Ψ_{i,q^{k+d_i}}^{−exp}`.
    pub fn y(cd: &CartanData, i: Node, k: Spec, exp: i64) -> Self {
        let di = cd.d(i);
        let mut w = Self::default();
        bump(&mut w.torus, i, di * exp);
        bump(&mut w.psi, (i, k - di), exp);
        bump(&mut w.psi, (i, k + di), -exp);
        prune(&mut w.torus);
        prune(&mut w.psi);
        w
    }

    /// `A_{i,q^k}`, assembled from its `Y`-monomial expression.
    pub fn a(cd: &CartanData, i: Node, k: Spec) -> Self {
        YMonomial::a(cd, i, k).to_lweight(cd)
    }

    /// `A_{i,q^k}^{-exp}`.
    pub fn a_inv_pow(cd: &CartanData, i: Node, k: Spec, exp: i64) -> Self {
        Self::a(cd, i, k).pow(-exp)
    }

    pub fn is_identity(&self) -> bool {
        self.torus.is_empty() && self.psi.is_empty()
    }

    /// Sparse torus exponents (node → exponent of `q`).
    pub fn torus(&self) -> &BTreeMap<Node, i64> {
        &self.torus
    }

    /// Sparse `Ψ` exponents ((node, spectral exponent) → exponent).
    pub fn psi(&self) -> &BTreeMap<(Node, Spec), i64> {
        &self.psi
    }

    pub fn torus_exp(&self, i: Node) -> i64 {
        self.torus.get(&i).copied().unwrap_or(0)
    }

    pub fn psi_exp(&self, i: Node, k: Spec) -> i64 {
        self.psi.get(&(i, k)).copied().unwrap_or(0)
    }

    /// Nodes carrying any nontrivial data.
    pub fn nodes(&self) -> BTreeSet<Node> {
        self.torus
            .keys()
            .copied()
            .chain(self.psi.keys().map(|&(i, _)| i))
            .collect()
    }

    /// Group product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut w = self.clone();
        for (&i, &e) in &other.torus {
            bump(&mut w.torus, i, e);
        }
        for (&key, &e) in &other.psi {
            bump(&mut w.psi, key, e);
        }
        prune(&mut w.torus);
        prune(&mut w.psi);
        w
    }

    /// Group inverse.
    pub fn inv(&self) -> Self {
        Self {
            torus: self.torus.iter().map(|(&i, &e)| (i, -e)).collect(),
            psi: self.psi.iter().map(|(&key, &e)| (key, -e)).collect(),
        }
    }

    /// `self · other^{-1}`.
    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    /// `self^n`.
    pub fn pow(&self, n: i64) -> Self {
        if n == 0 {
            return Self::identity();
        }
        Self {
            torus: self.torus.iter().map(|(&i, &e)| (i, e * n)).collect(),
            psi: self.psi.iter().map(|(&key, &e)| (key, e * n)).collect(),
        }
    }

    /// Restriction to the nodes of `j` (keeps only node-indexed data in `j`).
    pub fn res_j(&self, j: &BTreeSet<Node>) -> Self {
        Self {
            torus: self
                .torus
                .iter()
                .filter(|(i, _)| j.contains(i))
                .map(|(&i, &e)| (i, e))
                .collect(),
            psi: self
                .psi
                .iter()
                .filter(|((i, _), _)| j.contains(i))
                .map(|(&key, &e)| (key, e))
                .collect(),
        }
    }

    /// Spectral shift `q^k ↦ q^{k+s}` on every `Ψ` generator (the pullback
    /// by the shift automorphism `τ_{q^s}`); the torus part is unchanged.
    pub fn shift(&self, s: Spec) -> Self {
        Self {
            torus: self.torus.clone(),
            psi: self.psi.iter().map(|(&(i, k), &e)| ((i, k + s), e)).collect(),
        }
    }

    /// Whether all data at the nodes of `j` is trivial.
    pub fn is_j_trivial(&self, j: &BTreeSet<Node>) -> bool {
        self.res_j(j).is_identity()
    }

    /// `ϖ`: the value at `z = 0`, i.e. the torus part.
    pub fn varpi(&self, cd: &CartanData) -> TorusWeight {
        TorusWeight(cd.nodes().map(|i| self.torus_exp(i)).collect())
    }

    /// The coweight `μ` with `α_i(μ) = deg Ψ_i(z)` (sum of `Ψ` exponents at `i`).
    pub fn degree(&self, cd: &CartanData) -> Coweight {
        let mut v = vec![0; cd.rank()];
        for (&(i, _), &e) in &self.psi {
            if i >= 1 && i <= v.len() {
                v[i - 1] += e;
            }
        }
        Coweight(v)
    }

    /// Whether every `Ψ` exponent is positive (torus factors allowed).
    pub fn is_positive_psi_product(&self) -> bool {
        self.psi.values().all(|&e| e > 0)
    }

    /// Converts to a `Y`-monomial by node-wise telescoping; errors if the
    /// ℓ-weight is not in the image of the `Y`-monomials.
    pub fn to_y_monomial(&self, cd: &CartanData) -> Result<YMonomial> {
        let mut vars = BTreeMap::new();
        for i in self.nodes() {
            cd.check_node(i)?;
            let di = cd.d(i);
            let exps: BTreeMap<Spec, i64> = self
                .psi
                .range((i, Spec::MIN)..=(i, Spec::MAX))
                .map(|(&(_, k), &e)| (k, e))
                .collect();
            if let (Some((&lo, _)), Some((&hi, _))) = (exps.first_key_value(), exps.last_key_value()) {
                // Ψ_{i,k} receives +n_{k+d} from Y_{i,k+d} and −n_{k−d} from Y_{i,k−d}.
                let mut n: BTreeMap<Spec, i64> = BTreeMap::new();
                for k in lo..=hi {
                    let prev = n.get(&(k - di)).copied().unwrap_or(0);
                    let v = exps.get(&k).copied().unwrap_or(0) + prev;
                    n.insert(k + di, v);
                }
                for (k, e) in n {
                    if e != 0 {
                        vars.insert((i, k), e);
                    }
                }
            }
        }
        let m = YMonomial { vars };
        if &m.to_lweight(cd) != self {
            return Err(Error::NotInImage(format!("{self} is not a Y-monomial")));
        }
        Ok(m)
    }

    /// Parses the text grammar `Psi[i,k]^n * Y[i,k]^n * A[i,k]^n * t[i]^e`
    /// (factors in any order, `^n` optional, `1` for the identity).
    pub fn parse(cd: &CartanData, s: &str) -> Result<Self> {
        let mut acc = Self::identity();
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(acc);
        }
        for factor in s.split('*') {
            let f = factor.trim();
            if f == "1" {
                continue;
            }
            let bad = || Error::Parse(format!("bad ℓ-weight factor {f:?}"));
            let open = f.find('[').ok_or_else(bad)?;
            let close = f.find(']').ok_or_else(bad)?;
            let head = f[..open].trim();
            let args: Vec<i64> = f[open + 1..close]
                .split(',')
                .map(|a| a.trim().parse::<i64>().map_err(|_| bad()))
                .collect::<Result<_>>()?;
            let rest = f[close + 1..].trim();
            let exp = if rest.is_empty() {
                1
            } else {
                rest.strip_prefix('^')
                    .ok_or_else(bad)?
                    .trim()
                    .parse::<i64>()
                    .map_err(|_| bad())?
            };
            let node = |x: i64| -> Result<Node> {
                let n = usize::try_from(x).map_err(|_| bad())?;
                cd.check_node(n)?;
                Ok(n)
            };
            let w = match (head, args.as_slice()) {
                ("Psi", &[i, k]) => Self::psi_gen(node(i)?, k, exp),
                ("Y", &[i, k]) => Self::y(cd, node(i)?, k, exp),
                ("A", &[i, k]) => Self::a(cd, node(i)?, k).pow(exp),
                ("t", &[i]) => Self::torus_gen(node(i)?, exp),
                _ => return Err(bad()),
            };
            acc = acc.mul(&w);
        }
        Ok(acc)
    }
}

/// Group product or quotient: `a · b^{sign}` with `sign = ±1`.
pub fn lw_multiply(a: &LWeight, b: &LWeight, sign: i64) -> Result<LWeight> {
    match sign {
        1 => Ok(a.mul(b)),
        -1 => Ok(a.div(b)),
        _ => Err(Error::Argument(format!("sign must be ±1, got {sign}"))),
    }
}

impl fmt::Display for LWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torus.iter().map(|(i, e)| format!("t[{i}]^{e}")).collect();
        for (&(i, k), &e) in &self.psi {
            if e == 1 {
                parts.push(format!("Psi[{i},{k}]"));
            } else {
                parts.push(format!("Psi[{i},{k}]^{e}"));
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" * "))
        }
    }
}

/// One `(node, spec, exp)` entry of the JSON forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarEntry {
    pub node: Node,
    pub spec: Spec,
    pub exp: i64,
}

#[derive(Serialize, Deserialize)]
struct LWeightJson {
    t: BTreeMap<String, i64>,
    psi: Vec<VarEntry>,
}

impl From<LWeight> for LWeightJson {
    fn from(w: LWeight) -> Self {
        Self {
            t: w.torus.iter().map(|(i, e)| (i.to_string(), *e)).collect(),
            psi: w
                .psi
                .iter()
                .map(|(&(node, spec), &exp)| VarEntry { node, spec, exp })
                .collect(),
        }
    }
}

impl TryFrom<LWeightJson> for LWeight {
    type Error = String;
    fn try_from(j: LWeightJson) -> std::result::Result<Self, String> {
        let mut w = LWeight::identity();
        for (i, e) in j.t {
            let i: Node = i.parse().map_err(|_| format!("bad node key {i:?}"))?;
            w = w.mul(&LWeight::torus_gen(i, e));
        }
        for v in j.psi {
            w = w.mul(&LWeight::psi_gen(v.node, v.spec, v.exp));
        }
        Ok(w)
    }
}

/// A reduced monomial `Π Y_{i,q^k}^{n_{i,k}}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct YMonomial {
    vars: BTreeMap<(Node, Spec), i64>,
}

impl YMonomial {
    pub fn identity() -> Self {
        Self::default()
    }

    /// `Y_{i,q^k}^{exp}`.
    pub fn var(i: Node, k: Spec, exp: i64) -> Self {
        let mut m = Self::default();
        bump(&mut m.vars, (i, k), exp);
        prune(&mut m.vars);
        m
    }

    /// `A_{i,q^k}` as a `Y`-monomial:
    /// `Y_{i,aq_i^{-1}} Y_{i,aq_i}` divided by, for every `j` with
    /// `C_{j,i} = −1`: `Y_{j,a}`; `−2`: `Y_{j,aq^{-1}} Y_{j,aq}`;
    /// `−3`: `Y_{j,aq^{-2}} Y_{j,a} Y_{j,aq^2}`.
    pub fn a(cd: &CartanData, i: Node, k: Spec) -> Self {
        let di = cd.d(i);
        let mut m = Self::var(i, k - di, 1).mul(&Self::var(i, k + di, 1));
        for j in cd.neighbors(i) {
            let shifts: &[Spec] = match cd.c(j, i) {
                -1 => &[0],
                -2 => &[-1, 1],
                -3 => &[-2, 0, 2],
                _ => &[],
            };
            for s in shifts {
                m = m.mul(&Self::var(j, k + s, -1));
            }
        }
        m
    }

    pub fn vars(&self) -> &BTreeMap<(Node, Spec), i64> {
        &self.vars
    }

    pub fn is_identity(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut m = self.clone();
        for (&key, &e) in &other.vars {
            bump(&mut m.vars, key, e);
        }
        prune(&mut m.vars);
        m
    }

    pub fn inv(&self) -> Self {
        Self {
            vars: self.vars.iter().map(|(&key, &e)| (key, -e)).collect(),
        }
    }

    pub fn pow(&self, n: i64) -> Self {
        if n == 0 {
            return Self::identity();
        }
        Self {
            vars: self.vars.iter().map(|(&key, &e)| (key, e * n)).collect(),
        }
    }

    /// Whether all exponents are positive (an element of `𝒴⁺`).
    pub fn is_dominant(&self) -> bool {
        self.vars.values().all(|&e| e > 0)
    }

    /// `L(a, M)`: the largest spectral exponent carrying a variable (all
    /// parameters lie in the single class `q^ℤ`); `None` for the identity.
    pub fn top_level(&self) -> Option<Spec> {
        self.vars.keys().map(|&(_, k)| k).max()
    }

    /// Right-negativity: every variable at the top level `L(a, M)` appears
    /// with a negative exponent. The identity is not right-negative.
    pub fn right_negative(&self) -> bool {
        match self.top_level() {
            None => false,
            Some(l) => self
                .vars
                .iter()
                .filter(|(&(_, k), _)| k == l)
                .all(|(_, &e)| e < 0),
        }
    }

    /// Canonical ℓ-weight form.
    pub fn to_lweight(&self, cd: &CartanData) -> LWeight {
        let mut w = LWeight::identity();
        for (&(i, k), &e) in &self.vars {
            w = w.mul(&LWeight::y(cd, i, k, e));
        }
        w
    }
}

impl fmt::Display for YMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.vars.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .vars
            .iter()
            .map(|(&(i, k), &e)| {
                if e == 1 {
                    format!("Y[{i},{k}]")
                } else {
                    format!("Y[{i},{k}]^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

/// `Y_{i,k} Y_{i,k+2d_i} ⋯ Y_{i,k+2d_i(length−1)}`, the highest ℓ-weight of
/// a Kirillov–Reshetikhin module.
pub fn kr_highest_weight(cd: &CartanData, i: Node, k: Spec, length: u32) -> Result<YMonomial> {
    cd.check_node(i)?;
    if length == 0 {
        return Err(Error::Argument("KR length must be positive".into()));
    }
    let step = 2 * cd.d(i);
    Ok((0..length as i64).fold(YMonomial::identity(), |m, s| m.mul(&YMonomial::var(i, k + step * s, 1))))
}

/// A monomial `Π A_{i,q^k}^{−n_{i,k}}` in the inverse simple ℓ-roots,
/// stored by its nonnegative exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AMonomial {
    vars: BTreeMap<(Node, Spec), u32>,
}

impl AMonomial {
    pub fn identity() -> Self {
        Self::default()
    }

    /// `A_{i,q^k}^{−n}`.
    pub fn var(i: Node, k: Spec, n: u32) -> Self {
        let mut m = Self::default();
        if n > 0 {
            m.vars.insert((i, k), n);
        }
        m
    }

    /// Builds a monomial from `(node, spec, exponent)` triples.
    pub fn from_entries(entries: impl IntoIterator<Item = (Node, Spec, u32)>) -> Self {
        entries
            .into_iter()
            .fold(Self::identity(), |m, (i, k, n)| m.mul(&Self::var(i, k, n)))
    }

    pub fn vars(&self) -> &BTreeMap<(Node, Spec), u32> {
        &self.vars
    }

    pub fn is_identity(&self) -> bool {
        self.vars.is_empty()
    }

    /// Total degree (the depth grading of q-characters).
    pub fn degree(&self) -> u32 {
        self.vars.values().sum()
    }

    pub fn exp(&self, i: Node, k: Spec) -> u32 {
        self.vars.get(&(i, k)).copied().unwrap_or(0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut m = self.clone();
        for (&key, &n) in &other.vars {
            *m.vars.entry(key).or_insert(0) += n;
        }
        m
    }

    /// `self / other` if `other` divides `self`.
    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        let mut m = self.clone();
        for (&key, &n) in &other.vars {
            let e = m.vars.get_mut(&key)?;
            if *e < n {
                return None;
            }
            *e -= n;
            if *e == 0 {
                m.vars.remove(&key);
            }
        }
        Some(m)
    }

    /// Shifts every spectral exponent by `s`.
    pub fn shift(&self, s: Spec) -> Self {
        Self {
            vars: self.vars.iter().map(|(&(i, k), &n)| ((i, k + s), n)).collect(),
        }
    }

    /// Nodes that occur.
    pub fn support(&self) -> BTreeSet<Node> {
        self.vars.keys().map(|&(i, _)| i).collect()
    }

    /// Whether every variable sits at a node of `j`.
    pub fn supported_on(&self, j: &BTreeSet<Node>) -> bool {
        self.vars.keys().all(|(i, _)| j.contains(i))
    }

    /// The ℓ-weight `Π A_{i,q^k}^{−n}` (ambient Cartan data).
    pub fn to_lweight(&self, cd: &CartanData) -> LWeight {
        let mut w = LWeight::identity();
        for (&(i, k), &n) in &self.vars {
            w = w.mul(&LWeight::a_inv_pow(cd, i, k, n as i64));
        }
        w
    }

    /// The ℓ-weight `res_J(Π A_{i,q^k}^{−n})` of the monomial read inside the
    /// subdiagram `j`.
    pub fn to_lweight_in(&self, cd: &CartanData, j: &BTreeSet<Node>) -> LWeight {
        self.to_lweight(cd).res_j(j)
    }

    /// Solves `ratio = Π A^{−n}` for a monomial in inverse simple ℓ-roots.
    ///
    /// The ratio is converted to a `Y`-monomial; then, repeatedly, the
    /// variables at the top spectral level `L` must all carry negative
    /// exponents, and `Y_{i,L}^{−n}` is peeled off as `A_{i,L−d_i}^{−n}`
    /// (the unique top variable of `A_{i,b}^{-1}` is `Y_{i,b+d_i}^{-1}`).
    pub fn from_ratio(cd: &CartanData, ratio: &LWeight) -> Result<Self> {
        let mut y = ratio.to_y_monomial(cd)?;
        let floor = match y.vars.keys().map(|&(_, k)| k).min() {
            None => return Ok(Self::identity()),
            Some(lo) => lo - 6 * cd.symmetrizers().iter().max().copied().unwrap_or(1),
        };
        let mut out = Self::identity();
        while let Some(level) = y.top_level() {
            if level < floor {
                break;
            }
            let tops: Vec<(Node, i64)> = y
                .vars
                .iter()
                .filter(|(&(_, k), _)| k == level)
                .map(|(&(i, _), &e)| (i, e))
                .collect();
            for (i, e) in tops {
                if e > 0 {
                    return Err(Error::NotInImage(format!(
                        "{ratio} is not a monomial in inverse simple ℓ-roots"
                    )));
                }
                let b = level - cd.d(i);
                out = out.mul(&Self::var(i, b, (-e) as u32));
                y = y.mul(&YMonomial::a(cd, i, b).pow(-e));
            }
        }
        if !y.is_identity() {
            return Err(Error::NotInImage(format!(
                "{ratio} is not a monomial in inverse simple ℓ-roots"
            )));
        }
        Ok(out)
    }

    pub fn entries(&self) -> Vec<VarEntry> {
        self.vars
            .iter()
            .map(|(&(node, spec), &n)| VarEntry {
                node,
                spec,
                exp: n as i64,
            })
            .collect()
    }

    pub fn from_var_entries(entries: &[VarEntry]) -> Result<Self> {
        let mut m = Self::identity();
        for v in entries {
            let n = u32::try_from(v.exp)
                .map_err(|_| Error::Parse(format!("A-monomial exponent must be nonnegative, got {}", v.exp)))?;
            m = m.mul(&Self::var(v.node, v.spec, n));
        }
        Ok(m)
    }
}

impl fmt::Display for AMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.vars.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .vars
            .iter()
            .map(|(&(i, k), &n)| format!("A[{i},{k}]^-{n}"))
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

/// The ℓ-weights with closed-form definitions used by the inflation examples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedWeight {
    /// `Ψ*_{j,a} = Y_{j,aq_j^{-1}} Π_{C_{i,j}<0} Ψ_{i,aq_i^{−C_{i,j}}}`.
    PsiStar,
    /// `Ψ̃_{j,a}`: `Ψ_{j,a}^{-1}` times external factors determined by `C_{j,i}`.
    PsiTilde,
    /// `Ψ_p = Ψ_{j,a} Ψ̃_{j,a}` of the `QQ̃`-system.
    QqPsiP,
    /// `Ψ_{p_1} = [−ω_j] Ψ_{j,a} Ψ*_{j,a}` of the `QQ*`-system.
    QqstarPsiP1,
    /// `Ψ_{p_2} = [α_j] Ψ_{p_1} A_{j,a}^{-1}` of the `QQ*`-system.
    QqstarPsiP2,
    /// `Ψ_p(a) = Ψ_{j,a} Ψ̃_{j,a}` of the inflated `T`-system.
    NewTPsiP,
}

impl NamedWeight {
    pub const ALL: [NamedWeight; 6] = [
        NamedWeight::PsiStar,
        NamedWeight::PsiTilde,
        NamedWeight::QqPsiP,
        NamedWeight::QqstarPsiP1,
        NamedWeight::QqstarPsiP2,
        NamedWeight::NewTPsiP,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedWeight::PsiStar => "psi_star",
            NamedWeight::PsiTilde => "psi_tilde",
            NamedWeight::QqPsiP => "qq_psi_p",
            NamedWeight::QqstarPsiP1 => "qqstar_psi_p1",
            NamedWeight::QqstarPsiP2 => "qqstar_psi_p2",
            NamedWeight::NewTPsiP => "newT_psi_p",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        let norm = s.replace('-', "_");
        Self::ALL
            .into_iter()
            .find(|w| w.name() == norm || w.name().eq_ignore_ascii_case(&norm))
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

/// `Ψ*_{j,q^k}`.
pub fn psi_star(cd: &CartanData, j: Node, k: Spec) -> LWeight {
    let dj = cd.d(j);
    let mut w = LWeight::y(cd, j, k - dj, 1);
    for i in cd.neighbors(j) {
        let cij = cd.c(i, j);
        if cij < 0 {
            w = w.mul(&LWeight::psi_gen(i, k - cd.d(i) * cij, 1));
        }
    }
    w
}

/// `Ψ̃_{j,q^k}`.
pub fn psi_tilde(cd: &CartanData, j: Node, k: Spec) -> LWeight {
    let dj = cd.d(j);
    let mut w = LWeight::psi_gen(j, k, -1);
    for i in cd.neighbors(j) {
        let shifts: &[i64] = match cd.c(j, i) {
            -1 => &[1],
            -2 => &[0, 2],
            -3 => &[-1, 1, 3],
            _ => &[],
        };
        for s in shifts {
            w = w.mul(&LWeight::psi_gen(i, k + s * dj, 1));
        }
    }
    w
}

/// Builds one of the named ℓ-weights at node `j` and spectral base `q^k`.
pub fn build_named_weight(cd: &CartanData, name: NamedWeight, j: Node, k: Spec) -> Result<LWeight> {
    cd.check_node(j)?;
    Ok(match name {
        NamedWeight::PsiStar => psi_star(cd, j, k),
        NamedWeight::PsiTilde => psi_tilde(cd, j, k),
        NamedWeight::QqPsiP | NamedWeight::NewTPsiP => LWeight::psi_gen(j, k, 1).mul(&psi_tilde(cd, j, k)),
        NamedWeight::QqstarPsiP1 => LWeight::omega(cd, j, -1)
            .mul(&LWeight::psi_gen(j, k, 1))
            .mul(&psi_star(cd, j, k)),
        NamedWeight::QqstarPsiP2 => LWeight::alpha(cd, j, 1)
            .mul(&build_named_weight(cd, NamedWeight::QqstarPsiP1, j, k)?)
            .mul(&LWeight::a(cd, j, k).inv()),
    })
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
    fn a1_y_and_a() {
        let a1 = cd("A1");
        let y = LWeight::y(&a1, 1, 0, 1);
        assert_eq!(y.torus_exp(1), 1);
        assert_eq!(y.psi_exp(1, -1), 1);
        assert_eq!(y.psi_exp(1, 1), -1);
        let a = LWeight::a(&a1, 1, 0);
        let expected = LWeight::torus_gen(1, 2)
            .mul(&LWeight::psi_gen(1, -2, 1))
            .mul(&LWeight::psi_gen(1, 2, -1));
        assert_eq!(a, expected);
    }

    #[test]
    fn a_node_part_closed_form_all_types() {
        // Node-i part of A_{i,k}: [α_i]_i Ψ_{i,k−2d_i} Ψ_{i,k+2d_i}^{-1}.
        for name in ["A3", "B3", "C3", "D4", "F4", "G2", "E6"] {
            let c = cd(name);
            for i in c.nodes() {
                let a = LWeight::a(&c, i, 5);
                let di = c.d(i);
                let node_part = a.res_j(&set(&[i]));
                let expected = LWeight::torus_gen(i, 2 * di)
                    .mul(&LWeight::psi_gen(i, 5 - 2 * di, 1))
                    .mul(&LWeight::psi_gen(i, 5 + 2 * di, -1));
                assert_eq!(node_part, expected, "{name} node {i}");
                assert_eq!(a.varpi(&c), c.alpha(i));
                assert!(a.degree(&c).is_zero());
            }
        }
    }

    #[test]
    fn a2_a_as_y_monomial() {
        let a2 = cd("A2");
        let m = YMonomial::a(&a2, 1, 0);
        let expected = YMonomial::var(1, -1, 1)
            .mul(&YMonomial::var(1, 1, 1))
            .mul(&YMonomial::var(2, 0, -1));
        assert_eq!(m, expected);
    }

    #[test]
    fn named_weights_a2() {
        let a2 = cd("A2");
        let tilde = build_named_weight(&a2, NamedWeight::PsiTilde, 1, 0).unwrap();
        assert_eq!(tilde, LWeight::psi_gen(1, 0, -1).mul(&LWeight::psi_gen(2, 1, 1)));
        let star = build_named_weight(&a2, NamedWeight::PsiStar, 1, 0).unwrap();
        assert_eq!(star, LWeight::y(&a2, 1, -1, 1).mul(&LWeight::psi_gen(2, 1, 1)));
        let p = build_named_weight(&a2, NamedWeight::QqPsiP, 1, 0).unwrap();
        assert_eq!(p, LWeight::psi_gen(2, 1, 1));
        assert_eq!(tilde.degree(&a2).0, vec![-1, 1]);
    }

    #[test]
    fn qq_star_closed_forms() {
        // Ψ_{p1} = Π_{C_{i,j}≠0} Ψ_{i,aq_i^{−C_{i,j}}}, Ψ_{p2} = Π Ψ_{i,aq_i^{C_{i,j}}}.
        for name in ["A2", "A3", "B2", "B3", "C3", "G2", "F4"] {
            let c = cd(name);
            for j in c.nodes() {
                for k in [0, 3] {
                    let mut p1 = LWeight::identity();
                    let mut p2 = LWeight::identity();
                    for i in c.nodes().filter(|&i| c.c(i, j) != 0) {
                        p1 = p1.mul(&LWeight::psi_gen(i, k - c.d(i) * c.c(i, j), 1));
                        p2 = p2.mul(&LWeight::psi_gen(i, k + c.d(i) * c.c(i, j), 1));
                    }
                    assert_eq!(build_named_weight(&c, NamedWeight::QqstarPsiP1, j, k).unwrap(), p1);
                    assert_eq!(build_named_weight(&c, NamedWeight::QqstarPsiP2, j, k).unwrap(), p2);
                }
            }
        }
    }

    #[test]
    fn unknown_named_weight() {
        assert!(matches!(NamedWeight::from_name("psi_bogus"), Err(Error::UnknownName(_))));
        assert_eq!(NamedWeight::from_name("qq-psi-p").unwrap(), NamedWeight::QqPsiP);
    }

    #[test]
    fn restriction_examples() {
        let a2 = cd("A2");
        let tilde = psi_tilde(&a2, 1, 0);
        assert_eq!(tilde.res_j(&set(&[1])), LWeight::psi_gen(1, 0, -1));
        let r = LWeight::a(&a2, 2, 1).res_j(&set(&[1]));
        let expected = LWeight::torus_gen(1, -1)
            .mul(&LWeight::psi_gen(1, 0, -1))
            .mul(&LWeight::psi_gen(1, 2, 1));
        assert_eq!(r, expected);
        assert!(LWeight::psi_gen(2, 1, 1).is_j_trivial(&set(&[1])));
        assert!(!LWeight::psi_gen(1, 0, -1).is_j_trivial(&set(&[1])));
    }

    #[test]
    fn right_negativity() {
        let a1 = cd("A1");
        assert!(YMonomial::var(1, -1, 1).mul(&YMonomial::var(1, 1, -1)).right_negative());
        assert!(!YMonomial::var(1, 3, 2).right_negative());
        let mk = kr_highest_weight(&a1, 1, -3, 2).unwrap();
        assert_eq!(mk, YMonomial::var(1, -3, 1).mul(&YMonomial::var(1, -1, 1)));
        assert!(mk.mul(&YMonomial::a(&a1, 1, 0).inv()).right_negative());
    }

    #[test]
    fn kr_highest_weight_example() {
        let a1 = cd("A1");
        let m = kr_highest_weight(&a1, 1, -5, 3).unwrap();
        assert_eq!(m.to_string(), "Y[1,-5] * Y[1,-3] * Y[1,-1]");
        assert!(m.to_lweight(&a1).degree(&a1).is_zero());
    }

    #[test]
    fn y_conversion_round_trip_and_failure() {
        let b3 = cd("B3");
        let m = YMonomial::var(1, 2, 3).mul(&YMonomial::var(3, -1, -2)).mul(&YMonomial::var(2, 4, 1));
        assert_eq!(m.to_lweight(&b3).to_y_monomial(&b3).unwrap(), m);
        assert!(LWeight::psi_gen(1, 0, 1).to_y_monomial(&b3).is_err());
        assert!(LWeight::torus_gen(1, 1).to_y_monomial(&b3).is_err());
    }

    #[test]
    fn a_monomial_from_ratio() {
        for name in ["A2", "B2", "C3", "G2"] {
            let c = cd(name);
            let m = AMonomial::from_entries([(1, 0, 2), (2, 3, 1), (1, -4, 1)]);
            assert_eq!(AMonomial::from_ratio(&c, &m.to_lweight(&c)).unwrap(), m);
            assert!(AMonomial::from_ratio(&c, &LWeight::a(&c, 1, 0)).is_err());
        }
    }

    #[test]
    fn parse_and_json_round_trip() {
        let a2 = cd("A2");
        let w = LWeight::parse(&a2, "Psi[1,0]^-1 * Y[2,3]^2 * t[1]^4").unwrap();
        assert_eq!(LWeight::parse(&a2, &w.to_string()).unwrap(), w);
        let js = serde_json::to_string(&w).unwrap();
        let back: LWeight = serde_json::from_str(&js).unwrap();
        assert_eq!(back, w);
        assert!(LWeight::parse(&a2, "Psi[3,0]").is_err());
        assert!(LWeight::parse(&a2, "Q[1,0]").is_err());
    }
}
