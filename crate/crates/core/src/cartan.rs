//! Finite-type Cartan data, coweights, torus weights and the dominance order.
//!
//! Nodes are numbered `1..=rank` in Bourbaki order. The Cartan matrix uses
//! the convention `C_{ij} = 2(α_i, α_j)/(α_i, α_i)`, so that `α_j(α_i^∨) =
//! C_{ij}` and `D·C` is symmetric for `D = diag(d_1, …, d_n)` with coprime
//! entries. In type `B_n` the last node is short, `d = (2, …, 2, 1)`; in type
//! `C_n` the last node is long, `d = (1, …, 1, 2)`.
//!
//! ```
//! use shqa::cartan::CartanData;
//!
//! let b2 = CartanData::from_name("B2").unwrap();
//! assert_eq!(b2.c(1, 2), -1);
//! assert_eq!(b2.c(2, 1), -2);
//! assert_eq!(b2.d(1), 2);
//! assert_eq!((b2.dual_coxeter(), b2.lacing()), (3, 2));
//! ```

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A node index, `1..=rank`.
pub type Node = usize;

/// Dynkin type letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DynkinType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl DynkinType {
    pub const ALL: [DynkinType; 7] = [
        DynkinType::A,
        DynkinType::B,
        DynkinType::C,
        DynkinType::D,
        DynkinType::E,
        DynkinType::F,
        DynkinType::G,
    ];

    /// Whether `rank` is a valid rank for this type.
    pub fn valid_rank(self, rank: usize) -> bool {
        match self {
            DynkinType::A => rank >= 1,
            DynkinType::B | DynkinType::C => rank >= 2,
            DynkinType::D => rank >= 4,
            DynkinType::E => (6..=8).contains(&rank),
            DynkinType::F => rank == 4,
            DynkinType::G => rank == 2,
        }
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

impl FromStr for DynkinType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(DynkinType::A),
            "B" | "b" => Ok(DynkinType::B),
            "C" | "c" => Ok(DynkinType::C),
            "D" | "d" => Ok(DynkinType::D),
            "E" | "e" => Ok(DynkinType::E),
            "F" | "f" => Ok(DynkinType::F),
            "G" | "g" => Ok(DynkinType::G),
            _ => Err(Error::InvalidDynkin(format!("unknown type letter {s:?}"))),
        }
    }
}

/// Cartan data of a finite-type indecomposable root system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanData {
    #[serde(rename = "type")]
    kind: DynkinType,
    rank: usize,
    cartan: Vec<Vec<i64>>,
    d: Vec<i64>,
    dual_coxeter: i64,
    lacing: i64,
}

/// Dual Coxeter number and lacing number, frozen per type (regression-tested
/// against a root-system generation oracle).
fn frozen_numerology(kind: DynkinType, n: usize) -> (i64, i64) {
    let n = n as i64;
    match kind {
        DynkinType::A => (n + 1, 1),
        DynkinType::B => (2 * n - 1, 2),
        DynkinType::C => (n + 1, 2),
        DynkinType::D => (2 * n - 2, 1),
        DynkinType::E => (
            match n {
                6 => 12,
                7 => 18,
                _ => 30,
            },
            1,
        ),
        DynkinType::F => (9, 2),
        DynkinType::G => (4, 3),
    }
}

/// Finite-type Cartan data for `kind` and `rank`.
pub fn dynkin_data(kind: DynkinType, rank: usize) -> Result<CartanData> {
    CartanData::new(kind, rank)
}

impl CartanData {
    /// Builds the Cartan data of the given type and rank.
    pub fn new(kind: DynkinType, n: usize) -> Result<Self> {
        if !kind.valid_rank(n) {
            return Err(Error::InvalidDynkin(format!("{kind}{n} is not a finite type")));
        }
        let mut c = vec![vec![0i64; n]; n];
        for (i, row) in c.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut link = |i: usize, j: usize, cij: i64, cji: i64| {
            c[i - 1][j - 1] = cij;
            c[j - 1][i - 1] = cji;
        };
        let mut d = vec![1i64; n];
        match kind {
            DynkinType::A => (1..n).for_each(|i| link(i, i + 1, -1, -1)),
            DynkinType::B => {
                (1..n - 1).for_each(|i| link(i, i + 1, -1, -1));
                link(n - 1, n, -1, -2);
                d = vec![2; n];
                d[n - 1] = 1;
            }
            DynkinType::C => {
                (1..n - 1).for_each(|i| link(i, i + 1, -1, -1));
                link(n - 1, n, -2, -1);
                d[n - 1] = 2;
            }
            DynkinType::D => {
                (1..n - 1).for_each(|i| link(i, i + 1, -1, -1));
                link(n - 2, n, -1, -1);
            }
            DynkinType::E => {
                link(1, 3, -1, -1);
                link(2, 4, -1, -1);
                (3..n).for_each(|i| link(i, i + 1, -1, -1));
            }
            DynkinType::F => {
                link(1, 2, -1, -1);
                link(2, 3, -1, -2);
                link(3, 4, -1, -1);
                d = vec![2, 2, 1, 1];
            }
            DynkinType::G => {
                link(1, 2, -3, -1);
                d = vec![1, 3];
            }
        }
        let (dual_coxeter, lacing) = frozen_numerology(kind, n);
        Ok(Self {
            kind,
            rank: n,
            cartan: c,
            d,
            dual_coxeter,
            lacing,
        })
    }

    /// Parses names like `A2`, `B3`, `E8`.
    pub fn from_name(name: &str) -> Result<Self> {
        let name = name.trim();
        let mut chars = name.chars();
        let letter = chars
            .next()
            .ok_or_else(|| Error::InvalidDynkin("empty type name".into()))?;
        let kind: DynkinType = letter.to_string().parse()?;
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::InvalidDynkin(format!("bad rank in {name:?}")))?;
        Self::new(kind, rank)
    }

    pub fn kind(&self) -> DynkinType {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Name such as `B2`.
    pub fn name(&self) -> String {
        format!("{}{}", self.kind, self.rank)
    }

    /// All nodes `1..=rank`.
    pub fn nodes(&self) -> impl Iterator<Item = Node> {
        1..=self.rank
    }

    /// Errors unless `i` is a node of the diagram.
    pub fn check_node(&self, i: Node) -> Result<()> {
        if i >= 1 && i <= self.rank {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                node: i,
                rank: self.rank,
            })
        }
    }

    /// Cartan entry `C_{ij}` (1-based; panics outside the diagram).
    pub fn c(&self, i: Node, j: Node) -> i64 {
        self.cartan[i - 1][j - 1]
    }

    /// Symmetrizer `d_i`, so that `q_i = q^{d_i}`.
    pub fn d(&self, i: Node) -> i64 {
        self.d[i - 1]
    }

    /// Entry `(DC)_{ij} = d_i C_{ij}`.
    pub fn dc(&self, i: Node, j: Node) -> i64 {
        self.d(i) * self.c(i, j)
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn symmetrizers(&self) -> &[i64] {
        &self.d
    }

    /// Dual Coxeter number `h^∨`.
    pub fn dual_coxeter(&self) -> i64 {
        self.dual_coxeter
    }

    /// Lacing number `r^∨` (maximal number of edges between two nodes).
    pub fn lacing(&self) -> i64 {
        self.lacing
    }

    /// Nodes `j ≠ i` with `C_{ij} ≠ 0`.
    pub fn neighbors(&self, i: Node) -> Vec<Node> {
        self.nodes().filter(|&j| j != i && self.c(i, j) != 0).collect()
    }

    /// Fundamental coweight `ω_i^∨`.
    pub fn fundamental_coweight(&self, i: Node) -> Coweight {
        let mut v = vec![0; self.rank];
        v[i - 1] = 1;
        Coweight(v)
    }

    /// Simple coroot `α_j^∨ = Σ_i C_{ji} ω_i^∨`.
    pub fn simple_coroot(&self, j: Node) -> Coweight {
        Coweight(self.cartan[j - 1].clone())
    }

    /// Torus weight `[ω_i]`: exponent `d_i` at node `i`.
    pub fn omega(&self, i: Node) -> TorusWeight {
        let mut v = vec![0; self.rank];
        v[i - 1] = self.d(i);
        TorusWeight(v)
    }

    /// Torus weight `[α_j]`: exponent vector is the `j`-th column of `DC`.
    pub fn alpha(&self, j: Node) -> TorusWeight {
        TorusWeight(self.nodes().map(|i| self.dc(i, j)).collect())
    }

    /// `α_i(μ)`.
    pub fn pair_alpha_coweight(&self, mu: &Coweight, i: Node) -> Result<i64> {
        self.check_node(i)?;
        Ok(mu.0.get(i - 1).copied().unwrap_or(0))
    }

    /// Dominance order: `γ ≤ λ` iff `λ − γ` is a nonnegative integer
    /// combination of the columns of `DC`.
    pub fn weight_leq(&self, gamma: &TorusWeight, lambda: &TorusWeight) -> bool {
        let n = self.rank;
        let rhs: Vec<BigRational> = (0..n)
            .map(|i| {
                let v = lambda.0.get(i).copied().unwrap_or(0) - gamma.0.get(i).copied().unwrap_or(0);
                BigRational::from_integer(BigInt::from(v))
            })
            .collect();
        let a: Vec<Vec<BigRational>> = self
            .nodes()
            .map(|i| {
                self.nodes()
                    .map(|j| BigRational::from_integer(BigInt::from(self.dc(i, j))))
                    .collect()
            })
            .collect();
        let x = solve_exact(a, rhs).expect("DC is invertible for finite types");
        x.iter().all(|c| c.is_integer() && !c.is_negative())
    }
}

/// Solves `a·x = b` over ℚ by Gaussian elimination; `None` if singular.
pub(crate) fn solve_exact(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for k in col..n {
            a[col][k] = &a[col][k] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for k in col..n {
                    let v = &a[r][k] - &f * &a[col][k];
                    a[r][k] = v;
                }
                let v = &b[r] - &f * &b[col];
                b[r] = v;
            }
        }
    }
    debug_assert!((0..n).all(|i| a[i][i].is_one()));
    Some(b)
}

/// Integer vector over the fundamental coweights `ω_i^∨`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coweight(pub Vec<i64>);

impl Coweight {
    pub fn zero(rank: usize) -> Self {
        Self(vec![0; rank])
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        Self(
            (0..n)
                .map(|i| self.0.get(i).copied().unwrap_or(0) + other.0.get(i).copied().unwrap_or(0))
                .collect(),
        )
    }

    pub fn scale(&self, k: i64) -> Self {
        Self(self.0.iter().map(|x| x * k).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

/// Integer exponent vector `e` of a torus weight `γ = (q^{e_i})_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorusWeight(pub Vec<i64>);

impl TorusWeight {
    pub fn zero(rank: usize) -> Self {
        Self(vec![0; rank])
    }

    /// Group product (exponent sum).
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        Self(
            (0..n)
                .map(|i| self.0.get(i).copied().unwrap_or(0) + other.0.get(i).copied().unwrap_or(0))
                .collect(),
        )
    }

    /// `γ^k`.
    pub fn pow(&self, k: i64) -> Self {
        Self(self.0.iter().map(|x| x * k).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a2_data() {
        let cd = CartanData::from_name("A2").unwrap();
        assert_eq!(cd.matrix(), &[vec![2, -1], vec![-1, 2]]);
        assert_eq!(cd.symmetrizers(), &[1, 1]);
        assert_eq!((cd.dual_coxeter(), cd.lacing()), (3, 1));
    }

    #[test]
    fn invalid_types() {
        assert!(CartanData::from_name("Z9").is_err());
        assert!(CartanData::from_name("B1").is_err());
        assert!(CartanData::from_name("D3").is_err());
        assert!(CartanData::from_name("E9").is_err());
    }

    #[test]
    fn coroot_pairing_in_a3() {
        let cd = CartanData::from_name("A3").unwrap();
        // μ = ω_2^∨ − α_1^∨ − α_2^∨
        let mu = cd
            .fundamental_coweight(2)
            .add(&cd.simple_coroot(1).scale(-1))
            .add(&cd.simple_coroot(2).scale(-1));
        assert_eq!(cd.pair_alpha_coweight(&mu, 1).unwrap(), -1);
        assert_eq!(cd.pair_alpha_coweight(&mu, 2).unwrap(), 0);
        assert_eq!(cd.pair_alpha_coweight(&mu, 3).unwrap(), 1);
    }

    #[test]
    fn dominance_in_a1() {
        let cd = CartanData::from_name("A1").unwrap();
        assert!(cd.weight_leq(&TorusWeight(vec![0]), &TorusWeight(vec![2])));
        assert!(!cd.weight_leq(&TorusWeight(vec![0]), &TorusWeight(vec![1])));
        assert!(!cd.weight_leq(&TorusWeight(vec![2]), &TorusWeight(vec![0])));
    }
}
