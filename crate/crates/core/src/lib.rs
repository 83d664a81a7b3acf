//! Exact ℓ-weight and q-character calculus for shifted quantum affine
//! algebras.
//!
//! The crate is organised bottom-up:
//!
//! * [`qfield`]: exact scalars (rational functions of `q`) and `z`-series;
//! * [`cartan`]: finite-type Cartan data, coweights and the dominance order;
//! * [`lweight`]: the ℓ-weight group with its `Ψ`, `Y`, `A` generators;
//! * [`qchar`]: depth-truncated q-characters, closed-form families and
//!   inflation along subdiagrams;
//! * [`modrel`]: explicit module realizations, exact verification of the
//!   defining relations, Drinfeld-coproduct tensors and an R-matrix check;
//! * [`identities`]: Grothendieck-ring identity checkers built on `qchar`;
//! * [`suite`]: the regression matrix shared by the CLI and the tests.

pub mod cartan;
pub mod error;
pub mod identities;
pub mod lweight;
pub mod modrel;
pub mod qchar;
pub mod qfield;
pub mod suite;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/scalars.md")]
    mod scalars {}
    #[doc = include_str!("../../../book/src/diagrams.md")]
    mod diagrams {}
    #[doc = include_str!("../../../book/src/lweights.md")]
    mod lweights {}
    #[doc = include_str!("../../../book/src/characters.md")]
    mod characters {}
    #[doc = include_str!("../../../book/src/realizations.md")]
    mod realizations {}
    #[doc = include_str!("../../../book/src/identities.md")]
    mod identities {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/regression.md")]
    mod regression {}
}
