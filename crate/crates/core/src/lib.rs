//! Exact-arithmetic workbench for umbrella Hopf algebras.
//!
//! The crate builds generators-and-relations presentations of the algebras
//! `UM(r,2s)`, proves the PBW property mechanically by resolving every overlap
//! ambiguity of the associated reduction system, and verifies the Hopf data:
//! coproduct axioms, coradical-filtration orders, primitive spaces,
//! crossed-product cocycle identities and the Nakayama automorphism. All
//! arithmetic is over arbitrary-precision rationals; every verdict is an
//! exact zero test.

pub mod freealg;
pub mod liealg;
pub mod rewrite;

pub mod hopf;
pub mod report;
pub mod umbrella;

pub use freealg::{GenId, GeneratorSet, NcPoly, Scalar, Word};

/// Default seed for every randomized check in the crate; fixed so repeated
/// runs produce identical reports.
pub const DEFAULT_SEED: u64 = 0x5eed_0001;
