//! A finite-model laboratory for left near-rings and their multiplicative
//! derivations.
//!
//! Structures are Cayley tables ([`algebra`]); [`enumerate`] generates every
//! near-ring on the small groups, [`derivation`] finds every multiplicative
//! derivation, and [`theorems`] checks commutativity statements over the
//! result, with [`identity`] supplying the hypothesis identities as data.

pub mod algebra;
pub mod catalog;
pub mod derivation;
pub mod enumerate;
pub mod fixtures;
pub mod identity;
pub mod report;
pub mod theorems;

pub use algebra::{validate_near_ring, CayleyTable, Element, NearRing, StructureError};
pub use derivation::{enumerate_mult_derivations, is_multiplicative_derivation, DerivationMap};
pub use enumerate::{enumerate_groups, enumerate_nearrings, GroupTable};
pub use identity::{parse_identity, Identity};
pub use theorems::{check_theorem, registry, SpecId, Status, TheoremSpec, Verdict};
