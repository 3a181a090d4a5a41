//! Symbolic calculus for the endoscopic classification of metaplectic groups.
//!
//! The crate works entirely at the level of index combinatorics and root
//! numbers: parameters are multisets of `φ ⊠ r(b)` over an abstract catalog of
//! constituents, component groups are F₂-vector spaces, and every sign is an
//! exact fourth root of unity.

pub mod bits;
pub mod catalog;
pub mod components;
pub mod epsilon;
pub mod error;
pub mod fixtures;
pub mod global;
pub mod mu4;
pub mod packets;
pub mod parameters;

pub use bits::{Bits, F2Map};
pub use catalog::{Catalog, Constituent, Duality, GlobalCuspidal, QuadraticCharacter};
pub use components::{ComponentGroup, EndoscopicDatum, Splitting};
pub use error::{Error, Result};
pub use mu4::{Mu4, Sign};
pub use packets::{CoefficientVector, Member, PacketModel};
pub use parameters::{ArthurParameter, Bucket, HalfInt, LParameter, Summand};
