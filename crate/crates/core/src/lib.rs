//! Finite twisted groups and the correspondence between representations of a
//! twisted group `G_χ` and equivariant representations of `K = ker χ`.
//!
//! The crate is organised bottom-up:
//!
//! * [`group`]: Cayley-table groups, subgroups, quotients, exact characters
//!   into roots of unity and cyclic automorphism actions.
//! * [`twisted`]: the twisted product `g ∗ h = g · h^(χ⁻¹(g))` and its
//!   companion structure (`α_χ`, twisted inverses, twisted conjugation).
//! * [`rep`]: dense complex matrix representations, intertwiners,
//!   induction and irreducible enumeration.
//! * [`clifford`]: actions of the quotient on representations of `K`, the
//!   equivariance check, the cyclic extension algorithm and the two-sided
//!   correspondence.
//!
//! Inner loops over group elements run through [`par`], which uses rayon when
//! the `parallel` feature is enabled and plain iterators otherwise.

pub mod clifford;
pub mod error;
pub mod group;
pub mod io;
pub mod iso;
pub mod linalg;
pub mod par;
pub mod rep;
pub mod twisted;
pub mod zoo;

pub use error::{Error, Result};
pub use group::{CyclicAction, Character, FiniteGroup, QuotientData, Subgroup};
pub use rep::{MatrixRep, NumConfig};
pub use twisted::TwistedGroup;
