//! Exact workbench for two-term relative tilting over bound quiver algebras.
//!
//! The crate is layered bottom-up:
//!
//! - [`fp`]: dense exact linear algebra over a prime field.
//! - [`algebra`]: bound quiver algebras with a confluent normal-form path
//!   basis and a closed multiplication table.
//! - [`rep`]: finite-dimensional right modules as quiver representations,
//!   with Hom/Ext, minimal presentations, the translate τ, decomposition,
//!   and approximations.
//! - [`atlas`]: the indecomposable atlas (complete for representation-finite
//!   algebras) with AR arrows and τ-orbits.
//! - [`twoterm`]: two-term complexes of projectives, homotopy Homs, cones,
//!   and the functor down to (module, support) pairs.
//! - [`rtilt`]: relative tilting proper, completions from both sides,
//!   mutation, exchange graphs.
//! - [`torsion`]: the abelian side, torsion classes, the cotorsion pair
//!   conditions, order and bijection verifiers, the left completion.
//! - [`geom`]: type-A polygon models and the bridge back to the two-term
//!   engine.
//! - [`io`]: file formats and canonical dumps.

pub mod algebra;
pub mod atlas;
pub mod error;
pub mod fp;
pub mod geom;
pub mod io;
pub mod rep;
pub mod rtilt;
pub mod torsion;
pub mod twoterm;

pub use error::{Error, Result};
