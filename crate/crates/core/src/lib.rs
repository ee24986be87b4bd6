//! Free semigroupoid algebras of finite directed graphs.
//!
//! The crate covers the combinatorics of the graph (strong components,
//! trees, fruit trees, alternating number), a length-truncated Fock space
//! model of the left regular representation, derivations of the tensor
//! algebra into the free semigroupoid algebra, and first cohomology in
//! graded form.

pub mod error;
pub mod graph;
pub mod linalg;
pub mod fock;
pub mod fourier;
pub mod path;
pub mod derivation;
pub mod cohomology;

pub use error::{Error, Result};
