//! Computational kernel for triangulated compact orientable 3-manifolds.
//!
//! * [`Triangulation`] stores tetrahedra and face gluings; [`validate`],
//!   [`Skeleton`], [`canonical_form`] and [`first_homology`] inspect it.
//! * [`moves`] applies the four interior Pachner moves and the three
//!   boundary moves realised by gluing or shelling a tetrahedron.
//! * [`normal`] holds normal surface coordinates, the cell structure of a
//!   normal surface, and vertex / fundamental surface enumeration.
//! * [`subdivision`] builds a subdivision containing a normal surface in
//!   its 2-skeleton and certifies its size.
//! * [`bounds`] evaluates and compares iterated-exponential bound formulas.
//! * [`search`] connects two triangulations by a bidirectional search over
//!   the move graph.

pub mod bounds;
pub mod census;
mod dsu;
pub mod error;
pub mod homology;
pub mod isomorphism;
pub mod moves;
pub mod normal;
pub mod perm;
pub mod search;
pub mod skeleton;
pub mod subdivision;
pub mod triangulation;
pub mod validity;

pub use error::ParseError;
pub use homology::{first_betti_numbers, first_homology, FirstHomology};
pub use isomorphism::{canonical_form, find_isomorphism, CanonicalForm, Isomorphism};
pub use moves::{apply_move, enumerate_moves, Move, MoveKind, MoveRecord, Site};
pub use perm::Perm4;
pub use skeleton::Skeleton;
pub use triangulation::{Gluing, Triangulation};
pub use validity::{validate, ValidityReport};
