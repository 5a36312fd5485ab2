//! Chessboard complexes and the degree theory of equivariant maps out of
//! them, together with exact-rational verification of colored Tverberg
//! partitions.
//!
//! * [`simplicial`]: complexes, joins, skeleta, chains and boundary matrices.
//! * [`chessboard`]: `Delta_{m,n}`, group actions, the row projection.
//! * [`homology`]: Smith normal form and integral homology.
//! * [`degree`]: orientations, mapping degrees, equivariant map audits.
//! * [`geometry`]: colored point sets, rainbow partitions, LP certificates.

pub mod chessboard;
pub mod degree;
pub mod error;
pub mod geometry;
pub mod homology;
pub mod simplicial;

pub use error::{Error, Result};
