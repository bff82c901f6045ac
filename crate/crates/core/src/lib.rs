//! Volumes of hyperbolic tetrahedra.
//!
//! The crate evaluates the dilogarithm closed forms for the volume of a
//! generic hyperbolic tetrahedron, either from its six dihedral angles or
//! from its six edge lengths, and carries an independent quadrature oracle
//! that computes the same volume by integrating the hyperbolic density over
//! the tetrahedron in the Klein model.
//!
//! # Labeling
//!
//! Faces and vertices are numbered 1..4, vertex `i` being opposite face `i`.
//! Index `k` of an angle tuple and of a length tuple refer to the same edge:
//!
//! | k | faces meeting at the edge | vertices of the edge |
//! |---|---------------------------|----------------------|
//! | 1 | 1, 2                      | 3, 4                 |
//! | 2 | 1, 3                      | 2, 4                 |
//! | 3 | 2, 3                      | 1, 4                 |
//! | 4 | 3, 4                      | 1, 2                 |
//! | 5 | 2, 4                      | 1, 3                 |
//! | 6 | 1, 4                      | 2, 3                 |
//!
//! Edges `k` and `k + 3` are opposite.

#![allow(
    clippy::excessive_precision,
    clippy::needless_range_loop,
    clippy::neg_cmp_op_on_partial_ord
)]

pub mod dilog;
pub mod gram;
pub mod oracle;
pub mod tolerance;
pub mod volume;

pub use dilog::Complex;
pub use gram::{Angles6, Lengths6, Shape};
pub use volume::{volume_from_angles, volume_from_lengths, VolumeError, VolumeResult};
