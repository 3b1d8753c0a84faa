//! Algebraic subspace clustering.
//!
//! Points drawn from a union of `n` linear subspaces are the common zeros of the
//! degree-`n` homogeneous polynomials that vanish on them. `varietal` fits those
//! polynomials as the null space of the Veronese-embedded data, reads each subspace
//! off the polynomial gradients, and groups the points by subspace. Unions of affine
//! subspaces are handled by prepending a homogeneous coordinate.
//!
//! ```
//! use nalgebra::DMatrix;
//! use varietal::asc::{cluster, ClusterConfig};
//!
//! // Ten points on each coordinate axis of the plane.
//! let pts = DMatrix::from_fn(2, 20, |r, c| {
//!     let t = (c % 10) as f64 - 4.5;
//!     if (c < 10) == (r == 0) { t } else { 0.0 }
//! });
//! let res = cluster(&pts, &ClusterConfig::with_subspaces(2)).unwrap();
//! assert_ne!(res.labels[0], res.labels[10]);
//! ```
//!
//! Modules, bottom-up:
//!
//! - [`polynomials`]: monomial bases, the Veronese map and its Jacobian, polynomials.
//! - [`numerics`]: rank decisions, null spaces, principal angles.
//! - [`subspaces`]: linear and affine subspaces, unions, embedding, transversality.
//! - [`asc`]: vanishing fits, per-point estimates, clustering, general position.
//! - [`formats`]: JSON file formats.

pub mod asc;
pub mod formats;
pub mod numerics;
pub mod polynomials;
pub mod subspaces;

pub use asc::{cluster, ClusterConfig, ClusteringResult};
pub use numerics::ToleranceConfig;
pub use subspaces::Arrangement;

// Runs the code blocks of the guide as doc tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    mod polynomials {}
    #[doc = include_str!("../../../book/src/vanishing.md")]
    mod vanishing {}
    #[doc = include_str!("../../../book/src/clustering.md")]
    mod clustering {}
    #[doc = include_str!("../../../book/src/affine.md")]
    mod affine {}
    #[doc = include_str!("../../../book/src/transversality.md")]
    mod transversality {}
    #[doc = include_str!("../../../book/src/general_position.md")]
    mod general_position {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
