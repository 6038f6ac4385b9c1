//! Bitangents of smooth plane quartics and reconstruction of the quartic
//! from its 28 bitangent lines.
//!
//! The crate is organised in layers:
//!
//! * [`projective`], [`poly`], [`roots`], [`subres`], [`linalg`] — homogeneous
//!   polynomial arithmetic over ℂ, projective points/lines, a simultaneous
//!   root finder, subresultants and small least-squares / nullspace solvers.
//! * [`theta`] — the exact brute-force model of the level-2 combinatorics on
//!   F₂³×F₂³: odd theta labels, Weil pairing, twelve-tuples, Aronhold sets.
//! * [`elim`] — bivariate elimination: chart restrictions, resultants, curve
//!   intersection and smoothness certification.
//! * [`bitangent`] — the 28 bitangents of a smooth quartic with
//!   perfect-square certificates and contact points.
//! * [`cubic`] — plane-cubic geometry: classification, flexes, the
//!   chord-tangent group law, 2-torsion and the chord construction.
//! * [`detect`] — recovery of the 63 cubic twelve-tuples and the abstract
//!   level-2 structure from the unlabeled set of 28 dual points.
//! * [`reconstruct`] — nine-point completion, Aronhold seed quartic,
//!   Gauss–Newton refinement and the full end-to-end reconstruction.
//! * [`families`] — named and seeded test quartics.

pub mod bitangent;
pub mod cubic;
pub mod dd;
pub mod detect;
pub mod elim;
pub mod error;
pub mod families;
pub mod linalg;
pub mod poly;
pub mod precision;
pub mod projective;
pub mod reconstruct;
pub mod roots;
pub mod subres;
pub mod theta;

pub use error::Error;
pub use precision::Precision;

/// Shorthand used throughout the crate.
pub type C64 = num_complex::Complex<f64>;
pub type Result<T> = std::result::Result<T, Error>;
