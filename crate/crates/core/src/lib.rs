//! Local Khovanov homology for tangles and links, computed in the dotted
//! cobordism category, together with the rotation-number bookkeeping that
//! makes the homology of alternating tangles "diagonal".
//!
//! The crate is organized around five layers:
//!
//! - [`smoothing`]: oriented planar smoothings (strands and signed loops)
//!   and their rotation numbers.
//! - [`cobordism`]: dotted cobordisms between smoothings in normal form,
//!   with vertical composition and degrees.
//! - [`complex`]: bounded chain complexes of smoothings, the delooping and
//!   Gaussian-elimination reductions, diagonality checks and homology
//!   extraction for closed complexes.
//! - [`planar`]: alternating planar arc diagrams and horizontal composition
//!   of smoothings, cobordisms and complexes.
//! - [`khovanov`]: PD-code ingestion, crossing complexes, the
//!   compose-and-reduce pipeline, and the independent cube-of-resolutions
//!   computation used to cross-check it.
//!
//! All arithmetic is exact: coefficients and rotation numbers are rationals.

pub mod cobordism;
pub mod complex;
pub mod khovanov;
pub mod planar;
pub mod propcheck;
pub mod scalar;
pub mod smoothing;
pub mod util;

pub mod cli;

pub use scalar::Q;
