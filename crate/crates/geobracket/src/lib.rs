//! Closed geodesics on hyperbolic surfaces with boundary: geodesic lengths,
//! intersection and self-intersection structure, and the Goldman Lie bracket
//! of free homotopy classes, computed through explicit universal-cover
//! constructions over Schottky groups.
//!
//! The crate is organized bottom-up:
//!
//! * [`words`] — exact free-group machinery (reduction, cyclic canonical
//!   forms, conjugate enumeration). All conjugacy-class identity in the crate
//!   is decided here, never by floating point.
//! * [`hyperbolic`] — upper half-plane geometry: isometries, geodesics,
//!   distances, angles, reflections, and the rotation/length identities for
//!   products of hyperbolic transformations.
//! * [`dd`] — a small compensated double-double kernel used to fold long
//!   words into matrices without catastrophic cancellation.
//! * [`surface`] — concrete surfaces as purely hyperbolic Schottky groups,
//!   validated by ping-pong, plus the word-to-matrix homomorphism.
//! * [`engine`] — from classes to geometry: closed geodesics, lift
//!   enumeration, crossings with signs, angles and parameters.
//! * [`bracket`] — the Goldman bracket as a formal integer sum over
//!   canonical conjugacy classes, with simplicity tests.
//! * [`verify`] — independent oracles (boundary-linking counts, radius
//!   stability) and the symmetry predicates for canceling terms.

pub mod bracket;
pub mod dd;
pub mod engine;
mod error;
pub mod hyperbolic;
pub mod surface;
pub mod verify;
pub mod words;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
