//! Combinatorics of virtual link diagrams given as signed Gauss codes.
//!
//! * [`gauss`]: diagrams, parsing, subdiagrams, crossing changes
//! * [`carter`]: ribbon graphs, faces and Carter genus
//! * [`parity`]: curve weightings, colourings, crossing parity and projection
//! * [`cover`]: the double cover picked out by a weighting, and lifts
//! * [`moves`]: Reidemeister moves with colouring transport and parity axioms
//! * [`invariants`]: bridge count, warping degree, ascending number,
//!   minimal-genus subdiagrams
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod carter;
pub mod cover;
mod dsu;
pub mod error;
pub mod gauss;
pub mod gf2;
pub mod invariants;
pub mod moves;
pub mod parity;

pub use error::{Error, ParseErrorKind, Result};
pub use gauss::{parse, CrossingId, Diagram, EdgeId, GaussEntry, Passage, Position, Sign};
