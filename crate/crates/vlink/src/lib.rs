//! Command-line front end, file formats and property drivers for
//! [`vlink_core`].

pub mod cli;
pub mod enumerate;
pub mod harness;
pub mod random;
pub mod weights;
