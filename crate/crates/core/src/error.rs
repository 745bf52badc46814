use alloc::vec::Vec;
use core::fmt;

use crate::gauss::{CrossingId, Violation};

/// What went wrong while reading a Gauss code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    /// A character that cannot start or continue an entry.
    UnexpectedChar(char),
    /// `O`/`U` not followed by a crossing label.
    MissingLabel,
    /// Crossing label not followed by `+` or `-`.
    MissingSign,
    /// Crossing label does not fit in 32 bits.
    LabelOverflow,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Syntax error at a byte offset of the input text.
    Parse {
        position: usize,
        kind: ParseErrorKind,
    },
    /// The diagram breaks one or more structural invariants.
    Invalid(Vec<Violation>),
    UnknownCrossing(CrossingId),
    /// A weighting or colouring does not fit the diagram it was paired with.
    DomainMismatch,
    /// A link component has odd total weight, so no colouring exists.
    OddComponent(usize),
    /// The weighting fails the face or component conditions.
    Inadmissible,
    /// The move's site data does not describe a move on this diagram.
    InapplicableMove,
    /// The move cuts a handle of the Carter surface that the curve crosses,
    /// so the colouring has no image on the new diagram.
    CurveBlocksMove,
    /// An exhaustive search was refused because the input is above the cap.
    CapExceeded {
        size: usize,
        cap: usize,
    },
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::MissingLabel => f.write_str("expected a crossing label"),
            ParseErrorKind::MissingSign => f.write_str("expected '+' or '-'"),
            ParseErrorKind::LabelOverflow => f.write_str("crossing label too large"),
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse { position, kind } => {
                write!(f, "syntax error at offset {position}: {kind}")
            }
            Error::Invalid(violations) => {
                f.write_str("invalid diagram: ")?;
                for (i, v) in violations.iter().enumerate() {
                    if i > 0 {
                        f.write_str("; ")?;
                    }
                    write!(f, "{v}")?;
                }
                Ok(())
            }
            Error::UnknownCrossing(c) => write!(f, "unknown crossing {c}"),
            Error::DomainMismatch => f.write_str("weighting does not match the diagram's edges"),
            Error::OddComponent(k) => write!(f, "component {k} has odd total weight"),
            Error::Inadmissible => f.write_str("weighting is not admissible"),
            Error::InapplicableMove => f.write_str("move is not applicable to this diagram"),
            Error::CurveBlocksMove => {
                f.write_str("move would cut a handle that the colouring's curve crosses")
            }
            Error::CapExceeded { size, cap } => {
                write!(
                    f,
                    "{size} crossings exceeds the exhaustive-search cap of {cap}"
                )
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
