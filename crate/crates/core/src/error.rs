use alloc::string::String;
use core::fmt;

/// Errors raised by the ordering engine and the convolution numerics.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An operation that needs at least one token received none.
    EmptyDocument,
    /// A box sequence handed to a profile or divider was empty.
    EmptyInput,
    /// A token box violates `x1 <= x2`, `y1 <= y2` or has a non-finite coordinate.
    InvalidBox {
        index: usize,
        reason: &'static str,
    },
    /// Page width or height is not a positive finite number.
    InvalidPage,
    /// A box lies outside the page with its slack margin.
    OutOfPage {
        index: usize,
    },
    /// Token `source_index` labels are not exactly `0..K`.
    BadSourceIndices,
    LengthMismatch {
        expected: usize,
        found: usize,
    },
    NotAPermutation,
    InvalidParams(&'static str),
    MalformedTree(String),
    ShapeMismatch(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyDocument => f.write_str("empty document"),
            Error::EmptyInput => f.write_str("empty box sequence"),
            Error::InvalidBox { index, reason } => write!(f, "token {index}: {reason}"),
            Error::InvalidPage => f.write_str("page width and height must be positive and finite"),
            Error::OutOfPage { index } => write!(f, "token {index} lies outside the page bounds"),
            Error::BadSourceIndices => f.write_str("source indices must be exactly 0..K with no duplicates"),
            Error::LengthMismatch { expected, found } => {
                write!(f, "length mismatch: expected {expected}, found {found}")
            }
            Error::NotAPermutation => f.write_str("order is not a permutation"),
            Error::InvalidParams(msg) => write!(f, "invalid parameters: {msg}"),
            Error::MalformedTree(msg) => write!(f, "malformed xy tree: {msg}"),
            Error::ShapeMismatch(msg) => write!(f, "shape mismatch: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
