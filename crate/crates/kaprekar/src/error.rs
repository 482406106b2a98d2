use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("'{ch}' is not a decimal digit")]
    NonDigit { ch: char },

    #[error("input has {len} digits but the width is {width}")]
    TooWide { len: usize, width: usize },

    #[error("width {width} is too small (minimum 2)")]
    WidthTooSmall { width: usize },

    #[error("digit {digit} is out of range 0..9")]
    DigitOutOfRange { digit: u8 },

    #[error("repdigits are not part of the routine's domain")]
    RepdigitInput,

    #[error("widths differ: {left} vs {right}")]
    WidthMismatch { left: usize, right: usize },

    #[error("invalid parameter vector: {reason}")]
    InvalidParams { reason: String },

    #[error("{point} lies outside the domain of {function}: {constraint} fails")]
    OutOfDomain {
        function: String,
        point: String,
        constraint: String,
    },

    #[error("{number} is not a fixed point (maps to {image})")]
    NotAFixedPoint { number: String, image: String },

    #[error("half-width {h} is below the minimum {min} for this family")]
    HalfWidthTooSmall { h: usize, min: usize },

    #[error("{what} is not defined at width {width}")]
    UnsupportedWidth { what: String, width: usize },

    #[error("unknown equivalence set '{name}' (expected I, II or III)")]
    UnknownSet { name: String },

    #[error("unknown permutation {perm} for width {width}")]
    BadPermutation { perm: String, width: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
