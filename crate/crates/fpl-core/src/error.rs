use std::fmt;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// `0/0` passed to a rational constructor.
    ZeroOverZero,
    /// Modular inverse requested for a residue divisible by the prime.
    NotInvertible,
    /// Farey difference of two fractions with equal denominators.
    ZeroDenominator,
    /// An interval input cannot decide a floor, sign or comparison.
    InsufficientPrecision(String),
    /// Operation requires a vertex of the graph.
    NotAVertex(String),
    /// Operation requires an adjacent pair of vertices.
    NotAdjacent(String),
    /// `decompose` called on a member of the vertex set.
    InX(String),
    /// Enumeration called on a rational outside the vertex set.
    NotInX(String),
    /// More convergents requested than a finite expansion has.
    CountExceedsLength { len: usize, requested: usize },
    /// Fin signs disagree with the stored partial numerators.
    SignMismatch { index: usize },
    /// A stored expansion does not describe a well directed path.
    NotWellDirected(String),
    /// Max-+1 selection left nothing; the input set was corrupt.
    EmptyAfterFilter,
    /// Basis decomposition produced non-integral coefficients.
    NonIntegral,
    /// Modulus construction with a composite or zero `p`, or `l = 0`.
    BadModulus(String),
    /// Unparsable input literal.
    InvalidLiteral(String),
    /// Structurally invalid expansion data.
    InvalidExpansion(String),
    /// Anything the operation cannot represent (e.g. expanding infinity).
    Unsupported(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroOverZero => write!(f, "0/0 is not a rational number"),
            Error::NotInvertible => write!(f, "residue is not invertible modulo p"),
            Error::ZeroDenominator => write!(f, "farey difference of equal denominators"),
            Error::InsufficientPrecision(what) => {
                write!(f, "interval too wide to decide {what}")
            }
            Error::NotAVertex(v) => write!(f, "{v} is not a vertex"),
            Error::NotAdjacent(e) => write!(f, "{e} are not adjacent"),
            Error::InX(x) => write!(f, "{x} is in the vertex set; nothing to decompose"),
            Error::NotInX(x) => write!(f, "{x} is not in the vertex set"),
            Error::CountExceedsLength { len, requested } => {
                write!(f, "requested {requested} convergents of a length-{len} expansion")
            }
            Error::SignMismatch { index } => {
                write!(f, "fin sign at index {index} contradicts the stored term")
            }
            Error::NotWellDirected(why) => write!(f, "path is not well directed: {why}"),
            Error::EmptyAfterFilter => write!(f, "max-+1 filter removed every expansion"),
            Error::NonIntegral => write!(f, "input is not in the convergent basis lattice"),
            Error::BadModulus(why) => write!(f, "invalid modulus: {why}"),
            Error::InvalidLiteral(s) => write!(f, "cannot parse {s:?}"),
            Error::InvalidExpansion(why) => write!(f, "invalid expansion: {why}"),
            Error::Unsupported(what) => write!(f, "unsupported: {what}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
