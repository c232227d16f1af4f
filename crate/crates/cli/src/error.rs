use std::fmt;

use trikit::bounds::BoundError;
use trikit::moves::{MoveError, ReplayError};
use trikit::normal::enumerate::EnumError;
use trikit::normal::geometry::{GeometryError, PatternError};
use trikit::normal::NormalError;
use trikit::search::SearchError;
use trikit::subdivision::{RealizeError, SubdivisionError};
use trikit::ParseError;

/// Error categories, each with its own exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Category {
    /// Unreadable input: bad syntax, missing files, bad arguments.
    Parse,
    /// Well-formed input the operation does not accept.
    Precondition,
    /// A configured ceiling was reached.
    Resource,
    /// A check the command exists to perform came out negative.
    Verification,
}

impl Category {
    pub fn exit_code(self) -> i32 {
        match self {
            Category::Parse => 2,
            Category::Precondition => 3,
            Category::Resource => 4,
            Category::Verification => 5,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Category::Parse => "parse",
            Category::Precondition => "precondition",
            Category::Resource => "resource",
            Category::Verification => "verification",
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub category: Category,
    pub message: String,
}

impl CliError {
    pub fn new(category: Category, message: impl Into<String>) -> Self {
        CliError { category, message: message.into() }
    }

    pub fn parse(message: impl Into<String>) -> Self {
        CliError::new(Category::Parse, message)
    }

    pub fn precondition(message: impl Into<String>) -> Self {
        CliError::new(Category::Precondition, message)
    }

    /// Prefixes the message, keeping the category.
    pub fn context(self, what: impl fmt::Display) -> Self {
        CliError { category: self.category, message: format!("{what}: {}", self.message) }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error[{}]: {}", self.category.name(), self.message)
    }
}

macro_rules! categorise {
    ($ty:ty, |$e:ident| $cat:expr) => {
        impl From<$ty> for CliError {
            fn from($e: $ty) -> Self {
                let category = $cat;
                CliError::new(category, $e.to_string())
            }
        }
    };
}

categorise!(ParseError, |e| Category::Parse);
categorise!(MoveError, |e| Category::Precondition);
categorise!(NormalError, |e| Category::Precondition);
categorise!(PatternError, |e| Category::Precondition);
categorise!(ReplayError, |e| Category::Verification);
categorise!(EnumError, |e| match e {
    EnumError::Check(_) => Category::Verification,
    _ => Category::Resource,
});
categorise!(GeometryError, |e| match e {
    GeometryError::TooLarge(..) => Category::Resource,
    GeometryError::Inadmissible(_) => Category::Precondition,
    GeometryError::InconsistentEdge(_) => Category::Verification,
});
categorise!(SubdivisionError, |e| match e {
    SubdivisionError::TooLarge(..) => Category::Resource,
    SubdivisionError::Inadmissible(_) => Category::Precondition,
});
categorise!(SearchError, |e| match e {
    SearchError::Exhausted(_) => Category::Resource,
    SearchError::Bound(BoundError::Undecided(..)) => Category::Verification,
    _ => Category::Precondition,
});
categorise!(RealizeError, |e| match e {
    RealizeError::Budget { .. } => Category::Resource,
    RealizeError::Disconnected => Category::Precondition,
    RealizeError::TooLong { .. } | RealizeError::Mismatch => Category::Verification,
});
categorise!(BoundError, |e| match e {
    BoundError::Undecided(..) => Category::Verification,
    BoundError::UnknownBound(_) | BoundError::Arity { .. } => Category::Parse,
    BoundError::Unbound(_) => Category::Precondition,
});
