//! Alphabet objects: a lowercase base symbol with an optional cell-ID
//! subscript, e.g. `a`, `k`, `u_6`, `n_2`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// 1-based cell identifier. Cell `σ_i` has id `i`.
pub type CellId = u32;

/// Cell state identifier, `s_0` .. `s_13` in the path programs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct State(pub u8);

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s_{}", self.0)
    }
}

/// Base symbols of the closed object alphabet.
///
/// Declaration order is alphabetical, so the derived `Ord` is the canonical
/// rendering order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[allow(missing_docs)]
pub enum Base {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
    K,
    M,
    N,
    P,
    Q,
    R,
    T,
    U,
    V,
    W,
    X,
    Y,
    Z,
}

impl Base {
    /// All bases, in alphabetical order.
    pub const ALL: [Base; 21] = [
        Base::A,
        Base::B,
        Base::C,
        Base::D,
        Base::E,
        Base::F,
        Base::G,
        Base::H,
        Base::K,
        Base::M,
        Base::N,
        Base::P,
        Base::Q,
        Base::R,
        Base::T,
        Base::U,
        Base::V,
        Base::W,
        Base::X,
        Base::Y,
        Base::Z,
    ];

    /// Whether this family carries a cell-ID subscript (`u_j`, `n_j`, ...).
    /// The remaining bases (`a`, `k`, `v`, `w`, `z`) are plain markers.
    pub fn is_indexed(self) -> bool {
        !matches!(self, Base::A | Base::K | Base::V | Base::W | Base::Z)
    }

    /// The lowercase letter for this base.
    pub fn letter(self) -> char {
        match self {
            Base::A => 'a',
            Base::B => 'b',
            Base::C => 'c',
            Base::D => 'd',
            Base::E => 'e',
            Base::F => 'f',
            Base::G => 'g',
            Base::H => 'h',
            Base::K => 'k',
            Base::M => 'm',
            Base::N => 'n',
            Base::P => 'p',
            Base::Q => 'q',
            Base::R => 'r',
            Base::T => 't',
            Base::U => 'u',
            Base::V => 'v',
            Base::W => 'w',
            Base::X => 'x',
            Base::Y => 'y',
            Base::Z => 'z',
        }
    }

    /// Inverse of [`Base::letter`].
    pub fn from_letter(c: char) -> Option<Base> {
        Base::ALL.iter().copied().find(|b| b.letter() == c)
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Error raised when constructing or parsing an [`Object`].
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ObjectError {
    /// The letter is not part of the alphabet.
    #[error("unknown object symbol {0:?}")]
    UnknownBase(char),
    /// A plain base was given a subscript.
    #[error("object family '{0}' does not take a cell index")]
    UnexpectedIndex(Base),
    /// An indexed base was constructed without a subscript.
    #[error("object family '{0}' requires a cell index")]
    MissingIndex(Base),
    /// Cell IDs are 1-based.
    #[error("cell index 0 is invalid (cell IDs are 1-based)")]
    ZeroIndex,
    /// Unparseable object literal.
    #[error("malformed object literal {0:?}")]
    Malformed(String),
}

/// One alphabet symbol, possibly subscripted with a cell ID.
///
/// The alphabet is closed: `Object` can only be built through the checked
/// constructors, so a base/index combination outside the programs' object
/// set is a construction-time error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Object {
    base: Base,
    index: Option<CellId>,
}

impl Object {
    /// A plain marker object (`a`, `k`, `v`, `w`, `z`).
    pub fn plain(base: Base) -> Result<Object, ObjectError> {
        if base.is_indexed() {
            return Err(ObjectError::MissingIndex(base));
        }
        Ok(Object { base, index: None })
    }

    /// An indexed object (`u_6`, `n_2`, ...). `cell` must be ≥ 1.
    pub fn indexed(base: Base, cell: CellId) -> Result<Object, ObjectError> {
        if !base.is_indexed() {
            return Err(ObjectError::UnexpectedIndex(base));
        }
        if cell == 0 {
            return Err(ObjectError::ZeroIndex);
        }
        Ok(Object {
            base,
            index: Some(cell),
        })
    }

    /// The base symbol.
    pub fn base(&self) -> Base {
        self.base
    }

    /// The cell-ID subscript, if this is an indexed family.
    pub fn index(&self) -> Option<CellId> {
        self.index
    }
}

impl fmt::Display for Object {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Some(i) => write!(f, "{}_{}", self.base, i),
            None => write!(f, "{}", self.base),
        }
    }
}

impl FromStr for Object {
    type Err = ObjectError;

    /// Parses `"a"`, `"u_6"` or `"u6"`.
    fn from_str(s: &str) -> Result<Object, ObjectError> {
        let mut chars = s.chars();
        let letter = chars.next().ok_or_else(|| ObjectError::Malformed(s.into()))?;
        let base = Base::from_letter(letter).ok_or(ObjectError::UnknownBase(letter))?;
        let rest = chars.as_str();
        let digits = rest.strip_prefix('_').unwrap_or(rest);
        if digits.is_empty() {
            Object::plain(base)
        } else {
            let cell: CellId = digits
                .parse()
                .map_err(|_| ObjectError::Malformed(s.into()))?;
            Object::indexed(base, cell)
        }
    }
}
