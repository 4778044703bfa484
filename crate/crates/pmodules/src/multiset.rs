//! Counted bags of alphabet objects and their canonical trace rendering.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::object::{Object, ObjectError, State};

/// Error from multiset arithmetic or parsing.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum MultisetError {
    /// Subtraction would go negative.
    #[error("cannot remove {need} x {object}: only {have} present")]
    NotContained {
        /// The object missing multiplicity.
        object: Object,
        /// Copies available.
        have: u32,
        /// Copies requested.
        need: u32,
    },
    /// A literal contained a malformed object token.
    #[error(transparent)]
    BadObject(#[from] ObjectError),
    /// A literal contained a malformed `^count` suffix.
    #[error("malformed multiplicity in token {0:?}")]
    BadCount(String),
}

/// A multiset of [`Object`]s. Zero counts are never stored, so equality is
/// plain content equality.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Multiset {
    counts: BTreeMap<Object, u32>,
}

impl Multiset {
    /// The empty multiset.
    pub fn new() -> Multiset {
        Multiset::default()
    }

    /// True if no objects are present.
    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Number of distinct objects.
    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    /// Total number of objects, multiplicities included.
    pub fn total(&self) -> u64 {
        self.counts.values().map(|&c| u64::from(c)).sum()
    }

    /// Multiplicity of `obj` (0 if absent).
    pub fn count(&self, obj: &Object) -> u32 {
        self.counts.get(obj).copied().unwrap_or(0)
    }

    /// Adds `n` copies of `obj`.
    pub fn insert(&mut self, obj: Object, n: u32) {
        if n > 0 {
            *self.counts.entry(obj).or_insert(0) += n;
        }
    }

    /// Iterates `(object, multiplicity)` in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&Object, u32)> {
        self.counts.iter().map(|(o, &c)| (o, c))
    }

    /// Multiset inclusion: every multiplicity in `needle` fits in `self`.
    pub fn contains(&self, needle: &Multiset) -> bool {
        needle.iter().all(|(obj, need)| self.count(obj) >= need)
    }

    /// How many whole copies of `needle` fit in `self`.
    /// Returns `u32::MAX` when `needle` is empty.
    pub fn fit_count(&self, needle: &Multiset) -> u32 {
        needle
            .iter()
            .map(|(obj, need)| self.count(obj) / need)
            .min()
            .unwrap_or(u32::MAX)
    }

    /// Pointwise sum.
    pub fn add(&self, other: &Multiset) -> Multiset {
        let mut out = self.clone();
        out.absorb(other);
        out
    }

    /// In-place pointwise sum.
    pub fn absorb(&mut self, other: &Multiset) {
        for (obj, n) in other.iter() {
            self.insert(*obj, n);
        }
    }

    /// Pointwise difference; fails if `other ⊄ self`.
    pub fn subtract(&self, other: &Multiset) -> Result<Multiset, MultisetError> {
        let mut out = self.clone();
        out.remove(other)?;
        Ok(out)
    }

    /// In-place pointwise difference; fails (without modifying `self`) if
    /// `other ⊄ self`.
    pub fn remove(&mut self, other: &Multiset) -> Result<(), MultisetError> {
        for (obj, need) in other.iter() {
            let have = self.count(obj);
            if have < need {
                return Err(MultisetError::NotContained {
                    object: *obj,
                    have,
                    need,
                });
            }
        }
        for (obj, need) in other.iter() {
            let have = self.counts.get_mut(obj).unwrap();
            *have -= need;
            if *have == 0 {
                self.counts.remove(obj);
            }
        }
        Ok(())
    }

    /// All multiplicities scaled by `n`.
    pub fn scaled(&self, n: u32) -> Multiset {
        let mut out = Multiset::new();
        for (obj, c) in self.iter() {
            out.insert(*obj, c * n);
        }
        out
    }
}

impl FromIterator<Object> for Multiset {
    fn from_iter<T: IntoIterator<Item = Object>>(iter: T) -> Multiset {
        let mut out = Multiset::new();
        for obj in iter {
            out.insert(obj, 1);
        }
        out
    }
}

impl FromStr for Multiset {
    type Err = MultisetError;

    /// Parses a whitespace-separated object list, e.g. `"a k u_6^2"`.
    /// The empty string is the empty multiset.
    fn from_str(s: &str) -> Result<Multiset, MultisetError> {
        let mut out = Multiset::new();
        for token in s.split_whitespace() {
            let (obj, count) = match token.split_once('^') {
                Some((head, exp)) => {
                    let count: u32 = exp
                        .parse()
                        .map_err(|_| MultisetError::BadCount(token.into()))?;
                    if count == 0 {
                        return Err(MultisetError::BadCount(token.into()));
                    }
                    (head.parse::<Object>()?, count)
                }
                None => (token.parse::<Object>()?, 1),
            };
            out.insert(obj, count);
        }
        Ok(out)
    }
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (obj, count) in self.iter() {
            write!(f, "{obj}")?;
            if count > 1 {
                write!(f, "^{count}")?;
            }
        }
        Ok(())
    }
}

/// Renders a cell entry the way the solution-trace tables print it:
/// `"s_2 aku_6^2"`. Objects are sorted by base symbol, then by index, with
/// multiplicities > 1 as caret exponents. An empty multiset renders as just
/// the state.
pub fn render_canonical(state: State, m: &Multiset) -> String {
    if m.is_empty() {
        state.to_string()
    } else {
        format!("{state} {m}")
    }
}
