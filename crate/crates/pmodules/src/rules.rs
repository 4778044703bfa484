//! Generic rewriting rules and their per-cell instantiation.
//!
//! Templates are written (and dumped) in a one-line notation close to the
//! usual presentation of such rule programs:
//!
//! ```text
//! 5.1: s5 a n_j ->min s5 d_j (f_i)|j
//! ```
//!
//! reads "rule 5.1: in state s5, consume `a n_j`, apply once, move to state
//! s5 producing `d_j`, and send message `f_i` to cell j". The subscript `i`
//! always denotes the owning cell's own ID; `j` and `k` are index variables
//! that instantiation expands over all other cell IDs.

use std::fmt;

use thiserror::Error;

use crate::multiset::Multiset;
use crate::object::{Base, CellId, Object, State};

/// How often an applicable rule fires in one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Fire exactly once.
    Min,
    /// Fire as many times as the left-hand side fits.
    Max,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Min => write!(f, "min"),
            Mode::Max => write!(f, "max"),
        }
    }
}

/// A rule's number in its program listing, e.g. `5.3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RuleId {
    /// The state group the rule is listed under.
    pub group: u8,
    /// Position within the group, 1-based.
    pub ordinal: u8,
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.group, self.ordinal)
    }
}

/// An index slot in a rule template.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatIndex {
    /// `i`: the owning cell's ID.
    SelfCell,
    /// `j`: expanded over all other cell IDs.
    J,
    /// `k`: expanded over all other cell IDs, paired with `j`, `k ≠ j`.
    K,
    /// A literal cell ID.
    Lit(CellId),
}

impl fmt::Display for PatIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatIndex::SelfCell => write!(f, "i"),
            PatIndex::J => write!(f, "j"),
            PatIndex::K => write!(f, "k"),
            PatIndex::Lit(c) => write!(f, "{c}"),
        }
    }
}

/// An object pattern: base symbol plus optional index slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatObject {
    /// Base symbol.
    pub base: Base,
    /// Index slot; `None` for the plain marker families.
    pub index: Option<PatIndex>,
}

impl fmt::Display for PatObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Some(idx) => write!(f, "{}_{}", self.base, idx),
            None => write!(f, "{}", self.base),
        }
    }
}

/// A multiset pattern. Entries keep their listing order for dumping;
/// repeated objects merge into one entry with a multiplicity.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Pattern {
    entries: Vec<(PatObject, u32)>,
}

impl Pattern {
    fn push(&mut self, obj: PatObject) {
        if let Some(entry) = self.entries.iter_mut().find(|(o, _)| *o == obj) {
            entry.1 += 1;
        } else {
            self.entries.push((obj, 1));
        }
    }

    /// `(pattern object, multiplicity)` entries in listing order.
    pub fn entries(&self) -> &[(PatObject, u32)] {
        &self.entries
    }

    /// True if no objects are present.
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn uses(&self, idx: PatIndex) -> bool {
        self.entries.iter().any(|(o, _)| o.index == Some(idx))
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (obj, count) in &self.entries {
            for _ in 0..*count {
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{obj}")?;
                first = false;
            }
        }
        Ok(())
    }
}

/// Where a rule's message goes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatTransfer {
    /// No message.
    None,
    /// Replicated to every neighbor.
    Repl,
    /// To one specific cell.
    To(PatIndex),
}

/// Message destination of an instantiated [`Rule`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transfer {
    /// No message.
    None,
    /// One copy to every neighbor.
    Broadcast,
    /// To the given cell — silently discarded if it is not a neighbor.
    To(CellId),
}

/// Error from parsing or validating a rule template line.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum RuleParseError {
    /// Overall line shape is wrong.
    #[error("rule {0:?}: {1}")]
    Malformed(String, String),
    /// An object token did not parse.
    #[error("rule {0:?}: bad object token {1:?}")]
    BadObject(String, String),
    /// `k` used without `j`.
    #[error("rule {0}: index k appears without j")]
    KWithoutJ(RuleId),
    /// A message was given without a transfer target or vice versa.
    #[error("rule {0}: message and transfer target must appear together")]
    MessageTransferMismatch(RuleId),
    /// Left-hand side may not be empty.
    #[error("rule {0}: empty left-hand side")]
    EmptyLhs(RuleId),
}

/// A generic rewriting rule with index variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleTemplate {
    /// Listing number.
    pub id: RuleId,
    /// State the rule applies in.
    pub from: State,
    /// Consumed pattern.
    pub lhs: Pattern,
    /// min / max firing mode.
    pub mode: Mode,
    /// Target state.
    pub to: State,
    /// Produced pattern.
    pub rhs: Pattern,
    /// Message pattern (empty iff `transfer` is `None`).
    pub message: Pattern,
    /// Message destination.
    pub transfer: PatTransfer,
}

fn parse_state(token: &str, line: &str) -> Result<State, RuleParseError> {
    token
        .strip_prefix('s')
        .and_then(|d| d.parse::<u8>().ok())
        .map(State)
        .ok_or_else(|| {
            RuleParseError::Malformed(line.into(), format!("expected state token, got {token:?}"))
        })
}

fn parse_pat_object(token: &str, line: &str) -> Result<PatObject, RuleParseError> {
    let bad = || RuleParseError::BadObject(line.into(), token.into());
    let mut chars = token.chars();
    let letter = chars.next().ok_or_else(bad)?;
    let base = Base::from_letter(letter).ok_or_else(bad)?;
    let rest = chars.as_str();
    let idx_text = rest.strip_prefix('_').unwrap_or(rest);
    let index = match idx_text {
        "" => None,
        "i" => Some(PatIndex::SelfCell),
        "j" => Some(PatIndex::J),
        "k" => Some(PatIndex::K),
        digits => {
            let cell: CellId = digits.parse().map_err(|_| bad())?;
            if cell == 0 {
                return Err(bad());
            }
            Some(PatIndex::Lit(cell))
        }
    };
    if base.is_indexed() != index.is_some() {
        return Err(bad());
    }
    Ok(PatObject { base, index })
}

impl RuleTemplate {
    /// Parses one template line, e.g.
    /// `"5.2: s5 d_j y_j ->min s12 a c_j w w (v)|repl"`.
    pub fn parse(line: &str) -> Result<RuleTemplate, RuleParseError> {
        let malformed =
            |msg: &str| RuleParseError::Malformed(line.into(), msg.into());
        let (id_text, body) = line
            .split_once(':')
            .ok_or_else(|| malformed("missing ':' after rule number"))?;
        let (group, ordinal) = id_text
            .trim()
            .split_once('.')
            .ok_or_else(|| malformed("rule number must look like 5.3"))?;
        let id = RuleId {
            group: group
                .parse()
                .map_err(|_| malformed("bad rule group number"))?,
            ordinal: ordinal
                .parse()
                .map_err(|_| malformed("bad rule ordinal"))?,
        };

        // Split off the "(message)|target" tail, if any.
        let (head, message, transfer) = match body.find('(') {
            Some(pos) => {
                let (head, tail) = body.split_at(pos);
                let (inner, target) = tail
                    .strip_prefix('(')
                    .and_then(|t| t.split_once(")|"))
                    .ok_or_else(|| malformed("message must look like (u_j)|repl"))?;
                let mut message = Pattern::default();
                for token in inner.split_whitespace() {
                    message.push(parse_pat_object(token, line)?);
                }
                if message.is_empty() {
                    return Err(RuleParseError::MessageTransferMismatch(id));
                }
                let transfer = match target.trim() {
                    "repl" => PatTransfer::Repl,
                    "i" => PatTransfer::To(PatIndex::SelfCell),
                    "j" => PatTransfer::To(PatIndex::J),
                    "k" => PatTransfer::To(PatIndex::K),
                    digits => {
                        let cell: CellId = digits
                            .parse()
                            .map_err(|_| malformed("bad transfer target"))?;
                        if cell == 0 {
                            return Err(malformed("bad transfer target"));
                        }
                        PatTransfer::To(PatIndex::Lit(cell))
                    }
                };
                (head, message, transfer)
            }
            None => (body, Pattern::default(), PatTransfer::None),
        };

        let mut tokens = head.split_whitespace();
        let from = parse_state(
            tokens.next().ok_or_else(|| malformed("missing from-state"))?,
            line,
        )?;
        let mut lhs = Pattern::default();
        let mode = loop {
            match tokens.next() {
                Some("->min") => break Mode::Min,
                Some("->max") => break Mode::Max,
                Some(token) => lhs.push(parse_pat_object(token, line)?),
                None => return Err(malformed("missing ->min / ->max arrow")),
            }
        };
        let to = parse_state(
            tokens.next().ok_or_else(|| malformed("missing to-state"))?,
            line,
        )?;
        let mut rhs = Pattern::default();
        for token in tokens {
            rhs.push(parse_pat_object(token, line)?);
        }

        let template = RuleTemplate {
            id,
            from,
            lhs,
            mode,
            to,
            rhs,
            message,
            transfer,
        };
        template.validate()?;
        Ok(template)
    }

    fn validate(&self) -> Result<(), RuleParseError> {
        if self.lhs.is_empty() {
            return Err(RuleParseError::EmptyLhs(self.id));
        }
        if self.message.is_empty() != matches!(self.transfer, PatTransfer::None) {
            return Err(RuleParseError::MessageTransferMismatch(self.id));
        }
        if self.uses_index(PatIndex::K) && !self.uses_index(PatIndex::J) {
            return Err(RuleParseError::KWithoutJ(self.id));
        }
        Ok(())
    }

    fn uses_index(&self, idx: PatIndex) -> bool {
        self.lhs.uses(idx)
            || self.rhs.uses(idx)
            || self.message.uses(idx)
            || self.transfer == PatTransfer::To(idx)
    }

    /// Reconstructs the template in the notation accepted by [`RuleTemplate::parse`].
    pub fn dump_line(&self) -> String {
        let mut out = format!("{}: s{} {} ->{} s{}", self.id, self.from.0, self.lhs, self.mode, self.to.0);
        if !self.rhs.is_empty() {
            out.push(' ');
            out.push_str(&self.rhs.to_string());
        }
        match self.transfer {
            PatTransfer::None => {}
            PatTransfer::Repl => {
                out.push_str(&format!(" ({})|repl", self.message));
            }
            PatTransfer::To(idx) => {
                out.push_str(&format!(" ({})|{}", self.message, idx));
            }
        }
        out
    }

    /// Expands this template into the concrete rules owned by cell `owner`
    /// in a module of `n` cells, in ascending index order.
    ///
    /// `i` resolves to `owner`. A template using `j` yields one rule per
    /// `j ∈ [1,n] \ {owner}`; a template using both `j` and `k` yields one
    /// rule per ordered pair `(j,k)`, `j ≠ k`, both ≠ `owner`, in ascending
    /// lexicographic order. The indexed object families never carry the
    /// owner's own index in these programs, so owner instances are not
    /// generated.
    pub fn instantiate(&self, owner: CellId, n: u32) -> Vec<Rule> {
        assert!(owner >= 1 && owner <= n, "owner {owner} out of range 1..={n}");
        let has_j = self.uses_index(PatIndex::J);
        let has_k = self.uses_index(PatIndex::K);
        let mut rules = Vec::new();
        if !has_j {
            rules.push(self.resolve(owner, n, None, None));
        } else if !has_k {
            for j in 1..=n {
                if j != owner {
                    rules.push(self.resolve(owner, n, Some(j), None));
                }
            }
        } else {
            for j in 1..=n {
                if j == owner {
                    continue;
                }
                for k in 1..=n {
                    if k != owner && k != j {
                        rules.push(self.resolve(owner, n, Some(j), Some(k)));
                    }
                }
            }
        }
        rules
    }

    fn resolve(&self, owner: CellId, n: u32, j: Option<CellId>, k: Option<CellId>) -> Rule {
        let cell_of = |idx: PatIndex| -> CellId {
            let cell = match idx {
                PatIndex::SelfCell => owner,
                PatIndex::J => j.expect("j variable resolved"),
                PatIndex::K => k.expect("k variable resolved"),
                PatIndex::Lit(c) => c,
            };
            assert!(cell >= 1 && cell <= n, "rule {} resolves index {cell} outside 1..={n}", self.id);
            cell
        };
        let resolve_pattern = |pattern: &Pattern| -> Multiset {
            let mut out = Multiset::new();
            for (pat, count) in pattern.entries() {
                let obj = match pat.index {
                    None => Object::plain(pat.base),
                    Some(idx) => Object::indexed(pat.base, cell_of(idx)),
                }
                .expect("pattern validated at parse time");
                out.insert(obj, *count);
            }
            out
        };
        Rule {
            id: self.id,
            owner,
            from: self.from,
            lhs: resolve_pattern(&self.lhs),
            mode: self.mode,
            to: self.to,
            rhs: resolve_pattern(&self.rhs),
            message: resolve_pattern(&self.message),
            transfer: match self.transfer {
                PatTransfer::None => Transfer::None,
                PatTransfer::Repl => Transfer::Broadcast,
                PatTransfer::To(idx) => Transfer::To(cell_of(idx)),
            },
            j,
            k,
        }
    }
}

/// A fully instantiated rule, owned by one cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    /// Listing number of the originating template.
    pub id: RuleId,
    /// The cell this rule belongs to.
    pub owner: CellId,
    /// State the rule applies in.
    pub from: State,
    /// Consumed multiset.
    pub lhs: Multiset,
    /// min / max firing mode.
    pub mode: Mode,
    /// Target state.
    pub to: State,
    /// Produced multiset.
    pub rhs: Multiset,
    /// Message multiset.
    pub message: Multiset,
    /// Message destination.
    pub transfer: Transfer,
    /// The value `j` was instantiated with, if the template used it.
    pub j: Option<CellId>,
    /// The value `k` was instantiated with, if the template used it.
    pub k: Option<CellId>,
}

fn spaced(m: &Multiset) -> String {
    let mut tokens = Vec::new();
    for (obj, count) in m.iter() {
        for _ in 0..count {
            tokens.push(obj.to_string());
        }
    }
    tokens.join(" ")
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: s{} {} ->{} s{}",
            self.id,
            self.from.0,
            spaced(&self.lhs),
            self.mode,
            self.to.0
        )?;
        if !self.rhs.is_empty() {
            write!(f, " {}", spaced(&self.rhs))?;
        }
        match self.transfer {
            Transfer::None => Ok(()),
            Transfer::Broadcast => write!(f, " ({})|repl", spaced(&self.message)),
            Transfer::To(c) => write!(f, " ({})|{}", spaced(&self.message), c),
        }
    }
}

/// Order in which a template's instances appear in the scan list. The
/// rule listings leave this open; ascending is the reproducible
/// default, descending exists to show results do not depend on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InstanceOrder {
    /// Ascending cell IDs (lexicographic for `(j,k)` pairs).
    #[default]
    Ascending,
    /// Descending cell IDs.
    Descending,
}

/// Concatenates the per-template instantiations in template order. The
/// resulting total order is the weak-priority order the engine scans.
pub fn build_rule_order(
    templates: &[RuleTemplate],
    owner: CellId,
    n: u32,
    order: InstanceOrder,
) -> Vec<Rule> {
    let mut rules = Vec::new();
    for template in templates {
        let mut instances = template.instantiate(owner, n);
        if order == InstanceOrder::Descending {
            instances.reverse();
        }
        rules.extend(instances);
    }
    rules
}
