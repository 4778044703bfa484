//! Graph file ingestion.
//!
//! Format: a header line `n m`, then exactly `m` lines `u v`, one structural
//! arc each (1-based). Lines starting with `#` and blank lines are ignored.
//! The file carries the structural relation only; the symmetric search
//! digraph is always derived, never stored.

use pmodules::{CellId, Digraph};
use thiserror::Error;

/// Parse diagnostics carry the 1-based line number they were raised on.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GraphFileError {
    /// Missing or malformed `n m` header.
    #[error("line {line}: malformed header {text:?}, expected \"n m\"")]
    MalformedHeader {
        /// Line number.
        line: usize,
        /// Offending text.
        text: String,
    },
    /// The file ended before the header.
    #[error("empty graph file")]
    Empty,
    /// Cell count must be positive.
    #[error("line {line}: cell count must be at least 1")]
    NoCells {
        /// Line number.
        line: usize,
    },
    /// An arc line did not parse as two integers.
    #[error("line {line}: malformed arc {text:?}, expected \"u v\"")]
    MalformedArc {
        /// Line number.
        line: usize,
        /// Offending text.
        text: String,
    },
    /// An arc endpoint is outside `[1, n]`.
    #[error("line {line}: arc ({u}, {v}) has an endpoint outside 1..={n}")]
    OutOfRange {
        /// Line number.
        line: usize,
        /// Tail cell.
        u: CellId,
        /// Head cell.
        v: CellId,
        /// Cell count.
        n: u32,
    },
    /// Reflexive arcs are not allowed.
    #[error("line {line}: reflexive arc ({u}, {u})")]
    SelfLoop {
        /// Line number.
        line: usize,
        /// The cell.
        u: CellId,
    },
    /// The same arc was listed twice.
    #[error("line {line}: duplicate arc ({u}, {v})")]
    DuplicateArc {
        /// Line number.
        line: usize,
        /// Tail cell.
        u: CellId,
        /// Head cell.
        v: CellId,
    },
    /// Both directions of a pair were listed; the structural relation must
    /// be asymmetric (each arc is already a duplex channel).
    #[error("line {line}: symmetric pair: ({u}, {v}) conflicts with earlier ({v}, {u})")]
    SymmetricPair {
        /// Line number.
        line: usize,
        /// Tail cell.
        u: CellId,
        /// Head cell.
        v: CellId,
    },
    /// Fewer arc lines than the header promised.
    #[error("expected {expected} arcs, found {found}")]
    MissingArcs {
        /// Arcs promised by the header.
        expected: u32,
        /// Arcs actually present.
        found: u32,
    },
    /// More arc lines than the header promised.
    #[error("line {line}: unexpected content after {expected} arcs")]
    ExtraContent {
        /// Line number.
        line: usize,
        /// Arcs promised by the header.
        expected: u32,
    },
}

/// Parses a graph file into a validated [`Digraph`].
pub fn parse_graph(text: &str) -> Result<Digraph, GraphFileError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines.next().ok_or(GraphFileError::Empty)?;
    let mut parts = header.split_whitespace();
    let (n, m) = match (
        parts.next().and_then(|p| p.parse::<u32>().ok()),
        parts.next().and_then(|p| p.parse::<u32>().ok()),
        parts.next(),
    ) {
        (Some(n), Some(m), None) => (n, m),
        _ => {
            return Err(GraphFileError::MalformedHeader {
                line: header_line,
                text: header.to_string(),
            })
        }
    };
    if n == 0 {
        return Err(GraphFileError::NoCells { line: header_line });
    }

    let mut arcs: Vec<(CellId, CellId)> = Vec::with_capacity(m as usize);
    for (line, text) in lines {
        if arcs.len() as u32 == m {
            return Err(GraphFileError::ExtraContent { line, expected: m });
        }
        let mut parts = text.split_whitespace();
        let (u, v) = match (
            parts.next().and_then(|p| p.parse::<CellId>().ok()),
            parts.next().and_then(|p| p.parse::<CellId>().ok()),
            parts.next(),
        ) {
            (Some(u), Some(v), None) => (u, v),
            _ => {
                return Err(GraphFileError::MalformedArc {
                    line,
                    text: text.to_string(),
                })
            }
        };
        if u < 1 || u > n || v < 1 || v > n {
            return Err(GraphFileError::OutOfRange { line, u, v, n });
        }
        if u == v {
            return Err(GraphFileError::SelfLoop { line, u });
        }
        if arcs.contains(&(u, v)) {
            return Err(GraphFileError::DuplicateArc { line, u, v });
        }
        if arcs.contains(&(v, u)) {
            return Err(GraphFileError::SymmetricPair { line, u, v });
        }
        arcs.push((u, v));
    }
    if arcs.len() as u32 != m {
        return Err(GraphFileError::MissingArcs {
            expected: m,
            found: arcs.len() as u32,
        });
    }
    Ok(Digraph::new(n, &arcs).expect("checked arc by arc"))
}

/// Writes a digraph back out in the graph file format (for replaying fuzz
/// failures).
pub fn format_graph(g: &Digraph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.arc_count());
    for (u, v) in g.arcs() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SIX_CELL: &str = "6 9\n1 2\n1 4\n2 3\n2 4\n3 4\n3 5\n3 6\n4 5\n5 6\n";

    #[test]
    fn parses_the_six_cell_module() {
        let g = parse_graph(SIX_CELL).unwrap();
        assert_eq!(g.n(), 6);
        assert_eq!(g.arc_count(), 9);
        let sets: Vec<Vec<u32>> = (1..=6)
            .map(|i| g.neighbors(i).iter().copied().collect())
            .collect();
        assert_eq!(
            sets,
            vec![
                vec![2, 4],
                vec![1, 3, 4],
                vec![2, 4, 5, 6],
                vec![1, 2, 3, 5],
                vec![3, 4, 6],
                vec![3, 5],
            ]
        );
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let g = parse_graph("# module\n\n2 1\n# arc\n1 2\n\n").unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.arc_count(), 1);
    }

    #[test]
    fn diagnostics_carry_line_numbers() {
        assert_eq!(
            parse_graph("2 1\n1 2\n1 2\n").unwrap_err(),
            GraphFileError::ExtraContent {
                line: 3,
                expected: 1
            }
        );
        assert_eq!(
            parse_graph("2 2\n1 2\n1 2\n").unwrap_err(),
            GraphFileError::DuplicateArc { line: 3, u: 1, v: 2 }
        );
        assert_eq!(
            parse_graph("2 2\n1 2\n2 1\n").unwrap_err(),
            GraphFileError::SymmetricPair { line: 3, u: 2, v: 1 }
        );
        assert_eq!(
            parse_graph("2 1\n2 2\n").unwrap_err(),
            GraphFileError::SelfLoop { line: 2, u: 2 }
        );
        assert_eq!(
            parse_graph("2 1\n1 3\n").unwrap_err(),
            GraphFileError::OutOfRange {
                line: 2,
                u: 1,
                v: 3,
                n: 2
            }
        );
        assert_eq!(
            parse_graph("2 x\n").unwrap_err(),
            GraphFileError::MalformedHeader {
                line: 1,
                text: "2 x".into()
            }
        );
        assert_eq!(
            parse_graph("# nothing\n").unwrap_err(),
            GraphFileError::Empty
        );
        assert_eq!(
            parse_graph("3 2\n1 2\n").unwrap_err(),
            GraphFileError::MissingArcs {
                expected: 2,
                found: 1
            }
        );
        assert_eq!(
            parse_graph("2 1\n1 2 3\n").unwrap_err(),
            GraphFileError::MalformedArc {
                line: 2,
                text: "1 2 3".into()
            }
        );
    }

    #[test]
    fn format_round_trips() {
        let g = parse_graph(SIX_CELL).unwrap();
        assert_eq!(format_graph(&g), SIX_CELL);
        assert_eq!(parse_graph(&format_graph(&g)).unwrap(), g);
    }
}
