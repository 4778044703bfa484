//! Structural digraphs and the symmetric search digraph derived from them.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::object::CellId;

/// Error from constructing a [`Digraph`].
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum DigraphError {
    /// A module needs at least one cell.
    #[error("cell count must be at least 1")]
    Empty,
    /// Arc endpoint outside `[1, n]`.
    #[error("arc ({0}, {1}) has an endpoint outside 1..={2}")]
    OutOfRange(CellId, CellId, u32),
    /// Reflexive arcs are not allowed.
    #[error("reflexive arc ({0}, {0})")]
    SelfLoop(CellId),
    /// Each structural arc may be listed once.
    #[error("duplicate arc ({0}, {1})")]
    DuplicateArc(CellId, CellId),
    /// The structural relation may not contain both (u,v) and (v,u).
    #[error("symmetric pair: both ({0}, {1}) and ({1}, {0}) listed")]
    SymmetricPair(CellId, CellId),
}

/// A structural digraph: `n` cells and the parent-child arc relation,
/// without reflexive or symmetric arcs. Every arc is a duplex channel, so
/// the derived neighbor sets (and the search digraph the path programs and
/// oracles operate on) are the symmetric closure of the arcs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    n: u32,
    arcs: Vec<(CellId, CellId)>,
    neighbors: Vec<BTreeSet<CellId>>,
}

impl Digraph {
    /// Builds and validates a digraph from structural arcs.
    pub fn new(n: u32, arcs: &[(CellId, CellId)]) -> Result<Digraph, DigraphError> {
        if n == 0 {
            return Err(DigraphError::Empty);
        }
        let mut seen: BTreeSet<(CellId, CellId)> = BTreeSet::new();
        let mut neighbors = vec![BTreeSet::new(); n as usize];
        for &(u, v) in arcs {
            if u < 1 || u > n || v < 1 || v > n {
                return Err(DigraphError::OutOfRange(u, v, n));
            }
            if u == v {
                return Err(DigraphError::SelfLoop(u));
            }
            if seen.contains(&(u, v)) {
                return Err(DigraphError::DuplicateArc(u, v));
            }
            if seen.contains(&(v, u)) {
                return Err(DigraphError::SymmetricPair(v, u));
            }
            seen.insert((u, v));
            neighbors[(u - 1) as usize].insert(v);
            neighbors[(v - 1) as usize].insert(u);
        }
        Ok(Digraph {
            n,
            arcs: arcs.to_vec(),
            neighbors,
        })
    }

    /// Number of cells.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of structural arcs, `m = |δ|`.
    pub fn arc_count(&self) -> u32 {
        self.arcs.len() as u32
    }

    /// The structural arcs in input order.
    pub fn arcs(&self) -> &[(CellId, CellId)] {
        &self.arcs
    }

    /// The symmetric neighbor set `δ(i) ∪ δ⁻¹(i)`.
    pub fn neighbors(&self, cell: CellId) -> &BTreeSet<CellId> {
        &self.neighbors[(cell - 1) as usize]
    }

    /// True if `i` and `j` share a duplex channel.
    pub fn are_neighbors(&self, i: CellId, j: CellId) -> bool {
        self.neighbors(i).contains(&j)
    }

    /// The search digraph arcs (symmetric closure of the structural arcs).
    pub fn search_arcs(&self) -> impl Iterator<Item = (CellId, CellId)> + '_ {
        self.arcs
            .iter()
            .flat_map(|&(u, v)| [(u, v), (v, u)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neighbors_are_symmetric_closure() {
        let g = Digraph::new(3, &[(1, 2), (3, 2)]).unwrap();
        assert_eq!(g.neighbors(1).iter().copied().collect::<Vec<_>>(), [2]);
        assert_eq!(g.neighbors(2).iter().copied().collect::<Vec<_>>(), [1, 3]);
        assert!(g.are_neighbors(2, 3) && g.are_neighbors(3, 2));
        let mut search: Vec<_> = g.search_arcs().collect();
        search.sort();
        assert_eq!(search, [(1, 2), (2, 1), (2, 3), (3, 2)]);
    }

    #[test]
    fn construction_rejects_bad_arcs() {
        assert_eq!(Digraph::new(0, &[]).unwrap_err(), DigraphError::Empty);
        assert_eq!(
            Digraph::new(2, &[(1, 3)]).unwrap_err(),
            DigraphError::OutOfRange(1, 3, 2)
        );
        assert_eq!(
            Digraph::new(2, &[(2, 2)]).unwrap_err(),
            DigraphError::SelfLoop(2)
        );
        assert_eq!(
            Digraph::new(2, &[(1, 2), (1, 2)]).unwrap_err(),
            DigraphError::DuplicateArc(1, 2)
        );
        assert_eq!(
            Digraph::new(2, &[(1, 2), (2, 1)]).unwrap_err(),
            DigraphError::SymmetricPair(1, 2)
        );
    }
}
