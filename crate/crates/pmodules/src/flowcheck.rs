//! Classical network-flow oracles and validation of distributed solutions.
//!
//! The oracles run depth-first-search augmenting paths with unit
//! capacities on the symmetric search digraph: the plain and resuming
//! edge-disjoint variants, the node-splitting node-disjoint variant, and a
//! brute-force minimum node cut for cross-checking via Menger's theorem.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::digraph::Digraph;
use crate::engine::Configuration;
use crate::object::{Base, CellId};

/// Error from the oracles and solution readers.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum FlowcheckError {
    /// Paths between a cell and itself are not defined.
    #[error("source and target must differ")]
    SameSourceTarget,
    /// Endpoint outside the module.
    #[error("cell {0} outside 1..={1}")]
    CellOutOfRange(CellId, u32),
    /// The exponential cut enumeration is capped.
    #[error("brute-force node cut supports at most {max} cells, got {n}")]
    TooManyCells {
        /// Requested size.
        n: u32,
        /// Supported maximum.
        max: u32,
    },
    /// A `p_j` / `c_j` marker must occur exactly once.
    #[error("cell {cell}: marker {object} has multiplicity {count}, expected 1")]
    DuplicateMarker {
        /// Holding cell.
        cell: CellId,
        /// The offending object.
        object: String,
        /// Its multiplicity.
        count: u32,
    },
    /// Path reconstruction ran out of successors before the target.
    #[error("cell {0} has no unused flow-successor mid-path")]
    DeadEnd(CellId),
    /// Path reconstruction looped.
    #[error("flow contains a cycle")]
    CyclicFlow,
    /// Some flow arcs belong to no source-to-target path.
    #[error("{0} flow arcs not covered by any source-to-target path")]
    UncoveredArcs(usize),
    /// Extracted path count disagrees with the recorded `k`.
    #[error("expected {expected} paths, extracted {found}")]
    PathCountMismatch {
        /// `k` recorded in the solution.
        expected: u32,
        /// Paths actually reconstructed.
        found: u32,
    },
}

/// A disjoint-paths solution in the distributed representation: per cell,
/// the set `P_i` of flow-predecessors and `C_i` of flow-successors, plus
/// the path count `k = |C_s| = |P_t|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowSolution {
    /// Path count.
    pub k: u32,
    /// `P_i`, indexed by cell ID − 1.
    pub preds: Vec<BTreeSet<CellId>>,
    /// `C_i`, indexed by cell ID − 1.
    pub succs: Vec<BTreeSet<CellId>>,
}

impl FlowSolution {
    /// The zero-flow solution.
    pub fn empty(n: u32) -> FlowSolution {
        FlowSolution {
            k: 0,
            preds: vec![BTreeSet::new(); n as usize],
            succs: vec![BTreeSet::new(); n as usize],
        }
    }

    /// Number of cells.
    pub fn n(&self) -> u32 {
        self.preds.len() as u32
    }

    /// `P_i` for cell `i` (1-based).
    pub fn preds_of(&self, cell: CellId) -> &BTreeSet<CellId> {
        &self.preds[(cell - 1) as usize]
    }

    /// `C_i` for cell `i` (1-based).
    pub fn succs_of(&self, cell: CellId) -> &BTreeSet<CellId> {
        &self.succs[(cell - 1) as usize]
    }

    fn insert_arc(&mut self, u: CellId, v: CellId) {
        self.succs[(u - 1) as usize].insert(v);
        self.preds[(v - 1) as usize].insert(u);
    }
}

fn check_endpoints(n: u32, s: CellId, t: CellId) -> Result<(), FlowcheckError> {
    for cell in [s, t] {
        if cell < 1 || cell > n {
            return Err(FlowcheckError::CellOutOfRange(cell, n));
        }
    }
    if s == t {
        return Err(FlowcheckError::SameSourceTarget);
    }
    Ok(())
}

/// A unit-capacity directed network with DFS augmenting-path search.
/// The residual structure is kept as the set of arcs currently carrying
/// flow: an arc is traversable forward when free, and backwards (canceling
/// one unit, the pushback) when carrying flow.
struct UnitFlowNet {
    arcs: BTreeSet<(u32, u32)>,
    /// Per node, ascending: every node connected by an arc in either
    /// direction (the candidate set for residual traversal).
    candidates: Vec<Vec<u32>>,
}

impl UnitFlowNet {
    fn new(n: u32, arc_list: impl IntoIterator<Item = (u32, u32)>) -> UnitFlowNet {
        let arcs: BTreeSet<(u32, u32)> = arc_list.into_iter().collect();
        let mut candidates = vec![BTreeSet::new(); n as usize + 1];
        for &(u, v) in &arcs {
            candidates[u as usize].insert(v);
            candidates[v as usize].insert(u);
        }
        UnitFlowNet {
            arcs,
            candidates: candidates
                .into_iter()
                .map(|set| set.into_iter().collect())
                .collect(),
        }
    }

    /// DFS for one augmenting path from `u` to `t`; flips flow along the
    /// found suffix while unwinding. Visited marks persist per stage.
    fn dfs(
        &self,
        u: u32,
        t: u32,
        visited: &mut [bool],
        flow: &mut BTreeSet<(u32, u32)>,
    ) -> bool {
        if u == t {
            return true;
        }
        visited[u as usize] = true;
        for &w in &self.candidates[u as usize] {
            if visited[w as usize] {
                continue;
            }
            if flow.contains(&(w, u)) {
                // Flow pushback: traverse the flow arc in reverse.
                if self.dfs(w, t, visited, flow) {
                    flow.remove(&(w, u));
                    return true;
                }
            } else if self.arcs.contains(&(u, w))
                && !flow.contains(&(u, w))
                && self.dfs(w, t, visited, flow)
            {
                flow.insert((u, w));
                return true;
            }
        }
        false
    }

    /// Stagewise maximum set of arc-disjoint `s`–`t` paths. With `resume`,
    /// each stage scans the source arcs starting right after the previous
    /// stage's succeeding arc instead of from the beginning.
    fn max_disjoint(&self, s: u32, t: u32, resume: bool) -> (u32, BTreeSet<(u32, u32)>) {
        let source_arcs: Vec<u32> = self.candidates[s as usize]
            .iter()
            .copied()
            .filter(|&v| self.arcs.contains(&(s, v)))
            .collect();
        let mut flow = BTreeSet::new();
        let mut k = 0;
        let mut next_start = 0;
        loop {
            let mut visited = vec![false; self.candidates.len()];
            visited[s as usize] = true;
            let mut advanced = false;
            let start = if resume { next_start } else { 0 };
            for (idx, &v) in source_arcs.iter().enumerate().skip(start) {
                if flow.contains(&(s, v)) || visited[v as usize] {
                    continue;
                }
                if self.dfs(v, t, &mut visited, &mut flow) {
                    flow.insert((s, v));
                    k += 1;
                    next_start = idx + 1;
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
        (k, flow)
    }
}

/// Finds one directed cycle in the flow-arc digraph, if any.
fn find_cycle(n: u32, flow: &BTreeSet<(u32, u32)>) -> Option<Vec<(u32, u32)>> {
    let mut succ = vec![Vec::new(); n as usize + 1];
    for &(u, v) in flow {
        succ[u as usize].push(v);
    }
    let mut color = vec![0u8; n as usize + 1]; // 0 new, 1 on stack, 2 done
    for start in 1..=n {
        if color[start as usize] != 0 {
            continue;
        }
        let mut stack: Vec<(u32, usize)> = vec![(start, 0)];
        let mut path = vec![start];
        color[start as usize] = 1;
        while let Some(&(u, child)) = stack.last() {
            if child < succ[u as usize].len() {
                stack.last_mut().unwrap().1 += 1;
                let v = succ[u as usize][child];
                if color[v as usize] == 1 {
                    let pos = path.iter().position(|&x| x == v).unwrap();
                    let mut arcs: Vec<(u32, u32)> =
                        path[pos..].windows(2).map(|w| (w[0], w[1])).collect();
                    arcs.push((u, v));
                    return Some(arcs);
                }
                if color[v as usize] == 0 {
                    color[v as usize] = 1;
                    stack.push((v, 0));
                    path.push(v);
                }
            } else {
                color[u as usize] = 2;
                stack.pop();
                path.pop();
            }
        }
    }
    None
}

/// Cancels circular flow. Augmenting along simple residual paths can leave
/// circulation tangent to the real paths; dropping it changes no cell's
/// in/out balance and not the flow value, and leaves every remaining arc on
/// an `s`–`t` path.
fn remove_cycles(n: u32, flow: &mut BTreeSet<(u32, u32)>) {
    while let Some(cycle) = find_cycle(n, flow) {
        for arc in cycle {
            flow.remove(&arc);
        }
    }
}

fn solution_from_arcs(n: u32, k: u32, arcs: &BTreeSet<(u32, u32)>) -> FlowSolution {
    let mut sol = FlowSolution::empty(n);
    sol.k = k;
    for &(u, v) in arcs {
        sol.insert_arc(u, v);
    }
    sol
}

/// Cancels circular flow recorded in a solution, returning the pruned
/// solution and the number of arcs removed.
///
/// Augmenting-path algorithms — the distributed programs and plain
/// Ford-Fulkerson alike — can leave conservation-neutral circulation in the
/// flow: rewiring a path during a pushback stage may rotate the replaced
/// arcs into a directed cycle. Circulation carries no path information and
/// no value; cancelling it is the first step of standard flow
/// decomposition, and never touches the source or target (the programs
/// keep `P_s` and `C_t` empty), so `k` is preserved.
pub fn prune_circulation(sol: &FlowSolution) -> (FlowSolution, usize) {
    let n = sol.n();
    // Only properly paired records take part; mis-paired markers stay put
    // so the validators still see them.
    let mut paired: BTreeSet<(u32, u32)> = BTreeSet::new();
    for i in 1..=n {
        for &j in sol.succs_of(i) {
            if j >= 1 && j <= n && sol.preds_of(j).contains(&i) {
                paired.insert((i, j));
            }
        }
    }
    let kept = {
        let mut arcs = paired.clone();
        remove_cycles(n, &mut arcs);
        arcs
    };
    let mut out = sol.clone();
    let mut removed = 0;
    for &(u, v) in paired.difference(&kept) {
        out.succs[(u - 1) as usize].remove(&v);
        out.preds[(v - 1) as usize].remove(&u);
        removed += 1;
    }
    (out, removed)
}

/// Maximum number of edge-disjoint `s`–`t` paths in the search digraph,
/// with the flow encoded as predecessor/successor sets. With `resume` the
/// source-arc scan of each stage skips everything up to and including the
/// previous stage's succeeding arc; the result is the same.
pub fn max_edge_disjoint(
    g: &Digraph,
    s: CellId,
    t: CellId,
    resume: bool,
) -> Result<FlowSolution, FlowcheckError> {
    check_endpoints(g.n(), s, t)?;
    let net = UnitFlowNet::new(g.n(), g.search_arcs());
    let (k, mut flow) = net.max_disjoint(s, t, resume);
    remove_cycles(g.n(), &mut flow);
    Ok(solution_from_arcs(g.n(), k, &flow))
}

/// Maximum number of node-disjoint `s`–`t` paths, by node splitting: every
/// interior node `v` becomes an entry/exit pair joined by one unit arc, the
/// edge-disjoint oracle runs on the split digraph, and the result maps back
/// to original node IDs. `s` and `t` are never split.
pub fn max_node_disjoint(g: &Digraph, s: CellId, t: CellId) -> Result<FlowSolution, FlowcheckError> {
    check_endpoints(g.n(), s, t)?;
    let n = g.n();
    let exit_of = |v: u32| if v == s || v == t { v } else { v + n };
    let mut arcs: Vec<(u32, u32)> = Vec::new();
    for v in 1..=n {
        if v != s && v != t {
            arcs.push((v, v + n));
        }
    }
    for (u, v) in g.search_arcs() {
        arcs.push((exit_of(u), v));
    }
    let net = UnitFlowNet::new(2 * n, arcs);
    let (k, flow) = net.max_disjoint(s, t, false);

    let mut mapped = BTreeSet::new();
    for (x, y) in flow {
        if y > n {
            continue; // internal entry→exit arc
        }
        let u = if x > n { x - n } else { x };
        mapped.insert((u, y));
    }
    remove_cycles(n, &mut mapped);
    Ok(solution_from_arcs(n, k, &mapped))
}

/// Result of [`min_node_cut_bruteforce`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinNodeCut {
    /// Size of the smallest interior node set disconnecting `s` from `t`.
    Size(u32),
    /// `s` and `t` share a search arc, so no node set disconnects them.
    Unbounded,
}

fn reachable_avoiding(g: &Digraph, s: CellId, t: CellId, removed: &BTreeSet<CellId>) -> bool {
    let mut seen = BTreeSet::from([s]);
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        if u == t {
            return true;
        }
        for &v in g.neighbors(u) {
            if !removed.contains(&v) && seen.insert(v) {
                queue.push_back(v);
            }
        }
    }
    false
}

/// Smallest `S ⊆ V \ {s,t}` whose removal disconnects `s` from `t` in the
/// search digraph, by subset enumeration (`n ≤ 12`).
pub fn min_node_cut_bruteforce(
    g: &Digraph,
    s: CellId,
    t: CellId,
) -> Result<MinNodeCut, FlowcheckError> {
    check_endpoints(g.n(), s, t)?;
    if g.n() > 12 {
        return Err(FlowcheckError::TooManyCells { n: g.n(), max: 12 });
    }
    if g.are_neighbors(s, t) {
        return Ok(MinNodeCut::Unbounded);
    }
    let interior: Vec<CellId> = (1..=g.n()).filter(|&v| v != s && v != t).collect();
    let mut masks: Vec<u32> = (0..(1u32 << interior.len())).collect();
    masks.sort_by_key(|m| m.count_ones());
    for mask in masks {
        let removed: BTreeSet<CellId> = interior
            .iter()
            .enumerate()
            .filter(|(bit, _)| mask & (1 << bit) != 0)
            .map(|(_, &v)| v)
            .collect();
        if !reachable_avoiding(g, s, t, &removed) {
            return Ok(MinNodeCut::Size(mask.count_ones()));
        }
    }
    unreachable!("removing every interior cell disconnects non-adjacent cells")
}

/// The constraint family a violation belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintFamily {
    /// Pred/succ set symmetry, irreflexivity, and neighbor adjacency.
    FlowArcs,
    /// `P_s = ∅`, `C_t = ∅`.
    SourceTarget,
    /// `|C_i| = |P_i|` at intermediate cells, `|C_s| = |P_t| = k`.
    Conservation,
    /// `|C_i| = |P_i| ≤ 1` at intermediate cells.
    NodeDisjoint,
    /// Successor chains must reach the target; no cycles or dead ends.
    OnlyPaths,
}

impl fmt::Display for ConstraintFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ConstraintFamily::FlowArcs => "flow-arcs",
            ConstraintFamily::SourceTarget => "source-target",
            ConstraintFamily::Conservation => "conservation",
            ConstraintFamily::NodeDisjoint => "node-disjoint",
            ConstraintFamily::OnlyPaths => "only-paths",
        };
        write!(f, "{name}")
    }
}

/// One violated constraint; serializes as
/// `"<family>: cell <id>: <detail>"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Constraint family.
    pub family: ConstraintFamily,
    /// The cell the violation is attributed to.
    pub cell: CellId,
    /// Human-readable specifics.
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: cell {}: {}", self.family, self.cell, self.detail)
    }
}

fn violation(family: ConstraintFamily, cell: CellId, detail: String) -> Violation {
    Violation {
        family,
        cell,
        detail,
    }
}

fn validate_common(sol: &FlowSolution, g: &Digraph, s: CellId, t: CellId) -> Vec<Violation> {
    use ConstraintFamily::*;
    let mut out = Vec::new();
    for i in 1..=g.n() {
        if sol.succs_of(i).contains(&i) {
            out.push(violation(FlowArcs, i, format!("c_{i} ∈ C_{i}")));
        }
        if sol.preds_of(i).contains(&i) {
            out.push(violation(FlowArcs, i, format!("p_{i} ∈ P_{i}")));
        }
        for &j in sol.succs_of(i) {
            if j < 1 || j > g.n() {
                out.push(violation(FlowArcs, i, format!("c_{j} names no cell")));
                continue;
            }
            if !sol.preds_of(j).contains(&i) {
                out.push(violation(
                    FlowArcs,
                    i,
                    format!("c_{j} ∈ C_{i} without p_{i} ∈ P_{j}"),
                ));
            }
            if !g.are_neighbors(i, j) {
                out.push(violation(
                    FlowArcs,
                    i,
                    format!("flow arc ({i}, {j}) joins non-neighbors"),
                ));
            }
        }
        for &j in sol.preds_of(i) {
            if j >= 1 && j <= g.n() && !sol.succs_of(j).contains(&i) {
                out.push(violation(
                    FlowArcs,
                    i,
                    format!("p_{j} ∈ P_{i} without c_{i} ∈ C_{j}"),
                ));
            }
        }
    }
    if !sol.preds_of(s).is_empty() {
        out.push(violation(SourceTarget, s, "P_s must be empty".into()));
    }
    if !sol.succs_of(t).is_empty() {
        out.push(violation(SourceTarget, t, "C_t must be empty".into()));
    }
    let (ks, kt) = (sol.succs_of(s).len(), sol.preds_of(t).len());
    if ks != kt {
        out.push(violation(
            Conservation,
            s,
            format!("|C_s| = {ks} but |P_t| = {kt}"),
        ));
    }
    if sol.k as usize != ks {
        out.push(violation(
            Conservation,
            s,
            format!("recorded k = {} but |C_s| = {ks}", sol.k),
        ));
    }
    out
}

/// Checks an edge-disjoint solution against its output contract. Empty
/// result means valid; violations are data, not errors.
pub fn validate_edge(sol: &FlowSolution, g: &Digraph, s: CellId, t: CellId) -> Vec<Violation> {
    use ConstraintFamily::*;
    let mut out = validate_common(sol, g, s, t);
    for i in 1..=g.n() {
        if i != s && i != t && sol.succs_of(i).len() != sol.preds_of(i).len() {
            out.push(violation(
                Conservation,
                i,
                format!(
                    "|C_{i}| = {} but |P_{i}| = {}",
                    sol.succs_of(i).len(),
                    sol.preds_of(i).len()
                ),
            ));
        }
    }
    // Only-paths: iterate the set-valued successor map n−1 times from {s},
    // absorbing at the target; only t may survive. Cycles keep the frontier
    // alive, dead ends are excluded by the conservation family.
    let mut frontier = BTreeSet::from([s]);
    for _ in 0..g.n().saturating_sub(1) {
        let mut next = BTreeSet::new();
        for &i in &frontier {
            if i == t {
                next.insert(t);
            } else {
                next.extend(sol.succs_of(i).iter().copied().filter(|&v| v >= 1 && v <= g.n()));
            }
        }
        frontier = next;
    }
    for i in frontier {
        if i != t {
            out.push(violation(
                OnlyPaths,
                i,
                "successor chain from the source has not reached the target".into(),
            ));
        }
    }
    out
}

/// Checks a node-disjoint solution: the edge constraints tightened to
/// `|C_i| = |P_i| ≤ 1` and a single-successor chain check from every cell.
pub fn validate_node(sol: &FlowSolution, g: &Digraph, s: CellId, t: CellId) -> Vec<Violation> {
    use ConstraintFamily::*;
    let mut out = validate_common(sol, g, s, t);
    for i in 1..=g.n() {
        if i != s && i != t {
            let (ci, pi) = (sol.succs_of(i).len(), sol.preds_of(i).len());
            if ci != pi || ci > 1 {
                out.push(violation(
                    NodeDisjoint,
                    i,
                    format!("|C_{i}| = {ci}, |P_{i}| = {pi}, need |C_i| = |P_i| ≤ 1"),
                ));
            }
        }
    }
    // S(i) maps s, t, and flowless cells to t, and a flow cell to its
    // single successor; n−1 applications must land on t from every cell.
    let step = |i: CellId| -> CellId {
        if i == s || i == t || sol.succs_of(i).is_empty() {
            t
        } else {
            *sol.succs_of(i).iter().next().expect("nonempty")
        }
    };
    for start in 1..=g.n() {
        let mut cur = start;
        for _ in 0..g.n().saturating_sub(1) {
            cur = step(cur);
        }
        if cur != t {
            out.push(violation(
                OnlyPaths,
                start,
                format!("successor chain stuck at cell {cur} instead of the target"),
            ));
        }
    }
    out
}

/// Reconstructs an explicit path set from the predecessor/successor
/// representation: `k` arc-disjoint `s`–`t` paths covering every flow arc
/// exactly once. At a cell with several unconsumed successors, walks take
/// the smallest ID first. Where the flow weaves a cycle through cells the
/// walks pass, a walk revisits those cells; leftover circulation is spliced
/// into a walk at a shared cell. Circulation touching no walk covers no
/// path and is an error.
pub fn extract_paths(
    sol: &FlowSolution,
    s: CellId,
    t: CellId,
) -> Result<Vec<Vec<CellId>>, FlowcheckError> {
    check_endpoints(sol.n(), s, t)?;
    let mut remaining = sol.succs.clone();
    let total_arcs: usize = remaining.iter().map(BTreeSet::len).sum();
    let mut paths = Vec::new();
    while let Some(first) = remaining[(s - 1) as usize].pop_first() {
        let mut path = vec![s, first];
        let mut cur = first;
        while cur != t {
            if path.len() > total_arcs + 1 {
                return Err(FlowcheckError::CyclicFlow);
            }
            let next = remaining[(cur - 1) as usize]
                .pop_first()
                .ok_or(FlowcheckError::DeadEnd(cur))?;
            path.push(next);
            cur = next;
        }
        paths.push(path);
    }

    // Splice leftover circulation into walks at shared cells: in = out
    // holds at every cell of the leftover, so following it from a shared
    // cell always closes a circuit there.
    loop {
        let leftover: usize = remaining.iter().map(BTreeSet::len).sum();
        if leftover == 0 {
            break;
        }
        let splice_point = paths.iter().enumerate().find_map(|(w, path)| {
            path.iter()
                .position(|&v| !remaining[(v - 1) as usize].is_empty())
                .map(|idx| (w, idx))
        });
        let Some((w, idx)) = splice_point else {
            return Err(FlowcheckError::UncoveredArcs(leftover));
        };
        let anchor = paths[w][idx];
        let mut segment = Vec::new();
        let mut cur = anchor;
        loop {
            let next = remaining[(cur - 1) as usize]
                .pop_first()
                .ok_or(FlowcheckError::DeadEnd(cur))?;
            segment.push(next);
            cur = next;
            if cur == anchor {
                break;
            }
            if segment.len() > total_arcs {
                return Err(FlowcheckError::CyclicFlow);
            }
        }
        paths[w].splice(idx + 1..idx + 1, segment);
    }

    if paths.len() != sol.k as usize {
        return Err(FlowcheckError::PathCountMismatch {
            expected: sol.k,
            found: paths.len() as u32,
        });
    }
    Ok(paths)
}

/// Reads the `p_j` / `c_j` objects out of a halted configuration. Each
/// marker must occur exactly once; `k = |C_s|`.
pub fn solution_from_configuration(
    config: &Configuration,
    s: CellId,
) -> Result<FlowSolution, FlowcheckError> {
    let n = config.n();
    if s < 1 || s > n {
        return Err(FlowcheckError::CellOutOfRange(s, n));
    }
    let mut sol = FlowSolution::empty(n);
    for cell in 1..=n {
        for (obj, count) in config.cell(cell).contents.iter() {
            let family = match obj.base() {
                Base::P => &mut sol.preds,
                Base::C => &mut sol.succs,
                _ => continue,
            };
            if count != 1 {
                return Err(FlowcheckError::DuplicateMarker {
                    cell,
                    object: obj.to_string(),
                    count,
                });
            }
            family[(cell - 1) as usize].insert(obj.index().expect("p/c families are indexed"));
        }
    }
    sol.k = sol.succs_of(s).len() as u32;
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The six-cell module used throughout the worked examples; neighbor
    /// sets: 1:{2,4} 2:{1,3,4} 3:{2,4,5,6} 4:{1,2,3,5} 5:{3,4,6} 6:{3,5}.
    fn six_cell_module() -> Digraph {
        Digraph::new(
            6,
            &[
                (1, 2),
                (1, 4),
                (2, 3),
                (2, 4),
                (3, 4),
                (3, 5),
                (3, 6),
                (4, 5),
                (5, 6),
            ],
        )
        .unwrap()
    }

    /// s=1, w=2, x=3, y=4, z=5, t=6: the worked digraph with two
    /// edge-disjoint (and two node-disjoint) paths.
    fn two_path_digraph() -> Digraph {
        Digraph::new(
            6,
            &[
                (1, 2),
                (1, 4),
                (2, 3),
                (4, 3),
                (3, 5),
                (4, 5),
                (3, 6),
                (5, 6),
            ],
        )
        .unwrap()
    }

    /// s→u→w→x→t and s→v→w→y→t share only node w: two edge-disjoint paths
    /// but a single node-disjoint one. s=1 u=2 w=3 x=4 t=5 v=6 y=7.
    fn bowtie() -> Digraph {
        Digraph::new(
            7,
            &[(1, 2), (2, 3), (3, 4), (4, 5), (1, 6), (6, 3), (3, 7), (7, 5)],
        )
        .unwrap()
    }

    fn sol(n: u32, arcs: &[(u32, u32)], k: u32) -> FlowSolution {
        let mut s = FlowSolution::empty(n);
        for &(u, v) in arcs {
            s.insert_arc(u, v);
        }
        s.k = k;
        s
    }

    /// The reference edge-disjoint output for the six-cell module.
    fn edge_fixture() -> FlowSolution {
        sol(
            6,
            &[(1, 2), (1, 4), (2, 3), (4, 3), (3, 5), (3, 6), (5, 6)],
            2,
        )
    }

    /// The reference node-disjoint output for the six-cell module.
    fn node_fixture() -> FlowSolution {
        sol(6, &[(1, 2), (1, 4), (2, 3), (4, 5), (3, 6), (5, 6)], 2)
    }

    #[test]
    fn edge_oracle_on_the_worked_digraphs() {
        let g = two_path_digraph();
        assert_eq!(max_edge_disjoint(&g, 1, 6, false).unwrap().k, 2);
        let g6 = six_cell_module();
        assert_eq!(max_edge_disjoint(&g6, 1, 6, false).unwrap().k, 2);
        // single-arc graph
        let tiny = Digraph::new(2, &[(1, 2)]).unwrap();
        assert_eq!(max_edge_disjoint(&tiny, 1, 2, false).unwrap().k, 1);
    }

    #[test]
    fn node_oracle_on_the_worked_digraphs() {
        assert_eq!(max_node_disjoint(&two_path_digraph(), 1, 6).unwrap().k, 2);
        assert_eq!(max_node_disjoint(&six_cell_module(), 1, 6).unwrap().k, 2);
        let g = bowtie();
        assert_eq!(max_edge_disjoint(&g, 1, 5, false).unwrap().k, 2);
        assert_eq!(max_node_disjoint(&g, 1, 5).unwrap().k, 1);
    }

    #[test]
    fn endpoint_validation() {
        let g = six_cell_module();
        assert_eq!(
            max_edge_disjoint(&g, 3, 3, false).unwrap_err(),
            FlowcheckError::SameSourceTarget
        );
        assert_eq!(
            max_node_disjoint(&g, 0, 3).unwrap_err(),
            FlowcheckError::CellOutOfRange(0, 6)
        );
    }

    #[test]
    fn resume_matches_full_rescan() {
        for (g, s, t) in [
            (six_cell_module(), 1, 6),
            (two_path_digraph(), 1, 6),
            (bowtie(), 1, 5),
        ] {
            let plain = max_edge_disjoint(&g, s, t, false).unwrap();
            let resumed = max_edge_disjoint(&g, s, t, true).unwrap();
            assert_eq!(plain.k, resumed.k);
        }
    }

    #[test]
    fn brute_force_node_cut() {
        assert_eq!(
            min_node_cut_bruteforce(&six_cell_module(), 1, 6).unwrap(),
            MinNodeCut::Size(2)
        );
        assert_eq!(
            min_node_cut_bruteforce(&bowtie(), 1, 5).unwrap(),
            MinNodeCut::Size(1)
        );
        let path = Digraph::new(3, &[(1, 2), (2, 3)]).unwrap();
        assert_eq!(
            min_node_cut_bruteforce(&path, 1, 3).unwrap(),
            MinNodeCut::Size(1)
        );
        let adjacent = Digraph::new(2, &[(1, 2)]).unwrap();
        assert_eq!(
            min_node_cut_bruteforce(&adjacent, 1, 2).unwrap(),
            MinNodeCut::Unbounded
        );
        let big = Digraph::new(13, &[(1, 2)]).unwrap();
        assert_eq!(
            min_node_cut_bruteforce(&big, 1, 2).unwrap_err(),
            FlowcheckError::TooManyCells { n: 13, max: 12 }
        );
    }

    #[test]
    fn validators_accept_the_reference_outputs() {
        let g = six_cell_module();
        assert_eq!(validate_edge(&edge_fixture(), &g, 1, 6), vec![]);
        assert_eq!(validate_node(&node_fixture(), &g, 1, 6), vec![]);
    }

    #[test]
    fn validator_catches_broken_symmetry() {
        let g = six_cell_module();
        let mut broken = edge_fixture();
        broken.preds[2].remove(&2); // drop p_2 from σ3
        let violations = validate_edge(&broken, &g, 1, 6);
        assert!(violations
            .iter()
            .any(|v| v.family == ConstraintFamily::FlowArcs
                && v.detail.contains("c_3 ∈ C_2 without p_2 ∈ P_3")));
    }

    #[test]
    fn empty_solution_is_valid_zero_flow() {
        let g = six_cell_module();
        let empty = FlowSolution::empty(6);
        assert_eq!(validate_edge(&empty, &g, 1, 6), vec![]);
        assert_eq!(validate_node(&empty, &g, 1, 6), vec![]);
        assert_eq!(extract_paths(&empty, 1, 6).unwrap(), Vec::<Vec<u32>>::new());
    }

    #[test]
    fn edge_output_is_not_node_disjoint() {
        let g = six_cell_module();
        let violations = validate_node(&edge_fixture(), &g, 1, 6);
        assert!(violations
            .iter()
            .any(|v| v.family == ConstraintFamily::NodeDisjoint && v.cell == 3));
    }

    #[test]
    fn validator_catches_detached_circulation() {
        let g = six_cell_module();
        // k = 0 plus a detached 3⇄4 loop: represents no path. The edge
        // chain check starts at the source and never sees it, but the node
        // check walks every cell, and extraction cannot cover the arcs.
        let cyclic = sol(6, &[(3, 4), (4, 3)], 0);
        assert_eq!(validate_edge(&cyclic, &g, 1, 6), vec![]);
        assert!(validate_node(&cyclic, &g, 1, 6)
            .iter()
            .any(|v| v.family == ConstraintFamily::OnlyPaths));
        assert_eq!(
            extract_paths(&cyclic, 1, 6).unwrap_err(),
            FlowcheckError::UncoveredArcs(2)
        );
        // Decomposition cancels the loop entirely.
        let (pruned, removed) = prune_circulation(&cyclic);
        assert_eq!(removed, 2);
        assert_eq!(pruned, FlowSolution::empty(6));
    }

    #[test]
    fn crossing_paths_decompose_cleanly() {
        // Two stages crossing at cells 1 and 3: the arc set is exactly the
        // union of the simple paths 4.1.2.3.5 and 4.3.1.5, but it contains
        // the directed cycle 1→2→3→1, which keeps the chain check alive.
        let g = Digraph::new(5, &[(1, 3), (3, 2), (3, 4), (1, 5), (5, 3), (2, 1), (4, 1)]).unwrap();
        let crossing = sol(
            5,
            &[(4, 1), (1, 2), (2, 3), (3, 5), (4, 3), (3, 1), (1, 5)],
            2,
        );
        assert!(validate_edge(&crossing, &g, 4, 5)
            .iter()
            .any(|v| v.family == ConstraintFamily::OnlyPaths));
        // Walk extraction still covers every arc (revisiting shared cells).
        let paths = extract_paths(&crossing, 4, 5).unwrap();
        let covered: usize = paths.iter().map(|p| p.len() - 1).sum();
        assert_eq!(covered, 7);
        // Cancelling the cycle yields an equivalent two-path flow that the
        // chain check accepts.
        let (pruned, removed) = prune_circulation(&crossing);
        assert_eq!(removed, 3);
        assert_eq!(pruned.k, 2);
        assert_eq!(validate_edge(&pruned, &g, 4, 5), vec![]);
        assert_eq!(
            extract_paths(&pruned, 4, 5).unwrap(),
            vec![vec![4, 1, 5], vec![4, 3, 5]]
        );
    }

    #[test]
    fn extraction_splices_circulation_the_walks_bypass() {
        // Walk 1.2.4 takes the target before the woven cycle 2→5→6→2;
        // the cycle is spliced back in at cell 2.
        let woven = sol(6, &[(1, 2), (2, 4), (2, 5), (5, 6), (6, 2)], 1);
        assert_eq!(
            extract_paths(&woven, 1, 4).unwrap(),
            vec![vec![1, 2, 5, 6, 2, 4]]
        );
        // Decomposition instead drops the cycle.
        let (pruned, removed) = prune_circulation(&woven);
        assert_eq!(removed, 3);
        assert_eq!(extract_paths(&pruned, 1, 4).unwrap(), vec![vec![1, 2, 4]]);
    }

    #[test]
    fn pruning_preserves_mispaired_markers() {
        // A c_j without the matching p: pruning only cancels properly
        // paired cycles, so the validators still see the defect.
        let mut broken = sol(6, &[(3, 4), (4, 3)], 0);
        broken.succs[0].insert(2); // c_2 at σ1 with no p_1 at σ2
        let (pruned, removed) = prune_circulation(&broken);
        assert_eq!(removed, 2);
        assert!(pruned.succs_of(1).contains(&2));
        let g = six_cell_module();
        assert!(validate_edge(&pruned, &g, 1, 6)
            .iter()
            .any(|v| v.family == ConstraintFamily::FlowArcs));
    }

    #[test]
    fn extraction_pairs_successors_in_ascending_order() {
        assert_eq!(
            extract_paths(&edge_fixture(), 1, 6).unwrap(),
            vec![vec![1, 2, 3, 5, 6], vec![1, 4, 3, 6]]
        );
        assert_eq!(
            extract_paths(&node_fixture(), 1, 6).unwrap(),
            vec![vec![1, 2, 3, 6], vec![1, 4, 5, 6]]
        );
    }

    #[test]
    fn oracle_outputs_validate_and_extract() {
        for (g, s, t) in [
            (six_cell_module(), 1, 6),
            (two_path_digraph(), 1, 6),
            (bowtie(), 1, 5),
        ] {
            let edge = max_edge_disjoint(&g, s, t, false).unwrap();
            assert_eq!(validate_edge(&edge, &g, s, t), vec![]);
            let paths = extract_paths(&edge, s, t).unwrap();
            assert_eq!(paths.len(), edge.k as usize);

            let node = max_node_disjoint(&g, s, t).unwrap();
            assert_eq!(validate_node(&node, &g, s, t), vec![]);
            let paths = extract_paths(&node, s, t).unwrap();
            assert_eq!(paths.len(), node.k as usize);
        }
    }

    #[test]
    fn solution_reader_rejects_duplicate_markers() {
        use crate::engine::{CellSnapshot, Configuration};
        use crate::object::State;
        let mut config = Configuration::empty(2);
        config.cells[0] = CellSnapshot {
            state: State(0),
            contents: "c_2^2".parse().unwrap(),
        };
        assert_eq!(
            solution_from_configuration(&config, 1).unwrap_err(),
            FlowcheckError::DuplicateMarker {
                cell: 1,
                object: "c_2".into(),
                count: 2
            }
        );
        let empty = Configuration::empty(2);
        let sol = solution_from_configuration(&empty, 1).unwrap();
        assert_eq!(sol.k, 0);
        assert!(sol.succs_of(1).is_empty());
    }
}
