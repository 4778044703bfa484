//! The rule programs: neighbor discovery (states s0–s4) and the two
//! depth-first-search path programs built on top of it (states s4–s13),
//! plus initial-configuration construction.
//!
//! The tables below are literal data so they can be eyeballed rule by rule
//! against a printed listing; [`dump_templates`] reproduces them verbatim.

use thiserror::Error;

use crate::digraph::Digraph;
use crate::engine::Configuration;
use crate::object::{Base, CellId, Object};
use crate::rules::RuleTemplate;

/// Which Phase-II program runs on top of discovery.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathMode {
    /// Maximum edge-disjoint paths.
    Edge,
    /// Maximum node-disjoint paths (unit node capacities).
    Node,
}

/// Full program selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProgramKind {
    /// Edge- or node-disjoint variant.
    pub mode: PathMode,
    /// Replace rule 5.3 so the source never retries failed start arcs.
    pub optimized: bool,
}

/// Neighbor discovery. Every reachable cell walks s0 → s4, learning the
/// object `n_j` for each neighbor `σ_j`; the source keeps marker `k`, the
/// target keeps marker `z`, every reachable cell keeps one `a`.
const DISCOVERY: &[&str] = &[
    "0.1: s0 g_i ->min s0",
    "0.2: s0 g_j ->min s1 a k (u_j)|repl",
    "0.3: s0 u_i ->min s1 a z (u_i)|repl",
    "0.4: s0 u_i ->max s1",
    "0.5: s0 u_j ->min s1 a (u_j)|repl",
    "1.1: s1 a ->min s2 a (n_i)|repl",
    "2.1: s2 a ->min s3 a",
    "3.1: s3 a ->min s4 a",
    "3.2: s3 u_j ->max s4",
];

/// Edge-disjoint Phase II: the source searches (s5), the target accepts
/// (s6), intermediate cells run the DFS forward/backtrack/consolidation
/// protocol (s7–s11), s12 resets between stages, s13 tears down.
///
/// Rules 9.6 and 11.6: a busy cell can receive a search extension over an
/// arc it already tried itself (mutual try), in which case its `n_j` is
/// spent and the `n_j f_j` rejection cannot fire; the sender blocks forever
/// waiting for a reply. The bare `f_j` rejections answer those extensions
/// (no `m_j` is recorded — the arc was already marked by the cell's own
/// failed attempt).
const EDGE_PHASE2: &[&str] = &[
    "4.1: s4 k ->min s5 k",
    "4.2: s4 z ->min s6 z",
    "4.3: s4 a ->min s7 a",
    "5.1: s5 a n_j ->min s5 d_j (f_i)|j",
    "5.2: s5 d_j y_j ->min s12 a c_j w w (v)|repl",
    "5.3: s5 d_j x_j ->min s5 a m_j",
    "5.4: s5 b_j ->min s5 (x_i)|j",
    "5.5: s5 f_j ->min s5 (x_i)|j",
    "5.6: s5 a k ->min s13 a a w w (a)|repl",
    "6.1: s6 n_j f_j ->min s6 p_j (y_i)|j",
    "6.2: s6 v ->min s12 w w (v)|repl",
    "6.3: s6 a a z ->min s13 a a w w (a)|repl",
    "7.1: s7 v ->min s12 w w (v)|repl",
    "7.2: s7 a a ->min s13 a a w w (a)|repl",
    "7.3: s7 n_j f_j ->min s8 q_j",
    "7.4: s7 c_j b_j ->min s8 e_j",
    "7.5: s7 h_j ->min s11 c_j (x_i)|j",
    "7.6: s7 p_j q_k ->min s10 p_j q_k",
    "7.7: s7 q_j ->min s7 m_j (x_i)|j",
    "7.8: s7 f_j ->min s7 (x_i)|j",
    "8.1: s8 a n_j ->min s9 a d_j (f_i)|j",
    "8.2: s8 a ->min s10 a",
    "9.1: s9 d_j y_j e_k ->min s7 c_j m_k (y_i)|k",
    "9.2: s9 d_j y_j q_k ->min s7 c_j p_k (y_i)|k",
    "9.3: s9 d_j x_j ->min s8 m_j",
    "9.4: s9 c_j b_j ->min s9 c_j (x_i)|j",
    "9.5: s9 n_j f_j ->min s9 m_j (x_i)|j",
    "9.6: s9 f_j ->min s9 (x_i)|j",
    "10.1: s10 a p_j ->min s11 a r_j (b_i)|j",
    "10.2: s10 a e_j ->min s7 a c_j (x_i)|j",
    "10.3: s10 a q_j ->min s7 a m_j (x_i)|j",
    "11.1: s11 r_j y_j e_k ->min s7 m_j m_k (y_i)|k",
    "11.2: s11 r_j y_j q_k ->min s7 m_j p_k (y_i)|k",
    "11.3: s11 r_j x_j ->min s10 t_j",
    "11.4: s11 c_j b_j ->min s7 h_j",
    "11.5: s11 n_j f_j ->min s11 m_j (x_i)|j",
    "11.6: s11 f_j ->min s11 (x_i)|j",
    "12.1: s12 w ->min s12",
    "12.2: s12 v ->max s12",
    "12.3: s12 m_j ->min s12 n_j",
    "12.4: s12 t_j ->min s12 p_j",
    "12.5: s12 k ->min s5 k",
    "12.6: s12 z ->min s6 z",
    "12.7: s12 a ->min s7 a",
    "13.1: s13 w ->min s13",
    "13.2: s13 a ->max s0",
    "13.3: s13 t_j ->min s0 p_j",
    "13.4: s13 n_j ->min s0",
    "13.5: s13 m_j ->min s0",
];

/// The node-disjoint variant replaces the s7 group: a flow-cell reached via
/// a non-flow arc immediately pushes back on its flow-predecessor (7.3),
/// and a pushback arriving at an already-visited cell is rerouted forward
/// (7.7) instead of rejected, emulating entry/exit node splitting without
/// splitting cells.
///
/// Rule 7.4: a pending failed-pushback record `t_k` still means the cell
/// carries one unit of flow (its `p_k` is restored at the next reset), so
/// new search entries must be rejected until then; accepting one would put
/// a second unit through the cell within the same stage.
const NODE_S7: &[&str] = &[
    "7.1: s7 v ->min s12 w w (v)|repl",
    "7.2: s7 a a ->min s13 a a w w (a)|repl",
    "7.3: s7 n_j f_j p_k ->min s10 q_j p_k",
    "7.4: s7 f_j t_k ->min s7 t_k (x_i)|j",
    "7.5: s7 n_j f_j ->min s8 q_j",
    "7.6: s7 c_j b_j ->min s8 e_j",
    "7.7: s7 h_j ->min s8 e_j",
    "7.8: s7 r_j ->min s11 r_j",
    "7.9: s7 q_j ->min s7 m_j (x_i)|j",
    "7.10: s7 f_j ->min s7 (x_i)|j",
];

/// With the optimization, a failed start arc at the source is dropped
/// instead of being remembered for retry after the next reset.
const OPTIMIZED_5_3: &str = "5.3: s5 d_j x_j ->min s5 a";

fn parse_table(lines: &[&str]) -> Vec<RuleTemplate> {
    lines
        .iter()
        .map(|l| RuleTemplate::parse(l).expect("program tables are well-formed"))
        .collect()
}

/// The nine discovery templates (states s0–s3), in listing order.
pub fn discovery_templates() -> Vec<RuleTemplate> {
    parse_table(DISCOVERY)
}

/// Discovery followed by the edge-disjoint Phase II (rule groups 4–13).
pub fn edge_disjoint_templates(optimized: bool) -> Vec<RuleTemplate> {
    let mut templates = discovery_templates();
    templates.extend(parse_table(EDGE_PHASE2));
    if optimized {
        swap_5_3(&mut templates);
    }
    templates
}

/// The edge-disjoint program with the s7 group replaced by the
/// node-capacity rules.
pub fn node_disjoint_templates(optimized: bool) -> Vec<RuleTemplate> {
    let node_s7 = parse_table(NODE_S7);
    let mut templates: Vec<RuleTemplate> = edge_disjoint_templates(optimized)
        .into_iter()
        .filter(|t| t.id.group != 7)
        .collect();
    let insert_at = templates
        .iter()
        .position(|t| t.id.group > 7)
        .unwrap_or(templates.len());
    templates.splice(insert_at..insert_at, node_s7);
    templates
}

fn swap_5_3(templates: &mut [RuleTemplate]) {
    let optimized = RuleTemplate::parse(OPTIMIZED_5_3).expect("optimized rule is well-formed");
    let slot = templates
        .iter_mut()
        .find(|t| t.id == optimized.id)
        .expect("rule 5.3 present");
    *slot = optimized;
}

/// Template list for a [`ProgramKind`].
pub fn templates_for(kind: ProgramKind) -> Vec<RuleTemplate> {
    match kind.mode {
        PathMode::Edge => edge_disjoint_templates(kind.optimized),
        PathMode::Node => node_disjoint_templates(kind.optimized),
    }
}

/// One template per line, in the notation of [`RuleTemplate::parse`] — for
/// diffing a program against its listing.
pub fn dump_templates(templates: &[RuleTemplate]) -> String {
    let mut out = String::new();
    for t in templates {
        out.push_str(&t.dump_line());
        out.push('\n');
    }
    out
}

/// Error from [`initial_configuration`].
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ProgramError {
    /// Source or target outside the module.
    #[error("cell {0} outside 1..={1}")]
    CellOutOfRange(CellId, u32),
}

/// The starting configuration of every program: the source cell holds one
/// `g_t` naming the target, every other cell is empty, all cells in s0.
pub fn initial_configuration(
    g: &Digraph,
    source: CellId,
    target: CellId,
) -> Result<Configuration, ProgramError> {
    let n = g.n();
    for cell in [source, target] {
        if cell < 1 || cell > n {
            return Err(ProgramError::CellOutOfRange(cell, n));
        }
    }
    let mut config = Configuration::empty(n);
    config.cells[(source - 1) as usize].contents.insert(
        Object::indexed(Base::G, target).expect("validated target id"),
        1,
    );
    Ok(config)
}
