//! Simulator for simple P modules — synchronous networks of cells that
//! evolve by ordered multiset-rewriting rules over a structural digraph
//! with duplex channels — together with the distributed programs that
//! compute maximum edge- and node-disjoint paths on such modules, and the
//! classical network-flow oracles used to verify every result.
//!
//! - [`object`] / [`multiset`]: the closed object alphabet, counted bags,
//!   and the canonical trace rendering.
//! - [`rules`]: generic rewriting rules and their per-cell instantiation.
//! - [`digraph`]: structural digraphs and the derived symmetric search
//!   digraph.
//! - [`engine`]: the lockstep executor (weak priority, two-sub-step
//!   messaging, quiescence detection, trace emission).
//! - [`programs`]: the neighbor-discovery and path-program rule tables.
//! - [`flowcheck`]: DFS max-flow oracles, a brute-force minimum node cut,
//!   solution validators, and on-the-fly path reconstruction.

#![warn(missing_docs)]

pub mod digraph;
pub mod engine;
pub mod flowcheck;
pub mod multiset;
pub mod object;
pub mod programs;
pub mod rules;

pub use digraph::{Digraph, DigraphError};
pub use engine::{
    is_quiescent, render_trace, run, step, CompiledProgram, Configuration, RunOutcome, StepLog,
    TraceRow,
};
pub use flowcheck::{
    extract_paths, max_edge_disjoint, max_node_disjoint, min_node_cut_bruteforce,
    prune_circulation, solution_from_configuration, validate_edge, validate_node, FlowSolution,
    FlowcheckError, MinNodeCut, Violation,
};
pub use multiset::{render_canonical, Multiset, MultisetError};
pub use object::{Base, CellId, Object, ObjectError, State};
pub use programs::{
    discovery_templates, dump_templates, edge_disjoint_templates, initial_configuration,
    node_disjoint_templates, templates_for, PathMode, ProgramError, ProgramKind,
};
pub use rules::{build_rule_order, InstanceOrder, Mode, Rule, RuleId, RuleTemplate, Transfer};
