//! The run-and-check pipeline shared by `verify`, `fuzz`, and the
//! acceptance suite: execute a path program, read the routing tables out of
//! the halted configuration, and hold them against the classical oracle and
//! the output validators.

use pmodules::engine::{run, CompiledProgram};
use pmodules::flowcheck::{
    extract_paths, max_edge_disjoint, max_node_disjoint, prune_circulation,
    solution_from_configuration, validate_edge, validate_node, FlowSolution, Violation,
};
use pmodules::programs::{initial_configuration, templates_for, PathMode, ProgramKind};
use pmodules::rules::InstanceOrder;
use pmodules::{CellId, Digraph};
use thiserror::Error;

/// Input problems that prevent a verification run entirely.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum VerifyError {
    /// Source or target outside the module.
    #[error("cell {0} outside 1..={1}")]
    CellOutOfRange(CellId, u32),
    /// The oracle needs distinct endpoints.
    #[error("source and target must differ")]
    SameSourceTarget,
}

/// Step budget when none is given: the programs run in a small multiple of
/// `m·n` steps, with 20 as empirical headroom (`m` clamped to 1 so empty
/// arc sets still get a usable budget).
pub fn default_max_steps(g: &Digraph) -> u32 {
    20u32
        .saturating_mul(g.n())
        .saturating_mul(g.arc_count().max(1))
}

/// Everything one verification run produced.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    /// Program that ran.
    pub kind: ProgramKind,
    /// Path count extracted from the halted configuration.
    pub engine_k: u32,
    /// Path count from the matching oracle.
    pub oracle_k: u32,
    /// Steps the run took.
    pub steps: u32,
    /// Whether the run reached quiescence within the budget.
    pub halted: bool,
    /// The budget used.
    pub max_steps: u32,
    /// `steps / (m·n)`, `m` clamped to 1.
    pub step_ratio: f64,
    /// Output-contract violations (empty when valid).
    pub violations: Vec<Violation>,
    /// Paired flow arcs cancelled as circulation before path validation.
    /// Augmenting-path rewiring can rotate replaced arcs into a cycle; the
    /// oracle cancels its own circulation the same way, so both sides are
    /// validated as decomposed flows.
    pub pruned_circulation: usize,
    /// Why the halted configuration could not be read as a solution
    /// (duplicate markers), if it could not.
    pub malformed_output: Option<String>,
    /// Why path reconstruction failed, if it did.
    pub extract_error: Option<String>,
    /// Reconstructed paths (empty on extraction failure).
    pub paths: Vec<Vec<CellId>>,
    /// Engine invariant violations from the per-step audit.
    pub audit_errors: Vec<String>,
    /// The extracted routing tables.
    pub solution: FlowSolution,
}

impl VerifyReport {
    /// True if every check passed.
    pub fn ok(&self) -> bool {
        self.halted
            && self.engine_k == self.oracle_k
            && self.violations.is_empty()
            && self.malformed_output.is_none()
            && self.extract_error.is_none()
            && self.audit_errors.is_empty()
    }

    /// One line per failed check.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.halted {
            out.push(format!(
                "no quiescence within {} steps (step bound exhausted)",
                self.max_steps
            ));
        }
        if self.engine_k != self.oracle_k {
            out.push(format!(
                "path count mismatch: distributed k={}, oracle k={}",
                self.engine_k, self.oracle_k
            ));
        }
        out.extend(self.violations.iter().map(|v| v.to_string()));
        if let Some(e) = &self.malformed_output {
            out.push(format!("malformed output: {e}"));
        }
        if let Some(e) = &self.extract_error {
            out.push(format!("path reconstruction failed: {e}"));
        }
        out.extend(self.audit_errors.iter().cloned());
        out
    }
}

/// Runs `kind` on the module and verifies the result against the matching
/// oracle and validators. `audit` additionally checks the engine invariants
/// at every step.
pub fn verify_case(
    g: &Digraph,
    s: CellId,
    t: CellId,
    kind: ProgramKind,
    max_steps: Option<u32>,
    audit: bool,
) -> Result<VerifyReport, VerifyError> {
    for cell in [s, t] {
        if cell < 1 || cell > g.n() {
            return Err(VerifyError::CellOutOfRange(cell, g.n()));
        }
    }
    if s == t {
        return Err(VerifyError::SameSourceTarget);
    }

    let max_steps = max_steps.unwrap_or_else(|| default_max_steps(g)).max(1);
    let prog = CompiledProgram::new(&templates_for(kind), g.n(), InstanceOrder::Ascending);
    let initial = initial_configuration(g, s, t).expect("endpoints checked");
    let out = run(initial, &prog, g, max_steps, audit);

    let (raw, malformed_output) = match solution_from_configuration(&out.final_config, s) {
        Ok(sol) => (sol, None),
        Err(e) => (FlowSolution::empty(g.n()), Some(e.to_string())),
    };
    let (solution, pruned_circulation) = prune_circulation(&raw);
    let oracle = match kind.mode {
        PathMode::Edge => max_edge_disjoint(g, s, t, false),
        PathMode::Node => max_node_disjoint(g, s, t),
    }
    .expect("endpoints checked");
    let violations = match kind.mode {
        PathMode::Edge => validate_edge(&solution, g, s, t),
        PathMode::Node => validate_node(&solution, g, s, t),
    };
    let (paths, extract_error) = match extract_paths(&solution, s, t) {
        Ok(paths) => (paths, None),
        Err(e) => (Vec::new(), Some(e.to_string())),
    };
    let denom = (g.arc_count().max(1) * g.n()) as f64;

    Ok(VerifyReport {
        kind,
        engine_k: raw.k,
        oracle_k: oracle.k,
        steps: out.steps,
        halted: out.halted,
        max_steps,
        step_ratio: f64::from(out.steps) / denom,
        violations,
        pruned_circulation,
        malformed_output,
        extract_error,
        paths,
        audit_errors: out.audit_errors,
        solution,
    })
}
