//! Randomized verification: generate random modules and run the full
//! verify pipeline on each, deterministically under a fixed seed.

use std::fmt;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pmodules::programs::{PathMode, ProgramKind};
use pmodules::{CellId, Digraph};

use crate::graphfile::format_graph;
use crate::verify::verify_case;

/// Which Phase-II programs a fuzz run exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeChoice {
    /// Edge-disjoint only.
    Edge,
    /// Node-disjoint only.
    Node,
    /// Both programs per module.
    Both,
}

impl ModeChoice {
    fn modes(self) -> &'static [PathMode] {
        match self {
            ModeChoice::Edge => &[PathMode::Edge],
            ModeChoice::Node => &[PathMode::Node],
            ModeChoice::Both => &[PathMode::Edge, PathMode::Node],
        }
    }
}

/// Whether to run the plain program, the rule-5.3-optimized one, or both.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimizedChoice {
    /// Plain rule set only.
    Off,
    /// Optimized rule set only.
    On,
    /// Both variants per module.
    Both,
}

impl OptimizedChoice {
    fn variants(self) -> &'static [bool] {
        match self {
            OptimizedChoice::Off => &[false],
            OptimizedChoice::On => &[true],
            OptimizedChoice::Both => &[false, true],
        }
    }
}

/// Fuzz run parameters.
#[derive(Debug, Clone)]
pub struct FuzzParams {
    /// Cells per module (≥ 2).
    pub cells: u32,
    /// Structural arcs per module (capped at the asymmetric maximum).
    pub arcs: u32,
    /// Number of random modules.
    pub iters: u32,
    /// Base seed; iteration `i` uses `seed + i`.
    pub seed: u64,
    /// Programs to exercise.
    pub mode: ModeChoice,
    /// Optimization variants to exercise.
    pub optimized: OptimizedChoice,
}

/// A failing case, dumped with enough context to replay it.
#[derive(Debug, Clone)]
pub struct FuzzFailure {
    /// Iteration index.
    pub iter: u32,
    /// The module in graph file format.
    pub graph: String,
    /// Source cell.
    pub source: CellId,
    /// Target cell.
    pub target: CellId,
    /// Program that failed.
    pub kind: ProgramKind,
    /// What went wrong, one line per check.
    pub details: Vec<String>,
}

impl fmt::Display for FuzzFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mode = match self.kind.mode {
            PathMode::Edge => "edge",
            PathMode::Node => "node",
        };
        writeln!(
            f,
            "iter {}: FAILED --mode {} {} --source {} --target {}",
            self.iter,
            mode,
            if self.kind.optimized { "--optimized" } else { "" },
            self.source,
            self.target
        )?;
        for d in &self.details {
            writeln!(f, "  {d}")?;
        }
        writeln!(f, "  graph file for replay:")?;
        for line in self.graph.lines() {
            writeln!(f, "    {line}")?;
        }
        Ok(())
    }
}

/// Aggregated fuzz results; `Display` is stable so equal summaries mean
/// reproducible runs.
#[derive(Debug, Clone)]
pub struct FuzzSummary {
    /// Modules generated.
    pub iters: u32,
    /// Verification runs (iters × modes × variants).
    pub cases: u32,
    /// Runs where every check passed.
    pub passed: u32,
    /// Runs with at least one failed check.
    pub failed: u32,
    /// Largest observed `steps / (m·n)` across all runs.
    pub max_step_ratio: f64,
    /// Flow arcs cancelled as circulation across all runs.
    pub pruned_circulation: usize,
    /// The failing cases.
    pub failures: Vec<FuzzFailure>,
    /// Base seed, echoed for reproduction.
    pub seed: u64,
}

impl fmt::Display for FuzzSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "iters={} cases={} passed={} failed={} max_step_ratio={:.3} pruned_circulation={} seed={}",
            self.iters, self.cases, self.passed, self.failed, self.max_step_ratio,
            self.pruned_circulation, self.seed
        )
    }
}

/// Uniformly samples a digraph with `cells` cells and (up to) `arcs`
/// structural arcs, rejecting self-loops, duplicates, and symmetric pairs.
pub fn random_digraph(rng: &mut ChaCha8Rng, cells: u32, arcs: u32) -> Digraph {
    assert!(cells >= 2, "need at least two cells");
    let max_arcs = cells * (cells - 1) / 2;
    let target = arcs.min(max_arcs);
    let mut taken: Vec<(CellId, CellId)> = Vec::with_capacity(target as usize);
    while (taken.len() as u32) < target {
        let u = rng.gen_range(1..=cells);
        let v = rng.gen_range(1..=cells);
        if u == v || taken.contains(&(u, v)) || taken.contains(&(v, u)) {
            continue;
        }
        taken.push((u, v));
    }
    Digraph::new(cells, &taken).expect("sampled arcs are valid")
}

/// Picks a random source/target pair, `s ≠ t`.
pub fn random_endpoints(rng: &mut ChaCha8Rng, cells: u32) -> (CellId, CellId) {
    let s = rng.gen_range(1..=cells);
    let t = loop {
        let t = rng.gen_range(1..=cells);
        if t != s {
            break t;
        }
    };
    (s, t)
}

/// Runs the fuzz campaign. Unreachable targets are kept (zero-path results
/// are verified like any other). Deterministic for a fixed seed.
pub fn fuzz(params: &FuzzParams) -> FuzzSummary {
    let mut summary = FuzzSummary {
        iters: params.iters,
        cases: 0,
        passed: 0,
        failed: 0,
        max_step_ratio: 0.0,
        pruned_circulation: 0,
        failures: Vec::new(),
        seed: params.seed,
    };
    for iter in 0..params.iters {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed.wrapping_add(u64::from(iter)));
        let g = random_digraph(&mut rng, params.cells, params.arcs);
        let (s, t) = random_endpoints(&mut rng, params.cells);
        for &mode in params.mode.modes() {
            for &optimized in params.optimized.variants() {
                let kind = ProgramKind { mode, optimized };
                summary.cases += 1;
                let report = verify_case(&g, s, t, kind, None, true)
                    .expect("generated endpoints are valid");
                if report.step_ratio > summary.max_step_ratio {
                    summary.max_step_ratio = report.step_ratio;
                }
                summary.pruned_circulation += report.pruned_circulation;
                if report.ok() {
                    summary.passed += 1;
                } else {
                    summary.failed += 1;
                    summary.failures.push(FuzzFailure {
                        iter,
                        graph: format_graph(&g),
                        source: s,
                        target: t,
                        kind,
                        details: report.failures(),
                    });
                }
            }
        }
    }
    summary
}
