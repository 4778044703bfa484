//! Synchronous lockstep executor.
//!
//! Each step, every cell independently reads a snapshot of its own contents
//! (messages from the previous step already merged), scans its ordered rule
//! list under weak priority, and emits messages. Messages sent at step `t`
//! are visible in the configuration of step `t+1` and consumable at step
//! `t+1`. The run halts on quiescence: no applicable rule in any cell and
//! no in-flight messages.

use std::collections::BTreeMap;

use crate::digraph::Digraph;
use crate::multiset::{render_canonical, Multiset};
use crate::object::{CellId, State};
use crate::rules::{build_rule_order, InstanceOrder, Mode, Rule, RuleTemplate, Transfer};

/// One cell's state and contents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellSnapshot {
    /// Current state.
    pub state: State,
    /// Current multiset of objects.
    pub contents: Multiset,
}

/// A global snapshot: one entry per cell plus the message batches delivered
/// while producing it (already merged into the cell contents).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    /// Step counter, 0 for the initial configuration.
    pub step: u32,
    /// Per-cell snapshots, indexed by cell ID − 1.
    pub cells: Vec<CellSnapshot>,
    /// Messages delivered during the step that produced this configuration,
    /// by recipient. Empty in a quiescent configuration.
    pub inflight: BTreeMap<CellId, Multiset>,
}

impl Configuration {
    /// All cells empty in state `s_0`, step 0.
    pub fn empty(n: u32) -> Configuration {
        Configuration {
            step: 0,
            cells: vec![
                CellSnapshot {
                    state: State(0),
                    contents: Multiset::new(),
                };
                n as usize
            ],
            inflight: BTreeMap::new(),
        }
    }

    /// Number of cells.
    pub fn n(&self) -> u32 {
        self.cells.len() as u32
    }

    /// The snapshot of cell `σ_id` (1-based).
    pub fn cell(&self, id: CellId) -> &CellSnapshot {
        &self.cells[(id - 1) as usize]
    }

    fn render_row(&self) -> TraceRow {
        TraceRow {
            step: self.step,
            rendered: self
                .cells
                .iter()
                .map(|c| render_canonical(c.state, &c.contents))
                .collect(),
        }
    }
}

/// One rendered trace-table row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRow {
    /// Step number.
    pub step: u32,
    /// Canonical cell entries, one per cell.
    pub rendered: Vec<String>,
}

/// The per-cell ordered rule lists of one program instance, pre-bucketed by
/// from-state for scanning.
#[derive(Debug, Clone)]
pub struct CompiledProgram {
    n: u32,
    rules: Vec<Vec<Rule>>,
    buckets: Vec<Vec<Vec<usize>>>,
}

impl CompiledProgram {
    /// Instantiates `templates` for every cell of an `n`-cell module.
    pub fn new(templates: &[RuleTemplate], n: u32, order: InstanceOrder) -> CompiledProgram {
        let num_states = templates
            .iter()
            .map(|t| t.from.0.max(t.to.0) as usize + 1)
            .max()
            .unwrap_or(1);
        let mut rules = Vec::with_capacity(n as usize);
        let mut buckets = Vec::with_capacity(n as usize);
        for owner in 1..=n {
            let list = build_rule_order(templates, owner, n, order);
            let mut cell_buckets = vec![Vec::new(); num_states];
            for (idx, rule) in list.iter().enumerate() {
                cell_buckets[rule.from.0 as usize].push(idx);
            }
            rules.push(list);
            buckets.push(cell_buckets);
        }
        CompiledProgram { n, rules, buckets }
    }

    /// Number of cells the program was compiled for.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// The full ordered rule list of one cell.
    pub fn rules(&self, cell: CellId) -> &[Rule] {
        &self.rules[(cell - 1) as usize]
    }

    fn bucket(&self, cell: CellId, state: State) -> &[usize] {
        self.buckets[(cell - 1) as usize]
            .get(state.0 as usize)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }
}

/// One rule application record: rule position in its cell's ordered list and
/// how many times it fired in the step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiredRule {
    /// The firing cell.
    pub cell: CellId,
    /// Index into [`CompiledProgram::rules`] for that cell.
    pub rule: usize,
    /// Number of applications (1 for min-mode rules).
    pub times: u32,
}

/// What happened during one step, for auditing.
#[derive(Debug, Clone, Default)]
pub struct StepLog {
    /// All rule applications, sorted by (cell, rule position).
    pub fired: Vec<FiredRule>,
    /// Messages delivered, by recipient.
    pub delivered: BTreeMap<CellId, Multiset>,
}

struct CellOutcome {
    state: State,
    kept: Multiset,
    produced: Multiset,
    outgoing: Vec<(CellId, Multiset)>,
    fired: Vec<FiredRule>,
}

fn eval_cell(config: &Configuration, prog: &CompiledProgram, g: &Digraph, cell: CellId) -> CellOutcome {
    let snap = config.cell(cell);
    let mut available = snap.contents.clone();
    let mut produced = Multiset::new();
    let mut outgoing = Vec::new();
    let mut fired = Vec::new();
    let mut committed: Option<State> = None;

    for &idx in prog.bucket(cell, snap.state) {
        let rule = &prog.rules[(cell - 1) as usize][idx];
        // Weak priority: the first firing rule fixes the target state; a
        // later applicable rule with a different target is skipped.
        if committed.is_some_and(|t| t != rule.to) {
            continue;
        }
        let times = match rule.mode {
            Mode::Min => u32::from(available.contains(&rule.lhs)),
            Mode::Max => available.fit_count(&rule.lhs),
        };
        if times == 0 {
            continue;
        }
        available
            .remove(&rule.lhs.scaled(times))
            .expect("fit checked before consuming");
        produced.absorb(&rule.rhs.scaled(times));
        match rule.transfer {
            Transfer::None => {}
            Transfer::Broadcast => {
                let msg = rule.message.scaled(times);
                for &nb in g.neighbors(cell) {
                    outgoing.push((nb, msg.clone()));
                }
            }
            Transfer::To(target) => {
                // A non-neighbor target discards the message; the rewrite
                // still applies.
                if g.are_neighbors(cell, target) {
                    outgoing.push((target, rule.message.scaled(times)));
                }
            }
        }
        committed.get_or_insert(rule.to);
        fired.push(FiredRule { cell, rule: idx, times });
    }

    CellOutcome {
        state: committed.unwrap_or(snap.state),
        kept: available,
        produced,
        outgoing,
        fired,
    }
}

/// Advances one synchronous step.
pub fn step(config: &Configuration, prog: &CompiledProgram, g: &Digraph) -> (Configuration, StepLog) {
    let order: Vec<CellId> = (1..=config.n()).collect();
    step_permuted(config, prog, g, &order)
}

/// [`step`] with an explicit cell evaluation order. Every permutation
/// produces the identical configuration — each cell reads only its own
/// snapshot — so per-step evaluation may be parallelized; this entry point
/// exists to assert that contract.
pub fn step_permuted(
    config: &Configuration,
    prog: &CompiledProgram,
    g: &Digraph,
    order: &[CellId],
) -> (Configuration, StepLog) {
    let n = config.n();
    assert_eq!(n, prog.n(), "program compiled for a different cell count");
    assert_eq!(order.len(), n as usize, "order must cover every cell");

    let mut outcomes: Vec<Option<CellOutcome>> = (0..n).map(|_| None).collect();
    let mut delivered: BTreeMap<CellId, Multiset> = BTreeMap::new();
    for &cell in order {
        let outcome = eval_cell(config, prog, g, cell);
        for (to, msg) in &outcome.outgoing {
            delivered.entry(*to).or_default().absorb(msg);
        }
        outcomes[(cell - 1) as usize] = Some(outcome);
    }

    let mut cells = Vec::with_capacity(n as usize);
    let mut fired = Vec::new();
    for (idx, slot) in outcomes.iter_mut().enumerate() {
        let outcome = slot.take().expect("order covers every cell");
        let mut contents = outcome.kept;
        contents.absorb(&outcome.produced);
        if let Some(batch) = delivered.get(&(idx as u32 + 1)) {
            contents.absorb(batch);
        }
        cells.push(CellSnapshot {
            state: outcome.state,
            contents,
        });
        fired.extend(outcome.fired);
    }
    fired.sort_by_key(|f| (f.cell, f.rule));

    let next = Configuration {
        step: config.step + 1,
        cells,
        inflight: delivered.clone(),
    };
    (next, StepLog { fired, delivered })
}

/// True if no rule is applicable in any cell and no messages are in flight.
/// A quiescent configuration is a fixpoint of [`step`].
pub fn is_quiescent(config: &Configuration, prog: &CompiledProgram) -> bool {
    if !config.inflight.is_empty() {
        return false;
    }
    (1..=config.n()).all(|cell| {
        let snap = config.cell(cell);
        prog.bucket(cell, snap.state)
            .iter()
            .all(|&idx| !snap.contents.contains(&prog.rules[(cell - 1) as usize][idx].lhs))
    })
}

/// Result of [`run`].
#[derive(Debug, Clone)]
pub struct RunOutcome {
    /// The last configuration reached.
    pub final_config: Configuration,
    /// One rendered row per configuration, initial included.
    pub trace: Vec<TraceRow>,
    /// True if the run reached quiescence within the step budget.
    pub halted: bool,
    /// Steps actually performed.
    pub steps: u32,
    /// Per-step logs (only collected when auditing).
    pub logs: Vec<StepLog>,
    /// Invariant violations found by the per-step audit (empty when not
    /// auditing, and expected empty always).
    pub audit_errors: Vec<String>,
}

/// Iterates [`step`] until quiescence or until `max_steps` steps have been
/// performed. With `audit` set, every step is checked against the weak
/// priority and object-balance invariants.
pub fn run(
    initial: Configuration,
    prog: &CompiledProgram,
    g: &Digraph,
    max_steps: u32,
    audit: bool,
) -> RunOutcome {
    assert!(max_steps >= 1, "max_steps must be at least 1");
    let start = initial.step;
    let mut trace = vec![initial.render_row()];
    let mut logs = Vec::new();
    let mut audit_errors = Vec::new();
    let mut config = initial;

    let halted = loop {
        if is_quiescent(&config, prog) {
            break true;
        }
        if config.step - start >= max_steps {
            break false;
        }
        let (next, log) = step(&config, prog, g);
        if audit {
            audit_errors.extend(verify_step_log(&config, &next, &log, prog, g));
            logs.push(log);
        }
        trace.push(next.render_row());
        config = next;
    };

    RunOutcome {
        steps: config.step - start,
        final_config: config,
        trace,
        halted,
        logs,
        audit_errors,
    }
}

/// Replays a [`StepLog`] against the configurations around it and reports
/// every violated invariant:
///
/// * weak priority — all rules fired by one cell share a target state;
/// * state coherence — each cell's next state is the committed target (or
///   unchanged when nothing fired);
/// * object balance — next contents = snapshot − Σ consumed + Σ produced +
///   Σ received, per cell;
/// * message conservation — delivered batches are exactly what the fired
///   rules sent to actual neighbors.
pub fn verify_step_log(
    before: &Configuration,
    after: &Configuration,
    log: &StepLog,
    prog: &CompiledProgram,
    g: &Digraph,
) -> Vec<String> {
    let mut errors = Vec::new();
    let step = before.step;
    let mut expected_delivery: BTreeMap<CellId, Multiset> = BTreeMap::new();

    for cell in 1..=before.n() {
        let fired: Vec<&FiredRule> = log.fired.iter().filter(|f| f.cell == cell).collect();
        let rules = &prog.rules[(cell - 1) as usize];

        let mut target: Option<State> = None;
        for f in &fired {
            let rule = &rules[f.rule];
            match target {
                None => target = Some(rule.to),
                Some(t) if t != rule.to => errors.push(format!(
                    "step {step} cell {cell}: weak priority violated: rules target both {t} and {}",
                    rule.to
                )),
                _ => {}
            }
        }

        let before_cell = before.cell(cell);
        let after_cell = after.cell(cell);
        let expected_state = target.unwrap_or(before_cell.state);
        if after_cell.state != expected_state {
            errors.push(format!(
                "step {step} cell {cell}: state is {} but fired rules target {expected_state}",
                after_cell.state
            ));
        }

        let mut expected = before_cell.contents.clone();
        for f in &fired {
            let rule = &rules[f.rule];
            match expected.remove(&rule.lhs.scaled(f.times)) {
                Ok(()) => expected.absorb(&rule.rhs.scaled(f.times)),
                Err(e) => errors.push(format!(
                    "step {step} cell {cell}: rule {} over-consumed: {e}",
                    rule.id
                )),
            }
            match rule.transfer {
                Transfer::None => {}
                Transfer::Broadcast => {
                    for &nb in g.neighbors(cell) {
                        expected_delivery
                            .entry(nb)
                            .or_default()
                            .absorb(&rule.message.scaled(f.times));
                    }
                }
                Transfer::To(t) => {
                    if g.are_neighbors(cell, t) {
                        expected_delivery
                            .entry(t)
                            .or_default()
                            .absorb(&rule.message.scaled(f.times));
                    }
                }
            }
        }
        if let Some(batch) = log.delivered.get(&cell) {
            expected.absorb(batch);
        }
        if expected != after_cell.contents {
            errors.push(format!(
                "step {step} cell {cell}: object balance violated: expected {expected}, found {}",
                after_cell.contents
            ));
        }
    }

    if expected_delivery != log.delivered {
        errors.push(format!(
            "step {step}: delivered messages do not match fired rules"
        ));
    }
    if log.delivered != after.inflight {
        errors.push(format!("step {step}: inflight record diverges from deliveries"));
    }
    errors
}

/// Renders a run's trace as the tab-separated table the solution traces
/// use: a header row, then one row per step with one canonical cell entry
/// per column.
pub fn render_trace(rows: &[TraceRow]) -> String {
    let n = rows.first().map_or(0, |r| r.rendered.len());
    let mut out = String::from("Step\\Cell");
    for i in 1..=n {
        out.push_str(&format!("\tσ{i}"));
    }
    out.push('\n');
    for row in rows {
        out.push_str(&row.step.to_string());
        for cell in &row.rendered {
            out.push('\t');
            out.push_str(cell);
        }
        out.push('\n');
    }
    out
}
