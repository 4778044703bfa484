//! Acceptance suite: one integration test per acceptance criterion, each
//! printing a PASS/FAIL line (run with `--nocapture` to see them).
//!
//! Criteria 5–9 share a fuzzed corpus of 500 random modules (n ≤ 8) with
//! four audited engine runs each (edge/node × plain/optimized) plus the
//! resume-variant oracle; it is built once on first use.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pmodules::engine::{run, CompiledProgram};
use pmodules::flowcheck::{
    max_edge_disjoint, max_node_disjoint, min_node_cut_bruteforce, MinNodeCut,
};
use pmodules::programs::{
    discovery_templates, initial_configuration, PathMode, ProgramKind,
};
use pmodules::rules::InstanceOrder;
use pmodules::{Base, Digraph};
use pmodules_cli::fuzz::{random_digraph, random_endpoints};
use pmodules_cli::verify::{verify_case, VerifyReport};

fn criterion(number: u32, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("criterion {number} {verdict}: {detail}");
    assert!(pass, "criterion {number} FAIL: {detail}");
}

/// The six-cell worked module.
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

/// The two-path demonstration digraph (s, w, x, y, z, t as cells 1..6).
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

struct Case {
    edge_plain_k: u32,
    edge_resume_k: u32,
    /// edge plain, edge optimized, node plain, node optimized
    runs: [VerifyReport; 4],
}

struct Corpus {
    cases: Vec<Case>,
    build_time: Duration,
}

const CORPUS_SIZE: u32 = 500;
const CORPUS_SEED: u64 = 0xD15701;

fn corpus() -> &'static Corpus {
    static CORPUS: OnceLock<Corpus> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let start = Instant::now();
        let mut cases = Vec::with_capacity(CORPUS_SIZE as usize);
        for i in 0..CORPUS_SIZE {
            let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED.wrapping_add(u64::from(i)));
            let n = rng.gen_range(2..=8);
            let m = rng.gen_range(1..=n * (n - 1) / 2);
            let g = random_digraph(&mut rng, n, m);
            let (s, t) = random_endpoints(&mut rng, n);

            let edge_plain_k = max_edge_disjoint(&g, s, t, false).unwrap().k;
            let edge_resume_k = max_edge_disjoint(&g, s, t, true).unwrap().k;
            let kinds = [
                ProgramKind { mode: PathMode::Edge, optimized: false },
                ProgramKind { mode: PathMode::Edge, optimized: true },
                ProgramKind { mode: PathMode::Node, optimized: false },
                ProgramKind { mode: PathMode::Node, optimized: true },
            ];
            let runs = kinds.map(|kind| {
                verify_case(&g, s, t, kind, None, true).expect("valid endpoints")
            });
            cases.push(Case {
                edge_plain_k,
                edge_resume_k,
                runs,
            });
        }
        Corpus {
            cases,
            build_time: start.elapsed(),
        }
    })
}

#[test]
fn acceptance_1_neighbor_discovery_exact() {
    let g = six_cell_module();
    let start = Instant::now();
    let prog = CompiledProgram::new(&discovery_templates(), 6, InstanceOrder::Ascending);
    let initial = initial_configuration(&g, 1, 6).unwrap();
    let out = run(initial, &prog, &g, 100, true);
    let elapsed = start.elapsed();

    let expected: [&[u32]; 6] = [
        &[2, 4],
        &[1, 3, 4],
        &[2, 4, 5, 6],
        &[1, 2, 3, 5],
        &[3, 4, 6],
        &[3, 5],
    ];
    let mut exact = out.halted && out.audit_errors.is_empty();
    for cell in 1u32..=6 {
        let mut learned: Vec<u32> = out
            .final_config
            .cell(cell)
            .contents
            .iter()
            .filter(|(o, _)| o.base() == Base::N)
            .map(|(o, _)| o.index().unwrap())
            .collect();
        learned.sort_unstable();
        exact &= learned == expected[(cell - 1) as usize];
    }
    criterion(
        1,
        exact && elapsed < Duration::from_secs(1),
        &format!(
            "discovery learns every neighbor set exactly in {} steps ({:?})",
            out.steps, elapsed
        ),
    );
}

#[test]
fn acceptance_2_edge_disjoint_desk_run() {
    let g = six_cell_module();
    let kind = ProgramKind {
        mode: PathMode::Edge,
        optimized: false,
    };
    let report = verify_case(&g, 1, 6, kind, Some(200), true).unwrap();
    let sol = &report.solution;
    let pass = report.ok()
        && report.engine_k == 2
        && sol.succs_of(1).len() == 2
        && sol.preds_of(6).len() == 2
        && report.steps <= 200;
    criterion(
        2,
        pass,
        &format!(
            "edge program: k={} = |C_1|={} = |P_6|={}, validators clean, oracle k={}, {} steps (≤ 200)",
            report.engine_k,
            sol.succs_of(1).len(),
            sol.preds_of(6).len(),
            report.oracle_k,
            report.steps
        ),
    );
}

#[test]
fn acceptance_3_node_disjoint_desk_run() {
    let g = six_cell_module();
    let kind = ProgramKind {
        mode: PathMode::Node,
        optimized: false,
    };
    let report = verify_case(&g, 1, 6, kind, Some(200), true).unwrap();
    let sol = &report.solution;
    let capacities = (2u32..=5).all(|i| {
        sol.succs_of(i).len() == sol.preds_of(i).len() && sol.succs_of(i).len() <= 1
    });
    let pass = report.ok() && report.engine_k == 2 && capacities && report.steps <= 200;
    criterion(
        3,
        pass,
        &format!(
            "node program: k={}, every intermediate |C_i| = |P_i| ≤ 1, validators clean, {} steps (≤ 200)",
            report.engine_k, report.steps
        ),
    );
}

#[test]
fn acceptance_4_two_path_fixture() {
    let g = two_path_digraph();
    let oracle_edge = max_edge_disjoint(&g, 1, 6, false).unwrap().k;
    let oracle_node = max_node_disjoint(&g, 1, 6).unwrap().k;
    let edge = verify_case(
        &g,
        1,
        6,
        ProgramKind { mode: PathMode::Edge, optimized: false },
        None,
        true,
    )
    .unwrap();
    let node = verify_case(
        &g,
        1,
        6,
        ProgramKind { mode: PathMode::Node, optimized: false },
        None,
        true,
    )
    .unwrap();
    let pass = oracle_edge == 2
        && oracle_node == 2
        && edge.ok()
        && node.ok()
        && edge.engine_k == 2
        && node.engine_k == 2;
    criterion(
        4,
        pass,
        &format!(
            "two-path fixture: oracle edge k={oracle_edge}, node k={oracle_node}, distributed edge k={}, node k={}",
            edge.engine_k, node.engine_k
        ),
    );
}

#[test]
fn acceptance_5_resume_and_optimized_invariance() {
    let corpus = corpus();
    let mut resume_mismatches = 0;
    let mut program_mismatches = 0;
    for case in &corpus.cases {
        if case.edge_plain_k != case.edge_resume_k {
            resume_mismatches += 1;
        }
        if case.runs[0].engine_k != case.runs[1].engine_k
            || case.runs[2].engine_k != case.runs[3].engine_k
        {
            program_mismatches += 1;
        }
    }
    let within_budget = corpus.build_time < Duration::from_secs(30);
    criterion(
        5,
        resume_mismatches == 0 && program_mismatches == 0 && within_budget,
        &format!(
            "over {} modules: resume-scan oracle mismatches={resume_mismatches}, optimized-program k mismatches={program_mismatches}, corpus built in {:?} (< 30 s)",
            corpus.cases.len(),
            corpus.build_time
        ),
    );
}

#[test]
fn acceptance_6_menger_cross_check() {
    let mut checked = 0;
    let mut mismatches = 0;
    let mut draw = 0u64;
    while checked < 200 {
        let mut rng = ChaCha8Rng::seed_from_u64(0x3E16E5 + draw);
        draw += 1;
        let n = rng.gen_range(3..=8);
        let m = rng.gen_range(1..=n * (n - 1) / 2);
        let g = random_digraph(&mut rng, n, m);
        let (s, t) = random_endpoints(&mut rng, n);
        if g.are_neighbors(s, t) {
            continue;
        }
        let k = max_node_disjoint(&g, s, t).unwrap().k;
        if min_node_cut_bruteforce(&g, s, t).unwrap() != MinNodeCut::Size(k) {
            mismatches += 1;
        }
        checked += 1;
    }
    criterion(
        6,
        mismatches == 0,
        &format!("node-disjoint count equals brute-force minimum node cut on {checked} modules, mismatches={mismatches}"),
    );
}

#[test]
fn acceptance_7_distributed_equals_centralized() {
    let corpus = corpus();
    let mut failures = 0;
    let mut detail = String::new();
    for (i, case) in corpus.cases.iter().enumerate() {
        for report in &case.runs {
            if !report.ok() {
                failures += 1;
                if detail.is_empty() {
                    detail = format!(" (first: module {i}: {:?})", report.failures());
                }
            }
        }
    }
    criterion(
        7,
        failures == 0,
        &format!(
            "{} runs over {} modules: k equals oracle k and all validators pass, failures={failures}{detail}",
            corpus.cases.len() * 4,
            corpus.cases.len()
        ),
    );
}

#[test]
fn acceptance_8_step_bound() {
    let corpus = corpus();
    let mut max_ratio: f64 = 0.0;
    let mut over_budget = 0;
    for case in &corpus.cases {
        for report in &case.runs {
            max_ratio = max_ratio.max(report.step_ratio);
            if report.step_ratio > 20.0 {
                over_budget += 1;
            }
        }
    }
    criterion(
        8,
        over_budget == 0,
        &format!(
            "max observed steps/(m·n) ratio = {max_ratio:.3} over {} runs (bound 20)",
            corpus.cases.len() * 4
        ),
    );
}

#[test]
fn acceptance_9_weak_priority_and_object_balance() {
    let corpus = corpus();
    let mut violations = 0;
    for case in &corpus.cases {
        for report in &case.runs {
            violations += report.audit_errors.len();
        }
    }
    criterion(
        9,
        violations == 0,
        &format!(
            "per-step audit (same-target rule firing, object balance, message conservation) clean over {} runs, violations={violations}",
            corpus.cases.len() * 4
        ),
    );
}
