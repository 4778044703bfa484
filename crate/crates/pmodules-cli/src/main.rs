use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pmodules::engine::{render_trace, run, CompiledProgram};
use pmodules::flowcheck::solution_from_configuration;
use pmodules::programs::{
    dump_templates, initial_configuration, templates_for, PathMode, ProgramKind,
};
use pmodules::rules::InstanceOrder;
use pmodules::{CellId, Digraph};
use pmodules_cli::fuzz::{fuzz, FuzzParams, ModeChoice, OptimizedChoice};
use pmodules_cli::verify::{default_max_steps, verify_case};
use pmodules_cli::{parse_graph, VerifyError};

/// Simple P module simulator: distributed edge- and node-disjoint path
/// programs on arbitrary digraphs, verified against network-flow oracles.
///
/// Exit codes: 0 verified/halted, 1 mismatch or step-bound exhaustion,
/// 2 input error.
#[derive(Parser)]
#[command(name = "pmod", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a path program and print k plus the per-cell routing tables.
    Run(RunArgs),
    /// Run program and oracle; nonzero exit on any disagreement.
    Verify(RunArgs),
    /// Verify many random modules, deterministically under a fixed seed.
    Fuzz(FuzzArgs),
    /// Print a program's rule templates, one per line.
    Rules(RulesArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Maximum edge-disjoint paths.
    Edge,
    /// Maximum node-disjoint paths.
    Node,
}

impl From<ModeArg> for PathMode {
    fn from(m: ModeArg) -> PathMode {
        match m {
            ModeArg::Edge => PathMode::Edge,
            ModeArg::Node => PathMode::Node,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Graph file: header "n m", then m structural arcs "u v" (1-based).
    #[arg(long)]
    graph: PathBuf,
    /// Source cell ID.
    #[arg(long)]
    source: CellId,
    /// Target cell ID.
    #[arg(long)]
    target: CellId,
    /// Which path program to run.
    #[arg(long, value_enum)]
    mode: ModeArg,
    /// Use the variant of rule 5.3 that never retries failed source arcs.
    #[arg(long)]
    optimized: bool,
    /// Print the full trace table before the summary.
    #[arg(long)]
    trace: bool,
    /// Step budget; defaults to 20·m·n.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    max_steps: Option<u32>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FuzzModeArg {
    Edge,
    Node,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum FuzzOptArg {
    Off,
    On,
    Both,
}

#[derive(Args)]
struct FuzzArgs {
    /// Cells per random module (at least 2).
    #[arg(long)]
    cells: u32,
    /// Structural arcs per module (capped at n(n-1)/2).
    #[arg(long)]
    arcs: u32,
    /// Number of random modules.
    #[arg(long)]
    iters: u32,
    /// Base RNG seed; iteration i uses seed + i.
    #[arg(long)]
    seed: u64,
    /// Which programs to exercise.
    #[arg(long, value_enum, default_value = "both")]
    mode: FuzzModeArg,
    /// Which rule-5.3 variants to exercise.
    #[arg(long, value_enum, default_value = "both")]
    optimized: FuzzOptArg,
}

#[derive(Args)]
struct RulesArgs {
    /// Which path program to dump.
    #[arg(long, value_enum)]
    mode: ModeArg,
    /// Dump the optimized rule 5.3 variant.
    #[arg(long)]
    optimized: bool,
}

const EXIT_MISMATCH: u8 = 1;
const EXIT_INPUT: u8 = 2;

fn load_graph(path: &Path) -> Result<Digraph, String> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_graph(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn fmt_set(set: &BTreeSet<CellId>) -> String {
    let inner: Vec<String> = set.iter().map(u32::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

fn cmd_run(args: &RunArgs) -> Result<ExitCode, String> {
    let g = load_graph(&args.graph)?;
    let kind = ProgramKind {
        mode: args.mode.into(),
        optimized: args.optimized,
    };
    let initial = initial_configuration(&g, args.source, args.target)
        .map_err(|e| e.to_string())?;
    let prog = CompiledProgram::new(&templates_for(kind), g.n(), InstanceOrder::Ascending);
    let max_steps = args.max_steps.unwrap_or_else(|| default_max_steps(&g));
    let out = run(initial, &prog, &g, max_steps, false);
    if args.trace {
        print!("{}", render_trace(&out.trace));
    }
    match solution_from_configuration(&out.final_config, args.source) {
        Ok(sol) => {
            println!("k={}", sol.k);
            println!("steps={}", out.steps);
            for cell in 1..=g.n() {
                println!(
                    "σ{cell}: P={} C={}",
                    fmt_set(sol.preds_of(cell)),
                    fmt_set(sol.succs_of(cell))
                );
            }
        }
        Err(e) => {
            println!("steps={}", out.steps);
            eprintln!("malformed output: {e}");
            return Ok(ExitCode::from(EXIT_MISMATCH));
        }
    }
    if !out.halted {
        eprintln!("step bound exhausted after {} steps without quiescence", out.steps);
        return Ok(ExitCode::from(EXIT_MISMATCH));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: &RunArgs) -> Result<ExitCode, String> {
    let g = load_graph(&args.graph)?;
    let kind = ProgramKind {
        mode: args.mode.into(),
        optimized: args.optimized,
    };
    let report = match verify_case(&g, args.source, args.target, kind, args.max_steps, true) {
        Ok(report) => report,
        Err(e @ (VerifyError::CellOutOfRange(..) | VerifyError::SameSourceTarget)) => {
            return Err(e.to_string())
        }
    };
    println!("distributed: k={} in {} steps", report.engine_k, report.steps);
    println!("oracle:      k={}", report.oracle_k);
    if report.ok() {
        let paths: Vec<String> = report
            .paths
            .iter()
            .map(|p| {
                p.iter()
                    .map(u32::to_string)
                    .collect::<Vec<_>>()
                    .join(".")
            })
            .collect();
        println!("paths:       {}", if paths.is_empty() { "(none)".into() } else { paths.join(", ") });
        println!("verified");
        Ok(ExitCode::SUCCESS)
    } else {
        for failure in report.failures() {
            println!("FAIL: {failure}");
        }
        Ok(ExitCode::from(EXIT_MISMATCH))
    }
}

fn cmd_fuzz(args: &FuzzArgs) -> Result<ExitCode, String> {
    if args.cells < 2 {
        return Err("--cells must be at least 2".into());
    }
    let params = FuzzParams {
        cells: args.cells,
        arcs: args.arcs,
        iters: args.iters,
        seed: args.seed,
        mode: match args.mode {
            FuzzModeArg::Edge => ModeChoice::Edge,
            FuzzModeArg::Node => ModeChoice::Node,
            FuzzModeArg::Both => ModeChoice::Both,
        },
        optimized: match args.optimized {
            FuzzOptArg::Off => OptimizedChoice::Off,
            FuzzOptArg::On => OptimizedChoice::On,
            FuzzOptArg::Both => OptimizedChoice::Both,
        },
    };
    let summary = fuzz(&params);
    for failure in &summary.failures {
        print!("{failure}");
    }
    println!("{summary}");
    if summary.failed == 0 {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(EXIT_MISMATCH))
    }
}

fn cmd_rules(args: &RulesArgs) -> ExitCode {
    let kind = ProgramKind {
        mode: args.mode.into(),
        optimized: args.optimized,
    };
    print!("{}", dump_templates(&templates_for(kind)));
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Fuzz(args) => cmd_fuzz(args),
        Command::Rules(args) => Ok(cmd_rules(args)),
    };
    match result {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
