//! `icmech` command-line front end.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use icmech::experiment::{run_experiment, to_csv, ExperimentConfig};
use icmech::mechanism::{run_mechanism_in_mode, Bids, MechanismId, MechanismOptions};
use icmech::model::io::{instance_to_json, read_instance};
use icmech::model::{parse_micro, DecodeMode, Instance, ReportProfile, Scenario};
use icmech::oracle::{
    gen_from_cycle_packing, gen_from_independent_set, gen_random_instance, optimal_sparse_welfare, parse_edge_list,
    truthfulness_audit, Limits,
};
use icmech::{Error, Result};
use serde_json::json;

#[derive(Parser)]
#[command(name = "icmech", version, about = "Index coding with truthful payments")]
struct Cli {
    /// Seed for generators; overrides the experiment base seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Largest client count accepted by the exhaustive VCG schemes.
    #[arg(long, global = true, default_value_t = 8)]
    guard_n: usize,
    /// Worker threads (0 picks the number of cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args)]
struct Run {
    instance: PathBuf,
    #[arg(long)]
    mechanism: MechanismId,
    /// Decoding mode; defaults to the mechanism's own.
    #[arg(long)]
    mode: Option<DecodeMode>,
}

#[derive(Subcommand)]
enum Command {
    /// Code and charge one instance; prints the outcome.
    Solve(Run),
    /// Payments only.
    Price(Run),
    /// Sweep unilateral deviations and check the truthfulness conditions.
    Audit {
        instance: PathBuf,
        #[arg(long)]
        mechanism: MechanismId,
        /// Comma-separated decimal valuations; defaults to 0, 0.1, ..., 1.2.
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<String>>,
    },
    /// Run a simulation campaign and write CSV.
    Experiment {
        config: PathBuf,
        /// Overrides the configured output path.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Optimal sparse welfare by exhaustive cycle packing.
    Oracle {
        instance: PathBuf,
        #[arg(long, default_value_t = DecodeMode::General)]
        mode: DecodeMode,
    },
    /// Generate an instance.
    #[command(subcommand)]
    Gen(Gen),
    /// Print the dependency graph in DOT.
    Graph { instance: PathBuf },
}

#[derive(Subcommand)]
enum Gen {
    /// Random unicast instance.
    Random {
        #[arg(long)]
        n: usize,
        /// Side information size.
        #[arg(long)]
        h: usize,
    },
    /// Independent-set reduction from an undirected edge list.
    Isred {
        edges: PathBuf,
        /// Print provenance and expected optima along with the instance.
        #[arg(long)]
        full: bool,
    },
    /// Cycle-packing reduction from a directed edge list.
    Cpred {
        edges: PathBuf,
        #[arg(long)]
        full: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::SizeGuard { .. } => 2,
                _ => 1,
            })
        }
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn load(path: &Path) -> Result<(Instance, ReportProfile)> {
    let (inst, reports) = read_instance(path)?;
    let reports = reports.unwrap_or_else(|| inst.truthful_reports());
    Ok((inst, reports))
}

fn run(cli: &Cli) -> Result<String> {
    let opts = MechanismOptions { guard_n: cli.guard_n };
    match &cli.cmd {
        Command::Solve(r) => {
            let (inst, reports) = load(&r.instance)?;
            let mode = r.mode.unwrap_or(r.mechanism.native_mode());
            let out = run_mechanism_in_mode(&inst, &reports, r.mechanism, mode, &opts)?;
            Ok(pretty(&json!({ "mechanism": r.mechanism, "mode": mode, "outcome": out })))
        }
        Command::Price(r) => {
            let (inst, reports) = load(&r.instance)?;
            let mode = r.mode.unwrap_or(r.mechanism.native_mode());
            let out = run_mechanism_in_mode(&inst, &reports, r.mechanism, mode, &opts)?;
            Ok(pretty(&json!({ "mechanism": r.mechanism, "payments": out.payments })))
        }
        Command::Audit { instance, mechanism, grid } => {
            let (inst, _) = load(instance)?;
            let grid = match grid {
                Some(g) => g.iter().map(|s| parse_micro(s)).collect::<Result<Vec<_>>>()?,
                None => (0..=12).map(|k| k * 100_000).collect(),
            };
            Ok(pretty(&truthfulness_audit(&inst, *mechanism, &grid, &opts, &Limits::default())?))
        }
        Command::Experiment { config, output } => {
            let text = std::fs::read_to_string(config)?;
            let mut cfg: ExperimentConfig = serde_json::from_str(&text)?;
            if let Some(s) = cli.seed {
                cfg.base_seed = s;
            }
            if output.is_some() {
                cfg.output = output.clone();
            }
            let csv = to_csv(&run_experiment(&cfg, &opts)?);
            match &cfg.output {
                Some(path) => {
                    std::fs::write(path, &csv)?;
                    Ok(String::new())
                }
                None => Ok(csv),
            }
        }
        Command::Oracle { instance, mode } => {
            let (inst, reports) = load(instance)?;
            inst.check(Scenario::Unicast)?;
            let bids = Bids::new(inst.wants(), &reports);
            let limits = Limits { cycle_vertices: cli.guard_n.max(Limits::default().cycle_vertices), ..Limits::default() };
            let (coding, welfare) = optimal_sparse_welfare(&bids, *mode, &limits)?;
            Ok(pretty(&json!({ "mode": mode, "welfare": welfare, "coding": coding })))
        }
        Command::Gen(g) => gen(g, cli.seed.unwrap_or(0)),
        Command::Graph { instance } => {
            let (inst, reports) = load(instance)?;
            inst.check(Scenario::Unicast)?;
            Ok(Bids::new(inst.wants(), &reports).graph().to_dot())
        }
    }
}

fn gen(g: &Gen, seed: u64) -> Result<String> {
    let reduction = |path: &Path, directed: bool, full: bool| -> Result<String> {
        let edges = parse_edge_list(&std::fs::read_to_string(path)?, directed)?;
        let r = if directed { gen_from_cycle_packing(&edges)? } else { gen_from_independent_set(&edges)? };
        Ok(if full { pretty(&r) } else { instance_to_json(&r.instance, None) })
    };
    match g {
        Gen::Random { n, h } => Ok(instance_to_json(&gen_random_instance(*n, *h, seed)?, None)),
        Gen::Isred { edges, full } => reduction(edges, false, *full),
        Gen::Cpred { edges, full } => reduction(edges, true, *full),
    }
}
