use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand};

use subgoal_automata::automaton::SubgoalAutomaton;
use subgoal_automata::env::Domain;
use subgoal_automata::harness::{self, aggregate, parse_seeds, Dataset, ExperimentConfig};
use subgoal_automata::induction::{learn_minimal_automaton, InductionConfig};
use subgoal_automata::trace::TraceSet;

#[derive(Parser)]
#[command(
    name = "subgoal",
    version,
    about = "Learn subgoal automata while training RL agents on grid worlds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment over one or more seeds.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// `0..4` (inclusive), `3` or `0,2,5`; overrides the config.
        #[arg(long)]
        seeds: Option<String>,
        #[arg(long, default_value = "results")]
        out: PathBuf,
        #[arg(long)]
        episodes: Option<usize>,
        #[arg(long)]
        num_envs: Option<usize>,
        /// Use this automaton throughout instead of learning one.
        #[arg(long)]
        handcrafted: Option<PathBuf>,
        #[arg(long)]
        dataset_seed: Option<u64>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Learn a minimal automaton from a trace file.
    Induce {
        #[arg(long)]
        traces: PathBuf,
        /// Take the alphabet from a domain instead of the trace file.
        #[arg(long)]
        domain: Option<Domain>,
        #[arg(long, default_value_t = 1)]
        kappa: usize,
        #[arg(long)]
        acyclic: bool,
        #[arg(long)]
        no_purely_negative: bool,
        /// Compress the traces before learning.
        #[arg(long)]
        compressed: bool,
        #[arg(long, default_value_t = 12)]
        max_states: usize,
        #[arg(long, default_value_t = 600)]
        timeout_secs: u64,
        /// Comma-separated observables allowed on edges.
        #[arg(long, value_delimiter = ',')]
        restricted_alphabet: Option<Vec<String>>,
        #[arg(long)]
        no_symmetry_breaking: bool,
        /// Write the automaton JSON here, with `.dot` and `.csv` (stats)
        /// siblings, instead of JSON to stdout and stats to stderr.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a reproducible set of grids.
    GenDataset {
        #[arg(long)]
        domain: Domain,
        #[arg(long, default_value_t = 50)]
        num_envs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mean and standard error of the greedy reward across per-seed CSVs.
    Aggregate {
        files: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert automaton JSON to Graphviz DOT.
    ExportDot {
        automaton: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), String> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), String> {
    match cli.command {
        Command::Run {
            config,
            seeds,
            out,
            episodes,
            num_envs,
            handcrafted,
            dataset_seed,
            threads,
        } => {
            let mut cfg = ExperimentConfig::load(&config)
                .map_err(|e| format!("{}: {e}", config.display()))?;
            if let Some(s) = seeds {
                cfg.seeds = parse_seeds(&s)?;
            }
            cfg.episodes = episodes.unwrap_or(cfg.episodes);
            cfg.num_envs = num_envs.unwrap_or(cfg.num_envs);
            cfg.handcrafted = handcrafted.or(cfg.handcrafted);
            cfg.dataset_seed = dataset_seed.unwrap_or(cfg.dataset_seed);
            cfg.validate().map_err(|e| e.to_string())?;
            let threads = threads
                .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            let summaries = harness::run_all(&cfg, &out, threads).map_err(|e| e.to_string())?;
            for s in &summaries {
                eprintln!(
                    "seed {}: {} automata learned, final automaton has {} states{}",
                    s.seed,
                    s.automata_learned,
                    s.final_states,
                    if s.timed_out {
                        " (solver timed out)"
                    } else {
                        ""
                    }
                );
            }
            eprintln!("results in {}", out.display());
            Ok(())
        }
        Command::Induce {
            traces,
            domain,
            kappa,
            acyclic,
            no_purely_negative,
            compressed,
            max_states,
            timeout_secs,
            restricted_alphabet,
            no_symmetry_breaking,
            out,
        } => {
            let fixed = domain.map(Domain::alphabet);
            let (alphabet, mut set) = TraceSet::parse_file(&read(&traces)?, fixed.as_ref())
                .map_err(|e| format!("{}: {e}", traces.display()))?;
            if compressed {
                set = set.compress();
            }
            let cfg = InductionConfig {
                kappa,
                max_states,
                enforce_acyclic: acyclic,
                forbid_purely_negative: no_purely_negative,
                forbid_unlabeled_edges: true,
                use_symmetry_breaking: !no_symmetry_breaking,
                restricted_alphabet,
                timeout: Duration::from_secs(timeout_secs),
            };
            let (a, stats) =
                learn_minimal_automaton(&set, &alphabet, 0, &cfg).map_err(|e| e.to_string())?;
            let stats = format!(
                "{}\n{}\n",
                subgoal_automata::induction::InductionStats::CSV_HEADER,
                stats.csv_row()
            );
            match out {
                Some(p) => {
                    emit(Some(&p), &a.to_json())?;
                    emit(Some(&p.with_extension("dot")), &a.to_dot())?;
                    emit(Some(&p.with_extension("csv")), &stats)
                }
                None => {
                    eprint!("{stats}");
                    emit(None, &a.to_json())
                }
            }
        }
        Command::GenDataset {
            domain,
            num_envs,
            seed,
            out,
        } => {
            let d = Dataset::generate(domain, num_envs, seed).map_err(|e| e.to_string())?;
            emit(out.as_deref(), &(d.to_json() + "\n"))
        }
        Command::Aggregate { files, out } => {
            let rows = aggregate::aggregate_files(&files).map_err(|e| e.to_string())?;
            emit(out.as_deref(), &aggregate::format_aggregate(&rows))
        }
        Command::ExportDot { automaton, out } => {
            let a = SubgoalAutomaton::from_json(&read(&automaton)?)
                .map_err(|e| format!("{}: {e}", automaton.display()))?;
            emit(out.as_deref(), &a.to_dot())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
