//! Running a configured experiment over its seeds and writing the results.

use std::path::{Path, PathBuf};

use crate::automaton::SubgoalAutomaton;
use crate::interleave::{run_experiment, RelearnEvent, RunOutput};

use super::aggregate::{
    aggregate_rewards, format_aggregate, format_metrics, induction_table, RunSummary,
};
use super::config::ExperimentConfig;
use super::dataset::Dataset;
use super::HarnessError;

pub struct SeedResult {
    pub seed: u64,
    pub output: RunOutput,
    pub summary: RunSummary,
}

/// The grid set every seed trains on: a dataset file, or one generated
/// from the dataset seed.
pub fn dataset_for(cfg: &ExperimentConfig) -> Result<Dataset, HarnessError> {
    match &cfg.dataset {
        Some(path) => Ok(Dataset::from_json(&read(path)?)?),
        None => Ok(Dataset::generate(
            cfg.domain,
            cfg.num_envs,
            cfg.dataset_seed,
        )?),
    }
}

pub fn initial_automaton(cfg: &ExperimentConfig) -> Result<SubgoalAutomaton, HarnessError> {
    match &cfg.handcrafted {
        Some(path) => {
            let a = SubgoalAutomaton::from_json(&read(path)?)?;
            if a.alphabet() != &cfg.domain.alphabet() {
                return Err(HarnessError::Other(format!(
                    "{} uses a different alphabet",
                    path.display()
                )));
            }
            Ok(a)
        }
        None => Ok(SubgoalAutomaton::new(cfg.domain.alphabet(), 0, true, true)),
    }
}

pub fn run_seed(cfg: &ExperimentConfig, seed: u64) -> Result<SeedResult, HarnessError> {
    let dataset = dataset_for(cfg)?;
    let mut envs = dataset.environments(cfg.task)?;
    let initial = initial_automaton(cfg)?;
    let output = run_experiment(&mut envs, cfg.episodes, &cfg.algo_config(), initial, seed);
    let summary = summarize(seed, &output);
    Ok(SeedResult {
        seed,
        output,
        summary,
    })
}

fn summarize(seed: u64, out: &RunOutput) -> RunSummary {
    let events = &out.state.relearn_events;
    let last = out.timed_out.as_ref().or(events.last().map(|e| &e.stats));
    let solver: f64 = events
        .iter()
        .map(|e| e.stats.wall_time.as_secs_f64())
        .sum::<f64>()
        + out
            .timed_out
            .as_ref()
            .map_or(0.0, |s| s.wall_time.as_secs_f64());
    RunSummary {
        seed,
        timed_out: out.timed_out.is_some(),
        automata_learned: events.len(),
        final_states: out.state.automaton.num_states(),
        solver_time_s: solver,
        n_goal: last.map_or(0, |s| s.n_goal),
        n_dead: last.map_or(0, |s| s.n_dead),
        n_inc: last.map_or(0, |s| s.n_inc),
        mean_len: last.map_or(0.0, |s| s.mean_len),
        std_len: last.map_or(0.0, |s| s.std_len),
    }
}

/// Files written for one seed, all prefixed `seed_<n>`.
pub fn write_seed(dir: &Path, r: &SeedResult) -> Result<PathBuf, HarnessError> {
    let stem = dir.join(format!("seed_{}", r.seed));
    let with = |suffix: &str| PathBuf::from(format!("{}{suffix}", stem.display()));
    let metrics = with(".csv");
    write(&metrics, &format_metrics(&r.output.metrics))?;
    let mut relearn = format!("{}\n", RelearnEvent::CSV_HEADER);
    for e in &r.output.state.relearn_events {
        relearn.push_str(&e.csv_row());
        relearn.push('\n');
    }
    write(&with("_relearn.csv"), &relearn)?;
    write(
        &with("_summary.json"),
        &serde_json::to_string_pretty(&r.summary).unwrap(),
    )?;
    write(
        &with("_automaton.json"),
        &r.output.state.automaton.to_json(),
    )?;
    write(&with("_automaton.dot"), &r.output.state.automaton.to_dot())?;
    Ok(metrics)
}

/// Runs every seed (on up to `threads` workers), writes per-seed files,
/// `aggregate.csv` and `induction_stats.csv`, and returns the summaries.
pub fn run_all(
    cfg: &ExperimentConfig,
    dir: &Path,
    threads: usize,
) -> Result<Vec<RunSummary>, HarnessError> {
    std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    write(&dir.join("config.toml"), &cfg.to_toml())?;
    let threads = threads.max(1);
    let mut results: Vec<Option<Result<SeedResult, HarnessError>>> =
        (0..cfg.seeds.len()).map(|_| None).collect();
    for (chunk_seeds, chunk_out) in cfg.seeds.chunks(threads).zip(results.chunks_mut(threads)) {
        std::thread::scope(|scope| {
            let handles: Vec<_> = chunk_seeds
                .iter()
                .map(|&s| scope.spawn(move || run_seed(cfg, s)))
                .collect();
            for (h, slot) in handles.into_iter().zip(chunk_out.iter_mut()) {
                *slot = Some(h.join().expect("worker panicked"));
            }
        });
    }
    let mut summaries = Vec::new();
    let mut curves = Vec::new();
    for r in results {
        let r = r.unwrap()?;
        write_seed(dir, &r)?;
        curves.push(
            r.output
                .metrics
                .iter()
                .map(|m| m.greedy_mean_reward)
                .collect::<Vec<_>>(),
        );
        summaries.push(r.summary);
    }
    let timed_out: Vec<bool> = summaries.iter().map(|s| s.timed_out).collect();
    let rows = aggregate_rewards(&curves, &timed_out)?;
    write(&dir.join("aggregate.csv"), &format_aggregate(&rows))?;
    write(
        &dir.join("induction_stats.csv"),
        &induction_table(&summaries),
    )?;
    Ok(summaries)
}

fn read(path: &Path) -> Result<String, HarnessError> {
    std::fs::read_to_string(path).map_err(|e| io(path, e))
}

fn write(path: &Path, text: &str) -> Result<(), HarnessError> {
    std::fs::write(path, text).map_err(|e| io(path, e))
}

fn io(path: &Path, e: std::io::Error) -> HarnessError {
    HarnessError::Io(format!("{}: {e}", path.display()))
}
