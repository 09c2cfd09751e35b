//! Experiment plumbing: configuration, grid datasets, multi-seed runs,
//! aggregation and curated example sets.
//!
//! Files written by a run, per seed `n`: `seed_n.csv` (per-episode metrics),
//! `seed_n_relearn.csv`, `seed_n_summary.json`, and the final automaton as
//! `seed_n_automaton.json` / `.dot`.  Automaton JSON holds the alphabet, the
//! state names (`u0`, `u1`, …, `uA`, `uR`) and one entry per edge disjunct
//! with the names of its positive and negative literals.

pub mod aggregate;
pub mod config;
pub mod curate;
pub mod dataset;
pub mod run;

use thiserror::Error;

pub use aggregate::{
    aggregate_files, aggregate_rewards, induction_table, AggregateError, AggregateRow, RunSummary,
};
pub use config::{parse_seeds, ConfigError, ExperimentConfig};
pub use dataset::Dataset;
pub use run::{run_all, run_seed};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Env(#[from] crate::env::EnvError),
    #[error(transparent)]
    Automaton(#[from] crate::automaton::AutomatonError),
    #[error(transparent)]
    Induction(#[from] crate::induction::InductionError),
    #[error(transparent)]
    Aggregate(#[from] AggregateError),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Other(String),
}
