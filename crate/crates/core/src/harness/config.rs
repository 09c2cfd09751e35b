//! Experiment configuration, stored as TOML.
//!
//! ```toml
//! domain = "officeworld"          # or "craftworld"
//! task = "coffee"
//! algorithm = "hrl_g"             # hrl | hrl_g | qrm | qrm_min | qrm_max
//! episodes = 10000
//! max_episode_length = 250
//! num_envs = 50
//! seeds = [0, 1, 2]
//! dataset_seed = 0                # the grid set shared by every seed
//! # dataset = "grids.json"        # or a dataset file
//! # handcrafted = "coffee.json"   # fixed automaton, no induction
//!
//! [rl]
//! alpha = 0.1
//! epsilon = 0.1
//! gamma = 0.99
//! random_ties = true
//!
//! [induction]
//! kappa = 1
//! acyclic = true
//! compressed = true
//! no_purely_negative = true
//! symmetry_breaking = true
//! max_states = 12
//! timeout_secs = 7200
//! # restricted_alphabet = ["coffee", "office", "decoration"]
//! ```

use std::path::PathBuf;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::env::{Domain, Task};
use crate::induction::InductionConfig;
use crate::interleave::{AlgoConfig, Algorithm};
use crate::policy::RLParams;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{0}")]
    Parse(String),
    #[error("invalid `{field}`: {message}")]
    Invalid {
        field: &'static str,
        message: String,
    },
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

fn invalid(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field,
        message: message.into(),
    }
}

mod as_str {
    use std::fmt::Display;
    use std::str::FromStr;

    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr<Err = String>,
        D: Deserializer<'de>,
    {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InductionSection {
    pub kappa: usize,
    pub acyclic: bool,
    pub compressed: bool,
    pub no_purely_negative: bool,
    pub symmetry_breaking: bool,
    pub max_states: usize,
    pub timeout_secs: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restricted_alphabet: Option<Vec<String>>,
}

impl Default for InductionSection {
    fn default() -> Self {
        let d = InductionConfig::default();
        InductionSection {
            kappa: d.kappa,
            acyclic: d.enforce_acyclic,
            compressed: true,
            no_purely_negative: d.forbid_purely_negative,
            symmetry_breaking: d.use_symmetry_breaking,
            max_states: d.max_states,
            timeout_secs: d.timeout.as_secs(),
            restricted_alphabet: None,
        }
    }
}

impl InductionSection {
    pub fn to_induction_config(&self) -> InductionConfig {
        InductionConfig {
            kappa: self.kappa,
            max_states: self.max_states,
            enforce_acyclic: self.acyclic,
            forbid_purely_negative: self.no_purely_negative,
            forbid_unlabeled_edges: true,
            use_symmetry_breaking: self.symmetry_breaking,
            restricted_alphabet: self.restricted_alphabet.clone(),
            timeout: Duration::from_secs(self.timeout_secs),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(with = "as_str")]
    pub domain: Domain,
    #[serde(with = "as_str")]
    pub task: Task,
    #[serde(with = "as_str")]
    pub algorithm: Algorithm,
    #[serde(default = "defaults::episodes")]
    pub episodes: usize,
    #[serde(default = "defaults::max_episode_length")]
    pub max_episode_length: usize,
    #[serde(default = "defaults::num_envs")]
    pub num_envs: usize,
    #[serde(default = "defaults::seeds")]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub dataset_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dataset: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub handcrafted: Option<PathBuf>,
    #[serde(default)]
    pub rl: RLParams,
    #[serde(default)]
    pub induction: InductionSection,
}

mod defaults {
    pub fn episodes() -> usize {
        10_000
    }
    pub fn max_episode_length() -> usize {
        250
    }
    pub fn num_envs() -> usize {
        50
    }
    pub fn seeds() -> Vec<u64> {
        (0..20).collect()
    }
}

impl ExperimentConfig {
    /// Full-scale defaults for `task`.
    pub fn new(task: Task, algorithm: Algorithm) -> Self {
        ExperimentConfig {
            domain: task.domain(),
            task,
            algorithm,
            episodes: defaults::episodes(),
            max_episode_length: defaults::max_episode_length(),
            num_envs: defaults::num_envs(),
            seeds: defaults::seeds(),
            dataset_seed: 0,
            dataset: None,
            handcrafted: None,
            rl: RLParams::default(),
            induction: InductionSection::default(),
        }
    }

    /// A scaled-down preset that finishes in seconds.
    pub fn desk(task: Task, algorithm: Algorithm) -> Self {
        ExperimentConfig {
            episodes: 3000,
            num_envs: 10,
            seeds: (0..5).collect(),
            ..Self::new(task, algorithm)
        }
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.into(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configs serialise")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.task.domain() != self.domain {
            return Err(invalid(
                "task",
                format!("{} is not a {} task", self.task, self.domain),
            ));
        }
        if self.max_episode_length == 0 {
            return Err(invalid("max_episode_length", "must be positive"));
        }
        if self.num_envs == 0 && self.dataset.is_none() {
            return Err(invalid("num_envs", "must be positive"));
        }
        if self.seeds.is_empty() {
            return Err(invalid("seeds", "at least one seed is required"));
        }
        self.rl.validate().map_err(|m| invalid("rl", m))?;
        if self.induction.kappa == 0 {
            return Err(invalid("induction.kappa", "must be at least 1"));
        }
        if self.induction.max_states < 3 {
            return Err(invalid("induction.max_states", "must be at least 3"));
        }
        if let Some(names) = &self.induction.restricted_alphabet {
            let alphabet = self.domain.alphabet();
            if let Some(bad) = names.iter().find(|n| alphabet.id_of(n).is_none()) {
                return Err(invalid(
                    "induction.restricted_alphabet",
                    format!("unknown observable {bad:?}"),
                ));
            }
        }
        Ok(())
    }

    pub fn algo_config(&self) -> AlgoConfig {
        AlgoConfig {
            algorithm: self.algorithm,
            rl: self.rl,
            max_episode_length: self.max_episode_length,
            compressed: self.induction.compressed,
            learn_automaton: self.handcrafted.is_none(),
            induction: self.induction.to_induction_config(),
        }
    }
}

/// `3`, `0..4` (inclusive) or `0,2,5`.
pub fn parse_seeds(text: &str) -> Result<Vec<u64>, String> {
    let bad = |_| format!("bad seed list {text:?}");
    if let Some((a, b)) = text.split_once("..") {
        let (a, b): (u64, u64) = (
            a.trim().parse().map_err(bad)?,
            b.trim().parse().map_err(bad)?,
        );
        if a > b {
            return Err(format!("empty seed range {text:?}"));
        }
        return Ok((a..=b).collect());
    }
    text.split(',')
        .map(|s| s.trim().parse().map_err(bad))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_the_reference_settings() {
        let c = ExperimentConfig::parse(
            "domain = \"officeworld\"\ntask = \"coffee\"\nalgorithm = \"hrl_g\"\n",
        )
        .unwrap();
        assert_eq!((c.rl.alpha, c.rl.epsilon, c.rl.gamma), (0.1, 0.1, 0.99));
        assert_eq!(
            (c.episodes, c.num_envs, c.max_episode_length),
            (10_000, 50, 250)
        );
        assert_eq!(c.induction.kappa, 1);
        assert!(c.induction.compressed && c.induction.acyclic && c.induction.no_purely_negative);
        assert!(c.induction.restricted_alphabet.is_none());
        assert_eq!(c.seeds.len(), 20);
    }

    #[test]
    fn round_trip() {
        let mut c = ExperimentConfig::desk(Task::CoffeeMail, Algorithm::QrmMax);
        c.dataset_seed = 9;
        c.induction.restricted_alphabet = Some(vec!["coffee".into(), "mail".into()]);
        assert_eq!(ExperimentConfig::parse(&c.to_toml()).unwrap(), c);
        let craft = ExperimentConfig::new(
            Task::Craft(crate::env::CraftTask::MakeShears),
            Algorithm::Hrl,
        );
        assert_eq!(ExperimentConfig::parse(&craft.to_toml()).unwrap(), craft);
    }

    #[test]
    fn diagnostics_name_the_problem() {
        let e = ExperimentConfig::parse(
            "domain = \"officeworld\"\ntask = \"coffee\"\nalgorithm = \"hrl\"\nepisodes = -3\n",
        )
        .unwrap_err()
        .to_string();
        assert!(e.contains("line 4"), "{e}");
        let e = ExperimentConfig::parse(
            "domain = \"craftworld\"\ntask = \"coffee\"\nalgorithm = \"hrl\"\n",
        )
        .unwrap_err();
        assert!(matches!(e, ConfigError::Invalid { field: "task", .. }));
        let e = ExperimentConfig::parse(
            "domain = \"officeworld\"\ntask = \"coffee\"\nalgorithm = \"dqn\"\n",
        )
        .unwrap_err();
        assert!(e.to_string().contains("unknown algorithm"), "{e}");
        let e = ExperimentConfig::parse(
            "domain = \"officeworld\"\ntask = \"coffee\"\nalgorithm = \"qrm\"\nspeed = 2\n",
        )
        .unwrap_err();
        assert!(e.to_string().contains("speed"), "{e}");
        let e = ExperimentConfig::parse(
            "domain = \"officeworld\"\ntask = \"coffee\"\nalgorithm = \"qrm\"\n[rl]\nalpha = 0.1\nepsilon = 2.0\ngamma = 0.9\n",
        )
        .unwrap_err();
        assert!(matches!(e, ConfigError::Invalid { field: "rl", .. }));
    }

    #[test]
    fn seed_lists() {
        assert_eq!(parse_seeds("0..4").unwrap(), vec![0, 1, 2, 3, 4]);
        assert_eq!(parse_seeds("3").unwrap(), vec![3]);
        assert_eq!(parse_seeds("1, 5,2").unwrap(), vec![1, 5, 2]);
        assert!(parse_seeds("4..1").is_err());
        assert!(parse_seeds("x").is_err());
    }
}
