//! Induction of minimal subgoal automata from labelled traces.

pub mod canonical;
mod labeling;
pub mod labels;
pub mod oracle;
mod solver;

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::automaton::{Alphabet, SubgoalAutomaton};
use crate::trace::TraceSet;

pub use canonical::{canonical_key, canonicalize, check_canonical, is_canonical};
pub use labels::{label_set_less, LabelSet};
pub use oracle::{brute_force_oracle, oracle_feasible, oracle_min_cost, OracleReport};
pub use solver::solve_fixed_states;

/// Lexicographic solution cost: disjuncts first, then literals.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cost {
    pub disjuncts: usize,
    pub literals: usize,
}

impl Cost {
    pub const ZERO: Cost = Cost {
        disjuncts: 0,
        literals: 0,
    };

    pub fn of(a: &SubgoalAutomaton) -> Cost {
        Cost {
            disjuncts: a.num_disjuncts(),
            literals: a.num_literals(),
        }
    }
}

impl std::ops::Add for Cost {
    type Output = Cost;
    fn add(self, o: Cost) -> Cost {
        Cost {
            disjuncts: self.disjuncts + o.disjuncts,
            literals: self.literals + o.literals,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InductionConfig {
    /// Maximum number of disjuncts per formula.
    pub kappa: usize,
    /// Budget on the total number of states, specials included.
    pub max_states: usize,
    pub enforce_acyclic: bool,
    pub forbid_purely_negative: bool,
    /// Always in force when any example is compressed.
    pub forbid_unlabeled_edges: bool,
    pub use_symmetry_breaking: bool,
    /// Observables allowed in edge formulas; `None` means the whole alphabet.
    pub restricted_alphabet: Option<Vec<String>>,
    pub timeout: Duration,
}

impl Default for InductionConfig {
    fn default() -> Self {
        InductionConfig {
            kappa: 1,
            max_states: 12,
            enforce_acyclic: true,
            forbid_purely_negative: true,
            forbid_unlabeled_edges: true,
            use_symmetry_breaking: true,
            restricted_alphabet: None,
            timeout: Duration::from_secs(2 * 60 * 60),
        }
    }
}

impl InductionConfig {
    pub fn validate(&self) -> Result<(), InductionError> {
        if self.kappa == 0 {
            return Err(InductionError::InvalidConfig(
                "kappa must be at least 1".into(),
            ));
        }
        if self.max_states < 3 {
            return Err(InductionError::InvalidConfig(
                "max_states must be at least 3".into(),
            ));
        }
        Ok(())
    }

    pub(crate) fn literal_mask(&self, alphabet: &Alphabet) -> Result<u32, InductionError> {
        match &self.restricted_alphabet {
            None => Ok(alphabet.full_mask()),
            Some(names) => {
                let mut mask = 0;
                for n in names {
                    let id = alphabet
                        .id_of(n)
                        .ok_or_else(|| InductionError::UnknownObservable(n.clone()))?;
                    mask |= 1 << (id - 1);
                }
                Ok(mask)
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct InductionStats {
    pub wall_time: Duration,
    pub num_states: usize,
    pub n_goal: usize,
    pub n_dead: usize,
    pub n_inc: usize,
    pub mean_len: f64,
    pub std_len: f64,
    pub search_nodes: u64,
}

impl InductionStats {
    fn for_examples(examples: &TraceSet) -> Self {
        let (mean_len, std_len) = examples.length_stats();
        InductionStats {
            n_goal: examples.goal().len(),
            n_dead: examples.dead_end().len(),
            n_inc: examples.incomplete().len(),
            mean_len,
            std_len,
            ..Default::default()
        }
    }

    pub const CSV_HEADER: &'static str = "time_s,n_states,n_goal,n_dead,n_inc,mean_len,std_len";

    pub fn csv_row(&self) -> String {
        format!(
            "{:.6},{},{},{},{},{:.6},{:.6}",
            self.wall_time.as_secs_f64(),
            self.num_states,
            self.n_goal,
            self.n_dead,
            self.n_inc,
            self.mean_len,
            self.std_len
        )
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InductionError {
    #[error("induction timed out after {:.1}s", .stats.wall_time.as_secs_f64())]
    Timeout { stats: InductionStats },
    #[error("no automaton with at most {max_states} states is consistent with the examples")]
    BudgetExceeded { max_states: usize },
    #[error("at least one goal trace is required")]
    NoGoalTraces,
    #[error("the examples contain {0} distinct observations; at most 128 are supported")]
    TooManyObservations(usize),
    #[error("unknown observable {0:?} in restricted alphabet")]
    UnknownObservable(String),
    #[error("invalid induction configuration: {0}")]
    InvalidConfig(String),
    #[error("instance too large for the brute-force oracle: {0}")]
    InstanceTooLarge(String),
}

/// Iterative deepening over the number of plain states, starting at
/// `start_plain`, until the fixed-size task becomes satisfiable.
pub fn learn_minimal_automaton(
    examples: &TraceSet,
    alphabet: &Alphabet,
    start_plain: u32,
    cfg: &InductionConfig,
) -> Result<(SubgoalAutomaton, InductionStats), InductionError> {
    cfg.validate()?;
    if examples.goal().is_empty() {
        return Err(InductionError::NoGoalTraces);
    }
    let started = Instant::now();
    let deadline = started + cfg.timeout;
    let accepting = !examples.goal().is_empty();
    let rejecting = !examples.dead_end().is_empty();
    let specials = accepting as usize + rejecting as usize;
    let mut stats = InductionStats::for_examples(examples);
    let mut n = start_plain;
    loop {
        if 1 + n as usize + specials > cfg.max_states {
            return Err(InductionError::BudgetExceeded {
                max_states: cfg.max_states,
            });
        }
        let outcome =
            solver::solve_with_deadline(examples, alphabet, n, accepting, rejecting, cfg, deadline);
        match outcome {
            Ok((found, nodes)) => {
                stats.search_nodes += nodes;
                if let Some(a) = found {
                    stats.wall_time = started.elapsed();
                    stats.num_states = a.num_states();
                    return Ok((a, stats));
                }
            }
            Err(nodes) => {
                stats.search_nodes += nodes;
                stats.wall_time = started.elapsed();
                return Err(InductionError::Timeout { stats });
            }
        }
        n += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{Observation, StateId};
    use crate::trace::{ObservationTrace, TraceKind};

    #[test]
    fn single_goal_trace_gives_two_states() {
        let ab = Alphabet::new(["a"]).unwrap();
        let mut ex = TraceSet::new();
        ex.insert(ObservationTrace::new(
            vec![Observation::from_ids(&[1])],
            TraceKind::Goal,
        ));
        let (a, stats) = learn_minimal_automaton(&ex, &ab, 0, &InductionConfig::default()).unwrap();
        assert_eq!(a.num_states(), 2);
        assert_eq!(
            a.formula(StateId::Initial, StateId::Accepting),
            &[ab.conjunction(&["a"], &[]).unwrap()]
        );
        assert_eq!(stats.num_states, 2);
        assert_eq!(stats.n_goal, 1);
    }

    #[test]
    fn requires_goal_traces() {
        let ab = Alphabet::new(["a"]).unwrap();
        assert_eq!(
            learn_minimal_automaton(&TraceSet::new(), &ab, 0, &InductionConfig::default())
                .unwrap_err(),
            InductionError::NoGoalTraces
        );
    }

    #[test]
    fn budget_is_enforced() {
        // a then b then c: needs u0, u1, u2, uA
        let ab = Alphabet::new(["a", "b", "c"]).unwrap();
        let o = |i: u8| Observation::from_ids(&[i]);
        let mut ex = TraceSet::new();
        ex.insert(ObservationTrace::new(
            vec![o(1), o(2), o(3)],
            TraceKind::Goal,
        ));
        ex.insert(ObservationTrace::new(vec![o(3)], TraceKind::Incomplete));
        ex.insert(ObservationTrace::new(
            vec![o(2), o(3)],
            TraceKind::Incomplete,
        ));
        ex.insert(ObservationTrace::new(
            vec![o(1), o(3)],
            TraceKind::Incomplete,
        ));
        ex.insert(ObservationTrace::new(
            vec![o(1), o(2)],
            TraceKind::Incomplete,
        ));
        let cfg = InductionConfig {
            max_states: 3,
            ..Default::default()
        };
        assert_eq!(
            learn_minimal_automaton(&ex, &ab, 0, &cfg).unwrap_err(),
            InductionError::BudgetExceeded { max_states: 3 }
        );
        let (a, _) = learn_minimal_automaton(&ex, &ab, 0, &InductionConfig::default()).unwrap();
        assert_eq!(a.num_states(), 4);
    }

    #[test]
    fn timeout_reports_stats() {
        let ab = Alphabet::new(["a"]).unwrap();
        let mut ex = TraceSet::new();
        ex.insert(ObservationTrace::new(
            vec![Observation::from_ids(&[1])],
            TraceKind::Goal,
        ));
        let cfg = InductionConfig {
            timeout: Duration::ZERO,
            ..Default::default()
        };
        match learn_minimal_automaton(&ex, &ab, 0, &cfg) {
            Err(InductionError::Timeout { stats }) => assert_eq!(stats.n_goal, 1),
            other => panic!("expected timeout, got {other:?}"),
        }
    }
}
