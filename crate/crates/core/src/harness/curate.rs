//! Example sets harvested from scripted agents.
//!
//! A pool of traces is collected by touring the task's observables in every
//! order (plus random walks) over many random grids; examples are then picked
//! from the pool counterexample by counterexample until the learned automaton
//! accepts the whole pool.

use rand::Rng;

use crate::automaton::SubgoalAutomaton;
use crate::env::{craftworld, officeworld, scripted, Domain, EnvError, Environment, Task};
use crate::induction::{learn_minimal_automaton, InductionConfig, InductionError};
use crate::trace::{classify, ObservationTrace, TraceSet};

#[derive(Clone, Debug)]
pub struct Curated {
    pub automaton: SubgoalAutomaton,
    pub examples: TraceSet,
    pub rounds: usize,
    pub pool_size: usize,
}

/// All orderings of every non-empty subset of `items` with at most `k` elements.
fn orderings<'a>(items: &[&'a str], k: usize) -> Vec<Vec<&'a str>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go<'a>(items: &[&'a str], k: usize, cur: &mut Vec<&'a str>, out: &mut Vec<Vec<&'a str>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == k {
            return;
        }
        for &i in items {
            if !cur.contains(&i) {
                cur.push(i);
                go(items, k, cur, out);
                cur.pop();
            }
        }
    }
    go(items, k, &mut cur, &mut out);
    out
}

fn to_trace(ep: &scripted::Episode) -> ObservationTrace {
    let kind = classify(*ep.flags.last().expect("episodes include the reset step"));
    ObservationTrace::new(ep.observations.clone(), kind).compress()
}

/// Compressed traces from `grids` random grids of the task's domain.
pub fn harvest(
    task: Task,
    grids: usize,
    rng: &mut impl Rng,
) -> Result<Vec<ObservationTrace>, EnvError> {
    let relevant = task.relevant_observables();
    let orders = orderings(&relevant, relevant.len());
    let max_steps = 250;
    let mut pool = Vec::new();
    for _ in 0..grids {
        let grid = match task.domain() {
            Domain::OfficeWorld => officeworld::generate_officeworld(rng)?,
            Domain::CraftWorld => craftworld::generate_craftworld(rng)?,
        };
        let mut env = Environment::new(grid, task)?;
        for order in &orders {
            for (avoid, noise) in [(true, 0.0), (false, 0.0), (true, 0.2)] {
                pool.push(to_trace(&scripted::tour(
                    &mut env, order, avoid, noise, rng, max_steps,
                )));
            }
        }
        for _ in 0..4 {
            pool.push(to_trace(&scripted::random_walk(&mut env, rng, max_steps)));
        }
    }
    pool.sort_by(|a, b| {
        (a.len(), a.kind(), a.observations()).cmp(&(b.len(), b.kind(), b.observations()))
    });
    pool.dedup();
    Ok(pool)
}

/// Grows an example set from `pool` until the minimal automaton learned
/// from it is consistent with every pooled trace.
pub fn curate(
    pool: &[ObservationTrace],
    task: Task,
    cfg: &InductionConfig,
) -> Result<Curated, InductionError> {
    let alphabet = task.domain().alphabet();
    let mut examples = TraceSet::new();
    let seed = pool
        .iter()
        .find(|t| t.kind() == crate::trace::TraceKind::Goal)
        .ok_or_else(|| InductionError::InvalidConfig("the pool holds no goal trace".into()))?;
    examples.insert(seed.clone());
    let mut plain = 0;
    let mut rounds = 0;
    loop {
        rounds += 1;
        let (a, _) = learn_minimal_automaton(&examples, &alphabet, plain, cfg)?;
        match pool.iter().find(|t| !a.is_valid_wrt(t)) {
            None => {
                return Ok(Curated {
                    automaton: a,
                    examples,
                    rounds,
                    pool_size: pool.len(),
                })
            }
            Some(t) => {
                examples.insert(t.clone());
                plain = a.num_plain();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn orderings_count() {
        assert_eq!(orderings(&["a", "b", "c"], 3).len(), 15);
        assert_eq!(orderings(&["a", "b", "c"], 1).len(), 3);
    }

    #[test]
    fn coffee_pool_has_every_kind() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let pool = harvest(Task::Coffee, 3, &mut rng).unwrap();
        use crate::trace::TraceKind::*;
        for kind in [Goal, DeadEnd, Incomplete] {
            assert!(pool.iter().any(|t| t.kind() == kind), "{kind:?}");
        }
        assert!(pool.iter().all(|t| t.is_compressed()));
    }
}
