//! Exhaustive reference for tiny induction tasks, written independently of
//! the solver.
//!
//! Over at most three observables there are only a handful of observations.
//! Every formula (up to κ conjunctions of literals) denotes a region of that
//! finite observation space; the formulas of one state are deterministic
//! exactly when the regions of different targets are disjoint.  The oracle
//! therefore enumerates every assignment of observations to successors per
//! state, keeps those whose regions are all expressible, and explores all
//! combinations across states while simulating the examples.  Per state,
//! assignments are grouped by their behaviour on the observations that occur
//! in the examples (the only part the examples can see) and represented by
//! the cheapest member of each group.  States that no example reaches are
//! left without edges.

use std::collections::HashMap;

use super::{Cost, InductionConfig, InductionError};
use crate::automaton::{Alphabet, Conjunction, StateId, SubgoalAutomaton};
use crate::trace::{TraceKind, TraceSet};

#[derive(Clone, Debug, Default)]
pub struct OracleReport {
    pub feasible: bool,
    pub min_cost: Option<Cost>,
    /// Valid automata found, one per distinct behaviour on the examples'
    /// observations (capped by the requested limit).
    pub solutions: Vec<SubgoalAutomaton>,
    pub truncated: bool,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Feasibility,
    MinCost,
    All(usize),
}

/// Cheapest formula for every region of the observation space.
fn region_table(
    points: &[u32],
    lits: &[u32],
    cfg: &InductionConfig,
    no_unlabeled: bool,
) -> Vec<Option<(Cost, Vec<Conjunction>)>> {
    let mask = lits.iter().fold(0, |a, &b| a | b);
    let mut cubes: Vec<(Conjunction, u32)> = Vec::new();
    // every (pos, neg) pair of disjoint subsets of the literal observables
    for pos in 0..=mask {
        if pos & !mask != 0 {
            continue;
        }
        for neg in 0..=mask {
            if neg & !mask != 0 || neg & pos != 0 {
                continue;
            }
            if no_unlabeled && pos == 0 && neg == 0 {
                continue;
            }
            if cfg.forbid_purely_negative && pos == 0 && neg != 0 {
                continue;
            }
            let c = Conjunction::from_bits(pos, neg).unwrap();
            let region = points
                .iter()
                .enumerate()
                .filter(|(_, &p)| c.satisfied_by(crate::automaton::Observation::from_bits(p)))
                .fold(0u32, |r, (i, _)| r | 1 << i);
            cubes.push((c, region));
        }
    }
    let mut table: Vec<Option<(Cost, Vec<Conjunction>)>> = vec![None; 1 << points.len()];
    table[0] = Some((Cost::ZERO, Vec::new()));
    let mut consider = |set: Vec<usize>| {
        let region = set.iter().fold(0u32, |r, &i| r | cubes[i].1);
        let cost = Cost {
            disjuncts: set.len(),
            literals: set.iter().map(|&i| cubes[i].0.num_literals()).sum(),
        };
        let conj: Vec<Conjunction> = set.iter().map(|&i| cubes[i].0).collect();
        let slot = &mut table[region as usize];
        if slot.as_ref().is_none_or(|(c, _)| cost < *c) {
            *slot = Some((cost, conj));
        }
    };
    let k = cubes.len();
    for i in 0..k {
        consider(vec![i]);
    }
    if cfg.kappa >= 2 {
        for i in 0..k {
            for j in i + 1..k {
                consider(vec![i, j]);
            }
        }
    }
    if cfg.kappa >= 3 {
        for i in 0..k {
            for j in i + 1..k {
                for l in j + 1..k {
                    consider(vec![i, j, l]);
                }
            }
        }
    }
    table
}

struct Class {
    // successor slot per example observation: 0 = stay, j = j-th other state
    seen: Vec<u8>,
    cost: Cost,
    // successor slot per point of the whole observation space
    full: Vec<u8>,
}

struct Oracle<'a> {
    num_states: usize,
    nonabs: usize,
    accept: Option<usize>,
    reject: Option<usize>,
    traces: Vec<(TraceKind, Vec<usize>)>,
    classes: &'a [Class],
    acyclic: bool,
    mode: Mode,
    best: Option<Cost>,
    leaves: Vec<Vec<Option<usize>>>,
    truncated: bool,
}

impl Oracle<'_> {
    fn other(&self, u: usize, slot: u8) -> usize {
        if slot == 0 {
            return u;
        }
        let j = slot as usize - 1;
        if j < u {
            j
        } else {
            j + 1
        }
    }

    fn absorbing(&self, s: usize) -> bool {
        s >= self.nonabs
    }

    /// Ok(None) when all traces finish validly, Ok(Some(u)) for the first
    /// state a trace is waiting on, Err(()) if some trace is misclassified.
    fn simulate(&self, assign: &[Option<usize>]) -> Result<Option<usize>, ()> {
        let mut waiting = None;
        'traces: for (kind, obs) in &self.traces {
            let mut u = 0;
            for &o in obs {
                if self.absorbing(u) {
                    break;
                }
                match assign[u] {
                    None => {
                        waiting.get_or_insert(u);
                        continue 'traces;
                    }
                    Some(c) => u = self.other(u, self.classes[c].seen[o]),
                }
            }
            let ok = match kind {
                TraceKind::Goal => Some(u) == self.accept,
                TraceKind::DeadEnd => Some(u) == self.reject,
                TraceKind::Incomplete => !self.absorbing(u),
            };
            if !ok {
                return Err(());
            }
        }
        Ok(waiting)
    }

    fn has_cycle(&self, assign: &[Option<usize>]) -> bool {
        let succ = |u: usize| -> Vec<usize> {
            match assign.get(u).copied().flatten() {
                None => Vec::new(),
                Some(c) => {
                    let mut v: Vec<usize> = self.classes[c]
                        .seen
                        .iter()
                        .map(|&s| self.other(u, s))
                        .filter(|&t| t != u && t < self.nonabs)
                        .collect();
                    v.sort_unstable();
                    v.dedup();
                    v
                }
            }
        };
        // colours: 0 new, 1 on stack, 2 done
        fn dfs(u: usize, colour: &mut [u8], succ: &dyn Fn(usize) -> Vec<usize>) -> bool {
            colour[u] = 1;
            for t in succ(u) {
                if colour[t] == 1 || (colour[t] == 0 && dfs(t, colour, succ)) {
                    return true;
                }
            }
            colour[u] = 2;
            false
        }
        let mut colour = vec![0u8; self.nonabs];
        (0..self.nonabs).any(|u| colour[u] == 0 && dfs(u, &mut colour, &succ))
    }

    fn cost(&self, assign: &[Option<usize>]) -> Cost {
        assign
            .iter()
            .flatten()
            .fold(Cost::ZERO, |acc, &c| acc + self.classes[c].cost)
    }

    fn explore(&mut self, assign: &mut Vec<Option<usize>>) -> bool {
        if self.acyclic && self.has_cycle(assign) {
            return false;
        }
        let partial = self.cost(assign);
        if self.mode == Mode::MinCost && self.best.is_some_and(|b| partial > b) {
            return false;
        }
        match self.simulate(assign) {
            Err(()) => false,
            Ok(None) => {
                self.best = Some(self.best.map_or(partial, |b| b.min(partial)));
                match self.mode {
                    Mode::Feasibility => return true,
                    Mode::MinCost => {}
                    Mode::All(limit) => {
                        if self.leaves.len() < limit {
                            self.leaves.push(assign.clone());
                        } else {
                            self.truncated = true;
                        }
                    }
                }
                false
            }
            Ok(Some(u)) => {
                for c in 0..self.classes.len() {
                    assign[u] = Some(c);
                    if self.explore(assign) {
                        return true;
                    }
                }
                assign[u] = None;
                false
            }
        }
    }
}

fn run(
    examples: &TraceSet,
    alphabet: &Alphabet,
    n: u32,
    cfg: &InductionConfig,
    mode: Mode,
) -> Result<OracleReport, InductionError> {
    cfg.validate()?;
    if alphabet.len() > 3 {
        return Err(InductionError::InstanceTooLarge(format!(
            "{} observables",
            alphabet.len()
        )));
    }
    if n > 2 {
        return Err(InductionError::InstanceTooLarge(format!(
            "{n} plain states"
        )));
    }
    if cfg.kappa > 2 {
        return Err(InductionError::InstanceTooLarge(format!(
            "kappa {}",
            cfg.kappa
        )));
    }
    let mask = cfg.literal_mask(alphabet)?;
    let no_unlabeled = cfg.forbid_unlabeled_edges || examples.iter().any(|t| t.is_compressed());
    let lits: Vec<u32> = (0..alphabet.len())
        .map(|i| 1u32 << i)
        .filter(|b| b & mask != 0)
        .collect();
    // the observation space seen through the literal observables
    let points: Vec<u32> = (0u32..1 << lits.len())
        .map(|k| {
            lits.iter()
                .enumerate()
                .filter(|(i, _)| k & (1 << i) != 0)
                .fold(0, |a, (_, &b)| a | b)
        })
        .collect();
    let point_of = |bits: u32| points.iter().position(|&p| p == bits & mask).unwrap();

    let mut seen_points: Vec<usize> = Vec::new();
    let mut traces = Vec::new();
    for t in examples.iter() {
        let obs: Vec<usize> = t
            .observations()
            .iter()
            .map(|o| {
                let p = point_of(o.bits());
                let k = seen_points.iter().position(|&q| q == p).unwrap_or_else(|| {
                    seen_points.push(p);
                    seen_points.len() - 1
                });
                k
            })
            .collect();
        traces.push((t.kind(), obs));
    }

    let accepting = !examples.goal().is_empty();
    let rejecting = !examples.dead_end().is_empty();
    let nonabs = n as usize + 1;
    let num_states = nonabs + accepting as usize + rejecting as usize;
    let accept = accepting.then_some(nonabs);
    let reject = rejecting.then_some(nonabs + accepting as usize);
    let m = num_states - 1;

    let table = region_table(&points, &lits, cfg, no_unlabeled);
    // Enumerate every successor function over the observation space.
    let mut groups: HashMap<Vec<u8>, usize> = HashMap::new();
    let mut classes: Vec<Class> = Vec::new();
    let mut f = vec![0u8; points.len()];
    loop {
        let mut cost = Cost::ZERO;
        let mut ok = true;
        for j in 1..=m as u8 {
            let region = f
                .iter()
                .enumerate()
                .filter(|(_, &v)| v == j)
                .fold(0u32, |r, (i, _)| r | 1 << i);
            match &table[region as usize] {
                Some((c, _)) => cost = cost + *c,
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            let seen: Vec<u8> = seen_points.iter().map(|&p| f[p]).collect();
            match groups.get(&seen) {
                Some(&i) => {
                    if cost < classes[i].cost {
                        classes[i].cost = cost;
                        classes[i].full = f.clone();
                    }
                }
                None => {
                    groups.insert(seen.clone(), classes.len());
                    classes.push(Class {
                        seen,
                        cost,
                        full: f.clone(),
                    });
                }
            }
        }
        // next function in base m+1
        let mut i = 0;
        while i < f.len() {
            f[i] += 1;
            if (f[i] as usize) <= m {
                break;
            }
            f[i] = 0;
            i += 1;
        }
        if i == f.len() {
            break;
        }
    }

    let mut oracle = Oracle {
        num_states,
        nonabs,
        accept,
        reject,
        traces,
        classes: &classes,
        acyclic: cfg.enforce_acyclic,
        mode,
        best: None,
        leaves: Vec::new(),
        truncated: false,
    };
    let mut assign = vec![None; nonabs];
    oracle.explore(&mut assign);
    debug_assert_eq!(oracle.num_states, num_states);

    let state_id = |s: usize| {
        if s == 0 {
            StateId::Initial
        } else if s < nonabs {
            StateId::Plain(s as u32)
        } else if Some(s) == accept {
            StateId::Accepting
        } else {
            StateId::Rejecting
        }
    };
    let mut solutions = Vec::new();
    for leaf in &oracle.leaves {
        let mut a = SubgoalAutomaton::new(alphabet.clone(), n, accepting, rejecting);
        for (u, c) in leaf.iter().enumerate() {
            let Some(c) = c else { continue };
            let full = &classes[*c].full;
            for j in 1..=m as u8 {
                let region = full
                    .iter()
                    .enumerate()
                    .filter(|(_, &v)| v == j)
                    .fold(0u32, |r, (i, _)| r | 1 << i);
                let (_, conj) = table[region as usize].as_ref().unwrap();
                for &cj in conj {
                    a.add_disjunct(state_id(u), state_id(oracle.other(u, j)), cj)
                        .unwrap();
                }
            }
        }
        assert!(
            examples.iter().all(|t| a.is_valid_wrt(t)),
            "oracle produced an invalid automaton"
        );
        assert!(a.is_deterministic());
        solutions.push(a);
    }
    Ok(OracleReport {
        feasible: oracle.best.is_some(),
        min_cost: if mode == Mode::Feasibility {
            None
        } else {
            oracle.best
        },
        solutions,
        truncated: oracle.truncated,
    })
}

/// All solutions (up to `limit`), one per behaviour on the examples'
/// observations, each with the cheapest formulas for that behaviour.
pub fn brute_force_oracle(
    examples: &TraceSet,
    alphabet: &Alphabet,
    num_plain_states: u32,
    cfg: &InductionConfig,
    limit: usize,
) -> Result<OracleReport, InductionError> {
    run(examples, alphabet, num_plain_states, cfg, Mode::All(limit))
}

pub fn oracle_feasible(
    examples: &TraceSet,
    alphabet: &Alphabet,
    num_plain_states: u32,
    cfg: &InductionConfig,
) -> Result<bool, InductionError> {
    Ok(run(examples, alphabet, num_plain_states, cfg, Mode::Feasibility)?.feasible)
}

pub fn oracle_min_cost(
    examples: &TraceSet,
    alphabet: &Alphabet,
    num_plain_states: u32,
    cfg: &InductionConfig,
) -> Result<Option<Cost>, InductionError> {
    Ok(run(examples, alphabet, num_plain_states, cfg, Mode::MinCost)?.min_cost)
}
