//! Backtracking search for a cheapest automaton with a fixed number of states.
//!
//! The examples are merged into a prefix tree.  The search walks the tree
//! trace by trace and decides, for every (state, observation) pair reached,
//! which state it leads to.  After each decision it checks that the state's
//! decided behaviour is still realisable by edge formulas (see `labeling`),
//! that the edge support stays acyclic when required, and that no prefix is
//! forced into an absorbing state that contradicts a trace ending below it.
//! Plain states are introduced in first-use order, which removes renaming
//! symmetries without losing solutions.  Complete assignments are turned
//! into formulas of minimum cost; equally cheap automata are ranked by their
//! canonical key.

use std::collections::HashMap;
use std::rc::Rc;
use std::time::Instant;

use super::canonical::{canonical_key, canonicalize};
use super::labeling::{self, Labeling, Restrictions};
use super::{Cost, InductionConfig, InductionError};
use crate::automaton::{Alphabet, StateId, SubgoalAutomaton};
use crate::trace::{TraceKind, TraceSet};

const NONE: usize = usize::MAX;
const GOAL: u8 = 1;
const DEAD: u8 = 2;
const INC: u8 = 4;
/// Upper bound on formula combinations ranked per complete assignment.
const MAX_COMBINATIONS: usize = 4096;

struct Node {
    parent: usize,
    obs: usize,
    end: u8,
    sub: u8,
}

struct Instance {
    nonabs: usize,
    accept: usize,
    reject: usize,
    num_states: usize,
    obs: Vec<u32>,
    nodes: Vec<Node>,
    order: Vec<usize>,
    r: Restrictions,
    acyclic: bool,
    symmetry: bool,
    alphabet: Alphabet,
}

impl Instance {
    fn state_id(&self, s: usize) -> StateId {
        if s == 0 {
            StateId::Initial
        } else if s < self.nonabs {
            StateId::Plain(s as u32)
        } else if s == self.accept {
            StateId::Accepting
        } else {
            StateId::Rejecting
        }
    }

    fn is_absorbing(&self, s: usize) -> bool {
        s >= self.nonabs
    }

    fn admissible(&self, node: &Node, s: usize) -> bool {
        if s == self.accept {
            node.sub & (DEAD | INC) == 0
        } else if s == self.reject {
            node.sub & (GOAL | INC) == 0
        } else {
            node.end & (GOAL | DEAD) == 0
        }
    }
}

enum Built {
    Infeasible,
    Ready(Instance),
}

fn build(
    examples: &TraceSet,
    alphabet: &Alphabet,
    n: u32,
    include_accepting: bool,
    include_rejecting: bool,
    cfg: &InductionConfig,
) -> Result<Built, InductionError> {
    let mask = cfg.literal_mask(alphabet)?;
    let forbid_unlabeled = cfg.forbid_unlabeled_edges || examples.iter().any(|t| t.is_compressed());
    let nonabs = n as usize + 1;
    let mut next = nonabs;
    let accept = if include_accepting {
        next += 1;
        next - 1
    } else {
        NONE
    };
    let reject = if include_rejecting {
        next += 1;
        next - 1
    } else {
        NONE
    };

    let mut obs: Vec<u32> = Vec::new();
    let mut obs_index: HashMap<u32, usize> = HashMap::new();
    let mut nodes = vec![Node {
        parent: NONE,
        obs: NONE,
        end: 0,
        sub: 0,
    }];
    let mut children: HashMap<(usize, usize), usize> = HashMap::new();
    let mut traces: Vec<(u8, Vec<usize>)> = Vec::new();
    for t in examples.iter() {
        let flag = match t.kind() {
            TraceKind::Goal => GOAL,
            TraceKind::DeadEnd => DEAD,
            TraceKind::Incomplete => INC,
        };
        let mut path = Vec::with_capacity(t.len());
        let mut cur = 0;
        for o in t.observations() {
            let bits = o.bits() & mask;
            let oi = *obs_index.entry(bits).or_insert_with(|| {
                obs.push(bits);
                obs.len() - 1
            });
            cur = *children.entry((cur, oi)).or_insert_with(|| {
                nodes.push(Node {
                    parent: cur,
                    obs: oi,
                    end: 0,
                    sub: 0,
                });
                nodes.len() - 1
            });
            path.push(cur);
        }
        nodes[cur].end |= flag;
        traces.push((flag, path));
    }
    if obs.len() > 128 {
        return Err(InductionError::TooManyObservations(obs.len()));
    }
    for v in &nodes {
        if v.end.count_ones() > 1 {
            return Ok(Built::Infeasible);
        }
    }
    if nodes
        .iter()
        .any(|v| (v.end & GOAL != 0 && accept == NONE) || (v.end & DEAD != 0 && reject == NONE))
    {
        return Ok(Built::Infeasible);
    }
    // The root is always u0, which is neither accepting nor rejecting.
    if nodes[0].end & (GOAL | DEAD) != 0 {
        return Ok(Built::Infeasible);
    }
    for i in (1..nodes.len()).rev() {
        let s = nodes[i].sub | nodes[i].end;
        nodes[i].sub = s;
        let p = nodes[i].parent;
        nodes[p].sub |= s;
    }
    // Short goal traces first: they pin down the accepting paths early.
    traces.sort_by_key(|(flag, path)| (*flag, path.len()));
    let mut placed = vec![false; nodes.len()];
    let mut order = Vec::with_capacity(nodes.len());
    for (_, path) in &traces {
        for &v in path {
            if !std::mem::replace(&mut placed[v], true) {
                order.push(v);
            }
        }
    }
    Ok(Built::Ready(Instance {
        nonabs,
        accept,
        reject,
        num_states: next,
        obs,
        nodes,
        order,
        r: Restrictions {
            literal_mask: mask,
            kappa: cfg.kappa,
            forbid_purely_negative: cfg.forbid_purely_negative,
            forbid_unlabeled,
        },
        acyclic: cfg.enforce_acyclic,
        symmetry: cfg.use_symmetry_breaking,
        alphabet: alphabet.clone(),
    }))
}

type LabelKey = (u128, Vec<u128>);

struct Best {
    cost: Cost,
    key: Vec<(u32, u64, u32)>,
    automaton: SubgoalAutomaton,
}

struct Search<'a> {
    inst: &'a Instance,
    node_state: Vec<usize>,
    trans: Vec<usize>,
    stay: Vec<u128>,
    moves: Vec<u128>,
    inter: Vec<u32>,
    union: Vec<u32>,
    used: Vec<bool>,
    next_fresh: usize,
    num_edges: usize,
    best: Option<Best>,
    memo: HashMap<LabelKey, Option<Rc<Labeling>>>,
    nodes_visited: u64,
    deadline: Instant,
    timed_out: bool,
}

fn bits_of(set: u128) -> impl Iterator<Item = usize> {
    (0..128).filter(move |i| set & (1u128 << i) != 0)
}

impl<'a> Search<'a> {
    fn new(inst: &'a Instance, deadline: Instant) -> Self {
        let s = inst.num_states;
        let o = inst.obs.len();
        let mut used = vec![false; inst.nonabs];
        used[0] = true;
        Search {
            inst,
            node_state: vec![NONE; inst.nodes.len()],
            trans: vec![NONE; inst.nonabs * o],
            stay: vec![0; inst.nonabs],
            moves: vec![0; inst.nonabs * s],
            inter: vec![u32::MAX; inst.nonabs * s],
            union: vec![0; inst.nonabs * s],
            used,
            next_fresh: 1,
            num_edges: 0,
            best: None,
            memo: HashMap::new(),
            nodes_visited: 0,
            deadline,
            timed_out: false,
        }
    }

    fn targets_of(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        let s = self.inst.num_states;
        (0..s).filter(move |&t| self.moves[u * s + t] != 0)
    }

    fn reaches(&self, from: usize, to: usize) -> bool {
        let mut seen = vec![false; self.inst.nonabs];
        let mut stack = vec![from];
        while let Some(u) = stack.pop() {
            if u == to {
                return true;
            }
            if u >= self.inst.nonabs || std::mem::replace(&mut seen[u], true) {
                continue;
            }
            stack.extend(self.targets_of(u));
        }
        false
    }

    fn label_key(&self, u: usize) -> LabelKey {
        let mut ps: Vec<u128> = self
            .targets_of(u)
            .map(|t| self.moves[u * self.inst.num_states + t])
            .collect();
        ps.sort_unstable();
        (self.stay[u], ps)
    }

    fn labeling(&mut self, key: LabelKey) -> Option<Rc<Labeling>> {
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let obs = &self.inst.obs;
        let stays: Vec<u32> = bits_of(key.0).map(|i| obs[i]).collect();
        let targets: Vec<Vec<u32>> = key
            .1
            .iter()
            .map(|&p| bits_of(p).map(|i| obs[i]).collect())
            .collect();
        let result = labeling::optimal_labeling(&stays, &targets, &self.inst.r).map(Rc::new);
        self.memo.insert(key, result.clone());
        result
    }

    /// Whether the decided behaviour of `u` is still realisable.
    fn state_feasible(&mut self, u: usize) -> bool {
        let inst = self.inst;
        if inst.r.kappa == 1 {
            let s = inst.num_states;
            let blocks: Vec<(u32, u32)> = self
                .targets_of(u)
                .map(|t| {
                    let i = u * s + t;
                    (
                        self.inter[i] & inst.r.literal_mask,
                        inst.r.literal_mask & !self.union[i],
                    )
                })
                .collect();
            labeling::single_block_feasible(
                bits_of(self.stay[u]).map(|i| inst.obs[i]),
                &blocks,
                &inst.r,
            )
        } else {
            let key = self.label_key(u);
            if let Some(hit) = self.memo.get(&key) {
                return hit.is_some();
            }
            let obs = &inst.obs;
            let stays: Vec<u32> = bits_of(key.0).map(|i| obs[i]).collect();
            let targets: Vec<Vec<u32>> = key
                .1
                .iter()
                .map(|&p| bits_of(p).map(|i| obs[i]).collect())
                .collect();
            labeling::labeling_exists(&stays, &targets, &inst.r)
        }
    }

    fn lower_bound(&self) -> Cost {
        let mut lb = Cost {
            disjuncts: self.num_edges,
            literals: 0,
        };
        for u in 0..self.inst.nonabs {
            let k = self.targets_of(u).count();
            if k > 0 && (self.inst.r.forbid_unlabeled || self.stay[u] != 0 || k > 1) {
                lb.literals += k;
            }
        }
        lb
    }

    fn pruned_by_bound(&self) -> bool {
        match &self.best {
            Some(b) => self.lower_bound() > b.cost,
            None => false,
        }
    }

    /// Records `u --o--> t`; returns false (with nothing recorded) if this
    /// immediately violates a constraint.
    fn assign(&mut self, u: usize, o: usize, t: usize) -> bool {
        let inst = self.inst;
        let s = inst.num_states;
        let bit = 1u128 << o;
        self.trans[u * inst.obs.len() + o] = t;
        let fresh_plain = t < inst.nonabs && !self.used[t];
        if fresh_plain {
            self.used[t] = true;
        }
        if t == u {
            self.stay[u] |= bit;
        } else {
            let i = u * s + t;
            let new_edge = self.moves[i] == 0;
            if new_edge && inst.acyclic && t < inst.nonabs && self.reaches(t, u) {
                self.trans[u * inst.obs.len() + o] = NONE;
                if fresh_plain {
                    self.used[t] = false;
                }
                return false;
            }
            self.moves[i] |= bit;
            self.inter[i] &= inst.obs[o];
            self.union[i] |= inst.obs[o];
            if new_edge {
                self.num_edges += 1;
            }
        }
        true
    }

    fn unassign(&mut self, u: usize, o: usize, t: usize, saved: (u32, u32), fresh_plain: bool) {
        let inst = self.inst;
        let s = inst.num_states;
        let bit = 1u128 << o;
        self.trans[u * inst.obs.len() + o] = NONE;
        if fresh_plain {
            self.used[t] = false;
        }
        if t == u {
            self.stay[u] &= !bit;
        } else {
            let i = u * s + t;
            self.moves[i] &= !bit;
            self.inter[i] = saved.0;
            self.union[i] = saved.1;
            if self.moves[i] == 0 {
                self.num_edges -= 1;
            }
        }
    }

    fn candidates(&self, u: usize) -> Vec<usize> {
        let inst = self.inst;
        let mut c = vec![u];
        let existing: Vec<usize> = self.targets_of(u).collect();
        c.extend(existing.iter().copied());
        for t in [inst.accept, inst.reject] {
            if t != NONE && !c.contains(&t) {
                c.push(t);
            }
        }
        for t in 0..inst.nonabs {
            if self.used[t] && !c.contains(&t) {
                c.push(t);
            }
        }
        if inst.symmetry {
            if self.next_fresh < inst.nonabs {
                c.push(self.next_fresh);
            }
        } else {
            c.extend((1..inst.nonabs).filter(|&t| !self.used[t]));
        }
        c
    }

    fn out_of_time(&mut self) -> bool {
        if self.timed_out {
            return true;
        }
        self.nodes_visited += 1;
        if self.nodes_visited.is_multiple_of(1024) && Instant::now() >= self.deadline {
            self.timed_out = true;
        }
        self.timed_out
    }

    fn run(&mut self, k: usize) {
        if self.out_of_time() {
            return;
        }
        let inst = self.inst;
        if k == inst.order.len() {
            self.complete();
            return;
        }
        let v = inst.order[k];
        let node = &inst.nodes[v];
        let ps = self.node_state[node.parent];
        if inst.is_absorbing(ps) {
            self.node_state[v] = ps;
            self.run(k + 1);
            self.node_state[v] = NONE;
            return;
        }
        let ti = ps * inst.obs.len() + node.obs;
        let decided = self.trans[ti];
        if decided != NONE {
            if inst.admissible(node, decided) {
                self.node_state[v] = decided;
                self.run(k + 1);
                self.node_state[v] = NONE;
            }
            return;
        }
        for t in self.candidates(ps) {
            if !inst.admissible(node, t) {
                continue;
            }
            let s = inst.num_states;
            let saved = if t != ps {
                (self.inter[ps * s + t], self.union[ps * s + t])
            } else {
                (0, 0)
            };
            let fresh_plain = t < inst.nonabs && !self.used[t];
            if !self.assign(ps, node.obs, t) {
                continue;
            }
            let bumped = fresh_plain && inst.symmetry;
            if bumped {
                self.next_fresh += 1;
            }
            if self.state_feasible(ps) && !self.pruned_by_bound() {
                self.node_state[v] = t;
                self.run(k + 1);
                self.node_state[v] = NONE;
            }
            if bumped {
                self.next_fresh -= 1;
            }
            self.unassign(ps, node.obs, t, saved, fresh_plain);
            if self.timed_out {
                return;
            }
        }
    }

    /// Every prefix has a state: synthesise the cheapest formulas.
    fn complete(&mut self) {
        let inst = self.inst;
        let mut per_state: Vec<(usize, Vec<usize>, Rc<Labeling>)> = Vec::new();
        let mut cost = Cost::ZERO;
        for u in 0..inst.nonabs {
            let targets: Vec<usize> = self.targets_of(u).collect();
            if targets.is_empty() {
                continue;
            }
            let key = self.label_key(u);
            // Labelings are stored for targets sorted by their observation sets.
            let s = inst.num_states;
            let mut sorted = targets.clone();
            sorted.sort_by_key(|&t| self.moves[u * s + t]);
            let Some(lab) = self.labeling(key) else {
                return;
            };
            cost = cost + lab.cost;
            per_state.push((u, sorted, lab));
        }
        if let Some(b) = &self.best {
            if cost > b.cost {
                return;
            }
        }
        let mut choice = vec![0usize; per_state.len()];
        let mut visited = 0;
        loop {
            let mut a = SubgoalAutomaton::new(
                inst.alphabet.clone(),
                inst.nonabs as u32 - 1,
                inst.accept != NONE,
                inst.reject != NONE,
            );
            for (i, (u, targets, lab)) in per_state.iter().enumerate() {
                let opt = &lab.options[choice[i]];
                for (j, &t) in targets.iter().enumerate() {
                    for c in &opt[j] {
                        a.add_disjunct(inst.state_id(*u), inst.state_id(t), *c)
                            .expect("synthesised formulas are well formed");
                    }
                }
            }
            let key = canonical_key(&a);
            let better = match &self.best {
                None => true,
                Some(b) => (cost, &key) < (b.cost, &b.key),
            };
            if better {
                self.best = Some(Best {
                    cost,
                    key,
                    automaton: a,
                });
            }
            visited += 1;
            // odometer over the per-state alternatives
            let mut i = 0;
            loop {
                if i == choice.len() {
                    return;
                }
                choice[i] += 1;
                if choice[i] < per_state[i].2.options.len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if visited >= MAX_COMBINATIONS {
                return;
            }
        }
    }
}

/// Returns `Err(nodes)` on timeout, else the best automaton (if any) and the
/// number of search nodes expanded.
pub(crate) fn solve_with_deadline(
    examples: &TraceSet,
    alphabet: &Alphabet,
    n: u32,
    include_accepting: bool,
    include_rejecting: bool,
    cfg: &InductionConfig,
    deadline: Instant,
) -> Result<(Option<SubgoalAutomaton>, u64), u64> {
    if Instant::now() >= deadline {
        return Err(0);
    }
    let inst = match build(
        examples,
        alphabet,
        n,
        include_accepting,
        include_rejecting,
        cfg,
    ) {
        Ok(Built::Ready(i)) => i,
        Ok(Built::Infeasible) => return Ok((None, 0)),
        Err(_) => return Ok((None, 0)),
    };
    let mut search = Search::new(&inst, deadline);
    search.node_state[0] = 0;
    search.run(0);
    if search.timed_out {
        return Err(search.nodes_visited);
    }
    let found = search.best.map(|b| {
        if inst.symmetry {
            canonicalize(&b.automaton)
        } else {
            b.automaton
        }
    });
    Ok((found, search.nodes_visited))
}

/// A cheapest automaton over u0, u1..un and the requested specials that is
/// valid for every example, or `None` if there is none.
pub fn solve_fixed_states(
    examples: &TraceSet,
    alphabet: &Alphabet,
    num_plain_states: u32,
    include_accepting: bool,
    include_rejecting: bool,
    cfg: &InductionConfig,
) -> Result<Option<SubgoalAutomaton>, InductionError> {
    cfg.validate()?;
    // Surface configuration errors instead of treating them as infeasibility.
    cfg.literal_mask(alphabet)?;
    let started = Instant::now();
    let distinct = examples
        .iter()
        .flat_map(|t| t.observations().iter().map(|o| o.bits()))
        .collect::<std::collections::HashSet<_>>()
        .len();
    if distinct > 128 {
        return Err(InductionError::TooManyObservations(distinct));
    }
    match solve_with_deadline(
        examples,
        alphabet,
        num_plain_states,
        include_accepting,
        include_rejecting,
        cfg,
        started + cfg.timeout,
    ) {
        Ok((a, _)) => Ok(a),
        Err(nodes) => {
            let mut stats = super::InductionStats::for_examples(examples);
            stats.wall_time = started.elapsed();
            stats.search_nodes = nodes;
            Err(InductionError::Timeout { stats })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::Observation;
    use crate::induction::canonical::is_canonical;
    use crate::trace::ObservationTrace;

    fn coffee_alphabet() -> Alphabet {
        Alphabet::new(["coffee", "office", "decoration"]).unwrap()
    }

    fn tr(ab: &Alphabet, kind: TraceKind, obs: &[&[&str]]) -> ObservationTrace {
        ObservationTrace::new(
            obs.iter()
                .map(|o| ab.observation(o.iter().copied()).unwrap())
                .collect(),
            kind,
        )
    }

    fn coffee_examples() -> TraceSet {
        let ab = coffee_alphabet();
        let mut ex = TraceSet::new();
        ex.insert(tr(&ab, TraceKind::Goal, &[&["coffee"], &["office"]]));
        ex.insert(tr(&ab, TraceKind::Goal, &[&["coffee", "office"]]));
        ex.insert(tr(&ab, TraceKind::DeadEnd, &[&["decoration"]]));
        ex.insert(tr(&ab, TraceKind::DeadEnd, &[&["coffee"], &["decoration"]]));
        ex.insert(tr(&ab, TraceKind::Incomplete, &[&["coffee"]]));
        ex
    }

    #[test]
    fn overgeneralises_from_a_single_goal_trace() {
        let ab = coffee_alphabet();
        let mut ex = TraceSet::new();
        ex.insert(tr(&ab, TraceKind::Goal, &[&["coffee"], &["office"]]));
        let a = solve_fixed_states(&ex, &ab, 0, true, false, &InductionConfig::default())
            .unwrap()
            .unwrap();
        assert_eq!(a.num_states(), 2);
        // {office} = 010000 sorts before {coffee} = 100000
        assert_eq!(
            a.formula(StateId::Initial, StateId::Accepting),
            &[ab.conjunction(&["office"], &[]).unwrap()]
        );
    }

    #[test]
    fn contradictory_examples_are_infeasible() {
        let ab = coffee_alphabet();
        let mut ex = TraceSet::new();
        ex.insert(tr(&ab, TraceKind::Goal, &[&["coffee"]]));
        ex.insert(tr(&ab, TraceKind::Incomplete, &[&["coffee"]]));
        for n in 0..3 {
            assert!(
                solve_fixed_states(&ex, &ab, n, true, false, &InductionConfig::default())
                    .unwrap()
                    .is_none()
            );
        }
    }

    #[test]
    fn coffee_examples_solution_is_sound_and_canonical() {
        let ab = coffee_alphabet();
        let ex = coffee_examples();
        let cfg = InductionConfig::default();
        assert!(solve_fixed_states(&ex, &ab, 0, true, true, &cfg)
            .unwrap()
            .is_some());
        let a = solve_fixed_states(&ex, &ab, 1, true, true, &cfg)
            .unwrap()
            .unwrap();
        assert!(ex.iter().all(|t| a.is_valid_wrt(t)));
        assert!(a.is_deterministic());
        assert!(is_canonical(&a));
        assert!(a.structural_checks().acyclic);
    }

    #[test]
    fn symmetry_breaking_keeps_cost() {
        let ab = coffee_alphabet();
        let ex = coffee_examples();
        let on = InductionConfig::default();
        let off = InductionConfig {
            use_symmetry_breaking: false,
            ..on.clone()
        };
        for n in 0..3 {
            let a = solve_fixed_states(&ex, &ab, n, true, true, &on).unwrap();
            let b = solve_fixed_states(&ex, &ab, n, true, true, &off).unwrap();
            assert_eq!(a.as_ref().map(Cost::of), b.as_ref().map(Cost::of));
            if let (Some(a), Some(b)) = (a, b) {
                assert_eq!(canonical_key(&a), canonical_key(&b));
            }
        }
    }

    #[test]
    fn empty_goal_trace_is_unsatisfiable() {
        let ab = coffee_alphabet();
        let mut ex = TraceSet::new();
        ex.insert(ObservationTrace::new(vec![], TraceKind::Goal));
        assert!(
            solve_fixed_states(&ex, &ab, 2, true, false, &InductionConfig::default())
                .unwrap()
                .is_none()
        );
    }

    #[test]
    fn restricted_alphabet_limits_literals() {
        let ab = coffee_alphabet();
        let ex = coffee_examples();
        let cfg = InductionConfig {
            restricted_alphabet: Some(vec!["coffee".into(), "office".into()]),
            ..Default::default()
        };
        // dead-ends cannot be told apart from incomplete traces without the decoration
        assert!(solve_fixed_states(&ex, &ab, 1, true, true, &cfg)
            .unwrap()
            .is_none());
        let bad = InductionConfig {
            restricted_alphabet: Some(vec!["tea".into()]),
            ..Default::default()
        };
        assert!(matches!(
            solve_fixed_states(&ex, &ab, 1, true, true, &bad),
            Err(InductionError::UnknownObservable(_))
        ));
    }

    #[test]
    fn unlabeled_edges_when_allowed() {
        let ab = Alphabet::new(["a"]).unwrap();
        let mut ex = TraceSet::new();
        ex.insert(ObservationTrace::new(
            vec![Observation::EMPTY],
            TraceKind::Goal,
        ));
        let strict = InductionConfig::default();
        assert!(solve_fixed_states(&ex, &ab, 0, true, false, &strict)
            .unwrap()
            .is_none());
        let loose = InductionConfig {
            forbid_unlabeled_edges: false,
            ..strict
        };
        let a = solve_fixed_states(&ex, &ab, 0, true, false, &loose)
            .unwrap()
            .unwrap();
        assert!(a.structural_checks().has_unlabeled_edge);
    }
}
