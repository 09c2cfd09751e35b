//! Subgoal automata: deterministic automata whose edges carry DNF formulas over
//! observables, with absorbing accepting and rejecting states.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::induction::labels::LabelSet;
use crate::trace::{ObservationTrace, TraceKind};

/// Observations are bitmasks, so alphabets are capped at this size.
pub const MAX_OBSERVABLES: usize = 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("alphabet has {0} observables, at most {MAX_OBSERVABLES} are supported")]
    AlphabetTooLarge(usize),
    #[error("invalid observable name {0:?}")]
    InvalidName(String),
    #[error("duplicate observable name {0:?}")]
    DuplicateName(String),
    #[error("unknown observable {0:?}")]
    UnknownObservable(String),
    #[error("unknown state {0}")]
    UnknownState(StateId),
    #[error("state {0} is absorbing and cannot have outgoing edges")]
    AbsorbingSource(StateId),
    #[error("self-loop edges on {0} are implicit and cannot be labelled")]
    SelfLoop(StateId),
    #[error("observable {0:?} occurs both positively and negatively")]
    ContradictoryLiteral(String),
    #[error("duplicate disjunct on edge {0} -> {1}")]
    DuplicateDisjunct(StateId, StateId),
    #[error("malformed automaton description: {0}")]
    Malformed(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("nondeterminism at {state}: both {first} and {second} are satisfied")]
pub struct NondeterminismError {
    pub state: StateId,
    pub first: StateId,
    pub second: StateId,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Observable {
    pub id: u8,
    pub name: String,
}

/// Ordered observable names; the observable at position `i` has id `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Self, AutomatonError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() > MAX_OBSERVABLES {
            return Err(AutomatonError::AlphabetTooLarge(names.len()));
        }
        let mut seen = BTreeSet::new();
        for name in &names {
            let bad = name.is_empty()
                || name == "_"
                || name
                    .chars()
                    .any(|c| c.is_whitespace() || matches!(c, ',' | '|' | ';' | '"' | '&' | '!'));
            if bad {
                return Err(AutomatonError::InvalidName(name.clone()));
            }
            if !seen.insert(name.as_str()) {
                return Err(AutomatonError::DuplicateName(name.clone()));
            }
        }
        Ok(Alphabet { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, id: u8) -> &str {
        &self.names[id as usize - 1]
    }

    pub fn id_of(&self, name: &str) -> Option<u8> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| (i + 1) as u8)
    }

    pub fn observables(&self) -> impl Iterator<Item = Observable> + '_ {
        self.names.iter().enumerate().map(|(i, n)| Observable {
            id: (i + 1) as u8,
            name: n.clone(),
        })
    }

    /// Mask with one bit per observable of the alphabet.
    pub fn full_mask(&self) -> u32 {
        if self.names.len() == 32 {
            u32::MAX
        } else {
            (1u32 << self.names.len()) - 1
        }
    }

    pub fn observation<'a, I>(&self, names: I) -> Result<Observation, AutomatonError>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut obs = Observation::EMPTY;
        for n in names {
            let id = self
                .id_of(n)
                .ok_or_else(|| AutomatonError::UnknownObservable(n.to_string()))?;
            obs = obs.with(id);
        }
        Ok(obs)
    }

    pub fn conjunction(&self, pos: &[&str], neg: &[&str]) -> Result<Conjunction, AutomatonError> {
        let p = self.observation(pos.iter().copied())?;
        let n = self.observation(neg.iter().copied())?;
        Conjunction::new(p, n).ok_or_else(|| {
            let clash = p.bits() & n.bits();
            AutomatonError::ContradictoryLiteral(self.name(clash.trailing_zeros() as u8 + 1).into())
        })
    }

    /// Comma-separated member names, `_` for the empty observation.
    pub fn format_observation(&self, obs: Observation) -> String {
        if obs.is_empty() {
            return "_".to_string();
        }
        obs.ids()
            .map(|id| self.name(id))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse_observation(&self, text: &str) -> Result<Observation, AutomatonError> {
        let text = text.trim();
        if text == "_" || text.is_empty() {
            return Ok(Observation::EMPTY);
        }
        self.observation(text.split(',').map(str::trim))
    }

    pub fn format_conjunction(&self, c: &Conjunction) -> String {
        if c.is_unlabeled() {
            return "true".to_string();
        }
        let mut lits: Vec<String> = c.pos().ids().map(|id| self.name(id).to_string()).collect();
        lits.extend(c.neg().ids().map(|id| format!("!{}", self.name(id))));
        lits.join(" & ")
    }
}

impl TryFrom<Vec<String>> for Alphabet {
    type Error = AutomatonError;
    fn try_from(v: Vec<String>) -> Result<Self, Self::Error> {
        Alphabet::new(v)
    }
}

impl From<Alphabet> for Vec<String> {
    fn from(a: Alphabet) -> Self {
        a.names
    }
}

/// A set of observable ids; bit `id - 1` is set for each member.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Observation(u32);

impl Observation {
    pub const EMPTY: Observation = Observation(0);

    pub fn from_bits(bits: u32) -> Self {
        Observation(bits)
    }

    pub fn from_ids(ids: &[u8]) -> Self {
        ids.iter().fold(Observation::EMPTY, |o, &id| o.with(id))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn with(self, id: u8) -> Self {
        debug_assert!(id >= 1 && (id as usize) <= MAX_OBSERVABLES);
        Observation(self.0 | 1 << (id - 1))
    }

    pub fn contains(self, id: u8) -> bool {
        self.0 & (1 << (id - 1)) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn ids(self) -> impl Iterator<Item = u8> {
        let bits = self.0;
        (0..32u8)
            .filter(move |i| bits & (1 << i) != 0)
            .map(|i| i + 1)
    }

    pub fn restrict(self, mask: u32) -> Self {
        Observation(self.0 & mask)
    }
}

/// A conjunction of literals; the empty conjunction is an unconditional edge.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Conjunction {
    pos: u32,
    neg: u32,
}

impl Conjunction {
    pub const TRUE: Conjunction = Conjunction { pos: 0, neg: 0 };

    /// `None` if some observable occurs with both polarities.
    pub fn new(pos: Observation, neg: Observation) -> Option<Self> {
        Self::from_bits(pos.bits(), neg.bits())
    }

    pub fn from_bits(pos: u32, neg: u32) -> Option<Self> {
        (pos & neg == 0).then_some(Conjunction { pos, neg })
    }

    pub fn pos(&self) -> Observation {
        Observation(self.pos)
    }

    pub fn neg(&self) -> Observation {
        Observation(self.neg)
    }

    pub fn num_literals(&self) -> usize {
        (self.pos.count_ones() + self.neg.count_ones()) as usize
    }

    pub fn is_unlabeled(&self) -> bool {
        self.pos == 0 && self.neg == 0
    }

    pub fn is_purely_negative(&self) -> bool {
        self.pos == 0 && self.neg != 0
    }

    pub fn satisfied_by(&self, obs: Observation) -> bool {
        obs.0 & self.pos == self.pos && obs.0 & self.neg == 0
    }

    /// Syntactic mutual exclusion: some observable is positive in one and
    /// negative in the other.
    pub fn excludes(&self, other: &Conjunction) -> bool {
        self.pos & other.neg != 0 || self.neg & other.pos != 0
    }

    pub fn label_set(&self, num_observables: usize) -> LabelSet {
        LabelSet::from_conjunction(self, num_observables)
    }
}

pub fn satisfies(observation: Observation, conj: &Conjunction) -> bool {
    conj.satisfied_by(observation)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StateId {
    Initial,
    Plain(u32),
    Accepting,
    Rejecting,
}

impl StateId {
    pub fn is_absorbing(self) -> bool {
        matches!(self, StateId::Accepting | StateId::Rejecting)
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateId::Initial => write!(f, "u0"),
            StateId::Plain(i) => write!(f, "u{i}"),
            StateId::Accepting => write!(f, "uA"),
            StateId::Rejecting => write!(f, "uR"),
        }
    }
}

impl FromStr for StateId {
    type Err = AutomatonError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "u0" => Ok(StateId::Initial),
            "uA" => Ok(StateId::Accepting),
            "uR" => Ok(StateId::Rejecting),
            _ => s
                .strip_prefix('u')
                .and_then(|n| n.parse::<u32>().ok())
                .filter(|&n| n >= 1)
                .map(StateId::Plain)
                .ok_or_else(|| AutomatonError::Malformed(format!("bad state name {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject,
    Neither,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceMode {
    Min,
    Max,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Distance {
    Finite(usize),
    Unreachable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StructuralReport {
    pub acyclic: bool,
    pub all_reachable: bool,
    pub has_purely_negative_edge: bool,
    pub has_unlabeled_edge: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubgoalAutomaton {
    alphabet: Alphabet,
    num_plain: u32,
    accepting: bool,
    rejecting: bool,
    // Disjuncts of each formula are kept sorted by label-set order.
    phi: BTreeMap<(StateId, StateId), Vec<Conjunction>>,
}

impl SubgoalAutomaton {
    /// An automaton without edges over u0, u1..un and the requested specials.
    pub fn new(alphabet: Alphabet, num_plain: u32, accepting: bool, rejecting: bool) -> Self {
        SubgoalAutomaton {
            alphabet,
            num_plain,
            accepting,
            rejecting,
            phi: BTreeMap::new(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_plain(&self) -> u32 {
        self.num_plain
    }

    pub fn has_accepting(&self) -> bool {
        self.accepting
    }

    pub fn has_rejecting(&self) -> bool {
        self.rejecting
    }

    pub fn num_states(&self) -> usize {
        1 + self.num_plain as usize + self.accepting as usize + self.rejecting as usize
    }

    /// States in index order: u0, u1..un, uA, uR.
    pub fn states(&self) -> Vec<StateId> {
        let mut v = vec![StateId::Initial];
        v.extend((1..=self.num_plain).map(StateId::Plain));
        if self.accepting {
            v.push(StateId::Accepting);
        }
        if self.rejecting {
            v.push(StateId::Rejecting);
        }
        v
    }

    pub fn contains_state(&self, u: StateId) -> bool {
        match u {
            StateId::Initial => true,
            StateId::Plain(i) => i >= 1 && i <= self.num_plain,
            StateId::Accepting => self.accepting,
            StateId::Rejecting => self.rejecting,
        }
    }

    /// Position of `u` in [`states`](Self::states).
    pub fn state_index(&self, u: StateId) -> Option<usize> {
        if !self.contains_state(u) {
            return None;
        }
        Some(match u {
            StateId::Initial => 0,
            StateId::Plain(i) => i as usize,
            StateId::Accepting => 1 + self.num_plain as usize,
            StateId::Rejecting => 1 + self.num_plain as usize + self.accepting as usize,
        })
    }

    fn sort_key(&self, c: &Conjunction) -> u64 {
        c.label_set(self.alphabet.len()).key()
    }

    pub fn add_disjunct(
        &mut self,
        from: StateId,
        to: StateId,
        conj: Conjunction,
    ) -> Result<(), AutomatonError> {
        for s in [from, to] {
            if !self.contains_state(s) {
                return Err(AutomatonError::UnknownState(s));
            }
        }
        if from.is_absorbing() {
            return Err(AutomatonError::AbsorbingSource(from));
        }
        if from == to {
            return Err(AutomatonError::SelfLoop(from));
        }
        let full = self.alphabet.full_mask();
        if (conj.pos | conj.neg) & !full != 0 {
            return Err(AutomatonError::Malformed(
                "conjunction uses observables outside the alphabet".into(),
            ));
        }
        let key = self.sort_key(&conj);
        let n = self.alphabet.len();
        let dnf = self.phi.entry((from, to)).or_default();
        if dnf.contains(&conj) {
            return Err(AutomatonError::DuplicateDisjunct(from, to));
        }
        let at = dnf.partition_point(|c| c.label_set(n).key() < key);
        dnf.insert(at, conj);
        Ok(())
    }

    /// Disjuncts of φ(from, to); empty when the formula is ⊥.
    pub fn formula(&self, from: StateId, to: StateId) -> &[Conjunction] {
        self.phi.get(&(from, to)).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Non-⊥ formulas keyed by (from, to).
    pub fn edges(&self) -> impl Iterator<Item = (StateId, StateId, &[Conjunction])> {
        self.phi.iter().map(|(&(f, t), d)| (f, t, d.as_slice()))
    }

    /// Outgoing disjuncts of `u` as (target, conjunction), grouped by target.
    pub fn outgoing(&self, u: StateId) -> impl Iterator<Item = (StateId, &Conjunction)> {
        self.phi
            .range((u, StateId::Initial)..=(u, StateId::Rejecting))
            .flat_map(|(&(_, t), d)| d.iter().map(move |c| (t, c)))
    }

    pub fn num_disjuncts(&self) -> usize {
        self.phi.values().map(Vec::len).sum()
    }

    pub fn num_literals(&self) -> usize {
        self.phi
            .values()
            .flatten()
            .map(Conjunction::num_literals)
            .sum()
    }

    pub fn delta(&self, u: StateId, obs: Observation) -> Result<StateId, NondeterminismError> {
        if u.is_absorbing() {
            return Ok(u);
        }
        let mut next: Option<StateId> = None;
        for (t, c) in self.outgoing(u) {
            if c.satisfied_by(obs) {
                match next {
                    Some(prev) if prev != t => {
                        return Err(NondeterminismError {
                            state: u,
                            first: prev,
                            second: t,
                        })
                    }
                    _ => next = Some(t),
                }
            }
        }
        Ok(next.unwrap_or(u))
    }

    pub fn traverse_observations(
        &self,
        observations: &[Observation],
    ) -> Result<Vec<StateId>, NondeterminismError> {
        let mut path = Vec::with_capacity(observations.len() + 1);
        let mut u = StateId::Initial;
        path.push(u);
        for &o in observations {
            u = self.delta(u, o)?;
            path.push(u);
        }
        Ok(path)
    }

    pub fn traverse(&self, trace: &ObservationTrace) -> Result<Vec<StateId>, NondeterminismError> {
        self.traverse_observations(trace.observations())
    }

    pub fn evaluate_observations(
        &self,
        observations: &[Observation],
    ) -> Result<Verdict, NondeterminismError> {
        let mut u = StateId::Initial;
        for &o in observations {
            u = self.delta(u, o)?;
        }
        Ok(verdict_of(u))
    }

    pub fn evaluate(&self, trace: &ObservationTrace) -> Result<Verdict, NondeterminismError> {
        self.evaluate_observations(trace.observations())
    }

    /// A nondeterministic traversal is never valid.
    pub fn is_valid_wrt(&self, trace: &ObservationTrace) -> bool {
        matches!(
            (self.evaluate(trace), trace.kind()),
            (Ok(Verdict::Accept), TraceKind::Goal)
                | (Ok(Verdict::Reject), TraceKind::DeadEnd)
                | (Ok(Verdict::Neither), TraceKind::Incomplete)
        )
    }

    /// Syntactic determinism: disjuncts towards different targets exclude each other.
    pub fn is_deterministic(&self) -> bool {
        self.states().into_iter().all(|u| {
            let out: Vec<_> = self.outgoing(u).collect();
            out.iter().enumerate().all(|(i, (t1, c1))| {
                out[i + 1..]
                    .iter()
                    .all(|(t2, c2)| t1 == t2 || c1.excludes(c2))
            })
        })
    }

    /// Semantic determinism by enumerating every observation over the alphabet.
    pub fn is_deterministic_exhaustive(&self) -> bool {
        assert!(
            self.alphabet.len() <= 20,
            "exhaustive check limited to 20 observables"
        );
        let all = 1u32 << self.alphabet.len();
        self.states()
            .into_iter()
            .all(|u| (0..all).all(|bits| self.delta(u, Observation(bits)).is_ok()))
    }

    fn successors(&self, u: StateId) -> BTreeSet<StateId> {
        self.phi
            .range((u, StateId::Initial)..=(u, StateId::Rejecting))
            .map(|(&(_, t), _)| t)
            .collect()
    }

    fn reachable_from(&self, start: StateId) -> BTreeSet<StateId> {
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for t in self.successors(u) {
                if seen.insert(t) {
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    pub fn is_acyclic(&self) -> bool {
        // Kahn's algorithm over the edge support; absorbing states have no
        // outgoing edges so they can never sit on a cycle.
        let states = self.states();
        let mut indeg: BTreeMap<StateId, usize> = states.iter().map(|&s| (s, 0)).collect();
        for &(_, t) in self.phi.keys() {
            *indeg.get_mut(&t).unwrap() += 1;
        }
        let mut queue: VecDeque<StateId> = indeg
            .iter()
            .filter(|(_, &d)| d == 0)
            .map(|(&s, _)| s)
            .collect();
        let mut removed = 0;
        while let Some(u) = queue.pop_front() {
            removed += 1;
            for t in self.successors(u) {
                let d = indeg.get_mut(&t).unwrap();
                *d -= 1;
                if *d == 0 {
                    queue.push_back(t);
                }
            }
        }
        removed == states.len()
    }

    pub fn structural_checks(&self) -> StructuralReport {
        let reach = self.reachable_from(StateId::Initial);
        let all = self.phi.values().flatten();
        StructuralReport {
            acyclic: self.is_acyclic(),
            all_reachable: reach.len() == self.num_states(),
            has_purely_negative_edge: all.clone().any(Conjunction::is_purely_negative),
            has_unlabeled_edge: all.clone().any(Conjunction::is_unlabeled),
        }
    }

    /// Shortest or longest simple path length (in edges) from `u` to uA.
    pub fn distance_to_accepting(&self, u: StateId, mode: DistanceMode) -> Distance {
        if !self.accepting || !self.contains_state(u) {
            return Distance::Unreachable;
        }
        match mode {
            DistanceMode::Min => {
                let mut dist = BTreeMap::from([(u, 0usize)]);
                let mut queue = VecDeque::from([u]);
                while let Some(v) = queue.pop_front() {
                    let d = dist[&v];
                    if v == StateId::Accepting {
                        return Distance::Finite(d);
                    }
                    for t in self.successors(v) {
                        if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(t) {
                            e.insert(d + 1);
                            queue.push_back(t);
                        }
                    }
                }
                Distance::Unreachable
            }
            DistanceMode::Max => {
                let mut on_path = BTreeSet::new();
                match self.longest_simple_path(u, &mut on_path) {
                    Some(d) => Distance::Finite(d),
                    None => Distance::Unreachable,
                }
            }
        }
    }

    fn longest_simple_path(&self, u: StateId, on_path: &mut BTreeSet<StateId>) -> Option<usize> {
        if u == StateId::Accepting {
            return Some(0);
        }
        on_path.insert(u);
        let mut best = None;
        for t in self.successors(u) {
            if on_path.contains(&t) {
                continue;
            }
            if let Some(d) = self.longest_simple_path(t, on_path) {
                best = best.max(Some(d + 1));
            }
        }
        on_path.remove(&u);
        best
    }

    /// Copy with plain states renamed: plain state `i` becomes `perm[i - 1]`.
    pub fn rename_plain(&self, perm: &[u32]) -> SubgoalAutomaton {
        assert_eq!(perm.len(), self.num_plain as usize);
        let map = |s: StateId| match s {
            StateId::Plain(i) => StateId::Plain(perm[i as usize - 1]),
            other => other,
        };
        let mut out = SubgoalAutomaton::new(
            self.alphabet.clone(),
            self.num_plain,
            self.accepting,
            self.rejecting,
        );
        for (&(f, t), dnf) in &self.phi {
            out.phi.insert((map(f), map(t)), dnf.clone());
        }
        out
    }

    /// Graphviz rendering; one node line per state and one edge line per disjunct.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph subgoal_automaton {\n    rankdir=LR;\n");
        for u in self.states() {
            let attrs = match u {
                StateId::Initial => "shape=circle, style=bold",
                StateId::Accepting => "shape=doublecircle",
                StateId::Rejecting => "shape=circle, style=dashed",
                StateId::Plain(_) => "shape=circle",
            };
            s.push_str(&format!("    {u} [{attrs}];\n"));
        }
        for (&(f, t), dnf) in &self.phi {
            for c in dnf {
                let label = self.alphabet.format_conjunction(c);
                s.push_str(&format!("    {f} -> {t} [label=\"{label}\"];\n"));
            }
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> String {
        let doc = AutomatonDoc {
            alphabet: self.alphabet.names.clone(),
            states: self.states().iter().map(ToString::to_string).collect(),
            edges: self
                .phi
                .iter()
                .flat_map(|(&(f, t), dnf)| {
                    dnf.iter().map(move |c| EdgeDoc {
                        from: f.to_string(),
                        to: t.to_string(),
                        pos: c
                            .pos()
                            .ids()
                            .map(|id| self.alphabet.name(id).to_string())
                            .collect(),
                        neg: c
                            .neg()
                            .ids()
                            .map(|id| self.alphabet.name(id).to_string())
                            .collect(),
                    })
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("automaton serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, AutomatonError> {
        let doc: AutomatonDoc =
            serde_json::from_str(text).map_err(|e| AutomatonError::Malformed(e.to_string()))?;
        let alphabet = Alphabet::new(doc.alphabet)?;
        let states = doc
            .states
            .iter()
            .map(|s| s.parse::<StateId>())
            .collect::<Result<BTreeSet<_>, _>>()?;
        if !states.contains(&StateId::Initial) {
            return Err(AutomatonError::Malformed("missing initial state u0".into()));
        }
        let plain: Vec<u32> = states
            .iter()
            .filter_map(|s| match s {
                StateId::Plain(i) => Some(*i),
                _ => None,
            })
            .collect();
        let n = plain.len() as u32;
        if plain.iter().copied().ne(1..=n) {
            return Err(AutomatonError::Malformed(
                "plain states must be u1..un".into(),
            ));
        }
        let mut a = SubgoalAutomaton::new(
            alphabet,
            n,
            states.contains(&StateId::Accepting),
            states.contains(&StateId::Rejecting),
        );
        for e in doc.edges {
            let from: StateId = e.from.parse()?;
            let to: StateId = e.to.parse()?;
            let pos: Vec<&str> = e.pos.iter().map(String::as_str).collect();
            let neg: Vec<&str> = e.neg.iter().map(String::as_str).collect();
            let c = a.alphabet.conjunction(&pos, &neg)?;
            a.add_disjunct(from, to, c)?;
        }
        Ok(a)
    }
}

fn verdict_of(u: StateId) -> Verdict {
    match u {
        StateId::Accepting => Verdict::Accept,
        StateId::Rejecting => Verdict::Reject,
        _ => Verdict::Neither,
    }
}

#[derive(Serialize, Deserialize)]
struct AutomatonDoc {
    alphabet: Vec<String>,
    states: Vec<String>,
    edges: Vec<EdgeDoc>,
}

#[derive(Serialize, Deserialize)]
struct EdgeDoc {
    from: String,
    to: String,
    #[serde(default)]
    pos: Vec<String>,
    #[serde(default)]
    neg: Vec<String>,
}
