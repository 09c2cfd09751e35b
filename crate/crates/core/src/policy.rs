//! Tabular Q-learning on top of a subgoal automaton.
//!
//! Two schemes share one store:
//! * HRL — one option per edge conjunction (its Q-function lives in a global
//!   dictionary keyed by the conjunction and survives relearning) plus an
//!   SMDP metacontroller per automaton state;
//! * QRM — one Q-function per automaton state, all updated from every step,
//!   optionally with potential-based shaping derived from distances to uA.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::automaton::{
    Conjunction, Distance, DistanceMode, Observation, StateId, SubgoalAutomaton,
};
use crate::trace::StepFlags;

pub type VisibleState = usize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RLParams {
    pub alpha: f64,
    pub epsilon: f64,
    pub gamma: f64,
    /// Break ties between maximisers uniformly at random instead of by index.
    pub random_ties: bool,
}

impl Default for RLParams {
    fn default() -> Self {
        RLParams {
            alpha: 0.1,
            epsilon: 0.1,
            gamma: 0.99,
            random_ties: true,
        }
    }
}

impl RLParams {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(format!("alpha must be in (0, 1], got {}", self.alpha));
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return Err(format!("epsilon must be in [0, 1], got {}", self.epsilon));
        }
        if !(0.0..1.0).contains(&self.gamma) {
            return Err(format!("gamma must be in [0, 1), got {}", self.gamma));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PseudoRewardSpec {
    pub r_success: f64,
    pub r_deadend: f64,
    pub r_step: f64,
}

impl PseudoRewardSpec {
    pub const PLAIN: PseudoRewardSpec = PseudoRewardSpec {
        r_success: 1.0,
        r_deadend: 0.0,
        r_step: 0.0,
    };

    /// The guided variant: dead ends cost as much as a whole episode.
    pub fn guided(max_episode_length: usize) -> Self {
        PseudoRewardSpec {
            r_success: 1.0,
            r_deadend: -(max_episode_length as f64),
            r_step: -0.01,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapingMode {
    None,
    Min,
    Max,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapingSpec {
    pub mode: ShapingMode,
    pub unreachable_penalty: f64,
}

impl ShapingSpec {
    pub const NONE: ShapingSpec = ShapingSpec {
        mode: ShapingMode::None,
        unreachable_penalty: 1e6,
    };

    pub fn new(mode: ShapingMode) -> Self {
        ShapingSpec { mode, ..Self::NONE }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolicyMode {
    Hrl,
    Qrm,
}

/// Dense state × action table; rows appear on first write and read as 0
/// before that.
#[derive(Clone, Debug, PartialEq)]
pub struct QTable {
    width: usize,
    values: Vec<f64>,
}

impl QTable {
    pub fn new(width: usize) -> Self {
        QTable {
            width,
            values: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn get(&self, s: VisibleState, a: usize) -> f64 {
        self.values.get(s * self.width + a).copied().unwrap_or(0.0)
    }

    pub fn set(&mut self, s: VisibleState, a: usize, v: f64) {
        let i = s * self.width + a;
        if i >= self.values.len() {
            self.values.resize((s + 1) * self.width, 0.0);
        }
        self.values[i] = v;
    }

    pub fn row(&self, s: VisibleState) -> Vec<f64> {
        (0..self.width).map(|a| self.get(s, a)).collect()
    }

    /// Max over the row; an empty table row reads 0.
    pub fn max(&self, s: VisibleState) -> f64 {
        if self.width == 0 {
            return 0.0;
        }
        (0..self.width)
            .map(|a| self.get(s, a))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// Entries that differ between two tables of the same width.
    pub fn diff_count(&self, other: &QTable) -> usize {
        let n = self.values.len().max(other.values.len());
        (0..n)
            .filter(|&i| self.values.get(i).unwrap_or(&0.0) != other.values.get(i).unwrap_or(&0.0))
            .count()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FormulaQ {
    pub table: QTable,
    pub update_count: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OptionId {
    Formula(Conjunction),
    /// One-step option running a primitive action.
    Primitive(usize),
}

/// Ω_u: one option per outgoing conjunction, or one-step options when `u`
/// has no outgoing edges (absorbing states, the edgeless initial automaton).
pub fn available_options(a: &SubgoalAutomaton, u: StateId, num_actions: usize) -> Vec<OptionId> {
    let opts: Vec<OptionId> = if u.is_absorbing() {
        Vec::new()
    } else {
        a.outgoing(u).map(|(_, c)| OptionId::Formula(*c)).collect()
    };
    if opts.is_empty() {
        (0..num_actions).map(OptionId::Primitive).collect()
    } else {
        opts
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolicyStore {
    num_actions: usize,
    pub formula_q: BTreeMap<Conjunction, FormulaQ>,
    pub meta_q: BTreeMap<StateId, QTable>,
    pub state_q: BTreeMap<StateId, QTable>,
    options: BTreeMap<StateId, Vec<OptionId>>,
}

impl PolicyStore {
    pub fn new(a: &SubgoalAutomaton, num_actions: usize, mode: PolicyMode) -> Self {
        let mut store = PolicyStore {
            num_actions,
            formula_q: BTreeMap::new(),
            meta_q: BTreeMap::new(),
            state_q: BTreeMap::new(),
            options: BTreeMap::new(),
        };
        store.rebuild(a, mode);
        store
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    pub fn options(&self, u: StateId) -> &[OptionId] {
        &self.options[&u]
    }

    fn rebuild(&mut self, a: &SubgoalAutomaton, mode: PolicyMode) {
        self.options = a
            .states()
            .into_iter()
            .map(|u| (u, available_options(a, u, self.num_actions)))
            .collect();
        self.meta_q.clear();
        self.state_q.clear();
        match mode {
            PolicyMode::Hrl => {
                for (u, opts) in &self.options {
                    self.meta_q.insert(*u, QTable::new(opts.len()));
                }
                let new: Vec<Conjunction> =
                    a.edges().flat_map(|(_, _, f)| f.iter().copied()).collect();
                for c in new {
                    if !self.formula_q.contains_key(&c) {
                        let seed = self.transfer_source(&c);
                        self.formula_q.insert(
                            c,
                            FormulaQ {
                                table: seed,
                                update_count: 0,
                            },
                        );
                    }
                }
            }
            PolicyMode::Qrm => {
                for u in a.states().into_iter().filter(|u| !u.is_absorbing()) {
                    self.state_q.insert(u, QTable::new(self.num_actions));
                }
            }
        }
    }

    /// Table to copy for a new conjunction: the stored one sharing most
    /// positive literals, most-updated on ties; zeros if nothing shares any.
    fn transfer_source(&self, c: &Conjunction) -> QTable {
        let score = |d: &Conjunction| (c.pos().bits() & d.pos().bits()).count_ones();
        self.formula_q
            .iter()
            .filter(|(d, _)| score(d) > 0)
            .max_by(|(d1, q1), (d2, q2)| {
                // ties beyond the update count go to the smaller conjunction
                (score(d1), q1.update_count, std::cmp::Reverse(*d1)).cmp(&(
                    score(d2),
                    q2.update_count,
                    std::cmp::Reverse(*d2),
                ))
            })
            .map(|(_, q)| q.table.clone())
            .unwrap_or_else(|| QTable::new(self.num_actions))
    }

    fn state_max(&self, u: StateId, s: VisibleState) -> f64 {
        self.state_q.get(&u).map_or(0.0, |q| q.max(s))
    }
}

/// β_u: the option running in `u` stops on a terminal step or when some
/// outgoing formula of `u` holds.
pub fn option_terminates(
    a: &SubgoalAutomaton,
    u: StateId,
    observation: Observation,
    flags: StepFlags,
) -> bool {
    flags.terminal
        || a.outgoing(u)
            .any(|(t, c)| t != u && c.satisfied_by(observation))
}

pub fn pseudo_reward(
    spec: &PseudoRewardSpec,
    phi: &Conjunction,
    next_obs: Observation,
    next_flags: StepFlags,
) -> f64 {
    if phi.satisfied_by(next_obs) {
        spec.r_success
    } else if next_flags.terminal && !next_flags.goal {
        spec.r_deadend
    } else {
        spec.r_step
    }
}

/// The two parts of a one-step Q-learning target.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Target {
    pub reward: f64,
    pub bootstrap: f64,
}

#[allow(clippy::too_many_arguments)]
pub fn update_formula_q(
    q: &mut FormulaQ,
    phi: &Conjunction,
    s: VisibleState,
    action: usize,
    s_next: VisibleState,
    next_obs: Observation,
    next_flags: StepFlags,
    params: &RLParams,
    spec: &PseudoRewardSpec,
) -> Target {
    let reward = pseudo_reward(spec, phi, next_obs, next_flags);
    let bootstrap = if next_flags.terminal || phi.satisfied_by(next_obs) {
        0.0
    } else {
        params.gamma * q.table.max(s_next)
    };
    let old = q.table.get(s, action);
    q.table
        .set(s, action, old + params.alpha * (reward + bootstrap - old));
    q.update_count += 1;
    Target { reward, bootstrap }
}

/// Intra-option learning: every stored option policy learns from the step.
#[allow(clippy::too_many_arguments)]
pub fn update_all_formula_q(
    store: &mut PolicyStore,
    s: VisibleState,
    action: usize,
    s_next: VisibleState,
    next_obs: Observation,
    next_flags: StepFlags,
    params: &RLParams,
    spec: &PseudoRewardSpec,
) {
    for (phi, q) in store.formula_q.iter_mut() {
        update_formula_q(
            q, phi, s, action, s_next, next_obs, next_flags, params, spec,
        );
    }
}

/// SMDP update of the metacontroller of `u` once the option it chose at
/// `s_start` has finished after `k` steps in `u_end`.
#[allow(clippy::too_many_arguments)]
pub fn update_meta_q(
    store: &mut PolicyStore,
    u: StateId,
    s_start: VisibleState,
    option: usize,
    k: usize,
    cum_reward: f64,
    s_end: VisibleState,
    u_end: StateId,
    end_terminal: bool,
    params: &RLParams,
) {
    let bootstrap = if end_terminal {
        0.0
    } else {
        params.gamma.powi(k as i32) * store.meta_q.get(&u_end).map_or(0.0, |q| q.max(s_end))
    };
    let q = store
        .meta_q
        .get_mut(&u)
        .expect("metacontroller for every automaton state");
    let old = q.get(s_start, option);
    q.set(
        s_start,
        option,
        old + params.alpha * (cum_reward + bootstrap - old),
    );
}

/// Φ(u) = |U| − d(u, uA); unreachable states get −penalty.
pub fn phi_potential(a: &SubgoalAutomaton, u: StateId, shaping: &ShapingSpec) -> f64 {
    let mode = match shaping.mode {
        ShapingMode::None => return 0.0,
        ShapingMode::Min => DistanceMode::Min,
        ShapingMode::Max => DistanceMode::Max,
    };
    match a.distance_to_accepting(u, mode) {
        Distance::Finite(d) => a.num_states() as f64 - d as f64,
        Distance::Unreachable => -shaping.unreachable_penalty,
    }
}

/// F(u, u') = γΦ(u') − Φ(u).
pub fn shaping_reward(
    a: &SubgoalAutomaton,
    u: StateId,
    u_next: StateId,
    gamma: f64,
    shaping: &ShapingSpec,
) -> f64 {
    if shaping.mode == ShapingMode::None {
        return 0.0;
    }
    gamma * phi_potential(a, u_next, shaping) - phi_potential(a, u, shaping)
}

/// One QRM step: every non-absorbing state's table learns from the
/// transition as if the automaton were in that state.  `next_obs` is `None`
/// when the observation does not advance the automaton (compressed traces
/// skip empty and repeated observations).
#[allow(clippy::too_many_arguments)]
pub fn qrm_step(
    store: &mut PolicyStore,
    a: &SubgoalAutomaton,
    s: VisibleState,
    action: usize,
    s_next: VisibleState,
    next_obs: Option<Observation>,
    next_flags: StepFlags,
    params: &RLParams,
    shaping: &ShapingSpec,
) {
    let states: Vec<StateId> = store.state_q.keys().copied().collect();
    let mut targets = Vec::with_capacity(states.len());
    for &u in &states {
        let u_next = match next_obs {
            Some(o) => a.delta(u, o).expect("automaton is deterministic"),
            None => u,
        };
        let r = if u != StateId::Accepting && u_next == StateId::Accepting {
            1.0
        } else {
            0.0
        };
        let f = shaping_reward(a, u, u_next, params.gamma, shaping);
        let bootstrap = if next_flags.terminal {
            0.0
        } else {
            params.gamma * store.state_max(u_next, s_next)
        };
        targets.push(r + f + bootstrap);
    }
    // all targets read the pre-update tables
    for (u, target) in states.into_iter().zip(targets) {
        let q = store.state_q.get_mut(&u).unwrap();
        let old = q.get(s, action);
        q.set(s, action, old + params.alpha * (target - old));
    }
}

/// Uniformly random with probability ε, otherwise the first maximiser.
pub fn select_action_epsilon_greedy(values: &[f64], epsilon: f64, rng: &mut impl Rng) -> usize {
    assert!(!values.is_empty(), "no actions to choose from");
    if epsilon > 0.0 && rng.gen::<f64>() < epsilon {
        return rng.gen_range(0..values.len());
    }
    argmax(values)
}

/// ε-greedy with either tie-breaking rule.
pub fn select_action(values: &[f64], epsilon: f64, random_ties: bool, rng: &mut impl Rng) -> usize {
    if !random_ties {
        return select_action_epsilon_greedy(values, epsilon, rng);
    }
    assert!(!values.is_empty(), "no actions to choose from");
    if epsilon > 0.0 && rng.gen::<f64>() < epsilon {
        return rng.gen_range(0..values.len());
    }
    let best = values[argmax(values)];
    let ties = values.iter().filter(|&&v| v == best).count();
    if ties == 1 {
        return argmax(values);
    }
    let pick = rng.gen_range(0..ties);
    values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v == best)
        .nth(pick)
        .unwrap()
        .0
}

pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Q-function management after relearning: QRM forgets everything; HRL
/// keeps its formula dictionary (seeding new formulas by transfer) and
/// starts fresh metacontrollers.
pub fn on_new_automaton(store: &mut PolicyStore, new_a: &SubgoalAutomaton, mode: PolicyMode) {
    store.rebuild(new_a, mode);
}
