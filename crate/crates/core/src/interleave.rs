//! Episodic RL interleaved with automaton induction: run episodes, turn
//! misrecognised traces into examples, relearn, and reset Q-functions.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::automaton::{Observation, StateId, SubgoalAutomaton};
use crate::env::{Action, Environment, GridPos};
use crate::induction::{learn_minimal_automaton, InductionConfig, InductionError, InductionStats};
use crate::policy::{
    qrm_step, select_action, update_all_formula_q, update_meta_q, OptionId, PolicyMode,
    PolicyStore, PseudoRewardSpec, RLParams, ShapingMode, ShapingSpec,
};
use crate::trace::{classify, ObservationTrace, StepFlags, TraceSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "hrl")]
    Hrl,
    #[serde(rename = "hrl_g")]
    HrlG,
    #[serde(rename = "qrm")]
    Qrm,
    #[serde(rename = "qrm_min")]
    QrmMin,
    #[serde(rename = "qrm_max")]
    QrmMax,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Hrl,
        Algorithm::HrlG,
        Algorithm::Qrm,
        Algorithm::QrmMin,
        Algorithm::QrmMax,
    ];

    pub fn policy_mode(self) -> PolicyMode {
        match self {
            Algorithm::Hrl | Algorithm::HrlG => PolicyMode::Hrl,
            _ => PolicyMode::Qrm,
        }
    }

    pub fn pseudo_reward(self, max_episode_length: usize) -> PseudoRewardSpec {
        match self {
            Algorithm::HrlG => PseudoRewardSpec::guided(max_episode_length),
            _ => PseudoRewardSpec::PLAIN,
        }
    }

    pub fn shaping(self) -> ShapingSpec {
        match self {
            Algorithm::QrmMin => ShapingSpec::new(ShapingMode::Min),
            Algorithm::QrmMax => ShapingSpec::new(ShapingMode::Max),
            _ => ShapingSpec::NONE,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Hrl => "hrl",
            Algorithm::HrlG => "hrl_g",
            Algorithm::Qrm => "qrm",
            Algorithm::QrmMin => "qrm_min",
            Algorithm::QrmMax => "qrm_max",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let norm = s.to_ascii_lowercase().replace('-', "_");
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == norm)
            .ok_or_else(|| format!("unknown algorithm {s:?}"))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgoConfig {
    pub algorithm: Algorithm,
    pub rl: RLParams,
    pub max_episode_length: usize,
    pub compressed: bool,
    /// `false` keeps the initial (e.g. handcrafted) automaton for the whole run.
    pub learn_automaton: bool,
    pub induction: InductionConfig,
}

impl Default for AlgoConfig {
    fn default() -> Self {
        AlgoConfig {
            algorithm: Algorithm::HrlG,
            rl: RLParams::default(),
            max_episode_length: 250,
            compressed: true,
            learn_automaton: true,
            induction: InductionConfig::default(),
        }
    }
}

pub fn is_counterexample(flags: StepFlags, u: StateId) -> bool {
    (flags.goal && u != StateId::Accepting)
        || (flags.terminal && !flags.goal && u != StateId::Rejecting)
        || (!flags.terminal && u.is_absorbing())
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelearnEvent {
    pub episode: usize,
    pub stats: InductionStats,
}

impl RelearnEvent {
    pub const CSV_HEADER: &'static str = "episode,solver_time_s,n_states,n_goal,n_dead,n_inc";

    pub fn csv_row(&self) -> String {
        let s = &self.stats;
        format!(
            "{},{:.6},{},{},{},{}",
            self.episode,
            s.wall_time.as_secs_f64(),
            s.num_states,
            s.n_goal,
            s.n_dead,
            s.n_inc
        )
    }
}

#[derive(Clone, Debug)]
pub struct RunState {
    pub automaton: SubgoalAutomaton,
    pub examples: TraceSet,
    pub store: PolicyStore,
    pub automaton_history: Vec<SubgoalAutomaton>,
    pub episode_index: usize,
    pub first_goal_seen: bool,
    pub relearn_events: Vec<RelearnEvent>,
    rng: ChaCha8Rng,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpisodeRecord {
    pub total_reward: f64,
    pub steps: usize,
    pub counterexample_found: bool,
}

/// The option currently being executed by an HRL agent.
#[derive(Clone, Copy, Debug)]
struct RunningOption {
    u: StateId,
    s_start: usize,
    index: usize,
    option: OptionId,
    k: usize,
    cum_reward: f64,
}

impl RunState {
    /// Starts from `initial` (an edgeless automaton when learning, or a
    /// handcrafted one); `seed` drives the policy's random stream.
    pub fn new(initial: SubgoalAutomaton, num_actions: usize, cfg: &AlgoConfig, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(1);
        RunState {
            store: PolicyStore::new(&initial, num_actions, cfg.algorithm.policy_mode()),
            automaton_history: vec![initial.clone()],
            automaton: initial,
            examples: TraceSet::new(),
            episode_index: 0,
            first_goal_seen: false,
            relearn_events: Vec::new(),
            rng,
        }
    }

    /// Records a misrecognised trace and, once a goal trace exists, relearns.
    pub fn on_counterexample(
        &mut self,
        trace: ObservationTrace,
        cfg: &AlgoConfig,
    ) -> Result<(), InductionError> {
        debug_assert!(!self.automaton.is_valid_wrt(&trace));
        self.first_goal_seen |= trace.kind() == crate::trace::TraceKind::Goal;
        self.examples.insert(trace);
        if !self.first_goal_seen || !cfg.learn_automaton {
            return Ok(());
        }
        let alphabet = self.automaton.alphabet().clone();
        let (a, stats) = learn_minimal_automaton(
            &self.examples,
            &alphabet,
            self.automaton.num_plain(),
            &cfg.induction,
        )?;
        assert!(
            !self.automaton_history.contains(&a),
            "relearning produced an automaton seen before in this run"
        );
        assert!(
            self.examples.iter().all(|t| a.is_valid_wrt(t)),
            "relearned automaton misses an example"
        );
        crate::policy::on_new_automaton(&mut self.store, &a, cfg.algorithm.policy_mode());
        self.automaton_history.push(a.clone());
        self.automaton = a;
        self.relearn_events.push(RelearnEvent {
            episode: self.episode_index,
            stats,
        });
        Ok(())
    }

    /// One training episode on `env`, the `env_index`-th environment of the
    /// run (each environment gets its own block of visible-state rows).
    pub fn run_episode(
        &mut self,
        env: &mut Environment,
        env_index: usize,
        cfg: &AlgoConfig,
    ) -> Result<EpisodeRecord, InductionError> {
        let params = cfg.rl;
        let spec = cfg.algorithm.pseudo_reward(cfg.max_episode_length);
        let shaping = cfg.algorithm.shaping();
        let mode = cfg.algorithm.policy_mode();
        let base = env_index * env.num_states();

        let first = env.reset();
        let mut trace = ObservationTrace::empty(cfg.compressed);
        let advanced = append(&mut trace, first.observation, cfg.compressed);
        let start =
            |a: &SubgoalAutomaton| step_automaton(a, StateId::Initial, first.observation, advanced);
        let mut u = start(&self.automaton);
        let mut record = EpisodeRecord {
            total_reward: first.reward,
            steps: 0,
            counterexample_found: false,
        };
        if is_counterexample(first.flags, u) {
            record.counterexample_found = true;
            self.on_counterexample(trace.clone().with_kind(classify(first.flags)), cfg)?;
            u = start(&self.automaton);
        }

        let mut s = base + env.visible_state();
        let mut flags = first.flags;
        let mut running: Option<RunningOption> = None;
        while record.steps < cfg.max_episode_length && !flags.terminal {
            let action = choose_action(
                &self.store,
                mode,
                &mut running,
                u,
                s,
                params.epsilon,
                params.random_ties,
                &mut self.rng,
            );
            let r = env
                .step(Action::from_index(action))
                .expect("episode still running");
            record.steps += 1;
            record.total_reward += r.reward;
            let advanced = append(&mut trace, r.observation, cfg.compressed);
            let u_next = step_automaton(&self.automaton, u, r.observation, advanced);
            let s_next = base + env.visible_state();

            if is_counterexample(r.flags, u_next) {
                record.counterexample_found = true;
                self.on_counterexample(trace.with_kind(classify(r.flags)), cfg)?;
                break;
            }
            match mode {
                PolicyMode::Hrl => {
                    update_all_formula_q(
                        &mut self.store,
                        s,
                        action,
                        s_next,
                        r.observation,
                        r.flags,
                        &params,
                        &spec,
                    );
                    let opt = running.as_mut().expect("an option is running");
                    opt.cum_reward += params.gamma.powi(opt.k as i32) * r.reward;
                    opt.k += 1;
                    if r.flags.terminal
                        || u_next != u
                        || matches!(opt.option, OptionId::Primitive(_))
                    {
                        let o = *opt;
                        update_meta_q(
                            &mut self.store,
                            o.u,
                            o.s_start,
                            o.index,
                            o.k,
                            o.cum_reward,
                            s_next,
                            u_next,
                            r.flags.terminal,
                            &params,
                        );
                        running = None;
                    }
                }
                PolicyMode::Qrm => {
                    let next_obs = advanced.then_some(r.observation);
                    qrm_step(
                        &mut self.store,
                        &self.automaton,
                        s,
                        action,
                        s_next,
                        next_obs,
                        r.flags,
                        &params,
                        &shaping,
                    );
                }
            }
            s = s_next;
            u = u_next;
            flags = r.flags;
        }
        // an option cut off by the step cap is interrupted, not terminated
        if let Some(o) =
            running.filter(|o| o.k > 0 && !flags.terminal && !record.counterexample_found)
        {
            update_meta_q(
                &mut self.store,
                o.u,
                o.s_start,
                o.index,
                o.k,
                o.cum_reward,
                s,
                u,
                false,
                &params,
            );
        }
        self.episode_index += 1;
        Ok(record)
    }

    /// Greedy rollout (ε = 0) on a copy of `env`; nothing is learned.  Ties
    /// are broken by a generator private to this evaluation.
    pub fn evaluate_greedy(&self, env: &Environment, env_index: usize, cfg: &AlgoConfig) -> f64 {
        self.greedy_rollout(env, env_index, cfg).0
    }

    /// The greedy rollout's total reward and the (position, automaton state)
    /// pairs it visits.
    pub fn greedy_rollout(
        &self,
        env: &Environment,
        env_index: usize,
        cfg: &AlgoConfig,
    ) -> (f64, Vec<(GridPos, StateId)>) {
        let mut env = env.clone();
        let mut rng =
            ChaCha8Rng::seed_from_u64(((self.episode_index as u64) << 20) ^ env_index as u64);
        rng.set_stream(2);
        let mode = cfg.algorithm.policy_mode();
        let base = env_index * env.num_states();
        let first = env.reset();
        let mut trace = ObservationTrace::empty(cfg.compressed);
        let advanced = append(&mut trace, first.observation, cfg.compressed);
        let mut u = step_automaton(
            &self.automaton,
            StateId::Initial,
            first.observation,
            advanced,
        );
        let mut total = first.reward;
        let mut flags = first.flags;
        let mut running: Option<RunningOption> = None;
        let mut path = vec![(env.pos(), u)];
        while path.len() <= cfg.max_episode_length && !flags.terminal {
            let s = base + env.visible_state();
            let action = choose_action(
                &self.store,
                mode,
                &mut running,
                u,
                s,
                0.0,
                cfg.rl.random_ties,
                &mut rng,
            );
            let r = env
                .step(Action::from_index(action))
                .expect("episode still running");
            total += r.reward;
            let advanced = append(&mut trace, r.observation, cfg.compressed);
            let u_next = step_automaton(&self.automaton, u, r.observation, advanced);
            if running.is_some_and(|o| {
                r.flags.terminal || u_next != u || matches!(o.option, OptionId::Primitive(_))
            }) {
                running = None;
            }
            u = u_next;
            flags = r.flags;
            path.push((env.pos(), u));
        }
        (total, path)
    }
}

fn append(trace: &mut ObservationTrace, o: Observation, compressed: bool) -> bool {
    trace.append_observation(o, compressed)
}

/// Automaton successor; observations dropped by compression leave it put.
fn step_automaton(a: &SubgoalAutomaton, u: StateId, o: Observation, advanced: bool) -> StateId {
    if advanced {
        a.delta(u, o).expect("learned automata are deterministic")
    } else {
        u
    }
}

/// Next primitive action: HRL picks an option first if none is running.
#[allow(clippy::too_many_arguments)]
fn choose_action(
    store: &PolicyStore,
    mode: PolicyMode,
    running: &mut Option<RunningOption>,
    u: StateId,
    s: usize,
    epsilon: f64,
    random_ties: bool,
    rng: &mut ChaCha8Rng,
) -> usize {
    match mode {
        PolicyMode::Hrl => {
            let opt = *running.get_or_insert_with(|| {
                let index = select_action(&store.meta_q[&u].row(s), epsilon, random_ties, rng);
                RunningOption {
                    u,
                    s_start: s,
                    index,
                    option: store.options(u)[index],
                    k: 0,
                    cum_reward: 0.0,
                }
            });
            match opt.option {
                OptionId::Primitive(a) => a,
                OptionId::Formula(phi) => select_action(
                    &store.formula_q[&phi].table.row(s),
                    epsilon,
                    random_ties,
                    rng,
                ),
            }
        }
        PolicyMode::Qrm => {
            let row = store
                .state_q
                .get(&u)
                .map_or_else(|| vec![0.0; store.num_actions()], |q| q.row(s));
            select_action(&row, epsilon, random_ties, rng)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpisodeMetrics {
    pub episode: usize,
    pub env_index: usize,
    pub train_reward: f64,
    pub greedy_mean_reward: f64,
    pub steps: usize,
    pub automata_learned_so_far: usize,
}

impl EpisodeMetrics {
    pub const CSV_HEADER: &'static str =
        "episode,env_index,train_reward,greedy_mean_reward,steps,automata_learned_so_far";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.episode,
            self.env_index,
            self.train_reward,
            self.greedy_mean_reward,
            self.steps,
            self.automata_learned_so_far
        )
    }
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub metrics: Vec<EpisodeMetrics>,
    pub state: RunState,
    /// The solver timed out; every reward of the run reads 0.
    pub timed_out: Option<InductionStats>,
}

/// Round-robin training over `envs`, one episode at a time, with a greedy
/// evaluation on every environment after each training episode.
pub fn run_experiment(
    envs: &mut [Environment],
    episodes: usize,
    cfg: &AlgoConfig,
    initial: SubgoalAutomaton,
    seed: u64,
) -> RunOutput {
    assert!(!envs.is_empty(), "at least one environment is required");
    let num_actions = envs[0].num_actions();
    let mut state = RunState::new(initial, num_actions, cfg, seed);
    let mut metrics = Vec::with_capacity(episodes);
    let mut timed_out = None;
    for episode in 0..episodes {
        let env_index = episode % envs.len();
        let record = match state.run_episode(&mut envs[env_index], env_index, cfg) {
            Ok(r) => r,
            Err(InductionError::Timeout { stats }) => {
                timed_out = Some(stats);
                break;
            }
            Err(e) => panic!("induction failed: {e}"),
        };
        let greedy: f64 = envs
            .iter()
            .enumerate()
            .map(|(i, e)| state.evaluate_greedy(e, i, cfg))
            .sum::<f64>()
            / envs.len() as f64;
        metrics.push(EpisodeMetrics {
            episode,
            env_index,
            train_reward: record.total_reward,
            greedy_mean_reward: greedy,
            steps: record.steps,
            automata_learned_so_far: state.relearn_events.len(),
        });
    }
    if timed_out.is_some() {
        for m in metrics.iter_mut() {
            m.train_reward = 0.0;
            m.greedy_mean_reward = 0.0;
        }
        let learned = state.relearn_events.len();
        for episode in metrics.len()..episodes {
            metrics.push(EpisodeMetrics {
                episode,
                env_index: episode % envs.len(),
                train_reward: 0.0,
                greedy_mean_reward: 0.0,
                steps: 0,
                automata_learned_so_far: learned,
            });
        }
    }
    RunOutput {
        metrics,
        state,
        timed_out,
    }
}
