#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use std::time::Duration;
use subgoal_automata::automaton::{Alphabet, Observation};
use subgoal_automata::induction::InductionConfig;
use subgoal_automata::trace::{ObservationTrace, TraceKind, TraceSet};

/// A tiny induction task within the oracle's reach.
#[derive(Clone, Debug)]
pub struct Instance {
    pub alphabet: Alphabet,
    pub examples: TraceSet,
    pub cfg: InductionConfig,
    pub n: u32,
}

pub fn random_instance(rng: &mut impl Rng) -> Instance {
    let k = rng.gen_range(1..=3usize);
    let alphabet = Alphabet::new(["a", "b", "c"].iter().take(k).copied()).unwrap();
    // a small pool of distinct observations keeps the example space dense
    let mut all: Vec<u32> = (0..1u32 << k).collect();
    all.shuffle(rng);
    let pool: Vec<u32> = all.into_iter().take(rng.gen_range(1..=4)).collect();
    let compressed = rng.gen_bool(0.3);
    let mut examples = TraceSet::new();
    let num = rng.gen_range(1..=6);
    for i in 0..num {
        let len = rng.gen_range(if i == 0 { 1 } else { 0 }..=4);
        let obs: Vec<Observation> = (0..len)
            .map(|_| Observation::from_bits(*pool.choose(rng).unwrap()))
            .collect();
        let kind = if i == 0 {
            TraceKind::Goal
        } else {
            *[TraceKind::Goal, TraceKind::DeadEnd, TraceKind::Incomplete]
                .choose(rng)
                .unwrap()
        };
        let t = ObservationTrace::new(obs, kind);
        examples.insert(if compressed { t.compress() } else { t });
    }
    let restricted_alphabet = if rng.gen_bool(0.2) {
        let names: Vec<String> = alphabet
            .names()
            .iter()
            .filter(|_| rng.gen_bool(0.6))
            .cloned()
            .collect();
        Some(names)
    } else {
        None
    };
    let cfg = InductionConfig {
        kappa: rng.gen_range(1..=2),
        max_states: 5,
        enforce_acyclic: rng.gen(),
        forbid_purely_negative: rng.gen(),
        forbid_unlabeled_edges: rng.gen(),
        use_symmetry_breaking: rng.gen(),
        restricted_alphabet,
        timeout: Duration::from_secs(60),
    };
    Instance {
        alphabet,
        examples,
        cfg,
        n: rng.gen_range(0..=2),
    }
}
