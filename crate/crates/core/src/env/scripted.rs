//! Scripted (non-learning) agents used to harvest traces.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Action, Environment, GridPos, GridSpec};
use crate::automaton::Observation;
use crate::trace::StepFlags;

/// Observations and flags of one episode, the reset included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Episode {
    pub observations: Vec<Observation>,
    pub flags: Vec<StepFlags>,
}

impl Episode {
    fn start(env: &mut Environment) -> Self {
        let r = env.reset();
        Episode {
            observations: vec![r.observation],
            flags: vec![r.flags],
        }
    }

    fn done(&self) -> bool {
        self.flags.last().is_some_and(|f| f.terminal)
    }

    fn push(&mut self, env: &mut Environment, a: Action) {
        let r = env
            .step(a)
            .expect("scripted agents stop at terminal states");
        self.observations.push(r.observation);
        self.flags.push(r.flags);
    }
}

/// Breadth-first route from `from` to the nearest cell satisfying `goal`,
/// never entering cells rejected by `avoid` (other than the goal itself).
pub fn shortest_path(
    spec: &GridSpec,
    from: GridPos,
    goal: impl Fn(GridPos) -> bool,
    avoid: impl Fn(GridPos) -> bool,
) -> Option<Vec<Action>> {
    let n = spec.num_cells();
    let mut prev: Vec<Option<(usize, Action)>> = vec![None; n];
    let mut seen = vec![false; n];
    let start = spec.cell_index(from);
    seen[start] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(p) = queue.pop_front() {
        if goal(p) {
            let mut path = Vec::new();
            let mut i = spec.cell_index(p);
            while let Some((j, a)) = prev[i] {
                path.push(a);
                i = j;
            }
            path.reverse();
            return Some(path);
        }
        for a in Action::ALL {
            let q = spec.next_pos(p, a);
            let qi = spec.cell_index(q);
            if !seen[qi] && (goal(q) || !avoid(q)) {
                seen[qi] = true;
                prev[qi] = Some((spec.cell_index(p), a));
                queue.push_back(q);
            }
        }
    }
    None
}

pub fn random_walk(env: &mut Environment, rng: &mut impl Rng, max_steps: usize) -> Episode {
    let mut ep = Episode::start(env);
    while !ep.done() && ep.observations.len() <= max_steps {
        ep.push(env, *Action::ALL.choose(rng).unwrap());
    }
    ep
}

/// Visit the named observables in order (a random instance of each),
/// optionally steering around decorations, with occasional random moves.
pub fn tour(
    env: &mut Environment,
    waypoints: &[&str],
    avoid_decorations: bool,
    noise: f64,
    rng: &mut impl Rng,
    max_steps: usize,
) -> Episode {
    let mut ep = Episode::start(env);
    let spec = env.spec().clone();
    let decoration = |p: GridPos| {
        spec.placements
            .get(&p)
            .is_some_and(|o| o.contains("decoration"))
    };
    for name in waypoints {
        let targets = spec.cells_with(name);
        let Some(&target) = targets.choose(rng) else {
            continue;
        };
        while !ep.done() && ep.observations.len() <= max_steps && env.pos() != target {
            let a = if rng.gen::<f64>() < noise {
                *Action::ALL.choose(rng).unwrap()
            } else {
                let path = shortest_path(
                    &spec,
                    env.pos(),
                    |p| p == target,
                    |p| avoid_decorations && decoration(p),
                )
                .or_else(|| shortest_path(&spec, env.pos(), |p| p == target, |_| false));
                match path.and_then(|p| p.first().copied()) {
                    Some(a) => a,
                    None => break,
                }
            };
            ep.push(env, a);
        }
    }
    ep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{officeworld, Task};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn shortest_path_respects_walls() {
        let g = officeworld::figure_grid();
        // (3,6) to (2,6) crosses a wall: go round through the doorway at y=7
        let p = shortest_path(
            &g,
            GridPos::new(3, 6),
            |p| p == GridPos::new(2, 6),
            |_| false,
        )
        .unwrap();
        assert_eq!(p.len(), 3);
        let mut pos = GridPos::new(3, 6);
        for a in p {
            pos = g.next_pos(pos, a);
        }
        assert_eq!(pos, GridPos::new(2, 6));
    }

    #[test]
    fn tour_reaches_goal() {
        let mut env = Environment::new(officeworld::figure_grid(), Task::Coffee).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let ep = tour(&mut env, &["coffee", "office"], true, 0.0, &mut rng, 250);
        assert_eq!(ep.flags.last(), Some(&StepFlags::GOAL));
    }
}
