//! Deterministic grid worlds whose cells are labelled with observables.

pub mod craftworld;
pub mod officeworld;
pub mod scripted;
pub mod tasks;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automaton::{Alphabet, Observation};
use crate::trace::StepFlags;

pub use tasks::{task_predicates, CraftTask, Domain, Task, TaskProgress};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GridPos {
    pub x: u32,
    pub y: u32,
}

impl GridPos {
    pub const fn new(x: u32, y: u32) -> Self {
        GridPos { x, y }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Between (x, y) and (x + 1, y).
    East,
    /// Between (x, y) and (x, y + 1).
    North,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Wall {
    pub x: u32,
    pub y: u32,
    pub side: Side,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Action {
    Up,
    Down,
    Left,
    Right,
}

impl Action {
    pub const ALL: [Action; 4] = [Action::Up, Action::Down, Action::Left, Action::Right];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Action {
        Self::ALL[i]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct Placement {
    x: u32,
    y: u32,
    observables: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct GridSpecJson {
    width: u32,
    height: u32,
    walls: Vec<Wall>,
    placements: Vec<Placement>,
    agent_start: GridPos,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GridSpecJson", into = "GridSpecJson")]
pub struct GridSpec {
    pub width: u32,
    pub height: u32,
    pub walls: BTreeSet<Wall>,
    pub placements: BTreeMap<GridPos, BTreeSet<String>>,
    pub agent_start: GridPos,
}

impl TryFrom<GridSpecJson> for GridSpec {
    type Error = String;

    fn try_from(j: GridSpecJson) -> Result<Self, String> {
        let mut placements: BTreeMap<GridPos, BTreeSet<String>> = BTreeMap::new();
        for p in j.placements {
            placements
                .entry(GridPos::new(p.x, p.y))
                .or_default()
                .extend(p.observables);
        }
        let spec = GridSpec {
            width: j.width,
            height: j.height,
            walls: j.walls.into_iter().collect(),
            placements,
            agent_start: j.agent_start,
        };
        spec.check_bounds()?;
        Ok(spec)
    }
}

impl From<GridSpec> for GridSpecJson {
    fn from(s: GridSpec) -> Self {
        GridSpecJson {
            width: s.width,
            height: s.height,
            walls: s.walls.into_iter().collect(),
            placements: s
                .placements
                .into_iter()
                .map(|(p, o)| Placement {
                    x: p.x,
                    y: p.y,
                    observables: o.into_iter().collect(),
                })
                .collect(),
            agent_start: s.agent_start,
        }
    }
}

impl GridSpec {
    pub fn in_bounds(&self, p: GridPos) -> bool {
        p.x < self.width && p.y < self.height
    }

    fn check_bounds(&self) -> Result<(), String> {
        if self.width == 0 || self.height == 0 {
            return Err("grid must be non-empty".into());
        }
        if !self.in_bounds(self.agent_start) {
            return Err(format!(
                "agent start {:?} outside the grid",
                self.agent_start
            ));
        }
        if let Some(p) = self.placements.keys().find(|p| !self.in_bounds(**p)) {
            return Err(format!("placement {p:?} outside the grid"));
        }
        Ok(())
    }

    pub fn num_cells(&self) -> usize {
        (self.width * self.height) as usize
    }

    pub fn cell_index(&self, p: GridPos) -> usize {
        (p.y * self.width + p.x) as usize
    }

    pub fn cell_at(&self, i: usize) -> GridPos {
        GridPos::new(i as u32 % self.width, i as u32 / self.width)
    }

    /// Where `action` leads from `p`; blocked moves stay put.
    pub fn next_pos(&self, p: GridPos, action: Action) -> GridPos {
        let blocked = |x: u32, y: u32, side: Side| self.walls.contains(&Wall { x, y, side });
        match action {
            Action::Up if p.y + 1 < self.height && !blocked(p.x, p.y, Side::North) => {
                GridPos::new(p.x, p.y + 1)
            }
            Action::Down if p.y > 0 && !blocked(p.x, p.y - 1, Side::North) => {
                GridPos::new(p.x, p.y - 1)
            }
            Action::Right if p.x + 1 < self.width && !blocked(p.x, p.y, Side::East) => {
                GridPos::new(p.x + 1, p.y)
            }
            Action::Left if p.x > 0 && !blocked(p.x - 1, p.y, Side::East) => {
                GridPos::new(p.x - 1, p.y)
            }
            _ => p,
        }
    }

    pub fn observables_at(&self, p: GridPos) -> impl Iterator<Item = &str> {
        self.placements
            .get(&p)
            .into_iter()
            .flatten()
            .map(String::as_str)
    }

    /// Cells holding `name`, in row-major order.
    pub fn cells_with(&self, name: &str) -> Vec<GridPos> {
        let mut v: Vec<GridPos> = self
            .placements
            .iter()
            .filter(|(_, o)| o.contains(name))
            .map(|(p, _)| *p)
            .collect();
        v.sort_by_key(|p| (p.y, p.x));
        v
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("grid specs serialise")
    }

    pub fn from_json(text: &str) -> Result<Self, EnvError> {
        serde_json::from_str(text).map_err(|e| EnvError::Spec(e.to_string()))
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnvError {
    #[error("step after the episode terminated")]
    StepAfterTerminal,
    #[error("invalid grid: {0}")]
    Spec(String),
    #[error("grid generation failed after {0} attempts")]
    GenerationFailed(usize),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepResult {
    pub pos: GridPos,
    pub observation: Observation,
    pub reward: f64,
    pub flags: StepFlags,
}

/// A grid plus a task: the POMDP the agent interacts with.
#[derive(Clone, Debug)]
pub struct Environment {
    spec: GridSpec,
    task: Task,
    alphabet: Alphabet,
    labels: Vec<Observation>,
    pos: GridPos,
    progress: TaskProgress,
    flags: StepFlags,
}

impl Environment {
    pub fn new(spec: GridSpec, task: Task) -> Result<Self, EnvError> {
        let alphabet = task.domain().alphabet();
        let mut labels = vec![Observation::EMPTY; spec.num_cells()];
        for (p, names) in &spec.placements {
            let obs = alphabet
                .observation(names.iter().map(String::as_str))
                .map_err(|e| EnvError::Spec(e.to_string()))?;
            labels[spec.cell_index(*p)] = obs;
        }
        let pos = spec.agent_start;
        let mut env = Environment {
            spec,
            task,
            alphabet,
            labels,
            pos,
            progress: TaskProgress::default(),
            flags: StepFlags::RUNNING,
        };
        env.reset();
        Ok(env)
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn task(&self) -> Task {
        self.task
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.spec.num_cells()
    }

    pub fn num_actions(&self) -> usize {
        Action::ALL.len()
    }

    pub fn pos(&self) -> GridPos {
        self.pos
    }

    pub fn visible_state(&self) -> usize {
        self.spec.cell_index(self.pos)
    }

    pub fn observation_at(&self, p: GridPos) -> Observation {
        self.labels[self.spec.cell_index(p)]
    }

    pub fn flags(&self) -> StepFlags {
        self.flags
    }

    /// Back to the start cell; the initial observation already counts
    /// towards the task.
    pub fn reset(&mut self) -> StepResult {
        self.pos = self.spec.agent_start;
        self.progress = TaskProgress::default();
        let observation = self.observation_at(self.pos);
        self.flags = self.progress.advance(self.task, observation);
        StepResult {
            pos: self.pos,
            observation,
            reward: self.reward(),
            flags: self.flags,
        }
    }

    pub fn step(&mut self, action: Action) -> Result<StepResult, EnvError> {
        if self.flags.terminal {
            return Err(EnvError::StepAfterTerminal);
        }
        self.pos = self.spec.next_pos(self.pos, action);
        let observation = self.observation_at(self.pos);
        self.flags = self.progress.advance(self.task, observation);
        Ok(StepResult {
            pos: self.pos,
            observation,
            reward: self.reward(),
            flags: self.flags,
        })
    }

    fn reward(&self) -> f64 {
        if self.flags.goal {
            1.0
        } else {
            0.0
        }
    }
}

/// Chebyshev neighbours (diagonals included) inside the grid.
pub(crate) fn neighbours8(spec_w: u32, spec_h: u32, p: GridPos) -> impl Iterator<Item = GridPos> {
    let (x, y) = (p.x as i64, p.y as i64);
    (-1..=1i64)
        .flat_map(move |dx| (-1..=1i64).map(move |dy| (x + dx, y + dy)))
        .filter(move |&(nx, ny)| {
            (nx, ny) != (x, y) && nx >= 0 && ny >= 0 && nx < spec_w as i64 && ny < spec_h as i64
        })
        .map(|(nx, ny)| GridPos::new(nx as u32, ny as u32))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn walls_block_both_directions() {
        let mut spec = GridSpec {
            width: 3,
            height: 3,
            walls: BTreeSet::new(),
            placements: BTreeMap::new(),
            agent_start: GridPos::new(0, 0),
        };
        spec.walls.insert(Wall {
            x: 0,
            y: 0,
            side: Side::East,
        });
        spec.walls.insert(Wall {
            x: 1,
            y: 1,
            side: Side::North,
        });
        assert_eq!(
            spec.next_pos(GridPos::new(0, 0), Action::Right),
            GridPos::new(0, 0)
        );
        assert_eq!(
            spec.next_pos(GridPos::new(1, 0), Action::Left),
            GridPos::new(1, 0)
        );
        assert_eq!(
            spec.next_pos(GridPos::new(1, 1), Action::Up),
            GridPos::new(1, 1)
        );
        assert_eq!(
            spec.next_pos(GridPos::new(1, 2), Action::Down),
            GridPos::new(1, 2)
        );
        assert_eq!(
            spec.next_pos(GridPos::new(0, 0), Action::Down),
            GridPos::new(0, 0)
        );
        assert_eq!(
            spec.next_pos(GridPos::new(0, 0), Action::Up),
            GridPos::new(0, 1)
        );
    }

    #[test]
    fn json_round_trip() {
        let spec = officeworld::figure_grid();
        let back = GridSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(back, spec);
        assert!(GridSpec::from_json(
            r#"{"width":2,"height":2,"walls":[],"placements":[],"agent_start":{"x":5,"y":0}}"#
        )
        .is_err());
    }

    #[test]
    fn step_after_terminal_fails() {
        let spec = officeworld::figure_grid();
        let mut env = Environment::new(spec, Task::Coffee).unwrap();
        // agent at (4,6): left to the coffee, then down twice to the office
        for a in [Action::Left, Action::Right, Action::Down] {
            assert!(!env.step(a).unwrap().flags.terminal);
        }
        let r = env.step(Action::Down).unwrap();
        assert!(r.flags.goal);
        assert_eq!(r.reward, 1.0);
        assert_eq!(env.step(Action::Up), Err(EnvError::StepAfterTerminal));
    }
}
