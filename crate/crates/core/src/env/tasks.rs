//! Task definitions as ground-truth predicates over observation histories,
//! independent of any automaton.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::automaton::{Alphabet, Observation};
use crate::trace::StepFlags;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    OfficeWorld,
    CraftWorld,
}

pub const OFFICE_OBSERVABLES: [&str; 8] =
    ["coffee", "mail", "office", "A", "B", "C", "D", "decoration"];
pub const CRAFT_OBSERVABLES: [&str; 8] = [
    "wood",
    "grass",
    "iron",
    "toolshed",
    "workbench",
    "factory",
    "bridge",
    "axe",
];

// observable ids, fixed by the alphabets above
const COFFEE: u8 = 1;
const MAIL: u8 = 2;
const OFFICE: u8 = 3;
const LETTERS: [u8; 4] = [4, 5, 6, 7];
const DECORATION: u8 = 8;

impl Domain {
    pub fn alphabet(self) -> Alphabet {
        match self {
            Domain::OfficeWorld => Alphabet::new(OFFICE_OBSERVABLES).unwrap(),
            Domain::CraftWorld => Alphabet::new(CRAFT_OBSERVABLES).unwrap(),
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Domain::OfficeWorld => "officeworld",
            Domain::CraftWorld => "craftworld",
        })
    }
}

impl FromStr for Domain {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "officeworld" | "office" => Ok(Domain::OfficeWorld),
            "craftworld" | "craft" => Ok(Domain::CraftWorld),
            _ => Err(format!("unknown domain {s:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CraftTask {
    MakePlank,
    MakeStick,
    MakeCloth,
    MakeRope,
    MakeShears,
    MakeBridge,
    GetGold,
    MakeBed,
    MakeAxe,
    GetGem,
}

// craft item ids
const WOOD: u8 = 1;
const GRASS: u8 = 2;
const IRON: u8 = 3;
const TOOLSHED: u8 = 4;
const WORKBENCH: u8 = 5;
const FACTORY: u8 = 6;
const BRIDGE: u8 = 7;
const AXE: u8 = 8;

impl CraftTask {
    pub const ALL: [CraftTask; 10] = [
        CraftTask::MakePlank,
        CraftTask::MakeStick,
        CraftTask::MakeCloth,
        CraftTask::MakeRope,
        CraftTask::MakeShears,
        CraftTask::MakeBridge,
        CraftTask::GetGold,
        CraftTask::MakeBed,
        CraftTask::MakeAxe,
        CraftTask::GetGem,
    ];

    /// Steps as (item, prerequisites); the last step completes the task.
    pub fn steps(self) -> &'static [(u8, &'static [u8])] {
        match self {
            CraftTask::MakePlank => &[(WOOD, &[]), (TOOLSHED, &[WOOD])],
            CraftTask::MakeStick => &[(WOOD, &[]), (WORKBENCH, &[WOOD])],
            CraftTask::MakeCloth => &[(GRASS, &[]), (FACTORY, &[GRASS])],
            CraftTask::MakeRope => &[(GRASS, &[]), (TOOLSHED, &[GRASS])],
            CraftTask::MakeShears => &[(IRON, &[]), (WOOD, &[]), (WORKBENCH, &[IRON, WOOD])],
            CraftTask::MakeBridge => &[(IRON, &[]), (WOOD, &[]), (FACTORY, &[IRON, WOOD])],
            CraftTask::GetGold => &[
                (IRON, &[]),
                (WOOD, &[]),
                (FACTORY, &[IRON, WOOD]),
                (BRIDGE, &[FACTORY]),
            ],
            CraftTask::MakeBed => &[
                (WOOD, &[]),
                (TOOLSHED, &[WOOD]),
                (GRASS, &[]),
                (WORKBENCH, &[TOOLSHED, GRASS]),
            ],
            CraftTask::MakeAxe => &[
                (WOOD, &[]),
                (WORKBENCH, &[WOOD]),
                (IRON, &[]),
                (TOOLSHED, &[WORKBENCH, IRON]),
            ],
            CraftTask::GetGem => &[
                (WOOD, &[]),
                (WORKBENCH, &[WOOD]),
                (IRON, &[]),
                (TOOLSHED, &[WORKBENCH, IRON]),
                (AXE, &[TOOLSHED]),
            ],
        }
    }

    fn name(self) -> &'static str {
        match self {
            CraftTask::MakePlank => "make-plank",
            CraftTask::MakeStick => "make-stick",
            CraftTask::MakeCloth => "make-cloth",
            CraftTask::MakeRope => "make-rope",
            CraftTask::MakeShears => "make-shears",
            CraftTask::MakeBridge => "make-bridge",
            CraftTask::GetGold => "get-gold",
            CraftTask::MakeBed => "make-bed",
            CraftTask::MakeAxe => "make-axe",
            CraftTask::GetGem => "get-gem",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Task {
    Coffee,
    CoffeeMail,
    VisitABCD,
    CoffeeOrMail,
    /// Breaking a decoration drops held coffee instead of ending the episode.
    CoffeeDrop,
    CoffeeMailDrop,
    Craft(CraftTask),
}

impl Task {
    pub const OFFICE: [Task; 6] = [
        Task::Coffee,
        Task::CoffeeMail,
        Task::VisitABCD,
        Task::CoffeeOrMail,
        Task::CoffeeDrop,
        Task::CoffeeMailDrop,
    ];

    pub fn domain(self) -> Domain {
        match self {
            Task::Craft(_) => Domain::CraftWorld,
            _ => Domain::OfficeWorld,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Task::Coffee => "coffee",
            Task::CoffeeMail => "coffee-mail",
            Task::VisitABCD => "visit-abcd",
            Task::CoffeeOrMail => "coffee-or-mail",
            Task::CoffeeDrop => "coffee-drop",
            Task::CoffeeMailDrop => "coffee-mail-drop",
            Task::Craft(c) => c.name(),
        }
    }

    pub fn all() -> impl Iterator<Item = Task> {
        Task::OFFICE
            .into_iter()
            .chain(CraftTask::ALL.into_iter().map(Task::Craft))
    }

    pub fn has_dead_ends(self) -> bool {
        matches!(
            self,
            Task::Coffee | Task::CoffeeMail | Task::VisitABCD | Task::CoffeeOrMail
        )
    }

    /// Observables the task's goal and dead ends depend on.
    pub fn relevant_observables(self) -> Vec<&'static str> {
        match self {
            Task::Coffee | Task::CoffeeDrop => vec!["coffee", "office", "decoration"],
            Task::CoffeeMail | Task::CoffeeOrMail | Task::CoffeeMailDrop => {
                vec!["coffee", "mail", "office", "decoration"]
            }
            Task::VisitABCD => vec!["A", "B", "C", "D", "decoration"],
            Task::Craft(c) => {
                let mut ids: Vec<u8> = c.steps().iter().map(|(i, _)| *i).collect();
                ids.sort_unstable();
                ids.into_iter()
                    .map(|i| CRAFT_OBSERVABLES[i as usize - 1])
                    .collect()
            }
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Task {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let norm: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        Task::all()
            .find(|t| t.name().replace('-', "") == norm)
            .ok_or_else(|| format!("unknown task {s:?}"))
    }
}

/// Everything about the observation history a task needs to know.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct TaskProgress {
    coffee: bool,
    mail: bool,
    visited: u8,
    // bit (id - 1) per completed craft step
    crafted: u32,
}

impl TaskProgress {
    /// Consume the next observation and report whether the history now ends
    /// in a goal or dead-end state.
    pub fn advance(&mut self, task: Task, o: Observation) -> StepFlags {
        match task {
            Task::Craft(c) => {
                for &(item, pre) in c.steps() {
                    if o.contains(item) && pre.iter().all(|&p| self.crafted & (1 << (p - 1)) != 0) {
                        self.crafted |= 1 << (item - 1);
                    }
                }
                let (last, _) = *c.steps().last().unwrap();
                if self.crafted & (1 << (last - 1)) != 0 {
                    StepFlags::GOAL
                } else {
                    StepFlags::RUNNING
                }
            }
            Task::VisitABCD => {
                if o.contains(LETTERS[self.visited as usize]) {
                    self.visited += 1;
                }
                if self.visited == 4 {
                    StepFlags::GOAL
                } else if o.contains(DECORATION) {
                    StepFlags::DEAD_END
                } else {
                    StepFlags::RUNNING
                }
            }
            _ => {
                let drops = matches!(task, Task::CoffeeDrop | Task::CoffeeMailDrop);
                if drops && o.contains(DECORATION) {
                    self.coffee = false;
                }
                self.coffee |= o.contains(COFFEE);
                self.mail |= o.contains(MAIL);
                let holding = match task {
                    Task::Coffee | Task::CoffeeDrop => self.coffee,
                    Task::CoffeeOrMail => self.coffee || self.mail,
                    _ => self.coffee && self.mail,
                };
                if holding && o.contains(OFFICE) {
                    StepFlags::GOAL
                } else if !drops && o.contains(DECORATION) {
                    StepFlags::DEAD_END
                } else {
                    StepFlags::RUNNING
                }
            }
        }
    }
}

/// Flags after the last observation of `history`.
pub fn task_predicates(task: Task, history: &[Observation]) -> StepFlags {
    let mut p = TaskProgress::default();
    let mut flags = StepFlags::RUNNING;
    for &o in history {
        flags = p.advance(task, o);
        if flags.terminal {
            break;
        }
    }
    flags
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hist(domain: Domain, steps: &[&[&str]]) -> Vec<Observation> {
        let ab = domain.alphabet();
        steps
            .iter()
            .map(|s| ab.observation(s.iter().copied()).unwrap())
            .collect()
    }

    #[test]
    fn coffee_task() {
        let h = hist(Domain::OfficeWorld, &[&[], &["coffee"], &[], &["office"]]);
        assert_eq!(task_predicates(Task::Coffee, &h), StepFlags::GOAL);
        let h = hist(Domain::OfficeWorld, &[&["office"]]);
        assert_eq!(task_predicates(Task::Coffee, &h), StepFlags::RUNNING);
        let h = hist(Domain::OfficeWorld, &[&["coffee"], &["decoration"]]);
        assert_eq!(task_predicates(Task::Coffee, &h), StepFlags::DEAD_END);
        let h = hist(Domain::OfficeWorld, &[&["coffee", "office"]]);
        assert_eq!(task_predicates(Task::Coffee, &h), StepFlags::GOAL);
    }

    #[test]
    fn visit_abcd_in_order() {
        let h = hist(Domain::OfficeWorld, &[&["A"], &["B"], &["C"], &["D"]]);
        assert_eq!(task_predicates(Task::VisitABCD, &h), StepFlags::GOAL);
        let h = hist(Domain::OfficeWorld, &[&["A"], &["C"]]);
        assert_eq!(task_predicates(Task::VisitABCD, &h), StepFlags::RUNNING);
        let h = hist(
            Domain::OfficeWorld,
            &[&["B"], &["A"], &["C"], &["B"], &["C"], &["D"]],
        );
        assert_eq!(task_predicates(Task::VisitABCD, &h), StepFlags::GOAL);
    }

    #[test]
    fn coffee_mail_and_variants() {
        let h = hist(
            Domain::OfficeWorld,
            &[&["mail"], &["office"], &["coffee"], &["office"]],
        );
        assert_eq!(task_predicates(Task::CoffeeMail, &h), StepFlags::GOAL);
        let h = hist(Domain::OfficeWorld, &[&["mail"], &["office"]]);
        assert_eq!(task_predicates(Task::CoffeeOrMail, &h), StepFlags::GOAL);
        // dropping the coffee on a decoration
        let h = hist(
            Domain::OfficeWorld,
            &[&["coffee"], &["decoration"], &["office"]],
        );
        assert_eq!(task_predicates(Task::CoffeeDrop, &h), StepFlags::RUNNING);
        let h = hist(
            Domain::OfficeWorld,
            &[&["coffee"], &["decoration"], &["coffee"], &["office"]],
        );
        assert_eq!(task_predicates(Task::CoffeeDrop, &h), StepFlags::GOAL);
    }

    #[test]
    fn craft_prerequisites() {
        let t = Task::Craft(CraftTask::MakeShears);
        let h = hist(Domain::CraftWorld, &[&["wood"], &["workbench"], &["iron"]]);
        assert_eq!(task_predicates(t, &h), StepFlags::RUNNING);
        let h = hist(Domain::CraftWorld, &[&["wood"], &["iron"], &["workbench"]]);
        assert_eq!(task_predicates(t, &h), StepFlags::GOAL);
        let h = hist(Domain::CraftWorld, &[&["iron"], &["wood"], &["workbench"]]);
        assert_eq!(task_predicates(t, &h), StepFlags::GOAL);
        let bed = Task::Craft(CraftTask::MakeBed);
        let h = hist(
            Domain::CraftWorld,
            &[&["grass"], &["wood"], &["toolshed"], &["workbench"]],
        );
        assert_eq!(task_predicates(bed, &h), StepFlags::GOAL);
    }

    #[test]
    fn names_round_trip() {
        for t in Task::all() {
            assert_eq!(t.name().parse::<Task>().unwrap(), t);
        }
        assert_eq!("VisitABCD".parse::<Task>().unwrap(), Task::VisitABCD);
        assert_eq!(
            "MakeStick".parse::<Task>().unwrap(),
            Task::Craft(CraftTask::MakeStick)
        );
    }
}
