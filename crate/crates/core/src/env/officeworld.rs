//! OfficeWorld: a 12×9 grid of 3×3 rooms joined by doorways.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{neighbours8, EnvError, GridPos, GridSpec, Side, Wall};

const FIGURE: &str = include_str!("../../fixtures/officeworld.json");

pub const WIDTH: u32 = 12;
pub const HEIGHT: u32 = 9;
const MAX_ATTEMPTS: usize = 1000;

/// The reference layout, including its placements.
pub fn figure_grid() -> GridSpec {
    GridSpec::from_json(FIGURE).expect("bundled grid is valid")
}

pub fn walls() -> BTreeSet<Wall> {
    figure_grid().walls
}

/// Cells on either side of a doorway between two rooms.
pub fn connectors() -> BTreeSet<GridPos> {
    let doors_x = [(2, 1), (2, 7), (5, 1), (5, 7), (8, 1), (8, 7)];
    let doors_y = [(1, 2), (10, 2), (1, 5), (4, 5), (7, 5), (10, 5)];
    let mut out = BTreeSet::new();
    for (x, y) in doors_x {
        out.insert(GridPos::new(x, y));
        out.insert(GridPos::new(x + 1, y));
    }
    for (x, y) in doors_y {
        out.insert(GridPos::new(x, y));
        out.insert(GridPos::new(x, y + 1));
    }
    out
}

/// A random grid with the reference walls: two coffees, one mail, one
/// office, A–D and six decorations.
pub fn generate_officeworld(rng: &mut impl Rng) -> Result<GridSpec, EnvError> {
    let walls = walls();
    let connectors = connectors();
    let cells: Vec<GridPos> = (0..HEIGHT)
        .flat_map(|y| (0..WIDTH).map(move |x| GridPos::new(x, y)))
        .collect();
    let free: Vec<GridPos> = cells
        .iter()
        .copied()
        .filter(|p| !connectors.contains(p))
        .collect();

    'attempt: for _ in 0..MAX_ATTEMPTS {
        // A–D and the decorations: apart from each other and off doorways
        let mut fixed: Vec<GridPos> = Vec::with_capacity(10);
        for _ in 0..10 {
            let options: Vec<GridPos> = free
                .iter()
                .copied()
                .filter(|p| {
                    fixed
                        .iter()
                        .all(|q| p.x.abs_diff(q.x) > 1 || p.y.abs_diff(q.y) > 1)
                })
                .collect();
            match options.choose(rng) {
                Some(&p) => fixed.push(p),
                None => continue 'attempt,
            }
        }
        let (letters, decorations) = fixed.split_at(4);
        let pick = |rng: &mut _, exclude: &[GridPos]| -> GridPos {
            let options: Vec<GridPos> = cells
                .iter()
                .copied()
                .filter(|p| !exclude.contains(p))
                .collect();
            *options.choose(rng).unwrap()
        };
        let office = pick(rng, &fixed);
        let coffee1 = pick(rng, decorations);
        let mut not_coffee1 = decorations.to_vec();
        not_coffee1.push(coffee1);
        let coffee2 = pick(rng, &not_coffee1);
        let mail = pick(rng, decorations);
        let agent = pick(rng, &fixed);

        let mut spec = GridSpec {
            width: WIDTH,
            height: HEIGHT,
            walls: walls.clone(),
            placements: Default::default(),
            agent_start: agent,
        };
        let mut put = |p: GridPos, name: &str| {
            spec.placements
                .entry(p)
                .or_default()
                .insert(name.to_string());
        };
        for (p, name) in letters.iter().zip(["A", "B", "C", "D"]) {
            put(*p, name);
        }
        for p in decorations {
            put(*p, "decoration");
        }
        put(office, "office");
        put(coffee1, "coffee");
        put(coffee2, "coffee");
        put(mail, "mail");
        return Ok(spec);
    }
    Err(EnvError::GenerationFailed(MAX_ATTEMPTS))
}

/// Independent validation of a generated grid; returns every violated rule.
pub fn check_officeworld(spec: &GridSpec) -> Vec<String> {
    let mut v = Vec::new();
    if (spec.width, spec.height) != (WIDTH, HEIGHT) {
        v.push(format!(
            "grid is {}x{}, expected {WIDTH}x{HEIGHT}",
            spec.width, spec.height
        ));
        return v;
    }
    if spec.walls != walls() {
        v.push("wall layout differs from the reference".into());
    }
    // doorways: open crossings of the room boundaries (every third line)
    let mut doorway = BTreeSet::new();
    for bx in (2..WIDTH - 1).step_by(3) {
        for y in 0..HEIGHT {
            if !spec.walls.contains(&Wall {
                x: bx,
                y,
                side: Side::East,
            }) {
                doorway.insert((bx, y));
                doorway.insert((bx + 1, y));
            }
        }
    }
    for by in (2..HEIGHT - 1).step_by(3) {
        for x in 0..WIDTH {
            if !spec.walls.contains(&Wall {
                x,
                y: by,
                side: Side::North,
            }) {
                doorway.insert((x, by));
                doorway.insert((x, by + 1));
            }
        }
    }

    let at = |name: &str| -> Vec<GridPos> {
        spec.placements
            .iter()
            .filter(|(_, o)| o.contains(name))
            .map(|(p, _)| *p)
            .collect()
    };
    for (name, want) in [
        ("coffee", 2),
        ("mail", 1),
        ("office", 1),
        ("A", 1),
        ("B", 1),
        ("C", 1),
        ("D", 1),
        ("decoration", 6),
    ] {
        let got = at(name).len();
        if got != want {
            v.push(format!("{got} cells with {name}, expected {want}"));
        }
    }
    for (p, names) in &spec.placements {
        if names
            .iter()
            .any(|n| !super::tasks::OFFICE_OBSERVABLES.contains(&n.as_str()))
        {
            v.push(format!("unknown observable at {p:?}"));
        }
        if names.contains("decoration") && names.len() > 1 {
            v.push(format!("decoration shares {p:?} with another observable"));
        }
        if names.contains("office") && ["A", "B", "C", "D"].iter().any(|l| names.contains(*l)) {
            v.push(format!("office shares {p:?} with a letter"));
        }
    }
    let special: Vec<GridPos> = ["A", "B", "C", "D", "decoration"]
        .iter()
        .flat_map(|n| at(n))
        .collect();
    for (i, p) in special.iter().enumerate() {
        if doorway.contains(&(p.x, p.y)) {
            v.push(format!("{p:?} is a doorway"));
        }
        for q in &special[i + 1..] {
            if neighbours8(WIDTH, HEIGHT, *p).any(|n| n == *q) {
                v.push(format!("{p:?} and {q:?} are adjacent"));
            }
        }
    }
    if special.contains(&spec.agent_start) {
        v.push("agent starts on a decoration or letter".into());
    }
    if !spec.in_bounds(spec.agent_start) {
        v.push("agent starts outside the grid".into());
    }
    v
}
