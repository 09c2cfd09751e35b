//! CraftWorld: an open 39×39 grid with raw materials and workstations.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::Rng;

use super::tasks::CRAFT_OBSERVABLES;
use super::{EnvError, GridPos, GridSpec};

pub const SIZE: u32 = 39;

/// Labelled cells per observable: five of each material, two of each tool.
pub fn count_of(name: &str) -> usize {
    match name {
        "wood" | "grass" | "iron" => 5,
        _ => 2,
    }
}

pub fn generate_craftworld(rng: &mut impl Rng) -> Result<GridSpec, EnvError> {
    let total: usize = CRAFT_OBSERVABLES.iter().map(|n| count_of(n)).sum();
    let cells = (SIZE * SIZE) as usize;
    let picked = sample(rng, cells, total).into_vec();
    let mut spec = GridSpec {
        width: SIZE,
        height: SIZE,
        walls: BTreeSet::new(),
        placements: Default::default(),
        agent_start: GridPos::new(0, 0),
    };
    let mut it = picked.into_iter();
    for name in CRAFT_OBSERVABLES {
        for _ in 0..count_of(name) {
            let i = it.next().unwrap() as u32;
            spec.placements
                .entry(GridPos::new(i % SIZE, i / SIZE))
                .or_default()
                .insert(name.to_string());
        }
    }
    let start = rng.gen_range(0..cells as u32);
    spec.agent_start = GridPos::new(start % SIZE, start / SIZE);
    Ok(spec)
}

pub fn check_craftworld(spec: &GridSpec) -> Vec<String> {
    let mut v = Vec::new();
    if (spec.width, spec.height) != (SIZE, SIZE) {
        v.push(format!(
            "grid is {}x{}, expected {SIZE}x{SIZE}",
            spec.width, spec.height
        ));
    }
    if !spec.walls.is_empty() {
        v.push("craft grids have no walls".into());
    }
    for (p, names) in &spec.placements {
        if names.len() != 1 {
            v.push(format!("{p:?} holds {} observables", names.len()));
        }
        if !spec.in_bounds(*p) {
            v.push(format!("{p:?} outside the grid"));
        }
    }
    for name in CRAFT_OBSERVABLES {
        let got = spec
            .placements
            .values()
            .filter(|o| o.contains(name))
            .count();
        if got != count_of(name) {
            v.push(format!(
                "{got} cells with {name}, expected {}",
                count_of(name)
            ));
        }
    }
    let labelled: usize = spec.placements.values().map(|o| o.len()).sum();
    if labelled != 25 {
        v.push(format!("{labelled} labelled cells, expected 25"));
    }
    if !spec.in_bounds(spec.agent_start) {
        v.push("agent starts outside the grid".into());
    }
    v
}
