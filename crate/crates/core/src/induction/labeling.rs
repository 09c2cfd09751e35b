//! Formula synthesis for the outgoing edges of a single state.
//!
//! Given the observations that must keep the state where it is (`stays`) and
//! the observations that must move it to each successor, find the cheapest
//! edge formulas (fewest disjuncts, then fewest literals) that realise this
//! behaviour deterministically.
//!
//! Every disjunct covers a block of its target's observations, so its
//! literals are drawn from the block's *maximal* conjunction: the observables
//! present in all block members positively, and those absent from all of them
//! negatively.  All constraints (excluding stays, mutual exclusion across
//! targets, the positive-literal restriction) are monotone in the literal set,
//! which makes the maximal conjunctions an exact feasibility test and bounds
//! the literal search.

use std::collections::HashSet;

use super::Cost;
use crate::automaton::Conjunction;

/// Upper bound on equally cheap labelings reported for tie-breaking.
pub(crate) const MAX_OPTIONS: usize = 256;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Restrictions {
    pub literal_mask: u32,
    pub kappa: usize,
    pub forbid_purely_negative: bool,
    pub forbid_unlabeled: bool,
}

/// Optimal labelings; `options[k][j]` holds the disjuncts towards target `j`.
#[derive(Clone, Debug)]
pub(crate) struct Labeling {
    pub cost: Cost,
    pub options: Vec<Vec<Vec<Conjunction>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Slot {
    pos: u32,
    neg: u32,
    target: usize,
}

fn maximal(block: &[u32], mask: u32) -> (u32, u32) {
    let and = block.iter().fold(u32::MAX, |a, &o| a & o);
    let or = block.iter().fold(0, |a, &o| a | o);
    (and & mask, mask & !or)
}

fn falsified_by(pos: u32, neg: u32, obs: u32) -> bool {
    pos & !obs != 0 || neg & obs != 0
}

fn excludes(a: &Slot, b: &Slot) -> bool {
    a.pos & b.neg != 0 || a.neg & b.pos != 0
}

fn block_admissible(pos: u32, neg: u32, stays: &[u32], r: &Restrictions) -> bool {
    if !stays.iter().all(|&s| falsified_by(pos, neg, s)) {
        return false;
    }
    if r.forbid_unlabeled && pos | neg == 0 {
        return false;
    }
    // Without a positive literal only the empty conjunction is allowed.
    if r.forbid_purely_negative && pos == 0 && (r.forbid_unlabeled || !stays.is_empty()) {
        return false;
    }
    true
}

/// Set partitions of `items` into at most `max_blocks` blocks, as block lists.
fn partitions(items: &[u32], max_blocks: usize) -> Vec<Vec<Vec<u32>>> {
    fn rec(
        i: usize,
        items: &[u32],
        max: usize,
        cur: &mut Vec<Vec<u32>>,
        out: &mut Vec<Vec<Vec<u32>>>,
    ) {
        if i == items.len() {
            out.push(cur.clone());
            return;
        }
        for b in 0..cur.len() {
            cur[b].push(items[i]);
            rec(i + 1, items, max, cur, out);
            cur[b].pop();
        }
        if cur.len() < max {
            cur.push(vec![items[i]]);
            rec(i + 1, items, max, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, items, max_blocks, &mut Vec::new(), &mut out);
    out
}

struct LiteralSearch<'a> {
    slots: &'a [Slot],
    stays: &'a [u32],
    r: &'a Restrictions,
    best: usize,
    found: Vec<Vec<(u32, u32)>>,
    visited: HashSet<Vec<(u32, u32)>>,
    first_only: bool,
}

impl LiteralSearch<'_> {
    /// Literal additions that repair the first violated constraint, or `None`
    /// if every constraint holds.
    fn repairs(&self, chosen: &[(u32, u32)]) -> Option<Vec<Vec<(usize, u32, u32)>>> {
        let bits = |m: u32| {
            (0..32)
                .filter(move |i| m & (1 << i) != 0)
                .map(|i| 1u32 << i)
        };
        for (i, s) in self.slots.iter().enumerate() {
            let (cp, cn) = chosen[i];
            if self.r.forbid_unlabeled && cp | cn == 0 {
                let mut opts: Vec<_> = bits(s.pos).map(|b| vec![(i, b, 0)]).collect();
                opts.extend(bits(s.neg).map(|b| vec![(i, 0, b)]));
                return Some(opts);
            }
            for &st in self.stays {
                if !falsified_by(cp, cn, st) {
                    let mut opts: Vec<_> = bits(s.pos & !st).map(|b| vec![(i, b, 0)]).collect();
                    opts.extend(bits(s.neg & st).map(|b| vec![(i, 0, b)]));
                    return Some(opts);
                }
            }
            if self.r.forbid_purely_negative && cp == 0 && cn != 0 {
                return Some(bits(s.pos).map(|b| vec![(i, b, 0)]).collect());
            }
        }
        for i in 0..self.slots.len() {
            for j in i + 1..self.slots.len() {
                let (a, b) = (&self.slots[i], &self.slots[j]);
                if a.target == b.target {
                    continue;
                }
                let ca = Slot {
                    pos: chosen[i].0,
                    neg: chosen[i].1,
                    target: a.target,
                };
                let cb = Slot {
                    pos: chosen[j].0,
                    neg: chosen[j].1,
                    target: b.target,
                };
                if !excludes(&ca, &cb) {
                    let mut opts: Vec<_> = bits(a.pos & b.neg)
                        .map(|o| vec![(i, o, 0), (j, 0, o)])
                        .collect();
                    opts.extend(bits(a.neg & b.pos).map(|o| vec![(i, 0, o), (j, o, 0)]));
                    return Some(opts);
                }
            }
        }
        None
    }

    fn run(&mut self, chosen: &mut Vec<(u32, u32)>, cost: usize) {
        if cost > self.best || (self.first_only && !self.found.is_empty()) {
            return;
        }
        match self.repairs(chosen) {
            None => {
                if cost < self.best {
                    self.best = cost;
                    self.found.clear();
                }
                if self.found.len() < MAX_OPTIONS {
                    self.found.push(chosen.clone());
                }
            }
            Some(opts) => {
                for opt in opts {
                    let saved = chosen.clone();
                    for &(i, p, n) in &opt {
                        chosen[i].0 |= p;
                        chosen[i].1 |= n;
                    }
                    let c: usize = chosen
                        .iter()
                        .map(|(p, n)| (p.count_ones() + n.count_ones()) as usize)
                        .sum();
                    if c <= self.best && self.visited.insert(chosen.clone()) {
                        self.run(chosen, c);
                    }
                    *chosen = saved;
                }
            }
        }
    }
}

/// Enumerates combinations of per-target partitions whose maximal conjunctions
/// are pairwise exclusive across targets, with exactly `budget` blocks.
fn combos(
    per_target: &[Vec<Vec<Slot>>],
    j: usize,
    budget: usize,
    acc: &mut Vec<Slot>,
    visit: &mut dyn FnMut(&[Slot]) -> bool,
) -> bool {
    if j == per_target.len() {
        return budget == 0 && visit(acc);
    }
    let remaining = per_target.len() - j - 1;
    for blocks in &per_target[j] {
        if blocks.len() > budget || budget - blocks.len() < remaining {
            continue;
        }
        if !blocks
            .iter()
            .all(|b| acc.iter().all(|a| a.target == b.target || excludes(a, b)))
        {
            continue;
        }
        let len = acc.len();
        acc.extend_from_slice(blocks);
        let stop = combos(per_target, j + 1, budget - blocks.len(), acc, visit);
        acc.truncate(len);
        if stop {
            return true;
        }
    }
    false
}

fn admissible_partitions(
    stays: &[u32],
    targets: &[Vec<u32>],
    r: &Restrictions,
) -> Vec<Vec<Vec<Slot>>> {
    targets
        .iter()
        .enumerate()
        .map(|(j, obs)| {
            partitions(obs, r.kappa)
                .into_iter()
                .filter_map(|blocks| {
                    let slots: Vec<Slot> = blocks
                        .iter()
                        .map(|b| {
                            let (pos, neg) = maximal(b, r.literal_mask);
                            Slot {
                                pos,
                                neg,
                                target: j,
                            }
                        })
                        .collect();
                    slots
                        .iter()
                        .all(|s| block_admissible(s.pos, s.neg, stays, r))
                        .then_some(slots)
                })
                .collect()
        })
        .collect()
}

fn solve(
    stays: &[u32],
    targets: &[Vec<u32>],
    r: &Restrictions,
    first_only: bool,
) -> Option<Labeling> {
    if targets.is_empty() {
        return Some(Labeling {
            cost: Cost::ZERO,
            options: vec![Vec::new()],
        });
    }
    let per_target = admissible_partitions(stays, targets, r);
    if per_target.iter().any(Vec::is_empty) {
        return None;
    }
    let m = targets.len();
    for budget in m..=m * r.kappa {
        let mut best = usize::MAX;
        let mut found: Vec<Vec<Vec<Conjunction>>> = Vec::new();
        let mut visit = |slots: &[Slot]| -> bool {
            let mut search = LiteralSearch {
                slots,
                stays,
                r,
                best,
                found: Vec::new(),
                visited: HashSet::new(),
                first_only,
            };
            search.run(&mut vec![(0, 0); slots.len()], 0);
            if search.found.is_empty() {
                return false;
            }
            if search.best < best {
                best = search.best;
                found.clear();
            }
            for chosen in search.found {
                if found.len() >= MAX_OPTIONS {
                    break;
                }
                let mut per: Vec<Vec<Conjunction>> = vec![Vec::new(); m];
                for (s, (p, n)) in slots.iter().zip(chosen) {
                    per[s.target].push(Conjunction::from_bits(p, n).expect("disjoint literals"));
                }
                found.push(per);
            }
            first_only
        };
        combos(&per_target, 0, budget, &mut Vec::new(), &mut visit);
        if !found.is_empty() {
            return Some(Labeling {
                cost: Cost {
                    disjuncts: budget,
                    literals: best,
                },
                options: found,
            });
        }
    }
    None
}

/// Cheapest formulas realising the behaviour, with equally cheap alternatives.
pub(crate) fn optimal_labeling(
    stays: &[u32],
    targets: &[Vec<u32>],
    r: &Restrictions,
) -> Option<Labeling> {
    solve(stays, targets, r, false)
}

pub(crate) fn labeling_exists(stays: &[u32], targets: &[Vec<u32>], r: &Restrictions) -> bool {
    solve(stays, targets, r, true).is_some()
}

/// Fast exact feasibility test for κ = 1: each target has a single block.
pub(crate) fn single_block_feasible(
    stays_or: impl Iterator<Item = u32>,
    blocks: &[(u32, u32)],
    r: &Restrictions,
) -> bool {
    let stays: Vec<u32> = stays_or.collect();
    let slots: Vec<Slot> = blocks
        .iter()
        .enumerate()
        .map(|(j, &(pos, neg))| Slot {
            pos,
            neg,
            target: j,
        })
        .collect();
    slots
        .iter()
        .all(|s| block_admissible(s.pos, s.neg, &stays, r))
        && slots
            .iter()
            .enumerate()
            .all(|(i, a)| slots[i + 1..].iter().all(|b| excludes(a, b)))
}
