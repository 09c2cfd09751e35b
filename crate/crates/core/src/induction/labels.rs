//! Label sets of conjunctions and their total order.
//!
//! Observable `i` maps to label `i` when positive and `i + |O|` when negated.
//! A set is read as a bitstring with label 1 leftmost; sets compare as those
//! bitstrings compare lexicographically.

use std::cmp::Ordering;

use crate::automaton::Conjunction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LabelSet {
    // Label m occupies bit (universe - m), so integer order is bitstring order.
    key: u64,
    universe: u8,
}

impl LabelSet {
    pub fn from_conjunction(c: &Conjunction, num_observables: usize) -> Self {
        let n = num_observables;
        let mut labels: Vec<u32> = c.pos().ids().map(u32::from).collect();
        labels.extend(c.neg().ids().map(|id| id as u32 + n as u32));
        Self::from_labels(&labels, 2 * n)
    }

    /// Labels are 1-based and at most `universe` (≤ 64).
    pub fn from_labels(labels: &[u32], universe: usize) -> Self {
        assert!(universe <= 64, "label universe limited to 64");
        let mut key = 0u64;
        for &m in labels {
            assert!(
                m >= 1 && m as usize <= universe,
                "label {m} outside 1..={universe}"
            );
            key |= 1u64 << (universe - m as usize);
        }
        LabelSet {
            key,
            universe: universe as u8,
        }
    }

    pub fn key(&self) -> u64 {
        self.key
    }

    pub fn universe(&self) -> usize {
        self.universe as usize
    }

    pub fn labels(&self) -> Vec<u32> {
        (1..=self.universe as u32)
            .filter(|&m| self.key & (1u64 << (self.universe as u32 - m)) != 0)
            .collect()
    }

    pub fn bitstring(&self) -> String {
        (1..=self.universe as u32)
            .map(|m| {
                if self.key & (1u64 << (self.universe as u32 - m)) != 0 {
                    '1'
                } else {
                    '0'
                }
            })
            .collect()
    }
}

impl PartialOrd for LabelSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LabelSet {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.universe, other.universe);
        self.key.cmp(&other.key)
    }
}

pub fn label_set_less(a: &LabelSet, b: &LabelSet) -> bool {
    a < b
}
