//! Canonical (BFS) indexings of edge-labelled graphs and their use as a
//! symmetry-breaking normal form for subgoal automata.
//!
//! An indexing assigns every node a number `f` (root = 1) and numbers the
//! outgoing edges of each node (`gamma`).  The parent of a node `v` is the
//! lexicographically smallest `(f(u), gamma_u(e))` over its incoming edges
//! `e = (u, v)`.  The indexing is a BFS traversal when parents are ordered
//! exactly as the node numbers, and edge numbers follow label-set order.

use std::collections::VecDeque;

use thiserror::Error;

use super::labels::LabelSet;
use crate::automaton::{StateId, SubgoalAutomaton};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    // Node 0 is the root; edges[u] lists (target, label set).
    edges: Vec<Vec<(usize, LabelSet)>>,
}

impl LabeledGraph {
    pub fn new(num_nodes: usize) -> Self {
        LabeledGraph {
            edges: vec![Vec::new(); num_nodes],
        }
    }

    pub fn add_edge(&mut self, from: usize, to: usize, label: LabelSet) {
        self.edges[from].push((to, label));
    }

    pub fn num_nodes(&self) -> usize {
        self.edges.len()
    }

    pub fn out_edges(&self, u: usize) -> &[(usize, LabelSet)] {
        &self.edges[u]
    }

    pub fn reachable_from_root(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_nodes()];
        if self.num_nodes() == 0 {
            return seen;
        }
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(u) = queue.pop_front() {
            for &(t, _) in &self.edges[u] {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        seen
    }
}

/// `f[v]` is the 1-based number of node v; `gamma[u][i]` the 1-based number
/// of the i-th listed out-edge of u.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphIndexing {
    pub f: Vec<usize>,
    pub gamma: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CanonicalityViolation {
    #[error("root must have index 1")]
    RootNotFirst,
    #[error("indexing is not a bijection")]
    NotBijective,
    #[error("edge numbering of node {0} disagrees with label-set order")]
    EdgeOrder(usize),
    #[error("node {0} has no incoming edge")]
    Unreachable(usize),
    #[error("parents of nodes {0} and {1} are ordered differently from their indices")]
    ParentOrder(usize, usize),
    #[error("disjuncts of edge {0} -> {1} are not in label-set order")]
    DisjunctOrder(StateId, StateId),
    #[error("unreachable state {0} has outgoing edges or precedes a reachable state")]
    StrayState(StateId),
}

fn is_permutation(v: &[usize]) -> bool {
    let mut seen = vec![false; v.len()];
    v.iter()
        .all(|&x| x >= 1 && x <= v.len() && !std::mem::replace(&mut seen[x - 1], true))
}

/// Parent of every node under an indexing (`None` for the root and for nodes
/// without incoming edges).
pub fn parent_function(g: &LabeledGraph, idx: &GraphIndexing) -> Vec<Option<(usize, usize)>> {
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; g.num_nodes()];
    for u in 0..g.num_nodes() {
        for (i, &(v, _)) in g.out_edges(u).iter().enumerate() {
            if v == 0 {
                continue;
            }
            let cand = (idx.f[u], idx.gamma[u][i]);
            if parent[v].is_none_or(|p| cand < p) {
                parent[v] = Some(cand);
            }
        }
    }
    parent
}

pub fn check_bfs_traversal(
    g: &LabeledGraph,
    idx: &GraphIndexing,
) -> Result<(), CanonicalityViolation> {
    let n = g.num_nodes();
    if idx.f.len() != n || !is_permutation(&idx.f) {
        return Err(CanonicalityViolation::NotBijective);
    }
    if n > 0 && idx.f[0] != 1 {
        return Err(CanonicalityViolation::RootNotFirst);
    }
    for u in 0..n {
        let out = g.out_edges(u);
        if idx.gamma[u].len() != out.len() || !is_permutation(&idx.gamma[u]) {
            return Err(CanonicalityViolation::NotBijective);
        }
        for i in 0..out.len() {
            for j in 0..out.len() {
                if (out[i].1 < out[j].1) != (idx.gamma[u][i] < idx.gamma[u][j]) {
                    return Err(CanonicalityViolation::EdgeOrder(u));
                }
            }
        }
    }
    let parent = parent_function(g, idx);
    for v in 1..n {
        if parent[v].is_none() {
            return Err(CanonicalityViolation::Unreachable(v));
        }
    }
    for v in 1..n {
        for w in 1..n {
            if v != w && (parent[v] < parent[w]) != (idx.f[v] < idx.f[w]) {
                return Err(CanonicalityViolation::ParentOrder(v, w));
            }
        }
    }
    Ok(())
}

pub fn is_bfs_traversal(g: &LabeledGraph, idx: &GraphIndexing) -> bool {
    check_bfs_traversal(g, idx).is_ok()
}

/// The BFS indexing: nodes numbered in visiting order, each node expanding
/// its out-edges in label-set order.  Unreachable nodes are numbered last.
pub fn bfs_traversal(g: &LabeledGraph) -> GraphIndexing {
    let n = g.num_nodes();
    let gamma: Vec<Vec<usize>> = (0..n)
        .map(|u| {
            let out = g.out_edges(u);
            out.iter()
                .map(|(_, l)| 1 + out.iter().filter(|(_, m)| m < l).count())
                .collect()
        })
        .collect();
    let mut f = vec![0usize; n];
    if n == 0 {
        return GraphIndexing { f, gamma };
    }
    let mut next = 1;
    f[0] = next;
    let mut queue = VecDeque::from([0]);
    while let Some(u) = queue.pop_front() {
        let mut out: Vec<&(usize, LabelSet)> = g.out_edges(u).iter().collect();
        out.sort_by_key(|(_, l)| *l);
        for &(v, _) in out {
            if f[v] == 0 {
                next += 1;
                f[v] = next;
                queue.push_back(v);
            }
        }
    }
    for slot in f.iter_mut() {
        if *slot == 0 {
            next += 1;
            *slot = next;
        }
    }
    GraphIndexing { f, gamma }
}

fn state_node(u: StateId) -> Option<usize> {
    match u {
        StateId::Initial => Some(0),
        StateId::Plain(i) => Some(i as usize),
        _ => None,
    }
}

/// Graph over u0 and the plain states; edges into uA/uR are dropped and the
/// remaining edges of each state are numbered in label-set order.
fn automaton_graph(a: &SubgoalAutomaton) -> (LabeledGraph, GraphIndexing) {
    let n = 1 + a.num_plain() as usize;
    let k = a.alphabet().len();
    let mut g = LabeledGraph::new(n);
    let mut gamma = vec![Vec::new(); n];
    for u in 0..n {
        let su = if u == 0 {
            StateId::Initial
        } else {
            StateId::Plain(u as u32)
        };
        let kept: Vec<(usize, LabelSet)> = a
            .outgoing(su)
            .filter_map(|(t, c)| state_node(t).map(|v| (v, c.label_set(k))))
            .collect();
        for (v, l) in &kept {
            g.add_edge(u, *v, *l);
            gamma[u].push(1 + kept.iter().filter(|(_, m)| m < l).count());
        }
    }
    let f = (1..=n).collect();
    (g, GraphIndexing { f, gamma })
}

/// Checks that the automaton's own numbering is its BFS traversal: every
/// formula lists its disjuncts in label-set order, reachable states are
/// numbered by their parents, and unreachable plain states come last and
/// have no outgoing edges.
pub fn check_canonical(a: &SubgoalAutomaton) -> Result<(), CanonicalityViolation> {
    let k = a.alphabet().len();
    for (f, t, dnf) in a.edges() {
        if dnf
            .windows(2)
            .any(|w| w[0].label_set(k) >= w[1].label_set(k))
        {
            return Err(CanonicalityViolation::DisjunctOrder(f, t));
        }
    }
    let (g, idx) = automaton_graph(a);
    let reach = g.reachable_from_root();
    let m = reach.iter().take_while(|&&r| r).count();
    for v in m..g.num_nodes() {
        let s = StateId::Plain(v as u32);
        if reach[v] || a.outgoing(s).next().is_some() {
            return Err(CanonicalityViolation::StrayState(s));
        }
    }
    // Restrict to the reachable prefix; edges from it never leave it.
    let mut sub = LabeledGraph::new(m);
    for u in 0..m {
        for &(v, l) in g.out_edges(u) {
            sub.add_edge(u, v, l);
        }
    }
    let sub_idx = GraphIndexing {
        f: idx.f[..m].to_vec(),
        gamma: idx.gamma[..m].to_vec(),
    };
    check_bfs_traversal(&sub, &sub_idx)
}

pub fn is_canonical(a: &SubgoalAutomaton) -> bool {
    check_canonical(a).is_ok()
}

/// Renames plain states into BFS order (unreachable ones last, keeping their
/// relative order).
pub fn canonicalize(a: &SubgoalAutomaton) -> SubgoalAutomaton {
    let (g, _) = automaton_graph(a);
    let bfs = bfs_traversal(&g);
    let perm: Vec<u32> = (1..g.num_nodes()).map(|v| bfs.f[v] as u32 - 1).collect();
    a.rename_plain(&perm)
}

/// Total order used to break ties between equally cheap automata: the
/// sequence of (source, label set, target) over all disjuncts of the
/// canonical form, sources in index order and disjuncts in label order.
pub fn canonical_key(a: &SubgoalAutomaton) -> Vec<(u32, u64, u32)> {
    let c = canonicalize(a);
    let k = c.alphabet().len();
    let code = |s: StateId| match s {
        StateId::Initial => 0,
        StateId::Plain(i) => i,
        StateId::Accepting => u32::MAX - 1,
        StateId::Rejecting => u32::MAX,
    };
    let mut key = Vec::with_capacity(c.num_disjuncts());
    for u in c.states() {
        let mut out: Vec<(u32, u64, u32)> = c
            .outgoing(u)
            .map(|(t, conj)| (code(u), conj.label_set(k).key(), code(t)))
            .collect();
        out.sort_unstable();
        key.extend(out);
    }
    key
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::Alphabet;

    fn ls(labels: &str) -> LabelSet {
        let v: Vec<u32> = labels.bytes().map(|b| (b - b'a' + 1) as u32).collect();
        LabelSet::from_labels(&v, 6)
    }

    // Nodes: 0=v1, 1=v2, 2=v3, 3=v4, 4=v5.
    fn worked_graph() -> LabeledGraph {
        let mut g = LabeledGraph::new(5);
        g.add_edge(0, 4, ls("af"));
        g.add_edge(0, 3, ls("be"));
        g.add_edge(0, 2, ls("ab"));
        g.add_edge(4, 2, ls("b"));
        g.add_edge(3, 2, ls("a"));
        g.add_edge(2, 1, ls("c"));
        g.add_edge(2, 1, ls("d"));
        g
    }

    #[test]
    fn worked_example_indexing() {
        let g = worked_graph();
        let idx = bfs_traversal(&g);
        assert_eq!(idx.f, vec![1, 5, 4, 2, 3]);
        let parent = parent_function(&g, &idx);
        assert_eq!(parent[1], Some((4, 1)));
        assert_eq!(parent[2], Some((1, 3)));
        assert_eq!(parent[3], Some((1, 1)));
        assert_eq!(parent[4], Some((1, 2)));
        assert!(is_bfs_traversal(&g, &idx));

        let mut swapped = idx.clone();
        swapped.f.swap(3, 4);
        assert!(matches!(
            check_bfs_traversal(&g, &swapped),
            Err(CanonicalityViolation::ParentOrder(_, _))
        ));
    }

    #[test]
    fn edge_order_violation() {
        let g = worked_graph();
        let mut idx = bfs_traversal(&g);
        idx.gamma[2].swap(0, 1);
        assert_eq!(
            check_bfs_traversal(&g, &idx),
            Err(CanonicalityViolation::EdgeOrder(2))
        );
    }

    #[test]
    fn automaton_canonical_form() {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let c = |p: &[&str], n: &[&str]| ab.conjunction(p, n).unwrap();
        let mut single = SubgoalAutomaton::new(ab.clone(), 1, true, false);
        single
            .add_disjunct(StateId::Initial, StateId::Plain(1), c(&["a"], &[]))
            .unwrap();
        assert!(is_canonical(&single));

        // u0 -a-> u1, u0 -b&!a-> u2: label {b,!a} = 0110 < {a} = 1000 so the
        // b-successor must be u1.
        let mut a = SubgoalAutomaton::new(ab.clone(), 2, true, false);
        a.add_disjunct(StateId::Initial, StateId::Plain(1), c(&["a"], &[]))
            .unwrap();
        a.add_disjunct(StateId::Initial, StateId::Plain(2), c(&["b"], &["a"]))
            .unwrap();
        a.add_disjunct(StateId::Plain(1), StateId::Accepting, c(&["b"], &[]))
            .unwrap();
        a.add_disjunct(StateId::Plain(2), StateId::Accepting, c(&["a"], &[]))
            .unwrap();
        assert!(!is_canonical(&a));
        let canon = canonicalize(&a);
        assert!(is_canonical(&canon));
        assert_eq!(
            canon.formula(StateId::Initial, StateId::Plain(1)),
            &[c(&["b"], &["a"])]
        );
        assert_eq!(canonical_key(&a), canonical_key(&canon));
    }

    #[test]
    fn edges_into_specials_do_not_shift_numbering() {
        // the uA edge carries the smallest label set of u0
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let c = |p: &[&str], n: &[&str]| ab.conjunction(p, n).unwrap();
        let mut a = SubgoalAutomaton::new(ab.clone(), 1, true, false);
        a.add_disjunct(StateId::Initial, StateId::Accepting, c(&["b"], &["a"]))
            .unwrap();
        a.add_disjunct(StateId::Initial, StateId::Plain(1), c(&["a"], &[]))
            .unwrap();
        assert!(is_canonical(&a), "{:?}", check_canonical(&a));
    }

    #[test]
    fn trailing_isolated_states_are_allowed() {
        let ab = Alphabet::new(["a"]).unwrap();
        let mut a = SubgoalAutomaton::new(ab.clone(), 2, true, false);
        a.add_disjunct(
            StateId::Initial,
            StateId::Accepting,
            ab.conjunction(&["a"], &[]).unwrap(),
        )
        .unwrap();
        assert!(is_canonical(&a));
        let mut b = SubgoalAutomaton::new(ab.clone(), 2, true, false);
        b.add_disjunct(
            StateId::Initial,
            StateId::Plain(2),
            ab.conjunction(&["a"], &[]).unwrap(),
        )
        .unwrap();
        assert!(!is_canonical(&b));
        assert!(is_canonical(&canonicalize(&b)));
    }
}
