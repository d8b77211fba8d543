//! Minimum central-cut surplus by dynamic programming over a decomposition
//! tree.
//!
//! A state at node X records the sides of its terminals, whether the terminals
//! are joined inside X, how many components of each side inside X touch
//! neither terminal, and the sides of internal vertices that still have a
//! demand partner outside X.

use std::collections::HashMap;

use super::scaled::Scaled;
use crate::graph::VertexSet;
use crate::instance::Instance;
use crate::spgraph::{SpNode, SpTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct State {
    ss: u8,
    st: u8,
    joined: bool,
    floating: [u8; 2],
    bits: u64,
}

type Table = HashMap<State, i128>;

pub(crate) struct TreeDp<'a> {
    inst: &'a Instance,
    tree: &'a SpTree,
    w: &'a Scaled,
    open: Vec<Vec<usize>>,
    charges: Vec<Vec<usize>>,
}

impl<'a> TreeDp<'a> {
    pub fn new(inst: &'a Instance, tree: &'a SpTree, w: &'a Scaled) -> Self {
        let sets = tree.node_vertices();
        let n_nodes = tree.nodes.len();
        let mut charges = vec![Vec::new(); n_nodes];
        let mut partners = vec![VertexSet::EMPTY; inst.vertex_count()];
        for (i, &(a, b)) in inst.demand.edges().iter().enumerate() {
            if w.dems[i] == 0 {
                continue;
            }
            partners[a].insert(b);
            partners[b].insert(a);
            let both = VertexSet::singleton(a).with(b);
            let mut node = tree.root;
            loop {
                let Some((l, r)) = tree.nodes[node].children() else { break };
                let (inl, inr) = (both.is_subset(sets[l]), both.is_subset(sets[r]));
                match (inl, inr) {
                    (true, false) => node = l,
                    (false, true) => node = r,
                    _ => break,
                }
            }
            charges[node].push(i);
        }
        let mut open = vec![Vec::new(); n_nodes];
        for id in tree.postorder() {
            let node = tree.nodes[id];
            let inner = sets[id]
                .difference(VertexSet::singleton(node.source()))
                .difference(VertexSet::singleton(node.sink()));
            open[id] = inner
                .iter()
                .filter(|&x| !partners[x].is_subset(sets[id]))
                .collect();
        }
        TreeDp { inst, tree, w, open, charges }
    }

    /// Minimum surplus (scaled) over central cuts whose side containing
    /// vertex 0 agrees with `fixed` (`Some(true)` means inside).
    pub fn min_surplus(&self, fixed: &[Option<bool>]) -> Option<i128> {
        let allowed = |x: usize| -> Vec<u8> {
            match fixed.get(x).copied().flatten() {
                Some(true) => vec![1],
                Some(false) => vec![0],
                None => vec![0, 1],
            }
        };
        let mut tables: Vec<Option<Table>> = vec![None; self.tree.nodes.len()];
        for id in self.tree.postorder() {
            let table = match self.tree.nodes[id] {
                SpNode::Leaf { edge, source, sink } => {
                    let mut t = Table::new();
                    for ss in allowed(source) {
                        for st in allowed(sink) {
                            let mut v = if ss != st { self.w.caps[edge] } else { 0 };
                            v -= self.charge(id, |x| if x == source { ss } else { st });
                            let s = State { ss, st, joined: ss == st, floating: [0, 0], bits: 0 };
                            put(&mut t, s, v);
                        }
                    }
                    t
                }
                SpNode::Series { left, right, middle, .. } => {
                    let (tl, tr) = (tables[left].take().unwrap(), tables[right].take().unwrap());
                    let mut t = Table::new();
                    for (kl, &vl) in &tl {
                        for (kr, &vr) in &tr {
                            if kl.st != kr.ss {
                                continue;
                            }
                            let (ss, sm, st) = (kl.ss, kl.st, kr.st);
                            let s_m = ss == sm && kl.joined;
                            let m_t = sm == st && kr.joined;
                            let mut floating = [kl.floating[0] + kr.floating[0], kl.floating[1] + kr.floating[1]];
                            if !s_m && !m_t {
                                floating[sm as usize] += 1;
                            }
                            if !valid(ss, st, floating) {
                                continue;
                            }
                            let side = |x: usize| -> u8 {
                                if x == middle {
                                    return sm;
                                }
                                self.side_in(left, kl, x)
                                    .or_else(|| self.side_in(right, kr, x))
                                    .expect("vertex side known")
                            };
                            let side = |x: usize| -> u8 {
                                let node = self.tree.nodes[id];
                                if x == node.source() {
                                    ss
                                } else if x == node.sink() {
                                    st
                                } else {
                                    side(x)
                                }
                            };
                            let v = vl + vr - self.charge(id, side);
                            let s = State {
                                ss,
                                st,
                                joined: s_m && m_t,
                                floating,
                                bits: self.pack(id, side),
                            };
                            put(&mut t, s, v);
                        }
                    }
                    t
                }
                SpNode::Parallel { left, right, .. } => {
                    let (ta, tb) = (tables[left].take().unwrap(), tables[right].take().unwrap());
                    let mut t = Table::new();
                    for (ka, &va) in &ta {
                        for (kb, &vb) in &tb {
                            if ka.ss != kb.ss || ka.st != kb.st {
                                continue;
                            }
                            let floating = [ka.floating[0] + kb.floating[0], ka.floating[1] + kb.floating[1]];
                            if !valid(ka.ss, ka.st, floating) {
                                continue;
                            }
                            let node = self.tree.nodes[id];
                            let side = |x: usize| -> u8 {
                                if x == node.source() {
                                    ka.ss
                                } else if x == node.sink() {
                                    ka.st
                                } else {
                                    self.side_in(left, ka, x)
                                        .or_else(|| self.side_in(right, kb, x))
                                        .expect("vertex side known")
                                }
                            };
                            let v = va + vb - self.charge(id, side);
                            let s = State {
                                ss: ka.ss,
                                st: ka.st,
                                joined: ka.joined || kb.joined,
                                floating,
                                bits: self.pack(id, side),
                            };
                            put(&mut t, s, v);
                        }
                    }
                    t
                }
            };
            tables[id] = Some(table);
        }
        let root = tables[self.tree.root].take().unwrap();
        root.into_iter()
            .filter(|(k, _)| {
                if k.ss != k.st {
                    k.floating == [0, 0]
                } else {
                    let s = k.ss as usize;
                    k.joined && k.floating[s] == 0 && k.floating[1 - s] == 1
                }
            })
            .map(|(_, v)| v)
            .min()
    }

    fn side_in(&self, node: usize, state: &State, x: usize) -> Option<u8> {
        let n = self.tree.nodes[node];
        if x == n.source() {
            return Some(state.ss);
        }
        if x == n.sink() {
            return Some(state.st);
        }
        self.open[node]
            .iter()
            .position(|&y| y == x)
            .map(|k| ((state.bits >> k) & 1) as u8)
    }

    fn pack(&self, node: usize, side: impl Fn(usize) -> u8) -> u64 {
        self.open[node]
            .iter()
            .enumerate()
            .fold(0u64, |acc, (k, &x)| acc | ((side(x) as u64) << k))
    }

    fn charge(&self, node: usize, side: impl Fn(usize) -> u8) -> i128 {
        self.charges[node]
            .iter()
            .map(|&i| {
                let (a, b) = self.inst.demand.endpoints(i);
                if side(a) != side(b) {
                    self.w.dems[i]
                } else {
                    0
                }
            })
            .sum()
    }
}

fn valid(ss: u8, st: u8, floating: [u8; 2]) -> bool {
    (0..2).all(|k| floating[k] <= 1 && (floating[k] == 0 || (ss as usize != k && st as usize != k)))
}

fn put(t: &mut Table, s: State, v: i128) {
    t.entry(s).and_modify(|old| *old = (*old).min(v)).or_insert(v);
}
