//! Search for an odd-spindle model: disjoint connected branch sets U, V,
//! R_1..R_p covering V(G) such that every R_j touches U and V in G, H has
//! an edge between U and V, and H has edges R_1R_2, ..., R_pR_1.
//!
//! Branch sets are seeded with the endpoints of a chosen hub demand and a
//! chosen cyclic demand sequence; the remaining vertices are labelled by
//! backtracking with a connectivity relaxation as pruning.

use crate::graph::{reach_masks, VertexSet};
use crate::instance::Pair;

const FREE: u8 = u8::MAX;

/// A found model: branch sets in order U, V, R_1..R_p plus the demand edges
/// realising the hub demand and the cycle R_1R_2, ..., R_pR_1.
#[derive(Clone, Debug)]
pub(crate) struct Model {
    pub branch_sets: Vec<VertexSet>,
    pub hub_demand: usize,
    pub cycle_demands: Vec<usize>,
}

pub(crate) struct ModelSearch<'a> {
    pair: &'a Pair,
    masks: Vec<u64>,
    all: u64,
    /// one demand index per unordered endpoint pair
    demands: Vec<usize>,
    pub examined: usize,
}

impl<'a> ModelSearch<'a> {
    pub fn new(pair: &'a Pair) -> Self {
        let mut seen = std::collections::HashSet::new();
        let demands = (0..pair.demand.edge_count())
            .filter(|&i| {
                let (a, b) = pair.demand.endpoints(i);
                seen.insert((a.min(b), a.max(b)))
            })
            .collect();
        ModelSearch {
            pair,
            masks: pair.supply.neighbor_masks(),
            all: VertexSet::full(pair.vertex_count()).0,
            demands,
            examined: 0,
        }
    }

    /// First model with an odd number of rim sets, smallest p first.
    pub fn find(&mut self) -> Option<Model> {
        let n = self.pair.vertex_count();
        let k = self.demands.len();
        let m = self.pair.supply.edge_count();
        let mut p = 3;
        while p + 2 <= n && p + 1 <= k && 2 * p <= m {
            if let Some(model) = self.find_p(p) {
                return Some(model);
            }
            p += 2;
        }
        None
    }

    fn find_p(&mut self, p: usize) -> Option<Model> {
        let demands = self.demands.clone();
        for &hub in &demands {
            let rest: Vec<usize> = demands.iter().copied().filter(|&d| d != hub).collect();
            let mut seq = Vec::with_capacity(p);
            if let Some(m) = self.cycles(hub, &rest, p, &mut seq) {
                return Some(m);
            }
        }
        None
    }

    /// Cyclic sequences up to rotation and reflection: the first entry is
    /// the smallest and the second is smaller than the last.
    fn cycles(&mut self, hub: usize, rest: &[usize], p: usize, seq: &mut Vec<usize>) -> Option<Model> {
        if seq.len() == p {
            if p > 2 && seq[1] > seq[p - 1] {
                return None;
            }
            for orient in 0u32..(1 << p) {
                if let Some(m) = self.try_seed(hub, seq, orient) {
                    return Some(m);
                }
            }
            return None;
        }
        for &d in rest {
            if seq.contains(&d) || seq.first().is_some_and(|&f| d < f) {
                continue;
            }
            seq.push(d);
            let found = self.cycles(hub, rest, p, seq);
            seq.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }

    fn try_seed(&mut self, hub: usize, seq: &[usize], orient: u32) -> Option<Model> {
        let n = self.pair.vertex_count();
        let p = seq.len();
        let mut labels = vec![FREE; n];
        let assign = |v: usize, l: u8, labels: &mut Vec<u8>| -> bool {
            if labels[v] == FREE || labels[v] == l {
                labels[v] = l;
                true
            } else {
                false
            }
        };
        let (a, b) = self.pair.demand.endpoints(hub);
        if !assign(a, 0, &mut labels) || !assign(b, 1, &mut labels) {
            return None;
        }
        let ends: Vec<(usize, usize)> = seq
            .iter()
            .enumerate()
            .map(|(j, &d)| {
                let (x, y) = self.pair.demand.endpoints(d);
                if orient >> j & 1 == 1 {
                    (y, x)
                } else {
                    (x, y)
                }
            })
            .collect();
        // rim set j holds the head of demand j and the tail of demand j+1
        for j in 0..p {
            let l = 2 + j as u8;
            if !assign(ends[j].1, l, &mut labels) || !assign(ends[(j + 1) % p].0, l, &mut labels) {
                return None;
            }
        }
        self.examined += 1;
        let mut parts = vec![0u64; p + 2];
        for (v, &l) in labels.iter().enumerate() {
            if l != FREE {
                parts[l as usize] |= 1 << v;
            }
        }
        if !self.extend(&mut labels, &mut parts) {
            return None;
        }
        // cycle demand j joins rim sets j and j+1
        let cycle_demands = (0..p).map(|j| seq[(j + 1) % p]).collect();
        Some(Model {
            branch_sets: parts.into_iter().map(VertexSet).collect(),
            hub_demand: hub,
            cycle_demands,
        })
    }

    fn extend(&self, labels: &mut Vec<u8>, parts: &mut Vec<u64>) -> bool {
        if !self.feasible(parts) {
            return false;
        }
        let assigned = parts.iter().fold(0, |a, &s| a | s);
        let free = self.all & !assigned;
        if free == 0 {
            return true;
        }
        let near = (0..labels.len())
            .filter(|&v| free >> v & 1 == 1)
            .find(|&v| self.masks[v] & assigned != 0)
            .unwrap_or(free.trailing_zeros() as usize);
        for l in 0..parts.len() {
            labels[near] = l as u8;
            parts[l] |= 1 << near;
            if self.extend(labels, parts) {
                return true;
            }
            parts[l] &= !(1 << near);
        }
        labels[near] = FREE;
        false
    }

    /// Relaxation: every branch set is connected through free vertices and
    /// every rim set can still touch both hub sets. Exact once no vertex is
    /// free.
    fn feasible(&self, parts: &[u64]) -> bool {
        let assigned = parts.iter().fold(0, |a, &s| a | s);
        let free = self.all & !assigned;
        let mut regions = Vec::with_capacity(parts.len());
        for &s in parts {
            let first = VertexSet::singleton(s.trailing_zeros() as usize);
            let region = reach_masks(&self.masks, first, VertexSet(s | free)).0;
            if s & !region != 0 {
                return false;
            }
            regions.push(region);
        }
        let touches = |x: u64, y: u64| {
            if x & y != 0 {
                return true;
            }
            let mut nb = 0u64;
            let mut r = x;
            while r != 0 {
                nb |= self.masks[r.trailing_zeros() as usize];
                r &= r - 1;
            }
            nb & y != 0
        };
        regions[2..]
            .iter()
            .all(|&r| touches(r, regions[0]) && touches(r, regions[1]))
    }
}
