//! Split-pair orientations, compliance, terminals and bracketing.

use std::collections::VecDeque;

use super::{tree_with_terminals, SpTree};
use crate::graph::{Graph, VertexSet};
use crate::{Error, Result};

/// Orientation of every supply edge induced by a split pair `(s, t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    pub s: usize,
    pub t: usize,
    pub graph: Graph,
    /// `(tail, head)` per edge.
    pub arcs: Vec<(usize, usize)>,
    reach: Vec<VertexSet>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TerminalPair {
    pub u: usize,
    pub v: usize,
    pub w: usize,
    pub z: usize,
}

pub fn orient(tree: &SpTree, s: usize, t: usize) -> Result<Orientation> {
    let rooted = tree_with_terminals(&tree.graph, s, t)?;
    let mut arcs = vec![(0, 0); tree.graph.edge_count()];
    for (e, a, b) in rooted.leaves() {
        arcs[e] = (a, b);
    }
    let reach = reachability(tree.graph.vertex_count(), &arcs)
        .ok_or_else(|| Error::Internal("orientation has a directed cycle".into()))?;
    Ok(Orientation {
        s,
        t,
        graph: tree.graph.clone(),
        arcs,
        reach,
    })
}

/// Descendant sets (each containing its own vertex); `None` if cyclic.
fn reachability(n: usize, arcs: &[(usize, usize)]) -> Option<Vec<VertexSet>> {
    let mut indeg = vec![0usize; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in arcs {
        indeg[b] += 1;
        out[a].push(b);
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut topo = Vec::with_capacity(n);
    while let Some(v) = queue.pop_front() {
        topo.push(v);
        for &w in &out[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                queue.push_back(w);
            }
        }
    }
    if topo.len() != n {
        return None;
    }
    let mut reach = vec![VertexSet::EMPTY; n];
    for &v in topo.iter().rev() {
        let mut r = VertexSet::singleton(v);
        for &w in &out[v] {
            r = r.union(reach[w]);
        }
        reach[v] = r;
    }
    Some(reach)
}

impl Orientation {
    pub fn reaches(&self, a: usize, b: usize) -> bool {
        self.reach[a].contains(b)
    }

    pub fn sources(&self) -> Vec<usize> {
        let mut has_in = VertexSet::EMPTY;
        for &(_, b) in &self.arcs {
            has_in.insert(b);
        }
        has_in.complement(self.graph.vertex_count()).to_vec()
    }

    pub fn sinks(&self) -> Vec<usize> {
        let mut has_out = VertexSet::EMPTY;
        for &(a, _) in &self.arcs {
            has_out.insert(a);
        }
        has_out.complement(self.graph.vertex_count()).to_vec()
    }

    pub fn out_arcs(&self, v: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.graph
            .incident(v)
            .iter()
            .filter(move |&&(_, e)| self.arcs[e].0 == v)
            .map(|&(w, e)| (w, e))
    }

    /// Deterministic directed path from `a` to `b`, as a vertex list.
    pub fn directed_path(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        if !self.reaches(a, b) {
            return None;
        }
        let mut path = vec![a];
        let mut cur = a;
        while cur != b {
            let (next, _) = self
                .out_arcs(cur)
                .find(|&(w, _)| self.reaches(w, b))
                .expect("reachable target has a next step");
            path.push(next);
            cur = next;
        }
        Some(path)
    }
}

pub fn is_compliant(o: &Orientation, u: usize, v: usize) -> bool {
    o.reaches(u, v) || o.reaches(v, u)
}

/// Some directed path from `outer.0` to `outer.1` visits both inner vertices.
pub fn brackets(o: &Orientation, outer: (usize, usize), inner: (usize, usize)) -> bool {
    let (w, z) = outer;
    let through = |x: usize, y: usize| o.reaches(w, x) && o.reaches(x, y) && o.reaches(y, z);
    through(inner.0, inner.1) || through(inner.1, inner.0)
}

/// Last common vertex of an `s → u` and an `s → v` path, and first common
/// vertex of a `u → t` and a `v → t` path, checked to separate `u` from `v`.
pub fn terminals_of(o: &Orientation, u: usize, v: usize) -> Result<TerminalPair> {
    o.graph.check_vertex(u)?;
    o.graph.check_vertex(v)?;
    if u == v || is_compliant(o, u, v) {
        return Err(Error::CompliantPair(u, v));
    }
    let su = o.directed_path(o.s, u).expect("s reaches every vertex");
    let sv: VertexSet = o.directed_path(o.s, v).expect("s reaches every vertex").into_iter().collect();
    let ut = o.directed_path(u, o.t).expect("every vertex reaches t");
    let vt: VertexSet = o.directed_path(v, o.t).expect("every vertex reaches t").into_iter().collect();
    let w = *su.iter().rev().find(|x| sv.contains(**x)).expect("s is common");
    let z = *ut.iter().find(|x| vt.contains(**x)).expect("t is common");
    let rest = o
        .graph
        .all_vertices()
        .difference(VertexSet::singleton(w).with(z));
    if o.graph.reach_within(VertexSet::singleton(u), rest).contains(v) {
        return Err(Error::Internal(format!(
            "terminals ({w}, {z}) do not separate {u} from {v}"
        )));
    }
    Ok(TerminalPair { u, v, w, z })
}
