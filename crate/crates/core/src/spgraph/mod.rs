//! Series-parallel recognition and what follows from the decomposition tree.

mod embed;
mod orient;
mod paths;

pub use embed::{embed_with_outer_pair, PlanarEmbedding};
pub use orient::{brackets, is_compliant, orient, terminals_of, Orientation, TerminalPair};
pub use paths::{path_containing, Via};

use std::collections::HashMap;

use crate::graph::{Graph, VertexSet};
use crate::{Error, Result};

/// Node of a decomposition tree. Every node spans a two-terminal subgraph
/// from `source` to `sink`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpNode {
    Leaf {
        edge: usize,
        source: usize,
        sink: usize,
    },
    /// `left` spans `source..middle`, `right` spans `middle..sink`.
    Series {
        left: usize,
        right: usize,
        source: usize,
        middle: usize,
        sink: usize,
    },
    /// Both children span `source..sink`.
    Parallel {
        left: usize,
        right: usize,
        source: usize,
        sink: usize,
    },
}

impl SpNode {
    pub fn source(&self) -> usize {
        match *self {
            SpNode::Leaf { source, .. }
            | SpNode::Series { source, .. }
            | SpNode::Parallel { source, .. } => source,
        }
    }

    pub fn sink(&self) -> usize {
        match *self {
            SpNode::Leaf { sink, .. } | SpNode::Series { sink, .. } | SpNode::Parallel { sink, .. } => {
                sink
            }
        }
    }

    pub fn children(&self) -> Option<(usize, usize)> {
        match *self {
            SpNode::Leaf { .. } => None,
            SpNode::Series { left, right, .. } | SpNode::Parallel { left, right, .. } => {
                Some((left, right))
            }
        }
    }
}

/// Binary decomposition tree of a biconnected series-parallel multigraph.
#[derive(Clone, Debug)]
pub struct SpTree {
    pub graph: Graph,
    pub nodes: Vec<SpNode>,
    pub root: usize,
}

/// Four pairwise adjacent, disjoint, connected vertex sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct K4Witness {
    pub branch_sets: [VertexSet; 4],
}

impl K4Witness {
    pub fn verify(&self, g: &Graph) -> bool {
        let b = &self.branch_sets;
        for i in 0..4 {
            if b[i].is_empty() || !g.induces_connected(b[i]) {
                return false;
            }
            for j in i + 1..4 {
                if !b[i].is_disjoint(b[j]) || g.edges_between(b[i], b[j]).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Clone, Debug)]
pub enum Recognition {
    Tree(SpTree),
    K4Minor(K4Witness),
    CutVertex(usize),
}

pub fn recognize_series_parallel(g: &Graph) -> Result<Recognition> {
    if g.edge_count() == 0 {
        return Err(Error::Precondition("graph has no edges".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if let Some(v) = g.cut_vertex() {
        return Ok(Recognition::CutVertex(v));
    }
    match reduce(g, None) {
        Some(t) => Ok(Recognition::Tree(t)),
        None => Ok(Recognition::K4Minor(k4_witness(g).ok_or_else(|| {
            Error::Internal("stuck reduction without a K4 minor".into())
        })?)),
    }
}

/// Tree for a biconnected series-parallel graph, or the matching error.
pub fn sp_tree(g: &Graph) -> Result<SpTree> {
    match recognize_series_parallel(g)? {
        Recognition::Tree(t) => Ok(t),
        Recognition::K4Minor(_) => Err(Error::NotSeriesParallel),
        Recognition::CutVertex(v) => Err(Error::NotBiconnected(v)),
    }
}

/// Some block of `g` fails to reduce.
pub fn has_k4_minor(g: &Graph) -> bool {
    for block in g.blocks().blocks {
        let (local, _, _) = g.edge_subgraph(&block);
        if local.vertex_count() >= 4 && reduce(&local, None).is_none() {
            return true;
        }
    }
    false
}

/// Every block of the graph is series-parallel.
pub fn is_series_parallel(g: &Graph) -> bool {
    !has_k4_minor(g)
}

/// Delete edges greedily while a K4 minor survives; what remains is a K4
/// subdivision whose branch vertices absorb the subdivided paths.
fn k4_witness(g: &Graph) -> Option<K4Witness> {
    if !has_k4_minor(g) {
        return None;
    }
    let n = g.vertex_count();
    let mut edges = g.edges().to_vec();
    let mut i = 0;
    while i < edges.len() {
        let mut trial = edges.clone();
        trial.remove(i);
        let h = Graph::new(n, trial.clone()).expect("subgraph is valid");
        if has_k4_minor(&h) {
            edges = trial;
        } else {
            i += 1;
        }
    }
    let h = Graph::new(n, edges).expect("subgraph is valid");
    let branch: Vec<usize> = (0..n).filter(|&v| h.degree(v) == 3).collect();
    if branch.len() != 4 {
        return None;
    }
    let mut sets = [VertexSet::EMPTY; 4];
    for (k, &b) in branch.iter().enumerate() {
        sets[k].insert(b);
    }
    for (k, &b) in branch.iter().enumerate() {
        for &(first, e0) in h.incident(b) {
            let mut interior = Vec::new();
            let (mut prev_edge, mut cur) = (e0, first);
            while h.degree(cur) == 2 {
                interior.push(cur);
                let &(next, e) = h
                    .incident(cur)
                    .iter()
                    .find(|&&(_, e)| e != prev_edge)
                    .expect("degree two");
                prev_edge = e;
                cur = next;
            }
            if b < cur {
                for w in interior {
                    sets[k].insert(w);
                }
            }
        }
    }
    let witness = K4Witness { branch_sets: sets };
    witness.verify(g).then_some(witness)
}

/// Check a two-terminal reduction of `g` to a single `(s, t)` edge.
pub fn is_split_pair(tree: &SpTree, s: usize, t: usize) -> bool {
    if s == t || s >= tree.graph.vertex_count() || t >= tree.graph.vertex_count() {
        return false;
    }
    reduce(&tree.graph, Some((s, t))).is_some()
}

/// Decomposition tree whose root spans `s..t`.
pub fn tree_with_terminals(g: &Graph, s: usize, t: usize) -> Result<SpTree> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    if s == t {
        return Err(Error::InvalidSplitPair(s, t));
    }
    if let Some(v) = g.cut_vertex() {
        return Err(Error::NotBiconnected(v));
    }
    reduce(g, Some((s, t))).ok_or(Error::InvalidSplitPair(s, t))
}

struct Reducer {
    nodes: Vec<SpNode>,
}

impl Reducer {
    fn flip(&mut self, id: usize) {
        let node = self.nodes[id];
        self.nodes[id] = match node {
            SpNode::Leaf { edge, source, sink } => SpNode::Leaf {
                edge,
                source: sink,
                sink: source,
            },
            SpNode::Series {
                left,
                right,
                source,
                middle,
                sink,
            } => {
                self.flip(left);
                self.flip(right);
                SpNode::Series {
                    left: right,
                    right: left,
                    source: sink,
                    middle,
                    sink: source,
                }
            }
            SpNode::Parallel {
                left,
                right,
                source,
                sink,
            } => {
                self.flip(left);
                self.flip(right);
                SpNode::Parallel {
                    left,
                    right,
                    source: sink,
                    sink: source,
                }
            }
        };
    }

    fn orient_from(&mut self, id: usize, source: usize) {
        if self.nodes[id].source() != source {
            self.flip(id);
        }
    }

    fn push(&mut self, node: SpNode) -> usize {
        self.nodes.push(node);
        self.nodes.len() - 1
    }
}

/// Merge parallel virtual edges and suppress degree-two vertices (never the
/// protected terminals), smallest index first.
fn reduce(g: &Graph, terminals: Option<(usize, usize)>) -> Option<SpTree> {
    if g.edge_count() == 0 {
        return None;
    }
    let n = g.vertex_count();
    let mut r = Reducer { nodes: Vec::new() };
    // alive virtual edges: (x, y, node)
    let mut virt: Vec<Option<(usize, usize, usize)>> = g
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &(a, b))| {
            let id = r.push(SpNode::Leaf {
                edge: e,
                source: a,
                sink: b,
            });
            Some((a, b, id))
        })
        .collect();
    let protected = |v: usize| terminals.map_or(false, |(s, t)| v == s || v == t);
    loop {
        let mut progressed = false;
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        for j in 0..virt.len() {
            let Some((x, y, _)) = virt[j] else { continue };
            let key = (x.min(y), x.max(y));
            if let Some(&i) = seen.get(&key) {
                let (xi, yi, ni) = virt[i].expect("alive");
                let nj = virt[j].expect("alive").2;
                r.orient_from(nj, xi);
                let id = r.push(SpNode::Parallel {
                    left: ni,
                    right: nj,
                    source: xi,
                    sink: yi,
                });
                virt[i] = Some((xi, yi, id));
                virt[j] = None;
                progressed = true;
            } else {
                seen.insert(key, j);
            }
        }
        if progressed {
            continue;
        }
        // suppress every degree-two vertex of this pass before merging again
        for w in 0..n {
            let inc: Vec<usize> = (0..virt.len())
                .filter(|&i| virt[i].map_or(false, |(x, y, _)| x == w || y == w))
                .collect();
            if protected(w) || inc.len() != 2 {
                continue;
            }
            let (i, j) = (inc[0], inc[1]);
            let (xi, yi, ni) = virt[i].expect("alive");
            let (xj, yj, nj) = virt[j].expect("alive");
            let x = if xi == w { yi } else { xi };
            let y = if xj == w { yj } else { xj };
            if x == y {
                continue;
            }
            r.orient_from(ni, x);
            r.orient_from(nj, w);
            let id = r.push(SpNode::Series {
                left: ni,
                right: nj,
                source: x,
                middle: w,
                sink: y,
            });
            virt[i] = Some((x, y, id));
            virt[j] = None;
            progressed = true;
        }
        if !progressed {
            break;
        }
    }
    let alive: Vec<(usize, usize, usize)> = virt.into_iter().flatten().collect();
    if alive.len() != 1 {
        return None;
    }
    let (x, y, root) = alive[0];
    if let Some((s, t)) = terminals {
        if (x, y) != (s, t) && (x, y) != (t, s) {
            return None;
        }
        r.orient_from(root, s);
    }
    // every vertex must appear in the tree
    let mut covered = VertexSet::EMPTY;
    for &(a, b) in g.edges() {
        covered.insert(a);
        covered.insert(b);
    }
    if covered.len() != n {
        return None;
    }
    Some(SpTree {
        graph: g.clone(),
        nodes: r.nodes,
        root,
    })
}

impl SpTree {
    pub fn node(&self, id: usize) -> &SpNode {
        &self.nodes[id]
    }

    pub fn source(&self) -> usize {
        self.nodes[self.root].source()
    }

    pub fn sink(&self) -> usize {
        self.nodes[self.root].sink()
    }

    /// Leaves as `(edge, source, sink)`, left to right.
    pub fn leaves(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            match self.nodes[id] {
                SpNode::Leaf { edge, source, sink } => out.push((edge, source, sink)),
                SpNode::Series { left, right, .. } | SpNode::Parallel { left, right, .. } => {
                    stack.push(right);
                    stack.push(left);
                }
            }
        }
        out
    }

    /// Rebuild the edge multiset from the tree, sorted, endpoints ordered.
    pub fn evaluate(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .leaves()
            .into_iter()
            .map(|(_, a, b)| (a.min(b), a.max(b)))
            .collect();
        out.sort_unstable();
        out
    }

    /// Check the structural invariants of every node.
    pub fn is_consistent(&self) -> bool {
        self.nodes_below(self.root).into_iter().all(|id| match self.nodes[id] {
            SpNode::Leaf { edge, source, sink } => {
                let (a, b) = self.graph.endpoints(edge);
                (a, b) == (source, sink) || (a, b) == (sink, source)
            }
            SpNode::Series {
                left,
                right,
                source,
                middle,
                sink,
            } => {
                let (l, r) = (self.nodes[left], self.nodes[right]);
                (l.source(), l.sink(), r.source(), r.sink()) == (source, middle, middle, sink)
            }
            SpNode::Parallel {
                left,
                right,
                source,
                sink,
            } => {
                let (l, r) = (self.nodes[left], self.nodes[right]);
                (l.source(), l.sink(), r.source(), r.sink()) == (source, sink, source, sink)
            }
        })
    }

    /// Node ids in the subtree of `id`, parents before children.
    pub fn nodes_below(&self, id: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(x) = stack.pop() {
            out.push(x);
            if let Some((l, r)) = self.nodes[x].children() {
                stack.push(r);
                stack.push(l);
            }
        }
        out
    }

    /// Children of a maximal chain of parallel nodes starting at `id`.
    pub fn parallel_children(&self, id: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(x) = stack.pop() {
            match self.nodes[x] {
                SpNode::Parallel { left, right, .. } => {
                    stack.push(right);
                    stack.push(left);
                }
                _ => out.push(x),
            }
        }
        out
    }

    /// Vertex set spanned by each node.
    pub fn node_vertices(&self) -> Vec<VertexSet> {
        let mut sets = vec![VertexSet::EMPTY; self.nodes.len()];
        for id in self.postorder() {
            sets[id] = match self.nodes[id] {
                SpNode::Leaf { source, sink, .. } => VertexSet::singleton(source).with(sink),
                SpNode::Series { left, right, .. } | SpNode::Parallel { left, right, .. } => {
                    sets[left].union(sets[right])
                }
            };
        }
        sets
    }

    /// Reachable node ids, children before parents.
    pub fn postorder(&self) -> Vec<usize> {
        let mut order = self.nodes_below(self.root);
        order.reverse();
        order
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn tree(g: &Graph) -> SpTree {
        match recognize_series_parallel(g).unwrap() {
            Recognition::Tree(t) => t,
            other => panic!("expected a tree, got {other:?}"),
        }
    }

    #[test]
    fn single_edge_is_a_leaf() {
        let g = Graph::new(2, vec![(0, 1)]).unwrap();
        let t = tree(&g);
        assert!(matches!(t.node(t.root), SpNode::Leaf { edge: 0, .. }));
    }

    #[test]
    fn k4_is_refused_with_witness() {
        let g = fixtures::k4();
        match recognize_series_parallel(&g).unwrap() {
            Recognition::K4Minor(w) => assert!(w.verify(&g)),
            other => panic!("expected K4 witness, got {other:?}"),
        }
    }

    #[test]
    fn bad_k4_supply_has_a_k4_minor() {
        let g = fixtures::bad_k4().supply;
        match recognize_series_parallel(&g).unwrap() {
            Recognition::K4Minor(w) => assert!(w.verify(&g)),
            other => panic!("expected K4 witness, got {other:?}"),
        }
    }

    #[test]
    fn k25_is_parallel_over_series() {
        let g = fixtures::k2m(5);
        let t = tree(&g);
        assert!(matches!(t.node(t.root), SpNode::Parallel { .. }));
        let kids = t.parallel_children(t.root);
        assert_eq!(kids.len(), 5);
        assert!(kids.iter().all(|&k| matches!(t.node(k), SpNode::Series { .. })));
        let mut want: Vec<_> = g.edges().iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        want.sort_unstable();
        assert_eq!(t.evaluate(), want);
        assert!(t.is_consistent());
    }

    #[test]
    fn path_reports_cut_vertex() {
        let g = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert!(matches!(
            recognize_series_parallel(&g).unwrap(),
            Recognition::CutVertex(1)
        ));
        let d = Graph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        assert_eq!(recognize_series_parallel(&d).unwrap_err(), Error::Disconnected);
    }

    #[test]
    fn split_pairs_of_k23() {
        let t = tree(&fixtures::k2m(3));
        assert!(is_split_pair(&t, t.source(), t.sink()));
        assert!(is_split_pair(&t, 0, 1));
        assert!(!is_split_pair(&t, 2, 3));
        // rim vertex and hub are adjacent, so always a split pair
        assert!(is_split_pair(&t, 0, 2));
    }
}
