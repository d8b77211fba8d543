use std::fmt;

use crate::{Error, Result};

/// Largest vertex count supported; vertex subsets are 64-bit masks.
pub const MAX_VERTICES: usize = 64;

/// A set of vertices stored as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(1u64 << v)
    }

    pub fn contains(self, v: usize) -> bool {
        v < 64 && (self.0 >> v) & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1u64 << v;
    }

    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1u64 << v);
    }

    pub fn with(mut self, v: usize) -> Self {
        self.insert(v);
        self
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    pub fn complement(self, n: usize) -> Self {
        VertexSet(!self.0 & VertexSet::full(n).0)
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(v)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Representative of `{self, V \ self}`: the side holding the smallest vertex.
    pub fn representative(self, n: usize) -> Self {
        if self.contains(0) {
            self
        } else {
            self.complement(n)
        }
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// A simple path given both as its vertex sequence and its edge sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Self {
        Path {
            vertices: vec![v],
            edges: Vec::new(),
        }
    }

    pub fn start(&self) -> usize {
        self.vertices[0]
    }

    pub fn end(&self) -> usize {
        *self.vertices.last().expect("path has a vertex")
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices.iter().copied().collect()
    }

    /// Number of path edges with exactly one endpoint in `side`.
    pub fn crossings(&self, side: VertexSet) -> usize {
        self.vertices
            .windows(2)
            .filter(|w| side.contains(w[0]) != side.contains(w[1]))
            .count()
    }

    pub fn reversed(&self) -> Self {
        let mut vertices = self.vertices.clone();
        let mut edges = self.edges.clone();
        vertices.reverse();
        edges.reverse();
        Path { vertices, edges }
    }
}

/// Undirected multigraph on vertices `0..n` without self-loops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices {
                actual: n,
                limit: MAX_VERTICES,
            });
        }
        let mut adj = vec![Vec::new(); n];
        for (i, &(a, b)) in edges.iter().enumerate() {
            if a >= n {
                return Err(Error::UnknownVertex(a));
            }
            if b >= n {
                return Err(Error::UnknownVertex(b));
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            adj[a].push((b, i));
            adj[b].push((a, i));
        }
        Ok(Graph { n, edges, adj })
    }

    pub fn empty(n: usize) -> Self {
        Graph::new(n, Vec::new()).expect("empty graph is valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    /// The endpoint of `e` other than `v`.
    pub fn opposite(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    /// `(neighbour, edge index)` pairs at `v`, in edge order.
    pub fn incident(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    pub fn check_set(&self, s: VertexSet) -> Result<()> {
        match s.difference(self.all_vertices()).first() {
            Some(v) => Err(Error::UnknownVertex(v)),
            None => Ok(()),
        }
    }

    /// Edges with exactly one endpoint in `side`.
    pub fn crossing_edges(&self, side: VertexSet) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| side.contains(a) != side.contains(b))
            .map(|(i, _)| i)
            .collect()
    }

    /// Edges with one endpoint in `x` and the other in `y`.
    pub fn edges_between(&self, x: VertexSet, y: VertexSet) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| {
                (x.contains(a) && y.contains(b)) || (x.contains(b) && y.contains(a))
            })
            .map(|(i, _)| i)
            .collect()
    }

    pub fn neighbor_masks(&self) -> Vec<u64> {
        (0..self.n)
            .map(|v| self.adj[v].iter().fold(0u64, |m, &(w, _)| m | (1u64 << w)))
            .collect()
    }

    /// Vertices reachable from `from` using only vertices in `within`.
    pub fn reach_within(&self, from: VertexSet, within: VertexSet) -> VertexSet {
        let masks = self.neighbor_masks();
        reach_masks(&masks, from.intersection(within), within)
    }

    /// Whether `s` induces a connected subgraph (the empty set counts as connected).
    pub fn induces_connected(&self, s: VertexSet) -> bool {
        match s.first() {
            None => true,
            Some(v) => self.reach_within(VertexSet::singleton(v), s) == s,
        }
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.induces_connected(self.all_vertices())
    }

    /// Connected components as vertex sets, ordered by smallest vertex.
    pub fn components(&self) -> Vec<VertexSet> {
        let masks = self.neighbor_masks();
        let mut left = self.all_vertices();
        let mut out = Vec::new();
        while let Some(v) = left.first() {
            let c = reach_masks(&masks, VertexSet::singleton(v), left);
            out.push(c);
            left = left.difference(c);
        }
        out
    }

    /// Biconnected components (as sorted edge lists) and cut vertices.
    pub fn blocks(&self) -> Blocks {
        let n = self.n;
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut timer = 0;
        let mut edge_stack: Vec<usize> = Vec::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut is_cut = vec![false; n];

        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            let mut root_children = 0;
            // (vertex, parent edge, next adjacency index)
            let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
            while let Some(&mut (v, pe, ref mut idx)) = stack.last_mut() {
                if *idx < self.adj[v].len() {
                    let (w, e) = self.adj[v][*idx];
                    *idx += 1;
                    if e == pe {
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        edge_stack.push(e);
                        disc[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        if v == root {
                            root_children += 1;
                        }
                        stack.push((w, e, 0));
                    } else if disc[w] < disc[v] {
                        edge_stack.push(e);
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(p, _, _)) = stack.last() {
                        low[p] = low[p].min(low[v]);
                        if low[v] >= disc[p] {
                            if p != root {
                                is_cut[p] = true;
                            }
                            let mut block = Vec::new();
                            while let Some(e) = edge_stack.pop() {
                                block.push(e);
                                if e == pe {
                                    break;
                                }
                            }
                            block.sort_unstable();
                            blocks.push(block);
                        }
                    }
                }
            }
            if root_children > 1 {
                is_cut[root] = true;
            }
        }
        blocks.sort();
        Blocks {
            blocks,
            cut_vertices: (0..n).filter(|&v| is_cut[v]).collect(),
        }
    }

    /// Whether the graph is connected, has at least one edge and no cut vertex.
    pub fn is_biconnected(&self) -> bool {
        self.edge_count() > 0 && self.is_connected() && self.blocks().blocks.len() == 1
    }

    /// Some cut vertex, if the graph has one.
    pub fn cut_vertex(&self) -> Option<usize> {
        self.blocks().cut_vertices.first().copied()
    }

    /// Vertex set touched by a list of edges.
    pub fn vertices_of(&self, edges: &[usize]) -> VertexSet {
        edges.iter().fold(VertexSet::EMPTY, |s, &e| {
            let (a, b) = self.edges[e];
            s.with(a).with(b)
        })
    }

    /// Shortest path (by edge count) from `s` to `t` inside `within`.
    pub fn bfs_path(&self, s: usize, t: usize, within: VertexSet) -> Option<Path> {
        if !within.contains(s) || !within.contains(t) {
            return None;
        }
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; self.n];
        let mut seen = VertexSet::singleton(s);
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            if v == t {
                break;
            }
            for &(w, e) in &self.adj[v] {
                if within.contains(w) && !seen.contains(w) {
                    seen.insert(w);
                    prev[w] = Some((v, e));
                    queue.push_back(w);
                }
            }
        }
        if !seen.contains(t) {
            return None;
        }
        let mut vertices = vec![t];
        let mut edges = Vec::new();
        let mut cur = t;
        while let Some((p, e)) = prev[cur] {
            vertices.push(p);
            edges.push(e);
            cur = p;
        }
        vertices.reverse();
        edges.reverse();
        Some(Path { vertices, edges })
    }

    /// All simple `s`–`t` paths, distinguishing parallel edges. Fails once
    /// more than `limit` paths have been found.
    pub fn simple_paths(&self, s: usize, t: usize, limit: usize) -> Result<Vec<Path>> {
        let mut out = Vec::new();
        let mut vertices = vec![s];
        let mut edges = Vec::new();
        self.paths_rec(t, VertexSet::singleton(s), &mut vertices, &mut edges, &mut out, limit)?;
        Ok(out)
    }

    fn paths_rec(
        &self,
        t: usize,
        used: VertexSet,
        vertices: &mut Vec<usize>,
        edges: &mut Vec<usize>,
        out: &mut Vec<Path>,
        limit: usize,
    ) -> Result<()> {
        let v = *vertices.last().unwrap();
        if v == t {
            if out.len() >= limit {
                return Err(Error::SizeGuard {
                    what: "simple path enumeration",
                    actual: limit + 1,
                    limit,
                });
            }
            out.push(Path {
                vertices: vertices.clone(),
                edges: edges.clone(),
            });
            return Ok(());
        }
        for &(w, e) in &self.adj[v] {
            if used.contains(w) {
                continue;
            }
            vertices.push(w);
            edges.push(e);
            self.paths_rec(t, used.with(w), vertices, edges, out, limit)?;
            vertices.pop();
            edges.pop();
        }
        Ok(())
    }

    /// Graph with `extra` appended to the edge list.
    pub fn with_edge(&self, a: usize, b: usize) -> Result<Graph> {
        let mut edges = self.edges.clone();
        edges.push((a, b));
        Graph::new(self.n, edges)
    }

    /// Subgraph on the given edges, relabelled densely. Returns the subgraph,
    /// the map local → global vertex and the map local → global edge.
    pub fn edge_subgraph(&self, edges: &[usize]) -> (Graph, Vec<usize>, Vec<usize>) {
        let verts = self.vertices_of(edges).to_vec();
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in verts.iter().enumerate() {
            local[v] = i;
        }
        let sub_edges = edges
            .iter()
            .map(|&e| {
                let (a, b) = self.edges[e];
                (local[a], local[b])
            })
            .collect();
        let g = Graph::new(verts.len(), sub_edges).expect("subgraph of a valid graph");
        (g, verts, edges.to_vec())
    }
}

/// Output of [`Graph::blocks`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Blocks {
    pub blocks: Vec<Vec<usize>>,
    pub cut_vertices: Vec<usize>,
}

pub(crate) fn reach_masks(masks: &[u64], from: VertexSet, within: VertexSet) -> VertexSet {
    let mut reach = from.0 & within.0;
    let mut frontier = reach;
    while frontier != 0 {
        let mut next = 0u64;
        let mut f = frontier;
        while f != 0 {
            let v = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= masks[v];
        }
        next &= within.0 & !reach;
        reach |= next;
        frontier = next;
    }
    VertexSet(reach)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::new(3, vec![(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn rejects_loops_and_unknown_vertices() {
        assert_eq!(Graph::new(2, vec![(1, 1)]), Err(Error::SelfLoop(1)));
        assert_eq!(Graph::new(2, vec![(0, 2)]), Err(Error::UnknownVertex(2)));
    }

    #[test]
    fn connectivity_of_subsets() {
        let g = path3();
        assert!(g.induces_connected(VertexSet::from_iter([0, 1])));
        assert!(!g.induces_connected(VertexSet::from_iter([0, 2])));
        assert_eq!(g.components().len(), 1);
    }

    #[test]
    fn blocks_of_a_path_and_a_cycle() {
        let g = path3();
        let b = g.blocks();
        assert_eq!(b.blocks, vec![vec![0], vec![1]]);
        assert_eq!(b.cut_vertices, vec![1]);

        let c = Graph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert!(c.is_biconnected());
        let two = Graph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        assert!(two.is_biconnected());
    }

    #[test]
    fn bowtie_has_one_cut_vertex() {
        let g = Graph::new(5, vec![(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap();
        let b = g.blocks();
        assert_eq!(b.blocks.len(), 2);
        assert_eq!(b.cut_vertices, vec![2]);
    }

    #[test]
    fn simple_paths_respect_parallel_edges() {
        let g = Graph::new(3, vec![(0, 1), (0, 1), (1, 2)]).unwrap();
        assert_eq!(g.simple_paths(0, 2, 10).unwrap().len(), 2);
        assert!(g.simple_paths(0, 2, 1).is_err());
    }

    #[test]
    fn path_crossings() {
        let p = Path {
            vertices: vec![0, 1, 2],
            edges: vec![0, 1],
        };
        assert_eq!(p.crossings(VertexSet::singleton(1)), 2);
        assert_eq!(p.crossings(VertexSet::singleton(0)), 1);
    }
}
