//! Simple paths through a prescribed vertex or edge in a biconnected graph.

use std::collections::VecDeque;

use crate::graph::{Graph, Path};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Via {
    Vertex(usize),
    Edge(usize),
}

/// A simple `s`–`t` path through `via`, glued from two disjoint paths that
/// leave `via` towards `s` and towards `t`.
pub fn path_containing(g: &Graph, s: usize, t: usize, via: Via) -> Result<Path> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    if s == t {
        return Err(Error::Precondition("path endpoints must differ".into()));
    }
    if let Some(v) = g.cut_vertex() {
        return Err(Error::NotBiconnected(v));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    match via {
        Via::Vertex(u) => {
            g.check_vertex(u)?;
            if u == s || u == t {
                return Err(Error::Precondition("via vertex must differ from s and t".into()));
            }
            let arms = two_arms(g, u, s, t)?;
            Ok(glue(arms))
        }
        Via::Edge(e) => {
            if e >= g.edge_count() {
                return Err(Error::MissingEdge { what: "supply", edge: e });
            }
            let n = g.vertex_count();
            let (a, b) = g.endpoints(e);
            let mut edges = g.edges().to_vec();
            edges[e] = (a, n);
            edges.push((n, b));
            let h = Graph::new(n + 1, edges)?;
            let p = glue(two_arms(&h, n, s, t)?);
            let mut vertices = Vec::new();
            let mut out_edges = Vec::new();
            for (i, &v) in p.vertices.iter().enumerate() {
                if v != n {
                    vertices.push(v);
                }
                if i < p.edges.len() {
                    let f = p.edges[i];
                    if f == g.edge_count() {
                        continue;
                    }
                    out_edges.push(f);
                }
            }
            Ok(Path {
                vertices,
                edges: out_edges,
            })
        }
    }
}

/// Two internally disjoint paths from `u`, one ending at `s` and one at `t`.
fn two_arms(g: &Graph, u: usize, s: usize, t: usize) -> Result<(Path, Path)> {
    let n = g.vertex_count();
    // node 2x = x_in, 2x+1 = x_out, 2n = super sink
    let sink = 2 * n;
    let mut net = Network::new(2 * n + 1);
    // no arc into u_out: flow may leave u but never return to it
    for x in (0..n).filter(|&x| x != u) {
        net.add(2 * x, 2 * x + 1, 1, usize::MAX);
    }
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        net.add(2 * a + 1, 2 * b, 1, e);
        net.add(2 * b + 1, 2 * a, 1, e);
    }
    net.add(2 * s + 1, sink, 1, usize::MAX);
    net.add(2 * t + 1, sink, 1, usize::MAX);
    if net.max_flow(2 * u + 1, sink, 2) < 2 {
        return Err(Error::Internal("biconnected graph lacks two disjoint arms".into()));
    }
    let mut arms = Vec::new();
    for (first, e) in net.flow_out(2 * u + 1) {
        let mut vertices = vec![u];
        let mut edges = vec![e];
        let mut node = first;
        loop {
            let x = node / 2;
            vertices.push(x);
            if x == s || x == t {
                break;
            }
            let (next, f) = net.flow_out(2 * x + 1)[0];
            edges.push(f);
            node = next;
        }
        arms.push(Path { vertices, edges });
    }
    let (a, b) = (arms.remove(0), arms.remove(0));
    Ok(if a.end() == s { (a, b) } else { (b, a) })
}

fn glue((to_s, to_t): (Path, Path)) -> Path {
    let mut p = to_s.reversed();
    p.vertices.extend_from_slice(&to_t.vertices[1..]);
    p.edges.extend_from_slice(&to_t.edges);
    p
}

struct Arc {
    to: usize,
    cap: i32,
    tag: usize,
}

struct Network {
    arcs: Vec<Arc>,
    adj: Vec<Vec<usize>>,
}

impl Network {
    fn new(nodes: usize) -> Self {
        Network {
            arcs: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    fn add(&mut self, a: usize, b: usize, cap: i32, tag: usize) {
        self.adj[a].push(self.arcs.len());
        self.arcs.push(Arc { to: b, cap, tag });
        self.adj[b].push(self.arcs.len());
        self.arcs.push(Arc { to: a, cap: 0, tag });
    }

    fn max_flow(&mut self, src: usize, dst: usize, want: i32) -> i32 {
        let mut flow = 0;
        while flow < want {
            let mut prev = vec![usize::MAX; self.adj.len()];
            let mut queue = VecDeque::from([src]);
            let mut seen = vec![false; self.adj.len()];
            seen[src] = true;
            while let Some(x) = queue.pop_front() {
                for &a in &self.adj[x] {
                    let y = self.arcs[a].to;
                    if self.arcs[a].cap > 0 && !seen[y] {
                        seen[y] = true;
                        prev[y] = a;
                        queue.push_back(y);
                    }
                }
            }
            if !seen[dst] {
                break;
            }
            let mut y = dst;
            while y != src {
                let a = prev[y];
                self.arcs[a].cap -= 1;
                self.arcs[a ^ 1].cap += 1;
                y = self.arcs[a ^ 1].to;
            }
            flow += 1;
        }
        flow
    }

    fn flow_on(&self, a: usize) -> i32 {
        // forward arcs are even; flow equals the residual on the reverse arc
        self.arcs[a ^ 1].cap
    }

    /// Flow-carrying forward arcs out of `x` that correspond to graph edges.
    fn flow_out(&self, x: usize) -> Vec<(usize, usize)> {
        self.adj[x]
            .iter()
            .copied()
            .filter(|&i| i % 2 == 0 && self.arcs[i].tag != usize::MAX && self.flow_on(i) > 0)
            .map(|i| (self.arcs[i].to, self.arcs[i].tag))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn triangle_through_middle() {
        let g = fixtures::cycle(3);
        let p = path_containing(&g, 0, 2, Via::Vertex(1)).unwrap();
        assert_eq!(p.vertices, vec![0, 1, 2]);
    }

    #[test]
    fn k23_through_rim() {
        let g = fixtures::k2m(3);
        let p = path_containing(&g, 0, 1, Via::Vertex(3)).unwrap();
        assert_eq!(p.vertices, vec![0, 3, 1]);
    }

    #[test]
    fn six_cycle_takes_the_side_with_via() {
        let g = fixtures::cycle(6);
        for via in [1, 2, 4, 5] {
            let p = path_containing(&g, 0, 3, Via::Vertex(via)).unwrap();
            assert_eq!(p.edges.len(), 3);
            assert!(p.vertices.contains(&via));
        }
    }

    #[test]
    fn through_an_edge() {
        let g = fixtures::k2m(3);
        // edge 3 is (rim 1, v)
        let p = path_containing(&g, 0, 2, Via::Edge(3)).unwrap();
        assert!(p.edges.contains(&3));
        assert_eq!(p.start(), 0);
        assert_eq!(p.end(), 2);
        let mut seen = p.vertices.clone();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len(), p.vertices.len());
    }

    #[test]
    fn rejects_cut_vertices() {
        let g = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            path_containing(&g, 0, 2, Via::Vertex(1)).unwrap_err(),
            Error::NotBiconnected(1)
        );
    }
}
