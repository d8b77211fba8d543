//! Noncrossing path decompositions of a single commodity and the chain of
//! cycles formed by its outermost paths.

use num_traits::{Signed, Zero};

use crate::graph::{Graph, Path, VertexSet};
use crate::spgraph::embed_with_outer_pair;
use crate::{Error, Rational, Result};

/// Signed flow per edge, positive in the `a → b` direction of `(a, b)`.
pub(crate) fn net_of(g: &Graph, paths: &[(Path, Rational)]) -> Vec<Rational> {
    let mut net = vec![Rational::zero(); g.edge_count()];
    for (p, amount) in paths {
        for (w, &e) in p.vertices.windows(2).zip(&p.edges) {
            if g.endpoints(e).0 == w[0] {
                net[e] += amount;
            } else {
                net[e] -= amount;
            }
        }
    }
    net
}

fn out_flow(g: &Graph, net: &[Rational], x: usize, e: usize) -> Rational {
    if g.endpoints(e).0 == x {
        net[e].clone()
    } else {
        -net[e].clone()
    }
}

fn push_out(g: &Graph, net: &mut [Rational], x: usize, e: usize, amount: &Rational) {
    if g.endpoints(e).0 == x {
        net[e] -= amount;
    } else {
        net[e] += amount;
    }
}

/// Removes directed cycles from the support of `net`.
pub(crate) fn cancel_cycles(g: &Graph, net: &mut [Rational]) {
    let n = g.vertex_count();
    'again: loop {
        // colour-based depth-first search for a directed cycle
        let mut state = vec![0u8; n];
        for s in 0..n {
            if state[s] != 0 {
                continue;
            }
            let mut stack: Vec<(usize, usize)> = vec![(s, 0)];
            let mut via: Vec<usize> = Vec::new();
            state[s] = 1;
            while let Some(&mut (x, ref mut k)) = stack.last_mut() {
                let inc = g.incident(x);
                if *k == inc.len() {
                    state[x] = 2;
                    stack.pop();
                    via.pop();
                    continue;
                }
                let (y, e) = inc[*k];
                *k += 1;
                if !out_flow(g, net, x, e).is_positive() {
                    continue;
                }
                if state[y] == 1 {
                    // cycle: y ... x -> y
                    let start = stack.iter().position(|&(z, _)| z == y).expect("on stack");
                    let mut darts: Vec<(usize, usize)> = (start..stack.len() - 1)
                        .map(|i| (stack[i].0, via[i]))
                        .collect();
                    darts.push((x, e));
                    let amount = darts
                        .iter()
                        .map(|&(z, f)| out_flow(g, net, z, f))
                        .min()
                        .expect("cycle is nonempty");
                    for (z, f) in darts {
                        push_out(g, net, z, f, &amount);
                    }
                    continue 'again;
                }
                if state[y] == 0 {
                    state[y] = 1;
                    via.push(e);
                    stack.push((y, 0));
                }
            }
        }
        return;
    }
}

/// Vertices other than `u` and `v` whose removal separates them.
fn separators(g: &Graph, u: usize, v: usize) -> VertexSet {
    let all = g.all_vertices();
    (0..g.vertex_count())
        .filter(|&w| w != u && w != v)
        .filter(|&w| {
            !g.reach_within(VertexSet::singleton(u), all.difference(VertexSet::singleton(w)))
                .contains(v)
        })
        .collect()
}

/// Rotation of a block with a virtual edge `virt` drawn through the outer
/// face at the two terminals.
struct Strip {
    graph: Graph,
    rotation: Vec<Vec<usize>>,
    virt: usize,
    source: usize,
    sink: usize,
}

impl Strip {
    fn new(g: &Graph, source: usize, sink: usize) -> Result<Self> {
        let virt = g.edge_count();
        let mut rotation: Vec<Vec<usize>>;
        if g.vertex_count() == 2 {
            rotation = (0..2).map(|x| g.incident(x).iter().map(|&(_, e)| e).collect()).collect();
            for r in rotation.iter_mut() {
                r.push(virt);
            }
        } else {
            let emb = embed_with_outer_pair(g, source, sink)?;
            rotation = emb.rotation.clone();
            for x in [source, sink] {
                let &(_, e) = emb
                    .outer
                    .iter()
                    .find(|d| d.0 == x)
                    .ok_or_else(|| Error::Internal("terminal off the outer face".into()))?;
                let r = &mut rotation[x];
                let i = r.iter().position(|&f| f == e).expect("outer dart in rotation");
                r.insert(i + 1, virt);
            }
        }
        Ok(Strip { graph: g.clone(), rotation, virt, source, sink })
    }

    /// Outgoing support edge at `x` met first when turning from `e_in`
    /// against the rotation.
    fn extreme_out(&self, net: &[Rational], x: usize, e_in: usize) -> Option<usize> {
        let r = &self.rotation[x];
        let i = r.iter().position(|&f| f == e_in)?;
        (1..r.len())
            .map(|k| r[(i + r.len() - k) % r.len()])
            .find(|&f| f != self.virt && out_flow(&self.graph, net, x, f).is_positive())
    }

    /// Extreme-first decomposition of an acyclic source → sink flow.
    fn decompose(&self, net: &[Rational]) -> Result<Vec<(Path, Rational)>> {
        let g = &self.graph;
        let mut rest = net.to_vec();
        let mut out = Vec::new();
        while let Some(first) = self.extreme_out(&rest, self.source, self.virt) {
            let mut p = Path { vertices: vec![self.source], edges: vec![first] };
            let mut x = g.opposite(first, self.source);
            p.vertices.push(x);
            while x != self.sink {
                let e_in = *p.edges.last().expect("nonempty");
                let f = self
                    .extreme_out(&rest, x, e_in)
                    .ok_or_else(|| Error::Internal("flow is not conserved".into()))?;
                x = g.opposite(f, x);
                if p.vertices.contains(&x) {
                    return Err(Error::Internal("support has a directed cycle".into()));
                }
                p.edges.push(f);
                p.vertices.push(x);
            }
            let amount = p
                .vertices
                .windows(2)
                .zip(&p.edges)
                .map(|(w, &e)| out_flow(g, &rest, w[0], e))
                .min()
                .expect("path has an edge");
            for (w, &e) in p.vertices.windows(2).zip(&p.edges) {
                push_out(g, &mut rest, w[0], e, &amount);
            }
            out.push((p, amount));
        }
        Ok(out)
    }

    /// Side (`true` for the side preferred by the extreme walk) of every
    /// vertex off `p`, `None` on `p`.
    fn sides(&self, p: &Path) -> Vec<Option<bool>> {
        let g = &self.graph;
        let on: VertexSet = p.vertex_set();
        let mut side = vec![None; g.vertex_count()];
        for (i, &x) in p.vertices.iter().enumerate() {
            let e_in = if i == 0 { self.virt } else { p.edges[i - 1] };
            let e_out = if i + 1 == p.vertices.len() { self.virt } else { p.edges[i] };
            let r = &self.rotation[x];
            let start = r.iter().position(|&f| f == e_in).expect("in rotation");
            let mut preferred = true;
            for k in 1..r.len() {
                let f = r[(start + r.len() - k) % r.len()];
                if f == e_out {
                    preferred = false;
                    continue;
                }
                if f == self.virt {
                    continue;
                }
                let y = g.opposite(f, x);
                if on.contains(y) || side[y].is_some() {
                    continue;
                }
                let comp = g.reach_within(VertexSet::singleton(y), g.all_vertices().difference(on));
                for z in comp.iter() {
                    side[z] = Some(preferred);
                }
            }
        }
        side
    }

    fn crosses(&self, p: &Path, q: &Path) -> bool {
        let side = self.sides(p);
        let seen: Vec<bool> = q.vertices.iter().filter_map(|&x| side[x]).collect();
        seen.contains(&true) && seen.contains(&false)
    }
}

/// The flow of one commodity as paths ordered from one outer side to the
/// other, no two of which cross.
pub fn noncrossing_decomposition(
    g: &Graph,
    u: usize,
    v: usize,
    flow: &[(Path, Rational)],
) -> Result<Vec<(Path, Rational)>> {
    let mut net = net_of(g, flow);
    cancel_cycles(g, &mut net);
    let total: Rational = g.incident(u).iter().map(|&(_, e)| out_flow(g, &net, u, e)).sum();
    if !total.is_positive() {
        return Err(Error::Precondition("the demand carries no flow".into()));
    }
    // one support path fixes the order of the separating vertices
    let mut walk = vec![u];
    let mut x = u;
    while x != v {
        let &(y, _) = g
            .incident(x)
            .iter()
            .find(|&&(_, e)| out_flow(g, &net, x, e).is_positive())
            .ok_or_else(|| Error::Internal("flow is not conserved".into()))?;
        walk.push(y);
        x = y;
    }
    let seps = separators(g, u, v);
    let mut stops: Vec<usize> = walk.iter().copied().filter(|&w| seps.contains(w)).collect();
    stops.insert(0, u);
    stops.push(v);

    let blocks = g.blocks().blocks;
    let mut pieces: Vec<Vec<(Path, Rational)>> = Vec::new();
    for pair in stops.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let i = walk.iter().position(|&w| w == a).expect("stop on walk");
        let e0 = g
            .incident(a)
            .iter()
            .find(|&&(y, e)| y == walk[i + 1] && out_flow(g, &net, a, e).is_positive())
            .map(|&(_, e)| e)
            .expect("walk edge");
        let block = blocks.iter().find(|b| b.contains(&e0)).expect("edge in a block");
        let (lg, verts, edges) = g.edge_subgraph(block);
        let local = |x: usize| verts.iter().position(|&y| y == x).expect("block vertex");
        let lnet: Vec<Rational> = edges.iter().map(|&e| net[e].clone()).collect();
        let strip = Strip::new(&lg, local(a), local(b))?;
        let paths = strip.decompose(&lnet)?;
        for i in 0..paths.len() {
            for j in i + 1..paths.len() {
                if strip.crosses(&paths[i].0, &paths[j].0) || strip.crosses(&paths[j].0, &paths[i].0) {
                    return Err(Error::Internal("decomposition paths cross".into()));
                }
            }
        }
        pieces.push(
            paths
                .into_iter()
                .map(|(p, amount)| {
                    let global = Path {
                        vertices: p.vertices.iter().map(|&x| verts[x]).collect(),
                        edges: p.edges.iter().map(|&e| edges[e]).collect(),
                    };
                    (global, amount)
                })
                .collect(),
        );
    }
    let merged = sweep(&pieces);
    let (first, last) = (&merged[0].0, &merged[merged.len() - 1].0);
    let common = first.vertex_set().intersection(last.vertex_set());
    if merged.iter().any(|(p, _)| !common.is_subset(p.vertex_set())) {
        return Err(Error::Internal("outer paths share a vertex other paths miss".into()));
    }
    Ok(merged)
}

/// Concatenates per-segment decompositions of equal value, pairing them by
/// position along the common interval [0, total].
fn sweep(pieces: &[Vec<(Path, Rational)>]) -> Vec<(Path, Rational)> {
    let mut idx = vec![0usize; pieces.len()];
    let mut left: Vec<Rational> = pieces.iter().map(|p| p[0].1.clone()).collect();
    let mut out = Vec::new();
    while idx[0] < pieces[0].len() {
        let amount = left.iter().min().expect("some segment").clone();
        let mut path = Path::trivial(pieces[0][idx[0]].0.start());
        for (j, piece) in pieces.iter().enumerate() {
            let p = &piece[idx[j]].0;
            path.vertices.extend(p.vertices[1..].iter().copied());
            path.edges.extend(p.edges.iter().copied());
        }
        for j in 0..pieces.len() {
            left[j] -= &amount;
            if left[j].is_zero() {
                idx[j] += 1;
                if idx[j] < pieces[j].len() {
                    left[j] = pieces[j][idx[j]].1.clone();
                }
            }
        }
        out.push((path, amount));
    }
    out
}

/// Segment of the union of the first and last decomposition paths between
/// consecutive common vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainSegment {
    /// Both paths use the same edge.
    Connector { a: usize, b: usize, edge: usize },
    /// The paths split at `a` and meet again at `b`.
    Cycle { a: usize, b: usize, first: Path, last: Path },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleChain {
    pub paths: Vec<(Path, Rational)>,
    /// Vertices on both outer paths, from `u` to `v`.
    pub junctions: Vec<usize>,
    pub segments: Vec<ChainSegment>,
}

impl CycleChain {
    pub fn from_paths(paths: Vec<(Path, Rational)>) -> Result<Self> {
        let first = paths.first().ok_or_else(|| Error::Precondition("no paths".into()))?.0.clone();
        let last = paths[paths.len() - 1].0.clone();
        let common = first.vertex_set().intersection(last.vertex_set());
        let junctions: Vec<usize> = first.vertices.iter().copied().filter(|&x| common.contains(x)).collect();
        let pos_last: Vec<usize> = junctions
            .iter()
            .map(|&x| last.vertices.iter().position(|&y| y == x).expect("common"))
            .collect();
        if pos_last.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Internal("outer paths meet in different orders".into()));
        }
        let pos_first: Vec<usize> = junctions
            .iter()
            .map(|&x| first.vertices.iter().position(|&y| y == x).expect("common"))
            .collect();
        let sub = |p: &Path, i: usize, j: usize| Path {
            vertices: p.vertices[i..=j].to_vec(),
            edges: p.edges[i..j].to_vec(),
        };
        let mut segments = Vec::new();
        for k in 0..junctions.len() - 1 {
            let (a, b) = (junctions[k], junctions[k + 1]);
            let f = sub(&first, pos_first[k], pos_first[k + 1]);
            let l = sub(&last, pos_last[k], pos_last[k + 1]);
            if f.edges == l.edges && f.edges.len() == 1 {
                segments.push(ChainSegment::Connector { a, b, edge: f.edges[0] });
            } else {
                segments.push(ChainSegment::Cycle { a, b, first: f, last: l });
            }
        }
        Ok(CycleChain { paths, junctions, segments })
    }

    pub fn cycles(&self) -> impl Iterator<Item = (usize, usize, &Path, &Path)> {
        self.segments.iter().filter_map(|s| match s {
            ChainSegment::Cycle { a, b, first, last } => Some((*a, *b, first, last)),
            _ => None,
        })
    }
}

/// `w` on cycle `cycle` reaches `v` without meeting the cycle again.
pub fn linked_to(g: &Graph, cycle: VertexSet, w: usize, v: usize) -> bool {
    let within = g.all_vertices().difference(cycle).with(w);
    g.reach_within(VertexSet::singleton(w), within).contains(v)
}

/// Picks for every cycle the side whose interior has no vertex linked to
/// `v`, preferring the first path's side, and concatenates the result.
pub fn choose_sides(g: &Graph, chain: &CycleChain, v: usize) -> Result<Path> {
    let mut path = Path::trivial(chain.junctions[0]);
    for seg in &chain.segments {
        let piece = match seg {
            ChainSegment::Connector { b, edge, .. } => Path { vertices: vec![0, *b], edges: vec![*edge] },
            ChainSegment::Cycle { b, first, last, .. } => {
                let cycle = first.vertex_set().union(last.vertex_set());
                let clean = |p: &Path| {
                    *b == v
                        || p.vertices[1..p.vertices.len() - 1]
                            .iter()
                            .all(|&w| !linked_to(g, cycle, w, v))
                };
                if clean(first) {
                    first.clone()
                } else if clean(last) {
                    last.clone()
                } else {
                    return Err(Error::Internal("both sides of a cycle are linked to the sink".into()));
                }
            }
        };
        path.vertices.extend(piece.vertices[1..].iter().copied());
        path.edges.extend(piece.edges);
    }
    Ok(path)
}

/// Whether `q` has vertices on both sides of `p` in an embedding of the
/// block path with the endpoints of `p` outside. Both must join the same
/// endpoints.
pub fn paths_cross(g: &Graph, p: &Path, q: &Path) -> Result<bool> {
    let (u, v) = (p.start(), p.end());
    let seps = separators(g, u, v);
    let blocks = g.blocks().blocks;
    // cut both paths at the common separators and compare block by block
    let cut = |path: &Path| -> Vec<Path> {
        let mut out = Vec::new();
        let mut cur = Path::trivial(u);
        for (i, &e) in path.edges.iter().enumerate() {
            let y = path.vertices[i + 1];
            cur.vertices.push(y);
            cur.edges.push(e);
            if seps.contains(y) || y == v {
                out.push(std::mem::replace(&mut cur, Path::trivial(y)));
            }
        }
        out
    };
    for (a, b) in cut(p).iter().zip(cut(q).iter()) {
        let block = blocks.iter().find(|bl| bl.contains(&a.edges[0])).expect("edge in a block");
        let (lg, verts, edges) = g.edge_subgraph(block);
        let local = |x: usize| verts.iter().position(|&y| y == x).expect("block vertex");
        let to_local = |p: &Path| Path {
            vertices: p.vertices.iter().map(|&x| local(x)).collect(),
            edges: p.edges.iter().map(|&e| edges.iter().position(|&f| f == e).expect("block edge")).collect(),
        };
        let strip = Strip::new(&lg, local(a.start()), local(a.end()))?;
        if strip.crosses(&to_local(a), &to_local(b)) {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(vertices: &[usize], edges: &[usize]) -> Path {
        Path { vertices: vertices.to_vec(), edges: edges.to_vec() }
    }

    /// Triangles 0-2-3 and 3-4-1 drawn on opposite sides of 0-3-1, closed
    /// by an arc 0-1 above everything.
    fn bowtie() -> Strip {
        let graph = Graph::new(5, vec![(0, 2), (2, 3), (0, 3), (3, 4), (4, 1), (3, 1), (0, 1)]).unwrap();
        Strip {
            graph,
            rotation: vec![vec![2, 0, 6, 7], vec![6, 5, 4, 7], vec![0, 1], vec![5, 1, 2, 3], vec![4, 3]],
            virt: 7,
            source: 0,
            sink: 1,
        }
    }

    #[test]
    fn path_through_both_triangles_crosses_the_middle() {
        let s = bowtie();
        let mid = path(&[0, 3, 1], &[2, 5]);
        assert!(s.crosses(&mid, &path(&[0, 2, 3, 4, 1], &[0, 1, 3, 4])));
        assert!(!s.crosses(&mid, &path(&[0, 2, 3, 1], &[0, 1, 5])));
        assert!(!s.crosses(&mid, &path(&[0, 1], &[6])));
    }

    #[test]
    fn extreme_first_paths_do_not_cross() {
        let s = bowtie();
        let g = &s.graph;
        let flow = vec![
            (path(&[0, 2, 3, 4, 1], &[0, 1, 3, 4]), Rational::from_integer(1.into())),
            (path(&[0, 3, 1], &[2, 5]), Rational::from_integer(1.into())),
            (path(&[0, 1], &[6]), Rational::from_integer(1.into())),
        ];
        let net = net_of(g, &flow);
        let ps = s.decompose(&net).unwrap();
        let total: Rational = ps.iter().map(|(_, x)| x.clone()).sum();
        assert_eq!(total, Rational::from_integer(3.into()));
        for (a, _) in &ps {
            for (b, _) in &ps {
                assert!(!s.crosses(a, b), "{:?} crosses {:?}", b.vertices, a.vertices);
            }
        }
    }

    #[test]
    fn directed_cycles_cancel() {
        let g = Graph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        let mut net = vec![Rational::from_integer(2.into()), Rational::from_integer(1.into()), Rational::from_integer(1.into())];
        cancel_cycles(&g, &mut net);
        assert_eq!(net, vec![Rational::from_integer(1.into()), Rational::zero(), Rational::zero()]);
    }
}
