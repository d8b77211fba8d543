//! Planar embeddings read off the decomposition tree.

use std::collections::HashMap;

use super::{sp_tree, SpNode, SpTree};
use crate::graph::{Graph, VertexSet};
use crate::{Error, Result};

/// Rotation system (counter-clockwise edge order at every vertex) with a
/// designated outer face.
#[derive(Clone, Debug)]
pub struct PlanarEmbedding {
    pub graph: Graph,
    pub rotation: Vec<Vec<usize>>,
    /// Darts `(tail, edge)` of the outer face, in walking order.
    pub outer: Vec<(usize, usize)>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Side {
    Left,
    Right,
}

impl PlanarEmbedding {
    /// Dart following `(v, e)` on its face: leave the head by the edge
    /// preceding `e` in the head's rotation.
    pub fn next_dart(&self, v: usize, e: usize) -> (usize, usize) {
        let w = self.graph.opposite(e, v);
        let rot = &self.rotation[w];
        let i = rot.iter().position(|&f| f == e).expect("edge in rotation");
        let f = rot[(i + rot.len() - 1) % rot.len()];
        (w, f)
    }

    /// All faces as dart cycles.
    pub fn faces(&self) -> Vec<Vec<(usize, usize)>> {
        let mut used: HashMap<(usize, usize), bool> = HashMap::new();
        let mut faces = Vec::new();
        for v in 0..self.graph.vertex_count() {
            for &e in &self.rotation[v] {
                if used.contains_key(&(v, e)) {
                    continue;
                }
                let mut face = Vec::new();
                let mut d = (v, e);
                while !used.contains_key(&d) {
                    used.insert(d, true);
                    face.push(d);
                    d = self.next_dart(d.0, d.1);
                }
                faces.push(face);
            }
        }
        faces
    }

    pub fn outer_vertices(&self) -> VertexSet {
        self.outer.iter().map(|&(v, _)| v).collect()
    }

    /// `V - E + F = 1 + components` over vertices that carry edges.
    pub fn satisfies_euler(&self) -> bool {
        let g = &self.graph;
        let used: Vec<VertexSet> = g
            .components()
            .into_iter()
            .filter(|c| c.iter().any(|v| g.degree(v) > 0))
            .collect();
        let v: usize = used.iter().map(|c| c.len()).sum();
        let f = self.faces().len();
        v + f == g.edge_count() + 2 * used.len()
    }
}

/// Embed a biconnected series-parallel graph so that `u` and `v` share the
/// outer face.
pub fn embed_with_outer_pair(g: &Graph, u: usize, v: usize) -> Result<PlanarEmbedding> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    let tree = sp_tree(g)?;
    let vsets = tree.node_vertices();
    let mut parent = vec![usize::MAX; tree.nodes.len()];
    for id in tree.nodes_below(tree.root) {
        if let Some((l, r)) = tree.nodes[id].children() {
            parent[l] = id;
            parent[r] = id;
        }
    }
    let heads: Vec<usize> = tree
        .nodes_below(tree.root)
        .into_iter()
        .filter(|&id| {
            matches!(tree.nodes[id], SpNode::Parallel { .. })
                && (parent[id] == usize::MAX
                    || !matches!(tree.nodes[parent[id]], SpNode::Parallel { .. }))
        })
        .collect();

    let mut orders: Option<HashMap<usize, Vec<usize>>> = None;
    if heads.is_empty() {
        orders = Some(HashMap::new());
    }
    'search: for &p in &heads {
        if !vsets[p].contains(u) || !vsets[p].contains(v) {
            continue;
        }
        let node = tree.nodes[p];
        let kids = tree.parallel_children(p);
        for &x in &kids {
            for &y in &kids {
                if x == y {
                    continue;
                }
                let mut rx = Vec::new();
                let mut ry = Vec::new();
                let mut ok = true;
                for w in [u, v] {
                    if w == node.source() || w == node.sink() {
                        continue;
                    }
                    if vsets[x].contains(w) {
                        rx.push((w, Side::Right));
                    } else if vsets[y].contains(w) {
                        ry.push((w, Side::Left));
                    } else {
                        ok = false;
                    }
                }
                if !ok {
                    continue;
                }
                let mut ord = HashMap::new();
                if place(&tree, &vsets, x, rx, &mut ord) && place(&tree, &vsets, y, ry, &mut ord) {
                    let mut list = vec![x, y];
                    list.extend(kids.iter().copied().filter(|&k| k != x && k != y));
                    ord.insert(p, list);
                    orders = Some(ord);
                    break 'search;
                }
            }
        }
    }
    let orders = orders.ok_or_else(|| {
        Error::Internal(format!("no face holds both {u} and {v}"))
    })?;
    let rotation = rotation_from(&tree, &orders);
    let mut emb = PlanarEmbedding {
        graph: g.clone(),
        rotation,
        outer: Vec::new(),
    };
    let outer = emb
        .faces()
        .into_iter()
        .find(|f| f.iter().any(|d| d.0 == u) && f.iter().any(|d| d.0 == v))
        .ok_or_else(|| Error::Internal(format!("no face holds both {u} and {v}")))?;
    emb.outer = outer;
    if !emb.satisfies_euler() {
        return Err(Error::Internal("embedding violates Euler's formula".into()));
    }
    Ok(emb)
}

/// Choose child orders below `id` so every requested vertex lies on the
/// requested boundary of the strip drawn for `id`.
fn place(
    tree: &SpTree,
    vsets: &[VertexSet],
    id: usize,
    reqs: Vec<(usize, Side)>,
    orders: &mut HashMap<usize, Vec<usize>>,
) -> bool {
    let node = tree.nodes[id];
    let reqs: Vec<(usize, Side)> = reqs
        .into_iter()
        .filter(|&(w, _)| w != node.source() && w != node.sink())
        .collect();
    if reqs.is_empty() {
        return true;
    }
    match node {
        SpNode::Leaf { .. } => false,
        SpNode::Series {
            left,
            right,
            middle,
            ..
        } => {
            let reqs: Vec<_> = reqs.into_iter().filter(|&(w, _)| w != middle).collect();
            let (l, r): (Vec<_>, Vec<_>) = reqs.into_iter().partition(|&(w, _)| vsets[left].contains(w));
            place(tree, vsets, left, l, orders) && place(tree, vsets, right, r, orders)
        }
        SpNode::Parallel { .. } => {
            let kids = tree.parallel_children(id);
            let mut first: Option<(usize, Vec<(usize, Side)>)> = None;
            let mut last: Option<(usize, Vec<(usize, Side)>)> = None;
            for (w, side) in reqs {
                let Some(&k) = kids.iter().find(|&&k| vsets[k].contains(w)) else {
                    return false;
                };
                let slot = if side == Side::Left { &mut first } else { &mut last };
                match slot {
                    Some((c, list)) if *c == k => list.push((w, side)),
                    Some(_) => return false,
                    None => *slot = Some((k, vec![(w, side)])),
                }
            }
            if let (Some((a, _)), Some((b, _))) = (&first, &last) {
                if a == b {
                    return false;
                }
            }
            let mut list = Vec::new();
            if let Some((k, r)) = first.clone() {
                if !place(tree, vsets, k, r, orders) {
                    return false;
                }
                list.push(k);
            }
            let tail = last.as_ref().map(|(k, _)| *k);
            let head = list.first().copied();
            list.extend(
                kids.iter()
                    .copied()
                    .filter(|&k| Some(k) != tail && Some(k) != head),
            );
            if let Some((k, r)) = last {
                if !place(tree, vsets, k, r, orders) {
                    return false;
                }
                list.push(k);
            }
            orders.insert(id, list);
            true
        }
    }
}

fn rotation_from(tree: &SpTree, orders: &HashMap<usize, Vec<usize>>) -> Vec<Vec<usize>> {
    let mut rot = vec![Vec::new(); tree.graph.vertex_count()];
    let (top, bottom) = strip(tree, tree.root, orders, &mut rot);
    rot[tree.source()] = top;
    let mut b = bottom;
    b.reverse();
    rot[tree.sink()] = b;
    rot
}

/// Edge lists at the source and at the sink of the strip for `id`, left to
/// right; fills rotations of series middles on the way.
fn strip(
    tree: &SpTree,
    id: usize,
    orders: &HashMap<usize, Vec<usize>>,
    rot: &mut [Vec<usize>],
) -> (Vec<usize>, Vec<usize>) {
    match tree.nodes[id] {
        SpNode::Leaf { edge, .. } => (vec![edge], vec![edge]),
        SpNode::Series {
            left,
            right,
            middle,
            ..
        } => {
            let (la, lb) = strip(tree, left, orders, rot);
            let (ra, rb) = strip(tree, right, orders, rot);
            let mut m: Vec<usize> = lb.into_iter().rev().collect();
            m.extend(ra);
            rot[middle] = m;
            (la, rb)
        }
        SpNode::Parallel { .. } => {
            let kids = orders
                .get(&id)
                .cloned()
                .unwrap_or_else(|| tree.parallel_children(id));
            let mut top = Vec::new();
            let mut bottom = Vec::new();
            for k in kids {
                let (a, b) = strip(tree, k, orders, rot);
                top.extend(a);
                bottom.extend(b);
            }
            (top, bottom)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn cycle_has_two_faces() {
        let g = fixtures::cycle(5);
        let e = embed_with_outer_pair(&g, 1, 3).unwrap();
        assert_eq!(e.faces().len(), 2);
        assert_eq!(e.outer_vertices(), g.all_vertices());
    }

    #[test]
    fn k23_hubs_on_outer_face() {
        let g = fixtures::k2m(3);
        let e = embed_with_outer_pair(&g, 0, 1).unwrap();
        assert_eq!(e.faces().len(), 3);
        let outer = e.outer_vertices();
        assert!(outer.contains(0) && outer.contains(1));
        assert_eq!(outer.len(), 4);
    }

    #[test]
    fn every_vertex_pair_of_k24_shares_a_face() {
        let g = fixtures::k2m(4);
        for u in 0..6 {
            for v in 0..6 {
                let e = embed_with_outer_pair(&g, u, v).unwrap();
                let outer = e.outer_vertices();
                assert!(outer.contains(u) && outer.contains(v));
                assert!(e.satisfies_euler());
            }
        }
    }

    #[test]
    fn single_edge() {
        let g = Graph::new(2, vec![(0, 1)]).unwrap();
        let e = embed_with_outer_pair(&g, 0, 1).unwrap();
        assert_eq!(e.faces().len(), 1);
    }
}
