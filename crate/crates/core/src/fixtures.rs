//! Standard pairs and instances, plus random series-parallel generators.

use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{Graph, VertexSet};
use crate::instance::{Instance, Pair};
use crate::{q, Rational};

pub const SPINDLE_U: usize = 0;
pub const SPINDLE_V: usize = 1;

pub const BADK4_U1: usize = 0;
pub const BADK4_U2: usize = 1;
pub const BADK4_U3: usize = 2;
pub const BADK4_V1: usize = 3;
pub const BADK4_V2: usize = 4;
pub const BADK4_V3: usize = 5;

/// Rim vertex `i` (zero based) of a spindle.
pub fn spindle_rim(i: usize) -> usize {
    2 + i
}

/// `K_{2,m}` with hubs 0 and 1 and rim vertices `2..m+2`. Edge `2i` is
/// `(0, rim i)` and edge `2i+1` is `(rim i, 1)`.
pub fn k2m(m: usize) -> Graph {
    let mut edges = Vec::with_capacity(2 * m);
    for i in 0..m {
        edges.push((SPINDLE_U, spindle_rim(i)));
        edges.push((spindle_rim(i), SPINDLE_V));
    }
    Graph::new(m + 2, edges).expect("K2m is valid")
}

/// The p-spindle: `K_{2,p}` supply, a demand cycle through the rim in
/// order, then the hub demand as the last demand edge.
pub fn spindle(p: usize) -> Pair {
    assert!(p >= 2, "a spindle needs at least two rim vertices");
    let mut demands = Vec::with_capacity(p + 1);
    for i in 0..p {
        demands.push((spindle_rim(i), spindle_rim((i + 1) % p)));
    }
    demands.push((SPINDLE_U, SPINDLE_V));
    Pair {
        supply: k2m(p),
        demand: Graph::new(p + 2, demands).expect("spindle demands are valid"),
    }
}

/// Even 4-spindle with capacity 2 everywhere, unit cycle demands and the
/// given hub demand. Hub demand 2 gives an Eulerian instance, 1 does not.
pub fn even_spindle_instance(hub_demand: i64) -> Instance {
    let pair = spindle(4);
    let mut demands = vec![q(1); 4];
    demands.push(q(hub_demand));
    pair.with_weights(vec![q(2); 8], demands)
        .expect("spindle weights are valid")
}

/// The planar pair whose supply graph contains K4: Eulerian, satisfies the
/// cut condition, yet is not routable.
pub fn bad_k4() -> Instance {
    let supply = Graph::new(
        6,
        vec![
            (BADK4_U1, BADK4_V1),
            (BADK4_U1, BADK4_V3),
            (BADK4_U3, BADK4_V1),
            (BADK4_U3, BADK4_V3),
            (BADK4_U1, BADK4_U2),
            (BADK4_U2, BADK4_U3),
            (BADK4_V1, BADK4_V2),
            (BADK4_V2, BADK4_V3),
        ],
    )
    .expect("bad K4 supply is valid");
    let demand = Graph::new(
        6,
        vec![(BADK4_U1, BADK4_U3), (BADK4_V1, BADK4_V3), (BADK4_U2, BADK4_V2)],
    )
    .expect("bad K4 demand is valid");
    Instance::new(supply, demand, vec![q(1); 8], vec![q(1), q(1), q(2)])
        .expect("bad K4 weights are valid")
}

/// Path `0 - 1 - ... - n-1` with the given capacities and a demand on each
/// supply edge's endpoints.
pub fn path_instance(capacities: &[i64], demands: &[i64]) -> Instance {
    let n = capacities.len() + 1;
    let edges: Vec<_> = (0..capacities.len()).map(|i| (i, i + 1)).collect();
    let supply = Graph::new(n, edges.clone()).expect("path is valid");
    let demand = Graph::new(n, edges).expect("path is valid");
    Instance::new(
        supply,
        demand,
        capacities.iter().map(|&c| q(c)).collect(),
        demands.iter().map(|&d| q(d)).collect(),
    )
    .expect("path weights are valid")
}

pub fn k4() -> Graph {
    Graph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).expect("K4 is valid")
}

pub fn cycle(n: usize) -> Graph {
    Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).expect("cycle is valid")
}

/// A random biconnected series-parallel multigraph on `n >= 2` vertices,
/// grown from a double edge by subdivisions and parallel ears. Vertex
/// labels are shuffled.
pub fn random_sp_graph<R: Rng>(rng: &mut R, n: usize) -> Graph {
    assert!(n >= 2, "need at least two vertices");
    let mut edges = vec![(0usize, 1usize), (0, 1)];
    let mut count = 2;
    while count < n {
        let e = rng.gen_range(0..edges.len());
        let (a, b) = edges[e];
        let w = count;
        count += 1;
        if rng.gen_bool(0.5) {
            edges[e] = (a, w);
            edges.push((w, b));
        } else {
            edges.push((a, w));
            edges.push((w, b));
        }
    }
    // occasional extra parallel edge
    if rng.gen_bool(0.2) {
        let e = rng.gen_range(0..edges.len());
        edges.push(edges[e]);
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let edges = edges.into_iter().map(|(a, b)| (perm[a], perm[b])).collect();
    Graph::new(n, edges).expect("generated graph is valid")
}

/// Random pair: series-parallel supply on `n` vertices and `demands` random
/// demand edges between distinct vertices.
pub fn random_sp_pair<R: Rng>(rng: &mut R, n: usize, demands: usize) -> Pair {
    let supply = random_sp_graph(rng, n);
    let mut d = Vec::with_capacity(demands);
    for _ in 0..demands {
        let a = rng.gen_range(0..n);
        let mut b = rng.gen_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        d.push((a, b));
    }
    Pair {
        supply,
        demand: Graph::new(n, d).expect("demands are valid"),
    }
}

/// Random instance with integral capacities in `1..=max_cap` and demands in
/// `1..=max_demand`.
pub fn random_sp_instance<R: Rng>(
    rng: &mut R,
    n: usize,
    demands: usize,
    max_cap: i64,
    max_demand: i64,
) -> Instance {
    let pair = random_sp_pair(rng, n, demands);
    let caps = (0..pair.supply.edge_count())
        .map(|_| q(rng.gen_range(1..=max_cap)))
        .collect();
    let ds = (0..pair.demand.edge_count())
        .map(|_| q(rng.gen_range(1..=max_demand)))
        .collect();
    pair.with_weights(caps, ds).expect("random weights are valid")
}

/// Total incident weight parity per vertex; `None` when a weight is not
/// an integer.
pub fn odd_vertices(inst: &Instance) -> Option<VertexSet> {
    if !inst.is_integral() {
        return None;
    }
    let mut odd = VertexSet::EMPTY;
    for v in 0..inst.vertex_count() {
        let w = inst.vertex_weight(v);
        let parity = (w.to_integer() % 2u32).to_u32().unwrap_or(0);
        if parity == 1 {
            odd.insert(v);
        }
    }
    Some(odd)
}

/// Make an integral instance Eulerian by adding one unit of capacity along
/// a supply path between consecutive odd vertices of each component. Adding
/// capacity never breaks the cut condition.
pub fn eulerize(inst: &Instance) -> Instance {
    let mut out = inst.clone();
    let odd = odd_vertices(inst).expect("eulerize needs integral weights");
    let all = inst.supply.all_vertices();
    for comp in inst.supply.components() {
        let vs = odd.intersection(comp).to_vec();
        for pair in vs.chunks(2) {
            if let [a, b] = *pair {
                let path = inst.supply.bfs_path(a, b, all).expect("same component");
                for e in path.edges {
                    out.capacities[e] += Rational::one();
                }
            }
        }
    }
    out
}

/// Number of nonzero demand edges.
pub fn active_demands(inst: &Instance) -> usize {
    inst.demands.iter().filter(|d| !d.is_zero()).count()
}
