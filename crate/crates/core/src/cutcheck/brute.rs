//! Exhaustive enumeration of central cuts.

use super::scaled::Scaled;
use crate::graph::{reach_masks, Graph, VertexSet};
use crate::instance::Instance;
use crate::{Error, Result};

pub const BRUTE_LIMIT: usize = 20;

/// Sides containing vertex 0 of every central cut, in increasing mask order.
pub fn central_sides(g: &Graph) -> Result<Vec<VertexSet>> {
    let n = g.vertex_count();
    if n > BRUTE_LIMIT {
        return Err(Error::SizeGuard {
            what: "central cut enumeration vertices",
            actual: n,
            limit: BRUTE_LIMIT,
        });
    }
    let masks = g.neighbor_masks();
    let full = VertexSet::full(n);
    let mut out = Vec::new();
    if n < 2 {
        return Ok(out);
    }
    for rest in 0u64..(1u64 << (n - 1)) {
        let side = VertexSet((rest << 1) | 1);
        if side == full {
            continue;
        }
        let other = full.difference(side);
        let first = VertexSet::singleton(0);
        if reach_masks(&masks, first, side) != side {
            continue;
        }
        let o = VertexSet::singleton(other.first().expect("nonempty"));
        if reach_masks(&masks, o, other) != other {
            continue;
        }
        out.push(side);
    }
    Ok(out)
}

/// Signed edge list: capacities positive, demands negative.
pub(crate) fn weighted_edges(inst: &Instance, w: &Scaled) -> Vec<(u64, u64, i128)> {
    let mut out = Vec::new();
    for (e, &(a, b)) in inst.supply.edges().iter().enumerate() {
        if w.caps[e] != 0 {
            out.push((1u64 << a, 1u64 << b, w.caps[e]));
        }
    }
    for (i, &(a, b)) in inst.demand.edges().iter().enumerate() {
        if w.dems[i] != 0 {
            out.push((1u64 << a, 1u64 << b, -w.dems[i]));
        }
    }
    out
}

pub(crate) fn surplus_of(edges: &[(u64, u64, i128)], side: VertexSet) -> i128 {
    let s = side.0;
    edges
        .iter()
        .filter(|(a, b, _)| (s & a == 0) != (s & b == 0))
        .map(|e| e.2)
        .sum()
}

/// Minimum surplus over central cuts, the smallest minimizing side in
/// sorted-list order, and the tight sides (up to `cap`).
pub(crate) fn scan(
    inst: &Instance,
    w: &Scaled,
    cap: usize,
) -> Result<Option<(i128, VertexSet, Vec<VertexSet>)>> {
    let sides = central_sides(&inst.supply)?;
    let edges = weighted_edges(inst, w);
    let mut best: Option<(i128, VertexSet)> = None;
    let mut tight = Vec::new();
    for side in sides {
        let s = surplus_of(&edges, side);
        if s == 0 && tight.len() < cap {
            tight.push(side);
        }
        let better = match &best {
            None => true,
            Some((v, c)) => s < *v || (s == *v && side.to_vec() < c.to_vec()),
        };
        if better {
            best = Some((s, side));
        }
    }
    Ok(best.map(|(v, c)| (v, c, tight)))
}
