//! Minimum congestion through the edge-flow formulation, with its dual
//! metric and a path decomposition of every commodity.

use num_traits::{One, Signed, Zero};

use super::simplex::{solve_lp, RationalLP, Relation, Sense};
use crate::graph::{Graph, Path};
use crate::instance::Instance;
use crate::{Error, Rational, Result};

/// Path flows per demand edge together with the congestion they achieve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiflowSolution {
    pub congestion: Rational,
    /// `flows[i]` lists `(path from the first to the second endpoint of
    /// demand i, amount)`.
    pub flows: Vec<Vec<(Path, Rational)>>,
    /// Load of every supply edge.
    pub loads: Vec<Rational>,
    /// `c_e · congestion - load`.
    pub residual: Vec<Rational>,
}

/// Edge lengths and demand distances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricAssignment {
    pub lengths: Vec<Rational>,
    pub distances: Vec<Rational>,
}

/// Both sides of the congestion program.
#[derive(Clone, Debug)]
pub struct CongestionCertificate {
    pub solution: MultiflowSolution,
    pub metric: MetricAssignment,
    /// Signed net flow of each demand along each supply edge (positive in
    /// the stored edge direction).
    pub edge_flows: Vec<Vec<Rational>>,
    pub primal_objective: Rational,
    pub dual_objective: Rational,
}

impl MultiflowSolution {
    pub fn path_count(&self) -> usize {
        self.flows.iter().map(Vec::len).sum()
    }

    /// Recompute loads, delivery and capacity use from the paths alone.
    pub fn verify(&self, inst: &Instance, factor: &Rational) -> Result<()> {
        let mut load = vec![Rational::zero(); inst.supply.edge_count()];
        for (i, paths) in self.flows.iter().enumerate() {
            let (a, b) = inst.demand.endpoints(i);
            let mut delivered = Rational::zero();
            for (p, amount) in paths {
                if amount.is_negative() || p.start() != a || p.end() != b {
                    return Err(Error::Internal(format!("bad path for demand {i}")));
                }
                for w in p.vertices.windows(2).zip(&p.edges) {
                    let (x, y) = inst.supply.endpoints(*w.1);
                    if (x, y) != (w.0[0], w.0[1]) && (y, x) != (w.0[0], w.0[1]) {
                        return Err(Error::Internal(format!("broken path for demand {i}")));
                    }
                    load[*w.1] += amount;
                }
                delivered += amount;
            }
            if delivered < inst.demands[i] {
                return Err(Error::Internal(format!("demand {i} is not met")));
            }
        }
        for (e, l) in load.iter().enumerate() {
            if *l > &inst.capacities[e] * factor {
                return Err(Error::Internal(format!("edge {e} is overloaded")));
            }
        }
        Ok(())
    }
}

pub fn min_congestion(inst: &Instance) -> Result<MultiflowSolution> {
    Ok(solve_congestion(inst)?.solution)
}

pub fn dual_metric(inst: &Instance) -> Result<MetricAssignment> {
    Ok(solve_congestion(inst)?.metric)
}

/// Solve `min α` over the edge formulation: per demand, two directed flow
/// variables per supply edge with conservation, and load at most `c_e α`.
pub fn solve_congestion(inst: &Instance) -> Result<CongestionCertificate> {
    inst.check_demands_connected()?;
    let n = inst.vertex_count();
    let m = inst.supply.edge_count();
    let active: Vec<usize> = (0..inst.demand.edge_count())
        .filter(|&i| inst.demands[i].is_positive())
        .collect();
    let k = active.len();
    let alpha = 2 * m * k;
    let var = |c: usize, e: usize, dir: usize| 2 * m * c + 2 * e + dir;

    let mut objective = vec![Rational::zero(); alpha + 1];
    objective[alpha] = Rational::one();
    let mut lp = RationalLP::new(Sense::Minimize, objective);
    for (c, &i) in active.iter().enumerate() {
        let (s, t) = inst.demand.endpoints(i);
        // conservation at every vertex but t: out minus in
        for v in (0..n).filter(|&v| v != t) {
            let mut row = Vec::new();
            for &(_, e) in inst.supply.incident(v) {
                let (a, _) = inst.supply.endpoints(e);
                // dir 0 runs a→b, dir 1 runs b→a
                let (out, inn) = if a == v { (0, 1) } else { (1, 0) };
                row.push((var(c, e, out), Rational::one()));
                row.push((var(c, e, inn), -Rational::one()));
            }
            let rhs = if v == s { inst.demands[i].clone() } else { Rational::zero() };
            if row.is_empty() && rhs.is_zero() {
                continue;
            }
            lp.add(row, Relation::Eq, rhs);
        }
    }
    let cap_row0 = lp.constraints.len();
    for e in 0..m {
        let mut row: Vec<(usize, Rational)> = (0..k)
            .flat_map(|c| [(var(c, e, 0), Rational::one()), (var(c, e, 1), Rational::one())])
            .collect();
        row.push((alpha, -inst.capacities[e].clone()));
        lp.add(row, Relation::Le, Rational::zero());
    }
    let sol = solve_lp(&lp)?.optimal()?;
    let congestion = sol.objective.clone();

    let mut edge_flows = vec![vec![Rational::zero(); m]; inst.demand.edge_count()];
    let mut flows = vec![Vec::new(); inst.demand.edge_count()];
    let mut loads = vec![Rational::zero(); m];
    for (c, &i) in active.iter().enumerate() {
        let net: Vec<Rational> = (0..m)
            .map(|e| &sol.values[var(c, e, 0)] - &sol.values[var(c, e, 1)])
            .collect();
        let (s, t) = inst.demand.endpoints(i);
        let (paths, _) = decompose(&inst.supply, s, t, &net);
        for (p, amount) in &paths {
            for &e in &p.edges {
                loads[e] += amount;
            }
        }
        flows[i] = paths;
        edge_flows[i] = net;
    }
    let residual = (0..m)
        .map(|e| &inst.capacities[e] * &congestion - &loads[e])
        .collect();

    let mut lengths: Vec<Rational> = (0..m).map(|e| -sol.duals[cap_row0 + e].clone()).collect();
    let weight: Rational = lengths.iter().zip(&inst.capacities).map(|(l, c)| l * c).sum();
    if weight != Rational::one() {
        // only possible without positive demand; any normalized metric is optimal
        let total = inst.total_capacity();
        if !congestion.is_zero() || total.is_zero() {
            if !total.is_zero() {
                return Err(Error::Internal("capacity duals are not normalized".into()));
            }
        } else {
            lengths = vec![Rational::one() / total; m];
        }
    }
    let distances: Vec<Rational> = inst
        .demand
        .edges()
        .iter()
        .map(|&(a, b)| shortest_distance(&inst.supply, &lengths, a, b))
        .collect();
    let dual_objective: Rational = distances
        .iter()
        .zip(&inst.demands)
        .map(|(d, dm)| d * dm)
        .sum();
    if dual_objective != congestion {
        return Err(Error::Internal(format!(
            "metric objective {dual_objective} differs from congestion {congestion}"
        )));
    }
    Ok(CongestionCertificate {
        solution: MultiflowSolution {
            congestion: congestion.clone(),
            flows,
            loads,
            residual,
        },
        metric: MetricAssignment { lengths, distances },
        edge_flows,
        primal_objective: congestion,
        dual_objective,
    })
}

/// Dijkstra over rational lengths; unreachable targets get length zero.
pub fn shortest_distances(g: &Graph, lengths: &[Rational], s: usize) -> Vec<Option<Rational>> {
    let n = g.vertex_count();
    let mut dist: Vec<Option<Rational>> = vec![None; n];
    let mut done = vec![false; n];
    dist[s] = Some(Rational::zero());
    loop {
        let mut best: Option<usize> = None;
        for v in 0..n {
            if done[v] {
                continue;
            }
            if let Some(d) = &dist[v] {
                if best.map_or(true, |b| d < dist[b].as_ref().expect("set")) {
                    best = Some(v);
                }
            }
        }
        let Some(v) = best else { break };
        done[v] = true;
        let dv = dist[v].clone().expect("set");
        for &(w, e) in g.incident(v) {
            let cand = &dv + &lengths[e];
            if dist[w].as_ref().map_or(true, |d| cand < *d) {
                dist[w] = Some(cand);
            }
        }
    }
    dist
}

pub fn shortest_distance(g: &Graph, lengths: &[Rational], a: usize, b: usize) -> Rational {
    shortest_distances(g, lengths, a)[b].clone().unwrap_or_else(Rational::zero)
}

/// Split a signed edge flow from `s` to `t` into paths, cancelling directed
/// cycles met on the way. Returns the paths and the leftover circulation.
pub fn decompose(
    g: &Graph,
    s: usize,
    t: usize,
    net: &[Rational],
) -> (Vec<(Path, Rational)>, Vec<Rational>) {
    let mut rest = net.to_vec();
    let mut paths = Vec::new();
    // flow leaving v along e in the direction away from v
    let out = |rest: &[Rational], v: usize, e: usize| -> Rational {
        let (a, _) = g.endpoints(e);
        if a == v {
            rest[e].clone()
        } else {
            -rest[e].clone()
        }
    };
    if s == t {
        return (paths, rest);
    }
    loop {
        let leaving: Rational = g
            .incident(s)
            .iter()
            .map(|&(_, e)| out(&rest, s, e))
            .filter(|x| x.is_positive())
            .sum();
        if !leaving.is_positive() {
            break;
        }
        let mut vertices = vec![s];
        let mut edges: Vec<usize> = Vec::new();
        let mut pos = vec![usize::MAX; g.vertex_count()];
        pos[s] = 0;
        let mut cur = s;
        let mut restart = false;
        while cur != t {
            let step = g
                .incident(cur)
                .iter()
                .find(|&&(_, e)| out(&rest, cur, e).is_positive())
                .copied();
            let Some((next, e)) = step else {
                // conservation fails only if the input was not a flow
                return (paths, rest);
            };
            edges.push(e);
            if pos[next] != usize::MAX {
                // cancel the directed cycle closed at `next`
                let start = pos[next];
                let cyc_edges = edges[start..].to_vec();
                let cyc_vertices = vertices[start..].to_vec();
                let amount = cyc_edges
                    .iter()
                    .zip(&cyc_vertices)
                    .map(|(&f, &v)| out(&rest, v, f))
                    .min()
                    .expect("cycle is nonempty");
                for (&f, &v) in cyc_edges.iter().zip(&cyc_vertices) {
                    subtract(g, &mut rest, v, f, &amount);
                }
                restart = true;
                break;
            }
            vertices.push(next);
            pos[next] = vertices.len() - 1;
            cur = next;
        }
        if restart {
            continue;
        }
        let amount = edges
            .iter()
            .zip(&vertices)
            .map(|(&f, &v)| out(&rest, v, f))
            .min()
            .expect("path is nonempty");
        for (&f, &v) in edges.iter().zip(&vertices) {
            subtract(g, &mut rest, v, f, &amount);
        }
        paths.push((Path { vertices, edges }, amount));
    }
    (paths, rest)
}

fn subtract(g: &Graph, rest: &mut [Rational], from: usize, e: usize, amount: &Rational) {
    let (a, _) = g.endpoints(e);
    if a == from {
        rest[e] -= amount;
    } else {
        rest[e] += amount;
    }
}
