//! Integral and half-integral routing on cut-sufficient series-parallel
//! instances.
//!
//! Every unit of a demand `(u, v)` is routed along a path assembled from a
//! noncrossing decomposition of a fractional solution: the unit is pushed
//! through the vertices shared by the outermost paths, one side of every
//! cycle between them is picked, and capacity is removed along the result.
//! Each step re-checks the cut condition.

mod noncrossing;

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

pub use noncrossing::{
    choose_sides, linked_to, noncrossing_decomposition, paths_cross, ChainSegment, CycleChain,
};

use crate::cutcheck::{check_cut_condition, cut_condition_holds, is_eulerian, restrict};
use crate::graph::{Graph, Path, VertexSet};
use crate::instance::{Cut, Instance};
use crate::lp::{solve_congestion, MultiflowSolution};
use crate::spgraph::{has_k4_minor, recognize_series_parallel, K4Witness, Recognition};
use crate::sufficiency::{decide_cut_sufficiency, SpindleWitness, SufficiencyVerdict};
use crate::{Error, Rational, Result};

/// Why an instance was not routed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Refusal {
    NonIntegral,
    /// Some block has a K4 minor; the witness is given when the supply
    /// graph is biconnected.
    NotSeriesParallel(Option<K4Witness>),
    ViolatedCut(Cut),
    OddVertex(usize),
    /// Witness in the labels of the offending supply component.
    NotCutSufficient { component: VertexSet, witness: SpindleWitness },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RoutingOutcome {
    Routed(IntegralRouting),
    Refused(Refusal),
}

impl RoutingOutcome {
    pub fn routed(&self) -> Option<&IntegralRouting> {
        match self {
            RoutingOutcome::Routed(r) => Some(r),
            RoutingOutcome::Refused(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralRouting {
    pub solution: MultiflowSolution,
    /// Units sent along fractional paths before the push/route loop.
    pub floor_units: usize,
    /// Units sent by push and route.
    pub pushed_units: usize,
}

/// How whole units of the first fractional solution are sent before the
/// push/route loop.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FloorRouting {
    /// No pre-routing; every unit goes through push and route.
    Off,
    /// One unit at a time, re-checking the cut condition after each.
    #[default]
    PerUnit,
    /// All whole units at once with a single check afterwards.
    Bulk,
}

/// The unit demands a push created, in order from `u` to `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushLedger {
    pub demand: usize,
    /// Demand indices of the chain; the first may be `demand` itself when
    /// nothing was pushed.
    pub chain: Vec<usize>,
    pub vertices: Vec<usize>,
}

fn one() -> Rational {
    Rational::one()
}

fn visits(p: &Path, w: usize) -> bool {
    p.vertices.contains(&w)
}

/// Moves one unit of demand `d = (u, v)` to the pair `(u, w)`, `(w, v)`.
/// The new demands are appended; their indices are returned.
pub fn push_unit(
    inst: &Instance,
    d: usize,
    w: usize,
    flow: &[(Path, Rational)],
) -> Result<(Instance, [usize; 2])> {
    let (u, v) = inst.demand.endpoints(d);
    if w == u || w == v {
        return Err(Error::Precondition(format!("vertex {w} is an endpoint of demand {d}")));
    }
    if inst.demands[d] < one() {
        return Err(Error::Precondition(format!("demand {d} has less than one unit")));
    }
    if let Some((p, _)) = flow.iter().find(|(p, x)| x.is_positive() && !visits(p, w)) {
        return Err(Error::Precondition(format!("flow path {:?} misses vertex {w}", p.vertices)));
    }
    let mut edges = inst.demand.edges().to_vec();
    edges.push((u, w));
    edges.push((w, v));
    let mut demands = inst.demands.clone();
    demands[d] -= one();
    demands.push(one());
    demands.push(one());
    let k = inst.demand.edge_count();
    let out = Instance::new(inst.supply.clone(), Graph::new(inst.vertex_count(), edges)?, inst.capacities.clone(), demands)?;
    if !cut_condition_holds(&out)? {
        return Err(Error::Internal(format!("pushing demand {d} to {w} broke the cut condition")));
    }
    Ok((out, [k, k + 1]))
}

/// Pushes one unit of `d` through every interior junction in turn.
pub fn push_chain(
    inst: &Instance,
    d: usize,
    junctions: &[usize],
    flow: &[(Path, Rational)],
) -> Result<(Instance, PushLedger)> {
    let mut cur = inst.clone();
    let mut at = d;
    let mut chain = Vec::new();
    for &w in &junctions[1..junctions.len() - 1] {
        let start = cur.demand.endpoints(at).0;
        // the flow of the current demand is the tail of every path from `start`
        let tails: Vec<(Path, Rational)> = flow
            .iter()
            .map(|(p, x)| {
                let i = p.vertices.iter().position(|&y| y == start).unwrap_or(0);
                (Path { vertices: p.vertices[i..].to_vec(), edges: p.edges[i..].to_vec() }, x.clone())
            })
            .collect();
        let (next, [a, b]) = push_unit(&cur, at, w, &tails)?;
        cur = next;
        chain.push(a);
        at = b;
    }
    chain.push(at);
    Ok((cur, PushLedger { demand: d, chain, vertices: junctions.to_vec() }))
}

/// Removes one unit of capacity along `path` and one unit of every chain
/// demand, then drops zero edges. Returns the reduced instance with the
/// surviving supply and demand indices.
pub fn route_unit(
    inst: &Instance,
    path: &Path,
    ledger: &PushLedger,
) -> Result<(Instance, Vec<usize>, Vec<usize>)> {
    check_walk(&inst.supply, path)?;
    let mut pos = 0;
    for &x in &ledger.vertices {
        match path.vertices[pos..].iter().position(|&y| y == x) {
            Some(i) => pos += i,
            None => return Err(Error::Precondition(format!("path misses chain vertex {x}"))),
        }
    }
    let mut out = inst.clone();
    for &e in &path.edges {
        if out.capacities[e] < one() {
            return Err(Error::Precondition(format!("capacity underflow on edge {e}")));
        }
        out.capacities[e] -= one();
    }
    for &i in &ledger.chain {
        if out.demands[i] < one() {
            return Err(Error::Precondition(format!("demand {i} is already routed")));
        }
        out.demands[i] -= one();
    }
    let (out, ks, kd) = out.normalized();
    if !cut_condition_holds(&out)? {
        return Err(Error::Internal("routing a unit broke the cut condition".into()));
    }
    Ok((out, ks, kd))
}

fn check_walk(g: &Graph, p: &Path) -> Result<()> {
    let ok = p.vertices.len() == p.edges.len() + 1
        && p.vertices.windows(2).zip(&p.edges).all(|(w, &e)| {
            e < g.edge_count() && {
                let (a, b) = g.endpoints(e);
                (a, b) == (w[0], w[1]) || (b, a) == (w[0], w[1])
            }
        });
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{:?} is not a walk in the supply graph", p.vertices)))
    }
}

/// Reasons to refuse, checked in order: integrality, series-parallel
/// supply, cut condition, parity, cut-sufficiency.
pub fn refusal(inst: &Instance) -> Result<Option<Refusal>> {
    if !inst.is_integral() {
        return Ok(Some(Refusal::NonIntegral));
    }
    let (work, _, _) = inst.normalized();
    if has_k4_minor(&work.supply) {
        let witness = match recognize_series_parallel(&work.supply) {
            Ok(Recognition::K4Minor(w)) => Some(w),
            _ => None,
        };
        return Ok(Some(Refusal::NotSeriesParallel(witness)));
    }
    let comps = work.supply.components();
    for &(a, b) in work.demand.edges() {
        if let Some(&c) = comps.iter().find(|c| c.contains(a) && !c.contains(b)) {
            return Ok(Some(Refusal::ViolatedCut(work.cut(c)?)));
        }
    }
    for &c in comps.iter().filter(|c| c.len() >= 2) {
        let report = check_cut_condition(&restrict(&work, c)?)?;
        if !report.satisfied {
            let labels = c.to_vec();
            let side = report.worst_cut.side.iter().map(|x| labels[x]).collect();
            return Ok(Some(Refusal::ViolatedCut(work.cut(side)?)));
        }
    }
    if !is_eulerian(&work) {
        let v = (0..work.vertex_count())
            .find(|&v| !(work.vertex_weight(v).numer() % 2u8).is_zero())
            .expect("some vertex is odd");
        return Ok(Some(Refusal::OddVertex(v)));
    }
    for &c in comps.iter().filter(|c| c.len() >= 2) {
        let sub = restrict(&work, c)?;
        if sub.demand.edge_count() == 0 {
            continue;
        }
        if let SufficiencyVerdict::NotCutSufficient(witness) = decide_cut_sufficiency(&sub.pair())? {
            return Ok(Some(Refusal::NotCutSufficient { component: c, witness }));
        }
    }
    Ok(None)
}

/// Working copy of the instance with the input index of every edge.
struct Residual {
    inst: Instance,
    supply_origin: Vec<usize>,
    demand_origin: Vec<Option<usize>>,
    routed: Vec<Vec<Path>>,
}

impl Residual {
    fn record(&mut self, demand: usize, path: &Path) -> Result<()> {
        let origin = self.demand_origin[demand]
            .ok_or_else(|| Error::Internal("a pushed demand was recorded".into()))?;
        self.routed[origin].push(Path {
            vertices: path.vertices.clone(),
            edges: path.edges.iter().map(|&e| self.supply_origin[e]).collect(),
        });
        Ok(())
    }

    fn replace(&mut self, inst: Instance, ks: &[usize], kd: &[usize]) {
        self.supply_origin = ks.iter().map(|&e| self.supply_origin[e]).collect();
        self.demand_origin = kd.iter().map(|&i| self.demand_origin.get(i).copied().flatten()).collect();
        self.inst = inst;
    }

    /// Sends whole units along the fractional paths, one at a time, while
    /// the cut condition survives.
    fn floor_route(&mut self, mode: FloorRouting) -> Result<usize> {
        if mode == FloorRouting::Off {
            return Ok(0);
        }
        let cert = solve_congestion(&self.inst)?;
        let mut sent = 0;
        let mut cur = self.inst.clone();
        let mut units: Vec<(usize, Path)> = Vec::new();
        for (i, paths) in cert.solution.flows.iter().enumerate() {
            for (p, amount) in paths {
                let whole = amount.floor().to_integer();
                let mut k = num_bigint::BigInt::zero();
                while k < whole {
                    let mut next = cur.clone();
                    for &e in &p.edges {
                        next.capacities[e] -= one();
                    }
                    next.demands[i] -= one();
                    if next.capacities.iter().any(Signed::is_negative)
                        || next.demands[i].is_negative()
                        || (mode == FloorRouting::PerUnit && !cut_condition_holds(&next)?)
                    {
                        break;
                    }
                    cur = next;
                    units.push((i, p.clone()));
                    sent += 1;
                    k += 1;
                }
            }
        }
        if mode == FloorRouting::Bulk && !cut_condition_holds(&cur)? {
            return Err(Error::Internal("bulk floor routing broke the cut condition".into()));
        }
        for (i, p) in &units {
            self.record(*i, p)?;
        }
        let (inst, ks, kd) = cur.normalized();
        self.replace(inst, &ks, &kd);
        Ok(sent)
    }

    /// Routes one unit of demand `d` by push and route.
    fn route_one(&mut self, d: usize) -> Result<()> {
        let (u, v) = self.inst.demand.endpoints(d);
        let cert = solve_congestion(&self.inst)?;
        if cert.solution.congestion > one() {
            return Err(Error::Internal("residual instance is not routable".into()));
        }
        let flow: Vec<(Path, Rational)> =
            cert.solution.flows[d].iter().filter(|(_, x)| x.is_positive()).cloned().collect();
        let paths = noncrossing_decomposition(&self.inst.supply, u, v, &flow)?;
        let chain = CycleChain::from_paths(paths)?;
        let (pushed, ledger) = push_chain(&self.inst, d, &chain.junctions, &chain.paths)?;
        let path = choose_sides(&self.inst.supply, &chain, v)?;
        let (next, ks, kd) = route_unit(&pushed, &path, &ledger)?;
        self.record(d, &path)?;
        let mut origin = self.demand_origin.clone();
        origin.resize(pushed.demand.edge_count(), None);
        self.demand_origin = origin;
        self.replace(next, &ks, &kd);
        if self.demand_origin.iter().any(Option::is_none) {
            return Err(Error::Internal("a pushed demand survived routing".into()));
        }
        Ok(())
    }
}

/// Integral routing of an Eulerian, cut-sufficient instance on a
/// series-parallel supply graph satisfying the cut condition.
pub fn solve_integral(inst: &Instance) -> Result<RoutingOutcome> {
    solve_integral_with(inst, FloorRouting::default())
}

pub fn solve_integral_with(inst: &Instance, floor: FloorRouting) -> Result<RoutingOutcome> {
    if let Some(r) = refusal(inst)? {
        return Ok(RoutingOutcome::Refused(r));
    }
    let (work, ks, kd) = inst.normalized();
    let mut res = Residual {
        inst: work,
        supply_origin: ks,
        demand_origin: kd.into_iter().map(Some).collect(),
        routed: vec![Vec::new(); inst.demand.edge_count()],
    };
    let floor_units = if res.inst.demand.edge_count() > 0 { res.floor_route(floor)? } else { 0 };
    let mut pushed_units = 0;
    while res.inst.demand.edge_count() > 0 {
        let d = (0..res.inst.demand.edge_count())
            .min_by_key(|&i| {
                let (a, b) = res.inst.demand.endpoints(i);
                (a.min(b), a.max(b), i)
            })
            .expect("some demand is left");
        res.route_one(d)?;
        pushed_units += 1;
    }
    let solution = assemble(inst, &res.routed, &one());
    verify_routing(inst, &solution, &one())
        .map_err(|e| Error::Internal(format!("routing failed verification: {e}")))?;
    Ok(RoutingOutcome::Routed(IntegralRouting { solution, floor_units, pushed_units }))
}

/// Doubles the instance, routes it integrally and halves the flows.
pub fn solve_half_integral(inst: &Instance) -> Result<RoutingOutcome> {
    solve_half_integral_with(inst, FloorRouting::default())
}

pub fn solve_half_integral_with(inst: &Instance, floor: FloorRouting) -> Result<RoutingOutcome> {
    if !inst.is_integral() {
        return Ok(RoutingOutcome::Refused(Refusal::NonIntegral));
    }
    let doubled = inst.scaled(&Rational::from_integer(2.into()));
    let routed = match solve_integral_with(&doubled, floor)? {
        RoutingOutcome::Routed(r) => r,
        RoutingOutcome::Refused(Refusal::ViolatedCut(c)) => {
            return Ok(RoutingOutcome::Refused(Refusal::ViolatedCut(inst.cut(c.side)?)))
        }
        refused => return Ok(refused),
    };
    let half = Rational::new(1.into(), 2.into());
    let paths: Vec<Vec<Path>> = routed
        .solution
        .flows
        .iter()
        .map(|ps| {
            ps.iter()
                .flat_map(|(p, x)| std::iter::repeat(p.clone()).take(x.to_integer().try_into().unwrap_or(0)))
                .collect()
        })
        .collect();
    let solution = assemble(inst, &paths, &half);
    verify_routing(inst, &solution, &half)
        .map_err(|e| Error::Internal(format!("routing failed verification: {e}")))?;
    Ok(RoutingOutcome::Routed(IntegralRouting { solution, ..routed }))
}

/// Merges unit paths of size `grain` into a path flow on `inst`.
fn assemble(inst: &Instance, routed: &[Vec<Path>], grain: &Rational) -> MultiflowSolution {
    let mut loads = vec![Rational::zero(); inst.supply.edge_count()];
    let flows: Vec<Vec<(Path, Rational)>> = routed
        .iter()
        .map(|paths| {
            let mut merged: BTreeMap<(Vec<usize>, Vec<usize>), Rational> = BTreeMap::new();
            for p in paths {
                *merged.entry((p.vertices.clone(), p.edges.clone())).or_insert_with(Rational::zero) += grain;
            }
            merged
                .into_iter()
                .map(|((vertices, edges), x)| (Path { vertices, edges }, x))
                .collect()
        })
        .collect();
    for (p, x) in flows.iter().flatten() {
        for &e in &p.edges {
            loads[e] += x;
        }
    }
    let congestion = loads
        .iter()
        .zip(&inst.capacities)
        .filter(|(_, c)| c.is_positive())
        .map(|(l, c)| l / c)
        .max()
        .unwrap_or_else(Rational::zero);
    let residual = inst.capacities.iter().zip(&loads).map(|(c, l)| c * &congestion - l).collect();
    MultiflowSolution { congestion, flows, loads, residual }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RoutingDefect {
    #[error("flow on demand {0} is not a nonnegative multiple of the grain")]
    Grain(usize),
    #[error("demand {0} uses a broken path")]
    BrokenPath(usize),
    #[error("demand {demand} receives {delivered}")]
    Delivery { demand: usize, delivered: Rational },
    #[error("edge {edge} carries {load}")]
    Overload { edge: usize, load: Rational },
}

/// Checks from the paths alone that every value is a multiple of `grain`,
/// every demand is met exactly and no capacity is exceeded.
pub fn verify_routing(
    inst: &Instance,
    sol: &MultiflowSolution,
    grain: &Rational,
) -> std::result::Result<(), RoutingDefect> {
    let mut load = vec![Rational::zero(); inst.supply.edge_count()];
    if sol.flows.len() != inst.demand.edge_count() {
        return Err(RoutingDefect::Delivery { demand: sol.flows.len(), delivered: Rational::zero() });
    }
    for (i, paths) in sol.flows.iter().enumerate() {
        let (a, b) = inst.demand.endpoints(i);
        let mut delivered = Rational::zero();
        for (p, x) in paths {
            if x.is_negative() || !(x / grain).is_integer() {
                return Err(RoutingDefect::Grain(i));
            }
            if p.start() != a || p.end() != b || check_walk(&inst.supply, p).is_err() {
                return Err(RoutingDefect::BrokenPath(i));
            }
            for &e in &p.edges {
                load[e] += x;
            }
            delivered += x;
        }
        if delivered != inst.demands[i] {
            return Err(RoutingDefect::Delivery { demand: i, delivered });
        }
    }
    for (e, l) in load.into_iter().enumerate() {
        if l > inst.capacities[e] {
            return Err(RoutingDefect::Overload { edge: e, load: l });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests;
