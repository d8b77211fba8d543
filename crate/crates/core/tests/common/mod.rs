//! Randomised structural checks shared by the property suite and the
//! acceptance run. Each check builds its case from a seed and returns
//! whether it ran, was skipped, or failed with a message.

#![allow(dead_code)]

use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spflow::cutcheck::{central_sides, check_cut_condition_with, is_eulerian, CutEngine};
use spflow::fixtures::{eulerize, random_sp_graph, random_sp_instance, random_sp_pair};
use spflow::graph::Path;
use spflow::lp::solve_congestion;
use spflow::routing::{choose_sides, noncrossing_decomposition, paths_cross, route_unit, CycleChain, PushLedger};
use spflow::spgraph::{is_split_pair, orient, sp_tree};
use spflow::sufficiency::saturate_demands;
use spflow::{Graph, Instance, Rational, VertexSet};

#[derive(Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Skip,
}

pub type Check = Result<Outcome, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn two() -> Rational {
    Rational::from_integer(2.into())
}

fn random_set<R: Rng>(rng: &mut R, n: usize) -> VertexSet {
    VertexSet(rng.gen_range(0..1u64 << n))
}

/// Random multigraph instance, not necessarily series-parallel.
pub fn random_instance<R: Rng>(rng: &mut R, n: usize) -> Instance {
    let edge = |rng: &mut R| {
        let a = rng.gen_range(0..n);
        let b = (a + rng.gen_range(1..n)) % n;
        (a, b)
    };
    let m = rng.gen_range(1..3 * n);
    let k = rng.gen_range(1..2 * n);
    let supply: Vec<_> = (0..m).map(|_| edge(rng)).collect();
    let demand: Vec<_> = (0..k).map(|_| edge(rng)).collect();
    let w = |rng: &mut R| Rational::new(rng.gen_range(0..7).into(), rng.gen_range(1..4).into());
    let caps = (0..m).map(|_| w(rng)).collect();
    let dems = (0..k).map(|_| w(rng)).collect();
    Instance::new(Graph::new(n, supply).unwrap(), Graph::new(n, demand).unwrap(), caps, dems).unwrap()
}

/// Eulerian instance satisfying the cut condition, with a tight cut
/// through every demand before parity repair.
pub fn tight_eulerian(seed: u64, n: usize, k: usize) -> Instance {
    let mut r = rng(seed);
    let pair = random_sp_pair(&mut r, n, k);
    eulerize(&saturate_demands(&mut r, &pair, 3).unwrap())
}

/// Surplus of a union, intersection, differences and partitions.
pub fn surplus_identities(seed: u64, n: usize) -> Check {
    let mut r = rng(seed);
    let inst = random_instance(&mut r, n);
    let all = VertexSet::full(n);
    let a = random_set(&mut r, n);
    let b = random_set(&mut r, n);
    let s = |x: VertexSet| inst.surplus(x).unwrap();
    let ps = |x: VertexSet, y: VertexSet| inst.pair_surplus(x, y).unwrap();

    let rest = b.difference(a);
    let k = r.gen_range(1..=3);
    let mut parts = vec![VertexSet::EMPTY; k];
    for v in rest.iter() {
        parts[r.gen_range(0..k)].insert(v);
    }
    let split: Rational = parts.iter().map(|&p| ps(a, p)).sum();
    ensure!(ps(a, rest) == split, "partition of B: {a} {rest}");

    let mut blocks = vec![VertexSet::EMPTY; 3];
    for v in all.difference(a).iter() {
        blocks[r.gen_range(0..3)].insert(v);
    }
    let total: Rational = blocks.iter().map(|&p| ps(a, p)).sum();
    ensure!(s(a) == total, "partition of the complement of {a}");

    ensure!(
        s(a.union(b)) + s(a.intersection(b)) == s(a) + s(b) - ps(a.difference(b), b.difference(a)) * two(),
        "union and intersection for {a} {b}"
    );
    ensure!(
        s(a.difference(b)) + s(b.difference(a))
            == s(a) + s(b) - ps(a.intersection(b), all.difference(a.union(b))) * two(),
        "differences for {a} {b}"
    );
    ensure!(s(a.union(rest)) == s(a) + s(rest) - ps(a, rest) * two(), "disjoint union {a} {rest}");
    Ok(Outcome::Pass)
}

/// A cycle of a series-parallel graph crosses a central cut 0 or 2 times.
pub fn cycle_crossings(seed: u64, n: usize) -> Check {
    let mut r = rng(seed);
    let g = random_sp_graph(&mut r, n);
    let e = r.gen_range(0..g.edge_count());
    let (a, b) = g.endpoints(e);
    let others: Vec<_> = g.edges().iter().enumerate().filter(|&(f, _)| f != e).map(|(_, &x)| x).collect();
    let rest = Graph::new(n, others).unwrap();
    let paths = rest.simple_paths(b, a, 64).unwrap();
    let Some(p) = paths.choose(&mut r) else {
        return Ok(Outcome::Skip);
    };
    let sides = central_sides(&g).unwrap();
    let side = *sides.choose(&mut r).unwrap();
    let crossings = p.crossings(side) + usize::from(side.contains(a) != side.contains(b));
    ensure!(crossings == 0 || crossings == 2, "{crossings} crossings of {side}");
    Ok(Outcome::Pass)
}

/// Split-pair orientations are acyclic with a unique source and sink, and
/// orienting again reproduces them.
pub fn orientation(seed: u64, n: usize) -> Check {
    let mut r = rng(seed);
    let g = random_sp_graph(&mut r, n);
    let tree = sp_tree(&g).unwrap();
    let split: Vec<(usize, usize)> = (0..n)
        .flat_map(|s| (0..n).map(move |t| (s, t)))
        .filter(|&(s, t)| s != t && is_split_pair(&tree, s, t))
        .collect();
    let (s, t) = *split.choose(&mut r).unwrap();
    let o = orient(&tree, s, t).unwrap();
    ensure!(o.sources() == vec![s], "sources {:?}", o.sources());
    ensure!(o.sinks() == vec![t], "sinks {:?}", o.sinks());
    let mut indeg = vec![0usize; n];
    for &(_, h) in &o.arcs {
        indeg[h] += 1;
    }
    let mut ready: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = ready.pop() {
        seen += 1;
        for &(x, h) in &o.arcs {
            if x == v {
                indeg[h] -= 1;
                if indeg[h] == 0 {
                    ready.push(h);
                }
            }
        }
    }
    ensure!(seen == n, "directed cycle");
    let directed = Graph::new(n, o.arcs.clone()).unwrap();
    let again = orient(&sp_tree(&directed).unwrap(), s, t).unwrap();
    ensure!(again.arcs == o.arcs, "orientation is not idempotent");
    Ok(Outcome::Pass)
}

/// The decomposition-tree program and full enumeration agree.
pub fn dp_vs_brute(seed: u64, n: usize) -> Check {
    let mut r = rng(seed);
    let k = r.gen_range(1..=n);
    let inst = random_sp_instance(&mut r, n, k, 3, 3);
    let dp = check_cut_condition_with(&inst, CutEngine::TreeDp).unwrap();
    let bf = check_cut_condition_with(&inst, CutEngine::BruteForce).unwrap();
    ensure!(dp.satisfied == bf.satisfied, "verdicts differ");
    ensure!(dp.min_surplus == bf.min_surplus, "{} vs {}", dp.min_surplus, bf.min_surplus);
    ensure!(inst.surplus(dp.worst_cut.side).unwrap() == dp.min_surplus, "witness surplus");
    Ok(Outcome::Pass)
}

/// Routing a unit along a positive flow path changes every surplus by an
/// even amount and keeps the instance Eulerian.
pub fn route_parity(seed: u64, n: usize, k: usize) -> Check {
    let inst = tight_eulerian(seed, n, k);
    let cert = solve_congestion(&inst).unwrap();
    if cert.solution.congestion > Rational::one() {
        return Ok(Outcome::Skip);
    }
    let active: Vec<usize> = (0..k).filter(|&i| inst.demands[i].is_positive()).collect();
    let mut r = rng(seed ^ 0x5eed);
    let Some(&d) = active.choose(&mut r) else {
        return Ok(Outcome::Skip);
    };
    let paths: Vec<&(Path, Rational)> = cert.solution.flows[d].iter().filter(|(_, x)| x.is_positive()).collect();
    let p = &paths.choose(&mut r).unwrap().0;
    let (u, v) = inst.demand.endpoints(d);
    let ledger = PushLedger { demand: d, chain: vec![d], vertices: vec![u, v] };
    let (out, _, _) = route_unit(&inst, p, &ledger).map_err(|e| e.to_string())?;
    ensure!(is_eulerian(&out), "parity lost");
    for mask in 0..1u64 << n {
        let side = VertexSet(mask);
        let change = inst.surplus(side).unwrap() - out.surplus(side).unwrap();
        ensure!(change.is_integer() && (change.to_integer() % 2u8).is_zero(), "odd change on {side}");
    }
    Ok(Outcome::Pass)
}

/// Decomposition paths never cross and the chosen path meets at most one
/// cycle of the chain twice on any central cut.
pub fn chosen_path(seed: u64, n: usize, k: usize) -> Check {
    let inst = tight_eulerian(seed, n, k);
    let cert = solve_congestion(&inst).unwrap();
    if cert.solution.congestion > Rational::one() {
        return Ok(Outcome::Skip);
    }
    for d in (0..k).filter(|&i| inst.demands[i].is_positive()) {
        let (u, v) = inst.demand.endpoints(d);
        let flow: Vec<(Path, Rational)> =
            cert.solution.flows[d].iter().filter(|(_, x)| x.is_positive()).cloned().collect();
        let ps = noncrossing_decomposition(&inst.supply, u, v, &flow).map_err(|e| e.to_string())?;
        for (a, _) in &ps {
            for (b, _) in &ps {
                ensure!(!paths_cross(&inst.supply, a, b).unwrap(), "{:?} crosses {:?}", b.vertices, a.vertices);
            }
        }
        let chain = CycleChain::from_paths(ps).map_err(|e| e.to_string())?;
        let p = choose_sides(&inst.supply, &chain, v).map_err(|e| e.to_string())?;
        let segments: Vec<Path> = chain
            .cycles()
            .map(|(a, b, _, _)| {
                let i = p.vertices.iter().position(|&x| x == a).unwrap();
                let j = p.vertices.iter().position(|&x| x == b).unwrap();
                Path { vertices: p.vertices[i..=j].to_vec(), edges: p.edges[i..j].to_vec() }
            })
            .collect();
        for side in central_sides(&inst.supply).unwrap() {
            let twice = segments.iter().filter(|s| s.crossings(side) == 2).count();
            ensure!(twice <= 1, "side {side} crosses {twice} segments twice");
        }
    }
    Ok(Outcome::Pass)
}

/// Runs `check` on seeds `0..cases` with sizes drawn from the seed.
pub fn sweep(cases: u64, check: impl Fn(u64) -> Check) -> (usize, usize, Vec<(u64, String)>) {
    let (mut passed, mut skipped, mut failed) = (0, 0, Vec::new());
    for seed in 0..cases {
        match check(seed) {
            Ok(Outcome::Pass) => passed += 1,
            Ok(Outcome::Skip) => skipped += 1,
            Err(e) => failed.push((seed, e)),
        }
    }
    (passed, skipped, failed)
}
