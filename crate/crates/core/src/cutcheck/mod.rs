//! Cut condition, Eulerian condition, tight cuts and bubbles.

mod brute;
mod dp;
mod scaled;

use num_traits::{Signed, Zero};

pub use brute::{central_sides, BRUTE_LIMIT};

use crate::graph::{Path, VertexSet};
use crate::instance::{Cut, Instance};
use crate::spgraph::sp_tree;
use crate::{Error, Rational, Result};
use scaled::Scaled;

/// Graphs at most this large use enumeration under [`CutEngine::Auto`].
pub const AUTO_BRUTE_LIMIT: usize = 16;
/// Default cap on the number of tight cuts collected in a report.
pub const TIGHT_CAP: usize = 4096;
/// Cut parity is enumerated over all subsets only up to this size.
pub const PARITY_LIMIT: usize = 12;
/// Maximum number of simple paths inspected for bubble coverage.
pub const PATH_LIMIT: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CutEngine {
    /// Enumeration for small graphs, the tree program otherwise.
    #[default]
    Auto,
    BruteForce,
    TreeDp,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutReport {
    pub satisfied: bool,
    pub worst_cut: Cut,
    pub min_surplus: Rational,
    /// Tight central cuts, one representative each. Only filled by the
    /// enumeration engine.
    pub tight_cuts: Vec<Cut>,
    pub engine: CutEngine,
}

pub fn check_cut_condition(inst: &Instance) -> Result<CutReport> {
    check_cut_condition_with(inst, CutEngine::Auto)
}

pub fn check_cut_condition_with(inst: &Instance, engine: CutEngine) -> Result<CutReport> {
    let n = inst.vertex_count();
    if !inst.supply.is_connected() {
        return Err(Error::Disconnected);
    }
    if n < 2 {
        return Err(Error::Precondition("cut check needs at least two vertices".into()));
    }
    let engine = match engine {
        CutEngine::Auto if n <= AUTO_BRUTE_LIMIT => CutEngine::BruteForce,
        CutEngine::Auto => match sp_tree(&inst.supply) {
            Ok(_) => CutEngine::TreeDp,
            Err(_) if n <= BRUTE_LIMIT => CutEngine::BruteForce,
            Err(_) => {
                return Err(Error::SizeGuard {
                    what: "cut check on a graph without a decomposition tree",
                    actual: n,
                    limit: BRUTE_LIMIT,
                })
            }
        },
        e => e,
    };
    let w = Scaled::of(inst)?;
    match engine {
        CutEngine::BruteForce => {
            let (min, side, tight) = brute::scan(inst, &w, TIGHT_CAP)?.expect("two vertices, connected");
            let min_surplus = w.to_rational(min);
            Ok(CutReport {
                satisfied: min >= 0,
                worst_cut: inst.cut(side)?,
                min_surplus,
                tight_cuts: tight.into_iter().map(|s| inst.cut(s)).collect::<Result<_>>()?,
                engine,
            })
        }
        _ => {
            let tree = sp_tree(&inst.supply)?;
            let prog = dp::TreeDp::new(inst, &tree, &w);
            let mut fixed = vec![None; n];
            fixed[0] = Some(true);
            let min = prog.min_surplus(&fixed).ok_or_else(|| Error::Internal("no central cut".into()))?;
            let side = lex_smallest_minimizer(inst, &prog, min, fixed)?;
            Ok(CutReport {
                satisfied: min >= 0,
                worst_cut: inst.cut(side)?,
                min_surplus: w.to_rational(min),
                tight_cuts: Vec::new(),
                engine: CutEngine::TreeDp,
            })
        }
    }
}

/// Builds the sorted-list-smallest minimizing side one vertex at a time.
fn lex_smallest_minimizer(
    inst: &Instance,
    prog: &dp::TreeDp,
    min: i128,
    mut fixed: Vec<Option<bool>>,
) -> Result<VertexSet> {
    let n = inst.vertex_count();
    let w = Scaled::of(inst)?;
    let mut chosen = VertexSet::singleton(0);
    for k in 1..n {
        if chosen.len() < n && inst.is_central(chosen)? {
            let s = brute::surplus_of(&brute::weighted_edges(inst, &w), chosen);
            if s == min {
                return Ok(chosen);
            }
        }
        fixed[k] = Some(true);
        if prog.min_surplus(&fixed) == Some(min) {
            chosen.insert(k);
        } else {
            fixed[k] = Some(false);
        }
    }
    if chosen.len() < n && inst.is_central(chosen)? {
        return Ok(chosen);
    }
    Err(Error::Internal("minimizing cut reconstruction failed".into()))
}

/// Cut condition for possibly disconnected supply graphs: demands between
/// components must be zero and every component must satisfy it on its own.
pub fn cut_condition_holds(inst: &Instance) -> Result<bool> {
    let comps = inst.supply.components();
    if comps.len() == 1 {
        if inst.vertex_count() < 2 {
            return Ok(true);
        }
        return Ok(check_cut_condition(inst)?.satisfied);
    }
    for (i, &(a, b)) in inst.demand.edges().iter().enumerate() {
        if inst.demands[i].is_positive() && !comps.iter().any(|c| c.contains(a) && c.contains(b)) {
            return Ok(false);
        }
    }
    for comp in comps {
        if comp.len() < 2 {
            continue;
        }
        if !check_cut_condition(&restrict(inst, comp)?)?.satisfied {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sub-instance induced on `keep`, relabelled in increasing order.
pub fn restrict(inst: &Instance, keep: VertexSet) -> Result<Instance> {
    let map: Vec<Option<usize>> = {
        let mut next = 0;
        (0..inst.vertex_count())
            .map(|v| {
                keep.contains(v).then(|| {
                    next += 1;
                    next - 1
                })
            })
            .collect()
    };
    let mut sup = Vec::new();
    let mut caps = Vec::new();
    for (e, &(a, b)) in inst.supply.edges().iter().enumerate() {
        if let (Some(x), Some(y)) = (map[a], map[b]) {
            sup.push((x, y));
            caps.push(inst.capacities[e].clone());
        }
    }
    let mut dem = Vec::new();
    let mut dems = Vec::new();
    for (i, &(a, b)) in inst.demand.edges().iter().enumerate() {
        if let (Some(x), Some(y)) = (map[a], map[b]) {
            dem.push((x, y));
            dems.push(inst.demands[i].clone());
        }
    }
    let n = keep.len();
    Instance::new(
        crate::Graph::new(n, sup)?,
        crate::Graph::new(n, dem)?,
        caps,
        dems,
    )
}

/// Integral weights with an even total at every vertex.
pub fn is_eulerian(inst: &Instance) -> bool {
    inst.is_integral()
        && (0..inst.vertex_count()).all(|v| {
            let w = inst.vertex_weight(v);
            (w.numer() % 2u8).is_zero()
        })
}

/// σ(C) is even for every C ⊆ V, by enumeration.
pub fn is_eulerian_by_cuts(inst: &Instance) -> Result<bool> {
    let n = inst.vertex_count();
    if n > PARITY_LIMIT {
        return Err(Error::SizeGuard {
            what: "cut parity enumeration vertices",
            actual: n,
            limit: PARITY_LIMIT,
        });
    }
    if !inst.is_integral() {
        return Ok(false);
    }
    let w = Scaled::of(inst)?;
    let edges = brute::weighted_edges(inst, &w);
    Ok((0u64..(1u64 << n)).all(|m| brute::surplus_of(&edges, VertexSet(m)) % 2 == 0))
}

/// Central cuts with zero surplus, one representative per cut, at most `cap`.
pub fn enumerate_tight_central_cuts(inst: &Instance, cap: usize) -> Result<Vec<Cut>> {
    let w = Scaled::of(inst)?;
    let Some((_, _, tight)) = brute::scan(inst, &w, cap)? else {
        return Ok(Vec::new());
    };
    tight.into_iter().map(|s| inst.cut(s)).collect()
}

/// A tight central set avoiding both endpoints of a demand edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bubble {
    pub demand: usize,
    pub u: usize,
    pub v: usize,
    pub side: VertexSet,
}

pub fn bubbles_for(inst: &Instance, demand: usize) -> Result<Vec<Bubble>> {
    if demand >= inst.demand.edge_count() {
        return Err(Error::MissingEdge { what: "demand", edge: demand });
    }
    let (u, v) = inst.demand.endpoints(demand);
    let n = inst.vertex_count();
    let mut out = Vec::new();
    for cut in enumerate_tight_central_cuts(inst, usize::MAX)? {
        let side = match (cut.side.contains(u), cut.side.contains(v)) {
            (false, false) => cut.side,
            (true, true) => cut.side.complement(n),
            _ => continue,
        };
        out.push(Bubble { demand, u, v, side });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BubbleCoverage {
    pub covered: bool,
    pub bubbles: Vec<Bubble>,
    /// A u–v path meeting no bubble.
    pub uncovered_path: Option<Path>,
    /// For the uncovered path, a tight cut it crosses an odd number of
    /// times greater than one, with that count.
    pub odd_crossing: Option<(VertexSet, usize)>,
}

pub fn is_covered_by_bubbles(inst: &Instance, demand: usize) -> Result<BubbleCoverage> {
    let bubbles = bubbles_for(inst, demand)?;
    let (u, v) = inst.demand.endpoints(demand);
    let union = bubbles.iter().fold(VertexSet::EMPTY, |acc, b| acc.union(b.side));
    let avoiding = inst.supply.all_vertices().difference(union);
    let Some(path) = inst.supply.bfs_path(u, v, avoiding) else {
        return Ok(BubbleCoverage { covered: true, bubbles, uncovered_path: None, odd_crossing: None });
    };
    // Prefer a witness that shows a multiply crossed tight cut.
    let tight = enumerate_tight_central_cuts(inst, usize::MAX)?;
    let odd_of = |p: &Path| {
        tight.iter().find_map(|c| {
            let k = p.crossings(c.side);
            (k > 1 && k % 2 == 1).then_some((c.side, k))
        })
    };
    let mut witness = (path.clone(), odd_of(&path));
    if witness.1.is_none() {
        for p in inst.supply.simple_paths(u, v, PATH_LIMIT)? {
            if p.vertex_set().is_disjoint(union) {
                if let Some(found) = odd_of(&p) {
                    witness = (p, Some(found));
                    break;
                }
            }
        }
    }
    Ok(BubbleCoverage {
        covered: false,
        bubbles,
        uncovered_path: Some(witness.0),
        odd_crossing: witness.1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::spgraph::is_series_parallel;
    use crate::{q, Graph};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn single_edge(cap: i64, dem: i64) -> Instance {
        Instance::new(
            Graph::new(2, vec![(0, 1)]).unwrap(),
            Graph::new(2, vec![(0, 1)]).unwrap(),
            vec![q(cap)],
            vec![q(dem)],
        )
        .unwrap()
    }

    fn singletons(n: usize, cuts: &[Cut]) -> Vec<usize> {
        let mut out: Vec<usize> = cuts
            .iter()
            .filter_map(|c| {
                let other = c.side.complement(n);
                (other.len() == 1).then(|| other.first().unwrap())
            })
            .collect();
        out.sort();
        out
    }

    #[test]
    fn unit_odd_spindle_is_tight_at_rim_vertices() {
        let inst = fixtures::spindle(3).unit_instance();
        let r = check_cut_condition(&inst).unwrap();
        assert!(r.satisfied);
        assert_eq!(r.min_surplus, q(0));
        assert_eq!(r.worst_cut.surplus, r.min_surplus);
        assert_eq!(singletons(5, &r.tight_cuts), vec![2, 3, 4]);
    }

    #[test]
    fn bad_k4_satisfies_cut_condition() {
        let inst = fixtures::bad_k4();
        assert!(check_cut_condition(&inst).unwrap().satisfied);
        assert!(is_eulerian(&inst));
        assert!(is_eulerian_by_cuts(&inst).unwrap());
    }

    #[test]
    fn overloaded_edge_violates() {
        let r = check_cut_condition(&single_edge(1, 3)).unwrap();
        assert!(!r.satisfied);
        assert_eq!(r.min_surplus, q(-2));
    }

    #[test]
    fn eulerian_examples() {
        let spindle = fixtures::spindle(3).unit_instance();
        assert!(is_eulerian(&spindle));
        assert!(is_eulerian_by_cuts(&spindle).unwrap());
        let e = single_edge(1, 0);
        assert!(!is_eulerian(&e));
        assert!(!is_eulerian_by_cuts(&e).unwrap());
    }

    #[test]
    fn slack_instance_has_no_tight_cuts() {
        assert!(enumerate_tight_central_cuts(&single_edge(3, 1), 10).unwrap().is_empty());
    }

    #[test]
    fn five_spindle_tight_singletons() {
        let inst = fixtures::spindle(5).unit_instance();
        let tight = enumerate_tight_central_cuts(&inst, TIGHT_CAP).unwrap();
        let s = singletons(7, &tight);
        for rim in 2..7 {
            assert!(s.contains(&rim));
        }
    }

    #[test]
    fn spindle_bubbles() {
        let inst = fixtures::spindle(3).unit_instance();
        let hub = inst.demand.edge_count() - 1;
        let mut sides: Vec<_> = bubbles_for(&inst, hub).unwrap().iter().map(|b| b.side).collect();
        sides.sort();
        assert_eq!(sides, vec![VertexSet::singleton(2), VertexSet::singleton(3), VertexSet::singleton(4)]);
        let cov = is_covered_by_bubbles(&inst, hub).unwrap();
        assert!(cov.covered);

        // Demand between rim vertices 2 and 3 sees the third rim vertex.
        let rim = (0..hub).find(|&i| inst.demand.endpoints(i) == (2, 3)).unwrap();
        let b = bubbles_for(&inst, rim).unwrap();
        assert!(b.iter().any(|b| b.side == VertexSet::singleton(4)));
        for b in &b {
            assert!(!b.side.contains(2) && !b.side.contains(3));
        }
    }

    #[test]
    fn single_edge_is_uncovered() {
        let inst = single_edge(1, 1);
        let cov = is_covered_by_bubbles(&inst, 0).unwrap();
        assert!(!cov.covered);
        assert_eq!(cov.uncovered_path.unwrap().edges, vec![0]);
        assert!(cov.odd_crossing.is_none());
    }

    #[test]
    fn five_spindle_hub_demand_is_covered() {
        let inst = fixtures::spindle(5).unit_instance();
        let hub = inst.demand.edge_count() - 1;
        assert!(is_covered_by_bubbles(&inst, hub).unwrap().covered);
    }

    #[test]
    fn engines_agree_on_random_series_parallel_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..120 {
            let n = rng.gen_range(2..=11);
            let k = rng.gen_range(1..=5);
            let inst = fixtures::random_sp_instance(&mut rng, n, k, 3, 3);
            assert!(is_series_parallel(&inst.supply));
            let a = check_cut_condition_with(&inst, CutEngine::BruteForce).unwrap();
            let b = check_cut_condition_with(&inst, CutEngine::TreeDp).unwrap();
            assert_eq!(a.min_surplus, b.min_surplus, "{inst:?}");
            assert_eq!(a.worst_cut.side, b.worst_cut.side, "{inst:?}");
        }
    }

    #[test]
    fn parity_tests_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let n = rng.gen_range(2..=8);
            let inst = fixtures::random_sp_instance(&mut rng, n, 3, 2, 2);
            assert_eq!(is_eulerian(&inst), is_eulerian_by_cuts(&inst).unwrap());
        }
    }

    #[test]
    fn disconnected_components_checked_separately() {
        let inst = Instance::new(
            Graph::new(4, vec![(0, 1), (2, 3)]).unwrap(),
            Graph::new(4, vec![(0, 1)]).unwrap(),
            vec![q(1), q(1)],
            vec![q(1)],
        )
        .unwrap();
        assert!(cut_condition_holds(&inst).unwrap());
        let bad = Instance::new(inst.supply.clone(), Graph::new(4, vec![(1, 2)]).unwrap(), vec![q(1), q(1)], vec![q(1)]).unwrap();
        assert!(!cut_condition_holds(&bad).unwrap());
        assert_eq!(check_cut_condition(&bad).unwrap_err(), Error::Disconnected);
    }
}
