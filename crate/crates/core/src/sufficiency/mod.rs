//! Cut-sufficiency of series-parallel pairs through odd-spindle minors.

mod search;

use num_traits::{One, Signed};
use rand::Rng;

use crate::canon::isomorphic;
use crate::cutcheck::check_cut_condition;
use crate::fixtures;
use crate::graph::VertexSet;
use crate::instance::{pullback, Instance, MinorTracker, Pair, PairMinorStep};
use crate::lp::min_congestion;
use crate::spgraph::has_k4_minor;
use crate::{Error, Rational, Result};
use search::{Model, ModelSearch};

/// Largest supply graph the exhaustive search accepts.
pub const SEARCH_LIMIT: usize = 14;

/// An odd-spindle minor: replaying `steps` on the pair gives the p-spindle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpindleWitness {
    pub p: usize,
    pub steps: Vec<PairMinorStep>,
    /// Minor vertices of the two hubs.
    pub hubs: [usize; 2],
    /// Minor vertices of the rim, in demand-cycle order.
    pub rim: Vec<usize>,
    /// Original vertices merged into each hub and each rim vertex, in the
    /// order hubs then rim.
    pub branch_sets: Vec<VertexSet>,
}

impl SpindleWitness {
    /// The pair obtained by replaying the steps.
    pub fn minor(&self, pair: &Pair) -> Result<Pair> {
        pair.apply_all(&self.steps)
    }

    pub fn verify(&self, pair: &Pair) -> Result<bool> {
        let minor = self.minor(pair)?;
        if self.p < 3 || self.p % 2 == 0 || !isomorphic(&minor, &fixtures::spindle(self.p))? {
            return Ok(false);
        }
        let [u, v] = self.hubs;
        let hub_ok = minor.demand.edges().iter().any(|&(a, b)| (a, b) == (u, v) || (a, b) == (v, u));
        let rim_ok = (0..self.p).all(|j| {
            let (a, b) = (self.rim[j], self.rim[(j + 1) % self.p]);
            minor.demand.edges().iter().any(|&e| e == (a, b) || e == (b, a))
        });
        Ok(hub_ok && rim_ok)
    }
}

/// Evidence for a cut-sufficient verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attestation {
    /// Blocks of the supply graph searched independently.
    pub blocks: usize,
    /// Seeded branch-set assignments examined by the search.
    pub models_examined: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SufficiencyVerdict {
    CutSufficient(Attestation),
    NotCutSufficient(SpindleWitness),
}

impl SufficiencyVerdict {
    pub fn is_cut_sufficient(&self) -> bool {
        matches!(self, SufficiencyVerdict::CutSufficient(_))
    }

    pub fn witness(&self) -> Option<&SpindleWitness> {
        match self {
            SufficiencyVerdict::NotCutSufficient(w) => Some(w),
            _ => None,
        }
    }
}

/// Searches the pair for an odd-spindle minor. The supply graph must be
/// connected.
pub fn find_odd_spindle_minor(pair: &Pair) -> Result<Option<SpindleWitness>> {
    Ok(search_pair(pair)?.0)
}

fn search_pair(pair: &Pair) -> Result<(Option<SpindleWitness>, usize)> {
    let n = pair.vertex_count();
    if n > SEARCH_LIMIT {
        return Err(Error::SizeGuard {
            what: "odd-spindle search vertices",
            actual: n,
            limit: SEARCH_LIMIT,
        });
    }
    if !pair.supply.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut search = ModelSearch::new(pair);
    let found = search.find();
    let examined = search.examined;
    match found {
        None => Ok((None, examined)),
        Some(model) => Ok((Some(witness_from_model(pair, &model)?), examined)),
    }
}

/// Deletes everything outside the model and contracts each branch set
/// along a spanning tree.
fn witness_from_model(pair: &Pair, model: &Model) -> Result<SpindleWitness> {
    let p = model.cycle_demands.len();
    let sets = &model.branch_sets;
    let part_of = |v: usize| sets.iter().position(|s| s.contains(v)).expect("branch sets cover V");
    let mut keep_demand = vec![false; pair.demand.edge_count()];
    keep_demand[model.hub_demand] = true;
    for &d in &model.cycle_demands {
        keep_demand[d] = true;
    }
    let mut tree = vec![false; pair.supply.edge_count()];
    for &s in sets {
        let root = s.first().expect("nonempty branch set");
        let mut seen = VertexSet::singleton(root);
        let mut queue = vec![root];
        while let Some(x) = queue.pop() {
            for &(y, e) in pair.supply.incident(x) {
                if s.contains(y) && !seen.contains(y) {
                    seen.insert(y);
                    tree[e] = true;
                    queue.push(y);
                }
            }
        }
    }
    let mut keep_supply = tree.clone();
    for j in 0..p {
        for hub in 0..2 {
            let e = (0..pair.supply.edge_count())
                .find(|&e| {
                    let (a, b) = pair.supply.endpoints(e);
                    let (x, y) = (part_of(a), part_of(b));
                    (x, y) == (2 + j, hub) || (x, y) == (hub, 2 + j)
                })
                .ok_or_else(|| Error::Internal("rim set does not touch a hub".into()))?;
            keep_supply[e] = true;
        }
    }
    let mut t = MinorTracker::new(pair.clone());
    for i in (0..pair.demand.edge_count()).rev() {
        if !keep_demand[i] {
            t.apply_mut(PairMinorStep::delete_demand(i))?;
        }
    }
    for e in (0..pair.supply.edge_count()).rev() {
        if !keep_supply[e] {
            t.apply_mut(PairMinorStep::delete_supply(e))?;
        }
    }
    for e in 0..pair.supply.edge_count() {
        if tree[e] {
            let cur = t
                .current_supply(e)
                .ok_or_else(|| Error::Internal("tree edge vanished".into()))?;
            t.apply_mut(PairMinorStep::contract(cur))?;
        }
    }
    let image = |s: VertexSet| t.vertex_map[s.first().expect("nonempty")];
    let w = SpindleWitness {
        p,
        steps: t.steps.clone(),
        hubs: [image(sets[0]), image(sets[1])],
        rim: sets[2..].iter().map(|&s| image(s)).collect(),
        branch_sets: sets.clone(),
    };
    if !w.verify(pair)? {
        return Err(Error::Internal("spindle witness failed to replay".into()));
    }
    Ok(w)
}

/// Decides cut-sufficiency of a pair with a connected series-parallel
/// supply graph. Each block is searched on its own, with the rest of the
/// graph contracted onto it.
pub fn decide_cut_sufficiency(pair: &Pair) -> Result<SufficiencyVerdict> {
    if !pair.supply.is_connected() {
        return Err(Error::Disconnected);
    }
    if has_k4_minor(&pair.supply) {
        return Err(Error::NotSeriesParallel);
    }
    let blocks = pair.supply.blocks().blocks;
    let mut examined = 0;
    for block in &blocks {
        let mut inside = vec![false; pair.supply.edge_count()];
        for &e in block {
            inside[e] = true;
        }
        let mut t = MinorTracker::new(pair.clone());
        for e in 0..pair.supply.edge_count() {
            if !inside[e] {
                // parallel copies of a contracted edge are already gone
                if let Some(cur) = t.current_supply(e) {
                    t.apply_mut(PairMinorStep::contract(cur))?;
                }
            }
        }
        if t.pair.vertex_count() < 5 {
            continue;
        }
        let (found, count) = search_pair(&t.pair)?;
        examined += count;
        if let Some(w) = found {
            let mut steps = t.steps.clone();
            steps.extend(w.steps.iter().copied());
            let lifted = SpindleWitness {
                steps,
                branch_sets: w
                    .branch_sets
                    .iter()
                    .map(|&s| (0..pair.vertex_count()).filter(|&x| s.contains(t.vertex_map[x])).collect())
                    .collect(),
                ..w
            };
            if !lifted.verify(pair)? {
                return Err(Error::Internal("lifted spindle witness failed to replay".into()));
            }
            return Ok(SufficiencyVerdict::NotCutSufficient(lifted));
        }
    }
    Ok(SufficiencyVerdict::CutSufficient(Attestation {
        blocks: blocks.len(),
        models_examined: examined,
    }))
}

/// Unit weights on the witness spindle pulled back to the pair.
pub fn pullback_instance(pair: &Pair, witness: &SpindleWitness) -> Result<Instance> {
    let minor = witness.minor(pair)?;
    pullback(pair, &witness.steps, &minor.unit_instance())
}

/// Random integral weights satisfying the cut condition with a tight cut
/// through every positive demand: capacities are drawn from `1..=max_cap`,
/// then demands are raised one unit at a time while the condition holds.
pub fn saturate_demands<R: Rng>(rng: &mut R, pair: &Pair, max_cap: i64) -> Result<Instance> {
    let m = pair.supply.edge_count();
    let k = pair.demand.edge_count();
    let caps: Vec<Rational> = (0..m).map(|_| Rational::from_integer(rng.gen_range(1..=max_cap).into())).collect();
    let mut inst = pair.with_weights(caps, vec![Rational::from_integer(0.into()); k])?;
    let mut open: Vec<usize> = (0..k).collect();
    while !open.is_empty() {
        let j = rng.gen_range(0..open.len());
        let i = open[j];
        inst.demands[i] += Rational::one();
        if !check_cut_condition(&inst)?.satisfied {
            inst.demands[i] -= Rational::one();
            open.swap_remove(j);
        }
    }
    Ok(inst)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossValidation {
    pub cut_sufficient: bool,
    /// Congestion of every sampled instance, or of the pullback instance.
    pub congestions: Vec<Rational>,
    /// The pullback instance satisfies the cut condition.
    pub pullback_feasible: Option<bool>,
    /// Samples whose congestion contradicts the verdict.
    pub mismatches: usize,
}

impl CrossValidation {
    pub fn consistent(&self) -> bool {
        self.mismatches == 0 && self.pullback_feasible != Some(false)
    }
}

/// Checks a verdict against exact congestions: sampled tight instances of
/// a cut-sufficient pair must route with congestion exactly 1, and the
/// pullback of a spindle witness must satisfy the cut condition yet need
/// congestion above 1.
pub fn cross_validate_sufficiency<R: Rng>(pair: &Pair, samples: usize, rng: &mut R) -> Result<CrossValidation> {
    let verdict = decide_cut_sufficiency(pair)?;
    match verdict {
        SufficiencyVerdict::CutSufficient(_) => {
            let mut congestions = Vec::with_capacity(samples);
            let mut mismatches = 0;
            for _ in 0..samples {
                let inst = saturate_demands(rng, pair, 3)?;
                if !inst.demands.iter().any(|d| d.is_positive()) {
                    continue;
                }
                let alpha = min_congestion(&inst)?.congestion;
                if !alpha.is_one() {
                    mismatches += 1;
                }
                congestions.push(alpha);
            }
            Ok(CrossValidation { cut_sufficient: true, congestions, pullback_feasible: None, mismatches })
        }
        SufficiencyVerdict::NotCutSufficient(w) => {
            let inst = pullback_instance(pair, &w)?;
            let feasible = check_cut_condition(&inst)?.satisfied;
            let alpha = min_congestion(&inst)?.congestion;
            let mismatches = usize::from(alpha <= Rational::one());
            Ok(CrossValidation {
                cut_sufficient: false,
                congestions: vec![alpha],
                pullback_feasible: Some(feasible),
                mismatches,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::canonical_form;
    use crate::{q, qf, Graph};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashMap;

    /// Depth-first search over single minor steps with canonical memo.
    fn has_odd_spindle_by_steps(pair: &Pair, memo: &mut HashMap<crate::canon::CanonicalForm, bool>) -> bool {
        let n = pair.vertex_count();
        if n < 5 || pair.demand.edge_count() < 4 || pair.supply.edge_count() < 6 || !pair.supply.is_connected() {
            return false;
        }
        let key = canonical_form(pair).unwrap();
        if let Some(&v) = memo.get(&key) {
            return v;
        }
        let p = n - 2;
        let mut found = p % 2 == 1 && isomorphic(pair, &fixtures::spindle(p)).unwrap();
        let steps = (0..pair.supply.edge_count())
            .flat_map(|e| [PairMinorStep::contract(e), PairMinorStep::delete_supply(e)])
            .chain((0..pair.demand.edge_count()).map(PairMinorStep::delete_demand));
        for s in steps {
            if found {
                break;
            }
            found = has_odd_spindle_by_steps(&pair.apply(s).unwrap(), memo);
        }
        memo.insert(key, found);
        found
    }

    fn oracle(pair: &Pair) -> bool {
        has_odd_spindle_by_steps(pair, &mut HashMap::new())
    }

    #[test]
    fn five_spindle_is_its_own_witness() {
        let pair = fixtures::spindle(5);
        let w = find_odd_spindle_minor(&pair).unwrap().unwrap();
        assert_eq!(w.p, 5);
        assert!(w.steps.is_empty());
        assert!(w.verify(&pair).unwrap());
    }

    #[test]
    fn three_spindle_is_not_cut_sufficient() {
        let pair = fixtures::spindle(3);
        let v = decide_cut_sufficiency(&pair).unwrap();
        assert_eq!(v.witness().unwrap().p, 3);
        let cv = cross_validate_sufficiency(&pair, 0, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(cv.congestions, vec![qf(4, 3)]);
        assert!(cv.consistent());
    }

    #[test]
    fn bad_k4_has_no_odd_spindle() {
        let pair = fixtures::bad_k4().pair();
        assert!(find_odd_spindle_minor(&pair).unwrap().is_none());
        assert_eq!(decide_cut_sufficiency(&pair).unwrap_err(), Error::NotSeriesParallel);
    }

    #[test]
    fn even_spindle_is_cut_sufficient() {
        let pair = fixtures::spindle(4);
        assert!(find_odd_spindle_minor(&pair).unwrap().is_none());
        assert!(decide_cut_sufficiency(&pair).unwrap().is_cut_sufficient());
        let cv = cross_validate_sufficiency(&pair, 10, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        assert!(cv.consistent(), "{cv:?}");
        assert!(cv.congestions.iter().all(|a| *a == q(1)));
    }

    #[test]
    fn few_demands_are_always_sufficient() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let n = rng.gen_range(3..=9);
            let pair = fixtures::random_sp_pair(&mut rng, n, 2);
            assert!(decide_cut_sufficiency(&pair).unwrap().is_cut_sufficient());
        }
    }

    #[test]
    fn spindle_inside_larger_graph() {
        // K_{2,3} with one rim vertex subdivided and a pendant triangle on a hub
        let g = Graph::new(
            8,
            vec![(0, 2), (2, 1), (0, 3), (3, 1), (0, 5), (5, 4), (4, 1), (1, 6), (6, 7), (7, 1)],
        )
        .unwrap();
        let h = Graph::new(8, vec![(2, 3), (3, 4), (5, 2), (0, 7), (6, 7)]).unwrap();
        let pair = Pair::new(g, h).unwrap();
        let v = decide_cut_sufficiency(&pair).unwrap();
        let w = v.witness().expect("contains a 3-spindle");
        assert!(w.verify(&pair).unwrap());
        assert_eq!(w.branch_sets.iter().map(|s| s.len()).sum::<usize>(), 8);
        let cv = cross_validate_sufficiency(&pair, 0, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        assert!(cv.consistent(), "{cv:?}");
    }

    /// Grows a small spindle by subdividing and doubling supply edges and
    /// by moving or adding demand edges.
    fn grown_spindle(rng: &mut ChaCha8Rng) -> Pair {
        let base = fixtures::spindle(rng.gen_range(3..=4));
        let mut n = base.vertex_count();
        let mut sup = base.supply.edges().to_vec();
        let mut dem = base.demand.edges().to_vec();
        for _ in 0..rng.gen_range(0..=2) {
            let e = rng.gen_range(0..sup.len());
            let (a, b) = sup[e];
            if rng.gen_bool(0.6) {
                sup[e] = (a, n);
                sup.push((n, b));
                n += 1;
            } else {
                sup.push((a, b));
            }
        }
        for _ in 0..rng.gen_range(0..=2) {
            let i = rng.gen_range(0..dem.len());
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            if a == b {
                continue;
            }
            if rng.gen_bool(0.5) {
                dem[i] = (a, b);
            } else {
                dem.push((a, b));
            }
        }
        Pair::new(Graph::new(n, sup).unwrap(), Graph::new(n, dem).unwrap()).unwrap()
    }

    #[test]
    fn model_search_agrees_with_step_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (mut positives, mut negatives) = (0, 0);
        for round in 0..60 {
            let pair = if round % 2 == 0 {
                grown_spindle(&mut rng)
            } else {
                let n = rng.gen_range(4..=6);
                let k = rng.gen_range(3..=5);
                fixtures::random_sp_pair(&mut rng, n, k)
            };
            let expected = oracle(&pair);
            if expected {
                positives += 1;
            } else {
                negatives += 1;
            }
            let found = find_odd_spindle_minor(&pair).unwrap();
            assert_eq!(found.is_some(), expected, "{pair:?}");
            if let Some(w) = found {
                assert!(w.verify(&pair).unwrap());
            }
        }
        assert!(positives > 5 && negatives > 5, "{positives} {negatives}");
    }

    #[test]
    fn saturated_instances_are_tight() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let pair = fixtures::spindle(4);
        let inst = saturate_demands(&mut rng, &pair, 3).unwrap();
        let r = check_cut_condition(&inst).unwrap();
        assert!(r.satisfied);
        assert_eq!(r.min_surplus, q(0));
    }
}
