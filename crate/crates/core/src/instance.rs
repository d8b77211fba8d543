//! Instances, cuts, surplus and pair minors.

use num_traits::{One, Signed, Zero};

use crate::graph::{Graph, VertexSet};
use crate::{Error, Rational, Result};

/// A supply graph and a demand graph on one vertex set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pair {
    pub supply: Graph,
    pub demand: Graph,
}

impl Pair {
    pub fn new(supply: Graph, demand: Graph) -> Result<Self> {
        if supply.vertex_count() != demand.vertex_count() {
            return Err(Error::Precondition(format!(
                "supply has {} vertices but demand has {}",
                supply.vertex_count(),
                demand.vertex_count()
            )));
        }
        Ok(Pair { supply, demand })
    }

    pub fn vertex_count(&self) -> usize {
        self.supply.vertex_count()
    }

    /// Instance with every capacity and demand equal to one.
    pub fn unit_instance(&self) -> Instance {
        Instance::new(
            self.supply.clone(),
            self.demand.clone(),
            vec![Rational::one(); self.supply.edge_count()],
            vec![Rational::one(); self.demand.edge_count()],
        )
        .expect("unit weights are valid")
    }

    pub fn with_weights(&self, capacities: Vec<Rational>, demands: Vec<Rational>) -> Result<Instance> {
        Instance::new(self.supply.clone(), self.demand.clone(), capacities, demands)
    }

    /// Drop vertices with no supply and no demand edge, relabelling the rest.
    pub fn without_isolated(&self) -> Pair {
        let n = self.vertex_count();
        let mut keep = vec![false; n];
        for &(a, b) in self.supply.edges().iter().chain(self.demand.edges()) {
            keep[a] = true;
            keep[b] = true;
        }
        let mut map = vec![usize::MAX; n];
        let mut next = 0;
        for v in 0..n {
            if keep[v] {
                map[v] = next;
                next += 1;
            }
        }
        let relabel = |g: &Graph| {
            Graph::new(next, g.edges().iter().map(|&(a, b)| (map[a], map[b])).collect())
                .expect("relabelled graph is valid")
        };
        Pair {
            supply: relabel(&self.supply),
            demand: relabel(&self.demand),
        }
    }

    pub fn apply(&self, step: PairMinorStep) -> Result<Pair> {
        Ok(MinorTracker::new(self.clone()).apply(step)?.pair)
    }

    pub fn apply_all(&self, steps: &[PairMinorStep]) -> Result<Pair> {
        let mut t = MinorTracker::new(self.clone());
        for &s in steps {
            t = t.apply(s)?;
        }
        Ok(t.pair)
    }
}

/// A multiflow instance: a pair with capacities on supply edges and demands on demand edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub supply: Graph,
    pub demand: Graph,
    pub capacities: Vec<Rational>,
    pub demands: Vec<Rational>,
}

/// A cut with its crossing edges and surplus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cut {
    pub side: VertexSet,
    pub crossing_supply: Vec<usize>,
    pub crossing_demand: Vec<usize>,
    pub surplus: Rational,
}

impl Instance {
    pub fn new(
        supply: Graph,
        demand: Graph,
        capacities: Vec<Rational>,
        demands: Vec<Rational>,
    ) -> Result<Self> {
        if supply.vertex_count() != demand.vertex_count() {
            return Err(Error::Precondition(format!(
                "supply has {} vertices but demand has {}",
                supply.vertex_count(),
                demand.vertex_count()
            )));
        }
        if capacities.len() != supply.edge_count() {
            return Err(Error::WeightCount {
                what: "supply",
                expected: supply.edge_count(),
                actual: capacities.len(),
            });
        }
        if demands.len() != demand.edge_count() {
            return Err(Error::WeightCount {
                what: "demand",
                expected: demand.edge_count(),
                actual: demands.len(),
            });
        }
        if let Some(e) = capacities.iter().position(|c| c.is_negative()) {
            return Err(Error::NegativeWeight { what: "supply", edge: e });
        }
        if let Some(e) = demands.iter().position(|d| d.is_negative()) {
            return Err(Error::NegativeWeight { what: "demand", edge: e });
        }
        Ok(Instance {
            supply,
            demand,
            capacities,
            demands,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.supply.vertex_count()
    }

    pub fn pair(&self) -> Pair {
        Pair {
            supply: self.supply.clone(),
            demand: self.demand.clone(),
        }
    }

    pub fn total_demand(&self) -> Rational {
        self.demands.iter().sum()
    }

    pub fn total_capacity(&self) -> Rational {
        self.capacities.iter().sum()
    }

    pub fn is_integral(&self) -> bool {
        self.capacities.iter().chain(&self.demands).all(|w| w.is_integer())
    }

    /// σ(C): crossing capacity minus crossing demand.
    pub fn surplus(&self, side: VertexSet) -> Result<Rational> {
        self.supply.check_set(side)?;
        Ok(self.surplus_unchecked(side))
    }

    pub(crate) fn surplus_unchecked(&self, side: VertexSet) -> Rational {
        let mut s = Rational::zero();
        for (e, &(a, b)) in self.supply.edges().iter().enumerate() {
            if side.contains(a) != side.contains(b) {
                s += &self.capacities[e];
            }
        }
        for (i, &(a, b)) in self.demand.edges().iter().enumerate() {
            if side.contains(a) != side.contains(b) {
                s -= &self.demands[i];
            }
        }
        s
    }

    /// σ(X, Y) for disjoint X and Y.
    pub fn pair_surplus(&self, x: VertexSet, y: VertexSet) -> Result<Rational> {
        self.supply.check_set(x)?;
        self.supply.check_set(y)?;
        if !x.is_disjoint(y) {
            return Err(Error::OverlappingSets);
        }
        let mut s = Rational::zero();
        for e in self.supply.edges_between(x, y) {
            s += &self.capacities[e];
        }
        for i in self.demand.edges_between(x, y) {
            s -= &self.demands[i];
        }
        Ok(s)
    }

    pub fn cut(&self, side: VertexSet) -> Result<Cut> {
        let surplus = self.surplus(side)?;
        Ok(Cut {
            side,
            crossing_supply: self.supply.crossing_edges(side),
            crossing_demand: self.demand.crossing_edges(side),
            surplus,
        })
    }

    /// Both `side` and its complement induce connected supply subgraphs.
    pub fn is_central(&self, side: VertexSet) -> Result<bool> {
        self.supply.check_set(side)?;
        let rest = side.complement(self.vertex_count());
        if side.is_empty() || rest.is_empty() {
            return Err(Error::Precondition(
                "central cuts need both sides nonempty".into(),
            ));
        }
        Ok(self.supply.induces_connected(side) && self.supply.induces_connected(rest))
    }

    /// Capacity plus demand incident to `v`.
    pub fn vertex_weight(&self, v: usize) -> Rational {
        let mut w = Rational::zero();
        for &(_, e) in self.supply.incident(v) {
            w += &self.capacities[e];
        }
        for &(_, i) in self.demand.incident(v) {
            w += &self.demands[i];
        }
        w
    }

    /// Same instance with every weight multiplied by `k`.
    pub fn scaled(&self, k: &Rational) -> Instance {
        Instance {
            supply: self.supply.clone(),
            demand: self.demand.clone(),
            capacities: self.capacities.iter().map(|c| c * k).collect(),
            demands: self.demands.iter().map(|d| d * k).collect(),
        }
    }

    /// Drop zero-capacity supply edges and zero demands. Returns the reduced
    /// instance with the surviving original supply and demand edge indices.
    pub fn normalized(&self) -> (Instance, Vec<usize>, Vec<usize>) {
        let keep_s: Vec<usize> = (0..self.capacities.len())
            .filter(|&e| !self.capacities[e].is_zero())
            .collect();
        let keep_d: Vec<usize> = (0..self.demands.len())
            .filter(|&i| !self.demands[i].is_zero())
            .collect();
        let n = self.vertex_count();
        let supply = Graph::new(n, keep_s.iter().map(|&e| self.supply.endpoints(e)).collect())
            .expect("subgraph is valid");
        let demand = Graph::new(n, keep_d.iter().map(|&i| self.demand.endpoints(i)).collect())
            .expect("subgraph is valid");
        let inst = Instance {
            supply,
            demand,
            capacities: keep_s.iter().map(|&e| self.capacities[e].clone()).collect(),
            demands: keep_d.iter().map(|&i| self.demands[i].clone()).collect(),
        };
        (inst, keep_s, keep_d)
    }

    /// Every demand has both endpoints in one supply component.
    pub fn check_demands_connected(&self) -> Result<()> {
        let comps = self.supply.components();
        for (i, &(a, b)) in self.demand.edges().iter().enumerate() {
            if self.demands[i].is_zero() {
                continue;
            }
            if !comps.iter().any(|c| c.contains(a) && c.contains(b)) {
                return Err(Error::DemandDisconnected(i));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepKind {
    ContractSupply,
    DeleteSupply,
    DeleteDemand,
}

/// One pair-minor operation on the edge with the given index at the time
/// the step is applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PairMinorStep {
    pub kind: StepKind,
    pub edge: usize,
}

impl PairMinorStep {
    pub fn contract(edge: usize) -> Self {
        PairMinorStep {
            kind: StepKind::ContractSupply,
            edge,
        }
    }

    pub fn delete_supply(edge: usize) -> Self {
        PairMinorStep {
            kind: StepKind::DeleteSupply,
            edge,
        }
    }

    pub fn delete_demand(edge: usize) -> Self {
        PairMinorStep {
            kind: StepKind::DeleteDemand,
            edge,
        }
    }
}

/// Fate of an original edge after a sequence of minor steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeFate {
    /// Still present at the given current index.
    Kept(usize),
    Contracted,
    /// Explicitly deleted or removed as a self-loop.
    Removed,
}

/// A pair under minor operations, remembering where the original vertices
/// and edges went. Contracting `(a, b)` with `a < b` merges `b` into `a`;
/// higher vertex labels shift down by one.
#[derive(Clone, Debug)]
pub struct MinorTracker {
    pub pair: Pair,
    /// Original vertex → current vertex.
    pub vertex_map: Vec<usize>,
    /// Current supply edge → original supply edge.
    pub supply_origin: Vec<usize>,
    /// Current demand edge → original demand edge.
    pub demand_origin: Vec<usize>,
    supply_fate: Vec<EdgeFate>,
    demand_fate: Vec<EdgeFate>,
    pub steps: Vec<PairMinorStep>,
}

impl MinorTracker {
    pub fn new(pair: Pair) -> Self {
        let n = pair.vertex_count();
        let ms = pair.supply.edge_count();
        let md = pair.demand.edge_count();
        MinorTracker {
            vertex_map: (0..n).collect(),
            supply_origin: (0..ms).collect(),
            demand_origin: (0..md).collect(),
            supply_fate: (0..ms).map(EdgeFate::Kept).collect(),
            demand_fate: (0..md).map(EdgeFate::Kept).collect(),
            steps: Vec::new(),
            pair,
        }
    }

    pub fn supply_fate(&self, original: usize) -> EdgeFate {
        self.supply_fate[original]
    }

    pub fn demand_fate(&self, original: usize) -> EdgeFate {
        self.demand_fate[original]
    }

    pub fn apply(mut self, step: PairMinorStep) -> Result<Self> {
        self.apply_mut(step)?;
        Ok(self)
    }

    pub fn apply_mut(&mut self, step: PairMinorStep) -> Result<()> {
        match step.kind {
            StepKind::ContractSupply => self.contract(step.edge)?,
            StepKind::DeleteSupply => {
                if step.edge >= self.pair.supply.edge_count() {
                    return Err(Error::MissingEdge {
                        what: "supply",
                        edge: step.edge,
                    });
                }
                let orig = self.supply_origin.remove(step.edge);
                self.supply_fate[orig] = EdgeFate::Removed;
                let mut edges = self.pair.supply.edges().to_vec();
                edges.remove(step.edge);
                self.pair.supply = Graph::new(self.pair.vertex_count(), edges)?;
            }
            StepKind::DeleteDemand => {
                if step.edge >= self.pair.demand.edge_count() {
                    return Err(Error::MissingEdge {
                        what: "demand",
                        edge: step.edge,
                    });
                }
                let orig = self.demand_origin.remove(step.edge);
                self.demand_fate[orig] = EdgeFate::Removed;
                let mut edges = self.pair.demand.edges().to_vec();
                edges.remove(step.edge);
                self.pair.demand = Graph::new(self.pair.vertex_count(), edges)?;
            }
        }
        self.refresh_fates();
        self.steps.push(step);
        Ok(())
    }

    fn contract(&mut self, e: usize) -> Result<()> {
        if e >= self.pair.supply.edge_count() {
            return Err(Error::MissingEdge {
                what: "supply",
                edge: e,
            });
        }
        let (a, b) = self.pair.supply.endpoints(e);
        let (keep, gone) = (a.min(b), a.max(b));
        let relabel = |v: usize| {
            let v = if v == gone { keep } else { v };
            if v > gone {
                v - 1
            } else {
                v
            }
        };
        let n = self.pair.vertex_count() - 1;
        let contracted = self.supply_origin[e];
        self.supply_fate[contracted] = EdgeFate::Contracted;

        let mut s_edges = Vec::new();
        let mut s_origin = Vec::new();
        for (i, &(x, y)) in self.pair.supply.edges().iter().enumerate() {
            if i == e {
                continue;
            }
            let (x, y) = (relabel(x), relabel(y));
            if x == y {
                self.supply_fate[self.supply_origin[i]] = EdgeFate::Removed;
            } else {
                s_edges.push((x, y));
                s_origin.push(self.supply_origin[i]);
            }
        }
        let mut d_edges = Vec::new();
        let mut d_origin = Vec::new();
        for (i, &(x, y)) in self.pair.demand.edges().iter().enumerate() {
            let (x, y) = (relabel(x), relabel(y));
            if x == y {
                self.demand_fate[self.demand_origin[i]] = EdgeFate::Removed;
            } else {
                d_edges.push((x, y));
                d_origin.push(self.demand_origin[i]);
            }
        }
        for v in self.vertex_map.iter_mut() {
            *v = relabel(*v);
        }
        self.pair = Pair {
            supply: Graph::new(n, s_edges)?,
            demand: Graph::new(n, d_edges)?,
        };
        self.supply_origin = s_origin;
        self.demand_origin = d_origin;
        Ok(())
    }

    fn refresh_fates(&mut self) {
        for (i, &o) in self.supply_origin.iter().enumerate() {
            self.supply_fate[o] = EdgeFate::Kept(i);
        }
        for (i, &o) in self.demand_origin.iter().enumerate() {
            self.demand_fate[o] = EdgeFate::Kept(i);
        }
    }

    /// Current index of an original supply edge, if it survives.
    pub fn current_supply(&self, original: usize) -> Option<usize> {
        match self.supply_fate[original] {
            EdgeFate::Kept(i) => Some(i),
            _ => None,
        }
    }

    pub fn current_demand(&self, original: usize) -> Option<usize> {
        match self.demand_fate[original] {
            EdgeFate::Kept(i) => Some(i),
            _ => None,
        }
    }
}

/// Pull weights of a minor back to the original pair: deleted or looped
/// edges get zero, contracted supply edges get `1 + total minor demand`,
/// surviving edges copy the minor's weight.
pub fn pullback(pair: &Pair, steps: &[PairMinorStep], minor: &Instance) -> Result<Instance> {
    let mut t = MinorTracker::new(pair.clone());
    for &s in steps {
        t.apply_mut(s)?;
    }
    if t.pair.supply.edges() != minor.supply.edges() || t.pair.demand.edges() != minor.demand.edges() {
        return Err(Error::Precondition(
            "minor weights do not match the replayed minor".into(),
        ));
    }
    let large = Rational::one() + minor.total_demand();
    let capacities = (0..pair.supply.edge_count())
        .map(|e| match t.supply_fate(e) {
            EdgeFate::Kept(i) => minor.capacities[i].clone(),
            EdgeFate::Contracted => large.clone(),
            EdgeFate::Removed => Rational::zero(),
        })
        .collect();
    let demands = (0..pair.demand.edge_count())
        .map(|i| match t.demand_fate(i) {
            EdgeFate::Kept(j) => minor.demands[j].clone(),
            _ => Rational::zero(),
        })
        .collect();
    pair.with_weights(capacities, demands)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::{q, qf};

    #[test]
    fn surplus_of_empty_set_is_zero() {
        let inst = fixtures::spindle(3).unit_instance();
        assert_eq!(inst.surplus(VertexSet::EMPTY).unwrap(), q(0));
    }

    #[test]
    fn spindle_rim_singleton_is_tight() {
        let inst = fixtures::spindle(3).unit_instance();
        // vertex 2 is a rim vertex: two supply edges, two cycle demands
        assert_eq!(inst.surplus(VertexSet::singleton(2)).unwrap(), q(0));
        let full = VertexSet::full(5);
        let s = VertexSet::singleton(2);
        assert_eq!(inst.surplus(s.complement(5)).unwrap(), q(0));
        assert_eq!(inst.surplus(full).unwrap(), q(0));
    }

    #[test]
    fn bad_k4_thick_endpoint_surplus() {
        // u2 has supply degree two and the thick demand of 2
        let inst = fixtures::bad_k4();
        assert_eq!(inst.surplus(VertexSet::singleton(fixtures::BADK4_U2)).unwrap(), q(0));
        assert_eq!(inst.surplus(VertexSet::singleton(fixtures::BADK4_U1)).unwrap(), q(2));
    }

    #[test]
    fn unknown_vertex_is_rejected() {
        let inst = fixtures::spindle(3).unit_instance();
        assert_eq!(inst.surplus(VertexSet::singleton(7)), Err(Error::UnknownVertex(7)));
    }

    #[test]
    fn pair_surplus_examples() {
        let single = Instance::new(
            Graph::new(2, vec![(0, 1)]).unwrap(),
            Graph::empty(2),
            vec![q(5)],
            vec![],
        )
        .unwrap();
        let a = VertexSet::singleton(0);
        let b = VertexSet::singleton(1);
        assert_eq!(single.pair_surplus(a, b).unwrap(), q(5));
        assert_eq!(single.pair_surplus(a, VertexSet::EMPTY).unwrap(), q(0));
        assert_eq!(single.pair_surplus(a, a), Err(Error::OverlappingSets));

        let sp = fixtures::spindle(3).unit_instance();
        let u = VertexSet::singleton(fixtures::SPINDLE_U);
        let rim = VertexSet::singleton(2);
        assert_eq!(sp.pair_surplus(u, rim).unwrap(), q(1));
        let _ = qf(1, 2);
    }

    #[test]
    fn central_examples() {
        let path = Instance::new(
            Graph::new(3, vec![(0, 1), (1, 2)]).unwrap(),
            Graph::empty(3),
            vec![q(1), q(1)],
            vec![],
        )
        .unwrap();
        assert!(!path.is_central(VertexSet::from_iter([0, 2])).unwrap());
        assert!(path.is_central(VertexSet::singleton(0)).unwrap());
        let sp = fixtures::spindle(3).unit_instance();
        assert!(sp.is_central(VertexSet::from_iter([fixtures::SPINDLE_U, 2])).unwrap());
    }

    #[test]
    fn contracting_the_only_edge() {
        let pair = Pair::new(Graph::new(2, vec![(0, 1)]).unwrap(), Graph::empty(2)).unwrap();
        let m = pair.apply(PairMinorStep::contract(0)).unwrap();
        assert_eq!(m.vertex_count(), 1);
        assert_eq!(m.supply.edge_count(), 0);
    }

    #[test]
    fn deleting_a_cycle_demand() {
        let pair = fixtures::spindle(3);
        let m = pair.apply(PairMinorStep::delete_demand(1)).unwrap();
        assert_eq!(m.demand.edge_count(), 3);
        assert_eq!(m.supply, pair.supply);
    }

    #[test]
    fn contraction_moves_demands_to_the_hub() {
        let pair = fixtures::spindle(3);
        // supply edge 0 is (u, a1) with u = 0, a1 = 2
        assert_eq!(pair.supply.endpoints(0), (0, 2));
        let m = pair.apply(PairMinorStep::contract(0)).unwrap();
        assert_eq!(m.vertex_count(), 4);
        // the old edge (a1, v) is now a u–v edge
        assert!(m.supply.edges().iter().any(|&(a, b)| (a, b) == (0, 1) || (a, b) == (1, 0)));
        // both cycle demands at a1 now end at u
        let at_u = m.demand.incident(0).len();
        assert_eq!(at_u, 3);
    }

    #[test]
    fn missing_edge_is_reported() {
        let pair = fixtures::spindle(3);
        assert!(matches!(
            pair.apply(PairMinorStep::contract(99)),
            Err(Error::MissingEdge { .. })
        ));
        assert!(matches!(
            pair.apply(PairMinorStep::delete_demand(4)),
            Err(Error::MissingEdge { .. })
        ));
    }

    #[test]
    fn pullback_of_identity_is_the_instance() {
        let pair = fixtures::spindle(3);
        let unit = pair.unit_instance();
        assert_eq!(pullback(&pair, &[], &unit).unwrap(), unit);
    }
}
