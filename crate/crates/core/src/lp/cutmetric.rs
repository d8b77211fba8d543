//! Approximating a shortest-path metric by a nonnegative combination of
//! central cut metrics.

use num_traits::{Signed, Zero};

use super::flow::shortest_distance;
use super::simplex::{solve_lp, Relation, RationalLP, Sense};
use crate::cutcheck::central_sides;
use crate::graph::VertexSet;
use crate::instance::Pair;
use crate::{Error, Rational, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutMetricSolution {
    /// Central sides (containing vertex 0) with positive weight.
    pub cuts: Vec<(VertexSet, Rational)>,
    /// Smallest γ with Σ_{C ∋ e} x_C ≤ γ·l_e and Σ_{C ∋ i} x_C ≥ d_i.
    pub gamma: Rational,
    /// Optimal dual: capacities and demands satisfying the cut condition
    /// with Σ c_e l_e ≤ 1 and Σ D_i d_i = γ.
    pub capacities: Vec<Rational>,
    pub demands: Vec<Rational>,
}

impl CutMetricSolution {
    /// Σ_{C: e ∈ δ(C)} x_C for every supply edge.
    pub fn edge_load(&self, pair: &Pair) -> Vec<Rational> {
        pair.supply
            .edges()
            .iter()
            .map(|&(a, b)| self.separating(a, b))
            .collect()
    }

    /// Σ_{C: i ∈ δ(C)} x_C for every demand edge.
    pub fn demand_cover(&self, pair: &Pair) -> Vec<Rational> {
        pair.demand
            .edges()
            .iter()
            .map(|&(a, b)| self.separating(a, b))
            .collect()
    }

    fn separating(&self, a: usize, b: usize) -> Rational {
        self.cuts
            .iter()
            .filter(|(c, _)| c.contains(a) != c.contains(b))
            .map(|(_, x)| x.clone())
            .sum()
    }
}

pub fn cut_metric(pair: &Pair, lengths: &[Rational], distances: &[Rational]) -> Result<CutMetricSolution> {
    let m = pair.supply.edge_count();
    let k = pair.demand.edge_count();
    if lengths.len() != m {
        return Err(Error::WeightCount { what: "lengths", expected: m, actual: lengths.len() });
    }
    if distances.len() != k {
        return Err(Error::WeightCount { what: "distances", expected: k, actual: distances.len() });
    }
    if let Some(e) = lengths.iter().position(|l| l.is_negative()) {
        return Err(Error::NegativeWeight { what: "length", edge: e });
    }
    if let Some(i) = distances.iter().position(|d| d.is_negative()) {
        return Err(Error::NegativeWeight { what: "distance", edge: i });
    }
    if !pair.supply.is_connected() {
        return Err(Error::Disconnected);
    }
    for (i, &(a, b)) in pair.demand.edges().iter().enumerate() {
        if distances[i] > shortest_distance(&pair.supply, lengths, a, b) {
            return Err(Error::MetricViolation(i));
        }
    }
    let sides = central_sides(&pair.supply)?;
    let gamma = sides.len();
    let mut objective = vec![Rational::zero(); gamma + 1];
    objective[gamma] = Rational::from_integer(1.into());
    let mut lp = RationalLP::new(Sense::Minimize, objective);
    let one = Rational::from_integer(1.into());
    let crossing = |a: usize, b: usize| -> Vec<(usize, Rational)> {
        sides
            .iter()
            .enumerate()
            .filter(|(_, c)| c.contains(a) != c.contains(b))
            .map(|(j, _)| (j, one.clone()))
            .collect()
    };
    for (e, &(a, b)) in pair.supply.edges().iter().enumerate() {
        let mut row = crossing(a, b);
        row.push((gamma, -lengths[e].clone()));
        lp.add(row, Relation::Le, Rational::zero());
    }
    for (i, &(a, b)) in pair.demand.edges().iter().enumerate() {
        lp.add(crossing(a, b), Relation::Ge, distances[i].clone());
    }
    let sol = solve_lp(&lp)?.optimal()?;
    let cuts = sides
        .iter()
        .zip(&sol.values)
        .filter(|(_, x)| x.is_positive())
        .map(|(&c, x)| (c, x.clone()))
        .collect();
    Ok(CutMetricSolution {
        cuts,
        gamma: sol.objective,
        capacities: (0..m).map(|e| -sol.duals[e].clone()).collect(),
        demands: (0..k).map(|i| sol.duals[m + i].clone()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lp::solve_congestion;
    use crate::{q, qf, Graph, Instance};

    #[test]
    fn single_edge_is_its_own_cut() {
        let g = Graph::new(2, vec![(0, 1)]).unwrap();
        let pair = Pair::new(g.clone(), g).unwrap();
        let s = cut_metric(&pair, &[q(1)], &[q(1)]).unwrap();
        assert_eq!(s.gamma, q(1));
        assert_eq!(s.cuts, vec![(VertexSet::singleton(0), q(1))]);
    }

    #[test]
    fn spindle_metric_distortion_matches_congestion() {
        let inst = fixtures::spindle(3).unit_instance();
        let cert = solve_congestion(&inst).unwrap();
        let s = cut_metric(&inst.pair(), &cert.metric.lengths, &cert.metric.distances).unwrap();
        assert_eq!(s.gamma, qf(4, 3));
    }

    #[test]
    fn tree_metrics_embed_exactly() {
        // a star with a path arm
        let g = Graph::new(5, vec![(0, 1), (0, 2), (0, 3), (3, 4)]).unwrap();
        let h = Graph::new(5, vec![(1, 2), (1, 4), (2, 4), (0, 4)]).unwrap();
        let pair = Pair::new(g.clone(), h.clone()).unwrap();
        let lengths = vec![q(1), q(2), qf(1, 2), q(3)];
        let d: Vec<Rational> = h.edges().iter().map(|&(a, b)| shortest_distance(&g, &lengths, a, b)).collect();
        assert_eq!(cut_metric(&pair, &lengths, &d).unwrap().gamma, q(1));
    }

    #[test]
    fn dual_satisfies_cut_condition() {
        let inst = fixtures::spindle(5).unit_instance();
        let cert = solve_congestion(&inst).unwrap();
        let s = cut_metric(&inst.pair(), &cert.metric.lengths, &cert.metric.distances).unwrap();
        let dual = Instance::new(inst.supply.clone(), inst.demand.clone(), s.capacities.clone(), s.demands.clone()).unwrap();
        assert!(crate::cutcheck::check_cut_condition(&dual).unwrap().satisfied);
        let obj: Rational = s.demands.iter().zip(&cert.metric.distances).map(|(a, b)| a * b).sum();
        assert_eq!(obj, s.gamma);
        let norm: Rational = s.capacities.iter().zip(&cert.metric.lengths).map(|(a, b)| a * b).sum();
        assert!(norm <= q(1));
    }

    #[test]
    fn metric_violation_is_rejected() {
        let g = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let h = Graph::new(3, vec![(0, 2)]).unwrap();
        let pair = Pair::new(g, h).unwrap();
        assert_eq!(cut_metric(&pair, &[q(1), q(1)], &[q(3)]).unwrap_err(), Error::MetricViolation(0));
    }
}
