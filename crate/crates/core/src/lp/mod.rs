//! Exact linear programs: the simplex kernel, minimum congestion with its
//! dual metric, cut-cone approximation of metrics, and the alternating
//! search for large flow-cut gaps.

mod cutmetric;
mod flow;
mod general;
mod simplex;

pub use flow::{
    decompose, dual_metric, min_congestion, shortest_distance, shortest_distances,
    solve_congestion, CongestionCertificate, MetricAssignment, MultiflowSolution,
};
pub use cutmetric::{cut_metric, CutMetricSolution};
pub use general::{
    bubble_sufficiency_test, general_solution, general_solution_from, general_solution_limited, general_solution_rounds,
    verify_complementary_slackness,
    BubbleVerdict, CsReport, CsViolation, GeneralSolution, MAX_ROUNDS, STALL_ROUNDS,
};
pub use simplex::{solve_lp, Constraint, LpOutcome, LpSolution, RationalLP, Relation, Sense};
