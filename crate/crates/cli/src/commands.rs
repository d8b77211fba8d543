//! The subcommands, as functions from parsed input to a report, an optional
//! certificate document and an exit status.

use std::fmt::Write as _;

use num_traits::{One, Signed};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spflow::cutcheck::{check_cut_condition, is_eulerian, restrict};
use spflow::lp::{general_solution_limited, general_solution_rounds, solve_congestion};
use spflow::routing::{solve_half_integral, solve_integral, RoutingOutcome};
use spflow::spgraph::{has_k4_minor, recognize_series_parallel, Recognition};
use spflow::sufficiency::{decide_cut_sufficiency, find_odd_spindle_minor, saturate_demands, SufficiencyVerdict};
use spflow::{fixtures, Cut, Instance, Rational, VertexSet};

use crate::document::{rational, write_cut, write_instance, write_k4, write_refusal, write_solution, write_witness};
use crate::CliError;

pub const OK: u8 = 0;
pub const NEGATIVE: u8 = 1;
pub const INPUT_ERROR: u8 = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub stdout: String,
    pub certificate: Option<String>,
    pub code: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Fractional,
    Integral,
    Half,
}

fn side_list(s: VertexSet) -> String {
    s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

/// Worst cut over all supply components, in the instance's own labels.
fn worst_cut(inst: &Instance) -> Result<Option<Cut>, CliError> {
    let comps = inst.supply.components();
    for &(a, b) in inst.demand.edges() {
        if let Some(&c) = comps.iter().find(|c| c.contains(a) && !c.contains(b)) {
            let cut = inst.cut(c)?;
            if cut.surplus.is_negative() {
                return Ok(Some(cut));
            }
        }
    }
    let mut worst: Option<Cut> = None;
    for &c in comps.iter().filter(|c| c.len() >= 2) {
        let report = check_cut_condition(&restrict(inst, c)?)?;
        let labels = c.to_vec();
        let cut = inst.cut(report.worst_cut.side.iter().map(|x| labels[x]).collect())?;
        if worst.as_ref().map_or(true, |w| cut.surplus < w.surplus) {
            worst = Some(cut);
        }
    }
    Ok(worst)
}

pub fn check(inst: &Instance) -> Result<Report, CliError> {
    let cut = worst_cut(inst)?;
    let holds = cut.as_ref().map_or(true, |c| !c.surplus.is_negative());
    let mut out = String::new();
    let _ = writeln!(out, "cut-condition {}", if holds { "holds" } else { "violated" });
    if let Some(c) = &cut {
        let _ = writeln!(out, "min-surplus {}", rational(&c.surplus));
        let _ = writeln!(out, "worst-cut {}", side_list(c.side));
    }
    let _ = writeln!(out, "eulerian {}", if is_eulerian(inst) { "yes" } else { "no" });
    Ok(Report {
        stdout: out,
        certificate: cut.as_ref().map(write_cut),
        code: if holds { OK } else { NEGATIVE },
    })
}

pub fn solve(inst: &Instance, mode: Mode) -> Result<Report, CliError> {
    let (name, outcome) = match mode {
        Mode::Fractional => {
            let sol = solve_congestion(inst)?.solution;
            let doc = write_solution("fractional", inst, &sol);
            let code = if sol.congestion > Rational::one() { NEGATIVE } else { OK };
            return Ok(Report { stdout: doc.clone(), certificate: Some(doc), code });
        }
        Mode::Integral => ("integral", solve_integral(inst)?),
        Mode::Half => ("half-integral", solve_half_integral(inst)?),
    };
    let (doc, code) = match outcome {
        RoutingOutcome::Routed(r) => (write_solution(name, inst, &r.solution), OK),
        RoutingOutcome::Refused(refusal) => (write_refusal(&refusal), NEGATIVE),
    };
    Ok(Report { stdout: doc.clone(), certificate: Some(doc), code })
}

pub fn sufficiency(inst: &Instance) -> Result<Report, CliError> {
    let pair = inst.pair();
    let mut out = String::new();
    if has_k4_minor(&pair.supply) {
        out.push_str("scope series-parallel theorem does not apply: supply graph is not series-parallel\n");
        out.push_str("verdict unknown\n");
        for block in pair.supply.blocks().blocks {
            let (local, verts, _) = pair.supply.edge_subgraph(&block);
            if let Ok(Recognition::K4Minor(mut w)) = recognize_series_parallel(&local) {
                for s in w.branch_sets.iter_mut() {
                    *s = s.iter().map(|x| verts[x]).collect();
                }
                out.push_str(&write_k4(&w));
                break;
            }
        }
        if pair.supply.is_connected() {
            let spindle = find_odd_spindle_minor(&pair)?;
            let _ = writeln!(out, "odd-spindle-minor {}", spindle.map_or("none".into(), |w| w.p.to_string()));
        }
        return Ok(Report { stdout: out, certificate: None, code: NEGATIVE });
    }
    for c in pair.supply.components().into_iter().filter(|c| c.len() >= 2) {
        let sub = restrict(inst, c)?;
        if sub.demand.edge_count() == 0 {
            continue;
        }
        if let SufficiencyVerdict::NotCutSufficient(w) = decide_cut_sufficiency(&sub.pair())? {
            out.push_str("verdict not-cut-sufficient\n");
            let _ = writeln!(out, "component {}", side_list(c));
            let doc = write_witness(&w);
            out.push_str(doc.split_once('\n').map_or("", |(_, rest)| rest));
            return Ok(Report { stdout: out, certificate: Some(doc), code: NEGATIVE });
        }
    }
    out.push_str("verdict cut-sufficient\n");
    Ok(Report { stdout: out, certificate: None, code: OK })
}

#[derive(Clone, Debug, PartialEq, Eq, clap::Subcommand)]
pub enum Fixture {
    /// Unit p-spindle, p >= 3.
    Spindle { p: usize },
    /// The planar K4 pair that satisfies the cut condition but does not route.
    Badk4,
    /// Random series-parallel instance made Eulerian by raising capacities.
    RandomSp { seed: u64, n: usize },
}

pub fn generate(fixture: &Fixture, max_vertices: usize) -> Result<Report, CliError> {
    let inst = match *fixture {
        Fixture::Spindle { p } => {
            if p < 3 {
                return Err(CliError::Usage(format!("spindle needs p >= 3, got {p}")));
            }
            if p + 2 > max_vertices {
                return Err(CliError::Usage(format!("a {p}-spindle exceeds {max_vertices} vertices")));
            }
            fixtures::spindle(p).unit_instance()
        }
        Fixture::Badk4 => fixtures::bad_k4(),
        Fixture::RandomSp { seed, n } => {
            if !(2..=max_vertices).contains(&n) {
                return Err(CliError::Usage(format!("n must lie in 2..={max_vertices}, got {n}")));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let inst = fixtures::random_sp_instance(&mut rng, n, n / 2 + 1, 3, 2);
            fixtures::eulerize(&inst)
        }
    };
    Ok(Report { stdout: write_instance(&inst), certificate: None, code: OK })
}

/// Runs the alternating congestion/distortion search. With a seed the
/// starting weights are random tight weights; otherwise unit capacities
/// with scaled unit demands.
pub fn gap(inst: &Instance, rounds: usize, seed: Option<u64>) -> Result<Report, CliError> {
    let pair = inst.pair();
    let gs = match seed {
        Some(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let start = saturate_demands(&mut rng, &pair, 3)?;
            general_solution_limited(&start, rounds)?
        }
        None => general_solution_rounds(&pair, rounds)?,
    };
    let mut out = String::new();
    let _ = writeln!(out, "gap {}", rational(&gs.gap));
    let _ = writeln!(out, "fixed-point {}", if gs.fixed_point { "yes" } else { "no" });
    let _ = writeln!(out, "rounds {}", gs.history.len());
    for (r, (alpha, gamma)) in gs.history.iter().enumerate() {
        let _ = writeln!(out, "round {} congestion {} distortion {}", r + 1, rational(alpha), rational(gamma));
    }
    let doc = write_instance(&gs.instance);
    Ok(Report { stdout: out, certificate: Some(doc), code: OK })
}
