//! Line-oriented text documents for instances, solutions and certificates.
//!
//! ```text
//! spflow-instance 1
//! vertices 3
//! supply 0 1 2/1
//! supply 1 2 1/1
//! demand 0 2 1/1
//! ```
//!
//! Blank lines and text after `#` are ignored. Amounts are written as
//! `num/den` in lowest terms; plain integers are accepted on input.

use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use spflow::graph::{Path, VertexSet};
use spflow::instance::StepKind;
use spflow::lp::MultiflowSolution;
use spflow::spgraph::K4Witness;
use spflow::sufficiency::SpindleWitness;
use spflow::{Cut, Graph, Instance, Rational};

pub const INSTANCE_HEADER: &str = "spflow-instance 1";
pub const SOLUTION_HEADER: &str = "spflow-solution 1";
pub const REFUSAL_HEADER: &str = "spflow-refusal 1";
pub const CUT_HEADER: &str = "spflow-cut 1";
pub const WITNESS_HEADER: &str = "spflow-witness 1";

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

pub fn rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.parse().ok()?, d.parse().ok()?),
        None => (s.parse().ok()?, 1.into()),
    };
    if num_traits::Zero::is_zero(&d) {
        return None;
    }
    Some(Rational::new(n, d))
}

fn vertices(set: VertexSet) -> String {
    set.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn list(xs: &[usize]) -> String {
    xs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

/// Parses an instance document with at most `max_vertices` vertices.
pub fn read_instance(text: &str, max_vertices: usize) -> Result<Instance, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (no, header) = lines.next().ok_or_else(|| err(1, "empty document"))?;
    if header.split_whitespace().collect::<Vec<_>>() != INSTANCE_HEADER.split(' ').collect::<Vec<_>>() {
        return Err(err(no, format!("expected header `{INSTANCE_HEADER}`")));
    }
    let mut n: Option<usize> = None;
    let mut supply = Vec::new();
    let mut caps = Vec::new();
    let mut demand = Vec::new();
    let mut dems = Vec::new();
    let mut last = no;
    for (no, line) in lines {
        last = no;
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            ["vertices", count] => {
                if n.is_some() {
                    return Err(err(no, "vertex count given twice"));
                }
                let count: usize = count.parse().map_err(|_| err(no, format!("bad vertex count `{count}`")))?;
                if count > max_vertices {
                    return Err(err(no, format!("{count} vertices exceed the limit of {max_vertices}")));
                }
                n = Some(count);
            }
            [kind @ ("supply" | "demand"), a, b, w] => {
                let n = n.ok_or_else(|| err(no, "edge before the vertex count"))?;
                let endpoint = |s: &str| -> Result<usize, ParseError> {
                    let v: usize = s.parse().map_err(|_| err(no, format!("bad vertex `{s}`")))?;
                    if v >= n {
                        return Err(err(no, format!("vertex {v} out of range")));
                    }
                    Ok(v)
                };
                let (a, b) = (endpoint(a)?, endpoint(b)?);
                if a == b {
                    return Err(err(no, format!("self-loop at vertex {a}")));
                }
                let w = parse_rational(w).ok_or_else(|| err(no, format!("bad amount `{w}`")))?;
                if w.is_negative() {
                    return Err(err(no, "negative amount"));
                }
                if *kind == "supply" {
                    supply.push((a, b));
                    caps.push(w);
                } else {
                    demand.push((a, b));
                    dems.push(w);
                }
            }
            _ => return Err(err(no, format!("unrecognised line `{line}`"))),
        }
    }
    let n = n.ok_or_else(|| err(last, "missing vertex count"))?;
    let build = || -> spflow::Result<Instance> {
        Instance::new(Graph::new(n, supply)?, Graph::new(n, demand)?, caps, dems)
    };
    build().map_err(|e| err(last, e.to_string()))
}

pub fn write_instance(inst: &Instance) -> String {
    let mut out = format!("{INSTANCE_HEADER}\nvertices {}\n", inst.vertex_count());
    for (e, &(a, b)) in inst.supply.edges().iter().enumerate() {
        let _ = writeln!(out, "supply {a} {b} {}", rational(&inst.capacities[e]));
    }
    for (i, &(a, b)) in inst.demand.edges().iter().enumerate() {
        let _ = writeln!(out, "demand {a} {b} {}", rational(&inst.demands[i]));
    }
    out
}

fn write_path(out: &mut String, demand: usize, amount: &Rational, p: &Path) {
    let _ = writeln!(
        out,
        "flow {demand} {} path {} edges {}",
        rational(amount),
        list(&p.vertices),
        list(&p.edges)
    );
}

/// Path flows, then the load of every supply edge next to its capacity.
pub fn write_solution(mode: &str, inst: &Instance, sol: &MultiflowSolution) -> String {
    let mut out = format!("{SOLUTION_HEADER}\nmode {mode}\ncongestion {}\n", rational(&sol.congestion));
    for (i, paths) in sol.flows.iter().enumerate() {
        for (p, x) in paths {
            if !x.is_zero() {
                write_path(&mut out, i, x, p);
            }
        }
    }
    let mut load = vec![Rational::zero(); inst.supply.edge_count()];
    for (p, x) in sol.flows.iter().flatten() {
        for &e in &p.edges {
            load[e] += x;
        }
    }
    for (e, l) in load.iter().enumerate() {
        let _ = writeln!(out, "load {e} {} {}", rational(l), rational(&inst.capacities[e]));
    }
    out
}

pub fn write_cut(cut: &Cut) -> String {
    format!(
        "{CUT_HEADER}\nside {}\nsurplus {}\ncrossing-supply {}\ncrossing-demand {}\n",
        vertices(cut.side),
        rational(&cut.surplus),
        list(&cut.crossing_supply),
        list(&cut.crossing_demand)
    )
}

fn step_name(kind: StepKind) -> &'static str {
    match kind {
        StepKind::ContractSupply => "contract",
        StepKind::DeleteSupply => "delete-supply",
        StepKind::DeleteDemand => "delete-demand",
    }
}

/// Replayable minor steps and the branch sets of hubs and rim.
pub fn write_witness(w: &SpindleWitness) -> String {
    let mut out = format!(
        "{WITNESS_HEADER}\np {}\nhubs {} {}\nrim {}\n",
        w.p,
        w.hubs[0],
        w.hubs[1],
        list(&w.rim)
    );
    for s in &w.branch_sets {
        let _ = writeln!(out, "branch-set {}", vertices(*s));
    }
    for s in &w.steps {
        let _ = writeln!(out, "step {} {}", step_name(s.kind), s.edge);
    }
    out
}

pub fn write_k4(w: &K4Witness) -> String {
    w.branch_sets
        .iter()
        .map(|s| format!("k4-branch-set {}\n", vertices(*s)))
        .collect()
}

pub fn write_refusal(refusal: &spflow::routing::Refusal) -> String {
    use spflow::routing::Refusal;
    let mut out = format!("{REFUSAL_HEADER}\n");
    match refusal {
        Refusal::NonIntegral => out.push_str("reason non-integral\n"),
        Refusal::NotSeriesParallel(w) => {
            out.push_str("reason not-series-parallel\n");
            if let Some(w) = w {
                out.push_str(&write_k4(w));
            }
        }
        Refusal::ViolatedCut(c) => {
            out.push_str("reason violated-cut\n");
            let _ = writeln!(out, "side {}\nsurplus {}", vertices(c.side), rational(&c.surplus));
        }
        Refusal::OddVertex(v) => {
            let _ = writeln!(out, "reason odd-vertex\nvertex {v}");
        }
        Refusal::NotCutSufficient { component, witness } => {
            let _ = writeln!(out, "reason not-cut-sufficient\ncomponent {}", vertices(*component));
            let body = write_witness(witness);
            out.push_str(body.split_once('\n').map_or("", |(_, rest)| rest));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use spflow::fixtures;
    use spflow::{q, qf};

    #[test]
    fn rationals_are_reduced() {
        assert_eq!(rational(&qf(4, 6)), "2/3");
        assert_eq!(rational(&q(3)), "3/1");
        assert_eq!(parse_rational("6/4"), Some(qf(3, 2)));
        assert_eq!(parse_rational("7"), Some(q(7)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn instance_round_trips() {
        let inst = fixtures::bad_k4();
        let text = write_instance(&inst);
        assert_eq!(read_instance(&text, 64).unwrap(), inst);
        assert_eq!(write_instance(&read_instance(&text, 64).unwrap()), text);
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let text = "# a path\nspflow-instance 1\n\nvertices 2\nsupply 0 1 1 # edge\ndemand 0 1 1/2\n";
        let inst = read_instance(text, 64).unwrap();
        assert_eq!(inst.demands, vec![qf(1, 2)]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = "spflow-instance 1\nvertices 2\nsupply 0 5 1\n";
        assert_eq!(read_instance(bad, 64).unwrap_err().line, 3);
        let bad = "spflow-instance 1\nsupply 0 1 1\n";
        assert_eq!(read_instance(bad, 64).unwrap_err().line, 2);
        let bad = "spflow-instance 1\nvertices 2\ndemand 0 1 -1\n";
        assert_eq!(read_instance(bad, 64).unwrap_err().line, 3);
        let bad = "instance\n";
        assert_eq!(read_instance(bad, 64).unwrap_err().line, 1);
        let big = "spflow-instance 1\nvertices 30\n";
        assert_eq!(read_instance(big, 20).unwrap_err().line, 2);
    }
}
