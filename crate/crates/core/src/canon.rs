//! Canonical labels for small pairs (supply/demand edge-coloured multigraphs).

use crate::instance::Pair;
use crate::{Error, Result};

/// Exhaustive canonicalization is limited to this many vertices.
pub const CANON_LIMIT: usize = 16;

/// Canonical label: vertex count plus upper-triangular supply and demand
/// multiplicities under the lexicographically smallest relabelling reached
/// by refinement.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub n: usize,
    cells: Vec<(u16, u16)>,
}

struct Matrix {
    n: usize,
    data: Vec<(u16, u16)>,
}

impl Matrix {
    fn of(pair: &Pair) -> Self {
        let n = pair.vertex_count();
        let mut data = vec![(0u16, 0u16); n * n];
        for &(a, b) in pair.supply.edges() {
            data[a * n + b].0 += 1;
            data[b * n + a].0 += 1;
        }
        for &(a, b) in pair.demand.edges() {
            data[a * n + b].1 += 1;
            data[b * n + a].1 += 1;
        }
        Matrix { n, data }
    }

    fn at(&self, a: usize, b: usize) -> (u16, u16) {
        self.data[a * self.n + b]
    }
}

pub fn canonical_form(pair: &Pair) -> Result<CanonicalForm> {
    let n = pair.vertex_count();
    if n > CANON_LIMIT {
        return Err(Error::SizeGuard {
            what: "canonical form vertices",
            actual: n,
            limit: CANON_LIMIT,
        });
    }
    let m = Matrix::of(pair);
    let colors = refine(&m, vec![0; n]);
    let mut best: Option<Vec<(u16, u16)>> = None;
    search(&m, colors, &mut best);
    Ok(CanonicalForm {
        n,
        cells: best.unwrap_or_default(),
    })
}

pub fn isomorphic(a: &Pair, b: &Pair) -> Result<bool> {
    Ok(canonical_form(a)? == canonical_form(b)?)
}

/// Re-rank colours by sorted neighbourhood signatures until stable.
fn refine(m: &Matrix, mut colors: Vec<usize>) -> Vec<usize> {
    let n = m.n;
    loop {
        let classes = count_classes(&colors);
        let mut sigs: Vec<(usize, Vec<(usize, u16, u16)>)> = (0..n)
            .map(|v| {
                let mut s: Vec<(usize, u16, u16)> = (0..n)
                    .filter(|&w| w != v && m.at(v, w) != (0, 0))
                    .map(|w| {
                        let (x, y) = m.at(v, w);
                        (colors[w], x, y)
                    })
                    .collect();
                s.sort_unstable();
                (colors[v], s)
            })
            .collect();
        let mut sorted = sigs.clone();
        sorted.sort();
        sorted.dedup();
        let next: Vec<usize> = sigs
            .drain(..)
            .map(|s| sorted.binary_search(&s).expect("signature present"))
            .collect();
        let done = count_classes(&next) == classes;
        colors = next;
        if done {
            return colors;
        }
    }
}

fn count_classes(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn search(m: &Matrix, colors: Vec<usize>, best: &mut Option<Vec<(u16, u16)>>) {
    let n = m.n;
    // smallest non-singleton cell, lowest colour first
    let mut sizes = vec![0usize; n];
    for &c in &colors {
        sizes[c] += 1;
    }
    let target = (0..n)
        .filter(|&c| sizes[c] > 1)
        .min_by_key(|&c| (sizes[c], c));
    let Some(cell) = target else {
        let mut order = vec![0usize; n];
        for (v, &c) in colors.iter().enumerate() {
            order[c] = v;
        }
        let mut form = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                form.push(m.at(order[i], order[j]));
            }
        }
        if best.as_ref().map_or(true, |b| form < *b) {
            *best = Some(form);
        }
        return;
    };
    let members: Vec<usize> = (0..n).filter(|&v| colors[v] == cell).collect();
    let mut tried: Vec<usize> = Vec::new();
    for &v in &members {
        // swapping twins is an automorphism, so one of them suffices
        if tried.iter().any(|&w| twins(m, v, w)) {
            continue;
        }
        tried.push(v);
        let individualized: Vec<usize> = (0..n)
            .map(|w| 2 * colors[w] + usize::from(colors[w] == cell && w != v))
            .collect();
        let colors = refine(m, compress(individualized));
        search(m, colors, best);
    }
}

fn compress(keys: Vec<usize>) -> Vec<usize> {
    let mut sorted = keys.clone();
    sorted.sort_unstable();
    sorted.dedup();
    keys.into_iter()
        .map(|k| sorted.binary_search(&k).expect("key present"))
        .collect()
}

fn twins(m: &Matrix, a: usize, b: usize) -> bool {
    (0..m.n).all(|w| w == a || w == b || m.at(a, w) == m.at(b, w))
}
