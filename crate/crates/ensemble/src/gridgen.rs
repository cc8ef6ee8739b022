//! Synthetic grid graphs with a planted vote field.

use std::collections::BTreeMap;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::graph::{Edge, GraphInstance, Node, NodeId, Votes};
use crate::recom::chain_rng;

/// Dataset name written by the generator.
pub const TRUTH_DATASET: &str = "truth";

/// How party 1's vote share is laid over the grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Pattern {
    Uniform { share: f64 },
    /// Share rises linearly across columns from `mean - spread/2` to
    /// `mean + spread/2`.
    Gradient { mean: f64, spread: f64 },
    /// `blobs` Gaussian bumps at seeded random centers, rising from `base`
    /// to `peak`.
    Clustered { blobs: usize, base: f64, peak: f64 },
}

impl FromStr for Pattern {
    type Err = String;

    /// `uniform[:share]`, `gradient[:mean[:spread]]`, or
    /// `clustered[:blobs[:base[:peak]]]`.
    fn from_str(s: &str) -> Result<Self, String> {
        let mut parts = s.split(':');
        let kind = parts.next().unwrap_or_default();
        let nums: Vec<f64> = parts.map(|p| p.parse::<f64>().map_err(|e| format!("bad pattern parameter {p:?}: {e}"))).collect::<Result<_, _>>()?;
        let arg = |k: usize, default: f64| nums.get(k).copied().unwrap_or(default);
        let pattern = match kind {
            "uniform" if nums.len() <= 1 => Pattern::Uniform { share: arg(0, 0.5) },
            "gradient" if nums.len() <= 2 => Pattern::Gradient { mean: arg(0, 0.6), spread: arg(1, 0.2) },
            "clustered" if nums.len() <= 3 => {
                let blobs = arg(0, 3.0);
                if blobs < 1.0 || blobs.fract() != 0.0 {
                    return Err(format!("blob count must be a positive integer, got {blobs}"));
                }
                Pattern::Clustered { blobs: blobs as usize, base: arg(1, 0.35), peak: arg(2, 0.75) }
            }
            _ => return Err(format!("unknown pattern {s:?}; expected uniform, gradient, or clustered")),
        };
        Ok(pattern)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub rows: usize,
    pub cols: usize,
    pub m: usize,
    pub epsilon: f64,
    pub pattern: Pattern,
    pub seed: u64,
    pub pop_per_cell: u64,
    pub votes_per_cell: u64,
}

impl GridSpec {
    pub fn new(rows: usize, cols: usize, m: usize, pattern: Pattern) -> Self {
        GridSpec { rows, cols, m, epsilon: 0.02, pattern, seed: 0, pop_per_cell: 100, votes_per_cell: 100 }
    }
}

/// Party 1's share in each cell, row-major.
pub fn shares(spec: &GridSpec) -> Vec<f64> {
    let (rows, cols) = (spec.rows, spec.cols);
    let cells = (0..rows).flat_map(|r| (0..cols).map(move |c| (r, c)));
    match spec.pattern {
        Pattern::Uniform { share } => vec![share; rows * cols],
        Pattern::Gradient { mean, spread } => cells
            .map(|(_, c)| {
                let t = if cols > 1 { c as f64 / (cols - 1) as f64 } else { 0.5 };
                mean + spread * (t - 0.5)
            })
            .collect(),
        Pattern::Clustered { blobs, base, peak } => {
            let mut rng = chain_rng(spec.seed);
            let centers: Vec<(f64, f64)> =
                (0..blobs).map(|_| (rng.gen_range(0.0..rows as f64), rng.gen_range(0.0..cols as f64))).collect();
            let sigma = (rows.min(cols) as f64 / 4.0).max(0.5);
            cells
                .map(|(r, c)| {
                    let (y, x) = (r as f64 + 0.5, c as f64 + 0.5);
                    let bump = centers
                        .iter()
                        .map(|(cy, cx)| (-((y - cy).powi(2) + (x - cx).powi(2)) / (2.0 * sigma * sigma)).exp())
                        .fold(0.0, f64::max);
                    base + (peak - base) * bump
                })
                .collect()
        }
    }
}

/// A `rows x cols` grid of unit cells, rook adjacency, one dataset.
pub fn grid(spec: &GridSpec) -> Result<GraphInstance, crate::error::GraphError> {
    let (rows, cols) = (spec.rows, spec.cols);
    let id = |r: usize, c: usize| NodeId::Number((r * cols + c) as u64);
    let nodes = shares(spec)
        .into_iter()
        .enumerate()
        .map(|(k, share)| {
            let (r, c) = (k / cols, k % cols);
            let exterior = [r == 0, r + 1 == rows, c == 0, c + 1 == cols].iter().filter(|b| **b).count() as f64;
            let one = (share.clamp(0.0, 1.0) * spec.votes_per_cell as f64).round() as u64;
            Node {
                id: id(r, c),
                pop: spec.pop_per_cell,
                area: 1.0,
                perimeter: 4.0,
                exterior,
                votes: BTreeMap::from([(TRUTH_DATASET.to_string(), Votes::new(one, spec.votes_per_cell - one))]),
            }
        })
        .collect();
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push(Edge { a: id(r, c), b: id(r, c + 1), shared: 1.0 });
            }
            if r + 1 < rows {
                edges.push(Edge { a: id(r, c), b: id(r + 1, c), shared: 1.0 });
            }
        }
    }
    GraphInstance::new(spec.m, spec.epsilon, nodes, edges)
}
