//! District-level metrics: seats, efficiency gap, competitiveness, and
//! Polsby-Popper compactness.

use std::f64::consts::PI;

use serde::Serialize;

use crate::districting::Districting;
use crate::graph::{GraphInstance, Votes};

/// Competitive when the larger share is at most 54 of 100 votes.
pub const COMPETITIVE_PERCENT: u64 = 54;

/// Per-district vote totals.
pub fn district_votes(votes: &[Votes], d: &Districting) -> Vec<Votes> {
    let mut out = vec![Votes::default(); d.m()];
    for (v, node) in votes.iter().enumerate() {
        out[d.district_of(v)] += *node;
    }
    out
}

/// Winner of one district: party 1 on strictly more votes, otherwise
/// party 2 (ties break toward party 2).
pub fn winner(v: Votes) -> usize {
    if v.one > v.two {
        1
    } else {
        2
    }
}

/// Seats won by parties 1 and 2.
pub fn seats(districts: &[Votes]) -> [usize; 2] {
    let one = districts.iter().filter(|v| winner(**v) == 1).count();
    [one, districts.len() - one]
}

/// Signed efficiency gap `(waste_1 - waste_2) / total`; positive means
/// party 1 wastes more. The winner wastes its votes above half the district
/// total and the loser wastes all of its votes. An exact tie wastes nothing
/// on either side. Returns 0 when no votes are cast.
pub fn efficiency_gap(districts: &[Votes]) -> f64 {
    // Doubled wastes keep the half-total threshold integral.
    let (mut net, mut total) = (0i128, 0i128);
    for v in districts {
        let (a, b) = (v.one as i128, v.two as i128);
        let t = a + b;
        total += t;
        net += match a.cmp(&b) {
            std::cmp::Ordering::Greater => (2 * a - t) - 2 * b,
            std::cmp::Ordering::Less => 2 * a - (2 * b - t),
            std::cmp::Ordering::Equal => 0,
        };
    }
    if total == 0 {
        return 0.0;
    }
    net as f64 / (2 * total) as f64
}

/// Districts whose larger two-party share is at most 54%, inclusive.
pub fn competitive_count(districts: &[Votes]) -> usize {
    districts.iter().filter(|v| 100 * v.one.max(v.two) <= COMPETITIVE_PERCENT * v.total()).count()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Compactness {
    pub per_district: Vec<f64>,
    pub mean: f64,
}

/// `4 pi A / P^2` per district, where `P` counts exterior boundary plus
/// every shared boundary crossing into another district.
pub fn polsby_popper(g: &GraphInstance, d: &Districting) -> Compactness {
    let mut area = vec![0.0; d.m()];
    let mut perimeter = vec![0.0; d.m()];
    for (v, node) in g.nodes().iter().enumerate() {
        area[d.district_of(v)] += node.area;
        perimeter[d.district_of(v)] += node.exterior;
    }
    for (edge, &(a, b)) in g.edges().iter().zip(g.edge_ends()) {
        let (da, db) = (d.district_of(a), d.district_of(b));
        if da != db {
            perimeter[da] += edge.shared;
            perimeter[db] += edge.shared;
        }
    }
    let per_district: Vec<f64> =
        area.iter().zip(&perimeter).map(|(a, p)| if *p > 0.0 { 4.0 * PI * a / (p * p) } else { 0.0 }).collect();
    let mean = per_district.iter().sum::<f64>() / per_district.len() as f64;
    Compactness { per_district, mean }
}
