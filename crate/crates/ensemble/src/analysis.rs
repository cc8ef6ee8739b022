//! Ensemble records, ensemble-derived geometric targets, and the price of
//! enforcing them.

use std::io::Write;

use serde::Serialize;

use crate::districting::Districting;
use crate::error::GraphError;
use crate::graph::{GraphInstance, Votes};
use crate::metrics::{competitive_count, district_votes, efficiency_gap, polsby_popper, seats};

/// Which vote dataset each role reads. Metrics use `truth`; party `i`
/// counts its seats under `party[i - 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Beliefs {
    pub truth: String,
    pub party: [String; 2],
}

impl Beliefs {
    /// Everyone reads the same dataset.
    pub fn agreed(dataset: &str) -> Self {
        Beliefs { truth: dataset.to_string(), party: [dataset.to_string(), dataset.to_string()] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnsembleRecord {
    pub sample: usize,
    /// Seats of party 1 and party 2, each under its own dataset.
    pub seats: [usize; 2],
    pub efficiency_gap: f64,
    pub competitive: usize,
    pub pp_mean: f64,
    pub gt: Option<bool>,
}

/// Seats party `party` (1 or 2) wins in each sample under `votes`.
pub fn seats_under(votes: &[Votes], samples: &[Districting], party: usize) -> Vec<usize> {
    samples.iter().map(|d| seats(&district_votes(votes, d))[party - 1]).collect()
}

/// Scores every sample. `gt` is left unset.
pub fn evaluate(g: &GraphInstance, samples: &[Districting], beliefs: &Beliefs) -> Result<Vec<EnsembleRecord>, GraphError> {
    let truth = g.votes(&beliefs.truth)?;
    let own = [seats_under(&g.votes(&beliefs.party[0])?, samples, 1), seats_under(&g.votes(&beliefs.party[1])?, samples, 2)];
    Ok(samples
        .iter()
        .enumerate()
        .map(|(k, d)| {
            let districts = district_votes(&truth, d);
            EnsembleRecord {
                sample: k,
                seats: [own[0][k], own[1][k]],
                efficiency_gap: efficiency_gap(&districts),
                competitive: competitive_count(&districts),
                pp_mean: polsby_popper(g, d).mean,
                gt: None,
            }
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SeatTarget {
    pub min: usize,
    pub max: usize,
    pub target: usize,
}

impl SeatTarget {
    pub fn from_range(min: usize, max: usize) -> Self {
        SeatTarget { min, max, target: (min + max) / 2 }
    }
}

/// Per party, `floor((min + max) / 2)` of its own seat counts over the
/// ensemble. `None` for an empty ensemble.
pub fn ensemble_targets(records: &[EnsembleRecord]) -> Option<[SeatTarget; 2]> {
    let first = records.first()?;
    let mut range = first.seats.map(|s| (s, s));
    for r in records {
        for (slot, &s) in range.iter_mut().zip(&r.seats) {
            *slot = (slot.0.min(s), slot.1.max(s));
        }
    }
    Some(range.map(|(lo, hi)| SeatTarget::from_range(lo, hi)))
}

/// Sets each record's `gt` flag against `targets`.
pub fn mark_gt(records: &mut [EnsembleRecord], targets: &[SeatTarget; 2]) {
    for r in records {
        r.gt = Some(r.seats[0] >= targets[0].target && r.seats[1] >= targets[1].target);
    }
}

/// Best value of each metric over a set of records.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Optima {
    pub competitive: usize,
    pub abs_eg: f64,
    pub pp_mean: f64,
}

impl Optima {
    fn over<'a>(records: impl Iterator<Item = &'a EnsembleRecord>) -> Option<Self> {
        records.fold(None, |acc, r| {
            let here = Optima { competitive: r.competitive, abs_eg: r.efficiency_gap.abs(), pp_mean: r.pp_mean };
            Some(match acc {
                None => here,
                Some(o) => Optima {
                    competitive: o.competitive.max(here.competitive),
                    abs_eg: o.abs_eg.min(here.abs_eg),
                    pp_mean: o.pp_mean.max(here.pp_mean),
                },
            })
        })
    }
}

pub const NO_GT_OBSERVED: &str = "no GT partition observed";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PriceOfFairness {
    pub targets: [SeatTarget; 2],
    pub samples: usize,
    pub gt_samples: usize,
    pub unconstrained: Option<Optima>,
    pub constrained: Option<Optima>,
    /// Set when no record meets both targets.
    pub flag: Option<String>,
}

/// Unconstrained optima over all records against optima over the records
/// meeting both targets.
pub fn price_of_fairness_report(records: &[EnsembleRecord], targets: &[SeatTarget; 2]) -> PriceOfFairness {
    let meets = |r: &&EnsembleRecord| r.seats[0] >= targets[0].target && r.seats[1] >= targets[1].target;
    let gt_samples = records.iter().filter(meets).count();
    let constrained = Optima::over(records.iter().filter(meets));
    PriceOfFairness {
        targets: *targets,
        samples: records.len(),
        gt_samples,
        unconstrained: Optima::over(records.iter()),
        constrained,
        flag: constrained.is_none().then(|| NO_GT_OBSERVED.to_string()),
    }
}

/// One metric of the optima summary.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricRow {
    pub metric: &'static str,
    pub unconstrained: Option<f64>,
    pub constrained: Option<f64>,
}

impl PriceOfFairness {
    pub fn table(&self) -> Vec<MetricRow> {
        let pick = |o: &Option<Optima>, f: fn(&Optima) -> f64| o.as_ref().map(f);
        let row = |metric, f: fn(&Optima) -> f64| MetricRow {
            metric,
            unconstrained: pick(&self.unconstrained, f),
            constrained: pick(&self.constrained, f),
        };
        vec![
            row("competitive", |o| o.competitive as f64),
            row("abs_efficiency_gap", |o| o.abs_eg),
            row("polsby_popper", |o| o.pp_mean),
        ]
    }
}

pub const RECORD_HEADER: [&str; 7] = ["sample", "seats_1", "seats_2", "eg", "competitive", "pp_mean", "gt"];

/// Writes records under the fixed header. An unset `gt` is an empty cell.
pub fn write_records_csv<W: Write>(records: &[EnsembleRecord], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RECORD_HEADER)?;
    for r in records {
        let gt = r.gt.map(|b| b.to_string()).unwrap_or_default();
        w.write_record([
            r.sample.to_string(),
            r.seats[0].to_string(),
            r.seats[1].to_string(),
            r.efficiency_gap.to_string(),
            r.competitive.to_string(),
            r.pp_mean.to_string(),
            gt,
        ])?;
    }
    w.flush()?;
    Ok(())
}
