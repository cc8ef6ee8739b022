//! Belief deviations: one party inflates or deflates its own vote share,
//! uniformly or independently per node, and the ensemble is re-scored.
//!
//! Scaled counts are kept exact by working in basis points: every count in
//! a deviated dataset is multiplied by 10000, so a node with `T` votes and
//! party share scaled by `1 + y/100` (`y` in hundredths of a percent)
//! becomes `min(v * (10000 + 100 y), 10000 T)` for the deviating party and
//! the complement for the other.

use std::fmt;
use std::io::Write;

use rand::Rng;
use serde::Serialize;

use crate::analysis::{
    ensemble_targets, evaluate, price_of_fairness_report, seats_under, Beliefs, EnsembleRecord, Optima, PriceOfFairness,
};
use crate::districting::Districting;
use crate::error::GraphError;
use crate::graph::{GraphInstance, Votes};
use crate::recom::chain_rng;

const BASIS: u64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DeviationMode {
    /// Every node's share scaled by `1 + x/100`.
    Uniform,
    /// Each node's share scaled by `1 + y/100`, `y ~ Uniform(-x, x)`.
    Random,
}

impl fmt::Display for DeviationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeviationMode::Uniform => "uniform",
            DeviationMode::Random => "random",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Deviation {
    /// The deviating party, 1 or 2.
    pub party: usize,
    pub mode: DeviationMode,
    /// Signed percent for uniform deviations; the bound `x >= 0` for random.
    pub percent: i32,
}

impl Deviation {
    pub fn new(party: usize, mode: DeviationMode, percent: i32) -> Result<Self, String> {
        if party != 1 && party != 2 {
            return Err(format!("deviating party must be 1 or 2, got {party}"));
        }
        if !(-100..=100).contains(&percent) || (mode == DeviationMode::Random && percent < 0) {
            return Err(format!("deviation percent {percent} out of range for {mode} mode"));
        }
        Ok(Deviation { party, mode, percent })
    }
}

fn scale(votes: Votes, party: usize, factor_bp: u64) -> Votes {
    let total = votes.total() * BASIS;
    let own = if party == 1 { votes.one } else { votes.two };
    let own = (own * factor_bp).min(total);
    if party == 1 {
        Votes::new(own, total - own)
    } else {
        Votes::new(total - own, own)
    }
}

/// The deviating party's dataset after scaling. `x = 0` returns the input
/// unchanged.
pub fn deviate_votes(votes: &[Votes], dev: &Deviation, seed: u64) -> Vec<Votes> {
    if dev.percent == 0 {
        return votes.to_vec();
    }
    let step = 100 * dev.percent as i64;
    match dev.mode {
        DeviationMode::Uniform => {
            let factor = (BASIS as i64 + step) as u64;
            votes.iter().map(|v| scale(*v, dev.party, factor)).collect()
        }
        DeviationMode::Random => {
            let mut rng = chain_rng(seed);
            votes
                .iter()
                .map(|v| {
                    let y = rng.gen_range(-step..=step);
                    scale(*v, dev.party, (BASIS as i64 + y) as u64)
                })
                .collect()
        }
    }
}

/// Adds dataset `out`: the deviating party's reading of dataset `base`.
/// Other datasets are untouched.
pub fn apply_deviation(
    g: &GraphInstance,
    base: &str,
    out: &str,
    dev: &Deviation,
    seed: u64,
) -> Result<GraphInstance, GraphError> {
    let votes = g.votes(base)?;
    Ok(g.with_dataset(out, &deviate_votes(&votes, dev, seed)))
}

/// One row of a deviation sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    /// `None` for the no-deviation baseline.
    pub deviation: Option<Deviation>,
    pub report: PriceOfFairness,
}

/// Seed for a random deviation within a run seeded with `seed`.
pub fn scenario_seed(seed: u64, dev: &Deviation) -> u64 {
    seed ^ ((dev.party as u64) << 32 | dev.percent.unsigned_abs() as u64)
}

/// Re-scores `baseline` with the deviating party's seats counted under its
/// deviated dataset. Metrics stay on the truth dataset.
fn scenario(
    baseline: &[EnsembleRecord],
    own_votes: &[Votes],
    samples: &[Districting],
    dev: Deviation,
    seed: u64,
) -> Option<SweepRow> {
    let votes = deviate_votes(own_votes, &dev, scenario_seed(seed, &dev));
    let records = reseat(baseline, &seats_under(&votes, samples, dev.party), dev.party);
    let targets = ensemble_targets(&records)?;
    Some(SweepRow { deviation: Some(dev), report: price_of_fairness_report(&records, &targets) })
}

/// The report for a single deviation scenario. `None` for an empty
/// ensemble.
pub fn deviation_report(
    g: &GraphInstance,
    samples: &[Districting],
    beliefs: &Beliefs,
    dev: Deviation,
    seed: u64,
) -> Result<Option<SweepRow>, GraphError> {
    let baseline = evaluate(g, samples, beliefs)?;
    let own = g.votes(&beliefs.party[dev.party - 1])?;
    Ok(scenario(&baseline, &own, samples, dev, seed))
}

/// Uniform `+x` and `-x` and random `x` deviations by each party, after a
/// no-deviation baseline.
pub fn deviation_sweep(
    g: &GraphInstance,
    samples: &[Districting],
    beliefs: &Beliefs,
    percents: &[u32],
    seed: u64,
) -> Result<Vec<SweepRow>, GraphError> {
    let baseline = evaluate(g, samples, beliefs)?;
    let Some(targets) = ensemble_targets(&baseline) else { return Ok(Vec::new()) };
    let mut rows = vec![SweepRow { deviation: None, report: price_of_fairness_report(&baseline, &targets) }];
    for party in [1, 2] {
        let own = g.votes(&beliefs.party[party - 1])?;
        for &x in percents {
            let x = i32::try_from(x).map_err(|_| GraphError::Deviation(format!("percent {x} too large")))?;
            for (mode, percent) in [(DeviationMode::Uniform, x), (DeviationMode::Uniform, -x), (DeviationMode::Random, x)] {
                let dev = Deviation::new(party, mode, percent).map_err(GraphError::Deviation)?;
                rows.extend(scenario(&baseline, &own, samples, dev, seed));
            }
        }
    }
    Ok(rows)
}

fn reseat(records: &[EnsembleRecord], seats: &[usize], party: usize) -> Vec<EnsembleRecord> {
    records
        .iter()
        .zip(seats)
        .map(|(r, &s)| {
            let mut r = r.clone();
            r.seats[party - 1] = s;
            r
        })
        .collect()
}

pub const SWEEP_HEADER: [&str; 18] = [
    "deviating_party",
    "mode",
    "percent",
    "target_1",
    "target_2",
    "samples",
    "gt_samples",
    "gt_observed",
    "competitive_all",
    "competitive_gt",
    "abs_eg_all",
    "abs_eg_gt",
    "pp_all",
    "pp_gt",
    "min_1",
    "max_1",
    "min_2",
    "max_2",
];

/// One row per scenario and deviating party; constrained cells are empty
/// when no GT partition was observed.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for row in rows {
        let r = &row.report;
        let (party, mode, percent) = match &row.deviation {
            Some(d) => (d.party.to_string(), d.mode.to_string(), d.percent.to_string()),
            None => (String::new(), "none".to_string(), "0".to_string()),
        };
        let opt = |f: fn(&Optima) -> String, o: &Option<Optima>| o.as_ref().map(f).unwrap_or_default();
        let comp: fn(&Optima) -> String = |o| o.competitive.to_string();
        let eg: fn(&Optima) -> String = |o| o.abs_eg.to_string();
        let pp: fn(&Optima) -> String = |o| o.pp_mean.to_string();
        w.write_record([
            party,
            mode,
            percent,
            r.targets[0].target.to_string(),
            r.targets[1].target.to_string(),
            r.samples.to_string(),
            r.gt_samples.to_string(),
            r.constrained.is_some().to_string(),
            opt(comp, &r.unconstrained),
            opt(comp, &r.constrained),
            opt(eg, &r.unconstrained),
            opt(eg, &r.constrained),
            opt(pp, &r.unconstrained),
            opt(pp, &r.constrained),
            r.targets[0].min.to_string(),
            r.targets[0].max.to_string(),
            r.targets[1].min.to_string(),
            r.targets[1].max.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
