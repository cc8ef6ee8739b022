use gtdistrict_ensemble::*;
use proptest::prelude::*;

fn record(seats: [usize; 2]) -> EnsembleRecord {
    EnsembleRecord { sample: 0, seats, efficiency_gap: 0.0, competitive: 0, pp_mean: 0.0, gt: None }
}

#[test]
fn zero_deviation_changes_nothing() {
    let g = grid(&GridSpec::new(6, 6, 3, Pattern::Gradient { mean: 0.5, spread: 0.5 })).unwrap();
    let samples = run_chain(&g, 400, 0, 9).unwrap().samples;
    let beliefs = Beliefs::agreed(TRUTH_DATASET);
    let base = evaluate(&g, &samples, &beliefs).unwrap();
    for party in [1, 2] {
        for mode in [DeviationMode::Uniform, DeviationMode::Random] {
            let dev = Deviation::new(party, mode, 0).unwrap();
            let h = apply_deviation(&g, TRUTH_DATASET, "dev", &dev, 1).unwrap();
            assert_eq!(h.votes("dev").unwrap(), g.votes(TRUTH_DATASET).unwrap());
            let mut b = beliefs.clone();
            b.party[party - 1] = "dev".to_string();
            let again = evaluate(&h, &samples, &b).unwrap();
            assert_eq!(format!("{base:?}"), format!("{again:?}"));
        }
    }
}

#[test]
fn deviation_leaves_other_datasets_alone() {
    let g = grid(&GridSpec::new(3, 3, 3, Pattern::Gradient { mean: 0.5, spread: 0.4 })).unwrap();
    let dev = Deviation::new(2, DeviationMode::Uniform, -25).unwrap();
    let h = apply_deviation(&g, TRUTH_DATASET, "dev", &dev, 0).unwrap();
    assert_eq!(h.votes(TRUTH_DATASET).unwrap(), g.votes(TRUTH_DATASET).unwrap());
    let before = g.votes(TRUTH_DATASET).unwrap();
    for (old, new) in before.iter().zip(h.votes("dev").unwrap()) {
        assert_eq!(new.two, old.two * 7_500);
        assert_eq!(new.total(), old.total() * 10_000);
    }
}

#[test]
fn sweep_rows_per_scenario() {
    let g = grid(&GridSpec::new(6, 6, 3, Pattern::Gradient { mean: 0.5, spread: 0.5 })).unwrap();
    let samples = run_chain(&g, 300, 0, 2).unwrap().samples;
    let percents: Vec<u32> = (1..=10).map(|k| 5 * k).collect();
    let rows = deviation_sweep(&g, &samples, &Beliefs::agreed(TRUTH_DATASET), &percents, 0).unwrap();
    assert_eq!(rows.len(), 1 + 2 * 3 * 10);
    let mut buf = Vec::new();
    write_sweep_csv(&rows, &mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap().lines().count(), rows.len() + 1);
}

proptest! {
    #[test]
    fn targets_move_only_with_the_range(seats in prop::collection::vec(0usize..8, 1..40)) {
        let mut records = Vec::new();
        let mut last: Option<[SeatTarget; 2]> = None;
        for &s in &seats {
            records.push(record([s, 7 - s]));
            let now = ensemble_targets(&records).unwrap();
            for p in 0..2 {
                let lo = records.iter().map(|r| r.seats[p]).min().unwrap();
                let hi = records.iter().map(|r| r.seats[p]).max().unwrap();
                prop_assert_eq!(now[p], SeatTarget::from_range(lo, hi));
                if let Some(prev) = last {
                    if (prev[p].min, prev[p].max) == (lo, hi) {
                        prop_assert_eq!(prev[p].target, now[p].target);
                    }
                }
            }
            last = Some(now);
        }
    }

    #[test]
    fn constrained_never_beats_unconstrained(
        rows in prop::collection::vec((0usize..5, 0usize..5, -0.5f64..0.5, 0.0f64..1.0), 1..30),
    ) {
        let records: Vec<EnsembleRecord> = rows
            .iter()
            .enumerate()
            .map(|(k, &(s, c, eg, pp))| EnsembleRecord {
                sample: k, seats: [s, 4 - s.min(4)], efficiency_gap: eg, competitive: c, pp_mean: pp, gt: None,
            })
            .collect();
        let t = ensemble_targets(&records).unwrap();
        let r = price_of_fairness_report(&records, &t);
        let all = r.unconstrained.unwrap();
        match r.constrained {
            Some(gt) => {
                prop_assert!(gt.competitive <= all.competitive);
                prop_assert!(gt.abs_eg >= all.abs_eg);
                prop_assert!(gt.pp_mean <= all.pp_mean);
            }
            None => prop_assert_eq!(r.gt_samples, 0),
        }
    }
}
