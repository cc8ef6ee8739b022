use gtdistrict_core::interval::{int, rat};
use gtdistrict_core::*;
use num_traits::Zero;
use proptest::prelude::*;

fn density() -> impl Strategy<Value = Density> {
    (1usize..8).prop_flat_map(|pieces| {
        (prop::collection::btree_set(1i64..48, pieces - 1), prop::collection::vec(0i64..=12, pieces)).prop_map(
            |(cuts, values)| {
                let mut breaks = vec![int(0)];
                breaks.extend(cuts.into_iter().map(|c| rat(c, 48)));
                breaks.push(int(1));
                let values: Vec<Rational> = values.into_iter().map(|v| rat(v, 12)).collect();
                Density::from_steps(&breaks, &values).unwrap()
            },
        )
    })
}

fn district() -> impl Strategy<Value = District> {
    prop::collection::vec((0i64..40, 1i64..10), 1..4).prop_map(|spans| {
        District::from_intervals(spans.into_iter().filter_map(|(a, w)| Interval::new(rat(a, 49), rat(a + w, 49))).collect())
    })
}

fn instance() -> impl Strategy<Value = Instance> {
    (1usize..9, density(), density(), any::<bool>()).prop_map(|(m, one, two, agree)| {
        if agree {
            Instance::agreement(m, one).unwrap()
        } else {
            Instance::new(m, one, two).unwrap()
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn austin_cut_is_proportional(f in density(), d in district(), num in 0i64..=16) {
        let s = rat(num, 16);
        let cut = austin_cut(&f, &d, &s).unwrap();
        prop_assert_eq!(cut.piece_1.measure(), &s * d.measure());
        prop_assert_eq!(f.integrate(&cut.piece_1), &s * f.integrate(&d));
        prop_assert_eq!(cut.piece_1.union(&cut.piece_2), d.clone());
        prop_assert!(cut.piece_1.intersect(&cut.piece_2).measure().is_zero());
    }

    #[test]
    fn iterated_cut_splits_evenly(f in density(), d in district(), k in 1i64..7) {
        let pieces = iterated_cut(&f, &d, &rat(1, k)).unwrap();
        prop_assert_eq!(pieces.len(), k as usize);
        let mut covered = District::empty();
        for p in &pieces {
            prop_assert_eq!(p.measure() * int(k), d.measure());
            prop_assert_eq!(f.integrate(p) * int(k), f.integrate(&d));
            covered = covered.union(p);
        }
        prop_assert_eq!(covered, d);
    }

    #[test]
    fn protocol_meets_both_targets(inst in instance()) {
        let trace = build_gt_partition(&inst).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let partition = trace.final_partition.as_ref().unwrap();
        partition.validate_full(inst.m()).unwrap();
        let report = verify_gt(&inst, partition).unwrap();
        for r in &report {
            prop_assert!(r.satisfied, "party {:?} got {} below target {}", r.party, r.achieved, r.target);
        }
        prop_assert!(trace.checks.iter().all(|c| c.holds));
    }

    #[test]
    fn extremal_partitions_realize_the_bounds(inst in instance()) {
        for p in Party::BOTH {
            let b = target_bounds(&inst, p);
            prop_assert_eq!(count_seats(&inst, p, p, &worst_partition(&inst, p)).unwrap(), b.min);
            prop_assert_eq!(count_seats(&inst, p, p, &best_partition(&inst, p)).unwrap(), b.max);
            prop_assert!(b.min <= b.target && b.target <= b.max);
        }
    }

    #[test]
    fn battleground_is_competitive(inst in instance()) {
        for p in Party::BOTH {
            let bg = battleground(&inst, p);
            prop_assert!(is_competitive(&inst, p, &bg.district));
            prop_assert_eq!(bg.district.measure() * int(inst.m() as i64), int(bg.size as i64));
            prop_assert!(bg.district.measure() <= bg.max_competitive_measure);
        }
    }
}

#[test]
fn json_round_trip() {
    let text = r#"{"m": 4, "densities": {"1": [["0", "0.25", "1"], ["1/4", "1", "1/3"]], "2": [["0", "1", "0.5"]]}}"#;
    let inst = Instance::from_json(text).unwrap();
    assert_eq!(Instance::from_json(&inst.to_json()).unwrap(), inst);
    assert!(Instance::from_json(r#"{"m": 0, "densities": {}}"#).is_err());
}
