//! Competitiveness, battlegrounds, seat counting, extreme partitions and
//! geometric-target verification.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::cutting::{austin_cut, iterated_cut, iterated_cut_with_remainder};
use crate::density::{Instance, Party};
use crate::error::PartitionError;
use crate::interval::{format_rational, District, Interval, Rational};

/// A set of districts with a tie-breaking label per district (by index).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LabeledPartition {
    pub districts: Vec<District>,
    pub tiebreak: Vec<Party>,
}

impl LabeledPartition {
    pub fn new() -> Self {
        LabeledPartition { districts: Vec::new(), tiebreak: Vec::new() }
    }

    pub fn push(&mut self, district: District, tie: Party) {
        self.districts.push(district);
        self.tiebreak.push(tie);
    }

    pub fn extend<I: IntoIterator<Item = District>>(&mut self, districts: I, tie: Party) {
        for d in districts {
            self.push(d, tie);
        }
    }

    pub fn len(&self) -> usize {
        self.districts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.districts.is_empty()
    }

    /// Union of all districts.
    pub fn covered(&self) -> District {
        self.districts.iter().fold(District::empty(), |acc, d| acc.union(d))
    }

    /// Checks the three m-partition axioms exactly: `m` districts, each of
    /// measure `1/m`, pairwise measure-disjoint, covering `[0, 1]`.
    pub fn validate_full(&self, m: usize) -> Result<(), PartitionError> {
        if self.districts.len() != m {
            return Err(PartitionError::DistrictCount { expected: m, found: self.districts.len() });
        }
        if self.tiebreak.len() != m {
            return Err(PartitionError::TiebreakCount { expected: m, found: self.tiebreak.len() });
        }
        let unit = Rational::new(1.into(), (m as i64).into());
        for (index, d) in self.districts.iter().enumerate() {
            let measure = d.measure();
            if measure != unit || !d.within_unit() {
                return Err(PartitionError::DistrictMeasure { index, measure: format_rational(&measure), m });
            }
        }
        // Measures sum to 1, so a union of measure 1 forces measure-zero
        // overlaps; a closed union of full measure is all of [0, 1].
        let union = self.covered();
        if union != District::unit() {
            return Err(PartitionError::Coverage(format_rational(&union.measure())));
        }
        Ok(())
    }
}

impl Default for LabeledPartition {
    fn default() -> Self {
        Self::new()
    }
}

/// Party `i`'s battleground: the largest competitive district whose measure
/// is a whole number of districts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Battleground {
    pub party: Party,
    /// Number of whole districts' worth of measure in `district`.
    pub size: usize,
    pub district: District,
    /// Largest measure of any competitive district (not necessarily a
    /// multiple of `1/m`).
    #[serde(serialize_with = "crate::interval::rational_serde::serialize")]
    pub max_competitive_measure: Rational,
}

/// Per-party geometric-target summary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TargetReport {
    pub party: Party,
    pub min: usize,
    pub max: usize,
    pub target: usize,
    pub achieved: usize,
    pub satisfied: bool,
}

/// Seat bounds without a concrete partition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TargetBounds {
    pub party: Party,
    pub minority: bool,
    pub m_i: usize,
    pub min: usize,
    pub max: usize,
    pub target: usize,
}

pub fn is_competitive(inst: &Instance, party: Party, d: &District) -> bool {
    inst.belief(party).integrate(d) * Rational::from_integer(2.into()) == d.measure()
}

/// Whether `party` is a minority party by its own belief
/// (`v_i^i([0, 1]) <= 1/2`). The exactly tied case counts as minority.
pub fn is_minority(inst: &Instance, party: Party) -> bool {
    inst.belief(party).integrate(&District::unit()) * Rational::from_integer(2.into()) <= Rational::one()
}

/// Computes `m_i` and a realizing competitive district `X_i`.
///
/// With `g = f - 1/2` per density piece, a district is competitive iff the
/// positive and negative parts of `g` over it cancel. Zero pieces are free;
/// for a balance budget `B` the most length is bought by filling pieces in
/// increasing `|g|`, and the budget is maximal at
/// `B* = min(positive mass, negative mass)`.
pub fn battleground(inst: &Instance, party: Party) -> Battleground {
    let f = inst.belief(party);
    let half = Rational::new(1.into(), 2.into());
    let mut neutral = Vec::new();
    let mut positive = Vec::new();
    let mut negative = Vec::new();
    for p in f.pieces() {
        let g = &p.value - &half;
        if g.is_zero() {
            neutral.push(Interval::new(p.lo.clone(), p.hi.clone()).expect("piece ordered"));
        } else if g.is_positive() {
            positive.push((g, p));
        } else {
            negative.push((-g, p));
        }
    }
    let mass = |side: &[(Rational, &crate::density::Piece)]| {
        side.iter().fold(Rational::zero(), |acc, (g, p)| acc + g * p.len())
    };
    let budget = mass(&positive).min(mass(&negative));

    let mut chosen = neutral;
    for side in [&mut positive, &mut negative] {
        side.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.lo.cmp(&b.1.lo)));
        let mut left = budget.clone();
        for (g, p) in side.iter() {
            if !left.is_positive() {
                break;
            }
            let cost = g * p.len();
            if cost <= left {
                chosen.push(Interval::new(p.lo.clone(), p.hi.clone()).expect("piece ordered"));
                left -= cost;
            } else {
                let len = &left / g;
                chosen.push(Interval::new(p.lo.clone(), &p.lo + len).expect("piece ordered"));
                left = Rational::zero();
            }
        }
    }
    let widest = District::from_intervals(chosen);
    let max_measure = widest.measure();
    let m = Rational::from_integer((inst.m() as i64).into());
    let size: usize = (&max_measure * &m).floor().to_integer().try_into().expect("size fits usize");
    let district = if size == 0 {
        District::empty()
    } else {
        let fraction = Rational::from_integer((size as i64).into()) / (&m * &max_measure);
        austin_cut(f, &widest, &fraction).expect("fraction in [0, 1]").piece_1
    };
    Battleground { party, size, district, max_competitive_measure: max_measure }
}

/// `u_evaluator^winner(p)`: districts `winner` wins according to
/// `evaluator`'s belief, ties going by the partition's labels.
pub fn count_seats(
    inst: &Instance,
    evaluator: Party,
    winner: Party,
    p: &LabeledPartition,
) -> Result<usize, PartitionError> {
    p.validate_full(inst.m())?;
    Ok(count_wins(inst, evaluator, winner, &p.districts, &p.tiebreak))
}

/// Counts wins over arbitrary (not necessarily full) districts of measure
/// `1/m`, without validation.
pub(crate) fn count_wins(
    inst: &Instance,
    evaluator: Party,
    winner: Party,
    districts: &[District],
    tiebreak: &[Party],
) -> usize {
    districts
        .iter()
        .zip(tiebreak)
        .filter(|(d, &tie)| wins(inst, evaluator, winner, d, tie))
        .count()
}

/// Whether `winner` wins a district of measure `1/m` according to
/// `evaluator`.
pub(crate) fn wins(inst: &Instance, evaluator: Party, winner: Party, d: &District, tie: Party) -> bool {
    let twice = inst.support(evaluator, winner, d) * Rational::from_integer((2 * inst.m() as i64).into());
    twice > Rational::one() || (twice == Rational::one() && tie == winner)
}

/// Analytic `(min, max)` of `u_i^i` over all m-partitions.
pub fn seat_bounds(inst: &Instance, party: Party, m_i: usize) -> (usize, usize) {
    if is_minority(inst, party) {
        (0, m_i)
    } else {
        (inst.m() - m_i, inst.m())
    }
}

pub fn geometric_target(min_seats: usize, max_seats: usize) -> usize {
    (min_seats + max_seats) / 2
}

pub fn target_bounds(inst: &Instance, party: Party) -> TargetBounds {
    let bg = battleground(inst, party);
    let (min, max) = seat_bounds(inst, party, bg.size);
    TargetBounds {
        party,
        minority: is_minority(inst, party),
        m_i: bg.size,
        min,
        max,
        target: geometric_target(min, max),
    }
}

/// Per-party geometric-target report for a full m-partition.
pub fn verify_gt(inst: &Instance, p: &LabeledPartition) -> Result<[TargetReport; 2], PartitionError> {
    p.validate_full(inst.m())?;
    Ok(Party::BOTH.map(|party| {
        let bounds = target_bounds(inst, party);
        let achieved = count_wins(inst, party, party, &p.districts, &p.tiebreak);
        TargetReport {
            party,
            min: bounds.min,
            max: bounds.max,
            target: bounds.target,
            achieved,
            satisfied: achieved >= bounds.target,
        }
    }))
}

fn whole(k: usize) -> Rational {
    Rational::from_integer((k as i64).into())
}

/// Cuts `region` (measure `count/m`) into `count` equal proportional pieces
/// under `party`'s belief.
fn cut_into_districts(inst: &Instance, party: Party, region: &District, count: usize) -> Vec<District> {
    if count == 0 {
        return Vec::new();
    }
    iterated_cut(inst.belief(party), region, &(Rational::one() / whole(count))).expect("positive fraction")
}

/// A partition minimizing `u_i^i`.
///
/// Minority: `m` proportional districts, each with support at most
/// `1/(2m)`, ties against `party`. Majority: the opponent's best partition
/// by `party`'s belief, i.e. `X_i` cut into `m_i` competitive districts the
/// opponent wins on ties; the rest is won by `party` outright.
pub fn worst_partition(inst: &Instance, party: Party) -> LabeledPartition {
    let m = inst.m();
    let mut out = LabeledPartition::new();
    if is_minority(inst, party) {
        out.extend(cut_into_districts(inst, party, &District::unit(), m), party.other());
    } else {
        let bg = battleground(inst, party);
        out.extend(cut_into_districts(inst, party, &bg.district, bg.size), party.other());
        let rest = bg.district.complement();
        out.extend(cut_into_districts(inst, party, &rest, m - bg.size), party.other());
    }
    out
}

/// A partition maximizing `u_i^i`.
///
/// Minority: `X_i` cut into `m_i` competitive districts won on ties, the
/// remainder cut proportionally with ties to the opponent. Majority: `m`
/// proportional districts, each with support at least `1/(2m)`, ties to
/// `party`.
pub fn best_partition(inst: &Instance, party: Party) -> LabeledPartition {
    let m = inst.m();
    let mut out = LabeledPartition::new();
    if is_minority(inst, party) {
        let bg = battleground(inst, party);
        out.extend(cut_into_districts(inst, party, &bg.district, bg.size), party);
        let rest = bg.district.complement();
        out.extend(cut_into_districts(inst, party, &rest, m - bg.size), party.other());
    } else {
        out.extend(cut_into_districts(inst, party, &District::unit(), m), party);
    }
    out
}

/// Splits `region` left to right into `count` pieces of measure `1/m`.
pub(crate) fn chunk_left_to_right(inst: &Instance, region: &District, count: usize) -> Vec<District> {
    let unit = inst.district_measure();
    let mut rest = region.clone();
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        if k + 1 == count {
            out.push(std::mem::take(&mut rest));
        } else {
            let (head, tail) = rest.split_at_measure(&unit);
            out.push(head);
            rest = tail;
        }
    }
    out
}

/// Number of whole `1/m` districts in a measure that is a multiple of `1/m`.
pub(crate) fn district_count(inst: &Instance, measure: &Rational) -> Option<usize> {
    let scaled = measure * whole(inst.m());
    scaled.is_integer().then(|| scaled.to_integer().try_into().ok()).flatten()
}

/// `ceil(k / 2)`.
pub(crate) fn half_up(k: usize) -> usize {
    k.div_ceil(2)
}

/// Cuts using the remainder-returning variant; kept here for the protocol.
pub(crate) fn cut_with_limit(
    inst: &Instance,
    party: Party,
    region: &District,
    s: &Rational,
    limit: usize,
) -> (Vec<District>, District) {
    iterated_cut_with_remainder(inst.belief(party), region, s, Some(limit)).expect("positive fraction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::Density;
    use crate::interval::{int, rat};

    fn three_tenths() -> Density {
        Density::from_steps(&[int(0), rat(3, 10), int(1)], &[int(1), int(0)]).unwrap()
    }

    fn tenths() -> LabeledPartition {
        let mut p = LabeledPartition::new();
        for k in 0..10 {
            p.push(District::interval(rat(k, 10), rat(k + 1, 10)), Party::Two);
        }
        p
    }

    #[test]
    fn competitiveness_examples() {
        let uniform = Instance::agreement(2, Density::constant(rat(1, 2))).unwrap();
        assert!(is_competitive(&uniform, Party::One, &District::interval(rat(1, 7), rat(2, 3))));
        let solid = Instance::agreement(2, Density::constant(int(1))).unwrap();
        assert!(!is_competitive(&solid, Party::One, &District::interval(int(0), rat(1, 2))));
        let step = Instance::agreement(
            2,
            Density::from_steps(&[int(0), rat(1, 2), int(1)], &[int(1), int(0)]).unwrap(),
        )
        .unwrap();
        assert!(is_competitive(&step, Party::One, &District::interval(rat(1, 4), rat(3, 4))));
    }

    #[test]
    fn battleground_examples() {
        let uniform = Instance::agreement(10, Density::constant(rat(1, 2))).unwrap();
        let bg = battleground(&uniform, Party::One);
        assert_eq!(bg.size, 10);
        assert_eq!(bg.district, District::unit());

        let solid = Instance::agreement(7, Density::constant(int(1))).unwrap();
        let bg = battleground(&solid, Party::One);
        assert_eq!(bg.size, 0);
        assert!(bg.district.is_empty());

        let inst = Instance::agreement(10, three_tenths()).unwrap();
        let bg = battleground(&inst, Party::One);
        assert_eq!(bg.max_competitive_measure, rat(3, 5));
        assert_eq!(bg.size, 6);
        assert!(is_competitive(&inst, Party::One, &bg.district));
        assert_eq!(bg.district.measure(), rat(6, 10));
    }

    #[test]
    fn battleground_partial_district() {
        // 3/10 of +1/2 against 3/10 of -1/2 gives 6/10; with m = 4 only 2
        // whole districts fit.
        let inst = Instance::agreement(4, three_tenths()).unwrap();
        let bg = battleground(&inst, Party::One);
        assert_eq!(bg.size, 2);
        assert_eq!(bg.district.measure(), rat(1, 2));
        assert!(is_competitive(&inst, Party::One, &bg.district));
    }

    #[test]
    fn count_seats_examples() {
        let solid = Instance::agreement(10, Density::constant(int(1))).unwrap();
        assert_eq!(count_seats(&solid, Party::One, Party::One, &tenths()).unwrap(), 10);

        let uniform = Instance::agreement(2, Density::constant(rat(1, 2))).unwrap();
        let mut halves = LabeledPartition::new();
        halves.push(District::interval(int(0), rat(1, 2)), Party::Two);
        halves.push(District::interval(rat(1, 2), int(1)), Party::Two);
        assert_eq!(count_seats(&uniform, Party::One, Party::One, &halves).unwrap(), 0);

        let inst = Instance::agreement(10, three_tenths()).unwrap();
        assert_eq!(count_seats(&inst, Party::One, Party::One, &tenths()).unwrap(), 3);
    }

    #[test]
    fn count_seats_rejects_partial() {
        let inst = Instance::agreement(2, Density::constant(rat(1, 2))).unwrap();
        let mut p = LabeledPartition::new();
        p.push(District::interval(int(0), rat(1, 2)), Party::One);
        assert!(count_seats(&inst, Party::One, Party::One, &p).is_err());
        p.push(District::interval(int(0), rat(1, 2)), Party::One);
        assert!(matches!(
            count_seats(&inst, Party::One, Party::One, &p),
            Err(PartitionError::Coverage(_))
        ));
    }

    #[test]
    fn extreme_partitions() {
        let uniform = Instance::agreement(4, Density::constant(rat(1, 2))).unwrap();
        let worst = worst_partition(&uniform, Party::One);
        assert_eq!(count_seats(&uniform, Party::One, Party::One, &worst).unwrap(), 0);
        let best = best_partition(&uniform, Party::One);
        assert_eq!(count_seats(&uniform, Party::One, Party::One, &best).unwrap(), 4);

        let solid = Instance::agreement(5, Density::constant(int(1))).unwrap();
        assert_eq!(count_seats(&solid, Party::One, Party::One, &worst_partition(&solid, Party::One)).unwrap(), 5);

        let empty = Instance::agreement(3, Density::constant(int(0))).unwrap();
        assert_eq!(count_seats(&empty, Party::One, Party::One, &best_partition(&empty, Party::One)).unwrap(), 0);

        let inst = Instance::agreement(10, three_tenths()).unwrap();
        assert_eq!(count_seats(&inst, Party::One, Party::One, &worst_partition(&inst, Party::One)).unwrap(), 0);
        assert_eq!(count_seats(&inst, Party::One, Party::One, &best_partition(&inst, Party::One)).unwrap(), 6);
        // Party 2 is the majority here.
        assert_eq!(count_seats(&inst, Party::Two, Party::Two, &worst_partition(&inst, Party::Two)).unwrap(), 4);
        assert_eq!(count_seats(&inst, Party::Two, Party::Two, &best_partition(&inst, Party::Two)).unwrap(), 10);
    }

    #[test]
    fn geometric_target_values() {
        assert_eq!(geometric_target(5, 9), 7);
        assert_eq!(geometric_target(0, 0), 0);
        assert_eq!(geometric_target(3, 10), 6);
    }

    #[test]
    fn verify_gt_examples() {
        let uniform = Instance::agreement(2, Density::constant(rat(1, 2))).unwrap();
        let mut p = LabeledPartition::new();
        p.push(District::interval(int(0), rat(1, 2)), Party::One);
        p.push(District::interval(rat(1, 2), int(1)), Party::Two);
        for r in verify_gt(&uniform, &p).unwrap() {
            assert_eq!((r.achieved, r.target, r.satisfied), (1, 1, true));
        }

        let solid = Instance::new(3, Density::constant(int(1)), Density::constant(int(1))).unwrap();
        let thirds = worst_partition(&solid, Party::One);
        for r in verify_gt(&solid, &thirds).unwrap() {
            assert_eq!((r.achieved, r.target, r.satisfied), (3, 3, true));
        }

        let inst = Instance::agreement(10, three_tenths()).unwrap();
        let [one, two] = verify_gt(&inst, &tenths()).unwrap();
        assert_eq!((one.min, one.max, one.target), (0, 6, 3));
        assert_eq!((two.min, two.max, two.target), (4, 10, 7));
        assert_eq!(one.achieved, 3);
        assert_eq!(two.achieved, 7);
    }

    #[test]
    fn seats_sum_to_m() {
        let inst = Instance::agreement(10, three_tenths()).unwrap();
        for p in [tenths(), worst_partition(&inst, Party::One), best_partition(&inst, Party::One)] {
            for evaluator in Party::BOTH {
                let a = count_seats(&inst, evaluator, Party::One, &p).unwrap();
                let b = count_seats(&inst, evaluator, Party::Two, &p).unwrap();
                assert_eq!(a + b, 10);
            }
        }
    }

    #[test]
    fn left_to_right_chunks() {
        let inst = Instance::agreement(4, Density::constant(rat(1, 2))).unwrap();
        let chunks = chunk_left_to_right(&inst, &District::interval(int(0), rat(3, 4)), 3);
        assert_eq!(chunks[1], District::interval(rat(1, 4), rat(1, 2)));
        assert_eq!(half_up(5), 3);
        assert_eq!(district_count(&inst, &rat(3, 4)), Some(3));
        assert_eq!(district_count(&inst, &rat(1, 3)), None);
    }
}
