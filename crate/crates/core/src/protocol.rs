//! Cut-and-choose construction of a partition meeting both parties'
//! geometric targets.
//!
//! The party with the smaller battleground (the cutter `j`) halves it into
//! two competitive pieces. Whichever half it ends up controlling, cutting it
//! into `floor(m_j / 2)` competitive districts it wins on ties meets its
//! target. The chooser `i` picks the half to cede:
//!
//! * minority chooser: the halves induce an equal split of `X_i`; `i` keeps
//!   the half where it has at least a quarter of `m_i / m` support and cuts
//!   `floor(m_i / 2)` districts it wins out of it;
//! * majority chooser: both cutter packings are extended alternately with
//!   `1/m` districts until they cover `m_i / m`. If either packing leaves `i`
//!   a majority of everything else, `i` takes all of it ("easy"); otherwise
//!   the uncovered remainder is split against the packings' `i`-wins and `i`
//!   re-cuts one side ("packed").
//!
//! Every inequality the construction depends on is checked and recorded in
//! the [`ProtocolTrace`].

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::cutting::austin_cut;
use crate::density::{Instance, Party};
use crate::interval::{format_rational, District, Rational};
use crate::targets::{
    battleground, chunk_left_to_right, count_wins, cut_with_limit, district_count, half_up, is_competitive,
    is_minority, verify_gt, wins, Battleground, LabeledPartition, TargetReport,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChooserBranch {
    Minority,
    MajorityEasy,
    MajorityPacked,
}

/// One recorded inequality or identity from the construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinorityDetail {
    /// `D'_1, D'_2`: equal halves of the chooser's battleground.
    pub enlarged: [District; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MajorityDetail {
    /// The cutter packings after alternate extension.
    pub extended: [LabeledPartition; 2],
    /// `A_k`: districts of extended packing `k` the chooser wins.
    pub chooser_wins: [District; 2],
    /// `B_k`: districts of extended packing `k` the chooser loses.
    pub chooser_losses: [District; 2],
    /// `C`: everything neither extended packing covers.
    pub uncovered: District,
    /// `C_1, C_2` in the packed case.
    pub uncovered_split: Option<[District; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProtocolTrace {
    pub cutter: Party,
    pub chooser: Party,
    pub cutter_battleground: Battleground,
    pub chooser_battleground: Battleground,
    /// `D_1, D_2`: the cutter's halves of its battleground.
    pub halves: [District; 2],
    /// The cutter's competitive districts `E_k` cut from each half.
    pub cutter_packings: [Vec<District>; 2],
    pub branch: Option<ChooserBranch>,
    /// 1-based index of the half ceded to the cutter (`k_j`).
    pub ceded_half: Option<usize>,
    /// Districts the chooser cut for itself (`F_k` or the re-cut region).
    pub chooser_districts: Vec<District>,
    pub minority: Option<MinorityDetail>,
    pub majority: Option<MajorityDetail>,
    pub checks: Vec<Check>,
    pub final_partition: Option<LabeledPartition>,
    pub report: Option<[TargetReport; 2]>,
}

#[derive(Debug, Error)]
#[error("internal invariant violated: {check}")]
pub struct ProtocolError {
    pub check: String,
    pub trace: Box<ProtocolTrace>,
}

struct Run<'a> {
    inst: &'a Instance,
    trace: ProtocolTrace,
}

fn q(k: usize) -> Rational {
    Rational::from_integer((k as i64).into())
}

fn two() -> Rational {
    q(2)
}

impl<'a> Run<'a> {
    fn require(&mut self, name: &str, holds: bool, detail: impl FnOnce() -> String) -> Result<(), ProtocolError> {
        self.trace.checks.push(Check { name: name.to_string(), holds, detail: detail() });
        if holds {
            Ok(())
        } else {
            Err(ProtocolError { check: name.to_string(), trace: Box::new(self.trace.clone()) })
        }
    }

    fn unit(&self) -> Rational {
        self.inst.district_measure()
    }

    /// `v_i^i(d) - mu(d)/2 >= 0`, as an exact comparison.
    fn leans(&self, party: Party, d: &District) -> bool {
        self.inst.belief(party).integrate(d) * two() >= d.measure()
    }

    fn cut_equal(&self, party: Party, region: &District, count: usize) -> Vec<District> {
        if count == 0 {
            return Vec::new();
        }
        cut_with_limit(self.inst, party, region, &(Rational::one() / q(count)), count).0
    }

    fn require_districts(&mut self, name: &str, districts: &[District]) -> Result<(), ProtocolError> {
        let unit = self.unit();
        let bad = districts.iter().position(|d| d.measure() != unit);
        self.require(name, bad.is_none(), || match bad {
            Some(k) => format!("district {} has measure {}", k + 1, format_rational(&districts[k].measure())),
            None => format!("{} districts of measure 1/{}", districts.len(), unit.denom()),
        })
    }
}

/// Builds a GT partition for any two-party instance, recording every step.
pub fn build_gt_partition(inst: &Instance) -> Result<ProtocolTrace, ProtocolError> {
    let m = inst.m();
    let bgs = Party::BOTH.map(|p| battleground(inst, p));
    // The smaller battleground cuts; on equal sizes party 2 cuts.
    let (cutter, chooser) = if bgs[0].size < bgs[1].size {
        (Party::One, Party::Two)
    } else {
        (Party::Two, Party::One)
    };
    let cutter_bg = bgs[cutter.index()].clone();
    let chooser_bg = bgs[chooser.index()].clone();
    let (mj, mi) = (cutter_bg.size, chooser_bg.size);

    let halves = austin_cut(inst.belief(cutter), &cutter_bg.district, &Rational::new(1.into(), 2.into()))
        .expect("one half is a valid fraction");
    let halves = [halves.piece_1, halves.piece_2];

    let mut run = Run {
        inst,
        trace: ProtocolTrace {
            cutter,
            chooser,
            cutter_battleground: cutter_bg,
            chooser_battleground: chooser_bg,
            halves: halves.clone(),
            cutter_packings: [Vec::new(), Vec::new()],
            branch: None,
            ceded_half: None,
            chooser_districts: Vec::new(),
            minority: None,
            majority: None,
            checks: Vec::new(),
            final_partition: None,
            report: None,
        },
    };

    let half_measure = q(mj) / q(2 * m);
    for (k, h) in halves.iter().enumerate() {
        let ok = h.measure() == half_measure && is_competitive(inst, cutter, h);
        run.require(&format!("half {} competitive with measure m_j/(2m)", k + 1), ok, || {
            format!("measure {}", format_rational(&h.measure()))
        })?;
    }

    // Each half yields floor(m_j / 2) competitive districts of measure 1/m.
    let per_half = mj / 2;
    let packings: [Vec<District>; 2] = if per_half == 0 {
        [Vec::new(), Vec::new()]
    } else {
        let s = two() / q(mj);
        halves.clone().map(|h| cut_with_limit(inst, cutter, &h, &s, per_half).0)
    };
    for (k, pack) in packings.iter().enumerate() {
        run.require_districts(&format!("cutter districts from half {} have measure 1/m", k + 1), pack)?;
        let all_competitive = pack.iter().all(|d| is_competitive(inst, cutter, d));
        run.require(&format!("cutter districts from half {} competitive for cutter", k + 1), all_competitive, || {
            format!("{} districts", pack.len())
        })?;
    }
    run.trace.cutter_packings = packings.clone();

    let final_partition = if is_minority(inst, chooser) {
        minority_chooser(&mut run, &halves, &packings, mi)?
    } else {
        majority_chooser(&mut run, &packings, mj, mi)?
    };

    let valid = final_partition.validate_full(m);
    run.require("final partition is a full m-partition", valid.is_ok(), || match &valid {
        Ok(()) => format!("{m} districts"),
        Err(e) => e.to_string(),
    })?;
    let report = verify_gt(inst, &final_partition).expect("validated above");
    run.trace.final_partition = Some(final_partition);
    run.trace.report = Some(report.clone());
    for r in &report {
        run.require(&format!("geometric target met for party {}", r.party), r.satisfied, || {
            format!("achieved {} >= target {}", r.achieved, r.target)
        })?;
    }
    Ok(run.trace)
}

fn minority_chooser(
    run: &mut Run<'_>,
    halves: &[District; 2],
    packings: &[Vec<District>; 2],
    mi: usize,
) -> Result<LabeledPartition, ProtocolError> {
    let inst = run.inst;
    let m = inst.m();
    let (cutter, chooser) = (run.trace.cutter, run.trace.chooser);
    run.trace.branch = Some(ChooserBranch::Minority);

    let xi = run.trace.chooser_battleground.district.clone();
    let inside = [halves[0].intersect(&xi), halves[1].intersect(&xi)];
    let outside = xi.subtract(&halves[0]).subtract(&halves[1]);
    let target = q(mi) / q(2 * m);
    let need = &target - inside[0].measure();
    let fits = inside.iter().all(|d| d.measure() <= target);
    run.require("halves meet X_i in at most m_i/(2m)", fits, || {
        format!(
            "{} and {}",
            format_rational(&inside[0].measure()),
            format_rational(&inside[1].measure())
        )
    })?;
    let (head, tail) = outside.split_at_measure(&need);
    let enlarged = [inside[0].union(&head), inside[1].union(&tail)];
    let equal = enlarged.iter().all(|d| d.measure() == target);
    run.require("enlarged halves split X_i equally", equal, || {
        format!(
            "{} and {}",
            format_rational(&enlarged[0].measure()),
            format_rational(&enlarged[1].measure())
        )
    })?;
    run.trace.minority = Some(MinorityDetail { enlarged: enlarged.clone() });

    let quarter = q(mi) / q(4 * m);
    let support = |d: &District| inst.belief(chooser).integrate(d);
    let keep = if support(&enlarged[0]) >= quarter { 0 } else { 1 };
    let kept_support = support(&enlarged[keep]);
    run.require("kept half has chooser support >= m_i/(4m)", kept_support >= quarter, || {
        format!("{} >= {}", format_rational(&kept_support), format_rational(&quarter))
    })?;
    let ceded = 1 - keep;
    run.trace.ceded_half = Some(ceded + 1);

    let own = if mi / 2 == 0 {
        Vec::new()
    } else {
        cut_with_limit(inst, chooser, &enlarged[keep], &(two() / q(mi)), mi / 2).0
    };
    run.require_districts("chooser districts have measure 1/m", &own)?;
    let threshold = Rational::one() / q(2 * m);
    let strong = own.iter().all(|d| support(d) >= threshold);
    run.require("chooser districts have support >= 1/(2m)", strong, || format!("{} districts", own.len()))?;
    run.trace.chooser_districts = own.clone();

    let mut out = LabeledPartition::new();
    out.extend(packings[ceded].iter().cloned(), cutter);
    out.extend(own, chooser);
    fill_remainder(run, out, cutter)
}

/// Cuts whatever `partial` leaves uncovered into left-to-right `1/m` chunks.
fn fill_remainder(
    run: &mut Run<'_>,
    mut partial: LabeledPartition,
    tie: Party,
) -> Result<LabeledPartition, ProtocolError> {
    let inst = run.inst;
    let rest = partial.covered().complement();
    let count = inst.m().checked_sub(partial.len());
    let whole = count.is_some_and(|c| rest.measure() == q(c) / q(inst.m()));
    run.require("remainder is a whole number of districts", whole, || {
        format!("remainder measure {}", format_rational(&rest.measure()))
    })?;
    partial.extend(chunk_left_to_right(inst, &rest, count.unwrap_or(0)), tie);
    Ok(partial)
}

fn majority_chooser(
    run: &mut Run<'_>,
    packings: &[Vec<District>; 2],
    mj: usize,
    mi: usize,
) -> Result<LabeledPartition, ProtocolError> {
    let inst = run.inst;
    let m = inst.m();
    let (cutter, chooser) = (run.trace.cutter, run.trace.chooser);

    let mut extended = [LabeledPartition::new(), LabeledPartition::new()];
    for (k, pack) in packings.iter().enumerate() {
        extended[k].extend(pack.iter().cloned(), cutter);
    }
    let start = 2 * (mj / 2);
    run.require("cutter packings fit inside m_i districts", start <= mi, || format!("{start} <= {mi}"))?;
    let needed = mi - start;
    if needed > 0 {
        let covered = extended[0].covered().union(&extended[1].covered());
        let free = covered.complement();
        let s = Rational::one() / (free.measure() * q(m));
        let (extra, _) = cut_with_limit(inst, chooser, &free, &s, needed);
        run.require_districts("extension districts have measure 1/m", &extra)?;
        run.require("extension produced enough districts", extra.len() == needed, || {
            format!("{} of {}", extra.len(), needed)
        })?;
        for (t, d) in extra.into_iter().enumerate() {
            extended[t % 2].push(d, cutter);
        }
    }

    let mut chooser_wins = [District::empty(), District::empty()];
    let mut chooser_losses = [District::empty(), District::empty()];
    for k in 0..2 {
        for (d, &tie) in extended[k].districts.iter().zip(&extended[k].tiebreak) {
            if wins(inst, chooser, chooser, d, tie) {
                chooser_wins[k] = chooser_wins[k].union(d);
            } else {
                chooser_losses[k] = chooser_losses[k].union(d);
            }
        }
    }
    let blocks = [chooser_wins[0].union(&chooser_losses[0]), chooser_wins[1].union(&chooser_losses[1])];
    let uncovered = blocks[0].union(&blocks[1]).complement();
    let cap = q(half_up(mi)) / q(m);
    for (k, b) in blocks.iter().enumerate() {
        run.require(&format!("extended packing {} covers at most ceil(m_i/2)/m", k + 1), b.measure() <= cap, || {
            format_rational(&b.measure())
        })?;
    }
    run.trace.majority = Some(MajorityDetail {
        extended: extended.clone(),
        chooser_wins: chooser_wins.clone(),
        chooser_losses: chooser_losses.clone(),
        uncovered: uncovered.clone(),
        uncovered_split: None,
    });

    // Easy case: the chooser does not lean toward some packing, or leans
    // toward the uncovered part, so it has a majority of one complement.
    let easy = (0..2)
        .find(|&k| inst.belief(chooser).integrate(&blocks[k]) * two() <= blocks[k].measure())
        .or_else(|| run.leans(chooser, &uncovered).then_some(0));

    if let Some(ceded) = easy {
        run.trace.branch = Some(ChooserBranch::MajorityEasy);
        run.trace.ceded_half = Some(ceded + 1);
        let rest = blocks[ceded].complement();
        let leans = run.leans(chooser, &rest);
        run.require("chooser holds a majority outside the ceded packing", leans, || {
            format!("measure {}", format_rational(&rest.measure()))
        })?;
        let count = district_count(inst, &rest.measure());
        run.require("complement is a whole number of districts", count.is_some(), || {
            format_rational(&rest.measure())
        })?;
        let own = run.cut_equal(chooser, &rest, count.unwrap_or(0));
        run.require_districts("chooser districts have measure 1/m", &own)?;
        run.trace.chooser_districts = own.clone();
        let mut out = extended[ceded].clone();
        out.extend(own, chooser);
        return Ok(out);
    }

    run.trace.branch = Some(ChooserBranch::MajorityPacked);
    let wins_measure = [chooser_wins[0].measure(), chooser_wins[1].measure()];
    let c_measure = uncovered.measure();
    run.require("mu(C) <= mu(A_1) + mu(A_2)", c_measure <= &wins_measure[0] + &wins_measure[1], || {
        format!(
            "{} <= {} + {}",
            format_rational(&c_measure),
            format_rational(&wins_measure[0]),
            format_rational(&wins_measure[1])
        )
    })?;
    let split = if c_measure.is_zero() {
        [District::empty(), District::empty()]
    } else {
        let first = (&c_measure).min(&wins_measure[0]).clone();
        let cut = austin_cut(inst.belief(chooser), &uncovered, &(first / &c_measure)).expect("fraction in [0, 1]");
        [cut.piece_1, cut.piece_2]
    };
    for k in 0..2 {
        let (c, a) = (split[k].measure(), &wins_measure[k]);
        run.require(&format!("mu(C_{}) <= mu(A_{})", k + 1, k + 1), c <= *a, || {
            format!("{} <= {}", format_rational(&c), format_rational(a))
        })?;
    }
    if let Some(detail) = run.trace.majority.as_mut() {
        detail.uncovered_split = Some(split.clone());
    }

    let regions = [blocks[0].union(&split[0]), blocks[1].union(&split[1])];
    let keep = if run.leans(chooser, &regions[0]) { 0 } else { 1 };
    let leans = run.leans(chooser, &regions[keep]);
    run.require("chooser leans toward the kept region", leans, || {
        format!("region {}", keep + 1)
    })?;
    let ceded = 1 - keep;
    run.trace.ceded_half = Some(ceded + 1);

    let count = district_count(inst, &regions[keep].measure());
    run.require("kept region is a whole number of districts", count.is_some(), || {
        format_rational(&regions[keep].measure())
    })?;
    let own = run.cut_equal(chooser, &regions[keep], count.unwrap_or(0));
    run.require_districts("chooser districts have measure 1/m", &own)?;
    run.trace.chooser_districts = own.clone();

    let mut out = extended[ceded].clone();
    out.extend(own, chooser);
    let out = fill_remainder(run, out, cutter)?;
    let seats = count_wins(inst, chooser, chooser, &out.districts, &out.tiebreak);
    let floor = m - half_up(mi);
    run.require("packed chooser wins at least m - ceil(m_i/2)", seats >= floor, || {
        format!("{seats} >= {floor}")
    })?;
    Ok(out)
}
