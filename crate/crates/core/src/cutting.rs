//! Proportional cuts: splitting a district so that both the measure and a
//! party's support scale by the same fraction.
//!
//! The single cut lays the district's intervals end to end on `[0, t]`,
//! slides a window of measure `s * t` around that circle, and picks the
//! leftmost offset where the window's support equals `s` times the total.
//! With piecewise-constant densities the window support is piecewise linear
//! in the offset, so the offset is found exactly by scanning its linear
//! segments.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::density::Density;
use crate::error::CutError;
use crate::interval::{format_rational, District, Interval, Rational};

/// The two halves of a proportional cut.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CutResult {
    pub piece_1: District,
    pub piece_2: District,
}

/// The district laid out end to end on `[0, t]`.
struct Relabeled<'a> {
    district: &'a District,
    /// Start offset of each interval of the district.
    offsets: Vec<Rational>,
    /// Constant segments `(start, end, value)` of the relabeled density.
    segments: Vec<(Rational, Rational, Rational)>,
    /// Integral of the relabeled density from 0 to each segment start.
    prefix: Vec<Rational>,
    total_len: Rational,
    total_value: Rational,
}

impl<'a> Relabeled<'a> {
    fn new(f: &Density, district: &'a District) -> Self {
        let mut offsets = Vec::with_capacity(district.interval_count());
        let mut segments = Vec::new();
        let mut cursor = Rational::zero();
        let pieces = f.pieces();
        let mut k = 0;
        for iv in district.intervals() {
            offsets.push(cursor.clone());
            while k < pieces.len() && pieces[k].hi <= *iv.lo() {
                k += 1;
            }
            let mut t = k;
            while t < pieces.len() && pieces[t].lo < *iv.hi() {
                let lo = (&pieces[t].lo).max(iv.lo());
                let hi = (&pieces[t].hi).min(iv.hi());
                if lo < hi {
                    let len = hi - lo;
                    let end = &cursor + &len;
                    segments.push((cursor.clone(), end.clone(), pieces[t].value.clone()));
                    cursor = end;
                }
                t += 1;
            }
        }
        let mut prefix = Vec::with_capacity(segments.len());
        let mut acc = Rational::zero();
        for (lo, hi, v) in &segments {
            prefix.push(acc.clone());
            acc += v * (hi - lo);
        }
        Relabeled { district, offsets, segments, prefix, total_len: cursor, total_value: acc }
    }

    /// Integral of the relabeled density over `[0, y]` for `y` in `[0, t]`.
    fn cumulative(&self, y: &Rational) -> Rational {
        if self.segments.is_empty() {
            return Rational::zero();
        }
        let idx = match self.segments.binary_search_by(|(lo, _, _)| lo.cmp(y)) {
            Ok(i) => i,
            Err(0) => 0,
            Err(i) => i - 1,
        };
        let (lo, hi, v) = &self.segments[idx];
        let within = y.min(hi) - lo;
        &self.prefix[idx] + v * within
    }

    /// Integral over `[0, y]` of the periodic extension, for `y` in `[0, 2t]`.
    fn cumulative_wrapped(&self, y: &Rational) -> Rational {
        if *y > self.total_len {
            &self.total_value + self.cumulative(&(y - &self.total_len))
        } else {
            self.cumulative(y)
        }
    }

    /// Support of the wrap-around window `[x, x + width]`.
    fn window(&self, x: &Rational, width: &Rational) -> Rational {
        self.cumulative_wrapped(&(x + width)) - self.cumulative(x)
    }

    /// Maps a relabeled range `[p, q]` (within `[0, t]`) back onto the
    /// district's actual intervals.
    fn unmap(&self, p: &Rational, q: &Rational, out: &mut Vec<Interval>) {
        for (iv, off) in self.district.intervals().iter().zip(&self.offsets) {
            let end = off + iv.len();
            let lo = p.max(off);
            let hi = q.min(&end);
            if lo < hi {
                let a = iv.lo() + (lo - off);
                let b = iv.lo() + (hi - off);
                out.push(Interval::new(a, b).expect("ordered"));
            }
        }
    }
}

/// Splits `d` into `piece_1` with `measure = s * measure(d)` and
/// `f`-support `= s * support(d)`, and `piece_2` its closed complement in
/// `d`. When several window offsets qualify, the leftmost one is used.
pub fn austin_cut(f: &Density, d: &District, s: &Rational) -> Result<CutResult, CutError> {
    if s.is_negative() || *s > Rational::one() {
        return Err(CutError::FractionOutOfRange(format_rational(s)));
    }
    if s.is_zero() || d.is_empty() {
        return Ok(CutResult { piece_1: District::empty(), piece_2: d.clone() });
    }
    if s.is_one() {
        return Ok(CutResult { piece_1: d.clone(), piece_2: District::empty() });
    }

    let lay = Relabeled::new(f, d);
    let t = &lay.total_len;
    let width = s * t;
    let target = s * &lay.total_value;

    // Breakpoints of the window function: segment boundaries x and x - width
    // (mod t). Between consecutive breakpoints the window support is linear.
    let mut marks: Vec<Rational> = vec![Rational::zero(), t.clone()];
    for (lo, _, _) in &lay.segments {
        marks.push(lo.clone());
        let shifted = lo - &width;
        marks.push(if shifted.is_negative() { shifted + t } else { shifted });
    }
    marks.sort();
    marks.dedup();

    let start = find_leftmost_root(&marks, |x| lay.window(x, &width) - &target)
        .expect("window support attains its mean value somewhere on [0, t]");

    let mut pieces = Vec::new();
    let end = &start + &width;
    if end <= *t {
        lay.unmap(&start, &end, &mut pieces);
    } else {
        lay.unmap(&start, t, &mut pieces);
        lay.unmap(&Rational::zero(), &(end - t), &mut pieces);
    }
    let piece_1 = District::from_intervals(pieces);
    let piece_2 = d.subtract(&piece_1);
    Ok(CutResult { piece_1, piece_2 })
}

/// Leftmost zero of a function that is linear between consecutive sorted
/// `marks`.
fn find_leftmost_root<F>(marks: &[Rational], eval: F) -> Option<Rational>
where
    F: Fn(&Rational) -> Rational,
{
    let values: Vec<Rational> = marks.iter().map(&eval).collect();
    for k in 0..marks.len() {
        if values[k].is_zero() {
            return Some(marks[k].clone());
        }
        if k + 1 < marks.len() && values[k].signum() != values[k + 1].signum() && !values[k + 1].is_zero() {
            let (a, b) = (&marks[k], &marks[k + 1]);
            let (ha, hb) = (&values[k], &values[k + 1]);
            return Some(a - ha * (b - a) / (hb - ha));
        }
    }
    None
}

/// Cuts `floor(1/s)` pairwise measure-disjoint districts out of `d`, each of
/// measure `s * measure(d)` with `f`-support `s * support(d)`.
pub fn iterated_cut(f: &Density, d: &District, s: &Rational) -> Result<Vec<District>, CutError> {
    iterated_cut_with_remainder(f, d, s, None).map(|(pieces, _)| pieces)
}

/// Like [`iterated_cut`], optionally stopping after `limit` pieces, and also
/// returning the unused part of `d`.
pub fn iterated_cut_with_remainder(
    f: &Density,
    d: &District,
    s: &Rational,
    limit: Option<usize>,
) -> Result<(Vec<District>, District), CutError> {
    if !s.is_positive() {
        return Err(CutError::NonPositiveFraction(format_rational(s)));
    }
    let count = (Rational::one() / s).floor().to_integer();
    let mut count: usize = count.try_into().unwrap_or(usize::MAX);
    if let Some(limit) = limit {
        count = count.min(limit);
    }
    let mut pieces = Vec::with_capacity(count);
    let mut rest = d.clone();
    for k in 0..count {
        let left = Rational::one() - s * Rational::from_integer((k as i64).into());
        let frac = s / left;
        if frac >= Rational::one() {
            pieces.push(std::mem::take(&mut rest));
            continue;
        }
        let cut = austin_cut(f, &rest, &frac)?;
        pieces.push(cut.piece_1);
        rest = cut.piece_2;
    }
    Ok((pieces, rest))
}
