//! Exact intervals and districts on the unit interval.
//!
//! A [`District`] is a finite union of closed intervals kept in canonical
//! form: sorted, pairwise disjoint except for shared endpoints that have
//! already been merged, and free of zero-length pieces. Set operations treat
//! endpoint-only overlaps as measure zero.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseError;

/// Arbitrary-precision rational, always in lowest terms.
pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, an integer, or a finite decimal such as `"0.125"` or
/// `"-1.5e-3"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, ParseError> {
    let t = s.trim();
    let bad = || ParseError::Number(s.to_string());
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = t[pos + 1..].parse().map_err(|_| bad())?;
            (&t[..pos], e)
        }
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: BigInt = format!("{whole}{frac}").parse().unwrap_or_else(|_| BigInt::zero());
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        Rational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        value = -value;
    }
    Ok(value)
}

/// Renders a rational as `"p/q"`, or `"p"` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) mod rational_serde {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }
}

/// A closed interval `[lo, hi]` with `lo <= hi`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    /// Returns `None` when `lo > hi`.
    pub fn new(lo: Rational, hi: Rational) -> Option<Self> {
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn len(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", format_rational(&self.lo), format_rational(&self.hi))
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [format_rational(&self.lo), format_rational(&self.hi)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [lo, hi] = <[String; 2]>::deserialize(d)?;
        let lo = parse_rational(&lo).map_err(serde::de::Error::custom)?;
        let hi = parse_rational(&hi).map_err(serde::de::Error::custom)?;
        Interval::new(lo, hi).ok_or_else(|| serde::de::Error::custom("interval with lo > hi"))
    }
}

/// A finite union of closed intervals in canonical form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct District {
    intervals: Vec<Interval>,
}

impl<'de> Deserialize<'de> for District {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(District::from_intervals(Vec::<Interval>::deserialize(d)?))
    }
}

impl District {
    pub fn empty() -> Self {
        District::default()
    }

    /// The whole state `[0, 1]`.
    pub fn unit() -> Self {
        District::interval(Rational::zero(), Rational::one())
    }

    /// A single interval; empty when `lo >= hi`.
    pub fn interval(lo: Rational, hi: Rational) -> Self {
        match Interval::new(lo, hi) {
            Some(iv) => District::from_intervals(vec![iv]),
            None => District::empty(),
        }
    }

    /// Canonicalizes an arbitrary collection of intervals (their union).
    pub fn from_intervals(mut intervals: Vec<Interval>) -> Self {
        intervals.retain(|iv| !iv.is_degenerate());
        intervals.sort_by(|a, b| a.lo.cmp(&b.lo));
        let mut merged: Vec<Interval> = Vec::with_capacity(intervals.len());
        for iv in intervals {
            match merged.last_mut() {
                Some(last) if iv.lo <= last.hi => {
                    if iv.hi > last.hi {
                        last.hi = iv.hi;
                    }
                }
                _ => merged.push(iv),
            }
        }
        District { intervals: merged }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn interval_count(&self) -> usize {
        self.intervals.len()
    }

    pub fn measure(&self) -> Rational {
        self.intervals.iter().fold(Rational::zero(), |acc, iv| acc + iv.len())
    }

    pub fn union(&self, other: &District) -> District {
        let mut all = self.intervals.clone();
        all.extend(other.intervals.iter().cloned());
        District::from_intervals(all)
    }

    /// Intersection; endpoint-only contacts are dropped.
    pub fn intersect(&self, other: &District) -> District {
        let (a, b) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = (&a[i].lo).max(&b[j].lo);
            let hi = (&a[i].hi).min(&b[j].hi);
            if lo < hi {
                out.push(Interval { lo: lo.clone(), hi: hi.clone() });
            }
            if a[i].hi < b[j].hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        District { intervals: out }
    }

    /// Closure of the set difference `self \ other`.
    pub fn subtract(&self, other: &District) -> District {
        let mut out = Vec::new();
        let b = &other.intervals;
        let mut j = 0;
        for iv in &self.intervals {
            let mut cursor = iv.lo.clone();
            while j < b.len() && b[j].hi <= iv.lo {
                j += 1;
            }
            let mut k = j;
            while k < b.len() && b[k].lo < iv.hi {
                if b[k].lo > cursor {
                    out.push(Interval { lo: cursor.clone(), hi: b[k].lo.clone() });
                }
                if b[k].hi > cursor {
                    cursor = b[k].hi.clone();
                }
                k += 1;
            }
            if cursor < iv.hi {
                out.push(Interval { lo: cursor, hi: iv.hi.clone() });
            }
        }
        District::from_intervals(out)
    }

    /// Closure of `[0, 1] \ self`.
    pub fn complement(&self) -> District {
        District::unit().subtract(self)
    }

    /// Splits off the leftmost part of measure `amount`. The amount is
    /// clamped to `[0, measure]`.
    pub fn split_at_measure(&self, amount: &Rational) -> (District, District) {
        let mut left = Vec::new();
        let mut right = Vec::new();
        let mut remaining = amount.clone();
        for iv in &self.intervals {
            if !remaining.is_positive() {
                right.push(iv.clone());
                continue;
            }
            let len = iv.len();
            if len <= remaining {
                remaining -= &len;
                left.push(iv.clone());
            } else {
                let cut = &iv.lo + &remaining;
                left.push(Interval { lo: iv.lo.clone(), hi: cut.clone() });
                right.push(Interval { lo: cut, hi: iv.hi.clone() });
                remaining = Rational::zero();
            }
        }
        (District::from_intervals(left), District::from_intervals(right))
    }

    /// Whether the district lies within `[0, 1]`.
    pub fn within_unit(&self) -> bool {
        match (self.intervals.first(), self.intervals.last()) {
            (Some(first), Some(last)) => !first.lo.is_negative() && last.hi <= Rational::one(),
            _ => true,
        }
    }
}

impl fmt::Display for District {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return write!(f, "∅");
        }
        for (k, iv) in self.intervals.iter().enumerate() {
            if k > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "{iv}")?;
        }
        Ok(())
    }
}
