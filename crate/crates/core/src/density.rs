//! Piecewise-constant support densities and two-party instances.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::ParseError;
use crate::interval::{format_rational, parse_rational, District, Rational};

/// One of the two parties.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Party {
    One,
    Two,
}

impl Party {
    pub const BOTH: [Party; 2] = [Party::One, Party::Two];

    pub fn other(self) -> Party {
        match self {
            Party::One => Party::Two,
            Party::Two => Party::One,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Party::One => 0,
            Party::Two => 1,
        }
    }

    pub fn number(self) -> u8 {
        self.index() as u8 + 1
    }

    pub fn from_number(n: u8) -> Option<Party> {
        match n {
            1 => Some(Party::One),
            2 => Some(Party::Two),
            _ => None,
        }
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

impl Serialize for Party {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u8(self.number())
    }
}

impl<'de> Deserialize<'de> for Party {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let n = u8::deserialize(d)?;
        Party::from_number(n).ok_or_else(|| serde::de::Error::custom("party must be 1 or 2"))
    }
}

/// A constant piece `[lo, hi] -> value` of a density.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub lo: Rational,
    pub hi: Rational,
    pub value: Rational,
}

impl Piece {
    pub fn len(&self) -> Rational {
        &self.hi - &self.lo
    }
}

/// A piecewise-constant function `[0, 1] -> [0, 1]` giving one party's
/// support. Pieces tile `[0, 1]` in order; zero-length pieces are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Density {
    pieces: Vec<Piece>,
}

impl Density {
    pub fn new(pieces: Vec<Piece>) -> Result<Self, ParseError> {
        let mut cursor = Rational::zero();
        let mut kept = Vec::with_capacity(pieces.len());
        for p in pieces {
            if p.lo != cursor {
                return Err(ParseError::Tiling(format!(
                    "piece starts at {} but previous piece ends at {}",
                    format_rational(&p.lo),
                    format_rational(&cursor)
                )));
            }
            if p.hi < p.lo {
                return Err(ParseError::Tiling(format!(
                    "piece [{}, {}] is reversed",
                    format_rational(&p.lo),
                    format_rational(&p.hi)
                )));
            }
            if p.value < Rational::zero() || p.value > Rational::one() {
                return Err(ParseError::Value(format_rational(&p.value)));
            }
            cursor = p.hi.clone();
            if p.lo != p.hi {
                kept.push(p);
            }
        }
        if cursor != Rational::one() {
            return Err(ParseError::Tiling(format!(
                "pieces end at {} instead of 1",
                format_rational(&cursor)
            )));
        }
        Ok(Density { pieces: kept })
    }

    pub fn constant(value: Rational) -> Self {
        Density::new(vec![Piece { lo: Rational::zero(), hi: Rational::one(), value }])
            .expect("constant density must lie in [0, 1]")
    }

    /// Builds a density from breakpoints `0 = b_0 < b_1 < ... < b_k = 1` and
    /// `k` values.
    pub fn from_steps(breaks: &[Rational], values: &[Rational]) -> Result<Self, ParseError> {
        if breaks.len() != values.len() + 1 {
            return Err(ParseError::Tiling("need one more breakpoint than values".into()));
        }
        Density::new(
            breaks
                .windows(2)
                .zip(values)
                .map(|(w, v)| Piece { lo: w[0].clone(), hi: w[1].clone(), value: v.clone() })
                .collect(),
        )
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// The opposing party's density under the same belief, `1 - f`.
    pub fn complement(&self) -> Density {
        Density {
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece {
                    lo: p.lo.clone(),
                    hi: p.hi.clone(),
                    value: Rational::one() - &p.value,
                })
                .collect(),
        }
    }

    /// Exact integral of the density over a canonical district.
    pub fn integrate(&self, d: &District) -> Rational {
        let mut total = Rational::zero();
        let pieces = &self.pieces;
        let mut k = 0;
        for iv in d.intervals() {
            while k < pieces.len() && pieces[k].hi <= *iv.lo() {
                k += 1;
            }
            let mut t = k;
            while t < pieces.len() && pieces[t].lo < *iv.hi() {
                let lo = (&pieces[t].lo).max(iv.lo());
                let hi = (&pieces[t].hi).min(iv.hi());
                if lo < hi {
                    total += &pieces[t].value * (hi - lo);
                }
                t += 1;
            }
        }
        total
    }

    /// Number of density pieces that overlap `d` in positive measure.
    pub fn pieces_overlapping(&self, d: &District) -> usize {
        self.pieces
            .iter()
            .filter(|p| !d.intersect(&District::interval(p.lo.clone(), p.hi.clone())).is_empty())
            .count()
    }
}

/// A two-party state-cutting instance. `belief(i)` is party `i`'s own
/// support density `f_i^i`; the opponent's support under that belief is its
/// complement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    m: usize,
    beliefs: [Density; 2],
}

impl Instance {
    pub fn new(m: usize, belief_one: Density, belief_two: Density) -> Result<Self, ParseError> {
        if m == 0 {
            return Err(ParseError::DistrictCount);
        }
        Ok(Instance { m, beliefs: [belief_one, belief_two] })
    }

    /// Both parties share one view of the electorate: `f_2^2 = 1 - f_1^1`.
    pub fn agreement(m: usize, belief_one: Density) -> Result<Self, ParseError> {
        let two = belief_one.complement();
        Instance::new(m, belief_one, two)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn belief(&self, party: Party) -> &Density {
        &self.beliefs[party.index()]
    }

    /// `v_evaluator^supporter(d)`: support for `supporter` over `d` according
    /// to `evaluator`'s belief.
    pub fn support(&self, evaluator: Party, supporter: Party, d: &District) -> Rational {
        let own = self.belief(evaluator).integrate(d);
        if evaluator == supporter {
            own
        } else {
            d.measure() - own
        }
    }

    /// `1/m` as a rational.
    pub fn district_measure(&self) -> Rational {
        Rational::new(1.into(), (self.m as i64).into())
    }

    pub fn from_json(text: &str) -> Result<Self, ParseError> {
        let raw: InstanceJson = serde_json::from_str(text)?;
        raw.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&InstanceJson::from(self)).expect("instance serializes")
    }
}

#[derive(Serialize, Deserialize)]
struct InstanceJson {
    m: usize,
    densities: BTreeMap<String, Vec<[String; 3]>>,
}

impl TryFrom<InstanceJson> for Instance {
    type Error = ParseError;

    fn try_from(raw: InstanceJson) -> Result<Self, ParseError> {
        let parse = |key: &str, n: u8| -> Result<Density, ParseError> {
            let rows = raw.densities.get(key).ok_or(ParseError::MissingDensity(n))?;
            let pieces = rows
                .iter()
                .map(|[lo, hi, v]| {
                    Ok(Piece {
                        lo: parse_rational(lo)?,
                        hi: parse_rational(hi)?,
                        value: parse_rational(v)?,
                    })
                })
                .collect::<Result<Vec<_>, ParseError>>()?;
            Density::new(pieces)
        };
        let one = parse("1", 1)?;
        let two = parse("2", 2)?;
        Instance::new(raw.m, one, two)
    }
}

impl From<&Instance> for InstanceJson {
    fn from(inst: &Instance) -> Self {
        let rows = |d: &Density| {
            d.pieces()
                .iter()
                .map(|p| [format_rational(&p.lo), format_rational(&p.hi), format_rational(&p.value)])
                .collect::<Vec<_>>()
        };
        let mut densities = BTreeMap::new();
        densities.insert("1".to_string(), rows(inst.belief(Party::One)));
        densities.insert("2".to_string(), rows(inst.belief(Party::Two)));
        InstanceJson { m: inst.m, densities }
    }
}
