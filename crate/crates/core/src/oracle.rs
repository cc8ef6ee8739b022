//! Brute-force ground truth on discretized instances.
//!
//! An [`AtomInstance`] tiles `[0, 1]` with `n = m * q` atoms of width `1/n`
//! and constant support per atom. Partitions are restricted to whole atoms,
//! `q` per district, so extremes over them bound the continuous extremes
//! from inside; the two agree whenever the continuous optimum can be
//! assembled from whole atoms (for example `q` even with atom values in
//! `{0, 1/2, 1}`).

use num_traits::{One, Zero};

use crate::density::{Density, Instance, Party, Piece};
use crate::error::OracleError;
use crate::interval::{format_rational, Rational};

/// Largest atom count the enumerators accept.
pub const ENUMERATION_BOUND: usize = 14;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomInstance {
    m: usize,
    per_district: usize,
    /// Per party, its own support on each atom.
    values: [Vec<Rational>; 2],
}

impl AtomInstance {
    pub fn new(m: usize, per_district: usize, one: Vec<Rational>, two: Vec<Rational>) -> Result<Self, OracleError> {
        let expected = m * per_district;
        for v in [&one, &two] {
            if v.len() != expected || m == 0 {
                return Err(OracleError::Shape { atoms: v.len(), expected });
            }
            if let Some(bad) = v.iter().find(|x| **x < Rational::zero() || **x > Rational::one()) {
                return Err(OracleError::Value(format_rational(bad)));
            }
        }
        Ok(AtomInstance { m, per_district, values: [one, two] })
    }

    /// Both parties agree: party 2's support is `1 - v` on each atom.
    pub fn agreement(m: usize, per_district: usize, one: Vec<Rational>) -> Result<Self, OracleError> {
        let two = one.iter().map(|v| Rational::one() - v).collect();
        AtomInstance::new(m, per_district, one, two)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn per_district(&self) -> usize {
        self.per_district
    }

    pub fn atoms(&self) -> usize {
        self.m * self.per_district
    }

    pub fn values(&self, party: Party) -> &[Rational] {
        &self.values[party.index()]
    }

    /// The equivalent continuous instance.
    pub fn to_instance(&self) -> Instance {
        let n = self.atoms() as i64;
        let density = |vals: &[Rational]| {
            Density::new(
                vals.iter()
                    .enumerate()
                    .map(|(k, v)| Piece {
                        lo: Rational::new((k as i64).into(), n.into()),
                        hi: Rational::new((k as i64 + 1).into(), n.into()),
                        value: v.clone(),
                    })
                    .collect(),
            )
            .expect("atoms tile [0, 1]")
        };
        Instance::new(self.m, density(&self.values[0]), density(&self.values[1])).expect("m >= 1")
    }

    fn check_bound(&self) -> Result<(), OracleError> {
        if self.atoms() > ENUMERATION_BOUND {
            return Err(OracleError::TooLarge { atoms: self.atoms(), bound: ENUMERATION_BOUND });
        }
        Ok(())
    }
}

/// Exact `(min, max)` of `u_i^i` over every partition of the atoms into `m`
/// blocks of `q`, with both tie-breaking extremes per block.
pub fn brute_minmax_seats(a: &AtomInstance, party: Party) -> Result<(usize, usize), OracleError> {
    a.check_bound()?;
    let q = a.per_district();
    let half_block = Rational::from_integer((q as i64).into());
    let values = a.values(party);
    let mut best = (usize::MAX, 0usize);
    let mut blocks: Vec<u32> = Vec::with_capacity(a.m());
    enumerate_blocks(a.atoms(), q, 0, &mut blocks, &mut |blocks| {
        let (mut strict, mut ties) = (0, 0);
        for &mask in blocks {
            let twice: Rational = bits(mask).map(|k| &values[k] * Rational::from_integer(2.into())).sum();
            if twice > half_block {
                strict += 1;
            } else if twice == half_block {
                ties += 1;
            }
        }
        best.0 = best.0.min(strict);
        best.1 = best.1.max(strict + ties);
    });
    Ok(best)
}

/// Largest `k` such that some `k * q` atoms have total support exactly half
/// their count.
pub fn brute_max_competitive(a: &AtomInstance, party: Party) -> Result<usize, OracleError> {
    a.check_bound()?;
    let n = a.atoms();
    let q = a.per_district();
    let values = a.values(party);
    let mut best = 0;
    for mask in 0u32..(1u32 << n) {
        let size = mask.count_ones() as usize;
        if !size.is_multiple_of(q) || size / q <= best {
            continue;
        }
        let twice: Rational = bits(mask).map(|k| &values[k] * Rational::from_integer(2.into())).sum();
        if twice == Rational::from_integer((size as i64).into()) {
            best = size / q;
        }
    }
    Ok(best)
}

fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |k| mask & (1 << k) != 0)
}

/// Visits each unordered partition of `n` atoms into blocks of size `q`
/// exactly once: every new block contains the lowest unassigned atom.
fn enumerate_blocks(n: usize, q: usize, used: u32, blocks: &mut Vec<u32>, visit: &mut dyn FnMut(&[u32])) {
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    if used == full {
        visit(blocks);
        return;
    }
    let first = (!used).trailing_zeros() as usize;
    let free: Vec<usize> = (first + 1..n).filter(|k| used & (1 << k) == 0).collect();
    let mut choose = Vec::with_capacity(q - 1);
    combinations(&free, q - 1, 0, &mut choose, &mut |rest| {
        let block = rest.iter().fold(1u32 << first, |acc, &k| acc | (1 << k));
        blocks.push(block);
        enumerate_blocks(n, q, used | block, blocks, visit);
        blocks.pop();
    });
}

fn combinations(items: &[usize], k: usize, from: usize, chosen: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
    if chosen.len() == k {
        visit(chosen);
        return;
    }
    for t in from..items.len() {
        if items.len() - t < k - chosen.len() {
            break;
        }
        chosen.push(items[t]);
        combinations(items, k, t + 1, chosen, visit);
        chosen.pop();
    }
}
