//! Exhaustive enumeration of valid districtings on small graphs.

use crate::districting::Districting;
use crate::error::EnumerationError;
use crate::graph::GraphInstance;

struct Masks<'a> {
    g: &'a GraphInstance,
    adj: Vec<u64>,
    pop: Vec<u64>,
    /// Largest population any single district may hold.
    upper: u64,
}

fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (mask != 0).then(|| {
            let k = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            k
        })
    })
}

impl Masks<'_> {
    fn pop_of(&self, mask: u64) -> u64 {
        bits(mask).map(|k| self.pop[k]).sum()
    }

    /// The connected component of `within` containing its lowest node.
    fn component(&self, within: u64) -> u64 {
        let mut seen = within & within.wrapping_neg();
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0;
            for k in bits(frontier) {
                next |= self.adj[k];
            }
            frontier = next & within & !seen;
            seen |= frontier;
        }
        seen
    }

    /// Whether some whole number of balanced districts fits each component.
    fn components_feasible(&self, mut rest: u64) -> bool {
        let (total, m, eps) = (self.g.total_pop() as f64, self.g.m() as f64, self.g.epsilon());
        while rest != 0 {
            let comp = self.component(rest);
            rest &= !comp;
            let p = self.pop_of(comp) as f64 * m;
            let lo = (p / (total * (1.0 + eps))).ceil().max(1.0);
            let hi = if eps < 1.0 { (p / (total * (1.0 - eps))).floor() } else { f64::INFINITY };
            if lo > hi {
                return false;
            }
        }
        true
    }

    /// Every connected `S` with `seed in S`, `S` inside `allowed`, and
    /// population within tolerance.
    fn connected_sets(&self, seed: usize, allowed: u64, visit: &mut dyn FnMut(u64)) {
        let s = 1u64 << seed;
        if self.g.pop_ok(self.pop[seed]) {
            visit(s);
        }
        self.extend(s, self.pop[seed], self.adj[seed] & allowed & !s, 0, allowed, visit);
    }

    fn extend(&self, s: u64, pop: u64, frontier: u64, excluded: u64, allowed: u64, visit: &mut dyn FnMut(u64)) {
        if frontier == 0 {
            return;
        }
        let u = frontier.trailing_zeros() as usize;
        let bit = 1u64 << u;
        let grown = pop + self.pop[u];
        if grown <= self.upper {
            let s2 = s | bit;
            if self.g.pop_ok(grown) {
                visit(s2);
            }
            let f2 = (frontier | self.adj[u]) & allowed & !s2 & !excluded;
            self.extend(s2, grown, f2, excluded, allowed, visit);
        }
        self.extend(s, pop, frontier & !bit, excluded | bit, allowed, visit);
    }

    fn partitions(&self, remaining: u64, k: usize, blocks: &mut Vec<u64>, visit: &mut dyn FnMut(&[u64])) {
        if k == 1 {
            if self.component(remaining) == remaining && self.g.pop_ok(self.pop_of(remaining)) {
                blocks.push(remaining);
                visit(blocks);
                blocks.pop();
            }
            return;
        }
        let seed = remaining.trailing_zeros() as usize;
        let mut sets = Vec::new();
        self.connected_sets(seed, remaining, &mut |s| sets.push(s));
        for s in sets {
            let rest = remaining & !s;
            if rest == 0 || !self.components_feasible(rest) {
                continue;
            }
            blocks.push(s);
            self.partitions(rest, k - 1, blocks, visit);
            blocks.pop();
        }
    }
}

/// Visits every valid districting of `g` (connected, population-balanced
/// districts) exactly once, as one node bitmask per district. Districts are
/// ordered by their lowest node.
pub fn for_each_districting(g: &GraphInstance, visit: &mut dyn FnMut(&[u64])) -> Result<(), EnumerationError> {
    if g.len() > 64 {
        return Err(EnumerationError::TooLarge(g.len()));
    }
    let adj = (0..g.len()).map(|v| g.neighbors(v).fold(0u64, |acc, w| acc | (1 << w))).collect();
    let pop: Vec<u64> = g.nodes().iter().map(|n| n.pop).collect();
    let total = g.total_pop() as f64;
    let upper = (total * (1.0 + g.epsilon()) / g.m() as f64).floor() as u64;
    let masks = Masks { g, adj, pop, upper };
    let all = if g.len() == 64 { u64::MAX } else { (1u64 << g.len()) - 1 };
    masks.partitions(all, g.m(), &mut Vec::new(), visit);
    Ok(())
}

/// Every valid districting of `g`.
pub fn enumerate_districtings(g: &GraphInstance) -> Result<Vec<Districting>, EnumerationError> {
    let mut out = Vec::new();
    for_each_districting(g, &mut |blocks| out.push(from_masks(g, blocks)))?;
    Ok(out)
}

pub(crate) fn from_masks(g: &GraphInstance, blocks: &[u64]) -> Districting {
    let mut assignment = vec![0u16; g.len()];
    for (d, &mask) in blocks.iter().enumerate() {
        for v in bits(mask) {
            assignment[v] = d as u16;
        }
    }
    Districting::from_zero_based(blocks.len(), assignment)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gridgen::{grid, GridSpec, Pattern};

    fn count(rows: usize, cols: usize, m: usize, epsilon: f64) -> usize {
        let mut spec = GridSpec::new(rows, cols, m, Pattern::Uniform { share: 0.5 });
        spec.epsilon = epsilon;
        let g = grid(&spec).unwrap();
        enumerate_districtings(&g).unwrap().len()
    }

    #[test]
    fn small_grid_counts() {
        assert_eq!(count(2, 2, 2, 0.0), 2);
        assert_eq!(count(2, 2, 4, 0.0), 1);
        assert_eq!(count(1, 5, 1, 0.0), 1);
        // Straight tromino or L, times placements.
        assert_eq!(count(2, 3, 2, 0.0), 3);
    }

    #[test]
    fn every_enumerated_state_is_valid_and_distinct() {
        let g = grid(&GridSpec::new(4, 4, 2, Pattern::Uniform { share: 0.5 }).clone()).unwrap();
        let all = enumerate_districtings(&g).unwrap();
        let mut keys: Vec<Vec<u16>> = all.iter().map(|d| d.canonical()).collect();
        keys.sort();
        keys.dedup();
        assert_eq!(keys.len(), all.len());
        assert!(all.iter().all(|d| d.validate(&g).is_ok()));
    }
}
