//! Assignments of graph nodes to districts.

use serde::{Serialize, Serializer};

use crate::error::DistrictingError;
use crate::graph::GraphInstance;

/// Node-to-district assignment. Labels are `1..=m` externally and stored
/// zero-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Districting {
    m: usize,
    assignment: Vec<u16>,
}

impl Serialize for Districting {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.labels())
    }
}

impl Districting {
    /// Builds from `1..=m` labels, checking only shape.
    pub fn from_labels(m: usize, labels: &[usize]) -> Result<Self, DistrictingError> {
        let assignment = labels
            .iter()
            .map(|&l| if (1..=m).contains(&l) { Ok((l - 1) as u16) } else { Err(DistrictingError::Label { label: l, m }) })
            .collect::<Result<_, _>>()?;
        Ok(Districting { m, assignment })
    }

    pub(crate) fn from_zero_based(m: usize, assignment: Vec<u16>) -> Self {
        Districting { m, assignment }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Label of node `v` in `1..=m`.
    pub fn label(&self, v: usize) -> usize {
        self.assignment[v] as usize + 1
    }

    pub fn labels(&self) -> impl Iterator<Item = usize> + '_ {
        self.assignment.iter().map(|&d| d as usize + 1)
    }

    pub(crate) fn district_of(&self, v: usize) -> usize {
        self.assignment[v] as usize
    }

    pub(crate) fn raw_mut(&mut self) -> &mut [u16] {
        &mut self.assignment
    }

    /// Nodes of each district, indexed zero-based.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.m];
        for (v, &d) in self.assignment.iter().enumerate() {
            out[d as usize].push(v);
        }
        out
    }

    pub fn populations(&self, g: &GraphInstance) -> Vec<u64> {
        let mut pops = vec![0; self.m];
        for (node, &d) in g.nodes().iter().zip(&self.assignment) {
            pops[d as usize] += node.pop;
        }
        pops
    }

    /// Relabels districts in order of first appearance, so that two
    /// assignments describing the same partition compare equal.
    pub fn canonical(&self) -> Vec<u16> {
        let mut map = vec![u16::MAX; self.m];
        let mut next = 0;
        self.assignment
            .iter()
            .map(|&d| {
                let slot = &mut map[d as usize];
                if *slot == u16::MAX {
                    *slot = next;
                    next += 1;
                }
                *slot
            })
            .collect()
    }

    /// Checks contiguity and population balance of every district.
    pub fn validate(&self, g: &GraphInstance) -> Result<(), DistrictingError> {
        if self.assignment.len() != g.len() {
            return Err(DistrictingError::Length { got: self.assignment.len(), expected: g.len() });
        }
        let pops = self.populations(g);
        for (d, members) in self.members().iter().enumerate() {
            if members.is_empty() {
                return Err(DistrictingError::Empty(d + 1));
            }
            if !g.is_connected(members) {
                return Err(DistrictingError::Contiguity(d + 1));
            }
            if !g.pop_ok(pops[d]) {
                return Err(DistrictingError::Population { district: d + 1, pop: pops[d] });
            }
        }
        Ok(())
    }
}
