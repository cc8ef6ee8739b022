//! Precinct adjacency graphs with population, geometry, and vote datasets.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// Node identifier as written in the input: a number or a string.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NodeId {
    Number(u64),
    Name(String),
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeId::Number(n) => write!(f, "{n}"),
            NodeId::Name(s) => f.write_str(s),
        }
    }
}

/// Two-party vote counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Votes {
    #[serde(rename = "1")]
    pub one: u64,
    #[serde(rename = "2")]
    pub two: u64,
}

impl Votes {
    pub fn new(one: u64, two: u64) -> Self {
        Votes { one, two }
    }

    pub fn total(&self) -> u64 {
        self.one + self.two
    }
}

impl std::ops::AddAssign for Votes {
    fn add_assign(&mut self, rhs: Votes) {
        self.one += rhs.one;
        self.two += rhs.two;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: NodeId,
    pub pop: u64,
    pub area: f64,
    pub perimeter: f64,
    /// Length of this node's boundary on the outer edge of the state.
    pub exterior: f64,
    /// Vote counts keyed by dataset name.
    pub votes: BTreeMap<String, Votes>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub a: NodeId,
    pub b: NodeId,
    pub shared: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "RawGraph", try_from = "RawGraph")]
pub struct GraphInstance {
    m: usize,
    epsilon: f64,
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    /// Edge endpoints as node indices.
    ends: Vec<(usize, usize)>,
    /// Per node, `(neighbor, edge index)`.
    adjacency: Vec<Vec<(usize, usize)>>,
    total_pop: u64,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    m: usize,
    #[serde(default = "default_epsilon")]
    epsilon: f64,
    nodes: Vec<Node>,
    edges: Vec<Edge>,
}

fn default_epsilon() -> f64 {
    0.02
}

impl From<GraphInstance> for RawGraph {
    fn from(g: GraphInstance) -> Self {
        RawGraph { m: g.m, epsilon: g.epsilon, nodes: g.nodes, edges: g.edges }
    }
}

impl TryFrom<RawGraph> for GraphInstance {
    type Error = GraphError;

    fn try_from(raw: RawGraph) -> Result<Self, GraphError> {
        GraphInstance::new(raw.m, raw.epsilon, raw.nodes, raw.edges)
    }
}

/// Slack for comparing floating-point boundary lengths.
const LENGTH_SLACK: f64 = 1e-9;

impl GraphInstance {
    pub fn new(m: usize, epsilon: f64, nodes: Vec<Node>, edges: Vec<Edge>) -> Result<Self, GraphError> {
        if m == 0 || m > nodes.len() {
            return Err(GraphError::DistrictCount { m, nodes: nodes.len() });
        }
        if !(0.0..1.0).contains(&epsilon) {
            return Err(GraphError::Epsilon(epsilon));
        }
        if m > u16::MAX as usize {
            return Err(GraphError::DistrictCount { m, nodes: nodes.len() });
        }
        let mut index = HashMap::new();
        for (k, node) in nodes.iter().enumerate() {
            if index.insert(node.id.clone(), k).is_some() {
                return Err(GraphError::DuplicateNode(node.id.to_string()));
            }
            let lengths = [node.area, node.perimeter, node.exterior];
            if lengths.iter().any(|x| !x.is_finite() || *x < 0.0) {
                return Err(GraphError::Geometry(format!("node {} has a negative or non-finite measurement", node.id)));
            }
        }
        let lookup = |id: &NodeId| index.get(id).copied().ok_or_else(|| GraphError::UnknownNode(id.to_string()));
        let mut ends = Vec::with_capacity(edges.len());
        let mut adjacency = vec![Vec::new(); nodes.len()];
        let mut boundary: Vec<f64> = nodes.iter().map(|n| n.exterior).collect();
        for (e, edge) in edges.iter().enumerate() {
            let (a, b) = (lookup(&edge.a)?, lookup(&edge.b)?);
            if a == b {
                return Err(GraphError::SelfLoop(edge.a.to_string()));
            }
            if !edge.shared.is_finite() || edge.shared < 0.0 {
                return Err(GraphError::Geometry(format!("edge {}-{} has invalid shared length", edge.a, edge.b)));
            }
            if edge.shared > nodes[a].perimeter.min(nodes[b].perimeter) + LENGTH_SLACK {
                return Err(GraphError::Geometry(format!(
                    "edge {}-{} shares more boundary than an endpoint's perimeter",
                    edge.a, edge.b
                )));
            }
            boundary[a] += edge.shared;
            boundary[b] += edge.shared;
            ends.push((a, b));
            adjacency[a].push((b, e));
            adjacency[b].push((a, e));
        }
        for (node, total) in nodes.iter().zip(&boundary) {
            if *total > node.perimeter + LENGTH_SLACK * (1.0 + node.perimeter) {
                return Err(GraphError::Geometry(format!(
                    "node {} has perimeter {} below its shared plus exterior length {}",
                    node.id, node.perimeter, total
                )));
            }
        }
        let total_pop = nodes.iter().map(|n| n.pop).sum();
        let g = GraphInstance { m, epsilon, nodes, edges, ends, adjacency, total_pop };
        let all: Vec<usize> = (0..g.len()).collect();
        if !g.is_connected(&all) {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph serializes")
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// The same graph with a different population tolerance.
    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self, GraphError> {
        if !(0.0..1.0).contains(&epsilon) {
            return Err(GraphError::Epsilon(epsilon));
        }
        Ok(GraphInstance { epsilon, ..self.clone() })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_ends(&self) -> &[(usize, usize)] {
        &self.ends
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[v].iter().map(|&(w, _)| w)
    }

    pub fn total_pop(&self) -> u64 {
        self.total_pop
    }

    /// Whether a district population is within `epsilon` of `total / m`.
    pub fn pop_ok(&self, pop: u64) -> bool {
        let total = self.total_pop() as f64;
        ((pop as f64) * (self.m as f64) - total).abs() <= self.epsilon * total
    }

    /// Dataset names present on every node.
    pub fn datasets(&self) -> Vec<String> {
        let Some(first) = self.nodes.first() else { return Vec::new() };
        first
            .votes
            .keys()
            .filter(|k| self.nodes.iter().all(|n| n.votes.contains_key(*k)))
            .cloned()
            .collect()
    }

    /// Per-node votes of one dataset.
    pub fn votes(&self, dataset: &str) -> Result<Vec<Votes>, GraphError> {
        self.nodes
            .iter()
            .map(|n| {
                n.votes.get(dataset).copied().ok_or_else(|| GraphError::MissingDataset {
                    dataset: dataset.to_string(),
                    node: n.id.to_string(),
                })
            })
            .collect()
    }

    /// A copy with `dataset` set to `votes` on every node.
    pub fn with_dataset(&self, dataset: &str, votes: &[Votes]) -> Self {
        assert_eq!(votes.len(), self.len(), "one vote pair per node");
        let mut g = self.clone();
        for (node, v) in g.nodes.iter_mut().zip(votes) {
            node.votes.insert(dataset.to_string(), *v);
        }
        g
    }

    /// Whether `members` induces a connected subgraph. Empty sets are not
    /// connected.
    pub fn is_connected(&self, members: &[usize]) -> bool {
        let Some(&start) = members.first() else { return false };
        let mut inside = vec![false; self.len()];
        for &v in members {
            inside[v] = true;
        }
        let mut seen = vec![false; self.len()];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut reached = 1;
        while let Some(v) = queue.pop_front() {
            for w in self.neighbors(v) {
                if inside[w] && !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        reached == members.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn node(id: u64, perimeter: f64, exterior: f64) -> Node {
        Node {
            id: NodeId::Number(id),
            pop: 10,
            area: 1.0,
            perimeter,
            exterior,
            votes: BTreeMap::from([("d".to_string(), Votes::new(6, 4))]),
        }
    }

    fn edge(a: u64, b: u64) -> Edge {
        Edge { a: NodeId::Number(a), b: NodeId::Number(b), shared: 1.0 }
    }

    #[test]
    fn rejects_disconnected_and_bad_geometry() {
        let nodes = vec![node(0, 4.0, 3.0), node(1, 4.0, 3.0), node(2, 4.0, 4.0)];
        let err = GraphInstance::new(2, 0.02, nodes.clone(), vec![edge(0, 1)]).unwrap_err();
        assert!(matches!(err, GraphError::Disconnected));

        let tight = vec![node(0, 4.0, 3.5), node(1, 4.0, 3.0)];
        let err = GraphInstance::new(1, 0.02, tight, vec![edge(0, 1)]).unwrap_err();
        assert!(matches!(err, GraphError::Geometry(_)));

        let err = GraphInstance::new(3, 0.02, nodes[..2].to_vec(), vec![edge(0, 1)]).unwrap_err();
        assert!(matches!(err, GraphError::DistrictCount { .. }));
    }

    #[test]
    fn json_round_trip_with_mixed_ids() {
        let text = r#"{"m": 1, "nodes": [
            {"id": "a", "pop": 5, "area": 1, "perimeter": 4, "exterior": 3, "votes": {"t": {"1": 3, "2": 2}}},
            {"id": 7, "pop": 5, "area": 1, "perimeter": 4, "exterior": 3, "votes": {"t": {"1": 1, "2": 4}}}],
            "edges": [{"a": "a", "b": 7, "shared": 1}]}"#;
        let g = GraphInstance::from_json(text).unwrap();
        assert_eq!(g.epsilon(), 0.02);
        assert_eq!(g.votes("t").unwrap(), vec![Votes::new(3, 2), Votes::new(1, 4)]);
        assert!(g.votes("missing").is_err());
        let again = GraphInstance::from_json(&g.to_json()).unwrap();
        assert_eq!(g, again);
    }
}
