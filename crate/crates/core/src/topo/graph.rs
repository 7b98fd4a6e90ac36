use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::TopoError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeSpec {
    pub id: i64,
    /// Number of kinematic pairs carried by the basic link.
    pub arity: u32,
}

/// A chain of binary links joining two basic links. `a == b` is a chain that
/// returns to the same basic link and contributes 2 to its degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub a: i64,
    pub b: i64,
    pub binary_links: u32,
}

impl EdgeSpec {
    fn normalized(self) -> Self {
        if self.a <= self.b {
            self
        } else {
            Self { a: self.b, b: self.a, ..self }
        }
    }
}

#[derive(Deserialize)]
struct RawGraph {
    nodes: Vec<NodeSpec>,
    edges: Vec<EdgeSpec>,
}

impl TryFrom<RawGraph> for TopologyGraph {
    type Error = TopoError;

    fn try_from(raw: RawGraph) -> Result<Self, Self::Error> {
        TopologyGraph::new(raw.nodes, raw.edges)
    }
}

/// Contracted graph: nodes are basic links (ternary and up), edges are
/// chains of binary links weighted by how many binary links they hold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph")]
pub struct TopologyGraph {
    nodes: Vec<NodeSpec>,
    edges: Vec<EdgeSpec>,
    #[serde(skip)]
    index: BTreeMap<i64, usize>,
}

impl TopologyGraph {
    /// Builds a graph, checking that ids are unique, every edge end is a
    /// known node and each node's degree equals its declared arity.
    pub fn new(nodes: Vec<NodeSpec>, edges: Vec<EdgeSpec>) -> Result<Self, TopoError> {
        let mut index = BTreeMap::new();
        for (i, node) in nodes.iter().enumerate() {
            if index.insert(node.id, i).is_some() {
                return Err(TopoError::DuplicateNode(node.id));
            }
        }
        let mut degree = vec![0u32; nodes.len()];
        for e in &edges {
            let ia = *index.get(&e.a).ok_or(TopoError::UnknownNode(e.a))?;
            let ib = *index.get(&e.b).ok_or(TopoError::UnknownNode(e.b))?;
            degree[ia] += 1;
            degree[ib] += 1;
        }
        for (node, &d) in nodes.iter().zip(&degree) {
            if node.arity != d {
                return Err(TopoError::ArityMismatch { id: node.id, arity: node.arity, degree: d });
            }
        }
        Ok(Self { nodes, edges, index })
    }

    pub fn from_json(text: &str) -> Result<Self, TopoError> {
        serde_json::from_str(text).map_err(|e| TopoError::Malformed(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self, TopoError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| TopoError::Malformed(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph serializes")
    }

    pub fn nodes(&self) -> &[NodeSpec] {
        &self.nodes
    }

    pub fn edges(&self) -> &[EdgeSpec] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn contains(&self, id: i64) -> bool {
        self.index.contains_key(&id)
    }

    pub(crate) fn position(&self, id: i64) -> Option<usize> {
        self.index.get(&id).copied()
    }

    pub fn degree(&self, id: i64) -> Option<u32> {
        self.contains(id).then(|| self.edges.iter().map(|e| u32::from(e.a == id) + u32::from(e.b == id)).sum())
    }

    pub fn total_binary_links(&self) -> u64 {
        self.edges.iter().map(|e| u64::from(e.binary_links)).sum()
    }

    /// Sorted edge list with `a <= b` on every edge; equal for graphs that
    /// differ only in edge order or orientation.
    pub fn canonical_edges(&self) -> Vec<EdgeSpec> {
        let mut edges: Vec<EdgeSpec> = self.edges.iter().map(|e| e.normalized()).collect();
        edges.sort();
        edges
    }

    /// Dense weight table over node positions: `table[i][j]` holds the sorted
    /// binary-link counts of every edge between positions `i` and `j`.
    pub(crate) fn weight_table(&self) -> Vec<Vec<Vec<u32>>> {
        let n = self.nodes.len();
        let mut table = vec![vec![Vec::new(); n]; n];
        for e in &self.edges {
            let ia = self.index[&e.a];
            let ib = self.index[&e.b];
            table[ia][ib].push(e.binary_links);
            if ia != ib {
                table[ib][ia].push(e.binary_links);
            }
        }
        for row in &mut table {
            for cell in row {
                cell.sort_unstable();
            }
        }
        table
    }

    /// Applies `map` (old id -> new id) to every node and edge.
    pub fn relabeled(&self, map: &BTreeMap<i64, i64>) -> Result<Self, TopoError> {
        let lookup = |id: i64| map.get(&id).copied().ok_or(TopoError::UnknownNode(id));
        let nodes = self
            .nodes
            .iter()
            .map(|n| Ok(NodeSpec { id: lookup(n.id)?, arity: n.arity }))
            .collect::<Result<Vec<_>, TopoError>>()?;
        let edges = self
            .edges
            .iter()
            .map(|e| Ok(EdgeSpec { a: lookup(e.a)?, b: lookup(e.b)?, binary_links: e.binary_links }))
            .collect::<Result<Vec<_>, TopoError>>()?;
        Self::new(nodes, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> TopologyGraph {
        let nodes = (1..=3).map(|id| NodeSpec { id, arity: 2 }).collect();
        let edges = vec![
            EdgeSpec { a: 1, b: 2, binary_links: 1 },
            EdgeSpec { a: 2, b: 3, binary_links: 2 },
            EdgeSpec { a: 3, b: 1, binary_links: 3 },
        ];
        TopologyGraph::new(nodes, edges).unwrap()
    }

    #[test]
    fn json_round_trip_keeps_structure() {
        let g = triangle();
        let back = TopologyGraph::from_json(&g.to_json()).unwrap();
        assert_eq!(back.canonical_edges(), g.canonical_edges());
        assert_eq!(back.total_binary_links(), 6);
    }

    #[test]
    fn arity_must_match_degree() {
        let nodes = vec![NodeSpec { id: 0, arity: 3 }, NodeSpec { id: 1, arity: 1 }];
        let edges = vec![EdgeSpec { a: 0, b: 1, binary_links: 0 }];
        assert_eq!(TopologyGraph::new(nodes, edges), Err(TopoError::ArityMismatch { id: 0, arity: 3, degree: 1 }));
    }

    #[test]
    fn self_loop_counts_twice() {
        let nodes = vec![NodeSpec { id: 7, arity: 2 }];
        let edges = vec![EdgeSpec { a: 7, b: 7, binary_links: 4 }];
        let g = TopologyGraph::new(nodes, edges).unwrap();
        assert_eq!(g.degree(7), Some(2));
    }

    #[test]
    fn malformed_json_is_reported() {
        assert!(matches!(TopologyGraph::from_json("{\"nodes\": 3}"), Err(TopoError::Malformed(_))));
        let dangling = r#"{"nodes":[{"id":1,"arity":1}],"edges":[{"a":1,"b":2,"binary_links":0}]}"#;
        assert!(TopologyGraph::from_json(dangling).is_err());
    }
}
