//! Layered response signatures used as an isomorphism pre-filter.
//!
//! A unit response is injected at a start node and propagated breadth-first.
//! Every layer records its size and the sorted multiset of per-node
//! descriptors:
//!
//! `[arity, back_edges, back_weight, lateral_edges, lateral_weight,
//!   forward_edges, forward_weight, loop_weight, response]`
//!
//! where back/lateral/forward classify edges by the BFS layer of their far
//! end, weights are binary-link sums, and `response` is the number of
//! shortest walks from the start (multi-edges counted separately). All of
//! these are invariant under relabeling, so equal graphs always produce
//! equal signature multisets; the converse is not guaranteed and is left to
//! the exact search in `iso`.

use std::collections::VecDeque;

use serde::Serialize;

use super::{TopoError, TopologyGraph};

pub type Descriptor = [u64; 9];

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LayerResponse {
    /// `false` only for the trailing pseudo-layer of nodes the response never
    /// reaches (disconnected graphs).
    pub reached: bool,
    pub size: u64,
    pub descriptors: Vec<Descriptor>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ResponseSequence {
    pub layers: Vec<LayerResponse>,
}

impl ResponseSequence {
    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    /// Integer sequence form: per layer, `reached`, size, then descriptors.
    pub fn flatten(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for layer in &self.layers {
            out.push(u64::from(layer.reached));
            out.push(layer.size);
            for d in &layer.descriptors {
                out.extend_from_slice(d);
            }
        }
        out
    }
}

pub fn node_response_signature(g: &TopologyGraph, start: i64) -> Result<ResponseSequence, TopoError> {
    let start = g.position(start).ok_or(TopoError::UnknownNode(start))?;
    Ok(signature_from(g, start))
}

/// Sorted multiset of the response sequences from every start node.
pub fn graph_signature(g: &TopologyGraph) -> Vec<ResponseSequence> {
    let mut all: Vec<_> = (0..g.node_count()).map(|s| signature_from(g, s)).collect();
    all.sort();
    all
}

fn signature_from(g: &TopologyGraph, start: usize) -> ResponseSequence {
    let n = g.node_count();
    let table = g.weight_table();

    let mut depth = vec![usize::MAX; n];
    let mut response = vec![0u64; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    depth[start] = 0;
    response[start] = 1;
    queue.push_back(start);
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for v in 0..n {
            if v == u || table[u][v].is_empty() {
                continue;
            }
            let parallel = table[u][v].len() as u64;
            if depth[v] == usize::MAX {
                depth[v] = depth[u] + 1;
                queue.push_back(v);
            }
            if depth[v] == depth[u] + 1 {
                response[v] = response[v].saturating_add(response[u].saturating_mul(parallel));
            }
        }
    }

    let max_depth = order.iter().map(|&u| depth[u]).max().unwrap_or(0);
    let mut layers: Vec<LayerResponse> =
        (0..=max_depth).map(|_| LayerResponse { reached: true, size: 0, descriptors: Vec::new() }).collect();
    let mut unreached = LayerResponse { reached: false, size: 0, descriptors: Vec::new() };

    for u in 0..n {
        let mut d: Descriptor = [0; 9];
        d[0] = u64::from(g.nodes()[u].arity);
        d[7] = table[u][u].iter().map(|&w| u64::from(w)).sum();
        if depth[u] == usize::MAX {
            unreached.size += 1;
            unreached.descriptors.push(d);
            continue;
        }
        for v in (0..n).filter(|&v| v != u) {
            let count = table[u][v].len() as u64;
            if count == 0 {
                continue;
            }
            let weight: u64 = table[u][v].iter().map(|&w| u64::from(w)).sum();
            let slot = match depth[v].cmp(&depth[u]) {
                std::cmp::Ordering::Less => 1,
                std::cmp::Ordering::Equal => 3,
                std::cmp::Ordering::Greater => 5,
            };
            d[slot] += count;
            d[slot + 1] += weight;
        }
        d[8] = response[u];
        let layer = &mut layers[depth[u]];
        layer.size += 1;
        layer.descriptors.push(d);
    }

    if unreached.size > 0 {
        layers.push(unreached);
    }
    for layer in &mut layers {
        layer.descriptors.sort_unstable();
    }
    ResponseSequence { layers }
}
