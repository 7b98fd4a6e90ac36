use std::collections::BTreeMap;

use super::{graph_signature, TopologyGraph};

/// Exact isomorphism search by backtracking over node assignments.
///
/// Returns a map from node ids of `a` to node ids of `b` that preserves
/// arities and, for every node pair, the multiset of binary-link counts on
/// the edges joining them. No pre-filter is applied.
pub fn find_isomorphism(a: &TopologyGraph, b: &TopologyGraph) -> Option<BTreeMap<i64, i64>> {
    let n = a.node_count();
    if n != b.node_count() || a.edges().len() != b.edges().len() {
        return None;
    }
    let mut arities_a: Vec<u32> = a.nodes().iter().map(|x| x.arity).collect();
    let mut arities_b: Vec<u32> = b.nodes().iter().map(|x| x.arity).collect();
    arities_a.sort_unstable();
    arities_b.sort_unstable();
    if arities_a != arities_b {
        return None;
    }

    let wa = a.weight_table();
    let wb = b.weight_table();
    let mut assign = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if extend(0, a, b, &wa, &wb, &mut assign, &mut used) {
        Some(assign.iter().enumerate().map(|(i, &j)| (a.nodes()[i].id, b.nodes()[j].id)).collect())
    } else {
        None
    }
}

fn extend(
    i: usize,
    a: &TopologyGraph,
    b: &TopologyGraph,
    wa: &[Vec<Vec<u32>>],
    wb: &[Vec<Vec<u32>>],
    assign: &mut [usize],
    used: &mut [bool],
) -> bool {
    if i == assign.len() {
        return true;
    }
    for j in 0..assign.len() {
        if used[j] || a.nodes()[i].arity != b.nodes()[j].arity || wa[i][i] != wb[j][j] {
            continue;
        }
        let consistent = (0..i).all(|k| wa[i][k] == wb[j][assign[k]]);
        if !consistent {
            continue;
        }
        assign[i] = j;
        used[j] = true;
        if extend(i + 1, a, b, wa, wb, assign, used) {
            return true;
        }
        used[j] = false;
        assign[i] = usize::MAX;
    }
    false
}

/// Response-signature pre-filter followed by the exact search.
pub fn are_isomorphic(a: &TopologyGraph, b: &TopologyGraph) -> bool {
    if a.node_count() != b.node_count() || a.edges().len() != b.edges().len() {
        return false;
    }
    graph_signature(a) == graph_signature(b) && find_isomorphism(a, b).is_some()
}

/// Groups `graphs` into isomorphism classes, each listed by input index in
/// first-seen order.
pub fn isomorphism_classes(graphs: &[TopologyGraph]) -> Vec<Vec<usize>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, g) in graphs.iter().enumerate() {
        match classes.iter_mut().find(|c| are_isomorphic(&graphs[c[0]], g)) {
            Some(class) => class.push(i),
            None => classes.push(vec![i]),
        }
    }
    classes
}
