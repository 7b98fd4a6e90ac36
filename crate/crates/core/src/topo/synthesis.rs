use super::{EdgeSpec, NodeSpec, TopoError, TopologyGraph};

/// Contracted graphs built from `ternary` ternary links placed on one
/// circumferential loop `1-2-...-k-1`, with the third pair of every link
/// joined to another link by a perfect matching of the nodes.
///
/// `binary_links` are spread over the edges as evenly as possible in
/// canonical order (loop edges first, then matching edges), so the edge
/// weights sum to `binary_links`. One graph per matching is returned, sorted
/// by canonical edge list; isomorphic duplicates are kept.
pub fn enumerate_circumferential_topologies(ternary: u32, binary_links: u32) -> Result<Vec<TopologyGraph>, TopoError> {
    if ternary < 2 || !ternary.is_multiple_of(2) {
        return Err(TopoError::InvalidArgument(format!(
            "a perfect matching needs a positive even number of ternary links, got {ternary}"
        )));
    }
    let k = i64::from(ternary);
    let ids: Vec<i64> = (1..=k).collect();
    let loop_edges: Vec<(i64, i64)> = (1..=k).map(|i| (i, i % k + 1)).collect();

    let mut graphs = Vec::new();
    for matching in perfect_matchings(&ids) {
        let pairs: Vec<(i64, i64)> = loop_edges.iter().copied().chain(matching).collect();
        let count = pairs.len() as u32;
        let (base, extra) = (binary_links / count, binary_links % count);
        let edges = pairs
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| EdgeSpec { a, b, binary_links: base + u32::from((i as u32) < extra) })
            .collect();
        let nodes = ids.iter().map(|&id| NodeSpec { id, arity: 3 }).collect();
        graphs.push(TopologyGraph::new(nodes, edges)?);
    }
    graphs.sort_by_key(|g| g.canonical_edges());
    Ok(graphs)
}

/// The four-ternary, eleven-binary-link instance (`TTTT`, `11+Φ` with Φ = 0).
pub fn enumerate_ternary_quad_topologies() -> Vec<TopologyGraph> {
    enumerate_circumferential_topologies(4, 11).expect("fixed instance is valid")
}

fn perfect_matchings(ids: &[i64]) -> Vec<Vec<(i64, i64)>> {
    let Some((&first, rest)) = ids.split_first() else {
        return vec![Vec::new()];
    };
    let mut out = Vec::new();
    for (i, &partner) in rest.iter().enumerate() {
        let remaining: Vec<i64> = rest.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
        for mut tail in perfect_matchings(&remaining) {
            tail.insert(0, (first, partner));
            out.push(tail);
        }
    }
    out
}
