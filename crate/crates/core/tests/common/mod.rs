//! Independent reference implementations used by the integration tests.
//! Nothing here calls into the library's numerics.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::f64::consts::PI;

use bricard_kit::topo::{EdgeSpec, NodeSpec, TopologyGraph};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const L: f64 = 120.0;
pub const OMEGA: f64 = 2.0 * PI / 3.0;

/// Seed from `BRICARD_KIT_SEED`, else a fixed default.
pub fn seed() -> u64 {
    std::env::var("BRICARD_KIT_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0x5eed_b41c)
}

pub fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed());
    r.set_stream(stream);
    r
}

pub fn l1_max() -> f64 {
    L / 3f64.sqrt()
}

/// Loop closure for general twist, written out from the ω-form.
pub fn closure(beta: f64, gamma: f64, omega: f64) -> f64 {
    let (cw, sw) = (omega.cos(), omega.sin());
    sw * sw * (beta.cos() + gamma.cos()) + (1.0 + cw * cw) * beta.cos() * gamma.cos() + cw * cw
        - 2.0 * cw * beta.sin() * gamma.sin()
}

/// Plain bisection, 200 halvings or until the bracket stops shrinking.
pub fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let fa0 = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if (f(m) > 0.0) == (fa0 > 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Smallest β in (0, γ) closing the loop for the given γ: dense scan,
/// then bisection on the first sign change.
pub fn beta_from_gamma(gamma: f64) -> f64 {
    let f = |b: f64| closure(b, gamma, OMEGA);
    let n = 20_000;
    let mut prev = 1e-12;
    for i in 1..=n {
        let x = gamma * i as f64 / n as f64;
        if f(prev) * f(x) <= 0.0 {
            return bisect(f, prev, x);
        }
        prev = x;
    }
    panic!("no closing beta for gamma = {gamma}");
}

/// Reference pose from `L1` through the angle parameterization:
/// γ from `L1`, β by root finding, then `L2` and `L3` from the angles.
pub fn pose_via_angles(l1: f64) -> (f64, f64, f64, f64) {
    let k = 2.0 * 3f64.sqrt() / 3.0;
    let gamma = 2.0 * (l1 / (k * L)).acos();
    let beta = beta_from_gamma(gamma);
    let (cg, cb) = ((gamma / 2.0).cos(), (beta / 2.0).cos());
    let l2 = k * L * cb;
    let l3 = L * (1.0 - 4.0 / 3.0 * cg * cg - 4.0 / 3.0 * cb * cb + 4.0 / 3.0 * cg * cb).max(0.0).sqrt();
    (l2, l3, beta, gamma)
}

pub type V3 = [f64; 3];

pub fn sub(a: V3, b: V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn cross(a: V3, b: V3) -> V3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn dot(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm(a: V3) -> f64 {
    dot(a, a).sqrt()
}

pub fn scale(a: V3, k: f64) -> V3 {
    [a[0] * k, a[1] * k, a[2] * k]
}

/// Joint centres `M1, M2, M3, N1, N2, N3` placed by azimuth.
pub fn joint_centres(l1: f64, l2: f64, l3: f64) -> [V3; 6] {
    let at = |r: f64, phi: f64, z: f64| [r * phi.cos(), r * phi.sin(), z];
    let t = 2.0 * PI / 3.0;
    [at(l1, 0.0, 0.0), at(l1, t, 0.0), at(l1, -t, 0.0), at(l2, PI, l3), at(l2, PI + t, l3), at(l2, PI - t, l3)]
}

/// Neighbour pair of each joint, same ordering as [`joint_centres`].
pub const NEIGHBOURS: [(usize, usize); 6] = [(4, 5), (5, 3), (3, 4), (1, 2), (2, 0), (0, 1)];

/// Unit axis and unit-direction moment of each joint, built from the cross
/// product of the two links meeting there.
pub fn joint_lines(l1: f64, l2: f64, l3: f64) -> [(V3, V3); 6] {
    let p = joint_centres(l1, l2, l3);
    std::array::from_fn(|i| {
        let (a, b) = NEIGHBOURS[i];
        let n = cross(sub(p[a], p[i]), sub(p[b], p[i]));
        let s = scale(n, 1.0 / norm(n));
        (s, cross(p[i], s))
    })
}

/// Printed-form coefficient with `L` where the geometry needs `L1`.
pub fn m1_as_printed(l1: f64, l2: f64, l3: f64) -> f64 {
    (3.0 * l1 * l1 * l2 * l2 + 3.0 * l2 * l2 * l3 * l3 - 3.0 * L * l2.powi(3) + 0.75 * l2.powi(4)).sqrt()
}

type EdgeKey = (i64, i64, u32);

fn edge_multiset(g: &TopologyGraph, map: &BTreeMap<i64, i64>) -> Vec<EdgeKey> {
    let mut out: Vec<EdgeKey> = g
        .edges()
        .iter()
        .map(|e| {
            let (a, b) = (map[&e.a], map[&e.b]);
            (a.min(b), a.max(b), e.binary_links)
        })
        .collect();
    out.sort();
    out
}

/// Tries every bijection of node ids.
pub fn brute_force_isomorphic(a: &TopologyGraph, b: &TopologyGraph) -> bool {
    if a.node_count() != b.node_count() || a.edges().len() != b.edges().len() {
        return false;
    }
    let ids_a: Vec<i64> = a.nodes().iter().map(|n| n.id).collect();
    let mut ids_b: Vec<i64> = b.nodes().iter().map(|n| n.id).collect();
    let identity: BTreeMap<i64, i64> = ids_b.iter().map(|&x| (x, x)).collect();
    let target = edge_multiset(b, &identity);
    let arity_b: BTreeMap<i64, u32> = b.nodes().iter().map(|n| (n.id, n.arity)).collect();
    let arity_a: BTreeMap<i64, u32> = a.nodes().iter().map(|n| (n.id, n.arity)).collect();
    let mut found = false;
    permute(&mut ids_b, 0, &mut |perm| {
        if found {
            return;
        }
        let map: BTreeMap<i64, i64> = ids_a.iter().copied().zip(perm.iter().copied()).collect();
        if ids_a.iter().all(|x| arity_a[x] == arity_b[&map[x]]) && edge_multiset(a, &map) == target {
            found = true;
        }
    });
    found
}

fn permute(v: &mut Vec<i64>, k: usize, visit: &mut impl FnMut(&[i64])) {
    if k == v.len() {
        visit(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, visit);
        v.swap(k, i);
    }
}

/// Random multigraph with `nodes` nodes and `edges` edges, loops allowed,
/// weights in 1..=3. Node ids are distinct but not contiguous.
pub fn random_graph(rng: &mut impl Rng, nodes: usize, edges: usize) -> TopologyGraph {
    let ids: Vec<i64> = (0..nodes as i64).map(|i| 10 * i + rng.random_range(0..10)).collect();
    let mut degree = vec![0u32; nodes];
    let mut list = Vec::new();
    for _ in 0..edges {
        let (i, j) = (rng.random_range(0..nodes), rng.random_range(0..nodes));
        degree[i] += 1;
        degree[j] += 1;
        list.push(EdgeSpec { a: ids[i], b: ids[j], binary_links: rng.random_range(1..=3) });
    }
    let ns = ids.iter().zip(&degree).map(|(&id, &arity)| NodeSpec { id, arity }).collect();
    TopologyGraph::new(ns, list).expect("degrees are consistent by construction")
}

/// Same graph under a random relabeling and edge order.
pub fn shuffled_copy(rng: &mut impl Rng, g: &TopologyGraph) -> TopologyGraph {
    use rand::seq::SliceRandom;
    let mut targets: Vec<i64> = g.nodes().iter().map(|n| n.id + 1000).collect();
    targets.shuffle(rng);
    let map: BTreeMap<i64, i64> = g.nodes().iter().map(|n| n.id).zip(targets).collect();
    let mut edges: Vec<EdgeSpec> = g
        .edges()
        .iter()
        .map(|e| {
            let (a, b) = (map[&e.a], map[&e.b]);
            if rng.random_bool(0.5) {
                EdgeSpec { a, b, binary_links: e.binary_links }
            } else {
                EdgeSpec { a: b, b: a, binary_links: e.binary_links }
            }
        })
        .collect();
    edges.shuffle(rng);
    let mut nodes: Vec<NodeSpec> = g.nodes().iter().map(|n| NodeSpec { id: map[&n.id], arity: n.arity }).collect();
    nodes.shuffle(rng);
    TopologyGraph::new(nodes, edges).expect("relabeling keeps degrees")
}

/// Copy with one edge's weight bumped and another's lowered, total kept.
pub fn reweighted_copy(rng: &mut impl Rng, g: &TopologyGraph) -> TopologyGraph {
    let mut edges = g.edges().to_vec();
    if edges.len() >= 2 {
        let i = rng.random_range(0..edges.len());
        let j = (i + 1 + rng.random_range(0..edges.len() - 1)) % edges.len();
        if edges[j].binary_links > 1 {
            edges[i].binary_links += 1;
            edges[j].binary_links -= 1;
        }
    }
    TopologyGraph::new(g.nodes().to_vec(), edges).expect("same degrees")
}
