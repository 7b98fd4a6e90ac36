//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the report is always printed; exits non-zero if any criterion fails.

mod common;

use std::process::Command;
use std::time::Instant;

use bricard_kit::palm_kinematics::{
    constraint_residual_l1l2, fk_l2_from_l1, forward, height_residual, ik_l1_from_l3, PalmConfiguration, PalmParams,
};
use bricard_kit::performance::*;
use bricard_kit::screw::*;
use bricard_kit::topo::*;
use common::{brute_force_isomorphic, l1_max, pose_via_angles, random_graph, reweighted_copy, rng, shuffled_copy, L};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn eps() -> f64 {
    1e-3 * L
}

fn random_l1(r: &mut impl Rng) -> f64 {
    r.random_range(eps()..l1_max() - eps())
}

fn grid(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| eps() + (l1_max() - 2.0 * eps()) * i as f64 / (n - 1) as f64)
}

fn round_trip() -> Outcome {
    let p = PalmParams::default();
    let mut r = rng(1);
    let samples: Vec<f64> = (0..1000).map(|_| random_l1(&mut r)).collect();
    let start = Instant::now();
    let mut worst = 0.0f64;
    for &l1 in &samples {
        let c = forward(l1, &p).map_err(|e| e.to_string())?;
        let back = ik_l1_from_l3(c.l3, &p).map_err(|e| e.to_string())?;
        worst = worst.max((back - l1).abs());
    }
    let elapsed = start.elapsed().as_secs_f64();
    check(
        worst <= 1e-8 * L && elapsed < 1.0,
        format!("max |ik(fk(L1)) - L1| = {worst:.3e} mm (tol {:.1e}), {elapsed:.3} s for 1000 (limit 1 s)", 1e-8 * L),
    )
}

fn constraint_residuals() -> Outcome {
    let p = PalmParams::default();
    let (mut c10, mut c13) = (0.0f64, 0.0f64);
    for l1 in grid(1000) {
        let c = forward(l1, &p).map_err(|e| e.to_string())?;
        // both residuals come back divided by L⁴ and L² respectively
        c10 = c10.max(constraint_residual_l1l2(c.l1, c.l2, &p).map_err(|e| e.to_string())?.abs());
        c13 = c13.max(height_residual(&c, &p).abs());
    }
    check(
        c10 <= 1e-9 && c13 <= 1e-9,
        format!("max L1-L2 residual {c10:.2e} L⁴, max height residual {c13:.2e} L² (tol 1e-9) over 1000 poses"),
    )
}

fn oracle_agreement() -> Outcome {
    let p = PalmParams::default();
    let mut worst = 0.0f64;
    for l1 in grid(500) {
        let closed = fk_l2_from_l1(l1, &p).map_err(|e| e.to_string())?;
        let (reference, _, _, _) = pose_via_angles(l1);
        worst = worst.max(((closed - reference) / reference).abs());
    }
    let c = forward(40.0, &p).map_err(|e| e.to_string())?;
    let (l2, l3, _, _) = pose_via_angles(40.0);
    // anchor from an independent high-precision evaluation of the closed form
    let (l2_ref, l3_ref) = (117.0659966456864, 61.4670016771568);
    let anchor_ok = [c.l2, l2].iter().all(|v| (v - l2_ref).abs() <= 1e-6 * l2_ref)
        && [c.l3, l3].iter().all(|v| (v - l3_ref).abs() <= 1e-6 * l3_ref);
    check(
        worst <= 1e-6 && anchor_ok,
        format!(
            "max rel L2 gap {worst:.2e} over 500 poses (tol 1e-6); anchor L1=40: closed form ({:.6}, {:.6}), angle route ({l2:.6}, {l3:.6}); quoted L3 61.466 is {:.1e} mm below both",
            c.l2,
            c.l3,
            c.l3 - 61.466
        ),
    )
}

fn jacobian() -> Outcome {
    let p = PalmParams::default();
    let (mut worst, mut max_j) = (0.0f64, f64::NEG_INFINITY);
    for l1 in grid(500) {
        let j = jacobian_analytic(&forward(l1, &p).map_err(|e| e.to_string())?, &p).map_err(|e| e.to_string())?;
        let fd = jacobian_fd(l1, &p, 1e-6 * L).map_err(|e| e.to_string())?;
        worst = worst.max(((j - fd) / fd).abs());
        max_j = max_j.max(j);
    }
    check(
        worst <= 1e-6 && max_j < 0.0,
        format!("max rel |J - FD| {worst:.2e} over 500 poses (tol 1e-6), max J = {max_j:.4}"),
    )
}

fn default_rows() -> Result<Vec<PerformanceRow>, String> {
    workspace_sweep(&PalmParams::default(), 500, 1.0).map_err(|e| e.to_string())
}

fn stiffness() -> Outcome {
    let rows = default_rows()?;
    let bad = rows.iter().filter(|r| !(r.is_ok() && r.stiffness_out > 0.0)).count();
    let min = rows.iter().map(|r| r.stiffness_out).fold(f64::INFINITY, f64::min);
    check(bad == 0, format!("{} rows, {bad} without positive K_L3, min K_L3 = {min:.4} N/mm", rows.len()))
}

fn screw_system_checks() -> Outcome {
    let p = PalmParams::default();
    let mut r = rng(6);
    let (mut plucker, mut smallest, mut second, mut sym) = (0.0f64, 0.0f64, f64::INFINITY, 0.0f64);
    for _ in 0..1000 {
        let c = forward(random_l1(&mut r), &p).map_err(|e| e.to_string())?;
        let sys = screw_system(&c).map_err(|e| e.to_string())?;
        for s in sys.joints() {
            plucker = plucker.max(s.plucker_residual().abs() / (s.direction.norm() * L));
        }
        let sv = sys.singular_values();
        smallest = smallest.max(sv[5] / sv[0]);
        second = second.min(sv[4] / sv[0]);
        let rotated = sys.rotated(2.0 * std::f64::consts::PI / 3.0);
        for j in Joint::ALL {
            let (a, b) = (rotated.joint(j), sys.joint(j.cycled()));
            sym = sym.max((a.direction - b.direction).norm()).max((a.moment - b.moment).norm() / L);
        }
    }
    check(
        plucker <= 1e-9 && smallest < 1e-8 && second > 1e-4 && sym <= 1e-9,
        format!(
            "1000 poses: Plücker {plucker:.1e} (tol 1e-9), σ6/σ1 ≤ {smallest:.1e} (< 1e-8), σ5/σ1 ≥ {second:.1e} (> 1e-4), Rz(2π/3) {sym:.1e} (tol 1e-9)"
        ),
    )
}

fn transmission() -> Outcome {
    let p = PalmParams::default();
    let rows = default_rows()?;
    let analyzer = TransmissionAnalyzer::new(p).map_err(|e| e.to_string())?;
    let mut mirror = 0.0f64;
    let mut out_of_range = 0;
    let mut kappa_bad = 0;
    for row in &rows {
        let in_range = |v: f64| v > 0.0 && v <= 1.0;
        if !(in_range(row.zeta) && in_range(row.sigma) && in_range(row.kappa)) {
            out_of_range += 1;
        }
        if row.kappa != row.zeta.min(row.sigma) {
            kappa_bad += 1;
        }
        let c = PalmConfiguration::new(row.l1, row.l2, row.l3);
        let a = analyzer.branch_indices(&c, Branch::M1N2).map_err(|e| e.to_string())?;
        let b = analyzer.branch_indices(&c, Branch::M1N3).map_err(|e| e.to_string())?;
        mirror = mirror.max((a.zeta - b.zeta).abs()).max((a.sigma - b.sigma).abs());
    }
    check(
        out_of_range == 0 && kappa_bad == 0 && mirror <= 1e-9,
        format!("{} rows: {out_of_range} outside (0, 1], {kappa_bad} with κ ≠ min(ζ, σ), branch gap {mirror:.1e} (tol 1e-9)", rows.len()),
    )
}

fn topology() -> Outcome {
    let comps = enumerate_compositions(4, u32::MAX).map_err(|e| e.to_string())?;
    let checks = check_table(&comps);
    let derivable: Vec<u32> = checks.iter().filter(|c| c.status.is_derivable()).map(|c| c.row.number).collect();
    let missing = checks.iter().filter(|c| c.status.is_derivable() && !c.enumerated).count();

    let graphs = enumerate_ternary_quad_topologies();
    let classes = isomorphism_classes(&graphs);

    let mut r = rng(8);
    let (mut disagreements, mut signature_misses, mut positives) = (0, 0, 0);
    for i in 0..1000 {
        let n = 2 + i % 5;
        let extra = r.random_range(0..4);
        let g = random_graph(&mut r, n, n + extra);
        let h = match i % 3 {
            0 => shuffled_copy(&mut r, &g),
            1 => reweighted_copy(&mut r, &g),
            _ => random_graph(&mut r, n, g.edges().len()),
        };
        let truth = brute_force_isomorphic(&g, &h);
        positives += usize::from(truth);
        if are_isomorphic(&g, &h) != truth {
            disagreements += 1;
        }
        if truth && graph_signature(&g) != graph_signature(&h) {
            signature_misses += 1;
        }
    }
    check(
        missing == 0 && graphs.len() == 3 && classes.len() == 2 && disagreements == 0 && signature_misses == 0,
        format!(
            "table rows {derivable:?} derivable, {missing} not enumerated; TTTT {} graphs in {} classes; 1000 random pairs ({positives} isomorphic): {disagreements} disagreements, {signature_misses} prefilter misses",
            graphs.len(),
            classes.len()
        ),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for name in ["a.csv", "b.csv"] {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_bricard-kit"))
            .args(["sweep", "--output", path.to_str().unwrap()])
            .output()
            .map_err(|e| e.to_string())?;
        if !status.status.success() {
            return Err(format!("sweep exited with {:?}", status.status.code()));
        }
        outputs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    let golden_path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/sweep_default.csv");
    let golden = std::fs::read(golden_path).map_err(|e| e.to_string())?;
    check(
        outputs[0] == outputs[1] && outputs[0] == golden,
        format!(
            "two runs identical: {}; matches golden snapshot ({} bytes): {}",
            outputs[0] == outputs[1],
            golden.len(),
            outputs[0] == golden
        ),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("FK/IK round trip", round_trip),
        ("constraint residuals", constraint_residuals),
        ("oracle agreement", oracle_agreement),
        ("Jacobian", jacobian),
        ("stiffness", stiffness),
        ("screw system", screw_system_checks),
        ("transmission indices", transmission),
        ("topology", topology),
        ("determinism", determinism),
    ];
    println!("acceptance (seed {})", common::seed());
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("[PASS] {} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {} {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
