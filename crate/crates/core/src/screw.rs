//! Screw system of the palm loop and motion/force transmission indices.
//!
//! Frame `{O_m}`: origin at the centroid of the M-triangle, `x` towards
//! `M1`, `z` normal to the triangle towards the N-triangle. `M_i` sit on the
//! circle of radius `L1` at azimuths `0, 2π/3, -2π/3`; `N_i` on the circle of
//! radius `L2` at height `L3` at azimuths `π, π + 2π/3, π - 2π/3`. Links join
//! `M_i` to `N_j` for `i ≠ j`, every one of length `L`, and each joint axis
//! is normal to the two links it carries.

use std::f64::consts::PI;

use nalgebra::{Matrix6, Rotation3, Vector3, Vector6};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::palm_kinematics::{forward, KinematicsError, PalmConfiguration, PalmParams};
use crate::roots::golden_max;

/// Grid size used to locate the index denominators.
pub const DENOMINATOR_SAMPLES: usize = 2000;
/// Default distance kept from either end of the `L1` range, fraction of `L`.
pub const DEFAULT_EXCLUSION: f64 = 1e-3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScrewError {
    #[error("degenerate configuration (l1 = {l1}, l2 = {l2}, l3 = {l3})")]
    DegenerateConfiguration { l1: f64, l2: f64, l3: f64 },
    #[error("transmission singularity on branch {0:?}")]
    SingularBranch(Branch),
    #[error("l1 = {l1} lies outside the normalized range [{lo}, {hi}]")]
    ExcludedPose { l1: f64, lo: f64, hi: f64 },
    #[error(transparent)]
    Kinematics(#[from] KinematicsError),
}

/// Plücker pair `(s, s0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Screw {
    pub direction: Vector3<f64>,
    pub moment: Vector3<f64>,
}

impl Screw {
    pub fn new(direction: Vector3<f64>, moment: Vector3<f64>) -> Self {
        Self { direction, moment }
    }

    /// Zero-pitch unit screw on the line through `point` along `direction`.
    pub fn line(point: &Vector3<f64>, direction: &Vector3<f64>) -> Self {
        let s = direction.normalize();
        Self { direction: s, moment: point.cross(&s) }
    }

    /// Infinite-pitch screw (pure translation or couple).
    pub fn translation(v: Vector3<f64>) -> Self {
        Self { direction: Vector3::zeros(), moment: v }
    }

    /// `s · s0`; zero for a line.
    pub fn plucker_residual(&self) -> f64 {
        self.direction.dot(&self.moment)
    }

    pub fn pitch(&self) -> Option<f64> {
        let n2 = self.direction.norm_squared();
        (n2 > 0.0).then(|| self.plucker_residual() / n2)
    }

    pub fn reciprocal_product(&self, other: &Screw) -> f64 {
        reciprocal_product(self, other)
    }

    pub fn rotated(&self, rotation: &Rotation3<f64>) -> Self {
        Self { direction: rotation * self.direction, moment: rotation * self.moment }
    }

    pub fn to_vector(&self) -> Vector6<f64> {
        Vector6::new(self.direction.x, self.direction.y, self.direction.z, self.moment.x, self.moment.y, self.moment.z)
    }
}

/// `a.s · b.s0 + b.s · a.s0`.
pub fn reciprocal_product(a: &Screw, b: &Screw) -> f64 {
    a.direction.dot(&b.moment) + b.direction.dot(&a.moment)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Joint {
    M1,
    M2,
    M3,
    N1,
    N2,
    N3,
}

impl Joint {
    pub const ALL: [Joint; 6] = [Joint::M1, Joint::M2, Joint::M3, Joint::N1, Joint::N2, Joint::N3];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Image under the 2π/3 rotation about `z_m`.
    pub fn cycled(self) -> Joint {
        match self {
            Joint::M1 => Joint::M2,
            Joint::M2 => Joint::M3,
            Joint::M3 => Joint::M1,
            Joint::N1 => Joint::N2,
            Joint::N2 => Joint::N3,
            Joint::N3 => Joint::N1,
        }
    }

    /// The two joints linked to this one.
    pub fn neighbours(self) -> [Joint; 2] {
        match self {
            Joint::M1 => [Joint::N2, Joint::N3],
            Joint::M2 => [Joint::N3, Joint::N1],
            Joint::M3 => [Joint::N1, Joint::N2],
            Joint::N1 => [Joint::M2, Joint::M3],
            Joint::N2 => [Joint::M3, Joint::M1],
            Joint::N3 => [Joint::M1, Joint::M2],
        }
    }
}

/// Joint centres in `{O_m}`, ordered `M1, M2, M3, N1, N2, N3`.
pub fn joint_points(config: &PalmConfiguration) -> [Vector3<f64>; 6] {
    let m = Vector3::new(config.l1, 0.0, 0.0);
    let n = Vector3::new(-config.l2, 0.0, config.l3);
    let r1 = Rotation3::from_axis_angle(&Vector3::z_axis(), 2.0 * PI / 3.0);
    let r2 = Rotation3::from_axis_angle(&Vector3::z_axis(), -2.0 * PI / 3.0);
    [m, r1 * m, r2 * m, n, r1 * n, r2 * n]
}

/// Scalar coefficients of the closed-form screw matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScrewCoefficients {
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
    pub m4: f64,
    pub m5: f64,
    pub m6: f64,
}

/// `m1..m6` as functions of `(L1, L2, L3)`.
///
/// `m1² = 3L1²L2² + 3L2²L3² - 3L1L2³ + 3L2⁴/4`, with `-3 L1 L2³` so that it
/// mirrors `m2²` and the axes come out unit length.
pub fn screw_coefficients(config: &PalmConfiguration) -> Result<ScrewCoefficients, ScrewError> {
    let PalmConfiguration { l1, l2, l3 } = *config;
    let degenerate = ScrewError::DegenerateConfiguration { l1, l2, l3 };
    if !(l1 > 0.0 && l2 > 0.0 && l3 > 0.0) {
        return Err(degenerate);
    }
    let s3 = 3f64.sqrt();
    // factored radicands; the expanded forms cancel badly near L1 = L2/2
    let m1 = s3 * l2 * (l1 - l2 / 2.0).hypot(l3);
    let m2 = s3 * l1 * (l2 - l1 / 2.0).hypot(l3);
    let scale = (l1 * l1 + l2 * l2 + l3 * l3) * l1.min(l2);
    if !(m1 > 1e-12 * scale && m2 > 1e-12 * scale) {
        return Err(degenerate);
    }
    let m3 = s3 * l1 * l2 / m1 - s3 * l2 * l2 / (2.0 * m1);
    let m4 = s3 * l1 * l2 / m2 - s3 * l1 * l1 / (2.0 * m2);
    let m5 = l1 * m3 / 2.0;
    let m6 = -l2 * m4 / 2.0 - s3 * l1 * l3 * l3 / (2.0 * m2);
    Ok(ScrewCoefficients { m1, m2, m3, m4, m5, m6 })
}

/// The six joint screws of one pose.
#[derive(Debug, Clone, PartialEq)]
pub struct ScrewSystem {
    joints: [Screw; 6],
    points: [Vector3<f64>; 6],
    link_length: f64,
}

impl ScrewSystem {
    pub fn joints(&self) -> &[Screw; 6] {
        &self.joints
    }

    pub fn joint(&self, joint: Joint) -> &Screw {
        &self.joints[joint.index()]
    }

    pub fn points(&self) -> &[Vector3<f64>; 6] {
        &self.points
    }

    pub fn point(&self, joint: Joint) -> &Vector3<f64> {
        &self.points[joint.index()]
    }

    /// Link length recovered from the pose, `sqrt(L1² - L1 L2 + L2² + L3²)`.
    pub fn link_length(&self) -> f64 {
        self.link_length
    }

    /// Rows are the joint screws `[s, s0 / L]`, so the matrix is scale free.
    pub fn stacked_matrix(&self) -> Matrix6<f64> {
        let mut out = Matrix6::zeros();
        for (i, s) in self.joints.iter().enumerate() {
            let mut row = s.to_vector();
            for k in 3..6 {
                row[k] /= self.link_length;
            }
            out.set_row(i, &row.transpose());
        }
        out
    }

    /// Singular values of [`Self::stacked_matrix`], largest first.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut sv: Vec<f64> = self.stacked_matrix().singular_values().iter().copied().collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        sv
    }

    /// Number of singular values above `rel_tol` times the largest.
    pub fn numerical_rank(&self, rel_tol: f64) -> usize {
        let sv = self.singular_values();
        sv.iter().filter(|&&s| s > rel_tol * sv[0]).count()
    }

    /// Joint rates `w` with `Σ w_i S_i = 0`, scaled so `w[M1] = 1`.
    pub fn loop_rates(&self) -> Vector6<f64> {
        let svd = self.stacked_matrix().transpose().svd(false, true);
        let v_t = svd.v_t.expect("requested V^T");
        let (k, _) =
            svd.singular_values.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("six singular values");
        let w: Vector6<f64> = v_t.row(k).transpose();
        w / w[0]
    }

    /// Every screw and joint point rotated by `angle` about `z_m`.
    pub fn rotated(&self, angle: f64) -> Self {
        let r = Rotation3::from_axis_angle(&Vector3::z_axis(), angle);
        Self {
            joints: self.joints.map(|s| s.rotated(&r)),
            points: self.points.map(|p| r * p),
            link_length: self.link_length,
        }
    }
}

/// Closed-form joint screws of the pose.
pub fn screw_system(config: &PalmConfiguration) -> Result<ScrewSystem, ScrewError> {
    let ScrewCoefficients { m1, m2, m3, m4, m5, m6 } = screw_coefficients(config)?;
    let PalmConfiguration { l1, l2, l3 } = *config;
    let s3 = 3f64.sqrt();
    let v = Vector3::new;
    let a = s3 * l2 * l3 / m1;
    let b = s3 * l1 * l3 / m2;
    let joints = [
        Screw::new(v(a, 0.0, m3), v(0.0, -2.0 * m5, 0.0)),
        Screw::new(v(-a / 2.0, 1.5 * l2 * l3 / m1, m3), v(s3 * m5, m5, 0.0)),
        Screw::new(v(-a / 2.0, -1.5 * l2 * l3 / m1, m3), v(-s3 * m5, m5, 0.0)),
        Screw::new(v(b, 0.0, m4), v(0.0, -2.0 * m6, 0.0)),
        Screw::new(v(-b / 2.0, 1.5 * l1 * l3 / m2, m4), v(s3 * m6, m6, 0.0)),
        Screw::new(v(-b / 2.0, -1.5 * l1 * l3 / m2, m4), v(-s3 * m6, m6, 0.0)),
    ];
    let link_length = (l1 * l1 - l1 * l2 + l2 * l2 + l3 * l3).sqrt();
    Ok(ScrewSystem { joints, points: joint_points(config), link_length })
}

/// Representative branches; the other four follow by the 2π/3 symmetry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    M1N2,
    M1N3,
}

impl Branch {
    pub fn driving(self) -> Joint {
        Joint::M1
    }

    pub fn passive(self) -> Joint {
        match self {
            Branch::M1N2 => Joint::N2,
            Branch::M1N3 => Joint::N3,
        }
    }
}

/// Transmission wrench of a branch: the unit pure force through the passive
/// joint centre, normal to the branch link and to the driving axis.
///
/// Passing through the passive joint makes it reciprocal to the passive
/// screw. Among such forces normal to the link it is the one doing the most
/// work on the driving joint, `|S_T ∘ S_drive| = L`.
pub fn transmission_wrench(system: &ScrewSystem, branch: Branch) -> Result<Screw, ScrewError> {
    let drive = system.joint(branch.driving());
    let passive_point = system.point(branch.passive());
    let link = passive_point - system.point(branch.driving());
    let force = drive.direction.cross(&link);
    if force.norm() <= 1e-12 * link.norm() {
        return Err(ScrewError::SingularBranch(branch));
    }
    let wrench = Screw::line(passive_point, &force);
    if reciprocal_product(&wrench, drive).abs() <= 1e-9 * system.link_length() {
        return Err(ScrewError::SingularBranch(branch));
    }
    Ok(wrench)
}

/// Input twist: radial translation of `M1` along `x_m`, magnitude `L1`.
pub fn input_twist(config: &PalmConfiguration) -> Screw {
    Screw::translation(Vector3::new(config.l1, 0.0, 0.0))
}

/// Output twist: translation of the palm along `z_m`, magnitude `L3`.
pub fn output_twist(config: &PalmConfiguration) -> Screw {
    Screw::translation(Vector3::new(0.0, 0.0, config.l3))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransmissionReport {
    pub zeta: f64,
    pub sigma: f64,
    pub kappa: f64,
}

/// Raw transmission products `(|S_T ∘ S_I|, |S_T ∘ S_O|)` of one branch.
pub fn transmission_products(config: &PalmConfiguration, branch: Branch) -> Result<(f64, f64), ScrewError> {
    let system = screw_system(config)?;
    let wrench = transmission_wrench(&system, branch)?;
    Ok((
        reciprocal_product(&wrench, &input_twist(config)).abs(),
        reciprocal_product(&wrench, &output_twist(config)).abs(),
    ))
}

/// Normalizes transmission products by their maxima over the workspace.
///
/// The maxima are located on a uniform grid over `[ε, √3L/3 - ε]` and then
/// refined by golden-section search next to the best grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct TransmissionAnalyzer {
    params: PalmParams,
    lo: f64,
    hi: f64,
    input_max: f64,
    output_max: f64,
}

impl TransmissionAnalyzer {
    pub fn new(params: PalmParams) -> Result<Self, ScrewError> {
        Self::with_exclusion(params, DEFAULT_EXCLUSION)
    }

    /// `exclusion` is the margin kept from both ends of the `L1` range, as a
    /// fraction of `L`.
    pub fn with_exclusion(params: PalmParams, exclusion: f64) -> Result<Self, ScrewError> {
        let lo = exclusion * params.link_length;
        let hi = params.l1_max() - lo;
        if !(lo > 0.0 && lo < hi) {
            return Err(ScrewError::ExcludedPose { l1: lo, lo: 0.0, hi: params.l1_max() });
        }
        let step = (hi - lo) / (DENOMINATOR_SAMPLES - 1) as f64;
        let grid: Vec<f64> = (0..DENOMINATOR_SAMPLES)
            .map(|i| if i + 1 == DENOMINATOR_SAMPLES { hi } else { lo + step * i as f64 })
            .collect();
        let products = grid
            .par_iter()
            .map(|&l1| transmission_products(&forward(l1, &params)?, Branch::M1N2))
            .collect::<Result<Vec<_>, ScrewError>>()?;

        let refine =
            |pick: fn(&(f64, f64)) -> f64| -> f64 {
                let (best, grid_max) = products
                    .iter()
                    .map(pick)
                    .enumerate()
                    .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
                let a = grid[best.saturating_sub(1)];
                let b = grid[(best + 1).min(grid.len() - 1)];
                let objective = |l1: f64| {
                    forward(l1, &params)
                        .map_err(ScrewError::from)
                        .and_then(|c| transmission_products(&c, Branch::M1N2))
                        .map(|p| pick(&p))
                        .unwrap_or(f64::NEG_INFINITY)
                };
                let (_, refined) = golden_max(objective, a, b, 1e-10 * params.link_length);
                grid_max.max(refined)
            };
        let input_max = refine(|p| p.0);
        let output_max = refine(|p| p.1);
        Ok(Self { params, lo, hi, input_max, output_max })
    }

    pub fn params(&self) -> &PalmParams {
        &self.params
    }

    /// Denominators `(max |S_T ∘ S_I|, max |S_T ∘ S_O|)`.
    pub fn maxima(&self) -> (f64, f64) {
        (self.input_max, self.output_max)
    }

    /// The `L1` interval the maxima were taken over.
    pub fn range(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn branch_indices(&self, config: &PalmConfiguration, branch: Branch) -> Result<TransmissionReport, ScrewError> {
        // tolerate the rounding of grid endpoints
        let slack = 1e-12 * self.params.link_length;
        if config.l1 < self.lo - slack || config.l1 > self.hi + slack {
            return Err(ScrewError::ExcludedPose { l1: config.l1, lo: self.lo, hi: self.hi });
        }
        let (input, output) = transmission_products(config, branch)?;
        // ratios can only exceed 1 by rounding
        let zeta = (input / self.input_max).min(1.0);
        let sigma = (output / self.output_max).min(1.0);
        Ok(TransmissionReport { zeta, sigma, kappa: zeta.min(sigma) })
    }

    /// Indices of the representative branch `M1N2`.
    pub fn transmission_indices(&self, config: &PalmConfiguration) -> Result<TransmissionReport, ScrewError> {
        self.branch_indices(config, Branch::M1N2)
    }
}
