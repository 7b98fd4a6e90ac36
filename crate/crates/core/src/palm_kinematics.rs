//! Closed-loop kinematics of the triple-symmetric Bricard palm.
//!
//! The loop has six equal links of length `L` and alternating twists `ω`,
//! `2π - ω`. With `ω = 2π/3` the joint at the M-triangle rotates by `β`
//! (input) and the joint at the N-triangle by `γ` (passive). The palm is
//! described by three lengths: `L1` (circumradius of the M-triangle), `L2`
//! (circumradius of the N-triangle) and `L3` (distance between the two
//! triangle planes).
//!
//! Only the bifurcation-free branch `β ∈ (0, π)`, `γ ∈ (2π/3, π)`,
//! `L1 < L2` is represented. Lengths are in mm, angles in rad.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::roots::bisect;

/// Twist angle the closed-form kinematics are specialized to.
pub const DEFAULT_TWIST: f64 = 2.0 * PI / 3.0;
/// Link length used throughout the reference design, mm.
pub const DEFAULT_LINK_LENGTH: f64 = 120.0;

/// Open-interval margin, as a fraction of `L`.
pub const BOUNDARY_MARGIN: f64 = 1e-9;
/// Dimensionless radicands above `-RADICAND_CLAMP` are clamped to zero.
pub const RADICAND_CLAMP: f64 = 1e-12;
/// Residual the passive angle must reach on the coordination equation.
pub const ANGLE_RESIDUAL_TOL: f64 = 1e-12;
/// Bisection width for the inverse problem, as a fraction of `L`.
pub const IK_STEP_TOL: f64 = 1e-10;
/// Loop-closure residual accepted by [`pose_from_angles`].
pub const CLOSURE_TOL: f64 = 1e-9;
/// Allowed disagreement between the two `L2` branches in the inverse
/// problem, as a fraction of `L`.
pub const BRANCH_CHECK_TOL: f64 = 1e-6;

const TWO_SQRT3_OVER_3: f64 = 1.154_700_538_379_251_5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KinematicsError {
    #[error("{quantity} = {value} is outside the open interval ({lo}, {hi})")]
    OutOfRange { quantity: &'static str, value: f64, lo: f64, hi: f64 },
    #[error("no root on the working branch for {quantity} = {value}; attainable interval is ({lo}, {hi})")]
    NoRootInBranch { quantity: &'static str, value: f64, lo: f64, hi: f64 },
    #[error("angles (beta = {beta}, gamma = {gamma}) do not close the loop (residual {residual:e})")]
    InfeasibleAngles { beta: f64, gamma: f64, residual: f64 },
    #[error("negative radicand {value:e} in {context}")]
    NegativeRadicand { context: &'static str, value: f64 },
    #[error("invalid palm parameters: {0}")]
    InvalidParams(String),
    #[error("closed-form kinematics assume a twist of 2π/3, got {0}")]
    UnsupportedTwist(f64),
    #[error("L2 branch mismatch in inverse kinematics: {closed_form} vs {quadratic}")]
    BranchMismatch { closed_form: f64, quadratic: f64 },
}

pub type Result<T> = std::result::Result<T, KinematicsError>;

/// Fixed geometry of the loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PalmParams {
    /// Common link length `L`, mm.
    pub link_length: f64,
    /// Twist `ω` between adjacent joint axes, rad.
    pub twist: f64,
}

impl Default for PalmParams {
    fn default() -> Self {
        Self { link_length: DEFAULT_LINK_LENGTH, twist: DEFAULT_TWIST }
    }
}

impl PalmParams {
    pub fn new(link_length: f64, twist: f64) -> Result<Self> {
        if !(link_length > 0.0 && link_length.is_finite()) {
            return Err(KinematicsError::InvalidParams(format!("link length must be positive, got {link_length}")));
        }
        if !(twist > 0.0 && twist < PI) {
            return Err(KinematicsError::InvalidParams(format!("twist must lie in (0, π), got {twist}")));
        }
        Ok(Self { link_length, twist })
    }

    /// Upper end of the `L1` range, `√3 L / 3`.
    pub fn l1_max(&self) -> f64 {
        self.link_length / 3f64.sqrt()
    }

    /// Upper end of the `L2` range, `2√3 L / 3`.
    pub fn l2_max(&self) -> f64 {
        TWO_SQRT3_OVER_3 * self.link_length
    }

    /// Upper end of the `L3` range, `L`.
    pub fn l3_max(&self) -> f64 {
        self.link_length
    }

    fn margin(&self) -> f64 {
        BOUNDARY_MARGIN * self.link_length
    }

    fn require_default_twist(&self) -> Result<()> {
        if (self.twist - DEFAULT_TWIST).abs() > 1e-12 {
            return Err(KinematicsError::UnsupportedTwist(self.twist));
        }
        Ok(())
    }
}

/// Input and passive joint angles on the working branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointAngles {
    pub beta: f64,
    pub gamma: f64,
}

impl JointAngles {
    pub fn new(beta: f64, gamma: f64) -> Result<Self> {
        if !(beta > 0.0 && beta < PI) {
            return Err(KinematicsError::OutOfRange { quantity: "beta", value: beta, lo: 0.0, hi: PI });
        }
        if !(gamma > DEFAULT_TWIST && gamma < PI) {
            return Err(KinematicsError::OutOfRange { quantity: "gamma", value: gamma, lo: DEFAULT_TWIST, hi: PI });
        }
        Ok(Self { beta, gamma })
    }

    /// Input angle with its passive partner on the working branch.
    pub fn from_beta(beta: f64) -> Result<Self> {
        Self::new(beta, gamma_from_beta(beta)?)
    }
}

/// One pose of the palm, mm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PalmConfiguration {
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
}

impl PalmConfiguration {
    pub fn new(l1: f64, l2: f64, l3: f64) -> Self {
        Self { l1, l2, l3 }
    }

    /// Checks the open ranges, the branch ordering `l1 < l2`, the `L1`-`L2`
    /// constraint (normalized by `L⁴`) and the height relation (normalized by
    /// `L²`), the last two to `tol`.
    pub fn check(&self, params: &PalmParams, tol: f64) -> Result<()> {
        let within = |quantity, value: f64, hi: f64| {
            if value > 0.0 && value < hi {
                Ok(())
            } else {
                Err(KinematicsError::OutOfRange { quantity, value, lo: 0.0, hi })
            }
        };
        within("l1", self.l1, params.l1_max())?;
        within("l2", self.l2, params.l2_max())?;
        within("l3", self.l3, params.l3_max())?;
        if self.l1 >= self.l2 {
            return Err(KinematicsError::OutOfRange { quantity: "l1", value: self.l1, lo: 0.0, hi: self.l2 });
        }
        let constraint = constraint_residual_l1l2(self.l1, self.l2, params)?;
        let height = height_residual(self, params);
        if constraint.abs() > tol || height.abs() > tol {
            return Err(KinematicsError::NoRootInBranch {
                quantity: "constraint residual",
                value: constraint.abs().max(height.abs()),
                lo: -tol,
                hi: tol,
            });
        }
        Ok(())
    }
}

/// `(l3² - (L² - l1² - l2² + l1 l2)) / L²`; zero for a closed loop.
pub fn height_residual(config: &PalmConfiguration, params: &PalmParams) -> f64 {
    let PalmConfiguration { l1, l2, l3 } = *config;
    let l = params.link_length;
    (l3 * l3 - (l * l - l1 * l1 - l2 * l2 + l1 * l2)) / (l * l)
}

/// Motion coordination residual of the symmetric loop for a general twist.
pub fn loop_residual(beta: f64, gamma: f64, twist: f64) -> f64 {
    let (sw, cw) = twist.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let (sg, cg) = gamma.sin_cos();
    sw * sw * (cb + cg) + (1.0 + cw * cw) * cb * cg + cw * cw - 2.0 * cw * sb * sg
}

/// The coordination residual at `ω = 2π/3`, scaled by 4:
/// `5 cosβ cosγ + 4 sinβ sinγ + 3 cosβ + 3 cosγ + 1`.
pub fn coordination_residual(beta: f64, gamma: f64) -> f64 {
    let (sb, cb) = beta.sin_cos();
    let (sg, cg) = gamma.sin_cos();
    5.0 * cb * cg + 4.0 * sb * sg + 3.0 * cb + 3.0 * cg + 1.0
}

/// Passive angle `γ ∈ (2π/3, π)` paired with the input angle `β`.
///
/// For fixed `β` the residual is `a cosγ + b sinγ + c` with `b > 0`, which
/// decreases monotonically on `[atan2(b, a), π]`. Bisecting on that
/// sub-interval (clipped to the branch) isolates the larger root, the one
/// with `γ > β`, i.e. `L1 < L2`.
pub fn gamma_from_beta(beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta < PI) {
        return Err(KinematicsError::OutOfRange { quantity: "beta", value: beta, lo: 0.0, hi: PI });
    }
    let (sb, cb) = beta.sin_cos();
    let peak = (4.0 * sb).atan2(5.0 * cb + 3.0);
    let lo = peak.max(DEFAULT_TWIST);
    let residual = |g: f64| coordination_residual(beta, g);
    let no_root = KinematicsError::NoRootInBranch { quantity: "beta", value: beta, lo: 0.0, hi: PI };
    if residual(lo) < 0.0 || residual(PI) > 0.0 {
        return Err(no_root);
    }
    let gamma = bisect(residual, lo, PI, 0.0).ok_or(no_root.clone())?;
    if residual(gamma).abs() > ANGLE_RESIDUAL_TOL {
        return Err(no_root);
    }
    Ok(gamma)
}

fn clamp_radicand(value: f64, context: &'static str) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= -RADICAND_CLAMP {
        Ok(0.0)
    } else {
        Err(KinematicsError::NegativeRadicand { context, value })
    }
}

/// Palm lengths from the joint angles.
pub fn pose_from_angles(angles: &JointAngles, params: &PalmParams) -> Result<PalmConfiguration> {
    let JointAngles { beta, gamma } = *angles;
    let residual = loop_residual(beta, gamma, params.twist);
    if residual.abs() > CLOSURE_TOL {
        return Err(KinematicsError::InfeasibleAngles { beta, gamma, residual });
    }
    let l = params.link_length;
    let ch_g = (gamma / 2.0).cos();
    let ch_b = (beta / 2.0).cos();
    let radicand = 1.0 - 4.0 / 3.0 * ch_g * ch_g - 4.0 / 3.0 * ch_b * ch_b + 4.0 / 3.0 * ch_g * ch_b;
    let radicand = clamp_radicand(radicand, "palm height from angles")
        .map_err(|_| KinematicsError::InfeasibleAngles { beta, gamma, residual: radicand })?;
    Ok(PalmConfiguration { l1: TWO_SQRT3_OVER_3 * l * ch_g, l2: TWO_SQRT3_OVER_3 * l * ch_b, l3: l * radicand.sqrt() })
}

/// Joint angles from the palm lengths: `γ = 2 acos(√3 L1 / 2L)`,
/// `β = 2 acos(√3 L2 / 2L)`.
pub fn angles_from_pose(config: &PalmConfiguration, params: &PalmParams) -> Result<JointAngles> {
    let scale = 3f64.sqrt() / (2.0 * params.link_length);
    let half = |quantity, value: f64, length: f64| {
        let arg = scale * length;
        if (0.0..=1.0).contains(&arg) {
            Ok(2.0 * arg.acos())
        } else {
            Err(KinematicsError::OutOfRange { quantity, value, lo: 0.0, hi: 1.0 / scale })
        }
    };
    Ok(JointAngles { gamma: half("l1", config.l1, config.l1)?, beta: half("l2", config.l2, config.l2)? })
}

/// Residual of the `L1`-`L2` constraint
/// `45 L1² L2² - 12 L² (L1² + L2²) + 48 L² L1 L2 √A √B`,
/// with `A = 1 - 3L1²/4L²`, `B = 1 - 3L2²/4L²`, divided by `L⁴`.
pub fn constraint_residual_l1l2(l1: f64, l2: f64, params: &PalmParams) -> Result<f64> {
    let l = params.link_length;
    let ll = l * l;
    let a = clamp_radicand(1.0 - 3.0 * l1 * l1 / (4.0 * ll), "constraint factor A")?;
    let b = clamp_radicand(1.0 - 3.0 * l2 * l2 / (4.0 * ll), "constraint factor B")?;
    let value = 45.0 * l1 * l1 * l2 * l2 - 12.0 * ll * (l1 * l1 + l2 * l2) + 48.0 * ll * l1 * l2 * a.sqrt() * b.sqrt();
    Ok(value / (ll * ll))
}

fn check_l1(l1: f64, params: &PalmParams) -> Result<()> {
    params.require_default_twist()?;
    let m = params.margin();
    let hi = params.l1_max();
    if !(l1 > m && l1 < hi - m) {
        return Err(KinematicsError::OutOfRange { quantity: "l1", value: l1, lo: 0.0, hi });
    }
    Ok(())
}

/// Closed-form `L2` for `L1 ∈ [0, √3L/3]` without range checks.
///
/// ```text
/// L2 = L sqrt( (112 L1² L² - 36 L1⁴ + 32 L1² L sqrt(12L² - 9L1²))
///            / (16 L⁴ + 72 L1² L² + 81 L1⁴) )
/// ```
fn l2_closed_form(l1: f64, l: f64) -> f64 {
    let l1s = l1 * l1;
    let ll = l * l;
    let inner = (12.0 * ll - 9.0 * l1s).max(0.0).sqrt();
    let num = 112.0 * l1s * ll - 36.0 * l1s * l1s + 32.0 * l1s * l * inner;
    let den = 16.0 * ll * ll + 72.0 * l1s * ll + 81.0 * l1s * l1s;
    l * (num / den).max(0.0).sqrt()
}

fn l3_from_lengths(l1: f64, l2: f64, l: f64) -> Result<f64> {
    let ll = l * l;
    let radicand = clamp_radicand((ll - (l1 * l1 + l2 * l2) + l1 * l2) / ll, "palm height")?;
    Ok(l * radicand.sqrt())
}

/// Forward kinematics, first stage: `L2` from `L1`.
pub fn fk_l2_from_l1(l1: f64, params: &PalmParams) -> Result<f64> {
    check_l1(l1, params)?;
    Ok(l2_closed_form(l1, params.link_length))
}

/// Forward kinematics, second stage: `L3 = sqrt(L² - (L1² + L2²) + L1 L2)`.
pub fn fk_l3_from_l1(l1: f64, params: &PalmParams) -> Result<f64> {
    let l2 = fk_l2_from_l1(l1, params)?;
    l3_from_lengths(l1, l2, params.link_length)
}

/// Complete forward solution for the input radius `l1`.
pub fn forward(l1: f64, params: &PalmParams) -> Result<PalmConfiguration> {
    let l2 = fk_l2_from_l1(l1, params)?;
    let l3 = l3_from_lengths(l1, l2, params.link_length)?;
    Ok(PalmConfiguration { l1, l2, l3 })
}

/// Inverse kinematics: the unique `L1` whose forward height equals `l3`.
///
/// Bisects `L3(L1) - l3` over `[0, √3L/3]`, where the forward height is
/// strictly decreasing, then checks that the quadratic branch
/// `L2 = (L1 + sqrt(4L² - 3L1² - 4L3²)) / 2` agrees with the closed form.
pub fn ik_l1_from_l3(l3: f64, params: &PalmParams) -> Result<f64> {
    params.require_default_twist()?;
    let l = params.link_length;
    let m = params.margin();
    let out_of_reach = KinematicsError::NoRootInBranch { quantity: "l3", value: l3, lo: 0.0, hi: l };
    if !(l3 > m && l3 < l - m) {
        return Err(out_of_reach);
    }
    let height = |l1: f64| {
        let l2 = l2_closed_form(l1, l);
        let radicand = ((l * l - (l1 * l1 + l2 * l2) + l1 * l2) / (l * l)).max(0.0);
        l * radicand.sqrt() - l3
    };
    let l1 = bisect(height, 0.0, params.l1_max(), IK_STEP_TOL * l).ok_or(out_of_reach)?;

    let closed_form = l2_closed_form(l1, l);
    let disc = clamp_radicand((4.0 * l * l - 3.0 * l1 * l1 - 4.0 * l3 * l3) / (l * l), "inverse L2 branch")?;
    let quadratic = (l1 + l * disc.sqrt()) / 2.0;
    if (closed_form - quadratic).abs() > BRANCH_CHECK_TOL * l {
        return Err(KinematicsError::BranchMismatch { closed_form, quadratic });
    }
    Ok(l1)
}

/// Complete inverse solution for the palm height `l3`.
pub fn inverse(l3: f64, params: &PalmParams) -> Result<PalmConfiguration> {
    let l1 = ik_l1_from_l3(l3, params)?;
    forward(l1, params)
}
