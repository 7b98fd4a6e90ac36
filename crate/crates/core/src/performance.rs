//! Input–output Jacobian, stiffness transmission and workspace sweeps.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::palm_kinematics::{
    angles_from_pose, fk_l3_from_l1, forward, KinematicsError, PalmConfiguration, PalmParams,
};
use crate::screw::{ScrewError, TransmissionAnalyzer, DEFAULT_EXCLUSION};

/// `|J|` and `|D1|` (relative to `L³`) below this are treated as singular.
pub const SINGULAR_TOL: f64 = 1e-12;

pub const CSV_HEADER: [&str; 11] = [
    "l1_mm",
    "l2_mm",
    "l3_mm",
    "beta_rad",
    "gamma_rad",
    "jacobian",
    "stiffness_out",
    "zeta",
    "sigma",
    "kappa",
    "status",
];

#[derive(Debug, Error)]
pub enum PerformanceError {
    #[error("singular Jacobian at l1 = {l1}")]
    Singular { l1: f64 },
    #[error("invalid sweep settings: {0}")]
    InvalidSettings(String),
    #[error(transparent)]
    Kinematics(#[from] KinematicsError),
    #[error(transparent)]
    Screw(#[from] ScrewError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// `J = dL3/dL1` along the loop constraint.
///
/// ```text
/// J = (L2 - 2L1) / 2L3 - (L1 - 2L2) / 2L3 · N1 / D1
/// ```
/// with `N1`, `D1` the partials of the `L1`-`L2` constraint with respect to
/// `L1` and `L2`.
pub fn jacobian_analytic(config: &PalmConfiguration, params: &PalmParams) -> Result<f64, PerformanceError> {
    let PalmConfiguration { l1, l2, l3 } = *config;
    let l = params.link_length;
    let ll = l * l;
    let singular = PerformanceError::Singular { l1 };
    let a = 1.0 - 3.0 * l1 * l1 / (4.0 * ll);
    let b = 1.0 - 3.0 * l2 * l2 / (4.0 * ll);
    if !(a > 0.0 && b > 0.0 && l3 > SINGULAR_TOL * l) {
        return Err(singular);
    }
    let (sa, sb) = (a.sqrt(), b.sqrt());
    let n1 = 90.0 * l1 * l2 * l2 - 24.0 * ll * l1 + 48.0 * ll * l2 * sb * (sa - 3.0 * l1 * l1 / (4.0 * ll * sa));
    let d1 = 90.0 * l1 * l1 * l2 - 24.0 * ll * l2 + 48.0 * ll * l1 * sa * (sb - 3.0 * l2 * l2 / (4.0 * ll * sb));
    if d1.abs() < SINGULAR_TOL * ll * l {
        return Err(singular);
    }
    Ok((l2 - 2.0 * l1) / (2.0 * l3) - (l1 - 2.0 * l2) / (2.0 * l3) * n1 / d1)
}

/// Central difference of the forward height, `(L3(l1+h) - L3(l1-h)) / 2h`.
pub fn jacobian_fd(l1: f64, params: &PalmParams, step: f64) -> Result<f64, PerformanceError> {
    let up = fk_l3_from_l1(l1 + step, params)?;
    let down = fk_l3_from_l1(l1 - step, params)?;
    Ok((up - down) / (2.0 * step))
}

/// `K_L3 = K_L1 / J²`.
pub fn output_stiffness(input_stiffness: f64, jacobian: f64) -> Result<f64, PerformanceError> {
    if jacobian.abs() < SINGULAR_TOL || !jacobian.is_finite() {
        return Err(PerformanceError::Singular { l1: f64::NAN });
    }
    Ok(input_stiffness / (jacobian * jacobian))
}

/// One pose of a sweep. Fields that could not be computed are NaN and
/// `status` carries the reason.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerformanceRow {
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
    pub beta: f64,
    pub gamma: f64,
    pub jacobian: f64,
    pub stiffness_out: f64,
    pub zeta: f64,
    pub sigma: f64,
    pub kappa: f64,
    pub status: String,
}

impl PerformanceRow {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }

    fn failed(l1: f64, reason: String) -> Self {
        let nan = f64::NAN;
        Self {
            l1,
            l2: nan,
            l3: nan,
            beta: nan,
            gamma: nan,
            jacobian: nan,
            stiffness_out: nan,
            zeta: nan,
            sigma: nan,
            kappa: nan,
            status: reason,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSettings {
    pub samples: usize,
    pub input_stiffness: f64,
    /// End margin on the `L1` range as a fraction of `L`.
    pub epsilon_frac: f64,
}

impl Default for SweepSettings {
    fn default() -> Self {
        Self { samples: 500, input_stiffness: 1.0, epsilon_frac: DEFAULT_EXCLUSION }
    }
}

/// Uniform sweep over `L1 ∈ [ε, √3L/3 - ε]` with the default margin.
pub fn workspace_sweep(
    params: &PalmParams,
    samples: usize,
    input_stiffness: f64,
) -> Result<Vec<PerformanceRow>, PerformanceError> {
    sweep_with(params, &SweepSettings { samples, input_stiffness, ..SweepSettings::default() })
}

/// Sweep with explicit settings. Per-pose failures land in the row status;
/// only invalid settings or an unusable index normalization abort.
pub fn sweep_with(params: &PalmParams, settings: &SweepSettings) -> Result<Vec<PerformanceRow>, PerformanceError> {
    let SweepSettings { samples, input_stiffness, epsilon_frac } = *settings;
    if samples < 2 {
        return Err(PerformanceError::InvalidSettings(format!("samples must be at least 2, got {samples}")));
    }
    if !(input_stiffness > 0.0 && input_stiffness.is_finite()) {
        return Err(PerformanceError::InvalidSettings(format!(
            "input stiffness must be positive, got {input_stiffness}"
        )));
    }
    let analyzer = TransmissionAnalyzer::with_exclusion(*params, epsilon_frac)?;
    let (lo, hi) = analyzer.range();
    let step = (hi - lo) / (samples - 1) as f64;
    let rows = (0..samples)
        .into_par_iter()
        .map(|i| {
            let l1 = if i + 1 == samples { hi } else { lo + step * i as f64 };
            evaluate(l1, params, input_stiffness, &analyzer)
                .unwrap_or_else(|e| PerformanceRow::failed(l1, e.to_string()))
        })
        .collect();
    Ok(rows)
}

fn evaluate(
    l1: f64,
    params: &PalmParams,
    input_stiffness: f64,
    analyzer: &TransmissionAnalyzer,
) -> Result<PerformanceRow, PerformanceError> {
    let config = forward(l1, params)?;
    let angles = angles_from_pose(&config, params)?;
    let jacobian = jacobian_analytic(&config, params)?;
    let stiffness_out = output_stiffness(input_stiffness, jacobian).map_err(|_| PerformanceError::Singular { l1 })?;
    let report = analyzer.transmission_indices(&config)?;
    Ok(PerformanceRow {
        l1: config.l1,
        l2: config.l2,
        l3: config.l3,
        beta: angles.beta,
        gamma: angles.gamma,
        jacobian,
        stiffness_out,
        zeta: report.zeta,
        sigma: report.sigma,
        kappa: report.kappa,
        status: "ok".to_string(),
    })
}

/// Writes rows as CSV; floats use the shortest round-trip representation.
pub fn write_csv<W: Write>(rows: &[PerformanceRow], out: W) -> Result<(), PerformanceError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        let nums = [r.l1, r.l2, r.l3, r.beta, r.gamma, r.jacobian, r.stiffness_out, r.zeta, r.sigma, r.kappa];
        let mut record: Vec<String> = nums.iter().map(|v| format!("{v:?}")).collect();
        record.push(r.status.clone());
        w.write_record(&record)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Parses CSV produced by [`write_csv`].
pub fn read_csv<R: std::io::Read>(input: R) -> Result<Vec<PerformanceRow>, PerformanceError> {
    let mut r = csv::Reader::from_reader(input);
    let mut rows = Vec::new();
    for record in r.records() {
        let record = record?;
        let num = |i: usize| record.get(i).and_then(|s| s.parse::<f64>().ok()).unwrap_or(f64::NAN);
        rows.push(PerformanceRow {
            l1: num(0),
            l2: num(1),
            l3: num(2),
            beta: num(3),
            gamma: num(4),
            jacobian: num(5),
            stiffness_out: num(6),
            zeta: num(7),
            sigma: num(8),
            kappa: num(9),
            status: record.get(10).unwrap_or_default().to_string(),
        });
    }
    Ok(rows)
}
