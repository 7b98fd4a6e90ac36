use serde::{Deserialize, Serialize};

use super::TopoError;

/// Counts entering the spatial mobility criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MobilityInput {
    /// Total number of links, ground included.
    pub n: u32,
    /// Number of kinematic pairs.
    pub g: u32,
    /// Sum of the freedoms of all pairs.
    pub sum_f: u32,
    /// Passive (idle) degrees of freedom.
    pub passive: u32,
    /// Redundant constraints.
    pub redundant: u32,
}

impl MobilityInput {
    pub fn new(n: u32, g: u32, sum_f: u32, passive: u32, redundant: u32) -> Result<Self, TopoError> {
        if sum_f < g {
            return Err(TopoError::InvalidArgument(format!(
                "sum of pair freedoms ({sum_f}) is smaller than the pair count ({g})"
            )));
        }
        Ok(Self { n, g, sum_f, passive, redundant })
    }
}

/// Modified Grübler-Kutzbach count for spatial mechanisms.
///
/// Redundant constraints add mobility back and passive freedoms are
/// subtracted: `M = 6(n - g - 1) + Σf + redundant - passive`. The printed
/// letter assignment of the two correction terms is swapped in some
/// references, which would give `M = -ζ` for a mobile Bricard loop.
pub fn mobility(input: &MobilityInput) -> i64 {
    let n = i64::from(input.n);
    let g = i64::from(input.g);
    6 * (n - g - 1) + i64::from(input.sum_f) + i64::from(input.redundant) - i64::from(input.passive)
}
