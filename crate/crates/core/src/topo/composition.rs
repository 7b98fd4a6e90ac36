use std::fmt;

use serde::{Deserialize, Serialize};

use super::TopoError;

/// One admissible mix of basic links for a mechanism with `v_loops`
/// independent loops.
///
/// The binary-link count is only known up to the design offset
/// `Φ = M + ζ - v - 1`, so it is stored as the base value and rendered as
/// `base+Φ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LinkComposition {
    pub v_loops: u32,
    pub n3: u32,
    pub n4: u32,
    pub n5: u32,
    pub n2_base: i64,
}

impl LinkComposition {
    /// Binary-link count once the design offset is fixed.
    pub fn n2(&self, phi: i64) -> i64 {
        self.n2_base + phi
    }

    /// Symbolic rendering of the binary-link count, e.g. `11+Φ`.
    pub fn n2_symbolic(&self) -> String {
        format!("{}+Φ", self.n2_base)
    }

    pub fn basic_links(&self) -> u32 {
        self.n3 + self.n4 + self.n5
    }
}

impl fmt::Display for LinkComposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V={} n2={} n3={} n4={} n5={}", self.v_loops, self.n2_symbolic(), self.n3, self.n4, self.n5)
    }
}

/// Independent loops from the higher-order link counts (Euler):
/// `V = (n3 + 2 n4 + 3 n5) / 2 + 1`.
pub fn loop_count(n3: u32, n4: u32, n5: u32) -> Result<u32, TopoError> {
    let odd_part = n3 + 3 * n5;
    if !odd_part.is_multiple_of(2) {
        return Err(TopoError::NonIntegralLoopCount(odd_part));
    }
    Ok((n3 + 2 * n4 + 3 * n5) / 2 + 1)
}

/// `n2 = 5V - (n3 + n4 + n5)`, before adding the design offset Φ.
pub fn binary_link_base(v_loops: u32, n3: u32, n4: u32, n5: u32) -> i64 {
    5 * i64::from(v_loops) - i64::from(n3 + n4 + n5)
}

/// Every `(V, n3, n4, n5)` with `V <= v_max` and each count at most
/// `max_links_per_kind`, ordered lexicographically on `(V, n3, n4, n5)`.
pub fn enumerate_compositions(v_max: u32, max_links_per_kind: u32) -> Result<Vec<LinkComposition>, TopoError> {
    if v_max < 1 {
        return Err(TopoError::InvalidArgument(format!("v_max must be at least 1, got {v_max}")));
    }
    // 2(V - 1) = n3 + 2 n4 + 3 n5 bounds every count.
    let budget = 2 * (v_max - 1);
    let mut out = Vec::new();
    for n3 in 0..=budget.min(max_links_per_kind) {
        for n4 in 0..=(budget / 2).min(max_links_per_kind) {
            for n5 in 0..=(budget / 3).min(max_links_per_kind) {
                if n3 + 2 * n4 + 3 * n5 > budget {
                    continue;
                }
                let Ok(v_loops) = loop_count(n3, n4, n5) else {
                    continue;
                };
                out.push(LinkComposition { v_loops, n3, n4, n5, n2_base: binary_link_base(v_loops, n3, n4, n5) });
            }
        }
    }
    out.sort();
    Ok(out)
}
