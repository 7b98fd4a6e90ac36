//! Reference listing of basic-link combinations for V = 1..4 and a checker
//! that re-derives the loop count of every printed row instead of trusting
//! its V column.

use serde::Serialize;

use super::composition::{binary_link_base, loop_count, LinkComposition};

/// A row as printed in the published combination table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub number: u32,
    pub printed_v: u32,
    pub printed_n2_base: i64,
    pub n3: u32,
    pub n4: u32,
    pub n5: u32,
}

const fn row(number: u32, printed_v: u32, printed_n2_base: i64, n3: u32, n4: u32, n5: u32) -> TableRow {
    TableRow { number, printed_v, printed_n2_base, n3, n4, n5 }
}

const TABLE: [TableRow; 17] = [
    row(1, 1, 5, 0, 0, 0),
    row(2, 2, 8, 2, 0, 0),
    row(3, 2, 9, 0, 1, 0),
    row(4, 2, 11, 4, 0, 0),
    row(5, 2, 12, 2, 1, 0),
    row(6, 2, 13, 1, 0, 1),
    row(7, 3, 13, 0, 2, 0),
    row(8, 3, 14, 0, 0, 1),
    row(9, 1, 14, 6, 0, 0),
    row(10, 2, 15, 4, 1, 0),
    row(11, 2, 16, 3, 0, 1),
    row(12, 2, 16, 2, 2, 0),
    row(13, 2, 17, 2, 0, 1),
    row(14, 3, 17, 1, 1, 0),
    row(15, 3, 17, 0, 3, 0),
    row(16, 3, 18, 0, 1, 1),
    row(17, 4, 18, 0, 0, 2),
];

pub fn table_rows() -> &'static [TableRow] {
    &TABLE
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    /// Printed V and n2 both follow from the link counts.
    Consistent,
    /// The link counts are valid and n2 matches, but the printed V is not
    /// the loop count those counts imply.
    Relabeled,
    /// The link counts give a valid V whose n2 differs from the printed one.
    N2Mismatch,
    /// n3 + 3 n5 is odd: no integral loop count exists.
    NonIntegral,
}

impl RowStatus {
    /// True when the row's link counts and n2 agree with the counting rules,
    /// regardless of the printed V label.
    pub fn is_derivable(self) -> bool {
        matches!(self, RowStatus::Consistent | RowStatus::Relabeled)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRowCheck {
    pub row: TableRow,
    pub recomputed_v: Option<u32>,
    pub expected_n2_base: Option<i64>,
    pub status: RowStatus,
    /// Whether the recomputed composition appears in the supplied enumeration.
    pub enumerated: bool,
}

/// Classifies every reference row against the counting rules and marks
/// which ones are reproduced by `enumerated`.
pub fn check_table(enumerated: &[LinkComposition]) -> Vec<TableRowCheck> {
    TABLE
        .iter()
        .map(|&row| {
            let recomputed_v = loop_count(row.n3, row.n4, row.n5).ok();
            let expected_n2_base = recomputed_v.map(|v| binary_link_base(v, row.n3, row.n4, row.n5));
            let status = match (recomputed_v, expected_n2_base) {
                (None, _) | (_, None) => RowStatus::NonIntegral,
                (Some(_), Some(n2)) if n2 != row.printed_n2_base => RowStatus::N2Mismatch,
                (Some(v), Some(_)) if v == row.printed_v => RowStatus::Consistent,
                _ => RowStatus::Relabeled,
            };
            let enumerated = recomputed_v.is_some_and(|v| {
                enumerated.iter().any(|c| {
                    c.v_loops == v
                        && c.n3 == row.n3
                        && c.n4 == row.n4
                        && c.n5 == row.n5
                        && Some(c.n2_base) == expected_n2_base
                })
            });
            TableRowCheck { row, recomputed_v, expected_n2_base, status, enumerated }
        })
        .collect()
}
