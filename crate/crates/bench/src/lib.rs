//! Inputs shared by the criterion benches.

use nearlab::enumerate::{enumerate_groups, enumerate_nearrings, GroupTable};
use nearlab::NearRing;

/// Every raw near-ring on every group of order `1..=max_order`.
pub fn catalog_up_to(max_order: usize) -> Vec<NearRing> {
    (1..=max_order)
        .flat_map(|n| enumerate_groups(n).expect("supported order"))
        .flat_map(|g| enumerate_nearrings(&g))
        .collect()
}

pub fn klein_four() -> GroupTable {
    GroupTable::klein_four()
}
