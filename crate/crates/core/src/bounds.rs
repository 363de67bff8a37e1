//! Known bounds on the number of mutually unbiased bases in dimension `d`.
//!
//! The lower bound is `d + 1` for prime powers and otherwise the minimum of
//! `p^a + 1` over the prime-power factors of `d`, obtained by tensoring
//! extremal families. Regrouping factors never helps, since each group is
//! itself bounded by the minimum over its prime powers. The upper bound is
//! always `d + 1`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finite_field::factorize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundRow {
    pub dimension: u64,
    pub lower: u64,
    pub upper: u64,
    /// Prime-power factors `p^a`, ascending.
    pub factors: Vec<u64>,
}

impl BoundRow {
    pub fn is_extremal(&self) -> bool {
        self.lower == self.upper
    }
}

/// Prime-power factors of `d`, ascending.
pub fn prime_power_factors(d: u64) -> Vec<u64> {
    let mut f: Vec<u64> = factorize(d).into_iter().map(|(p, a)| p.pow(a)).collect();
    f.sort_unstable();
    f
}

pub fn lower_bound(d: u64) -> u64 {
    prime_power_factors(d)
        .iter()
        .map(|q| q + 1)
        .min()
        .unwrap_or(2)
}

pub fn upper_bound(d: u64) -> u64 {
    d + 1
}

pub fn bound_row(d: u64) -> BoundRow {
    BoundRow {
        dimension: d,
        lower: lower_bound(d),
        upper: upper_bound(d),
        factors: prime_power_factors(d),
    }
}

/// Rows for `2 <= d <= max_d`.
pub fn bounds_table(max_d: u64) -> Result<Vec<BoundRow>> {
    if max_d < 2 {
        return Err(Error::InvalidConfig(format!(
            "table needs max-d >= 2, got {max_d}"
        )));
    }
    Ok((2..=max_d).map(bound_row).collect())
}
