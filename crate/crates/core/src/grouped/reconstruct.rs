//! Reconstruction of a plausible full sample from a grouped table.
//!
//! Bounded bins are filled with uniform draws, point-mass bins with
//! repeated exact values, and the final interval with draws from a Pareto
//! tail anchored at its lower bound (shape 3 unless overridden). Counts are
//! rounded to whole observations.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::estimate::Sample;
use crate::math::{self, powf};

use super::table::GroupedTable;

/// Default tail shape for the final interval.
pub const DEFAULT_TAIL_SHAPE: f64 = 3.0;

/// Simulates a full sample consistent with the table's bin counts.
pub fn reconstruct_sample(table: &GroupedTable, seed: u64, tail_shape: f64) -> Result<Sample> {
    if !(tail_shape > 0.0) {
        return Err(Error::InvalidParameter(alloc::format!(
            "tail shape must be positive, got {tail_shape}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(table.rounded_count());
    let last = table.len() - 1;
    for (j, bin) in table.bins().iter().enumerate() {
        let count = math::round(bin.count) as usize;
        if count == 0 {
            continue;
        }
        if bin.is_point_mass() {
            values.extend(core::iter::repeat(bin.lower).take(count));
        } else if j == last {
            // Final interval: Pareto tail with minimum at the lower bound.
            let minimum = bin.lower.max(f64::MIN_POSITIVE);
            for _ in 0..count {
                let u: f64 = rng.gen();
                values.push(minimum * powf(1.0 - u, -1.0 / tail_shape));
            }
        } else {
            let hi = table
                .effective_upper(j)
                .expect("bounded interior bin has an upper bound");
            for _ in 0..count {
                values.push(rng.gen_range(bin.lower..hi));
            }
        }
    }
    Sample::new(values)
}
