//! Small helpers over sorted slices.

use super::floor;

/// Linear-interpolation quantile of a sorted slice (R type 7).
pub fn quantile_sorted(sorted: &[f64], u: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * u;
    let lo = floor(h).clamp(0.0, (n - 1) as f64) as usize;
    if lo >= n - 1 {
        return sorted[n - 1];
    }
    let gamma = h - lo as f64;
    sorted[lo] + gamma * (sorted[lo + 1] - sorted[lo])
}

/// Arithmetic mean.
pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample standard deviation (n − 1 in the denominator).
pub fn sample_sd(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(values);
    let ss: f64 = values.iter().map(|v| (v - m) * (v - m)).sum();
    super::sqrt(ss / (n - 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantile_type7() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile_sorted(&xs, 0.0), 1.0);
        assert_eq!(quantile_sorted(&xs, 1.0), 4.0);
        assert_eq!(quantile_sorted(&xs, 0.5), 2.5);
        // R: quantile(1:4, 0.25) = 1.75
        assert!((quantile_sorted(&xs, 0.25) - 1.75).abs() < 1e-15);
    }

    #[test]
    fn sd_matches_hand_value() {
        let xs = [2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0];
        // population sd is 2; sample sd is sqrt(32/7)
        assert!((sample_sd(&xs) - (32.0_f64 / 7.0).sqrt()).abs() < 1e-12);
    }
}
