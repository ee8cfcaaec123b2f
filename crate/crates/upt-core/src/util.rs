//! Small numeric utilities and the shared tolerance constants.

/// Tolerance for algebraic identities evaluated in f64.
pub const ATOL_ALGEBRA: f64 = 1e-10;
/// Tolerance for eigenvalue and singular-value computations.
pub const ATOL_SPECTRUM: f64 = 1e-9;
/// Floor below which a tiny negative eigenvalue is clamped to zero.
pub const CLAMP_FLOOR: f64 = -1e-12;

/// Mean and standard error of a sample.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (0.0, 0.0);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Two-sided bounds on `1 - cos(x)` valid for `|x| <= 2`:
/// `x^2/3 <= 1 - cos(x) <= x^2/2`.
pub fn one_minus_cos_bounds(x: f64) -> (f64, f64) {
    debug_assert!(x.abs() <= 2.0);
    (x * x / 3.0, x * x / 2.0)
}

/// Fidelity between two pure states given their overlap magnitude.
pub fn fidelity_from_overlap(overlap_abs: f64) -> f64 {
    overlap_abs * overlap_abs
}

/// Trace distance between two pure states with fidelity `f`.
pub fn trace_distance_pure(f: f64) -> f64 {
    (1.0 - f).max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cos_gap_bounds_hold_on_grid() {
        let mut x = -2.0f64;
        while x <= 2.0 {
            let gap = 1.0 - x.cos();
            let (lo, hi) = one_minus_cos_bounds(x);
            assert!(lo <= gap + 1e-15 && gap <= hi + 1e-15, "x = {x}");
            x += 1.0 / 64.0;
        }
    }

    #[test]
    fn trace_distance_of_equal_states_is_zero() {
        assert_eq!(trace_distance_pure(1.0), 0.0);
        assert!((trace_distance_pure(0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mean_stderr_basics() {
        let (m, se) = mean_stderr(&[1.0, 1.0, 1.0]);
        assert_eq!(m, 1.0);
        assert_eq!(se, 0.0);
        let (m, se) = mean_stderr(&[0.0, 2.0]);
        assert_eq!(m, 1.0);
        assert!(se > 0.0);
    }
}
