//! Periodic index arithmetic.
//!
//! Every formula in this crate that touches a cam position with a possibly
//! negative or out-of-range offset (`p_{i-kJ-1}`, `q_{i-1}` at `i = 0`, ...)
//! goes through [`wrap`], so there is exactly one place where the convention
//! `p_{i - mI} = p_i` lives.

/// Maps any integer index onto `0..period`.
#[inline]
pub fn wrap(index: i64, period: usize) -> usize {
    debug_assert!(period > 0);
    index.rem_euclid(period as i64) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_indices_wrap_backwards() {
        assert_eq!(wrap(-1, 10), 9);
        assert_eq!(wrap(-10, 10), 0);
        assert_eq!(wrap(-11, 10), 9);
        assert_eq!(wrap(-21, 10), 9);
    }

    #[test]
    fn large_indices_wrap_forwards() {
        assert_eq!(wrap(10, 10), 0);
        assert_eq!(wrap(23, 10), 3);
        assert_eq!(wrap(0, 1), 0);
    }
}
