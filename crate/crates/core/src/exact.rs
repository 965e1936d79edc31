//! Exact rationals and integer k-th roots for bound formulas.
//!
//! Every satisfaction decision in the crate compares integers obtained by
//! cross-multiplication; `Frac` exists for reporting and ordering, not for
//! rounding. Fractional-exponent bounds are evaluated as exact integer
//! floors via k-th-power tests.

use serde::Serialize;

/// An exact rational with positive denominator, kept unreduced so reports
/// show the formula's literal shape (e.g. 5/15 for n/(5w) on C5).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Frac {
    pub num: i128,
    pub den: i128,
}

impl Frac {
    pub fn new(num: i128, den: i128) -> Self {
        assert!(den > 0, "denominator must be positive");
        Frac { num, den }
    }

    pub fn int(v: i128) -> Self {
        Frac { num: v, den: 1 }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialOrd for Frac {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Frac {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

impl std::fmt::Display for Frac {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

fn pow_checked(v: u128, k: u32) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..k {
        acc = acc.checked_mul(v)?;
    }
    Some(acc)
}

/// Largest v with v^k ≤ x.
pub fn floor_kth_root(x: u128, k: u32) -> u128 {
    assert!(k >= 1);
    let mut lo = 0u128;
    let mut hi = 1u128;
    while pow_checked(hi, k).is_some_and(|p| p <= x) {
        hi *= 2;
    }
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        if pow_checked(mid, k).is_some_and(|p| p <= x) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

/// Smallest v with v^k ≥ x.
pub fn ceil_kth_root(x: u128, k: u32) -> u128 {
    let f = floor_kth_root(x, k);
    if pow_checked(f, k) == Some(x) {
        f
    } else {
        f + 1
    }
}

/// ⌊2^{-1/5} n^{2/5}⌋: largest v with 2v⁵ ≤ n².
pub fn pmb_floor(n: u128) -> u128 {
    let target = n * n;
    let mut v = floor_kth_root(target / 2, 5);
    while pow_checked(v + 1, 5).is_some_and(|p| 2 * p <= target) {
        v += 1;
    }
    v
}

/// ⌊√(n/2)⌋: largest v with 2v² ≤ n.
pub fn sqrt_half_floor(n: u128) -> u128 {
    floor_kth_root(n / 2, 2)
}

/// ⌊2^{-7/3}(n/D)^{4/3}⌋: largest v with 2⁷ v³ D⁴ ≤ n⁴.
pub fn d_graph_floor(n: u128, d: u128) -> u128 {
    assert!(d >= 1);
    let target = n * n * n * n;
    let scale = 128 * d * d * d * d;
    let mut v = floor_kth_root(target / scale, 3);
    while pow_checked(v + 1, 3).is_some_and(|p| p.checked_mul(scale).is_some_and(|s| s <= target)) {
        v += 1;
    }
    v
}

/// ⌊n^{4/7}/2⌋: largest v with 2⁷ v⁷ ≤ n⁴.
pub fn n47_half_floor(n: u128) -> u128 {
    let target = n * n * n * n;
    let mut v = floor_kth_root(target / 128, 7);
    while pow_checked(v + 1, 7).is_some_and(|p| 128 * p <= target) {
        v += 1;
    }
    v
}

/// ⌈n^{9/10}⌉: smallest v with v¹⁰ ≥ n⁹.
pub fn theta_default(n: usize) -> usize {
    ceil_kth_root(pow_checked(n as u128, 9).expect("n is desk-scale"), 10) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_are_exact() {
        assert_eq!(floor_kth_root(0, 3), 0);
        assert_eq!(floor_kth_root(26, 3), 2);
        assert_eq!(floor_kth_root(27, 3), 3);
        assert_eq!(floor_kth_root(28, 3), 3);
        assert_eq!(ceil_kth_root(27, 3), 3);
        assert_eq!(ceil_kth_root(28, 3), 4);
        // cross-check against float sqrt on a range
        for x in 0..10_000u128 {
            let v = floor_kth_root(x, 2);
            assert!(v * v <= x && (v + 1) * (v + 1) > x);
        }
    }

    #[test]
    fn bound_floors() {
        // 2^{-1/5} 25^{2/5}: 25² = 625, largest v with 2v⁵ ≤ 625 is 3
        assert_eq!(pmb_floor(25), 3);
        assert_eq!(sqrt_half_floor(8), 2);
        assert_eq!(sqrt_half_floor(50), 5);
        // (12/2)^{4/3}/2^{7/3}: 2⁷v³·2⁴ ≤ 12⁴ = 20736 → v³ ≤ 10.125 → 2
        assert_eq!(d_graph_floor(12, 2), 2);
        // n^{4/7}/2 at n = 128: 128^{4/7} = 2^4 = 16, halved → 8
        assert_eq!(n47_half_floor(128), 8);
    }

    #[test]
    fn theta_examples() {
        // n^{9/10} for perfect powers: 1024^{0.9} = 2^9 = 512
        assert_eq!(theta_default(1024), 512);
        assert_eq!(theta_default(1), 1);
        // 10^{0.9} ≈ 7.94 → 8
        assert_eq!(theta_default(10), 8);
    }

    #[test]
    fn frac_ordering_and_display() {
        assert!(Frac::new(5, 15) < Frac::int(1));
        assert!(Frac::new(10, 3) > Frac::int(3));
        assert_eq!(Frac::new(5, 15).to_string(), "5/15");
        assert_eq!(Frac::int(7).to_string(), "7");
    }
}
