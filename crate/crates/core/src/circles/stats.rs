//! Averaged equidistribution statistics and prime-angle sums.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::expsum::prime_power_factor;
use super::points::circle_points;
use crate::error::{invalid, Result};
use crate::numtheory::{primes_up_to, r2_range, two_squares_prime, SpfSieve};
use crate::sum::CompensatedSum;

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Largest bound accepted by [`avg_abs_s`]; the sieve holds 4 bytes per integer.
pub const AVG_S_MAX: u64 = 100_000_000;

const CHUNK: u64 = 1 << 14;

/// Mean of |S(m, k)| over 1 <= m <= X, with sub-means at each power of ten.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleStatistics {
    pub x: u64,
    pub k: i64,
    pub mean_abs_s: f64,
    /// Set when 4 does not divide k: S(m, k) vanishes for every m.
    pub identically_zero: bool,
    /// (X_i, mean over m <= X_i) for X_i = 100, 1000, ... below X, then X itself.
    pub decades: Vec<(u64, f64)>,
}

/// theta_p for every prime p = 1 mod 4 up to the sieve limit, indexed by (p - 1) / 4.
pub(crate) struct PrimeAngles {
    theta: Vec<f64>,
}

impl PrimeAngles {
    pub(crate) fn new(sieve: &SpfSieve) -> Self {
        let limit = sieve.limit();
        let theta = (0..=(limit.saturating_sub(1) / 4))
            .into_par_iter()
            .map(|i| {
                let p = 4 * i + 1;
                if sieve.is_prime(p) {
                    let rep = two_squares_prime(p as u64).expect("p is a prime 1 mod 4");
                    (rep.y as f64).atan2(rep.x as f64)
                } else {
                    f64::NAN
                }
            })
            .collect();
        Self { theta }
    }

    pub(crate) fn get(&self, p: u32) -> f64 {
        self.theta[(p as usize - 1) / 4]
    }
}

/// |S(m, k)| via the closed form, with m factored by the sieve.
pub(crate) fn abs_s_sieved(
    m: u32,
    k: i64,
    sieve: &SpfSieve,
    angles: &PrimeAngles,
    scratch: &mut Vec<(u32, u32)>,
) -> f64 {
    sieve.factor(m, scratch);
    let mut acc = 4.0;
    for &(p, a) in scratch.iter() {
        match p % 4 {
            1 => acc *= prime_power_factor(a, k, angles.get(p)),
            3 if a % 2 == 1 => return 0.0,
            _ => {}
        }
    }
    acc
}

/// Exact mean of |S(m, k)| over 1 <= m <= X using the closed form.
///
/// The range is summed in fixed chunks whose partial sums are combined in
/// index order, so the result does not depend on the number of worker threads.
pub fn avg_abs_s(x: u64, k: i64) -> Result<AngleStatistics> {
    if x < 100 {
        return invalid(format!("avg_abs_s needs X >= 100, got {x}"));
    }
    if x > AVG_S_MAX {
        return invalid(format!("avg_abs_s supports X <= {AVG_S_MAX}, got {x}"));
    }
    if k == 0 {
        return invalid("avg_abs_s needs k != 0");
    }

    let mut marks: Vec<u64> = std::iter::successors(Some(100u64), |d| d.checked_mul(10))
        .take_while(|&d| d < x)
        .collect();
    marks.push(x);

    if k % 4 != 0 {
        return Ok(AngleStatistics {
            x,
            k,
            mean_abs_s: 0.0,
            identically_zero: true,
            decades: marks.into_iter().map(|d| (d, 0.0)).collect(),
        });
    }

    let sieve = SpfSieve::new(x as u32);
    let angles = PrimeAngles::new(&sieve);

    // interval endpoints: fixed chunk grid plus the decade marks
    let mut cuts: Vec<u64> = (0..=x).step_by(CHUNK as usize).collect();
    cuts.extend(&marks);
    cuts.sort_unstable();
    cuts.dedup();

    let partials: Vec<CompensatedSum> = cuts
        .par_windows(2)
        .map(|w| {
            let mut scratch = Vec::new();
            ((w[0] + 1)..=w[1])
                .map(|m| abs_s_sieved(m as u32, k, &sieve, &angles, &mut scratch))
                .collect()
        })
        .collect();

    let mut total = CompensatedSum::default();
    let mut decades = Vec::with_capacity(marks.len());
    let mut next_mark = marks.iter().peekable();
    for (w, part) in cuts.windows(2).zip(partials) {
        total.merge(part);
        if next_mark.peek() == Some(&&w[1]) {
            decades.push((w[1], total.value() / w[1] as f64));
            next_mark.next();
        }
    }

    Ok(AngleStatistics {
        x,
        k,
        mean_abs_s: total.value() / x as f64,
        identically_zero: false,
        decades,
    })
}

/// Sum over primes p <= x with p = 1 mod 4 of |cos(k theta_p)| / p.
pub fn prime_angle_sum(x: u64, k: i64) -> Result<f64> {
    if k % 4 != 0 {
        return invalid(format!("prime_angle_sum needs 4 | k, got k = {k}"));
    }
    let s: CompensatedSum = primes_up_to(x)
        .into_iter()
        .filter(|p| p % 4 == 1)
        .map(|p| {
            let rep = two_squares_prime(p).expect("p is a prime 1 mod 4");
            let theta = (rep.y as f64).atan2(rep.x as f64);
            (k as f64 * theta).cos().abs() / p as f64
        })
        .collect();
    Ok(s.value())
}

/// prod_{p <= x} (1 - 1/p) * log(x) * e^gamma, which tends to 1.
pub fn mertens_check(x: u64) -> Result<f64> {
    if x < 10 {
        return invalid(format!("mertens_check needs x >= 10, got {x}"));
    }
    let log_prod: CompensatedSum = primes_up_to(x)
        .into_iter()
        .map(|p| (-1.0 / p as f64).ln_1p())
        .collect();
    Ok((log_prod.value() + EULER_GAMMA).exp() * (x as f64).ln())
}

/// Star discrepancy of the angles theta_u mod pi/2 (rescaled to [0, 1)) of
/// the points on x^2 + y^2 = n, against the uniform distribution.
pub fn angular_discrepancy(n: u64) -> Result<f64> {
    if n == 0 {
        return invalid("angular_discrepancy needs n >= 1");
    }
    let circle = circle_points(n);
    if circle.is_empty() {
        return invalid(format!("x^2 + y^2 = {n} has no integer points"));
    }
    let mut folded: Vec<f64> = circle
        .points
        .iter()
        .map(|&p| {
            let (x, y) = rotate_into_first_quadrant(p);
            (y as f64).atan2(x as f64) / FRAC_PI_2
        })
        .collect();
    folded.sort_by(f64::total_cmp);
    Ok(star_discrepancy(&folded))
}

/// Unit multiple of (x, y) with x > 0, y >= 0.
fn rotate_into_first_quadrant((mut x, mut y): (i64, i64)) -> (i64, i64) {
    while !(x > 0 && y >= 0) {
        (x, y) = (-y, x);
    }
    (x, y)
}

/// D* of sorted samples in [0, 1).
pub(crate) fn star_discrepancy(sorted: &[f64]) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let i = i as f64;
            ((i + 1.0) / n - x).max(x - i / n)
        })
        .fold(0.0, f64::max)
}

/// Number of n <= x with r2(n) > 0.
pub fn landau_count(x: u64) -> Result<u64> {
    if x < 2 {
        return invalid(format!("landau_count needs x >= 2, got {x}"));
    }
    const BLOCK: u64 = 1 << 22;
    let mut count = 0;
    let mut lo = 1;
    while lo <= x {
        let hi = (lo + BLOCK).min(x + 1);
        count += r2_range(lo, hi).iter().filter(|&&r| r > 0).count() as u64;
        lo = hi;
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circles::{exp_sum_direct, r2};

    #[test]
    fn avg_matches_direct_summation() {
        let stats = avg_abs_s(1000, 4).unwrap();
        let direct: f64 = (1..=1000u64)
            .map(|m| exp_sum_direct(m, 4).value.norm())
            .sum::<f64>()
            / 1000.0;
        assert!((stats.mean_abs_s - direct).abs() < 1e-10 * direct);
        assert!(stats.mean_abs_s > 0.0);
        assert_eq!(stats.decades.len(), 2);
        assert_eq!(stats.decades[1], (1000, stats.mean_abs_s));
        let direct100: f64 = (1..=100u64)
            .map(|m| exp_sum_direct(m, 4).value.norm())
            .sum::<f64>()
            / 100.0;
        assert!((stats.decades[0].1 - direct100).abs() < 1e-10);
    }

    #[test]
    fn avg_flags_vanishing_frequency() {
        let stats = avg_abs_s(10_000, 2).unwrap();
        assert!(stats.identically_zero);
        assert_eq!(stats.mean_abs_s, 0.0);
        assert!(avg_abs_s(99, 4).is_err());
        assert!(avg_abs_s(1000, 0).is_err());
    }

    #[test]
    fn prime_angle_sum_small() {
        // only p = 5 contributes; cos(4 theta_5) = -7/25
        let s = prime_angle_sum(10, 4).unwrap();
        assert!((s - 7.0 / 125.0).abs() < 1e-15);
        let direct: f64 = [5u64, 13, 17, 29, 37, 41, 53, 61, 73, 89, 97]
            .iter()
            .map(|&p| {
                let (mut x, mut y) = (0i64, 0i64);
                'search: for a in 1..10i64 {
                    for b in 1..a {
                        if (a * a + b * b) as u64 == p {
                            (x, y) = (a, b);
                            break 'search;
                        }
                    }
                }
                (4.0 * (y as f64).atan2(x as f64)).cos().abs() / p as f64
            })
            .sum();
        assert!((prime_angle_sum(100, 4).unwrap() - direct).abs() < 1e-14);
        assert!(prime_angle_sum(100, 2).is_err());
    }

    #[test]
    fn mertens_ratios() {
        let r3 = mertens_check(1000).unwrap();
        assert!((r3 - 1.0).abs() < 0.15, "{r3}");
        let r6 = mertens_check(1_000_000).unwrap();
        assert!((r6 - 1.0).abs() < 0.05, "{r6}");
        assert!(mertens_check(10).unwrap().is_finite());
        assert!(mertens_check(9).is_err());
    }

    #[test]
    fn discrepancy_examples() {
        // four points that all fold to 0
        assert_eq!(angular_discrepancy(1).unwrap(), 1.0);

        // folded angles {t, 1 - t} (each four times), t = theta_5 / (pi/2)
        let t = 0.5f64.atan() / FRAC_PI_2;
        let sorted = [t, 1.0 - t];
        let mut sup: f64 = 0.0;
        // sup over a in [0, 1) of |F_N(a) - a|, evaluated just before and at each sample
        for (i, &s) in sorted.iter().enumerate() {
            sup = sup.max((s - i as f64 / 2.0).abs());
            sup = sup.max(((i + 1) as f64 / 2.0 - s).abs());
        }
        assert!((angular_discrepancy(5).unwrap() - sup).abs() < 1e-15);

        let wide = angular_discrepancy(243_061_325).unwrap();
        assert!(wide < 0.1, "{wide}");
        assert!(angular_discrepancy(3).is_err());
    }

    #[test]
    fn landau_small() {
        let brute = |x: u64| (1..=x).filter(|&n| r2(n) > 0).count() as u64;
        assert_eq!(landau_count(10).unwrap(), brute(10));
        assert_eq!(landau_count(10).unwrap(), 7);
        assert_eq!(landau_count(2).unwrap(), 2);
        assert_eq!(landau_count(20_000).unwrap(), brute(20_000));
        assert!(landau_count(1).is_err());
    }
}
