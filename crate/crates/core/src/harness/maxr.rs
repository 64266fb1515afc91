use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::numtheory::primes_up_to;

/// Largest radius accepted by [`max_r_search`].
pub const MAX_R_BOUND: f64 = 20_000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxR {
    /// Smallest n <= bound^2 attaining the maximum.
    pub n: u64,
    pub r2: u64,
}

/// Largest n with n <= bound^2, robust to bound^2 landing just below an integer.
pub(crate) fn radius_limit(bound: f64) -> u64 {
    (bound * bound * (1.0 + 1e-12)).floor() as u64
}

/// Maximizes r2(n) = 4 prod (alpha_p + 1) over 1 <= n <= bound^2.
///
/// Only p = 1 mod 4 change r2, and for fixed exponents the product is
/// smallest when the exponents are non-increasing along 5, 13, 17, 29, ...
/// The search enumerates exactly those n, so it also returns the smallest
/// witness.
pub fn max_r_search(bound: f64) -> Result<MaxR> {
    if !(bound.is_finite() && bound >= 1.0) {
        return invalid(format!("radius bound must be at least 1, got {bound}"));
    }
    if bound > MAX_R_BOUND {
        return invalid(format!(
            "radius bound is limited to {MAX_R_BOUND}, got {bound}"
        ));
    }
    let limit = radius_limit(bound);
    // the product of the first k primes 1 mod 4 exceeds 4e8 well before 100
    let primes: Vec<u64> = primes_up_to(1000)
        .into_iter()
        .filter(|p| p % 4 == 1)
        .collect();
    let mut best = MaxR { n: 1, r2: 4 };
    dfs(&primes, 0, 1, 1, u32::MAX, limit, &mut best);
    Ok(best)
}

fn dfs(primes: &[u64], i: usize, n: u64, quarter: u64, max_exp: u32, limit: u64, best: &mut MaxR) {
    let r = 4 * quarter;
    if r > best.r2 || (r == best.r2 && n < best.n) {
        *best = MaxR { n, r2: r };
    }
    let Some(&p) = primes.get(i) else { return };
    let mut m = n;
    for e in 1..=max_exp {
        m = match m.checked_mul(p) {
            Some(m) if m <= limit => m,
            _ => break,
        };
        dfs(primes, i + 1, m, quarter * (e as u64 + 1), e, limit, best);
    }
}

/// The same maximum by scanning every n <= bound^2.
pub fn max_r_exhaustive(bound: f64) -> Result<MaxR> {
    if !(bound.is_finite() && bound >= 1.0) {
        return invalid(format!("radius bound must be at least 1, got {bound}"));
    }
    let limit = radius_limit(bound);
    if limit > 100_000_000 {
        return invalid(format!(
            "exhaustive scan limited to bound^2 <= 1e8, got {limit}"
        ));
    }
    let r2 = crate::numtheory::r2_range(1, limit + 1);
    let mut best = MaxR { n: 1, r2: 4 };
    for (i, &r) in r2.iter().enumerate() {
        if r as u64 > best.r2 {
            best = MaxR {
                n: i as u64 + 1,
                r2: r as u64,
            };
        }
    }
    Ok(best)
}
