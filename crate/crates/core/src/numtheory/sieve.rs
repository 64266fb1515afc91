//! Sieves: plain Eratosthenes, smallest-prime-factor tables, and a segmented
//! sieve for r2(n) over arbitrary ranges.

use rayon::prelude::*;

/// All primes `<= limit`.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Smallest-prime-factor table on `0..=limit`.
pub struct SpfSieve {
    spf: Vec<u32>,
}

impl SpfSieve {
    pub fn new(limit: u32) -> Self {
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                let mut j = i * i;
                while j <= n {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        Self { spf }
    }

    pub fn limit(&self) -> u32 {
        (self.spf.len() - 1) as u32
    }

    /// Prime factorization of `n` as (p, alpha), ascending. Requires 1 <= n <= limit.
    pub fn factor(&self, mut n: u32, out: &mut Vec<(u32, u32)>) {
        out.clear();
        while n > 1 {
            let p = self.spf[n as usize];
            let mut a = 0;
            while n.is_multiple_of(p) {
                n /= p;
                a += 1;
            }
            out.push((p, a));
        }
    }

    pub fn is_prime(&self, n: u32) -> bool {
        n >= 2 && self.spf[n as usize] == n
    }
}

const SEGMENT: u64 = 1 << 18;

/// r2(n) for every n in `lo..hi`, by sieving each segment with the primes up
/// to sqrt(hi). r2(0) is reported as 1 (the origin).
pub fn r2_range(lo: u64, hi: u64) -> Vec<u32> {
    if hi <= lo {
        return Vec::new();
    }
    let primes = primes_up_to((hi - 1).isqrt());
    let starts: Vec<u64> = (lo..hi).step_by(SEGMENT as usize).collect();
    let parts: Vec<Vec<u32>> = starts
        .par_iter()
        .map(|&s| r2_segment(s, (s + SEGMENT).min(hi), &primes))
        .collect();
    parts.concat()
}

fn r2_segment(lo: u64, hi: u64, primes: &[u64]) -> Vec<u32> {
    let len = (hi - lo) as usize;
    let mut rest: Vec<u64> = (lo..hi).collect();
    // r2(n)/4 accumulated multiplicatively; 0 marks "not a sum of two squares"
    let mut quarter = vec![1u32; len];

    for &p in primes {
        let first = lo.div_ceil(p) * p;
        let mut idx = (first - lo) as usize;
        let class = p % 4;
        while idx < len {
            let mut m = rest[idx];
            if m != 0 {
                let mut a = 0u32;
                while m.is_multiple_of(p) {
                    m /= p;
                    a += 1;
                }
                rest[idx] = m;
                match class {
                    1 => quarter[idx] *= a + 1,
                    3 if a % 2 == 1 => quarter[idx] = 0,
                    _ => {}
                }
            }
            idx += p as usize;
        }
    }

    let mut out = vec![0u32; len];
    for i in 0..len {
        let n = lo + i as u64;
        out[i] = if n == 0 {
            1
        } else {
            // what is left is 1 or a single prime above sqrt(hi)
            let q = quarter[i]
                * match rest[i] % 4 {
                    1 if rest[i] > 1 => 2,
                    3 => 0,
                    _ => 1,
                };
            4 * q
        };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r2_brute(n: u64) -> u32 {
        let r = n.isqrt() as i64;
        let mut c = 0;
        for x in -r..=r {
            let rest = n as i64 - x * x;
            let y = (rest as u64).isqrt() as i64;
            if y * y == rest {
                c += if y == 0 { 1 } else { 2 };
            }
        }
        c
    }

    #[test]
    fn primes_small() {
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(primes_up_to(1).is_empty());
    }

    #[test]
    fn spf_factors() {
        let s = SpfSieve::new(1000);
        let mut out = Vec::new();
        s.factor(360, &mut out);
        assert_eq!(out, vec![(2, 3), (3, 2), (5, 1)]);
        s.factor(1, &mut out);
        assert!(out.is_empty());
        assert!(s.is_prime(997));
        assert!(!s.is_prime(999));
    }

    #[test]
    fn r2_range_matches_brute_force() {
        let v = r2_range(0, 5000);
        for (n, &r) in v.iter().enumerate() {
            assert_eq!(r, r2_brute(n as u64), "n = {n}");
        }
        // an offset window crossing segment boundaries
        let lo = 1_000_000 - 7;
        let v = r2_range(lo, lo + 600_000);
        for (i, &r) in v.iter().enumerate().step_by(997) {
            assert_eq!(r, r2_brute(lo + i as u64));
        }
    }
}
