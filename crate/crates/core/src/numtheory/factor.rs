//! Integer factorization: trial division, then Pollard rho with Brent's cycle detection.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::primality::{is_prime, mul_mod};

const TRIAL_BOUND: u64 = 1 << 10;

/// Residue class of a prime modulo 4, which decides how it splits in Z[i].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ResidueClass {
    /// p = 2, ramified as -i(1+i)^2.
    Two,
    /// p = 1 mod 4, splits as (x+iy)(x-iy).
    OneMod4,
    /// p = 3 mod 4, stays prime.
    ThreeMod4,
}

impl ResidueClass {
    pub fn of(p: u64) -> Self {
        match p % 4 {
            1 => ResidueClass::OneMod4,
            3 => ResidueClass::ThreeMod4,
            _ => ResidueClass::Two,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimePower {
    pub p: u64,
    pub alpha: u32,
    pub residue_class: ResidueClass,
}

impl PrimePower {
    pub fn new(p: u64, alpha: u32) -> Self {
        Self {
            p,
            alpha,
            residue_class: ResidueClass::of(p),
        }
    }
}

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| super::primes_up_to(TRIAL_BOUND))
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Brent's variant of Pollard rho on x -> x^2 + c. Returns a nontrivial
/// factor of the odd composite `n`, or `None` when this `c` fails.
fn brent(n: u64, c: u64) -> Option<u64> {
    const BATCH: u64 = 128;
    let f = |x: u64| (mul_mod(x, x, n) + c) % n;

    let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
    let (mut x, mut ys);
    let mut g;
    loop {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        loop {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd(q, n);
            k += BATCH;
            if k >= r || g != 1 {
                break;
            }
        }
        r *= 2;
        if g != 1 || r > 1 << 40 {
            break;
        }
    }
    if g == n {
        // the batch overshot; redo it one step at a time
        loop {
            ys = f(ys);
            g = gcd(x.abs_diff(ys), n);
            if g != 1 {
                break;
            }
        }
    }
    (g != n && g != 1).then_some(g)
}

fn split(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let r = n.isqrt();
    if r * r == n {
        split(r, out);
        split(r, out);
        return;
    }
    let d = (1..)
        .find_map(|c| brent(n, c))
        .expect("pollard rho finds a factor of every odd composite");
    split(d, out);
    split(n / d, out);
}

/// Prime factorization of `n`, sorted ascending by prime. `factorize(1)` is empty.
///
/// Deterministic: the rho seeds are tried in the fixed order c = 1, 2, 3, ...
pub fn factorize(n: u64) -> Vec<PrimePower> {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut primes = Vec::new();
    let mut rest = n;
    for &p in small_primes() {
        if p * p > rest {
            break;
        }
        while rest.is_multiple_of(p) {
            primes.push(p);
            rest /= p;
        }
    }
    if rest > 1 {
        if rest < TRIAL_BOUND * TRIAL_BOUND {
            primes.push(rest);
        } else {
            split(rest, &mut primes);
        }
    }
    primes.sort_unstable();

    let mut out: Vec<PrimePower> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some(last) if last.p == p => last.alpha += 1,
            _ => out.push(PrimePower::new(p, 1)),
        }
    }
    out
}
