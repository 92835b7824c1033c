//! Exact integer arithmetic: gcd, inverses, CRT, factorization and the
//! arithmetic functions tau, phi and mu.
//!
//! Every modular product goes through a 128-bit intermediate, so moduli up to
//! `2^63` are safe.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Upper limit for trial division before switching to Pollard rho.
const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

/// `divisors` refuses to materialize more than this many divisors.
pub const MAX_DIVISORS: u64 = 1_000_000;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// gcd of absolute values; `gcd_i64(0, 0) == 0`.
pub fn gcd_i64(a: i64, b: i64) -> u64 {
    gcd(a.unsigned_abs(), b.unsigned_abs())
}

/// gcd(m, n, c) with signed m, n, as it appears in the Weil bound.
pub fn gcd3(m: i64, n: i64, c: u64) -> u64 {
    gcd(gcd(m.unsigned_abs(), n.unsigned_abs()), c)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// Least non-negative residue of `a` modulo `n`.
#[inline]
pub fn residue(a: i64, n: u64) -> u64 {
    debug_assert!(n > 0);
    (a as i128).rem_euclid(n as i128) as u64
}

#[inline]
pub fn residue_i128(a: i128, n: u64) -> u64 {
    a.rem_euclid(n as i128) as u64
}

#[inline]
pub fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    if n <= u32::MAX as u64 {
        (a % n) * (b % n) % n
    } else {
        ((a as u128 * b as u128) % n as u128) as u64
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, n);
        }
        base = mul_mod(base, base, n);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `n`, in `[0, n)`. For `n = 1` the result is 0.
pub fn mod_inverse(a: i64, n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Precondition("modulus must be positive".into()));
    }
    inverse_of_residue(residue(a, n), n).ok_or(Error::NotInvertible { a, n })
}

/// Inverse of a residue already reduced into `[0, n)`.
pub(crate) fn inverse_of_residue(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128, n as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(n as i128) as u64)
}

/// Combine `x = r_i (mod m_i)` for pairwise coprime moduli.
pub fn crt_combine(residues: &[(i64, u64)]) -> Result<u64> {
    for (i, &(_, mi)) in residues.iter().enumerate() {
        if mi == 0 {
            return Err(Error::Precondition("CRT modulus must be positive".into()));
        }
        for &(_, mj) in &residues[i + 1..] {
            if gcd(mi, mj) != 1 {
                return Err(Error::NonCoprimeModuli(mi, mj));
            }
        }
    }
    let mut x = 0u128;
    let mut modulus = 1u128;
    for &(r, m) in residues {
        let next = modulus * m as u128;
        if next > u64::MAX as u128 {
            return Err(Error::Precondition("combined CRT modulus exceeds 64 bits".into()));
        }
        // x + modulus * t = r (mod m)
        let target = residue(r, m) as u128;
        let cur = x % m as u128;
        let diff = (target + m as u128 - cur) % m as u128;
        let inv = inverse_of_residue((modulus % m as u128) as u64, m).expect("coprimality checked above");
        let t = (diff * inv as u128) % m as u128;
        x += modulus * t;
        modulus = next;
    }
    Ok(x as u64)
}

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let limit = TRIAL_DIVISION_LIMIT as usize;
        let mut composite = vec![false; limit + 1];
        let mut primes = Vec::new();
        for i in 2..=limit {
            if !composite[i] {
                primes.push(i as u64);
                let mut j = i * i;
                while j <= limit {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        primes
    })
}

/// Deterministic Miller-Rabin; the first twelve primes as witnesses cover all of `u64`.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// Brent's cycle detection with batched gcds. `n` must be odd and composite.
fn pollard_rho(n: u64) -> u64 {
    let mut seed = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + seed) % n;
        let (mut x, mut y, mut ys) = (2u64, 2u64, 2u64);
        let mut q = 1u64;
        let mut g = 1u64;
        let mut r = 1u64;
        const BATCH: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        seed += 1;
    }
}

fn collect_large_factors(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    collect_large_factors(d, out);
    collect_large_factors(n / d, out);
}

/// Prime factorization `value = prod p^e` with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// The prime powers `p^e` exactly dividing the value, in increasing prime order.
    pub fn prime_powers(&self) -> impl Iterator<Item = (u64, u32, u64)> + '_ {
        self.factors.iter().map(|&(p, e)| (p, e, p.pow(e)))
    }

    pub fn euler_phi(&self) -> u64 {
        self.factors.iter().map(|&(p, e)| (p - 1) * p.pow(e - 1)).product()
    }

    pub fn tau(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64 + 1).product()
    }

    pub fn moebius(&self) -> i8 {
        if self.factors.iter().any(|&(_, e)| e > 1) {
            0
        } else if self.factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn divisors(&self) -> Result<Vec<u64>> {
        let count = self.tau();
        if count > MAX_DIVISORS {
            return Err(Error::TooManyDivisors { value: self.value, count, cap: MAX_DIVISORS });
        }
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        Ok(divs)
    }
}

pub fn factorize(n: u64) -> Factorization {
    assert!(n >= 1, "factorize needs a positive integer");
    let mut rest = n;
    let mut factors = Vec::new();
    let mut checked_prime = false;
    for &p in small_primes() {
        if p * p > rest {
            break;
        }
        if p > 1000 && !checked_prime {
            // skip the long trial-division tail when the cofactor is already prime
            checked_prime = true;
            if is_prime(rest) {
                break;
            }
        }
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if rest > 1 {
        let mut large = Vec::new();
        collect_large_factors(rest, &mut large);
        large.sort_unstable();
        for p in large {
            match factors.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => factors.push((p, 1)),
            }
        }
    }
    Factorization { value: n, factors }
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n).euler_phi()
}

pub fn tau(n: u64) -> u64 {
    factorize(n).tau()
}

pub fn moebius(n: u64) -> i8 {
    factorize(n).moebius()
}

pub fn divisors(n: u64) -> Result<Vec<u64>> {
    factorize(n).divisors()
}

/// p-adic valuation, with `v_p(0)` reported as `cap`.
pub fn valuation(n: u64, p: u64, cap: u32) -> u32 {
    if n == 0 {
        return cap;
    }
    let mut v = 0;
    let mut n = n;
    while n % p == 0 && v < cap {
        n /= p;
        v += 1;
    }
    v
}

/// All pairs `(a, a^-1 mod c)` with `a` a unit, in increasing `a`.
///
/// Uses batched inversion: one extended gcd plus three multiplications per unit.
pub fn unit_inverse_pairs(c: u64) -> Vec<(u64, u64)> {
    assert!(c >= 1);
    if c == 1 {
        return vec![(0, 0)];
    }
    let units: Vec<u64> = (1..c).filter(|&a| gcd(a, c) == 1).collect();
    let mut prefix = Vec::with_capacity(units.len());
    let mut acc = 1u64;
    for &u in &units {
        acc = mul_mod(acc, u, c);
        prefix.push(acc);
    }
    let mut inv = inverse_of_residue(acc, c).expect("product of units is a unit");
    let mut pairs = vec![(0, 0); units.len()];
    for i in (0..units.len()).rev() {
        let before = if i == 0 { 1 } else { prefix[i - 1] };
        pairs[i] = (units[i], mul_mod(inv, before, c));
        inv = mul_mod(inv, units[i], c);
    }
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_examples() {
        assert_eq!(mod_inverse(3, 5).unwrap(), 2);
        assert_eq!(mod_inverse(1, 1).unwrap(), 0);
        let brute = (0..40).find(|&d| 7 * d % 40 == 1).unwrap();
        assert_eq!(brute, 23);
        assert_eq!(mod_inverse(7, 40).unwrap(), brute);
        assert_eq!(mod_inverse(-3, 5).unwrap(), 3);
    }

    #[test]
    fn inverse_requires_coprime() {
        assert_eq!(mod_inverse(4, 6), Err(Error::NotInvertible { a: 4, n: 6 }));
        assert!(mod_inverse(0, 7).is_err());
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(12).factors(), &[(2, 2), (3, 1)]);
        assert!(factorize(1).factors().is_empty());
        assert_eq!(factorize(9_999_999_967).factors(), &[(9_999_999_967, 1)]);
        // semiprime with both factors above the trial-division limit
        let p = 1_000_003u64;
        let q = 1_000_033u64;
        assert_eq!(factorize(p * q).factors(), &[(p, 1), (q, 1)]);
        assert_eq!(factorize(p * p).factors(), &[(p, 2)]);
        let big = 18_446_744_073_709_551_557u64; // largest prime below 2^64
        assert_eq!(factorize(big).factors(), &[(big, 1)]);
    }

    #[test]
    fn arithmetic_function_examples() {
        assert_eq!(euler_phi(12), 4);
        assert_eq!(tau(12), 6);
        assert_eq!(moebius(30), -1);
        assert_eq!(moebius(1), 1);
        assert_eq!(moebius(12), 0);
        assert_eq!(divisors(12).unwrap(), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1).unwrap(), vec![1]);
    }

    #[test]
    fn crt_examples() {
        assert_eq!(crt_combine(&[(1, 2), (2, 3)]).unwrap(), 5);
        assert_eq!(crt_combine(&[(0, 1)]).unwrap(), 0);
        let brute = (0..315u64).find(|x| x % 5 == 3 && x % 7 == 4 && x % 9 == 1).unwrap();
        assert_eq!(crt_combine(&[(3, 5), (4, 7), (1, 9)]).unwrap(), brute);
        assert_eq!(crt_combine(&[(1, 4), (1, 6)]), Err(Error::NonCoprimeModuli(4, 6)));
        assert_eq!(crt_combine(&[(-1, 7)]).unwrap(), 6);
    }

    #[test]
    fn primality_small_range_matches_trial_division() {
        for n in 0..5000u64 {
            let brute = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime(n), brute, "n = {n}");
        }
        // strong pseudoprimes to several small bases
        assert!(!is_prime(3_215_031_751));
        assert!(!is_prime(3_825_123_056_546_413_051));
    }

    #[test]
    fn unit_inverse_pairs_are_inverses() {
        for c in 1..300u64 {
            let pairs = unit_inverse_pairs(c);
            assert_eq!(pairs.len() as u64, euler_phi(c));
            for (a, d) in pairs {
                assert_eq!(mul_mod(a, d, c), 1 % c);
            }
        }
    }

    #[test]
    fn valuation_caps_zero() {
        assert_eq!(valuation(0, 3, 5), 5);
        assert_eq!(valuation(72, 2, 10), 3);
        assert_eq!(valuation(72, 2, 2), 2);
    }
}
