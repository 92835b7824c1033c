use std::f64::consts::TAU;

use expsum::apsums::{ap_sum, ProgressionSpec};
use expsum::expsums::{gauss_sum, kloosterman, kloosterman_fast, t_sum_fast};
use num_complex::Complex64;
use proptest::prelude::*;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn e(num: i128, den: u64) -> Complex64 {
    let r = num.rem_euclid(den as i128) as f64 / den as f64;
    Complex64::from_polar(1.0, TAU * r)
}

fn brute_kloosterman(m: i64, n: i64, c: u64) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    for d in 0..c {
        if gcd(d, c) != 1 {
            continue;
        }
        let dbar = (0..c).find(|&x| (d as u128 * x as u128) % c as u128 == 1 % c as u128).unwrap();
        total += e(m as i128 * dbar as i128 + n as i128 * d as i128, c);
    }
    total
}

fn mobius(mut n: u64) -> i64 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        -sign
    } else {
        sign
    }
}

#[test]
fn kloosterman_matches_brute_force() {
    for c in 1..=60 {
        for m in -4..=4 {
            for n in -4..=4 {
                let want = brute_kloosterman(m, n, c);
                for got in [kloosterman(m, n, c).value, kloosterman_fast(m, n, c).value] {
                    assert!((got - want).norm() <= 1e-9 * c as f64, "S({m},{n};{c})");
                }
            }
        }
    }
}

#[test]
fn ramanujan_sums() {
    for c in 1..=200u64 {
        for m in 1..=12i64 {
            let want: i64 = (1..=c).filter(|d| c % d == 0 && m as u64 % d == 0).map(|d| d as i64 * mobius(c / d)).sum();
            let got = kloosterman_fast(m, 0, c).value;
            assert!((got.re - want as f64).abs() < 1e-9 && got.im.abs() < 1e-9, "c={c} m={m}");
        }
    }
}

#[test]
fn selberg_identity() {
    for c in 1..=120u64 {
        for (m, n) in [(2, 4), (6, 3), (4, 12), (9, 6)] {
            let g = gcd(gcd(m, n), c);
            let rhs: Complex64 = (1..=g)
                .filter(|d| g % d == 0)
                .map(|d| d as f64 * kloosterman_fast((m * n / (d * d)) as i64, 1, c / d).value)
                .sum();
            let lhs = kloosterman_fast(m as i64, n as i64, c).value;
            assert!((lhs - rhs).norm() < 1e-8 * c as f64, "m={m} n={n} c={c}");
        }
    }
}

#[test]
fn gauss_sum_modulus_at_odd_primes() {
    for p in [3u64, 5, 7, 11, 13, 101, 997] {
        for a in 1..p.min(20) {
            let g = gauss_sum(a as i64, 0, p).value;
            assert!((g.norm_sqr() - p as f64).abs() < 1e-8 * p as f64);
        }
    }
}

#[test]
fn restricted_sum_with_trivial_modulus_is_kloosterman() {
    for c in 1..=80 {
        for (m, n) in [(1, 1), (-2, 3), (5, -1)] {
            let t = t_sum_fast(m, n, 1, c, 1).unwrap().value;
            assert!((t - brute_kloosterman(m, n, c)).norm() < 1e-9 * c as f64);
        }
    }
}

#[test]
fn full_progression_is_plain_partial_sum() {
    let prog = ProgressionSpec::new(1, 1, 1).unwrap();
    let want: f64 = (1..=300u64).map(|c| brute_kloosterman(2, 3, c).re / c as f64).sum();
    let got = ap_sum(2, 3, &prog, 300.0).unwrap();
    assert!((got.re - want).abs() < 1e-9 && got.im.abs() < 1e-9);
}

proptest! {
    #[test]
    fn kloosterman_is_real_and_symmetric(m in -50i64..50, n in -50i64..50, c in 1u64..5000) {
        let s = kloosterman_fast(m, n, c).value;
        prop_assert!(s.im.abs() < 1e-9 * c as f64);
        prop_assert!((s - kloosterman_fast(n, m, c).value).norm() < 1e-9 * c as f64);
        prop_assert!((s - kloosterman_fast(-m, -n, c).value).norm() < 1e-9 * c as f64);
    }

    #[test]
    fn kloosterman_unit_twist(m in -30i64..30, n in -30i64..30, c in 2u64..400, u in 1u64..400) {
        prop_assume!(gcd(u % c, c) == 1);
        let a = kloosterman_fast(m * u as i64, n, c).value;
        let b = kloosterman_fast(m, n * u as i64, c).value;
        prop_assert!((a - b).norm() < 1e-9 * c as f64);
    }
}
