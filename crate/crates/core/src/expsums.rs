//! Classical Kloosterman sums, quadratic Gauss sums and the restricted sums
//! `T_f(m, n; q | c)`, with their fast evaluations and bound margins.
//!
//! The fast paths split the modulus into prime powers and combine local sums
//! with twisted multiplicativity:
//!
//! ```text
//! T_f(m, n; q | c) = prod_i T_f(m u_i, n u_i; (q, p_i^a_i) | p_i^a_i),
//! ```
//!
//! where `u_i` is the inverse of `c / p_i^a_i` modulo `p_i^a_i`. With `q = 1`
//! this is the classical factorization of `S(m, n; c)`.

use std::f64::consts::SQRT_2;

use num_complex::Complex64;

use crate::error::{precondition, Result};
use crate::modular::{factorize, gcd, gcd3, inverse_of_residue, mul_mod, residue, tau, unit_inverse_pairs, valuation};
use crate::roots::{cos_turns, CompensatedSum, RootOfUnitySum, UnitSum};

/// `S(m, n; c) = sum_{ad = 1 (c)} e((am + dn)/c)` by direct enumeration.
pub fn kloosterman(m: i64, n: i64, c: u64) -> RootOfUnitySum {
    assert!(c >= 1, "modulus must be positive");
    let (mm, nn) = (residue(m, c), residue(n, c));
    let mut sum = UnitSum::new();
    for (a, d) in unit_inverse_pairs(c) {
        let t = (mul_mod(a, mm, c) + mul_mod(d, nn, c)) % c;
        sum.push_turns(t as i128, c);
    }
    sum.finish()
}

/// `S(m, n; c)` via the prime-power factorization of `c`.
pub fn kloosterman_fast(m: i64, n: i64, c: u64) -> RootOfUnitySum {
    assert!(c >= 1, "modulus must be positive");
    let fac = factorize(c);
    let mut value = 1.0f64;
    for (p, _, pe) in fac.prime_powers() {
        let u = inverse_of_residue((c / pe) % pe, pe).expect("cofactor is coprime");
        let mm = mul_mod(residue(m, pe), u, pe);
        let nn = mul_mod(residue(n, pe), u, pe);
        value *= local_kloosterman(mm, nn, p, pe);
        if value == 0.0 {
            break;
        }
    }
    RootOfUnitySum::new(Complex64::new(value, 0.0), fac.euler_phi())
}

/// `S(m, n; p^e)` for residues `m, n`. The sum is real; terms for `a` and `-a`
/// are conjugate, so only `a < p^e / 2` is visited.
fn local_kloosterman(m: u64, n: u64, p: u64, pe: u64) -> f64 {
    if pe == 1 {
        return 1.0;
    }
    if pe == 2 {
        return if (m + n) % 2 == 0 { 1.0 } else { -1.0 };
    }
    if pe == p && p <= u32::MAX as u64 {
        return prime_kloosterman(m, n, p);
    }
    let mut acc = CompensatedSum::new();
    if pe == p {
        let inv = prime_inverse_table(p);
        for a in 1..=(p - 1) / 2 {
            let t = (mul_mod(a, m, p) + mul_mod(inv[a as usize], n, p)) % p;
            acc.add(cos_turns(t as i128, p));
        }
    } else {
        for (a, d) in unit_inverse_pairs(pe).into_iter().take_while(|&(a, _)| 2 * a < pe) {
            let t = (mul_mod(a, m, pe) + mul_mod(d, n, pe)) % pe;
            acc.add(cos_turns(t as i128, pe));
        }
    }
    2.0 * acc.value()
}

/// `S(m, n; p)` for an odd prime `p < 2^32` and residues `m, n`, as
/// `S(1, mn; p)` when `p` does not divide `m`. The table holds `k a^-1` for
/// `k = mn`, built with the same recurrence as [`prime_inverse_table`].
fn prime_kloosterman(m: u64, n: u64, p: u64) -> f64 {
    if m == 0 || n == 0 {
        // Ramanujan sum c_p(m + n)
        return if (m + n) % p == 0 { (p - 1) as f64 } else { -1.0 };
    }
    let k = m * n % p;
    let half = (p - 1) / 2;
    let mut kinv = vec![0u64; half as usize + 1];
    kinv[1] = k;
    let mut acc = CompensatedSum::new();
    acc.add(cos_turns(((1 + k) % p) as i128, p));
    for a in 2..=half {
        let (q, r) = (p / a, p % a);
        let v = (p - q * kinv[r as usize] % p) % p;
        kinv[a as usize] = v;
        let t = a + v;
        acc.add(cos_turns((if t >= p { t - p } else { t }) as i128, p));
    }
    2.0 * acc.value()
}

/// Inverses of `1..p` modulo a prime `p`, via `inv(i) = -(p/i) inv(p mod i)`.
fn prime_inverse_table(p: u64) -> Vec<u64> {
    let mut inv = vec![0u64; p as usize];
    if p > 1 {
        inv[1] = 1;
    }
    for i in 2..p {
        let q = p / i;
        inv[i as usize] = (p - mul_mod(q, inv[(p % i) as usize], p)) % p;
    }
    inv
}

/// `G(a, b; c) = sum_{n mod c} e((a n^2 + b n)/c)`.
pub fn gauss_sum(a: i64, b: i64, c: u64) -> RootOfUnitySum {
    assert!(c >= 1, "modulus must be positive");
    let (aa, bb) = (residue(a, c), residue(b, c));
    let mut sum = UnitSum::new();
    for x in 0..c {
        let t = (mul_mod(aa, mul_mod(x, x, c), c) + mul_mod(bb, x, c)) % c;
        sum.push_turns(t as i128, c);
    }
    sum.finish()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaussReduction {
    /// `(a, c)` does not divide `b`; the sum is zero.
    Vanishes,
    /// `G(a, b; c) = scale * G(a', b'; c')` with `(a', c') = 1`.
    Reduced { scale: u64, a: i64, b: i64, c: u64 },
}

pub fn gauss_reduce(a: i64, b: i64, c: u64) -> GaussReduction {
    assert!(c >= 1, "modulus must be positive");
    let g = gcd(a.unsigned_abs(), c);
    if b.unsigned_abs() % g != 0 {
        return GaussReduction::Vanishes;
    }
    GaussReduction::Reduced { scale: g, a: a / g as i64, b: b / g as i64, c: c / g }
}

/// `(a, c)^{1/2} c^{1/2}`, times `sqrt 2` when `c / (a, c)` is even.
pub fn gauss_bound(a: i64, c: u64) -> f64 {
    let g = gcd(a.unsigned_abs(), c);
    let base = (g as f64).sqrt() * (c as f64).sqrt();
    if (c / g) % 2 == 0 {
        base * SQRT_2
    } else {
        base
    }
}

fn check_t_args(q: u64, c: u64, f: i64) -> Result<()> {
    if q == 0 || c == 0 {
        return Err(precondition("q and c must be positive"));
    }
    if c % q != 0 {
        return Err(precondition(format!("q = {q} does not divide c = {c}")));
    }
    if gcd(residue(f, q), q) != 1 {
        return Err(precondition(format!("gcd(f, q) > 1 for f = {f}, q = {q}")));
    }
    Ok(())
}

/// `T_f(m, n; q | c) = sum*_{a mod c, a = f (q)} e((m a + n a^-1)/c)` by direct enumeration.
pub fn t_sum(m: i64, n: i64, q: u64, c: u64, f: i64) -> Result<RootOfUnitySum> {
    check_t_args(q, c, f)?;
    Ok(t_direct(residue(m, c), residue(n, c), q, c, residue(f, q)))
}

/// Direct enumeration of `T` on residues; `q | c`, `f` reduced modulo `q`.
fn t_direct(m: u64, n: u64, q: u64, c: u64, f: u64) -> RootOfUnitySum {
    let units: Vec<u64> = (0..c / q).map(|t| f + q * t).filter(|&a| gcd(a, c) == 1).collect();
    let mut sum = UnitSum::new();
    if c == 1 {
        sum.push_turns(0, 1);
        return sum.finish();
    }
    for (a, d) in units.iter().copied().zip(batch_inverse(&units, c)) {
        let t = (mul_mod(a, m, c) + mul_mod(d, n, c)) % c;
        sum.push_turns(t as i128, c);
    }
    sum.finish()
}

/// Inverses of units modulo `c` with a single extended gcd.
fn batch_inverse(units: &[u64], c: u64) -> Vec<u64> {
    let mut prefix = Vec::with_capacity(units.len());
    let mut acc = 1 % c;
    for &u in units {
        acc = mul_mod(acc, u, c);
        prefix.push(acc);
    }
    let mut inv = inverse_of_residue(acc, c).expect("product of units is a unit");
    let mut out = vec![0; units.len()];
    for i in (0..units.len()).rev() {
        let before = if i == 0 { 1 % c } else { prefix[i - 1] };
        out[i] = mul_mod(inv, before, c);
        inv = mul_mod(inv, units[i], c);
    }
    out
}

/// `T_f(m, n; q | c)` via twisted multiplicativity, gcd pull-out and the
/// closed form for `alpha <= 2 gamma`.
pub fn t_sum_fast(m: i64, n: i64, q: u64, c: u64, f: i64) -> Result<RootOfUnitySum> {
    check_t_args(q, c, f)?;
    let fac = factorize(c);
    let mut value = Complex64::new(1.0, 0.0);
    let mut terms = 1u64;
    for (p, alpha, pe) in fac.prime_powers() {
        let gamma = valuation(q, p, alpha);
        let u = inverse_of_residue((c / pe) % pe, pe).expect("cofactor is coprime");
        let mm = mul_mod(residue(m, pe), u, pe);
        let nn = mul_mod(residue(n, pe), u, pe);
        let local = t_local(mm, nn, p, gamma, alpha, residue(f, p.pow(gamma)));
        value *= local.value;
        terms *= local.term_count;
    }
    Ok(RootOfUnitySum::new(value, terms))
}

/// `T_f(m, n; p^gamma | p^alpha)` for residues `m, n` modulo `p^alpha`.
fn t_local(m: u64, n: u64, p: u64, gamma: u32, alpha: u32, f: u64) -> RootOfUnitySum {
    let pe = p.pow(alpha);
    let terms = if gamma == 0 { (p - 1) * pe / p } else { pe / p.pow(gamma) };
    let delta = valuation(m, p, alpha).min(valuation(n, p, alpha));
    if delta == alpha {
        // every term is e(0)
        return RootOfUnitySum::new(Complex64::new(terms as f64, 0.0), terms);
    }
    let scale = p.pow((alpha - gamma).min(delta));
    let alpha_r = alpha - delta;
    let gamma_r = gamma.min(alpha_r);
    let pd = p.pow(delta);
    let (m_r, n_r) = (m / pd, n / pd);
    let f_r = f % p.pow(gamma_r);
    let reduced = if gamma_r == 0 {
        let pa = p.pow(alpha_r);
        let v = local_kloosterman(m_r, n_r, p, pa);
        RootOfUnitySum::new(Complex64::new(v, 0.0), (p - 1) * pa / p)
    } else {
        match t_closed_form_residues(m_r, n_r, p, gamma_r, alpha_r, f_r) {
            Some(v) => v,
            None => t_direct(m_r, n_r, p.pow(gamma_r), p.pow(alpha_r), f_r),
        }
    };
    RootOfUnitySum::new(reduced.value * scale as f64, terms)
}

fn t_closed_form_residues(m: u64, n: u64, p: u64, gamma: u32, alpha: u32, f: u64) -> Option<RootOfUnitySum> {
    if gamma == 0 || alpha > 2 * gamma {
        return None;
    }
    let pa = p.pow(alpha);
    let pg = p.pow(gamma);
    let terms = pa / pg;
    let f_bar = inverse_of_residue(f % pa, pa)?;
    // p^(alpha - gamma) | f^2 m - n
    let gate = (mul_mod(mul_mod(f, f, terms), m, terms) + terms - n % terms) % terms;
    if gate != 0 {
        return Some(RootOfUnitySum::new(Complex64::new(0.0, 0.0), terms));
    }
    let t = (mul_mod(m, f, pa) + mul_mod(n, f_bar, pa)) % pa;
    let mut one = UnitSum::new();
    one.push_turns(t as i128, pa);
    Some(RootOfUnitySum::new(one.finish().value * terms as f64, terms))
}

/// Closed form `p^(alpha-gamma) e((m f + n f^-1)/p^alpha)` of
/// `T_f(m, n; p^gamma | p^alpha)`, gated on `p^(alpha-gamma) | f^2 m - n`.
///
/// Returns `None` outside the range `1 <= gamma`, `alpha <= 2 gamma`.
pub fn t_sum_closed_form(m: i64, n: i64, p: u64, gamma: u32, alpha: u32, f: i64) -> Result<Option<RootOfUnitySum>> {
    if gamma > alpha {
        return Err(precondition("gamma must not exceed alpha"));
    }
    if gamma == 0 || alpha > 2 * gamma {
        return Ok(None);
    }
    let pa = p.pow(alpha);
    let pg = p.pow(gamma);
    check_t_args(pg, pa, f)?;
    Ok(t_closed_form_residues(residue(m, pa), residue(n, pa), p, gamma, alpha, residue(f, pa)))
}

/// `|S(m, n; c)| / (tau(c) (m, n, c)^{1/2} c^{1/2})`; at most 1 by Weil.
pub fn weil_margin(m: i64, n: i64, c: u64) -> Result<f64> {
    if m == 0 && n == 0 {
        return Err(precondition("weil_margin needs (m, n) != (0, 0)"));
    }
    let s = kloosterman_fast(m, n, c);
    Ok(s.abs() / weil_bound(m, n, c))
}

pub fn weil_bound(m: i64, n: i64, c: u64) -> f64 {
    tau(c) as f64 * (gcd3(m, n, c) as f64).sqrt() * (c as f64).sqrt()
}

/// `2^{3/2} tau(c) min{c/q, (c/q, m, n)^{1/2} c^{1/2}}`.
pub fn t_bound(m: i64, n: i64, q: u64, c: u64) -> f64 {
    let cq = c / q;
    let inner = (cq as f64).min((gcd3(m, n, cq) as f64).sqrt() * (c as f64).sqrt());
    2.0 * SQRT_2 * tau(c) as f64 * inner
}

/// `|T_f(m, n; q | c)|` over [`t_bound`]; at most 1.
pub fn t_margin(m: i64, n: i64, q: u64, c: u64, f: i64) -> Result<f64> {
    let t = t_sum_fast(m, n, q, c, f)?;
    Ok(t.abs() / t_bound(m, n, q, c))
}
