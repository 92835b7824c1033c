//! Kloosterman sums attached to pairs of cusps of `Gamma_0(Q)`.
//!
//! Three pairs are covered:
//!
//! * `(infinity, r/q)` with the multiplier of a character `chi` modulo `Q/q`;
//! * `(infinity, infinity)` and `(r/q, r/q)` for `Gamma_{0,+-1}(Q; Q/q)` with
//!   the sign multiplier `sign^kappa`.
//!
//! Each sum has a collapsed formula and an independent oracle that enumerates
//! the coset representatives directly; the r-averaged identities are returned
//! as [`IdentityCheck`] pairs.

use crate::characters::DirichletCharacter;
use crate::cusps::cusp_representatives;
use crate::cusps::{r_bar_mod_g, scaling_matrix, width};
use crate::error::{precondition, Result};
use crate::expsums::kloosterman;
use crate::modular::{divisors, euler_phi, gcd, gcd3, moebius, mul_mod, residue, tau, unit_inverse_pairs};
use crate::roots::{minus_i_power, RootOfUnitySum, UnitSum};
use crate::tolerances::SUM_EQ_REL;

/// Data for the `(infinity, r/q)` sum with a character multiplier.
#[derive(Debug, Clone)]
pub struct CuspPairSumSpec {
    pub level: u64,
    pub q: u64,
    pub r: u64,
    /// Character modulo `Q/q`.
    pub chi: DirichletCharacter,
    pub kappa: u8,
    pub m: i64,
    pub n: i64,
    /// Index `c`; the modulus of the sum is `c q sqrt(w_q)`.
    pub c: u64,
}

/// Data for the `Gamma_{0,+-1}(Q; Q/q)` sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignSumSpec {
    pub level: u64,
    pub q: u64,
    /// Cusp numerator; ignored by the `(infinity, infinity)` sum.
    pub r: u64,
    pub kappa: u8,
    pub m: i64,
    pub n: i64,
    pub c: u64,
}

/// Two evaluations of the same quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityCheck {
    pub lhs: RootOfUnitySum,
    pub rhs: RootOfUnitySum,
}

impl IdentityCheck {
    pub fn delta(&self) -> f64 {
        (self.lhs.value - self.rhs.value).norm()
    }

    pub fn term_count(&self) -> u64 {
        self.lhs.term_count.max(self.rhs.term_count).max(1)
    }

    pub fn holds(&self) -> bool {
        self.delta() <= SUM_EQ_REL * self.term_count() as f64
    }
}

/// `sign^kappa_f(d)`: `Some(false)` for `+1`, `Some(true)` for `-1`, `None` when
/// `d` is neither `1` nor `-1` modulo `f`. The `+1` class is tested first, so
/// `f <= 2` never counts a residue twice.
#[inline]
pub fn sign_multiplier(kappa: u8, f: u64, d: i128) -> Option<bool> {
    let r = d.rem_euclid(f as i128) as u64;
    if r == 1 % f {
        Some(false)
    } else if r == (f - 1) % f {
        Some(kappa == 1)
    } else {
        None
    }
}

/// The branches `epsilon = +-1` of a condition `x = y = epsilon (f)` whose sign
/// classes are taken modulo `big_n` (with `f | big_n`). Each matching branch is
/// one term carrying `epsilon^kappa`.
///
/// For `big_n <= 2` there is a single branch. For `big_n > 2` both branches are
/// distinct even when they coincide modulo a small `f`, and then both count.
#[inline]
fn sign_branches(kappa: u8, big_n: u64, f: u64, x: i128, y: i128) -> [Option<bool>; 2] {
    let f_i = f as i128;
    let (x, y) = (x.rem_euclid(f_i), y.rem_euclid(f_i));
    let one = 1 % f_i;
    let minus_one = (f_i - 1) % f_i;
    let plus = (x == one && y == one).then_some(false);
    let minus = (big_n > 2 && x == minus_one && y == minus_one).then_some(kappa == 1);
    [plus, minus]
}

fn check_level(level: u64, q: u64) -> Result<u64> {
    if level == 0 || q == 0 || level % q != 0 {
        return Err(precondition(format!("q = {q} must divide Q = {level}")));
    }
    Ok(level / q)
}

fn check_kappa(kappa: u8, big_n: u64) -> Result<()> {
    if kappa > 1 {
        return Err(precondition("kappa must be 0 or 1"));
    }
    if kappa == 1 && big_n <= 2 {
        return Err(precondition(format!("kappa must be 0 when Q/q = {big_n} <= 2")));
    }
    Ok(())
}

fn check_infty_rq(spec: &CuspPairSumSpec) -> Result<u64> {
    let big_n = check_level(spec.level, spec.q)?;
    if spec.c == 0 {
        return Err(precondition("c must be positive"));
    }
    if gcd(spec.r, spec.level) != 1 {
        return Err(precondition(format!("gcd(r, Q) > 1 for r = {}", spec.r)));
    }
    if gcd(spec.c, big_n) != 1 {
        return Err(precondition(format!("c = {} is not coprime to Q/q = {big_n}", spec.c)));
    }
    if spec.chi.modulus() != big_n {
        return Err(precondition(format!("character modulus {} differs from Q/q = {big_n}", spec.chi.modulus())));
    }
    if spec.chi.parity() != spec.kappa {
        return Err(precondition("kappa does not match the parity of chi"));
    }
    Ok(big_n)
}

/// Sum of `e((m a + n d)/modulus)` over `ad = 1 (modulus)`; the filter returns
/// up to two signed copies of each term.
fn filtered_kloosterman(
    m: i64,
    n: i64,
    modulus: u64,
    mut keep: impl FnMut(u64, u64) -> [Option<bool>; 2],
) -> RootOfUnitySum {
    let (mm, nn) = (residue(m, modulus), residue(n, modulus));
    let mut sum = UnitSum::new();
    for (a, d) in unit_inverse_pairs(modulus) {
        let branches = keep(a, d);
        if branches.iter().all(Option::is_none) {
            continue;
        }
        let t = (mul_mod(a, mm, modulus) + mul_mod(d, nn, modulus)) % modulus;
        for negative in branches.into_iter().flatten() {
            sum.push_signed(t as i128, modulus, negative);
        }
    }
    sum.finish()
}

/// `S^{chi,kappa}_{infinity, r/q}(m, n w_q; c q sqrt(w_q))`:
/// `(-i)^kappa conj(chi(c)) sum_{ad = 1 (cq), d = c r^-1 (gcd(q, Q/q))} e((ma + nd)/(cq))`.
pub fn s_infty_rq(spec: &CuspPairSumSpec) -> Result<RootOfUnitySum> {
    let big_n = check_infty_rq(spec)?;
    let g = gcd(spec.q, big_n);
    let target = mul_mod(spec.c % g, r_bar_mod_g(spec.level, spec.q, spec.r), g);
    let cq = spec.c * spec.q;
    let raw = filtered_kloosterman(spec.m, spec.n, cq, |_, d| [(d % g == target).then_some(false), None]);
    let chi_c = spec.chi.eval(spec.c as i64).expect("c is coprime to Q/q");
    Ok(raw.rotate(-chi_c).rotate_quarter(minus_i_power(spec.kappa)))
}

/// The same sum before simplification: `a` modulo `cq`, `d` modulo `c q w_q`,
/// `d = c y (Q/q)`, weighted by `conj(chi(d r - c q x))`.
pub fn s_infty_rq_oracle(spec: &CuspPairSumSpec) -> Result<RootOfUnitySum> {
    let big_n = check_infty_rq(spec)?;
    let sm = scaling_matrix(spec.level, spec.q, spec.r)?;
    let w = sm.width;
    let cq = spec.c * spec.q;
    let target = (spec.c as i128 * sm.y as i128).rem_euclid(big_n as i128);
    let chi_bar = spec.chi.conj();
    let mut sum = UnitSum::new();
    for a in 0..cq {
        if gcd(a, cq) != 1 {
            continue;
        }
        for d in 0..cq * w {
            if (a as u128 * d as u128) % cq as u128 != 1 % cq as u128 {
                continue;
            }
            if (d as i128).rem_euclid(big_n as i128) != target {
                continue;
            }
            let arg = d as i128 * sm.r as i128 - cq as i128 * sm.x as i128;
            let weight = chi_bar.eval(residue_i64(arg, big_n)).expect("argument is a unit mod Q/q");
            let phase = crate::roots::RationalAngle::new(spec.m as i128 * a as i128 + spec.n as i128 * d as i128, cq);
            sum.push_unit((phase + weight).to_complex());
        }
    }
    Ok(sum.finish().rotate_quarter(minus_i_power(spec.kappa)))
}

fn residue_i64(x: i128, n: u64) -> i64 {
    x.rem_euclid(n as i128) as i64
}

/// Sum of `s_infty_rq` over all representatives `r` (lhs) against
/// `(-i)^kappa conj(chi(c)) S(m, n; cq)` (rhs).
pub fn s_infty_rq_rsum(
    level: u64,
    q: u64,
    chi: &DirichletCharacter,
    kappa: u8,
    m: i64,
    n: i64,
    c: u64,
) -> Result<IdentityCheck> {
    let big_n = check_level(level, q)?;
    let mut lhs = RootOfUnitySum::zero();
    for cusp in cusp_representatives(level).into_iter().filter(|cu| cu.q == q) {
        let spec = CuspPairSumSpec { level, q, r: cusp.r, chi: chi.clone(), kappa, m, n, c };
        let s = s_infty_rq(&spec)?;
        lhs = RootOfUnitySum::new(lhs.value + s.value, lhs.term_count + s.term_count);
    }
    let chi_c = chi.eval(c as i64).expect("c is coprime to Q/q");
    debug_assert_eq!(chi.modulus(), big_n);
    let rhs = kloosterman(m, n, c * q).rotate(-chi_c).rotate_quarter(minus_i_power(kappa));
    Ok(IdentityCheck { lhs, rhs })
}

fn check_sign_common(spec: &SignSumSpec) -> Result<u64> {
    let big_n = check_level(spec.level, spec.q)?;
    check_kappa(spec.kappa, big_n)?;
    if spec.c == 0 {
        return Err(precondition("c must be positive"));
    }
    Ok(big_n)
}

/// `S^{sign,kappa}_{infinity,infinity}(m, n; c)` for `Gamma_{0,+-1}(Q; Q/q)`, `Q | c`:
/// `(-i)^kappa sum_{ad = 1 (c), a = d = +-1 (Q/q)} sign^kappa(d) e((ma + nd)/c)`.
pub fn s_gamma01_infty_infty(level: u64, q: u64, kappa: u8, m: i64, n: i64, c: u64) -> Result<RootOfUnitySum> {
    let spec = SignSumSpec { level, q, r: 1, kappa, m, n, c };
    let big_n = check_sign_common(&spec)?;
    if c % level != 0 {
        return Err(precondition(format!("Q = {level} does not divide c = {c}")));
    }
    let raw = filtered_kloosterman(m, n, c, |a, d| sign_branches(kappa, big_n, big_n, a as i128, d as i128));
    Ok(raw.rotate_quarter(minus_i_power(kappa)))
}

fn check_rq_rq(spec: &SignSumSpec) -> Result<(u64, u64)> {
    let big_n = check_sign_common(spec)?;
    if gcd(spec.r, spec.level) != 1 {
        return Err(precondition(format!("gcd(r, Q) > 1 for r = {}", spec.r)));
    }
    let w = width(spec.level, spec.q)?;
    if (spec.c as u128 * spec.q as u128 * w as u128) % spec.level as u128 != 0 {
        return Err(precondition(format!("Q = {} does not divide c q w_q", spec.level)));
    }
    Ok((big_n, w))
}

/// `S^{sign,kappa}_{r/q,r/q}(m w_q, n w_q; c q w_q)`:
/// `(-i)^kappa (c, w_q) sum_{ad = 1 (cq), a + cy = d - cy = +-1 (G)} sign^kappa_G(a + cy) e((ma + nd)/(cq))`
/// with `G = gcd(cq, Q/q)`.
pub fn s_rq_rq(spec: &SignSumSpec) -> Result<RootOfUnitySum> {
    let (big_n, w) = check_rq_rq(spec)?;
    let y = scaling_matrix(spec.level, spec.q, spec.r)?.y as i128;
    let cq = spec.c * spec.q;
    let g = gcd(cq, big_n);
    let cy = spec.c as i128 * y;
    let kappa = spec.kappa;
    let raw =
        filtered_kloosterman(spec.m, spec.n, cq, |a, d| sign_branches(kappa, big_n, g, a as i128 + cy, d as i128 - cy));
    Ok(raw.scale(gcd(spec.c, w)).rotate_quarter(minus_i_power(kappa)))
}

/// Coset enumeration for `s_rq_rq`: `a, d` modulo `c q w_q` with
/// `a + cy = d - cy = +-1 (Q/q)`, `ad = 1 (cq)` and `(a + cy)(d - cy) = 1 (c Q/q)`.
pub fn s_rq_rq_oracle(spec: &SignSumSpec) -> Result<RootOfUnitySum> {
    let (big_n, w) = check_rq_rq(spec)?;
    let y = scaling_matrix(spec.level, spec.q, spec.r)?.y as i128;
    let cq = spec.c * spec.q;
    let big = cq * w;
    let cy = spec.c as i128 * y;
    let cn = (spec.c * big_n) as i128;
    let mut sum = UnitSum::new();
    for a in 0..big {
        let a_cq = a % cq;
        if gcd(a_cq, cq) != 1 {
            continue;
        }
        let Some(s1) = sign_multiplier(spec.kappa, big_n, a as i128 + cy) else { continue };
        for d in 0..big {
            if mul_mod(a_cq, d % cq, cq) != 1 % cq {
                continue;
            }
            let Some(s2) = sign_multiplier(spec.kappa, big_n, d as i128 - cy) else { continue };
            let same_class = ((d as i128 - cy) - (a as i128 + cy)).rem_euclid(big_n as i128) == 0;
            if !same_class || s1 != s2 {
                continue;
            }
            if ((a as i128 + cy) * (d as i128 - cy)).rem_euclid(cn) != 1 % cn {
                continue;
            }
            let t = spec.m as i128 * a as i128 + spec.n as i128 * d as i128;
            sum.push_signed(t, cq, s1);
        }
    }
    Ok(sum.finish().rotate_quarter(minus_i_power(spec.kappa)))
}

/// Sum of `s_rq_rq` over the representatives `r` with the given `q` (lhs),
/// against the Moebius-inverted closed expression (rhs).
pub fn s_rq_rq_rsum(level: u64, q: u64, kappa: u8, m: i64, n: i64, c: u64) -> Result<IdentityCheck> {
    let mut lhs = RootOfUnitySum::zero();
    for cusp in cusp_representatives(level).into_iter().filter(|cu| cu.q == q) {
        let s = s_rq_rq(&SignSumSpec { level, q, r: cusp.r, kappa, m, n, c })?;
        lhs = RootOfUnitySum::new(lhs.value + s.value, lhs.term_count + s.term_count);
    }
    let spec = SignSumSpec { level, q, r: 1, kappa, m, n, c };
    let (big_n, w) = check_rq_rq(&spec)?;
    let cq = c * q;
    let c_n = gcd(c, big_n);
    let top = gcd(cq, big_n);
    let ratio = euler_phi(gcd(q, big_n)) as f64 / euler_phi(gcd(q, big_n / c_n)) as f64;
    let mut value = num_complex::Complex64::new(0.0, 0.0);
    let mut terms = 0u64;
    for f in divisors(top)?.into_iter().filter(|f| f % c_n == 0) {
        let mu = moebius(f / c_n);
        if mu == 0 {
            continue;
        }
        let inner = filtered_kloosterman(m, n, cq, |a, d| sign_branches(kappa, big_n, f, a as i128, d as i128));
        value += inner.value * mu as f64;
        terms += inner.term_count;
    }
    let scale = gcd(c, w) as f64 * ratio;
    let rhs =
        RootOfUnitySum::new(value * scale, (terms as f64 * scale).ceil() as u64).rotate_quarter(minus_i_power(kappa));
    Ok(IdentityCheck { lhs, rhs })
}

/// `|S_{infinity,infinity}| / (2^{5/2} tau(c) min{c/(Q/q), (c/(Q/q), m, n)^{1/2} c^{1/2}})`.
pub fn cor33_infty_margin(level: u64, q: u64, kappa: u8, m: i64, n: i64, c: u64) -> Result<f64> {
    let s = s_gamma01_infty_infty(level, q, kappa, m, n, c)?;
    let big_n = level / q;
    let cn = c / big_n;
    let inner = (cn as f64).min((gcd3(m, n, cn) as f64).sqrt() * (c as f64).sqrt());
    Ok(s.abs() / (4.0 * std::f64::consts::SQRT_2 * tau(c) as f64 * inner))
}

/// `|sum_r S_{r/q,r/q}| / ((c, Q/q) min{cq/(c, Q/q), (cq/(c, Q/q), m, n)^{1/2} (cq)^{1/2}})`.
pub fn cor33_rsum_ratio(level: u64, q: u64, kappa: u8, m: i64, n: i64, c: u64) -> Result<f64> {
    let check = s_rq_rq_rsum(level, q, kappa, m, n, c)?;
    let big_n = level / q;
    let cq = c * q;
    let c_n = gcd(c, big_n);
    let red = cq / c_n;
    let inner = (red as f64).min((gcd3(m, n, red) as f64).sqrt() * (cq as f64).sqrt());
    Ok(check.lhs.abs() / (c_n as f64 * inner))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::characters_mod;
    use crate::roots::unit;
    use num_complex::Complex64;

    fn principal(n: u64) -> DirichletCharacter {
        characters_mod(n).remove(0)
    }

    fn spec(level: u64, q: u64, r: u64, chi: DirichletCharacter, m: i64, n: i64, c: u64) -> CuspPairSumSpec {
        let kappa = chi.parity();
        CuspPairSumSpec { level, q, r, chi, kappa, m, n, c }
    }

    #[test]
    fn sign_multiplier_dedupes_small_moduli() {
        assert_eq!(sign_multiplier(1, 1, 5), Some(false));
        assert_eq!(sign_multiplier(1, 2, 3), Some(false));
        assert_eq!(sign_multiplier(1, 2, 4), None);
        assert_eq!(sign_multiplier(1, 5, 4), Some(true));
        assert_eq!(sign_multiplier(0, 5, 4), Some(false));
        assert_eq!(sign_multiplier(1, 5, 2), None);
    }

    #[test]
    fn infty_rq_full_level_is_kloosterman() {
        for (level, m, n, c) in [(1u64, 1i64, 1i64, 5u64), (6, 2, -1, 3), (12, 1, 3, 4)] {
            let s = s_infty_rq(&spec(level, level, 1, principal(1), m, n, c)).unwrap();
            assert!(s.approx_eq(&kloosterman(m, n, c * level)));
            let o = s_infty_rq_oracle(&spec(level, level, 1, principal(1), m, n, c)).unwrap();
            assert!(o.approx_eq(&kloosterman(m, n, c * level)));
        }
    }

    #[test]
    fn infty_rq_level_four() {
        let s = s_infty_rq(&spec(4, 2, 1, principal(2), 1, 1, 1)).unwrap();
        assert!((s.value - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert_eq!(s.term_count, 1);
        assert!(s.approx_eq(&s_infty_rq_oracle(&spec(4, 2, 1, principal(2), 1, 1, 1)).unwrap()));
    }

    #[test]
    fn infty_rq_rejects_bad_c() {
        assert!(s_infty_rq(&spec(4, 2, 1, principal(2), 1, 1, 2)).is_err());
        let mut bad = spec(5, 1, 1, characters_mod(5)[1].clone(), 1, 1, 1);
        bad.kappa = 1 - bad.kappa;
        assert!(s_infty_rq(&bad).is_err());
        assert!(s_infty_rq(&spec(4, 2, 1, principal(4), 1, 1, 1)).is_err());
    }

    #[test]
    fn infty_rq_rsum_examples() {
        let check = s_infty_rq_rsum(36, 6, &principal(6), 0, 1, 1, 1).unwrap();
        assert!(check.holds());
        assert!(check.lhs.approx_eq(&kloosterman(1, 1, 6)));
        let check = s_infty_rq_rsum(4, 2, &principal(2), 0, 1, 1, 3).unwrap();
        assert!(check.holds());
    }

    #[test]
    fn infty_rq_oracle_small_grid() {
        for level in [5u64, 8, 9, 12, 18] {
            for q in divisors(level).unwrap() {
                let big_n = level / q;
                for chi in characters_mod(big_n) {
                    for cusp in cusp_representatives(level).into_iter().filter(|c| c.q == q) {
                        for c in (1..=5).filter(|&c| gcd(c, big_n) == 1) {
                            let s = spec(level, q, cusp.r, chi.clone(), 2, -1, c);
                            let f = s_infty_rq(&s).unwrap();
                            let o = s_infty_rq_oracle(&s).unwrap();
                            assert!(f.approx_eq(&o), "{level} {q} {} {c}", cusp.r);
                            assert_eq!(f.term_count, o.term_count);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn gamma01_examples() {
        for c in 1..=12u64 {
            let s = s_gamma01_infty_infty(3, 3, 0, 2, 5, c * 3).unwrap();
            assert!(s.approx_eq(&kloosterman(2, 5, c * 3)));
        }
        let s = s_gamma01_infty_infty(2, 1, 0, 1, 3, 2).unwrap();
        assert!((s.value - unit(4, 2)).norm() < 1e-12);
        let s = s_gamma01_infty_infty(6, 1, 0, 1, 1, 6).unwrap();
        assert!((s.value - (unit(2, 6) + unit(10, 6))).norm() < 1e-12);
        assert!(s_gamma01_infty_infty(6, 1, 0, 1, 1, 4).is_err());
        assert!(s_gamma01_infty_infty(4, 2, 1, 1, 1, 4).is_err());
    }

    #[test]
    fn rq_rq_full_level() {
        for level in [1u64, 4, 6, 9] {
            let w = width(level, level).unwrap();
            for c in 1..=6u64 {
                let s = SignSumSpec { level, q: level, r: 1, kappa: 0, m: 1, n: -2, c };
                let expect = kloosterman(1, -2, c * level).scale(gcd(c, w));
                assert!(s_rq_rq(&s).unwrap().approx_eq(&expect));
                assert!(s_rq_rq_oracle(&s).unwrap().approx_eq(&expect));
            }
        }
    }

    #[test]
    fn rq_rq_level_four_has_no_collapse() {
        for c in (2..=16u64).step_by(2) {
            let s = SignSumSpec { level: 4, q: 2, r: 1, kappa: 0, m: 1, n: 2, c };
            let f = s_rq_rq(&s).unwrap();
            let o = s_rq_rq_oracle(&s).unwrap();
            assert!(f.approx_eq(&o));
            assert_eq!(f.term_count, o.term_count);
        }
    }

    #[test]
    fn rq_rq_real_when_m_equals_n() {
        for level in [5u64, 8, 12] {
            for q in divisors(level).unwrap() {
                let w = width(level, q).unwrap();
                for cusp in cusp_representatives(level).into_iter().filter(|c| c.q == q) {
                    for c in (1..=8u64).filter(|c| (c * q * w) % level == 0) {
                        for kappa in 0..=u8::from(level / q > 2) {
                            let s = SignSumSpec { level, q, r: cusp.r, kappa, m: 3, n: 3, c };
                            let v = s_rq_rq(&s).unwrap();
                            assert!(v.im().abs() <= 1e-9 * v.term_count.max(1) as f64, "{s:?} {v:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rq_rq_rsum_examples() {
        assert!(s_rq_rq_rsum(36, 6, 0, 1, 1, 6).unwrap().holds());
        assert!(s_rq_rq_rsum(36, 6, 0, 1, 1, 1).is_err());
        assert!(s_rq_rq_rsum(12, 2, 0, 1, 1, 2).unwrap().holds());
        let check = s_rq_rq_rsum(7, 7, 0, 2, 1, 3).unwrap();
        assert!(check.holds());
        assert!(check.lhs.approx_eq(&kloosterman(2, 1, 21)));
    }

    #[test]
    fn cor33_margin_examples() {
        let m = cor33_infty_margin(6, 1, 0, 1, 1, 6).unwrap();
        let s = (unit(2, 6) + unit(10, 6)).norm();
        let expect = s / (4.0 * std::f64::consts::SQRT_2 * 4.0 * 1.0);
        assert!((m - expect).abs() < 1e-12);
        let w = crate::expsums::weil_margin(1, 1, 35).unwrap();
        let c = cor33_infty_margin(5, 5, 0, 1, 1, 35).unwrap();
        assert!((c - w / (4.0 * std::f64::consts::SQRT_2)).abs() < 1e-12);
    }
}
