//! Roots of unity as exact rational angles, and compensated accumulation of
//! sums of them.

use std::f64::consts::FRAC_PI_2;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;

use crate::modular::gcd;
use crate::tolerances::SUM_EQ_REL;

/// `num/den` turns, kept in lowest terms with `0 <= num < den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalAngle {
    num: u64,
    den: u64,
}

impl RationalAngle {
    pub const ZERO: RationalAngle = RationalAngle { num: 0, den: 1 };

    pub fn new(num: i128, den: u64) -> Self {
        assert!(den > 0, "angle denominator must be positive");
        let r = num.rem_euclid(den as i128) as u64;
        let g = gcd(r, den);
        RationalAngle { num: r / g, den: den / g }
    }

    pub fn numerator(self) -> u64 {
        self.num
    }

    pub fn denominator(self) -> u64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    /// `k` times the angle.
    pub fn times(self, k: i128) -> Self {
        RationalAngle::new(k * self.num as i128, self.den)
    }

    pub fn to_complex(self) -> Complex64 {
        unit(self.num as i128, self.den)
    }
}

impl Add for RationalAngle {
    type Output = RationalAngle;

    fn add(self, rhs: RationalAngle) -> RationalAngle {
        let g = gcd(self.den, rhs.den);
        let l = self.den / g * rhs.den;
        let lhs = self.num as i128 * (rhs.den / g) as i128;
        let rhs_n = rhs.num as i128 * (self.den / g) as i128;
        RationalAngle::new(lhs + rhs_n, l)
    }
}

impl Neg for RationalAngle {
    type Output = RationalAngle;

    fn neg(self) -> RationalAngle {
        RationalAngle::new(-(self.num as i128), self.den)
    }
}

impl Sub for RationalAngle {
    type Output = RationalAngle;

    fn sub(self, rhs: RationalAngle) -> RationalAngle {
        self + (-rhs)
    }
}

/// Splits `num/den` turns as `k/4 + rem/(4 den)` with `|rem| <= den/2`, so the
/// residual angle lies in `[-pi/4, pi/4]`.
#[inline]
fn octant_split(num: i128, den: u64) -> (u8, f64) {
    if den < 1 << 59 {
        if let Ok(n) = i64::try_from(num) {
            // same computation in 64-bit arithmetic: 8 r + d < 2^63
            let d = den as i64;
            let r = n.rem_euclid(d);
            let k = (8 * r + d) / (2 * d);
            let rem = 4 * r - k * d;
            return ((k & 3) as u8, FRAC_PI_2 * rem as f64 / den as f64);
        }
    }
    let d = den as i128;
    let r = num.rem_euclid(d);
    let k = (8 * r + d) / (2 * d);
    let rem = 4 * r - k * d;
    ((k & 3) as u8, FRAC_PI_2 * rem as f64 / den as f64)
}

/// `e(num/den) = exp(2 pi i num/den)`, reduced by exact quarter turns first.
#[inline]
pub fn unit(num: i128, den: u64) -> Complex64 {
    let (k, phi) = octant_split(num, den);
    let (s, c) = phi.sin_cos();
    quarter_turn(Complex64::new(c, s), k)
}

/// Real part of `e(num/den)`.
#[inline]
pub fn cos_turns(num: i128, den: u64) -> f64 {
    let (k, phi) = octant_split(num, den);
    match k {
        0 => phi.cos(),
        1 => -phi.sin(),
        2 => -phi.cos(),
        _ => phi.sin(),
    }
}

/// Multiplies by `i^k` exactly.
#[inline]
pub fn quarter_turn(z: Complex64, k: u8) -> Complex64 {
    match k & 3 {
        0 => z,
        1 => Complex64::new(-z.im, z.re),
        2 => Complex64::new(-z.re, -z.im),
        _ => Complex64::new(z.im, -z.re),
    }
}

/// `(-i)^kappa` as a quarter-turn count.
#[inline]
pub fn minus_i_power(kappa: u8) -> u8 {
    (4 - (kappa & 3)) & 3
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.add(other.comp);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexAccumulator {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn merge(&mut self, other: &ComplexAccumulator) {
        self.re.merge(&other.re);
        self.im.merge(&other.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Accumulates unit-modulus terms and counts them.
#[derive(Debug, Clone, Copy, Default)]
pub struct UnitSum {
    acc: ComplexAccumulator,
    terms: u64,
}

impl UnitSum {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `e(num/den)`.
    #[inline]
    pub fn push_turns(&mut self, num: i128, den: u64) {
        self.acc.add(unit(num, den));
        self.terms += 1;
    }

    /// Adds `e(num/den)` times `sign`.
    #[inline]
    pub fn push_signed(&mut self, num: i128, den: u64, negative: bool) {
        let z = unit(num, den);
        self.acc.add(if negative { -z } else { z });
        self.terms += 1;
    }

    /// Adds an arbitrary unit-modulus value.
    #[inline]
    pub fn push_unit(&mut self, z: Complex64) {
        self.acc.add(z);
        self.terms += 1;
    }

    pub fn finish(self) -> RootOfUnitySum {
        RootOfUnitySum { value: self.acc.value(), term_count: self.terms }
    }
}

/// A finite sum of roots of unity together with its number of terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootOfUnitySum {
    pub value: Complex64,
    pub term_count: u64,
}

impl RootOfUnitySum {
    pub fn new(value: Complex64, term_count: u64) -> Self {
        RootOfUnitySum { value, term_count }
    }

    pub fn zero() -> Self {
        RootOfUnitySum { value: Complex64::new(0.0, 0.0), term_count: 0 }
    }

    pub fn re(&self) -> f64 {
        self.value.re
    }

    pub fn im(&self) -> f64 {
        self.value.im
    }

    pub fn abs(&self) -> f64 {
        self.value.norm()
    }

    /// Multiplies by `i^k`.
    pub fn rotate_quarter(self, k: u8) -> Self {
        RootOfUnitySum { value: quarter_turn(self.value, k), ..self }
    }

    /// Multiplies by `e(angle)`.
    pub fn rotate(self, angle: RationalAngle) -> Self {
        RootOfUnitySum { value: self.value * angle.to_complex(), ..self }
    }

    /// Multiplies the value by a positive integer; the sum now stands for `k`
    /// copies of each term.
    pub fn scale(self, k: u64) -> Self {
        RootOfUnitySum { value: self.value * k as f64, term_count: self.term_count * k }
    }

    /// Product of two sums, as the sum over pairs of terms.
    pub fn product(self, other: RootOfUnitySum) -> Self {
        RootOfUnitySum { value: self.value * other.value, term_count: self.term_count * other.term_count }
    }

    pub fn tolerance(&self) -> f64 {
        SUM_EQ_REL * (self.term_count.max(1) as f64)
    }

    /// Equality within `1e-9 * max(1, term_count)` of the larger of the two sums.
    pub fn approx_eq(&self, other: &RootOfUnitySum) -> bool {
        let terms = self.term_count.max(other.term_count).max(1);
        (self.value - other.value).norm() <= SUM_EQ_REL * terms as f64
    }
}
