//! Kloosterman sums over arithmetic progressions `c = a q (mod Q)` and against
//! periodic weights, smoothed dyadic sums, the character/cusp decomposition of
//! the smoothed sum, and exponent fitting.
//!
//! Sweeps evaluate terms in parallel over fixed-size blocks of `c` and reduce
//! them sequentially in increasing `c`, so results do not depend on the number
//! of worker threads.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::characters::characters_mod;
use crate::cusp_kloosterman::{s_infty_rq, CuspPairSumSpec};
use crate::cusps::cusp_representatives;
use crate::error::{precondition, Error, Result};
use crate::expsums::kloosterman_fast;
use crate::modular::{euler_phi, gcd, gcd3, residue, tau};
use crate::roots::{quarter_turn, unit, CompensatedSum, ComplexAccumulator};
use crate::tolerances::DECOMPOSITION_REL;

/// Number of consecutive moduli evaluated per parallel block.
const BLOCK: usize = 1 << 14;

/// Bound on `||phi'||_1` for [`Bump`]; the ramps are monotone, so the exact value is 2.
pub const BUMP_C1: f64 = 2.05;
/// `||phi''||_1 <= BUMP_C2 * C / (X B)` for [`Bump`].
pub const BUMP_C2: f64 = 16.0;

/// Tag for the factor that [`thm52_rhs`] leaves out.
pub const THM52_OMITTED_FACTOR: &str = "|mnQC|^o(1)";

/// The progression `c = a q (mod Q)` with `q | Q` and `(a, Q/q) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProgressionSpec {
    pub a: u64,
    pub q: u64,
    pub level: u64,
}

impl ProgressionSpec {
    pub fn new(a: u64, q: u64, level: u64) -> Result<ProgressionSpec> {
        if a == 0 || q == 0 || level == 0 {
            return Err(precondition("a, q and Q must be positive"));
        }
        if level % q != 0 {
            return Err(precondition(format!("q = {q} does not divide Q = {level}")));
        }
        if gcd(a, level / q) != 1 {
            return Err(precondition(format!("gcd(a, Q/q) > 1 for a = {a}, Q/q = {}", level / q)));
        }
        Ok(ProgressionSpec { a, q, level })
    }

    /// Residue `a q mod Q`.
    pub fn residue(&self) -> u64 {
        (self.a as u128 * self.q as u128 % self.level as u128) as u64
    }

    pub fn contains(&self, c: u64) -> bool {
        c % self.level == self.residue()
    }

    /// Least positive member.
    pub fn first(&self) -> u64 {
        match self.residue() {
            0 => self.level,
            r => r,
        }
    }

    /// Members in `[lo, hi]`, increasing.
    pub fn members(&self, lo: u64, hi: u64) -> impl Iterator<Item = u64> {
        let step = self.level;
        let lo = lo.max(1);
        let first = self.first();
        let start = if lo <= first { first } else { first + (lo - first).div_ceil(step) * step };
        (0..).map(move |k| start + k * step).take_while(move |&c| c <= hi)
    }

    /// All classes `(a, q)` with `a` reduced modulo `Q/q`, partitioning the positive integers.
    pub fn all_classes(level: u64) -> Vec<ProgressionSpec> {
        let mut out = Vec::new();
        for q in crate::modular::divisors(level).expect("level has few divisors") {
            let big_n = level / q;
            for a in (1..=big_n).filter(|&a| gcd(a, big_n) == 1) {
                out.push(ProgressionSpec { a, q, level });
            }
        }
        out
    }
}

/// A function on the integers with period `P`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicFunction {
    values: Vec<Complex64>,
}

impl PeriodicFunction {
    pub fn from_values(values: Vec<Complex64>) -> Result<PeriodicFunction> {
        if values.is_empty() {
            return Err(precondition("a periodic function needs at least one value"));
        }
        Ok(PeriodicFunction { values })
    }

    pub fn constant(v: Complex64) -> PeriodicFunction {
        PeriodicFunction { values: vec![v] }
    }

    /// `F(c) = e(c / P)`.
    pub fn additive(period: u64) -> Result<PeriodicFunction> {
        if period == 0 {
            return Err(precondition("period must be positive"));
        }
        Ok(PeriodicFunction { values: (0..period).map(|k| unit(k as i128, period)).collect() })
    }

    /// Indicator of `c = a (mod P)`.
    pub fn indicator(a: i64, period: u64) -> Result<PeriodicFunction> {
        if period == 0 {
            return Err(precondition("period must be positive"));
        }
        let hit = residue(a, period);
        let values = (0..period).map(|k| Complex64::new(if k == hit { 1.0 } else { 0.0 }, 0.0)).collect();
        Ok(PeriodicFunction { values })
    }

    pub fn period(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn eval(&self, c: u64) -> Complex64 {
        self.values[(c % self.period()) as usize]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Parameters of the smooth weight: cutoff `C`, ramp width `B`, and `|mn|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpSpec {
    pub c_cut: f64,
    pub b: f64,
    pub mn_abs: u64,
}

impl BumpSpec {
    /// `X = 4 pi sqrt(|mn|) / C`.
    pub fn x_scale(&self) -> f64 {
        4.0 * PI * (self.mn_abs as f64).sqrt() / self.c_cut
    }
}

/// Quintic smoothstep `6t^5 - 15t^4 + 10t^3` and its first two derivatives.
fn smoothstep(t: f64) -> (f64, f64, f64) {
    if t <= 0.0 {
        return (0.0, 0.0, 0.0);
    }
    if t >= 1.0 {
        return (1.0, 0.0, 0.0);
    }
    let t2 = t * t;
    let v = t2 * t * (10.0 + t * (-15.0 + 6.0 * t));
    let d1 = 30.0 * t2 * (1.0 - t) * (1.0 - t);
    let d2 = 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t);
    (v, d1, d2)
}

/// `phi = 1` on `[K/C, 2K/C]` and `0` outside `(K/(C+B), 2K/(C-B))`, where
/// `K = 2 pi sqrt(|mn|)`, with smoothstep ramps in between.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    spec: BumpSpec,
    x0: f64,
    x1: f64,
    x2: f64,
    x3: f64,
}

/// Quadrature diagnostics computed when a bump is built.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpNorms {
    pub d1_l1: f64,
    pub d2_l1: f64,
    /// `C / (X B)`, the scale of the second-derivative bound.
    pub d2_scale: f64,
}

impl Bump {
    pub fn spec(&self) -> BumpSpec {
        self.spec
    }

    /// `(phi, phi', phi'')` at `x`.
    pub fn eval_with_derivatives(&self, x: f64) -> (f64, f64, f64) {
        if x <= self.x0 || x >= self.x3 {
            (0.0, 0.0, 0.0)
        } else if x < self.x1 {
            let h = self.x1 - self.x0;
            let (v, d1, d2) = smoothstep((x - self.x0) / h);
            (v, d1 / h, d2 / (h * h))
        } else if x <= self.x2 {
            (1.0, 0.0, 0.0)
        } else {
            let h = self.x3 - self.x2;
            let (v, d1, d2) = smoothstep((self.x3 - x) / h);
            (v, -d1 / h, d2 / (h * h))
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_with_derivatives(x).0
    }

    /// `phi(4 pi sqrt(|mn|) / c)`, the weight of modulus `c`.
    pub fn weight(&self, c: f64) -> f64 {
        self.eval(4.0 * PI * (self.spec.mn_abs as f64).sqrt() / c)
    }

    /// Moduli `c` with nonzero weight lie in `(C - B, 2(C + B))`.
    pub fn modulus_window(&self) -> (u64, u64) {
        let lo = (self.spec.c_cut - self.spec.b).floor().max(0.0) as u64 + 1;
        let hi = (2.0 * (self.spec.c_cut + self.spec.b)).ceil() as u64;
        (lo, hi)
    }

    /// `L^1` norms of `phi'` and `phi''` by composite Simpson quadrature on each ramp.
    pub fn norms(&self) -> BumpNorms {
        const PANELS: usize = 4096;
        let mut d1 = 0.0;
        let mut d2 = 0.0;
        for (lo, hi) in [(self.x0, self.x1), (self.x2, self.x3)] {
            let h = (hi - lo) / PANELS as f64;
            let mut s1 = CompensatedSum::new();
            let mut s2 = CompensatedSum::new();
            for i in 0..=PANELS {
                let w = if i == 0 || i == PANELS {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                let (_, a, b) = self.eval_with_derivatives(lo + h * i as f64);
                s1.add(w * a.abs());
                s2.add(w * b.abs());
            }
            d1 += s1.value() * h / 3.0;
            d2 += s2.value() * h / 3.0;
        }
        let s = self.spec;
        BumpNorms { d1_l1: d1, d2_l1: d2, d2_scale: s.c_cut / (s.x_scale() * s.b) }
    }
}

/// Builds the bump and checks its support, plateau and derivative norms.
pub fn build_bump(spec: BumpSpec) -> Result<Bump> {
    if !(spec.c_cut.is_finite() && spec.b.is_finite()) || spec.b < 1.0 || spec.b > spec.c_cut / 2.0 {
        return Err(Error::InvalidBump(format!("need 1 <= B <= C/2, got B = {}, C = {}", spec.b, spec.c_cut)));
    }
    if spec.mn_abs == 0 {
        return Err(Error::InvalidBump("|mn| must be positive".into()));
    }
    let k = 2.0 * PI * (spec.mn_abs as f64).sqrt();
    let bump = Bump {
        spec,
        x0: k / (spec.c_cut + spec.b),
        x1: k / spec.c_cut,
        x2: 2.0 * k / spec.c_cut,
        x3: 2.0 * k / (spec.c_cut - spec.b),
    };
    let checks = [
        (bump.eval(bump.x1) == 1.0 && bump.eval(bump.x2) == 1.0, "plateau"),
        (bump.eval(bump.x0) == 0.0 && bump.eval(bump.x3) == 0.0, "support"),
        (
            (0..=256).all(|i| {
                let v = bump.eval(bump.x0 + (bump.x3 - bump.x0) * i as f64 / 256.0);
                (0.0..=1.0).contains(&v)
            }),
            "range",
        ),
    ];
    if let Some((_, what)) = checks.iter().find(|(ok, _)| !ok) {
        return Err(Error::InvalidBump(format!("{what} condition fails")));
    }
    let norms = bump.norms();
    if norms.d1_l1 > BUMP_C1 {
        return Err(Error::InvalidBump(format!("||phi'||_1 = {} exceeds {BUMP_C1}", norms.d1_l1)));
    }
    if norms.d2_l1 > BUMP_C2 * norms.d2_scale {
        return Err(Error::InvalidBump(format!("||phi''||_1 = {} exceeds the bound", norms.d2_l1)));
    }
    Ok(bump)
}

/// `S(m, n; c) = S(-m, -n; c)`; every sum runs on the representative with `m > 0`.
fn normalize(m: i64, n: i64) -> (i64, i64) {
    if m < 0 {
        (-m, -n)
    } else {
        (m, n)
    }
}

fn check_nonzero(m: i64, n: i64) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(precondition("m and n must be nonzero"));
    }
    Ok(())
}

/// `sum_{c in cs} term(c)`, evaluated in parallel blocks and reduced in order.
fn ordered_sum(cs: &[u64], term: impl Fn(u64) -> Complex64 + Sync) -> Complex64 {
    let mut acc = ComplexAccumulator::new();
    for block in cs.chunks(BLOCK) {
        let values: Vec<Complex64> = block.par_iter().map(|&c| term(c)).collect();
        for v in values {
            acc.add(v);
        }
    }
    acc.value()
}

/// Partial sums of `term(c)` over increasing `cs`, recorded at each cutoff.
fn ordered_prefix(cs: &[u64], cutoffs: &[f64], term: impl Fn(u64) -> Complex64 + Sync) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(cutoffs.len());
    let mut acc = ComplexAccumulator::new();
    let mut next = 0;
    let record = |acc: &ComplexAccumulator, upto: u64, next: &mut usize, out: &mut Vec<Complex64>| {
        while *next < cutoffs.len() && (cutoffs[*next] as u64) <= upto {
            out.push(acc.value());
            *next += 1;
        }
    };
    record(&acc, 0, &mut next, &mut out);
    for block in cs.chunks(BLOCK) {
        let values: Vec<Complex64> = block.par_iter().map(|&c| term(c)).collect();
        for (&c, v) in block.iter().zip(values) {
            // cutoffs strictly below c are complete
            record(&acc, c - 1, &mut next, &mut out);
            acc.add(v);
        }
    }
    while out.len() < cutoffs.len() {
        out.push(acc.value());
    }
    out
}

fn floor_cutoff(c_cut: f64) -> u64 {
    if c_cut < 1.0 {
        0
    } else {
        c_cut.floor() as u64
    }
}

/// `sum_{c <= C, c = aq (Q)} S(m, n; c) / c`.
pub fn ap_sum(m: i64, n: i64, prog: &ProgressionSpec, c_cut: f64) -> Result<Complex64> {
    check_nonzero(m, n)?;
    let (m, n) = normalize(m, n);
    let cs: Vec<u64> = prog.members(1, floor_cutoff(c_cut)).collect();
    Ok(ordered_sum(&cs, |c| kloosterman_fast(m, n, c).value / c as f64))
}

/// `sum_{c <= C} S(m, n; c) F(c) / sqrt(c)`.
pub fn correlation_sum(m: i64, n: i64, f: &PeriodicFunction, c_cut: f64) -> Result<Complex64> {
    check_nonzero(m, n)?;
    let (m, n) = normalize(m, n);
    let cs: Vec<u64> = (1..=floor_cutoff(c_cut)).filter(|&c| f.eval(c) != Complex64::new(0.0, 0.0)).collect();
    Ok(ordered_sum(&cs, |c| kloosterman_fast(m, n, c).value * f.eval(c) / (c as f64).sqrt()))
}

/// `sum_{c = aq (Q)} S(m, n; c) / c * phi(4 pi sqrt(|mn|) / c)`.
pub fn smooth_dyadic_sum(m: i64, n: i64, prog: &ProgressionSpec, c_cut: f64, b: f64) -> Result<Complex64> {
    check_nonzero(m, n)?;
    let (m, n) = normalize(m, n);
    let bump = build_bump(BumpSpec { c_cut, b, mn_abs: (m as i128 * n as i128).unsigned_abs() as u64 })?;
    let (lo, hi) = bump.modulus_window();
    let cs: Vec<u64> = prog.members(lo, hi).collect();
    Ok(ordered_sum(&cs, |c| kloosterman_fast(m, n, c).value * (bump.weight(c as f64) / c as f64)))
}

/// The outer factor `i^kappa` or `(-i)^kappa` attached to each character class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OuterFactor {
    PlusI,
    MinusI,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub delta: f64,
    /// Total number of roots of unity entering the right-hand side.
    pub terms: u64,
}

impl DecompositionCheck {
    pub fn holds(&self) -> bool {
        self.delta <= DECOMPOSITION_REL * self.terms.max(1) as f64
    }
}

/// Compares the smoothed progression sum with its expansion into characters
/// modulo `Q/q` and cusp sums `S_{infinity, r/q}`:
///
/// ```text
/// (1/phi(Q/q)) sum_chi i^kappa chi(a) sum_r sum_{(c, Q/q) = 1} S_{infinity,r/q}(c) / (cq) * phi(4 pi sqrt|mn| / (cq))
/// ```
pub fn decomposition_check(m: i64, n: i64, prog: &ProgressionSpec, c_cut: f64, b: f64) -> Result<DecompositionCheck> {
    decomposition_check_with(m, n, prog, c_cut, b, OuterFactor::PlusI)
}

pub fn decomposition_check_with(
    m: i64,
    n: i64,
    prog: &ProgressionSpec,
    c_cut: f64,
    b: f64,
    outer: OuterFactor,
) -> Result<DecompositionCheck> {
    if m <= 0 {
        return Err(precondition("decomposition_check needs m > 0"));
    }
    check_nonzero(m, n)?;
    let lhs = smooth_dyadic_sum(m, n, prog, c_cut, b)?;
    let bump = build_bump(BumpSpec { c_cut, b, mn_abs: (m as i128 * n as i128).unsigned_abs() as u64 })?;
    let (lo, hi) = bump.modulus_window();
    let (q, level) = (prog.q, prog.level);
    let big_n = level / q;
    let indices: Vec<u64> = (lo.div_ceil(q)..=hi / q).filter(|&c| gcd(c, big_n) == 1).collect();
    let rs: Vec<u64> = cusp_representatives(level).into_iter().filter(|cu| cu.q == q).map(|cu| cu.r).collect();
    let tuples: Vec<_> =
        characters_mod(big_n).into_iter().flat_map(|chi| rs.iter().map(move |&r| (chi.clone(), r))).collect();
    let parts: Vec<Result<(Complex64, u64)>> = tuples
        .par_iter()
        .map(|(chi, r)| {
            let kappa = chi.parity();
            let mut acc = ComplexAccumulator::new();
            let mut terms = 0u64;
            for &c in &indices {
                let spec = CuspPairSumSpec { level, q, r: *r, chi: chi.clone(), kappa, m, n, c };
                let s = s_infty_rq(&spec)?;
                let modulus = (c * q) as f64;
                acc.add(s.value * (bump.weight(modulus) / modulus));
                terms += s.term_count;
            }
            let turns = match outer {
                OuterFactor::PlusI => kappa,
                OuterFactor::MinusI => (4 - kappa) % 4,
            };
            let chi_a = chi.value(prog.a as i64);
            Ok((quarter_turn(acc.value(), turns) * chi_a, terms))
        })
        .collect();
    let mut rhs = ComplexAccumulator::new();
    let mut terms = 0u64;
    for part in parts {
        let (v, t) = part?;
        rhs.add(v);
        terms += t;
    }
    let rhs = rhs.value() / euler_phi(big_n) as f64;
    Ok(DecompositionCheck { lhs, rhs, delta: (lhs - rhs).norm(), terms })
}

/// `sum_{c <= Cmax} S(m, n; c) / c^{2s}`.
pub fn zeta_partial(m: i64, n: i64, s: Complex64, c_max: f64) -> Result<Complex64> {
    if s.re <= 0.5 {
        return Err(precondition("zeta_partial needs Re(s) > 1/2"));
    }
    let (m, n) = normalize(m, n);
    let cs: Vec<u64> = (1..=floor_cutoff(c_max)).collect();
    Ok(ordered_sum(&cs, |c| kloosterman_fast(m, n, c).value * (-2.0 * s * (c as f64).ln()).exp()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Terms `S(m, n; c) / c`.
    InvC,
    /// Terms `S(m, n; c) / sqrt(c)`.
    InvSqrtC,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SeriesSource {
    Progression(ProgressionSpec),
    Periodic(PeriodicFunction),
}

/// Partial sums at increasing cutoffs, with the bounds that apply to them.
#[derive(Debug, Clone, PartialEq)]
pub struct SumSeries {
    pub m: i64,
    pub n: i64,
    pub source: SeriesSource,
    pub normalization: Normalization,
    pub cutoffs: Vec<f64>,
    pub values: Vec<Complex64>,
    pub bound_trivial: Vec<f64>,
    /// Only defined for progression series.
    pub bound_thm52: Vec<Option<f64>>,
}

impl SumSeries {
    /// A bare series, as used by fitting; bounds are left empty.
    pub fn from_values(cutoffs: Vec<f64>, values: Vec<Complex64>) -> Result<SumSeries> {
        check_cutoffs(&cutoffs)?;
        if cutoffs.len() != values.len() {
            return Err(precondition("cutoffs and values differ in length"));
        }
        let len = cutoffs.len();
        Ok(SumSeries {
            m: 1,
            n: 1,
            source: SeriesSource::Periodic(PeriodicFunction::constant(Complex64::new(1.0, 0.0))),
            normalization: Normalization::InvC,
            cutoffs,
            values,
            bound_trivial: vec![f64::NAN; len],
            bound_thm52: vec![None; len],
        })
    }
}

fn check_cutoffs(cutoffs: &[f64]) -> Result<()> {
    if cutoffs.iter().any(|c| !c.is_finite() || *c <= 0.0) {
        return Err(precondition("cutoffs must be positive and finite"));
    }
    if cutoffs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(precondition("cutoffs must be strictly increasing"));
    }
    Ok(())
}

/// Geometric grid `start * ratio^k`, `k < count`.
pub fn geometric_grid(start: f64, ratio: f64, count: usize) -> Result<Vec<f64>> {
    if !(start > 0.0 && ratio > 1.0 && start.is_finite() && ratio.is_finite()) {
        return Err(precondition("geometric grid needs start > 0 and ratio > 1"));
    }
    let grid: Vec<f64> = (0..count).map(|k| start * ratio.powi(k as i32)).collect();
    check_cutoffs(&grid)?;
    Ok(grid)
}

/// [`ap_sum`] at every cutoff, in one pass.
pub fn ap_series(m: i64, n: i64, prog: &ProgressionSpec, cutoffs: &[f64], theta: f64) -> Result<SumSeries> {
    check_nonzero(m, n)?;
    let (m, n) = normalize(m, n);
    check_cutoffs(cutoffs)?;
    let top = cutoffs.last().map_or(0, |&c| floor_cutoff(c));
    let cs: Vec<u64> = prog.members(1, top).collect();
    let values = ordered_prefix(&cs, cutoffs, |c| kloosterman_fast(m, n, c).value / c as f64);
    let bound_trivial = cutoffs.iter().map(|&c| trivial_bound(m, n, prog, c)).collect();
    let bound_thm52 = cutoffs.iter().map(|&c| Some(thm52_rhs(m, n, prog, c, theta))).collect();
    Ok(SumSeries {
        m,
        n,
        source: SeriesSource::Progression(*prog),
        normalization: Normalization::InvC,
        cutoffs: cutoffs.to_vec(),
        values,
        bound_trivial,
        bound_thm52,
    })
}

/// [`correlation_sum`] at every cutoff, in one pass. The trivial bound is
/// `max|F| sum_{c <= C} tau(c) (m, n, c)^{1/2}` (Weil bound termwise).
pub fn correlation_series(m: i64, n: i64, f: &PeriodicFunction, cutoffs: &[f64]) -> Result<SumSeries> {
    check_nonzero(m, n)?;
    let (m, n) = normalize(m, n);
    check_cutoffs(cutoffs)?;
    let top = cutoffs.last().map_or(0, |&c| floor_cutoff(c));
    let cs: Vec<u64> = (1..=top).collect();
    let values = ordered_prefix(&cs, cutoffs, |c| kloosterman_fast(m, n, c).value * f.eval(c) / (c as f64).sqrt());
    let weil = ordered_prefix(&cs, cutoffs, |c| Complex64::new(tau(c) as f64 * (gcd3(m, n, c) as f64).sqrt(), 0.0));
    let bound_trivial = weil.iter().map(|w| f.max_abs() * w.re).collect();
    Ok(SumSeries {
        m,
        n,
        source: SeriesSource::Periodic(f.clone()),
        normalization: Normalization::InvSqrtC,
        cutoffs: cutoffs.to_vec(),
        values,
        bound_trivial,
        bound_thm52: vec![None; cutoffs.len()],
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the log-log fit.
    pub residual: f64,
    /// Points dropped because the value was zero.
    pub dropped: usize,
}

/// Least-squares fit of `log|value|` against `log C`.
pub fn fit_exponent(series: &SumSeries) -> Result<ExponentFit> {
    fit_points(&series.cutoffs, &series.values)
}

fn fit_points(cutoffs: &[f64], values: &[Complex64]) -> Result<ExponentFit> {
    let pts: Vec<(f64, f64)> = cutoffs
        .iter()
        .zip(values)
        .filter(|(c, v)| v.norm() > 0.0 && v.norm().is_finite() && **c > 0.0)
        .map(|(c, v)| (c.ln(), v.norm().ln()))
        .collect();
    let dropped = cutoffs.len().min(values.len()) - pts.len();
    if pts.len() < 3 {
        return Err(Error::DegenerateFit { usable: pts.len() });
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit { usable: 1 });
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    Ok(ExponentFit { slope, intercept, residual: (rss / k).sqrt(), dropped })
}

/// Slope of the fit over the first `i + 1` points, once three are available.
pub fn running_slopes(series: &SumSeries) -> Vec<Option<f64>> {
    (0..series.cutoffs.len())
        .map(|i| fit_points(&series.cutoffs[..=i], &series.values[..=i]).ok().map(|f| f.slope))
        .collect()
}

/// The explicit right-hand side of the bound for `sum_{c <= C, c = aq (Q)} S(m, n; c)/c`,
/// without the factor [`THM52_OMITTED_FACTOR`].
pub fn thm52_rhs(m: i64, n: i64, prog: &ProgressionSpec, c_cut: f64, theta: f64) -> f64 {
    let (q, level) = (prog.q, prog.level);
    let (mu, nu) = (m.unsigned_abs(), n.unsigned_abs());
    let (qf, lf) = (q as f64, level as f64);
    let (mf, nf) = (mu as f64, nu as f64);
    let mn = mf * nf;
    let g_mnq = gcd3(m, n, q) as f64;
    let g_mn = gcd(mu, nu) as f64;
    let g_qn = gcd(q, level / q) as f64;
    let qm = gcd(q, mu) as f64;
    let qn = gcd(q, nu) as f64;
    let q2_level = gcd((q as u128 * q as u128 % level as u128) as u64, level) as f64;

    let t1 = g_mnq.sqrt() / qf.sqrt();
    let t2 = g_mn / lf.sqrt();
    let t3 = g_mnq.powf(1.0 / 6.0) * g_qn.cbrt() / qf.cbrt() * c_cut.max(0.0).powf(1.0 / 6.0);
    let amp = lf.sqrt() * g_qn.sqrt() / qf.sqrt();
    let t4 = amp
        * (1.0
            + mn.sqrt() / lf
            + (mf.cbrt() * qm.powf(0.25) + nf.cbrt() * qn.powf(0.25)) / (q2_level.powf(1.0 / 12.0) * lf.sqrt())
            + mn.cbrt() * qm.powf(0.25) * qn.powf(0.25) / (q2_level.powf(1.0 / 6.0) * lf));
    let t5 = amp
        * (1.0
            + (mf.powf(0.25) * qm.powf(0.25) + nf.powf(0.25) * qn.powf(0.25)) / lf.sqrt()
            + mn.powf(0.25) * qm.powf(0.25) * qn.powf(0.25) / lf);
    let inner = 1.0 + (mf * qm + nf * qn) / mn.sqrt() * c_cut / (lf * lf) + qm * qn * c_cut * c_cut / lf.powi(4);
    t1 + t2 + t3 + t4 + t5 * inner.powf(theta)
}

/// `(m, n, q)^{1/2} (q^{-1/2} + C^{1/2} / Q)`.
pub fn trivial_bound(m: i64, n: i64, prog: &ProgressionSpec, c_cut: f64) -> f64 {
    let g = gcd3(m, n, prog.q) as f64;
    g.sqrt() * (1.0 / (prog.q as f64).sqrt() + c_cut.max(0.0).sqrt() / prog.level as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expsums::kloosterman;

    fn s(m: i64, n: i64, c: u64) -> f64 {
        kloosterman(m, n, c).re()
    }

    fn prog(a: u64, q: u64, level: u64) -> ProgressionSpec {
        ProgressionSpec::new(a, q, level).unwrap()
    }

    #[test]
    fn progression_validation() {
        assert!(ProgressionSpec::new(2, 1, 4).is_err());
        assert!(ProgressionSpec::new(1, 3, 4).is_err());
        let p = prog(5, 2, 12);
        assert_eq!(p.residue(), 10);
        assert_eq!(p.members(1, 40).collect::<Vec<_>>(), vec![10, 22, 34]);
        assert_eq!(prog(1, 4, 4).members(5, 13).collect::<Vec<_>>(), vec![8, 12]);
    }

    #[test]
    fn ap_sum_examples() {
        let v = ap_sum(1, 1, &prog(1, 1, 1), 5.0).unwrap();
        let expect = 1.0 + 1.0 / 2.0 - 1.0 / 3.0 - 2.0 / 4.0 + s(1, 1, 5) / 5.0;
        assert!((v.re - expect).abs() < 1e-12 && v.im.abs() < 1e-12);
        assert!((v.re - 0.7431).abs() < 1e-4);
        assert_eq!(ap_sum(1, 1, &prog(3, 1, 4), 2.0).unwrap(), Complex64::new(0.0, 0.0));
        let odd = ap_sum(1, 1, &prog(1, 1, 2), 5.0).unwrap();
        assert!((odd.re - (1.0 + s(1, 1, 3) / 3.0 + s(1, 1, 5) / 5.0)).abs() < 1e-12);
        assert!(ap_sum(0, 1, &prog(1, 1, 1), 5.0).is_err());
    }

    #[test]
    fn correlation_examples() {
        let one = PeriodicFunction::constant(Complex64::new(1.0, 0.0));
        let v = correlation_sum(1, 1, &one, 10.0).unwrap();
        let expect: f64 = (1..=10u64).map(|c| s(1, 1, c) / (c as f64).sqrt()).sum();
        assert!((v.re - expect).abs() < 1e-12);

        let ind = PeriodicFunction::indicator(2, 4).unwrap();
        let v = correlation_sum(1, 1, &ind, 8.0).unwrap();
        let expect = s(1, 1, 2) / 2f64.sqrt() + s(1, 1, 6) / 6f64.sqrt();
        assert!((v.re - expect).abs() < 1e-12);

        let e3 = PeriodicFunction::additive(3).unwrap();
        let v = correlation_sum(1, 1, &e3, 3.0).unwrap();
        let expect = unit(1, 3) + unit(2, 3) * (s(1, 1, 2) / 2f64.sqrt()) + s(1, 1, 3) / 3f64.sqrt();
        assert!((v - expect).norm() < 1e-12);
    }

    #[test]
    fn bump_examples() {
        let spec = BumpSpec { c_cut: 100.0, b: 10.0, mn_abs: 6 };
        let bump = build_bump(spec).unwrap();
        let r = (6f64).sqrt();
        assert_eq!(bump.eval(3.0 * PI * r / 100.0), 1.0);
        assert_eq!(bump.eval(PI * r / 100.0), 0.0);
        assert_eq!(bump.eval(2.0 * PI * r / 110.0), 0.0);
        assert_eq!(bump.eval(4.0 * PI * r / 90.0), 0.0);
        let norms = bump.norms();
        assert!((norms.d1_l1 - 2.0).abs() < 1e-6);
        assert!(norms.d1_l1 <= BUMP_C1);
        // both ramps contribute 3.75 / h
        let h_up = 2.0 * PI * r * (1.0 / 100.0 - 1.0 / 110.0);
        let h_down = 4.0 * PI * r * (1.0 / 90.0 - 1.0 / 100.0);
        assert!((norms.d2_l1 - 3.75 * (1.0 / h_up + 1.0 / h_down)).abs() < 1e-3 * norms.d2_l1);
        assert!(norms.d2_l1 <= BUMP_C2 * norms.d2_scale);
    }

    #[test]
    fn bump_rejects_bad_ramp() {
        assert!(matches!(build_bump(BumpSpec { c_cut: 10.0, b: 0.5, mn_abs: 1 }), Err(Error::InvalidBump(_))));
        assert!(matches!(build_bump(BumpSpec { c_cut: 10.0, b: 6.0, mn_abs: 1 }), Err(Error::InvalidBump(_))));
    }

    #[test]
    fn smooth_sum_matches_plateau_and_ramps() {
        let p = prog(1, 1, 1);
        let (m, n, c_cut, b) = (1i64, 2i64, 60.0, 8.0);
        let bump = build_bump(BumpSpec { c_cut, b, mn_abs: 2 }).unwrap();
        let mut expect = 0.0;
        for c in 1..400u64 {
            expect += s(m, n, c) / c as f64 * bump.weight(c as f64);
            if (60..=120).contains(&c) {
                assert_eq!(bump.weight(c as f64), 1.0);
            }
            if c <= 52 || c >= 136 {
                assert_eq!(bump.weight(c as f64), 0.0);
            }
        }
        let v = smooth_dyadic_sum(m, n, &p, c_cut, b).unwrap();
        assert!((v.re - expect).abs() < 1e-12);
    }

    #[test]
    fn decomposition_small_cases() {
        for (m, n, a, q, level, c_cut, b) in
            [(1i64, 1i64, 1u64, 1u64, 1u64, 30.0, 5.0), (1, 1, 1, 1, 4, 40.0, 5.0), (1, -1, 1, 2, 4, 60.0, 10.0)]
        {
            let check = decomposition_check(m, n, &prog(a, q, level), c_cut, b).unwrap();
            assert!(check.holds(), "{check:?}");
        }
    }

    #[test]
    fn decomposition_sign_factor() {
        // Q/q = 5 has odd characters; only i^kappa reproduces the smoothed sum
        let p = prog(2, 1, 5);
        let plus = decomposition_check_with(1, 1, &p, 40.0, 5.0, OuterFactor::PlusI).unwrap();
        let minus = decomposition_check_with(1, 1, &p, 40.0, 5.0, OuterFactor::MinusI).unwrap();
        assert!(plus.holds());
        assert!(!minus.holds());
    }

    #[test]
    fn zeta_examples() {
        assert_eq!(zeta_partial(1, 1, Complex64::new(1.0, 0.0), 0.5).unwrap(), Complex64::new(0.0, 0.0));
        let v = zeta_partial(1, 1, Complex64::new(1.0, 0.0), 4.0).unwrap();
        let expect: f64 = (1..=4u64).map(|c| s(1, 1, c) / (c * c) as f64).sum();
        assert!((v.re - expect).abs() < 1e-12);
        let big = zeta_partial(1, 1, Complex64::new(20.0, 0.0), 50.0).unwrap();
        assert!((big - Complex64::new(1.0, 0.0)).norm() < 1e-6);
        assert!(zeta_partial(1, 1, Complex64::new(0.5, 0.0), 4.0).is_err());
    }

    #[test]
    fn fit_examples() {
        let cutoffs: Vec<f64> = (0..6).map(|k| 2f64.powi(k + 3)).collect();
        let sq: Vec<Complex64> = cutoffs.iter().map(|c| Complex64::new(c.sqrt(), 0.0)).collect();
        let fit = fit_exponent(&SumSeries::from_values(cutoffs.clone(), sq).unwrap()).unwrap();
        assert!((fit.slope - 0.5).abs() < 1e-12 && fit.residual < 1e-12);
        let lin: Vec<Complex64> = cutoffs.iter().map(|c| Complex64::new(7.0 * c, 0.0)).collect();
        let fit = fit_exponent(&SumSeries::from_values(cutoffs.clone(), lin).unwrap()).unwrap();
        assert!((fit.slope - 1.0).abs() < 1e-12 && (fit.intercept - 7f64.ln()).abs() < 1e-12);
        let mut zeros = vec![Complex64::new(0.0, 0.0); 6];
        zeros[0] = Complex64::new(1.0, 0.0);
        zeros[1] = Complex64::new(2.0, 0.0);
        let err = fit_exponent(&SumSeries::from_values(cutoffs, zeros).unwrap()).unwrap_err();
        assert_eq!(err, Error::DegenerateFit { usable: 2 });
    }

    #[test]
    fn thm52_examples() {
        let p = prog(1, 1, 1);
        // 1 + 1 + C^{1/6} + (1 + 1 + 2 + 1) + (1 + 2 + 1)
        let v = thm52_rhs(1, 1, &p, 1e6, 0.0);
        assert!((v - 21.0).abs() < 1e-9);
        let with_theta = thm52_rhs(1, 1, &p, 1e6, 7.0 / 64.0);
        let inner: f64 = 1.0 + 2.0 * 1e6 + 1e12;
        assert!((with_theta - (17.0 + 4.0 * inner.powf(7.0 / 64.0))).abs() < 1e-6);
        let mut prev = 0.0;
        for k in 0..40 {
            let v = thm52_rhs(3, -2, &prog(1, 2, 6), 1.5f64.powi(k), 7.0 / 64.0);
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn trivial_bound_examples() {
        let p = prog(1, 1, 1);
        assert!((trivial_bound(1, 1, &p, 100.0) - 11.0).abs() < 1e-12);
        let p = prog(1, 4, 8);
        assert!((trivial_bound(2, 6, &p, 0.0) - (2f64).sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn series_prefixes_match_pointwise_sums() {
        let p = prog(1, 2, 6);
        let grid = geometric_grid(10.0, 1.7, 6).unwrap();
        let series = ap_series(2, -1, &p, &grid, 7.0 / 64.0).unwrap();
        for (c, v) in grid.iter().zip(&series.values) {
            assert!((ap_sum(2, -1, &p, *c).unwrap() - v).norm() < 1e-12);
        }
        let f = PeriodicFunction::additive(5).unwrap();
        let series = correlation_series(1, 3, &f, &grid).unwrap();
        for (c, v) in grid.iter().zip(&series.values) {
            assert!((correlation_sum(1, 3, &f, *c).unwrap() - v).norm() < 1e-12);
        }
        let slopes = running_slopes(&series);
        assert!(slopes[..2].iter().all(Option::is_none) && slopes[2..].iter().all(Option::is_some));
    }

    #[test]
    fn grid_validation() {
        assert!(geometric_grid(1.0, 1.0, 3).is_err());
        assert_eq!(geometric_grid(1024.0, 2.0, 3).unwrap(), vec![1024.0, 2048.0, 4096.0]);
    }
    #[test]
    fn progression_classes_partition_the_moduli() {
        for level in 1..=12u64 {
            for (m, n) in [(1i64, 1i64), (2, -1)] {
                let whole = ap_sum(m, n, &prog(1, 1, 1), 150.0).unwrap();
                let mut acc = ComplexAccumulator::new();
                for class in ProgressionSpec::all_classes(level) {
                    acc.add(ap_sum(m, n, &class, 150.0).unwrap());
                }
                assert!((acc.value() - whole).norm() < 1e-9 * 150.0, "Q = {level}");
            }
        }
    }

    #[test]
    fn correlation_with_progression_indicator() {
        let p = prog(1, 2, 6);
        let f = PeriodicFunction::indicator(p.residue() as i64, p.level).unwrap();
        let v = correlation_sum(1, 2, &f, 200.0).unwrap();
        let expect: f64 = p.members(1, 200).map(|c| s(1, 2, c) / (c as f64).sqrt()).sum();
        assert!((v.re - expect).abs() < 1e-10 && v.im.abs() < 1e-10);
    }

    #[test]
    fn zeta_tail_within_weil_bound() {
        let s15 = Complex64::new(1.5, 0.0);
        let a = zeta_partial(1, 1, s15, 1e4).unwrap();
        let b = zeta_partial(1, 1, s15, 2e4).unwrap();
        let tail: f64 = (10_001..=20_000u64).map(|c| tau(c) as f64 * (c as f64).powf(-2.5)).sum();
        assert!((a - b).norm() <= tail);
    }

    proptest::proptest! {
        #[test]
        fn ap_sum_sign_symmetry(m in 1i64..6, n in -6i64..6, a in 1u64..12, c_cut in 1.0f64..400.0) {
            proptest::prop_assume!(n != 0);
            let level = 12;
            let q = [1u64, 2, 3, 4, 6, 12][(a % 6) as usize];
            proptest::prop_assume!(gcd(a, level / q) == 1);
            let p = prog(a, q, level);
            proptest::prop_assert_eq!(ap_sum(m, n, &p, c_cut).unwrap(), ap_sum(-m, -n, &p, c_cut).unwrap());
        }
    }
}
