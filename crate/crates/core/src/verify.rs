//! Grid-driven verification suites. Each suite evaluates its cases in
//! parallel, then tallies them in a fixed order, so reports are identical
//! for any thread count.

use std::fmt;

use rayon::prelude::*;

use crate::apsums::{ap_series, decomposition_check, trivial_bound, ProgressionSpec};
use crate::characters::characters_mod;
use crate::cusp_kloosterman::{
    cor33_infty_margin, cor33_rsum_ratio, s_infty_rq, s_infty_rq_oracle, s_infty_rq_rsum, s_rq_rq, s_rq_rq_oracle,
    s_rq_rq_rsum, CuspPairSumSpec, SignSumSpec,
};
use crate::cusps::{cusp_representatives, width};
use crate::error::Result;
use crate::expsums::{
    gauss_bound, gauss_reduce, gauss_sum, kloosterman, kloosterman_fast, t_margin, t_sum, t_sum_closed_form,
    t_sum_fast, weil_margin, GaussReduction,
};
use crate::modular::{divisors, euler_phi, factorize, gcd, gcd_i64, mod_inverse};
use crate::roots::RootOfUnitySum;
use crate::tolerances::{BOUND_SLACK, DECOMPOSITION_REL, GAUSS_BOUND_SLACK, REGRESSION_REL, SUM_EQ_REL};

/// Maximum of [`cor33_rsum_ratio`] over `SignGrid::default()`, frozen as a
/// regression threshold.
pub const COR33_RSUM_RATIO_MAX: f64 = 3.7587704831436337;

/// Maximum of `|ap_sum| / trivial_bound` over `ApGrid::default()`, frozen as a
/// regression threshold.
pub const AP_TRIVIAL_RATIO_MAX: f64 = 1.3592807547143735;

/// Summary of one family of checks: every case yields a metric that passes
/// when it is at most `limit`.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckSummary {
    pub name: String,
    pub count: u64,
    pub failures: u64,
    pub worst: f64,
    pub limit: f64,
    pub worst_case: String,
    pub first_failure: Option<String>,
}

impl CheckSummary {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckSummary>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckSummary::passed)
    }

    pub fn count(&self) -> u64 {
        self.checks.iter().map(|c| c.count).sum()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.suite, if self.passed() { "pass" } else { "FAIL" })?;
        for c in &self.checks {
            write!(
                f,
                "  {}: {} cases, {} failures, worst {:.6e} (limit {:.6e}) at {}",
                c.name, c.count, c.failures, c.worst, c.limit, c.worst_case
            )?;
            if let Some(first) = &c.first_failure {
                write!(f, "; first failure {first}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// One evaluated case: its metric and a description of the inputs.
type Outcome = (f64, String);

fn summarize(name: &str, limit: f64, outcomes: Vec<Outcome>) -> CheckSummary {
    let mut s = CheckSummary {
        name: name.to_string(),
        count: 0,
        failures: 0,
        worst: f64::NEG_INFINITY,
        limit,
        worst_case: "-".to_string(),
        first_failure: None,
    };
    for (metric, label) in outcomes {
        s.count += 1;
        // NaN compares false, so it both fails and becomes the worst case
        let ok = metric <= limit;
        if !ok {
            s.failures += 1;
            if s.first_failure.is_none() {
                s.first_failure = Some(label.clone());
            }
        }
        if metric > s.worst || metric.is_nan() {
            s.worst = metric;
            s.worst_case = label;
        }
    }
    if s.count == 0 {
        s.worst = 0.0;
    }
    s
}

fn failed(label: String, err: impl fmt::Display) -> Outcome {
    (f64::INFINITY, format!("{label} ({err})"))
}

/// `|x - y| / max(1, terms)`, the relative error used by every equality check.
fn rel_delta(x: &RootOfUnitySum, y: &RootOfUnitySum) -> f64 {
    (x.value - y.value).norm() / x.term_count.max(y.term_count).max(1) as f64
}

fn evaluate<T: Sync>(cases: &[T], f: impl Fn(&T) -> Outcome + Sync + Send) -> Vec<Outcome> {
    cases.par_iter().map(f).collect()
}

/// Grid for the `(infinity, r/q)` suites.
#[derive(Debug, Clone, PartialEq)]
pub struct InftyGrid {
    pub max_level: u64,
    pub max_c: u64,
    pub values: Vec<i64>,
}

impl Default for InftyGrid {
    fn default() -> Self {
        InftyGrid { max_level: 36, max_c: 12, values: vec![-2, -1, 1, 2, 3] }
    }
}

/// Grid for the `(r/q, r/q)` suites: moduli with `c q w_q <= c_factor * Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignGrid {
    pub max_level: u64,
    pub c_factor: u64,
    pub values: Vec<i64>,
}

impl Default for SignGrid {
    fn default() -> Self {
        SignGrid { max_level: 24, c_factor: 4, values: vec![-2, -1, 1, 2] }
    }
}

fn pairs(values: &[i64]) -> Vec<(i64, i64)> {
    values.iter().flat_map(|&m| values.iter().map(move |&n| (m, n))).collect()
}

fn infty_cases(grid: &InftyGrid) -> Vec<CuspPairSumSpec> {
    let mn = pairs(&grid.values);
    let mut out = Vec::new();
    for level in 1..=grid.max_level {
        for q in divisors(level).expect("small level") {
            let big_n = level / q;
            let rs: Vec<u64> = cusp_representatives(level).into_iter().filter(|c| c.q == q).map(|c| c.r).collect();
            for chi in characters_mod(big_n) {
                for &r in &rs {
                    for c in (1..=grid.max_c).filter(|&c| gcd(c, big_n) == 1) {
                        for &(m, n) in &mn {
                            let kappa = chi.parity();
                            out.push(CuspPairSumSpec { level, q, r, chi: chi.clone(), kappa, m, n, c });
                        }
                    }
                }
            }
        }
    }
    out
}

fn infty_label(s: &CuspPairSumSpec) -> String {
    format!(
        "Q={} q={} r={} chi={:?} kappa={} m={} n={} c={}",
        s.level,
        s.q,
        s.r,
        s.chi.exponents(),
        s.kappa,
        s.m,
        s.n,
        s.c
    )
}

/// Closed form of the `(infinity, r/q)` sum against coset enumeration.
pub fn lemma23(grid: &InftyGrid) -> SuiteReport {
    let cases = infty_cases(grid);
    let outcomes = evaluate(&cases, |s| {
        let label = infty_label(s);
        match (s_infty_rq(s), s_infty_rq_oracle(s)) {
            (Ok(f), Ok(o)) => {
                let count_diff = if f.term_count == o.term_count { 0.0 } else { f64::INFINITY };
                (rel_delta(&f, &o) + count_diff, label)
            }
            (Err(e), _) | (_, Err(e)) => failed(label, e),
        }
    });
    SuiteReport { suite: "lemma23".into(), checks: vec![summarize("formula vs oracle", SUM_EQ_REL, outcomes)] }
}

/// Sum over the cusp representatives against the classical Kloosterman sum.
pub fn rsum23(grid: &InftyGrid) -> SuiteReport {
    let mut cases = infty_cases(grid);
    cases.retain(|s| cusp_representatives(s.level).iter().find(|c| c.q == s.q).map(|c| c.r) == Some(s.r));
    let outcomes = evaluate(&cases, |s| {
        let label = format!("Q={} q={} chi={:?} m={} n={} c={}", s.level, s.q, s.chi.exponents(), s.m, s.n, s.c);
        match s_infty_rq_rsum(s.level, s.q, &s.chi, s.kappa, s.m, s.n, s.c) {
            Ok(check) => (check.delta() / check.term_count().max(1) as f64, label),
            Err(e) => failed(label, e),
        }
    });
    SuiteReport { suite: "rsum23".into(), checks: vec![summarize("r-sum identity", SUM_EQ_REL, outcomes)] }
}

fn sign_cases(grid: &SignGrid, all_r: bool) -> Vec<SignSumSpec> {
    let mn = pairs(&grid.values);
    let mut out = Vec::new();
    for level in 1..=grid.max_level {
        for q in divisors(level).expect("small level") {
            let big_n = level / q;
            let w = width(level, q).expect("q divides Q");
            let mut rs: Vec<u64> = cusp_representatives(level).into_iter().filter(|c| c.q == q).map(|c| c.r).collect();
            if !all_r {
                rs.truncate(1);
            }
            let cs: Vec<u64> = (1..)
                .take_while(|&c| c * q * w <= grid.c_factor * level)
                .filter(|&c| (c * q * w) % level == 0)
                .collect();
            for kappa in 0..=u8::from(big_n > 2) {
                for &r in &rs {
                    for &c in &cs {
                        for &(m, n) in &mn {
                            out.push(SignSumSpec { level, q, r, kappa, m, n, c });
                        }
                    }
                }
            }
        }
    }
    out
}

fn sign_label(s: &SignSumSpec) -> String {
    format!("Q={} q={} r={} kappa={} m={} n={} c={}", s.level, s.q, s.r, s.kappa, s.m, s.n, s.c)
}

/// Collapsed `(r/q, r/q)` sums against coset enumeration.
pub fn lemma24(grid: &SignGrid) -> SuiteReport {
    let cases = sign_cases(grid, true);
    let outcomes = evaluate(&cases, |s| {
        let label = sign_label(s);
        match (s_rq_rq(s), s_rq_rq_oracle(s)) {
            (Ok(f), Ok(o)) => (rel_delta(&f, &o), label),
            (Err(e), _) | (_, Err(e)) => failed(label, e),
        }
    });
    SuiteReport { suite: "lemma24".into(), checks: vec![summarize("formula vs oracle", SUM_EQ_REL, outcomes)] }
}

/// Moebius-inverted expression for the sum over representatives.
pub fn rsum24(grid: &SignGrid) -> SuiteReport {
    let cases = sign_cases(grid, false);
    let outcomes = evaluate(&cases, |s| {
        let label = format!("Q={} q={} kappa={} m={} n={} c={}", s.level, s.q, s.kappa, s.m, s.n, s.c);
        match s_rq_rq_rsum(s.level, s.q, s.kappa, s.m, s.n, s.c) {
            Ok(check) => (check.delta() / check.term_count().max(1) as f64, label),
            Err(e) => failed(label, e),
        }
    });
    SuiteReport { suite: "rsum24".into(), checks: vec![summarize("Moebius r-sum", SUM_EQ_REL, outcomes)] }
}

/// `|S(m, n; c)| <= tau(c) (m, n, c)^{1/2} c^{1/2}` for `c <= max_c`, `|m|, |n| <= range`.
pub fn weil(max_c: u64, range: i64) -> SuiteReport {
    let mn: Vec<(i64, i64)> =
        pairs(&(-range..=range).collect::<Vec<_>>()).into_iter().filter(|&(m, n)| (m, n) != (0, 0)).collect();
    let cs: Vec<u64> = (1..=max_c).collect();
    let outcomes: Vec<Outcome> = cs
        .par_iter()
        .flat_map_iter(|&c| {
            mn.iter().map(move |&(m, n)| {
                let label = format!("m={m} n={n} c={c}");
                match weil_margin(m, n, c) {
                    Ok(v) => (v, label),
                    Err(e) => failed(label, e),
                }
            })
        })
        .collect();
    SuiteReport { suite: "weil".into(), checks: vec![summarize("Weil margin", 1.0 + BOUND_SLACK, outcomes)] }
}

/// Vanishing, reduction and the bound `(a, c)^{1/2} c^{1/2}` (times `sqrt 2` for even
/// reduced modulus) for quadratic Gauss sums with `|a|, |b| <= range`, `c <= max_c`.
pub fn gauss(max_c: u64, range: i64) -> SuiteReport {
    let ab = pairs(&(-range..=range).collect::<Vec<_>>());
    let cs: Vec<u64> = (1..=max_c).collect();
    let rows: Vec<[Option<Outcome>; 3]> = cs
        .par_iter()
        .flat_map_iter(|&c| {
            ab.iter().map(move |&(a, b)| {
                let label = format!("a={a} b={b} c={c}");
                let g = gauss_sum(a, b, c);
                let scale = c as f64;
                let vanish = match gauss_reduce(a, b, c) {
                    GaussReduction::Vanishes => Some((g.abs() / scale, label.clone())),
                    GaussReduction::Reduced { .. } => None,
                };
                let reduce = match gauss_reduce(a, b, c) {
                    GaussReduction::Vanishes => None,
                    GaussReduction::Reduced { scale: k, a: a2, b: b2, c: c2 } => {
                        let h = gauss_sum(a2, b2, c2).scale(k);
                        Some(((g.value - h.value).norm() / scale, label.clone()))
                    }
                };
                let bound = Some((g.abs() / gauss_bound(a, c), label));
                [vanish, reduce, bound]
            })
        })
        .collect();
    let column = |k: usize| rows.iter().filter_map(|r| r[k].clone()).collect::<Vec<_>>();
    SuiteReport {
        suite: "gauss".into(),
        checks: vec![
            summarize("vanishing |G|/c", SUM_EQ_REL, column(0)),
            summarize("reduction |G - G'|/c", SUM_EQ_REL, column(1)),
            summarize("bound margin", 1.0 + GAUSS_BOUND_SLACK, column(2)),
        ],
    }
}

/// Parameters of the restricted-sum suite.
#[derive(Debug, Clone, PartialEq)]
pub struct TGrid {
    pub max_c: u64,
    pub f_max: i64,
    pub range: i64,
    pub max_prime_power: u64,
}

impl Default for TGrid {
    fn default() -> Self {
        TGrid { max_c: 1000, f_max: 10, range: 3, max_prime_power: 2048 }
    }
}

/// Residues `f mod q` of `1..=f_max` coprime to `q`, without repeats.
pub fn f_values(q: u64, f_max: i64) -> Vec<i64> {
    let mut out: Vec<i64> =
        (1..=f_max).filter(|&f| gcd_i64(f, q as i64) == 1).map(|f| f.rem_euclid(q as i64)).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// `T_f` bound, twisted multiplicativity of `S` and the `T_f` closed form on prime powers.
pub fn tbound(grid: &TGrid) -> SuiteReport {
    let values: Vec<i64> = (-grid.range..=grid.range).collect();
    let mn = pairs(&values);
    let cs: Vec<u64> = (1..=grid.max_c).collect();

    let bound: Vec<Outcome> = cs
        .par_iter()
        .flat_map_iter(|&c| {
            let mut out = Vec::new();
            for q in divisors(c).expect("small c") {
                for f in f_values(q, grid.f_max) {
                    for &(m, n) in &mn {
                        if (m, n) == (0, 0) {
                            continue;
                        }
                        let label = format!("m={m} n={n} q={q} c={c} f={f}");
                        out.push(match t_margin(m, n, q, c, f) {
                            Ok(v) => (v, label),
                            Err(e) => failed(label, e),
                        });
                    }
                }
            }
            out
        })
        .collect();

    let mult: Vec<Outcome> = cs
        .par_iter()
        .flat_map_iter(|&c| {
            let mut out = Vec::new();
            let pps: Vec<u64> = factorize(c).prime_powers().map(|(_, _, pe)| pe).collect();
            // every coprime split c = c1 c2 with c1 < c2
            for mask in 0..(1u32 << pps.len()) {
                let c1: u64 = pps.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| p).product();
                let c2 = c / c1;
                if c1 >= c2 {
                    continue;
                }
                let i1 = mod_inverse(c1 as i64, c2).expect("coprime") as i64;
                let i2 = mod_inverse(c2 as i64, c1).expect("coprime") as i64;
                for &(m, n) in &mn {
                    let whole = kloosterman(m, n, c);
                    let prod = kloosterman(m * i2, n * i2, c1).product(kloosterman(m * i1, n * i1, c2));
                    out.push((rel_delta(&whole, &prod), format!("m={m} n={n} c={c1}*{c2}")));
                }
            }
            out
        })
        .collect();

    let mut local = Vec::new();
    for p in (2..=grid.max_prime_power).filter(|&p| crate::modular::is_prime(p)) {
        let mut alpha = 1u32;
        while p.pow(alpha) <= grid.max_prime_power {
            for gamma in alpha.div_ceil(2)..=alpha {
                local.push((p, gamma, alpha));
            }
            alpha += 1;
        }
    }
    let closed: Vec<Outcome> = local
        .par_iter()
        .flat_map_iter(|&(p, gamma, alpha)| {
            let mut out = Vec::new();
            let (pg, pa) = (p.pow(gamma), p.pow(alpha));
            for f in f_values(pg, grid.f_max) {
                for &(m, n) in &mn {
                    let label = format!("m={m} n={n} p={p} gamma={gamma} alpha={alpha} f={f}");
                    out.push(match (t_sum_closed_form(m, n, p, gamma, alpha, f), t_sum(m, n, pg, pa, f)) {
                        (Ok(Some(x)), Ok(y)) => (rel_delta(&x, &y), label),
                        (Ok(None), _) => failed(label, "closed form not applicable"),
                        (Err(e), _) | (_, Err(e)) => failed(label, e),
                    });
                }
            }
            out
        })
        .collect();

    SuiteReport {
        suite: "tbound".into(),
        checks: vec![
            summarize("T_f bound margin", 1.0 + BOUND_SLACK, bound),
            summarize("twisted multiplicativity", SUM_EQ_REL, mult),
            summarize("closed form vs direct", SUM_EQ_REL, closed),
        ],
    }
}

/// The first bound has explicit constants; the second is compared with the
/// frozen grid maximum `rsum_ratio_max`.
pub fn cor33(grid: &SignGrid, rsum_ratio_max: f64) -> SuiteReport {
    let mn = pairs(&grid.values);
    let mut infty = Vec::new();
    for level in 1..=grid.max_level {
        for q in divisors(level).expect("small level") {
            for kappa in 0..=u8::from(level / q > 2) {
                for k in 1..=grid.c_factor {
                    for &(m, n) in &mn {
                        infty.push((level, q, kappa, m, n, k * level));
                    }
                }
            }
        }
    }
    let first = evaluate(&infty, |&(level, q, kappa, m, n, c)| {
        let label = format!("Q={level} q={q} kappa={kappa} m={m} n={n} c={c}");
        match cor33_infty_margin(level, q, kappa, m, n, c) {
            Ok(v) => (v, label),
            Err(e) => failed(label, e),
        }
    });
    let cases = sign_cases(grid, false);
    let second = evaluate(&cases, |s| {
        let label = format!("Q={} q={} kappa={} m={} n={} c={}", s.level, s.q, s.kappa, s.m, s.n, s.c);
        match cor33_rsum_ratio(s.level, s.q, s.kappa, s.m, s.n, s.c) {
            Ok(v) => (v, label),
            Err(e) => failed(label, e),
        }
    });
    SuiteReport {
        suite: "cor33".into(),
        checks: vec![
            summarize("infinity bound margin", 1.0 + BOUND_SLACK, first),
            summarize("r-sum ratio vs frozen max", rsum_ratio_max * (1.0 + REGRESSION_REL), second),
        ],
    }
}

/// `sum_chi chi(a) conj(chi(c))` is exactly `phi(N) [a = c, (a, N) = 1]` for all residues.
pub fn orthogonality(max_n: u64) -> SuiteReport {
    let ns: Vec<u64> = (1..=max_n).collect();
    let outcomes: Vec<Outcome> = ns
        .par_iter()
        .flat_map_iter(|&big_n| {
            let chars = characters_mod(big_n);
            let phi = euler_phi(big_n) as i64;
            let count_ok = chars.len() as i64 == phi;
            let mut out = Vec::new();
            for a in 0..big_n as i64 {
                for c in 0..big_n as i64 {
                    let expect = if a == c && gcd_i64(a, big_n as i64) == 1 { phi } else { 0 };
                    let got = crate::characters::orthogonality_sum_exact(&chars, a, c);
                    let metric = if count_ok && got == Some(expect) { 0.0 } else { f64::INFINITY };
                    out.push((metric, format!("N={big_n} a={a} c={c} got={got:?} expected={expect}")));
                }
            }
            out
        })
        .collect();
    SuiteReport { suite: "orthogonality".into(), checks: vec![summarize("exact orthogonality", 0.0, outcomes)] }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionCase {
    pub m: i64,
    pub n: i64,
    pub prog: ProgressionSpec,
    pub c_cut: f64,
    pub b: f64,
}

/// Every class `(a, q)` with `Q <= max_level`, `m in ms`, `n in ns`, each cutoff and `B = C/8`.
pub fn decomposition_grid(max_level: u64, ms: &[i64], ns: &[i64], cutoffs: &[f64]) -> Vec<DecompositionCase> {
    let mut out = Vec::new();
    for level in 1..=max_level {
        for prog in ProgressionSpec::all_classes(level) {
            for &m in ms {
                for &n in ns {
                    for &c_cut in cutoffs {
                        out.push(DecompositionCase { m, n, prog, c_cut, b: c_cut / 8.0 });
                    }
                }
            }
        }
    }
    out
}

pub fn decomposition(cases: &[DecompositionCase]) -> SuiteReport {
    let outcomes = evaluate(cases, |k| {
        let label =
            format!("m={} n={} a={} q={} Q={} C={} B={}", k.m, k.n, k.prog.a, k.prog.q, k.prog.level, k.c_cut, k.b);
        match decomposition_check(k.m, k.n, &k.prog, k.c_cut, k.b) {
            Ok(d) => (d.delta / d.terms.max(1) as f64, label),
            Err(e) => failed(label, e),
        }
    });
    SuiteReport { suite: "decomposition".into(), checks: vec![summarize("delta / terms", DECOMPOSITION_REL, outcomes)] }
}

/// Fast evaluators against direct enumeration: `kloosterman_fast` for every `c`
/// in `kloosterman_cs`, and `t_sum_fast` for every `(q, c, f)` in `t_cases`.
pub fn fastpath(kloosterman_cs: &[u64], t_cases: &[(u64, u64, i64)], values: &[i64]) -> SuiteReport {
    let mn = pairs(values);
    let k: Vec<Outcome> = kloosterman_cs
        .par_iter()
        .flat_map_iter(|&c| {
            mn.iter().map(move |&(m, n)| {
                (rel_delta(&kloosterman_fast(m, n, c), &kloosterman(m, n, c)), format!("m={m} n={n} c={c}"))
            })
        })
        .collect();
    let t: Vec<Outcome> = t_cases
        .par_iter()
        .flat_map_iter(|&(q, c, f)| {
            mn.iter().map(move |&(m, n)| {
                let label = format!("m={m} n={n} q={q} c={c} f={f}");
                match (t_sum_fast(m, n, q, c, f), t_sum(m, n, q, c, f)) {
                    (Ok(x), Ok(y)) => (rel_delta(&x, &y), label),
                    (Err(e), _) | (_, Err(e)) => failed(label, e),
                }
            })
        })
        .collect();
    SuiteReport {
        suite: "fastpath".into(),
        checks: vec![
            summarize("kloosterman_fast vs direct", SUM_EQ_REL, k),
            summarize("t_sum_fast vs direct", SUM_EQ_REL, t),
        ],
    }
}

/// All `(q, c, f)` with `c <= max_c`, `q | c` and `f` from [`f_values`].
pub fn t_cases_exhaustive(max_c: u64, f_max: i64) -> Vec<(u64, u64, i64)> {
    let mut out = Vec::new();
    for c in 1..=max_c {
        for q in divisors(c).expect("small c") {
            for f in f_values(q, f_max) {
                out.push((q, c, f));
            }
        }
    }
    out
}

/// Maximum of [`crate::cusp_kloosterman::cor33_rsum_ratio`] over the grid,
/// the quantity frozen as a regression constant.
pub fn cor33_rsum_ratio_max(grid: &SignGrid) -> Result<f64> {
    let cases = sign_cases(grid, false);
    let ratios: Vec<Result<f64>> =
        cases.par_iter().map(|s| cor33_rsum_ratio(s.level, s.q, s.kappa, s.m, s.n, s.c)).collect();
    let mut worst: f64 = 0.0;
    for r in ratios {
        worst = worst.max(r?);
    }
    Ok(worst)
}

/// Grid for the ratio `|ap_sum| / trivial_bound`.
#[derive(Debug, Clone, PartialEq)]
pub struct ApGrid {
    pub max_level: u64,
    pub values: Vec<i64>,
    pub cutoffs: Vec<f64>,
}

impl Default for ApGrid {
    fn default() -> Self {
        ApGrid { max_level: 12, values: vec![-2, -1, 1, 2, 3], cutoffs: (4..=10).map(|k| 2f64.powi(k)).collect() }
    }
}

fn ap_trivial_outcomes(grid: &ApGrid) -> Vec<Outcome> {
    let mut cases = Vec::new();
    for level in 1..=grid.max_level {
        for prog in ProgressionSpec::all_classes(level) {
            for &(m, n) in &pairs(&grid.values) {
                cases.push((m, n, prog));
            }
        }
    }
    cases
        .par_iter()
        .flat_map_iter(|&(m, n, prog)| {
            let label = |c: f64| format!("m={m} n={n} a={} q={} Q={} C={c}", prog.a, prog.q, prog.level);
            match ap_series(m, n, &prog, &grid.cutoffs, 0.0) {
                Ok(series) => series
                    .cutoffs
                    .iter()
                    .zip(&series.values)
                    .map(|(&c, v)| (v.norm() / trivial_bound(m, n, &prog, c), label(c)))
                    .collect::<Vec<_>>(),
                Err(e) => vec![failed(label(0.0), e)],
            }
        })
        .collect()
}

/// Maximum of `|ap_sum| / trivial_bound` over the grid.
pub fn ap_trivial_ratio_max(grid: &ApGrid) -> f64 {
    ap_trivial_outcomes(grid).into_iter().map(|o| o.0).fold(0.0, f64::max)
}

/// `|ap_sum| / trivial_bound` against the frozen grid maximum `ratio_max`.
pub fn ap_trivial(grid: &ApGrid, ratio_max: f64) -> SuiteReport {
    SuiteReport {
        suite: "aptrivial".into(),
        checks: vec![summarize("ratio vs frozen max", ratio_max * (1.0 + REGRESSION_REL), ap_trivial_outcomes(grid))],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_tracks_worst_and_failures() {
        let s = summarize("x", 1.0, vec![(0.5, "a".into()), (2.0, "b".into()), (0.9, "c".into()), (3.0, "d".into())]);
        assert_eq!((s.count, s.failures), (4, 2));
        assert_eq!(s.worst, 3.0);
        assert_eq!(s.worst_case, "d");
        assert_eq!(s.first_failure.as_deref(), Some("b"));
        let nan = summarize("x", 1.0, vec![(0.5, "a".into()), (f64::NAN, "n".into())]);
        assert!(!nan.passed() && nan.worst.is_nan());
        assert!(summarize("x", 1.0, vec![]).passed());
    }

    #[test]
    fn small_suites_pass() {
        let grid = InftyGrid { max_level: 8, max_c: 4, values: vec![-1, 2] };
        assert!(lemma23(&grid).passed());
        assert!(rsum23(&grid).passed());
        let grid = SignGrid { max_level: 10, c_factor: 2, values: vec![-1, 2] };
        assert!(lemma24(&grid).passed());
        assert!(rsum24(&grid).passed());
        assert!(weil(60, 2).passed());
        assert!(gauss(40, 3).passed());
        assert!(orthogonality(16).passed());
        let t = TGrid { max_c: 40, f_max: 4, range: 1, max_prime_power: 64 };
        assert!(tbound(&t).passed());
    }

    #[test]
    fn f_values_are_reduced_units() {
        assert_eq!(f_values(1, 10), vec![0]);
        assert_eq!(f_values(4, 10), vec![1, 3]);
        assert_eq!(f_values(12, 10), vec![1, 5, 7]);
    }

    #[test]
    fn report_is_independent_of_thread_count() {
        let grid = SignGrid { max_level: 9, c_factor: 2, values: vec![1, -2] };
        let run =
            |threads| rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| lemma24(&grid));
        assert_eq!(run(1), run(4));
    }
}
