use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{bail, ensure, Context};
use clap::{Args, ValueEnum};
use expsum::apsums::{
    ap_series, correlation_series, fit_exponent, geometric_grid, running_slopes, PeriodicFunction, ProgressionSpec,
    SumSeries,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::output::{float, opt_float};
use crate::Status;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, allow_hyphen_values = true, required_unless_present = "self_test")]
    pub m: Option<i64>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "self_test")]
    pub n: Option<i64>,

    /// Progression c = a q (mod Q); defaults to all c.
    #[arg(long, conflicts_with = "periodic")]
    pub a: Option<u64>,
    #[arg(long, conflicts_with = "periodic")]
    pub q: Option<u64>,
    #[arg(long = "Q", conflicts_with = "periodic")]
    pub level: Option<u64>,

    /// Weight F: `e:P` for e(c/P), `ind:a,P` for c = a (mod P), or `file:PATH`
    /// with one `re im` pair per line.
    #[arg(long)]
    pub periodic: Option<String>,

    /// Cutoff grid `geometric:start,ratio,count`.
    #[arg(long, default_value = "geometric:1024,2,8")]
    pub grid: String,

    /// Exponent toward the Selberg eigenvalue conjecture in the progression bound.
    #[arg(long, default_value_t = 7.0 / 64.0)]
    pub theta: f64,

    #[arg(long, value_enum, default_value = "csv")]
    pub format: SweepFormat,

    /// Write the series here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,

    /// Sweep the exact series C^{1/2} instead of a sum; fails unless the fit returns slope 1/2.
    #[arg(long)]
    pub self_test: bool,
}

/// Inputs of a sweep, repeated in every JSON record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub m: Option<i64>,
    pub n: Option<i64>,
    pub a: Option<u64>,
    pub q: Option<u64>,
    #[serde(rename = "Q")]
    pub level: Option<u64>,
    pub periodic: Option<String>,
    pub grid: String,
    pub theta: f64,
    pub self_test: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    #[serde(flatten)]
    pub config: SweepConfig,
    #[serde(rename = "C")]
    pub cutoff: f64,
    pub re: f64,
    pub im: f64,
    pub abs: f64,
    pub bound_trivial: Option<f64>,
    pub bound_thm52: Option<f64>,
    pub slope_running: Option<f64>,
}

impl SweepArgs {
    pub fn config(&self) -> SweepConfig {
        SweepConfig {
            m: self.m,
            n: self.n,
            a: self.a,
            q: self.q,
            level: self.level,
            periodic: self.periodic.clone(),
            grid: self.grid.clone(),
            theta: self.theta,
            self_test: self.self_test,
        }
    }
}

pub fn parse_grid(spec: &str) -> anyhow::Result<Vec<f64>> {
    let Some(rest) = spec.strip_prefix("geometric:") else {
        bail!("usage: grid must look like geometric:start,ratio,count, got {spec:?}");
    };
    let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
    ensure!(parts.len() == 3, "usage: grid must look like geometric:start,ratio,count, got {spec:?}");
    let start: f64 = parts[0].parse().context("grid start")?;
    let ratio: f64 = parts[1].parse().context("grid ratio")?;
    let count: usize = parts[2].parse().context("grid count")?;
    ensure!(count > 0, "precondition violated: grid count must be positive");
    Ok(geometric_grid(start, ratio, count)?)
}

pub fn parse_periodic(spec: &str) -> anyhow::Result<PeriodicFunction> {
    if let Some(p) = spec.strip_prefix("e:") {
        return Ok(PeriodicFunction::additive(p.trim().parse().context("period of e:P")?)?);
    }
    if let Some(rest) = spec.strip_prefix("ind:") {
        let (a, p) = rest.split_once(',').context("usage: ind:a,P")?;
        return Ok(PeriodicFunction::indicator(
            a.trim().parse().context("residue of ind:a,P")?,
            p.trim().parse().context("period of ind:a,P")?,
        )?);
    }
    let path = spec.strip_prefix("file:").unwrap_or(spec);
    let text = std::fs::read_to_string(path).with_context(|| format!("reading periodic values from {path}"))?;
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let nums: Vec<f64> = line
            .split(|ch: char| ch == ',' || ch.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect::<Result<_, _>>()
            .with_context(|| format!("{path}:{}: expected `re im`", i + 1))?;
        ensure!(nums.len() == 2, "{path}:{}: expected `re im`", i + 1);
        values.push(Complex64::new(nums[0], nums[1]));
    }
    Ok(PeriodicFunction::from_values(values)?)
}

fn build_series(args: &SweepArgs, cutoffs: &[f64]) -> anyhow::Result<SumSeries> {
    if args.self_test {
        let values = cutoffs.iter().map(|c| Complex64::new(c.sqrt(), 0.0)).collect();
        return Ok(SumSeries::from_values(cutoffs.to_vec(), values)?);
    }
    let (m, n) = (args.m.expect("required by clap"), args.n.expect("required by clap"));
    ensure!((0.0..=0.25).contains(&args.theta), "precondition violated: theta must lie in [0, 1/4]");
    if let Some(spec) = &args.periodic {
        return Ok(correlation_series(m, n, &parse_periodic(spec)?, cutoffs)?);
    }
    let prog = ProgressionSpec::new(args.a.unwrap_or(1), args.q.unwrap_or(1), args.level.unwrap_or(1))?;
    Ok(ap_series(m, n, &prog, cutoffs, args.theta)?)
}

pub fn records(args: &SweepArgs) -> anyhow::Result<(Vec<SweepRecord>, SumSeries)> {
    let cutoffs = parse_grid(&args.grid)?;
    let series = build_series(args, &cutoffs)?;
    let slopes = running_slopes(&series);
    let config = args.config();
    let records = (0..series.cutoffs.len())
        .map(|i| {
            let v = series.values[i];
            let trivial = series.bound_trivial[i];
            SweepRecord {
                config: config.clone(),
                cutoff: series.cutoffs[i],
                re: v.re,
                im: v.im,
                abs: v.norm(),
                bound_trivial: trivial.is_finite().then_some(trivial),
                bound_thm52: series.bound_thm52[i],
                slope_running: slopes[i],
            }
        })
        .collect();
    Ok((records, series))
}

pub fn render(records: &[SweepRecord], format: SweepFormat) -> anyhow::Result<String> {
    let mut out = String::new();
    match format {
        SweepFormat::Csv => {
            out.push_str("C,re,im,abs,bound_trivial,bound_thm52,slope_running\n");
            for r in records {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    float(r.cutoff),
                    float(r.re),
                    float(r.im),
                    float(r.abs),
                    opt_float(r.bound_trivial),
                    opt_float(r.bound_thm52),
                    opt_float(r.slope_running)
                )?;
            }
        }
        SweepFormat::Json => {
            for r in records {
                out.push_str(&serde_json::to_string(r)?);
                out.push('\n');
            }
        }
    }
    Ok(out)
}

pub fn run(args: &SweepArgs) -> anyhow::Result<Status> {
    let (records, series) = records(args)?;
    let text = render(&records, args.format)?;
    match &args.output {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    let fit = fit_exponent(&series);
    let max_ratio = records
        .iter()
        .filter_map(|r| r.bound_thm52.map(|b| r.abs / b))
        .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.max(x))));
    match &fit {
        Ok(f) => eprintln!(
            "slope = {}, intercept = {}, residual = {}, dropped = {}, max |value|/thm52 = {}",
            float(f.slope),
            float(f.intercept),
            float(f.residual),
            f.dropped,
            opt_float(max_ratio)
        ),
        Err(e) => eprintln!("fit unavailable: {e}; max |value|/thm52 = {}", opt_float(max_ratio)),
    }
    if args.self_test {
        let ok = matches!(fit, Ok(f) if (f.slope - 0.5).abs() <= 1e-12 && f.residual <= 1e-12);
        return Ok(if ok { Status::Ok } else { Status::VerificationFailed });
    }
    Ok(Status::Ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("geometric:1024,2,3").unwrap(), vec![1024.0, 2048.0, 4096.0]);
        assert!(parse_grid("geometric:1024,2").is_err());
        assert!(parse_grid("geometric:1024,1,3").is_err());
        assert!(parse_grid("geometric:1,2,0").is_err());
        assert!(parse_grid("arith:1,2,3").is_err());
    }

    #[test]
    fn periodic_parsing() {
        let e = parse_periodic("e:4").unwrap();
        assert_eq!(e.period(), 4);
        assert!((e.eval(1) - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        let ind = parse_periodic("ind:-1,5").unwrap();
        assert_eq!(ind.eval(4), Complex64::new(1.0, 0.0));
        assert_eq!(ind.eval(9), Complex64::new(1.0, 0.0));
        assert_eq!(ind.eval(3), Complex64::new(0.0, 0.0));
        assert!(parse_periodic("e:0").is_err());
        assert!(parse_periodic("ind:1").is_err());
        assert!(parse_periodic("file:/nonexistent/values.txt").is_err());
    }
}
