use anyhow::ensure;
use clap::{Args, ValueEnum};
use expsum::apsums::ProgressionSpec;
use expsum::verify::{
    self, decomposition_grid, DecompositionCase, InftyGrid, SignGrid, SuiteReport, TGrid, COR33_RSUM_RATIO_MAX,
};

use crate::Status;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Lemma23,
    Lemma24,
    Rsum23,
    Rsum24,
    Weil,
    Gauss,
    Tbound,
    Cor33,
    Orthogonality,
    Decomposition,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,

    /// Largest level Q (cusp suites).
    #[arg(long = "max-Q")]
    pub max_level: Option<u64>,

    /// Largest modulus c (lemma23, rsum23, weil, gauss, tbound).
    #[arg(long = "max-c")]
    pub max_c: Option<u64>,

    /// Values taken by m and n, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub values: Vec<i64>,

    /// Bound on |m|, |n| (weil, tbound) or |a|, |b| (gauss).
    #[arg(long)]
    pub range: Option<i64>,

    /// Moduli with c q w_q <= FACTOR * Q (lemma24, rsum24, cor33).
    #[arg(long = "c-factor")]
    pub c_factor: Option<u64>,

    /// Residues f are taken from 1..=F_MAX (tbound).
    #[arg(long = "f-max")]
    pub f_max: Option<i64>,

    /// Largest prime power for the closed-form check (tbound).
    #[arg(long = "max-prime-power")]
    pub max_prime_power: Option<u64>,

    /// Largest character modulus (orthogonality).
    #[arg(long = "max-N")]
    pub max_n: Option<u64>,

    /// Single decomposition case: level; the full grid runs when omitted.
    #[arg(long = "Q")]
    pub level: Option<u64>,
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub a: Option<u64>,
    #[arg(long = "C")]
    pub c_cut: Option<f64>,
    #[arg(long = "B")]
    pub b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub n: Option<i64>,
}

fn positive(name: &str, v: Option<u64>, default: u64) -> anyhow::Result<u64> {
    let v = v.unwrap_or(default);
    ensure!(v > 0, "precondition violated: {name} must be positive");
    Ok(v)
}

fn values_or(args: &VerifyArgs, default: Vec<i64>) -> Vec<i64> {
    if args.values.is_empty() {
        default
    } else {
        args.values.clone()
    }
}

fn decomposition_cases(args: &VerifyArgs) -> anyhow::Result<Vec<DecompositionCase>> {
    let Some(level) = args.level else {
        let max_level = positive("--max-Q", args.max_level, 12)?;
        return Ok(decomposition_grid(max_level, &[1, 2], &[-2, -1, 1, 2], &[40.0, 80.0]));
    };
    let prog = ProgressionSpec::new(args.a.unwrap_or(1), args.q.unwrap_or(1), level)?;
    let c_cut = args.c_cut.unwrap_or(40.0);
    Ok(vec![DecompositionCase {
        m: args.m.unwrap_or(1),
        n: args.n.unwrap_or(1),
        prog,
        c_cut,
        b: args.b.unwrap_or(c_cut / 8.0),
    }])
}

pub fn report(args: &VerifyArgs) -> anyhow::Result<SuiteReport> {
    let infty = || -> anyhow::Result<InftyGrid> {
        let d = InftyGrid::default();
        Ok(InftyGrid {
            max_level: positive("--max-Q", args.max_level, d.max_level)?,
            max_c: positive("--max-c", args.max_c, d.max_c)?,
            values: values_or(args, d.values),
        })
    };
    let sign = || -> anyhow::Result<SignGrid> {
        let d = SignGrid::default();
        Ok(SignGrid {
            max_level: positive("--max-Q", args.max_level, d.max_level)?,
            c_factor: positive("--c-factor", args.c_factor, d.c_factor)?,
            values: values_or(args, d.values),
        })
    };
    let range = |default: i64| -> anyhow::Result<i64> {
        let r = args.range.unwrap_or(default);
        ensure!(r >= 0, "precondition violated: --range must be non-negative");
        Ok(r)
    };
    Ok(match args.suite {
        Suite::Lemma23 => verify::lemma23(&infty()?),
        Suite::Rsum23 => verify::rsum23(&infty()?),
        Suite::Lemma24 => verify::lemma24(&sign()?),
        Suite::Rsum24 => verify::rsum24(&sign()?),
        Suite::Cor33 => verify::cor33(&sign()?, COR33_RSUM_RATIO_MAX),
        Suite::Weil => verify::weil(positive("--max-c", args.max_c, 2000)?, range(5)?),
        Suite::Gauss => verify::gauss(positive("--max-c", args.max_c, 500)?, range(6)?),
        Suite::Tbound => {
            let d = TGrid::default();
            verify::tbound(&TGrid {
                max_c: positive("--max-c", args.max_c, d.max_c)?,
                f_max: args.f_max.unwrap_or(d.f_max),
                range: range(d.range)?,
                max_prime_power: positive("--max-prime-power", args.max_prime_power, d.max_prime_power)?,
            })
        }
        Suite::Orthogonality => verify::orthogonality(positive("--max-N", args.max_n, 60)?),
        Suite::Decomposition => verify::decomposition(&decomposition_cases(args)?),
    })
}

pub fn run(args: &VerifyArgs) -> anyhow::Result<Status> {
    let report = report(args)?;
    print!("{report}");
    Ok(if report.passed() { Status::Ok } else { Status::VerificationFailed })
}
