use anyhow::{anyhow, Context};
use clap::{Args, Subcommand};
use expsum::characters::{CharacterGroup, DirichletCharacter};
use expsum::cusp_kloosterman::{
    cor33_infty_margin, s_gamma01_infty_infty, s_infty_rq, s_rq_rq, CuspPairSumSpec, SignSumSpec,
};
use expsum::expsums::{gauss_bound, gauss_sum, kloosterman_fast, t_margin, t_sum_fast, weil_margin};
use expsum::roots::RootOfUnitySum;
use serde::{Deserialize, Serialize};

use crate::output::{float, opt_float, Format};
use crate::Status;

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(subcommand)]
    pub kind: EvalKind,

    /// `text` prints one line per field, `json` one record.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EvalKind {
    /// S(m, n; c).
    Kloosterman {
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long)]
        c: u64,
    },
    /// Quadratic Gauss sum G(a, b; c).
    Gauss {
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
        #[arg(long)]
        c: u64,
    },
    /// T_f(m, n; q | c).
    Tsum {
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        c: u64,
        #[arg(long, allow_hyphen_values = true)]
        f: i64,
    },
    /// Cusp pair (infinity, r/q) with a character modulo Q/q.
    CuspInftyRq {
        #[arg(long = "Q")]
        #[serde(rename = "Q")]
        level: u64,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 1)]
        r: u64,
        /// Exponents of the character on the generators of (Z/(Q/q))^*; principal when omitted.
        #[arg(long, value_delimiter = ',')]
        chi: Vec<u64>,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long)]
        c: u64,
    },
    /// Cusp pair (r/q, r/q) with the sign multiplier.
    CuspRqRq {
        #[arg(long = "Q")]
        #[serde(rename = "Q")]
        level: u64,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 1)]
        r: u64,
        #[arg(long, default_value_t = 0)]
        kappa: u8,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long)]
        c: u64,
    },
    /// Cusp pair (infinity, infinity) for the +-1 subgroup.
    Gamma01Infty {
        #[arg(long = "Q")]
        #[serde(rename = "Q")]
        level: u64,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 0)]
        kappa: u8,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long)]
        c: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub args: EvalKind,
    pub re: f64,
    pub im: f64,
    pub abs: f64,
    pub term_count: u64,
    /// Value over the applicable explicit bound, when there is one.
    pub margin: Option<f64>,
}

fn character(modulus: u64, exponents: &[u64]) -> anyhow::Result<DirichletCharacter> {
    let group = CharacterGroup::new(modulus);
    if exponents.is_empty() {
        return Ok(DirichletCharacter::principal(&group));
    }
    DirichletCharacter::from_exponents(&group, exponents).ok_or_else(|| {
        anyhow!(
            "precondition violated: --chi needs one exponent per generator of (Z/{modulus})^*, orders {:?}",
            group.generator_orders()
        )
    })
}

pub fn evaluate(kind: &EvalKind) -> anyhow::Result<EvalRecord> {
    let (sum, margin): (RootOfUnitySum, Option<f64>) = match *kind {
        EvalKind::Kloosterman { m, n, c } => {
            anyhow::ensure!(c > 0, "precondition violated: c must be positive");
            (kloosterman_fast(m, n, c), weil_margin(m, n, c).ok())
        }
        EvalKind::Gauss { a, b, c } => {
            anyhow::ensure!(c > 0, "precondition violated: c must be positive");
            let g = gauss_sum(a, b, c);
            (g, Some(g.abs() / gauss_bound(a, c)))
        }
        EvalKind::Tsum { m, n, q, c, f } => {
            let t = t_sum_fast(m, n, q, c, f)?;
            let margin = if (m, n) == (0, 0) { None } else { Some(t_margin(m, n, q, c, f)?) };
            (t, margin)
        }
        EvalKind::CuspInftyRq { level, q, r, ref chi, m, n, c } => {
            anyhow::ensure!(q > 0 && level % q == 0, "precondition violated: q = {q} must divide Q = {level}");
            let chi = character(level / q, chi)?;
            let kappa = chi.parity();
            (s_infty_rq(&CuspPairSumSpec { level, q, r, chi, kappa, m, n, c })?, None)
        }
        EvalKind::CuspRqRq { level, q, r, kappa, m, n, c } => {
            (s_rq_rq(&SignSumSpec { level, q, r, kappa, m, n, c })?, None)
        }
        EvalKind::Gamma01Infty { level, q, kappa, m, n, c } => {
            let s = s_gamma01_infty_infty(level, q, kappa, m, n, c)?;
            let margin = if (m, n) == (0, 0) { None } else { Some(cor33_infty_margin(level, q, kappa, m, n, c)?) };
            (s, margin)
        }
    };
    Ok(EvalRecord {
        args: kind.clone(),
        re: sum.re(),
        im: sum.im(),
        abs: sum.abs(),
        term_count: sum.term_count,
        margin,
    })
}

pub fn run(args: &EvalArgs) -> anyhow::Result<Status> {
    let record = evaluate(&args.kind)?;
    match args.format {
        Format::Json => println!("{}", serde_json::to_string(&record).context("serializing record")?),
        Format::Text | Format::Csv => {
            println!("re = {}", float(record.re));
            println!("im = {}", float(record.im));
            println!("abs = {}", float(record.abs));
            println!("term_count = {}", record.term_count);
            println!("margin = {}", opt_float(record.margin));
        }
    }
    Ok(Status::Ok)
}
