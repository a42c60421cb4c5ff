//! Command-line surface of the bounds engine.
//!
//! Exit codes: 0 success, 1 input error, 2 certification inconclusive or
//! search cap reached, 3 verification failure.

mod record;
mod svg;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use jacbound::gap::{
    critical_exponent_exact, epsilon_threshold_with_cap, kapovich_bound, vanishing_degrees, HomDimQuery,
    EPSILON_SEARCH_CAP,
};
use jacbound::kernels::{jacobian_bound, seq_c, seq_c_limit, LtOne, SpaceParams};
use jacbound::numerics::{int, parse_rat, render_fixed, render_outward, MAX_PREC};
use jacbound::suites::{run_suite, Suite, SuiteOptions, DEFAULT_GRID, DEFAULT_SEED};
use jacbound::{Comparison, Error, Mode, Rat};

pub use record::Decimal;
use record::{
    BoundsRecord, CritexpRecord, EpsilonRecord, VanishingRecord, VanishingRow, VerifyRecord, VerifySummary,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

/// Decimal places of `C_n` in the table.
const CN_DECIMALS: u32 = 12;
/// Decimal places of the limit reference.
const LIMIT_DECIMALS: u32 = 11;
const MAX_CN: u32 = 10_000;

#[derive(Debug, Parser)]
#[command(name = "jacbound", version, about = "Certified Jacobian bounds for the barycenter map")]
pub struct Cli {
    /// Write the output to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Jacobian bound at degree p = dn - j for critical exponent δ.
    Bounds(BoundsArgs),
    /// Degrees whose bound is certified below 1 at the gap value of δ.
    Vanishing(VanishingArgs),
    /// Table or chart of the sequence C_n.
    Cn(CnArgs),
    /// Critical-exponent lower bound from the homological dimension.
    Critexp(CritexpArgs),
    /// Run the verification suites.
    Verify(VerifyArgs),
}

fn rat_arg(s: &str) -> Result<Rat, String> {
    parse_rat(s).map_err(|e| e.to_string())
}

fn prec_arg(s: &str) -> Result<u32, String> {
    let p: u32 = s.parse().map_err(|_| format!("`{s}` is not a bit count"))?;
    if (16..=MAX_PREC).contains(&p) {
        Ok(p)
    } else {
        Err(format!("precision must be in 16..={MAX_PREC} bits"))
    }
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub d: u32,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub j: u32,
    /// Critical exponent, e.g. `8`, `16/3` or `7.5`.
    #[arg(long, value_parser = rat_arg)]
    pub delta: Rat,
    /// Certify `bound < 1` with interval arithmetic.
    #[arg(long)]
    pub certify: bool,
    /// Starting interval precision in bits.
    #[arg(long, value_parser = prec_arg, default_value_t = 128)]
    pub prec: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct VanishingArgs {
    #[arg(long)]
    pub d: u32,
    #[arg(long)]
    pub n: u32,
    #[arg(long, value_enum, default_value_t = TableFormat::Json)]
    pub format: TableFormat,
    #[arg(long, value_parser = prec_arg, default_value_t = 128)]
    pub prec: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CnFormat {
    Csv,
    Svg,
}

#[derive(Debug, Args)]
pub struct CnArgs {
    #[arg(long, default_value_t = 1)]
    pub from: u32,
    #[arg(long, default_value_t = 34)]
    pub to: u32,
    #[arg(long, value_enum, default_value_t = CnFormat::Csv)]
    pub format: CnFormat,
}

#[derive(Debug, Args)]
pub struct CritexpArgs {
    #[arg(long)]
    pub d: u32,
    #[arg(long, conflicts_with = "epsilon")]
    pub n: Option<u32>,
    /// Homological dimension.
    #[arg(long, conflicts_with = "epsilon")]
    pub hd: Option<u32>,
    /// Find the least n whose bound is within ε of hd - 2 + d for every hd.
    #[arg(long, value_parser = rat_arg)]
    pub epsilon: Option<Rat>,
    /// Largest n tried by the ε search.
    #[arg(long, default_value_t = EPSILON_SEARCH_CAP, requires = "epsilon")]
    pub cap: u32,
    #[arg(long, value_parser = prec_arg, default_value_t = 128)]
    pub prec: u32,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// factor, pest, fiedler, matching, kxw or all.
    #[arg(long)]
    pub suite: String,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_GRID)]
    pub grid: u32,
    /// Trials per randomized suite (default: 1000 for fiedler, 500 otherwise).
    #[arg(long)]
    pub trials: Option<u64>,
}

/// The result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn fail(code: i32, msg: impl Into<String>) -> Self {
        let mut stderr = msg.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Self { code, stdout: String::new(), stderr }
    }

    fn from_error(e: &Error) -> Self {
        let code = match e {
            Error::Inconclusive { .. } | Error::NotFoundWithinCap { .. } => EXIT_INCONCLUSIVE,
            _ => EXIT_INPUT,
        };
        Self::fail(code, format!("error: {e}"))
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK { Outcome::ok(text) } else { Outcome::fail(code, text) };
        }
    };
    let echo = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join(" ");
    let outcome = dispatch(&cli.command, &echo);
    match (&cli.out, outcome.stdout.is_empty()) {
        (Some(path), false) => match std::fs::write(path, &outcome.stdout) {
            Ok(()) => Outcome { stdout: String::new(), ..outcome },
            Err(e) => Outcome::fail(EXIT_INPUT, format!("error: cannot write {}: {e}", path.display())),
        },
        _ => outcome,
    }
}

fn dispatch(command: &Command, echo: &str) -> Outcome {
    let result = match command {
        Command::Bounds(a) => cmd_bounds(a, echo),
        Command::Vanishing(a) => cmd_vanishing(a, echo),
        Command::Cn(a) => cmd_cn(a),
        Command::Critexp(a) => cmd_critexp(a, echo),
        Command::Verify(a) => cmd_verify(a, echo),
    };
    result.unwrap_or_else(|e| Outcome::from_error(&e))
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("records serialize");
    s.push('\n');
    s
}

fn cmd_bounds(a: &BoundsArgs, echo: &str) -> Result<Outcome, Error> {
    let params = SpaceParams::new(a.d, a.n, a.j)?;
    let mode = if a.certify { Mode::Certified { prec: a.prec } } else { Mode::Float };
    let report = jacobian_bound(&params, &a.delta, mode)?;
    let record = BoundsRecord::new(echo, &report, a.certify.then_some(a.prec));
    let out = to_json(&record);
    if a.certify && report.certified_lt_one == LtOne::Inconclusive {
        return Ok(Outcome { code: EXIT_INCONCLUSIVE, stdout: out, stderr: "certification inconclusive\n".into() });
    }
    Ok(Outcome::ok(out))
}

fn cmd_vanishing(a: &VanishingArgs, echo: &str) -> Result<Outcome, Error> {
    let report = vanishing_degrees(a.d, a.n, Mode::Certified { prec: a.prec })?;
    let rows: Vec<VanishingRow> = report.per_degree.iter().map(|(p, r)| VanishingRow::new(*p, r)).collect();
    let inconclusive = rows.iter().any(|r| r.certified_lt_one == LtOne::Inconclusive);
    let stdout = match a.format {
        TableFormat::Json => to_json(&VanishingRecord {
            command: "vanishing",
            echo: echo.into(),
            d: a.d,
            n: a.n,
            delta_used: report.delta_used.to_string(),
            prec: a.prec,
            vanishing_degrees: report.vanishing_degrees.iter().copied().collect(),
            rows,
        }),
        TableFormat::Csv => {
            let mut s = String::from("degree,j,delta,bound_lo,bound_hi,certified\n");
            for r in &rows {
                let certified = if r.certified_lt_one == LtOne::Yes { "true" } else { "false" };
                let (lo, hi) = (
                    r.value.lo_decimal.as_deref().unwrap_or(""),
                    r.value.hi_decimal.as_deref().unwrap_or(""),
                );
                writeln!(s, "{},{},{},{lo},{hi},{certified}", r.degree, r.j, r.delta).expect("string write");
            }
            s
        }
    };
    if inconclusive {
        return Ok(Outcome { code: EXIT_INCONCLUSIVE, stdout, stderr: "certification inconclusive\n".into() });
    }
    Ok(Outcome::ok(stdout))
}

/// One row of the `C_n` table.
pub struct CnRow {
    pub n: u32,
    pub value: String,
    pub lt_one: bool,
    pub approx: f64,
}

fn cn_rows(from: u32, to: u32) -> Result<Vec<CnRow>, Error> {
    if from < 1 || from > to || to > MAX_CN {
        return Err(Error::Param(format!("need 1 <= from <= to <= {MAX_CN} (got {from}..{to})")));
    }
    (from..=to)
        .map(|n| {
            let mut prec = 128;
            loop {
                let v = seq_c(n, Mode::Certified { prec })?;
                let iv = v.interval().expect("certified");
                let decided = iv.hi() < &int(1) || iv.lo() >= &int(1);
                if let (Some(value), true) = (render_fixed(iv, CN_DECIMALS), decided) {
                    let lt_one = iv.hi() < &int(1);
                    return Ok(CnRow { n, value, lt_one, approx: v.approx() });
                }
                if prec >= MAX_PREC {
                    return Err(Error::Inconclusive { prec });
                }
                prec *= 2;
            }
        })
        .collect()
}

fn limit_decimal() -> String {
    render_fixed(&seq_c_limit(), LIMIT_DECIMALS).expect("enclosure is narrow enough")
}

fn cmd_cn(a: &CnArgs) -> Result<Outcome, Error> {
    let rows = cn_rows(a.from, a.to)?;
    let limit = limit_decimal();
    let stdout = match a.format {
        CnFormat::Csv => {
            let mut s = String::from("n,c_n,lt_one,note\n");
            for r in &rows {
                let note = if r.lt_one { "" } else { "exceeds 1; C_n < 1 holds from n = 3 on" };
                writeln!(s, "{},{},{},{note}", r.n, r.value, r.lt_one).expect("string write");
            }
            writeln!(s, "limit,{limit},true,sqrt(2)/e").expect("string write");
            s
        }
        CnFormat::Svg => svg::chart(&rows, &limit),
    };
    Ok(Outcome::ok(stdout))
}

fn cmd_critexp(a: &CritexpArgs, echo: &str) -> Result<Outcome, Error> {
    if let Some(eps) = &a.epsilon {
        let n = epsilon_threshold_with_cap(a.d, eps, a.cap)?;
        return Ok(Outcome::ok(to_json(&EpsilonRecord {
            command: "critexp",
            echo: echo.into(),
            d: a.d,
            epsilon: eps.to_string(),
            cap: a.cap,
            n_epsilon: n,
        })));
    }
    let (Some(n), Some(hd)) = (a.n, a.hd) else {
        return Err(Error::Param("critexp needs --n and --hd, or --epsilon".into()));
    };
    let q = HomDimQuery { d: a.d, n, hd };
    let exact = critical_exponent_exact(&q)?;
    let kap = kapovich_bound(hd)?;
    let (cmp, iv, _) = exact.compare(&kap, a.prec)?;
    let larger = match (exact.as_rational(), cmp) {
        (Some(x), _) if *x == kap => "equal",
        (_, Comparison::CertifiedLess) => "kapovich",
        (_, Comparison::CertifiedGreaterEq) => "cfm",
        (_, Comparison::Inconclusive) => "inconclusive",
    };
    let record = CritexpRecord {
        command: "critexp",
        echo: echo.into(),
        d: a.d,
        n,
        hd,
        cfm_exact: exact.to_string(),
        cfm_bound: Decimal::from_interval(&iv),
        kapovich_bound: kap.to_string(),
        larger,
    };
    let out = to_json(&record);
    if larger == "inconclusive" {
        return Ok(Outcome { code: EXIT_INCONCLUSIVE, stdout: out, stderr: "comparison inconclusive\n".into() });
    }
    Ok(Outcome::ok(out))
}

fn cmd_verify(a: &VerifyArgs, echo: &str) -> Result<Outcome, Error> {
    let suite: Suite = a.suite.parse()?;
    let opts = SuiteOptions { seed: a.seed, grid: a.grid, trials: a.trials };
    let report = run_suite(suite, &opts)?;
    let summary = VerifySummary {
        suites: report.results.len(),
        passed: report.results.iter().filter(|r| r.passed()).count(),
    };
    let ok = report.passed;
    let out = to_json(&VerifyRecord {
        command: "verify",
        echo: echo.into(),
        suite: suite.to_string(),
        seed: a.seed,
        grid: a.grid,
        trials: a.trials,
        summary,
        report,
    });
    if ok {
        Ok(Outcome::ok(out))
    } else {
        Ok(Outcome { code: EXIT_VERIFY_FAILED, stdout: out, stderr: "verification failed\n".into() })
    }
}

/// Outward-rounded decimal endpoints used in tables.
pub(crate) fn outward(iv: &jacbound::Interval) -> (String, String) {
    render_outward(iv, record::ENDPOINT_DIGITS)
}
