//! Command-line front end. `main.rs` only forwards to [`run`].
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error.
//! Output files go to `--out`, or to `$DUALRISK_OUT`, or to the current
//! directory.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::applications::portfolio::{
    build_menu, optimal_alpha, portfolio_lottery, portfolio_value, DerivativeMenu, PortfolioProblem,
};
use crate::applications::protection::{parse_config, sp_background_effect, sp_solve};
use crate::apportionment::{make_pair, random_pair, ApportionmentPair, GapSpec};
use crate::dominance::{dual_sd_check, primal_sd_check, PrimalVariant};
use crate::error::{Error, Result};
use crate::harness::verify_theorem;
use crate::lottery::{EqualProbLottery, Lottery};
use crate::rational::{self, decimal_string, fraction_string, parse_rational, rat, Rational};
use crate::repro::{self, DECIMAL_DIGITS};
use crate::valuation::{dt_value, dual_moment, mean, primal_moment};
use crate::value::Value;
use crate::weighting::WeightingSpec;

pub const OUT_ENV: &str = "DUALRISK_OUT";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "dualrisk",
    version,
    about = "Dual-theory risk apportionment toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dual value, mean, dual moments 1..4 and central moments 2..4.
    Eval {
        lottery: PathBuf,
        #[arg(long, short, default_value = "identity")]
        weighting: String,
    },
    /// Tests whether the second lottery dominates the first.
    Dominance {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        degree: u32,
        #[arg(long, value_enum, default_value_t = Kind::Dual)]
        kind: Kind,
        /// Primal variant requiring equal moments below the degree.
        #[arg(long)]
        ekern: bool,
    },
    /// Generates an apportionment pair and its provenance record.
    Pairgen(PairgenArgs),
    /// Runs a theorem harness.
    Verify {
        #[arg(long)]
        theorem: u32,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Order used by theorems 5 and 6.
        #[arg(long, default_value_t = 5)]
        order: u32,
        /// Fixed weighting function for converse theorems.
        #[arg(long)]
        weighting: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Writes the worked-example tables as CSV files.
    Repro {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solves a self-protection problem read from a `key = value` file.
    Protect { config: PathBuf },
    /// Builds the derivative menu for an equal-probability price set.
    Portfolio {
        #[arg(long)]
        order: u32,
        /// Comma-separated stock prices, one per equally likely state.
        #[arg(long, value_delimiter = ',', required = true)]
        prices: Vec<String>,
        /// Current stock price; defaults to the mean price.
        #[arg(long)]
        s0: Option<String>,
        #[arg(long, default_value = "0")]
        rate: String,
        #[arg(long, default_value = "100")]
        wealth: String,
        /// Defaults to `dualpower:m=<order>`.
        #[arg(long, short)]
        weighting: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Primal,
    Dual,
}

#[derive(Debug, Args)]
pub struct PairgenArgs {
    #[arg(long)]
    pub order: u32,
    /// States of the base lottery; defaults to the number of states in
    /// the base file, or outcomes `1..=n` when no base is given.
    #[arg(long)]
    pub n: Option<usize>,
    /// Block size is `1/M`.
    #[arg(long = "M", default_value_t = 1)]
    pub big_m: u64,
    #[arg(long, conflicts_with = "random")]
    pub base: Option<PathBuf>,
    #[arg(long)]
    pub random: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub pos_first: usize,
    #[arg(long, default_value_t = 1)]
    pub pos_second: usize,
    /// Shifts between block halves, comma-separated, one per level 3..m.
    #[arg(long, value_delimiter = ',')]
    pub shifts: Vec<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs the command,
/// writing human-readable output to `stdout` and errors to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(stdout, "{}", e.render());
            return EXIT_OK;
        }
    };
    match execute(cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if matches!(e, Error::RankViolation { .. }) {
                let _ = writeln!(
                    stderr,
                    "hint: the blocks push a state past its neighbour; use a larger --M"
                );
            }
            EXIT_USAGE
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Eval { lottery, weighting } => {
            cmd_eval(&read_lottery(&lottery)?, &parse_weighting(&weighting)?, out)
        }
        Command::Dominance {
            a,
            b,
            degree,
            kind,
            ekern,
        } => cmd_dominance(
            &read_lottery(&a)?,
            &read_lottery(&b)?,
            degree,
            kind,
            ekern,
            out,
        ),
        Command::Pairgen(args) => cmd_pairgen(&args, out),
        Command::Verify {
            theorem,
            trials,
            seed,
            order,
            weighting,
            out: dir,
        } => {
            let fixed = weighting.as_deref().map(parse_weighting).transpose()?;
            cmd_verify(
                theorem,
                trials,
                seed,
                order,
                fixed.as_ref(),
                &output_dir(dir),
                out,
            )
        }
        Command::Repro { out: dir } => cmd_repro(&output_dir(dir), out),
        Command::Protect { config } => cmd_protect(&read_file(&config)?, out),
        Command::Portfolio {
            order,
            prices,
            s0,
            rate,
            wealth,
            weighting,
        } => {
            let prices = prices
                .iter()
                .map(|p| parse_number(p))
                .collect::<Result<Vec<_>>>()?;
            let stock = EqualProbLottery::new(prices)?;
            let s0 = match s0 {
                Some(s) => parse_number(&s)?,
                None => mean(&stock.to_lottery()),
            };
            let pp =
                PortfolioProblem::new(parse_number(&wealth)?, parse_number(&rate)?, s0, stock)?;
            let w = match weighting {
                Some(text) => parse_weighting(&text)?,
                None => WeightingSpec::dual_power(order)?,
            };
            cmd_portfolio(&pp, order, &w, out)
        }
    }
}

/// `--out`, else `$DUALRISK_OUT`, else the current directory.
pub fn output_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn read_lottery(path: &Path) -> Result<Lottery> {
    Lottery::parse(&read_file(path)?).map_err(|e| match e {
        Error::Parse { line, message } => Error::Parse {
            line,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    })
}

fn parse_weighting(text: &str) -> Result<WeightingSpec> {
    text.parse()
}

fn parse_number(text: &str) -> Result<Rational> {
    parse_rational(text).map_err(|e| Error::Parse {
        line: 0,
        message: e.to_string(),
    })
}

fn exact_line(name: &str, r: &Rational) -> String {
    format!(
        "{name:<18} {:<24} {}",
        fraction_string(r),
        decimal_string(r, DECIMAL_DIGITS)
    )
}

fn value_line(name: &str, v: &Value) -> String {
    match v {
        Value::Exact(r) => exact_line(name, r),
        Value::Real(x) => {
            let decimal = rational::from_f64(*x)
                .map_or_else(|| x.to_string(), |r| decimal_string(&r, DECIMAL_DIGITS));
            format!("{name:<18} {:<24} {decimal}", "-")
        }
    }
}

pub fn cmd_eval(lottery: &Lottery, w: &WeightingSpec, out: &mut dyn Write) -> Result<i32> {
    writeln!(out, "lottery            {lottery}")?;
    writeln!(out, "weighting          {w}")?;
    writeln!(out, "{}", value_line("V", &dt_value(lottery, w)?))?;
    writeln!(out, "{}", exact_line("mean", &mean(lottery)))?;
    for k in 1..=4 {
        writeln!(
            out,
            "{}",
            exact_line(&format!("dual moment {k}"), &dual_moment(lottery, k))
        )?;
    }
    for k in 2..=4 {
        writeln!(
            out,
            "{}",
            exact_line(&format!("central moment {k}"), &primal_moment(lottery, k))
        )?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_dominance(
    a: &Lottery,
    b: &Lottery,
    degree: u32,
    kind: Kind,
    ekern: bool,
    out: &mut dyn Write,
) -> Result<i32> {
    if degree == 0 {
        return Err(Error::Domain("degree must be at least 1".into()));
    }
    let report = match kind {
        Kind::Dual => dual_sd_check(a, b, degree),
        Kind::Primal => {
            let variant = if ekern {
                PrimalVariant::Ekern
            } else {
                PrimalVariant::Plain
            };
            primal_sd_check(a, b, degree, variant)
        }
    };
    let kind = match kind {
        Kind::Dual => "dual",
        Kind::Primal => "primal",
    };
    writeln!(out, "B over A, {kind} {report}")?;
    Ok(EXIT_OK)
}

/// Builds the pair described by the flags. With `--base` the block size is
/// `1/M`; with `--random` the construction is drawn from the seed.
pub fn build_pair(args: &PairgenArgs) -> Result<ApportionmentPair> {
    if args.random {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        let mut pair = random_pair(args.order, &mut rng);
        pair.provenance.seed = Some(args.seed);
        return Ok(pair);
    }
    if args.big_m == 0 {
        return Err(Error::Domain("M must be positive".into()));
    }
    let base = match &args.base {
        Some(path) => {
            let lottery = read_lottery(path)?;
            let n = match args.n {
                Some(n) => n,
                None => lottery.len(),
            };
            EqualProbLottery::from_lottery(&lottery, n)?
        }
        None => {
            let n = args.n.unwrap_or(args.order as usize);
            EqualProbLottery::new((1..=n as i64).map(rational::int).collect())?
        }
    };
    let gaps = if args.shifts.is_empty() {
        GapSpec::minimal(args.order)
    } else {
        GapSpec {
            shifts: args.shifts.clone(),
        }
    };
    let mut pair = make_pair(
        &base,
        args.order,
        &rat(1, args.big_m as i64),
        &gaps,
        args.pos_first,
        args.pos_second,
    )?;
    pair.provenance.m_denominator = Some(args.big_m);
    Ok(pair)
}

pub fn cmd_pairgen(args: &PairgenArgs, out: &mut dyn Write) -> Result<i32> {
    let pair = build_pair(args)?;
    let dir = output_dir(args.out.clone());
    std::fs::create_dir_all(&dir)?;
    let files = [
        ("C.txt", pair.c_lottery().to_text()),
        ("D.txt", pair.d_lottery().to_text()),
        ("provenance.json", pair.provenance.to_json() + "\n"),
    ];
    writeln!(out, "{pair}")?;
    for (name, body) in files {
        let path = dir.join(name);
        std::fs::write(&path, body)?;
        writeln!(out, "wrote {}", path.display())?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_verify(
    theorem: u32,
    trials: u64,
    seed: u64,
    order: u32,
    fixed: Option<&WeightingSpec>,
    dir: &Path,
    out: &mut dyn Write,
) -> Result<i32> {
    if !(1..=6).contains(&theorem) {
        return Err(Error::Domain(format!(
            "theorem must be 1..6, got {theorem}"
        )));
    }
    if trials == 0 {
        return Err(Error::Domain("trials must be at least 1".into()));
    }
    if order < 2 {
        return Err(Error::Domain("order must be at least 2".into()));
    }
    let report = verify_theorem(theorem, trials, seed, order, fixed)?;
    writeln!(out, "{}", report.summary())?;
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!("verify-theorem{theorem}-seed{seed}.json"));
    let json = serde_json::to_string_pretty(&report).map_err(|e| Error::Io(e.to_string()))?;
    std::fs::write(&path, json + "\n")?;
    writeln!(out, "wrote {}", path.display())?;
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}

pub fn cmd_repro(dir: &Path, out: &mut dyn Write) -> Result<i32> {
    for path in repro::write_repro(dir)? {
        writeln!(out, "wrote {}", path.display())?;
    }
    Ok(EXIT_OK)
}

/// Prints `section,quantity,exact,decimal` rows for the problem with and
/// without background risk.
pub fn cmd_protect(config: &str, out: &mut dyn Write) -> Result<i32> {
    let (sp, w) = parse_config(config)?;
    let mut csv = csv::Writer::from_writer(Vec::new());
    csv.write_record(["section", "quantity", "exact", "decimal"])?;
    let real = |x: f64| {
        rational::from_f64(x).map_or_else(|| x.to_string(), |r| decimal_string(&r, DECIMAL_DIGITS))
    };
    let regime = format!("{:?}", sp.regime()?);
    csv.write_record(["problem", "regime", regime.as_str(), ""])?;
    csv.write_record(["problem", "weighting", w.to_string().as_str(), ""])?;
    let with = sp_solve(&sp, &w)?;
    for (section, sol) in [
        ("with background", &with),
        (
            "without background",
            &sp_solve(&sp.without_background(), &w)?,
        ),
    ] {
        csv.write_record([section, "e*", "", real(sol.e_star).as_str()])?;
        csv.write_record([section, "V(e*)", "", real(sol.v_star).as_str()])?;
        csv.write_record([
            section,
            "p(e*)",
            "",
            real(sol.diagnostics.p_at_opt).as_str(),
        ])?;
        csv.write_record([
            section,
            "interior",
            &sol.diagnostics.foc_sign_change.to_string(),
            "",
        ])?;
        csv.write_record([
            section,
            "concave on grid",
            &sol.diagnostics.concave_on_grid.to_string(),
            "",
        ])?;
        for warning in &sol.diagnostics.warnings {
            csv.write_record([section, "warning", warning.as_str(), ""])?;
        }
    }
    if !sp.epsilon.is_zero() {
        let effect = sp_background_effect(&sp, &w)?;
        csv.write_record([
            "effect",
            "direction",
            effect.direction.to_string().as_str(),
            "",
        ])?;
        let (exact, decimal) = match &effect.calibrated_expression {
            Value::Exact(r) => (fraction_string(r), decimal_string(r, DECIMAL_DIGITS)),
            Value::Real(x) => (String::new(), real(*x)),
        };
        csv.write_record(["effect", "-h'(1/4)+2h'(1/2)-h'(3/4)", &exact, &decimal])?;
        csv.write_record([
            "effect",
            "-h'(p/2)+2h'(p)-h'((1+p)/2)",
            "",
            real(effect.general_expression).as_str(),
        ])?;
    }
    out.write_all(&csv.into_inner().map_err(|e| Error::Io(e.to_string()))?)?;
    Ok(EXIT_OK)
}

pub fn cmd_portfolio(
    pp: &PortfolioProblem,
    order: u32,
    w: &WeightingSpec,
    out: &mut dyn Write,
) -> Result<i32> {
    let menu = build_menu(order, &pp.stock_prices)?;
    let prices = portfolio_lottery(pp, &menu)?;
    let outcomes: Vec<Rational> = prices.outcomes().cloned().collect();
    writeln!(
        out,
        "stock prices       {}",
        repro::bracket(pp.stock_prices.outcomes())
    )?;
    writeln!(out, "menu               {menu}")?;
    writeln!(out, "portfolio prices   {}", repro::bracket(&outcomes))?;
    writeln!(out, "weighting          {w}")?;
    let plain = DerivativeMenu::empty();
    writeln!(
        out,
        "{}",
        value_line("V[R]", &portfolio_value(pp, &plain, w)?)
    )?;
    writeln!(
        out,
        "{}",
        value_line("V[R-bar]", &portfolio_value(pp, &menu, w)?)
    )?;
    for (name, m) in [("alpha stock", &plain), ("alpha portfolio", &menu)] {
        let decision = optimal_alpha(pp, m, w)?;
        if decision.indifferent {
            writeln!(out, "{name:<18} any split")?;
        } else {
            writeln!(out, "{}", exact_line(name, &decision.alpha))?;
        }
    }
    Ok(EXIT_OK)
}
