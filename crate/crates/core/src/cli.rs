//! Command-line front end. [`run`] executes a command in-process and returns
//! the exit code together with everything it would print.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on invalid
//! input.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::chow;
use crate::hodge::{self, HodgeDiamond};
use crate::rational::{self, render};
use crate::report::{Check, Report};
use crate::sncpair::{self, SncPair};
use crate::symcalc;
use crate::{Error, Result};

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "CHARCALC_THREADS";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "charcalc", version, about = "Exact characteristic-class and Calabi-Yau pair calculator")]
pub struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the total-class identities for 1..=max-m Chern roots.
    Identities {
        #[arg(long, default_value_t = 6)]
        max_m: usize,
    },
    /// Weighted Euler characteristic of a pair.
    #[command(name = "chi-d", subcommand)]
    ChiD(ChiDCommand),
    /// Check that the weighted Euler characteristic survives the blow-up of a center.
    BlowupCheck(BlowupArgs),
    /// Riemann-Roch on projective space.
    #[command(subcommand)]
    Hrr(HrrCommand),
    /// Hodge diamond bookkeeping.
    #[command(subcommand)]
    Hodge(HodgeCommand),
}

#[derive(Debug, Subcommand)]
pub enum ChiDCommand {
    /// CP^r with s coordinate hyperplanes and the hyperplane at infinity.
    Cp {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        d: i64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        mults: Vec<i64>,
    },
    /// A stratum table read from a JSON file.
    Table {
        #[arg(long)]
        file: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct BlowupArgs {
    /// Stratum table with center metadata.
    #[arg(long, conflicts_with = "random", required_unless_present = "random")]
    pub file: Option<PathBuf>,
    /// Number of random synthetic tables to check.
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Largest number of components in synthetic tables.
    #[arg(long, default_value_t = 8)]
    pub max_components: usize,
}

#[derive(Debug, Subcommand)]
pub enum HrrCommand {
    /// chi(CP^n, Omega^p(twist)).
    Cp {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        p: usize,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        twist: i64,
    },
}

#[derive(Debug, Subcommand)]
pub enum HodgeCommand {
    /// Diamond of a projective bundle.
    Bundle {
        /// Builtin name (point, cpN, elliptic, k3, quintic) or JSON file.
        #[arg(long)]
        base: String,
        #[arg(long)]
        fiber_dim: usize,
    },
    /// Diamond of the blow-up of X along Y.
    Blowup {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        codim: usize,
    },
    /// The Betti-number correction sum_k (-1)^k k(n-k) b_k.
    Correction {
        #[arg(long)]
        diamond: String,
    },
    /// Determinant-line exponent ledgers.
    Ledger {
        #[arg(long, conflicts_with = "random", required_unless_present = "random")]
        diamond: Option<String>,
        /// Number of random symmetric diamonds to check.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn invalid(msg: impl std::fmt::Display) -> Self {
        Outcome {
            code: EXIT_INVALID,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

const MAX_RANDOM_CASES: usize = 100_000;
const MAX_HRR_DIM: usize = 10;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_INVALID,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: EXIT_PASS,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let pool = match thread_pool() {
        Ok(pool) => pool,
        Err(e) => return Outcome::invalid(e),
    };
    let report = match pool.install(|| execute(&cli.command)) {
        Ok(report) => report.finish(),
        Err(e) => return Outcome::invalid(e),
    };
    let text = if cli.json {
        report.to_json() + "\n"
    } else {
        report.to_string()
    };
    let code = if report.passed() { EXIT_PASS } else { EXIT_FAIL };
    match &cli.out {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => Outcome {
                code,
                stdout: String::new(),
                stderr: String::new(),
            },
            Err(e) => Outcome::invalid(format!("cannot write {}: {e}", path.display())),
        },
        None => Outcome {
            code,
            stdout: text,
            stderr: String::new(),
        },
    }
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var(THREADS_ENV) {
        let n: usize = raw
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::Parse(format!("{THREADS_ENV} must be a positive integer, got `{raw}`")))?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| Error::Domain(format!("cannot start worker threads: {e}")))
}

pub fn execute(command: &Command) -> Result<Report> {
    match command {
        Command::Identities { max_m } => identities(*max_m),
        Command::ChiD(ChiDCommand::Cp { r, s, d, mults }) => chi_d_cp(*r, *s, *d, mults),
        Command::ChiD(ChiDCommand::Table { file }) => chi_d_table(file),
        Command::BlowupCheck(args) => blowup_check(args),
        Command::Hrr(HrrCommand::Cp { n, p, twist }) => hrr_cp(*n, *p, *twist),
        Command::Hodge(cmd) => hodge_cmd(cmd),
    }
}

fn identities(max_m: usize) -> Result<Report> {
    let limit = symcalc::IdentityConfig::default().max_m;
    if max_m == 0 || max_m > limit {
        return Err(Error::Domain(format!("--max-m must lie in 1..={limit}, got {max_m}")));
    }
    let results: Vec<Result<Vec<Check>>> = (1..=max_m)
        .into_par_iter()
        .map(|m| {
            let total = symcalc::verify_prop_total_class(m)?;
            let derived = symcalc::verify_prop2_total_class(m)?;
            let residual = |family: &str, series: &symcalc::ChernSeries| {
                Check::text(format!("m={m:02} {family}"), "0", series.to_string())
            };
            Ok(vec![
                residual("todd-alternating", &total.alternating),
                residual("todd-first-moment", &total.first_moment),
                residual("todd-second-moment", &total.second_moment),
                residual("derived-todd-alternating", &derived.alternating),
                residual("derived-todd-first-moment", &derived.first_moment),
            ])
        })
        .collect();
    let mut report = Report::new("identities");
    report.value("max_m", max_m.to_string());
    for checks in results {
        for c in checks? {
            report.check(c);
        }
    }
    Ok(report)
}

fn chi_d_cp(r: u32, s: u32, d: i64, mults: &[i64]) -> Result<Report> {
    let (model, pair) = sncpair::cp_pair(r, s, d, mults)?;
    let direct = sncpair::chi_d(&pair)?;
    let fprime = sncpair::chi_d_via_fprime(&model);
    let mut report = Report::new("chi-d cp");
    report
        .value("m_infinity", model.m_infinity.to_string())
        .value("f", model.f_poly.to_string())
        .rational("chi_d", &direct)
        .rational("f'(1)", &fprime)
        .check(Check::equal("enumeration equals f'(1)", &fprime, &direct))
        .check(Check::equal("vanishing", &rational::zero(), &direct));
    Ok(report)
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

fn load_pair(path: &Path) -> Result<SncPair> {
    sncpair::parse_pair(&read_file(path)?).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn chi_d_table(path: &Path) -> Result<Report> {
    let pair = load_pair(path)?;
    let mut report = Report::new("chi-d table");
    report
        .value("pair", pair.to_string())
        .rational("chi_d", &sncpair::chi_d(&pair)?);
    Ok(report)
}

fn blowup_check(args: &BlowupArgs) -> Result<Report> {
    if let Some(n) = args.random {
        return blowup_random(n, args.seed, args.max_components);
    }
    let path = args
        .file
        .as_ref()
        .ok_or_else(|| Error::Parse("either --file or --random is required".into()))?;
    let pair = load_pair(path)?;
    let r = sncpair::check_blowup_invariance(&pair)?;
    let mut report = Report::new("blowup-check");
    report
        .value("m0", r.m0.to_string())
        .rational("chi_d before", &r.before)
        .rational("chi_d after", &r.after)
        .rational("chi_d(Y, D_Y)", &r.chi_d_center)
        .rational("chi_d(E, D_E)", &r.chi_d_exceptional)
        .check(Check::equal("invariance", &r.before, &r.after));
    Ok(report)
}

fn blowup_random(n: usize, seed: u64, max_components: usize) -> Result<Report> {
    if n == 0 || n > MAX_RANDOM_CASES {
        return Err(Error::Domain(format!("--random must lie in 1..={MAX_RANDOM_CASES}, got {n}")));
    }
    if max_components > sncpair::MAX_COMPONENTS - 1 {
        return Err(Error::Domain(format!(
            "--max-components must be at most {}",
            sncpair::MAX_COMPONENTS - 1
        )));
    }
    let width = n.to_string().len();
    let checks: Vec<Result<Check>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let pair = sncpair::synthetic::random_center_pair(&mut rng, max_components)?;
            let r = sncpair::check_blowup_invariance(&pair)?;
            Ok(Check::equal(format!("case {i:0width$}"), &r.before, &r.after))
        })
        .collect();
    let mut report = Report::new("blowup-check --random");
    let mut passed = 0;
    let mut all = Vec::with_capacity(n);
    for c in checks {
        let c = c?;
        passed += usize::from(c.status == crate::report::Status::Pass);
        all.push(c);
    }
    report
        .value("seed", seed.to_string())
        .value("passed", format!("{passed}/{n}"));
    for c in all {
        report.check(c);
    }
    Ok(report)
}

fn hrr_cp(n: usize, p: usize, twist: i64) -> Result<Report> {
    if n > MAX_HRR_DIM {
        return Err(Error::Domain(format!("--n must be at most {MAX_HRR_DIM}, got {n}")));
    }
    if p > n {
        return Err(Error::Domain(format!("--p must lie in 0..={n}, got {p}")));
    }
    if twist.unsigned_abs() > 1 << 40 {
        return Err(Error::Domain(format!("--twist {twist} is out of range")));
    }
    let hrr = chow::chi_twisted_hodge(n, p, twist)?;
    let oracle = chow::chi_twisted_hodge_euler_sequence(n, p, twist)?;
    let mut report = Report::new("hrr cp");
    report
        .value("sheaf", format!("Omega^{p}({twist}) on CP^{n}"))
        .rational("chi", &hrr)
        .check(Check::equal("euler sequence", &oracle, &hrr));
    if twist >= 1 && twist <= p as i64 {
        report.check(Check::equal("bott vanishing", &rational::zero(), &hrr));
    }
    if twist == 0 {
        let expected = rational::int(if p.is_multiple_of(2) { 1 } else { -1 });
        report.check(Check::equal("untwisted", &expected, &hrr));
    }
    Ok(report)
}

fn load_diamond(source: &str) -> Result<HodgeDiamond> {
    match HodgeDiamond::builtin(source) {
        Ok(d) => Ok(d),
        Err(builtin_err) => {
            let path = Path::new(source);
            if !path.exists() {
                return Err(Error::InvalidDiamond(format!(
                    "`{source}` is neither a builtin diamond nor a readable file ({builtin_err})"
                )));
            }
            HodgeDiamond::from_json(&read_file(path)?).map_err(|e| match e {
                Error::Parse(msg) => Error::Parse(format!("{source}: {msg}")),
                other => other,
            })
        }
    }
}

fn betti_string(d: &HodgeDiamond) -> String {
    let b: Vec<String> = d.betti_numbers().iter().map(u64::to_string).collect();
    format!("({})", b.join(","))
}

fn describe(report: &mut Report, d: &HodgeDiamond) {
    report
        .value("diamond", d.to_string())
        .value("betti", betti_string(d))
        .value("chi", d.euler_characteristic().to_string());
}

fn hodge_cmd(cmd: &HodgeCommand) -> Result<Report> {
    match cmd {
        HodgeCommand::Bundle { base, fiber_dim } => {
            let base = load_diamond(base)?;
            let out = hodge::projective_bundle_diamond(&base, *fiber_dim)?;
            let mut report = Report::new("hodge bundle");
            describe(&mut report, &out);
            let expected = (*fiber_dim as i64 + 1) * base.euler_characteristic();
            report.check(Check::text("euler characteristic", expected.to_string(), out.euler_characteristic().to_string()));
            Ok(report)
        }
        HodgeCommand::Blowup { x, y, codim } => {
            let (x, y) = (load_diamond(x)?, load_diamond(y)?);
            let out = hodge::blowup_diamond(&x, &y, *codim)?;
            let mut report = Report::new("hodge blowup");
            describe(&mut report, &out);
            let expected = x.euler_characteristic() + (*codim as i64 - 1) * y.euler_characteristic();
            report.check(Check::text("euler characteristic", expected.to_string(), out.euler_characteristic().to_string()));
            Ok(report)
        }
        HodgeCommand::Correction { diamond } => {
            let d = load_diamond(diamond)?;
            let c = hodge::correction_term(&d);
            let mut report = Report::new("hodge correction");
            report
                .value("diamond", d.to_string())
                .rational("correction", &c)
                .value(
                    "term",
                    if c.is_zero() {
                        "0".to_string()
                    } else {
                        format!("{} * (log 2pi)/2", render(&c))
                    },
                );
            Ok(report)
        }
        HodgeCommand::Ledger {
            diamond,
            random,
            seed,
        } => {
            let diamonds = match (diamond, random) {
                (Some(source), _) => vec![load_diamond(source)?],
                (None, Some(n)) => {
                    if *n == 0 || *n > MAX_RANDOM_CASES {
                        return Err(Error::Domain(format!("--random must lie in 1..={MAX_RANDOM_CASES}, got {n}")));
                    }
                    let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                    (0..*n).map(|_| hodge::random_diamond(&mut rng, 6)).collect()
                }
                (None, None) => return Err(Error::Parse("either --diamond or --random is required".into())),
            };
            let mut report = Report::new("hodge ledger");
            if let [d] = diamonds.as_slice() {
                report
                    .value("lambda", hodge::lambda(d).to_string())
                    .value("eta", hodge::eta(d).to_string())
                    .value("lambda_dR", hodge::lambda_dr(d).to_string());
            }
            let width = diamonds.len().to_string().len();
            for (i, d) in diamonds.iter().enumerate() {
                let tag = if diamonds.len() == 1 { String::new() } else { format!("case {i:0width$} ") };
                let c = hodge::ledger_checks(d);
                for (name, ok) in [
                    ("de rham split", c.de_rham_split),
                    ("eta assembly", c.eta_assembly),
                    ("lambda assembly", c.lambda_assembly),
                ] {
                    report.check(Check::text(format!("{tag}{name}"), "true", ok.to_string()));
                }
            }
            Ok(report)
        }
    }
}
