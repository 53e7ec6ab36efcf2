//! Command-line front end: `rate`, `curve`, `verify`, `bounds`, `converse`.
//!
//! Exit codes: 0 success, 1 invalid input, 2 scheme infeasible at the
//! requested point, 3 verification or tightness failure.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::bounds::{bound_report, cutset_bound, man_rate, pue_rate};
use crate::config::{load_config, LoadedConfig};
use crate::converse::certify;
use crate::envelope::{achieve, achieve_envelope, achieve_mixed, Scheme, SharingRule};
use crate::error::{Error, Result};
use crate::model::NetworkConfig;
use crate::rational::Rational;
use crate::simulator::{adversarial_sweep, demand_sweep};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_FAILED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "coded-caching", version, about = "Coded caching with shared helper caches and private user caches")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the rate of one or all schemes at the configured memory point.
    Rate(PointArgs),
    /// Sweep Mp at fixed Ms and write a CSV of every scheme and bound.
    Curve(CurveArgs),
    /// Simulate placement and delivery byte by byte and check every decode.
    Verify(VerifyArgs),
    /// Compare scheme rates against the dedicated, shared and cut-set bounds.
    Bounds(PointArgs),
    /// Build the acyclic converse set and check it meets the achieved rate.
    Converse(CommonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeChoice {
    Unknown,
    Scheme1,
    Scheme2,
    All,
}

impl SchemeChoice {
    fn schemes(self) -> Vec<Scheme> {
        match self {
            SchemeChoice::Unknown => vec![Scheme::Unknown],
            SchemeChoice::Scheme1 => vec![Scheme::Scheme1],
            SchemeChoice::Scheme2 => vec![Scheme::Scheme2],
            SchemeChoice::All => Scheme::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SharingChoice {
    Hull,
    Nested,
}

impl From<SharingChoice> for SharingRule {
    fn from(s: SharingChoice) -> Self {
        match s {
            SharingChoice::Hull => SharingRule::Hull,
            SharingChoice::Nested => SharingRule::Nested,
        }
    }
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// JSON network description.
    #[arg(long)]
    pub config: PathBuf,
    /// Override the configured helper memory.
    #[arg(long, value_name = "FRAC")]
    pub ms: Option<Rational>,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum, default_value = "all")]
    pub scheme: SchemeChoice,
    /// Memory-sharing rule for scheme 2 off its lattice: `hull` is the exact
    /// lower envelope over its corners, `nested` the fixed two-step split.
    /// Curves under `hull` plot the envelope on lattice points too.
    #[arg(long, value_enum, default_value = "hull")]
    pub sharing: SharingChoice,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// `start:stop:step`, each an exact number or fraction.
    #[arg(long, value_name = "A:B:STEP")]
    pub mp_range: Option<String>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Render cells as exact fractions.
    #[arg(long)]
    pub fractions: bool,
    /// Add a `mixed` column: the envelope over every scheme's corners.
    #[arg(long)]
    pub mix_schemes: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// Random distinct-demand trials; 1 runs the configured demand.
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    /// File-content seed; defaults to the configured seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Infeasible(_) | Error::OutsideEnvelope { .. } | Error::NonIntegral { .. } => EXIT_INFEASIBLE,
        _ => EXIT_INVALID,
    }
}

fn load(common: &CommonArgs) -> Result<LoadedConfig> {
    let mut c = load_config(&common.config)?;
    if let Some(ms) = common.ms {
        c.network = c.network.with_memory(ms, c.network.private_mem)?;
    }
    Ok(c)
}

/// Fixed `M_s`, swept `M_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveSpec {
    pub helper_mem: Rational,
    pub start: Rational,
    pub stop: Rational,
    pub step: Rational,
}

impl CurveSpec {
    pub fn parse_range(helper_mem: Rational, range: &str) -> Result<Self> {
        let parts: Vec<&str> = range.split(':').collect();
        let [a, b, s] = parts.as_slice() else {
            return Err(Error::Parse(format!("--mp-range {range:?} is not A:B:STEP")));
        };
        let num = |t: &str| t.parse::<Rational>().map_err(|e| Error::Parse(format!("--mp-range {range:?}: {e}")));
        Ok(CurveSpec { helper_mem, start: num(a)?, stop: num(b)?, step: num(s)? })
    }

    pub fn points(&self, config: &NetworkConfig) -> Result<Vec<Rational>> {
        if !(self.step > Rational::ZERO) || self.start > self.stop || self.start.is_negative() {
            return Err(Error::InvalidConfig(format!(
                "M_p sweep {}:{}:{} needs 0 ≤ start ≤ stop and step > 0",
                self.start, self.stop, self.step
            )));
        }
        if self.helper_mem + self.stop > config.n() {
            return Err(Error::InvalidConfig(format!(
                "Ms + max Mp = {} exceeds N = {}",
                self.helper_mem + self.stop,
                config.num_files
            )));
        }
        let mut out = Vec::new();
        let mut mp = self.start;
        while mp <= self.stop {
            out.push(mp);
            mp += self.step;
        }
        Ok(out)
    }
}

/// One CSV row; `None` cells are undefined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveRow {
    pub private_mem: Rational,
    pub unknown: Option<Rational>,
    pub scheme1: Option<Rational>,
    pub scheme2: Option<Rational>,
    pub man: Rational,
    pub pue: Rational,
    pub cutset: Rational,
    pub mixed: Option<Rational>,
}

fn defined(r: Result<Rational>) -> Result<Option<Rational>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Infeasible(_) | Error::OutsideEnvelope { .. } | Error::NonIntegral { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Rows ordered by `M_p`, evaluated in parallel.
pub fn curve_rows(
    loaded: &LoadedConfig,
    spec: &CurveSpec,
    schemes: &[Scheme],
    rule: SharingRule,
    mix: bool,
) -> Result<Vec<CurveRow>> {
    let base = &loaded.network;
    let assoc = &loaded.assoc;
    spec.points(base)?
        .into_par_iter()
        .map(|mp| {
            let c = base.with_memory(spec.helper_mem, mp)?;
            let rate_of = |s: Scheme| -> Result<Option<Rational>> {
                if !schemes.contains(&s) {
                    return Ok(None);
                }
                defined(achieve_envelope(&c, assoc, s, rule).map(|a| a.rate))
            };
            let m = c.total_mem();
            Ok(CurveRow {
                private_mem: mp,
                unknown: rate_of(Scheme::Unknown)?,
                scheme1: rate_of(Scheme::Scheme1)?,
                scheme2: rate_of(Scheme::Scheme2)?,
                man: man_rate(c.num_users, c.num_files, m)?,
                pue: pue_rate(assoc.profile(), c.num_files, m)?,
                cutset: cutset_bound(&c, assoc).value,
                mixed: if mix { defined(achieve_mixed(&c, assoc).map(|a| a.rate))? } else { None },
            })
        })
        .collect()
}

fn cell(v: Option<Rational>, fractions: bool) -> String {
    match v {
        None => String::new(),
        Some(r) if fractions => r.to_string(),
        Some(r) => r.to_decimal_string(),
    }
}

pub fn render_csv(rows: &[CurveRow], fractions: bool, mix: bool) -> String {
    let mut s = String::from("Mp,unknown,scheme1,scheme2,man,pue,cutset");
    if mix {
        s.push_str(",mixed");
    }
    s.push('\n');
    for r in rows {
        let mut cells: Vec<String> = [Some(r.private_mem), r.unknown, r.scheme1, r.scheme2, Some(r.man), Some(r.pue), Some(r.cutset)]
            .into_iter()
            .map(|v| cell(v, fractions))
            .collect();
        if mix {
            cells.push(cell(r.mixed, fractions));
        }
        let _ = writeln!(s, "{}", cells.join(","));
    }
    s
}

fn cmd_rate(a: &PointArgs, out: &mut dyn Write) -> Result<i32> {
    let c = load(&a.common)?;
    let single = a.scheme != SchemeChoice::All;
    for s in a.scheme.schemes() {
        match achieve(&c.network, &c.assoc, s, a.sharing.into()) {
            Ok(got) => {
                let how = if got.direct { "formula" } else { "envelope" };
                writeln!(out, "{s}\t{}\t{}\t{how}", got.rate, got.rate.to_decimal_string())?;
                if !got.direct {
                    writeln!(out, "  {}", got.solution)?;
                } else if let Ok(env) = achieve_envelope(&c.network, &c.assoc, s, a.sharing.into()) {
                    if env.rate < got.rate {
                        writeln!(out, "  memory sharing does better: {}", env.solution)?;
                    }
                }
            }
            Err(e) if exit_code(&e) == EXIT_INFEASIBLE => {
                if single {
                    return Err(e);
                }
                writeln!(out, "{s}\tundefined\t{e}")?;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(EXIT_OK)
}

fn cmd_curve(a: &CurveArgs, out: &mut dyn Write) -> Result<i32> {
    let c = load(&a.point.common)?;
    let ms = c.network.helper_mem;
    let spec = match &a.mp_range {
        Some(r) => CurveSpec::parse_range(ms, r)?,
        None => {
            let stop = c.network.n() - ms;
            CurveSpec { helper_mem: ms, start: Rational::ZERO, stop, step: stop / Rational::from(20) }
        }
    };
    let rows = curve_rows(&c, &spec, &a.point.scheme.schemes(), a.point.sharing.into(), a.mix_schemes)?;
    let csv = render_csv(&rows, a.fractions, a.mix_schemes);
    match &a.out {
        Some(path) => std::fs::write(path, csv)?,
        None => out.write_all(csv.as_bytes())?,
    }
    Ok(EXIT_OK)
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let c = load(&a.point.common)?;
    let seed = a.seed.unwrap_or(c.seed);
    let single = a.point.scheme != SchemeChoice::All;
    let mut code = EXIT_OK;
    for s in a.point.scheme.schemes() {
        let rule = a.point.sharing.into();
        let sweep = if a.trials <= 1 {
            demand_sweep(&c.network, &c.assoc, s, rule, std::slice::from_ref(&c.demand), seed)
        } else {
            adversarial_sweep(&c.network, &c.assoc, s, rule, a.trials, seed)
        };
        match sweep {
            Ok(r) => {
                let rates: Vec<String> = r.rates.iter().map(|x| x.to_string()).collect();
                writeln!(out, "{s}\t{}/{} decoded\trate {}", r.trials - r.failures, r.trials, rates.join(" "))?;
                if let Some((d, why)) = &r.first_failure {
                    writeln!(out, "  demand {:?}: {why}", d.0)?;
                    code = EXIT_FAILED;
                }
            }
            Err(e) if exit_code(&e) == EXIT_INFEASIBLE && !single => writeln!(out, "{s}\tundefined\t{e}")?,
            Err(e) => return Err(e),
        }
    }
    Ok(code)
}

fn cmd_bounds(a: &PointArgs, out: &mut dyn Write) -> Result<i32> {
    let c = load(&a.common)?;
    let r = bound_report(&c.network, &c.assoc, a.sharing.into())?;
    writeln!(out, "{r}")?;
    let hm = &r.high_memory;
    Ok(if !r.consistent() || (hm.in_corner_triangle && !hm.optimal) { EXIT_FAILED } else { EXIT_OK })
}

fn cmd_converse(a: &CommonArgs, out: &mut dyn Write) -> Result<i32> {
    let c = load(a)?;
    let cert = certify(&c.network, &c.assoc, &c.demand)?;
    let list = |s: &std::collections::BTreeSet<crate::model::SubfileId>| {
        s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    };
    writeln!(out, "H1 ({}): {}", cert.h1.len(), list(&cert.h1))?;
    writeln!(out, "H2 ({}): {}", cert.h2.len(), list(&cert.h2))?;
    writeln!(out, "alpha lower {}\nkappa upper {}", cert.alpha_lower, cert.kappa_upper)?;
    writeln!(out, "acyclic {}\ntight {}", cert.acyclic, cert.tight)?;
    Ok(if cert.tight { EXIT_OK } else { EXIT_FAILED })
}

/// Runs a parsed command, reporting errors on `err`.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Rate(a) => cmd_rate(a, out),
        Command::Curve(a) => cmd_curve(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Bounds(a) => cmd_bounds(a, out),
        Command::Converse(a) => cmd_converse(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Parses `args` (program name first) and runs. Usage errors exit 1.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, out, err),
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            }
        }
    }
}
