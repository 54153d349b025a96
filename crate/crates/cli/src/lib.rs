//! Command implementations behind the `theta-tails` binary.
//!
//! Every command renders its output to a string so that it can be tested
//! without a process boundary; `main` only parses flags, writes the
//! string and maps errors to exit codes.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use serde::Serialize;
use serde_json::{json, Value};

use theta_tails::arith::parse_ratio;
use theta_tails::constants::{c_of_q_generic, table_reciprocal_c};
use theta_tails::orbits::{enumerate_orbit, orbit_representatives, DEFAULT_Q_CAP};
use theta_tails::tailsim::{
    compact_support_report, fit_tail_constant, geometric_thresholds, simulate_theta_tail, weyl_tail_values,
    SamplingLaw, SimConfig, TailCurve, DEFAULT_SEED,
};
use theta_tails::weight::Gaussian;
use theta_tails::weylsum::{partial_sums, WeylSumSpec};
use theta_tails::{normalize_pair, Error, PairKind, RationalPair};

/// Environment variable overriding the default seed.
pub const SEED_ENV: &str = "THETA_TAILS_SEED";

#[derive(Debug, Parser)]
#[command(name = "theta-tails", version, about = "Tails of quadratic Weyl sums with rational parameters")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Table of 1/C(q) and C(q).
    Constants {
        #[arg(long = "q-max", default_value_t = 100)]
        q_max: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Orbit report of a pair.
    Orbit {
        #[command(flatten)]
        pair: PairArgs,
        /// Include the orbit points.
        #[arg(long)]
        points: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Orbit representatives of X_q with their sizes.
    Partition {
        #[arg(long)]
        q: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Partial sums S_0, ..., S_N at one x.
    Curlicue {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long = "N")]
        n: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Empirical tail of |S_N conj(S_rN)|/N for random x.
    Tail {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long = "N", default_value_t = 500)]
        n: u64,
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        #[arg(long, value_enum, default_value_t = Law::Normal)]
        law: Law,
        #[command(flatten)]
        sim: SimArgs,
        /// Window "lo:hi" of R used to fit the tail constant.
        #[arg(long = "fit-window", default_value = "2:4")]
        fit_window: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Empirical mu-measure tail of |Theta_f conj(Theta_f)| (Gaussian f).
    ThetaTail {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        sim: SimArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Args)]
pub struct PairArgs {
    /// alpha as an exact fraction, e.g. 1/2.
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub alpha: String,
    /// beta as an exact fraction.
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub beta: String,
}

impl PairArgs {
    fn ratios(&self) -> Result<(Ratio<i64>, Ratio<i64>), Error> {
        Ok((parse_ratio(&self.alpha)?, parse_ratio(&self.beta)?))
    }

    fn pair(&self) -> Result<RationalPair, Error> {
        let (a, b) = self.ratios()?;
        normalize_pair(a, b)
    }
}

#[derive(Debug, Args)]
pub struct SimArgs {
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    /// Seed (decimal or 0x-hex). Defaults to $THETA_TAILS_SEED, else 0xC0FFEE.
    #[arg(long)]
    pub seed: Option<String>,
    /// Threshold grid "lo:hi:steps" (geometric).
    #[arg(long, default_value = "1.5:6:20")]
    pub thresholds: String,
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
}

impl SimArgs {
    fn config(&self) -> Result<SimConfig, Error> {
        let seed = match &self.seed {
            Some(s) => parse_seed(s)?,
            None => match std::env::var(SEED_ENV) {
                Ok(s) => parse_seed(&s)?,
                Err(_) => DEFAULT_SEED,
            },
        };
        let cfg = SimConfig::new(self.samples, seed);
        Ok(if self.workers > 0 { cfg.with_workers(self.workers) } else { cfg })
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Law {
    Normal,
    Uniform01,
}

impl Law {
    fn law(self) -> SamplingLaw {
        match self {
            Law::Normal => SamplingLaw::StandardNormal,
            Law::Uniform01 => SamplingLaw::Uniform01,
        }
    }
}

/// What a command produced: the main output and an optional side report
/// (written to stderr by the binary).
#[derive(Debug, Default, PartialEq)]
pub struct Output {
    pub main: String,
    pub side: Option<String>,
}

/// Process exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) | Error::Unsupported(_) => 2,
        Error::ResourceLimit(_) => 3,
        Error::NumericFailure(_) => 4,
    }
}

pub fn parse_seed(s: &str) -> Result<u64, Error> {
    let s = s.trim();
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(h) => u64::from_str_radix(h, 16),
        None => s.parse(),
    };
    parsed.map_err(|_| Error::InvalidArgument(format!("bad seed '{s}'")))
}

/// "lo:hi:steps" to a geometric grid.
pub fn parse_thresholds(s: &str) -> Result<Vec<f64>, Error> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Error::InvalidArgument(format!("thresholds must look like lo:hi:steps, got '{s}'"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].parse().map_err(|_| bad())?;
    let steps: usize = parts[2].parse().map_err(|_| bad())?;
    geometric_thresholds(lo, hi, steps)
}

fn parse_window(s: &str) -> Result<(f64, f64), Error> {
    let bad = || Error::InvalidArgument(format!("fit window must look like lo:hi, got '{s}'"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    Ok((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?))
}

/// A float at 9 significant digits, trailing zeros trimmed.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let e = x.abs().log10().floor() as i32;
    if (-5..9).contains(&e) {
        let s = format!("{:.*}", (8 - e).max(0) as usize, x);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{x:.8e}")
    }
}

fn csv_string(header: &[&str], rows: &[Vec<String>]) -> Result<String, Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::NumericFailure(format!("csv: {e}"));
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::NumericFailure(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn to_json(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialise") + "\n"
}

fn pair_json(p: &RationalPair) -> Value {
    json!({"a": p.a, "b": p.b, "q": p.q, "kind": p.kind.to_string()})
}

/// Runs a parsed command.
pub fn run(cli: &Cli) -> Result<Output, Error> {
    match &cli.command {
        Command::Constants { q_max, out } => cmd_constants(*q_max, out.format.unwrap_or(Format::Csv)),
        Command::Orbit { pair, points, out } => cmd_orbit(&pair.pair()?, *points, out.format.unwrap_or(Format::Json)),
        Command::Partition { q, out } => cmd_partition(*q, out.format.unwrap_or(Format::Csv)),
        Command::Curlicue { pair, x, n, .. } => {
            let (a, b) = pair.ratios()?;
            cmd_curlicue(a, b, *x, *n)
        }
        Command::Tail { pair, n, r, law, sim, fit_window, out } => {
            let (a, b) = pair.ratios()?;
            let spec = WeylSumSpec::rational(*n, a, b);
            cmd_tail(
                &spec,
                *r,
                law.law(),
                &parse_thresholds(&sim.thresholds)?,
                &sim.config()?,
                parse_window(fit_window)?,
                out.format.unwrap_or(Format::Csv),
            )
        }
        Command::ThetaTail { pair, sim, out } => cmd_theta_tail(
            &pair.pair()?,
            &parse_thresholds(&sim.thresholds)?,
            &sim.config()?,
            out.format.unwrap_or(Format::Csv),
        ),
    }
}

/// Rows q, 1/C(q) (as "p/q"), C(q).
pub fn cmd_constants(q_max: u64, format: Format) -> Result<Output, Error> {
    if q_max == 0 {
        return Err(Error::InvalidArgument("q-max must be at least 1".into()));
    }
    let table = table_reciprocal_c(q_max);
    let main = match format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = table
                .iter()
                .map(|(q, inv)| {
                    let c = c_of_q_generic(*q);
                    vec![q.to_string(), inv.to_string(), fmt_sig(*c.numer() as f64 / *c.denom() as f64)]
                })
                .collect();
            csv_string(&["q", "one_over_C", "C"], &rows)?
        }
        Format::Json => to_json(&Value::Array(
            table
                .iter()
                .map(|(q, inv)| json!({"q": q, "one_over_C": inv.to_string(), "C": c_of_q_generic(*q).to_string()}))
                .collect(),
        )),
    };
    Ok(Output { main, side: None })
}

/// Orbit sizes, representative, leading constant and distances.
pub fn cmd_orbit(pair: &RationalPair, points: bool, format: Format) -> Result<Output, Error> {
    let o = enumerate_orbit(pair, DEFAULT_Q_CAP)?;
    let opt = |r: Option<Ratio<i64>>| r.map(|r| Value::String(r.to_string())).unwrap_or(Value::Null);
    let mut v = json!({
        "pair": pair_json(pair),
        "sizes": {"S": o.sizes.s, "U": o.sizes.u, "V": o.sizes.v},
        "representative": o.representative.to_string(),
        "leading_constant": o.leading_constant().to_string(),
        "theta_min_infty": opt(o.theta_min_infty),
        "theta_min_one": opt(o.theta_min_one),
    });
    if points {
        let q = pair.q;
        v["points"] = o
            .points
            .iter()
            .map(|&(r, s)| json!([Ratio::new(r as i64, q as i64).to_string(), Ratio::new(s as i64, q as i64).to_string()]))
            .collect();
    }
    let main = match format {
        Format::Json => to_json(&v),
        Format::Csv => csv_string(
            &["a", "b", "q", "kind", "S", "U", "V", "representative", "leading_constant"],
            &[vec![
                pair.a.to_string(),
                pair.b.to_string(),
                pair.q.to_string(),
                pair.kind.to_string(),
                o.sizes.s.to_string(),
                o.sizes.u.to_string(),
                o.sizes.v.to_string(),
                o.representative.to_string(),
                o.leading_constant().to_string(),
            ]],
        )?,
    };
    Ok(Output { main, side: None })
}

/// Orbit representatives of X_q and their sizes.
pub fn cmd_partition(q: u64, format: Format) -> Result<Output, Error> {
    if q > DEFAULT_Q_CAP {
        return Err(Error::ResourceLimit(format!("q = {q} exceeds the cap {DEFAULT_Q_CAP}")));
    }
    let reps = orbit_representatives(q)?;
    let main = match format {
        Format::Csv => csv_string(
            &["representative", "size"],
            &reps.iter().map(|(r, s)| vec![r.to_string(), s.to_string()]).collect::<Vec<_>>(),
        )?,
        Format::Json => to_json(&json!({
            "q": q,
            "total": reps.iter().map(|r| r.1).sum::<u64>(),
            "orbits": reps.iter().map(|(r, s)| json!({"representative": r.to_string(), "size": s})).collect::<Vec<_>>(),
        })),
    };
    Ok(Output { main, side: None })
}

/// CSV k, re, im of the partial sums S_0..S_N.
pub fn cmd_curlicue(alpha: Ratio<i64>, beta: Ratio<i64>, x: f64, n: u64) -> Result<Output, Error> {
    if !x.is_finite() {
        return Err(Error::InvalidArgument("x must be finite".into()));
    }
    let ps = partial_sums(x, &WeylSumSpec::rational(n, alpha, beta));
    let rows: Vec<Vec<String>> = ps
        .iter()
        .enumerate()
        .map(|(k, s)| vec![k.to_string(), fmt_sig(s.re), fmt_sig(s.im)])
        .collect();
    Ok(Output { main: csv_string(&["k", "re", "im"], &rows)?, side: None })
}

fn curve_csv(c: &TailCurve) -> Result<String, Error> {
    let rows: Vec<Vec<String>> = (0..c.thresholds.len())
        .map(|i| {
            vec![
                fmt_sig(c.thresholds[i]),
                fmt_sig(c.survival[i]),
                fmt_sig(c.predicted[i]),
                c.counts[i].to_string(),
            ]
        })
        .collect();
    csv_string(&["R", "survival", "predicted", "count"], &rows)
}

#[derive(Serialize)]
struct CurveRow {
    r: String,
    survival: String,
    predicted: String,
    count: u64,
}

fn curve_json(c: &TailCurve) -> Value {
    let rows: Vec<CurveRow> = (0..c.thresholds.len())
        .map(|i| CurveRow {
            r: fmt_sig(c.thresholds[i]),
            survival: fmt_sig(c.survival[i]),
            predicted: fmt_sig(c.predicted[i]),
            count: c.counts[i],
        })
        .collect();
    serde_json::to_value(rows).expect("rows serialise")
}

fn render(curve: &TailCurve, summary: Value, format: Format) -> Result<Output, Error> {
    Ok(match format {
        Format::Csv => Output { main: curve_csv(curve)?, side: Some(to_json(&summary)) },
        Format::Json => Output { main: to_json(&json!({"curve": curve_json(curve), "summary": summary})), side: None },
    })
}

/// Weyl-sum tail curve plus summary (prediction, fit, compact-support report).
pub fn cmd_tail(
    spec: &WeylSumSpec,
    r: f64,
    law: SamplingLaw,
    thresholds: &[f64],
    cfg: &SimConfig,
    window: (f64, f64),
    format: Format,
) -> Result<Output, Error> {
    let pair = spec.pair().ok_or_else(|| Error::InvalidArgument("rational parameters required".into()))?;
    let constant = theta_tails::constants::t_of_q(&pair, r)?;
    let values = weyl_tail_values(spec, r, law, cfg)?;
    let curve = TailCurve::from_values(&values, thresholds, constant, cfg.seed)?;
    let radii: Vec<f64> = values.iter().map(|v| v.sqrt()).collect();
    let report = compact_support_report(&radii)?;
    let fit = match fit_tail_constant(&curve, window) {
        Ok(f) => serde_json::to_value(f).expect("fit serialises"),
        Err(_) => Value::Null,
    };
    let mut trend = String::new();
    for (r, v) in &report.trend {
        let _ = write!(trend, "{}:{} ", fmt_sig(*r), fmt_sig(*v));
    }
    let summary = json!({
        "pair": pair_json(&pair),
        "N": spec.n,
        "r": fmt_sig(r),
        "law": format!("{law:?}"),
        "samples": cfg.samples,
        "seed": cfg.seed,
        "predicted_T": fmt_sig(constant),
        "fit": fit,
        "max_radius": fmt_sig(report.max),
        "trend_R4_survival": trend.trim_end(),
        "empirical_compact_support": report.compatible_with_compact_support,
        "verdict": if pair.kind == PairKind::C { "compact-support" } else { "heavy-tail" },
    });
    render(&curve, summary, format)
}

/// Theta tail curve for the Gaussian pair.
pub fn cmd_theta_tail(pair: &RationalPair, thresholds: &[f64], cfg: &SimConfig, format: Format) -> Result<Output, Error> {
    let curve = simulate_theta_tail(pair, &Gaussian, &Gaussian, thresholds, cfg)?;
    let summary = json!({
        "pair": pair_json(pair),
        "weights": ["gaussian", "gaussian"],
        "samples": cfg.samples,
        "seed": cfg.seed,
        "predicted_constant": fmt_sig(curve.constant),
    });
    render(&curve, summary, format)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(1.0 / 3.0), "0.333333333");
        assert_eq!(fmt_sig(2.0), "2");
        assert_eq!(fmt_sig(123456789.4), "123456789");
        assert_eq!(fmt_sig(-0.0015), "-0.0015");
        assert_eq!(fmt_sig(1.5e-9), "1.50000000e-9");
        assert_eq!(fmt_sig(0.0), "0");
    }

    #[test]
    fn seeds_and_grids() {
        assert_eq!(parse_seed("0xC0FFEE").unwrap(), 0xC0FFEE);
        assert_eq!(parse_seed("17").unwrap(), 17);
        assert!(parse_seed("nope").is_err());
        assert_eq!(parse_thresholds("1:4:3").unwrap(), vec![1.0, 2.0, 4.0]);
        assert!(parse_thresholds("1:4").is_err());
        assert_eq!(parse_window("2:3.5").unwrap(), (2.0, 3.5));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::InvalidArgument(String::new())), 2);
        assert_eq!(exit_code(&Error::ResourceLimit(String::new())), 3);
        assert_eq!(exit_code(&Error::NumericFailure(String::new())), 4);
    }
}
