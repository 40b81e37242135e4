//! Command-line surface.
//!
//! Exit codes: `0` success, `1` a proof-derived bound failed, `2` bad input
//! or parameters. Reports go to standard output unless `--out` is given;
//! diagnostics go to standard error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::adaptability::{is_s_adaptable, DEFAULT_ENERGY_THRESHOLD};
use crate::constructions::{ConstructionKind, ConstructionSpec};
use crate::counting::{count_report, incidence_profile, CountReport, DotPair, Method};
use crate::error::Error;
use crate::experiments::{run_scaling, run_separation_experiment, with_threads, ExperimentReport};
use crate::geometry::PointSet;
use crate::incidence::{
    check_dyadic_identities, check_line_capacity, dyadic_decompose, dyadic_decompose_separated,
    DyadicIdentityReport, DyadicStats, LineCapacityReport,
};
use crate::io;
use crate::rational::Rational;

pub const EXIT_OK: u8 = 0;
pub const EXIT_BOUND_FAILED: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "dotpairs",
    version,
    about = "Count point triples realizing a pair of dot products"
)]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Cap on worker threads.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Rational,
    /// Defaults to `alpha`.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<Rational>,
}

impl PairArgs {
    pub fn pair(&self) -> DotPair {
        DotPair::new(
            self.alpha.clone(),
            self.beta.clone().unwrap_or_else(|| self.alpha.clone()),
        )
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a constructed point set as CSV plus a `<out>.json` spec sidecar.
    Generate {
        #[arg(long, value_parser = parse_kind)]
        kind: ConstructionKind,
        #[arg(long)]
        n: u64,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<Rational>,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<Rational>,
        #[arg(long)]
        s: Option<Rational>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count triples in a point set (read from stdin without `--points`).
    Count {
        #[arg(long)]
        points: Option<PathBuf>,
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, value_parser = parse_method, default_value = "quadratic")]
        method: Method,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Incidence totals, dyadic buckets and line capacity.
    Incidence {
        #[arg(long)]
        points: Option<PathBuf>,
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        dyadic: bool,
        #[arg(long, requires = "epsilon")]
        capacity: bool,
        /// Separation `ε` of the input set.
        #[arg(long)]
        epsilon: Option<Rational>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Separation and Riesz-energy report.
    Adaptability {
        #[arg(long)]
        points: Option<PathBuf>,
        #[arg(long)]
        s: Rational,
        #[arg(long, default_value_t = DEFAULT_ENERGY_THRESHOLD)]
        threshold: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scaling experiment over a list of sizes.
    Experiment {
        #[arg(long, value_parser = parse_kind, required_unless_present = "separation", conflicts_with = "separation")]
        kind: Option<ConstructionKind>,
        /// Comma-separated sizes.
        #[arg(long = "n-list", value_delimiter = ',', required = true)]
        n_list: Vec<u64>,
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        s: Option<Rational>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Perturbed grids at separation `n^(−1/s)`; needs `--s`.
        #[arg(long, requires = "s")]
        separation: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the row table here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn parse_kind(s: &str) -> Result<ConstructionKind, Error> {
    s.parse()
}

fn parse_method(s: &str) -> Result<Method, Error> {
    s.parse()
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Usage(#[from] clap::Error),
    #[error(transparent)]
    Invalid(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(e) if !e.use_stderr() => EXIT_OK,
            _ => EXIT_INPUT,
        }
    }

    /// Prints the message where it belongs and returns the exit code.
    pub fn report(&self) -> u8 {
        match self {
            CliError::Usage(e) => {
                let _ = e.print();
            }
            CliError::Invalid(e) => eprintln!("error: {e}"),
        }
        self.exit_code()
    }
}

impl CliConfig {
    fn generation_spec(&self) -> Option<ConstructionSpec> {
        let Command::Generate {
            kind,
            n,
            alpha,
            beta,
            s,
            seed,
            ..
        } = &self.command
        else {
            return None;
        };
        Some(ConstructionSpec {
            kind: *kind,
            n: *n,
            alpha: alpha.clone(),
            beta: beta.clone(),
            s: s.clone(),
            seed: *seed,
        })
    }
}

/// Parses and validates `argv` (program name first).
pub fn parse_args<I, T>(argv: I) -> Result<CliConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = CliConfig::try_parse_from(argv)?;
    if let Some(spec) = config.generation_spec() {
        spec.validate()?;
    }
    if let Command::Experiment {
        kind: Some(ConstructionKind::PerturbedGrid),
        s: None,
        ..
    } = &config.command
    {
        return Err(Error::Parameter("perturbed-grid experiments need --s".into()).into());
    }
    if let Command::Incidence {
        epsilon: Some(e), ..
    } = &config.command
    {
        if !e.is_positive() {
            return Err(Error::Parameter(format!("--epsilon must be positive, got {e}")).into());
        }
    }
    Ok(config)
}

enum Outcome {
    Ok,
    BoundFailed(String),
}

/// Executes a parsed command and returns its exit code.
pub fn run(config: &CliConfig) -> u8 {
    let result = match config.threads {
        Some(t) => with_threads(t as usize, || execute(&config.command)).and_then(|r| r),
        None => execute(&config.command),
    };
    match result {
        Ok(Outcome::Ok) => EXIT_OK,
        Ok(Outcome::BoundFailed(what)) => {
            eprintln!("bound check failed: {what}");
            EXIT_BOUND_FAILED
        }
        Err(e) if e.is_bound_violation() => {
            eprintln!("error: {e}");
            EXIT_BOUND_FAILED
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

fn load(points: &Option<PathBuf>) -> crate::Result<PointSet> {
    match points {
        Some(path) => io::read_points(path),
        None => io::parse_points(std::io::stdin().lock(), "<stdin>"),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> crate::Result<()> {
    match out {
        Some(path) => io::write_text(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| Error::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    text
}

pub fn count_report_csv(report: &CountReport) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.serialize(report).expect("report serializes");
    String::from_utf8(writer.into_inner().expect("in-memory writer")).expect("utf-8 csv")
}

#[derive(Debug, Serialize)]
struct IncidenceOutput {
    n: u64,
    alpha: Rational,
    beta: Rational,
    total_incidences: u64,
    total_triples: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    dyadic: Option<DyadicStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    identities: Option<DyadicIdentityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    capacity: Option<LineCapacityReport>,
}

fn execute(command: &Command) -> crate::Result<Outcome> {
    match command {
        Command::Generate {
            kind,
            n,
            alpha,
            beta,
            s,
            seed,
            out,
        } => {
            let spec = ConstructionSpec {
                kind: *kind,
                n: *n,
                alpha: alpha.clone(),
                beta: beta.clone(),
                s: s.clone(),
                seed: *seed,
            };
            let set = spec.generate()?;
            emit(out, &io::format_points(&set))?;
            if let Some(path) = out {
                io::write_sidecar(path, &spec)?;
            }
            Ok(Outcome::Ok)
        }
        Command::Count {
            points,
            pair,
            method,
            format,
            out,
        } => {
            let set = load(points)?;
            let report = count_report(&set, &pair.pair(), *method)?;
            let text = match format {
                Format::Json => to_json(&report),
                Format::Csv => count_report_csv(&report),
            };
            emit(out, &text)?;
            Ok(Outcome::Ok)
        }
        Command::Incidence {
            points,
            pair,
            dyadic,
            capacity,
            epsilon,
            out,
        } => {
            let set = load(points)?;
            let pair = pair.pair();
            let profile = incidence_profile(&set, &pair);
            let epsilon_sq = epsilon.as_ref().map(|e| e * e);
            let stats = dyadic.then(|| match &epsilon_sq {
                Some(e2) => dyadic_decompose_separated(&profile, e2),
                None => dyadic_decompose(&profile),
            });
            let identities = stats.as_ref().map(|s| check_dyadic_identities(s, &profile));
            let capacity = match (capacity, &epsilon_sq) {
                (true, Some(e2)) => Some(check_line_capacity(&set, &pair, e2)?),
                _ => None,
            };
            let output = IncidenceOutput {
                n: set.len() as u64,
                alpha: pair.alpha.clone(),
                beta: pair.beta.clone(),
                total_incidences: profile.total_incidences,
                total_triples: profile.total_triples,
                dyadic: stats,
                identities,
                capacity,
            };
            emit(out, &to_json(&output))?;
            if output.identities.as_ref().is_some_and(|r| !r.holds()) {
                return Ok(Outcome::BoundFailed("dyadic brackets".into()));
            }
            if output.capacity.as_ref().is_some_and(|r| !r.passed) {
                return Ok(Outcome::BoundFailed("line capacity".into()));
            }
            Ok(Outcome::Ok)
        }
        Command::Adaptability {
            points,
            s,
            threshold,
            out,
        } => {
            let set = load(points)?;
            let report = is_s_adaptable(&set, s, *threshold)?;
            emit(out, &to_json(&report))?;
            Ok(Outcome::Ok)
        }
        Command::Experiment {
            kind,
            n_list,
            pair,
            s,
            seed,
            separation,
            format,
            out,
            csv,
        } => {
            let pair = pair.pair();
            let report = if *separation {
                let s = s.as_ref().expect("clap enforces --s");
                run_separation_experiment(n_list, s, &pair, *seed)?
            } else {
                let kind = kind.expect("clap enforces --kind");
                let family = ConstructionSpec {
                    kind,
                    n: 0,
                    alpha: (kind == ConstructionKind::Sharp).then(|| pair.alpha.clone()),
                    beta: (kind == ConstructionKind::Sharp).then(|| pair.beta.clone()),
                    s: s.clone(),
                    seed: *seed,
                };
                run_scaling(&family, n_list, &pair)?
            };
            let text = match format {
                Format::Json => to_json(&report),
                Format::Csv => report.rows_csv(),
            };
            emit(out, &text)?;
            if let Some(path) = csv {
                io::write_text(path, &report.rows_csv())?;
            }
            Ok(experiment_outcome(&report))
        }
    }
}

fn experiment_outcome(report: &ExperimentReport) -> Outcome {
    let failed: Vec<&str> = report
        .bound_checks
        .iter()
        .filter(|c| c.asserted && !c.passed)
        .map(|c| c.name.as_str())
        .collect();
    if failed.is_empty() {
        Outcome::Ok
    } else {
        Outcome::BoundFailed(failed.join(", "))
    }
}

/// Convenience for tests and examples: run a command line given as words.
pub fn run_words(words: &[&str]) -> u8 {
    let argv = std::iter::once("dotpairs").chain(words.iter().copied());
    match parse_args(argv) {
        Ok(config) => run(&config),
        Err(e) => e.report(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(words: &[&str]) -> Result<CliConfig, CliError> {
        parse_args(std::iter::once("dotpairs").chain(words.iter().copied()))
    }

    #[test]
    fn count_flags_parse() {
        let config = parse(&[
            "count",
            "--points",
            "p.csv",
            "--alpha",
            "1",
            "--beta",
            "3/2",
            "--method",
            "quadratic",
        ])
        .unwrap();
        match config.command {
            Command::Count {
                pair,
                method,
                points,
                ..
            } => {
                assert_eq!(
                    pair.pair(),
                    DotPair::new(Rational::one(), Rational::new(3, 2))
                );
                assert_eq!(method, Method::Quadratic);
                assert_eq!(points, Some(PathBuf::from("p.csv")));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn decimal_alpha_is_exact() {
        let config = parse(&["count", "--alpha", "0.1"]).unwrap();
        let Command::Count { pair, .. } = config.command else {
            panic!()
        };
        assert_eq!(pair.alpha, Rational::new(1, 10));
    }

    #[test]
    fn negative_targets_parse() {
        let config = parse(&["count", "--alpha", "-1/2", "--beta", "-3"]).unwrap();
        let Command::Count { pair, .. } = config.command else {
            panic!()
        };
        assert_eq!(
            pair.pair(),
            DotPair::new(Rational::new(-1, 2), Rational::from(-3))
        );
    }

    #[test]
    fn sharp_with_two_points_is_a_parameter_error() {
        let err = parse(&[
            "generate", "--kind", "sharp", "--n", "2", "--alpha", "1", "--beta", "3/2",
        ])
        .unwrap_err();
        assert!(matches!(err, CliError::Invalid(Error::Parameter(_))));
        assert_eq!(err.exit_code(), EXIT_INPUT);
    }

    #[test]
    fn usage_errors() {
        for words in [
            &["count", "--alpha", "1/0"][..],
            &["count", "--alpha", "1", "--bogus"],
            &["count"],
            &["incidence", "--alpha", "1", "--capacity"],
            &[
                "experiment",
                "--kind",
                "grid",
                "--separation",
                "--s",
                "2",
                "--n-list",
                "4,9,16",
                "--alpha",
                "1",
            ],
            &["count", "--alpha", "1", "--method", "fast"],
            &["frobnicate"],
        ] {
            let err = parse(words).unwrap_err();
            assert_eq!(err.exit_code(), EXIT_INPUT, "{words:?}");
        }
    }

    #[test]
    fn count_csv_has_header_and_row() {
        let set = crate::constructions::grid_set(4).unwrap();
        let report = count_report(
            &set,
            &DotPair::new(Rational::one(), Rational::one()),
            Method::Brute,
        )
        .unwrap();
        let text = count_report_csv(&report);
        let mut lines = text.lines();
        assert!(lines
            .next()
            .unwrap()
            .starts_with("n,alpha,beta,method,triples"));
        assert!(lines.next().unwrap().starts_with("4,1,1,brute,"));
    }
}
