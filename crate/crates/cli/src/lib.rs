//! Command-line front end: graph classification, first cohomology and the
//! operator and derivation experiments, reported as JSON.
//!
//! Reports depend only on the command line minus `--out` and `--jobs`, so
//! reruns are byte-identical at any thread count.

mod classify;
mod experiment;
mod graphs;
mod h1;
pub mod json;

use std::fmt;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use semigroupoid::Error;

pub use experiment::ExperimentCommand;
pub use graphs::{named, GraphArgs};

pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_PRECONDITION: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "semigroupoid", version, about = "Free semigroupoid algebras of directed graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads for independent degrees and trials.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: u16,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Per-component verdict, alternating number, acyclic edges and fruit decomposition.
    Classify {
        #[command(flatten)]
        graph: GraphArgs,
        /// Enumeration budget for lines and polygons.
        #[arg(long, default_value_t = 1_000_000, value_parser = positive)]
        budget: usize,
    },
    /// Cohomology verdict and graded dimensions.
    H1 {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
        /// Enumeration budget for lines and polygons.
        #[arg(long, default_value_t = 1_000_000, value_parser = positive)]
        budget: usize,
        /// Largest number of unknowns allowed in one degree.
        #[arg(long, default_value_t = semigroupoid::path::DEFAULT_BASIS_CAP, value_parser = positive)]
        cap: usize,
    },
    /// Operator and derivation experiments.
    Experiment {
        #[command(subcommand)]
        experiment: ExperimentCommand,
    },
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        Ok(_) => Err("must be positive".into()),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { code: EXIT_PARSE, message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        CliError { code: EXIT_INTERNAL, message: message.into() }
    }

    pub fn precondition(message: impl Into<String>) -> Self {
        CliError { code: EXIT_PRECONDITION, message: message.into() }
    }

    pub fn budget(message: impl Into<String>) -> Self {
        CliError { code: EXIT_BUDGET, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            e if e.is_parse() => EXIT_PARSE,
            e if e.is_resource() => EXIT_BUDGET,
            Error::Precondition(_) | Error::Window(_) => EXIT_PRECONDITION,
            _ => EXIT_INTERNAL,
        };
        CliError { code, message: e.to_string() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

/// The report for `cli` as JSON text, computed on a pool of `cli.jobs` threads.
pub fn report(cli: &Cli) -> Result<String, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs as usize)
        .build()
        .map_err(|e| CliError::io(format!("cannot start worker threads: {e}")))?;
    let value = pool.install(|| match &cli.command {
        Command::Classify { graph, budget } => classify::run(graph, *budget),
        Command::H1 { graph, max_degree, budget, cap } => h1::run(graph, *max_degree, *budget, *cap),
        Command::Experiment { experiment } => experiment::run(experiment),
    })?;
    Ok(json::render(&value))
}

/// Parses `args` (program name first), runs the command and writes the
/// report. Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let text = match report(&cli) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: {e}");
            return e.code;
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_INTERNAL;
            }
        }
        None => print!("{text}"),
    }
    0
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn code(args: &[&str]) -> Result<Value, i32> {
        let cli = Cli::try_parse_from(std::iter::once("semigroupoid").chain(args.iter().copied())).map_err(|_| EXIT_PARSE)?;
        report(&cli).map(|text| serde_json::from_str(&text).unwrap()).map_err(|e| e.code)
    }

    fn temp(name: &str) -> PathBuf {
        std::env::temp_dir().join(format!("semigroupoid-cli-{}-{name}", std::process::id()))
    }

    #[test]
    fn exit_codes() {
        assert_eq!(code(&["classify", "--graph", "nope"]).unwrap_err(), EXIT_PARSE);
        assert_eq!(code(&["classify"]).unwrap_err(), EXIT_PARSE);
        assert_eq!(code(&["classify", "--graph", "circle3", "--budget", "0"]).unwrap_err(), EXIT_PARSE);
        assert_eq!(code(&["--jobs", "0", "classify", "--graph", "circle3"]).unwrap_err(), EXIT_PARSE);
        assert_eq!(code(&["experiment", "probe", "--trials", "2"]).unwrap_err(), EXIT_PARSE);
        assert_eq!(code(&["h1", "--graph", "free4", "--cap", "100"]).unwrap_err(), EXIT_BUDGET);
        assert_eq!(code(&["classify", "--graph", "zigzag12", "--budget", "1"]).unwrap_err(), EXIT_BUDGET);
        assert_eq!(code(&["experiment", "probe", "--graph", "circle3", "--seed", "1"]).unwrap_err(), EXIT_PRECONDITION);
        assert_eq!(code(&["experiment", "adversary", "alternating", "--m", "3", "--graph", "zigzag5", "--budget", "0"]).unwrap_err(), EXIT_PRECONDITION);
        assert_eq!(code(&["experiment", "dixmier", "--n", "9", "--depth", "8"]).unwrap_err(), EXIT_PRECONDITION);

        let bad = temp("bad.txt");
        std::fs::write(&bad, "vertex a\nedge e: a ->\n").unwrap();
        assert_eq!(code(&["classify", "--input", bad.to_str().unwrap()]).unwrap_err(), EXIT_PARSE);
        std::fs::remove_file(&bad).unwrap();
        assert_eq!(code(&["classify", "--input", bad.to_str().unwrap()]).unwrap_err(), EXIT_INTERNAL);
    }

    #[test]
    fn reports() {
        let v = code(&["classify", "--graph", "zigzag5"]).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["result"]["components"][0]["alternating_number"]["value"], 3);
        let v = code(&["h1", "--graph", "parallel3", "--max-degree", "2"]).unwrap();
        assert_eq!(v["result"]["graded"]["dims"], serde_json::json!([8, 0, 0]));
        assert_eq!(v["result"]["verdict"]["trivial"], false);
        let v = code(&["experiment", "adversary", "in-fruit", "--coeffs", "0,1"]).unwrap();
        assert_eq!(v["result"]["implementer_fruit_corner"][1]["coefficient"], serde_json::json!(["-1", "0"]));
    }

    #[test]
    fn out_file_matches_report_at_any_thread_count() {
        let out = temp("out.json");
        let args = |jobs: &'static str| ["semigroupoid", "--jobs", jobs, "experiment", "probe", "--trials", "6", "--seed", "3"];
        assert_eq!(run(args("1").iter().copied().chain(["--out", out.to_str().unwrap()])), 0);
        let written = std::fs::read_to_string(&out).unwrap();
        std::fs::remove_file(&out).unwrap();
        assert_eq!(written, report(&Cli::try_parse_from(args("3")).unwrap()).unwrap());
    }
}
