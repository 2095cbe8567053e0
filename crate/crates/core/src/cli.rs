//! Command-line front end. `run` returns the process exit code: 0 when every
//! requested check passes, 1 on a check failure, 2 on usage or input errors.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::complex::{ComplexFile, SimplicialComplex};
use crate::error::{Error, Result};
use crate::exactlinalg::{smith_normal_form, IntMatrix};
use crate::polynomial::cyclotomic;
use crate::verify::{self, CheckId, VerificationReport, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const DEFAULT_CHECKS: &str = "main,signs,kT,attaching,symmetry";

#[derive(Debug, Parser)]
#[command(name = "cyclohom", version, about = "Cyclotomic coefficients as torsion in d-partite complexes")]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, clap::Args)]
pub struct RunArgs {
    /// Comma-separated checks: main, signs, kT, attaching, coboundary,
    /// symmetry, migotti, tree, basis.
    #[arg(long, default_value = DEFAULT_CHECKS, value_delimiter = ',')]
    pub checks: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads for independent checks.
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Seed for random T families.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random T per n for the kT and tree checks.
    #[arg(long, default_value_t = 20)]
    pub random_t: usize,
    /// Record elapsed_ms (otherwise 0, keeping output reproducible).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the coefficients of the n-th cyclotomic polynomial, constant term first.
    Cyclotomic { n: u64 },
    /// Run checks for one squarefree n.
    Verify {
        n: u64,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run checks for every squarefree n up to --max-n.
    Sweep {
        #[arg(long)]
        max_n: u64,
        /// Only n with exactly this many prime factors.
        #[arg(long)]
        d: Option<usize>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Reduced homology of a complex given as JSON.
    Homology {
        #[arg(long = "in")]
        input: PathBuf,
        /// Single degree; all degrees when omitted.
        #[arg(long, allow_negative_numbers = true)]
        dim: Option<isize>,
    },
    /// Smith normal form diagonal of a matrix in triplet format.
    Snf {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

enum Failure {
    Usage(String),
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Parses `argv` (including the program name) and runs it.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cfg = match CliConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cfg) {
        Ok(()) => EXIT_OK,
        Err(Failure::Checks) => EXIT_CHECK_FAILED,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
    }
}

fn execute(cfg: CliConfig) -> std::result::Result<(), Failure> {
    match cfg.command {
        Command::Cyclotomic { n } => {
            if n == 0 {
                return Err(Failure::Usage("n must be at least 1".into()));
            }
            println!("{}", cyclotomic(n)?);
            Ok(())
        }
        Command::Verify { n, run } => {
            if n < 2 || !crate::numtheory::is_squarefree(n) {
                return Err(Failure::Usage(format!("{n} is not a squarefree integer >= 2")));
            }
            let checks = parse_checks(&run.checks)?;
            let reports = with_pool(&run, |opts| {
                checks.iter().map(|&c| verify::run_check(n, c, opts)).collect()
            })?;
            emit(&run, &reports)
        }
        Command::Sweep { max_n, d, run } => {
            let checks = parse_checks(&run.checks)?;
            let reports = with_pool(&run, |opts| verify::sweep(max_n, &checks, d, opts))?;
            emit(&run, &reports)
        }
        Command::Homology { input, dim } => {
            let text = read(&input)?;
            let file: ComplexFile =
                serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", input.display())))?;
            let k = SimplicialComplex::from_file(&file)?;
            match dim {
                Some(i) => println!("{}", k.reduced_homology(i)),
                None => {
                    for (idx, g) in k.homology_profile().groups.iter().enumerate() {
                        println!("{}: {}", idx as isize - 1, g);
                    }
                }
            }
            Ok(())
        }
        Command::Snf { input } => {
            let m = IntMatrix::parse_triplet_text(&read(&input)?)?;
            let snf = smith_normal_form(&m, false);
            let line: Vec<String> = snf.diagonal.iter().map(|x| x.to_string()).collect();
            println!("{}", line.join(" "));
            Ok(())
        }
    }
}

fn read(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

fn parse_checks(names: &[String]) -> Result<Vec<CheckId>> {
    let mut out: Vec<CheckId> = Vec::new();
    for name in names.iter().filter(|s| !s.trim().is_empty()) {
        let c: CheckId = name.parse()?;
        if !out.contains(&c) {
            out.push(c);
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidArgument("no checks selected".into()));
    }
    Ok(out)
}

fn with_pool(
    run: &RunArgs,
    body: impl FnOnce(&VerifyOptions) -> Vec<VerificationReport> + Send,
) -> Result<Vec<VerificationReport>> {
    if run.threads == 0 {
        return Err(Error::InvalidArgument("--threads must be positive".into()));
    }
    let opts = VerifyOptions {
        seed: run.seed,
        parallel: run.threads > 1,
        timing: run.timing,
        random_t: run.random_t,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(run.threads)
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(pool.install(|| body(&opts)))
}

fn emit(run: &RunArgs, reports: &[VerificationReport]) -> std::result::Result<(), Failure> {
    let mut body = match run.format {
        Format::Json => verify::reports_to_json(reports),
        Format::Csv => verify::reports_to_csv(reports),
        Format::Text => verify::reports_to_text(reports),
    };
    if !body.ends_with('\n') {
        body.push('\n');
    }
    match &run.out {
        Some(path) => fs::write(path, body)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
        None => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(body.as_bytes());
        }
    }
    for r in reports.iter().filter(|r| !r.passed()) {
        for c in r.failures() {
            eprintln!("n={} {} {}: failed", r.n, r.check_id, c.id);
        }
    }
    if reports.iter().all(|r| r.passed()) {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}
