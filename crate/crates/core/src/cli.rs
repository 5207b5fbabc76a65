//! The `unitary-flips` command-line tool.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 invalid
//! parameters, 3 the input map is not a flip, 4 malformed input, 5 a
//! `plus`/`minus` geometry was requested for a linear flip, 6 an enumeration
//! exceeded `--max-enumeration`.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::building::DEFAULT_ENUMERATION_LIMIT;
use crate::classify::{canonical_flip, classify, FlipClass};
use crate::error::Error;
use crate::field::FieldParams;
use crate::geometry::{build_geometry, Variant};
use crate::serial::{self, ClassifyReport, FlipFile, GeometryReport};
use crate::space::HermitianSpace;
use crate::verify::{self, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INVALID_PARAMS: i32 = 2;
pub const EXIT_NOT_A_FLIP: i32 = 3;
pub const EXIT_MALFORMED: i32 = 4;
pub const EXIT_NEEDS_SEMILINEAR: i32 = 5;
pub const EXIT_TOO_LARGE: i32 = 6;

#[derive(Debug, Parser)]
#[command(name = "unitary-flips", version, about = "Flips of finite unitary buildings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the canonical flip of a class as a flip file.
    Canonical {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        class: FlipClass,
        /// Output path; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify the map in a flip file.
    Classify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate the geometry a flip induces.
    Geometry {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "full")]
        variant: Variant,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
        max_enumeration: u128,
    },
    /// Run verification suites and write a report.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u32,
        #[arg(long, default_value = "all")]
        suite: Suite,
        /// Restrict the checks to one class.
        #[arg(long)]
        class: Option<FlipClass>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
        max_enumeration: u128,
        /// Record wall-clock time per check (reports are then not reproducible).
        #[arg(long)]
        timings: bool,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl ToString) -> Self {
        Self { code, message: message.to_string() }
    }
}

/// Exit code for an error raised while handling an input file.
fn input_error(e: Error) -> Failure {
    let code = match e {
        Error::NotAFlip | Error::NotSimilitude | Error::NotInvolution => EXIT_NOT_A_FLIP,
        Error::VariantRequiresSemilinear => EXIT_NEEDS_SEMILINEAR,
        Error::EnumerationTooLarge { .. } => EXIT_TOO_LARGE,
        _ => EXIT_MALFORMED,
    };
    Failure::new(code, e)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::new(EXIT_INVALID_PARAMS, format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Failure::new(EXIT_INVALID_PARAMS, e))
        }
    }
}

fn load(input: &std::path::Path) -> Result<(HermitianSpace, crate::semilinear::SemilinearMap), Failure> {
    let file = FlipFile::read(input).map_err(|e| Failure::new(EXIT_MALFORMED, e))?;
    file.to_map().map_err(|e| Failure::new(EXIT_MALFORMED, e))
}

fn execute(cli: Cli) -> Result<i32, Failure> {
    match cli.command {
        Command::Canonical { n, q, class, out } => {
            let field = FieldParams::new(q).map_err(|e| Failure::new(EXIT_INVALID_PARAMS, e))?;
            let space =
                HermitianSpace::standard(n, field).map_err(|e| Failure::new(EXIT_INVALID_PARAMS, e))?;
            let file = FlipFile::from_map(&space, &canonical_flip(&space, class));
            emit(&out, &serial::to_json(&file))?;
            Ok(EXIT_OK)
        }
        Command::Classify { input, out } => {
            let (space, map) = load(&input)?;
            let flip = classify(&space, &map).map_err(input_error)?;
            emit(&out, &serial::to_json(&ClassifyReport::new(&flip)))?;
            Ok(EXIT_OK)
        }
        Command::Geometry { input, variant, out, max_enumeration } => {
            let (space, map) = load(&input)?;
            let flip = classify(&space, &map).map_err(input_error)?;
            let geom = build_geometry(&flip, variant, max_enumeration).map_err(input_error)?;
            emit(&out, &serial::to_json(&GeometryReport::new(&flip, &geom)))?;
            Ok(EXIT_OK)
        }
        Command::Verify { n, q, suite, class, seed, out, max_enumeration, timings } => {
            let field = FieldParams::new(q).map_err(|e| Failure::new(EXIT_INVALID_PARAMS, e))?;
            HermitianSpace::standard(n, field).map_err(|e| Failure::new(EXIT_INVALID_PARAMS, e))?;
            let mut cfg = verify::Config::new(n, q);
            cfg.class = class;
            cfg.seed = seed;
            cfg.limit = max_enumeration;
            cfg.timings = timings;
            let report = verify::run_suite(suite, &cfg);
            for c in &report.checks {
                eprintln!("{:<28} {:?}", c.name, c.status);
            }
            emit(&out, &serial::to_json(&report))?;
            Ok(if report.all_passed() { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID_PARAMS } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
