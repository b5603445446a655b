//! `alphasurf`: smoothness, singularity scans and alpha-invariant reports for
//! surfaces in P^3.
//!
//! Standard output carries the final report, standard error the progress
//! lines. Exit status 0 means every verdict is proved, 2 that some part rests
//! on modular evidence or ran out of time, 1 an error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::Duration;

use alphasurf::alpha::{default_primes, family_surface, DEFAULT_SQRT_K};
use alphasurf::groebner::Budget;
use alphasurf::surface::ProjectiveSurface;
use clap::{Args, Parser, Subcommand, ValueEnum};

pub const PRIMES_ENV: &str = "ALPHASURF_PRIMES";
pub const TIMEOUT_ENV: &str = "ALPHASURF_TIMEOUT_SECONDS";

#[derive(Parser, Debug)]
#[command(name = "alphasurf", version, about = "Alpha-invariants and tangent-section singularities of surfaces in P^3")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Primes for the modular computations, comma separated [default: all primes up to 293]
    #[arg(long, global = true, env = PRIMES_ENV, value_delimiter = ',')]
    primes: Option<Vec<u64>>,

    /// Wall-clock budget for the whole run; computations still running are reported as timeouts
    #[arg(long, global = true, env = TIMEOUT_ENV)]
    timeout_seconds: Option<u64>,

    /// Write the JSON report to this file (`-` for standard output)
    #[arg(long, global = true, value_name = "FILE")]
    json: Option<PathBuf>,

    /// Report every runtime as 0, so that identical runs give identical output
    #[arg(long, global = true)]
    no_timings: bool,

    /// No progress lines on standard error
    #[arg(long, short, global = true)]
    quiet: bool,
}

#[derive(Args, Debug, Clone)]
struct SurfaceArg {
    /// Homogeneous polynomial in x, y, z, w
    #[arg(conflicts_with_all = ["family", "file"])]
    surface: Option<String>,

    /// Use the degree-N family surface instead
    #[arg(long, value_name = "N")]
    family: Option<u32>,

    /// Read the polynomial from a file
    #[arg(long, conflicts_with = "family")]
    file: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct RationalArg {
    /// Also run the check over the rationals
    #[arg(long)]
    over_q: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Level {
    A3,
    A4,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Is the surface smooth?
    Smooth {
        #[command(flatten)]
        surface: SurfaceArg,
        #[command(flatten)]
        q: RationalArg,
    },
    /// Is the Hessian curve `f = det Hess f = 0` smooth?
    HessianCurve {
        #[command(flatten)]
        surface: SurfaceArg,
        #[command(flatten)]
        q: RationalArg,
    },
    /// Is the Hessian of rank at most R nowhere on the surface?
    HessianRank {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long, default_value_t = 2)]
        rank: u32,
        #[command(flatten)]
        q: RationalArg,
    },
    /// Rational star points
    StarPoints {
        #[command(flatten)]
        surface: SurfaceArg,
    },
    /// Worst A_m singularity of the tangent sections, per prime
    WorstA {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long, default_value_t = 9)]
        max_m: u32,
    },
    /// alpha_1, the least threshold of a tangent section
    Alpha1 {
        #[command(flatten)]
        surface: SurfaceArg,
        /// Limit of the A_m scan; 0 skips it
        #[arg(long, default_value_t = 0)]
        max_m: u32,
    },
    /// Certified upper bounds on alpha
    Bounds {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long, default_value_t = 0)]
        max_m: u32,
        /// Denominator of the rational m below sqrt(d)
        #[arg(long, default_value_t = DEFAULT_SQRT_K)]
        sqrt_k: u64,
    },
    /// Full report comparing the bounds on alpha with alpha_1
    Tian {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long, default_value_t = 0)]
        max_m: u32,
        #[arg(long, default_value_t = DEFAULT_SQRT_K)]
        sqrt_k: u64,
        #[command(flatten)]
        q: RationalArg,
    },
    /// Classify the tangent section of a quartic at a rational point
    ClassifySection {
        #[command(flatten)]
        surface: SurfaceArg,
        /// Point such as `(0:0:0:1)`
        #[arg(long)]
        point: String,
    },
    /// Log canonical threshold of a plane curve germ in x, y at the origin
    LctGerm {
        germ: String,
        /// Largest m tried by the A_m classifier
        #[arg(long, default_value_t = 20)]
        max_m: u32,
    },
    /// Coefficient conditions for an A_3 or A_4 section at the normalized flag
    Incidence {
        #[arg(long, value_enum)]
        level: Level,
        #[arg(long)]
        degree: u32,
    },
    /// Print the family surface of degree N
    Family {
        #[arg(long = "d", value_name = "N")]
        d: u32,
    },
}

/// A finished command: human summary, JSON report, and whether every
/// verdict in it is proved.
pub struct Outcome {
    pub summary: String,
    pub json: serde_json::Value,
    pub proved: bool,
}

pub struct Context {
    pub primes: Vec<u64>,
    pub budget: Budget,
    pub no_timings: bool,
    quiet: bool,
}

impl Context {
    pub fn progress(&self, line: &str) {
        if !self.quiet {
            eprintln!("[alphasurf] {line}");
        }
    }
}

impl SurfaceArg {
    fn load(&self) -> Result<ProjectiveSurface, String> {
        match (&self.surface, self.family, &self.file) {
            (Some(text), None, None) => ProjectiveSurface::parse(text).map_err(|e| e.to_string()),
            (None, Some(d), None) => family_surface(d).map_err(|e| e.to_string()),
            (None, None, Some(path)) => {
                let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
                ProjectiveSurface::parse(text.trim()).map_err(|e| e.to_string())
            }
            (None, None, None) => Err("give a surface, --family N or --file PATH".into()),
            _ => Err("give only one of a surface, --family and --file".into()),
        }
    }
}

fn budget(timeout: Option<u64>) -> Budget {
    let Some(secs) = timeout else { return Budget::unlimited() };
    let limit = Duration::from_secs(secs);
    let flag = Arc::new(AtomicBool::new(false));
    let timer = flag.clone();
    std::thread::spawn(move || {
        std::thread::sleep(limit);
        timer.store(true, Ordering::Relaxed);
    });
    Budget { time_limit: Some(limit), cancel: Some(flag), ..Budget::unlimited() }
}

fn run(cli: &Cli, ctx: &Context) -> Result<Outcome, commands::Failure> {
    use commands::*;
    let load = |s: &SurfaceArg| s.load().map_err(Failure::Input);
    match &cli.command {
        Command::Smooth { surface, q } => smooth(&load(surface)?, q.over_q, ctx),
        Command::HessianCurve { surface, q } => hessian_curve(&load(surface)?, q.over_q, ctx),
        Command::HessianRank { surface, rank, q } => hessian_rank(&load(surface)?, *rank, q.over_q, ctx),
        Command::StarPoints { surface } => star_points(&load(surface)?, ctx),
        Command::WorstA { surface, max_m } => worst_a(&load(surface)?, *max_m, ctx),
        Command::Alpha1 { surface, max_m } => report(&load(surface)?, *max_m, DEFAULT_SQRT_K, false, View::Alpha1, ctx),
        Command::Bounds { surface, max_m, sqrt_k } => {
            report(&load(surface)?, *max_m, *sqrt_k, false, View::Bounds, ctx)
        }
        Command::Tian { surface, max_m, sqrt_k, q } => {
            report(&load(surface)?, *max_m, *sqrt_k, q.over_q, View::Full, ctx)
        }
        Command::ClassifySection { surface, point } => classify_section(&load(surface)?, point, ctx),
        Command::LctGerm { germ, max_m } => lct_germ(germ, *max_m),
        Command::Incidence { level, degree } => incidence(
            *degree,
            match level {
                Level::A3 => alphasurf::surface::IncidenceLevel::A3orWorse,
                Level::A4 => alphasurf::surface::IncidenceLevel::A4orWorse,
            },
        ),
        Command::Family { d } => family(*d),
    }
}

fn emit(cli: &Cli, out: &Outcome) -> Result<(), String> {
    let text = serde_json::to_string_pretty(&out.json).map_err(|e| e.to_string())? + "\n";
    match cli.json.as_deref() {
        Some(p) if p.as_os_str() == "-" => print!("{text}"),
        Some(p) => {
            std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display()))?;
            print!("{}", out.summary);
        }
        None => print!("{}", out.summary),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors exit 1, keeping 2 for evidence-only verdicts
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let ctx = Context {
        primes: cli.primes.clone().unwrap_or_else(default_primes),
        budget: budget(cli.timeout_seconds),
        no_timings: cli.no_timings,
        quiet: cli.quiet,
    };
    let out = match run(&cli, &ctx) {
        Ok(out) => out,
        Err(commands::Failure::Timeout(msg)) => {
            eprintln!("alphasurf: timeout: {msg}");
            commands::timeout_outcome(&msg)
        }
        Err(e) => {
            eprintln!("alphasurf: {e}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = emit(&cli, &out) {
        eprintln!("alphasurf: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(if out.proved { 0 } else { 2 })
}
