use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use skeinlab::character::Mode;
use skeinlab::checks::{self, Format, RunConfig, RunError, Suite};

#[derive(Parser)]
#[command(name = "skeinlab", version, about = "Exact verification of skein module computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

#[derive(clap::Args)]
struct Selection {
    /// Comma-separated suites (default: all).
    #[arg(long, value_delimiter = ',')]
    suite: Vec<String>,
    /// Odd values of n for the character suite.
    #[arg(long = "n", value_delimiter = ',')]
    n: Vec<i64>,
    /// Manifest files or directories (default: built in, or $SKEINLAB_MANIFEST_DIR).
    #[arg(long)]
    manifests: Vec<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run checks and write a report.
    Verify {
        #[command(flatten)]
        sel: Selection,
        #[arg(long, default_value_t = 6)]
        kmax: i64,
        #[arg(long, default_value_t = 6)]
        nmax: u32,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        /// Ball precision in bits.
        #[arg(long, default_value_t = 128)]
        precision: u32,
        #[arg(long, value_enum, default_value = "text")]
        report: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write per-task timing events as JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// List check ids without running them.
    List {
        #[command(flatten)]
        sel: Selection,
    },
}

fn config(sel: Selection) -> Result<RunConfig, RunError> {
    let mut cfg = RunConfig::default();
    if !sel.suite.is_empty() {
        cfg.suites = sel.suite.iter().map(|s| s.parse::<Suite>()).collect::<Result<_, _>>()?;
    }
    if !sel.n.is_empty() {
        cfg.n_values = sel.n;
    }
    cfg.manifest_paths = sel.manifests;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<i32, RunError> {
    match cli.command {
        Command::Verify { sel, kmax, nmax, mode, precision, report, out, trace, jobs, seed } => {
            let mut cfg = config(sel)?;
            cfg.kmax = kmax;
            cfg.nmax = nmax;
            cfg.mode = match mode {
                ModeArg::Exact => Mode::Exact,
                ModeArg::Float => Mode::Float,
            };
            cfg.precision = precision;
            cfg.seed = seed;
            if let Some(j) = jobs {
                cfg.parallelism = j;
            }
            let (rep, events) = checks::run_suite_traced(&cfg)?;
            let format = match report {
                FormatArg::Json => Format::Json,
                FormatArg::Text => Format::Text,
            };
            checks::emit_report(&rep, format, out.as_deref())?;
            if let Some(t) = trace {
                checks::emit_trace(&events, &t)?;
            }
            if out.is_some() {
                let s = &rep.summary;
                eprintln!("{} pass, {} fail, {} flagged", s.pass, s.fail, s.flagged);
            }
            Ok(rep.exit_code())
        }
        Command::List { sel } => {
            let mut out = std::io::stdout().lock();
            for c in checks::list_checks(&config(sel)?)? {
                // a closed pipe (e.g. `| head`) just ends the listing
                if writeln!(out, "{:<12} {}", c.suite, c.check_id).is_err() {
                    break;
                }
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
    }
}
