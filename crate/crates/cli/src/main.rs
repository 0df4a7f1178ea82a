use std::fs;
use std::io::{self, Write};
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use hoprep_core::parser::parse_problem;
use hoprep_core::pe::KTOL_INFINITE;
use hoprep_core::pipeline::{
    emit_report, parse_techniques, run_pipeline, PipelineConfig, StatsFormat, Technique,
};
use hoprep_core::printer::print_problem;

const EXIT_INPUT: u8 = 1;
const EXIT_INTERNAL: u8 = 2;
const EXIT_MISMATCH: u8 = 3;

/// Preprocess a clausal higher-order problem.
#[derive(Debug, Parser)]
#[command(name = "hoprep", version)]
struct Cli {
    /// Comma-separated techniques in application order, or `all`.
    #[arg(long, default_value = "hlbe,ppe,bce,qle")]
    techniques: String,
    /// Growth tolerance for predicate elimination; `inf` disables the guard.
    #[arg(long, default_value = "10", value_parser = parse_ktol)]
    ktol: u64,
    /// Breadth-first depth bound for hidden literal search.
    #[arg(long, default_value_t = hoprep_core::hlbe::DEFAULT_DEPTH)]
    hlbe_depth: usize,
    /// Maximum number of passes over the technique list.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    max_rounds: u64,
    /// Compare input and output with the brute-force oracle.
    #[arg(long)]
    check_ground: bool,
    /// Report format written to stderr.
    #[arg(long, default_value = "text")]
    stats: StatsFormat,
    /// Write the transformed problem here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Problem file in the native format.
    input: PathBuf,
}

fn parse_ktol(s: &str) -> Result<u64, String> {
    match s {
        "inf" | "infinity" | "∞" => Ok(KTOL_INFINITE),
        _ => s.parse().map_err(|e| format!("{e}")),
    }
}

fn seed_from_env() -> Result<Option<u64>, String> {
    match std::env::var("HOPREP_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|e| format!("HOPREP_SEED: {e}")),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(format!("HOPREP_SEED: {e}")),
    }
}

fn write_atomically(path: &Path, contents: &str) -> io::Result<()> {
    let dir = path
        .parent()
        .filter(|d| !d.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

fn run(cli: Cli) -> ExitCode {
    let techniques: Vec<Technique> = match parse_techniques(&cli.techniques) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: --techniques: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let seed = match seed_from_env() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let text = match fs::read_to_string(&cli.input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", cli.input.display());
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let problem = match parse_problem(&text) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{}:{e}", cli.input.display());
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let cfg = PipelineConfig {
        techniques,
        k_tol: cli.ktol,
        hlbe_depth: cli.hlbe_depth,
        max_rounds: cli.max_rounds as usize,
        check_ground: cli.check_ground,
        seed,
    };

    let outcome = panic::catch_unwind(AssertUnwindSafe(|| {
        let (out, report) = run_pipeline(&problem, &cfg);
        (print_problem(&out), report)
    }));
    let (printed, report) = match outcome {
        Ok(r) => r,
        Err(_) => {
            eprintln!("error: internal invariant violated");
            return ExitCode::from(EXIT_INTERNAL);
        }
    };

    eprint!("{}", emit_report(&report, cli.stats));
    if report.oracle_mismatch() {
        eprintln!("error: oracle verdicts differ between input and output");
        return ExitCode::from(EXIT_MISMATCH);
    }

    let written = match &cli.output {
        Some(path) => {
            write_atomically(path, &printed).map_err(|e| format!("{}: {e}", path.display()))
        }
        None => io::stdout()
            .lock()
            .write_all(printed.as_bytes())
            .map_err(|e| e.to_string()),
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    run(cli)
}
