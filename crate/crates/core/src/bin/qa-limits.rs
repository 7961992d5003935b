use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use qa_limits::experiment::{emit_outputs, parse_formats, run_experiment, Experiment, ExperimentConfig};

/// Run one experiment from a TOML config and write its reports.
#[derive(Parser, Debug)]
#[command(name = "qa-limits", version)]
struct Cli {
    /// lr-check, concentration, isoperimetry, layers, maxcut-anneal,
    /// ensemble, gamma2 or bounds.
    experiment: String,
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, default_value = "json,csv")]
    format: String,
    #[arg(long)]
    threads: Option<usize>,
}

fn run(cli: Cli) -> qa_limits::Result<bool> {
    let which: Experiment = cli.experiment.parse()?;
    let formats = parse_formats(&cli.format)?;
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| qa_limits::Error::Config {
                field: "threads".into(),
                reason: e.to_string(),
            })?;
    }
    let config = ExperimentConfig::from_path(&cli.config)?.for_experiment(which)?;
    let doc = run_experiment(&config)?;
    for path in emit_outputs(&doc, &cli.out, &formats)? {
        println!("wrote {}", path.display());
    }
    for r in &doc.reports {
        let status = if r.vacuous {
            "vacuous"
        } else if r.satisfied {
            "ok"
        } else if r.is_failure() {
            "FAILED"
        } else {
            "violated (not counted)"
        };
        println!("{:<24} lhs = {:<12.6e} rhs = {:<12.6e} {status}", r.theorem_id, r.lhs, r.rhs);
    }
    Ok(doc.has_failures())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
