use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pdm_cli::{run_scenario, run_suite, CliError, CliResult, Fault, RawScenario, Suite};

#[derive(Parser)]
#[command(name = "pdm", version, about = "Pseudo-density matrices, spatial incompatibility and Leggett-Garg tests")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and write its reports to the output directory.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Overrides the seed in the scenario file.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads for sampling and sweeps.
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long, value_enum, default_value_t = Fault::None, hide = true)]
        inject_fault: Fault,
    },
    /// Run the invariant suites and print pass/fail per check.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = pdm_cli::config::DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long, value_enum, default_value_t = Fault::None, hide = true)]
        inject_fault: Fault,
    },
}

fn init_threads(threads: Option<usize>) -> CliResult<()> {
    if let Some(n) = threads {
        if n == 0 {
            return Err(CliError::validation("--threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::validation(format!("--threads: {e}")))?;
    }
    Ok(())
}

fn execute(cli: Cli) -> CliResult<Vec<String>> {
    match cli.command {
        Command::Run { config, out, seed, threads, inject_fault } => {
            init_threads(threads)?;
            let scenario = RawScenario::from_path(&config)?.resolve(seed)?;
            let summary = run_scenario(&scenario, &out, inject_fault)?;
            print!("{}", summary.text);
            for f in &summary.files {
                println!("wrote {}", f.display());
            }
            Ok(summary.failed)
        }
        Command::Verify { suite, seed, threads, inject_fault } => {
            init_threads(threads)?;
            let report = run_suite(suite, seed, inject_fault);
            print!("{}", report.render());
            Ok(report.failed_names().into_iter().map(String::from).collect())
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(failed) if failed.is_empty() => ExitCode::SUCCESS,
        Ok(failed) => {
            eprintln!("error: failed checks: {}", failed.join(", "));
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
