use std::path::{Path, PathBuf};
use std::process::ExitCode;

use biphoton_cli::output::write_file;
use biphoton_cli::presets::{preset, PRESET_NAMES};
use biphoton_cli::{oracle_check, run_scenario, CliError, CliResult, Overrides, Scenario};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "biphoton",
    version,
    about = "Two-photon interferometry scenarios: single-port, HOM and N00N traces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Grid points per frequency axis (odd).
    #[arg(long, global = true)]
    grid_points: Option<usize>,
    /// Delay axis half span in ps.
    #[arg(long, global = true)]
    delay_span_ps: Option<f64>,
    /// Number of delay samples (odd).
    #[arg(long, global = true)]
    delay_points: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file; outputs go to `outputs.dir` next to the file.
    Run { scenario: PathBuf },
    /// Run a built-in scenario into a directory.
    Preset {
        name: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check closed-form rates against the Fock-space oracle on a coarse grid.
    OracleCheck { scenario: PathBuf },
    /// List built-in scenarios.
    Presets,
}

fn report_run(summary: &biphoton_cli::RunSummary) {
    for path in &summary.written {
        println!("wrote {}", path.display());
    }
}

fn execute(cli: Cli) -> CliResult<()> {
    let overrides = Overrides {
        grid_points: cli.grid_points,
        delay_half_span_ps: cli.delay_span_ps,
        delay_points: cli.delay_points,
    };
    match cli.command {
        Command::Run { scenario } => {
            let s = Scenario::load(&scenario)?;
            let base = scenario.parent().unwrap_or(Path::new("."));
            report_run(&run_scenario(&s, &overrides, base)?);
        }
        Command::Preset { name, out } => {
            let s = preset(&name).ok_or_else(|| {
                CliError::validation(
                    "preset",
                    format!(
                        "unknown preset {name:?}; known: {}",
                        PRESET_NAMES.join(", ")
                    ),
                )
            })?;
            let mut recorded = s.clone();
            overrides.apply(&mut recorded);
            let path = out.join("scenario.toml");
            write_file(&path, &recorded.to_toml()?)?;
            println!("wrote {}", path.display());
            report_run(&run_scenario(&s, &overrides, &out)?);
        }
        Command::OracleCheck { scenario } => {
            let mut s = Scenario::load(&scenario)?;
            overrides.apply(&mut s);
            let report = oracle_check(&s, cli.grid_points)?;
            println!(
                "oracle check on {}x{} grid: {} comparisons, worst relative error {:.3e} ({})",
                report.grid_points,
                report.grid_points,
                report.checks,
                report.worst_relative_error,
                report.worst_case
            );
            if !report.passed() {
                return Err(CliError::Invariant(format!(
                    "oracle disagreement {:.3e} exceeds {:e}",
                    report.worst_relative_error,
                    biphoton_cli::pipeline::ORACLE_TOLERANCE
                )));
            }
        }
        Command::Presets => {
            for name in PRESET_NAMES {
                println!("{name}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are validation failures; help and version are not errors
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
