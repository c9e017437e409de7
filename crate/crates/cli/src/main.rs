use std::path::PathBuf;
use std::process::ExitCode;

use beauville_cli::{emit_report, load_scenario, run_scenario, summary_line, verify, ScenarioKind};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "beauville",
    version,
    about = "Exact verification of commuting families"
)]
struct Cli {
    /// Run the full acceptance suite and print one line per criterion.
    #[arg(long)]
    verify_all: bool,

    /// Worker threads for --verify-all.
    #[arg(long, requires = "verify_all")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario described by a config file.
    Run {
        /// Scenario config file.
        config: PathBuf,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the config's trial count.
        #[arg(long)]
        trials: Option<u64>,
        /// Override the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads; the report does not depend on this.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// List scenario kinds and their parameters.
    ListScenarios,
}

fn list_scenarios() {
    for k in ScenarioKind::ALL {
        let params: Vec<String> = k.params().iter().map(|(n, d)| format!("{n}={d}")).collect();
        println!("{:<18} {}", k.name(), k.summary());
        println!("{:<18} params: seed (required), {}", "", params.join(", "));
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.verify_all {
        if cli.command.is_some() {
            eprintln!("--verify-all does not take a subcommand");
            return ExitCode::from(2);
        }
        let mut ok = true;
        for c in &verify::CRITERIA {
            let outcome = verify::run_criterion(c.id, cli.jobs);
            println!("{}", outcome.line());
            for note in outcome.resample_notes() {
                println!("    logged: {note}");
            }
            ok &= outcome.passed();
        }
        return if ok {
            ExitCode::SUCCESS
        } else {
            ExitCode::FAILURE
        };
    }
    match cli.command {
        None => {
            eprintln!("nothing to do; see --help");
            ExitCode::from(2)
        }
        Some(Command::ListScenarios) => {
            list_scenarios();
            ExitCode::SUCCESS
        }
        Some(Command::Run {
            config,
            out,
            trials,
            seed,
            jobs,
        }) => {
            let scenario = match load_scenario(&config, trials, seed) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("config error: {e}");
                    return ExitCode::from(2);
                }
            };
            let report = run_scenario(&scenario, jobs);
            match out {
                Some(path) => {
                    if let Err(e) = emit_report(&report, &path) {
                        eprintln!("cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => println!("{}", report.to_json()),
            }
            eprintln!("{}", summary_line(&report));
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
