use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use lipdouble_cli::{read_report, read_task, run, write_report, CliError};

#[derive(Parser)]
#[command(name = "lipdouble", version, about = "Doubles of modules, integral closure and Lipschitz equisingularity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a task file and write report.json and report.txt.
    Run {
        taskfile: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        truncation: Option<usize>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Re-verify every Holds/Fails certificate in a report.
    VerifyCertificate { report: PathBuf },
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { taskfile, seed, truncation, out } => {
            let mut task = match read_task(&taskfile) {
                Ok(t) => t,
                Err(e) => return fail(&e),
            };
            if seed.is_some() {
                task.options.seed = seed;
            }
            if truncation.is_some() {
                task.options.truncation = truncation;
            }
            let report = match run(&task).and_then(|r| write_report(&r, &out).map(|_| r)) {
                Ok(r) => r,
                Err(e) => return fail(&e),
            };
            print!("{}", report.to_text());
            ExitCode::SUCCESS
        }
        Command::VerifyCertificate { report } => {
            let r = match read_report(&report) {
                Ok(r) => r,
                Err(e) => return fail(&e),
            };
            let checks = r.outcome.verify();
            let bad = checks.iter().filter(|c| !c.ok).count();
            for c in &checks {
                println!("{} {}", if c.ok { "ok  " } else { "FAIL" }, c.what);
            }
            println!("{} certificates checked, {} failed", checks.len(), bad);
            if bad == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
