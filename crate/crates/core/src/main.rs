use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Value;

use gradmult::cli::run::Status;
use gradmult::cli::script::FieldSpec;
use gradmult::cli::{run_script_text, FIXTURES, SUITE_SEED};

#[derive(Parser)]
#[command(name = "gradmult", version, about = "Multiplicities of ideals in standard graded algebras")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a session script and print its JSON report.
    Run {
        script: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Override the script's field: `fp:P` or `qq`.
        #[arg(long, value_parser = parse_field)]
        field: Option<FieldSpec>,
        /// Also write the report to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run the shipped acceptance fixtures.
    VerifySuite {
        /// Print every report instead of one line per fixture.
        #[arg(long)]
        verbose: bool,
    },
}

fn parse_field(s: &str) -> Result<FieldSpec, String> {
    FieldSpec::parse(s).ok_or_else(|| format!("'{s}' is not fp:P or qq"))
}

fn exit(status: Status) -> ExitCode {
    ExitCode::from(status.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Cmd::Run { script, seed, field, json } => {
            let text = match std::fs::read_to_string(&script) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("cannot read {}: {e}", script.display());
                    return exit(Status::Error);
                }
            };
            let (report, status) = run_script_text(&text, seed, field);
            let rendered = serde_json::to_string_pretty(&report).expect("reports serialize");
            println!("{rendered}");
            if let Some(path) = json {
                if let Err(e) = std::fs::write(&path, rendered + "\n") {
                    eprintln!("cannot write {}: {e}", path.display());
                    return exit(Status::Error);
                }
            }
            exit(status)
        }
        Cmd::VerifySuite { verbose } => {
            let mut worst = Status::Pass;
            for (name, text) in FIXTURES {
                let (report, status) = run_script_text(text, SUITE_SEED, None);
                worst = worst.max(status);
                if verbose {
                    println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
                }
                println!("{:<28} {}", name, status.tag());
                if let Some(Value::Array(reports)) = report.get("reports") {
                    for r in reports.iter().filter(|r| r["status"] != "pass") {
                        println!("    {} -> {}", r["command"].as_str().unwrap_or(""), r["status"]);
                    }
                }
            }
            println!("suite: {}", worst.tag());
            exit(worst)
        }
    }
}
