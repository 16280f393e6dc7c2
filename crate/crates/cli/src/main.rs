//! `reqcontract` reads a contract document and checks it.
//!
//! Exit codes: 0 when every check passes, 1 when one fails, 2 on an input
//! or usage error.

use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use reqcontract::document::RpSelection;
use reqcontract::report::{self, Report, Status};
use reqcontract::roles::RoleId;

#[derive(Parser)]
#[command(
    name = "reqcontract",
    version,
    about = "Check requirements contract documents"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Print nothing on success or check failure; only the exit code tells.
    #[arg(long, short, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the document schema, every formula and the network.
    Validate { file: PathBuf },
    /// Decide whether K and S entail R, and whether K and S are consistent.
    CheckRp {
        file: PathBuf,
        /// Role whose assumptions are used.
        #[arg(long, value_parser = role, default_value = "evaluator")]
        k: RoleId,
        /// Role whose specification is used.
        #[arg(long, value_parser = role, default_value = "evaluator")]
        s: RoleId,
        /// Role whose requirements are used.
        #[arg(long, value_parser = role, default_value = "evaluator")]
        r: RoleId,
    },
    /// Report which requested propositions hold the role of requirement.
    Gate {
        file: PathBuf,
        /// Check only this atom.
        #[arg(long)]
        prop: Option<String>,
    },
    /// Validate the network and run the schedule.
    Enact {
        file: PathBuf,
        /// Maximum loop-backs after a failed validation; 0 disables them.
        #[arg(long)]
        retry: Option<u32>,
    },
    /// Expected values, viability, budget, interest cases and conflicts.
    Align {
        file: PathBuf,
        /// Tie the Requester's cost change to the Maker's and Evaluator's benefit change.
        #[arg(long)]
        coupled: bool,
    },
}

fn role(s: &str) -> Result<RoleId, String> {
    s.parse()
}

fn read_input(path: &PathBuf) -> io::Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path)
    }
}

fn run(cmd: &Cmd) -> Result<Report, (String, io::Error)> {
    let file = match cmd {
        Cmd::Validate { file }
        | Cmd::CheckRp { file, .. }
        | Cmd::Gate { file, .. }
        | Cmd::Enact { file, .. }
        | Cmd::Align { file, .. } => file,
    };
    let text = read_input(file).map_err(|e| (file.display().to_string(), e))?;
    Ok(match cmd {
        Cmd::Validate { .. } => report::cmd_validate(&text),
        Cmd::CheckRp { k, s, r, .. } => report::cmd_check_rp(
            &text,
            RpSelection {
                k: *k,
                s: *s,
                r: *r,
            },
        ),
        Cmd::Gate { prop, .. } => report::cmd_gate(&text, prop.as_deref()),
        Cmd::Enact { retry, .. } => report::cmd_enact(&text, *retry),
        Cmd::Align { coupled, .. } => report::cmd_align(&text, *coupled),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli.command) {
        Ok(r) => r,
        Err((path, e)) => {
            eprintln!("error: {path}: {e}");
            return ExitCode::from(2);
        }
    };

    let out = match cli.format {
        Format::Json => report.to_json(),
        Format::Text => report.text.clone(),
    };
    if report.status == Status::Error && cli.format == Format::Text {
        eprint!("{out}");
    } else if !cli.quiet {
        let mut stdout = io::stdout().lock();
        // a closed pipe is not worth a panic
        let _ = stdout.write_all(out.as_bytes());
    }
    ExitCode::from(report.exit_code() as u8)
}
