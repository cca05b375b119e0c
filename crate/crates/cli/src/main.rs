mod args;
mod commands;
mod input;
mod report;

use std::process::ExitCode;

use clap::Parser;
use clap::error::ErrorKind;
use qspa::{Budget, Tolerances};

use crate::args::Cli;
use crate::report::{usage, Context};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let ctx = Context { command: "", tolerances: Tolerances::DEFAULT, max_operator_dim: 0 };
            let rendered = e.render().to_string();
            let message = rendered.lines().next().unwrap_or_default().trim_start_matches("error: ");
            print!("{}", ctx.failure(&usage(message)));
            eprint!("{rendered}");
            return ExitCode::from(2);
        }
    };

    let command = cli.command.name();
    let tolerances = match report::resolve_tolerances(|k| std::env::var(k).ok()) {
        Ok(t) => t,
        Err(e) => {
            let ctx = Context { command, tolerances: Tolerances::DEFAULT, max_operator_dim: cli.max_operator_dim };
            print!("{}", ctx.failure(&e));
            return ExitCode::from(2);
        }
    };
    let ctx = Context { command, tolerances, max_operator_dim: cli.max_operator_dim };

    match commands::run(&cli.command, &tolerances, Budget(cli.max_operator_dim)) {
        Ok(out) => {
            let text = ctx.success(out.seed, out.result);
            match &cli.output {
                None => print!("{text}"),
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text) {
                        print!("{}", ctx.failure(&usage(format!("cannot write {}: {e}", path.display()))));
                        return ExitCode::from(2);
                    }
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            print!("{}", ctx.failure(&e));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
