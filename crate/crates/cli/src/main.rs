mod args;
mod commands;
mod output;

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

use args::Cli;
use commands::Context;

/// Exit statuses shared by every subcommand.
pub mod exit {
    pub const OK: u8 = 0;
    pub const VIOLATION: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const RESOURCE: u8 = 3;
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.render().to_string();
            let message = message.lines().next().unwrap_or_default().trim_start_matches("error: ");
            output::print_error("usage", message, json!({"argv": &argv[1..]}));
            return ExitCode::from(exit::USAGE);
        }
    };

    if let Some(k) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            output::print_error("usage", &format!("cannot start {k} threads: {e}"), json!({}));
            return ExitCode::from(exit::USAGE);
        }
    }

    let name = commands::name(&cli.command);
    // library assertions surface as structured errors, not a crash
    panic::set_hook(Box::new(|_| {}));
    let start = Instant::now();
    let mut ctx = Context::new(&argv[1..], cli.seed);
    let outcome = panic::catch_unwind(AssertUnwindSafe(|| commands::run(&cli.command, &mut ctx)));
    let wall_time_ms = start.elapsed().as_millis() as u64;

    match outcome {
        Ok(Ok(out)) => {
            let report = json!({
                "command": name,
                "inputs": ctx.inputs(),
                "results": out.results,
                "seed": cli.seed,
                "version": env!("CARGO_PKG_VERSION"),
                "wall_time_ms": wall_time_ms,
            });
            output::print_report(&report, cli.format);
            ExitCode::from(if out.violation { exit::VIOLATION } else { exit::OK })
        }
        Ok(Err(e)) => {
            let (code, status) = e.classify();
            output::print_error(code, &e.to_string(), e.context(name));
            ExitCode::from(status)
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "internal failure".into());
            output::print_error("invariant_violation", &message, json!({"command": name}));
            ExitCode::from(exit::VIOLATION)
        }
    }
}
