mod args;
mod commands;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde::Serialize;
use serde_json::{json, Value};

use args::{Cli, Command, Common, Format};
use commands::{CliError, Outcome};

const EXIT_USAGE: u8 = 1;
const EXIT_GUARD: u8 = 2;
const EXIT_INVARIANT: u8 = 3;

/// Everything needed to reproduce a run.
#[derive(Serialize)]
struct RunManifest {
    command: String,
    parameters: Value,
    seed: Option<u64>,
    threads: usize,
    version: &'static str,
    wall_time_secs: f64,
    outputs: Vec<PathBuf>,
}

fn run(
    cli: &Cli,
) -> (
    Result<Outcome, CliError>,
    &Common,
    &'static str,
    Value,
    Option<u64>,
) {
    match &cli.command {
        Command::Table { q, common } => (
            commands::table(*q, common),
            common,
            "table",
            json!({ "q": q }),
            None,
        ),
        Command::Nb { q, common } => (
            commands::nb(*q, common),
            common,
            "nb",
            json!({ "q": q }),
            None,
        ),
        Command::Census { q, common } => (
            commands::census(*q, common),
            common,
            "census",
            json!({ "q": q }),
            None,
        ),
        Command::Bounds { q, common } => (
            commands::bounds(*q, common),
            common,
            "bounds",
            json!({ "q": q }),
            None,
        ),
        Command::Mc(a) => (
            commands::mc(a),
            &a.common,
            "mc",
            json!({
                "kind": format!("{:?}", a.kind), "q": a.q, "d": a.d, "samples": a.samples,
                "line": a.line, "k": a.k, "k_max": a.k_max,
            }),
            Some(a.seed),
        ),
        Command::Interp {
            q,
            trials,
            k_max,
            seed,
            common,
        } => (
            commands::interp(q, *trials, *k_max, *seed, common.threads),
            common,
            "interp",
            json!({ "q": q, "trials": trials, "k_max": k_max }),
            Some(*seed),
        ),
        Command::SmoothCheck {
            q,
            d,
            samples,
            seed,
            poly,
            common,
        } => (
            commands::smooth_check(*q, *d, *samples, *seed, poly.as_deref()),
            common,
            "smooth-check",
            json!({ "q": q, "d": d, "samples": samples, "poly": poly }),
            Some(*seed),
        ),
        Command::Report { common } => (commands::report(common), common, "report", json!({}), None),
    }
}

fn render(outcome: &Outcome, format: Format) -> Result<String, CliError> {
    match format {
        Format::Text => Ok(outcome.text.clone()),
        Format::Json => {
            Ok(serde_json::to_string_pretty(&outcome.json).expect("serializable") + "\n")
        }
        Format::Csv => outcome
            .csv
            .clone()
            .ok_or_else(|| CliError::Usage("this command has no CSV output".into())),
    }
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let start = Instant::now();
    let (result, common, command, parameters, seed) = run(&cli);
    let outcome = match result.and_then(|o| render(&o, common.format).map(|s| (o, s))) {
        Ok(o) => o,
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(EXIT_USAGE);
        }
        Err(CliError::Core(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(if e.is_size_guard() {
                EXIT_GUARD
            } else {
                EXIT_USAGE
            });
        }
    };
    let (outcome, rendered) = outcome;
    let mut outputs = Vec::new();
    match &common.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &rendered) {
                eprintln!("error: writing {}: {e}", path.display());
                return ExitCode::from(EXIT_USAGE);
            }
            outputs.push(path.clone());
        }
        None => print!("{rendered}"),
    }
    let mut manifest = RunManifest {
        command: command.into(),
        parameters,
        seed,
        threads: common.threads,
        version: env!("CARGO_PKG_VERSION"),
        wall_time_secs: start.elapsed().as_secs_f64(),
        outputs,
    };
    match &common.out {
        Some(path) => {
            let mp = manifest_path(path);
            manifest.outputs.push(mp.clone());
            let body = serde_json::to_string_pretty(&manifest).expect("serializable");
            if let Err(e) = std::fs::write(&mp, body + "\n") {
                eprintln!("error: writing {}: {e}", mp.display());
                return ExitCode::from(EXIT_USAGE);
            }
        }
        None => eprintln!(
            "manifest: {}",
            serde_json::to_string(&manifest).expect("serializable")
        ),
    }
    if outcome.consistent {
        ExitCode::SUCCESS
    } else {
        eprintln!("error: a cross-check or published value did not match");
        ExitCode::from(EXIT_INVARIANT)
    }
}
