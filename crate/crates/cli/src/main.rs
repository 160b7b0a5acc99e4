mod args;
mod commands;
mod error;
mod io;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use args::{Cli, Format, TopCommand};
use error::{CliError, CliResult};
use report::{render, stdout_text, write_outputs, RunConfig, RunManifest};

fn load_manifest(path: &std::path::Path) -> CliResult<RunConfig> {
    let manifest: RunManifest = io::read_json(path)?;
    let config = manifest.config;
    for (file, digest) in &config.inputs {
        let bytes = std::fs::read(file).map_err(|e| CliError::io(std::path::Path::new(file), e))?;
        if &report::sha256_hex(&bytes) != digest {
            return Err(CliError::Precondition(format!("input {file} changed since the manifest was written")));
        }
    }
    Ok(config)
}

fn run(cli: Cli, argv: Vec<String>) -> CliResult<i32> {
    let start = Instant::now();
    if let Some(w) = cli.workers {
        if w == 0 {
            return Err(CliError::Precondition("--workers must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| CliError::Precondition(e.to_string()))?;
    }
    let default_format = if cli.out.is_some() { Format::Csv } else { Format::Table };
    let config = match cli.command {
        TopCommand::Run(command) => RunConfig::new(command, cli.format.unwrap_or(default_format))?,
        TopCommand::Rerun(r) => {
            let mut config = load_manifest(&r.manifest)?;
            if let Some(f) = cli.format {
                config.format = f;
            }
            config
        }
    };
    let hash = config.hash();
    let report = commands::dispatch(&config.command)?;
    let exit_code = if report.not_found { 2 } else { 0 };
    let outputs = match &cli.out {
        Some(dir) => {
            let files = render(&report, &config, &hash)?;
            write_outputs(dir, &files)?;
            files.into_iter().map(|(n, _)| n).collect()
        }
        None => {
            print!("{}", stdout_text(&report, &config, &hash)?);
            Vec::new()
        }
    };
    let manifest = RunManifest {
        tool: "ehrlab".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        seed: config.command.seed(),
        config,
        config_hash: hash,
        argv,
        wall_time_ms: start.elapsed().as_millis(),
        exit_code,
        counters: report.counters,
        outputs,
    };
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    match &cli.out {
        Some(dir) => write_outputs(dir, &[("manifest.json".into(), text + "\n")])?,
        None => eprintln!("{}", serde_json::to_string(&manifest).expect("manifest serializes")),
    }
    Ok(exit_code)
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        // Usage errors exit 1 so that 2 keeps meaning "nothing found".
        Err(e) => {
            let first = e.to_string();
            let first = first.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            eprintln!("error E_PARSE: {first}");
            return ExitCode::from(1);
        }
    };
    match run(cli, argv) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error {}: {e}", e.code());
            ExitCode::from(1)
        }
    }
}
