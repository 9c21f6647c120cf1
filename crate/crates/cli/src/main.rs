mod commands;
mod config;
mod render;

use std::process::ExitCode;

use clap::Parser;

use commands::{read_json, run, write_json, CliError};
use config::{Cli, Command, ExperimentConfig};

fn resolve(cmd: Command) -> Result<ExperimentConfig, CliError> {
    Ok(match cmd {
        Command::GridOrbit(a) => ExperimentConfig::GridOrbit(a),
        Command::GridPortrait(a) => ExperimentConfig::GridPortrait(a),
        Command::SunburstSolve(a) => ExperimentConfig::SunburstSolve(a),
        Command::LinkageConvert(a) => ExperimentConfig::LinkageConvert(a),
        Command::ModuliEmbed(a) => ExperimentConfig::ModuliEmbed(a),
        Command::PentagonVerify(a) => ExperimentConfig::PentagonVerify(a),
        Command::Run { config } => read_json(&config)?,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = resolve(cli.command).and_then(|cfg| {
        if let Some(path) = &cli.save_config {
            write_json(path, &cfg)?;
        }
        run(&cfg)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
