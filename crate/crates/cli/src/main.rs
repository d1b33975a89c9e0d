//! `geodesy`: generate geodetic graphs, lay them out, and count how often
//! their drawn shortest paths meet.

mod commands;
mod error;
mod manifest;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "geodesy", version, about = "Geodetic graph families, layouts and meet analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Worker threads for analysis (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Reserved; nothing is randomized yet. Recorded in the manifest.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Write a run manifest with input and output hashes to this file.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Svg,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Complete graph K_s with every edge subdivided t times.
    GenKst {
        #[arg(long)]
        s: u32,
        #[arg(long)]
        t: u32,
    },
    /// Point/line graph of the affine plane of prime-power order k.
    GenGk {
        #[arg(long)]
        k: u32,
        /// Monic irreducible modulus, coefficients from the constant term up, e.g. 1,1,1.
        #[arg(long, value_delimiter = ',')]
        modulus: Option<Vec<u32>>,
    },
    /// Report whether a graph is geodetic, with a witness if not.
    Check {
        /// Graph or graph+drawing bundle JSON; `-` or absent reads standard input.
        input: Option<PathBuf>,
    },
    /// Straight-line layout of K(s,t) (even t) whose shortest paths meet at most four times.
    #[command(name = "layout-thm2")]
    LayoutThm2 { input: Option<PathBuf> },
    /// Count meets over all pairs of shortest paths of a drawn geodetic graph.
    Analyze {
        input: Option<PathBuf>,
        /// Drawing JSON, when the input is a bare graph.
        #[arg(long)]
        drawing: Option<PathBuf>,
        /// Exit with status 1 unless every pair meets at most once.
        #[arg(long)]
        require_philogeodetic: bool,
    },
    /// Extract two shortest paths that meet at least four times from a drawn K(s,t).
    Witness {
        input: Option<PathBuf>,
        #[arg(long)]
        drawing: Option<PathBuf>,
    },
    /// Render a drawing as SVG.
    ExportSvg {
        input: Option<PathBuf>,
        #[arg(long)]
        drawing: Option<PathBuf>,
        /// A path to emphasize, as comma-separated vertex ids; give exactly two.
        #[arg(long)]
        highlight: Vec<String>,
        /// Emphasize the extracted witness pair.
        #[arg(long, conflicts_with = "highlight")]
        witness: bool,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("GEODESY_LOG")).format_timestamp(None).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
            let first = first.trim_start_matches("error: ");
            eprintln!("{}", CliError::input("E_USAGE", first));
            return ExitCode::from(error::EXIT_INPUT);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit)
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::input("E_PARAM", "--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::input("E_PARAM", e))?;
    }
    let outcome = commands::execute(&cli.command, cli.format)?;

    let target = cli.out.as_ref().map_or_else(|| "-".to_string(), |p| p.display().to_string());
    match &cli.out {
        Some(path) => std::fs::write(path, &outcome.output)
            .map_err(|e| CliError::input("E_IO", format!("cannot write {}: {e}", path.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(outcome.output.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::input("E_IO", format!("cannot write output: {e}")))?;
        }
    }

    if let Some(path) = &cli.manifest {
        let manifest = manifest::RunManifest {
            command: command_name(&cli.command).to_string(),
            parameters: serde_json::json!({
                "arguments": &cli.command,
                "format": cli.format,
                "seed": cli.seed,
            }),
            inputs: outcome.inputs.clone(),
            tool: "geodesy".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            outputs: vec![manifest::Artifact::new(target, outcome.output.as_bytes())],
        };
        let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        text.push('\n');
        std::fs::write(path, text)
            .map_err(|e| CliError::input("E_IO", format!("cannot write {}: {e}", path.display())))?;
    }

    match outcome.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::GenKst { .. } => "gen-kst",
        Command::GenGk { .. } => "gen-gk",
        Command::Check { .. } => "check",
        Command::LayoutThm2 { .. } => "layout-thm2",
        Command::Analyze { .. } => "analyze",
        Command::Witness { .. } => "witness",
        Command::ExportSvg { .. } => "export-svg",
    }
}
