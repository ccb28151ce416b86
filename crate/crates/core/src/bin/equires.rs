use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use equires::scenarios_cli::{
    emit_scenario, generate_catalogue, parse_scenario, render, run, Command, Format, Overrides, ScenarioError, ScenarioFile,
    CATALOGUE,
};

const INPUT_ERROR: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "equires", version, about = "Resolution towers and reduced equivariant invariants of scenario files")]
struct Cli {
    /// resolve, cohomology, deloc, ktheory, chern, all, validate, or emit
    /// (print the scenario file itself)
    command: String,
    #[arg(long, conflicts_with = "catalogue", required_unless_present = "catalogue")]
    scenario: Option<PathBuf>,
    #[arg(long)]
    catalogue: Option<String>,
    /// Catalogue parameter, `key=value`
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    #[arg(long)]
    max_degree: Option<usize>,
    /// Character window `A,B`
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    #[arg(long, default_value = "text")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_window(s: &str) -> Result<[i64; 2], String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("window `{s}` is not of the form A,B"))?;
    let a: i64 = a.trim().parse().map_err(|e| format!("window start: {e}"))?;
    let b: i64 = b.trim().parse().map_err(|e| format!("window end: {e}"))?;
    if a > b {
        return Err(format!("empty window {a},{b}"));
    }
    Ok([a, b])
}

fn load(cli: &Cli) -> Result<ScenarioFile, String> {
    if let Some(name) = &cli.catalogue {
        let mut params = BTreeMap::new();
        for p in &cli.params {
            let (k, v) = p.split_once('=').ok_or_else(|| format!("parameter `{p}` is not KEY=VALUE"))?;
            params.insert(k.to_string(), v.to_string());
        }
        return generate_catalogue(name, &params).map_err(|e| match e {
            ScenarioError::UnknownScenario(_) => format!("{e}; available: {}", CATALOGUE.join(", ")),
            e => e.to_string(),
        });
    }
    if !cli.params.is_empty() {
        return Err("--param only applies to --catalogue".into());
    }
    let path = cli.scenario.as_ref().expect("clap requires a source");
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_scenario(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn write(out: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main_inner(cli: Cli) -> Result<u8, String> {
    let format: Format = cli.format.parse()?;
    let window = cli.window.as_deref().map(parse_window).transpose()?;
    let file = load(&cli)?;
    if cli.command == "emit" {
        write(&cli.out, &emit_scenario(&file))?;
        return Ok(0);
    }
    let command: Command = cli.command.parse()?;
    let report = run(&file, command, Overrides { max_degree: cli.max_degree, window }).map_err(|e| e.to_string())?;
    write(&cli.out, &render(&report, format))?;
    Ok(report.status.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(INPUT_ERROR)
        }
    }
}
