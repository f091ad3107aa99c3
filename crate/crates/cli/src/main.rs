use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser};
use pencil_cli::document::{FamilyRef, PencilSource};
use pencil_cli::error::{exit, io_error};
use pencil_cli::{execute, parse_document, CliError, Command, Options, PencilDocument};
use serde_json::Value;

/// Generalized resolvents, spectral projections and Jordan-chain structure
/// of matrix pencils A0 + A1 z.
#[derive(Debug, Parser)]
#[command(name = "pencil-resolvent", version)]
#[command(group(ArgGroup::new("input").required(true).args(["file", "family"])))]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// pencil document (JSON)
    #[arg(long)]
    file: Option<PathBuf>,
    /// zoo family: example1, example2, example3, jordan_block, diag_split, random_regular
    #[arg(long)]
    family: Option<String>,
    /// family parameters, k=v[,k=v...]
    #[arg(long, value_delimiter = ',', requires = "family")]
    params: Vec<String>,
    #[arg(long, requires = "family")]
    m: Option<u64>,
    /// example3 beta as RE or RE:IM
    #[arg(long, requires = "family", allow_hyphen_values = true)]
    beta: Option<String>,
    #[arg(long, requires = "family")]
    n: Option<u64>,
    #[arg(long, requires = "family")]
    k: Option<u64>,
    #[arg(long, requires = "family")]
    seed: Option<u64>,
    #[arg(long, value_parser = ["near-zero", "near-infinity"])]
    region: Option<String>,
    /// truncation order N for the infinite families
    #[arg(long)]
    trunc: Option<usize>,
    /// write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
    /// laurent: coefficients on each side
    #[arg(long)]
    terms: Option<usize>,
    /// laurent: write the growth CSV here
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn family_document(cli: &Cli, family: &str) -> Result<PencilDocument, CliError> {
    let mut params = BTreeMap::new();
    for kv in &cli.params {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--params expects k=v, got `{kv}`")))?;
        params.insert(k.trim().to_string(), Value::String(v.trim().to_string()));
    }
    let shortcuts = [
        ("m", cli.m.map(|x| x.to_string())),
        ("beta", cli.beta.clone()),
        ("n", cli.n.map(|x| x.to_string())),
        ("k", cli.k.map(|x| x.to_string())),
        ("seed", cli.seed.map(|x| x.to_string())),
    ];
    for (key, v) in shortcuts {
        if let Some(v) = v {
            params.insert(key.into(), Value::String(v));
        }
    }
    Ok(PencilDocument {
        pencil: PencilSource::Family(FamilyRef {
            family: family.into(),
            params,
            truncation: None,
            region: None,
        }),
        tolerances: Default::default(),
        annulus_hint: None,
        samples: None,
    })
}

fn load(cli: &Cli) -> Result<PencilDocument, CliError> {
    let mut doc = match (&cli.file, &cli.family) {
        (Some(path), _) => parse_document(&std::fs::read_to_string(path).map_err(io_error(path))?)?,
        (None, Some(f)) => family_document(cli, f)?,
        (None, None) => return Err(CliError::Usage("give --file or --family".into())),
    };
    match &mut doc.pencil {
        PencilSource::Family(f) => {
            if cli.trunc.is_some() {
                f.truncation = cli.trunc;
            }
            if cli.region.is_some() {
                f.region = cli.region.clone();
            }
        }
        PencilSource::Inline(_) if cli.trunc.is_some() || cli.region.is_some() => {
            return Err(CliError::Usage("--trunc and --region apply to family pencils only".into()))
        }
        PencilSource::Inline(_) => {}
    }
    Ok(doc)
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    let doc = load(cli)?;
    let opts = Options {
        terms: cli.terms,
        csv: cli.csv.clone(),
    };
    let report = execute(cli.command, &doc, &opts)?;
    let text = if cli.json { report.to_json() } else { report.to_text() };
    match &cli.out {
        Some(path) => std::fs::write(path, &text).map_err(io_error(path))?,
        None => print!("{text}"),
    }
    Ok(if report.passed() { exit::PASS } else { exit::CHECK_FAILED })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
