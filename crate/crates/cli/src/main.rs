mod builtin;
mod cache;
mod commands;
mod format;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use koszul_core::graded::Window;
use koszul_core::linalg::Field;
use koszul_core::{par, CONVENTIONS_VERSION};
use serde_json::json;

use commands::{Config, Input, Outcome};
use report::Format;

/// Bad input or usage; maps to exit status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Parser)]
#[command(name = "kmd", version, about = "Exact bar/cobar, twisting cochain and Hochschild computations")]
struct Cli {
    /// Ground field: Q or a prime p. Overrides the field declared in input files.
    #[arg(long, global = true, value_parser = parse_field)]
    field: Option<Field>,
    /// Computation window, e.g. `0..2,-1..4` (degrees, then weights).
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_window)]
    window: Option<Window>,
    /// Maximum tensor word length for bar and cobar.
    #[arg(long, global = true)]
    word_bound: Option<u32>,
    /// Treat weights as a filtration.
    #[arg(long, global = true)]
    filtered: bool,
    #[arg(long, global = true, env = "KMD_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Worker threads; 1 runs sequentially.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a built-in structure in the input format.
    Builtin {
        family: String,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        max_weight: Option<u32>,
        #[arg(long)]
        lie: Option<String>,
        #[arg(long = "N")]
        n: Option<u32>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check the axioms of an algebra, coalgebra or Lie algebra file.
    Validate { file: PathBuf },
    /// Check the Maurer–Cartan equation for τ: C → A.
    TwistCheck { coalgebra: PathBuf, algebra: PathBuf, tau: Option<PathBuf> },
    /// Bar construction of an algebra.
    Bar {
        file: PathBuf,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Cobar construction of a coalgebra.
    Cobar {
        file: PathBuf,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Acyclicity of the twisted tensor products of τ.
    Acyclicity { coalgebra: PathBuf, algebra: PathBuf, tau: Option<PathBuf> },
    /// Hochschild cohomology of an algebra or coalgebra.
    Hh {
        file: PathBuf,
        /// Also compute cup and bracket structure constants.
        #[arg(long)]
        products: bool,
    },
    /// Compare Hochschild cohomology on both sides of τ.
    Duality { coalgebra: PathBuf, algebra: PathBuf, tau: Option<PathBuf> },
}

fn parse_field(s: &str) -> Result<Field, String> {
    format::parse_field(s)
}

fn parse_window(s: &str) -> Result<Window, String> {
    format::parse_window(s)
}

fn exit_code(e: &anyhow::Error) -> u8 {
    use koszul_core::Error as E;
    for cause in e.chain() {
        if cause.is::<UsageError>() || cause.is::<std::io::Error>() {
            return 2;
        }
        if let Some(err) = cause.downcast_ref::<E>() {
            return match err {
                E::WindowNotCertified(_)
                | E::UnboundedWindow
                | E::OverflowAccess(..)
                | E::CharacteristicUnsupported(..)
                | E::NotAComplex(_) => 3,
                E::NotATwistingCochain(_) => 1,
                _ => 2,
            };
        }
    }
    2
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(j) = cli.jobs {
        par::configure_jobs(j);
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cli: &Cli) -> Result<u8> {
    let cfg = Config {
        field: cli.field,
        window: cli.window,
        word_bound: cli.word_bound,
        filtered: cli.filtered,
        products: matches!(cli.command, Command::Hh { products: true, .. }),
    };
    let (name, files, emit): (&str, Vec<&Path>, Option<&Path>) = match &cli.command {
        Command::Builtin { family, dim, max_weight, lie, n, output } => {
            let field = cli.field.unwrap_or(Field::Rational);
            let p = builtin::Params { dim: *dim, max_weight: *max_weight, lie: lie.clone(), n: *n };
            let s = builtin::build(family, field, &p).map_err(|e| UsageError(format!("{e:#}")))?;
            let text = format::write(&s, cli.window.as_ref());
            match output {
                Some(path) => std::fs::write(path, text)?,
                None => print!("{text}"),
            }
            return Ok(0);
        }
        Command::Validate { file } => ("validate", vec![file], None),
        Command::TwistCheck { coalgebra, algebra, tau } => ("twist-check", triple(coalgebra, algebra, tau), None),
        Command::Bar { file, emit } => ("bar", vec![file], emit.as_deref()),
        Command::Cobar { file, emit } => ("cobar", vec![file], emit.as_deref()),
        Command::Acyclicity { coalgebra, algebra, tau } => ("acyclicity", triple(coalgebra, algebra, tau), None),
        Command::Hh { file, .. } => ("hh", vec![file], None),
        Command::Duality { coalgebra, algebra, tau } => ("duality", triple(coalgebra, algebra, tau), None),
    };
    let inputs: Vec<Input> = files.iter().map(|p| Input::read(p)).collect::<Result<_>>()?;

    let cache = match (&cli.cache_dir, emit) {
        (Some(dir), None) => Some(cache::Cache::new(dir).map_err(|e| UsageError(format!("cache directory {}: {e}", dir.display())))?),
        _ => None,
    };
    let format_tag = format!("{:?}", cli.format);
    let key = {
        let mut parts: Vec<&[u8]> = vec![CONVENTIONS_VERSION.as_bytes(), name.as_bytes()];
        let cfg_key = cfg.key();
        let mut owned = vec![cfg_key.into_bytes(), format_tag.into_bytes()];
        owned.extend(inputs.iter().map(|i| i.text.as_bytes().to_vec()));
        parts.extend(owned.iter().map(Vec::as_slice));
        cache::digest(&parts)
    };
    if let Some(c) = &cache {
        if let Some(entry) = c.get(&key) {
            print!("{}", entry.body);
            return Ok(entry.exit);
        }
    }

    let outcome: Outcome = match &cli.command {
        Command::Validate { .. } => commands::validate(&inputs[0], &cfg)?,
        Command::TwistCheck { .. } => commands::twist_check(&inputs[0], &inputs[1], inputs.get(2), &cfg)?,
        Command::Bar { .. } => commands::bar_cmd(&inputs[0], &cfg, emit)?,
        Command::Cobar { .. } => commands::cobar_cmd(&inputs[0], &cfg, emit)?,
        Command::Acyclicity { .. } => commands::acyclicity(&inputs[0], &inputs[1], inputs.get(2), &cfg)?,
        Command::Hh { .. } => commands::hh(&inputs[0], &cfg)?,
        Command::Duality { .. } => commands::duality(&inputs[0], &inputs[1], inputs.get(2), &cfg)?,
        Command::Builtin { .. } => unreachable!(),
    };

    let hashes: Vec<_> = files
        .iter()
        .zip(&inputs)
        .map(|(p, i)| json!({"file": p.file_name().map(|n| n.to_string_lossy().into_owned()), "sha256": cache::digest(&[i.text.as_bytes()])}))
        .collect();
    let envelope = json!({
        "conventions": CONVENTIONS_VERSION,
        "command": name,
        "field": outcome.field.to_string(),
        "inputs": hashes,
        "verdict": outcome.verdict,
        "exit": outcome.exit,
        "report": outcome.report,
    });
    let body = report::render(&envelope, cli.format);
    print!("{body}");
    if let Some(c) = &cache {
        if let Err(e) = c.put(&key, &cache::Entry { exit: outcome.exit, body }) {
            eprintln!("warning: could not write cache entry: {e}");
        }
    }
    Ok(outcome.exit)
}

fn triple<'a>(c: &'a Path, a: &'a Path, t: &'a Option<PathBuf>) -> Vec<&'a Path> {
    let mut v = vec![c, a];
    v.extend(t.as_deref());
    v
}
