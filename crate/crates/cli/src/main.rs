use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::parser::ValueSource;
use clap::{ArgAction, ArgMatches, CommandFactory, Parser, Subcommand};

mod commands;
mod instances;
mod table;

use table::Format;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Invariant(_) => 2,
        }
    }
}

impl From<mulgroup::Error> for CliError {
    fn from(e: mulgroup::Error) -> CliError {
        use mulgroup::Error as E;
        match e {
            E::Invariant(_) | E::IncompleteFactorization { .. } => CliError::Invariant(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "mulgroup", version, about = "Scans and exact certificates for the (xp, xq) action on Z/QZ")]
struct Cli {
    /// Output format; `box` defaults to txt, everything else to csv.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write to a file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads; output does not depend on this.
    #[arg(long, global = true, env = "MULGROUP_THREADS")]
    threads: Option<usize>,
    /// Flat `key=value` file mirroring the long flags; flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Return sets and collinearity of the short orbit segment for each Q.
    Orbit(commands::OrbitArgs),
    /// Relation lattices, orders and successive minima for each Q.
    Lattice(commands::LatticeArgs),
    /// Enumerate gcd instances over S-units and classify them.
    ScanT2(commands::ScanArgs),
    /// Certify the inequality chains on instances read from a file or stdin.
    Certify(commands::CertifyArgs),
    /// gcd(a^n - 1, b^n - 1) and its running records.
    Records(commands::RecordsArgs),
    /// A short solution of a s = b mod Q.
    Box(commands::BoxArgs),
}

const GLOBAL_KEYS: [&str; 3] = ["format", "output", "threads"];

fn parse_config(path: &PathBuf) -> Result<Vec<(String, String)>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::Usage(format!("{}:{}: expected key=value", path.display(), i + 1)));
        };
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn given(m: &ArgMatches, id: &str) -> bool {
    m.try_get_raw(id).ok().flatten().is_some() && m.value_source(id) == Some(ValueSource::CommandLine)
}

/// Append config entries not already given as flags, rejecting unknown keys.
fn merge_config(argv: &[OsString], m: &ArgMatches, pairs: &[(String, String)]) -> Result<Vec<OsString>, CliError> {
    let (name, sub) = m.subcommand().expect("subcommand required");
    let root = Cli::command();
    let cmd = root.find_subcommand(name).expect("known subcommand");
    let mut extra = Vec::new();
    for (k, v) in pairs {
        let (arg, matches) = if GLOBAL_KEYS.contains(&k.as_str()) {
            (root.get_arguments().find(|a| a.get_id() == k.as_str()), m)
        } else {
            (cmd.get_arguments().find(|a| a.get_long() == Some(k.as_str())), sub)
        };
        let Some(arg) = arg else {
            return Err(CliError::Usage(format!("unknown config key {k:?} for {name}")));
        };
        if given(matches, arg.get_id().as_str()) {
            continue;
        }
        let long = arg.get_long().expect("long flag");
        match arg.get_action() {
            ArgAction::SetTrue => match v.as_str() {
                "true" => extra.push(OsString::from(format!("--{long}"))),
                "false" => {}
                _ => return Err(CliError::Usage(format!("config key {k} wants true or false"))),
            },
            _ => extra.push(OsString::from(format!("--{long}={v}"))),
        }
    }
    Ok(argv.iter().cloned().chain(extra).collect())
}

/// Effective parameters of the subcommand, in declaration order.
fn effective_config(m: &ArgMatches) -> Vec<(String, String)> {
    let (name, sub) = m.subcommand().expect("subcommand required");
    let root = Cli::command();
    let cmd = root.find_subcommand(name).expect("known subcommand");
    let mut out = Vec::new();
    for arg in cmd.get_arguments() {
        let id = arg.get_id().as_str();
        let Some(long) = arg.get_long() else { continue };
        if GLOBAL_KEYS.contains(&id) || id == "config" || matches!(arg.get_action(), ArgAction::Help | ArgAction::Version) {
            continue;
        }
        if let Ok(Some(vals)) = sub.try_get_raw(id) {
            let vals: Vec<String> = vals.map(|v| v.to_string_lossy().into_owned()).collect();
            out.push((long.to_string(), vals.join(",")));
        }
    }
    out
}

fn parse(argv: Vec<OsString>) -> Result<(Cli, ArgMatches), clap::Error> {
    let m = Cli::command().try_get_matches_from(&argv)?;
    let cli = <Cli as clap::FromArgMatches>::from_arg_matches(&m)?;
    Ok((cli, m))
}

fn run(argv: Vec<OsString>) -> Result<u8, CliError> {
    let (mut cli, mut m) = match parse(argv.clone()) {
        Ok(x) => x,
        Err(e) => return Ok(usage_exit(e)),
    };
    if let Some(path) = cli.config.clone() {
        let merged = merge_config(&argv, &m, &parse_config(&path)?)?;
        (cli, m) = match parse(merged) {
            Ok(x) => x,
            Err(e) => return Ok(usage_exit(e)),
        };
    }
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let config = effective_config(&m);
    let (format, outcome) = match &cli.command {
        Command::Orbit(a) => (Format::Csv, commands::orbit(a)),
        Command::Lattice(a) => (Format::Csv, commands::lattice(a)),
        Command::ScanT2(a) => (Format::Csv, commands::scan_t2(a)),
        Command::Certify(a) => (Format::Csv, commands::certify(a)),
        Command::Records(a) => (Format::Csv, commands::records(a)),
        Command::Box(a) => (Format::Txt, commands::box_witness(a)),
    };
    let outcome = outcome?;
    let mut buf = Vec::new();
    outcome.table.write(&mut buf, cli.format.unwrap_or(format), &config)?;
    match &cli.output {
        Some(path) => fs::write(path, &buf)?,
        None => std::io::stdout().lock().write_all(&buf)?,
    }
    Ok(outcome.code)
}

fn usage_exit(e: clap::Error) -> u8 {
    let _ = e.print();
    if e.use_stderr() {
        1
    } else {
        0
    }
}

fn main() -> ExitCode {
    match run(std::env::args_os().collect()) {
        Ok(code) => ExitCode::from(code),
        // a closed pipe downstream (`| head`) is not an error
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mulgroup: {e}");
            ExitCode::from(e.code())
        }
    }
}
