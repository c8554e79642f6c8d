// Copyright 2026 The cavityq Authors
// SPDX-License-Identifier: Apache-2.0

//! `cavityq` command-line driver.
//!
//! Exit statuses: 0 success, 1 usage or I/O, 2 unparsable or invalid
//! input, 3 numerical failure, 4 dimension cap exceeded.

pub mod error;
pub mod jobs;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;

use cavityq::fock::{set_dim_cap, HilbertShape};
use cavityq::gates::Circuit;

use error::{CliError, CliResult, Exit};
use output::{write_atomic, Format, Header, Table};

/// Environment variable overriding the Hilbert-space dimension cap.
pub const DIM_CAP_ENV: &str = "CAVITYQ_DIM_CAP";

#[derive(Debug, Parser)]
#[command(name = "cavityq", version, about = "Cavity qudit processor simulator")]
pub struct Cli {
    /// Directory for output files.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for sweeps and ensembles.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dispersive estimators for a device parameter file.
    Device { params: PathBuf },
    /// Run a circuit file from a basis state and write probabilities.
    Run {
        circuit: PathBuf,
        /// Initial levels per subsystem, e.g. `0,3`; vacuum by default.
        #[arg(long)]
        init: Option<String>,
    },
    /// State transfer and detuning sweep.
    Qst { config: PathBuf },
    /// Pulse optimisation.
    Grape { config: PathBuf },
    /// Bosonic code under photon loss.
    Code { config: PathBuf },
    /// Trotter convergence study.
    Trotter { config: PathBuf },
    /// Out-of-time-order correlator series.
    Otoc { config: PathBuf },
}

/// Parse arguments, execute, and return the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => Exit::Usage as i32,
            };
        }
    };
    match execute(&cli, &mut std::io::stdout()) {
        Ok(()) => Exit::Ok as i32,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit as i32
        }
    }
}

fn apply_dim_cap() -> CliResult<()> {
    match std::env::var(DIM_CAP_ENV) {
        Ok(v) => {
            let cap = v
                .trim()
                .parse::<usize>()
                .map_err(|_| CliError::usage(format!("{DIM_CAP_ENV}={v} is not a positive integer")))?;
            set_dim_cap(cap);
        }
        Err(std::env::VarError::NotPresent) => {}
        Err(e) => return Err(CliError::usage(format!("{DIM_CAP_ENV}: {e}"))),
    }
    Ok(())
}

fn read_input(path: &Path) -> CliResult<Vec<u8>> {
    std::fs::read(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}

/// Deserialize, naming the offending field path on failure.
pub fn parse_json<T: DeserializeOwned>(path: &Path, bytes: &[u8]) -> CliResult<T> {
    let mut de = serde_json::Deserializer::from_slice(bytes);
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let at = e.path().to_string();
        let inner = e.into_inner();
        let message = if at == "." {
            format!("{}: {inner}", path.display())
        } else {
            format!("{}: field `{at}`: {inner}", path.display())
        };
        // Shapes validate while deserializing; keep their capacity status.
        let exit = if inner.to_string().contains("exceeds the cap") { Exit::Capacity } else { Exit::Parse };
        CliError { exit, message }
    })
}

/// Check a circuit's declared shape against the dimension cap before
/// deserializing the whole file, so oversized shapes report as capacity.
fn precheck_shape(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let value: serde_json::Value = serde_json::from_slice(bytes)
        .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    if let Some(dims) = value.get("shape").and_then(|s| s.as_array()) {
        let dims: Option<Vec<usize>> = dims.iter().map(|d| d.as_u64().map(|d| d as usize)).collect();
        if let Some(dims) = dims {
            if let Err(e) = HilbertShape::new(dims) {
                if e.is_capacity() {
                    return Err(e.into());
                }
            }
        }
    }
    Ok(())
}

fn out_dir(cli: &Cli) -> PathBuf {
    cli.out.clone().unwrap_or_else(|| PathBuf::from("."))
}

fn write_tables(cli: &Cli, header: &Header, tables: &[Table]) -> CliResult<Vec<PathBuf>> {
    let dir = out_dir(cli);
    tables
        .iter()
        .map(|t| write_atomic(&dir, &t.file_name(cli.format), &t.render(header, cli.format)))
        .collect()
}

/// Execute a parsed command line, writing reports to `stdout`.
pub fn execute(cli: &Cli, stdout: &mut (dyn Write + Send)) -> CliResult<()> {
    apply_dim_cap()?;
    if cli.threads == 0 {
        return Err(CliError::usage("--threads must be at least 1"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| CliError::usage(format!("thread pool: {e}")))?;
    pool.install(|| dispatch(cli, stdout))
}

fn dispatch(cli: &Cli, stdout: &mut (dyn Write + Send)) -> CliResult<()> {
    let paths = match &cli.command {
        Command::Device { params } => {
            let bytes = read_input(params)?;
            let p = parse_json(params, &bytes)?;
            let mut report = jobs::device_report(&p)?;
            let header = Header::new("device", cli.seed, &bytes);
            report["header"] = header.to_json();
            let text = serde_json::to_string_pretty(&report).expect("JSON values serialise") + "\n";
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::usage(format!("stdout: {e}")))?;
            match &cli.out {
                Some(dir) => vec![write_atomic(dir, "device.json", &text)?],
                None => vec![],
            }
        }
        Command::Run { circuit, init } => {
            let bytes = read_input(circuit)?;
            precheck_shape(circuit, &bytes)?;
            let c: Circuit = parse_json(circuit, &bytes)?;
            let levels = jobs::parse_levels(init.as_deref(), &c.shape)?;
            let (table, warnings) = jobs::run_circuit(&c, &levels)?;
            for w in warnings {
                eprintln!("warning: {w}");
            }
            write_tables(cli, &Header::new("run", cli.seed, &bytes), &[table])?
        }
        Command::Qst { config } => {
            let bytes = read_input(config)?;
            let job = parse_json(config, &bytes)?;
            write_tables(cli, &Header::new("qst", cli.seed, &bytes), &jobs::qst(&job)?)?
        }
        Command::Grape { config } => {
            let bytes = read_input(config)?;
            let job = parse_json(config, &bytes)?;
            write_tables(cli, &Header::new("grape", cli.seed, &bytes), &jobs::grape(&job, cli.seed)?)?
        }
        Command::Code { config } => {
            let bytes = read_input(config)?;
            let job = parse_json(config, &bytes)?;
            write_tables(cli, &Header::new("code", cli.seed, &bytes), &jobs::code(&job, cli.seed)?)?
        }
        Command::Trotter { config } => {
            let bytes = read_input(config)?;
            let job = parse_json(config, &bytes)?;
            write_tables(cli, &Header::new("trotter", cli.seed, &bytes), &jobs::trotter(&job)?)?
        }
        Command::Otoc { config } => {
            let bytes = read_input(config)?;
            let job = parse_json(config, &bytes)?;
            write_tables(cli, &Header::new("otoc", cli.seed, &bytes), &jobs::otoc(&job)?)?
        }
    };
    for p in paths {
        eprintln!("wrote {}", p.display());
    }
    Ok(())
}
