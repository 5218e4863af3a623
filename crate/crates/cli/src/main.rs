//! `canonforge`: simulate two-level schemes, translate them into conjugated
//! retrograde canons and back, and verify the translation claims.
//!
//! Exit codes: 0 ok, 1 input error, 2 validation error, 3 claim failed.

mod commands;
mod sources;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use canonforge_core::CanonError;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "canonforge", version, about = "Retrograde-canon translation of two-level control schemes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Population (and Bloch-ball) time series as CSV.
    Simulate(SimulateArgs),
    /// Conjugated canon samples as JSON, or the inverse translation.
    Translate(TranslateArgs),
    /// Check the translation claim, a character zero, a gate or the norm relation.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct SchemeArgs {
    /// Scheme JSON file.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["pythagorean", "lz"])]
    pub scheme: Option<PathBuf>,
    /// Built-in Pythagorean scheme with odd p, q.
    #[arg(long, value_name = "P,Q", allow_hyphen_values = true, conflicts_with = "lz")]
    pub pythagorean: Option<String>,
    /// Built-in Landau–Zener sweep.
    #[arg(long, value_name = "OMEGA0,B,T", allow_hyphen_values = true)]
    pub lz: Option<String>,
    /// Affine pace r(t) = a·t + b, overriding the scheme's own.
    #[arg(long, value_name = "A,B", allow_hyphen_values = true)]
    pub pace: Option<String>,
}

#[derive(Debug, Args)]
pub struct WArgs {
    /// bell, example:auto, example:θ, operator:θ, general4:φ2,φ3,φ4,θ, general:k, or a JSON file.
    #[arg(long, value_name = "SPEC", allow_hyphen_values = true)]
    pub w: Option<String>,
    /// Representation dimension (lift dimension, or n for general:k).
    #[arg(long)]
    pub n: Option<usize>,
    /// Rotation axis for general:k, defaults to ŷ.
    #[arg(long, value_name = "X,Y,Z", allow_hyphen_values = true)]
    pub axis: Option<String>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[command(flatten)]
    pub w: WArgs,
    /// Steps per segment (default 64, or 4096 for --lz).
    #[arg(long)]
    pub steps: Option<usize>,
    /// Rotate the frame about ẑ so that ⟨↓|U(T)|↑⟩ is real and positive.
    #[arg(long)]
    pub align_phase: bool,
    /// Output file; standard output when absent.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TranslateArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[command(flatten)]
    pub w: WArgs,
    /// Recover the two-level scheme from a samples file.
    #[arg(long, requires = "input")]
    pub reverse: bool,
    /// Samples file for --reverse.
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Uniform samples on [0, τ), on top of two per smooth piece.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GateArg {
    Entangling,
    DoubleRail,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[command(flatten)]
    pub w: WArgs,
    /// Check |χₙ(R(2kπ/n))| = 0 on seeded random axes instead.
    #[arg(long, requires_all = ["n", "k"])]
    pub character: bool,
    #[arg(long)]
    pub k: Option<usize>,
    /// Compare U^CRC(T/2) with a gate pattern under the operator family.
    #[arg(long, value_enum)]
    pub gate: Option<GateArg>,
    /// θ for --gate (defaults: 0 for entangling, π/4 for double-rail).
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Check the norm relation between the scheme and its canon.
    #[arg(long)]
    pub norm: bool,
    /// Fidelity counted as complete transfer: at least 1 − tolerance.
    #[arg(long, default_value_t = 1e-6)]
    pub tolerance: f64,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub align_phase: bool,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Validation(String),
}

impl From<CanonError> for CliError {
    fn from(e: CanonError) -> Self {
        match e {
            CanonError::NotInFamily(_) | CanonError::NoMeetingTime(_) | CanonError::Precondition(_) => {
                CliError::Validation(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

/// Writes via a sibling temporary file so readers never see partial output.
pub fn emit(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    let Some(path) = out else {
        let mut stdout = std::io::stdout().lock();
        return stdout
            .write_all(content.as_bytes())
            .and_then(|_| stdout.flush())
            .map_err(|e| CliError::Input(format!("stdout: {e}")));
    };
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, content)
        .and_then(|_| fs::rename(&tmp, path))
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Simulate(a) => commands::simulate(a),
        Command::Translate(a) => commands::translate(a),
        Command::Verify(a) => commands::verify(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Input(msg)) => {
            eprintln!("canonforge: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Validation(msg)) => {
            eprintln!("canonforge: validation failed: {msg}");
            ExitCode::from(2)
        }
    }
}
