//! The `rumin-slice` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::chain_file::{chain_to_json, load_chain, write_chain};
use crate::currents::SimplicialCurrent;
use crate::error::{Error, Result};
use crate::parser::parse_affine;
use crate::region::ScaledAffine;
use crate::scalar::{format_q, format_sig, parse_q, Scalar, Q};
use crate::slicing::{coarea_sweep, property_report, slice, Side};
use crate::verify::{verify_complex, verify_lemmas};

/// Exit status: every check passed.
pub const EXIT_PASS: i32 = 0;
/// Exit status: a check failed.
pub const EXIT_FAIL: i32 = 1;
/// Exit status: bad input, degenerate level or a request outside the supported range.
pub const EXIT_ERROR: i32 = 2;

const COAREA_TOLERANCE: f64 = 1e-2;

#[derive(Debug, Parser)]
#[command(name = "rumin-slice", version, about = "Rumin complex checks and slicing of simplicial currents in the Heisenberg group")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check dc∘dc = 0 and well-definedness of d_c on random classes.
    VerifyComplex {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
    /// Check the Leibniz defect, lift product rule, J-membership and D-invariance identities.
    VerifyLemmas {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        count: usize,
    },
    /// Slice a chain by {f = t}.
    Slice {
        #[arg(long)]
        chain: PathBuf,
        /// Affine function, e.g. "x1" or "(x1 + y1)/sqrt(2)".
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        /// Level, as an integer, decimal or p/q.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_level)]
        t: Q,
        /// Take the slice from below instead of above.
        #[arg(long)]
        minus: bool,
        /// Write the slice chain here instead of printing it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Slice masses on a grid of levels against the band measure.
    Coarea {
        #[arg(long)]
        chain: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_real)]
        a: f64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_real)]
        b: f64,
        #[arg(long, default_value_t = 100)]
        grid: usize,
        /// Write the CSV table here instead of printing it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the slicing properties P0..P6.
    Report {
        #[arg(long)]
        chain: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        /// Number of generic levels to test.
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
}

fn parse_level(s: &str) -> std::result::Result<Q, String> {
    parse_q(s).map_err(|e| e.to_string())
}

fn parse_real(s: &str) -> std::result::Result<f64, String> {
    parse_q(s).map(|q| q.to_f64()).map_err(|e| e.to_string())
}

fn chain_and_f(chain: &Path, f: &str) -> Result<(SimplicialCurrent, ScaledAffine)> {
    let current = load_chain(chain)?;
    let f = parse_affine(f, current.params())?;
    Ok((current, f))
}

fn status(ok: bool) -> i32 {
    if ok {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::VerifyComplex { n, seed, count } => {
            let report = verify_complex(n, seed, count)?;
            write!(out, "{report}")?;
            Ok(status(report.ok()))
        }
        Command::VerifyLemmas { n, seed, count } => {
            let report = verify_lemmas(n, seed, count)?;
            write!(out, "{report}")?;
            Ok(status(report.ok()))
        }
        Command::Slice { chain, f, t, minus, out: path } => {
            let (current, f) = chain_and_f(&chain, &f)?;
            let level = f.base_level_exact(&t)?;
            let side = if minus { Side::Minus } else { Side::Plus };
            let r = slice(&current, &f.base, &level, side)?;
            writeln!(out, "slice at t = {} ({} side)", format_q(&t), if minus { "minus" } else { "plus" })?;
            writeln!(out, "degree: {}", r.slice.degree())?;
            writeln!(out, "simplices: {}", r.slice.simplices().len())?;
            match r.slice.mass_exact() {
                Some(m) => writeln!(out, "mass: {} (exact {})", format_sig(r.mass, 12), format_q(&m))?,
                None => writeln!(out, "mass: {}", format_sig(r.mass, 12))?,
            }
            writeln!(out, "formula residual: {}", format_sig(r.residual, 12))?;
            writeln!(out, "matches defining formula: {}", if r.chain_agrees { "yes" } else { "no" })?;
            if r.middle_degree {
                writeln!(out, "note: slice degree k = n, excluded from mass estimates")?;
            }
            match path {
                Some(p) => write_chain(&p, &r.slice)?,
                None => write!(out, "{}", chain_to_json(&r.slice))?,
            }
            Ok(status(r.chain_agrees && r.residual == 0.0))
        }
        Command::Coarea { chain, f, a, b, grid, out: path } => {
            let (current, f) = chain_and_f(&chain, &f)?;
            let table = coarea_sweep(&current, &f, a, b, grid)?;
            let csv = table.to_csv();
            match path {
                Some(p) => std::fs::write(&p, csv)?,
                None => write!(out, "{csv}")?,
            }
            let ok = table.ratio <= 1.0 + COAREA_TOLERANCE;
            writeln!(out, "# integral of slice mass: {}", format_sig(table.integral, 12))?;
            writeln!(out, "# Lip(f) * mu_T(a < f < b): {}", format_sig(table.lipschitz * table.band_measure, 12))?;
            writeln!(out, "# ratio: {}", format_sig(table.ratio, 12))?;
            writeln!(out, "# {}", if ok { "PASS" } else { "FAIL" })?;
            Ok(status(ok))
        }
        Command::Report { chain, f, samples } => {
            let (current, f) = chain_and_f(&chain, &f)?;
            let report = property_report(&current, &f, samples)?;
            write!(out, "{report}")?;
            if report.has_scope() {
                return Err(Error::Scope(format!(
                    "slices of degree k = n = {} are outside the range of the mass estimates; the middle-degree case is open",
                    current.params().n()
                )));
            }
            Ok(status(report.all_pass()))
        }
    }
}

/// Runs the command line `args` (including the program name), writing results to `out` and
/// diagnostics to `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_PASS };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}
