//! CSV/JSON rendering and file emission. Logs go to stderr only; data
//! goes to stdout or the `--out` file, and is byte-identical for
//! identical inputs.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::eval::PointRow;
use crate::CliError;

/// Contractual sweep CSV header.
pub const SWEEP_HEADER: &str = "a,s,d,method,rate_bits,capacity_bits,converged,diagnostic";

/// Header for single-point CSV output.
pub const POINT_HEADER: &str = "a,d,s,method,rate_bits,capacity_bits,converged,diagnostic";

/// Sweep row in the contractual column order (`a,s,d,...`).
#[derive(Debug, Serialize)]
pub struct SweepJsonRow {
    pub a: f64,
    pub s: f64,
    pub d: f64,
    pub method: &'static str,
    pub rate_bits: f64,
    pub capacity_bits: f64,
    pub converged: bool,
    pub diagnostic: crate::eval::Diagnostic,
}

impl From<&PointRow> for SweepJsonRow {
    fn from(r: &PointRow) -> Self {
        Self {
            a: r.a,
            s: r.s,
            d: r.d,
            method: r.method,
            rate_bits: r.rate_bits,
            capacity_bits: r.capacity_bits,
            converged: r.converged,
            diagnostic: r.diagnostic,
        }
    }
}

/// A grid point skipped for violating complete positivity.
#[derive(Debug, Serialize)]
pub struct SkipJson {
    pub a: f64,
    pub s: f64,
    pub d: f64,
    pub reason: String,
}

pub fn sweep_csv_row(r: &PointRow) -> String {
    format!(
        "{},{},{},{},{},{},{},{}",
        r.a,
        r.s,
        r.d,
        r.method,
        r.rate_bits,
        r.capacity_bits,
        r.converged,
        r.diagnostic.csv_field()
    )
}

pub fn point_csv_row(r: &PointRow) -> String {
    format!(
        "{},{},{},{},{},{},{},{}",
        r.a,
        r.d,
        r.s,
        r.method,
        r.rate_bits,
        r.capacity_bits,
        r.converged,
        r.diagnostic.csv_field()
    )
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable output");
    text.push('\n');
    text
}

/// Writes data to the `--out` file or stdout.
pub fn emit(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let stdout = std::io::stdout();
            let mut handle = stdout.lock();
            handle
                .write_all(content.as_bytes())
                .map_err(|e| CliError::usage(format!("cannot write to stdout: {e}")))
        }
    }
}

/// Self-contained gnuplot script rendering the (a, s, capacity) surface
/// from the sweep CSV. The tool only writes the script, never runs it.
pub fn plot_script(csv: &Path, a_steps: usize, s_steps: usize) -> String {
    format!(
        "#!/usr/bin/env gnuplot\n\
         # Capacity surface: run from the directory containing the CSV.\n\
         set datafile separator ','\n\
         set xlabel 'a'\n\
         set ylabel 's'\n\
         set zlabel 'C (bits/use)'\n\
         set dgrid3d {a_steps},{s_steps}\n\
         set hidden3d\n\
         set ticslevel 0\n\
         splot '{}' using 1:2:6 every ::1 with lines title 'capacity'\n\
         pause -1\n",
        csv.display()
    )
}

/// Where the plot script goes: explicit path, or derived from the CSV.
pub fn plot_script_path(requested: &Path, out: &Path) -> PathBuf {
    if requested.as_os_str().is_empty() {
        out.with_extension("gp")
    } else {
        requested.to_path_buf()
    }
}
