//! Report serialization: JSON payloads, CSV histograms, and run manifests.

use crate::error::{CpgError, Result};
use crate::numeric::constants::SingularConstants;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

/// Top-level manifest written next to every experiment output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub experiment: String,
    pub seed: u64,
    pub threads: usize,
    pub parameters: HashMap<String, String>,
    /// Snapshot of the singular constants the run used.
    pub constants: ConstantsSnapshot,
}

/// The constants a run depended on, for reproducibility audits.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstantsSnapshot {
    pub rho: f64,
    pub d0: f64,
    pub d_prime: f64,
    pub d3: f64,
    pub kappa: f64,
    pub c_v: f64,
    pub mu: f64,
}

impl ConstantsSnapshot {
    pub fn from_constants(c: &SingularConstants) -> Self {
        ConstantsSnapshot {
            rho: c.rho,
            d0: c.d0,
            d_prime: c.d_prime,
            d3: c.d3,
            kappa: c.kappa,
            c_v: c.c_v,
            mu: c.mu,
        }
    }
}

/// Writes a histogram as CSV rows `bin_lo,bin_hi,count`.
pub fn write_csv_histogram<W: Write>(
    mut out: W,
    bins: &[(f64, f64, u64)],
) -> Result<()> {
    writeln!(out, "bin_lo,bin_hi,count").map_err(io_err)?;
    for &(lo, hi, count) in bins {
        writeln!(out, "{lo},{hi},{count}").map_err(io_err)?;
    }
    Ok(())
}

/// Bins integer-valued observations into unit-width histogram rows.
pub fn integer_histogram(values: &HashMap<usize, usize>) -> Vec<(f64, f64, u64)> {
    let mut keys: Vec<usize> = values.keys().copied().collect();
    keys.sort_unstable();
    keys.into_iter()
        .map(|k| (k as f64, (k + 1) as f64, values[&k] as u64))
        .collect()
}

/// Serializes any report as pretty JSON into `path`.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let data = serde_json::to_string_pretty(value)
        .map_err(|e| CpgError::Parse(format!("serialize: {e}")))?;
    std::fs::write(path, data).map_err(io_err)
}

fn io_err(e: std::io::Error) -> CpgError {
    CpgError::Parse(format!("io: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_histogram_has_header_and_rows() {
        let mut buf = Vec::new();
        write_csv_histogram(&mut buf, &[(0.0, 1.0, 5), (1.0, 2.0, 7)]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "bin_lo,bin_hi,count\n0,1,5\n1,2,7\n");
    }

    #[test]
    fn integer_histogram_is_sorted() {
        let mut h = HashMap::new();
        h.insert(3usize, 2usize);
        h.insert(0usize, 9usize);
        let rows = integer_histogram(&h);
        assert_eq!(rows, vec![(0.0, 1.0, 9), (3.0, 4.0, 2)]);
    }
}
