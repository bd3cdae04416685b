//! Single-point evaluation shared by every compute command.

use serde::Serialize;

use qmemcap_core::{
    build_traced_matrices, entropy_rate, entropy_rate_bounds_with_limit, ChannelParams,
    FixedPointOptions, Method, MonteCarloOptions, SymmetricParams, HARD_MAX_BLOCK,
};

use crate::CliError;

/// Method-specific data carried next to each rate.
#[derive(Debug, Clone, Copy, Serialize)]
#[serde(untagged)]
pub enum Diagnostic {
    FixedPoint {
        bins: usize,
        iterations: u64,
        residual: f64,
    },
    Block {
        n: usize,
        upper: f64,
        lower: f64,
    },
    MonteCarlo {
        steps: u64,
        burn_in: u64,
        seed: u64,
        standard_error: f64,
    },
}

impl Diagnostic {
    /// Compact `key=value;...` form for the CSV diagnostic column.
    pub fn csv_field(&self) -> String {
        match *self {
            Diagnostic::FixedPoint {
                bins,
                iterations,
                residual,
            } => format!("bins={bins};iterations={iterations};residual={residual:e}"),
            Diagnostic::Block { n, upper, lower } => format!("n={n};upper={upper};lower={lower}"),
            Diagnostic::MonteCarlo {
                steps,
                burn_in,
                seed,
                standard_error,
            } => format!("steps={steps};burn_in={burn_in};seed={seed};se={standard_error:e}"),
        }
    }
}

/// One evaluated parameter point.
#[derive(Debug, Clone, Serialize)]
pub struct PointRow {
    pub a: f64,
    pub d: f64,
    pub s: f64,
    pub method: &'static str,
    pub rate_bits: f64,
    pub capacity_bits: f64,
    pub converged: bool,
    pub diagnostic: Diagnostic,
}

pub fn method_name(method: &Method) -> &'static str {
    match method {
        Method::FixedPoint(_) => "blackwell",
        Method::Block { .. } => "block",
        Method::MonteCarlo(_) => "mc",
    }
}

/// Computes the rate and capacity for validated channel parameters. The
/// descriptor provides the (a, d, s) columns of the row.
pub fn evaluate(
    channel: &ChannelParams,
    descriptor: SymmetricParams,
    method: &Method,
) -> Result<PointRow, CliError> {
    let (rate_bits, converged, diagnostic) = match *method {
        Method::Block { n } => {
            let m = build_traced_matrices(channel);
            let report = entropy_rate_bounds_with_limit(&m, n, HARD_MAX_BLOCK)
                .map_err(|e| CliError::invalid(e.to_string()))?;
            (
                report.midpoint().clamp(0.0, 1.0),
                true,
                Diagnostic::Block {
                    n,
                    upper: report.upper,
                    lower: report.lower,
                },
            )
        }
        Method::FixedPoint(FixedPointOptions { bins, .. }) => {
            let estimate =
                entropy_rate(channel, method).map_err(|e| CliError::invalid(e.to_string()))?;
            (
                estimate.rate,
                estimate.converged,
                Diagnostic::FixedPoint {
                    bins,
                    iterations: estimate.iterations,
                    residual: estimate.residual,
                },
            )
        }
        Method::MonteCarlo(MonteCarloOptions {
            steps,
            burn_in,
            seed,
        }) => {
            let estimate =
                entropy_rate(channel, method).map_err(|e| CliError::invalid(e.to_string()))?;
            (
                estimate.rate,
                estimate.converged,
                Diagnostic::MonteCarlo {
                    steps,
                    burn_in,
                    seed,
                    standard_error: estimate.residual,
                },
            )
        }
    };
    Ok(PointRow {
        a: descriptor.a,
        d: descriptor.d,
        s: descriptor.s,
        method: method_name(method),
        rate_bits,
        capacity_bits: 1.0 - rate_bits,
        converged,
        diagnostic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_diagnostic_brackets_the_rate() {
        let p = SymmetricParams {
            a: 2.0 / 3.0,
            d: 1.0 / 3.0,
            s: 0.9,
        };
        let channel = ChannelParams::from_symmetric(p).unwrap();
        let row = evaluate(&channel, p, &Method::Block { n: 8 }).unwrap();
        match row.diagnostic {
            Diagnostic::Block { upper, lower, n } => {
                assert_eq!(n, 8);
                assert!(lower <= row.rate_bits && row.rate_bits <= upper);
            }
            _ => panic!("wrong diagnostic"),
        }
        assert_eq!(row.capacity_bits, 1.0 - row.rate_bits);
        assert_eq!(row.method, "block");
    }

    #[test]
    fn csv_diagnostic_has_no_commas() {
        let p = SymmetricParams {
            a: 0.7,
            d: 0.1,
            s: 0.5,
        };
        let channel = ChannelParams::from_symmetric(p).unwrap();
        for method in [
            Method::FixedPoint(FixedPointOptions {
                bins: 64,
                ..Default::default()
            }),
            Method::Block { n: 4 },
            Method::MonteCarlo(MonteCarloOptions {
                steps: 2_000,
                burn_in: 10,
                seed: 3,
            }),
        ] {
            let row = evaluate(&channel, p, &method).unwrap();
            let field = row.diagnostic.csv_field();
            assert!(!field.contains(','), "{field}");
            assert!(!field.contains('"'), "{field}");
        }
    }
}
