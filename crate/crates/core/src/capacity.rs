//! Capacity from the entropy rate, and the `(a, s)` parameter sweeps.
//!
//! For computational-basis inputs the per-use classical capacity of the
//! switched channel is `1 - s(mu)` bits, with `s(mu)` the entropy rate
//! of the flip process. Sweeps walk a grid over the average no-flip
//! probability `a` and the switching correlation `s`, choosing the
//! sub-channel difference `d` by a rule; the maximal rule
//! `d = min(a - 1/3, 1 - a)` keeps both sub-channels inside the
//! complete-positivity region while making them as distinct as possible.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::blackwell::{
    entropy_rate_fixed_point, entropy_rate_monte_carlo, FixedPointOptions, GridError,
    MonteCarloError, MonteCarloOptions, RateEstimate, RateMethod,
};
use crate::measure::{entropy_rate_bounds_with_limit, BlockLimitError, HARD_MAX_BLOCK};
use crate::model::{build_traced_matrices, ChannelParams, InvalidParams, SymmetricParams};

/// Rule that picks the sub-channel difference for each swept `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DRule {
    /// The largest difference compatible with complete positivity:
    /// `d = min(a - 1/3, 1 - a)`.
    Max,
    /// A fixed difference; grid points it makes invalid are skipped.
    Fixed(f64),
}

impl DRule {
    pub fn d_for(&self, a: f64) -> f64 {
        match *self {
            DRule::Max => (a - crate::model::CP_LOWER).min(1.0 - a),
            DRule::Fixed(d) => d,
        }
    }
}

/// Entropy-rate method and its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    FixedPoint(FixedPointOptions),
    Block { n: usize },
    MonteCarlo(MonteCarloOptions),
}

impl Default for Method {
    fn default() -> Self {
        Method::FixedPoint(FixedPointOptions::default())
    }
}

/// Capacity at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityResult {
    pub params: SymmetricParams,
    pub rate: RateEstimate,
    /// `1 - rate.rate`, bits per channel use.
    pub capacity: f64,
}

/// Failure computing a capacity.
#[derive(Debug, Clone, PartialEq)]
pub enum CapacityError {
    Invalid(InvalidParams),
    Block(BlockLimitError),
    Grid(GridError),
    MonteCarlo(MonteCarloError),
}

impl fmt::Display for CapacityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CapacityError::Invalid(e) => e.fmt(f),
            CapacityError::Block(e) => e.fmt(f),
            CapacityError::Grid(e) => e.fmt(f),
            CapacityError::MonteCarlo(e) => e.fmt(f),
        }
    }
}

impl core::error::Error for CapacityError {}

impl From<InvalidParams> for CapacityError {
    fn from(e: InvalidParams) -> Self {
        CapacityError::Invalid(e)
    }
}

impl From<BlockLimitError> for CapacityError {
    fn from(e: BlockLimitError) -> Self {
        CapacityError::Block(e)
    }
}

impl From<GridError> for CapacityError {
    fn from(e: GridError) -> Self {
        CapacityError::Grid(e)
    }
}

impl From<MonteCarloError> for CapacityError {
    fn from(e: MonteCarloError) -> Self {
        CapacityError::MonteCarlo(e)
    }
}

/// Entropy rate of the flip process for validated channel parameters,
/// by the chosen method. The block method reports the midpoint of the
/// bracket, with the width as the residual.
pub fn entropy_rate(p: &ChannelParams, method: &Method) -> Result<RateEstimate, CapacityError> {
    let m = build_traced_matrices(p);
    match *method {
        Method::FixedPoint(ref opts) => Ok(entropy_rate_fixed_point(&m, opts)?),
        Method::Block { n } => {
            let report = entropy_rate_bounds_with_limit(&m, n, HARD_MAX_BLOCK)?;
            Ok(RateEstimate {
                rate: report.midpoint().clamp(0.0, 1.0),
                method: RateMethod::Block,
                iterations: n as u64,
                converged: true,
                residual: report.width(),
                seed: None,
            })
        }
        Method::MonteCarlo(ref opts) => Ok(entropy_rate_monte_carlo(&m, opts)?),
    }
}

/// Capacity at a symmetrized parameter point: `1 - entropy rate`.
pub fn capacity(p: SymmetricParams, method: &Method) -> Result<CapacityResult, CapacityError> {
    let channel = ChannelParams::from_symmetric(p)?;
    let rate = entropy_rate(&channel, method)?;
    Ok(CapacityResult {
        params: p,
        rate,
        capacity: 1.0 - rate.rate,
    })
}

/// Grid specification for the capacity surface. Endpoints are inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub a_min: f64,
    pub a_max: f64,
    pub a_steps: usize,
    pub s_min: f64,
    pub s_max: f64,
    pub s_steps: usize,
    pub d_rule: DRule,
    pub method: Method,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            a_min: crate::model::CP_LOWER,
            a_max: 1.0,
            a_steps: 41,
            s_min: 0.0,
            s_max: 1.0,
            s_steps: 41,
            d_rule: DRule::Max,
            method: Method::default(),
        }
    }
}

/// A grid point whose parameters violate complete positivity; skipped,
/// never clamped.
#[derive(Debug, Clone, PartialEq)]
pub struct SkippedPoint {
    pub a: f64,
    pub s: f64,
    pub d: f64,
    pub reason: InvalidParams,
}

/// Sweep results: one row per valid grid point in row-major order
/// (`a` outer, `s` inner), invalid points listed separately.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub rows: Vec<CapacityResult>,
    pub skipped: Vec<SkippedPoint>,
}

/// Sweep specification errors.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepError {
    EmptyGrid { a_steps: usize, s_steps: usize },
    BadSPair { low: f64, high: f64 },
    Method(CapacityError),
}

impl fmt::Display for SweepError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SweepError::EmptyGrid { a_steps, s_steps } => {
                write!(f, "grid is empty: a_steps = {a_steps}, s_steps = {s_steps}")
            }
            SweepError::BadSPair { low, high } => {
                write!(f, "s pair requires low < high, got ({low}, {high})")
            }
            SweepError::Method(e) => write!(f, "invalid method parameters: {e}"),
        }
    }
}

impl core::error::Error for SweepError {}

fn validate_method(method: &Method) -> Result<(), SweepError> {
    let check = |r: Result<(), CapacityError>| r.map_err(SweepError::Method);
    match *method {
        Method::FixedPoint(opts) => check(if opts.bins < 2 {
            Err(GridError::TooFewBins { bins: opts.bins }.into())
        } else if !(opts.tol > 0.0 && opts.tol.is_finite()) {
            Err(GridError::InvalidTolerance { tol: opts.tol }.into())
        } else if opts.max_iter == 0 {
            Err(GridError::ZeroIterations.into())
        } else {
            Ok(())
        }),
        Method::Block { n } => check(if n < 2 {
            Err(BlockLimitError::TooSmall { n, min: 2 }.into())
        } else if n > HARD_MAX_BLOCK {
            Err(BlockLimitError::TooLarge {
                n,
                max: HARD_MAX_BLOCK,
            }
            .into())
        } else {
            Ok(())
        }),
        Method::MonteCarlo(opts) => check(if opts.steps <= opts.burn_in {
            Err(MonteCarloError::NoSamples {
                steps: opts.steps,
                burn_in: opts.burn_in,
            }
            .into())
        } else {
            Ok(())
        }),
    }
}

/// Inclusive-endpoint grid; the last point is exactly `max`.
fn linspace(min: f64, max: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![min];
    }
    let mut out = Vec::with_capacity(steps);
    let width = max - min;
    for i in 0..steps {
        if i == steps - 1 {
            out.push(max);
        } else {
            out.push(min + i as f64 * width / (steps - 1) as f64);
        }
    }
    out
}

/// The `(a, s, d)` grid points of the sweep in row-major order. Exposed
/// so callers may evaluate the independent points concurrently; the
/// output rows must keep this order regardless.
pub fn sweep_points(spec: &SweepSpec) -> Result<Vec<(f64, f64, f64)>, SweepError> {
    if spec.a_steps == 0 || spec.s_steps == 0 {
        return Err(SweepError::EmptyGrid {
            a_steps: spec.a_steps,
            s_steps: spec.s_steps,
        });
    }
    validate_method(&spec.method)?;
    let mut points = Vec::with_capacity(spec.a_steps * spec.s_steps);
    for &a in &linspace(spec.a_min, spec.a_max, spec.a_steps) {
        let d = spec.d_rule.d_for(a);
        for &s in &linspace(spec.s_min, spec.s_max, spec.s_steps) {
            points.push((a, s, d));
        }
    }
    Ok(points)
}

/// Evaluates one sweep point. Parameter violations come back as
/// `CapacityError::Invalid` for the caller to record as skipped.
pub fn sweep_point(
    a: f64,
    s: f64,
    d: f64,
    method: &Method,
) -> Result<CapacityResult, CapacityError> {
    capacity(SymmetricParams { a, d, s }, method)
}

/// Runs the sweep sequentially. Per-point non-convergence is recorded in
/// the row's rate estimate, not raised.
pub fn sweep(spec: &SweepSpec) -> Result<SweepOutput, SweepError> {
    let points = sweep_points(spec)?;
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for (a, s, d) in points {
        match sweep_point(a, s, d, &spec.method) {
            Ok(row) => rows.push(row),
            Err(CapacityError::Invalid(reason)) => skipped.push(SkippedPoint { a, s, d, reason }),
            Err(other) => return Err(SweepError::Method(other)),
        }
    }
    Ok(SweepOutput { rows, skipped })
}

/// Capacity difference between two correlation values at one `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivityRow {
    pub a: f64,
    pub d: f64,
    pub low: CapacityResult,
    pub high: CapacityResult,
    /// `capacity(s_high) - capacity(s_low)`.
    pub delta: f64,
}

/// Sensitivity of the capacity to the switching correlation.
#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityOutput {
    pub rows: Vec<SensitivityRow>,
    pub skipped: Vec<SkippedPoint>,
    /// Index into `rows` of the largest capacity difference.
    pub argmax: Option<usize>,
}

/// For each `a` in the grid, the capacity gain from raising the
/// switching correlation from `s_pair.0` to `s_pair.1`, and where that
/// gain is largest.
pub fn s_sensitivity(
    a_grid: &[f64],
    s_pair: (f64, f64),
    d_rule: &DRule,
    method: &Method,
) -> Result<SensitivityOutput, SweepError> {
    let (s_low, s_high) = s_pair;
    // NaN endpoints must be rejected too, hence the explicit ordering.
    if s_low.partial_cmp(&s_high) != Some(core::cmp::Ordering::Less) {
        return Err(SweepError::BadSPair {
            low: s_low,
            high: s_high,
        });
    }
    validate_method(method)?;
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for &a in a_grid {
        let d = d_rule.d_for(a);
        let low = match sweep_point(a, s_low, d, method) {
            Ok(r) => r,
            Err(CapacityError::Invalid(reason)) => {
                skipped.push(SkippedPoint {
                    a,
                    s: s_low,
                    d,
                    reason,
                });
                continue;
            }
            Err(other) => return Err(SweepError::Method(other)),
        };
        let high = match sweep_point(a, s_high, d, method) {
            Ok(r) => r,
            Err(CapacityError::Invalid(reason)) => {
                skipped.push(SkippedPoint {
                    a,
                    s: s_high,
                    d,
                    reason,
                });
                continue;
            }
            Err(other) => return Err(SweepError::Method(other)),
        };
        rows.push(SensitivityRow {
            a,
            d,
            low,
            high,
            delta: high.capacity - low.capacity,
        });
    }
    let mut argmax = None;
    for (i, row) in rows.iter().enumerate() {
        match argmax {
            None => argmax = Some(i),
            Some(j) => {
                if row.delta > rows[j].delta {
                    argmax = Some(i);
                }
            }
        }
    }
    Ok(SensitivityOutput {
        rows,
        skipped,
        argmax,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(bins: usize) -> Method {
        Method::FixedPoint(FixedPointOptions {
            bins,
            ..FixedPointOptions::default()
        })
    }

    #[test]
    fn noiseless_channel_has_unit_capacity() {
        let r = capacity(
            SymmetricParams {
                a: 1.0,
                d: 0.0,
                s: 0.3,
            },
            &fp(256),
        )
        .unwrap();
        assert!((r.capacity - 1.0).abs() < 1e-12, "{}", r.capacity);
        assert!(r.rate.rate < 1e-12);
    }

    #[test]
    fn maximally_mixing_average_without_distinction_is_dead() {
        for s in [0.0, 0.5, 0.9] {
            let r = capacity(SymmetricParams { a: 0.5, d: 0.0, s }, &fp(256)).unwrap();
            assert!(r.capacity.abs() < 1e-12, "s = {s}: {}", r.capacity);
        }
    }

    #[test]
    fn mixture_capacity_at_s_one_via_block() {
        let r = capacity(
            SymmetricParams {
                a: 2.0 / 3.0,
                d: 1.0 / 3.0,
                s: 1.0,
            },
            &Method::Block { n: 16 },
        )
        .unwrap();
        let width = r.rate.residual;
        assert!(width < 1e-3, "bracket width {width}");
        assert!((r.capacity - 0.5408520829727552).abs() <= width + 1e-9);
    }

    #[test]
    fn capacity_is_one_minus_rate_exactly() {
        let r = capacity(
            SymmetricParams {
                a: 0.7,
                d: 0.2,
                s: 0.6,
            },
            &fp(512),
        )
        .unwrap();
        assert_eq!(r.capacity, 1.0 - r.rate.rate);
    }

    #[test]
    fn invalid_point_reports_violations() {
        let err = capacity(
            SymmetricParams {
                a: 0.5,
                d: 0.3,
                s: 0.0,
            },
            &fp(256),
        )
        .unwrap_err();
        assert!(matches!(err, CapacityError::Invalid(_)));
    }

    #[test]
    fn method_parameters_are_checked() {
        assert!(matches!(
            validate_method(&Method::Block { n: 1 }),
            Err(SweepError::Method(CapacityError::Block(_)))
        ));
        assert!(matches!(
            validate_method(&Method::Block { n: 27 }),
            Err(SweepError::Method(CapacityError::Block(_)))
        ));
        assert!(matches!(
            validate_method(&Method::MonteCarlo(MonteCarloOptions {
                steps: 5,
                burn_in: 5,
                seed: 0
            })),
            Err(SweepError::Method(CapacityError::MonteCarlo(_)))
        ));
        assert!(matches!(
            validate_method(&Method::FixedPoint(FixedPointOptions {
                bins: 1,
                ..FixedPointOptions::default()
            })),
            Err(SweepError::Method(CapacityError::Grid(_)))
        ));
    }

    #[test]
    fn degenerate_a_grid_is_flat() {
        let spec = SweepSpec {
            a_min: 1.0 / 3.0,
            a_max: 1.0 / 3.0,
            a_steps: 1,
            s_min: 0.0,
            s_max: 0.9,
            s_steps: 3,
            d_rule: DRule::Max,
            method: fp(512),
        };
        let out = sweep(&spec).unwrap();
        assert_eq!(out.rows.len(), 3);
        assert!(out.skipped.is_empty());
        let expected = 1.0 - 0.9182958340544896;
        for row in &out.rows {
            assert!((row.capacity - expected).abs() < 1e-9, "{}", row.capacity);
        }
    }

    #[test]
    fn sweep_rows_are_row_major_and_skip_invalid() {
        let spec = SweepSpec {
            a_min: 0.5,
            a_max: 0.75,
            a_steps: 2,
            s_min: 0.0,
            s_max: 0.5,
            s_steps: 2,
            d_rule: DRule::Fixed(0.2),
            method: fp(128),
        };
        let out = sweep(&spec).unwrap();
        // a = 0.5 with d = 0.2 violates a - d >= 1/3 and is skipped.
        assert_eq!(out.skipped.len(), 2);
        assert_eq!(out.rows.len(), 2);
        assert!(out.rows.iter().all(|r| r.params.a == 0.75));
        assert_eq!(out.rows[0].params.s, 0.0);
        assert_eq!(out.rows[1].params.s, 0.5);
        assert!(out
            .skipped
            .iter()
            .all(|p| p.a == 0.5 && p.reason.violations.len() == 1));
    }

    #[test]
    fn capacity_grows_with_correlation() {
        let mut last = -1.0;
        for s in [0.0, 0.5, 0.9] {
            let r = capacity(
                SymmetricParams {
                    a: 2.0 / 3.0,
                    d: 1.0 / 3.0,
                    s,
                },
                &fp(1024),
            )
            .unwrap();
            assert!(
                r.capacity > last + 1e-4,
                "s = {s}: {} vs {last}",
                r.capacity
            );
            last = r.capacity;
        }
    }

    #[test]
    fn sensitivity_peaks_at_two_thirds_among_endpoints() {
        let grid = [1.0 / 3.0, 2.0 / 3.0, 1.0];
        let out = s_sensitivity(&grid, (0.0, 0.9), &DRule::Max, &fp(1024)).unwrap();
        assert_eq!(out.rows.len(), 3);
        assert_eq!(out.argmax, Some(1));
        // d = 0 at both endpoints, so the correlation cannot matter there.
        assert!(out.rows[0].delta.abs() < 1e-9);
        assert!(out.rows[2].delta.abs() < 1e-9);
        assert!(out.rows[1].delta > 0.01);
    }

    #[test]
    fn sensitivity_with_zero_difference_is_null() {
        let grid = [0.5, 0.7, 0.9];
        let out = s_sensitivity(&grid, (0.0, 0.9), &DRule::Fixed(0.0), &fp(512)).unwrap();
        for row in &out.rows {
            assert!(row.delta.abs() < 1e-12);
        }
    }

    #[test]
    fn bad_s_pair_is_rejected() {
        let err = s_sensitivity(&[0.5], (0.9, 0.9), &DRule::Max, &fp(128)).unwrap_err();
        assert!(matches!(err, SweepError::BadSPair { .. }));
    }

    #[test]
    fn linspace_is_inclusive_and_exact_at_endpoints() {
        let g = linspace(1.0 / 3.0, 1.0, 41);
        assert_eq!(g.len(), 41);
        assert_eq!(g[0], 1.0 / 3.0);
        assert_eq!(g[40], 1.0);
        assert_eq!(linspace(0.25, 0.25, 1), vec![0.25]);
    }
}
