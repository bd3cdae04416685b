//! Belief-state dynamics and the invariant-measure route to the entropy
//! rate.
//!
//! Conditioned on the flip symbols seen so far, the hidden sub-channel
//! index has a predictive distribution that is a single number
//! `p = P(channel 0)`. Observing symbol `a` updates it by the normalized
//! left action of the traced matrix `E_a`:
//!
//! ```text
//! Z_a(p) = (p, 1-p) * E_a * 1          (emission probability)
//! f_a(p) = ((p, 1-p) * E_a)_0 / Z_a(p) (belief update)
//! ```
//!
//! One observation step therefore pushes a measure `g` on the belief
//! interval forward to `sum_a (f_a)_* (Z_a g)`. The fixed point of this
//! transfer operator is the invariant belief measure, and the entropy
//! rate is the integral of the one-step entropy
//! `h(p) = sum_a -Z_a(p) log2 Z_a(p)` against it.
//!
//! The operator is iterated on a grid of equal-width cells over `[0, 1]`,
//! with pushed mass split linearly between the two nearest cell centers
//! so no mass is lost and the measure does not drift toward cell
//! boundaries. A seeded Monte-Carlo average of `h` along a simulated
//! belief trajectory provides an independent estimate of the same
//! integral.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::math::{abs, floor, sqrt, xlog2x, MIN_PROB};
use crate::model::TracedMatrices;

/// Predictive probability that the current hidden sub-channel is 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeliefState(f64);

/// Belief-state failures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BeliefError {
    OutOfRange {
        p: f64,
    },
    /// The conditioning symbol has probability zero under the current
    /// belief; zero-probability branches must not be followed.
    ImpossibleObservation {
        symbol: u8,
    },
}

impl fmt::Display for BeliefError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            BeliefError::OutOfRange { p } => write!(f, "belief {p} is outside [0, 1]"),
            BeliefError::ImpossibleObservation { symbol } => {
                write!(
                    f,
                    "symbol {symbol} has probability zero under the current belief"
                )
            }
        }
    }
}

impl core::error::Error for BeliefError {}

impl BeliefState {
    pub fn new(p: f64) -> Result<Self, BeliefError> {
        if p.is_finite() && (0.0..=1.0).contains(&p) {
            Ok(Self(p))
        } else {
            Err(BeliefError::OutOfRange { p })
        }
    }

    /// Belief equal to the stationary weight of channel 0.
    pub fn stationary(m: &TracedMatrices) -> Self {
        Self(m.pi[0])
    }

    pub fn p(&self) -> f64 {
        self.0
    }
}

fn weights(p: f64) -> [f64; 2] {
    [p, 1.0 - p]
}

fn z0(m: &TracedMatrices, p: f64) -> f64 {
    let r = m.left_mul(weights(p), 0);
    (r[0] + r[1]).clamp(0.0, 1.0)
}

/// Probability of observing `symbol` under belief `b`. The flip symbol is
/// computed as the complement, so `Z_0 + Z_1 = 1` holds exactly.
pub fn emission_probability(m: &TracedMatrices, b: BeliefState, symbol: u8) -> f64 {
    assert!(symbol <= 1, "symbol must be 0 or 1");
    let z = z0(m, b.p());
    if symbol == 0 {
        z
    } else {
        1.0 - z
    }
}

/// Bayes update of the belief after observing `symbol`.
pub fn belief_update(
    m: &TracedMatrices,
    b: BeliefState,
    symbol: u8,
) -> Result<BeliefState, BeliefError> {
    assert!(symbol <= 1, "symbol must be 0 or 1");
    let r = m.left_mul(weights(b.p()), symbol);
    let z = r[0] + r[1];
    if z < MIN_PROB {
        return Err(BeliefError::ImpossibleObservation { symbol });
    }
    Ok(BeliefState(r[0] / z))
}

/// One-step conditional entropy at belief `b`:
/// `sum_a -Z_a log2 Z_a`, in bits, between 0 and 1.
pub fn step_entropy(m: &TracedMatrices, b: BeliefState) -> f64 {
    let z = z0(m, b.p());
    -xlog2x(z) - xlog2x(1.0 - z)
}

/// Grid configuration errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridError {
    TooFewBins { bins: usize },
    InvalidTolerance { tol: f64 },
    ZeroIterations,
    NegativeWeight { index: usize, value: f64 },
    NotNormalized { sum: f64 },
}

impl fmt::Display for GridError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GridError::TooFewBins { bins } => write!(f, "grid needs at least 2 bins, got {bins}"),
            GridError::InvalidTolerance { tol } => {
                write!(f, "tolerance must be positive and finite, got {tol}")
            }
            GridError::ZeroIterations => write!(f, "max_iter must be at least 1"),
            GridError::NegativeWeight { index, value } => {
                write!(f, "weight {value} at cell {index} is negative")
            }
            GridError::NotNormalized { sum } => {
                write!(f, "weights sum to {sum}, must be 1 within 1e-12")
            }
        }
    }
}

impl core::error::Error for GridError {}

/// A discretized probability measure on the belief interval: `bins`
/// equal-width cells over `[0, 1]` with centers `(k + 1/2) / bins`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridMeasure {
    weights: Vec<f64>,
}

impl GridMeasure {
    /// Uniform measure on the grid.
    pub fn uniform(bins: usize) -> Result<Self, GridError> {
        if bins < 2 {
            return Err(GridError::TooFewBins { bins });
        }
        Ok(Self {
            weights: vec![1.0 / bins as f64; bins],
        })
    }

    /// Measure from explicit cell masses; must be nonnegative and sum to
    /// 1 within 1e-12.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self, GridError> {
        if weights.len() < 2 {
            return Err(GridError::TooFewBins {
                bins: weights.len(),
            });
        }
        let mut sum = 0.0;
        for (index, &value) in weights.iter().enumerate() {
            if value < 0.0 {
                return Err(GridError::NegativeWeight { index, value });
            }
            sum += value;
        }
        if abs(sum - 1.0) > 1e-12 {
            return Err(GridError::NotNormalized { sum });
        }
        Ok(Self { weights })
    }

    pub fn bins(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Center of cell `k`.
    pub fn center(&self, k: usize) -> f64 {
        (k as f64 + 0.5) / self.bins() as f64
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Precomputed action of one observation step on a fixed grid: for each
/// source cell and symbol, the emission weight and the linear split of
/// the pushed mass between the two cell centers nearest to the updated
/// belief.
struct CompiledTransfer {
    /// Indexed `2 * cell + symbol`.
    pushes: Vec<Push>,
}

#[derive(Clone, Copy)]
struct Push {
    z: f64,
    lo: usize,
    hi: usize,
    hi_frac: f64,
}

fn deposit(y: f64, bins: usize) -> (usize, usize, f64) {
    let t = y * bins as f64 - 0.5;
    if t <= 0.0 {
        (0, 0, 0.0)
    } else if t >= (bins - 1) as f64 {
        (bins - 1, bins - 1, 0.0)
    } else {
        let j = floor(t) as usize;
        (j, j + 1, t - j as f64)
    }
}

fn compile(m: &TracedMatrices, bins: usize) -> CompiledTransfer {
    let dead = Push {
        z: 0.0,
        lo: 0,
        hi: 0,
        hi_frac: 0.0,
    };
    let mut pushes = Vec::with_capacity(2 * bins);
    for k in 0..bins {
        let p = (k as f64 + 0.5) / bins as f64;
        let w = weights(p);
        let r = [m.left_mul(w, 0), m.left_mul(w, 1)];
        let direct = [r[0][0] + r[0][1], r[1][0] + r[1][1]];
        // Emission weights: complement split when both symbols are
        // possible (so they sum to 1 exactly), all mass on the live
        // branch when one is impossible.
        let z = direct[0].clamp(0.0, 1.0);
        let weights = if direct[1] < MIN_PROB {
            [1.0, 0.0]
        } else if direct[0] < MIN_PROB {
            [0.0, 1.0]
        } else {
            [z, 1.0 - z]
        };
        for symbol in 0..2 {
            if weights[symbol] == 0.0 {
                pushes.push(dead);
                continue;
            }
            let target = r[symbol][0] / direct[symbol];
            let (lo, hi, hi_frac) = deposit(target, bins);
            pushes.push(Push {
                z: weights[symbol],
                lo,
                hi,
                hi_frac,
            });
        }
    }
    CompiledTransfer { pushes }
}

impl CompiledTransfer {
    fn apply(&self, input: &[f64], output: &mut [f64]) {
        output.fill(0.0);
        for (k, &mass) in input.iter().enumerate() {
            if mass == 0.0 {
                continue;
            }
            for symbol in 0..2 {
                let push = self.pushes[2 * k + symbol];
                if push.z == 0.0 {
                    continue;
                }
                let moved = mass * push.z;
                output[push.lo] += moved * (1.0 - push.hi_frac);
                output[push.hi] += moved * push.hi_frac;
            }
        }
    }
}

/// One application of the transfer operator: the pushforward
/// `sum_a (f_a)_* (Z_a g)`. Total mass is conserved.
pub fn apply_transfer_operator(m: &TracedMatrices, g: &GridMeasure) -> GridMeasure {
    let op = compile(m, g.bins());
    let mut out = vec![0.0; g.bins()];
    op.apply(g.weights(), &mut out);
    GridMeasure { weights: out }
}

/// Fixed-point iteration settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointOptions {
    /// Number of grid cells.
    pub bins: usize,
    /// L1 distance between successive iterates at which to stop.
    pub tol: f64,
    /// Iteration cap.
    pub max_iter: u64,
}

impl Default for FixedPointOptions {
    fn default() -> Self {
        Self {
            bins: 4096,
            tol: 1e-10,
            max_iter: 100_000,
        }
    }
}

/// Outcome of the fixed-point iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointReport {
    /// Operator applications performed.
    pub iterations: u64,
    /// L1 distance between the last two iterates.
    pub residual: f64,
    /// True when the residual dropped below the tolerance.
    pub converged: bool,
    /// False when the switching chain is reducible or periodic, in which
    /// case the invariant belief measure need not be unique and the
    /// result is only one candidate.
    pub ergodic: bool,
}

fn check_options(opts: &FixedPointOptions) -> Result<(), GridError> {
    if opts.bins < 2 {
        return Err(GridError::TooFewBins { bins: opts.bins });
    }
    if !(opts.tol > 0.0 && opts.tol.is_finite()) {
        return Err(GridError::InvalidTolerance { tol: opts.tol });
    }
    if opts.max_iter == 0 {
        return Err(GridError::ZeroIterations);
    }
    Ok(())
}

/// Iterates the transfer operator from the uniform grid measure until the
/// L1 distance between successive iterates drops below `tol` or the
/// iteration cap is reached. Non-convergence is reported in the flags,
/// not as an error.
pub fn fixed_point(
    m: &TracedMatrices,
    opts: &FixedPointOptions,
) -> Result<(GridMeasure, FixedPointReport), GridError> {
    check_options(opts)?;
    let op = compile(m, opts.bins);
    let mut current = GridMeasure::uniform(opts.bins)?;
    let mut next = vec![0.0; opts.bins];
    let mut iterations = 0;
    let mut residual = f64::INFINITY;
    let mut converged = false;
    while iterations < opts.max_iter {
        op.apply(current.weights(), &mut next);
        iterations += 1;
        // Pin the total mass so rounding drift cannot accumulate over
        // long runs.
        let total: f64 = next.iter().sum();
        if total > 0.0 {
            for w in &mut next {
                *w /= total;
            }
        }
        residual = current
            .weights
            .iter()
            .zip(next.iter())
            .map(|(a, b)| abs(a - b))
            .sum();
        core::mem::swap(&mut current.weights, &mut next);
        if residual < opts.tol {
            converged = true;
            break;
        }
    }
    let report = FixedPointReport {
        iterations,
        residual,
        converged,
        ergodic: m.switching_ergodic(),
    };
    Ok((current, report))
}

/// How a rate estimate was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateMethod {
    /// Integral of the one-step entropy against the grid fixed point.
    FixedPoint,
    /// Ergodic average along a simulated belief trajectory.
    MonteCarlo,
    /// Midpoint of the block-entropy bracket.
    Block,
    /// Upper block-entropy bound `H_n - H_{n-1}`.
    BlockUpper,
    /// Lower block-entropy bound (first channel pinned).
    BlockLower,
}

impl fmt::Display for RateMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            RateMethod::FixedPoint => "fixed-point",
            RateMethod::MonteCarlo => "monte-carlo",
            RateMethod::Block => "block",
            RateMethod::BlockUpper => "block-upper",
            RateMethod::BlockLower => "block-lower",
        };
        f.write_str(name)
    }
}

/// An entropy-rate estimate in bits per channel use, always in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEstimate {
    pub rate: f64,
    pub method: RateMethod,
    /// Operator iterations, simulation steps, or block length, depending
    /// on the method.
    pub iterations: u64,
    /// For the fixed point: converged within tolerance AND the invariant
    /// measure is unique (ergodic switching). Flagged false at `s = +-1`.
    pub converged: bool,
    /// Final convergence metric: L1 residual, Monte-Carlo standard error
    /// of the mean, or bracket width.
    pub residual: f64,
    /// Seed used, for reproducibility (Monte-Carlo only).
    pub seed: Option<u64>,
}

/// Entropy rate from the grid fixed point: integrates the one-step
/// entropy at the cell centers against the invariant weights.
pub fn entropy_rate_fixed_point(
    m: &TracedMatrices,
    opts: &FixedPointOptions,
) -> Result<RateEstimate, GridError> {
    let (measure, report) = fixed_point(m, opts)?;
    let mut rate = 0.0;
    for (k, &w) in measure.weights().iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        rate += w * step_entropy(m, BeliefState(measure.center(k)));
    }
    Ok(RateEstimate {
        rate: rate.clamp(0.0, 1.0),
        method: RateMethod::FixedPoint,
        iterations: report.iterations,
        converged: report.converged && report.ergodic,
        residual: report.residual,
        seed: None,
    })
}

/// Monte-Carlo settings. The default seed matches the CLI default.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonteCarloOptions {
    pub steps: u64,
    pub burn_in: u64,
    pub seed: u64,
}

impl Default for MonteCarloOptions {
    fn default() -> Self {
        Self {
            steps: 1_000_000,
            burn_in: 1_000,
            seed: 42,
        }
    }
}

/// Monte-Carlo configuration errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonteCarloError {
    NoSamples { steps: u64, burn_in: u64 },
}

impl fmt::Display for MonteCarloError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            MonteCarloError::NoSamples { steps, burn_in } => write!(
                f,
                "steps ({steps}) must exceed burn_in ({burn_in}) to leave samples"
            ),
        }
    }
}

impl core::error::Error for MonteCarloError {}

/// SplitMix64: a small, portable, seedable generator. Identical output
/// for identical seeds on every platform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Ergodic-average estimate of the entropy rate: simulate the belief
/// chain from the stationary belief, sampling each symbol with its
/// emission probability, and average the one-step entropy after burn-in.
/// Bit-for-bit reproducible for a fixed seed on a fixed build. The
/// standard error (batch means, so serial correlation is accounted for)
/// is reported as the residual.
pub fn entropy_rate_monte_carlo(
    m: &TracedMatrices,
    opts: &MonteCarloOptions,
) -> Result<RateEstimate, MonteCarloError> {
    if opts.steps <= opts.burn_in {
        return Err(MonteCarloError::NoSamples {
            steps: opts.steps,
            burn_in: opts.burn_in,
        });
    }
    let samples = opts.steps - opts.burn_in;
    let batches = samples.min(1_000);
    let batch_len = samples / batches;
    let batched = batches * batch_len;

    let mut rng = SplitMix64::new(opts.seed);
    let mut p = m.pi[0];
    let mut mean_acc = crate::math::CompensatedSum::new();
    let mut batch_means: Vec<f64> = Vec::with_capacity(batches as usize);
    let mut batch_acc = 0.0;
    let mut in_batch = 0u64;

    for step in 0..opts.steps {
        let z = z0(m, p);
        if step >= opts.burn_in {
            let h = -xlog2x(z) - xlog2x(1.0 - z);
            mean_acc.add(h);
            let seen = step - opts.burn_in;
            if seen < batched {
                batch_acc += h;
                in_batch += 1;
                if in_batch == batch_len {
                    batch_means.push(batch_acc / batch_len as f64);
                    batch_acc = 0.0;
                    in_batch = 0;
                }
            }
        }
        let u = rng.next_f64();
        let symbol = if u < z { 0 } else { 1 };
        let r = m.left_mul(weights(p), symbol);
        let total = r[0] + r[1];
        if total > 0.0 {
            p = r[0] / total;
        }
    }

    let mean = mean_acc.total() / samples as f64;
    let se = if batch_means.len() > 1 {
        let b = batch_means.len() as f64;
        let bmean: f64 = batch_means.iter().sum::<f64>() / b;
        let var: f64 = batch_means
            .iter()
            .map(|x| (x - bmean) * (x - bmean))
            .sum::<f64>()
            / (b - 1.0);
        sqrt(var / b)
    } else {
        f64::INFINITY
    };

    Ok(RateEstimate {
        rate: mean.clamp(0.0, 1.0),
        method: RateMethod::MonteCarlo,
        iterations: opts.steps,
        converged: true,
        residual: se,
        seed: Some(opts.seed),
    })
}
