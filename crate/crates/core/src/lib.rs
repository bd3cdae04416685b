//! Entropy rate and classical product-state capacity of a qubit channel
//! whose noise is driven by a hidden two-state Markov chain.
//!
//! The channel applies one of two depolarizing maps at each use, selected
//! by a Markov switching process. Written in the no-flip/flip picture, a
//! use of the channel either leaves the input computational-basis state
//! alone or flips it, so the observable output of `n` uses is a binary
//! flip pattern. The probability of a pattern is a matrix product
//!
//! ```text
//! mu(w1..wn) = pi * E_{w1} * ... * E_{wn} * 1
//! ```
//!
//! over a pair of nonnegative 2x2 matrices obtained by tracing the channel
//! choice out of the joint (channel, flip) chain. For computational-basis
//! inputs the per-use capacity is `1 - s(mu)` where `s(mu)` is the entropy
//! rate of the flip process, so everything reduces to computing `s(mu)`.
//!
//! Two independent routes are provided:
//!
//! * [`measure`] enumerates the exact word distribution and brackets the
//!   rate between conditional block-entropy bounds. Exponential in the
//!   block length, but exact; the reference oracle.
//! * [`blackwell`] runs the prediction (belief) filter of the switching
//!   state, iterates the induced transfer operator on a discretized
//!   measure over the belief interval to its fixed point, and integrates
//!   the one-step entropy against it. A seeded Monte-Carlo ergodic
//!   average over the same belief chain serves as a cross-check.
//!
//! [`capacity`] turns rates into capacities and runs the `(a, s)`
//! parameter sweeps with the maximal-difference rule.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod math;

pub mod blackwell;
pub mod capacity;
pub mod measure;
pub mod model;

pub use blackwell::{
    apply_transfer_operator, belief_update, emission_probability, entropy_rate_fixed_point,
    entropy_rate_monte_carlo, fixed_point, step_entropy, BeliefError, BeliefState,
    FixedPointOptions, FixedPointReport, GridError, GridMeasure, MonteCarloError,
    MonteCarloOptions, RateEstimate, RateMethod, SplitMix64,
};
pub use capacity::{
    capacity, entropy_rate, s_sensitivity, sweep, sweep_point, sweep_points, CapacityError,
    CapacityResult, DRule, Method, SensitivityOutput, SensitivityRow, SkippedPoint, SweepError,
    SweepOutput, SweepSpec,
};
pub use measure::{
    all_word_probabilities, all_word_probabilities_with_limit, block_entropy,
    block_entropy_with_limit, entropy_rate_bounds, entropy_rate_bounds_with_limit, output_spectrum,
    output_spectrum_with_limit, word_probability, BlockEntropyReport, BlockLimitError, Word,
    WordError, DEFAULT_MAX_BLOCK, HARD_MAX_BLOCK,
};
pub use model::{
    build_traced_matrices, build_underlying_chain, stationary_distribution, ChannelParams,
    InvalidParams, StationaryDistribution, SymmetricParams, TracedMatrices, UnderlyingChain,
    Violation, CP_LOWER, STOCHASTIC_TOL,
};
