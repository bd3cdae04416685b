//! Exact word-distribution computations for the observed flip process.
//!
//! Probabilities of length-`n` flip patterns are evaluated as matrix
//! products `pi * E_{w1} .. E_{wn} * 1`. Enumeration over all `2^n`
//! patterns is done depth-first, carrying the running row vector, so the
//! cost is `O(2^n)` two-dimensional vector-matrix products rather than
//! full matrix products.
//!
//! Block entropies of the enumerated distribution bracket the entropy
//! rate from both sides:
//!
//! * `H_n - H_{n-1}` (one-step conditional entropy) is non-increasing in
//!   `n` and upper-bounds the rate;
//! * the same difference computed with the sub-channel in force at the
//!   first emission pinned (and averaged over the stationary weight) is
//!   non-decreasing and lower-bounds it.
//!
//! These exponential-cost quantities are the reference oracle for the
//! belief-state method in [`crate::blackwell`].

use alloc::vec::Vec;
use core::fmt;

use crate::math::{xlog2x, CompensatedSum};
use crate::model::TracedMatrices;

/// Default block-length cap: about one million words, seconds of work.
pub const DEFAULT_MAX_BLOCK: usize = 20;

/// Hard block-length cap; enumeration cost doubles per unit of `n`.
pub const HARD_MAX_BLOCK: usize = 26;

/// A finite flip pattern over `{0, 1}` (0 = no flip, 1 = flip).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word(Vec<u8>);

/// Rejected flip-pattern input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordError {
    Empty,
    NonBinarySymbol { index: usize, value: u8 },
}

impl fmt::Display for WordError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            WordError::Empty => write!(f, "word must contain at least one symbol"),
            WordError::NonBinarySymbol { index, value } => {
                write!(f, "symbol {value} at position {index} is not 0 or 1")
            }
        }
    }
}

impl core::error::Error for WordError {}

impl Word {
    pub fn new(symbols: impl Into<Vec<u8>>) -> Result<Self, WordError> {
        let symbols = symbols.into();
        if symbols.is_empty() {
            return Err(WordError::Empty);
        }
        for (index, &value) in symbols.iter().enumerate() {
            if value > 1 {
                return Err(WordError::NonBinarySymbol { index, value });
            }
        }
        Ok(Self(symbols))
    }

    pub fn symbols(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Block length outside the supported range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockLimitError {
    TooSmall {
        n: usize,
        min: usize,
    },
    /// Resource limit: enumerating `2^n` words is past the configured cap.
    TooLarge {
        n: usize,
        max: usize,
    },
}

impl fmt::Display for BlockLimitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            BlockLimitError::TooSmall { n, min } => {
                write!(f, "block length {n} is below the minimum {min}")
            }
            BlockLimitError::TooLarge { n, max } => write!(
                f,
                "block length {n} exceeds the resource cap {max} (2^{n} words)"
            ),
        }
    }
}

impl core::error::Error for BlockLimitError {}

fn check_block(n: usize, min: usize, n_max: usize) -> Result<(), BlockLimitError> {
    if n < min {
        return Err(BlockLimitError::TooSmall { n, min });
    }
    let max = n_max.min(HARD_MAX_BLOCK);
    if n > max {
        return Err(BlockLimitError::TooLarge { n, max });
    }
    Ok(())
}

/// Depth-first walk over all words of the given remaining length, in
/// lexicographic order (0 before 1), invoking `visit` with
/// `start * E_{w} * 1` at each leaf.
fn fold_words<F: FnMut(f64)>(m: &TracedMatrices, start: [f64; 2], remaining: usize, visit: &mut F) {
    if remaining == 0 {
        visit(start[0] + start[1]);
        return;
    }
    fold_words(m, m.left_mul(start, 0), remaining - 1, visit);
    fold_words(m, m.left_mul(start, 1), remaining - 1, visit);
}

/// Probability of one flip pattern: `pi * E_{w1} .. E_{wn} * 1`.
pub fn word_probability(m: &TracedMatrices, w: &Word) -> f64 {
    let mut r = m.pi;
    for &a in w.symbols() {
        r = m.left_mul(r, a);
    }
    r[0] + r[1]
}

/// Probabilities of all `2^n` patterns in lexicographic order.
pub fn all_word_probabilities(m: &TracedMatrices, n: usize) -> Result<Vec<f64>, BlockLimitError> {
    all_word_probabilities_with_limit(m, n, DEFAULT_MAX_BLOCK)
}

/// As [`all_word_probabilities`] with an overridden cap (itself clamped
/// to [`HARD_MAX_BLOCK`]).
pub fn all_word_probabilities_with_limit(
    m: &TracedMatrices,
    n: usize,
    n_max: usize,
) -> Result<Vec<f64>, BlockLimitError> {
    check_block(n, 1, n_max)?;
    let mut out = Vec::with_capacity(1usize << n);
    fold_words(m, m.pi, n, &mut |p| out.push(p));
    Ok(out)
}

/// The spectrum of the `n`-use channel output for a computational-basis
/// input: the output is diagonal in that basis with eigenvalues equal to
/// the flip-pattern probabilities, so its von Neumann entropy is the
/// block Shannon entropy of the flip process.
pub fn output_spectrum(m: &TracedMatrices, n: usize) -> Result<Vec<f64>, BlockLimitError> {
    all_word_probabilities(m, n)
}

/// As [`output_spectrum`] with an overridden cap.
pub fn output_spectrum_with_limit(
    m: &TracedMatrices,
    n: usize,
    n_max: usize,
) -> Result<Vec<f64>, BlockLimitError> {
    all_word_probabilities_with_limit(m, n, n_max)
}

fn entropy_from_start(m: &TracedMatrices, starts: &[[f64; 2]; 2], n: usize) -> f64 {
    // starts[a] is the row vector after the first symbol a has been
    // accounted for; the remaining n-1 symbols are enumerated.
    let mut acc = CompensatedSum::new();
    for &start in starts {
        fold_words(m, start, n - 1, &mut |p| acc.add(-xlog2x(p)));
    }
    acc.total()
}

fn stationary_starts(m: &TracedMatrices) -> [[f64; 2]; 2] {
    [m.left_mul(m.pi, 0), m.left_mul(m.pi, 1)]
}

/// Starts for the process with the sub-channel at the first emission
/// pinned to `channel`: the first symbol is emitted by that channel, and
/// later symbols follow the traced matrices.
fn pinned_starts(m: &TracedMatrices, channel: usize) -> [[f64; 2]; 2] {
    let mut s0 = [0.0; 2];
    let mut s1 = [0.0; 2];
    s0[channel] = m.x[channel];
    s1[channel] = 1.0 - m.x[channel];
    [s0, s1]
}

/// Shannon entropy of the length-`n` word distribution, in bits.
pub fn block_entropy(m: &TracedMatrices, n: usize) -> Result<f64, BlockLimitError> {
    block_entropy_with_limit(m, n, DEFAULT_MAX_BLOCK)
}

/// As [`block_entropy`] with an overridden cap.
pub fn block_entropy_with_limit(
    m: &TracedMatrices,
    n: usize,
    n_max: usize,
) -> Result<f64, BlockLimitError> {
    check_block(n, 1, n_max)?;
    Ok(entropy_from_start(m, &stationary_starts(m), n))
}

fn pinned_block_entropy(m: &TracedMatrices, n: usize, channel: usize) -> f64 {
    entropy_from_start(m, &pinned_starts(m, channel), n)
}

/// Block entropy together with the sandwich bounds on the entropy rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockEntropyReport {
    /// Block length the bounds were computed at.
    pub n: usize,
    /// Block entropy `H_n` in bits.
    pub h_n: f64,
    /// `H_n - H_{n-1}`, bits per use; non-increasing in `n`, rate <= upper.
    pub upper: f64,
    /// Conditional entropy given the past and the sub-channel in force at
    /// the first emission; non-decreasing in `n`, lower <= rate.
    pub lower: f64,
}

impl BlockEntropyReport {
    /// Midpoint of the bracket.
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.upper + self.lower)
    }

    /// Bracket width `upper - lower`.
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Sandwich bounds on the entropy rate at block length `n >= 2`.
pub fn entropy_rate_bounds(
    m: &TracedMatrices,
    n: usize,
) -> Result<BlockEntropyReport, BlockLimitError> {
    entropy_rate_bounds_with_limit(m, n, DEFAULT_MAX_BLOCK)
}

/// As [`entropy_rate_bounds`] with an overridden cap.
pub fn entropy_rate_bounds_with_limit(
    m: &TracedMatrices,
    n: usize,
    n_max: usize,
) -> Result<BlockEntropyReport, BlockLimitError> {
    check_block(n, 2, n_max)?;
    let h_n = block_entropy_with_limit(m, n, n_max)?;
    let h_prev = block_entropy_with_limit(m, n - 1, n_max)?;
    let mut lower = 0.0;
    for channel in 0..2 {
        let pinned_n = pinned_block_entropy(m, n, channel);
        let pinned_prev = pinned_block_entropy(m, n - 1, channel);
        lower += m.pi[channel] * (pinned_n - pinned_prev);
    }
    Ok(BlockEntropyReport {
        n,
        h_n,
        upper: h_n - h_prev,
        lower,
    })
}
