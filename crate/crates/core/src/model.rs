//! Channel parameters and the matrix data derived from them.
//!
//! A channel use applies one of two depolarizing qubit maps, chosen by a
//! two-state Markov chain with switching matrix `Q = (q_ij)`. In the
//! no-flip/flip picture each sub-channel `i` leaves the input alone with
//! probability `x_i` and flips it otherwise; complete positivity of the
//! depolarizing map restricts `x_i` to `[1/3, 1]`.
//!
//! The joint (channel, flip) process is a four-state Markov chain; the
//! observable flip process is obtained by discarding the channel index.
//! That projection turns the chain into a pair of nonnegative 2x2
//! matrices `E_0`, `E_1` (one per observed symbol) with
//! `(E_a)_{i,i'} = q_{ii'} x_{i'}^a`, and word probabilities become
//! `pi * E_{w1} .. E_{wn} * 1` with `pi` the stationary distribution of
//! the switching chain.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::math::vec_mat2;

/// Complete-positivity lower bound on the no-flip probabilities.
pub const CP_LOWER: f64 = 1.0 / 3.0;

/// Absolute tolerance for row-stochasticity checks.
pub const STOCHASTIC_TOL: f64 = 1e-12;

/// A single violated parameter constraint, with the offending value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Violation {
    /// `x0` or `x1` outside the complete-positivity range `[1/3, 1]`.
    NoFlipOutOfRange { channel: u8, value: f64 },
    /// A row of the switching matrix does not sum to 1.
    RowSum { row: u8, sum: f64 },
    /// A probability entry is negative.
    Negative { name: &'static str, value: f64 },
    /// The initial selection distribution does not sum to 1.
    GammaSum { sum: f64 },
    /// `a + d` outside `[1/3, 1]`.
    SumOutOfRange { value: f64 },
    /// `a - d` outside `[1/3, 1]`.
    DiffOutOfRange { value: f64 },
    /// `s` outside `[-1, 1]`.
    CorrelationOutOfRange { value: f64 },
    /// A parameter is NaN or infinite.
    NotFinite { name: &'static str },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::NoFlipOutOfRange { channel, value } => write!(
                f,
                "x{channel} = {value} violates the complete-positivity bound 1/3 <= x{channel} <= 1"
            ),
            Violation::RowSum { row, sum } => {
                write!(
                    f,
                    "switching row {row} sums to {sum}, must be 1 within {STOCHASTIC_TOL:e}"
                )
            }
            Violation::Negative { name, value } => write!(f, "{name} = {value} is negative"),
            Violation::GammaSum { sum } => {
                write!(
                    f,
                    "gamma sums to {sum}, must be 1 within {STOCHASTIC_TOL:e}"
                )
            }
            Violation::SumOutOfRange { value } => write!(
                f,
                "a+d = {value} violates the complete-positivity bound 1/3 <= a+d <= 1"
            ),
            Violation::DiffOutOfRange { value } => write!(
                f,
                "a-d = {value} violates the complete-positivity bound 1/3 <= a-d <= 1"
            ),
            Violation::CorrelationOutOfRange { value } => {
                write!(f, "s = {value} is outside [-1, 1]")
            }
            Violation::NotFinite { name } => write!(f, "{name} is not finite"),
        }
    }
}

/// Parameter validation failure carrying every violated constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct InvalidParams {
    pub violations: Vec<Violation>,
}

impl fmt::Display for InvalidParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid channel parameters: ")?;
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl core::error::Error for InvalidParams {}

impl InvalidParams {
    pub fn message(&self) -> String {
        use alloc::string::ToString;
        self.to_string()
    }
}

fn check_finite(out: &mut Vec<Violation>, name: &'static str, value: f64) {
    if !value.is_finite() {
        out.push(Violation::NotFinite { name });
    }
}

/// Raw parameters of the switched channel: the two no-flip probabilities,
/// the full switching matrix, and the initial selection distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    /// No-flip probability of sub-channel 0.
    pub x0: f64,
    /// No-flip probability of sub-channel 1.
    pub x1: f64,
    pub q00: f64,
    pub q01: f64,
    pub q10: f64,
    pub q11: f64,
    /// Initial probability of selecting sub-channel 0.
    pub gamma0: f64,
    /// Initial probability of selecting sub-channel 1.
    pub gamma1: f64,
}

impl ChannelParams {
    /// Builds validated parameters from the no-flip probabilities and the
    /// first column of each switching row. Row complements are filled in
    /// and `gamma` defaults to the stationary distribution of `Q`, so the
    /// observed flip process is stationary. For a reducible `Q` (both
    /// diagonal entries 1) the symmetric default `(1/2, 1/2)` is used.
    pub fn new(x0: f64, x1: f64, q00: f64, q10: f64) -> Result<Self, InvalidParams> {
        let q01 = 1.0 - q00;
        let q11 = 1.0 - q10;
        let q = [[q00, q01], [q10, q11]];
        let st = stationary_distribution(&q, [0.5, 0.5]);
        Self {
            x0,
            x1,
            q00,
            q01,
            q10,
            q11,
            gamma0: st.pi[0],
            gamma1: st.pi[1],
        }
        .validated()
    }

    /// Same parameters with an explicit initial selection distribution.
    pub fn with_gamma(mut self, gamma0: f64, gamma1: f64) -> Result<Self, InvalidParams> {
        self.gamma0 = gamma0;
        self.gamma1 = gamma1;
        self.validated()
    }

    /// Builds the symmetrized parametrization: `x0 = a + d`, `x1 = a - d`,
    /// `q00 = q11 = (1+s)/2`, `q01 = q10 = (1-s)/2`, `gamma = (1/2, 1/2)`.
    pub fn from_symmetric(p: SymmetricParams) -> Result<Self, InvalidParams> {
        let violations = p.validate();
        if !violations.is_empty() {
            return Err(InvalidParams { violations });
        }
        let stay = (1.0 + p.s) / 2.0;
        let leave = (1.0 - p.s) / 2.0;
        Self {
            x0: p.a + p.d,
            x1: p.a - p.d,
            q00: stay,
            q01: leave,
            q10: leave,
            q11: stay,
            gamma0: 0.5,
            gamma1: 0.5,
        }
        .validated()
    }

    /// Returns every violated invariant; empty means the parameters are
    /// valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        check_finite(&mut v, "x0", self.x0);
        check_finite(&mut v, "x1", self.x1);
        check_finite(&mut v, "q00", self.q00);
        check_finite(&mut v, "q01", self.q01);
        check_finite(&mut v, "q10", self.q10);
        check_finite(&mut v, "q11", self.q11);
        check_finite(&mut v, "gamma0", self.gamma0);
        check_finite(&mut v, "gamma1", self.gamma1);

        if !(CP_LOWER..=1.0).contains(&self.x0) {
            v.push(Violation::NoFlipOutOfRange {
                channel: 0,
                value: self.x0,
            });
        }
        if !(CP_LOWER..=1.0).contains(&self.x1) {
            v.push(Violation::NoFlipOutOfRange {
                channel: 1,
                value: self.x1,
            });
        }

        for (row, &(p0, p1, n0, n1)) in [
            (self.q00, self.q01, "q00", "q01"),
            (self.q10, self.q11, "q10", "q11"),
        ]
        .iter()
        .enumerate()
        {
            let sum = p0 + p1;
            // NaN sums fall through to the finiteness violations.
            if crate::math::abs(sum - 1.0) > STOCHASTIC_TOL {
                v.push(Violation::RowSum {
                    row: row as u8,
                    sum,
                });
            }
            if p0 < 0.0 {
                v.push(Violation::Negative {
                    name: n0,
                    value: p0,
                });
            }
            if p1 < 0.0 {
                v.push(Violation::Negative {
                    name: n1,
                    value: p1,
                });
            }
        }

        let gsum = self.gamma0 + self.gamma1;
        if crate::math::abs(gsum - 1.0) > STOCHASTIC_TOL {
            v.push(Violation::GammaSum { sum: gsum });
        }
        if self.gamma0 < 0.0 {
            v.push(Violation::Negative {
                name: "gamma0",
                value: self.gamma0,
            });
        }
        if self.gamma1 < 0.0 {
            v.push(Violation::Negative {
                name: "gamma1",
                value: self.gamma1,
            });
        }
        v
    }

    pub fn validated(self) -> Result<Self, InvalidParams> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(self)
        } else {
            Err(InvalidParams { violations })
        }
    }

    /// Switching matrix as rows.
    pub fn q(&self) -> [[f64; 2]; 2] {
        [[self.q00, self.q01], [self.q10, self.q11]]
    }

    /// Relabels the two sub-channels. Word probabilities are invariant
    /// under this swap.
    pub fn swapped(&self) -> Self {
        Self {
            x0: self.x1,
            x1: self.x0,
            q00: self.q11,
            q01: self.q10,
            q10: self.q01,
            q11: self.q00,
            gamma0: self.gamma1,
            gamma1: self.gamma0,
        }
    }
}

/// Symmetrized parametrization: `a` is the average no-flip probability of
/// the two sub-channels, `d` half their difference, and `s` the switching
/// correlation (`s = 0` is fresh random selection each use, `s = 1` never
/// switches).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricParams {
    pub a: f64,
    pub d: f64,
    pub s: f64,
}

impl SymmetricParams {
    pub fn new(a: f64, d: f64, s: f64) -> Result<Self, InvalidParams> {
        let p = Self { a, d, s };
        let violations = p.validate();
        if violations.is_empty() {
            Ok(p)
        } else {
            Err(InvalidParams { violations })
        }
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        check_finite(&mut v, "a", self.a);
        check_finite(&mut v, "d", self.d);
        check_finite(&mut v, "s", self.s);
        let sum = self.a + self.d;
        let diff = self.a - self.d;
        if !(CP_LOWER..=1.0).contains(&sum) {
            v.push(Violation::SumOutOfRange { value: sum });
        }
        if !(CP_LOWER..=1.0).contains(&diff) {
            v.push(Violation::DiffOutOfRange { value: diff });
        }
        if !(-1.0..=1.0).contains(&self.s) {
            v.push(Violation::CorrelationOutOfRange { value: self.s });
        }
        v
    }
}

/// The joint (channel, flip) process as an explicit four-state Markov
/// chain over `{(0,0), (0,1), (1,0), (1,1)}`, indexed `2*channel + flip`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnderlyingChain {
    /// Row-stochastic transition matrix
    /// `t[(i,j)][(i',j')] = q_{ii'} * x_{i'}^{j'}`.
    pub t: [[f64; 4]; 4],
    /// Initial distribution `initial[(i,j)] = gamma_i * x_i^j`.
    pub initial: [f64; 4],
}

impl UnderlyingChain {
    /// Index of the joint state (channel, flip indicator).
    pub fn state_index(channel: usize, flip: usize) -> usize {
        2 * channel + flip
    }
}

/// Builds the four-state chain. Callers must pass validated parameters.
pub fn build_underlying_chain(p: &ChannelParams) -> UnderlyingChain {
    // x[i][j]: probability that sub-channel i produces flip indicator j.
    let x = [[p.x0, 1.0 - p.x0], [p.x1, 1.0 - p.x1]];
    let q = p.q();
    let gamma = [p.gamma0, p.gamma1];

    let mut t = [[0.0; 4]; 4];
    let mut initial = [0.0; 4];
    for i in 0..2 {
        for j in 0..2 {
            let from = UnderlyingChain::state_index(i, j);
            initial[from] = gamma[i] * x[i][j];
            for i2 in 0..2 {
                for j2 in 0..2 {
                    t[from][UnderlyingChain::state_index(i2, j2)] = q[i][i2] * x[i2][j2];
                }
            }
        }
    }
    UnderlyingChain { t, initial }
}

/// Stationary distribution of a 2x2 row-stochastic matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryDistribution {
    pub pi: [f64; 2],
    /// False when the chain is reducible (both states absorbing) and the
    /// fallback distribution was returned instead.
    pub unique: bool,
}

/// Solves `pi Q = pi` in closed form: `pi = (q10, q01) / (q10 + q01)`.
/// When `q01 = q10 = 0` the stationary distribution is not unique; the
/// supplied fallback (typically the initial selection distribution) is
/// returned with `unique = false`.
pub fn stationary_distribution(q: &[[f64; 2]; 2], fallback: [f64; 2]) -> StationaryDistribution {
    let off = q[0][1] + q[1][0];
    if off == 0.0 {
        StationaryDistribution {
            pi: fallback,
            unique: false,
        }
    } else {
        StationaryDistribution {
            pi: [q[1][0] / off, q[0][1] / off],
            unique: true,
        }
    }
}

/// The traced observation matrices of the flip process: one nonnegative
/// 2x2 matrix per observed symbol, `(E_a)_{i,i'} = q_{ii'} x_{i'}^a`,
/// together with the stationary weight `pi` of the switching chain. Word
/// probabilities are `pi * E_{w1} .. E_{wn} * 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TracedMatrices {
    /// Matrix for the "no flip" symbol.
    pub e0: [[f64; 2]; 2],
    /// Matrix for the "flip" symbol; `e0 + e1` is the switching matrix.
    pub e1: [[f64; 2]; 2],
    /// Stationary distribution of the switching chain (left weight of the
    /// word functional; the right weight is the all-ones vector).
    pub pi: [f64; 2],
    /// False when `pi` is a non-unique fallback (reducible switching).
    pub pi_unique: bool,
    /// No-flip probability of each sub-channel, kept for computations
    /// that pin the channel in force at the first emission.
    pub x: [f64; 2],
}

impl TracedMatrices {
    /// Switching matrix recovered as `e0 + e1`.
    pub fn q(&self) -> [[f64; 2]; 2] {
        [
            [self.e0[0][0] + self.e1[0][0], self.e0[0][1] + self.e1[0][1]],
            [self.e0[1][0] + self.e1[1][0], self.e0[1][1] + self.e1[1][1]],
        ]
    }

    /// Matrix for the given symbol.
    pub fn e(&self, symbol: u8) -> &[[f64; 2]; 2] {
        if symbol == 0 {
            &self.e0
        } else {
            &self.e1
        }
    }

    /// True when the switching chain is irreducible and aperiodic, which
    /// makes the belief process uniquely ergodic.
    pub fn switching_ergodic(&self) -> bool {
        let q = self.q();
        q[0][1] + q[1][0] > 0.0 && q[0][0] + q[1][1] > 0.0
    }

    pub(crate) fn left_mul(&self, v: [f64; 2], symbol: u8) -> [f64; 2] {
        vec_mat2(v, self.e(symbol))
    }
}

/// Builds the traced matrices. Per entry, the larger of the two symbol
/// probabilities is computed by multiplication and the other by
/// subtraction from `q_ij`; the subtraction is then exact (Sterbenz), so
/// `e0 + e1` reproduces the switching matrix bit for bit. Callers must
/// pass validated parameters.
pub fn build_traced_matrices(p: &ChannelParams) -> TracedMatrices {
    let q = p.q();
    let x = [p.x0, p.x1];
    let mut e0 = [[0.0; 2]; 2];
    let mut e1 = [[0.0; 2]; 2];
    for ((e0_row, e1_row), q_row) in e0.iter_mut().zip(e1.iter_mut()).zip(q.iter()) {
        for (((e0_ij, e1_ij), &q_ij), &x_j) in e0_row
            .iter_mut()
            .zip(e1_row.iter_mut())
            .zip(q_row.iter())
            .zip(x.iter())
        {
            if x_j >= 0.5 {
                *e0_ij = q_ij * x_j;
                *e1_ij = q_ij - *e0_ij;
            } else {
                *e1_ij = q_ij * (1.0 - x_j);
                *e0_ij = q_ij - *e1_ij;
            }
        }
    }
    let st = stationary_distribution(&q, [p.gamma0, p.gamma1]);
    TracedMatrices {
        e0,
        e1,
        pi: st.pi,
        pi_unique: st.unique,
        x,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn from_symmetric_substitution() {
        let p =
            ChannelParams::from_symmetric(SymmetricParams::new(2.0 / 3.0, 1.0 / 3.0, 0.0).unwrap())
                .unwrap();
        assert!(close(p.x0, 1.0, 1e-15));
        assert!(close(p.x1, 1.0 / 3.0, 1e-15));
        for qv in [p.q00, p.q01, p.q10, p.q11] {
            assert_eq!(qv, 0.5);
        }
        assert_eq!((p.gamma0, p.gamma1), (0.5, 0.5));

        let p = ChannelParams::from_symmetric(SymmetricParams::new(0.5, 1.0 / 6.0, 1.0).unwrap())
            .unwrap();
        assert!(close(p.x0, 2.0 / 3.0, 1e-15));
        assert!(close(p.x1, 1.0 / 3.0, 1e-15));
        assert_eq!(p.q00, 1.0);
        assert_eq!(p.q10, 0.0);
    }

    #[test]
    fn from_symmetric_rejects_cp_violation() {
        let err = ChannelParams::from_symmetric(SymmetricParams {
            a: 0.5,
            d: 0.3,
            s: 0.0,
        })
        .unwrap_err();
        assert!(err.violations.iter().any(
            |v| matches!(v, Violation::DiffOutOfRange { value } if close(*value, 0.2, 1e-12))
        ));
        let msg = err.message();
        assert!(msg.contains("a-d"), "{msg}");
        assert!(msg.contains("1/3"), "{msg}");
    }

    #[test]
    fn validate_reports_each_violation() {
        let ok = ChannelParams::new(1.0, 1.0 / 3.0, 0.5, 0.5).unwrap();
        assert!(ok.validate().is_empty());

        let bad = ChannelParams { x0: 0.2, ..ok };
        let v = bad.validate();
        assert_eq!(
            v,
            vec![Violation::NoFlipOutOfRange {
                channel: 0,
                value: 0.2
            }]
        );

        let bad_rows = ChannelParams {
            q00: 0.6,
            q01: 0.6,
            ..ok
        };
        let v = bad_rows.validate();
        assert!(v
            .iter()
            .any(|v| matches!(v, Violation::RowSum { row: 0, sum } if close(*sum, 1.2, 1e-12))));

        let nan = ChannelParams { x1: f64::NAN, ..ok };
        assert!(nan
            .validate()
            .iter()
            .any(|v| matches!(v, Violation::NotFinite { name: "x1" })));
    }

    #[test]
    fn underlying_chain_rows() {
        // s = 0, a = 2/3, d = 1/3: every row should be (1/2, 0, 1/6, 1/3).
        let p =
            ChannelParams::from_symmetric(SymmetricParams::new(2.0 / 3.0, 1.0 / 3.0, 0.0).unwrap())
                .unwrap();
        let chain = build_underlying_chain(&p);
        for row in &chain.t {
            assert!(close(row[0], 0.5, 1e-15));
            assert!(close(row[1], 0.0, 1e-15));
            assert!(close(row[2], 1.0 / 6.0, 1e-15));
            assert!(close(row[3], 1.0 / 3.0, 1e-15));
        }
        // Rows with equal channel index are identical.
        assert_eq!(chain.t[0], chain.t[1]);
        assert_eq!(chain.t[2], chain.t[3]);
    }

    #[test]
    fn underlying_chain_never_switches_at_s_one() {
        let p = ChannelParams::new(0.75, 0.5, 1.0, 0.0)
            .unwrap()
            .with_gamma(1.0, 0.0)
            .unwrap();
        let chain = build_underlying_chain(&p);
        for j in 0..2 {
            let row = chain.t[UnderlyingChain::state_index(0, j)];
            assert_eq!(row, [0.75, 0.25, 0.0, 0.0]);
        }
        assert_eq!(chain.initial, [0.75, 0.25, 0.0, 0.0]);
    }

    #[test]
    fn underlying_chain_rows_sum_to_one() {
        for (a, d, s) in [(0.7, 0.25, 0.4), (0.5, 1.0 / 6.0, -0.9), (0.9, 0.05, 0.99)] {
            let p = ChannelParams::from_symmetric(SymmetricParams::new(a, d, s).unwrap()).unwrap();
            let chain = build_underlying_chain(&p);
            for row in &chain.t {
                let sum: f64 = row.iter().sum();
                assert!(close(sum, 1.0, 1e-12));
            }
        }
    }

    #[test]
    fn traced_matrices_example() {
        let p =
            ChannelParams::from_symmetric(SymmetricParams::new(2.0 / 3.0, 1.0 / 3.0, 0.0).unwrap())
                .unwrap();
        let m = build_traced_matrices(&p);
        for i in 0..2 {
            assert!(close(m.e0[i][0], 0.5, 1e-15));
            assert!(close(m.e0[i][1], 1.0 / 6.0, 1e-15));
            assert!(close(m.e1[i][0], 0.0, 1e-15));
            assert!(close(m.e1[i][1], 1.0 / 3.0, 1e-15));
        }
        assert_eq!(m.pi, [0.5, 0.5]);
        assert!(m.pi_unique);
    }

    #[test]
    fn e0_plus_e1_reproduces_q_exactly() {
        for (a, d, s) in [
            (2.0 / 3.0, 1.0 / 3.0, 0.7),
            (0.41, 0.05, -0.3),
            (0.97, 0.02, 0.999),
        ] {
            let p = ChannelParams::from_symmetric(SymmetricParams::new(a, d, s).unwrap()).unwrap();
            let m = build_traced_matrices(&p);
            for (i, q_row) in p.q().iter().enumerate() {
                for (j, &q_ij) in q_row.iter().enumerate() {
                    assert_eq!(m.e0[i][j] + m.e1[i][j], q_ij);
                }
            }
        }
    }

    #[test]
    fn stationary_closed_form() {
        let st = stationary_distribution(&[[0.9, 0.1], [0.1, 0.9]], [0.3, 0.7]);
        assert!(st.unique);
        assert_eq!(st.pi, [0.5, 0.5]);

        let st = stationary_distribution(&[[0.5, 0.5], [0.25, 0.75]], [0.5, 0.5]);
        assert!(st.unique);
        assert!(close(st.pi[0], 1.0 / 3.0, 1e-15));
        assert!(close(st.pi[1], 2.0 / 3.0, 1e-15));

        let st = stationary_distribution(&[[1.0, 0.0], [0.0, 1.0]], [0.25, 0.75]);
        assert!(!st.unique);
        assert_eq!(st.pi, [0.25, 0.75]);
    }

    #[test]
    fn stationary_matches_power_iteration() {
        // Independent route: iterate pi <- pi Q from the uniform start.
        for q in [
            [[0.5, 0.5], [0.25, 0.75]],
            [[0.9, 0.1], [0.4, 0.6]],
            [[0.01, 0.99], [0.98, 0.02]],
        ] {
            let mut pi = [0.5, 0.5];
            for _ in 0..20_000 {
                pi = vec_mat2(pi, &q);
                let sum = pi[0] + pi[1];
                pi = [pi[0] / sum, pi[1] / sum];
            }
            let st = stationary_distribution(&q, [0.5, 0.5]);
            assert!(close(st.pi[0], pi[0], 1e-12));
            assert!(close(st.pi[1], pi[1], 1e-12));
        }
    }

    #[test]
    fn pi_is_invariant_under_q() {
        for (a, d, s) in [(0.7, 0.25, 0.4), (0.6, 0.1, -0.8)] {
            let p = ChannelParams::from_symmetric(SymmetricParams::new(a, d, s).unwrap()).unwrap();
            let m = build_traced_matrices(&p);
            let piq = vec_mat2(m.pi, &m.q());
            assert!(close(piq[0], m.pi[0], 1e-12));
            assert!(close(piq[1], m.pi[1], 1e-12));
        }
    }

    #[test]
    fn swap_conjugates_traced_matrices() {
        let p = ChannelParams::new(0.8, 0.4, 0.7, 0.2).unwrap();
        let m = build_traced_matrices(&p);
        let ms = build_traced_matrices(&p.swapped());
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(ms.e0[i][j], m.e0[1 - i][1 - j]);
                assert_eq!(ms.e1[i][j], m.e1[1 - i][1 - j]);
            }
        }
        assert_eq!(ms.pi, [m.pi[1], m.pi[0]]);
    }
}
