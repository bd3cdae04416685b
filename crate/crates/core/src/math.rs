//! Small float helpers shared across the crate. All transcendentals go
//! through `libm` so results are identical with and without `std`.

/// Probabilities below this are treated as exact zeros in entropy terms.
pub(crate) const MIN_PROB: f64 = 1e-300;

pub(crate) fn log2(x: f64) -> f64 {
    libm::log2(x)
}

pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

pub(crate) fn floor(x: f64) -> f64 {
    libm::floor(x)
}

pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

/// `p * log2(p)` with the `0 log 0 = 0` convention.
pub(crate) fn xlog2x(p: f64) -> f64 {
    if p < MIN_PROB {
        0.0
    } else {
        p * log2(p)
    }
}

/// Row vector times 2x2 matrix.
pub(crate) fn vec_mat2(v: [f64; 2], m: &[[f64; 2]; 2]) -> [f64; 2] {
    [
        v[0] * m[0][0] + v[1] * m[1][0],
        v[0] * m[0][1] + v[1] * m[1][1],
    ]
}

/// Neumaier-compensated accumulator. Block entropies sum up to 2^26
/// terms; plain summation would eat into the 1e-12 tolerances promised
/// downstream.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if abs(self.sum) >= abs(value) {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}
