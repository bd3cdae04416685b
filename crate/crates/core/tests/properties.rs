//! Property tests for the model and measure invariants, including an
//! independent brute-force oracle that enumerates the hidden four-state
//! chain path by path.

use proptest::prelude::*;

use qmemcap_core::{
    all_word_probabilities, apply_transfer_operator, belief_update, block_entropy,
    build_traced_matrices, build_underlying_chain, emission_probability, entropy_rate_bounds,
    stationary_distribution, BeliefState, ChannelParams, GridMeasure, SymmetricParams,
    TracedMatrices, Word,
};

fn binary_entropy(p: f64) -> f64 {
    let mut h = 0.0;
    if p > 0.0 {
        h -= p * p.log2();
    }
    if p < 1.0 {
        h -= (1.0 - p) * (1.0 - p).log2();
    }
    h
}

fn neumaier_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Word probability by summing the hidden four-state chain over every
/// path compatible with the flip pattern. Exponential in the word length
/// and completely independent of the traced-matrix product.
fn brute_force_word_probability(p: &ChannelParams, word: &[u8]) -> f64 {
    let chain = build_underlying_chain(p);
    let n = word.len();
    // Hidden path = choice of sub-channel at each step; the flip half of
    // the state is pinned by the word.
    let mut total = 0.0;
    for path in 0..(1u32 << n) {
        let mut prob = 1.0;
        let mut prev: Option<usize> = None;
        for (t, &flip) in word.iter().enumerate() {
            let channel = ((path >> t) & 1) as usize;
            let state = 2 * channel + flip as usize;
            prob *= match prev {
                None => chain.initial[state],
                Some(prev_state) => chain.t[prev_state][state],
            };
            prev = Some(state);
        }
        total += prob;
    }
    total
}

fn symmetric_strategy() -> impl Strategy<Value = SymmetricParams> {
    (
        (1.0f64 / 3.0)..=1.0f64,
        0.0f64..=1.0f64,
        -1.0f64..=1.0f64,
        any::<bool>(),
    )
        .prop_filter_map("CP-valid symmetric params", |(a, dfrac, s, negate)| {
            let dmax = (a - 1.0 / 3.0).min(1.0 - a);
            let d = if negate { -dfrac * dmax } else { dfrac * dmax };
            SymmetricParams::new(a, d, s).ok()
        })
}

fn ergodic_symmetric_strategy() -> impl Strategy<Value = SymmetricParams> {
    symmetric_strategy().prop_map(|mut p| {
        p.s = p.s.clamp(-0.9, 0.9);
        p
    })
}

fn traced(p: SymmetricParams) -> TracedMatrices {
    build_traced_matrices(&ChannelParams::from_symmetric(p).unwrap())
}

proptest! {
    #[test]
    fn underlying_rows_are_stochastic_and_channel_grouped(p in symmetric_strategy()) {
        let chain = build_underlying_chain(&ChannelParams::from_symmetric(p).unwrap());
        for row in &chain.t {
            let sum: f64 = row.iter().sum();
            prop_assert!((sum - 1.0).abs() <= 1e-12);
            prop_assert!(row.iter().all(|&x| x >= 0.0));
        }
        prop_assert_eq!(chain.t[0], chain.t[1]);
        prop_assert_eq!(chain.t[2], chain.t[3]);
        let init_sum: f64 = chain.initial.iter().sum();
        prop_assert!((init_sum - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn traced_matrices_sum_back_to_q(p in symmetric_strategy()) {
        let cp = ChannelParams::from_symmetric(p).unwrap();
        let m = build_traced_matrices(&cp);
        let q = cp.q();
        for (i, q_row) in q.iter().enumerate() {
            for (j, &q_ij) in q_row.iter().enumerate() {
                prop_assert!(m.e0[i][j] >= 0.0);
                prop_assert!(m.e1[i][j] >= 0.0);
                prop_assert_eq!(m.e0[i][j] + m.e1[i][j], q_ij);
            }
        }
        // pi (e0 + e1) = pi.
        let piq = [
            m.pi[0] * q[0][0] + m.pi[1] * q[1][0],
            m.pi[0] * q[0][1] + m.pi[1] * q[1][1],
        ];
        prop_assert!((piq[0] - m.pi[0]).abs() <= 1e-12);
        prop_assert!((piq[1] - m.pi[1]).abs() <= 1e-12);
    }

    #[test]
    fn stationary_solves_pi_q(q00 in 0.0f64..=1.0, q10 in 0.0f64..=1.0) {
        let q = [[q00, 1.0 - q00], [q10, 1.0 - q10]];
        let st = stationary_distribution(&q, [0.5, 0.5]);
        prop_assert!((st.pi[0] + st.pi[1] - 1.0).abs() <= 1e-12);
        prop_assert!(st.pi[0] >= 0.0 && st.pi[1] >= 0.0);
        if st.unique {
            let piq0 = st.pi[0] * q[0][0] + st.pi[1] * q[1][0];
            prop_assert!((piq0 - st.pi[0]).abs() <= 1e-12);
        }
    }

    #[test]
    fn traced_product_matches_path_enumeration(
        p in symmetric_strategy(),
        word in proptest::collection::vec(0u8..=1u8, 1..=6),
    ) {
        let cp = ChannelParams::from_symmetric(p).unwrap();
        let m = build_traced_matrices(&cp);
        let via_matrices = qmemcap_core::word_probability(&m, &Word::new(word.clone()).unwrap());
        let via_paths = brute_force_word_probability(&cp, &word);
        prop_assert!(
            (via_matrices - via_paths).abs() <= 1e-12,
            "matrices {} vs paths {}",
            via_matrices,
            via_paths
        );
    }

    #[test]
    fn word_distribution_normalizes(p in symmetric_strategy(), n in 1usize..=10) {
        let m = traced(p);
        let probs = all_word_probabilities(&m, n).unwrap();
        prop_assert_eq!(probs.len(), 1usize << n);
        prop_assert!(probs.iter().all(|&x| (0.0..=1.0 + 1e-12).contains(&x)));
        let total = neumaier_sum(probs.iter().copied());
        prop_assert!((total - 1.0).abs() <= 1e-12, "total {}", total);
    }

    #[test]
    fn kolmogorov_consistency(
        p in symmetric_strategy(),
        word in proptest::collection::vec(0u8..=1u8, 1..=8),
    ) {
        let m = traced(p);
        let base = qmemcap_core::word_probability(&m, &Word::new(word.clone()).unwrap());

        let mut suffix0 = word.clone();
        suffix0.push(0);
        let mut suffix1 = word.clone();
        suffix1.push(1);
        let by_suffix = qmemcap_core::word_probability(&m, &Word::new(suffix0).unwrap())
            + qmemcap_core::word_probability(&m, &Word::new(suffix1).unwrap());
        prop_assert!((base - by_suffix).abs() <= 1e-12);

        let mut prefix0 = vec![0u8];
        prefix0.extend_from_slice(&word);
        let mut prefix1 = vec![1u8];
        prefix1.extend_from_slice(&word);
        let by_prefix = qmemcap_core::word_probability(&m, &Word::new(prefix0).unwrap())
            + qmemcap_core::word_probability(&m, &Word::new(prefix1).unwrap());
        prop_assert!((base - by_prefix).abs() <= 1e-12);
    }

    #[test]
    fn relabeling_leaves_word_distribution_unchanged(p in symmetric_strategy(), n in 1usize..=8) {
        let flipped = SymmetricParams { a: p.a, d: -p.d, s: p.s };
        let probs = all_word_probabilities(&traced(p), n).unwrap();
        let probs_flipped = all_word_probabilities(&traced(flipped), n).unwrap();
        prop_assert_eq!(probs, probs_flipped);
    }

    #[test]
    fn iid_collapse_when_d_or_s_vanishes(
        a in (1.0f64 / 3.0)..=1.0f64,
        s in -1.0f64..=1.0f64,
        dfrac in 0.0f64..=1.0f64,
        n in 1usize..=8,
        kill_d in any::<bool>(),
    ) {
        let dmax = (a - 1.0 / 3.0).min(1.0 - a);
        let p = if kill_d {
            SymmetricParams { a, d: 0.0, s }
        } else {
            SymmetricParams { a, d: dfrac * dmax, s: 0.0 }
        };
        prop_assume!(p.validate().is_empty());
        let h_n = block_entropy(&traced(p), n).unwrap();
        prop_assert!(
            (h_n - n as f64 * binary_entropy(a)).abs() <= 1e-9,
            "H_{} = {}",
            n,
            h_n
        );
    }

    #[test]
    fn sandwich_bounds_ordered_and_monotone(p in symmetric_strategy()) {
        let m = traced(p);
        let mut prev: Option<qmemcap_core::BlockEntropyReport> = None;
        for n in 2..=6 {
            let r = entropy_rate_bounds(&m, n).unwrap();
            prop_assert!(r.lower <= r.upper + 1e-9, "n={}: {:?}", n, r);
            prop_assert!(r.upper >= -1e-12 && r.lower <= 1.0 + 1e-12);
            if let Some(prev) = prev {
                prop_assert!(r.upper <= prev.upper + 1e-9);
                prop_assert!(r.lower + 1e-9 >= prev.lower);
            }
            prev = Some(r);
        }
    }

    #[test]
    fn emissions_normalize_exactly_and_updates_stay_in_range(
        p in symmetric_strategy(),
        belief in 0.0f64..=1.0f64,
    ) {
        let m = traced(p);
        let b = BeliefState::new(belief).unwrap();
        let z0 = emission_probability(&m, b, 0);
        let z1 = emission_probability(&m, b, 1);
        prop_assert_eq!(z0 + z1, 1.0);
        prop_assert!((0.0..=1.0).contains(&z0));
        for symbol in 0..2 {
            if let Ok(updated) = belief_update(&m, b, symbol) {
                prop_assert!((0.0..=1.0).contains(&updated.p()));
            }
        }
    }

    #[test]
    fn transfer_operator_conserves_mass(
        p in ergodic_symmetric_strategy(),
        raw in proptest::collection::vec(0.0f64..=1.0f64, 8..=64),
    ) {
        let total: f64 = raw.iter().sum();
        prop_assume!(total > 1e-3);
        let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
        let shortfall = 1.0 - weights.iter().sum::<f64>();
        let mut weights = weights;
        weights[0] += shortfall;
        prop_assume!(weights[0] >= 0.0);
        let g = GridMeasure::from_weights(weights).unwrap();
        let out = apply_transfer_operator(&traced(p), &g);
        prop_assert!((out.total_mass() - 1.0).abs() <= 1e-12);
        prop_assert!(out.weights().iter().all(|&w| w >= 0.0));
    }

    #[test]
    fn fixed_point_rate_is_a_rate(p in ergodic_symmetric_strategy()) {
        let opts = qmemcap_core::FixedPointOptions {
            bins: 128,
            tol: 1e-9,
            max_iter: 20_000,
        };
        let r = qmemcap_core::entropy_rate_fixed_point(&traced(p), &opts).unwrap();
        prop_assert!((0.0..=1.0).contains(&r.rate));
        prop_assert!(r.converged, "did not converge: {:?}", r);
    }
}
