//! Property tests for the measure axioms and the calculus inequalities,
//! cross-checked against the independent enumeration oracle.

use maxitive::oracle;
use maxitive::{
    chebyshev_check, max_diff_bound, max_expectation_identity, normalized_deviation, Event,
    PossibilityDistribution, SampleSpace, Variable,
};
use proptest::prelude::*;

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("o{i}")).collect()
}

fn dists_with_masks(k: usize) -> impl Strategy<Value = (PossibilityDistribution, Vec<Vec<bool>>)> {
    (1usize..=8).prop_flat_map(move |n| {
        (
            proptest::collection::vec(0.0f64..=1.0, n),
            0..n,
            proptest::collection::vec(proptest::collection::vec(any::<bool>(), n), k),
        )
            .prop_map(move |(mut w, anchor, masks)| {
                w[anchor] = 1.0;
                let space = SampleSpace::new(labels(n)).unwrap();
                (PossibilityDistribution::new(&space, w).unwrap(), masks)
            })
    })
}

fn dists_with_values(k: usize) -> impl Strategy<Value = (PossibilityDistribution, Vec<Vec<f64>>)> {
    (1usize..=8).prop_flat_map(move |n| {
        (
            proptest::collection::vec(0.0f64..=1.0, n),
            0..n,
            proptest::collection::vec(proptest::collection::vec(-100.0f64..=100.0, n), k),
        )
            .prop_map(move |(mut w, anchor, values)| {
                w[anchor] = 1.0;
                let space = SampleSpace::new(labels(n)).unwrap();
                (PossibilityDistribution::new(&space, w).unwrap(), values)
            })
    })
}

fn event(dist: &PossibilityDistribution, mask: &[bool]) -> Event {
    Event::from_mask(dist.space(), mask.to_vec()).unwrap()
}

fn variables(dist: &PossibilityDistribution, values: &[Vec<f64>]) -> Vec<Variable> {
    values.iter().map(|v| Variable::new(dist.space(), v.clone()).unwrap()).collect()
}

proptest! {
    /// Union measures are maxima, exactly, and agree with the oracle.
    #[test]
    fn maxitivity_is_exact((dist, masks) in dists_with_masks(2)) {
        let a = event(&dist, &masks[0]);
        let b = event(&dist, &masks[1]);
        let union = a.union(&b).unwrap();
        let (pa, pb) = (dist.measure(&a).unwrap(), dist.measure(&b).unwrap());
        let pu = dist.measure(&union).unwrap();
        prop_assert_eq!(pu, pa.max(pb));
        prop_assert!(pa <= pu && pb <= pu);
        let inter = a.intersection(&b).unwrap();
        prop_assert!(dist.measure(&inter).unwrap() <= pa.min(pb));
        let indices: Vec<usize> = (0..dist.space().len()).filter(|&i| a.contains_index(i)).collect();
        prop_assert_eq!(pa, oracle::measure(dist.weights(), &indices));
    }

    /// P is normalized: empty set to 0, full set to 1, and an event or its
    /// complement always carries the anchor weight.
    #[test]
    fn normalization_and_complements((dist, masks) in dists_with_masks(1)) {
        let a = event(&dist, &masks[0]);
        let c = a.complement();
        prop_assert_eq!(dist.measure(&a).unwrap().max(dist.measure(&c).unwrap()), 1.0);
        prop_assert_eq!(dist.measure(&Event::empty(dist.space())).unwrap(), 0.0);
        prop_assert_eq!(dist.measure(&Event::full(dist.space())).unwrap(), 1.0);
    }

    /// Measures along an increasing chain of events are non-decreasing and
    /// reach their supremum at the top of the chain.
    #[test]
    fn continuity_from_below_along_chains((dist, masks) in dists_with_masks(5)) {
        let mut acc = Event::empty(dist.space());
        let mut measures = Vec::new();
        for mask in &masks {
            acc = acc.union(&event(&dist, mask)).unwrap();
            measures.push(dist.measure(&acc).unwrap());
        }
        prop_assert!(measures.windows(2).all(|w| w[0] <= w[1]));
        let sup = measures.iter().copied().fold(0.0, f64::max);
        prop_assert_eq!(*measures.last().unwrap(), sup);
    }

    /// Expectation and variance agree with the enumeration oracle bit for
    /// bit, negative values included.
    #[test]
    fn moments_match_the_oracle((dist, values) in dists_with_values(1)) {
        let x = Variable::new(dist.space(), values[0].clone()).unwrap();
        prop_assert_eq!(
            dist.expectation(&x).unwrap(),
            oracle::expectation(x.values(), dist.weights())
        );
        prop_assert_eq!(
            dist.variance(&x).unwrap(),
            oracle::variance(x.values(), dist.weights())
        );
    }

    /// The deviation inequality never breaks, and both of its sides agree
    /// with the oracle.
    #[test]
    fn chebyshev_never_breaks((dist, values) in dists_with_values(1)) {
        let x = Variable::new(dist.space(), values[0].clone()).unwrap();
        for r in [0.1, 0.5, 1.0, 3.0, 10.0] {
            let check = chebyshev_check(&x, &dist, r).unwrap();
            prop_assert!(check.margin() >= -1e-12, "r={r}: {}", check.margin());
            let (measured, bound) = oracle::chebyshev_sides(x.values(), dist.weights(), r);
            prop_assert_eq!(check.deviation_measure, measured);
            prop_assert_eq!(check.variance_bound, bound);
        }
    }

    /// The expectation of a running maximum equals the running maximum of
    /// the expectations, exactly.
    #[test]
    fn max_expectation_identity_is_exact((dist, values) in dists_with_values(6)) {
        let xs = variables(&dist, &values);
        for n in 1..=xs.len() {
            let id = max_expectation_identity(&xs, &dist, n).unwrap();
            prop_assert_eq!(id.expectation_of_max, id.max_of_expectations);
            let m = oracle::running_max(&values, n);
            prop_assert_eq!(id.expectation_of_max, oracle::expectation(&m, dist.weights()));
        }
    }

    /// Scaling the running maximum by 1/n contracts its variance below the
    /// largest step variance over n^2.
    #[test]
    fn scaled_max_variance_contracts((dist, values) in dists_with_values(6)) {
        let xs = variables(&dist, &values);
        for n in 1..=xs.len() {
            let nd = normalized_deviation(&xs, &dist, n).unwrap();
            let var_scaled = dist.variance(&nd.max_mean).unwrap();
            let max_var = xs[..n]
                .iter()
                .map(|x| dist.variance(x).unwrap())
                .fold(0.0, f64::max);
            let nf = n as f64;
            prop_assert!(
                var_scaled <= max_var / (nf * nf) + 1e-9,
                "n={n}: {var_scaled} vs {max_var}"
            );
        }
    }

    /// The deviation view is the running maximum recentered by its own
    /// expectation, computed against the oracle's routes.
    #[test]
    fn deviation_matches_oracle_centering((dist, values) in dists_with_values(4)) {
        let xs = variables(&dist, &values);
        let n = xs.len();
        let nd = normalized_deviation(&xs, &dist, n).unwrap();
        let m = oracle::running_max(&values, n);
        let e = oracle::expectation(&m, dist.weights());
        for i in 0..dist.space().len() {
            prop_assert_eq!(nd.max_mean.value(i), m[i] / n as f64);
            prop_assert_eq!(nd.deviation.value(i), (m[i] - e) / n as f64);
        }
    }

    /// Gap between maxima is bounded by the largest pointwise gap.
    #[test]
    fn max_diff_is_bounded_pointwise(pairs in (1usize..=8).prop_flat_map(|n| (
        proptest::collection::vec(-100.0f64..=100.0, n),
        proptest::collection::vec(-100.0f64..=100.0, n),
    ))) {
        let (a, b) = pairs;
        let check = max_diff_bound(&a, &b).unwrap();
        prop_assert!(check.maxima_gap <= check.pointwise_gap + 1e-9);
    }

    /// Renormalization is idempotent.
    #[test]
    fn renormalization_is_idempotent(
        (n, raw, anchor) in (1usize..=8).prop_flat_map(|n| (
            Just(n),
            proptest::collection::vec(0.0f64..=10.0, n),
            0..n,
        ))
    ) {
        let mut w = raw;
        w[anchor] = w[anchor].max(0.5);
        let space = SampleSpace::new(labels(n)).unwrap();
        let once = PossibilityDistribution::renormalized(&space, w).unwrap();
        let twice =
            PossibilityDistribution::renormalized(&space, once.weights().to_vec()).unwrap();
        prop_assert_eq!(once.weights(), twice.weights());
    }
}
