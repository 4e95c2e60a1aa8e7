//! The possibility calculus on a finite space.
//!
//! A [`PossibilityDistribution`] assigns each outcome a weight in `[0, 1]`
//! with the largest weight exactly `1`. It induces a maxitive measure: the
//! measure of an event is the largest weight among its members (`0` for the
//! empty event). On top of that sit the sup-moments
//!
//! ```text
//! E(X)   = max over outcomes of  X(w) * weight(w)
//! Var(X) = max over outcomes of (X(w) - E(X))^2 * weight(w)
//! ```
//!
//! both taken literally — in particular `E` is applied to raw values, not to
//! shifted or absolute ones, so negative variables do not enjoy translation
//! identities and none are assumed anywhere in this crate.
//!
//! The deviation inequality implemented by [`chebyshev_check`] reads
//! `measure(|X - E(X)| >= r) <= Var(X) / r^2` for `r > 0`.

use crate::error::{Error, Result};
use crate::space::{Event, SampleSpace, Variable};

/// Largest value in the iterator; ties keep the earliest element, which is
/// what makes every argmax witness in this crate deterministic.
fn sup(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for v in values {
        if v > best {
            best = v;
        }
    }
    best
}

/// Outcome weights in `[0, 1]` whose maximum is exactly `1`.
#[derive(Clone, Debug, PartialEq)]
pub struct PossibilityDistribution {
    space: SampleSpace,
    weights: Vec<f64>,
}

impl PossibilityDistribution {
    /// Weights in canonical order. Rejects weights outside `[0, 1]` and
    /// requires the maximum to equal `1.0` exactly; use [`renormalized`]
    /// to rescale instead.
    ///
    /// [`renormalized`]: Self::renormalized
    pub fn new(space: &SampleSpace, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != space.len() {
            return Err(Error::LengthMismatch { expected: space.len(), got: weights.len() });
        }
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() || !(0.0..=1.0).contains(&w) {
                return Err(Error::WeightOutOfRange { label: space.label(i).to_owned(), value: w });
            }
        }
        let max = sup(weights.iter().copied());
        if max != 1.0 {
            return Err(Error::NotNormalized { max_weight: max });
        }
        Ok(Self { space: space.clone(), weights })
    }

    /// Divides every weight by the current maximum, then validates. Weights
    /// must be finite, nonnegative, and not all zero; values above the
    /// maximum cannot occur, so the result always has top weight exactly `1`.
    pub fn renormalized(space: &SampleSpace, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != space.len() {
            return Err(Error::LengthMismatch { expected: space.len(), got: weights.len() });
        }
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::WeightOutOfRange { label: space.label(i).to_owned(), value: w });
            }
        }
        let max = sup(weights.iter().copied());
        if max == 0.0 {
            return Err(Error::ZeroWeights);
        }
        Self::new(space, weights.into_iter().map(|w| w / max).collect())
    }

    pub fn from_pairs<'a, I>(space: &SampleSpace, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, f64)>,
    {
        let v = Variable::from_pairs(space, pairs)?;
        Self::new(space, v.values().to_vec())
    }

    pub fn space(&self) -> &SampleSpace {
        &self.space
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, index: usize) -> f64 {
        self.weights[index]
    }

    /// Indices of outcomes with strictly positive weight.
    pub fn positive_outcomes(&self) -> impl Iterator<Item = usize> + '_ {
        self.weights.iter().enumerate().filter(|(_, &w)| w > 0.0).map(|(i, _)| i)
    }

    /// Induced maxitive measure: largest member weight, `0` for the empty
    /// event. Maxitivity, monotonicity, and subadditivity all follow from
    /// this one-liner and are pinned down by the property suite.
    pub fn measure(&self, event: &Event) -> Result<f64> {
        if self.space != *event.space() {
            return Err(Error::SpaceMismatch);
        }
        let mut best = 0.0;
        for (i, &m) in event.mask().iter().enumerate() {
            if m && self.weights[i] > best {
                best = self.weights[i];
            }
        }
        Ok(best)
    }

    /// Sup-expectation `max over outcomes of value * weight`, taken over the
    /// whole space (zero-weight outcomes contribute their `0 * value = 0`).
    pub fn expectation(&self, x: &Variable) -> Result<f64> {
        if self.space != *x.space() {
            return Err(Error::SpaceMismatch);
        }
        Ok(sup(x.values().iter().zip(&self.weights).map(|(&v, &w)| v * w)))
    }

    /// Sup-variance `max over outcomes of (value - E)^2 * weight`.
    pub fn variance(&self, x: &Variable) -> Result<f64> {
        let e = self.expectation(x)?;
        Ok(sup(
            x.values()
                .iter()
                .zip(&self.weights)
                .map(|(&v, &w)| (v - e) * (v - e) * w),
        ))
    }
}

/// Pointwise maximum of the first `n` variables (`1 <= n <= xs.len()`).
pub fn max_aggregate(xs: &[Variable], n: usize) -> Result<Variable> {
    if xs.is_empty() {
        return Err(Error::EmptyInput("variable list"));
    }
    if n == 0 || n > xs.len() {
        return Err(Error::PrefixOutOfRange { n, available: xs.len() });
    }
    let space = xs[0].space().clone();
    let mut acc = xs[0].values().to_vec();
    for x in &xs[1..n] {
        if *x.space() != space {
            return Err(Error::SpaceMismatch);
        }
        for (a, &v) in acc.iter_mut().zip(x.values()) {
            if v > *a {
                *a = v;
            }
        }
    }
    Variable::new(&space, acc)
}

/// The running maximum of a prefix, centred and scaled:
/// `deviation = (max - E(max)) / n` together with `max_mean = max / n`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedDeviation {
    pub deviation: Variable,
    pub max_mean: Variable,
}

pub fn normalized_deviation(
    xs: &[Variable],
    dist: &PossibilityDistribution,
    n: usize,
) -> Result<NormalizedDeviation> {
    let m = max_aggregate(xs, n)?;
    if m.space() != dist.space() {
        return Err(Error::SpaceMismatch);
    }
    let e = dist.expectation(&m)?;
    let nf = n as f64;
    let deviation = Variable::new(dist.space(), m.values().iter().map(|&v| (v - e) / nf).collect())?;
    let max_mean = Variable::new(dist.space(), m.values().iter().map(|&v| v / nf).collect())?;
    Ok(NormalizedDeviation { deviation, max_mean })
}

/// Both sides of the exchange law `E(max of prefix) = max of E over prefix`.
/// The two routes round identically, so they agree bit-for-bit; the pair is
/// still returned so callers can assert it themselves.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MaxExpectationIdentity {
    pub expectation_of_max: f64,
    pub max_of_expectations: f64,
}

pub fn max_expectation_identity(
    xs: &[Variable],
    dist: &PossibilityDistribution,
    n: usize,
) -> Result<MaxExpectationIdentity> {
    let m = max_aggregate(xs, n)?;
    let lhs = dist.expectation(&m)?;
    let mut rhs = f64::NEG_INFINITY;
    for x in &xs[..n] {
        let e = dist.expectation(x)?;
        if e > rhs {
            rhs = e;
        }
    }
    Ok(MaxExpectationIdentity { expectation_of_max: lhs, max_of_expectations: rhs })
}

/// Measured deviation mass against its variance bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChebyshevBound {
    /// `measure(|X - E(X)| >= r)`.
    pub deviation_measure: f64,
    /// `Var(X) / r^2`.
    pub variance_bound: f64,
}

impl ChebyshevBound {
    /// Slack of the inequality: nonnegative (up to roundoff) when it holds.
    pub fn margin(&self) -> f64 {
        self.variance_bound - self.deviation_measure
    }
}

/// Evaluates both sides of the deviation inequality at radius `r > 0`.
pub fn chebyshev_check(
    x: &Variable,
    dist: &PossibilityDistribution,
    r: f64,
) -> Result<ChebyshevBound> {
    if !r.is_finite() || r <= 0.0 {
        return Err(Error::NonPositive { name: "deviation radius", value: r });
    }
    let e = dist.expectation(x)?;
    let mask = x.values().iter().map(|&v| (v - e).abs() >= r).collect();
    let event = Event::from_mask(dist.space(), mask)?;
    let deviation_measure = dist.measure(&event)?;
    let variance_bound = dist.variance(x)? / (r * r);
    Ok(ChebyshevBound { deviation_measure, variance_bound })
}

/// Both sides of `|max(a) - max(b)| <= max(|a - b|)` for two equally long,
/// nonempty value vectors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MaxDiffBound {
    pub maxima_gap: f64,
    pub pointwise_gap: f64,
}

pub fn max_diff_bound(a: &[f64], b: &[f64]) -> Result<MaxDiffBound> {
    if a.is_empty() {
        return Err(Error::EmptyInput("value vector"));
    }
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { expected: a.len(), got: b.len() });
    }
    for &v in a.iter().chain(b) {
        if !v.is_finite() {
            return Err(Error::NonFinite { context: "max_diff_bound", label: String::new() });
        }
    }
    let maxima_gap = (sup(a.iter().copied()) - sup(b.iter().copied())).abs();
    let pointwise_gap = sup(a.iter().zip(b).map(|(&x, &y)| (x - y).abs()));
    Ok(MaxDiffBound { maxima_gap, pointwise_gap })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_point() -> (SampleSpace, PossibilityDistribution, Variable, Variable) {
        let space = SampleSpace::new(["a", "b", "c"]).unwrap();
        let dist = PossibilityDistribution::new(&space, vec![1.0, 0.5, 0.25]).unwrap();
        let x1 = Variable::new(&space, vec![2.0, 4.0, 8.0]).unwrap();
        let x2 = Variable::new(&space, vec![5.0, 1.0, 0.0]).unwrap();
        (space, dist, x1, x2)
    }

    #[test]
    fn distribution_requires_top_weight_one() {
        let space = SampleSpace::new(["a", "b"]).unwrap();
        let err = PossibilityDistribution::new(&space, vec![0.5, 0.5]).unwrap_err();
        assert_eq!(err, Error::NotNormalized { max_weight: 0.5 });
        assert!(matches!(
            PossibilityDistribution::new(&space, vec![1.0, 1.5]).unwrap_err(),
            Error::WeightOutOfRange { .. }
        ));
    }

    #[test]
    fn renormalization_divides_by_the_max() {
        let space = SampleSpace::new(["a", "b"]).unwrap();
        let d = PossibilityDistribution::renormalized(&space, vec![0.5, 0.25]).unwrap();
        assert_eq!(d.weights(), &[1.0, 0.5]);
        assert_eq!(
            PossibilityDistribution::renormalized(&space, vec![0.0, 0.0]).unwrap_err(),
            Error::ZeroWeights
        );
    }

    #[test]
    fn measure_of_events() {
        let (space, dist, _, _) = three_point();
        let bc = Event::new(&space, ["b", "c"]).unwrap();
        assert_eq!(dist.measure(&bc).unwrap(), 0.5);
        assert_eq!(dist.measure(&Event::empty(&space)).unwrap(), 0.0);
        assert_eq!(dist.measure(&Event::full(&space)).unwrap(), 1.0);
    }

    #[test]
    fn expectation_values() {
        let (space, dist, x1, x2) = three_point();
        assert_eq!(dist.expectation(&x1).unwrap(), 2.0);
        assert_eq!(dist.expectation(&x2).unwrap(), 5.0);
        // Negative values are taken literally: weights scale them toward 0,
        // so a zero-weight outcome can dominate an all-negative variable.
        let neg = Variable::new(&space, vec![-2.0, -1.0, -4.0]).unwrap();
        assert_eq!(dist.expectation(&neg).unwrap(), -0.5);
        let space2 = SampleSpace::new(["a", "b"]).unwrap();
        let d2 = PossibilityDistribution::new(&space2, vec![1.0, 0.0]).unwrap();
        let neg2 = Variable::new(&space2, vec![-5.0, -3.0]).unwrap();
        assert_eq!(d2.expectation(&neg2).unwrap(), 0.0);
    }

    #[test]
    fn variance_values() {
        let (_, dist, x1, x2) = three_point();
        assert_eq!(dist.variance(&x1).unwrap(), 9.0);
        assert_eq!(dist.variance(&x2).unwrap(), 8.0);
    }

    #[test]
    fn space_mismatch_is_rejected() {
        let (_, dist, _, _) = three_point();
        let other = SampleSpace::new(["x", "y"]).unwrap();
        let x = Variable::new(&other, vec![0.0, 1.0]).unwrap();
        assert_eq!(dist.expectation(&x).unwrap_err(), Error::SpaceMismatch);
        assert_eq!(dist.measure(&Event::full(&other)).unwrap_err(), Error::SpaceMismatch);
    }

    #[test]
    fn max_aggregate_prefixes() {
        let (_, _, x1, x2) = three_point();
        let xs = [x1.clone(), x2];
        assert_eq!(max_aggregate(&xs, 1).unwrap(), x1);
        assert_eq!(max_aggregate(&xs, 2).unwrap().values(), &[5.0, 4.0, 8.0]);
        assert!(matches!(max_aggregate(&xs, 0), Err(Error::PrefixOutOfRange { .. })));
        assert!(matches!(max_aggregate(&xs, 3), Err(Error::PrefixOutOfRange { .. })));
    }

    #[test]
    fn max_aggregate_is_idempotent() {
        let (_, _, x1, _) = three_point();
        let xs = [x1.clone(), x1.clone(), x1.clone()];
        assert_eq!(max_aggregate(&xs, 3).unwrap(), x1);
    }

    #[test]
    fn normalized_deviation_values() {
        let (_, dist, x1, x2) = three_point();
        let xs = [x1, x2];
        let nd = normalized_deviation(&xs, &dist, 2).unwrap();
        assert_eq!(nd.deviation.values(), &[0.0, -0.5, 1.5]);
        assert_eq!(nd.max_mean.values(), &[2.5, 2.0, 4.0]);
    }

    #[test]
    fn deviation_of_a_constant_prefix_is_zero() {
        // E of a nonnegative constant is the constant (attained at the
        // weight-1 outcome), so the centred deviation vanishes everywhere.
        let space = SampleSpace::new(["a", "b"]).unwrap();
        let dist = PossibilityDistribution::new(&space, vec![1.0, 0.5]).unwrap();
        let c = Variable::constant(&space, 3.0).unwrap();
        let nd = normalized_deviation(&[c.clone(), c], &dist, 2).unwrap();
        assert_eq!(nd.deviation.values(), &[0.0, 0.0]);
        assert_eq!(nd.max_mean.values(), &[1.5, 1.5]);
    }

    #[test]
    fn expectation_exchanges_with_max() {
        let (_, dist, x1, x2) = three_point();
        let xs = [x1, x2];
        let id = max_expectation_identity(&xs, &dist, 2).unwrap();
        assert_eq!(id.expectation_of_max, 5.0);
        assert_eq!(id.max_of_expectations, 5.0);
        let id1 = max_expectation_identity(&xs, &dist, 1).unwrap();
        assert_eq!(id1.expectation_of_max, id1.max_of_expectations);
    }

    #[test]
    fn chebyshev_on_the_three_point_scenario() {
        let (_, dist, x1, _) = three_point();
        let cb = chebyshev_check(&x1, &dist, 3.0).unwrap();
        assert_eq!(cb.deviation_measure, 0.25);
        assert_eq!(cb.variance_bound, 1.0);
        assert!(cb.margin() >= 0.0);
    }

    #[test]
    fn chebyshev_trivial_and_invalid_radius() {
        let space = SampleSpace::new(["a", "b"]).unwrap();
        let dist = PossibilityDistribution::new(&space, vec![1.0, 0.5]).unwrap();
        let c = Variable::constant(&space, 2.0).unwrap();
        let cb = chebyshev_check(&c, &dist, 0.5).unwrap();
        assert_eq!(cb.deviation_measure, 0.0);
        assert_eq!(cb.variance_bound, 0.0);
        assert!(matches!(
            chebyshev_check(&c, &dist, 0.0),
            Err(Error::NonPositive { .. })
        ));
    }

    #[test]
    fn max_diff_bound_values() {
        let out = max_diff_bound(&[2.0, 4.0, 8.0], &[5.0, 1.0, 0.0]).unwrap();
        assert_eq!(out.maxima_gap, 3.0);
        assert_eq!(out.pointwise_gap, 8.0);
        assert!(out.maxima_gap <= out.pointwise_gap);
        let same = max_diff_bound(&[1.0, 2.0], &[1.0, 2.0]).unwrap();
        assert_eq!((same.maxima_gap, same.pointwise_gap), (0.0, 0.0));
        assert!(max_diff_bound(&[1.0], &[1.0, 2.0]).is_err());
        assert!(max_diff_bound(&[], &[]).is_err());
    }
}
