//! Possibility distributions on finite sample spaces: maxitive measures,
//! sup-moments, deviation bounds, and laws of large numbers for running
//! maxima.
//!
//! A possibility distribution assigns each outcome a weight in `[0, 1]`,
//! with the largest weight exactly 1. The induced measure of an event is the
//! largest weight among its members, so unions aggregate by maximum rather
//! than by sum; expectations and variances follow the same pattern, taking
//! suprema of weighted values instead of weighted averages.
//!
//! On top of the calculus in [`measure`], the crate ships scenario documents
//! ([`scenario`]) describing a variable sequence, trajectory views and
//! closed-form limits ([`sequence`]), convergence diagnostics
//! ([`convergence`]), and the hypothesis checks plus deviation-bound curves
//! for the three laws of large numbers ([`lln`]).
//!
//! ```
//! use maxitive::{PossibilityDistribution, SampleSpace, Variable};
//!
//! let space = SampleSpace::new(["a", "b", "c"])?;
//! let dist = PossibilityDistribution::new(&space, vec![1.0, 0.5, 0.25])?;
//! let x = Variable::new(&space, vec![2.0, 4.0, 8.0])?;
//!
//! // sup-expectation: the best weighted value, here 8 * 0.25 = 2.
//! assert_eq!(dist.expectation(&x)?, 2.0);
//! // sup-variance: the best weighted squared gap, here (8 - 2)^2 * 0.25.
//! assert_eq!(dist.variance(&x)?, 9.0);
//! # Ok::<(), maxitive::Error>(())
//! ```

pub mod convergence;
pub mod error;
pub mod lln;
pub mod measure;
pub mod oracle;
pub mod scenario;
pub mod sequence;
pub mod space;

pub use error::{Error, Result};
pub use measure::{
    chebyshev_check, max_aggregate, max_diff_bound, max_expectation_identity, normalized_deviation,
    ChebyshevBound, MaxDiffBound, MaxExpectationIdentity, NormalizedDeviation,
    PossibilityDistribution,
};
pub use space::{Event, SampleSpace, Variable};
