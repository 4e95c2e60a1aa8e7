//! Views over the variable sequence of a scenario: the raw steps, the running
//! pointwise maximum `M_n`, the scaled maximum `A_n = M_n / n`, and the
//! normalized deviation `Y_n = (M_n - E(M_n)) / n`.
//!
//! For the affine-basis generator family the long-run behaviour is available
//! in closed form. Writing the step as `X_k = alpha*k + beta*sqrt(k) +
//! gamma*ln(k+1) + eta` per outcome, powers of `k` dominate in the order
//! `k > sqrt(k) > ln(k+1) > 1`, so products `weight * X_k` are eventually
//! ordered lexicographically by their scaled coefficient tuples. That gives
//! exact limits for the scaled views and an exact growth class for the
//! step variances, which the hypothesis checkers use to decide questions a
//! finite horizon cannot settle.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::Result;
use crate::scenario::{Generator, Scenario};
use crate::space::Variable;

/// A long-run value of a trajectory at one outcome.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Limit {
    Finite(f64),
    PlusInfinity,
    MinusInfinity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SequenceKind {
    /// The steps `X_n` themselves.
    Raw,
    /// Running pointwise maximum `M_n`.
    RunningMax,
    /// `A_n = M_n / n`.
    MaxMean,
    /// `Y_n = (M_n - E(M_n)) / n`.
    Deviation,
}

/// A lazily evaluated trajectory of one [`SequenceKind`] over a scenario.
#[derive(Clone, Copy, Debug)]
pub struct SequenceView<'a> {
    scenario: &'a Scenario,
    kind: SequenceKind,
}

impl<'a> SequenceView<'a> {
    pub fn new(scenario: &'a Scenario, kind: SequenceKind) -> Self {
        Self { scenario, kind }
    }

    pub fn scenario(&self) -> &'a Scenario {
        self.scenario
    }

    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    /// The trajectory for steps `1..=horizon`; entry `n - 1` is step `n`.
    ///
    /// Runs in one pass, carrying the running maximum, so the cost is
    /// `O(horizon * |space|)` for every kind.
    pub fn path(&self, horizon: usize) -> Result<Vec<Variable>> {
        let space = self.scenario.space();
        let dist = self.scenario.distribution();
        let mut out = Vec::with_capacity(horizon);
        let mut running: Vec<f64> = Vec::new();
        for n in 1..=horizon {
            let step = self.scenario.variable(n)?;
            if n == 1 {
                running = step.values().to_vec();
            } else {
                for (m, &v) in running.iter_mut().zip(step.values()) {
                    if v > *m {
                        *m = v;
                    }
                }
            }
            let values = match self.kind {
                SequenceKind::Raw => step.values().to_vec(),
                SequenceKind::RunningMax => running.clone(),
                SequenceKind::MaxMean => {
                    running.iter().map(|&m| m / n as f64).collect()
                }
                SequenceKind::Deviation => {
                    let max_var = Variable::new(space, running.clone())?;
                    let center = dist.expectation(&max_var)?;
                    running.iter().map(|&m| (m - center) / n as f64).collect()
                }
            };
            out.push(Variable::new(space, values)?);
        }
        Ok(out)
    }

    /// Closed-form long-run value at `outcome`, when one is derivable.
    ///
    /// `None` means the question is out of reach analytically (explicit
    /// tables, noisy raw steps, or a running maximum that stabilizes at a
    /// value only a scan could find) and callers should fall back to
    /// numeric criteria.
    pub fn analytic_limit(&self, outcome: usize) -> Option<Limit> {
        match self.scenario.generator() {
            Generator::Explicit { .. } => None,
            Generator::SeededUniform { .. } => match self.kind {
                // Bounded steps: M_n is bounded, so both scaled views vanish.
                SequenceKind::MaxMean | SequenceKind::Deviation => Some(Limit::Finite(0.0)),
                SequenceKind::Raw | SequenceKind::RunningMax => None,
            },
            Generator::AffineBasis { coefficients } => {
                let c = coefficients[outcome];
                match self.kind {
                    SequenceKind::Raw => Some(match sign3(c.alpha, c.beta, c.gamma) {
                        Ordering::Equal => Limit::Finite(c.eta),
                        Ordering::Greater => Limit::PlusInfinity,
                        Ordering::Less => Limit::MinusInfinity,
                    }),
                    SequenceKind::RunningMax => match sign3(c.alpha, c.beta, c.gamma) {
                        // Constant steps: the maximum is that constant.
                        Ordering::Equal => Some(Limit::Finite(c.eta)),
                        Ordering::Greater => Some(Limit::PlusInfinity),
                        // The maximum freezes at a finite early step; finding
                        // it is a scan, not a formula.
                        Ordering::Less => None,
                    },
                    // M_n(w)/n -> max(alpha(w), 0): positive drift wins,
                    // anything sublinear or shrinking is flattened by 1/n.
                    SequenceKind::MaxMean => Some(Limit::Finite(c.alpha.max(0.0))),
                    // E(M_n)/n -> max over outcomes of (weight * alpha),
                    // clamped at zero the same way.
                    SequenceKind::Deviation => {
                        let a_inf = self
                            .scenario
                            .distribution()
                            .weights()
                            .iter()
                            .zip(coefficients)
                            .map(|(w, c)| w * c.alpha)
                            .fold(f64::NEG_INFINITY, f64::max);
                        Some(Limit::Finite(c.alpha.max(0.0) - a_inf.max(0.0)))
                    }
                }
            }
        }
    }
}

/// Sign of the first nonzero among `(a, b, c)`; `Equal` when all are zero.
fn sign3(a: f64, b: f64, c: f64) -> Ordering {
    for v in [a, b, c] {
        match v.partial_cmp(&0.0).expect("coefficients are finite") {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// Asymptotic class of the step variances (equivalently, of their running
/// maximum), ordered from slowest to fastest growth.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VarianceGrowth {
    /// Identically zero from some step on.
    EventuallyZero,
    /// Tends to a positive constant.
    Converges,
    /// Bounded, with no specific limit identified.
    Bounded,
    /// Grows like `(ln n)^2`.
    LogSquared,
    /// Grows like `n`.
    Linear,
    /// Grows like `n^2`.
    Quadratic,
}

/// Growth class of `Var(X_k)` for generators where it is derivable.
///
/// For the affine basis: the weighted coefficient tuples `w(omega) * (alpha,
/// beta, gamma, eta)` order the products `w * X_k` lexicographically for
/// large `k`, so the expectation eventually tracks the lex-greatest tuple
/// `G*`. At each positively weighted outcome the centered step then behaves
/// like `(coeffs - G*) . basis`, and the first nonzero component of that
/// difference fixes the squared growth: `alpha -> n^2`, `beta -> n`,
/// `gamma -> (ln n)^2`, `eta -> constant`, none -> zero. The overall class
/// is the fastest one present.
pub(crate) fn variance_growth(scenario: &Scenario) -> Option<VarianceGrowth> {
    let weights = scenario.distribution().weights();
    match scenario.generator() {
        Generator::Explicit { .. } => None,
        Generator::SeededUniform { amp, .. } => {
            let noisy = weights.iter().zip(amp).any(|(&w, &a)| w > 0.0 && a != 0.0);
            if noisy {
                Some(VarianceGrowth::Bounded)
            } else {
                // Steps are constant in k at every positively weighted
                // outcome, so the variance is the same at every step.
                let var1 = scenario
                    .distribution()
                    .variance(&scenario.variable(1).ok()?)
                    .ok()?;
                Some(if var1 == 0.0 {
                    VarianceGrowth::EventuallyZero
                } else {
                    VarianceGrowth::Converges
                })
            }
        }
        Generator::AffineBasis { coefficients } => {
            let scaled: Vec<[f64; 4]> = weights
                .iter()
                .zip(coefficients)
                .map(|(w, c)| [w * c.alpha, w * c.beta, w * c.gamma, w * c.eta])
                .collect();
            let top = scaled
                .iter()
                .copied()
                .max_by(|a, b| lex_cmp(a, b))
                .expect("space is nonempty");
            let mut class = VarianceGrowth::EventuallyZero;
            for (i, &w) in weights.iter().enumerate() {
                if w == 0.0 {
                    continue;
                }
                let c = coefficients[i];
                let diff = [c.alpha - top[0], c.beta - top[1], c.gamma - top[2], c.eta - top[3]];
                let outcome_class = match diff.iter().position(|&d| d != 0.0) {
                    Some(0) => VarianceGrowth::Quadratic,
                    Some(1) => VarianceGrowth::Linear,
                    Some(2) => VarianceGrowth::LogSquared,
                    Some(3) => VarianceGrowth::Converges,
                    _ => VarianceGrowth::EventuallyZero,
                };
                class = class.max(outcome_class);
            }
            Some(class)
        }
    }
}

fn lex_cmp(a: &[f64; 4], b: &[f64; 4]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y).expect("tuples are finite") {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}
