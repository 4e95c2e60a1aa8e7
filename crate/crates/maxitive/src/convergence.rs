//! Convergence diagnostics for trajectories under a maxitive measure.
//!
//! Convergence in measure asks that `P(|Z_n - x| >= eps) -> 0` for every
//! positive `eps`; almost-everywhere convergence asks for pointwise
//! convergence away from a null event. On a finite space the null sets are
//! exactly the sets of zero-weight outcomes, so both notions are judged at
//! the positively weighted outcomes only.
//!
//! Verdicts are three-valued. Closed-form limits (available for the
//! affine-basis generator family) decide `Holds`/`Fails` exactly; otherwise
//! numeric criteria over the final stretch of the horizon are used, and
//! anything they cannot settle is reported as `Undecided` rather than
//! guessed.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sequence::{Limit, SequenceView};
use crate::space::{Event, Variable};

/// A measure value below this counts as "decayed to zero".
pub const DECAY_TOL: f64 = 1e-9;

/// Values whose spread over the final window stays below this count as
/// "stabilized".
pub const CAUCHY_TOL: f64 = 1e-6;

/// Three-valued outcome of a finite-horizon check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Decision {
    Holds,
    Fails,
    Undecided,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConvergenceMode {
    InMeasure,
    AlmostEverywhere,
}

/// Evidence attached to a `Fails` verdict.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub outcome: String,
    pub step: usize,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceVerdict {
    pub mode: ConvergenceMode,
    pub target: f64,
    pub decision: Decision,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub horizon: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_grid: Option<Vec<f64>>,
    /// Whether the decision came from closed-form limits.
    pub analytic: bool,
    pub note: String,
}

/// The event `|X - target| >= eps`.
pub fn deviation_event(x: &Variable, target: f64, eps: f64) -> Result<Event> {
    check_target(target)?;
    check_eps(eps)?;
    let mask = x.values().iter().map(|&v| (v - target).abs() >= eps).collect();
    Event::from_mask(x.space(), mask)
}

/// `P(|Z_n - target| >= eps)` for `n = 1..=horizon`.
pub fn deviation_measures(
    view: &SequenceView,
    target: f64,
    eps: f64,
    horizon: usize,
) -> Result<Vec<f64>> {
    check_horizon(horizon, 1)?;
    let dist = view.scenario().distribution();
    view.path(horizon)?
        .iter()
        .map(|x| dist.measure(&deviation_event(x, target, eps)?))
        .collect()
}

/// Running suprema from the tail: `out[m] = max(values[m..])`.
pub fn tail_sup_sequence(values: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; values.len()];
    let mut sup = f64::NEG_INFINITY;
    for (i, &v) in values.iter().enumerate().rev() {
        if v > sup {
            sup = v;
        }
        out[i] = sup;
    }
    out
}

/// What the tail suprema of the deviation measures did within the horizon.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum TailVerdict {
    /// Every deviation measure from step `m` on was zero.
    VanishesAt { m: usize },
    /// The last tail supremum was still this large.
    Undecided { final_value: f64 },
}

/// Tail suprema versus the measures of the tail event unions.
///
/// For each cutoff `m` the report carries `sup_{n >= m} P(B_n)` next to
/// `P(union of B_n for n in m..=horizon)`, both truncated at the horizon.
/// Maxitivity makes the union measure the maximum of the member measures,
/// so the second can never exceed the first; `inequality_ok` records that
/// this held exactly, computed through two separate routes (event unions
/// versus scalar maxima).
#[derive(Clone, Debug, Serialize)]
pub struct BorelCantelliReport {
    pub horizon: usize,
    pub eps: f64,
    pub step_measures: Vec<f64>,
    pub tail_sups: Vec<f64>,
    pub limsup_measures: Vec<f64>,
    pub inequality_ok: bool,
    pub tail_verdict: TailVerdict,
}

pub fn borel_cantelli_check(
    view: &SequenceView,
    target: f64,
    eps: f64,
    horizon: usize,
) -> Result<BorelCantelliReport> {
    check_horizon(horizon, 2)?;
    let dist = view.scenario().distribution();
    let path = view.path(horizon)?;

    let mut step_measures = Vec::with_capacity(horizon);
    let mut events = Vec::with_capacity(horizon);
    for x in &path {
        let event = deviation_event(x, target, eps)?;
        step_measures.push(dist.measure(&event)?);
        events.push(event);
    }

    let tail_sups = tail_sup_sequence(&step_measures);

    // Suffix unions in one reverse pass.
    let mut limsup_measures = vec![0.0; horizon];
    let mut union = Event::empty(view.scenario().space());
    for m in (0..horizon).rev() {
        union = union.union(&events[m])?;
        limsup_measures[m] = dist.measure(&union)?;
    }

    let inequality_ok = limsup_measures.iter().zip(&tail_sups).all(|(l, t)| l <= t);
    let tail_verdict = match tail_sups.iter().position(|&t| t == 0.0) {
        Some(i) => TailVerdict::VanishesAt { m: i + 1 },
        None => TailVerdict::Undecided { final_value: tail_sups[horizon - 1] },
    };

    Ok(BorelCantelliReport {
        horizon,
        eps,
        step_measures,
        tail_sups,
        limsup_measures,
        inequality_ok,
        tail_verdict,
    })
}

/// Does the trajectory converge to `target` in possibility measure?
pub fn converges_in_measure(
    view: &SequenceView,
    target: f64,
    eps_grid: &[f64],
    horizon: usize,
) -> Result<ConvergenceVerdict> {
    check_target(target)?;
    check_horizon(horizon, 1)?;
    crate::scenario::validate_eps_grid(eps_grid)?;
    if let Some(v) = analytic_verdict(view, target, ConvergenceMode::InMeasure, horizon, Some(eps_grid))? {
        return Ok(v);
    }
    let path = view.path(horizon)?;
    numeric_in_measure(view, &path, target, eps_grid, horizon)
}

/// Does the trajectory converge to `target` almost everywhere?
pub fn converges_ae(view: &SequenceView, target: f64, horizon: usize) -> Result<ConvergenceVerdict> {
    check_target(target)?;
    check_horizon(horizon, 1)?;
    if let Some(v) = analytic_verdict(view, target, ConvergenceMode::AlmostEverywhere, horizon, None)? {
        return Ok(v);
    }
    let path = view.path(horizon)?;
    numeric_ae(view, &path, target, horizon)
}

/// Both verdicts side by side, with the one-way implication checked.
///
/// Convergence in measure entails almost-everywhere convergence here, so a
/// run that holds in measure but fails almost everywhere would expose a bug;
/// `consistent` is false exactly in that case.
#[derive(Clone, Debug, Serialize)]
pub struct ImplicationReport {
    pub in_measure: ConvergenceVerdict,
    pub almost_everywhere: ConvergenceVerdict,
    pub consistent: bool,
}

pub fn in_measure_implies_ae(
    view: &SequenceView,
    target: f64,
    eps_grid: &[f64],
    horizon: usize,
) -> Result<ImplicationReport> {
    let in_measure = converges_in_measure(view, target, eps_grid, horizon)?;
    let almost_everywhere = converges_ae(view, target, horizon)?;
    let consistent = !(in_measure.decision == Decision::Holds
        && almost_everywhere.decision == Decision::Fails);
    Ok(ImplicationReport { in_measure, almost_everywhere, consistent })
}

// ---------------------------------------------------------------------------
// Routes
// ---------------------------------------------------------------------------

fn check_target(target: f64) -> Result<()> {
    if !target.is_finite() {
        return Err(Error::NonFinite { context: "convergence target", label: String::new() });
    }
    Ok(())
}

fn check_eps(eps: f64) -> Result<()> {
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::NonPositive { name: "epsilon", value: eps });
    }
    Ok(())
}

fn check_horizon(horizon: usize, min: usize) -> Result<()> {
    if horizon < min {
        return Err(Error::HorizonTooSmall { min, got: horizon });
    }
    Ok(())
}

/// First index of the final window: the last tenth of the horizon, at least
/// one step.
fn window_start(horizon: usize) -> usize {
    horizon - (horizon / 10).max(1)
}

fn describe(limit: Limit) -> String {
    match limit {
        Limit::Finite(v) => format!("{v}"),
        Limit::PlusInfinity => "+infinity".into(),
        Limit::MinusInfinity => "-infinity".into(),
    }
}

/// Closed-form route: available when every positively weighted outcome has a
/// derivable limit. Limits are compared to the target exactly.
fn analytic_verdict(
    view: &SequenceView,
    target: f64,
    mode: ConvergenceMode,
    horizon: usize,
    eps_grid: Option<&[f64]>,
) -> Result<Option<ConvergenceVerdict>> {
    let dist = view.scenario().distribution();
    let space = view.scenario().space();
    let mut limits = Vec::new();
    for i in 0..space.len() {
        if dist.weights()[i] > 0.0 {
            match view.analytic_limit(i) {
                Some(limit) => limits.push((i, limit)),
                None => return Ok(None),
            }
        }
    }
    for &(i, limit) in &limits {
        if limit != Limit::Finite(target) {
            let value = view.path(horizon)?[horizon - 1].value(i);
            let label = space.label(i).to_owned();
            let note = format!(
                "closed-form limit at outcome {label:?} is {} (target {target})",
                describe(limit)
            );
            return Ok(Some(ConvergenceVerdict {
                mode,
                target,
                decision: Decision::Fails,
                witness: Some(Witness { outcome: label, step: horizon, value }),
                horizon,
                eps_grid: eps_grid.map(<[f64]>::to_vec),
                analytic: true,
                note,
            }));
        }
    }
    Ok(Some(ConvergenceVerdict {
        mode,
        target,
        decision: Decision::Holds,
        witness: None,
        horizon,
        eps_grid: eps_grid.map(<[f64]>::to_vec),
        analytic: true,
        note: "closed-form limit equals the target at every positively weighted outcome".into(),
    }))
}

fn numeric_in_measure(
    view: &SequenceView,
    path: &[Variable],
    target: f64,
    eps_grid: &[f64],
    horizon: usize,
) -> Result<ConvergenceVerdict> {
    let dist = view.scenario().distribution();
    let space = view.scenario().space();
    let start = window_start(horizon);

    let mut decayed = true;
    for &eps in eps_grid {
        for x in &path[start..] {
            if dist.measure(&deviation_event(x, target, eps)?)? >= DECAY_TOL {
                decayed = false;
            }
        }
    }
    if decayed {
        return Ok(ConvergenceVerdict {
            mode: ConvergenceMode::InMeasure,
            target,
            decision: Decision::Holds,
            witness: None,
            horizon,
            eps_grid: Some(eps_grid.to_vec()),
            analytic: false,
            note: format!(
                "deviation measures stay below {DECAY_TOL:e} over the final window for every epsilon in the grid"
            ),
        });
    }

    // A failure needs strong evidence: some positively weighted outcome has
    // stabilized (window spread within tolerance) at a distance of at least
    // one grid epsilon from the target. A sequence that is merely converging
    // slowly stays Undecided instead.
    for i in 0..space.len() {
        if dist.weights()[i] == 0.0 {
            continue;
        }
        let window: Vec<f64> = path[start..].iter().map(|x| x.value(i)).collect();
        let spread = window_spread(&window);
        let persistent = eps_grid
            .iter()
            .any(|&eps| window.iter().all(|&v| (v - target).abs() >= eps));
        if spread <= CAUCHY_TOL && persistent {
            let label = space.label(i).to_owned();
            return Ok(ConvergenceVerdict {
                mode: ConvergenceMode::InMeasure,
                target,
                decision: Decision::Fails,
                witness: Some(Witness {
                    outcome: label.clone(),
                    step: horizon,
                    value: *window.last().expect("window is nonempty"),
                }),
                horizon,
                eps_grid: Some(eps_grid.to_vec()),
                analytic: false,
                note: format!(
                    "outcome {label:?} stabilized at least one grid epsilon away from the target over the final window"
                ),
            });
        }
    }

    Ok(ConvergenceVerdict {
        mode: ConvergenceMode::InMeasure,
        target,
        decision: Decision::Undecided,
        witness: None,
        horizon,
        eps_grid: Some(eps_grid.to_vec()),
        analytic: false,
        note: "deviation measures neither decayed below tolerance nor stabilized away from the target within the horizon".into(),
    })
}

fn numeric_ae(
    view: &SequenceView,
    path: &[Variable],
    target: f64,
    horizon: usize,
) -> Result<ConvergenceVerdict> {
    let dist = view.scenario().distribution();
    let space = view.scenario().space();
    let start = window_start(horizon);

    let mut all_converged = true;
    for i in 0..space.len() {
        if dist.weights()[i] == 0.0 {
            continue;
        }
        let window: Vec<f64> = path[start..].iter().map(|x| x.value(i)).collect();
        let spread = window_spread(&window);
        let last = *window.last().expect("window is nonempty");
        let gap = (last - target).abs();
        if spread <= CAUCHY_TOL && gap <= CAUCHY_TOL {
            continue;
        }
        if spread <= CAUCHY_TOL && gap > CAUCHY_TOL + spread {
            let label = space.label(i).to_owned();
            return Ok(ConvergenceVerdict {
                mode: ConvergenceMode::AlmostEverywhere,
                target,
                decision: Decision::Fails,
                witness: Some(Witness { outcome: label.clone(), step: horizon, value: last }),
                horizon,
                eps_grid: None,
                analytic: false,
                note: format!("outcome {label:?} stabilized away from the target"),
            });
        }
        all_converged = false;
    }

    if all_converged {
        Ok(ConvergenceVerdict {
            mode: ConvergenceMode::AlmostEverywhere,
            target,
            decision: Decision::Holds,
            witness: None,
            horizon,
            eps_grid: None,
            analytic: false,
            note: format!(
                "every positively weighted outcome stabilized within {CAUCHY_TOL:e} of the target"
            ),
        })
    } else {
        Ok(ConvergenceVerdict {
            mode: ConvergenceMode::AlmostEverywhere,
            target,
            decision: Decision::Undecided,
            witness: None,
            horizon,
            eps_grid: None,
            analytic: false,
            note: "some positively weighted outcome had not stabilized within the horizon".into(),
        })
    }
}

fn window_spread(window: &[f64]) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in window {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    hi - lo
}
