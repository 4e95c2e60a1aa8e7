//! Scenario documents: a sample space, a possibility distribution, a rule
//! generating the variable sequence, and optional run / hypothesis settings.
//!
//! Documents are TOML; the README spells out the full schema. Three
//! generator families are supported:
//!
//! * `explicit` — a finite table of rows, one per step;
//! * `affine-basis` — per outcome, `alpha*k + beta*sqrt(k) + gamma*ln(k+1) + eta`,
//!   the closed-form family for which limits and growth classes are derived
//!   analytically elsewhere in the crate;
//! * `seeded-uniform` — per outcome, `base + amp * unit_noise(seed, k, i)`,
//!   a reproducible bounded noise sequence (see [`unit_noise`] for the exact
//!   recipe).

use std::collections::BTreeMap;
use std::fmt::Display;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lln::{Psi, Theorem};
use crate::measure::PossibilityDistribution;
use crate::space::{SampleSpace, Variable};

pub const DEFAULT_HORIZON: usize = 1000;
pub const DEFAULT_EPS_GRID: [f64; 3] = [0.1, 0.05, 0.01];

/// Deterministic noise in `[-1, 1)` for a `(seed, step, outcome)` triple.
///
/// Recipe, fixed for reproducibility across versions and platforms: starting
/// from `seed`, add `k * 0x9E3779B97F4A7C15` and `outcome * 0xBF58476D1CE4E5B9`
/// (wrapping), run the SplitMix64 finalizer
/// (`z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27; z *= 0x94D049BB133111EB; z ^= z >> 31`),
/// take the top 53 bits as a fraction in `[0, 1)`, and map linearly to
/// `[-1, 1)` via `2u - 1`.
pub fn unit_noise(seed: u64, k: u64, outcome: u64) -> f64 {
    let mut z = seed
        .wrapping_add(k.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(outcome.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    let unit = (z >> 11) as f64 / (1u64 << 53) as f64;
    2.0 * unit - 1.0
}

/// Per-outcome coefficients of the affine-basis family.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BasisCoefficients {
    /// Coefficient of `k`.
    pub alpha: f64,
    /// Coefficient of `sqrt(k)`.
    pub beta: f64,
    /// Coefficient of `ln(k + 1)`.
    pub gamma: f64,
    /// Constant offset.
    pub eta: f64,
}

/// Rule producing the variable at each step `k >= 1`.
#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    /// `table[k - 1][i]` is the value of step `k` at outcome `i`.
    Explicit { table: Vec<Vec<f64>> },
    /// One coefficient block per outcome, in canonical order.
    AffineBasis { coefficients: Vec<BasisCoefficients> },
    /// `base[i] + amp[i] * unit_noise(seed, k, i)`.
    SeededUniform { seed: u64, base: Vec<f64>, amp: Vec<f64> },
}

impl Generator {
    pub fn family(&self) -> &'static str {
        match self {
            Generator::Explicit { .. } => "explicit",
            Generator::AffineBasis { .. } => "affine-basis",
            Generator::SeededUniform { .. } => "seeded-uniform",
        }
    }

    /// Largest step the generator can produce (`None` when unbounded).
    pub fn max_step(&self) -> Option<usize> {
        match self {
            Generator::Explicit { table } => Some(table.len()),
            _ => None,
        }
    }

    fn validate(&self, width: usize) -> Result<()> {
        match self {
            Generator::Explicit { table } => {
                if table.is_empty() {
                    return Err(Error::EmptyInput("generator table"));
                }
                for row in table {
                    if row.len() != width {
                        return Err(Error::LengthMismatch { expected: width, got: row.len() });
                    }
                    if row.iter().any(|v| !v.is_finite()) {
                        return Err(Error::NonFinite { context: "generator table", label: String::new() });
                    }
                }
            }
            Generator::AffineBasis { coefficients } => {
                if coefficients.len() != width {
                    return Err(Error::LengthMismatch { expected: width, got: coefficients.len() });
                }
                for c in coefficients {
                    for v in [c.alpha, c.beta, c.gamma, c.eta] {
                        if !v.is_finite() {
                            return Err(Error::NonFinite { context: "coefficients", label: String::new() });
                        }
                    }
                }
            }
            Generator::SeededUniform { base, amp, .. } => {
                for (name, vs) in [("base", base), ("amp", amp)] {
                    if vs.len() != width {
                        return Err(Error::LengthMismatch { expected: width, got: vs.len() });
                    }
                    if vs.iter().any(|v| !v.is_finite()) {
                        return Err(Error::NonFinite { context: "seeded-uniform", label: name.to_owned() });
                    }
                }
            }
        }
        Ok(())
    }

    pub(crate) fn values(&self, k: usize, width: usize) -> Result<Vec<f64>> {
        if k == 0 {
            return Err(Error::ZeroIndex);
        }
        match self {
            Generator::Explicit { table } => table
                .get(k - 1)
                .cloned()
                .ok_or(Error::TableExhausted { index: k, rows: table.len() }),
            Generator::AffineBasis { coefficients } => {
                let kf = k as f64;
                Ok(coefficients
                    .iter()
                    .map(|c| c.alpha * kf + c.beta * kf.sqrt() + c.gamma * (kf + 1.0).ln() + c.eta)
                    .collect())
            }
            Generator::SeededUniform { seed, base, amp } => Ok((0..width)
                .map(|i| base[i] + amp[i] * unit_noise(*seed, k as u64, i as u64))
                .collect()),
        }
    }
}

/// Default horizon and epsilon grid for runs over this scenario.
#[derive(Clone, Debug, PartialEq)]
pub struct RunSettings {
    pub horizon: usize,
    pub eps_grid: Vec<f64>,
}

impl Default for RunSettings {
    fn default() -> Self {
        Self { horizon: DEFAULT_HORIZON, eps_grid: DEFAULT_EPS_GRID.to_vec() }
    }
}

impl RunSettings {
    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::HorizonTooSmall { min: 1, got: 0 });
        }
        validate_eps_grid(&self.eps_grid)
    }
}

pub fn validate_eps_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::EmptyInput("epsilon grid"));
    }
    for &eps in grid {
        if !eps.is_finite() || eps <= 0.0 {
            return Err(Error::NonPositive { name: "epsilon", value: eps });
        }
    }
    Ok(())
}

/// Hypothesis-check settings carried by a scenario's `[lln]` section.
#[derive(Clone, Debug, PartialEq)]
pub struct LlnSettings {
    pub theorem: Theorem,
    pub psi: Option<Psi>,
    pub delta: Option<f64>,
    /// Explicit constant: present means strict checking against it.
    pub constant: Option<f64>,
    /// Check the per-step sufficient condition as well.
    pub per_k: bool,
}

/// A parsed, validated scenario document.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    space: SampleSpace,
    distribution: PossibilityDistribution,
    generator: Generator,
    lln: Option<LlnSettings>,
    run: RunSettings,
}

impl Scenario {
    pub fn new(distribution: PossibilityDistribution, generator: Generator) -> Result<Self> {
        let space = distribution.space().clone();
        generator.validate(space.len())?;
        Ok(Self { space, distribution, generator, lln: None, run: RunSettings::default() })
    }

    pub fn with_lln(mut self, lln: LlnSettings) -> Self {
        self.lln = Some(lln);
        self
    }

    pub fn with_run(mut self, run: RunSettings) -> Result<Self> {
        run.validate()?;
        self.run = run;
        Ok(self)
    }

    /// Copy with the noise seed replaced; the flag reports whether the
    /// generator family actually uses one.
    pub fn with_seed(&self, seed: u64) -> (Self, bool) {
        let mut out = self.clone();
        match &mut out.generator {
            Generator::SeededUniform { seed: s, .. } => {
                *s = seed;
                (out, true)
            }
            _ => (out, false),
        }
    }

    pub fn space(&self) -> &SampleSpace {
        &self.space
    }

    pub fn distribution(&self) -> &PossibilityDistribution {
        &self.distribution
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn lln(&self) -> Option<&LlnSettings> {
        self.lln.as_ref()
    }

    pub fn run(&self) -> &RunSettings {
        &self.run
    }

    /// The variable at step `k >= 1`.
    pub fn variable(&self, k: usize) -> Result<Variable> {
        let values = self.generator.values(k, self.space.len())?;
        Variable::new(&self.space, values)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        parse_scenario(text)
    }

    pub fn to_toml_string(&self) -> String {
        serialize_scenario(self)
    }
}

// ---------------------------------------------------------------------------
// Document schema
// ---------------------------------------------------------------------------

fn perr(path: &str, msg: impl Display) -> Error {
    Error::Parse(format!("{path}: {msg}"))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    space: RawSpace,
    distribution: RawDistribution,
    generator: RawGenerator,
    #[serde(skip_serializing_if = "Option::is_none")]
    lln: Option<RawLln>,
    #[serde(skip_serializing_if = "Option::is_none")]
    run: Option<RawRun>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpace {
    outcomes: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDistribution {
    weights: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    renormalize: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGenerator {
    family: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    coefficients: Option<BTreeMap<String, BasisCoefficients>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    table: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    base: Option<BTreeMap<String, f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    amp: Option<BTreeMap<String, f64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLln {
    theorem: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    psi: Option<RawPsi>,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta: Option<f64>,
    #[serde(rename = "C", skip_serializing_if = "Option::is_none")]
    constant: Option<f64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    per_k: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPsi {
    family: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    scale: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    values: Option<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    #[serde(skip_serializing_if = "Option::is_none")]
    horizon: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eps_grid: Option<Vec<f64>>,
}

/// Resolves a per-label map against the space, with `missing` filling gaps
/// (`None` means every outcome must be present).
fn resolve_map(
    path: &str,
    space: &SampleSpace,
    map: &BTreeMap<String, f64>,
    missing: Option<f64>,
) -> Result<Vec<f64>> {
    for label in map.keys() {
        if space.index_of(label).is_none() {
            return Err(perr(path, format!("unknown outcome {label:?}")));
        }
    }
    space
        .labels()
        .iter()
        .map(|label| match (map.get(label), missing) {
            (Some(&v), _) => Ok(v),
            (None, Some(fill)) => Ok(fill),
            (None, None) => Err(perr(path, format!("missing entry for outcome {label:?}"))),
        })
        .collect()
}

fn forbid<T>(field: Option<&T>, path: &str, reason: &str) -> Result<()> {
    if field.is_some() {
        return Err(perr(path, reason));
    }
    Ok(())
}

fn parse_scenario(text: &str) -> Result<Scenario> {
    let raw: RawScenario = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;

    let space = SampleSpace::new(raw.space.outcomes.clone())
        .map_err(|e| perr("space.outcomes", e))?;

    let weights = resolve_map("distribution.weights", &space, &raw.distribution.weights, None)?;
    let distribution = if raw.distribution.renormalize {
        PossibilityDistribution::renormalized(&space, weights)
    } else {
        PossibilityDistribution::new(&space, weights)
    }
    .map_err(|e| perr("distribution.weights", e))?;

    let generator = parse_generator(&space, &raw.generator)?;
    generator.validate(space.len()).map_err(|e| perr("generator", e))?;

    let lln = raw.lln.as_ref().map(|l| parse_lln(l)).transpose()?;

    let mut run = RunSettings::default();
    if let Some(r) = &raw.run {
        if let Some(h) = r.horizon {
            run.horizon = h;
        }
        if let Some(grid) = &r.eps_grid {
            run.eps_grid = grid.clone();
        }
    }
    run.validate().map_err(|e| perr("run", e))?;

    let mut scenario = Scenario::new(distribution, generator).map_err(|e| perr("generator", e))?;
    scenario.lln = lln;
    scenario.run = run;
    Ok(scenario)
}

fn parse_generator(space: &SampleSpace, raw: &RawGenerator) -> Result<Generator> {
    match raw.family.as_str() {
        "explicit" => {
            forbid(raw.coefficients.as_ref(), "generator.coefficients", "not used when family = \"explicit\"")?;
            forbid(raw.seed.as_ref(), "generator.seed", "not used when family = \"explicit\"")?;
            forbid(raw.base.as_ref(), "generator.base", "not used when family = \"explicit\"")?;
            forbid(raw.amp.as_ref(), "generator.amp", "not used when family = \"explicit\"")?;
            let table = raw
                .table
                .clone()
                .ok_or_else(|| perr("generator.table", "required when family = \"explicit\""))?;
            Ok(Generator::Explicit { table })
        }
        "affine-basis" => {
            forbid(raw.table.as_ref(), "generator.table", "not used when family = \"affine-basis\"")?;
            forbid(raw.seed.as_ref(), "generator.seed", "not used when family = \"affine-basis\"")?;
            forbid(raw.base.as_ref(), "generator.base", "not used when family = \"affine-basis\"")?;
            forbid(raw.amp.as_ref(), "generator.amp", "not used when family = \"affine-basis\"")?;
            let blocks = raw.coefficients.as_ref().ok_or_else(|| {
                perr("generator.coefficients", "required when family = \"affine-basis\"")
            })?;
            for label in blocks.keys() {
                if space.index_of(label).is_none() {
                    return Err(perr("generator.coefficients", format!("unknown outcome {label:?}")));
                }
            }
            let coefficients = space
                .labels()
                .iter()
                .map(|label| blocks.get(label).copied().unwrap_or_default())
                .collect();
            Ok(Generator::AffineBasis { coefficients })
        }
        "seeded-uniform" => {
            forbid(raw.table.as_ref(), "generator.table", "not used when family = \"seeded-uniform\"")?;
            forbid(raw.coefficients.as_ref(), "generator.coefficients", "not used when family = \"seeded-uniform\"")?;
            let seed = raw
                .seed
                .ok_or_else(|| perr("generator.seed", "required when family = \"seeded-uniform\""))?;
            let base_map = raw
                .base
                .as_ref()
                .ok_or_else(|| perr("generator.base", "required when family = \"seeded-uniform\""))?;
            let amp_map = raw
                .amp
                .as_ref()
                .ok_or_else(|| perr("generator.amp", "required when family = \"seeded-uniform\""))?;
            let base = resolve_map("generator.base", space, base_map, Some(0.0))?;
            let amp = resolve_map("generator.amp", space, amp_map, Some(0.0))?;
            Ok(Generator::SeededUniform { seed, base, amp })
        }
        other => Err(perr(
            "generator.family",
            format!("unknown family {other:?} (expected \"explicit\", \"affine-basis\", or \"seeded-uniform\")"),
        )),
    }
}

fn parse_lln(raw: &RawLln) -> Result<LlnSettings> {
    let theorem = Theorem::from_wire(&raw.theorem).ok_or_else(|| {
        perr("lln.theorem", format!("expected \"3.3\", \"3.4\", or \"3.5\", got {:?}", raw.theorem))
    })?;
    match theorem {
        Theorem::PsiGrowth => {
            forbid(raw.delta.as_ref(), "lln.delta", "not used by theorem \"3.3\"")?;
            let psi_raw = raw
                .psi
                .as_ref()
                .ok_or_else(|| perr("lln.psi", "required when lln.theorem = \"3.3\""))?;
            let psi = parse_psi(psi_raw)?;
            if let Some(c) = raw.constant {
                if !c.is_finite() || c <= 0.0 {
                    return Err(perr("lln.C", format!("must be positive, got {c}")));
                }
            }
            Ok(LlnSettings { theorem, psi: Some(psi), delta: None, constant: raw.constant, per_k: raw.per_k })
        }
        Theorem::ScaledMaxBound | Theorem::SummableVariance => {
            forbid(raw.psi.as_ref(), "lln.psi", "only used by theorem \"3.3\"")?;
            forbid(raw.constant.as_ref(), "lln.C", "only used by theorem \"3.3\" (the constant is inferred here)")?;
            if raw.per_k {
                return Err(perr("lln.per_k", "only used by theorem \"3.3\""));
            }
            let delta = raw
                .delta
                .ok_or_else(|| perr("lln.delta", format!("required when lln.theorem = {:?}", theorem.wire_name())))?;
            if !delta.is_finite() || delta <= 0.0 || delta >= 2.0 {
                return Err(perr("lln.delta", format!("must lie in (0, 2), got {delta}")));
            }
            Ok(LlnSettings { theorem, psi: None, delta: Some(delta), constant: None, per_k: false })
        }
    }
}

fn parse_psi(raw: &RawPsi) -> Result<Psi> {
    match raw.family.as_str() {
        "power" | "log-power" => {
            forbid(raw.values.as_ref(), "lln.psi.values", "only used when family = \"table\"")?;
            let delta = raw
                .delta
                .ok_or_else(|| perr("lln.psi.delta", "required for power and log-power"))?;
            let scale = raw.scale.unwrap_or(1.0);
            let make = if raw.family == "power" { Psi::power } else { Psi::log_power };
            make(delta, scale).map_err(|e| perr("lln.psi", e))
        }
        "table" => {
            forbid(raw.delta.as_ref(), "lln.psi.delta", "not used when family = \"table\"")?;
            forbid(raw.scale.as_ref(), "lln.psi.scale", "not used when family = \"table\"")?;
            let values = raw
                .values
                .clone()
                .ok_or_else(|| perr("lln.psi.values", "required when family = \"table\""))?;
            Psi::table(values).map_err(|e| perr("lln.psi.values", e))
        }
        other => Err(perr(
            "lln.psi.family",
            format!("unknown family {other:?} (expected \"power\", \"log-power\", or \"table\")"),
        )),
    }
}

fn serialize_scenario(scenario: &Scenario) -> String {
    let space = scenario.space();
    let weights = space
        .labels()
        .iter()
        .cloned()
        .zip(scenario.distribution.weights().iter().copied())
        .collect();
    let generator = match &scenario.generator {
        Generator::Explicit { table } => RawGenerator {
            family: "explicit".into(),
            coefficients: None,
            table: Some(table.clone()),
            seed: None,
            base: None,
            amp: None,
        },
        Generator::AffineBasis { coefficients } => RawGenerator {
            family: "affine-basis".into(),
            coefficients: Some(
                space.labels().iter().cloned().zip(coefficients.iter().copied()).collect(),
            ),
            table: None,
            seed: None,
            base: None,
            amp: None,
        },
        Generator::SeededUniform { seed, base, amp } => RawGenerator {
            family: "seeded-uniform".into(),
            coefficients: None,
            table: None,
            seed: Some(*seed),
            base: Some(space.labels().iter().cloned().zip(base.iter().copied()).collect()),
            amp: Some(space.labels().iter().cloned().zip(amp.iter().copied()).collect()),
        },
    };
    let lln = scenario.lln.as_ref().map(|l| RawLln {
        theorem: l.theorem.wire_name().to_owned(),
        psi: l.psi.as_ref().map(|p| match p {
            Psi::Power { delta, scale } => RawPsi {
                family: "power".into(),
                delta: Some(*delta),
                scale: Some(*scale),
                values: None,
            },
            Psi::LogPower { delta, scale } => RawPsi {
                family: "log-power".into(),
                delta: Some(*delta),
                scale: Some(*scale),
                values: None,
            },
            Psi::Table { values } => RawPsi {
                family: "table".into(),
                delta: None,
                scale: None,
                values: Some(values.clone()),
            },
        }),
        delta: l.delta,
        constant: l.constant,
        per_k: l.per_k,
    });
    let raw = RawScenario {
        space: RawSpace { outcomes: space.labels().to_vec() },
        distribution: RawDistribution { weights, renormalize: false },
        generator,
        lln,
        run: Some(RawRun {
            horizon: Some(scenario.run.horizon),
            eps_grid: Some(scenario.run.eps_grid.clone()),
        }),
    };
    toml::to_string(&raw).expect("scenario serialization cannot fail")
}
