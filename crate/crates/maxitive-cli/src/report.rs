//! The report document: one self-describing structure per invocation,
//! serialized verbatim for `--format json` and flattened by the renderers.

use maxitive::convergence::{ConvergenceVerdict, TailVerdict};
use maxitive::lln::{HypothesisReport, LlnReport};
use serde::Serialize;

#[derive(Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Serialize)]
pub struct ScenarioInfo {
    pub path: String,
    /// Hex digest of the scenario file bytes.
    pub sha256: String,
}

#[derive(Serialize)]
pub struct ReportDocument {
    pub tool: ToolInfo,
    pub command: &'static str,
    /// The invocation, echoed argument by argument.
    pub argv: Vec<String>,
    pub scenario: ScenarioInfo,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eval: Option<EvalSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chebyshev: Option<ChebyshevSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lln: Option<LlnSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub converge: Option<ConvergeSection>,
    /// Mirrors the exit code: true exactly when the run exits 0.
    pub ok: bool,
}

#[derive(Serialize)]
pub struct EvalSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<EvalStep>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub event: Option<EvalEvent>,
}

#[derive(Serialize)]
pub struct EvalStep {
    pub k: usize,
    pub e_sup: f64,
    pub var_sup: f64,
}

#[derive(Serialize)]
pub struct EvalEvent {
    pub members: Vec<String>,
    pub measure: f64,
}

#[derive(Serialize)]
pub struct ChebyshevRow {
    pub r: f64,
    pub measured: f64,
    pub bound: f64,
    /// `bound - measured`.
    pub margin: f64,
}

#[derive(Serialize)]
pub struct ChebyshevSection {
    pub k: usize,
    pub e_sup: f64,
    pub var_sup: f64,
    pub rows: Vec<ChebyshevRow>,
    /// Rows whose margin fell below the strict tolerance.
    pub violations: usize,
}

#[derive(Serialize)]
pub struct LlnSection {
    /// True when the run stopped at the hypothesis gate.
    pub gated: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypothesis: Option<HypothesisReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<LlnReport>,
}

#[derive(Serialize)]
pub struct ConvergeRow {
    pub n: usize,
    pub measured: f64,
    pub tail_sup: f64,
    pub limsup_measure: f64,
}

#[derive(Serialize)]
pub struct ConvergeEps {
    pub eps: f64,
    pub inequality_ok: bool,
    pub tail_verdict: TailVerdict,
    pub rows: Vec<ConvergeRow>,
}

#[derive(Serialize)]
pub struct ConvergeSection {
    pub target: f64,
    pub horizon: usize,
    pub per_eps: Vec<ConvergeEps>,
    pub in_measure: ConvergenceVerdict,
    pub almost_everywhere: ConvergenceVerdict,
    /// False would mean convergence in measure without almost-everywhere
    /// convergence, which the calculus rules out.
    pub consistent: bool,
}
