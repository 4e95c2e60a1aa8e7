//! Command-line front end: evaluate moments and event measures, sweep the
//! deviation bound over a radius grid, run the law configured in a scenario
//! file, and emit convergence diagnostics — as a human table, JSON, or CSV.
//!
//! Exit codes: 0 on success, 1 when a verification fails (a broken bound, a
//! failed verdict, or an unsatisfied hypothesis without `--force`), 2 on
//! usage or parse errors.

mod render;
mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use chrono::{SecondsFormat, Utc};
use clap::{Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use maxitive::convergence::{
    borel_cantelli_check, converges_ae, converges_in_measure, BorelCantelliReport, Decision,
};
use maxitive::lln::{run_lln, Satisfied};
use maxitive::scenario::{validate_eps_grid, Scenario};
use maxitive::sequence::{SequenceKind, SequenceView};
use maxitive::{chebyshev_check, Event};

use crate::report::{
    ChebyshevRow, ChebyshevSection, ConvergeEps, ConvergeRow, ConvergeSection, EvalEvent,
    EvalSection, EvalStep, LlnSection, ReportDocument, ScenarioInfo, ToolInfo,
};

/// Slack before a negative margin counts as a broken bound.
const MARGIN_TOL: f64 = 1e-12;

#[derive(Parser)]
#[command(
    name = "maxitive",
    version,
    about = "Possibilistic moments, deviation bounds, and convergence reports"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Override the scenario's horizon.
    #[arg(long, global = true)]
    horizon: Option<usize>,

    /// Override the scenario's epsilon grid (comma separated).
    #[arg(long, global = true, value_delimiter = ',')]
    eps: Option<Vec<f64>>,

    /// Override the generator seed (seeded generators only).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Keep going when the hypothesis check does not come back Yes.
    #[arg(long, global = true)]
    force: bool,

    /// Omit the timestamp so identical runs emit identical bytes.
    #[arg(long, global = true)]
    no_timestamp: bool,

    /// Rows kept per table block before folding the middle (0 keeps all).
    #[arg(long, global = true, default_value_t = 40)]
    max_rows: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Moments of one step and/or the measure of an outcome set.
    Eval {
        scenario: PathBuf,
        /// Step index (1-based).
        #[arg(long)]
        k: Option<usize>,
        /// Comma-separated outcome labels; an empty string is the empty event.
        #[arg(long)]
        event: Option<String>,
    },
    /// Deviation measures of one step against their variance bound.
    Chebyshev {
        scenario: PathBuf,
        /// Step index (1-based).
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Deviation radii (comma separated, all positive).
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.5,1,3,10")]
        r: Vec<f64>,
    },
    /// Hypothesis check, bound curves, and convergence verdicts for the law
    /// configured in the scenario.
    Lln { scenario: PathBuf },
    /// Deviation-measure trajectories, tail suprema, and both convergence
    /// verdicts for the scaled running maximum.
    Converge { scenario: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    let (command, path) = match &cli.command {
        Command::Eval { scenario, .. } => ("eval", scenario),
        Command::Chebyshev { scenario, .. } => ("chebyshev", scenario),
        Command::Lln { scenario } => ("lln", scenario),
        Command::Converge { scenario } => ("converge", scenario),
    };
    let loaded = load(path, cli)?;

    let mut doc = ReportDocument {
        tool: ToolInfo { name: "maxitive", version: env!("CARGO_PKG_VERSION") },
        command,
        argv: std::env::args().collect(),
        scenario: loaded.info,
        timestamp: (!cli.no_timestamp)
            .then(|| Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true)),
        warnings: loaded.warnings,
        eval: None,
        chebyshev: None,
        lln: None,
        converge: None,
        ok: true,
    };

    match &cli.command {
        Command::Eval { k, event, .. } => {
            doc.eval = Some(eval_section(&loaded.scenario, *k, event.as_deref())?);
        }
        Command::Chebyshev { k, r, .. } => {
            let section = chebyshev_section(&loaded.scenario, *k, r)?;
            doc.ok = section.violations == 0;
            doc.chebyshev = Some(section);
        }
        Command::Lln { .. } => {
            let (section, ok, warnings) =
                lln_section(&loaded.scenario, loaded.horizon, &loaded.eps, cli.force)?;
            doc.ok = ok;
            doc.warnings.extend(warnings);
            doc.lln = Some(section);
        }
        Command::Converge { .. } => {
            let (section, ok, warnings) =
                converge_section(&loaded.scenario, loaded.horizon, &loaded.eps)?;
            doc.ok = ok;
            doc.warnings.extend(warnings);
            doc.converge = Some(section);
        }
    }

    let rendered = match cli.format {
        Format::Table => render::render_table(&doc, cli.max_rows),
        Format::Json => {
            let mut text = serde_json::to_string_pretty(&doc)?;
            text.push('\n');
            text
        }
        Format::Csv => render::render_csv(&doc),
    };
    print!("{rendered}");
    Ok(doc.ok)
}

struct Loaded {
    scenario: Scenario,
    info: ScenarioInfo,
    warnings: Vec<String>,
    horizon: usize,
    eps: Vec<f64>,
}

/// Read and parse the scenario, then apply flag overrides
/// (flag > file > default).
fn load(path: &Path, cli: &Cli) -> anyhow::Result<Loaded> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let sha256: String = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
    let text = String::from_utf8(bytes).context("scenario file is not UTF-8")?;
    let mut scenario = Scenario::from_toml_str(&text)
        .with_context(|| format!("parsing {}", path.display()))?;

    let mut warnings = Vec::new();
    if let Some(seed) = cli.seed {
        let (reseeded, applied) = scenario.with_seed(seed);
        if applied {
            scenario = reseeded;
        } else {
            warnings.push("--seed ignored: generator is not seeded".to_owned());
        }
    }
    let horizon = cli.horizon.unwrap_or(scenario.run().horizon);
    let eps = match &cli.eps {
        Some(grid) => {
            validate_eps_grid(grid)?;
            grid.clone()
        }
        None => scenario.run().eps_grid.clone(),
    };

    let info = ScenarioInfo { path: path.display().to_string(), sha256 };
    Ok(Loaded { scenario, info, warnings, horizon, eps })
}

fn eval_section(
    scenario: &Scenario,
    k: Option<usize>,
    event: Option<&str>,
) -> anyhow::Result<EvalSection> {
    if k.is_none() && event.is_none() {
        bail!("eval needs --k and/or --event");
    }
    let dist = scenario.distribution();
    let step = match k {
        Some(k) => {
            let x = scenario.variable(k)?;
            Some(EvalStep { k, e_sup: dist.expectation(&x)?, var_sup: dist.variance(&x)? })
        }
        None => None,
    };
    let event = match event {
        Some(spec) => {
            let members: Vec<String> = spec
                .split(',')
                .map(str::trim)
                .filter(|label| !label.is_empty())
                .map(String::from)
                .collect();
            let set = Event::new(scenario.space(), &members)?;
            Some(EvalEvent { members, measure: dist.measure(&set)? })
        }
        None => None,
    };
    Ok(EvalSection { step, event })
}

fn chebyshev_section(
    scenario: &Scenario,
    k: usize,
    r_grid: &[f64],
) -> anyhow::Result<ChebyshevSection> {
    if r_grid.is_empty() {
        bail!("chebyshev needs at least one radius");
    }
    let dist = scenario.distribution();
    let x = scenario.variable(k)?;
    let e_sup = dist.expectation(&x)?;
    let var_sup = dist.variance(&x)?;
    let mut rows = Vec::with_capacity(r_grid.len());
    let mut violations = 0;
    for &r in r_grid {
        let check = chebyshev_check(&x, dist, r)?;
        let margin = check.margin();
        if margin < -MARGIN_TOL {
            violations += 1;
        }
        rows.push(ChebyshevRow {
            r,
            measured: check.deviation_measure,
            bound: check.variance_bound,
            margin,
        });
    }
    Ok(ChebyshevSection { k, e_sup, var_sup, rows, violations })
}

fn lln_section(
    scenario: &Scenario,
    horizon: usize,
    eps: &[f64],
    force: bool,
) -> anyhow::Result<(LlnSection, bool, Vec<String>)> {
    let report = run_lln(scenario, horizon, eps, true)?;
    let satisfied = report.hypothesis.satisfied == Satisfied::Yes;
    let mut warnings = Vec::new();

    if !satisfied && !force {
        warnings.push(format!(
            "hypothesis came back {:?}; stopping before the curves (use --force to continue)",
            report.hypothesis.satisfied
        ));
        let section =
            LlnSection { gated: true, hypothesis: Some(report.hypothesis), report: None };
        return Ok((section, false, warnings));
    }
    if !satisfied {
        warnings.push(format!(
            "--force: continuing although the hypothesis came back {:?}",
            report.hypothesis.satisfied
        ));
    }
    for (label, verdict) in
        [("in-measure", &report.in_measure), ("almost-everywhere", &report.almost_everywhere)]
    {
        if verdict.decision == Decision::Undecided {
            warnings.push(format!("{label} verdict undecided at horizon {horizon}"));
        }
    }
    if let Some(mean) = &report.mean_convergence {
        if mean.decision == Decision::Undecided {
            warnings.push(format!("mean-convergence verdict undecided at horizon {horizon}"));
        }
    }
    if report.mean_remark.satisfied != Satisfied::Yes {
        warnings.push(
            "expectations are not a nonnegative linear fit; mean convergence not assessed"
                .to_owned(),
        );
    }

    let no_fails = report.in_measure.decision != Decision::Fails
        && report.almost_everywhere.decision != Decision::Fails
        && report.mean_convergence.as_ref().is_none_or(|v| v.decision != Decision::Fails);
    let ok = report.bound_violations == 0 && no_fails;
    let section = LlnSection { gated: false, hypothesis: None, report: Some(report) };
    Ok((section, ok, warnings))
}

fn converge_section(
    scenario: &Scenario,
    horizon: usize,
    eps: &[f64],
) -> anyhow::Result<(ConvergeSection, bool, Vec<String>)> {
    if eps.is_empty() {
        bail!("converge needs at least one epsilon");
    }
    let target = 0.0;

    // One Borel–Cantelli pass per epsilon; the passes are independent, so
    // they run on scoped threads and are reassembled in grid order.
    let results: Vec<maxitive::Result<BorelCantelliReport>> = std::thread::scope(|scope| {
        let handles: Vec<_> = eps
            .iter()
            .map(|&e| {
                scope.spawn(move || {
                    let view = SequenceView::new(scenario, SequenceKind::Deviation);
                    borel_cantelli_check(&view, target, e, horizon)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });

    let mut per_eps = Vec::with_capacity(eps.len());
    let mut all_inequalities = true;
    for (&e, result) in eps.iter().zip(results) {
        let report = result?;
        all_inequalities &= report.inequality_ok;
        let rows = (1..=report.horizon)
            .map(|n| ConvergeRow {
                n,
                measured: report.step_measures[n - 1],
                tail_sup: report.tail_sups[n - 1],
                limsup_measure: report.limsup_measures[n - 1],
            })
            .collect();
        per_eps.push(ConvergeEps {
            eps: e,
            inequality_ok: report.inequality_ok,
            tail_verdict: report.tail_verdict,
            rows,
        });
    }

    let view = SequenceView::new(scenario, SequenceKind::Deviation);
    let in_measure = converges_in_measure(&view, target, eps, horizon)?;
    let almost_everywhere = converges_ae(&view, target, horizon)?;
    let consistent = !(in_measure.decision == Decision::Holds
        && almost_everywhere.decision == Decision::Fails);

    let mut warnings = Vec::new();
    for (label, verdict) in
        [("in-measure", &in_measure), ("almost-everywhere", &almost_everywhere)]
    {
        if verdict.decision == Decision::Undecided {
            warnings.push(format!("{label} verdict undecided at horizon {horizon}"));
        }
    }
    if !all_inequalities {
        warnings.push("a limsup measure exceeded its tail supremum".to_owned());
    }

    let ok = all_inequalities
        && consistent
        && in_measure.decision != Decision::Fails
        && almost_everywhere.decision != Decision::Fails;
    let section =
        ConvergeSection { target, horizon, per_eps, in_measure, almost_everywhere, consistent };
    Ok((section, ok, warnings))
}
