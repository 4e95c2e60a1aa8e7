//! Human tables and CSV flattening for the report document.
//!
//! JSON is handled by serde directly; these renderers only reshape what is
//! already in the document, so every number shown here round-trips (floats
//! print in shortest-exact form).

use std::fmt::Write;

use maxitive::convergence::{ConvergenceVerdict, TailVerdict};
use maxitive::lln::HypothesisReport;
use maxitive::sequence::VarianceGrowth;

use crate::report::{
    ChebyshevSection, ConvergeSection, EvalSection, LlnSection, ReportDocument,
};

/// Shortest representation that parses back to the same float.
fn num(v: f64) -> String {
    format!("{v:?}")
}

fn growth_name(growth: VarianceGrowth) -> &'static str {
    match growth {
        VarianceGrowth::EventuallyZero => "eventually-zero",
        VarianceGrowth::Converges => "converges",
        VarianceGrowth::Bounded => "bounded",
        VarianceGrowth::LogSquared => "log-squared",
        VarianceGrowth::Linear => "linear",
        VarianceGrowth::Quadratic => "quadratic",
    }
}

fn decision_name(verdict: &ConvergenceVerdict) -> String {
    format!("{:?}", verdict.decision).to_lowercase()
}

fn verdict_line(label: &str, verdict: &ConvergenceVerdict) -> String {
    let route = if verdict.analytic { "closed form" } else { "numeric" };
    let mut line = format!("  {label}: {} ({route})", decision_name(verdict));
    if let Some(w) = &verdict.witness {
        let _ = write!(line, "; witness {} at n={} with value {}", w.outcome, w.step, num(w.value));
    }
    if !verdict.note.is_empty() {
        let _ = write!(line, "; {}", verdict.note);
    }
    line
}

/// Indices to print for a block of `len` rows under a `max_rows` budget;
/// `None` marks the fold between head and tail.
fn thinned(len: usize, max_rows: usize) -> Vec<Option<usize>> {
    if max_rows == 0 || len <= max_rows {
        return (0..len).map(Some).collect();
    }
    let head = max_rows.div_ceil(2);
    let tail = max_rows - head;
    let mut out: Vec<Option<usize>> = (0..head).map(Some).collect();
    out.push(None);
    out.extend((len - tail..len).map(Some));
    out
}

fn hypothesis_block(out: &mut String, hyp: &HypothesisReport) {
    let _ = writeln!(out, "hypothesis (theorem {})", hyp.theorem.wire_name());
    let _ = writeln!(out, "  satisfied:  {:?}", hyp.satisfied);
    let source = if hyp.constant_supplied { "supplied" } else { "inferred" };
    let _ = writeln!(out, "  constant:   {} ({source})", num(hyp.constant));
    if let Some(psi) = &hyp.psi {
        let _ = writeln!(out, "  psi:        {psi}");
    }
    if let Some(delta) = hyp.delta {
        let _ = writeln!(out, "  delta:      {}", num(delta));
    }
    if let Some(growth) = hyp.growth {
        let _ = writeln!(out, "  growth:     {}", growth_name(growth));
    }
    let route = if hyp.analytic { "closed form" } else { "numeric" };
    let _ = writeln!(out, "  route:      {route}");
    let _ = writeln!(out, "  min margin: {}", num(hyp.min_margin));
    if let Some(v) = hyp.first_violation {
        let _ = writeln!(out, "  violation:  first at n={} with margin {}", v.n, num(v.margin));
    }
    if let Some(sum) = hyp.series_sum {
        let _ = writeln!(out, "  series sum: {}", num(sum));
    }
    if let Some(per_k) = &hyp.per_k {
        let envelope = if per_k.envelope_nondecreasing { "nondecreasing" } else { "not monotone" };
        let _ = writeln!(
            out,
            "  per-step:   {:?} (min margin {}, envelope {envelope})",
            per_k.satisfied,
            num(per_k.min_margin)
        );
    }
    if !hyp.note.is_empty() {
        let _ = writeln!(out, "  note:       {}", hyp.note);
    }
}

fn eval_table(out: &mut String, section: &EvalSection) {
    if let Some(step) = &section.step {
        let _ = writeln!(out, "step k={}", step.k);
        let _ = writeln!(out, "  E_sup:   {}", num(step.e_sup));
        let _ = writeln!(out, "  Var_sup: {}", num(step.var_sup));
    }
    if let Some(event) = &section.event {
        let shown =
            if event.members.is_empty() { "(empty)".to_owned() } else { event.members.join(",") };
        let _ = writeln!(out, "event {{{shown}}}");
        let _ = writeln!(out, "  P: {}", num(event.measure));
    }
}

fn chebyshev_table(out: &mut String, section: &ChebyshevSection) {
    let _ = writeln!(
        out,
        "step k={}: E_sup={}, Var_sup={}",
        section.k,
        num(section.e_sup),
        num(section.var_sup)
    );
    let _ = writeln!(out, "{:>10} {:>14} {:>14} {:>14}", "r", "measured", "bound", "margin");
    for row in &section.rows {
        let _ = writeln!(
            out,
            "{:>10} {:>14} {:>14} {:>14}",
            num(row.r),
            num(row.measured),
            num(row.bound),
            num(row.margin)
        );
    }
    let _ = writeln!(out, "violations: {}", section.violations);
}

fn lln_table(out: &mut String, section: &LlnSection, max_rows: usize) {
    if let Some(hyp) = &section.hypothesis {
        hypothesis_block(out, hyp);
    }
    let Some(report) = &section.report else {
        let _ = writeln!(out, "stopped at the hypothesis gate (rerun with --force to continue)");
        return;
    };
    hypothesis_block(out, &report.hypothesis);
    if report.override_used {
        let _ = writeln!(out, "override:   running despite the failed hypothesis (--force)");
    }
    for curve in &report.curves {
        let _ = writeln!(out, "\nbound curve, eps = {}", num(curve.eps));
        let _ = writeln!(out, "{:>8} {:>14} {:>14} {:>14}", "n", "measured", "bound", "margin");
        for slot in thinned(curve.rows.len(), max_rows) {
            match slot {
                Some(i) => {
                    let row = &curve.rows[i];
                    let _ = writeln!(
                        out,
                        "{:>8} {:>14} {:>14} {:>14}",
                        row.n,
                        num(row.measured),
                        num(row.bound),
                        num(row.margin)
                    );
                }
                None => {
                    let _ = writeln!(out, "{:>8}", "...");
                }
            }
        }
    }
    let _ = writeln!(
        out,
        "\nbound violations: {} (worst margin {})",
        report.bound_violations,
        num(report.worst_margin)
    );
    let _ = writeln!(out, "{}", verdict_line("in measure        ", &report.in_measure));
    let _ = writeln!(out, "{}", verdict_line("almost everywhere ", &report.almost_everywhere));
    let remark = &report.mean_remark;
    let _ = writeln!(
        out,
        "  mean fit          : {:?} (mu={}, max gap {}); {}",
        remark.satisfied,
        num(remark.mu),
        num(remark.max_fit_gap),
        remark.note
    );
    if let Some(mc) = &report.mean_convergence {
        let _ = writeln!(out, "{}", verdict_line("max-mean -> mu    ", mc));
    }
}

fn converge_table(out: &mut String, section: &ConvergeSection, max_rows: usize) {
    let _ = writeln!(
        out,
        "deviation from target {} over horizon {}",
        num(section.target),
        section.horizon
    );
    for block in &section.per_eps {
        let _ = writeln!(out, "\neps = {}", num(block.eps));
        let _ = writeln!(
            out,
            "{:>8} {:>14} {:>14} {:>16}",
            "n", "measured", "tail_sup", "limsup_measure"
        );
        for slot in thinned(block.rows.len(), max_rows) {
            match slot {
                Some(i) => {
                    let row = &block.rows[i];
                    let _ = writeln!(
                        out,
                        "{:>8} {:>14} {:>14} {:>16}",
                        row.n,
                        num(row.measured),
                        num(row.tail_sup),
                        num(row.limsup_measure)
                    );
                }
                None => {
                    let _ = writeln!(out, "{:>8}", "...");
                }
            }
        }
        let inequality = if block.inequality_ok { "holds exactly" } else { "BROKEN" };
        let _ = writeln!(out, "  limsup measure <= tail sup: {inequality}");
        match &block.tail_verdict {
            TailVerdict::VanishesAt { m } => {
                let _ = writeln!(out, "  tail: deviation measures vanish from n={m} on");
            }
            TailVerdict::Undecided { final_value } => {
                let _ =
                    writeln!(out, "  tail: still {} at the horizon", num(*final_value));
            }
        }
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "{}", verdict_line("in measure        ", &section.in_measure));
    let _ = writeln!(out, "{}", verdict_line("almost everywhere ", &section.almost_everywhere));
    let consistency = if section.consistent { "consistent" } else { "INCONSISTENT" };
    let _ = writeln!(out, "  implication       : {consistency}");
}

pub fn render_table(doc: &ReportDocument, max_rows: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {} — {} report", doc.tool.name, doc.tool.version, doc.command);
    let _ = writeln!(out, "scenario: {}", doc.scenario.path);
    let _ = writeln!(out, "sha256:   {}", doc.scenario.sha256);
    if let Some(ts) = &doc.timestamp {
        let _ = writeln!(out, "time:     {ts}");
    }
    for warning in &doc.warnings {
        let _ = writeln!(out, "warning:  {warning}");
    }
    let _ = writeln!(out);
    if let Some(section) = &doc.eval {
        eval_table(&mut out, section);
    }
    if let Some(section) = &doc.chebyshev {
        chebyshev_table(&mut out, section);
    }
    if let Some(section) = &doc.lln {
        lln_table(&mut out, section, max_rows);
    }
    if let Some(section) = &doc.converge {
        converge_table(&mut out, section, max_rows);
    }
    let _ = writeln!(out, "\nok: {}", doc.ok);
    out
}

fn csv_field(value: &str) -> String {
    if value.contains(',') || value.contains('"') || value.contains('\n') {
        format!("\"{}\"", value.replace('"', "\"\""))
    } else {
        value.to_owned()
    }
}

fn lln_csv(section: &LlnSection) -> String {
    if let Some(report) = &section.report {
        let mut out = String::from("eps,n,measured,bound,margin\n");
        for curve in &report.curves {
            for row in &curve.rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    num(curve.eps),
                    row.n,
                    num(row.measured),
                    num(row.bound),
                    num(row.margin)
                );
            }
        }
        return out;
    }
    // Gated: there is no curve yet, so flatten the hypothesis verdict.
    let mut out = String::from("key,value\n");
    if let Some(hyp) = &section.hypothesis {
        let _ = writeln!(out, "theorem,{}", hyp.theorem.wire_name());
        let _ = writeln!(out, "satisfied,{:?}", hyp.satisfied);
        let _ = writeln!(out, "constant,{}", num(hyp.constant));
        let _ = writeln!(out, "min_margin,{}", num(hyp.min_margin));
        let _ = writeln!(out, "note,{}", csv_field(&hyp.note));
    }
    out
}

pub fn render_csv(doc: &ReportDocument) -> String {
    if let Some(section) = &doc.eval {
        let mut out = String::from("key,value\n");
        if let Some(step) = &section.step {
            let _ = writeln!(out, "k,{}", step.k);
            let _ = writeln!(out, "e_sup,{}", num(step.e_sup));
            let _ = writeln!(out, "var_sup,{}", num(step.var_sup));
        }
        if let Some(event) = &section.event {
            let _ = writeln!(out, "event,{}", csv_field(&event.members.join(",")));
            let _ = writeln!(out, "measure,{}", num(event.measure));
        }
        return out;
    }
    if let Some(section) = &doc.chebyshev {
        let mut out = String::from("r,measured,bound,margin\n");
        for row in &section.rows {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                num(row.r),
                num(row.measured),
                num(row.bound),
                num(row.margin)
            );
        }
        return out;
    }
    if let Some(section) = &doc.lln {
        return lln_csv(section);
    }
    if let Some(section) = &doc.converge {
        let mut out = String::from("eps,n,measured,tail_sup,limsup_measure\n");
        for block in &section.per_eps {
            for row in &block.rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    num(block.eps),
                    row.n,
                    num(row.measured),
                    num(row.tail_sup),
                    num(row.limsup_measure)
                );
            }
        }
        return out;
    }
    String::from("key,value\n")
}
