use std::error::Error as StdError;
use std::fmt::Write as _;

use merozero::criterion::{ClassOutcome, Classification};
use merozero::power_sums::ZeroPowerSums;
use num_complex::Complex64;
use serde_json::Value;

use crate::report::{CriterionReport, Section, Document, NevanlinnaReport, OracleReport, ZerosReport};
use crate::Format;

type Rendered = Result<String, Box<dyn StdError>>;

pub fn render(doc: &Document, format: Format) -> Rendered {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(doc)? + "\n"),
        Format::Csv => csv(doc),
        Format::Text => Ok(text(doc)),
    }
}

fn complex(z: Complex64) -> String {
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{:.12e} {sign} {:.12e}i", z.re, z.im.abs())
}

fn text(doc: &Document) -> String {
    let mut out = String::new();
    match doc {
        Document::Report(r) => {
            for (title, body) in [
                ("zeros", section(&r.zeros, text_zeros)),
                ("criterion", section(&r.criterion, text_criterion)),
                ("oracle", section(&r.oracle, text_oracle)),
                ("nevanlinna", section(&r.nevanlinna, text_nevanlinna)),
                ("classify", section(&r.classify, text_classify)),
            ] {
                let _ = writeln!(out, "== {title} ==\n{body}");
            }
        }
        Document::Zeros(z) => out = text_zeros(z),
        Document::Criterion(c) => out = text_criterion(c),
        Document::Oracle(o) => out = text_oracle(o),
        Document::Nevanlinna(n) => out = text_nevanlinna(n),
        Document::Classify(c) => out = text_classify(c),
    }
    out
}

fn section<T>(s: &Section<T>, body: fn(&T) -> String) -> String {
    match s {
        Section::Ok(v) => body(v),
        Section::Failed { error, .. } => format!("failed: {error}\n"),
        Section::NotApplicable { reason } => format!("not applicable: {reason}\n"),
    }
}

fn table(out: &mut String, title: &str, sums: &ZeroPowerSums) {
    let _ = writeln!(out, "{title}");
    if sums.entries.is_empty() {
        let _ = writeln!(out, "  no admissible N");
    }
    for e in &sums.entries {
        let flag = if e.conditional { "  (conditional)" } else { "" };
        let _ = writeln!(
            out,
            "  N = {:<3} {}  ± {:.2e}{flag}",
            e.n,
            complex(e.value.value),
            e.value.error_bound
        );
    }
}

fn text_zeros(z: &ZerosReport) -> String {
    let mut out = format!("kernel order {}, rho = {}\n", z.kernel_order, z.rho);
    table(&mut out, "sums over zeros of f", &z.zeros_of_f);
    if let Some(s) = &z.zeros_of_fprime_via_poles {
        table(&mut out, "sums over zeros of f' (pole route)", s);
    }
    if let Some(s) = &z.zeros_of_fprime_via_zeros {
        table(&mut out, "sums over zeros of f' (zero route)", s);
    }
    out
}

fn text_criterion(c: &CriterionReport) -> String {
    let decision = serde_json::to_value(c.report.decision).ok();
    let mut out = format!(
        "decision: {}\n",
        decision.as_ref().and_then(Value::as_str).unwrap_or("?")
    );
    if let Some(w) = c.report.witness {
        let _ = writeln!(out, "witness: N = {w}");
    }
    for r in &c.report.residuals {
        let mark = if r.value.is_certainly_nonzero() { "  nonzero" } else { "" };
        let _ = writeln!(
            out,
            "  r_{:<3} {}  ± {:.2e}{mark}",
            r.n,
            complex(r.value.value),
            r.value.error_bound
        );
    }
    out
}

fn text_oracle(o: &OracleReport) -> String {
    let z = &o.zeros;
    let mut out = format!(
        "{} zeros located in |z| <= {} ({} expected{}{})\n",
        z.total_multiplicity(),
        o.radius,
        z.expected,
        if z.exhaustive_in.is_some() { ", exhaustive" } else { "" },
        if z.unresolved > 0 { format!(", {} unresolved cells", z.unresolved) } else { String::new() },
    );
    for s in &z.zeros {
        let _ = writeln!(out, "  {}  x{}", complex(s.location), s.multiplicity);
    }
    let _ = writeln!(out, "direct sums over located zeros:");
    for s in &o.sums {
        let delta = s.delta.map_or_else(|| "not admissible".into(), |d| format!("{d:.3e}"));
        let _ = writeln!(out, "  N = {:<3} {}  formula delta {delta}", s.n, complex(s.direct));
    }
    out
}

fn text_nevanlinna(n: &NevanlinnaReport) -> String {
    let mut out = format!(
        "order {:.4}, lower order {:.4}{} (fit on r in [{:.4e}, {:.4e}], residual {:.2e})\n",
        n.order.rho,
        n.order.lambda,
        if n.order.logarithmic { ", logarithmic growth" } else { "" },
        n.order.fit_window.0,
        n.order.fit_window.1,
        n.order.regression_residual
    );
    let _ = writeln!(
        out,
        "pole sequence: order {:.4}, convergence index {:.4}{}",
        n.sequence_order.order.rho,
        n.sequence_order.convergence_index,
        if n.sequence_order.agrees { "" } else { " (disagree)" }
    );
    let _ = writeln!(out, "  {:>12} {:>8} {:>12} {:>12} {:>12}", "r", "n", "N", "m", "T");
    for s in &n.samples {
        let _ = writeln!(
            out,
            "  {:>12.5e} {:>8} {:>12.5e} {:>12.5e} {:>12.5e}",
            s.r, s.n, s.counting, s.m, s.characteristic
        );
    }
    out
}

fn outcome_fields(o: &ClassOutcome) -> (&'static str, String, String) {
    match *o {
        ClassOutcome::UnitPole { c } => ("unit-pole", c.re.to_string(), c.im.to_string()),
        ClassOutcome::SineSquared { b } => ("sine-squared", b.re.to_string(), b.im.to_string()),
        ClassOutcome::PoleSquared { c } => ("pole-squared", c.re.to_string(), c.im.to_string()),
        ClassOutcome::NotZeroFree { witness } => ("not-zero-free", witness.to_string(), String::new()),
        ClassOutcome::Inconclusive => ("inconclusive", String::new(), String::new()),
    }
}

fn text_classify(c: &Classification) -> String {
    let what = match c.outcome {
        ClassOutcome::UnitPole { c } => format!("f(z) = 1/(z - C), C = {}", complex(c)),
        ClassOutcome::SineSquared { b } => format!("f(z) = pi^2/sin^2(pi(z + b)), b = {}", complex(b)),
        ClassOutcome::PoleSquared { c } => format!("f(z) = 1/(z - C)^2, C = {}", complex(c)),
        ClassOutcome::NotZeroFree { witness } => format!("has zeros (witness N = {witness})"),
        ClassOutcome::Inconclusive => "inconclusive".into(),
    };
    format!(
        "kernel order {}: {what}\nmax residual / allowance {:.3e} over {} samples\n",
        c.kernel_order, c.max_residual, c.samples
    )
}

fn csv(doc: &Document) -> Rendered {
    let mut w = ::csv::Writer::from_writer(Vec::new());
    match doc {
        Document::Zeros(z) => {
            w.write_record(["target", "N", "re", "im", "error"])?;
            let tables = [
                ("f", Some(&z.zeros_of_f)),
                ("fprime-via-poles", z.zeros_of_fprime_via_poles.as_ref()),
                ("fprime-via-zeros", z.zeros_of_fprime_via_zeros.as_ref()),
            ];
            for (target, table) in tables {
                for e in table.into_iter().flat_map(|t| &t.entries) {
                    w.write_record([
                        target.to_string(),
                        e.n.to_string(),
                        e.value.value.re.to_string(),
                        e.value.value.im.to_string(),
                        e.value.error_bound.to_string(),
                    ])?;
                }
            }
        }
        Document::Criterion(c) => {
            w.write_record(["N", "re", "im", "error", "nonzero"])?;
            for r in &c.report.residuals {
                w.write_record([
                    r.n.to_string(),
                    r.value.value.re.to_string(),
                    r.value.value.im.to_string(),
                    r.value.error_bound.to_string(),
                    r.value.is_certainly_nonzero().to_string(),
                ])?;
            }
        }
        Document::Oracle(o) => {
            w.write_record(["re", "im", "multiplicity", "refinement_error"])?;
            for s in &o.zeros.zeros {
                w.write_record([
                    s.location.re.to_string(),
                    s.location.im.to_string(),
                    s.multiplicity.to_string(),
                    s.refinement_error.to_string(),
                ])?;
            }
        }
        Document::Nevanlinna(n) => {
            w.write_record(["r", "n", "N", "m", "T"])?;
            for s in &n.samples {
                w.write_record([
                    format!("{:.5e}", s.r),
                    s.n.to_string(),
                    format!("{:.5e}", s.counting),
                    format!("{:.5e}", s.m),
                    format!("{:.5e}", s.characteristic),
                ])?;
            }
        }
        Document::Classify(c) => {
            w.write_record(["kernel_order", "outcome", "param_re", "param_im", "max_residual"])?;
            let (outcome, re, im) = outcome_fields(&c.outcome);
            w.write_record([c.kernel_order.to_string(), outcome.into(), re, im, c.max_residual.to_string()])?;
        }
        Document::Report(r) => {
            w.write_record(["section", "key", "value"])?;
            let value = serde_json::to_value(r)?;
            if let Value::Object(sections) = value {
                for (section, body) in sections {
                    let mut rows = Vec::new();
                    flatten(&body, String::new(), &mut rows);
                    for (key, v) in rows {
                        w.write_record([section.as_str(), key.as_str(), v.as_str()])?;
                    }
                }
            }
        }
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn flatten(v: &Value, prefix: String, out: &mut Vec<(String, String)>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                flatten(x, join(k), out);
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(x, join(&i.to_string()), out);
            }
        }
        Value::String(s) => out.push((prefix, s.clone())),
        Value::Null => out.push((prefix, String::new())),
        other => out.push((prefix, other.to_string())),
    }
}
