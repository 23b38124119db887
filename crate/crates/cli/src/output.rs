//! Report rendering: JSON records (canonical), CSV (lossy), and pretty
//! text. Numbers are rendered in decimal at full working precision.

use qeuler_core::identities::{binding_text, SweepSummary, VerifyReport};
use qeuler_core::numerics::format_decimal;
use serde::Serialize;

use crate::config::Format;

#[derive(Serialize)]
struct ReportRecord {
    identity: String,
    params: std::collections::BTreeMap<String, String>,
    lhs: String,
    lhs_bound: String,
    rhs: String,
    rhs_bound: String,
    residual: String,
    bound: String,
    slack: f64,
    pass: bool,
}

#[derive(Serialize)]
struct SummaryRecord {
    record: &'static str,
    total: usize,
    passed: usize,
    max_residual: String,
    worst_params: Option<std::collections::BTreeMap<String, String>>,
}

fn params_map(r: &VerifyReport) -> std::collections::BTreeMap<String, String> {
    r.params.iter().map(|(k, v)| (k.clone(), v.to_string())).collect()
}

fn record(r: &VerifyReport) -> ReportRecord {
    ReportRecord {
        identity: r.identity.clone(),
        params: params_map(r),
        lhs: format_decimal(r.lhs.value()),
        lhs_bound: format_decimal(r.lhs.bound()),
        rhs: format_decimal(r.rhs.value()),
        rhs_bound: format_decimal(r.rhs.bound()),
        residual: format_decimal(&r.residual),
        bound: format_decimal(&r.combined_bound),
        slack: r.slack,
        pass: r.pass,
    }
}

/// Renders one verification report as a line in the chosen format.
pub fn render_report(r: &VerifyReport, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string(&record(r)).expect("serializable record"),
        Format::Csv => {
            let params = binding_text(&r.params);
            format!(
                "{},{},{},{},{},{}",
                r.identity,
                params,
                format_decimal(&r.residual),
                format_decimal(&r.combined_bound),
                r.slack,
                if r.pass { "pass" } else { "FAIL" }
            )
        }
        Format::Pretty => {
            format!(
                "{} [{}] {}  residual {}  bound {}",
                r.identity,
                binding_text(&r.params),
                if r.pass { "pass" } else { "FAIL" },
                short(&format_decimal(&r.residual)),
                short(&format_decimal(&r.combined_bound)),
            )
        }
    }
}

/// CSV header matching `render_report`.
pub fn csv_header() -> &'static str {
    "identity,params,residual,bound,slack,status"
}

/// Renders the sweep summary.
pub fn render_summary(id: &str, s: &SweepSummary, format: Format) -> String {
    match format {
        Format::Json => {
            let rec = SummaryRecord {
                record: "summary",
                total: s.total,
                passed: s.passed,
                max_residual: format_decimal(&s.max_residual),
                worst_params: s
                    .worst
                    .as_ref()
                    .map(|b| b.iter().map(|(k, v)| (k.clone(), v.to_string())).collect()),
            };
            serde_json::to_string(&rec).expect("serializable summary")
        }
        Format::Csv => format!(
            "summary,{},{}/{} passed,max_residual={},,",
            id,
            s.passed,
            s.total,
            short(&format_decimal(&s.max_residual))
        ),
        Format::Pretty => {
            let worst = s
                .worst
                .as_ref()
                .map(|b| format!(" (worst at {})", binding_text(b)))
                .unwrap_or_default();
            format!(
                "summary {}: {}/{} passed, max residual {}{}",
                id,
                s.passed,
                s.total,
                short(&format_decimal(&s.max_residual)),
                worst
            )
        }
    }
}

/// Renders an evaluated value with its certificate.
pub fn render_value(label: &str, value: &qeuler_core::QReal, format: Format) -> String {
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct ValueRecord<'a> {
                object: &'a str,
                value: String,
                bound: String,
            }
            serde_json::to_string(&ValueRecord {
                object: label,
                value: format_decimal(value.value()),
                bound: format_decimal(value.bound()),
            })
            .expect("serializable value")
        }
        Format::Csv => {
            format!("{label},{},{}", format_decimal(value.value()), format_decimal(value.bound()))
        }
        Format::Pretty => {
            format!(
                "{label} = {}\n  bound <= {}",
                format_decimal(value.value()),
                short(&format_decimal(value.bound()))
            )
        }
    }
}

/// Keeps pretty output readable: truncates very long decimal strings.
fn short(s: &str) -> String {
    if let Some(epos) = s.find('e') {
        let (mant, exp) = s.split_at(epos);
        if mant.len() > 12 {
            return format!("{}...{}", &mant[..12], exp);
        }
        return s.to_string();
    }
    if s.len() > 16 {
        format!("{}...", &s[..16])
    } else {
        s.to_string()
    }
}
