use std::fmt::Write;

use crate::report::SuiteReport;

/// Human-readable summary naming the statement behind every failed invariant.
pub fn explain(report: &SuiteReport) -> String {
    let mut out = String::new();
    let failed = report.failures().count();
    let _ = writeln!(
        out,
        "suite {}: {} invariants checked over {} trials, {} failed",
        report.suite,
        report.invariants.len(),
        report.trials.len(),
        failed
    );
    if report.invariants.is_empty() {
        return out;
    }
    for inv in report.failures() {
        let worst = match inv.worst_defect {
            Some(w) => format!("worst defect {w:.3e} exceeds tolerance {:.1e}", inv.tolerance),
            None => "no defect measured".to_string(),
        };
        let errors = if inv.errors > 0 {
            format!(", {} trial(s) errored", inv.errors)
        } else {
            String::new()
        };
        let _ = writeln!(out, "FAIL {}/{}: {worst}{errors}", inv.suite, inv.id);
        let _ = writeln!(out, "     statement: {}", inv.statement);
    }
    for t in report.trials.iter().filter(|t| t.error.is_some()) {
        let _ = writeln!(
            out,
            "error in {} trial {} (seed {}): {}",
            t.suite,
            t.trial,
            t.seed,
            t.error.as_deref().unwrap_or_default()
        );
    }
    if failed == 0 {
        let _ = writeln!(out, "all invariants hold");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::InvariantResult;

    #[test]
    fn empty_report_is_header_only() {
        let text = explain(&SuiteReport::empty("gc-check"));
        assert_eq!(text.lines().count(), 1);
        assert!(text.contains("0 failed"));
    }

    #[test]
    fn failing_invariant_is_named_with_its_statement() {
        let mut r = SuiteReport::empty("reduce");
        r.invariants.push(InvariantResult {
            suite: "reduce".into(),
            id: "collective-identity".into(),
            statement: "on the level set, g·m equals the small-torus action of τ(g) on m".into(),
            tolerance: 1e-6,
            worst_defect: Some(3e-2),
            samples: 5,
            errors: 0,
            passed: false,
        });
        r.passed = false;
        let text = explain(&r);
        assert!(text.contains("FAIL reduce/collective-identity"));
        assert!(text.contains("small-torus action"));
        assert!(text.contains("1 failed"));
    }
}
