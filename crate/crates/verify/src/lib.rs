//! Invariant suites for the `gelfand-cetlin` crate.
//!
//! [`run_suite`] executes a configured suite and returns a [`SuiteReport`]
//! recording the worst defect of every invariant against its tolerance.
//! Trials run in parallel; trial `i` is seeded with `seed + i`, so the
//! report does not depend on scheduling.

pub mod catalog;
pub mod config;
pub mod explain;
pub mod report;
pub mod suites;

use std::time::Instant;

use rayon::prelude::*;

pub use catalog::SuiteName;
pub use config::{ConfigError, ConfigFile, Overrides, SuiteConfig};
pub use explain::explain;
pub use report::{InvariantResult, SuiteReport, TrialRecord};

pub fn run_suite(cfg: &SuiteConfig) -> SuiteReport {
    let start = Instant::now();
    let suites: Vec<SuiteName> = match cfg.suite {
        SuiteName::All => SuiteName::CONCRETE.to_vec(),
        s => vec![s],
    };
    let mut trials = Vec::new();
    let mut invariants = Vec::new();
    for suite in suites {
        let outcomes: Vec<_> = (0..cfg.trials)
            .into_par_iter()
            .map(|i| (i, suites::run_trial(suite, cfg, i)))
            .collect();
        for inv in catalog::for_suite(suite) {
            let mut result = InvariantResult {
                suite: suite.to_string(),
                id: inv.id.to_string(),
                statement: inv.statement.to_string(),
                tolerance: cfg.tolerance(inv.id),
                worst_defect: None,
                samples: 0,
                errors: 0,
                passed: false,
            };
            for (_, o) in &outcomes {
                match o.defects.get(inv.id) {
                    Some(&d) => {
                        result.samples += 1;
                        result.worst_defect = Some(result.worst_defect.map_or(d, |w| w.max(d)));
                    }
                    None if o.error.is_some() => result.errors += 1,
                    None => {}
                }
            }
            result.evaluate();
            invariants.push(result);
        }
        trials.extend(outcomes.into_iter().map(|(i, o)| TrialRecord {
            suite: suite.to_string(),
            trial: i,
            seed: suites::trial_seed(cfg, i),
            defects: o
                .defects
                .into_iter()
                .map(|(k, v)| (k, Some(v).filter(|x| x.is_finite())))
                .collect(),
            error: o.error,
        }));
    }
    SuiteReport {
        schema_version: report::SCHEMA_VERSION,
        suite: cfg.suite.to_string(),
        passed: invariants.iter().all(|i| i.passed),
        config: serde_json::to_value(cfg).expect("config serializes"),
        invariants,
        trials,
        wall_time_seconds: start.elapsed().as_secs_f64(),
    }
}
