//! The deterministic simulation judge: combine execution logs,
//! trajectory data, and the plan into a verdict with a structured error
//! report naming the likely repair target.

mod log;
mod pipeline;
mod run;
mod trajectory;

pub use log::{parse_log, LogSummary};
pub use pipeline::{advance_stage, NoOpRepair, PipelineState, PipelineStatus, RepairStage};
pub use run::{judge_run, JudgeError};
pub use trajectory::{parse_trajectory, Trajectory, TrajectoryError, TrajectorySample};

use serde::{Deserialize, Serialize};

/// Repair-target categories a failure can name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureCategory {
    PhysicalParameters,
    ObjectSettlement,
    CameraPlacement,
    /// Reserved for a visual-review stage; the deterministic judge never
    /// emits it and labels geometric final-frame findings as
    /// `scene_violation` instead.
    VisualMismatch,
    RuntimeError,
    ApiError,
    SceneViolation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub category: FailureCategory,
    pub subject: String,
    pub evidence: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Accept,
    Reject,
}

/// The judge's verdict. Reject carries at least one failure; accept
/// carries none.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub verdict: Verdict,
    pub failures: Vec<Failure>,
    /// Implementation-step index the report pertains to.
    pub stage: usize,
}

impl ErrorReport {
    pub fn accept(stage: usize) -> ErrorReport {
        ErrorReport { verdict: Verdict::Accept, failures: Vec::new(), stage }
    }

    pub fn reject(stage: usize, failures: Vec<Failure>) -> ErrorReport {
        debug_assert!(!failures.is_empty());
        ErrorReport { verdict: Verdict::Reject, failures, stage }
    }

    pub fn is_accept(&self) -> bool {
        self.verdict == Verdict::Accept
    }

    /// Scene self-check findings in the report envelope (advisory
    /// findings are ignored).
    pub fn from_violations(stage: usize, violations: &[crate::validator::Violation]) -> ErrorReport {
        let failures: Vec<Failure> = violations
            .iter()
            .filter(|v| !v.advisory)
            .map(|v| Failure {
                category: FailureCategory::SceneViolation,
                subject: v.subjects.join(", "),
                evidence: v.message.clone(),
            })
            .collect();
        if failures.is_empty() {
            ErrorReport::accept(stage)
        } else {
            ErrorReport::reject(stage, failures)
        }
    }

    /// Static API findings in the report envelope.
    pub fn from_api_report(stage: usize, report: &crate::api::ApiReport) -> ErrorReport {
        let failures: Vec<Failure> = report
            .findings
            .iter()
            .map(|f| Failure {
                category: FailureCategory::ApiError,
                subject: format!("{} (line {}, col {})", f.site.name, f.site.line, f.site.col),
                evidence: f.message.clone(),
            })
            .collect();
        if failures.is_empty() {
            ErrorReport::accept(stage)
        } else {
            ErrorReport::reject(stage, failures)
        }
    }

    /// Stable JSON rendering; byte-identical for identical reports.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }
}
