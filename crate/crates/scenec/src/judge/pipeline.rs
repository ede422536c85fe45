//! The staged build-review loop as a value-threaded state machine.
//!
//! Accept advances to the next implementation step; reject stays on the
//! step, burns a retry, and hands the report to a pluggable repair
//! stage. Step indices never decrease and terminal states absorb.

use serde::Serialize;

use crate::constants::RETRY_BUDGET;

use super::ErrorReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PipelineStatus {
    Running,
    Done,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineState {
    pub step: usize,
    pub total_steps: usize,
    pub retry: u32,
    pub retry_budget: u32,
    pub status: PipelineStatus,
    /// The report that drove the last transition, kept for the repair
    /// stage.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub last_report: Option<ErrorReport>,
}

impl PipelineState {
    pub fn new(total_steps: usize) -> PipelineState {
        PipelineState {
            step: 0,
            total_steps,
            retry: 0,
            retry_budget: RETRY_BUDGET,
            status: if total_steps == 0 { PipelineStatus::Done } else { PipelineStatus::Running },
            last_report: None,
        }
    }

    pub fn with_budget(mut self, budget: u32) -> PipelineState {
        self.retry_budget = budget;
        self
    }

    pub fn is_terminal(&self) -> bool {
        self.status != PipelineStatus::Running
    }
}

/// Advance the pipeline by one judged attempt.
pub fn advance_stage(state: &PipelineState, report: &ErrorReport) -> PipelineState {
    if state.is_terminal() {
        return state.clone();
    }
    let mut next = state.clone();
    next.last_report = Some(report.clone());
    if report.is_accept() {
        next.step += 1;
        next.retry = 0;
        if next.step >= next.total_steps {
            next.status = PipelineStatus::Done;
        }
    } else {
        next.retry += 1;
        if next.retry > next.retry_budget {
            next.status = PipelineStatus::Failed;
        }
    }
    next
}

/// A repair stage takes the judge's report and the current artifact and
/// produces a patched artifact. Plugging in a real repair agent is a
/// downstream concern; the no-op stub keeps the loop testable.
pub trait RepairStage {
    fn repair(&self, report: &ErrorReport, artifact: &str) -> String;
}

/// Returns the artifact unchanged.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoOpRepair;

impl RepairStage for NoOpRepair {
    fn repair(&self, _report: &ErrorReport, artifact: &str) -> String {
        artifact.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::judge::{Failure, FailureCategory};

    fn reject_report() -> ErrorReport {
        ErrorReport::reject(
            0,
            vec![Failure {
                category: FailureCategory::ObjectSettlement,
                subject: "crate_box".into(),
                evidence: "did not move".into(),
            }],
        )
    }

    #[test]
    fn accept_on_final_step_is_done() {
        let state = PipelineState::new(1);
        let next = advance_stage(&state, &ErrorReport::accept(0));
        assert_eq!(next.status, PipelineStatus::Done);
        assert_eq!(next.step, 1);
    }

    #[test]
    fn reject_at_budget_boundary_fails() {
        let mut state = PipelineState::new(2).with_budget(3);
        state.retry = 3;
        let next = advance_stage(&state, &reject_report());
        assert_eq!(next.status, PipelineStatus::Failed);
        assert_eq!(next.step, 0);
    }

    #[test]
    fn reject_then_accept_advances_exactly_once() {
        // State-machine trace: reject keeps the step, accept moves it.
        let s0 = PipelineState::new(2);
        let s1 = advance_stage(&s0, &reject_report());
        assert_eq!(s1.step, 0);
        assert_eq!(s1.retry, 1);
        assert_eq!(s1.status, PipelineStatus::Running);
        let s2 = advance_stage(&s1, &ErrorReport::accept(0));
        assert_eq!(s2.step, 1);
        assert_eq!(s2.retry, 0);
        assert_eq!(s2.status, PipelineStatus::Running);
    }

    #[test]
    fn terminal_states_absorb() {
        let done = advance_stage(&PipelineState::new(1), &ErrorReport::accept(0));
        assert_eq!(done.status, PipelineStatus::Done);
        let after = advance_stage(&done, &reject_report());
        assert_eq!(after, done);

        let mut failing = PipelineState::new(1).with_budget(0);
        failing = advance_stage(&failing, &reject_report());
        assert_eq!(failing.status, PipelineStatus::Failed);
        let stuck = advance_stage(&failing, &ErrorReport::accept(0));
        assert_eq!(stuck, failing);
    }

    #[test]
    fn steps_never_decrease() {
        let mut state = PipelineState::new(3);
        let mut rng = crate::rng::SplitMix64::new(0xabc);
        let mut last_step = 0;
        for _ in 0..50 {
            let report = if rng.below(2) == 0 {
                ErrorReport::accept(state.step)
            } else {
                reject_report()
            };
            state = advance_stage(&state, &report);
            assert!(state.step >= last_step);
            last_step = state.step;
        }
    }

    #[test]
    fn noop_repair_returns_artifact_unchanged() {
        let artifact = "import simapi.core\n";
        let patched = NoOpRepair.repair(&reject_report(), artifact);
        assert_eq!(patched, artifact);
    }

    #[test]
    fn zero_step_pipeline_is_born_done() {
        assert_eq!(PipelineState::new(0).status, PipelineStatus::Done);
    }
}
