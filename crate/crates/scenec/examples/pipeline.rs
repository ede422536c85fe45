//! The staged build-review loop: judge, repair, retry, advance.
//!
//! The repair stage here is the no-op stub; a real deployment plugs in
//! an agent that patches the artifact from the report.
//!
//! ```sh
//! cargo run -p scenec --example pipeline
//! ```

use scenec::judge::{
    advance_stage, ErrorReport, Failure, FailureCategory, NoOpRepair, PipelineState,
    PipelineStatus, RepairStage,
};

fn main() {
    // Two implementation steps; the first needs two repair rounds.
    let mut state = PipelineState::new(2);
    let mut artifact = String::from("# simulator script v1\n");
    let repair = NoOpRepair;

    let mut attempt = 0;
    while !state.is_terminal() {
        attempt += 1;
        let report = fake_judge(state.step, attempt);
        println!(
            "attempt {attempt}: step {} retry {} -> verdict {:?}",
            state.step,
            state.retry,
            report.verdict
        );
        if !report.is_accept() {
            for failure in &report.failures {
                println!("    [{:?}] {}: {}", failure.category, failure.subject, failure.evidence);
            }
            artifact = repair.repair(&report, &artifact);
        }
        state = advance_stage(&state, &report);
    }

    println!(
        "\npipeline ended: {:?} after {attempt} attempts, final step {}",
        state.status, state.step
    );
    assert_eq!(state.status, PipelineStatus::Done);

    // Budget exhaustion is a terminal failure, not a hang.
    let mut doomed = PipelineState::new(1).with_budget(2);
    let reject = ErrorReport::reject(
        0,
        vec![Failure {
            category: FailureCategory::PhysicalParameters,
            subject: "wheel_motor".into(),
            evidence: "torque saturates every step".into(),
        }],
    );
    let mut rounds = 0;
    while !doomed.is_terminal() {
        doomed = advance_stage(&doomed, &reject);
        rounds += 1;
    }
    println!("doomed loop   : {:?} after {rounds} rejected attempts", doomed.status);
}

/// Stand-in for compile + execute + judge: step 0 fails twice with
/// different categories, then everything accepts.
fn fake_judge(step: usize, attempt: usize) -> ErrorReport {
    match (step, attempt) {
        (0, 1) => ErrorReport::reject(
            0,
            vec![Failure {
                category: FailureCategory::ApiError,
                subject: "skeleton.py".into(),
                evidence: "`create_box` called with 5 positional arguments, takes 4".into(),
            }],
        ),
        (0, 2) => ErrorReport::reject(
            0,
            vec![Failure {
                category: FailureCategory::ObjectSettlement,
                subject: "crate_box".into(),
                evidence: "motion_expectation: measured 0.003 m < 0.05 m".into(),
            }],
        ),
        (step, _) => ErrorReport::accept(step),
    }
}
