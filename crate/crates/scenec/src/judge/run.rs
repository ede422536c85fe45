//! The verdict: runtime evidence, settlement, motion expectations, and a
//! final-frame geometry replay, in that order. The first failing check
//! category populates the report.

use thiserror::Error;

use crate::catalog::AssetCatalog;
use crate::constants::{
    BASE_PLANE_Z, DELTA_MOVE, DELTA_STILL, DIVERGENCE_BOUND, SETTLEMENT_TOL,
};
use crate::geometry::{world_aabb, AabbConvention};
use crate::plan::SimulationPlan;
use crate::resolver::ResolvedScene;
use crate::validator::{check_scene_mode, CheckMode};

use super::{ErrorReport, Failure, FailureCategory, LogSummary, Trajectory};

#[derive(Debug, Error, PartialEq)]
pub enum JudgeError {
    #[error("trajectory names unknown objects: {0:?}")]
    UnknownTrajectoryObjects(Vec<String>),
    #[error("dynamic objects missing from the trajectory: {0:?}")]
    MissingTrajectoryObjects(Vec<String>),
}

/// Judge one executed run against the plan it was compiled from.
pub fn judge_run(
    plan: &SimulationPlan,
    scene: &ResolvedScene,
    trajectory: &Trajectory,
    log: &LogSummary,
) -> Result<ErrorReport, JudgeError> {
    check_object_sets(plan, trajectory)?;

    // 1. Runtime evidence from the log.
    let mut failures = runtime_failures(log);
    if !failures.is_empty() {
        return Ok(ErrorReport::reject(0, failures));
    }

    // 2. Settlement: no tunnelling below the base plane, no divergence.
    failures = settlement_failures(plan, trajectory);
    if !failures.is_empty() {
        return Ok(ErrorReport::reject(0, failures));
    }

    // 3. Motion expectations: expected movers move, fixed bodies do not.
    failures = motion_failures(plan, trajectory);
    if !failures.is_empty() {
        return Ok(ErrorReport::reject(0, failures));
    }

    // 4. Scene self-checks replayed on the final frame.
    failures = final_frame_failures(plan, scene, trajectory);
    if !failures.is_empty() {
        return Ok(ErrorReport::reject(0, failures));
    }

    Ok(ErrorReport::accept(0))
}

fn check_object_sets(plan: &SimulationPlan, trajectory: &Trajectory) -> Result<(), JudgeError> {
    let unknown: Vec<String> = trajectory
        .object_names()
        .filter(|name| plan.object(name).is_none())
        .map(str::to_string)
        .collect();
    if !unknown.is_empty() {
        return Err(JudgeError::UnknownTrajectoryObjects(unknown));
    }
    let missing: Vec<String> = plan
        .objects
        .iter()
        .filter(|o| o.is_dynamic && !o.is_fluid())
        .filter(|o| !trajectory.series.contains_key(&o.name))
        .map(|o| o.name.clone())
        .collect();
    if !missing.is_empty() {
        return Err(JudgeError::MissingTrajectoryObjects(missing));
    }
    Ok(())
}

fn runtime_failures(log: &LogSummary) -> Vec<Failure> {
    let mut out = Vec::new();
    if !log.ran_to_completion {
        out.push(Failure {
            category: FailureCategory::RuntimeError,
            subject: "simulation".into(),
            evidence: "log lacks the completion sentinel".into(),
        });
    }
    if log.runtime_errors > 0 {
        out.push(Failure {
            category: FailureCategory::RuntimeError,
            subject: "simulation".into(),
            evidence: format!(
                "{} runtime error(s); first: {}",
                log.runtime_errors,
                log.first_error.as_deref().unwrap_or("<none recorded>")
            ),
        });
    }
    out
}

fn settlement_failures(plan: &SimulationPlan, trajectory: &Trajectory) -> Vec<Failure> {
    let mut out = Vec::new();
    for obj in &plan.objects {
        if !obj.is_dynamic {
            continue;
        }
        let Some(samples) = trajectory.series.get(&obj.name) else {
            continue;
        };
        let min_z = samples.iter().map(|s| s.position.z).fold(f64::INFINITY, f64::min);
        if min_z < BASE_PLANE_Z - SETTLEMENT_TOL {
            out.push(Failure {
                category: FailureCategory::ObjectSettlement,
                subject: obj.name.clone(),
                evidence: format!(
                    "tunnelling: centre dropped to {min_z} m, below the base plane by more than {SETTLEMENT_TOL} m"
                ),
            });
        }
        let max_abs = samples
            .iter()
            .map(|s| s.position.x.abs().max(s.position.y.abs()).max(s.position.z.abs()))
            .fold(0.0, f64::max);
        if max_abs > DIVERGENCE_BOUND {
            out.push(Failure {
                category: FailureCategory::ObjectSettlement,
                subject: obj.name.clone(),
                evidence: format!(
                    "divergence: position reached {max_abs} m, beyond the {DIVERGENCE_BOUND} m bound"
                ),
            });
        }
    }
    out
}

fn motion_failures(plan: &SimulationPlan, trajectory: &Trajectory) -> Vec<Failure> {
    let mut out = Vec::new();
    for name in plan.motion_expectations() {
        let Some(displacement) = trajectory.max_displacement(name) else {
            out.push(Failure {
                category: FailureCategory::ObjectSettlement,
                subject: name.to_string(),
                evidence: "motion expected but the object has no trajectory".into(),
            });
            continue;
        };
        if displacement < DELTA_MOVE {
            out.push(Failure {
                category: FailureCategory::ObjectSettlement,
                subject: name.to_string(),
                evidence: format!(
                    "motion_expectation: measured {displacement} m < {DELTA_MOVE} m"
                ),
            });
        }
    }
    for obj in &plan.objects {
        if !obj.fixed {
            continue;
        }
        let Some(displacement) = trajectory.max_displacement(&obj.name) else {
            continue; // an absent fixed body is trivially still
        };
        if displacement > DELTA_STILL {
            out.push(Failure {
                category: FailureCategory::ObjectSettlement,
                subject: obj.name.clone(),
                evidence: format!(
                    "fixed body drifted {displacement} m, beyond the {DELTA_STILL} m still bound"
                ),
            });
        }
    }
    out
}

/// Re-pose trajectory objects at their final samples and run the scene
/// self-checks restricted to the final-frame mode. Findings are labelled
/// scene_violation: this judge never claims visual evidence.
fn final_frame_failures(
    plan: &SimulationPlan,
    scene: &ResolvedScene,
    trajectory: &Trajectory,
) -> Vec<Failure> {
    let mut final_scene = scene.clone();
    for name in trajectory.series.keys() {
        let Some(final_position) = trajectory.final_position(name) else {
            continue;
        };
        let Some(body) = final_scene.bodies.get_mut(name) else {
            continue;
        };
        let convention = match plan.object(name) {
            Some(obj) if obj.is_boundary_container() => AabbConvention::BoundaryFloor,
            _ => AabbConvention::Center,
        };
        body.position = final_position;
        body.aabb = world_aabb(body.extent, final_position, body.orientation, convention);
    }
    let violations =
        check_scene_mode(&final_scene, plan, &AssetCatalog::empty(), CheckMode::FinalFrame);
    super::ErrorReport::from_violations(0, &violations).failures
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::judge::{parse_log, parse_trajectory};
    use crate::plan::parse_plan;
    use crate::resolver::resolve_scene;

    const PLAN: &str = "\
plan_type
  mbs_in_scene

simulation_parameters
  time_step: 0.001
  simulation_duration: 2
  gravity: 9.81

objects
  - name: floor
    construction:
      kind: procedural
      primitive: box
      size: {x: 8, y: 8, z: 0.1}
    topology:
      role: base
    pose:
      position: {x: 0, y: 0, z: -0.05}
    fixed: true
    is_dynamic: false
    fsi_registration: none
  - name: robot
    construction:
      kind: procedural
      primitive: box
      size: {x: 0.6, y: 0.3, z: 0.4}
      density: 800
    topology:
      role: child
      ref: floor
      relation: placed_on_top
    fixed: false
    is_dynamic: true
    fsi_registration: none

implementation_steps
  - description: robot walks forward
    objects: [floor, robot]
    motion_expectations: [robot]

clarifications_needed
  []
";

    fn fixture() -> (crate::plan::SimulationPlan, ResolvedScene) {
        let plan = parse_plan(PLAN).unwrap().plan;
        let scene = resolve_scene(&plan, &AssetCatalog::empty()).unwrap();
        (plan, scene)
    }

    const CLEAN_LOG: &str = "INFO | start\nSIM_DONE\n";

    fn walk_trajectory(distance: f64) -> String {
        let mut text = String::from("t,name,px,py,pz\n");
        for i in 0..5 {
            let t = i as f64 * 0.1;
            let x = distance * i as f64 / 4.0;
            text.push_str(&format!("{t},robot,{x},0,0.2\n"));
            text.push_str(&format!("{t},floor,0,0,-0.05\n"));
        }
        text
    }

    #[test]
    fn clean_walk_is_accepted() {
        let (plan, scene) = fixture();
        let trajectory = parse_trajectory(&walk_trajectory(0.5)).unwrap();
        let log = parse_log(CLEAN_LOG);
        let report = judge_run(&plan, &scene, &trajectory, &log).unwrap();
        assert!(report.is_accept(), "failures: {:?}", report.failures);
    }

    #[test]
    fn motion_shortfall_is_settlement_category() {
        // Displacement oracle: 0.003 m over the series < 0.05 m bound.
        let (plan, scene) = fixture();
        let trajectory = parse_trajectory(&walk_trajectory(0.003)).unwrap();
        let log = parse_log(CLEAN_LOG);
        let report = judge_run(&plan, &scene, &trajectory, &log).unwrap();
        assert!(!report.is_accept());
        let failure = &report.failures[0];
        assert_eq!(failure.category, FailureCategory::ObjectSettlement);
        assert_eq!(failure.subject, "robot");
        assert!(failure.evidence.contains("motion_expectation"));
        assert!(failure.evidence.contains("0.003"));
    }

    #[test]
    fn tunnelling_body_is_rejected() {
        let (plan, scene) = fixture();
        let text = "t,name,px,py,pz\n0.0,robot,0,0,0.2\n0.1,robot,0,0,-10\n";
        let trajectory = parse_trajectory(text).unwrap();
        let log = parse_log(CLEAN_LOG);
        let report = judge_run(&plan, &scene, &trajectory, &log).unwrap();
        assert_eq!(report.failures[0].category, FailureCategory::ObjectSettlement);
        assert!(report.failures[0].evidence.contains("tunnelling"));
    }

    #[test]
    fn divergence_is_rejected() {
        let (plan, scene) = fixture();
        let text = "t,name,px,py,pz\n0.0,robot,0,0,0.2\n0.1,robot,2000,0,0.2\n";
        let trajectory = parse_trajectory(text).unwrap();
        let log = parse_log(CLEAN_LOG);
        let report = judge_run(&plan, &scene, &trajectory, &log).unwrap();
        assert!(report.failures[0].evidence.contains("divergence"));
    }

    #[test]
    fn dirty_log_is_runtime_error_and_checked_first() {
        let (plan, scene) = fixture();
        // Even with a bad trajectory, the runtime category wins.
        let text = "t,name,px,py,pz\n0.0,robot,0,0,0.2\n0.1,robot,0,0,-10\n";
        let trajectory = parse_trajectory(text).unwrap();
        let log = parse_log("ERROR | solver exploded\n");
        let report = judge_run(&plan, &scene, &trajectory, &log).unwrap();
        assert!(report
            .failures
            .iter()
            .all(|f| f.category == FailureCategory::RuntimeError));
    }

    #[test]
    fn fixed_body_drift_is_flagged() {
        let (plan, scene) = fixture();
        let text = "\
t,name,px,py,pz
0.0,robot,0,0,0.2
0.0,floor,0,0,-0.05
0.1,robot,0.5,0,0.2
0.1,floor,0.3,0,-0.05
";
        let trajectory = parse_trajectory(text).unwrap();
        let log = parse_log(CLEAN_LOG);
        let report = judge_run(&plan, &scene, &trajectory, &log).unwrap();
        assert!(report
            .failures
            .iter()
            .any(|f| f.subject == "floor" && f.evidence.contains("fixed body drifted")));
    }

    #[test]
    fn unknown_trajectory_object_is_an_error() {
        let (plan, scene) = fixture();
        let text = "t,name,px,py,pz\n0.0,gremlin,0,0,0\n0.1,robot,0,0,0.2\n";
        let trajectory = parse_trajectory(text).unwrap();
        let log = parse_log(CLEAN_LOG);
        let err = judge_run(&plan, &scene, &trajectory, &log).unwrap_err();
        assert_eq!(
            err,
            JudgeError::UnknownTrajectoryObjects(vec!["gremlin".into()])
        );
    }

    #[test]
    fn reports_are_byte_identical_across_runs() {
        let (plan, scene) = fixture();
        let trajectory = parse_trajectory(&walk_trajectory(0.003)).unwrap();
        let log = parse_log(CLEAN_LOG);
        let a = judge_run(&plan, &scene, &trajectory, &log).unwrap().to_json();
        let b = judge_run(&plan, &scene, &trajectory, &log).unwrap().to_json();
        assert_eq!(a, b);
    }
}
