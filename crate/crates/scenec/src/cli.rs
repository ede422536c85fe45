//! Batch front-end: compile plans, check generated code, judge runs.
//!
//! Exit codes are stable across subcommands: 0 success, 1 validation or
//! judge failure, 2 usage/configuration error (unreadable inputs,
//! malformed indices). Everything written is reproducible bit-for-bit
//! given identical inputs and seeds; files go through a temp-and-rename
//! so partial output never lands under the target name.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::api::{extract_call_sites, load_api_index, validate_calls};
use crate::catalog::{load_catalog, lookup_issues, AssetCatalog};
use crate::emit::{emit_scene, emit_skeleton, read_scene_doc, scene_from_doc};
use crate::judge::{judge_run, parse_log, parse_trajectory};
use crate::plan::{
    apply_defaults, parse_plan, serialize_plan, validate_schema, IssueSeverity, SchemaIssue,
};
use crate::resolver::{resolve_scene_with, ResolveOptions};
use crate::validator::{check_scene, is_clean, Violation};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "scenec",
    version,
    about = "Compile declarative simulation plans into metric scenes, validate generated code, judge runs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compile a plan into a resolved scene, report, and script skeleton.
    Compile {
        /// Plan document path.
        #[arg(long)]
        plan: PathBuf,
        /// Asset catalog path (JSON).
        #[arg(long, env = "SCENEC_CATALOG")]
        catalog: Option<PathBuf>,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        /// Write the simulator-script skeleton (on/off).
        #[arg(long, default_value = "on", value_parser = parse_switch, action = clap::ArgAction::Set)]
        emit_skeleton: bool,
        /// Fallback seed for seeded draws the plan leaves open.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Statically validate a generated script against an API index.
    CheckApi {
        /// Script path.
        #[arg(long)]
        source: PathBuf,
        /// API index path (JSON).
        #[arg(long)]
        index: PathBuf,
    },
    /// Judge an executed run from its trajectory and log.
    Judge {
        /// Plan document path.
        #[arg(long)]
        plan: PathBuf,
        /// Resolved-scene document path (from compile).
        #[arg(long)]
        scene: PathBuf,
        /// Trajectory file path (CSV).
        #[arg(long)]
        traj: PathBuf,
        /// Execution log path.
        #[arg(long)]
        log: PathBuf,
        /// Also write the report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_switch(s: &str) -> Result<bool, String> {
    match s {
        "on" | "true" => Ok(true),
        "off" | "false" => Ok(false),
        other => Err(format!("expected on/off, got `{other}`")),
    }
}

pub fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Compile { plan, catalog, out, emit_skeleton, seed } => {
            cmd_compile(&plan, catalog.as_deref(), &out, emit_skeleton, seed)
        }
        Command::CheckApi { source, index } => cmd_check_api(&source, &index),
        Command::Judge { plan, scene, traj, log, out } => {
            cmd_judge(&plan, &scene, &traj, &log, out.as_deref())
        }
    }
}

/// Everything the compile step learned, written next to the scene.
#[derive(Debug, Serialize)]
struct CompileReport<'a> {
    verdict: &'a str,
    schema_issues: &'a [SchemaIssue],
    violations: &'a [Violation],
    warnings: Vec<String>,
}

pub fn cmd_compile(
    plan_path: &Path,
    catalog_path: Option<&Path>,
    out_dir: &Path,
    with_skeleton: bool,
    seed: Option<u64>,
) -> i32 {
    let text = match fs::read_to_string(plan_path) {
        Ok(text) => text,
        Err(err) => return config_error(format!("cannot read plan {}: {err}", plan_path.display())),
    };
    let catalog = match catalog_path {
        Some(path) => match fs::read_to_string(path) {
            Ok(text) => match load_catalog(&text) {
                Ok(catalog) => catalog,
                Err(err) => return config_error(format!("catalog: {err}")),
            },
            Err(err) => {
                return config_error(format!("cannot read catalog {}: {err}", path.display()))
            }
        },
        None => AssetCatalog::empty(),
    };

    // Plans arrive either in the text grammar or as the JSON
    // interchange dump; the extension picks the reader.
    let parsed = if plan_path.extension().is_some_and(|e| e == "json") {
        match crate::plan::plan_from_json(&text) {
            Ok(plan) => crate::plan::ParsedPlan { plan, warnings: Vec::new() },
            Err(err) => {
                eprintln!("plan error: {err}");
                return EXIT_FAILED;
            }
        }
    } else {
        match parse_plan(&text) {
            Ok(parsed) => parsed,
            Err(err) => {
                eprintln!("plan error: {err}");
                return EXIT_FAILED;
            }
        }
    };
    for warning in &parsed.warnings {
        eprintln!("warning: {}: {}", warning.loc, warning.message);
    }

    let mut issues = validate_schema(&parsed.plan);
    issues.extend(lookup_issues(&parsed.plan, &catalog));
    for issue in &issues {
        let subject = issue.subject.as_deref().unwrap_or("plan");
        match issue.severity {
            IssueSeverity::Fatal => eprintln!("fatal: {subject}: {}", issue.message),
            IssueSeverity::NeedsClarification => {
                eprintln!("needs clarification: {subject}: {}", issue.message)
            }
            IssueSeverity::Defaultable => {
                eprintln!("default applied: {subject}: {}", issue.message)
            }
        }
    }
    let compilable = issues.iter().all(|i| i.severity == IssueSeverity::Defaultable);
    let plan = apply_defaults(&parsed.plan, &issues);

    if !compilable {
        let report = CompileReport {
            verdict: "failed",
            schema_issues: &issues,
            violations: &[],
            warnings: parsed.warnings.iter().map(warning_line).collect(),
        };
        let _ = write_compile_report(out_dir, &report);
        return EXIT_FAILED;
    }

    let options = ResolveOptions { default_seed: seed };
    let scene = match resolve_scene_with(&plan, &catalog, &options) {
        Ok(scene) => scene,
        Err(err) => {
            eprintln!("resolve error: {err}");
            let report = CompileReport {
                verdict: "failed",
                schema_issues: &issues,
                violations: &[],
                warnings: vec![format!("resolve error: {err}")],
            };
            let _ = write_compile_report(out_dir, &report);
            return EXIT_FAILED;
        }
    };

    let violations = check_scene(&scene, &plan, &catalog);
    for violation in &violations {
        let tag = if violation.advisory { "advisory" } else { "violation" };
        eprintln!("{tag}: {:?}: {}", violation.check_id, violation.message);
    }

    let clean = is_clean(&violations);
    let report = CompileReport {
        verdict: if clean { "ok" } else { "failed" },
        schema_issues: &issues,
        violations: &violations,
        warnings: parsed.warnings.iter().map(warning_line).collect(),
    };

    if let Err(err) = fs::create_dir_all(out_dir) {
        return config_error(format!("cannot create {}: {err}", out_dir.display()));
    }
    let scene_text = emit_scene(&scene, &plan, &catalog);
    if let Err(err) = write_atomic(&out_dir.join("scene.json"), &scene_text) {
        return config_error(err);
    }
    if let Err(err) = write_atomic(&out_dir.join("plan.canonical.plan"), &serialize_plan(&plan)) {
        return config_error(err);
    }
    if let Err(err) = write_compile_report(out_dir, &report) {
        return config_error(err);
    }
    if with_skeleton {
        let skeleton = emit_skeleton(&scene, &plan, &catalog);
        if let Err(err) = write_atomic(&out_dir.join("skeleton.py"), &skeleton) {
            return config_error(err);
        }
    }
    println!(
        "compiled {} bodies, {} cameras, {} free surface(s); verdict {}",
        scene.bodies.len(),
        scene.cameras.len(),
        scene.free_surfaces.len(),
        report.verdict
    );
    if clean {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

pub fn cmd_check_api(source_path: &Path, index_path: &Path) -> i32 {
    let source = match fs::read_to_string(source_path) {
        Ok(text) => text,
        Err(err) => {
            return config_error(format!("cannot read source {}: {err}", source_path.display()))
        }
    };
    let index_text = match fs::read_to_string(index_path) {
        Ok(text) => text,
        Err(err) => {
            return config_error(format!("cannot read index {}: {err}", index_path.display()))
        }
    };
    let index = match load_api_index(&index_text) {
        Ok(index) => index,
        Err(err) => return config_error(format!("index: {err}")),
    };
    let extraction = match extract_call_sites(&source) {
        Ok(extraction) => extraction,
        Err(err) => {
            eprintln!("source error: {err}");
            return EXIT_FAILED;
        }
    };
    let report = validate_calls(&extraction, &index);
    eprintln!(
        "checked {} call site(s) against {}: {} finding(s)",
        report.sites_checked,
        report.index_version,
        report.findings.len()
    );
    for finding in &report.findings {
        eprintln!(
            "  line {}, col {}: {:?}: {}",
            finding.site.line, finding.site.col, finding.finding, finding.message
        );
    }
    // The machine-readable verdict goes to stdout in the same report
    // envelope the judge uses.
    print!("{}", crate::judge::ErrorReport::from_api_report(0, &report).to_json());
    if report.is_clean() {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

pub fn cmd_judge(
    plan_path: &Path,
    scene_path: &Path,
    traj_path: &Path,
    log_path: &Path,
    out_path: Option<&Path>,
) -> i32 {
    let read = |path: &Path| -> Result<String, i32> {
        fs::read_to_string(path)
            .map_err(|err| config_error(format!("cannot read {}: {err}", path.display())))
    };
    let plan_text = match read(plan_path) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let scene_text = match read(scene_path) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let traj_text = match read(traj_path) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let log_text = match read(log_path) {
        Ok(t) => t,
        Err(code) => return code,
    };

    let plan = match parse_plan(&plan_text) {
        Ok(parsed) => parsed.plan,
        Err(err) => {
            eprintln!("plan error: {err}");
            return EXIT_FAILED;
        }
    };
    let scene = match read_scene_doc(&scene_text).map_err(|e| e.to_string()).and_then(|doc| {
        scene_from_doc(&doc).map_err(|e| e.to_string())
    }) {
        Ok(scene) => scene,
        Err(err) => {
            eprintln!("scene error: {err}");
            return EXIT_FAILED;
        }
    };
    let trajectory = match parse_trajectory(&traj_text) {
        Ok(trajectory) => trajectory,
        Err(err) => {
            eprintln!("trajectory error: {err}");
            return EXIT_FAILED;
        }
    };
    let log = parse_log(&log_text);

    let report = match judge_run(&plan, &scene, &trajectory, &log) {
        Ok(report) => report,
        Err(err) => {
            eprintln!("judge error: {err}");
            return EXIT_FAILED;
        }
    };
    let json = report.to_json();
    print!("{json}");
    if let Some(path) = out_path {
        if let Err(err) = write_atomic(path, &json) {
            return config_error(err);
        }
    }
    if report.is_accept() {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

fn warning_line(warning: &crate::plan::Warning) -> String {
    format!("{}: {}", warning.loc, warning.message)
}

fn write_compile_report(out_dir: &Path, report: &CompileReport<'_>) -> Result<(), String> {
    fs::create_dir_all(out_dir)
        .map_err(|err| format!("cannot create {}: {err}", out_dir.display()))?;
    let mut text = serde_json::to_string_pretty(report).expect("report serializes");
    text.push('\n');
    write_atomic(&out_dir.join("report.json"), &text)
}

/// Write through a temp file and rename, so readers never see a torn
/// file under the final name.
fn write_atomic(path: &Path, contents: &str) -> Result<(), String> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, contents).map_err(|err| format!("cannot write {}: {err}", tmp.display()))?;
    fs::rename(&tmp, path)
        .map_err(|err| format!("cannot rename into {}: {err}", path.display()))
}

fn config_error(message: String) -> i32 {
    eprintln!("error: {message}");
    EXIT_CONFIG
}
