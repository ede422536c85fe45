//! Execution-log parsing.
//!
//! The log format is `LEVEL | message` lines plus the completion
//! sentinel `SIM_DONE`. Unknown lines are ignored but counted, never a
//! parse failure.

use serde::Serialize;

pub const COMPLETION_SENTINEL: &str = "SIM_DONE";

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct LogSummary {
    pub ran_to_completion: bool,
    pub runtime_errors: usize,
    pub solver_warnings: usize,
    pub info_lines: usize,
    pub unknown_lines: usize,
    /// First-occurrence excerpts per severity.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_warning: Option<String>,
}

/// Summarize a simulator log.
pub fn parse_log(text: &str) -> LogSummary {
    let mut summary = LogSummary::default();
    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line == COMPLETION_SENTINEL {
            summary.ran_to_completion = true;
            continue;
        }
        match line.split_once('|') {
            Some((level, message)) => {
                let message = message.trim();
                match level.trim() {
                    "ERROR" => {
                        summary.runtime_errors += 1;
                        if summary.first_error.is_none() {
                            summary.first_error = Some(message.to_string());
                        }
                    }
                    "WARN" | "WARNING" => {
                        summary.solver_warnings += 1;
                        if summary.first_warning.is_none() {
                            summary.first_warning = Some(message.to_string());
                        }
                    }
                    "INFO" | "DEBUG" => summary.info_lines += 1,
                    _ => summary.unknown_lines += 1,
                }
            }
            None => summary.unknown_lines += 1,
        }
    }
    summary
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_run_completes() {
        let summary = parse_log("INFO | starting\nINFO | step 100\nSIM_DONE\n");
        assert!(summary.ran_to_completion);
        assert_eq!(summary.runtime_errors, 0);
        assert_eq!(summary.solver_warnings, 0);
        assert_eq!(summary.info_lines, 2);
    }

    #[test]
    fn error_lines_are_counted_with_excerpt() {
        let summary = parse_log("INFO | ok\nERROR | solver diverged at t=0.5\nSIM_DONE\n");
        assert_eq!(summary.runtime_errors, 1);
        assert_eq!(summary.first_error.as_deref(), Some("solver diverged at t=0.5"));
    }

    #[test]
    fn warnings_only_still_complete() {
        let summary =
            parse_log("WARN | contact stiffness clipped\nWARN | small step\nSIM_DONE\n");
        assert!(summary.ran_to_completion);
        assert_eq!(summary.solver_warnings, 2);
        assert_eq!(summary.first_warning.as_deref(), Some("contact stiffness clipped"));
    }

    #[test]
    fn missing_sentinel_means_incomplete() {
        let summary = parse_log("INFO | starting\nERROR | segfault\n");
        assert!(!summary.ran_to_completion);
    }

    #[test]
    fn unknown_lines_are_counted_not_fatal() {
        let summary = parse_log("stray text\nNOTICE | odd level\nSIM_DONE\n");
        assert!(summary.ran_to_completion);
        assert_eq!(summary.unknown_lines, 2);
    }
}
