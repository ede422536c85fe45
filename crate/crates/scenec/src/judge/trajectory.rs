//! Trajectory-file parsing.
//!
//! Delimited text with header `t,name,px,py,pz` or
//! `t,name,px,py,pz,vx,vy,vz`, one row per object per sample. Time must
//! be strictly increasing per object and every value finite.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::geometry::Vec3;

#[derive(Debug, Error, PartialEq)]
pub enum TrajectoryError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("trajectory has no samples")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub position: Vec3,
    pub velocity: Option<Vec3>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trajectory {
    pub series: BTreeMap<String, Vec<TrajectorySample>>,
    pub has_velocity: bool,
}

impl Trajectory {
    pub fn object_names(&self) -> impl Iterator<Item = &str> {
        self.series.keys().map(String::as_str)
    }

    /// Largest displacement from the first sample, Euclidean.
    pub fn max_displacement(&self, name: &str) -> Option<f64> {
        let samples = self.series.get(name)?;
        let first = samples.first()?.position;
        Some(
            samples
                .iter()
                .map(|s| (s.position - first).norm())
                .fold(0.0, f64::max),
        )
    }

    pub fn final_position(&self, name: &str) -> Option<Vec3> {
        self.series.get(name)?.last().map(|s| s.position)
    }
}

fn err(line: usize, message: impl Into<String>) -> TrajectoryError {
    TrajectoryError::Format { line, message: message.into() }
}

pub fn parse_trajectory(text: &str) -> Result<Trajectory, TrajectoryError> {
    let mut lines = text.lines().enumerate();
    let header = loop {
        match lines.next() {
            Some((_, raw)) if raw.trim().is_empty() => continue,
            Some((i, raw)) => break (i + 1, raw.trim()),
            None => return Err(TrajectoryError::Empty),
        }
    };
    let has_velocity = match header.1 {
        "t,name,px,py,pz" => false,
        "t,name,px,py,pz,vx,vy,vz" => true,
        other => {
            return Err(err(
                header.0,
                format!("unrecognized header `{other}`; expected `t,name,px,py,pz[,vx,vy,vz]`"),
            ))
        }
    };
    let expected_fields = if has_velocity { 8 } else { 5 };

    let mut trajectory = Trajectory { series: BTreeMap::new(), has_velocity };
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != expected_fields {
            return Err(err(
                line_no,
                format!("expected {expected_fields} fields, got {}", fields.len()),
            ));
        }
        let number = |s: &str, what: &str| -> Result<f64, TrajectoryError> {
            let v: f64 = s
                .trim()
                .parse()
                .map_err(|_| err(line_no, format!("{what} `{s}` is not a number")))?;
            if !v.is_finite() {
                return Err(err(line_no, format!("{what} must be finite")));
            }
            Ok(v)
        };
        let t = number(fields[0], "time")?;
        let name = fields[1].trim().to_string();
        if name.is_empty() {
            return Err(err(line_no, "object name is empty"));
        }
        let position = Vec3::new(
            number(fields[2], "px")?,
            number(fields[3], "py")?,
            number(fields[4], "pz")?,
        );
        let velocity = if has_velocity {
            Some(Vec3::new(
                number(fields[5], "vx")?,
                number(fields[6], "vy")?,
                number(fields[7], "vz")?,
            ))
        } else {
            None
        };
        let series = trajectory.series.entry(name.clone()).or_default();
        if let Some(last) = series.last() {
            if t <= last.t {
                return Err(err(
                    line_no,
                    format!("time {t} for `{name}` does not increase past {}", last.t),
                ));
            }
        }
        series.push(TrajectorySample { t, position, velocity });
    }
    if trajectory.series.is_empty() {
        return Err(TrajectoryError::Empty);
    }
    Ok(trajectory)
}
