//! Turnaround activity network, critical-path scheduling and Gantt export.
//!
//! All durations are exact rational minutes.

mod cpm;
mod gantt;
mod network;
mod scenario;

pub use cpm::{cpm_schedule, ScheduledActivity, Schedule};
pub use gantt::{export_gantt, write_gantt_csv, write_gantt_json, GanttRow};
pub use network::{activity_durations, build_network, Activity, ActivityKind, Network};
pub use scenario::{preset, preset_names, CargoSpec, CateringDoor, CateringSpec, RefuellingSpec, Scenario};

use num_rational::Ratio;

use crate::error::ScheduleError;

pub type Minutes = Ratio<i128>;

/// Exact value of the shortest decimal representation of `x`, so that
/// `18.7` becomes 187/10 rather than the nearest binary fraction.
pub fn minutes(x: f64) -> Result<Minutes, ScheduleError> {
    if !x.is_finite() {
        return Err(ScheduleError::Validation(format!("{x} is not a finite number of minutes")));
    }
    let text = format!("{x}");
    let (neg, digits) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.as_str()),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    let overflow = || ScheduleError::Validation(format!("{x} minutes is out of range"));
    let mut numer: i128 = 0;
    let mut denom: i128 = 1;
    for c in int.chars().chain(frac.chars()) {
        let d = c.to_digit(10).ok_or_else(overflow)? as i128;
        numer = numer.checked_mul(10).and_then(|n| n.checked_add(d)).ok_or_else(overflow)?;
    }
    for _ in 0..frac.len() {
        denom = denom.checked_mul(10).ok_or_else(overflow)?;
    }
    Ok(Ratio::new(if neg { -numer } else { numer }, denom))
}

pub fn to_f64(m: Minutes) -> f64 {
    *m.numer() as f64 / *m.denom() as f64
}
