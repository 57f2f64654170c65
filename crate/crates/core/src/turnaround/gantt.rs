use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{to_f64, ActivityKind, Schedule};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GanttRow {
    pub activity: String,
    pub start_min: f64,
    pub end_min: f64,
    pub critical: bool,
    pub kind: ActivityKind,
}

/// One bar per activity, in network order.
pub fn export_gantt(schedule: &Schedule) -> Vec<GanttRow> {
    schedule
        .activities
        .iter()
        .map(|a| GanttRow {
            activity: a.id.clone(),
            start_min: to_f64(a.start),
            end_min: to_f64(a.end),
            critical: a.critical,
            kind: a.kind,
        })
        .collect()
}

pub fn write_gantt_csv<W: Write>(rows: &[GanttRow], writer: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(writer);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_gantt_json<W: Write>(rows: &[GanttRow], writer: W) -> serde_json::Result<()> {
    serde_json::to_writer_pretty(writer, rows)
}
