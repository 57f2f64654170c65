use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{minutes, Minutes, Scenario};
use crate::error::ScheduleError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActivityKind {
    /// Equipment or truck movement towards the aircraft; scheduled as late as
    /// its successors allow.
    Positioning,
    Service,
    Removal,
    /// Stretches from its earliest start to the start of its first successor.
    Elastic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Activity {
    pub id: String,
    /// Minutes; the minimum for an elastic activity.
    pub duration: Minutes,
    pub kind: ActivityKind,
    /// `(predecessor id, lag)`: this activity starts no earlier than the
    /// predecessor's end plus the lag.
    pub predecessors: Vec<(String, Minutes)>,
}

impl Activity {
    pub fn new(id: impl Into<String>, duration: Minutes, kind: ActivityKind) -> Self {
        Activity { id: id.into(), duration, kind, predecessors: Vec::new() }
    }

    pub fn after(mut self, pred: impl Into<String>) -> Self {
        self.predecessors.push((pred.into(), Minutes::from_integer(0)));
        self
    }

    pub fn after_all<S: AsRef<str>>(mut self, preds: &[S]) -> Self {
        for p in preds {
            self = self.after(p.as_ref());
        }
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Network {
    pub activities: Vec<Activity>,
}

impl Network {
    pub fn new(activities: Vec<Activity>) -> Self {
        Network { activities }
    }

    pub fn get(&self, id: &str) -> Option<&Activity> {
        self.activities.iter().find(|a| a.id == id)
    }

    pub fn get_mut(&mut self, id: &str) -> Option<&mut Activity> {
        self.activities.iter_mut().find(|a| a.id == id)
    }
}

pub const EQUIPMENT_POSITIONING: &str = "Equipment positioning";
pub const CLEANING: &str = "Cleaning";
pub const LPS: &str = "LPS + headcounting";
pub const REMOVE_EQUIPMENT: &str = "Remove equipment";
pub const FUEL_TRANSFER: &str = "Fuel transfer";

/// Duration of every activity the scenario produces, keyed by activity id.
/// Empty cargo bays are listed with zero exchange times.
pub fn activity_durations(scenario: &Scenario) -> Result<BTreeMap<String, Minutes>, ScheduleError> {
    let mut out: BTreeMap<String, Minutes> = build_network(scenario)?
        .activities
        .into_iter()
        .map(|a| (a.id, a.duration))
        .collect();
    if let Some(c) = &scenario.cargo {
        for (bay, n) in [("FWD", c.fwd_containers), ("AFT", c.aft_containers)] {
            if n == 0 {
                out.insert(format!("Cargo {bay} unloading"), Minutes::from_integer(0));
                out.insert(format!("Cargo {bay} loading"), Minutes::from_integer(0));
            }
        }
    }
    Ok(out)
}

/// Activity network of one turnaround.
///
/// Passengers leave after equipment positioning; cleaning, catering
/// exchanges and, when passengers are barred, the fuel transfer all follow
/// deplaning and all precede boarding. LPS and headcounting follow boarding,
/// then the equipment is removed. Cargo runs in parallel.
pub fn build_network(scenario: &Scenario) -> Result<Network, ScheduleError> {
    scenario.validate()?;
    use ActivityKind::*;
    let s = scenario;
    let mut acts = Vec::new();
    acts.push(Activity::new(EQUIPMENT_POSITIONING, minutes(s.equipment_positioning)?, Positioning));

    let pax = Minutes::from_integer(s.passengers as i128);
    let shares: Vec<Minutes> = match &s.door_shares {
        Some(v) => v.iter().map(|x| minutes(*x)).collect::<Result<_, _>>()?,
        None => vec![Minutes::new(1, s.doors.len() as i128); s.doors.len()],
    };
    let deplaning: Vec<String> = s.doors.iter().map(|d| format!("Deplaning {d}")).collect();
    let boarding: Vec<String> = s.doors.iter().map(|d| format!("Boarding {d}")).collect();
    for (id, share) in deplaning.iter().zip(&shares) {
        acts.push(Activity::new(id, pax * share / minutes(s.deplaning_rate)?, Service).after(EQUIPMENT_POSITIONING));
    }
    acts.push(Activity::new(CLEANING, minutes(s.cleaning_min)?, Elastic).after_all(&deplaning));

    let mut before_boarding = vec![CLEANING.to_string()];

    if let Some(c) = &s.catering {
        let rate = minutes(c.trolley_exchange)?;
        let floor = c.min_time.map(minutes).transpose()?.unwrap_or(Minutes::from_integer(0));
        let served: Vec<_> = c.doors.iter().filter(|d| d.fste > 0).collect();
        for truck in 0..c.trucks as usize {
            let route: Vec<_> = served.iter().skip(truck).step_by(c.trucks as usize).collect();
            let mut prev: Option<String> = None;
            for (i, d) in route.iter().enumerate() {
                let pos = format!("Catering positioning {}", d.door);
                let exchange = format!("Catering exchange {}", d.door);
                let removal = format!("Catering removal {}", d.door);
                let mut p = Activity::new(&pos, minutes(c.positioning)?, Positioning);
                if let Some(prev) = prev.take() {
                    p = p.after(prev);
                }
                acts.push(p);
                let duration = (Minutes::from_integer(d.fste as i128) * rate).max(floor);
                acts.push(Activity::new(&exchange, duration, Service).after(&pos).after_all(&deplaning));
                acts.push(Activity::new(&removal, minutes(c.removal)?, Removal).after(&exchange));
                before_boarding.push(exchange);
                if let Some(next) = route.get(i + 1) {
                    let drive = format!("Catering drive {}-{}", d.door, next.door);
                    acts.push(Activity::new(&drive, minutes(c.drive)?, Positioning).after(&removal));
                    prev = Some(drive);
                }
            }
        }
    }

    if let Some(r) = &s.refuelling {
        let truck = minutes(r.truck_positioning)?;
        let hose = minutes(r.connection)?;
        acts.push(Activity::new("Refuelling truck positioning", truck, Positioning));
        acts.push(Activity::new("Refuelling connection", hose, Positioning).after("Refuelling truck positioning"));
        let mut transfer = Activity::new(FUEL_TRANSFER, minutes(r.quantity)? / minutes(r.flow)?, Service)
            .after("Refuelling connection");
        if !r.passengers_on_board {
            transfer = transfer.after_all(&deplaning);
            before_boarding.push(FUEL_TRANSFER.to_string());
        }
        acts.push(transfer);
        acts.push(Activity::new("Refuelling disconnection", hose, Removal).after(FUEL_TRANSFER));
        acts.push(Activity::new("Refuelling truck removal", truck, Removal).after("Refuelling disconnection"));
    }

    for (id, share) in boarding.iter().zip(&shares) {
        acts.push(Activity::new(id, pax * share / minutes(s.boarding_rate)?, Service).after_all(&before_boarding));
    }
    acts.push(Activity::new(LPS, minutes(s.lps_headcounting)?, Service).after_all(&boarding));
    acts.push(Activity::new(REMOVE_EQUIPMENT, minutes(s.equipment_removal)?, Removal).after(LPS));

    if let Some(c) = &s.cargo {
        for (bay, n) in [("FWD", c.fwd_containers), ("AFT", c.aft_containers)] {
            if n == 0 {
                continue;
            }
            let n = Minutes::from_integer(n as i128);
            let ids = ["positioning", "unloading", "loading", "removal"].map(|p| format!("Cargo {bay} {p}"));
            acts.push(Activity::new(&ids[0], minutes(c.positioning)?, Positioning));
            acts.push(Activity::new(&ids[1], n * minutes(c.unloading_rate)?, Service).after(&ids[0]));
            acts.push(Activity::new(&ids[2], n * minutes(c.loading_rate)?, Service).after(&ids[1]));
            acts.push(Activity::new(&ids[3], minutes(c.removal)?, Removal).after(&ids[2]));
        }
    }
    Ok(Network::new(acts))
}
