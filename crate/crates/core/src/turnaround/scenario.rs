use serde::{Deserialize, Serialize};

use crate::error::ScheduleError;

const PRESETS: &[(&str, &str)] = &[
    ("a320_full", include_str!("../../data/scenarios/a320_full.toml")),
    ("a320_outstation", include_str!("../../data/scenarios/a320_outstation.toml")),
    ("prp_full", include_str!("../../data/scenarios/prp_full.toml")),
    ("prp_outstation", include_str!("../../data/scenarios/prp_outstation.toml")),
];

/// Reference conditions of one turnaround. Times are minutes, rates are
/// passengers per minute per door.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub passengers: u32,
    #[serde(default)]
    pub load_factor: Option<f64>,
    /// Passenger doors, e.g. `["1L", "3L"]`.
    pub doors: Vec<String>,
    /// Share of passengers per door; equal split when absent.
    #[serde(default)]
    pub door_shares: Option<Vec<f64>>,
    pub equipment_positioning: f64,
    pub equipment_removal: f64,
    pub boarding_rate: f64,
    pub deplaning_rate: f64,
    pub lps_headcounting: f64,
    /// Cleaning fills the gap between deplaning and boarding; this is its floor.
    #[serde(default)]
    pub cleaning_min: f64,
    #[serde(default)]
    pub cargo: Option<CargoSpec>,
    #[serde(default)]
    pub refuelling: Option<RefuellingSpec>,
    #[serde(default)]
    pub catering: Option<CateringSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CargoSpec {
    pub positioning: f64,
    pub removal: f64,
    pub fwd_containers: u32,
    pub aft_containers: u32,
    /// Minutes per container.
    pub unloading_rate: f64,
    /// Minutes per container.
    pub loading_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RefuellingSpec {
    /// Cubic metres.
    pub quantity: f64,
    /// Cubic metres per minute.
    pub flow: f64,
    /// Truck positioning, and removal.
    pub truck_positioning: f64,
    /// Hose connection, and disconnection.
    pub connection: f64,
    pub passengers_on_board: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CateringSpec {
    pub trucks: u32,
    pub positioning: f64,
    pub removal: f64,
    pub drive: f64,
    /// Minutes per FSTE.
    pub trolley_exchange: f64,
    #[serde(default)]
    pub min_time: Option<f64>,
    /// Served in this order; doors with no trolleys are skipped.
    pub doors: Vec<CateringDoor>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CateringDoor {
    pub door: String,
    pub fste: u32,
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Self, ScheduleError> {
        let s: Scenario = toml::from_str(text).map_err(|e| ScheduleError::Validation(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    /// Per-door passenger shares, equal when not given.
    pub fn shares(&self) -> Vec<f64> {
        match &self.door_shares {
            Some(s) => s.clone(),
            None => vec![1.0 / self.doors.len().max(1) as f64; self.doors.len()],
        }
    }

    pub fn validate(&self) -> Result<(), ScheduleError> {
        let bad = |m: String| Err(ScheduleError::Validation(m));
        if self.passengers == 0 {
            return bad("passengers must be positive".into());
        }
        if self.doors.is_empty() {
            return bad("at least one passenger door is required".into());
        }
        if let Some(lf) = self.load_factor {
            if !(lf > 0.0 && lf <= 1.0) {
                return bad(format!("load factor {lf} is outside (0, 1]"));
            }
        }
        if let Some(shares) = &self.door_shares {
            if shares.len() != self.doors.len() {
                return bad(format!("{} door shares for {} doors", shares.len(), self.doors.len()));
            }
            if shares.iter().any(|s| !s.is_finite() || *s <= 0.0) {
                return bad("door shares must be positive".into());
            }
            let total = shares
                .iter()
                .map(|s| super::minutes(*s))
                .sum::<Result<super::Minutes, _>>()?;
            if total != super::Minutes::from_integer(1) {
                return bad(format!("door shares sum to {total}, not 1"));
            }
        }
        positive("boarding_rate", self.boarding_rate)?;
        positive("deplaning_rate", self.deplaning_rate)?;
        non_negative("equipment_positioning", self.equipment_positioning)?;
        non_negative("equipment_removal", self.equipment_removal)?;
        non_negative("lps_headcounting", self.lps_headcounting)?;
        non_negative("cleaning_min", self.cleaning_min)?;
        if let Some(c) = &self.cargo {
            non_negative("cargo.positioning", c.positioning)?;
            non_negative("cargo.removal", c.removal)?;
            positive("cargo.unloading_rate", c.unloading_rate)?;
            positive("cargo.loading_rate", c.loading_rate)?;
        }
        if let Some(r) = &self.refuelling {
            positive("refuelling.quantity", r.quantity)?;
            positive("refuelling.flow", r.flow)?;
            non_negative("refuelling.truck_positioning", r.truck_positioning)?;
            non_negative("refuelling.connection", r.connection)?;
        }
        if let Some(c) = &self.catering {
            if c.trucks == 0 {
                return bad("catering needs at least one truck".into());
            }
            non_negative("catering.positioning", c.positioning)?;
            non_negative("catering.removal", c.removal)?;
            non_negative("catering.drive", c.drive)?;
            positive("catering.trolley_exchange", c.trolley_exchange)?;
            if let Some(m) = c.min_time {
                non_negative("catering.min_time", m)?;
            }
        }
        Ok(())
    }
}

fn positive(name: &str, v: f64) -> Result<(), ScheduleError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(ScheduleError::Validation(format!("{name} must be positive, got {v}")))
    }
}

fn non_negative(name: &str, v: f64) -> Result<(), ScheduleError> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(ScheduleError::Validation(format!("{name} must be non-negative, got {v}")))
    }
}

/// One of the shipped scenarios by name.
pub fn preset(name: &str) -> Option<Scenario> {
    let name = name.strip_suffix(".toml").unwrap_or(name);
    PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| Scenario::from_toml(text).expect("shipped scenario is valid"))
}

pub fn preset_names() -> Vec<&'static str> {
    PRESETS.iter().map(|(n, _)| *n).collect()
}
