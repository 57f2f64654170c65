use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{ActivityKind, Minutes, Network};
use crate::error::ScheduleError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduledActivity {
    pub id: String,
    pub kind: ActivityKind,
    pub duration: Minutes,
    /// Displayed bar: earliest start, except positioning (as late as
    /// possible) and elastic activities (stretched to their successors).
    pub start: Minutes,
    pub end: Minutes,
    pub earliest_start: Minutes,
    pub latest_start: Minutes,
    /// Total slack.
    pub slack: Minutes,
    pub critical: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    /// In network order.
    pub activities: Vec<ScheduledActivity>,
    pub tat: Minutes,
    /// Zero-slack activities ordered by earliest start.
    pub critical_path: Vec<String>,
}

impl Schedule {
    pub fn get(&self, id: &str) -> Option<&ScheduledActivity> {
        self.activities.iter().find(|a| a.id == id)
    }
}

/// Forward and backward passes over an acyclic activity network.
pub fn cpm_schedule(network: &Network) -> Result<Schedule, ScheduleError> {
    let acts = &network.activities;
    let n = acts.len();
    let zero = Minutes::from_integer(0);
    let mut index = HashMap::with_capacity(n);
    for (i, a) in acts.iter().enumerate() {
        if index.insert(a.id.as_str(), i).is_some() {
            return Err(ScheduleError::Validation(format!("duplicate activity `{}`", a.id)));
        }
        if a.duration < zero {
            return Err(ScheduleError::Validation(format!("`{}` has a negative duration", a.id)));
        }
    }
    // preds[i] = (j, lag) with j preceding i; succs mirrors it.
    let mut preds: Vec<Vec<(usize, Minutes)>> = vec![Vec::new(); n];
    let mut succs: Vec<Vec<(usize, Minutes)>> = vec![Vec::new(); n];
    for (i, a) in acts.iter().enumerate() {
        for (p, lag) in &a.predecessors {
            let j = *index.get(p.as_str()).ok_or_else(|| ScheduleError::UnknownActivity(p.clone()))?;
            if *lag < zero {
                return Err(ScheduleError::Validation(format!("negative lag on `{p}` -> `{}`", a.id)));
            }
            preds[i].push((j, *lag));
            succs[j].push((i, *lag));
        }
    }

    let mut indegree: Vec<usize> = preds.iter().map(Vec::len).collect();
    let mut order: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut head = 0;
    while head < order.len() {
        let i = order[head];
        head += 1;
        for &(s, _) in &succs[i] {
            indegree[s] -= 1;
            if indegree[s] == 0 {
                order.push(s);
            }
        }
    }
    if order.len() < n {
        let stuck = (0..n).find(|&i| indegree[i] > 0).expect("some activity is left");
        return Err(ScheduleError::Cycle(acts[stuck].id.clone()));
    }

    let mut es = vec![zero; n];
    for &i in &order {
        es[i] = preds[i].iter().map(|&(j, lag)| es[j] + acts[j].duration + lag).fold(zero, Minutes::max);
    }
    let tat = (0..n).map(|i| es[i] + acts[i].duration).fold(zero, Minutes::max);

    let mut ls = vec![zero; n];
    for &i in order.iter().rev() {
        let lf = succs[i].iter().map(|&(s, lag)| ls[s] - lag).fold(tat, Minutes::min);
        ls[i] = lf - acts[i].duration;
    }

    let mut start = es.clone();
    let mut end: Vec<Minutes> = (0..n).map(|i| es[i] + acts[i].duration).collect();
    for &i in order.iter().rev() {
        let window = succs[i].iter().map(|&(s, lag)| start[s] - lag).min();
        match (acts[i].kind, window) {
            (ActivityKind::Positioning, Some(w)) => {
                end[i] = w;
                start[i] = w - acts[i].duration;
            }
            (ActivityKind::Elastic, Some(w)) => end[i] = w.max(end[i]),
            _ => {}
        }
    }

    let activities: Vec<ScheduledActivity> = acts
        .iter()
        .enumerate()
        .map(|(i, a)| ScheduledActivity {
            id: a.id.clone(),
            kind: a.kind,
            duration: a.duration,
            start: start[i],
            end: end[i],
            earliest_start: es[i],
            latest_start: ls[i],
            slack: ls[i] - es[i],
            critical: ls[i] == es[i],
        })
        .collect();
    let mut critical: Vec<usize> = (0..n).filter(|&i| activities[i].critical).collect();
    critical.sort_by_key(|&i| (es[i], es[i] + acts[i].duration, i));
    Ok(Schedule {
        critical_path: critical.into_iter().map(|i| acts[i].id.clone()).collect(),
        activities,
        tat,
    })
}
