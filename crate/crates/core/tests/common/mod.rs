//! Randomised invariants shared by the `properties` and `acceptance` targets.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use num_rational::Ratio;
use proptest::prelude::*;
use proptest::test_runner::{TestCaseError, TestRunner};

use turnsim_core::engine::{PaxState, Simulation};
use turnsim_core::error::ScheduleError;
use turnsim_core::stochastic::{bernoulli, sample_weibull};
use turnsim_core::turnaround::{
    build_network, cpm_schedule, preset, Activity, ActivityKind, Minutes, Network, RefuellingSpec, Schedule,
    Scenario,
};
use turnsim_core::{
    manhattan_distance, parse_layout, ActionTime, BoardingStrategy, Cabin, CellKind, Coord, Direction, RngSeed,
    SimConfig, WeibullParams,
};

/// A cabin with a front vestibule column, seat blocks separated by aisles
/// `lane` cells wide, and optionally a two-column rear galley with door 2.
#[derive(Debug, Clone)]
struct LayoutSpec {
    rows: usize,
    blocks: Vec<usize>,
    lane: usize,
    galley: bool,
    rear_door: bool,
}

impl LayoutSpec {
    fn text(&self) -> String {
        let tail = if self.galley { ".." } else { "" };
        let width = 3 + self.rows + tail.len() + 1;
        let mut top: Vec<char> = "#".repeat(width).chars().collect();
        top[1] = '1';
        if self.rear_door {
            top[3 + self.rows] = '2';
        }
        let mut lines = vec![top.into_iter().collect::<String>()];
        for (b, &h) in self.blocks.iter().enumerate() {
            if b > 0 {
                for _ in 0..self.lane {
                    lines.push(format!("#..{}{tail}#", ".".repeat(self.rows)));
                }
            }
            for _ in 0..h {
                lines.push(format!("#.#{}{tail}#", "S".repeat(self.rows)));
            }
        }
        lines.push("#".repeat(width));
        let n_v = lines.len();
        format!("L_H={:.2} L_V={:.2}\n{}\n", 0.78 * width as f64, 0.42 * n_v as f64, lines.join("\n"))
    }

    fn cabin(&self) -> Arc<Cabin> {
        Arc::new(Cabin::new(parse_layout(&self.text()).expect("generated layout parses")))
    }
}

fn layout_spec(max_lane: usize) -> impl Strategy<Value = LayoutSpec> {
    (2usize..9, prop::collection::vec(1usize..4, 2..4), 1..=max_lane, any::<bool>(), any::<bool>()).prop_map(
        |(rows, blocks, lane, galley, rear)| LayoutSpec { rows, blocks, lane, galley, rear_door: galley && rear },
    )
}

fn single_lane_spec() -> impl Strategy<Value = LayoutSpec> {
    (2usize..9, prop::collection::vec(1usize..4, 2..4)).prop_map(|(rows, blocks)| LayoutSpec {
        rows,
        blocks,
        lane: 1,
        galley: false,
        rear_door: false,
    })
}

fn luggage() -> impl Strategy<Value = ActionTime> {
    prop_oneof![
        Just(ActionTime::Weibull(WeibullParams::LUGGAGE_A)),
        Just(ActionTime::Weibull(WeibullParams::LUGGAGE_B)),
        (0.0f64..12.0).prop_map(ActionTime::Constant),
    ]
}

fn strategy() -> impl Strategy<Value = BoardingStrategy> {
    prop_oneof![
        Just(BoardingStrategy::Random),
        Just(BoardingStrategy::OutsideIn),
        (1usize..4).prop_map(|zones| BoardingStrategy::BackToFront { zones }),
        (1usize..4).prop_map(|zones| BoardingStrategy::RotatingZone { zones }),
    ]
}

#[derive(Debug, Clone)]
struct Knobs {
    lf: f64,
    interference: f64,
    luggage: ActionTime,
    strategy: BoardingStrategy,
    deboard: bool,
    both_doors: bool,
    seed: u64,
}

fn knobs() -> impl Strategy<Value = Knobs> {
    (0.1f64..=1.0, 0.0f64..=1.0, luggage(), strategy(), any::<bool>(), any::<bool>(), any::<u64>()).prop_map(
        |(lf, interference, luggage, strategy, deboard, both_doors, seed)| Knobs {
            lf,
            interference,
            luggage,
            strategy,
            deboard,
            both_doors,
            seed,
        },
    )
}

fn config(spec: &LayoutSpec, k: &Knobs) -> SimConfig {
    let mut cfg = SimConfig::new(spec.cabin());
    cfg.load_factor = k.lf;
    cfg.interference_factor = k.interference;
    cfg.luggage = k.luggage;
    cfg.strategy = k.strategy.clone();
    cfg.direction = if k.deboard { Direction::Deboarding } else { Direction::Boarding };
    cfg.active_doors = Some(if spec.rear_door && k.both_doors { vec![1, 2] } else { vec![1] });
    cfg.seed = RngSeed(k.seed);
    cfg.max_ticks = TICK_CEILING;
    cfg
}

const TICK_CEILING: u64 = 500_000;

fn check<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    TestRunner::new(ProptestConfig { cases, ..ProptestConfig::default() })
        .run(&strategy, test)
        .map_err(|e| e.to_string())
}


/// No two passengers ever share a cell, nobody vanishes, and every state
/// change is a legal transition.
pub fn exclusivity_and_conservation() -> Result<(), String> {
    check(120, (layout_spec(2), knobs()), |(spec, k)| {
        let mut cfg = config(&spec, &k);
        prop_assume!(cfg.n_pax() > 0);
        cfg.record_events = true;
        let n = cfg.n_pax();
        let mut sim = Simulation::new(&cfg).unwrap();
        while !sim.is_done() {
            prop_assert!(sim.tick() < TICK_CEILING, "tick ceiling on\n{}", spec.text());
            sim.step();
            let pax = sim.passengers();
            prop_assert_eq!(pax.len(), n);
            let mut seen = HashSet::with_capacity(n);
            for p in pax {
                match p.position {
                    Some(c) => {
                        prop_assert!(seen.insert(c), "two passengers on {:?}", c);
                        prop_assert_eq!(sim.occupant(c), Some(p.id));
                    }
                    None => prop_assert!(matches!(p.state, PaxState::Queued | PaxState::Exited)),
                }
            }
        }
        let mut last: Vec<PaxState> = vec![if k.deboard { PaxState::Seated } else { PaxState::Queued }; n];
        for e in sim.events() {
            let prev = &mut last[e.passenger];
            if e.state != *prev {
                prop_assert!(prev.can_become(e.state), "{:?} -> {:?}", prev, e.state);
                *prev = e.state;
            }
        }
        let goal = if k.deboard { PaxState::Exited } else { PaxState::Seated };
        let grid = cfg.grid();
        for p in sim.passengers() {
            prop_assert_eq!(p.state, goal);
            if !k.deboard {
                prop_assert_eq!(p.position, Some(grid.seats()[p.seat].cell));
            }
        }
        Ok(())
    })
}

/// Same configuration and seed, same trajectory.
pub fn seed_determinism() -> Result<(), String> {
    check(100, (layout_spec(2), knobs()), |(spec, k)| {
        let mut cfg = config(&spec, &k);
        prop_assume!(cfg.n_pax() > 0);
        cfg.record_events = true;
        let a = turnsim_core::run(&cfg).unwrap();
        let b = turnsim_core::run(&cfg).unwrap();
        prop_assert_eq!(a.elapsed, b.elapsed);
        prop_assert_eq!(a.events, b.events);
        prop_assert_eq!(a.final_occupancy, b.final_occupancy);
        Ok(())
    })
}

/// With IF = 1 in a single-lane aisle nobody passes anybody: every aisle
/// cell is first walked through in door-entry order.
pub fn fifo_without_overtaking() -> Result<(), String> {
    check(100, (single_lane_spec(), knobs()), |(spec, mut k)| {
        k.interference = 1.0;
        k.deboard = false;
        let mut cfg = config(&spec, &k);
        prop_assume!(cfg.n_pax() > 0);
        cfg.record_events = true;
        let r = turnsim_core::run(&cfg).unwrap();
        let mut entry: HashMap<usize, u64> = HashMap::new();
        let mut first_walk: HashMap<(usize, usize), Vec<(u64, usize)>> = HashMap::new();
        let mut visited: HashSet<(usize, usize, usize)> = HashSet::new();
        let grid = cfg.grid();
        for e in &r.events {
            if e.state == PaxState::AtDoor {
                entry.entry(e.passenger).or_insert(e.tick);
            }
            if let (PaxState::Walking, Some(x), Some(y)) = (e.state, e.x, e.y) {
                if grid.kind(Coord::new(x, y)) == CellKind::Aisle && visited.insert((x, y, e.passenger)) {
                    first_walk.entry((x, y)).or_default().push((e.tick, e.passenger));
                }
            }
        }
        for visits in first_walk.values() {
            let mut by_time = visits.clone();
            by_time.sort();
            let order: Vec<u64> = by_time.iter().map(|&(_, p)| entry[&p]).collect();
            prop_assert!(order.windows(2).all(|w| w[0] <= w[1]), "{:?}", by_time);
        }
        Ok(())
    })
}

/// Overtaking is geometrically impossible in a single-lane aisle, so the
/// interference factor cannot matter.
pub fn narrow_aisle_ignores_interference_factor() -> Result<(), String> {
    check(100, (single_lane_spec(), knobs(), 0.0f64..=1.0), |(spec, k, other)| {
        let mut cfg = config(&spec, &k);
        prop_assume!(cfg.n_pax() > 0);
        cfg.record_events = true;
        let a = turnsim_core::run(&cfg).unwrap();
        cfg.interference_factor = other;
        let b = turnsim_core::run(&cfg).unwrap();
        prop_assert_eq!(a.elapsed, b.elapsed);
        prop_assert_eq!(a.events, b.events);
        Ok(())
    })
}

pub fn layout_round_trip() -> Result<(), String> {
    check(200, layout_spec(2), |spec| {
        let g = parse_layout(&spec.text()).unwrap();
        let again = parse_layout(&g.to_layout_string()).unwrap();
        prop_assert_eq!(g.to_layout_string(), again.to_layout_string());
        prop_assert_eq!(g.seats().len(), again.seats().len());
        prop_assert_eq!(g.seats().len(), spec.rows * spec.blocks.iter().sum::<usize>());
        prop_assert_eq!(g.is_narrow_aisle(), spec.lane == 1);
        Ok(())
    })
}

pub fn manhattan_is_a_metric() -> Result<(), String> {
    let point = || (0usize..50, 0usize..50).prop_map(|(x, y)| Coord::new(x, y));
    check(500, (point(), point(), point()), |(a, b, c)| {
        prop_assert_eq!(manhattan_distance(a, b), manhattan_distance(b, a));
        prop_assert_eq!(manhattan_distance(a, b) == 0, a == b);
        prop_assert!(manhattan_distance(a, c) <= manhattan_distance(a, b) + manhattan_distance(b, c));
        Ok(())
    })
}

fn weibull_params() -> impl Strategy<Value = WeibullParams> {
    prop_oneof![
        Just(WeibullParams::WALK),
        Just(WeibullParams::LUGGAGE_A),
        Just(WeibullParams::LUGGAGE_B),
        (0.5f64..4.0, 0.5f64..10.0, 0.0f64..6.0).prop_map(|(a, b, t)| WeibullParams::new(a, b, t).unwrap()),
    ]
}

/// Every draw is at least θ, the empirical CDF of 10⁵ draws is within
/// Kolmogorov–Smirnov distance 0.01 of the analytic one, and the sample
/// mean matches θ + β·Γ(1 + 1/α).
pub fn weibull_sampling() -> Result<(), String> {
    use statrs::function::gamma::gamma;
    check(24, (weibull_params(), any::<u64>()), |(p, seed)| {
        const N: usize = 100_000;
        let mut rng = RngSeed(seed).stream(0);
        let mut xs: Vec<f64> = (0..N).map(|_| sample_weibull(&p, &mut rng)).collect();
        prop_assert!(xs.iter().all(|&x| x >= p.theta));
        xs.sort_by(f64::total_cmp);
        let ks = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = p.cdf(x);
                (f - i as f64 / N as f64).abs().max((f - (i + 1) as f64 / N as f64).abs())
            })
            .fold(0.0, f64::max);
        prop_assert!(ks < 0.01, "KS distance {ks}");
        let mean = xs.iter().sum::<f64>() / N as f64;
        let expected = p.theta + p.beta * gamma(1.0 + 1.0 / p.alpha);
        let sd = p.beta * (gamma(1.0 + 2.0 / p.alpha) - gamma(1.0 + 1.0 / p.alpha).powi(2)).sqrt();
        prop_assert!((mean - expected).abs() < 6.0 * sd / (N as f64).sqrt(), "{mean} vs {expected}");
        Ok(())
    })
}

/// Random acyclic networks: each activity may depend on any earlier one;
/// the list is then shuffled so the scheduler has to sort it.
fn network() -> impl Strategy<Value = Network> {
    let activity = (0i128..200, 0usize..4, prop::collection::vec((any::<prop::sample::Index>(), 0i128..20), 0..4));
    prop::collection::vec(activity, 1..30)
        .prop_map(|specs| {
            let kinds = [ActivityKind::Positioning, ActivityKind::Service, ActivityKind::Removal, ActivityKind::Elastic];
            specs
                .iter()
                .enumerate()
                .map(|(i, (dur, kind, preds))| {
                    let mut a = Activity::new(format!("a{i}"), Ratio::new(*dur, 10), kinds[*kind]);
                    if i > 0 {
                        let mut used = HashSet::new();
                        for (idx, lag) in preds {
                            let j = idx.index(i);
                            if used.insert(j) {
                                a.predecessors.push((format!("a{j}"), Ratio::new(*lag, 10)));
                            }
                        }
                    }
                    a
                })
                .collect::<Vec<_>>()
        })
        .prop_flat_map(|acts| Just(acts).prop_shuffle().prop_map(Network::new))
}

fn check_schedule(net: &Network, s: &Schedule) -> Result<(), TestCaseError> {
    let zero = Minutes::from_integer(0);
    let by_id: HashMap<&str, _> = s.activities.iter().map(|a| (a.id.as_str(), a)).collect();
    let makespan = s.activities.iter().map(|a| a.earliest_start + a.duration).fold(zero, Minutes::max);
    prop_assert_eq!(s.tat, makespan);
    for a in &net.activities {
        let sa = by_id[a.id.as_str()];
        prop_assert!(sa.slack >= zero);
        prop_assert_eq!(sa.critical, sa.slack == zero);
        prop_assert!(sa.end - sa.start >= a.duration);
        prop_assert!(sa.start >= zero && sa.end <= s.tat);
        for (p, lag) in &a.predecessors {
            let sp = by_id[p.as_str()];
            prop_assert!(sa.earliest_start >= sp.earliest_start + sp.duration + lag);
            prop_assert!(sa.start >= sp.end + lag, "{} after {}", a.id, p);
        }
    }
    let ends_at_tat = |id: &String| by_id[id.as_str()].earliest_start + by_id[id.as_str()].duration == s.tat;
    prop_assert!(s.critical_path.iter().any(ends_at_tat));
    Ok(())
}

/// Precedence and slack hold on random networks, and stretching an
/// activity moves the TAT exactly as the slack predicts.
pub fn cpm_slack_and_precedence() -> Result<(), String> {
    check(200, (network(), any::<prop::sample::Index>(), 1i128..50), |(net, pick, delta)| {
        let s = cpm_schedule(&net).unwrap();
        check_schedule(&net, &s)?;
        let target = &s.activities[pick.index(s.activities.len())];
        let delta = Ratio::new(delta, 10);
        let mut longer = net.clone();
        longer.get_mut(&target.id).unwrap().duration += delta;
        let s2 = cpm_schedule(&longer).unwrap();
        check_schedule(&longer, &s2)?;
        if target.critical {
            prop_assert_eq!(s2.tat, s.tat + delta);
        } else if delta <= target.slack {
            prop_assert_eq!(s2.tat, s.tat);
        } else {
            prop_assert_eq!(s2.tat, s.tat + delta - target.slack);
        }
        Ok(())
    })
}

pub fn cpm_detects_cycles() -> Result<(), String> {
    check(100, network(), |mut net| {
        net.get_mut("a0").unwrap().predecessors.push(("a0".into(), Minutes::from_integer(0)));
        prop_assert!(matches!(cpm_schedule(&net), Err(ScheduleError::Cycle(_))));
        Ok(())
    })
}

/// TAT never decreases with more passengers, and letting passengers on
/// board during refuelling never increases it.
pub fn scenario_monotonicity() -> Result<(), String> {
    let names = vec!["a320_full", "prp_full", "a320_outstation", "prp_outstation"];
    check(100, (prop::sample::select(names), 1u32..150), |(name, extra)| {
        let base = preset(name).unwrap();
        let tat = |s: &Scenario| cpm_schedule(&build_network(s).unwrap()).unwrap().tat;
        let t0 = tat(&base);
        let mut more = base.clone();
        more.passengers += extra;
        prop_assert!(tat(&more) >= t0);
        if let Some(r) = &base.refuelling {
            let mut relaxed = base.clone();
            relaxed.refuelling = Some(RefuellingSpec { passengers_on_board: true, ..r.clone() });
            prop_assert!(tat(&relaxed) <= t0);
        }
        let net = build_network(&base).unwrap();
        check_schedule(&net, &cpm_schedule(&net).unwrap())
    })
}

pub fn bernoulli_rate() -> Result<(), String> {
    let mut rng = RngSeed(3).stream(9);
    let n = 100_000;
    let hits = (0..n).filter(|_| bernoulli(0.5, &mut rng)).count();
    let ok = (hits as f64 / n as f64 - 0.5).abs() < 0.01
        && (0..1000).all(|_| !bernoulli(0.0, &mut rng))
        && (0..1000).all(|_| bernoulli(1.0, &mut rng));
    if ok {
        Ok(())
    } else {
        Err(format!("{hits} hits in {n} draws at p = 0.5"))
    }
}
