//! Prints simulated means against the reference rows for a given walk scale.
//!
//! `cargo run --release -p turnsim-core --example calibrate -- [walk_scale] [runs]`

use std::time::Instant;

use turnsim_core::experiment::run_batch;
use turnsim_core::validation::{mmss, Target, TABLE3, TABLE4, TABLE6};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let scale: f64 = args.get(1).map_or(turnsim_core::engine::DEFAULT_WALK_SCALE, |s| s.parse().unwrap());
    let runs: usize = args.get(2).map_or(50, |s| s.parse().unwrap());
    for case in TABLE3.iter().chain(TABLE4).chain(TABLE6) {
        let mut cfg = case.config().unwrap();
        cfg.walk_scale = scale;
        let t = Instant::now();
        let b = run_batch(&cfg, runs, 0).unwrap();
        let (expected, actual) = match case.target {
            Target::Seconds { mean, .. } => (mean, b.mean),
            Target::Rate(rate) => (rate, b.rate().unwrap()),
        };
        println!(
            "{:?} {:24} {:8.1} vs {:8.1} ({:+5.1}%)  runs {} to {}  {:.1}s",
            case.direction,
            case.label,
            actual,
            expected,
            100.0 * (actual / expected - 1.0),
            mmss(b.min),
            mmss(b.max),
            t.elapsed().as_secs_f64()
        );
    }
}
