mod common;

#[test]
fn exclusivity_and_conservation() {
    common::exclusivity_and_conservation().unwrap();
}

#[test]
fn seed_determinism() {
    common::seed_determinism().unwrap();
}

#[test]
fn fifo_without_overtaking() {
    common::fifo_without_overtaking().unwrap();
}

#[test]
fn narrow_aisle_ignores_interference_factor() {
    common::narrow_aisle_ignores_interference_factor().unwrap();
}

#[test]
fn layout_round_trip() {
    common::layout_round_trip().unwrap();
}

#[test]
fn manhattan_is_a_metric() {
    common::manhattan_is_a_metric().unwrap();
}

#[test]
fn weibull_sampling() {
    common::weibull_sampling().unwrap();
}

#[test]
fn cpm_slack_and_precedence() {
    common::cpm_slack_and_precedence().unwrap();
}

#[test]
fn cpm_detects_cycles() {
    common::cpm_detects_cycles().unwrap();
}

#[test]
fn scenario_monotonicity() {
    common::scenario_monotonicity().unwrap();
}

#[test]
fn bernoulli_rate() {
    common::bernoulli_rate().unwrap();
}
