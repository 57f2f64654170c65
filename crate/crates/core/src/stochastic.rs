//! Seeded random streams and the action-time distributions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::ConfigError;

/// Three-parameter Weibull: shape `alpha`, scale `beta` (s), offset `theta` (s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeibullParams {
    pub alpha: f64,
    pub beta: f64,
    pub theta: f64,
}

impl WeibullParams {
    pub fn new(alpha: f64, beta: f64, theta: f64) -> Result<Self, ConfigError> {
        if !(alpha > 0.0 && beta > 0.0 && theta >= 0.0 && theta.is_finite()) {
            return Err(ConfigError::Invalid(format!(
                "Weibull parameters need alpha > 0, beta > 0, theta >= 0 (got {alpha}, {beta}, {theta})"
            )));
        }
        Ok(WeibullParams { alpha, beta, theta })
    }

    /// Walking time per horizontal cell.
    pub const WALK: WeibullParams = WeibullParams { alpha: 0.9, beta: 4.0, theta: 1.6 };
    /// Luggage policy A: every passenger stows a trolley.
    pub const LUGGAGE_A: WeibullParams = WeibullParams { alpha: 2.0, beta: 6.5, theta: 5.5 };
    /// Luggage policy B: many small bags, shorter aisle occupancy.
    pub const LUGGAGE_B: WeibullParams = WeibullParams { alpha: 2.0, beta: 6.5, theta: 1.5 };

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= self.theta {
            0.0
        } else {
            1.0 - (-((x - self.theta) / self.beta).powf(self.alpha)).exp()
        }
    }

    /// Inverse CDF evaluated at the survival probability `u` in (0, 1].
    pub fn quantile_survival(&self, u: f64) -> f64 {
        self.theta + self.beta * (-u.ln()).powf(1.0 / self.alpha)
    }
}

/// Run seed; together with a configuration it fixes the whole trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RngSeed(pub u64);

impl RngSeed {
    /// Independent stream for `index` (a passenger number, or one of the
    /// reserved run-level streams).
    pub fn stream(self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.0);
        rng.set_stream(index);
        rng
    }
}

/// Stream ids used by run-level draws; passenger streams use their index.
pub(crate) const SEAT_STREAM: u64 = u64::MAX;
pub(crate) const ORDER_STREAM: u64 = u64::MAX - 1;

/// Inverse-transform draw: `theta + beta * (-ln U)^(1/alpha)`.
pub fn sample_weibull<R: Rng + ?Sized>(params: &WeibullParams, rng: &mut R) -> f64 {
    // `random::<f64>()` is in [0, 1); 1 - u lies in (0, 1] so ln never sees 0.
    let u = 1.0 - rng.random::<f64>();
    let x = params.quantile_survival(u);
    assert!(x >= params.theta, "Weibull draw {x} below offset {}", params.theta);
    x
}

pub fn bernoulli<R: Rng + ?Sized>(p: f64, rng: &mut R) -> bool {
    debug_assert!((0.0..=1.0).contains(&p));
    if p <= 0.0 {
        return false;
    }
    if p >= 1.0 {
        return true;
    }
    rng.random::<f64>() < p
}

/// A per-passenger action time: either a Weibull draw or a fixed value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionTime {
    Weibull(WeibullParams),
    Constant(f64),
}

impl ActionTime {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            ActionTime::Weibull(p) => sample_weibull(p, rng),
            ActionTime::Constant(v) => *v,
        }
    }

    /// Named presets: `A`, `B` (luggage) and `walk`.
    pub fn preset(name: &str) -> Option<ActionTime> {
        match name {
            "A" | "a" => Some(ActionTime::Weibull(WeibullParams::LUGGAGE_A)),
            "B" | "b" => Some(ActionTime::Weibull(WeibullParams::LUGGAGE_B)),
            "walk" => Some(ActionTime::Weibull(WeibullParams::WALK)),
            _ => None,
        }
    }

    /// Preset name for the shipped distributions, otherwise the parameters.
    pub fn label(&self) -> String {
        match self {
            ActionTime::Weibull(p) if *p == WeibullParams::LUGGAGE_A => "A".into(),
            ActionTime::Weibull(p) if *p == WeibullParams::LUGGAGE_B => "B".into(),
            ActionTime::Weibull(p) if *p == WeibullParams::WALK => "walk".into(),
            ActionTime::Weibull(p) => format!("weibull({},{},{})", p.alpha, p.beta, p.theta),
            ActionTime::Constant(v) => format!("{v}"),
        }
    }
}
