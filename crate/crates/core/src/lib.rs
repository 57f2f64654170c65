//! Grid-based simulation of passenger boarding and deboarding, Monte Carlo
//! experiments on top of it, and a critical-path model of the aircraft
//! turnaround.

pub mod cabin;
pub mod config;
pub mod engine;
pub mod error;
pub mod experiment;
pub mod layouts;
pub mod stochastic;
pub mod strategies;
pub mod turnaround;
pub mod validation;

pub use cabin::{gamma, manhattan_distance, parse_layout, CabinGrid, CellKind, Coord};
pub use engine::{run, Cabin, Direction, SimConfig, SimResult};
pub use error::{ConfigError, LayoutError, SimError};
pub use stochastic::{ActionTime, RngSeed, WeibullParams};
pub use strategies::BoardingStrategy;
