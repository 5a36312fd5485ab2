//! Colored point configurations and exact verification of rainbow
//! partitions whose convex hulls share a point.

pub mod certificate;
pub mod config;
pub mod lp;
pub mod partition;
pub mod rational;
pub mod scenario;
mod search;

pub use certificate::{common_point_lp, verify_certificate, IntersectionCertificate, LpOutcome};
pub use config::{parse_config, random_config, ColoredConfig, ColoredPoint};
pub use partition::{enumerate_rainbow_partitions, PartitionMode, RainbowPartition, RainbowPartitions};
pub use rational::{format_rational, parse_rational, Rational};
pub use scenario::{
    run_scenario, scenario_inequality, Outcome, ScenarioInput, ScenarioKind, ScenarioReport, ScenarioSpec,
    SearchMode, Variant,
};
