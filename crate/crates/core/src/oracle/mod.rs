//! Differential testing: brute-force counts and a seeded battery that runs
//! every identity of the crate on random arrangements.

mod battery;
mod brute;

pub use battery::{
    random_arrangement, randomized_battery, randomized_battery_with, run_checks, shrink, BatteryOptions, CheckRecord,
    InstanceReport, MultiplicityFn, OracleReport,
};
pub use brute::{brute_complement_count, brute_hom_count, brute_mobius, BRUTE_CAP};
