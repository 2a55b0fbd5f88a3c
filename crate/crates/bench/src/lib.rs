//! Benchmark-only crate; see `benches/core.rs`. Run with `cargo bench -p
//! tropen-bench`.

use tropen::poly::Polynomial;
use tropen::tropical::HolonomicSystem;

/// The named systems the benchmarks exercise, one per entropy case plus the
/// variable-coefficient case-3 regime.
pub fn bench_systems() -> Vec<(&'static str, HolonomicSystem)> {
    vec![
        ("zeros", HolonomicSystem::second_order_constants(0, 0, 0)),
        ("mid_one", HolonomicSystem::second_order_constants(0, 1, 0)),
        ("outer_ones", HolonomicSystem::second_order_constants(1, 0, 1)),
        (
            "drifting",
            HolonomicSystem::second_order(
                Polynomial::zero(),
                Polynomial::from_integers(&[0, 1]),
                Polynomial::zero(),
            ),
        ),
    ]
}
