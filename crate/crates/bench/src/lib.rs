//! Benchmark fixtures shared by the criterion benches.

use adiabat_core::RotatingFieldParams;

/// Parameter points covering slow, resonant and fast rotation.
pub fn reference_points() -> Vec<(&'static str, RotatingFieldParams)> {
    [
        ("slow", 0.05, 0.5),
        ("resonant", -1.0, 0.1),
        ("fast", 10.0, 0.5),
    ]
    .into_iter()
    .map(|(name, omega, theta)| {
        let p = RotatingFieldParams::new(1.0, omega, theta).expect("valid reference point");
        (name, p)
    })
    .collect()
}
