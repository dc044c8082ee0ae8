//! Seeded fixtures shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symlap::borderline1d::Grid1D;
use symlap::Point2;

/// Point pairs in B₁₀ kept away from each other's quarter-turn images.
pub fn kernel_pairs(n: usize) -> Vec<(Point2, Point2)> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x = Point2::from_polar(10.0 * rng.gen::<f64>().sqrt(), std::f64::consts::TAU * rng.gen::<f64>());
        let y = Point2::from_polar(10.0 * rng.gen::<f64>().sqrt(), std::f64::consts::TAU * rng.gen::<f64>());
        if symlap::verify::relative_pole_distance(x, y) > 1e-3 {
            out.push((x, y));
        }
    }
    out
}

/// An odd grid function with a logarithmic cusp at 0.
pub fn odd_grid(n: usize) -> Grid1D {
    Grid1D::from_fn(n, |t: f64| t.signum() * t.abs().ln().abs().min(4.0) + (3.0 * t).sin()).expect("power of two")
}
