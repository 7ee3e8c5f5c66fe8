//! Fixed inputs shared by the benchmarks.

use smalltri::search::{Objective, SearchParams};
use smalltri::{BaryPoint, Configuration};

/// `n` points spread by an additive recurrence over the unit square, folded
/// into the triangle.
pub fn point_cloud(n: usize) -> Configuration {
    let (a1, a2) = (0.754_877_666_246_692_7, 0.569_840_290_998_053_2);
    let pts = (1..=n)
        .map(|i| {
            let (mut u, mut v) = ((i as f64 * a1).fract(), (i as f64 * a2).fract());
            if u + v > 1.0 {
                (u, v) = (1.0 - u, 1.0 - v);
            }
            BaryPoint::project([1.0 - u - v, u, v])
        })
        .collect();
    Configuration::new(pts).expect("at least three points")
}

/// One short annealing restart for five points.
pub fn single_restart(objective: Objective) -> SearchParams {
    let mut p = SearchParams::new(5, objective);
    p.restarts = 1;
    p.max_iters = 500;
    p
}
