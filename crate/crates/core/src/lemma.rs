//! Closed forms behind the strip argument for two nearby points, and
//! randomized checks of the parallelogram halving bound.
//!
//! Setting: two points `p_i`, `p_j` at distance `4L/10` on two sides of `T`
//! meeting at corner `p`, the segment making angle `A` with side `pq` at
//! `p_j`. With lengths in units of `L`:
//!
//! * `a = d(p, p_i) = 4 sin(A) / (5 sqrt 3)`
//! * `b = d(p_i, q_i) = (3 sqrt 3 / 10) / cos(A - pi/6)`
//! * `c = d(q_i, r) = 1 - a - b`
//!
//! and the corner triangle `I` left outside the strip has area
//! `|I| = (1/2) c^2 sin(pi/3) sin(pi/3 + A) / sin(pi/3 - A)` (absolute `c`).

use std::f64::consts::{FRAC_PI_3, FRAC_PI_6, PI};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::geometry::{side_length, strip_width, triple_area, BaryPoint};
use crate::search::{derive_seed, uniform_point, SCHEMA_VERSION};
use crate::SIX_TWENTY_FIFTHS;

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Distance `4L/10` between the two close points, in units of `L`.
const CLOSE: f64 = 0.4;

/// Angle tolerance at the ends of `[0, pi/3]`.
const ANGLE_TOL: f64 = 1e-12;

fn check_angle(a: f64) -> Result<f64> {
    if !a.is_finite() || !(-ANGLE_TOL..=FRAC_PI_3 + ANGLE_TOL).contains(&a) {
        return domain(format!("angle {a} is outside [0, pi/3]"));
    }
    Ok(a.clamp(0.0, FRAC_PI_3))
}

/// `(a, b, c)` in units of `L`.
pub fn abc_of_angle(angle: f64) -> Result<(f64, f64, f64)> {
    let x = check_angle(angle)?;
    let a = 4.0 * x.sin() / (5.0 * SQRT3);
    let b = (3.0 * SQRT3 / 10.0) / (x - FRAC_PI_6).cos();
    Ok((a, b, 1.0 - a - b))
}

/// `c` with the cosine factor dropped, as used to bound `c` from above.
pub fn c_upper_bound(angle: f64) -> f64 {
    1.0 - 4.0 * angle.sin() / (5.0 * SQRT3) - 3.0 * SQRT3 / 10.0
}

/// `|I|` in units of `area(T)`; 0 at `A = pi/3` by continuity.
pub fn region_area(angle: f64) -> Result<f64> {
    let x = check_angle(angle)?;
    let denom = (FRAC_PI_3 - x).sin();
    if denom <= 0.0 {
        return Ok(0.0);
    }
    let (_, _, c) = abc_of_angle(x)?;
    let c_abs = c * side_length();
    Ok(0.5 * c_abs * c_abs * FRAC_PI_3.sin() * (FRAC_PI_3 + x).sin() / denom)
}

fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Root in `[0, pi/3]` of `sin(pi/3 - A) = level`, for `level` in
/// `[0, sin(pi/3)]`.
pub fn angle_for_sine(level: f64) -> f64 {
    bisect(0.0, FRAC_PI_3, |a| (FRAC_PI_3 - a).sin() - level)
}

/// The chain `A > 0.317 => c < 0.337 => A > 0.553 => c < 0.24`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoints {
    /// Root of `sin(pi/3 - A) = 2/3`.
    pub first_angle: f64,
    pub first_angle_exceeds_0_317: bool,
    /// `c` bound at `A = 0.317` and the exact `c` there.
    pub c_bound_at_0_317: f64,
    pub c_at_0_317: f64,
    pub c_bound_below_0_337: bool,
    /// `0.337^2 / 0.24`, which must stay below 0.474.
    pub sine_level: f64,
    pub sine_level_below_0_474: bool,
    /// Root of `sin(pi/3 - A) = 0.474`.
    pub second_angle: f64,
    pub second_angle_exceeds_0_553: bool,
    pub c_bound_at_0_553: f64,
    pub c_at_0_553: f64,
    pub c_bound_below_0_24: bool,
}

impl Checkpoints {
    pub fn compute() -> Self {
        let first = angle_for_sine(2.0 / 3.0);
        let second = angle_for_sine(0.474);
        let level = 0.337 * 0.337 / SIX_TWENTY_FIFTHS;
        let c = |a: f64| abc_of_angle(a).map(|t| t.2).unwrap_or(f64::NAN);
        Self {
            first_angle: first,
            first_angle_exceeds_0_317: first > 0.317,
            c_bound_at_0_317: c_upper_bound(0.317),
            c_at_0_317: c(0.317),
            c_bound_below_0_337: c_upper_bound(0.317) < 0.337,
            sine_level: level,
            sine_level_below_0_474: level < 0.474,
            second_angle: second,
            second_angle_exceeds_0_553: second > 0.553,
            c_bound_at_0_553: c_upper_bound(0.553),
            c_at_0_553: c(0.553),
            c_bound_below_0_24: c_upper_bound(0.553) < SIX_TWENTY_FIFTHS,
        }
    }

    pub fn all_hold(&self) -> bool {
        self.first_angle_exceeds_0_317
            && self.c_bound_below_0_337
            && self.sine_level_below_0_474
            && self.second_angle_exceeds_0_553
            && self.c_bound_below_0_24
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaSummary {
    pub schema_version: u32,
    pub step: f64,
    pub points: usize,
    pub max_region_area: f64,
    pub argmax: f64,
    /// `0.24 - max_region_area`.
    pub margin: f64,
    pub below_threshold: bool,
    /// Largest `|a + b + c - 1|` over the grid.
    pub max_identity_residual: f64,
    /// Largest `|sin(pi/3 + A) - cos(A - pi/6)|` over the grid.
    pub max_sin_cos_residual: f64,
    /// Grid angles where `|I| >= c` (units of `L`) fails to be strict.
    pub c_bound_violations: usize,
    /// Whether `|I|` decreases at every grid step (observed, not assumed).
    pub monotone_decreasing: bool,
    pub checkpoints: Checkpoints,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaScanReport {
    pub angles: Vec<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub region_area: Vec<f64>,
    pub summary: LemmaSummary,
}

impl LemmaScanReport {
    pub fn max_region_area(&self) -> f64 {
        self.summary.max_region_area
    }

    pub fn argmax(&self) -> f64 {
        self.summary.argmax
    }

    /// CSV with header `A,a,b,c,region_area`.
    pub fn to_csv(&self) -> String {
        let mut s = String::with_capacity(self.angles.len() * 96);
        s.push_str("A,a,b,c,region_area\n");
        for i in 0..self.angles.len() {
            let _ = writeln!(
                s,
                "{},{},{},{},{}",
                self.angles[i], self.a[i], self.b[i], self.c[i], self.region_area[i]
            );
        }
        s
    }

    pub fn summary_json(&self) -> String {
        serde_json::to_string_pretty(&self.summary).expect("summary serializes")
    }
}

/// Tabulate the closed forms on `A = 0, step, 2 step, ... < pi/3`.
pub fn scan_lemma(step: f64) -> Result<LemmaScanReport> {
    if !(step > 0.0 && step <= 1e-3) {
        return domain(format!("scan step must lie in (0, 1e-3], got {step}"));
    }
    let count = (FRAC_PI_3 / step).ceil() as usize;
    let angles: Vec<f64> = (0..count).map(|i| i as f64 * step).filter(|&x| x < FRAC_PI_3).collect();
    let rows: Vec<[f64; 6]> = angles
        .par_iter()
        .map(|&x| {
            let (a, b, c) = abc_of_angle(x).expect("grid angle in range");
            let area = region_area(x).expect("grid angle in range");
            let sc = ((FRAC_PI_3 + x).sin() - (x - FRAC_PI_6).cos()).abs();
            [a, b, c, area, (a + b + c - 1.0).abs(), sc]
        })
        .collect();
    let col = |j: usize| rows.iter().map(|r| r[j]).collect::<Vec<f64>>();
    let (a, b, c, region) = (col(0), col(1), col(2), col(3));
    let mut imax = 0;
    for (i, v) in region.iter().enumerate() {
        if *v > region[imax] {
            imax = i;
        }
    }
    let max = region[imax];
    let summary = LemmaSummary {
        schema_version: SCHEMA_VERSION,
        step,
        points: angles.len(),
        max_region_area: max,
        argmax: angles[imax],
        margin: SIX_TWENTY_FIFTHS - max,
        below_threshold: max < SIX_TWENTY_FIFTHS,
        max_identity_residual: rows.iter().map(|r| r[4]).fold(0.0, f64::max),
        max_sin_cos_residual: rows.iter().map(|r| r[5]).fold(0.0, f64::max),
        c_bound_violations: region.iter().zip(&c).filter(|(i, c)| *i >= *c && **c > 0.0).count(),
        monotone_decreasing: region.windows(2).all(|w| w[1] < w[0]),
        checkpoints: Checkpoints::compute(),
        notes: vec![
            "angle range scanned is [0, pi/3); the wider range [0, 2pi/3] quoted for A is not geometric".into(),
            "the |I| < c/L comparison is checked as an inequality on the grid".into(),
            "grid scan only: no interval certification between grid points".into(),
        ],
    };
    Ok(LemmaScanReport {
        angles,
        a,
        b,
        c,
        region_area: region,
        summary,
    })
}

/// `f(x) = cot(x) + cot(2pi/3 - x)`.
pub fn cot_sum(x: f64) -> f64 {
    1.0 / x.tan() + 1.0 / (2.0 * PI / 3.0 - x).tan()
}

/// Minimum of [`cot_sum`] on `(0, 2pi/3)`: golden-section search to bracket
/// the minimizer, then bisection on `f'(x) = csc^2(2pi/3 - x) - csc^2(x)`.
pub fn cot_sum_min() -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (1e-6, 2.0 * PI / 3.0 - 1e-6);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (cot_sum(x1), cot_sum(x2));
    while hi - lo > 1e-6 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = cot_sum(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = cot_sum(x2);
        }
    }
    let deriv = |x: f64| {
        let s1 = x.sin();
        let s2 = (2.0 * PI / 3.0 - x).sin();
        1.0 / (s2 * s2) - 1.0 / (s1 * s1)
    };
    let x = bisect(lo, hi, deriv);
    (x, cot_sum(x))
}

/// Shift `Delta` between the line through two points at distance `d` and
/// the parallel line where the chord has length `4L/10`, for angle `A`.
pub fn delta_for(d: f64, angle: f64) -> f64 {
    let gap = CLOSE * side_length() - d;
    if angle <= 0.0 || angle >= 2.0 * PI / 3.0 {
        return 0.0;
    }
    gap / cot_sum(angle)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripComparison {
    pub d: f64,
    pub angle: f64,
    pub delta: f64,
    pub w: f64,
    pub w_prime: f64,
}

impl StripComparison {
    pub fn new(d: f64, angle: f64) -> Result<Self> {
        let full = CLOSE * side_length();
        if !(d > 0.0 && d <= full) {
            return domain(format!("base length {d} must lie in (0, 4L/10]"));
        }
        Ok(Self {
            d,
            angle,
            delta: delta_for(d, angle),
            w: strip_width(d, SIX_TWENTY_FIFTHS)?,
            w_prime: strip_width(full, SIX_TWENTY_FIFTHS)?,
        })
    }

    /// `(w - w') - Delta`; nonnegative when the shifted strip is no wider.
    pub fn slack(&self) -> f64 {
        (self.w - self.w_prime) - self.delta
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StripReport {
    pub trials: u64,
    pub seed: u64,
    pub violations: u64,
    pub min_slack: f64,
    pub tightest: Option<StripComparison>,
}

const CHUNK: u64 = 4096;

fn chunks(trials: u64) -> impl ParallelIterator<Item = (u64, u64)> {
    (0..trials.div_ceil(CHUNK))
        .into_par_iter()
        .map(move |c| (c, CHUNK.min(trials - c * CHUNK)))
}

/// Sample `d` in `(0, 4L/10)` and `A` in `[0, pi/3]` and check
/// `w - w' >= Delta`.
pub fn strip_monotonicity_check(trials: u64, seed: u64) -> Result<StripReport> {
    if trials == 0 {
        return domain("trials must be at least 1");
    }
    let full = CLOSE * side_length();
    let parts: Vec<(u64, Option<StripComparison>)> = chunks(trials)
        .map(|(c, len)| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, c));
            let mut bad = 0;
            let mut tight: Option<StripComparison> = None;
            for _ in 0..len {
                let d = full * (1.0 - rng.random::<f64>());
                let angle = FRAC_PI_3 * rng.random::<f64>();
                let cmp = StripComparison::new(d, angle).expect("sampled in range");
                if cmp.slack() < -1e-12 {
                    bad += 1;
                }
                if tight.is_none_or(|t| cmp.slack() < t.slack()) {
                    tight = Some(cmp);
                }
            }
            (bad, tight)
        })
        .collect();
    let mut report = StripReport {
        trials,
        seed,
        violations: 0,
        min_slack: f64::INFINITY,
        tightest: None,
    };
    for (bad, tight) in parts {
        report.violations += bad;
        if let Some(t) = tight {
            if t.slack() < report.min_slack {
                report.min_slack = t.slack();
                report.tightest = Some(t);
            }
        }
    }
    Ok(report)
}

/// Parallelogram `{o + s u + t v : s, t in [0, 1]}` in barycentric terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Parallelogram {
    pub origin: [f64; 3],
    pub u: [f64; 3],
    pub v: [f64; 3],
}

impl Parallelogram {
    pub fn point(&self, s: f64, t: f64) -> BaryPoint {
        BaryPoint::project(std::array::from_fn(|i| self.origin[i] + s * self.u[i] + t * self.v[i]))
    }

    pub fn area(&self) -> f64 {
        2.0 * triple_area(&self.point(0.0, 0.0), &self.point(1.0, 0.0), &self.point(0.0, 1.0))
    }

    /// Area of triangle `pqr` over the parallelogram's area.
    pub fn ratio(&self, p: &BaryPoint, q: &BaryPoint, r: &BaryPoint) -> f64 {
        triple_area(p, q, r) / self.area()
    }

    /// A random parallelogram inside `T`: corner and two side vectors from
    /// three uniform points, shrunk until the fourth corner is inside.
    fn random<R: Rng>(rng: &mut R) -> Self {
        loop {
            let [o, b, c] = [0; 3].map(|_| uniform_point(rng).weights());
            let u: [f64; 3] = std::array::from_fn(|i| b[i] - o[i]);
            let v: [f64; 3] = std::array::from_fn(|i| c[i] - o[i]);
            let mut scale: f64 = 1.0;
            for i in 0..3 {
                let dir = u[i] + v[i];
                if dir < 0.0 {
                    scale = scale.min(o[i] / -dir);
                }
            }
            let par = Self {
                origin: o,
                u: u.map(|x| x * scale),
                v: v.map(|x| x * scale),
            };
            if par.area() > 1e-9 {
                return par;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalvingReport {
    pub trials: u64,
    pub seed: u64,
    pub violations: u64,
    pub max_ratio: f64,
    /// Maximum over trials with uniform points.
    pub max_ratio_uniform: f64,
    /// Maximum over trials with points jittered near three corners.
    pub max_ratio_corner: f64,
}

/// Largest parameter offset of a corner-jittered point.
const CORNER_JITTER: f64 = 1e-4;

/// Random parallelograms inside `T` with three points in each; checks that
/// the triangle takes at most half the parallelogram's area. Even trials
/// draw the points uniformly, odd trials draw them near three of the four
/// corners.
pub fn parallelogram_halving_test(trials: u64, seed: u64) -> Result<HalvingReport> {
    if trials == 0 {
        return domain("trials must be at least 1");
    }
    let parts: Vec<(u64, f64, f64)> = chunks(trials)
        .map(|(c, len)| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, c));
            let (mut bad, mut max_u, mut max_c) = (0, 0.0f64, 0.0f64);
            for j in 0..len {
                let par = Parallelogram::random(&mut rng);
                let corner = (c * CHUNK + j) % 2 == 1;
                let pts: [BaryPoint; 3] = if corner {
                    let skip = rng.random_range(0..4);
                    let corners: Vec<(f64, f64)> = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
                        .into_iter()
                        .enumerate()
                        .filter(|(i, _)| *i != skip)
                        .map(|(_, p)| p)
                        .collect();
                    std::array::from_fn(|i| {
                        let (s, t) = corners[i];
                        let js = CORNER_JITTER * rng.random::<f64>();
                        let jt = CORNER_JITTER * rng.random::<f64>();
                        par.point((s - js).abs(), (t - jt).abs())
                    })
                } else {
                    std::array::from_fn(|_| par.point(rng.random(), rng.random()))
                };
                let ratio = par.ratio(&pts[0], &pts[1], &pts[2]);
                if ratio > 0.5 + 1e-12 {
                    bad += 1;
                }
                if corner {
                    max_c = max_c.max(ratio);
                } else {
                    max_u = max_u.max(ratio);
                }
            }
            (bad, max_u, max_c)
        })
        .collect();
    let violations = parts.iter().map(|p| p.0).sum();
    let max_u = parts.iter().map(|p| p.1).fold(0.0, f64::max);
    let max_c = parts.iter().map(|p| p.2).fold(0.0, f64::max);
    Ok(HalvingReport {
        trials,
        seed,
        violations,
        max_ratio: max_u.max(max_c),
        max_ratio_uniform: max_u,
        max_ratio_corner: max_c,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosePairReport {
    pub trials: u64,
    pub seed: u64,
    pub violations: u64,
}

/// Five uniform points with `p1`, `p2` at distance at most `4L/10`: checks
/// that some `{p1, p2, pk}` or `{p3, p4, p5}` has area at most 6/25.
pub fn close_pair_check(trials: u64, seed: u64) -> Result<ClosePairReport> {
    if trials == 0 {
        return domain("trials must be at least 1");
    }
    let t = crate::geometry::ReferenceTriangle::unit();
    let limit = CLOSE * side_length();
    let violations = chunks(trials)
        .map(|(c, len)| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, c));
            let mut bad = 0u64;
            for _ in 0..len {
                let p1 = uniform_point(&mut rng);
                let p2 = loop {
                    let q = uniform_point(&mut rng);
                    if crate::geometry::distance(&p1, &q, &t) <= limit {
                        break q;
                    }
                };
                let rest = [0; 3].map(|_| uniform_point(&mut rng));
                let pair_small = rest.iter().any(|p| triple_area(&p1, &p2, p) <= SIX_TWENTY_FIFTHS);
                let rest_small = triple_area(&rest[0], &rest[1], &rest[2]) <= SIX_TWENTY_FIFTHS;
                if !pair_small && !rest_small {
                    bad += 1;
                }
            }
            bad
        })
        .sum();
    Ok(ClosePairReport {
        trials,
        seed,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn abc_examples() {
        let (a, b, c) = abc_of_angle(0.0).unwrap();
        assert!(a.abs() < 1e-15 && (b - 0.6).abs() < 1e-12 && (c - 0.4).abs() < 1e-12);
        let (a, b, c) = abc_of_angle(FRAC_PI_3).unwrap();
        assert!((a - 0.4).abs() < 1e-12 && (b - 0.6).abs() < 1e-12 && c.abs() < 1e-12);
        assert!(abc_of_angle(0.317).unwrap().2 < 0.337);
        assert!(abc_of_angle(-0.1).is_err());
        assert!(abc_of_angle(1.1).is_err());
        assert!(abc_of_angle(f64::NAN).is_err());
    }

    #[test]
    fn region_area_examples() {
        assert!((region_area(0.0).unwrap() - 0.16).abs() < 1e-12);
        assert_eq!(region_area(FRAC_PI_3).unwrap(), 0.0);
        assert!(region_area(FRAC_PI_3 - 1e-9).unwrap() < 1e-8);
        assert!(region_area(1.2).is_err());
        let c = abc_of_angle(0.553).unwrap().2;
        assert!(c < 0.24);
        assert!(region_area(0.553).unwrap() < c);
        // independent form: |I| = c^2 sin(pi/3 + A) / sin(pi/3 - A) in T units
        for i in 0..=100 {
            let x = i as f64 * 0.01;
            let c = abc_of_angle(x).unwrap().2;
            let alt = c * c * (FRAC_PI_3 + x).sin() / (FRAC_PI_3 - x).sin();
            assert!((region_area(x).unwrap() - alt).abs() < 1e-12);
        }
    }

    #[test]
    fn checkpoints_reproduce_chain() {
        let cp = Checkpoints::compute();
        assert!(cp.all_hold(), "{cp:?}");
        assert!(cp.first_angle > 0.317 && cp.first_angle - 0.317 < 1e-3);
        assert!(cp.second_angle > 0.553 && cp.second_angle - 0.553 < 1e-3);
        assert!(((FRAC_PI_3 - cp.first_angle).sin() - 2.0 / 3.0).abs() < 1e-14);
        assert!(cp.c_at_0_317 <= cp.c_bound_at_0_317);
    }

    #[test]
    fn coarse_scan() {
        let r = scan_lemma(1e-3).unwrap();
        assert_eq!(r.angles.len(), 1048);
        assert!(r.summary.below_threshold);
        assert!(r.summary.max_identity_residual < 1e-12);
        assert!(r.summary.max_sin_cos_residual < 1e-12);
        assert_eq!(r.summary.c_bound_violations, 0);
        assert!(!r.summary.monotone_decreasing);
        assert!(r.region_area.iter().all(|&v| v >= 0.0));
        let csv = r.to_csv();
        assert!(csv.starts_with("A,a,b,c,region_area\n0,0,"));
        assert_eq!(csv.lines().count(), 1049);
        let json: serde_json::Value = serde_json::from_str(&r.summary_json()).unwrap();
        assert_eq!(json["schema_version"], 1);
        assert!(scan_lemma(0.0).is_err());
        assert!(scan_lemma(2e-3).is_err());
    }

    #[test]
    fn cot_sum_minimum() {
        let (x, v) = cot_sum_min();
        assert!((x - FRAC_PI_3).abs() < 1e-9);
        assert!((v - 2.0 / SQRT3).abs() < 1e-9);
        assert!(cot_sum(FRAC_PI_6) > v);
        assert!((cot_sum(FRAC_PI_6) - SQRT3).abs() < 1e-12);
    }

    #[test]
    fn strip_examples() {
        let full = CLOSE * side_length();
        let edge = StripComparison::new(full, 0.7).unwrap();
        assert_eq!(edge.delta, 0.0);
        assert_eq!(edge.w, edge.w_prime);
        let d = 0.3 * side_length();
        let at_min = StripComparison::new(d, FRAC_PI_3).unwrap();
        assert!(((full - d) / at_min.delta - 2.0 / SQRT3).abs() < 1e-12);
        assert!(StripComparison::new(0.0, 0.1).is_err());
        let rep = strip_monotonicity_check(20_000, 5).unwrap();
        assert_eq!(rep.violations, 0);
        assert!(rep.min_slack >= 0.0);
    }

    #[test]
    fn halving_examples() {
        let par = Parallelogram {
            origin: [0.1, 0.3, 0.6],
            u: [0.2, -0.1, -0.1],
            v: [0.1, 0.2, -0.3],
        };
        let corners = [par.point(0.0, 0.0), par.point(1.0, 0.0), par.point(0.0, 1.0)];
        assert!((par.ratio(&corners[0], &corners[1], &corners[2]) - 0.5).abs() < 1e-12);
        let mid = par.point(0.5, 0.0);
        assert!(par.ratio(&corners[0], &mid, &corners[1]) < 1e-15);
        let rep = parallelogram_halving_test(20_000, 9).unwrap();
        assert_eq!(rep.violations, 0);
        assert!(rep.max_ratio > 0.499 && rep.max_ratio <= 0.5);
        assert!(rep.max_ratio_uniform < rep.max_ratio_corner);
    }

    #[test]
    fn random_parallelograms_fit() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let par = Parallelogram::random(&mut rng);
            for (s, t) in [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)] {
                let w: [f64; 3] = std::array::from_fn(|i| par.origin[i] + s * par.u[i] + t * par.v[i]);
                assert!(w.iter().all(|&x| x >= -1e-12));
            }
        }
    }

    #[test]
    fn close_pairs() {
        assert_eq!(close_pair_check(20_000, 2).unwrap().violations, 0);
    }

    proptest! {
        #[test]
        fn identity_on_random_angles(x in 0.0..FRAC_PI_3) {
            let (a, b, c) = abc_of_angle(x).unwrap();
            prop_assert!((a + b + c - 1.0).abs() < 1e-12);
            prop_assert!(region_area(x).unwrap() < SIX_TWENTY_FIFTHS);
            prop_assert!(((FRAC_PI_3 + x).sin() - (x - FRAC_PI_6).cos()).abs() < 1e-12);
        }
    }
}
