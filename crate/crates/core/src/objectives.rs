//! Triple-area statistics of point configurations and the explicit
//! constructions.
//!
//! Float evaluation goes through [`triple_area`]; the exact route
//! ([`ExactConfiguration`]) uses big rationals so that ties at thresholds such
//! as 1/4 are decided correctly.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::geometry::{triple_area, BaryPoint};

/// Thresholds reported by [`evaluate`]: 6/25 and 1/4.
pub const DEFAULT_THRESHOLDS: [f64; 2] = [0.24, 0.25];

/// Below this many triples evaluation stays on one thread.
const PARALLEL_TRIPLES: usize = 1 << 14;

/// Labels of the five-point 1/6 witness, in point order.
pub const FIG13_LABELS: [&str; 5] = ["a", "b", "c", "d", "e"];

/// An ordered list of at least three points of `T`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<BaryPoint>", into = "Vec<BaryPoint>")]
pub struct Configuration {
    points: Vec<BaryPoint>,
}

impl TryFrom<Vec<BaryPoint>> for Configuration {
    type Error = Error;
    fn try_from(points: Vec<BaryPoint>) -> Result<Self> {
        Self::new(points)
    }
}

impl From<Configuration> for Vec<BaryPoint> {
    fn from(c: Configuration) -> Self {
        c.points
    }
}

impl Configuration {
    pub fn new(points: Vec<BaryPoint>) -> Result<Self> {
        if points.len() < 3 {
            return domain(format!("a configuration needs at least 3 points, got {}", points.len()));
        }
        Ok(Self { points })
    }

    pub fn from_weights(weights: &[[f64; 3]]) -> Result<Self> {
        let pts = weights
            .iter()
            .map(|w| BaryPoint::new(w[0], w[1], w[2]))
            .collect::<Result<Vec<_>>>()?;
        Self::new(pts)
    }

    pub fn points(&self) -> &[BaryPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Reorder points: position `i` of the result is point `order[i]`.
    pub fn reordered(&self, order: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.len()];
        if order.len() != self.len() || order.iter().any(|&i| i >= self.len() || std::mem::replace(&mut seen[i], true)) {
            return domain("reordering must be a permutation of the point indices");
        }
        Self::new(order.iter().map(|&i| self.points[i]).collect())
    }

    /// Relabel the corners of `T` for every point.
    pub fn corner_permuted(&self, perm: [usize; 3]) -> Self {
        Self {
            points: self.points.iter().map(|p| p.permuted(perm)).collect(),
        }
    }

    /// True if every point lies on the `k`-refinement lattice of `T`.
    pub fn on_lattice(&self, k: u32) -> bool {
        self.points.iter().all(|p| {
            p.weights()
                .iter()
                .all(|w| (w * k as f64 - (w * k as f64).round()).abs() < 1e-12)
        })
    }
}

/// Lexicographically ordered index triples `i < j < l`.
pub fn triples(n: usize) -> impl Iterator<Item = [usize; 3]> {
    (0..n).flat_map(move |i| ((i + 1)..n).flat_map(move |j| ((j + 1)..n).map(move |l| [i, j, l])))
}

pub fn binomial(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    (0..r).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangleArea {
    pub triple: [usize; 3],
    pub area: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdCount {
    pub threshold: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripleAreaReport {
    pub areas: Vec<TriangleArea>,
    pub min_area: f64,
    /// Lexicographically smallest triple attaining `min_area`.
    pub min_triple: [usize; 3],
    /// Number of triples with area at most each threshold (inclusive).
    pub count_at_most: Vec<ThresholdCount>,
}

impl TripleAreaReport {
    pub fn count_for(&self, threshold: f64) -> Option<usize> {
        self.count_at_most
            .iter()
            .find(|c| c.threshold == threshold)
            .map(|c| c.count)
    }
}

fn area_list(points: &[BaryPoint]) -> Vec<TriangleArea> {
    let idx: Vec<[usize; 3]> = triples(points.len()).collect();
    let eval = |t: &[usize; 3]| TriangleArea {
        triple: *t,
        area: triple_area(&points[t[0]], &points[t[1]], &points[t[2]]),
    };
    if idx.len() >= PARALLEL_TRIPLES {
        idx.par_iter().map(eval).collect()
    } else {
        idx.iter().map(eval).collect()
    }
}

/// All triple areas with counts at [`DEFAULT_THRESHOLDS`].
pub fn evaluate(config: &Configuration) -> TripleAreaReport {
    evaluate_with(config, &DEFAULT_THRESHOLDS)
}

pub fn evaluate_with(config: &Configuration, thresholds: &[f64]) -> TripleAreaReport {
    let areas = area_list(&config.points);
    let mut min = areas[0];
    for a in &areas[1..] {
        if a.area < min.area {
            min = *a;
        }
    }
    let count_at_most = thresholds
        .iter()
        .map(|&threshold| ThresholdCount {
            threshold,
            count: areas.iter().filter(|a| a.area <= threshold).count(),
        })
        .collect();
    TripleAreaReport {
        min_area: min.area,
        min_triple: min.triple,
        areas,
        count_at_most,
    }
}

/// Smallest triple area, without building a report.
pub fn min_area(points: &[BaryPoint]) -> f64 {
    let mut best = f64::INFINITY;
    for [i, j, l] in triples(points.len()) {
        best = best.min(triple_area(&points[i], &points[j], &points[l]));
    }
    best
}

/// Number of triples with area `<= sigma`, and the summed area of those
/// triples.
pub fn small_count(points: &[BaryPoint], sigma: f64) -> (usize, f64) {
    let mut count = 0;
    let mut sum = 0.0;
    for [i, j, l] in triples(points.len()) {
        let a = triple_area(&points[i], &points[j], &points[l]);
        if a <= sigma {
            count += 1;
            sum += a;
        }
    }
    (count, sum)
}

// ---------------------------------------------------------------------------
// exact route

pub type Rational = BigRational;

fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parse `p/q`, an integer, or a plain decimal (`0.125`, `-3.5e-2`) into an
/// exact rational.
pub fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|e| format!("bad numerator in {s:?}: {e}"))?;
        let q: BigInt = q.trim().parse().map_err(|e| format!("bad denominator in {s:?}: {e}"))?;
        if q.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = s[i + 1..].parse().map_err(|e| format!("bad exponent in {s:?}: {e}"))?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if (int.is_empty() && frac.is_empty()) || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(format!("not a number: {s:?}"));
    }
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|e| format!("{s:?}: {e}"))?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut r = Rational::from_integer(digits);
    if scale >= 0 {
        r *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -r } else { r })
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Configuration with exact rational barycentric weights.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactConfiguration {
    points: Vec<[Rational; 3]>,
}

impl ExactConfiguration {
    pub fn new(points: Vec<[Rational; 3]>) -> Result<Self> {
        if points.len() < 3 {
            return domain(format!("a configuration needs at least 3 points, got {}", points.len()));
        }
        for (i, p) in points.iter().enumerate() {
            if p.iter().any(|w| w.is_negative()) || &p[0] + &p[1] + &p[2] != Rational::one() {
                return domain(format!("point {i} is not a barycentric point of T"));
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[[Rational; 3]] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn to_float(&self) -> Configuration {
        let points = self
            .points
            .iter()
            .map(|p| BaryPoint::project(std::array::from_fn(|i| rational_to_f64(&p[i]))))
            .collect();
        Configuration { points }
    }
}

pub fn exact_triple_area(a: &[Rational; 3], b: &[Rational; 3], c: &[Rational; 3]) -> Rational {
    let det = &a[0] * (&b[1] * &c[2] - &b[2] * &c[1]) - &a[1] * (&b[0] * &c[2] - &b[2] * &c[0])
        + &a[2] * (&b[0] * &c[1] - &b[1] * &c[0]);
    det.abs()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactReport {
    pub areas: Vec<([usize; 3], Rational)>,
    pub min_area: Rational,
    pub min_triple: [usize; 3],
}

impl ExactReport {
    pub fn count_at_most(&self, threshold: &Rational) -> usize {
        self.areas.iter().filter(|(_, a)| a <= threshold).count()
    }

    pub fn count_above(&self, threshold: &Rational) -> usize {
        self.areas.len() - self.count_at_most(threshold)
    }

    pub fn area_of(&self, triple: [usize; 3]) -> Option<&Rational> {
        let mut t = triple;
        t.sort_unstable();
        self.areas.iter().find(|(x, _)| *x == t).map(|(_, a)| a)
    }
}

pub fn evaluate_exact(config: &ExactConfiguration) -> ExactReport {
    let p = &config.points;
    let areas: Vec<_> = triples(p.len())
        .map(|t| (t, exact_triple_area(&p[t[0]], &p[t[1]], &p[t[2]])))
        .collect();
    let (min_triple, min_area) = areas
        .iter()
        .fold(None::<&([usize; 3], Rational)>, |best, cur| match best {
            Some(b) if b.1 <= cur.1 => Some(b),
            _ => Some(cur),
        })
        .cloned()
        .expect("at least one triple");
    ExactReport {
        areas,
        min_area,
        min_triple,
    }
}

// ---------------------------------------------------------------------------
// constructions

/// The five-point configuration with minimum triple area 1/6: `a` at the
/// apex, `b` and `e` at the midpoints of the two slanted sides, `c` and `d`
/// trisecting the base.
pub fn fig13_exact() -> ExactConfiguration {
    let z = || rat(0, 1);
    ExactConfiguration::new(vec![
        [rat(1, 1), z(), z()],
        [rat(1, 2), rat(1, 2), z()],
        [z(), rat(2, 3), rat(1, 3)],
        [z(), rat(1, 3), rat(2, 3)],
        [rat(1, 2), z(), rat(1, 2)],
    ])
    .expect("valid construction")
}

pub fn fig13_construction() -> Configuration {
    fig13_exact().to_float()
}

/// Index triple of a labelled triangle of the 1/6 witness, e.g. `"bcd"`.
pub fn fig13_triple(labels: &str) -> Option<[usize; 3]> {
    let idx: Vec<usize> = labels
        .chars()
        .map(|c| FIG13_LABELS.iter().position(|l| l.starts_with(c)))
        .collect::<Option<_>>()?;
    let mut t: [usize; 3] = idx.try_into().ok()?;
    t.sort_unstable();
    (t[0] < t[1] && t[1] < t[2]).then_some(t)
}

/// Upper bound (exclusive) on the cluster jitter radius.
pub const MAX_CLUSTER_EPS: f64 = 0.01;

/// `4k` points in four clusters of `k` around the three vertices and the
/// centroid. Each point moves at most `eps` in every barycentric weight, on
/// a fixed deterministic pattern; `eps = 0` stacks each cluster on its
/// center.
pub fn clustered_construction(k: usize, eps: f64) -> Result<Configuration> {
    if k == 0 {
        return domain("cluster size must be at least 1");
    }
    if !(0.0..MAX_CLUSTER_EPS).contains(&eps) {
        return domain(format!("cluster radius must lie in [0, {MAX_CLUSTER_EPS}), got {eps}"));
    }
    let mut pts = Vec::with_capacity(4 * k);
    for v in 0..3 {
        let (a, b) = ((v + 1) % 3, (v + 2) % 3);
        for j in 0..k {
            let r = eps * (j + 1) as f64 / k as f64;
            let s = (j as f64 + 0.5) / k as f64;
            let mut w = [0.0; 3];
            w[v] = 1.0 - r;
            w[a] = r * s;
            w[b] = r * (1.0 - s);
            pts.push(BaryPoint::project(w));
        }
    }
    let third = 1.0 / 3.0;
    for j in 0..k {
        let r = eps * (j + 1) as f64 / k as f64;
        let theta = std::f64::consts::TAU * j as f64 / k as f64;
        let d = [0.0, 1.0, 2.0].map(|m: f64| (theta - m * std::f64::consts::TAU / 3.0).cos());
        pts.push(BaryPoint::project(d.map(|x| third + r * x)));
    }
    Configuration::new(pts)
}

/// The `eps = 0` clustered configuration in exact arithmetic.
pub fn clustered_exact(k: usize) -> Result<ExactConfiguration> {
    if k == 0 {
        return domain("cluster size must be at least 1");
    }
    let centers = [
        [rat(1, 1), rat(0, 1), rat(0, 1)],
        [rat(0, 1), rat(1, 1), rat(0, 1)],
        [rat(0, 1), rat(0, 1), rat(1, 1)],
        [rat(1, 3), rat(1, 3), rat(1, 3)],
    ];
    let pts = centers
        .iter()
        .flat_map(|c| std::iter::repeat_n(c.clone(), k))
        .collect();
    ExactConfiguration::new(pts)
}

/// Exact small-triple fraction `1 - 4k^3 / C(4k, 3)` of the stacked
/// four-cluster configuration.
pub fn clustered_fraction_ratio(k: u64) -> Result<Rational> {
    if k == 0 {
        return domain("cluster size must be at least 1");
    }
    let n = BigInt::from(4 * k);
    let total = &n * (&n - 1) * (&n - 2) / BigInt::from(6);
    let big = BigInt::from(4) * BigInt::from(k).pow(3);
    Ok(Rational::one() - Rational::new(big, total))
}

pub fn clustered_fraction_exact(k: u64) -> Result<f64> {
    clustered_fraction_ratio(k).map(|r| rational_to_f64(&r))
}

/// `(3/10) C(n,3)`: the number of small triangles forced by averaging if
/// every five points span at least three.
pub fn averaging_bound(n: u64) -> Result<f64> {
    if n < 5 {
        return domain(format!("averaging bound needs n >= 5, got {n}"));
    }
    Ok(0.3 * binomial(n, 3) as f64)
}

// ---------------------------------------------------------------------------
// configuration files

fn parse_lines(text: &str) -> Result<Vec<[Rational; 3]>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let perr = |msg: String| Error::Parse { line: i + 1, msg };
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(perr(format!("expected 3 weights, found {}", toks.len())));
        }
        let mut w: [Rational; 3] = Default::default();
        for (slot, tok) in w.iter_mut().zip(&toks) {
            *slot = parse_rational(tok).map_err(perr)?;
        }
        out.push(w);
    }
    Ok(out)
}

/// Float configuration from text: one point per line as `l1 l2 l3`
/// (decimals or `p/q`), `#` starts a comment. Weights must sum to 1 within
/// 1e-12.
pub fn parse_configuration(text: &str) -> Result<Configuration> {
    let pts = parse_lines(text)?
        .into_iter()
        .enumerate()
        .map(|(i, w)| {
            let f = w.each_ref().map(rational_to_f64);
            BaryPoint::new(f[0], f[1], f[2]).map_err(|e| Error::Domain(format!("point {}: {e}", i + 1)))
        })
        .collect::<Result<Vec<_>>>()?;
    Configuration::new(pts)
}

/// Exact configuration from the same text format; weights must sum to
/// exactly 1.
pub fn parse_exact_configuration(text: &str) -> Result<ExactConfiguration> {
    ExactConfiguration::new(parse_lines(text)?)
}

/// Shortest round-trip decimal form of each weight.
pub fn write_configuration(config: &Configuration) -> String {
    let mut s = String::new();
    for p in config.points() {
        let [a, b, c] = p.weights();
        let _ = writeln!(s, "{a:?} {b:?} {c:?}");
    }
    s
}

pub fn write_exact_configuration(config: &ExactConfiguration) -> String {
    let mut s = String::new();
    for p in config.points() {
        let _ = writeln!(s, "{} {} {}", p[0], p[1], p[2]);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(p: i64, q: i64) -> Rational {
        rat(p, q)
    }

    #[test]
    fn evaluate_examples() {
        let tri = Configuration::new((0..3).map(BaryPoint::vertex).collect()).unwrap();
        let rep = evaluate(&tri);
        assert!((rep.min_area - 1.0).abs() < 1e-12);
        assert_eq!(rep.areas.len(), 1);

        let mut pts: Vec<_> = (0..3).map(BaryPoint::vertex).collect();
        pts.push(BaryPoint::centroid());
        let rep = evaluate(&Configuration::new(pts).unwrap());
        let mut areas: Vec<f64> = rep.areas.iter().map(|a| a.area).collect();
        areas.sort_by(f64::total_cmp);
        for (got, want) in areas.iter().zip([1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert_eq!(rep.min_triple, [0, 1, 3]);
        assert_eq!(rep.count_for(0.25), Some(0));
        assert!(Configuration::new(vec![BaryPoint::centroid(); 2]).is_err());
    }

    #[test]
    fn fig13_exact_areas() {
        let rep = evaluate_exact(&fig13_exact());
        assert_eq!(rep.min_area, r(1, 6));
        for name in ["abc", "ade", "bcd", "cde"] {
            assert_eq!(rep.area_of(fig13_triple(name).unwrap()), Some(&r(1, 6)), "{name}");
        }
        // independent oracle: hand-derived areas of all ten triangles
        let want = [
            ("abc", r(1, 6)),
            ("abd", r(1, 3)),
            ("abe", r(1, 4)),
            ("acd", r(1, 3)),
            ("ace", r(1, 3)),
            ("ade", r(1, 6)),
            ("bcd", r(1, 6)),
            ("bce", r(1, 4)),
            ("bde", r(1, 4)),
            ("cde", r(1, 6)),
        ];
        for (name, area) in &want {
            assert_eq!(rep.area_of(fig13_triple(name).unwrap()), Some(area), "{name}");
        }
        assert_eq!(rep.count_at_most(&r(1, 4)), 7);
        assert_eq!(rep.count_at_most(&r(6, 25)), 4);
        assert_eq!(rep.min_triple, [0, 1, 2]);
    }

    #[test]
    fn fig13_float_agrees() {
        let c = fig13_construction();
        let rep = evaluate(&c);
        assert!((rep.min_area - 1.0 / 6.0).abs() < 1e-12);
        assert!(rep.min_area < 0.24);
        assert!(c.on_lattice(6));
        assert!(!c.on_lattice(5));
        // the reflection swapping b/e and c/d preserves the counts
        let mirrored = evaluate(&c.corner_permuted([0, 2, 1]));
        assert_eq!(mirrored.count_for(0.24), rep.count_for(0.24));
        assert!((mirrored.min_area - rep.min_area).abs() < 1e-15);
    }

    #[test]
    fn clustered_counts() {
        let exact = evaluate_exact(&clustered_exact(3).unwrap());
        assert_eq!(exact.areas.len(), 220);
        assert_eq!(exact.count_above(&r(1, 4)), 108);
        assert_eq!(Rational::new(BigInt::from(exact.count_at_most(&r(1, 4))), BigInt::from(220)), r(112, 220));
        assert_eq!(clustered_fraction_ratio(3).unwrap(), r(112, 220));
        for k in 1..=5u64 {
            let rep = evaluate_exact(&clustered_exact(k as usize).unwrap());
            let frac = Rational::new(BigInt::from(rep.count_at_most(&r(1, 4))), BigInt::from(rep.areas.len()));
            assert_eq!(frac, clustered_fraction_ratio(k).unwrap(), "k={k}");
        }
        let ten = clustered_fraction_exact(10).unwrap();
        assert!((ten - (1.0 - 4000.0 / 9880.0)).abs() < 1e-15);
        let rep = evaluate(&clustered_construction(10, 0.0).unwrap());
        assert_eq!(rep.count_for(0.25), Some(9880 - 4000));
        assert!((clustered_fraction_exact(500).unwrap() - 0.625).abs() < 7e-4);
    }

    #[test]
    fn clustered_jitter() {
        assert!(clustered_construction(3, 0.01).is_err());
        assert!(clustered_construction(3, -0.001).is_err());
        assert!(clustered_construction(0, 0.0).is_err());
        let c = clustered_construction(4, 0.005).unwrap();
        assert_eq!(c.len(), 16);
        let centers = [
            BaryPoint::vertex(0),
            BaryPoint::vertex(1),
            BaryPoint::vertex(2),
            BaryPoint::centroid(),
        ];
        for (i, p) in c.points().iter().enumerate() {
            let center = centers[i / 4];
            let dev = (0..3)
                .map(|j| (p.weights()[j] - center.weights()[j]).abs())
                .fold(0.0, f64::max);
            assert!(dev <= 0.005 + 1e-15 && dev > 0.0);
        }
        // the four centers span triangles of area at least 1/3
        let rep = evaluate(&Configuration::new(centers.to_vec()).unwrap());
        assert!(rep.min_area >= 1.0 / 3.0 - 1e-12);
        // small jitter keeps the cross-cluster triangles large
        let rep = evaluate(&c);
        assert_eq!(rep.count_for(0.25), Some(560 - 4 * 64));
    }

    #[test]
    fn averaging_bound_examples() {
        assert_eq!(averaging_bound(5).unwrap(), 3.0);
        assert_eq!(averaging_bound(6).unwrap(), 6.0);
        assert_eq!(averaging_bound(10).unwrap(), 36.0);
        assert!(averaging_bound(4).is_err());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("1/3").unwrap(), r(1, 3));
        assert_eq!(parse_rational("0.25").unwrap(), r(1, 4));
        assert_eq!(parse_rational("-1.5e-1").unwrap(), r(-3, 20));
        assert_eq!(parse_rational("2").unwrap(), r(2, 1));
        assert_eq!(parse_rational(".5").unwrap(), r(1, 2));
        for bad in ["", "1/0", "a", "1.2.3", "1e", "--1", "."] {
            assert!(parse_rational(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn config_files_roundtrip() {
        let text = "# the witness\n1 0 0\n1/2 1/2 0  # b\n0 2/3 1/3\n0 1/3 2/3\n0.5 0 0.5\n";
        let exact = parse_exact_configuration(text).unwrap();
        assert_eq!(exact, fig13_exact());
        assert_eq!(parse_exact_configuration(&write_exact_configuration(&exact)).unwrap(), exact);
        let float = parse_configuration(text).unwrap();
        assert_eq!(float, fig13_construction());
        assert_eq!(parse_configuration(&write_configuration(&float)).unwrap(), float);
        assert!(matches!(parse_configuration("1 0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(parse_configuration("1 0 0\n0 1 0\n0.5 0.6 0\n").is_err());
        assert!(parse_exact_configuration("1 0 0\n0 1 0\n0.3333 0.3333 0.3334\n").is_ok());
        assert!(parse_exact_configuration("1 0 0\n0 1 0\n0.3333 0.3333 0.3333\n").is_err());
        assert!(parse_configuration("1 0 0\n0 1 0\n").is_err());
    }

    #[test]
    fn serde_roundtrip() {
        let c = fig13_construction();
        let json = serde_json::to_string(&c).unwrap();
        let back: Configuration = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
        assert!(serde_json::from_str::<Configuration>("[[1,0,0],[0,1,0]]").is_err());
    }

    #[test]
    fn large_evaluation_is_ordered() {
        let c = clustered_construction(12, 0.004).unwrap();
        let rep = evaluate(&c);
        assert_eq!(rep.areas.len() as u64, binomial(48, 3));
        let idx: Vec<_> = triples(48).collect();
        assert!(rep.areas.iter().zip(&idx).all(|(a, t)| a.triple == *t));
        assert!((rep.min_area - min_area(c.points())).abs() == 0.0);
    }

    fn point() -> impl Strategy<Value = BaryPoint> {
        (0.0..1.0f64, 0.0..1.0f64).prop_map(|(a, b)| {
            let s = a.sqrt();
            BaryPoint::project([1.0 - s, s * (1.0 - b), s * b])
        })
    }

    proptest! {
        #[test]
        fn permutation_invariance(pts in prop::collection::vec(point(), 5..8), seed in any::<u64>()) {
            let c = Configuration::new(pts).unwrap();
            let mut order: Vec<usize> = (0..c.len()).collect();
            // deterministic shuffle from the seed
            let mut s = seed;
            for i in (1..order.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                order.swap(i, (s >> 33) as usize % (i + 1));
            }
            let a = evaluate(&c);
            let b = evaluate(&c.reordered(&order).unwrap());
            prop_assert_eq!(a.min_area, b.min_area);
            prop_assert_eq!(&a.count_at_most, &b.count_at_most);
        }

        #[test]
        fn random_five_points_obey_bound(pts in prop::collection::vec(point(), 5)) {
            let c = Configuration::new(pts).unwrap();
            prop_assert!(evaluate(&c).min_area <= 0.24);
        }
    }
}
