//! Points, areas and distances in the unit-area reference triangle.
//!
//! Points live in barycentric coordinates relative to `T`. Because `T` has
//! area 1, the absolute determinant of three weight rows is directly the area
//! of the triangle they span, measured as a fraction of `T`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Tolerance for identities that hold up to double rounding.
pub const GEOM_TOL: f64 = 1e-12;

/// Side length of the equilateral triangle of area 1, `2 / 3^(1/4)`.
pub fn side_length() -> f64 {
    2.0 / 3f64.powf(0.25)
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CartPoint {
    pub x: f64,
    pub y: f64,
}

impl CartPoint {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(&self, other: &CartPoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// A point of the closed reference triangle, as barycentric weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct BaryPoint {
    w: [f64; 3],
}

impl BaryPoint {
    /// Validates that the weights sum to 1 and are non-negative, both up to
    /// [`GEOM_TOL`].
    pub fn new(l1: f64, l2: f64, l3: f64) -> Result<Self> {
        let w = [l1, l2, l3];
        if w.iter().any(|v| !v.is_finite()) {
            return domain(format!("non-finite barycentric weights {w:?}"));
        }
        let sum = l1 + l2 + l3;
        if (sum - 1.0).abs() > GEOM_TOL {
            return domain(format!("barycentric weights {w:?} sum to {sum}, not 1"));
        }
        if w.iter().any(|&v| v < -GEOM_TOL) {
            return domain(format!("barycentric weights {w:?} leave the triangle"));
        }
        Ok(Self { w })
    }

    /// Clamp negative weights to zero and renormalize.
    ///
    /// Idempotent on points of `T`; weights that are all non-positive map to
    /// the centroid.
    pub fn project(raw: [f64; 3]) -> Self {
        let clamped = raw.map(|v| if v.is_finite() { v.max(0.0) } else { 0.0 });
        let sum: f64 = clamped.iter().sum();
        if sum <= 0.0 {
            return Self::centroid();
        }
        Self {
            w: clamped.map(|v| v / sum),
        }
    }

    pub const fn vertex(i: usize) -> Self {
        let mut w = [0.0; 3];
        w[i] = 1.0;
        Self { w }
    }

    pub const fn centroid() -> Self {
        Self {
            w: [1.0 / 3.0; 3],
        }
    }

    pub fn weights(&self) -> [f64; 3] {
        self.w
    }

    pub fn l1(&self) -> f64 {
        self.w[0]
    }

    pub fn l2(&self) -> f64 {
        self.w[1]
    }

    pub fn l3(&self) -> f64 {
        self.w[2]
    }

    /// Relabel the weights: entry `i` of the result is weight `perm[i]`.
    pub fn permuted(&self, perm: [usize; 3]) -> Self {
        Self {
            w: perm.map(|i| self.w[i]),
        }
    }
}

impl TryFrom<[f64; 3]> for BaryPoint {
    type Error = crate::Error;

    fn try_from(w: [f64; 3]) -> Result<Self> {
        Self::new(w[0], w[1], w[2])
    }
}

impl From<BaryPoint> for [f64; 3] {
    fn from(p: BaryPoint) -> Self {
        p.w
    }
}

/// The equilateral triangle `T` of unit area.
///
/// `v0` is the apex on the positive y-axis; the base `v1 v2` is horizontal and
/// centered at the origin, with `v1` on the left.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceTriangle {
    pub v0: CartPoint,
    pub v1: CartPoint,
    pub v2: CartPoint,
    pub side_length: f64,
}

impl ReferenceTriangle {
    pub fn unit() -> Self {
        let l = side_length();
        let h = 3f64.sqrt() / 2.0 * l;
        Self {
            v0: CartPoint::new(0.0, h),
            v1: CartPoint::new(-l / 2.0, 0.0),
            v2: CartPoint::new(l / 2.0, 0.0),
            side_length: l,
        }
    }

    pub fn vertices(&self) -> [CartPoint; 3] {
        [self.v0, self.v1, self.v2]
    }

    pub fn height(&self) -> f64 {
        self.v0.y - self.v1.y
    }

    pub fn area(&self) -> f64 {
        shoelace_area(self.v0, self.v1, self.v2)
    }
}

impl Default for ReferenceTriangle {
    fn default() -> Self {
        Self::unit()
    }
}

/// Affine image of raw weights (which need not lie in `T`).
pub fn weights_to_cart(w: [f64; 3], t: &ReferenceTriangle) -> CartPoint {
    CartPoint::new(
        w[0] * t.v0.x + w[1] * t.v1.x + w[2] * t.v2.x,
        w[0] * t.v0.y + w[1] * t.v1.y + w[2] * t.v2.y,
    )
}

pub fn bary_to_cart(p: &BaryPoint, t: &ReferenceTriangle) -> CartPoint {
    weights_to_cart(p.w, t)
}

/// Inverse of [`weights_to_cart`]. The weights are returned raw; points
/// outside `T` get negative entries.
pub fn cart_to_bary(c: CartPoint, t: &ReferenceTriangle) -> [f64; 3] {
    let (ax, ay) = (t.v0.x - t.v2.x, t.v0.y - t.v2.y);
    let (bx, by) = (t.v1.x - t.v2.x, t.v1.y - t.v2.y);
    let (px, py) = (c.x - t.v2.x, c.y - t.v2.y);
    let det = ax * by - ay * bx;
    let l1 = (px * by - py * bx) / det;
    let l2 = (ax * py - ay * px) / det;
    [l1, l2, 1.0 - l1 - l2]
}

/// Determinant of three weight rows. Its absolute value is the area of the
/// spanned triangle in units of `area(T)` whenever each row sums to 1.
pub fn weight_det(p: [f64; 3], q: [f64; 3], r: [f64; 3]) -> f64 {
    p[0] * (q[1] * r[2] - q[2] * r[1]) - p[1] * (q[0] * r[2] - q[2] * r[0])
        + p[2] * (q[0] * r[1] - q[1] * r[0])
}

/// Area of the triangle `pqr` as a fraction of `area(T)`.
///
/// The arguments are put in a canonical order first, so every permutation
/// of the same three points gives the bit-identical result.
pub fn triple_area(p: &BaryPoint, q: &BaryPoint, r: &BaryPoint) -> f64 {
    let key = |a: &&BaryPoint, b: &&BaryPoint| {
        a.w.iter()
            .zip(&b.w)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    };
    let mut s = [p, q, r];
    s.sort_by(key);
    weight_det(s[0].w, s[1].w, s[2].w).abs()
}

pub fn shoelace_area(a: CartPoint, b: CartPoint, c: CartPoint) -> f64 {
    ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y)).abs() / 2.0
}

/// Euclidean distance between the Cartesian images, in absolute units.
/// Divide by `t.side_length` for multiples of the side.
pub fn distance(p: &BaryPoint, q: &BaryPoint, t: &ReferenceTriangle) -> f64 {
    bary_to_cart(p, t).dist(&bary_to_cart(q, t))
}

/// Full width of the locus `{x : area(p, q, x) <= sigma}` for a base of
/// length `d`: the band of half-width `2 sigma / d` around line `pq`.
pub fn strip_width(d: f64, sigma: f64) -> Result<f64> {
    if !d.is_finite() || d <= 0.0 {
        return domain(format!("strip base length must be positive, got {d}"));
    }
    if sigma.is_nan() || sigma < 0.0 {
        return domain(format!("strip area threshold must be non-negative, got {sigma}"));
    }
    Ok(4.0 * sigma / d)
}

/// Largest pairwise distance; zero for fewer than two points.
pub fn diameter(points: &[CartPoint]) -> f64 {
    let mut best = 0.0f64;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.max(a.dist(b));
        }
    }
    best
}

/// Closed infinite band of points forming area at most `sigma` with a segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Strip {
    pub anchor_a: CartPoint,
    pub anchor_b: CartPoint,
    pub half_width: f64,
}

impl Strip {
    pub fn for_area(anchor_a: CartPoint, anchor_b: CartPoint, sigma: f64) -> Result<Self> {
        let d = anchor_a.dist(&anchor_b);
        if d == 0.0 {
            return domain("strip anchors coincide");
        }
        let width = strip_width(d, sigma)?;
        if width <= 0.0 {
            return domain("strip has zero width");
        }
        Ok(Self {
            anchor_a,
            anchor_b,
            half_width: width / 2.0,
        })
    }

    pub fn base_length(&self) -> f64 {
        self.anchor_a.dist(&self.anchor_b)
    }

    /// Signed distance from the center line, positive to the left of `a -> b`.
    pub fn offset(&self, x: CartPoint) -> f64 {
        let (dx, dy) = (self.anchor_b.x - self.anchor_a.x, self.anchor_b.y - self.anchor_a.y);
        (dx * (x.y - self.anchor_a.y) - dy * (x.x - self.anchor_a.x)) / self.base_length()
    }

    pub fn contains(&self, x: CartPoint) -> bool {
        self.offset(x).abs() <= self.half_width * (1.0 + GEOM_TOL)
    }

    /// Point on the boundary line on the given side, at parameter `t` along
    /// the segment direction (`t = 0` abreast of `anchor_a`, `t = 1` of `anchor_b`).
    pub fn boundary_point(&self, t: f64, left: bool) -> CartPoint {
        let d = self.base_length();
        let (ux, uy) = (
            (self.anchor_b.x - self.anchor_a.x) / d,
            (self.anchor_b.y - self.anchor_a.y) / d,
        );
        let s = if left { self.half_width } else { -self.half_width };
        CartPoint::new(
            self.anchor_a.x + t * d * ux - s * uy,
            self.anchor_a.y + t * d * uy + s * ux,
        )
    }
}
