use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{Grid, GridCell, LatticeCell, LatticePoint, Orientation, RegionSpec};
use crate::error::{domain, Result};
use crate::geometry::{diameter, weights_to_cart, CartPoint, ReferenceTriangle};

/// Largest parallelogram area (in units of `area(T)`) for which halving
/// still gives a triangle of area at most 6/25.
pub const HALVING_GATE: f64 = 0.48;

/// A convex lattice polygon `{x : lo_i <= x_i <= hi_i}` in scaled
/// barycentric coordinates; any bound may be absent.
///
/// Hexagons, corner triangles, parallelograms and `T` itself are all of this
/// form. The polygon may extend beyond `T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeBox {
    pub k: u32,
    pub lo: [Option<i64>; 3],
    pub hi: [Option<i64>; 3],
}

impl LatticeBox {
    pub fn new(k: u32, lo: [Option<i64>; 3], hi: [Option<i64>; 3]) -> Result<Self> {
        let b = Self { k, lo, hi };
        let ranges = b.implied_ranges();
        if ranges.iter().any(|r| r.is_none()) {
            return domain(format!("lattice polygon {lo:?}..{hi:?} is unbounded"));
        }
        if ranges.iter().flatten().any(|(l, h)| l > h) || b.vertices().len() < 3 {
            return domain(format!("lattice polygon {lo:?}..{hi:?} is degenerate"));
        }
        Ok(b)
    }

    /// `T` itself.
    pub fn whole(k: u32) -> Self {
        Self {
            k,
            lo: [Some(0); 3],
            hi: [None; 3],
        }
    }

    /// Effective `[min, max]` of each coordinate, using the other bounds and
    /// the fixed coordinate sum. `None` if unbounded.
    fn implied_ranges(&self) -> [Option<(i64, i64)>; 3] {
        let k = self.k as i64;
        std::array::from_fn(|i| {
            let (j, m) = ((i + 1) % 3, (i + 2) % 3);
            let from_others_hi = match (self.hi[j], self.hi[m]) {
                (Some(a), Some(b)) => Some(k - a - b),
                _ => None,
            };
            let from_others_lo = match (self.lo[j], self.lo[m]) {
                (Some(a), Some(b)) => Some(k - a - b),
                _ => None,
            };
            let lo = match (self.lo[i], from_others_hi) {
                (Some(a), Some(b)) => Some(a.max(b)),
                (a, b) => a.or(b),
            }?;
            let hi = match (self.hi[i], from_others_lo) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            }?;
            Some((lo, hi))
        })
    }

    pub fn contains_scaled(&self, x: [f64; 3], tol: f64) -> bool {
        self.violation(x) <= tol
    }

    /// Largest amount by which a scaled point breaks a bound (0 inside).
    pub fn violation(&self, x: [f64; 3]) -> f64 {
        let mut v = 0.0f64;
        for ((xi, lo), hi) in x.iter().zip(self.lo).zip(self.hi) {
            if let Some(l) = lo {
                v = v.max(l as f64 - xi);
            }
            if let Some(h) = hi {
                v = v.max(xi - h as f64);
            }
        }
        v
    }

    pub fn contains_lattice_point(&self, p: [i64; 3]) -> bool {
        (0..3).all(|i| {
            self.lo[i].is_none_or(|l| p[i] >= l) && self.hi[i].is_none_or(|h| p[i] <= h)
        })
    }

    pub fn contains_cell(&self, cell: &LatticeCell) -> bool {
        cell.vertices().iter().all(|&v| self.contains_lattice_point(v))
    }

    /// Polygon vertices in counter-clockwise order (as drawn).
    pub fn vertices(&self) -> Vec<[i64; 3]> {
        let k = self.k as i64;
        let mut lines = Vec::new();
        for i in 0..3 {
            lines.extend(self.lo[i].map(|b| (i, b)));
            lines.extend(self.hi[i].map(|b| (i, b)));
        }
        let mut found = BTreeSet::new();
        for (a, &(i, bi)) in lines.iter().enumerate() {
            for &(j, bj) in &lines[a + 1..] {
                if i == j {
                    continue;
                }
                let m = 3 - i - j;
                let mut p = [0; 3];
                p[i] = bi;
                p[j] = bj;
                p[m] = k - bi - bj;
                if self.contains_lattice_point(p) {
                    found.insert(p);
                }
            }
        }
        let mut pts: Vec<_> = found.into_iter().collect();
        let t = ReferenceTriangle::unit();
        let cart: Vec<CartPoint> = pts.iter().map(|p| LatticePoint(*p).to_cart(self.k, &t)).collect();
        let n = cart.len().max(1) as f64;
        let cx = cart.iter().map(|c| c.x).sum::<f64>() / n;
        let cy = cart.iter().map(|c| c.y).sum::<f64>() / n;
        let mut keyed: Vec<_> = pts
            .drain(..)
            .zip(cart)
            .map(|(p, c)| ((c.y - cy).atan2(c.x - cx), p))
            .collect();
        keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        keyed.into_iter().map(|(_, p)| p).collect()
    }

    /// Area in cell units (`area * k^2`), exact.
    pub fn area_cells(&self) -> i64 {
        let v = self.vertices();
        if v.len() < 3 {
            return 0;
        }
        let twice: i64 = (1..v.len() - 1)
            .map(|i| {
                let u = [v[i][0] - v[0][0], v[i][1] - v[0][1]];
                let w = [v[i + 1][0] - v[0][0], v[i + 1][1] - v[0][1]];
                u[0] * w[1] - u[1] * w[0]
            })
            .sum();
        twice.abs()
    }

    pub fn area(&self) -> f64 {
        self.area_cells() as f64 / (self.k as f64 * self.k as f64)
    }

    pub fn cart_vertices(&self, t: &ReferenceTriangle) -> Vec<CartPoint> {
        self.vertices()
            .into_iter()
            .map(|p| weights_to_cart(p.map(|v| v as f64 / self.k as f64), t))
            .collect()
    }

    pub fn diameter(&self) -> f64 {
        diameter(&self.cart_vertices(&ReferenceTriangle::unit()))
    }

    pub fn fits_in_triangle(&self) -> bool {
        self.vertices().iter().all(|p| p.iter().all(|&c| c >= 0))
    }

    /// Grid cells of `T` lying inside the polygon.
    pub fn cells_in_triangle(&self) -> Vec<GridCell> {
        Grid::new(self.k)
            .map(|g| {
                g.cells()
                    .filter(|c| self.contains_cell(&c.lattice(self.k)))
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Cells of the unbounded lattice inside the polygon, including those
    /// outside `T`.
    pub fn lattice_cell_count(&self) -> usize {
        let ranges = self.implied_ranges().map(|r| r.expect("bounded"));
        let k = self.k as i64;
        let mut count = 0;
        for (orientation, sum) in [(Orientation::Up, k - 1), (Orientation::Down, k + 1)] {
            for a in ranges[0].0 - 1..=ranges[0].1 + 1 {
                for b in ranges[1].0 - 1..=ranges[1].1 + 1 {
                    let cell = LatticeCell {
                        orientation,
                        corner: [a, b, sum - a - b],
                    };
                    if self.contains_cell(&cell) {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    pub fn permuted(&self, perm: [usize; 3]) -> Self {
        Self {
            k: self.k,
            lo: perm.map(|i| self.lo[i]),
            hi: perm.map(|i| self.hi[i]),
        }
    }
}

/// Direction of the side of `T` from vertex `from` to vertex `to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeDir {
    pub from: usize,
    pub to: usize,
}

impl LatticeDir {
    pub fn new(from: usize, to: usize) -> Result<Self> {
        if from > 2 || to > 2 || from == to {
            return domain(format!("no lattice direction from vertex {from} to {to}"));
        }
        Ok(Self { from, to })
    }

    pub fn vector(&self) -> [i64; 3] {
        let mut v = [0; 3];
        v[self.from] = -1;
        v[self.to] = 1;
        v
    }

    fn support(&self) -> [usize; 2] {
        [self.from, self.to]
    }
}

/// Lattice parallelogram with sides `a` and `b` (in grid steps) along two
/// non-parallel side directions of `T`, starting at `anchor`.
///
/// It holds `2ab` cells of the unbounded lattice and has area `2ab / k^2`.
/// It is allowed to overhang `T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParallelogramSpec {
    pub k: u32,
    pub a: u32,
    pub b: u32,
    pub anchor: LatticePoint,
    pub side_a: LatticeDir,
    pub side_b: LatticeDir,
}

impl ParallelogramSpec {
    /// Parallelogram at vertex `corner` of `T` with side `a` running toward
    /// vertex `toward_a` and side `b` toward the remaining vertex.
    pub fn at_corner(k: u32, corner: usize, toward_a: usize, a: u32, b: u32) -> Result<Self> {
        let other = (0..3)
            .find(|&v| v != corner && v != toward_a)
            .ok_or_else(|| crate::Error::Domain("corner and direction coincide".into()))?;
        Ok(Self {
            k,
            a,
            b,
            anchor: LatticePoint::vertex(k, corner),
            side_a: LatticeDir::new(corner, toward_a)?,
            side_b: LatticeDir::new(corner, other)?,
        })
    }

    pub fn area(&self) -> f64 {
        2.0 * self.a as f64 * self.b as f64 / (self.k as f64 * self.k as f64)
    }

    /// Area bound for a triangle inside the parallelogram.
    pub fn halving_bound(&self) -> f64 {
        self.area() / 2.0
    }

    pub fn passes_gate(&self) -> bool {
        self.area() <= HALVING_GATE + 1e-12
    }

    pub fn to_box(&self) -> Result<LatticeBox> {
        if self.a == 0 || self.b == 0 {
            return domain("parallelogram sides must be positive");
        }
        let (sa, sb) = (self.side_a.support(), self.side_b.support());
        let only = |s: [usize; 2], other: [usize; 2]| s.into_iter().find(|i| !other.contains(i));
        let (Some(ia), Some(ib)) = (only(sa, sb), only(sb, sa)) else {
            return domain("parallelogram sides are parallel");
        };
        let (va, vb) = (self.side_a.vector(), self.side_b.vector());
        let mut lo = [None; 3];
        let mut hi = [None; 3];
        for (i, v, len) in [(ia, va, self.a), (ib, vb, self.b)] {
            let start = self.anchor.0[i];
            let end = start + v[i] * len as i64;
            lo[i] = Some(start.min(end));
            hi[i] = Some(start.max(end));
        }
        LatticeBox::new(self.k, lo, hi)
    }
}

pub fn make_parallelogram(name: &str, spec: &ParallelogramSpec) -> Result<RegionSpec> {
    if spec.anchor.0.iter().sum::<i64>() != spec.k as i64 {
        return domain("parallelogram anchor is not a lattice point");
    }
    let b = spec.to_box()?;
    if b.cells_in_triangle().is_empty() {
        return domain(format!("parallelogram {name} does not overlap the grid"));
    }
    let cells = 2 * spec.a as i64 * spec.b as i64;
    if b.area_cells() != cells {
        return domain(format!(
            "parallelogram {name} has area {} cells, expected {cells}",
            b.area_cells()
        ));
    }
    RegionSpec::from_box(name, b)
}

/// Regular hexagon of the given side (in grid steps) around a lattice point.
pub fn make_hexagon(name: &str, k: u32, center: LatticePoint, side: u32) -> Result<RegionSpec> {
    let s = side as i64;
    if s == 0 {
        return domain("hexagon side must be positive");
    }
    if center.0.iter().sum::<i64>() != k as i64 || center.0.iter().any(|&c| c < s) {
        return domain(format!("hexagon of side {side} around {:?} leaves the grid", center.0));
    }
    let b = LatticeBox::new(
        k,
        center.0.map(|c| Some(c - s)),
        center.0.map(|c| Some(c + s)),
    )?;
    RegionSpec::from_box(name, b)
}

/// Upward triangle `{x_i >= lo_i}` of side `k - sum(lo)`, inside `T`.
pub fn make_triangle_up(name: &str, k: u32, lo: [i64; 3]) -> Result<RegionSpec> {
    if lo.iter().any(|&v| v < 0) || lo.iter().sum::<i64>() >= k as i64 {
        return domain(format!("upward triangle {lo:?} does not fit the grid"));
    }
    RegionSpec::from_box(name, LatticeBox::new(k, lo.map(Some), [None; 3])?)
}

/// Downward triangle `{x_i <= hi_i}` of side `sum(hi) - k`, inside `T`.
pub fn make_triangle_down(name: &str, k: u32, hi: [i64; 3]) -> Result<RegionSpec> {
    let b = LatticeBox::new(k, [None; 3], hi.map(Some))?;
    if !b.fits_in_triangle() || hi.iter().sum::<i64>() <= k as i64 {
        return domain(format!("downward triangle {hi:?} does not fit the grid"));
    }
    RegionSpec::from_box(name, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::side_length;

    fn corner_par(corner: usize, toward: usize, a: u32, b: u32) -> ParallelogramSpec {
        ParallelogramSpec::at_corner(10, corner, toward, a, b).unwrap()
    }

    #[test]
    fn parallelogram_areas() {
        // the (2,10) strip along the base, standing on the bottom side
        let p210 = ParallelogramSpec {
            k: 10,
            a: 2,
            b: 10,
            anchor: LatticePoint::vertex(10, 2),
            side_a: LatticeDir::new(2, 0).unwrap(),
            side_b: LatticeDir::new(2, 1).unwrap(),
        };
        let r = make_parallelogram("p210", &p210).unwrap();
        assert!((r.area - 0.40).abs() < 1e-12);
        assert_eq!(p210.to_box().unwrap().lattice_cell_count(), 40);
        assert!(p210.passes_gate());

        for (a, b) in [(3, 8), (4, 6)] {
            let spec = corner_par(0, 1, b, a);
            let r = make_parallelogram("p", &spec).unwrap();
            assert!((r.area - 0.48).abs() < 1e-12);
            assert_eq!(spec.to_box().unwrap().lattice_cell_count(), 2 * (a * b) as usize);
            assert!(spec.passes_gate());
            assert!((spec.halving_bound() - 0.24).abs() < 1e-12);
        }
        let p39 = corner_par(0, 1, 9, 3);
        assert!((make_parallelogram("p39", &p39).unwrap().area - 0.54).abs() < 1e-12);
        assert!(!p39.passes_gate());
    }

    #[test]
    fn every_gated_parallelogram_is_small() {
        for a in 1..=10u32 {
            for b in 1..=10u32 {
                for corner in 0..3 {
                    let toward = (corner + 1) % 3;
                    let spec = corner_par(corner, toward, a, b);
                    let r = make_parallelogram("p", &spec).unwrap();
                    assert_eq!(r.area, spec.area());
                    if 2 * a * b <= 48 {
                        assert!(r.area <= 0.48 + 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn parallelogram_errors() {
        let parallel = ParallelogramSpec {
            k: 10,
            a: 2,
            b: 2,
            anchor: LatticePoint::vertex(10, 0),
            side_a: LatticeDir::new(0, 1).unwrap(),
            side_b: LatticeDir::new(1, 0).unwrap(),
        };
        assert!(make_parallelogram("x", &parallel).is_err());
        let far = ParallelogramSpec {
            anchor: LatticePoint([30, -10, -10]),
            side_b: LatticeDir::new(0, 2).unwrap(),
            ..parallel
        };
        assert!(make_parallelogram("x", &far).is_err());
        assert!(LatticeDir::new(1, 1).is_err());
    }

    #[test]
    fn hexagon_and_triangle_diameters() {
        let l = side_length();
        for c in [[2, 2, 6], [3, 3, 4], [2, 6, 2], [4, 4, 2]] {
            let h = make_hexagon("h", 10, LatticePoint(c), 2).unwrap();
            assert_eq!(h.cells.len(), 24);
            assert!((h.area - 0.24).abs() < 1e-12);
            assert!((h.diam - 0.4 * l).abs() < 1e-12);
        }
        assert!(make_hexagon("h", 10, LatticePoint([1, 4, 5]), 2).is_err());
        assert!(make_hexagon("h", 10, LatticePoint([3, 3, 3]), 2).is_err());

        let up = make_triangle_up("t", 10, [6, 0, 0]).unwrap();
        assert_eq!(up.cells.len(), 16);
        assert!((up.diam - 0.4 * l).abs() < 1e-12);
        let down = make_triangle_down("t", 10, [4, 5, 5]).unwrap();
        assert_eq!(down.cells.len(), 16);
        assert!((down.diam - 0.4 * l).abs() < 1e-12);
        assert!(make_triangle_down("t", 10, [11, 1, 2]).is_err());
        assert!(make_triangle_up("t", 10, [-1, 5, 5]).is_err());
    }

    #[test]
    fn box_vertices_and_area() {
        let whole = LatticeBox::whole(10);
        assert_eq!(whole.vertices().len(), 3);
        assert_eq!(whole.area_cells(), 100);
        assert_eq!(whole.cells_in_triangle().len(), 100);
        assert!(LatticeBox::new(10, [Some(0), None, None], [None; 3]).is_err());
    }
}
