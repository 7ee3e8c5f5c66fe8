//! The k x k triangular grid of `T` and regions built from it.
//!
//! Lattice points are written in *scaled* barycentric coordinates: integer
//! triples summing to `k`, so `x / k` is the barycentric point. Every region
//! here has edges parallel to the sides of `T`, which keeps all containment
//! questions in exact integer arithmetic.
//!
//! Cells are addressed as in a printed figure: `row` counts from the apex
//! (row `r` holds `2r + 1` cells) and `index` runs left to right, even
//! indices pointing up and odd ones pointing down.

mod cases;
mod io;
mod region;
mod shapes;

pub use cases::{verify_cases, CaseCheck, CaseReport, ParallelogramVariant, CASE_REGIONS};
pub use io::{parse_regions, write_regions};
pub use region::{coverage_check, CoverageReport, RegionSpec};
pub use shapes::{
    make_hexagon, make_parallelogram, make_triangle_down, make_triangle_up, LatticeBox,
    LatticeDir, ParallelogramSpec, HALVING_GATE,
};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::geometry::{weights_to_cart, CartPoint, ReferenceTriangle};

/// Grid resolution used throughout the five-point argument.
pub const PAPER_GRID: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GridCell {
    pub row: u32,
    pub index: u32,
}

impl GridCell {
    pub const fn new(row: u32, index: u32) -> Self {
        Self { row, index }
    }

    pub fn orientation(&self) -> Orientation {
        if self.index.is_multiple_of(2) {
            Orientation::Up
        } else {
            Orientation::Down
        }
    }

    pub fn is_valid(&self, k: u32) -> bool {
        self.row < k && self.index <= 2 * self.row
    }

    pub fn lattice(&self, k: u32) -> LatticeCell {
        let (k, r, m) = (k as i64, self.row as i64, (self.index / 2) as i64);
        match self.orientation() {
            Orientation::Up => LatticeCell {
                orientation: Orientation::Up,
                corner: [k - r - 1, r - m, m],
            },
            Orientation::Down => LatticeCell {
                orientation: Orientation::Down,
                corner: [k - r, r - m, m + 1],
            },
        }
    }
}

/// A point of the (unbounded) triangular lattice, in scaled coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePoint(pub [i64; 3]);

impl LatticePoint {
    pub fn new(k: u32, x: [i64; 3]) -> Result<Self> {
        if x.iter().sum::<i64>() != k as i64 {
            return domain(format!("lattice point {x:?} does not sum to {k}"));
        }
        Ok(Self(x))
    }

    /// The `i`-th vertex of `T` on the `k`-lattice.
    pub fn vertex(k: u32, i: usize) -> Self {
        let mut x = [0; 3];
        x[i] = k as i64;
        Self(x)
    }

    pub fn in_triangle(&self) -> bool {
        self.0.iter().all(|&v| v >= 0)
    }

    pub fn to_cart(&self, k: u32, t: &ReferenceTriangle) -> CartPoint {
        weights_to_cart(self.0.map(|v| v as f64 / k as f64), t)
    }
}

/// A unit cell of the unbounded lattice.
///
/// An upward cell is `{x : x_i >= corner_i}` with `sum(corner) = k - 1`; a
/// downward cell is `{x : x_i <= corner_i}` with `sum(corner) = k + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeCell {
    pub orientation: Orientation,
    pub corner: [i64; 3],
}

impl LatticeCell {
    pub fn vertices(&self) -> [[i64; 3]; 3] {
        let sign = match self.orientation {
            Orientation::Up => 1,
            Orientation::Down => -1,
        };
        std::array::from_fn(|i| {
            let mut v = self.corner;
            v[i] += sign;
            v
        })
    }

    pub fn centroid_scaled(&self) -> [f64; 3] {
        let shift = match self.orientation {
            Orientation::Up => 1.0 / 3.0,
            Orientation::Down => -1.0 / 3.0,
        };
        self.corner.map(|c| c as f64 + shift)
    }

    /// How far a scaled point lies outside the cell (0 when inside).
    pub fn violation(&self, x: [f64; 3]) -> f64 {
        (0..3)
            .map(|i| match self.orientation {
                Orientation::Up => self.corner[i] as f64 - x[i],
                Orientation::Down => x[i] - self.corner[i] as f64,
            })
            .fold(0.0, f64::max)
    }

    pub fn grid_cell(&self, k: u32) -> Option<GridCell> {
        let k = k as i64;
        let (r, m, index) = match self.orientation {
            Orientation::Up => {
                let r = k - 1 - self.corner[0];
                let m = self.corner[2];
                (r, m, 2 * m)
            }
            Orientation::Down => {
                let r = k - self.corner[0];
                let m = self.corner[2] - 1;
                (r, m, 2 * m + 1)
            }
        };
        let inside = (0..k).contains(&r)
            && m >= 0
            && self.corner[1] == r - m
            && match self.orientation {
                Orientation::Up => m <= r,
                Orientation::Down => m < r,
            };
        inside.then(|| GridCell::new(r as u32, index as u32))
    }

    pub fn permuted(&self, perm: [usize; 3]) -> Self {
        Self {
            orientation: self.orientation,
            corner: perm.map(|i| self.corner[i]),
        }
    }
}

/// The subdivision of `T` into `k^2` congruent cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Grid {
    k: u32,
}

impl Grid {
    pub fn new(k: u32) -> Result<Self> {
        if k == 0 {
            return domain("grid resolution must be at least 1");
        }
        Ok(Self { k })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn cells(&self) -> impl Iterator<Item = GridCell> + '_ {
        (0..self.k).flat_map(|r| (0..=2 * r).map(move |i| GridCell::new(r, i)))
    }

    pub fn len(&self) -> usize {
        (self.k * self.k) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn polygon(&self, cell: GridCell, t: &ReferenceTriangle) -> [CartPoint; 3] {
        cell.lattice(self.k)
            .vertices()
            .map(|v| LatticePoint(v).to_cart(self.k, t))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellPolygon {
    pub cell: GridCell,
    pub vertices: [CartPoint; 3],
}

impl CellPolygon {
    pub fn area(&self) -> f64 {
        let [a, b, c] = self.vertices;
        crate::geometry::shoelace_area(a, b, c)
    }
}

/// All `k^2` cells with their Cartesian triangles, row by row.
pub fn build_grid(k: u32) -> Result<Vec<CellPolygon>> {
    let grid = Grid::new(k)?;
    let t = ReferenceTriangle::unit();
    Ok(grid
        .cells()
        .map(|cell| CellPolygon {
            cell,
            vertices: grid.polygon(cell, &t),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{bary_to_cart, cart_to_bary, BaryPoint};

    #[test]
    fn build_grid_examples() {
        assert!(build_grid(0).is_err());
        let one = build_grid(1).unwrap();
        assert_eq!(one.len(), 1);
        let t = ReferenceTriangle::unit();
        for (got, want) in one[0].vertices.iter().zip(t.vertices()) {
            assert!(got.dist(&want) < 1e-12);
        }
        let ten = build_grid(10).unwrap();
        assert_eq!(ten.len(), 100);
        for c in &ten {
            assert!((c.area() - 0.01).abs() < 1e-12);
        }
        let total: f64 = ten.iter().map(CellPolygon::area).sum();
        assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rows_hold_odd_counts() {
        let grid = Grid::new(10).unwrap();
        for r in 0..10 {
            assert_eq!(grid.cells().filter(|c| c.row == r).count(), 2 * r as usize + 1);
        }
        assert_eq!(grid.cells().count(), 100);
    }

    #[test]
    fn partition_property_up_to_k12() {
        // Interior-disjointness: every cell centroid lies in exactly one cell,
        // and the areas add up to 1.
        let t = ReferenceTriangle::unit();
        for k in 1..=12 {
            let cells = build_grid(k).unwrap();
            let total: f64 = cells.iter().map(CellPolygon::area).sum();
            assert!((total - 1.0).abs() < 1e-10, "k={k}");
            let lattice: Vec<_> = cells.iter().map(|c| c.cell.lattice(k)).collect();
            for cell in &lattice {
                let x = cell.centroid_scaled();
                let owners = lattice.iter().filter(|o| o.violation(x) < 1e-9).count();
                assert_eq!(owners, 1, "k={k}");
            }
            // polygon centroid agrees with lattice centroid
            for c in &cells {
                let cx = (c.vertices[0].x + c.vertices[1].x + c.vertices[2].x) / 3.0;
                let cy = (c.vertices[0].y + c.vertices[1].y + c.vertices[2].y) / 3.0;
                let w = cart_to_bary(CartPoint::new(cx, cy), &t);
                let want = c.cell.lattice(k).centroid_scaled();
                for i in 0..3 {
                    assert!((w[i] * k as f64 - want[i]).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn grid_cell_lattice_roundtrip() {
        for k in 1..=12 {
            for cell in Grid::new(k).unwrap().cells() {
                let l = cell.lattice(k);
                assert_eq!(l.grid_cell(k), Some(cell));
                let sum: i64 = l.corner.iter().sum();
                match l.orientation {
                    Orientation::Up => assert_eq!(sum, k as i64 - 1),
                    Orientation::Down => assert_eq!(sum, k as i64 + 1),
                }
            }
        }
        let outside = LatticeCell {
            orientation: Orientation::Up,
            corner: [-1, 5, 5],
        };
        assert_eq!(outside.grid_cell(10), None);
    }

    #[test]
    fn apex_cell_is_row_zero() {
        let t = ReferenceTriangle::unit();
        let apex = BaryPoint::vertex(0);
        let grid = Grid::new(10).unwrap();
        let poly = grid.polygon(GridCell::new(0, 0), &t);
        assert!(poly.iter().any(|v| v.dist(&bary_to_cart(&apex, &t)) < 1e-12));
    }
}
