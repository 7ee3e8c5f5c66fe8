use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Grid, GridCell, LatticeBox, LatticeCell, LatticePoint};
use crate::error::{domain, Result};
use crate::geometry::{diameter, BaryPoint, ReferenceTriangle};

/// Slack (in grid steps) for point-in-region tests. Boundaries are inclusive.
const MEMBERSHIP_TOL: f64 = 1e-9;

/// A closed region of `T` on the `k`-grid: a union of cells, optionally with
/// an exact lattice-polygon outline.
///
/// For outline-backed regions `area` and `diam` describe the whole polygon,
/// which may overhang `T`; `cells` lists only the grid cells inside both.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionSpec {
    pub name: String,
    pub k: u32,
    pub cells: BTreeSet<GridCell>,
    pub outline: Option<LatticeBox>,
    pub area: f64,
    pub diam: f64,
}

impl RegionSpec {
    pub fn from_cells(name: &str, k: u32, cells: impl IntoIterator<Item = GridCell>) -> Result<Self> {
        Grid::new(k)?;
        let cells: BTreeSet<_> = cells.into_iter().collect();
        if let Some(bad) = cells.iter().find(|c| !c.is_valid(k)) {
            return domain(format!("cell {bad:?} is outside the {k}-grid"));
        }
        let t = ReferenceTriangle::unit();
        let vertices: BTreeSet<[i64; 3]> = cells
            .iter()
            .flat_map(|c| c.lattice(k).vertices())
            .collect();
        let cart: Vec<_> = vertices.into_iter().map(|v| LatticePoint(v).to_cart(k, &t)).collect();
        Ok(Self {
            name: name.to_string(),
            k,
            area: cells.len() as f64 / (k as f64 * k as f64),
            diam: diameter(&cart),
            cells,
            outline: None,
        })
    }

    pub fn from_box(name: &str, outline: LatticeBox) -> Result<Self> {
        Ok(Self {
            name: name.to_string(),
            k: outline.k,
            cells: outline.cells_in_triangle().into_iter().collect(),
            area: outline.area(),
            diam: outline.diameter(),
            outline: Some(outline),
        })
    }

    /// `T` itself.
    pub fn whole(k: u32) -> Result<Self> {
        Grid::new(k)?;
        Self::from_box("T", LatticeBox::whole(k))
    }

    /// Inclusive point-in-region test for a point of `T`.
    pub fn contains(&self, p: &BaryPoint) -> bool {
        self.violation(p) <= MEMBERSHIP_TOL
    }

    /// Distance (in grid steps, max-coordinate metric) by which `p` misses
    /// the region; 0 when inside.
    pub fn violation(&self, p: &BaryPoint) -> f64 {
        let x = p.weights().map(|w| w * self.k as f64);
        match &self.outline {
            Some(b) => b.violation(x),
            None => self
                .cells
                .iter()
                .map(|c| c.lattice(self.k).violation(x))
                .fold(f64::INFINITY, f64::min),
        }
    }

    pub fn contains_cell(&self, cell: &GridCell) -> bool {
        match &self.outline {
            Some(b) => b.contains_cell(&cell.lattice(self.k)),
            None => self.cells.contains(cell),
        }
    }

    pub fn is_subset_of(&self, other: &RegionSpec) -> bool {
        self.cells.iter().all(|c| other.contains_cell(c))
    }

    pub fn union(name: &str, parts: &[&RegionSpec]) -> Result<Self> {
        let k = parts.first().map(|r| r.k).unwrap_or(1);
        if parts.iter().any(|r| r.k != k) {
            return domain("cannot combine regions on different grids");
        }
        Self::from_cells(name, k, parts.iter().flat_map(|r| r.cells.iter().copied()))
    }

    pub fn minus(&self, name: &str, other: &RegionSpec) -> Result<Self> {
        let kept: Vec<_> = self
            .cells
            .iter()
            .filter(|c| !other.contains_cell(c))
            .copied()
            .collect();
        Self::from_cells(name, self.k, kept)
    }

    /// Relabel the corners of `T`; coordinate `i` of the image is coordinate
    /// `perm[i]` of the source.
    pub fn permuted(&self, name: &str, perm: [usize; 3]) -> Result<Self> {
        if let Some(b) = &self.outline {
            return Self::from_box(name, b.permuted(perm));
        }
        let k = self.k;
        let cells = self
            .cells
            .iter()
            .map(|c| {
                c.lattice(k)
                    .permuted(perm)
                    .grid_cell(k)
                    .expect("permutations preserve the grid")
            })
            .collect::<Vec<_>>();
        Self::from_cells(name, k, cells)
    }

    pub fn lattice_cells(&self) -> Vec<LatticeCell> {
        self.cells.iter().map(|c| c.lattice(self.k)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageReport {
    pub covered: bool,
    pub samples: usize,
    pub misses: usize,
    /// The uncovered sample lying farthest from every region.
    pub worst_miss: Option<BaryPoint>,
    pub worst_depth: f64,
    /// Target cells no single region contains whole (exact cell test).
    pub uncovered_cells: Vec<GridCell>,
}

/// Stratified check that `regions` cover `target`.
///
/// Each target cell is split into `m^2` sub-cells (`m = ceil(sqrt(samples))`)
/// and one seeded jittered point is drawn in each, so the same seed always
/// produces the same sample set.
pub fn coverage_check(
    regions: &[RegionSpec],
    target: &RegionSpec,
    samples: usize,
    seed: u64,
) -> Result<CoverageReport> {
    if samples == 0 {
        return domain("coverage needs at least one sample per cell");
    }
    if regions.iter().any(|r| r.k != target.k) {
        return domain("coverage regions and target use different grids");
    }
    let k = target.k;
    let m = (samples as f64).sqrt().ceil() as u32;
    let sub = Grid::new(m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CoverageReport {
        covered: true,
        samples: 0,
        misses: 0,
        worst_miss: None,
        worst_depth: 0.0,
        uncovered_cells: Vec::new(),
    };
    for cell in &target.cells {
        let corners = cell.lattice(k).vertices();
        if !regions.iter().any(|r| r.contains_cell(cell)) {
            report.uncovered_cells.push(*cell);
        }
        for local in sub.cells() {
            let lv = local.lattice(m).vertices();
            let (r1, r2): (f64, f64) = (rng.random(), rng.random());
            let s = r1.sqrt();
            let mix = [1.0 - s, s * (1.0 - r2), s * r2];
            let mut w = [0.0; 3];
            for (j, lj) in lv.iter().enumerate() {
                for (a, corner) in corners.iter().enumerate() {
                    let weight = mix[j] * lj[a] as f64 / m as f64;
                    for i in 0..3 {
                        w[i] += weight * corner[i] as f64 / k as f64;
                    }
                }
            }
            let p = BaryPoint::project(w);
            report.samples += 1;
            let depth = regions
                .iter()
                .map(|r| r.violation(&p))
                .fold(f64::INFINITY, f64::min);
            if depth > MEMBERSHIP_TOL {
                report.misses += 1;
                if depth > report.worst_depth {
                    report.worst_depth = depth;
                    report.worst_miss = Some(p);
                }
            }
        }
    }
    report.covered = report.misses == 0;
    Ok(report)
}

/// True if all the given cells fit in one lattice hexagon of side `side` or
/// one lattice triangle of side `2 * side` (both have diameter `2 * side`
/// grid steps). The hexagon or triangle may overhang `T`.
pub(crate) fn fits_small_lattice_region(k: u32, cells: &[LatticeCell], side: i64) -> bool {
    let k = k as i64;
    let mut min = [i64::MAX; 3];
    let mut max = [i64::MIN; 3];
    for v in cells.iter().flat_map(|c| c.vertices()) {
        for i in 0..3 {
            min[i] = min[i].min(v[i]);
            max[i] = max[i].max(v[i]);
        }
    }
    // hexagon: integer center c with max_i - side <= c_i <= min_i + side
    let lo: i64 = (0..3).map(|i| max[i] - side).sum();
    let hi: i64 = (0..3).map(|i| min[i] + side).sum();
    let hexagon = (0..3).all(|i| max[i] - side <= min[i] + side) && lo <= k && k <= hi;
    // up triangle {x_i >= a_i}, sum a = k - 2 side, needs a_i <= min_i
    let up = min.iter().sum::<i64>() >= k - 2 * side;
    // down triangle {x_i <= b_i}, sum b = k + 2 side, needs b_i >= max_i
    let down = max.iter().sum::<i64>() <= k + 2 * side;
    hexagon || up || down
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::{make_hexagon, make_triangle_up};

    #[test]
    fn region_membership_examples() {
        let t = RegionSpec::whole(10).unwrap();
        assert!(t.contains(&BaryPoint::centroid()));
        let corner = RegionSpec::from_cells("c", 10, [GridCell::new(9, 18)]).unwrap();
        assert!(!corner.contains(&BaryPoint::vertex(0)));
        assert!(corner.contains(&BaryPoint::vertex(2)));
        // every cell holds its own centroid, and only the shared-edge
        // neighbours hold its vertices
        let grid = Grid::new(10).unwrap();
        for cell in grid.cells() {
            let region = RegionSpec::from_cells("one", 10, [cell]).unwrap();
            let c = cell.lattice(10).centroid_scaled().map(|v| v / 10.0);
            assert!(region.contains(&BaryPoint::project(c)));
            for v in cell.lattice(10).vertices() {
                assert!(region.contains(&BaryPoint::project(v.map(|x| x as f64 / 10.0))));
            }
        }
    }

    #[test]
    fn cell_regions_area_and_diameter() {
        let l = crate::geometry::side_length();
        let grid = Grid::new(10).unwrap();
        let all = RegionSpec::from_cells("all", 10, grid.cells()).unwrap();
        assert!((all.area - 1.0).abs() < 1e-12);
        assert!((all.diam - l).abs() < 1e-12);
        assert!(RegionSpec::from_cells("bad", 10, [GridCell::new(3, 7)]).is_err());
        assert!(RegionSpec::from_cells("bad", 10, [GridCell::new(10, 0)]).is_err());
    }

    #[test]
    fn coverage_of_whole_triangle() {
        let t = RegionSpec::whole(10).unwrap();
        let rep = coverage_check(std::slice::from_ref(&t), &t, 16, 1).unwrap();
        assert!(rep.covered);
        assert_eq!(rep.samples, 1600);
        assert!(rep.uncovered_cells.is_empty());
        assert!(coverage_check(std::slice::from_ref(&t), &t, 0, 1).is_err());
    }

    #[test]
    fn coverage_finds_witness() {
        let t = RegionSpec::whole(10).unwrap();
        let top = make_triangle_up("top", 10, [6, 0, 0]).unwrap();
        let rep = coverage_check(&[top], &t, 4, 3).unwrap();
        assert!(!rep.covered);
        assert_eq!(rep.uncovered_cells.len(), 84);
        let w = rep.worst_miss.unwrap();
        assert!(w.l1() < 0.2, "deepest miss should sit near the base: {w:?}");
        assert!(rep.worst_depth > 5.0);
    }

    #[test]
    fn coverage_is_reproducible() {
        let t = RegionSpec::whole(10).unwrap();
        let h = make_hexagon("h", 10, LatticePoint([4, 3, 3]), 2).unwrap();
        let a = coverage_check(std::slice::from_ref(&h), &t, 9, 42).unwrap();
        let b = coverage_check(&[h], &t, 9, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn small_region_fit() {
        let k = 10;
        let c = |r, i| GridCell::new(r, i).lattice(k);
        // two cells on opposite corners of a side-2 hexagon
        assert!(fits_small_lattice_region(k, &[c(0, 0), c(3, 0)], 2));
        assert!(!fits_small_lattice_region(k, &[c(0, 0), c(9, 0)], 2));
        assert!(!fits_small_lattice_region(k, &[c(9, 0), c(9, 18)], 2));
    }

    #[test]
    fn permuting_cells_rotates_regions() {
        let top = make_triangle_up("top", 10, [6, 0, 0]).unwrap();
        let as_cells = RegionSpec::from_cells("top", 10, top.cells.clone()).unwrap();
        let rotated = as_cells.permuted("left", [1, 2, 0]).unwrap();
        let expect = make_triangle_up("left", 10, [0, 0, 6]).unwrap();
        assert_eq!(rotated.cells, expect.cells);
    }
}
