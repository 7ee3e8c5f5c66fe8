//! Machine checks for the three-case covering argument on the 10-grid.
//!
//! The regions themselves live in `data/cases.regions`; this module only
//! checks the properties the argument relies on (coverage, diameters,
//! containment in small parallelograms) and never hard-codes conclusions.

use std::collections::BTreeSet;

use serde::Serialize;

use super::region::fits_small_lattice_region;
use super::{
    coverage_check, make_hexagon, make_parallelogram, make_triangle_up, GridCell, LatticePoint,
    ParallelogramSpec, RegionSpec, PAPER_GRID,
};
use crate::error::{domain, Result};
use crate::geometry::{side_length, GEOM_TOL};

/// The shipped region file.
pub const CASE_REGIONS: &str = include_str!("../../data/cases.regions");

/// Rotations of `T` (as coordinate permutations) and the reflection fixing
/// the apex.
const ROTATIONS: [[usize; 3]; 3] = [[0, 1, 2], [1, 2, 0], [2, 0, 1]];
const MIRROR: [usize; 3] = [0, 2, 1];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// One candidate for the left-edge parallelogram of the second case.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParallelogramVariant {
    pub a: u32,
    pub b: u32,
    pub area: f64,
    pub passes_gate: bool,
    /// Holds the top white triangle, the triangle of `p3` and the part of
    /// the upper triangle outside its far corner cell.
    pub contains_required: bool,
    pub excludes_p1_corner: bool,
    pub file_cells_match: bool,
    pub closes: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseReport {
    pub checks: Vec<CaseCheck>,
    pub variants: Vec<ParallelogramVariant>,
    /// Human-readable note on which parallelogram variant closes the
    /// second case.
    pub variant_note: String,
    pub passed: bool,
}

impl CaseReport {
    pub fn failures(&self) -> impl Iterator<Item = &CaseCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

struct Checker<'a> {
    regions: &'a [RegionSpec],
    samples: usize,
    seed: u64,
    checks: Vec<CaseCheck>,
}

impl<'a> Checker<'a> {
    fn get(&self, name: &str) -> Result<&'a RegionSpec> {
        match self.regions.iter().find(|r| r.name == name) {
            Some(r) if r.k == PAPER_GRID => Ok(r),
            Some(r) => domain(format!("region {name} is on a {}-grid", r.k)),
            None => domain(format!("region file lacks {name}")),
        }
    }

    fn push(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(CaseCheck {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        });
    }

    fn cover(&mut self, name: &str, regions: &[RegionSpec], target: &RegionSpec) -> Result<()> {
        let rep = coverage_check(regions, target, self.samples, self.seed)?;
        let ok = rep.covered && rep.uncovered_cells.is_empty();
        let detail = if ok {
            format!("{} samples over {} cells, all covered", rep.samples, target.cells.len())
        } else {
            format!(
                "{} of {} samples missed, {} cells not inside one region, worst miss {:?}",
                rep.misses,
                rep.samples,
                rep.uncovered_cells.len(),
                rep.worst_miss.map(|p| p.weights())
            )
        };
        self.push(name, ok, detail);
        Ok(())
    }
}

fn cells(r: &RegionSpec) -> BTreeSet<GridCell> {
    r.cells.clone()
}

fn union_cells(parts: &[&RegionSpec]) -> BTreeSet<GridCell> {
    parts.iter().flat_map(|r| r.cells.iter().copied()).collect()
}

fn disjoint(parts: &[&RegionSpec]) -> bool {
    parts.iter().map(|r| r.cells.len()).sum::<usize>() == union_cells(parts).len()
}

fn small_enough(r: &RegionSpec) -> bool {
    let limit = 0.4 * side_length() + GEOM_TOL;
    r.diam <= limit && fits_small_lattice_region(r.k, &r.lattice_cells(), 2)
}

fn pair_reach(from: &RegionSpec, to: &RegionSpec) -> usize {
    let src = from.lattice_cells();
    to.lattice_cells()
        .into_iter()
        .filter(|c| {
            let mut all = src.clone();
            all.push(*c);
            !fits_small_lattice_region(to.k, &all, 2)
        })
        .count()
}

/// Every pair of cells, one from each region, fits in one small region.
fn cellwise_reach(from: &RegionSpec, to: &RegionSpec) -> usize {
    let src = from.lattice_cells();
    to.lattice_cells()
        .into_iter()
        .filter(|c| src.iter().any(|s| !fits_small_lattice_region(to.k, &[*s, *c], 2)))
        .count()
}

/// Run every check against `regions` (normally parsed from
/// [`CASE_REGIONS`]). `samples` is the number of coverage samples per cell.
pub fn verify_cases(regions: &[RegionSpec], samples: usize, seed: u64) -> Result<CaseReport> {
    let k = PAPER_GRID;
    let whole = RegionSpec::whole(k)?;
    let mut ck = Checker {
        regions,
        samples,
        seed,
        checks: Vec::new(),
    };

    // The three cases are exhaustive: the inner side-4 triangle is the
    // central triangle plus the three corner triangles of the second case.
    let c1_center = ck.get("case1_center")?;
    let c2_upper = ck.get("case2_upper")?;
    let c2_left = ck.get("case2_left")?;
    let c2_right = ck.get("case2_right")?;
    let c3_outer = ck.get("case3_outer")?;
    let parts = [c1_center, c2_upper, c2_left, c2_right, c3_outer];
    ck.push(
        "cases.exhaustive",
        disjoint(&parts) && union_cells(&parts) == whole.cells,
        format!("{} cells in the five case regions", union_cells(&parts).len()),
    );

    case_one(&mut ck, &whole)?;
    let variants = case_two(&mut ck, &whole)?;
    case_three(&mut ck)?;

    let closing: Vec<String> = variants
        .iter()
        .filter(|v| v.closes)
        .map(|v| format!("({},{})", v.a, v.b))
        .collect();
    let failing: Vec<String> = variants
        .iter()
        .filter(|v| !v.closes)
        .map(|v| {
            let why = if !v.passes_gate {
                format!("area {:.2} exceeds the 0.48 gate", v.area)
            } else {
                "does not contain the required regions".to_string()
            };
            format!("({},{}) {why}", v.a, v.b)
        })
        .collect();
    let variant_note = format!(
        "closing: {}; not closing: {}",
        if closing.is_empty() { "none".into() } else { closing.join(", ") },
        if failing.is_empty() { "none".into() } else { failing.join(", ") }
    );
    ck.push("case2.parallelogram_closes", !closing.is_empty(), variant_note.clone());

    let passed = ck.checks.iter().all(|c| c.passed);
    Ok(CaseReport {
        checks: ck.checks,
        variants,
        variant_note,
        passed,
    })
}

fn case_one(ck: &mut Checker, whole: &RegionSpec) -> Result<()> {
    let center = ck.get("case1_center")?;
    let wide = ck.get("case1_wide")?;
    let corners = [
        ck.get("case1_corner_top")?,
        ck.get("case1_corner_left")?,
        ck.get("case1_corner_right")?,
    ];
    ck.push("case1.center_in_wide", center.is_subset_of(wide), "");
    let bad = cellwise_reach(center, wide);
    ck.push(
        "case1.hexagon_reach",
        bad == 0,
        format!("{bad} cells of the wide region not reachable from the center"),
    );
    let small = corners.iter().all(|c| small_enough(c));
    ck.push(
        "case1.corners_small",
        small,
        format!("corner diameters {:?} (units of L)", corners.map(|c| c.diam / side_length())),
    );
    let mut cover = vec![wide.clone()];
    cover.extend(corners.iter().map(|c| (*c).clone()));
    ck.cover("case1.cover", &cover, whole)
}

fn case_two(ck: &mut Checker, whole: &RegionSpec) -> Result<Vec<ParallelogramVariant>> {
    let k = PAPER_GRID;
    let upper = ck.get("case2_upper")?;
    let left = ck.get("case2_left")?;
    let right = ck.get("case2_right")?;
    let wide = ck.get("case2_wide")?;
    let top = ck.get("case2_top_white")?;
    let lower = ck.get("case2_lower_white")?;
    let strips = ck.get("case2_lower_strips")?;
    let p3 = ck.get("case2_p3_triangle")?;
    let p1_corner = ck.get("case2_p1_corner")?;

    let rotated = [
        upper.permuted("", ROTATIONS[2])?.cells == left.cells,
        upper.permuted("", ROTATIONS[1])?.cells == right.cells,
    ];
    ck.push(
        "case2.inner_rotations",
        rotated.iter().all(|&b| b),
        "left and right triangles are rotations of the upper one",
    );

    let bad = pair_reach(upper, wide);
    ck.push(
        "case2.hexagon_reach",
        bad == 0 && upper.is_subset_of(wide),
        format!("{bad} cells of the wide region share no small hexagon with the upper triangle"),
    );
    ck.push(
        "case2.partition",
        disjoint(&[wide, top, lower]),
        "wide, top white and lower white regions are interior-disjoint",
    );
    ck.cover("case2.cover", &[wide.clone(), top.clone(), lower.clone()], whole)?;
    ck.push("case2.top_white_small", small_enough(top), format!("diameter {:.4} L", top.diam / side_length()));

    let bottom = ParallelogramSpec::at_corner(k, 2, 0, 2, 10)?;
    let bottom_par = make_parallelogram("par_2x10", &bottom)?;
    ck.push(
        "case2.lower_strips_in_2x10",
        bottom.passes_gate() && strips.is_subset_of(&bottom_par),
        format!("(2,10) parallelogram of area {:.2}", bottom.area()),
    );
    let mirrored = p3.permuted("", MIRROR)?;
    ck.push(
        "case2.lower_white_split",
        union_cells(&[strips, p3, &mirrored]) == lower.cells && disjoint(&[strips, p3, &mirrored]),
        "lower white region = bottom strips + two side triangles",
    );
    ck.push("case2.p1_corner_in_upper", p1_corner.is_subset_of(upper) && p1_corner.cells.len() == 1, "");

    let upper_rest = upper.minus("", p1_corner)?;
    let mut variants = Vec::new();
    for (a, b) in [(3, 8), (3, 9)] {
        // along the left edge from the apex: b steps toward the bottom-left
        // vertex, a steps toward the bottom-right one
        let spec = ParallelogramSpec::at_corner(k, 0, 1, b, a)?;
        let par = make_parallelogram(&format!("par_{a}x{b}"), &spec)?;
        let file = ck.get(&format!("case2_par_{a}x{b}"))?;
        let contains_required = [top, p3, &upper_rest].iter().all(|r| r.is_subset_of(&par));
        let excludes_p1_corner = p1_corner.cells.iter().all(|c| !par.contains_cell(c));
        let file_cells_match = file.cells == par.cells;
        let passes_gate = spec.passes_gate();
        variants.push(ParallelogramVariant {
            a,
            b,
            area: spec.area(),
            passes_gate,
            contains_required,
            excludes_p1_corner,
            file_cells_match,
            closes: passes_gate && contains_required && excludes_p1_corner && file_cells_match,
        });
    }
    Ok(variants)
}

fn case_three(ck: &mut Checker) -> Result<()> {
    let k = PAPER_GRID;
    let outer = ck.get("case3_outer")?;
    let diamonds = [
        ck.get("case3_diamond_top")?,
        ck.get("case3_diamond_left")?,
        ck.get("case3_diamond_right")?,
    ];
    let traps = [
        ("left", ck.get("case3_trap_left")?),
        ("right", ck.get("case3_trap_right")?),
        ("bottom", ck.get("case3_trap_bottom")?),
    ];
    let mut pieces: Vec<&RegionSpec> = diamonds.to_vec();
    pieces.extend(traps.iter().map(|(_, t)| *t));
    ck.push(
        "case3.outer_partition",
        disjoint(&pieces) && union_cells(&pieces) == outer.cells,
        "outer strip = three diamonds + three trapezoids",
    );

    // cover of the left/bottom pair, checked against the file
    let hex = make_hexagon("hex", k, LatticePoint::new(k, [2, 6, 2])?, 2)?;
    let tri_a = make_triangle_up("tri_a", k, [4, 2, 0])?;
    let tri_b = make_triangle_up("tri_b", k, [0, 2, 4])?;
    let file_match = [
        (ck.get("case3_cover_hex")?, &hex),
        (ck.get("case3_cover_tri_a")?, &tri_a),
        (ck.get("case3_cover_tri_b")?, &tri_b),
    ]
    .iter()
    .all(|(f, r)| f.cells == r.cells);
    let limit = 0.4 * side_length() + GEOM_TOL;
    ck.push(
        "case3.cover_shapes",
        file_match && [&hex, &tri_a, &tri_b].iter().all(|r| r.diam <= limit),
        format!(
            "hexagon diameter {:.4} L, triangle diameters {:.4} L",
            hex.diam / side_length(),
            tri_a.diam / side_length()
        ),
    );

    let base_pair = RegionSpec::union("pair", &[traps[0].1, traps[2].1])?;
    let base_cover = [hex, tri_a, tri_b];
    let mut seen = BTreeSet::new();
    for perm in ROTATIONS {
        let target = base_pair.permuted("pair", perm)?;
        let cover = base_cover
            .iter()
            .map(|r| r.permuted(&r.name, perm))
            .collect::<Result<Vec<_>>>()?;
        let names: Vec<&str> = traps
            .iter()
            .filter(|(_, t)| t.is_subset_of(&target))
            .map(|(n, _)| *n)
            .collect();
        let label = names.join("+");
        seen.insert(label.clone());
        ck.cover(&format!("case3.trapezoid_pair.{label}"), &cover, &target)?;
    }
    ck.push(
        "case3.all_pairs",
        seen.len() == 3 && seen.iter().all(|s| s.contains('+')),
        format!("pairs checked: {}", seen.into_iter().collect::<Vec<_>>().join(", ")),
    );

    // (3,8) parallelograms from the apex down each slanted side
    let down_left = make_parallelogram("down_left", &ParallelogramSpec::at_corner(k, 0, 1, 8, 3)?)?;
    let down_right = make_parallelogram("down_right", &ParallelogramSpec::at_corner(k, 0, 2, 8, 3)?)?;
    let holds = diamonds[0].is_subset_of(&down_left)
        && traps[0].1.is_subset_of(&down_left)
        && diamonds[0].is_subset_of(&down_right)
        && traps[1].1.is_subset_of(&down_right);
    ck.push(
        "case3.apex_parallelograms",
        holds && down_left.area <= super::HALVING_GATE + GEOM_TOL,
        "top diamond and each side trapezoid fit in a (3,8) parallelogram",
    );

    let small = ck.get("case3_small_trap")?;
    let rest = traps[2].1.minus("rest", &down_left)?.minus("rest", &down_right)?;
    ck.push(
        "case3.small_trapezoid",
        cells(&rest) == small.cells && small_enough(small),
        format!(
            "{} cells left in the bottom trapezoid, diameter {:.4} L",
            rest.cells.len(),
            rest.diam / side_length()
        ),
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::parse_regions;

    fn shipped() -> Vec<RegionSpec> {
        parse_regions(CASE_REGIONS, PAPER_GRID).unwrap()
    }

    #[test]
    fn shipped_regions_have_expected_sizes() {
        let r = shipped();
        let size = |n: &str| r.iter().find(|x| x.name == n).unwrap().cells.len();
        assert_eq!(size("case1_wide"), 52);
        assert_eq!(size("case1_corner_top"), 16);
        assert_eq!(size("case2_wide"), 52);
        assert_eq!(size("case2_lower_white"), 44);
        assert_eq!(size("case3_outer"), 84);
        assert_eq!(size("case3_trap_left"), 20);
        assert_eq!(size("case3_small_trap"), 12);
    }

    #[test]
    fn shipped_regions_pass() {
        let rep = verify_cases(&shipped(), 16, 1).unwrap();
        for c in &rep.checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
        assert!(rep.passed);
        let v38 = rep.variants.iter().find(|v| v.b == 8).unwrap();
        let v39 = rep.variants.iter().find(|v| v.b == 9).unwrap();
        assert!(v38.closes);
        assert!(v39.contains_required && v39.excludes_p1_corner && !v39.passes_gate && !v39.closes);
        assert!((v39.area - 0.54).abs() < 1e-12);
        assert!(rep.variant_note.contains("(3,9)"));
    }

    #[test]
    fn missing_region_is_an_error() {
        let mut r = shipped();
        r.retain(|x| x.name != "case2_wide");
        assert!(verify_cases(&r, 4, 1).is_err());
    }

    #[test]
    fn tampered_region_fails_a_check() {
        let mut r = shipped();
        let corner = r.iter_mut().find(|x| x.name == "case1_corner_top").unwrap();
        let first = *corner.cells.iter().next().unwrap();
        let cells: Vec<_> = corner.cells.iter().copied().filter(|c| *c != first).collect();
        *corner = RegionSpec::from_cells("case1_corner_top", PAPER_GRID, cells).unwrap();
        let rep = verify_cases(&r, 4, 1).unwrap();
        assert!(!rep.passed);
        assert!(rep.failures().any(|c| c.name == "case1.cover"));
    }
}
