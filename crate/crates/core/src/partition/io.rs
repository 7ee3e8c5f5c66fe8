//! Line-oriented region files.
//!
//! ```text
//! # comment
//! region <name>
//! cell <row> <index>
//! cell <row> <index>
//!
//! region <name>
//! ...
//! ```
//!
//! Names are single whitespace-free tokens and must be unique. Blank lines
//! and lines starting with `#` are ignored. [`write_regions`] emits the
//! canonical form: cells sorted by `(row, index)`, one blank line between
//! regions, a single trailing newline.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::{GridCell, RegionSpec};
use crate::error::{Error, Result};

pub fn parse_regions(text: &str, k: u32) -> Result<Vec<RegionSpec>> {
    let err = |line: usize, msg: String| Error::Parse { line, msg };
    let mut blocks: Vec<(String, BTreeSet<GridCell>, usize)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tok = line.split_whitespace();
        match tok.next() {
            Some("region") => {
                let name = tok
                    .next()
                    .ok_or_else(|| err(line_no, "region needs a name".into()))?;
                if tok.next().is_some() {
                    return Err(err(line_no, "region names cannot contain spaces".into()));
                }
                if blocks.iter().any(|(n, _, _)| n == name) {
                    return Err(err(line_no, format!("duplicate region {name}")));
                }
                blocks.push((name.to_string(), BTreeSet::new(), line_no));
            }
            Some("cell") => {
                let (_, cells, _) = blocks
                    .last_mut()
                    .ok_or_else(|| err(line_no, "cell before any region".into()))?;
                let mut num = |what: &str| -> Result<u32> {
                    tok.next()
                        .ok_or_else(|| err(line_no, format!("cell needs a {what}")))?
                        .parse()
                        .map_err(|e| err(line_no, format!("bad {what}: {e}")))
                };
                let cell = GridCell::new(num("row")?, num("index")?);
                if tok.next().is_some() {
                    return Err(err(line_no, "trailing tokens after cell".into()));
                }
                if !cell.is_valid(k) {
                    return Err(err(line_no, format!("cell {} {} is outside the {k}-grid", cell.row, cell.index)));
                }
                if !cells.insert(cell) {
                    return Err(err(line_no, format!("duplicate cell {} {}", cell.row, cell.index)));
                }
            }
            Some(other) => return Err(err(line_no, format!("unknown directive {other:?}"))),
            None => unreachable!("blank lines are skipped"),
        }
    }
    blocks
        .into_iter()
        .map(|(name, cells, line)| {
            if cells.is_empty() {
                return Err(err(line, format!("region {name} has no cells")));
            }
            RegionSpec::from_cells(&name, k, cells)
        })
        .collect()
}

pub fn write_regions(regions: &[RegionSpec]) -> String {
    let mut out = String::new();
    for (i, r) in regions.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "region {}", r.name);
        for c in &r.cells {
            let _ = writeln!(out, "cell {} {}", c.row, c.index);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_blocks_and_comments() {
        let text = "# header\nregion a\ncell 0 0\ncell 1 2\n\nregion b\n  cell 9 18  \n";
        let r = parse_regions(text, 10).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].name, "a");
        assert_eq!(r[0].cells.len(), 2);
        assert_eq!(r[1].cells.iter().next(), Some(&GridCell::new(9, 18)));
        assert_eq!(write_regions(&r), "region a\ncell 0 0\ncell 1 2\n\nregion b\ncell 9 18\n");
    }

    #[test]
    fn rejects_malformed_input() {
        let cases = [
            ("cell 0 0\n", 1),
            ("region a\ncell 0 1\n", 2),
            ("region a\ncell 0\n", 2),
            ("region a\ncell x 0\n", 2),
            ("region a\ncell 0 0 0\n", 2),
            ("region a\ncell 0 0\ncell 0 0\n", 3),
            ("region a\ncell 0 0\nregion a\ncell 1 0\n", 3),
            ("region a b\n", 1),
            ("region\n", 1),
            ("shape a\n", 1),
            ("region a\n", 1),
        ];
        for (text, line) in cases {
            match parse_regions(text, 10) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn canonical_form_is_a_fixed_point() {
        let text = super::super::CASE_REGIONS;
        let parsed = parse_regions(text, 10).unwrap();
        let canon = write_regions(&parsed);
        assert_eq!(parse_regions(&canon, 10).unwrap(), parsed);
        assert_eq!(write_regions(&parse_regions(&canon, 10).unwrap()), canon);
        // the shipped file is canonical apart from its comment header
        let body: String = text
            .lines()
            .skip_while(|l| l.starts_with('#') || l.is_empty())
            .map(|l| format!("{l}\n"))
            .collect();
        assert_eq!(body, canon);
    }
}
