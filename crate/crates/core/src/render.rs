//! Deterministic SVG 1.1 drawings of configurations and grid regions.
//!
//! All coordinates are printed with three decimals and elements are emitted
//! in a fixed order, so equal inputs give byte-identical documents.

use std::fmt::Write as _;

use crate::geometry::{bary_to_cart, CartPoint, ReferenceTriangle};
use crate::objectives::{evaluate, Configuration};
use crate::partition::{LatticePoint, RegionSpec};

const FILLS: [&str; 6] = ["#9ecae1", "#fdae6b", "#a1d99b", "#bcbddc", "#fc9272", "#d9d9d9"];

#[derive(Debug, Clone, PartialEq)]
pub struct RenderOptions {
    /// Draw the `k`-grid of `T`.
    pub grid: Option<u32>,
    pub regions: Vec<RegionSpec>,
    /// Point labels; `p1..pn` when `None`.
    pub labels: Option<Vec<String>>,
    /// Outline the triple of smallest area.
    pub outline_min_triple: bool,
    /// Image width in pixels.
    pub width: u32,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            grid: None,
            regions: Vec::new(),
            labels: None,
            outline_min_triple: true,
            width: 480,
        }
    }
}

struct Frame {
    t: ReferenceTriangle,
    scale: f64,
    margin: f64,
    top: f64,
}

impl Frame {
    fn new(width: u32) -> Self {
        let t = ReferenceTriangle::unit();
        let margin = 24.0;
        let scale = (width as f64 - 2.0 * margin) / t.side_length;
        Self {
            top: t.v0.y,
            t,
            scale,
            margin,
        }
    }

    fn xy(&self, p: CartPoint) -> (f64, f64) {
        (
            self.margin + (p.x + self.t.side_length / 2.0) * self.scale,
            self.margin + (self.top - p.y) * self.scale,
        )
    }

    fn height(&self) -> f64 {
        2.0 * self.margin + self.top * self.scale
    }

    fn points_attr(&self, pts: &[CartPoint]) -> String {
        pts.iter()
            .map(|p| {
                let (x, y) = self.xy(*p);
                format!("{x:.3},{y:.3}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

pub fn render_svg(config: &Configuration, opts: &RenderOptions) -> String {
    let f = Frame::new(opts.width);
    let mut s = String::new();
    let (w, h) = (opts.width as f64, f.height());
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.3}" height="{h:.3}" viewBox="0 0 {w:.3} {h:.3}">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{w:.3}" height="{h:.3}" fill="white"/>"#);

    for (i, region) in opts.regions.iter().enumerate() {
        let fill = FILLS[i % FILLS.len()];
        let _ = writeln!(s, r#"<g class="region" id="{}" fill="{fill}" fill-opacity="0.7" stroke="none">"#, escape(&region.name));
        for cell in &region.cells {
            let verts = cell
                .lattice(region.k)
                .vertices()
                .map(|v| LatticePoint(v).to_cart(region.k, &f.t));
            let _ = writeln!(s, r#"<polygon points="{}"/>"#, f.points_attr(&verts));
        }
        let _ = writeln!(s, "</g>");
    }

    if let Some(k) = opts.grid.filter(|&k| k > 1) {
        let _ = writeln!(s, r##"<g class="grid" stroke="#888888" stroke-width="0.5">"##);
        for axis in 0..3 {
            let (a, b) = ((axis + 1) % 3, (axis + 2) % 3);
            for j in 1..k as i64 {
                let mut p = [0i64; 3];
                p[axis] = j;
                p[a] = k as i64 - j;
                let mut q = [0i64; 3];
                q[axis] = j;
                q[b] = k as i64 - j;
                let (x1, y1) = f.xy(LatticePoint(p).to_cart(k, &f.t));
                let (x2, y2) = f.xy(LatticePoint(q).to_cart(k, &f.t));
                let _ = writeln!(s, r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}"/>"#);
            }
        }
        let _ = writeln!(s, "</g>");
    }

    let _ = writeln!(
        s,
        r#"<polygon class="triangle" points="{}" fill="none" stroke="black" stroke-width="1.5"/>"#,
        f.points_attr(&f.t.vertices())
    );

    let cart: Vec<CartPoint> = config.points().iter().map(|p| bary_to_cart(p, &f.t)).collect();
    if opts.outline_min_triple {
        let rep = evaluate(config);
        let tri = rep.min_triple.map(|i| cart[i]);
        let _ = writeln!(
            s,
            r##"<polygon class="min-triple" points="{}" fill="#e31a1c" fill-opacity="0.12" stroke="#e31a1c" stroke-width="1.5" stroke-dasharray="5,3"/>"##,
            f.points_attr(&tri)
        );
    }

    let _ = writeln!(s, r#"<g class="points" font-family="sans-serif" font-size="13">"#);
    for (i, p) in cart.iter().enumerate() {
        let (x, y) = f.xy(*p);
        let label = match &opts.labels {
            Some(l) if i < l.len() => escape(&l[i]),
            _ => format!("p{}", i + 1),
        };
        let _ = writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="3.500" fill="black"/>"#);
        let _ = writeln!(s, r#"<text x="{:.3}" y="{:.3}">{label}</text>"#, x + 6.0, y - 6.0);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BaryPoint;
    use crate::objectives::{clustered_construction, fig13_construction};
    use crate::partition::{make_hexagon, LatticePoint};

    #[test]
    fn three_vertices() {
        let c = Configuration::new((0..3).map(BaryPoint::vertex).collect()).unwrap();
        let svg = render_svg(&c, &RenderOptions::default());
        assert!(svg.starts_with("<?xml"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<circle").count(), 3);
        for l in ["p1", "p2", "p3"] {
            assert!(svg.contains(&format!(">{l}</text>")));
        }
        assert!(!svg.contains("class=\"grid\""));
    }

    #[test]
    fn deterministic_with_grid_and_regions() {
        let hex = make_hexagon("hex", 10, LatticePoint([4, 3, 3]), 2).unwrap();
        let opts = RenderOptions {
            grid: Some(10),
            regions: vec![hex],
            ..RenderOptions::default()
        };
        let a = render_svg(&fig13_construction(), &opts);
        let b = render_svg(&fig13_construction(), &opts);
        assert_eq!(a, b);
        assert_eq!(a.matches("<line").count(), 27);
        assert_eq!(a.matches("<polygon points").count(), 24);
        assert_eq!(a.matches("class=\"min-triple\"").count(), 1);
    }

    #[test]
    fn clusters_render_every_point() {
        let c = clustered_construction(3, 0.005).unwrap();
        let svg = render_svg(&c, &RenderOptions::default());
        assert_eq!(svg.matches("<circle").count(), 12);
        assert!(svg.contains(">p12</text>"));
    }

    #[test]
    fn labels_are_escaped() {
        let c = fig13_construction();
        let opts = RenderOptions {
            labels: Some(vec!["a<b".into()]),
            ..RenderOptions::default()
        };
        let svg = render_svg(&c, &opts);
        assert!(svg.contains(">a&lt;b</text>"));
        assert!(svg.contains(">p2</text>"));
    }
}
