//! SVG rendering of straight-line drawings.

use std::fmt::Write;

use crate::graph::{Graph, Path, VertexRole};
use crate::layout::{validate_drawing, Drawing};
use crate::meets::{AnalysisError, MeetIndex};

pub const VIEWPORT: f64 = 1000.0;
pub const MARGIN: f64 = 20.0;

/// Maps drawing coordinates into the viewport, preserving aspect ratio and
/// flipping y so that larger y is drawn higher.
#[derive(Debug, Clone, Copy)]
struct Viewport {
    min: (f64, f64),
    scale: f64,
    offset: (f64, f64),
}

impl Viewport {
    fn fit(d: &Drawing) -> Self {
        let (min, max) = match d.bounding_box() {
            Some(bb) => (bb.min.to_f64(), bb.max.to_f64()),
            None => ((0.0, 0.0), (0.0, 0.0)),
        };
        let inner = VIEWPORT - 2.0 * MARGIN;
        let span = (max.0 - min.0).max(max.1 - min.1);
        let scale = if span > 0.0 { inner / span } else { 1.0 };
        let offset = (
            MARGIN + (inner - (max.0 - min.0) * scale) / 2.0,
            MARGIN + (inner - (max.1 - min.1) * scale) / 2.0,
        );
        Viewport { min, scale, offset }
    }

    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        let sx = self.offset.0 + (x - self.min.0) * self.scale;
        let sy = self.offset.1 + (y - self.min.1) * self.scale;
        (sx, VIEWPORT - sy)
    }
}

fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

/// Renders `d` as an SVG document. With a highlight pair, both paths are
/// stroked bold orange and their meets are marked.
pub fn export_svg(g: &Graph, d: &Drawing, highlight: Option<&[Path; 2]>) -> Result<String, AnalysisError> {
    let report = validate_drawing(g, d)?;
    if !report.valid() {
        return Err(AnalysisError::InvalidDrawing(report));
    }
    let vp = Viewport::fit(d);
    let at = |v| vp.map(d.position(v).to_f64());
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {0} {0}" width="{0}" height="{0}">"#,
        VIEWPORT
    );
    out.push_str("<style>.edge{stroke:#777;stroke-width:1}.path{stroke:#f28c00;stroke-width:4;fill:none}.filled{fill:#222}.hollow{fill:#fff;stroke:#222;stroke-width:1}.meet{fill:none;stroke:#c00;stroke-width:2}</style>\n");

    out.push_str("<g class=\"edges\">\n");
    for &(u, v) in g.edges() {
        let (a, b) = (at(u), at(v));
        let _ = writeln!(
            out,
            r#"<line class="edge" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
            num(a.0),
            num(a.1),
            num(b.0),
            num(b.1)
        );
    }
    out.push_str("</g>\n");

    if let Some(pair) = highlight {
        out.push_str("<g class=\"highlight\">\n");
        for p in pair {
            let pts: Vec<String> = p
                .vertices()
                .iter()
                .map(|&v| {
                    let (x, y) = at(v);
                    format!("{},{}", num(x), num(y))
                })
                .collect();
            let _ = writeln!(out, r#"<polyline class="path" points="{}"/>"#, pts.join(" "));
        }
        out.push_str("</g>\n");
    }

    out.push_str("<g class=\"vertices\">\n");
    for v in g.vertices() {
        let (x, y) = at(v);
        let class = match g.role(v) {
            VertexRole::Subdivision { .. } | VertexRole::Line { .. } => "hollow",
            _ => "filled",
        };
        let r = if class == "filled" { 5 } else { 3 };
        let _ = writeln!(out, r#"<circle class="{class}" data-id="{v}" cx="{}" cy="{}" r="{r}"/>"#, num(x), num(y));
    }
    out.push_str("</g>\n");

    if let Some(pair) = highlight {
        let index = MeetIndex::new(g, d)?;
        let report = index.count_meets(&pair[0], &pair[1])?;
        out.push_str("<g class=\"meets\">\n");
        for meet in &report.meets {
            let anchor = match meet.vertices.first() {
                Some(&v) => at(v),
                None => vp.map(meet.points[0].to_f64()),
            };
            let _ = writeln!(
                out,
                r#"<circle class="meet" data-kind="{}" cx="{}" cy="{}" r="9"/>"#,
                kind_name(meet.kind),
                num(anchor.0),
                num(anchor.1)
            );
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn kind_name(kind: crate::meets::MeetKind) -> &'static str {
    use crate::meets::MeetKind::*;
    match kind {
        ProperCrossing => "proper-crossing",
        VertexTouch => "vertex-touch",
        SharedSubpath => "shared-subpath",
    }
}
