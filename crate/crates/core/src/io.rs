//! Text serializations: CSV, JSON, SVG and dot.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::attractor::AttractorApprox;
use crate::catalog::BaseSpec;
use crate::cut_project::{MissingClassification, MissingReport};
use crate::cyclotomic::CyclotomicInt;
use crate::geometry::fmt_g;
use crate::localconfig::TileClass;
use crate::spectrum::{Patch, PatchKind};
use crate::voronoi::VoronoiCell;

/// Significant digits of floats in CSV files.
pub const CSV_DIGITS: usize = 12;

/// Fill colors of tile classes, cycled by class id.
pub const PALETTE: [&str; 16] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
    "#9c755f", "#bab0ac", "#86bcb6", "#d37295", "#a0cbe8", "#ffbe7d", "#8cd17d", "#fabfd2",
];
pub const UNCLASSIFIED_FILL: &str = "#eeeeee";

pub fn palette_color(class_id: usize) -> &'static str {
    PALETTE[class_id % PALETTE.len()]
}

/// `c0,…,c{φ(n)−1},re,im`, one row per point.
pub fn points_csv(points: &[CyclotomicInt], degree: usize) -> String {
    let mut out = String::new();
    for j in 0..degree {
        write!(out, "c{j},").unwrap();
    }
    out.push_str("re,im\n");
    for p in points {
        for c in p.coeffs() {
            write!(out, "{c},").unwrap();
        }
        let z = p.embed();
        writeln!(out, "{},{}", fmt_g(z.re, CSV_DIGITS), fmt_g(z.im, CSV_DIGITS)).unwrap();
    }
    out
}

/// `re,im` rows for clouds without exact coordinates.
pub fn complex_csv(points: &[Complex64]) -> String {
    let mut out = String::from("re,im\n");
    for z in points {
        writeln!(out, "{},{}", fmt_g(z.re, CSV_DIGITS), fmt_g(z.im, CSV_DIGITS)).unwrap();
    }
    out
}

pub fn patch_csv(patch: &Patch) -> String {
    points_csv(&patch.points, patch.base.order.degree())
}

#[derive(Clone, Debug, Serialize)]
pub struct PatchMeta {
    pub base: String,
    pub order: u32,
    pub kind: &'static str,
    pub radius_or_degree: f64,
    pub count: usize,
    pub complete: bool,
}

pub fn patch_meta(patch: &Patch) -> PatchMeta {
    let (kind, value) = match patch.kind {
        PatchKind::Ball { radius } => ("ball", radius),
        PatchKind::Degree { bound } => ("degree", bound as f64),
    };
    PatchMeta {
        base: patch.base.name.clone().unwrap_or_else(|| patch.base.case_id()),
        order: patch.base.order.get(),
        kind,
        radius_or_degree: value,
        count: patch.len(),
        complete: patch.complete,
    }
}

/// Attractor clouds use the patch layout when exact points exist.
pub fn attractor_csv(approx: &AttractorApprox, degree: usize) -> String {
    if approx.points.is_empty() {
        complex_csv(&approx.embedded)
    } else {
        points_csv(&approx.points, degree)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: Option<String>,
    pub order: u32,
    pub min_poly: Vec<i64>,
    pub beta_coeffs: Vec<i64>,
    pub conj_auts: Vec<u32>,
    pub is_unit: bool,
}

impl From<&BaseSpec> for CatalogEntry {
    fn from(b: &BaseSpec) -> Self {
        CatalogEntry {
            name: b.name.clone(),
            order: b.order.get(),
            min_poly: b.min_poly.clone(),
            beta_coeffs: b.beta.coeffs().to_vec(),
            conj_auts: b.conj_auts.clone(),
            is_unit: b.is_unit,
        }
    }
}

pub fn catalog_json(bases: &[BaseSpec]) -> serde_json::Result<String> {
    let entries: Vec<CatalogEntry> = bases.iter().map(CatalogEntry::from).collect();
    serde_json::to_string_pretty(&entries)
}

#[derive(Clone, Debug, Serialize)]
pub struct DepthCount {
    pub depth: u32,
    pub count: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct MissingPointJson {
    pub coeffs: Vec<i64>,
    pub re: f64,
    pub im: f64,
    pub depth: u32,
    pub class: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct MissingReportJson {
    pub case: String,
    pub seed_count: usize,
    pub propagated: Vec<DepthCount>,
    pub classification: MissingClassification,
    pub points: Vec<MissingPointJson>,
    pub notes: Vec<String>,
}

impl From<&MissingReport> for MissingReportJson {
    fn from(r: &MissingReport) -> Self {
        MissingReportJson {
            case: r.case.clone(),
            seed_count: r.seed_missing.len(),
            propagated: r.propagated_missing.iter().map(|(d, p)| DepthCount { depth: *d, count: p.len() }).collect(),
            classification: r.classification,
            points: r
                .points
                .iter()
                .map(|m| {
                    let z = m.point.embed();
                    MissingPointJson {
                        coeffs: m.point.coeffs().to_vec(),
                        re: z.re,
                        im: z.im,
                        depth: m.depth,
                        class: format!("{:?}", m.class).to_lowercase(),
                    }
                })
                .collect(),
            notes: r.notes.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CellJson {
    pub center_coeffs: Vec<i64>,
    pub vertices: Vec<[f64; 2]>,
    /// Indices into the patch; `null` for neighbors outside it.
    pub neighbor_indices: Vec<Option<usize>>,
    pub radius: f64,
    pub trusted: bool,
}

pub fn cells_json(patch: &Patch, cells: &[VoronoiCell]) -> Vec<CellJson> {
    cells
        .iter()
        .map(|c| CellJson {
            center_coeffs: c.center.coeffs().to_vec(),
            vertices: c.vertices.iter().map(|v| [v.re, v.im]).collect(),
            neighbor_indices: c.neighbors.iter().map(|n| patch.points.binary_search(n).ok()).collect(),
            radius: c.radius,
            trusted: c.trusted,
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct TileJson {
    pub class_id: usize,
    pub edge_count: usize,
    pub signature: Vec<(f64, f64)>,
    pub member_count: usize,
}

pub fn tiles_json(classes: &[TileClass]) -> Vec<TileJson> {
    classes
        .iter()
        .map(|t| TileJson {
            class_id: t.class_id,
            edge_count: t.edge_count,
            signature: t.signature.clone(),
            member_count: t.member_configs.len(),
        })
        .collect()
}

/// Minimal SVG builder in world coordinates (y up).
#[derive(Clone, Debug)]
pub struct Svg {
    min: Complex64,
    max: Complex64,
    width: f64,
    body: String,
    meta: Vec<(String, String)>,
}

impl Svg {
    /// A canvas covering `bounds` plus a margin, `width` pixels wide.
    pub fn new(bounds: (Complex64, Complex64), width: f64) -> Self {
        let (lo, hi) = bounds;
        let pad = 0.05 * (hi - lo).re.max((hi - lo).im).max(1e-9);
        Svg {
            min: lo - Complex64::new(pad, pad),
            max: hi + Complex64::new(pad, pad),
            width,
            body: String::new(),
            meta: Vec::new(),
        }
    }

    pub fn fitting(points: &[Complex64], width: f64) -> Self {
        Self::new(bounds(points), width)
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.meta.push((key.to_string(), value.to_string()));
        self
    }

    fn scale(&self) -> f64 {
        self.width / (self.max.re - self.min.re)
    }

    fn px(&self, z: Complex64) -> (String, String) {
        let s = self.scale();
        (fmt_g((z.re - self.min.re) * s, 7), fmt_g((self.max.im - z.im) * s, 7))
    }

    /// Dots of radius `r` pixels.
    pub fn dots(&mut self, points: &[Complex64], r: f64, fill: &str) -> &mut Self {
        writeln!(self.body, "<g fill=\"{fill}\">").unwrap();
        for &z in points {
            let (x, y) = self.px(z);
            writeln!(self.body, "<circle cx=\"{x}\" cy=\"{y}\" r=\"{}\"/>", fmt_g(r, 4)).unwrap();
        }
        self.body.push_str("</g>\n");
        self
    }

    pub fn polygon(&mut self, vertices: &[Complex64], fill: &str, stroke: &str, stroke_width: f64) -> &mut Self {
        let pts: Vec<String> = vertices
            .iter()
            .map(|&z| {
                let (x, y) = self.px(z);
                format!("{x},{y}")
            })
            .collect();
        writeln!(
            self.body,
            "<polygon points=\"{}\" fill=\"{fill}\" stroke=\"{stroke}\" stroke-width=\"{}\"/>",
            pts.join(" "),
            fmt_g(stroke_width, 4)
        )
        .unwrap();
        self
    }

    pub fn text(&mut self, at: Complex64, size: f64, label: &str) -> &mut Self {
        let (x, y) = self.px(at);
        writeln!(self.body, "<text x=\"{x}\" y=\"{y}\" font-size=\"{}\" font-family=\"sans-serif\">{}</text>", fmt_g(size, 4), escape(label))
            .unwrap();
        self
    }

    pub fn render(&self) -> String {
        let h = (self.max.im - self.min.im) * self.scale();
        let mut out = String::new();
        writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">",
            w = fmt_g(self.width, 7),
            h = fmt_g(h, 7)
        )
        .unwrap();
        if !self.meta.is_empty() {
            out.push_str("<metadata>\n");
            for (k, v) in &self.meta {
                writeln!(out, "<entry key=\"{}\">{}</entry>", escape(k), escape(v)).unwrap();
            }
            out.push_str("</metadata>\n");
        }
        out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
        out.push_str(&self.body);
        out.push_str("</svg>\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Bounding box `(min, max)`; the unit square for an empty slice.
pub fn bounds(points: &[Complex64]) -> (Complex64, Complex64) {
    if points.is_empty() {
        return (Complex64::new(-1.0, -1.0), Complex64::new(1.0, 1.0));
    }
    let (mut lo, mut hi) = (points[0], points[0]);
    for z in points {
        lo = Complex64::new(lo.re.min(z.re), lo.im.min(z.im));
        hi = Complex64::new(hi.re.max(z.re), hi.im.max(z.im));
    }
    (lo, hi)
}

pub fn spectrum_svg(patch: &Patch) -> String {
    let pts = patch.embedded();
    let mut svg = Svg::fitting(&pts, 800.0);
    svg.meta("case", patch.base.case_id()).meta("count", patch.len());
    svg.dots(&pts, 1.5, "#1f3b73");
    svg.render()
}

pub fn attractor_svg(approx: &AttractorApprox, case: &str) -> String {
    let mut svg = Svg::fitting(&approx.embedded, 800.0);
    svg.meta("case", case)
        .meta("depth", approx.depth)
        .meta("resolution", fmt_g(approx.resolution, 6))
        .meta("count", approx.embedded.len());
    svg.dots(&approx.embedded, 0.6, "#2a7a3b");
    svg.render()
}

/// Cells colored by tile class (`None` for unclassified).
pub fn tiling_svg(cells: &[VoronoiCell], classes: Option<&[Option<usize>]>, case: &str) -> String {
    let all: Vec<Complex64> = cells.iter().flat_map(|c| c.vertices.iter().copied()).collect();
    let mut svg = Svg::fitting(&all, 800.0);
    svg.meta("case", case).meta("cells", cells.len());
    for (i, c) in cells.iter().enumerate() {
        let fill = match classes.and_then(|cl| cl[i]) {
            Some(k) => palette_color(k),
            None => UNCLASSIFIED_FILL,
        };
        svg.polygon(&c.vertices, fill, "#333333", 0.5);
    }
    let centers: Vec<Complex64> = cells.iter().map(|c| c.center.embed()).collect();
    svg.dots(&centers, 1.2, "#000000");
    svg.render()
}

/// Window outline (polygon or attractor cloud), conjugated points and missing points.
pub fn window_overlay_svg(
    outline: Option<&[Complex64]>,
    window_cloud: &[Complex64],
    conjugates: &[Complex64],
    missing: &[Complex64],
    case: &str,
) -> String {
    let mut all: Vec<Complex64> = conjugates.to_vec();
    all.extend_from_slice(window_cloud);
    if let Some(o) = outline {
        all.extend_from_slice(o);
    }
    let mut svg = Svg::fitting(&all, 800.0);
    svg.meta("case", case).meta("points", conjugates.len()).meta("missing", missing.len());
    if let Some(o) = outline {
        svg.polygon(o, "none", "#c0392b", 1.5);
    }
    svg.dots(window_cloud, 0.5, "#9bd19b");
    svg.dots(conjugates, 1.2, "#1f3b73");
    svg.dots(missing, 3.0, "#e67e22");
    svg.render()
}

/// One swatch per tile class, laid out in rows.
pub fn tile_swatches_svg(classes: &[TileClass], case: &str) -> String {
    let per_row = 6usize;
    let size = classes.iter().map(|t| t.representative_cell.radius).fold(0.0, f64::max).max(1e-9) * 2.4;
    let rows = classes.len().div_ceil(per_row).max(1);
    let lo = Complex64::new(0.0, -(rows as f64) * size);
    let hi = Complex64::new(per_row as f64 * size, 0.0);
    let mut svg = Svg::new((lo, hi), 900.0);
    svg.meta("case", case).meta("classes", classes.len());
    for (i, t) in classes.iter().enumerate() {
        let slot = Complex64::new((i % per_row) as f64 * size + size / 2.0, -((i / per_row) as f64) * size - size / 2.0);
        let c = &t.representative_cell;
        let verts: Vec<Complex64> = c.vertices.iter().map(|v| v - c.center.embed() + slot).collect();
        svg.polygon(&verts, palette_color(t.class_id), "#333333", 1.0);
        svg.text(slot + Complex64::new(-size * 0.45, size * 0.4), 11.0, &format!("{} ({})", t.class_id, t.member_configs.len()));
    }
    svg.render()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::Alphabet;
    use crate::spectrum::generate_ball;

    #[test]
    fn csv_layout() {
        let b = BaseSpec::lookup("delta", 8).unwrap();
        let a = Alphabet::polygonal(b.order);
        let p = generate_ball(&b, &a, 1.0).unwrap();
        let csv = patch_csv(&p);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("c0,c1,c2,c3,re,im"));
        assert_eq!(lines.count(), 9);
        assert!(csv.contains("0,1,0,0,0.707106781187,0.707106781187"));
        let meta = patch_meta(&p);
        assert_eq!((meta.kind, meta.count, meta.order), ("ball", 9, 8));
    }

    #[test]
    fn catalog_fields() {
        let b = BaseSpec::lookup("mu", 12).unwrap();
        let js = catalog_json(std::slice::from_ref(&b)).unwrap();
        for key in ["\"name\"", "\"order\"", "\"min_poly\"", "\"beta_coeffs\"", "\"conj_auts\"", "\"is_unit\""] {
            assert!(js.contains(key), "{key}");
        }
        assert!(js.contains("\"is_unit\": false"));
    }

    #[test]
    fn svg_is_well_formed() {
        let pts = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 2.0)];
        let mut svg = Svg::fitting(&pts, 100.0);
        svg.meta("k", "a<b").dots(&pts, 1.0, "#000").polygon(&pts, "none", "#000", 1.0);
        let s = svg.render();
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        assert_eq!(s.matches("<circle").count(), 2);
        assert!(s.contains("a&lt;b"));
    }
}
