//! SVG figures of domains, cracks and nodal lines.
//!
//! Output is plain SVG 1.1 with every coordinate printed to two decimals, so
//! equal inputs give byte-identical files.

use std::f64::consts::PI;
use std::fmt::Write;

use crate::error::PlotError;
use crate::field::{extract_nodal_lines, Chart, CrackSet, Polyline, Region, SignGrid};
use crate::triangle::SQRT3;

const MARGIN: f64 = 10.0;
const CRACK_OFFSET: f64 = 1.5;
const SLICE_CELLS: usize = 128;

/// Canvas size in pixels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Size {
    pub width: u32,
    pub height: u32,
}

impl Size {
    pub fn new(width: u32, height: u32) -> Self {
        Self { width, height }
    }
}

impl Default for Size {
    fn default() -> Self {
        Self::new(640, 320)
    }
}

fn is_polar(chart: &Chart) -> bool {
    chart.dimension() == 2 && chart.hubs.iter().any(|h| h.axis == 0)
}

// Chart point to the plane of the picture (the disk is drawn round).
fn to_plane(chart: &Chart, p: [f64; 2]) -> [f64; 2] {
    if is_polar(chart) {
        [p[0] * p[1].cos(), p[0] * p[1].sin()]
    } else {
        p
    }
}

/// Affine map from the picture plane to the canvas, y pointing up.
struct View {
    lo: [f64; 2],
    scale: f64,
    off: [f64; 2],
    height: f64,
}

impl View {
    fn new(chart: &Chart, x0: f64, size: Size, width: f64) -> Self {
        let (lo, hi) = if is_polar(chart) {
            ([-1.0, -1.0], [1.0, 1.0])
        } else {
            ([chart.lo[0], chart.lo[1]], [chart.hi[0], chart.hi[1]])
        };
        let h = size.height as f64;
        let sx = (width - 2.0 * MARGIN) / (hi[0] - lo[0]);
        let sy = (h - 2.0 * MARGIN) / (hi[1] - lo[1]);
        let scale = sx.min(sy);
        let off = [
            x0 + 0.5 * (width - scale * (hi[0] - lo[0])),
            0.5 * (h - scale * (hi[1] - lo[1])),
        ];
        Self { lo, scale, off, height: h }
    }

    fn map(&self, q: [f64; 2]) -> [f64; 2] {
        [
            self.off[0] + self.scale * (q[0] - self.lo[0]),
            self.height - (self.off[1] + self.scale * (q[1] - self.lo[1])),
        ]
    }
}

fn points(v: &View, chart: &Chart, pts: &[[f64; 2]]) -> String {
    let mut s = String::new();
    for (k, p) in pts.iter().enumerate() {
        let c = v.map(to_plane(chart, *p));
        if k > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{:.2},{:.2}", c[0], c[1]);
    }
    s
}

fn outline(v: &View, chart: &Chart) -> String {
    if is_polar(chart) {
        let c = v.map([0.0, 0.0]);
        return format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"{:.2}\" fill=\"none\" stroke=\"black\" stroke-width=\"0.8\"/>\n",
            c[0], c[1], v.scale
        );
    }
    let pts: Vec<[f64; 2]> = match chart.region {
        Region::Triangle => vec![[0.0, 0.0], [1.0, 0.0], [0.5, 0.5 * SQRT3]],
        Region::Full => vec![
            [chart.lo[0], chart.lo[1]],
            [chart.hi[0], chart.lo[1]],
            [chart.hi[0], chart.hi[1]],
            [chart.lo[0], chart.hi[1]],
        ],
    };
    let dash = if chart.wrap.iter().any(|&w| w) { " stroke-dasharray=\"4,3\"" } else { "" };
    format!(
        "<polygon points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"0.8\"{dash}/>\n",
        points(v, chart, &pts)
    )
}

// A crack is drawn as two strokes offset to either side, showing the slit.
fn crack_lines(v: &View, chart: &Chart, cracks: &CrackSet) -> String {
    let mut s = String::new();
    for c in &cracks.cracks {
        // sample so radial and wrapped cracks map correctly
        let n = 64;
        let line: Polyline = (0..=n)
            .map(|k| {
                let t = k as f64 / n as f64;
                wrap_into(chart, [c.a[0] + t * (c.b[0] - c.a[0]), c.a[1] + t * (c.b[1] - c.a[1])])
            })
            .collect();
        for piece in split_at_seams(chart, &line) {
            let pts: Vec<[f64; 2]> = piece.iter().map(|&p| v.map(to_plane(chart, p))).collect();
            let last = pts.len() - 1;
            let (dx, dy) = (pts[last][0] - pts[0][0], pts[last][1] - pts[0][1]);
            let len = dx.hypot(dy).max(f64::MIN_POSITIVE);
            let nrm = [-dy / len * CRACK_OFFSET, dx / len * CRACK_OFFSET];
            for sign in [-1.0, 1.0] {
                let mut d = String::new();
                for (k, p) in pts.iter().enumerate() {
                    let _ = write!(
                        d,
                        "{}{:.2},{:.2}",
                        if k == 0 { "" } else { " " },
                        p[0] + sign * nrm[0],
                        p[1] + sign * nrm[1]
                    );
                }
                let _ = writeln!(
                    s,
                    "<polyline points=\"{d}\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"2\"/>"
                );
            }
        }
    }
    s
}

fn wrap_into(chart: &Chart, mut p: [f64; 2]) -> [f64; 2] {
    for axis in 0..2 {
        if chart.wrap[axis] {
            let per = chart.period(axis);
            p[axis] = chart.lo[axis] + (p[axis] - chart.lo[axis]).rem_euclid(per);
        }
    }
    p
}

// Split polylines where they jump across a periodic seam.
fn split_at_seams(chart: &Chart, line: &Polyline) -> Vec<Polyline> {
    let mut out = Vec::new();
    let mut cur: Polyline = Vec::new();
    for &p in line {
        if let Some(&q) = cur.last() {
            let jump = (0..2).any(|a| chart.wrap[a] && !is_polar(chart) && (p[a] - q[a]).abs() > 0.5 * chart.period(a));
            if jump {
                out.push(std::mem::take(&mut cur));
            }
        }
        cur.push(p);
    }
    out.push(cur);
    out.retain(|l| l.len() >= 2);
    out
}

fn shading_layer(v: &View, chart: &Chart, grid: &SignGrid) -> String {
    let spec = grid.spec();
    if spec.cells.len() != 2 {
        return String::new();
    }
    let (hx, hy) = (spec.step(0), spec.step(1));
    let mut s = String::new();
    let mut multi = [0usize; 2];
    let mut c = [0f64; 2];
    for (i, &sg) in grid.signs().iter().enumerate() {
        if sg == 0 || !grid.is_interior(i) {
            continue;
        }
        spec.unflatten(i, &mut multi);
        spec.center_of(&multi, &mut c);
        let corners = [
            [c[0] - 0.5 * hx, c[1] - 0.5 * hy],
            [c[0] + 0.5 * hx, c[1] - 0.5 * hy],
            [c[0] + 0.5 * hx, c[1] + 0.5 * hy],
            [c[0] - 0.5 * hx, c[1] + 0.5 * hy],
        ];
        let fill = if sg > 0 { "#f6d7b0" } else { "#b9d3ee" };
        let _ = writeln!(
            s,
            "<polygon points=\"{}\" fill=\"{fill}\" stroke=\"none\"/>",
            points(v, chart, &corners)
        );
    }
    s
}

fn panel(v: &View, chart: &Chart, cracks: &CrackSet, lines: &[Polyline], shading: Option<&SignGrid>) -> String {
    let mut s = String::new();
    if let Some(g) = shading {
        s.push_str(&shading_layer(v, chart, g));
    }
    s.push_str(&outline(v, chart));
    for line in lines {
        for piece in split_at_seams(chart, line) {
            let _ = writeln!(
                s,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\"/>",
                points(v, chart, &piece)
            );
        }
    }
    s.push_str(&crack_lines(v, chart, cracks));
    s
}

fn document(size: Size, body: &str) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
         <rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n{body}</svg>\n",
        w = size.width,
        h = size.height
    )
}

/// Planar figure: outline, optional sign shading, nodal lines and cracks.
pub fn render(
    chart: &Chart,
    cracks: &CrackSet,
    lines: &[Polyline],
    shading: Option<&SignGrid>,
    size: Size,
) -> Result<String, PlotError> {
    if size.width == 0 || size.height == 0 {
        return Err(PlotError::EmptyCanvas);
    }
    if chart.dimension() != 2 {
        return Err(PlotError::NotCube);
    }
    let v = View::new(chart, 0.0, size, size.width as f64);
    Ok(document(size, &panel(&v, chart, cracks, lines, shading)))
}

/// Nodal lines of a three-dimensional field on the slices `x_3 = level`,
/// side by side.
pub fn render_cube_slices<F>(field: &F, chart: &Chart, levels: &[f64], size: Size) -> Result<String, PlotError>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if size.width == 0 || size.height == 0 {
        return Err(PlotError::EmptyCanvas);
    }
    if chart.dimension() != 3 {
        return Err(PlotError::NotCube);
    }
    if levels.is_empty() {
        return Err(PlotError::NoLevels);
    }
    let face = Chart::cuboid(vec![chart.hi[0], chart.hi[1]]);
    let face = Chart {
        lo: vec![chart.lo[0], chart.lo[1]],
        ..face
    };
    let w = size.width as f64 / levels.len() as f64;
    let mut body = String::new();
    for (k, &z) in levels.iter().enumerate() {
        // stay off the faces, where a Dirichlet field vanishes identically
        let eps = 1e-9 * (face.hi[0] - face.lo[0]);
        let inset = |x: f64, a: usize| x.clamp(face.lo[a] + eps, face.hi[a] - eps);
        let slice = |p: &[f64]| field(&[inset(p[0], 0), inset(p[1], 1), z]);
        let lines = extract_nodal_lines(&slice, &face, [SLICE_CELLS, SLICE_CELLS]).map_err(|_| PlotError::NotCube)?;
        let v = View::new(&face, k as f64 * w, size, w);
        body.push_str(&panel(&v, &face, &CrackSet::none(), &lines, None));
        let label = v.map([face.lo[0], face.hi[1]]);
        let _ = writeln!(
            body,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"10\" font-family=\"sans-serif\">x3 = {:.2}</text>",
            label[0],
            label[1] + 10.0,
            z
        );
    }
    Ok(document(size, &body))
}

/// Default slice levels for the cube `[0, pi]^3`.
pub fn default_levels() -> Vec<f64> {
    vec![0.25 * PI, 0.5 * PI, 0.75 * PI]
}
