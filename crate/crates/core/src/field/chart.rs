use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::FieldError;
use crate::spectra::{Domain, DomainSpec};
use crate::triangle;

/// Face of cells that all touch a single point of the underlying domain
/// (a pole of the sphere, the center of the disk).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hub {
    pub axis: usize,
    /// `true` for the face at the upper end of the axis.
    pub high: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    /// The whole coordinate box.
    Full,
    /// The side-1 equilateral triangle inside its bounding box.
    Triangle,
}

/// Coordinate box of a domain together with its identifications.
///
/// | domain | axes |
/// |---|---|
/// | hypercube, parallelepiped, rectangle | Cartesian |
/// | torus | `(x, y)`, both periodic |
/// | sphere | `(longitude, z)`, longitude periodic, hubs at `z = -1, 1` |
/// | disk | `(r, theta)`, theta periodic, hub at `r = 0` |
/// | triangle | `(x, y)` in the bounding box, exterior masked |
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Chart {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub wrap: Vec<bool>,
    pub hubs: Vec<Hub>,
    pub region: Region,
}

impl Chart {
    pub fn cuboid(hi: Vec<f64>) -> Self {
        let n = hi.len();
        Self {
            lo: vec![0.0; n],
            hi,
            wrap: vec![false; n],
            hubs: Vec::new(),
            region: Region::Full,
        }
    }

    pub fn rectangle() -> Self {
        Self::cuboid(vec![4.0 * PI, 2.0 * PI])
    }

    pub fn torus() -> Self {
        Self {
            wrap: vec![true, true],
            ..Self::rectangle()
        }
    }

    pub fn sphere() -> Self {
        Self {
            lo: vec![0.0, -1.0],
            hi: vec![2.0 * PI, 1.0],
            wrap: vec![true, false],
            hubs: vec![Hub { axis: 1, high: false }, Hub { axis: 1, high: true }],
            region: Region::Full,
        }
    }

    pub fn disk() -> Self {
        Self {
            lo: vec![0.0, 0.0],
            hi: vec![1.0, 2.0 * PI],
            wrap: vec![false, true],
            hubs: vec![Hub { axis: 0, high: false }],
            region: Region::Full,
        }
    }

    pub fn triangle() -> Self {
        Self {
            region: Region::Triangle,
            ..Self::cuboid(vec![1.0, triangle::SQRT3 / 2.0])
        }
    }

    pub fn for_domain(domain: &DomainSpec) -> Self {
        match &domain.domain {
            Domain::Hypercube { n } => Self::cuboid(vec![PI; *n]),
            Domain::Parallelepiped { a } => Self::cuboid(a.iter().map(|v| PI / v.sqrt()).collect()),
            Domain::Rectangle => Self::rectangle(),
            Domain::Torus => Self::torus(),
            Domain::Sphere => Self::sphere(),
            Domain::Disk => Self::disk(),
            Domain::Triangle => Self::triangle(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.lo.len()
    }

    pub fn period(&self, axis: usize) -> f64 {
        self.hi[axis] - self.lo[axis]
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        match self.region {
            Region::Full => true,
            Region::Triangle => triangle::contains(p[0], p[1]),
        }
    }

    /// Default cell counts for a base resolution `n`: the longer axis of the
    /// rectangle, torus and sphere gets `2n`.
    pub fn default_cells(&self, n: usize) -> Vec<usize> {
        let d = self.dimension();
        if d != 2 {
            return vec![n; d];
        }
        if self.region == Region::Triangle {
            return vec![n, n];
        }
        if self.hubs.iter().any(|h| h.axis == 0) {
            // disk: (r, theta)
            return vec![n, 2 * n];
        }
        vec![2 * n, n]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub chart: Chart,
    pub cells: Vec<usize>,
}

impl GridSpec {
    pub const MIN_CELLS: usize = 8;

    pub fn new(chart: Chart, cells: Vec<usize>) -> Result<Self, FieldError> {
        if cells.len() != chart.dimension() {
            return Err(FieldError::DimensionMismatch {
                got: cells.len(),
                want: chart.dimension(),
            });
        }
        if !(1..=4).contains(&cells.len()) {
            return Err(FieldError::UnsupportedDimension(cells.len()));
        }
        if let Some(&c) = cells.iter().find(|&&c| c < Self::MIN_CELLS) {
            return Err(FieldError::ResolutionTooSmall(c));
        }
        Ok(Self { chart, cells })
    }

    pub fn total(&self) -> usize {
        self.cells.iter().product()
    }

    pub fn step(&self, axis: usize) -> f64 {
        self.chart.period(axis) / self.cells[axis] as f64
    }

    pub fn strides(&self) -> Vec<usize> {
        let mut s = Vec::with_capacity(self.cells.len());
        let mut acc = 1;
        for &c in &self.cells {
            s.push(acc);
            acc *= c;
        }
        s
    }

    pub fn center_of(&self, multi: &[usize], out: &mut [f64]) {
        for (k, &i) in multi.iter().enumerate() {
            out[k] = self.chart.lo[k] + (i as f64 + 0.5) * self.step(k);
        }
    }

    pub fn unflatten(&self, mut idx: usize, out: &mut [usize]) {
        for (k, &c) in self.cells.iter().enumerate() {
            out[k] = idx % c;
            idx /= c;
        }
    }
}

/// Straight barrier in a planar chart. Both sides keep a Neumann condition,
/// so the field may differ across it and connectivity is severed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Crack {
    pub a: [f64; 2],
    pub b: [f64; 2],
}

impl Crack {
    pub fn new(a: [f64; 2], b: [f64; 2]) -> Result<Self, FieldError> {
        if a.iter().chain(&b).any(|v| !v.is_finite()) || (a[0] == b[0] && a[1] == b[1]) {
            return Err(FieldError::DegenerateCrack);
        }
        Ok(Self { a, b })
    }

    fn translated(self, dx: f64, dy: f64) -> Self {
        Self {
            a: [self.a[0] + dx, self.a[1] + dy],
            b: [self.b[0] + dx, self.b[1] + dy],
        }
    }

    fn bbox(&self) -> ([f64; 2], [f64; 2]) {
        (
            [self.a[0].min(self.b[0]), self.a[1].min(self.b[1])],
            [self.a[0].max(self.b[0]), self.a[1].max(self.b[1])],
        )
    }

    /// Closed-segment intersection with `[p, q]` (touching counts).
    pub fn intersects(&self, p: [f64; 2], q: [f64; 2]) -> bool {
        segments_intersect(self.a, self.b, p, q)
    }

    fn distance_to(&self, p: [f64; 2]) -> f64 {
        let (dx, dy) = (self.b[0] - self.a[0], self.b[1] - self.a[1]);
        let t = (((p[0] - self.a[0]) * dx + (p[1] - self.a[1]) * dy) / (dx * dx + dy * dy)).clamp(0.0, 1.0);
        (p[0] - self.a[0] - t * dx).hypot(p[1] - self.a[1] - t * dy)
    }
}

fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn on_segment(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> bool {
    c[0] >= a[0].min(b[0]) && c[0] <= a[0].max(b[0]) && c[1] >= a[1].min(b[1]) && c[1] <= a[1].max(b[1])
}

fn segments_intersect(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CrackSet {
    pub cracks: Vec<Crack>,
}

impl CrackSet {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn new(cracks: Vec<Crack>) -> Self {
        Self { cracks }
    }

    pub fn is_empty(&self) -> bool {
        self.cracks.is_empty()
    }

    pub fn len(&self) -> usize {
        self.cracks.len()
    }

    pub fn push(&mut self, crack: Crack) {
        self.cracks.push(crack);
    }

    /// Horizontal slit `[x0, x1] x {y}`.
    pub fn horizontal(x0: f64, x1: f64, y: f64) -> Result<Crack, FieldError> {
        Crack::new([x0, y], [x1, y])
    }

    /// Meridian arc of the sphere chart at longitude `phi`, from the north
    /// pole down to `z = 1 - a`.
    pub fn meridian(phi: f64, a: f64) -> Result<Crack, FieldError> {
        if !(a > 0.0 && a <= 2.0) {
            return Err(FieldError::DegenerateCrack);
        }
        Crack::new([phi, 1.0 - a], [phi, 1.0])
    }

    /// Radial slit of the disk chart at angle `theta` for `r0 <= r <= r1`.
    pub fn radial(theta: f64, r0: f64, r1: f64) -> Result<Crack, FieldError> {
        Crack::new([r0, theta], [r1, theta])
    }

    /// Copies translated by one period along every wrapping axis.
    pub(crate) fn periodic_copies(&self, chart: &Chart) -> Vec<Crack> {
        let shifts = |axis: usize| -> Vec<f64> {
            if chart.wrap[axis] {
                let p = chart.period(axis);
                vec![-p, 0.0, p]
            } else {
                vec![0.0]
            }
        };
        let mut out = Vec::new();
        for c in &self.cracks {
            for &dx in &shifts(0) {
                for &dy in &shifts(1) {
                    out.push(c.translated(dx, dy));
                }
            }
        }
        out
    }

    /// Whether some crack touches the face of `hub`.
    pub(crate) fn reaches(&self, chart: &Chart, hub: Hub) -> bool {
        let level = if hub.high { chart.hi[hub.axis] } else { chart.lo[hub.axis] };
        let tol = 1e-12 * chart.period(hub.axis);
        self.cracks.iter().any(|c| {
            let (lo, hi) = c.bbox();
            lo[hub.axis] <= level + tol && hi[hub.axis] >= level - tol
        })
    }

    /// Severed edges per axis, indexed by the lower cell of the edge.
    pub(crate) fn cut_edges(&self, grid: &GridSpec) -> Result<Vec<Vec<bool>>, FieldError> {
        let total = grid.total();
        let mut cut = vec![vec![false; total]; 2];
        if self.cracks.is_empty() {
            return Ok(cut);
        }
        if grid.chart.dimension() != 2 {
            return Err(FieldError::CracksNeed2d);
        }
        let (nx, ny) = (grid.cells[0], grid.cells[1]);
        let (hx, hy) = (grid.step(0), grid.step(1));
        let (lx, ly) = (grid.chart.lo[0], grid.chart.lo[1]);
        let center = |i: usize, j: usize| [lx + (i as f64 + 0.5) * hx, ly + (j as f64 + 0.5) * hy];
        let range = |lo: f64, hi: f64, origin: f64, h: f64, n: usize| -> Option<(usize, usize)> {
            let a = ((lo - origin) / h - 1.5).floor();
            let b = ((hi - origin) / h + 0.5).ceil();
            if b < 0.0 || a > (n - 1) as f64 {
                return None;
            }
            Some((a.max(0.0) as usize, (b as usize).min(n - 1)))
        };
        for crack in self.periodic_copies(&grid.chart) {
            let (blo, bhi) = crack.bbox();
            let Some((i0, i1)) = range(blo[0], bhi[0], lx, hx, nx) else { continue };
            let Some((j0, j1)) = range(blo[1], bhi[1], ly, hy, ny) else { continue };
            let tol = 1e-12 * hx.min(hy);
            for j in j0..=j1 {
                for i in i0..=i1 {
                    let p = center(i, j);
                    if crack.distance_to(p) <= tol {
                        return Err(FieldError::CenterOnCrack(p.to_vec()));
                    }
                    let idx = i + nx * j;
                    if (i + 1 < nx || grid.chart.wrap[0]) && crack.intersects(p, [p[0] + hx, p[1]]) {
                        cut[0][idx] = true;
                    }
                    if (j + 1 < ny || grid.chart.wrap[1]) && crack.intersects(p, [p[0], p[1] + hy]) {
                        cut[1][idx] = true;
                    }
                }
            }
        }
        Ok(cut)
    }
}
