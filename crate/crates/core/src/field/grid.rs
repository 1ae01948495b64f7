use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::chart::{CrackSet, GridSpec, Region};
use crate::error::FieldError;

/// Largest grid the refinement loop will allocate.
pub const MAX_CELLS: usize = 1 << 24;

/// Relative width of the band treated as zero.
const ZERO_BAND: f64 = 1e-12;

/// Sampled sign field with its crack- and wrap-aware adjacency.
#[derive(Clone, Debug)]
pub struct SignGrid {
    spec: GridSpec,
    values: Vec<f64>,
    signs: Vec<i8>,
    interior: Vec<bool>,
    // sign at the midpoint of the edge from a cell to its +axis neighbour
    // (planar charts only)
    mids: Vec<Vec<i8>>,
    cut: Vec<Vec<bool>>,
    // sign at the upper-right corner of each cell, for 2x2 blocks that
    // straddle the boundary of a masked region (0 outside the region)
    corners: Vec<i8>,
    // sign of the field at each hub point, 0 when the hub is severed
    hub_sign: Vec<i8>,
    zero_band: f64,
}

fn sign_of(v: f64, band: f64) -> i8 {
    if v > band {
        1
    } else if v < -band {
        -1
    } else {
        0
    }
}

/// Samples per edge when an edge borders a sign change.
const EDGE_SAMPLES: usize = 7;

// Forward neighbour on a planar grid, with wrap.
fn forward_2d(grid: &GridSpec, idx: usize, axis: usize) -> Option<usize> {
    let nx = grid.cells[0];
    let (coord, n, stride) = if axis == 0 {
        (idx % nx, nx, 1)
    } else {
        (idx / nx, grid.cells[1], nx)
    };
    if coord + 1 < n {
        Some(idx + stride)
    } else if grid.chart.wrap[axis] {
        Some(idx - (n - 1) * stride)
    } else {
        None
    }
}

fn backward_2d(grid: &GridSpec, idx: usize, axis: usize) -> Option<usize> {
    let nx = grid.cells[0];
    let (coord, n, stride) = if axis == 0 {
        (idx % nx, nx, 1)
    } else {
        (idx / nx, grid.cells[1], nx)
    };
    if coord > 0 {
        Some(idx - stride)
    } else if grid.chart.wrap[axis] {
        Some(idx + (n - 1) * stride)
    } else {
        None
    }
}

// Sign the field keeps along the edge from each cell to its forward
// neighbour on `axis`, or 0 if it dips to zero. Edges next to a sign change
// are scanned and the smallest sample refined by a parabola, so a nodal
// crossing close to the edge is not stepped over.
fn edge_signs<F>(field: &F, grid: &GridSpec, values: &[f64], signs: &[i8], axis: usize, band: f64) -> Vec<i8>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let chart = &grid.chart;
    let h = grid.step(axis);
    let near_change = |c: usize| {
        (0..2).any(|ax| {
            [forward_2d(grid, c, ax), backward_2d(grid, c, ax)]
                .into_iter()
                .flatten()
                .any(|nb| signs[nb] != signs[c])
        })
    };
    (0..grid.total())
        .into_par_iter()
        .map(|i| {
            let s = signs[i];
            let Some(nb) = forward_2d(grid, i, axis) else { return 0 };
            if s == 0 || signs[nb] != s {
                return 0;
            }
            let mut multi = [0usize; 2];
            let mut p0 = [0f64; 2];
            grid.unflatten(i, &mut multi);
            grid.center_of(&multi, &mut p0);
            let at = |t: f64| {
                let mut p = p0;
                p[axis] += t * h;
                p
            };
            let sf = |t: f64| {
                let p = at(t);
                if chart.region != Region::Full && !chart.contains(&p) {
                    return 0.0;
                }
                f64::from(s) * field(&p)
            };
            if !(near_change(i) || near_change(nb)) {
                return if sf(0.5) > band { s } else { 0 };
            }
            let m = EDGE_SAMPLES + 1;
            let mut g = Vec::with_capacity(m + 1);
            g.push(f64::from(s) * values[i]);
            for k in 1..m {
                g.push(sf(k as f64 / m as f64));
            }
            g.push(f64::from(s) * values[nb]);
            let (k, &gmin) = g.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("non-empty");
            if gmin <= band {
                return 0;
            }
            if k > 0 && k < m {
                let (a, b, c) = (g[k - 1], g[k], g[k + 1]);
                let curv = a - 2.0 * b + c;
                if curv > 0.0 {
                    let off = 0.5 * (a - c) / curv;
                    if sf((k as f64 + off) / m as f64) <= band {
                        return 0;
                    }
                }
            }
            s
        })
        .collect()
}

/// Evaluate `field` at the cell centers of `grid`.
pub fn sample<F>(field: &F, grid: &GridSpec, cracks: &CrackSet) -> Result<SignGrid, FieldError>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let total = grid.total();
    let d = grid.cells.len();
    let chart = &grid.chart;
    let eval = |idx: usize| -> Option<f64> {
        let mut multi = [0usize; 4];
        let mut p = [0f64; 4];
        grid.unflatten(idx, &mut multi[..d]);
        grid.center_of(&multi[..d], &mut p[..d]);
        if chart.region != Region::Full && !chart.contains(&p[..d]) {
            return None;
        }
        Some(field(&p[..d]))
    };
    let values: Vec<f64> = (0..total).into_par_iter().map(|i| eval(i).unwrap_or(0.0)).collect();
    let interior: Vec<bool> = if chart.region == Region::Full {
        Vec::new()
    } else {
        (0..total)
            .into_par_iter()
            .map(|i| {
                let mut multi = [0usize; 4];
                let mut p = [0f64; 4];
                grid.unflatten(i, &mut multi[..d]);
                grid.center_of(&multi[..d], &mut p[..d]);
                chart.contains(&p[..d])
            })
            .collect()
    };
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        let mut multi = vec![0; d];
        let mut p = vec![0.0; d];
        grid.unflatten(i, &mut multi);
        grid.center_of(&multi, &mut p);
        return Err(FieldError::NonFinite(p));
    }
    let vmax = values.par_iter().map(|v| v.abs()).reduce(|| 0.0, f64::max);
    let zero_band = ZERO_BAND * vmax;
    let signs: Vec<i8> = values.par_iter().map(|&v| sign_of(v, zero_band)).collect();

    let mids = if d == 2 {
        (0..2).map(|axis| edge_signs(field, grid, &values, &signs, axis, zero_band)).collect()
    } else {
        Vec::new()
    };
    let corners = if d == 2 && chart.region != Region::Full {
        let (hx, hy) = (grid.step(0), grid.step(1));
        (0..total)
            .into_par_iter()
            .map(|i| {
                let mut multi = [0usize; 2];
                let mut p = [0f64; 2];
                grid.unflatten(i, &mut multi);
                grid.center_of(&multi, &mut p);
                p[0] += 0.5 * hx;
                p[1] += 0.5 * hy;
                if chart.contains(&p) {
                    sign_of(field(&p), zero_band)
                } else {
                    0
                }
            })
            .collect()
    } else {
        Vec::new()
    };
    let cut = if d == 2 {
        cracks.cut_edges(grid)?
    } else if cracks.is_empty() {
        Vec::new()
    } else {
        return Err(FieldError::CracksNeed2d);
    };
    let hub_sign = chart
        .hubs
        .iter()
        .map(|&h| {
            if cracks.reaches(chart, h) {
                return 0;
            }
            let mut p = chart.lo.clone();
            p[h.axis] = if h.high { chart.hi[h.axis] } else { chart.lo[h.axis] };
            sign_of(field(&p), zero_band)
        })
        .collect();
    Ok(SignGrid {
        spec: grid.clone(),
        values,
        signs,
        interior,
        mids,
        cut,
        corners,
        hub_sign,
        zero_band,
    })
}

impl SignGrid {
    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn zero_band(&self) -> f64 {
        self.zero_band
    }

    pub fn is_interior(&self, idx: usize) -> bool {
        self.interior.is_empty() || self.interior[idx]
    }

    /// Neighbour of `idx` one step forward along `axis`, with wrap.
    fn forward(&self, idx: usize, axis: usize, coord: usize, stride: usize) -> Option<usize> {
        let n = self.spec.cells[axis];
        if coord + 1 < n {
            Some(idx + stride)
        } else if self.spec.chart.wrap[axis] {
            Some(idx - (n - 1) * stride)
        } else {
            None
        }
    }

    fn backward(&self, idx: usize, axis: usize, coord: usize, stride: usize) -> Option<usize> {
        let n = self.spec.cells[axis];
        if coord > 0 {
            Some(idx - stride)
        } else if self.spec.chart.wrap[axis] {
            Some(idx + (n - 1) * stride)
        } else {
            None
        }
    }

    // Edge stored at its lower cell `lower`; `other` is the neighbour.
    fn edge_open(&self, lower: usize, other: usize, axis: usize) -> bool {
        let s = self.signs[lower];
        if s == 0 || self.signs[other] != s || !self.is_interior(lower) || !self.is_interior(other) {
            return false;
        }
        if !self.cut.is_empty() && self.cut[axis][lower] {
            return false;
        }
        self.mids.is_empty() || self.mids[axis][lower] == s
    }

    // Diagonal link between `a` and `b` across the 2x2 block whose lower-left
    // cell is `anchor`. Only used where a block cell lies outside the region,
    // since a narrow wedge at a corner may hold no orthogonal neighbours.
    fn diagonal_open(&self, a: usize, b: usize, others: [usize; 2], anchor: usize) -> bool {
        let s = self.signs[a];
        s != 0
            && self.signs[b] == s
            && self.is_interior(a)
            && self.is_interior(b)
            && others.iter().any(|&o| !self.is_interior(o))
            && self.corners[anchor] == s
    }

    /// Connected components of each strict sign: `(positive, negative)`.
    pub fn components(&self) -> (usize, usize) {
        let roots = self.labels().roots;
        let pos = roots.iter().filter(|&&(_, s)| s > 0).count();
        (pos, roots.len() - pos)
    }

    /// Component label per cell (`u32::MAX` for zero or exterior cells).
    pub fn component_labels(&self) -> Vec<u32> {
        self.labels().labels
    }

    fn labels(&self) -> Labelling {
        let spec = &self.spec;
        let d = spec.cells.len();
        let total = spec.total();
        let strides = spec.strides();
        let mut labels = vec![u32::MAX; total];
        let mut roots = Vec::new();
        // hub faces, gathered once
        let hubs: Vec<Vec<usize>> = spec
            .chart
            .hubs
            .iter()
            .zip(&self.hub_sign)
            .map(|(h, &hs)| {
                if hs == 0 {
                    return Vec::new();
                }
                let target = if h.high { spec.cells[h.axis] - 1 } else { 0 };
                let mut multi = vec![0; d];
                (0..total)
                    .filter(|&i| {
                        spec.unflatten(i, &mut multi);
                        multi[h.axis] == target
                    })
                    .collect()
            })
            .collect();
        let mut on_hub = vec![u8::MAX; total];
        for (k, face) in hubs.iter().enumerate() {
            for &i in face {
                on_hub[i] = k as u8;
            }
        }
        let mut hub_done = vec![[false; 2]; hubs.len()];
        let mut stack = Vec::new();
        let mut multi = vec![0usize; d];
        for start in 0..total {
            let s = self.signs[start];
            if s == 0 || labels[start] != u32::MAX || !self.is_interior(start) {
                continue;
            }
            let label = roots.len() as u32;
            roots.push((start, s));
            labels[start] = label;
            stack.push(start);
            while let Some(c) = stack.pop() {
                spec.unflatten(c, &mut multi);
                for axis in 0..d {
                    let st = strides[axis];
                    if let Some(nb) = self.forward(c, axis, multi[axis], st) {
                        if labels[nb] == u32::MAX && self.edge_open(c, nb, axis) {
                            labels[nb] = label;
                            stack.push(nb);
                        }
                    }
                    if let Some(nb) = self.backward(c, axis, multi[axis], st) {
                        if labels[nb] == u32::MAX && self.edge_open(nb, c, axis) {
                            labels[nb] = label;
                            stack.push(nb);
                        }
                    }
                }
                if !self.corners.is_empty() {
                    let (nx, ny) = (spec.cells[0], spec.cells[1]);
                    let (i, j) = (multi[0], multi[1]);
                    // (di, dj) to the diagonal neighbour
                    for (di, dj) in [(1i64, 1i64), (-1, 1), (1, -1), (-1, -1)] {
                        let (ii, jj) = (i as i64 + di, j as i64 + dj);
                        if ii < 0 || jj < 0 || ii >= nx as i64 || jj >= ny as i64 {
                            continue;
                        }
                        let nb = ii as usize + nx * jj as usize;
                        let o1 = ii as usize + nx * j;
                        let o2 = i + nx * jj as usize;
                        let anchor = i.min(ii as usize) + nx * j.min(jj as usize);
                        if labels[nb] == u32::MAX && self.diagonal_open(c, nb, [o1, o2], anchor) {
                            labels[nb] = label;
                            stack.push(nb);
                        }
                    }
                }
                let h = on_hub[c];
                if h != u8::MAX {
                    let slot = usize::from(s < 0);
                    if self.hub_sign[h as usize] == s && !hub_done[h as usize][slot] {
                        hub_done[h as usize][slot] = true;
                        for &nb in &hubs[h as usize] {
                            if labels[nb] == u32::MAX && self.signs[nb] == s {
                                labels[nb] = label;
                                stack.push(nb);
                            }
                        }
                    }
                }
            }
        }
        Labelling { labels, roots }
    }
}

struct Labelling {
    labels: Vec<u32>,
    roots: Vec<(usize, i8)>,
}

/// Outcome of counting under refinement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodalCountReport {
    /// Count at the finest grid tried.
    pub count: usize,
    pub positive: usize,
    pub negative: usize,
    pub stable: bool,
    pub resolutions: Vec<Vec<usize>>,
    pub counts: Vec<usize>,
}

/// Sequence of grids to try.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Refinement {
    /// `base`, then every axis doubled, up to `max_refinements` times.
    Doubling { base: Vec<usize>, max_refinements: usize },
    /// Explicit list of grids.
    Ladder(Vec<Vec<usize>>),
}

impl Refinement {
    pub fn doubling(base: Vec<usize>, max_refinements: usize) -> Self {
        Refinement::Doubling { base, max_refinements }
    }

    fn levels(&self) -> Vec<Vec<usize>> {
        match self {
            Refinement::Doubling { base, max_refinements } => (0..=*max_refinements)
                .map(|k| base.iter().map(|&c| c << k).collect::<Vec<usize>>())
                .take_while(|cells| cells.iter().product::<usize>() <= MAX_CELLS)
                .collect(),
            Refinement::Ladder(l) => l.clone(),
        }
    }
}

/// Count on a single grid.
pub fn count_on_grid<F>(field: &F, grid: &GridSpec, cracks: &CrackSet) -> Result<(usize, usize), FieldError>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    Ok(sample(field, grid, cracks)?.components())
}

/// Count nodal domains, refining until two consecutive grids agree.
pub fn count_nodal_domains<F>(
    field: &F,
    chart: &super::Chart,
    cracks: &CrackSet,
    refinement: &Refinement,
) -> Result<NodalCountReport, FieldError>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let levels = refinement.levels();
    if levels.is_empty() {
        return Err(FieldError::EmptyLadder);
    }
    let mut report = NodalCountReport {
        count: 0,
        positive: 0,
        negative: 0,
        stable: false,
        resolutions: Vec::new(),
        counts: Vec::new(),
    };
    for cells in levels {
        let grid = GridSpec::new(chart.clone(), cells.clone())?;
        let (pos, neg) = count_on_grid(field, &grid, cracks)?;
        let count = pos + neg;
        report.stable = report.counts.last() == Some(&count);
        report.count = count;
        report.positive = pos;
        report.negative = neg;
        report.resolutions.push(cells);
        report.counts.push(count);
        if report.stable {
            break;
        }
    }
    Ok(report)
}
