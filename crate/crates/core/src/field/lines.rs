use std::collections::HashMap;

use rayon::prelude::*;

use super::chart::{Chart, Region};
use crate::error::FieldError;
use crate::triangle::SQRT3;

/// Open or closed polyline in chart coordinates.
pub type Polyline = Vec<[f64; 2]>;

// Edge of the node lattice: horizontal edges (i,j)-(i+1,j) get even ids,
// vertical edges (i,j)-(i,j+1) odd ids.
type EdgeId = u64;

/// Zero level set of `field` by marching squares on a lattice of
/// `cells[0] x cells[1]` squares spanning the chart. Segments are stitched
/// into polylines and clipped to the domain.
pub fn extract_nodal_lines<F>(field: &F, chart: &Chart, cells: [usize; 2]) -> Result<Vec<Polyline>, FieldError>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if chart.dimension() != 2 {
        return Err(FieldError::NotPlanar(chart.dimension()));
    }
    let [nx, ny] = cells;
    if nx < 2 || ny < 2 {
        return Err(FieldError::ResolutionTooSmall(nx.min(ny)));
    }
    let hx = chart.period(0) / nx as f64;
    let hy = chart.period(1) / ny as f64;
    let node = |i: usize, j: usize| [chart.lo[0] + i as f64 * hx, chart.lo[1] + j as f64 * hy];
    let w = nx + 1;
    let values: Vec<f64> = (0..w * (ny + 1))
        .into_par_iter()
        .map(|k| field(&node(k % w, k / w)))
        .collect();
    if let Some(k) = values.iter().position(|v| !v.is_finite()) {
        return Err(FieldError::NonFinite(node(k % w, k / w).to_vec()));
    }
    let val = |i: usize, j: usize| values[i + w * j];
    let hid = |i: usize, j: usize| 2 * (i + w * j) as u64;
    let vid = |i: usize, j: usize| 2 * (i + w * j) as u64 + 1;

    let point_on = |id: EdgeId| -> [f64; 2] {
        let k = (id / 2) as usize;
        let (i, j) = (k % w, k / w);
        let (a, b, p, q) = if id % 2 == 0 {
            (val(i, j), val(i + 1, j), node(i, j), node(i + 1, j))
        } else {
            (val(i, j), val(i, j + 1), node(i, j), node(i, j + 1))
        };
        let t = if a == b { 0.5 } else { a / (a - b) };
        [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]
    };

    let mut segments: Vec<(EdgeId, EdgeId)> = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            let corners = [val(i, j), val(i + 1, j), val(i + 1, j + 1), val(i, j + 1)];
            let mut case = 0;
            for (b, &v) in corners.iter().enumerate() {
                if v >= 0.0 {
                    case |= 1 << b;
                }
            }
            // square edges in order: bottom, right, top, left
            let e = [hid(i, j), vid(i + 1, j), hid(i, j + 1), vid(i, j)];
            let center_pos = corners.iter().sum::<f64>() >= 0.0;
            let pairs: &[(usize, usize)] = match case {
                0 | 15 => &[],
                1 | 14 => &[(3, 0)],
                2 | 13 => &[(0, 1)],
                3 | 12 => &[(3, 1)],
                4 | 11 => &[(1, 2)],
                6 | 9 => &[(0, 2)],
                7 | 8 => &[(3, 2)],
                5 if center_pos => &[(3, 2), (0, 1)],
                5 => &[(3, 0), (1, 2)],
                10 if center_pos => &[(3, 0), (1, 2)],
                10 => &[(3, 2), (0, 1)],
                _ => unreachable!(),
            };
            for &(a, b) in pairs {
                segments.push((e[a], e[b]));
            }
        }
    }

    let chains = stitch(&segments);
    let mut out = Vec::new();
    for chain in chains {
        let pts: Polyline = chain.iter().map(|&id| point_on(id)).collect();
        match chart.region {
            Region::Full => out.push(pts),
            Region::Triangle => out.extend(clip_to_triangle(&pts)),
        }
    }
    out.retain(|p| p.len() >= 2);
    Ok(out)
}

// Join segments sharing an edge id into maximal chains.
fn stitch(segments: &[(EdgeId, EdgeId)]) -> Vec<Vec<EdgeId>> {
    let mut at: HashMap<EdgeId, Vec<usize>> = HashMap::new();
    for (k, &(a, b)) in segments.iter().enumerate() {
        at.entry(a).or_default().push(k);
        at.entry(b).or_default().push(k);
    }
    let mut used = vec![false; segments.len()];
    let mut chains = Vec::new();
    let other = |k: usize, id: EdgeId| {
        let (a, b) = segments[k];
        if a == id {
            b
        } else {
            a
        }
    };
    let walk = |start: EdgeId, used: &mut Vec<bool>, chain: &mut Vec<EdgeId>| {
        let mut cur = start;
        while let Some(&k) = at[&cur].iter().find(|&&k| !used[k]) {
            used[k] = true;
            cur = other(k, cur);
            chain.push(cur);
        }
    };
    // open chains first, from their free ends, so output is deterministic
    let mut ends: Vec<EdgeId> = at.iter().filter(|(_, v)| v.len() == 1).map(|(&id, _)| id).collect();
    ends.sort_unstable();
    for id in ends {
        if at[&id].iter().all(|&k| used[k]) {
            continue;
        }
        let mut chain = vec![id];
        walk(id, &mut used, &mut chain);
        chains.push(chain);
    }
    for k in 0..segments.len() {
        if used[k] {
            continue;
        }
        used[k] = true;
        let (a, b) = segments[k];
        let mut chain = vec![a, b];
        walk(b, &mut used, &mut chain);
        chains.push(chain);
    }
    chains
}

// Half-planes of the triangle as (normal, offset): inside iff n.p <= c.
fn triangle_planes() -> [([f64; 2], f64); 3] {
    [
        ([0.0, -1.0], 0.0),
        ([SQRT3, 1.0].map(|v| v / 2.0), SQRT3 / 2.0),
        ([-SQRT3, 1.0].map(|v| v / 2.0), 0.0),
    ]
}

fn clip_segment(mut p: [f64; 2], mut q: [f64; 2]) -> Option<([f64; 2], [f64; 2])> {
    for (n, c) in triangle_planes() {
        let fp = n[0] * p[0] + n[1] * p[1] - c;
        let fq = n[0] * q[0] + n[1] * q[1] - c;
        if fp > 0.0 && fq > 0.0 {
            return None;
        }
        if fp > 0.0 || fq > 0.0 {
            let t = fp / (fp - fq);
            let x = [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])];
            if fp > 0.0 {
                p = x;
            } else {
                q = x;
            }
        }
    }
    Some((p, q))
}

fn clip_to_triangle(pts: &[[f64; 2]]) -> Vec<Polyline> {
    let mut out = Vec::new();
    let mut cur: Polyline = Vec::new();
    for w in pts.windows(2) {
        match clip_segment(w[0], w[1]) {
            Some((a, b)) => {
                if cur.last() != Some(&a) {
                    if cur.len() >= 2 {
                        out.push(std::mem::take(&mut cur));
                    }
                    cur.clear();
                    cur.push(a);
                }
                if a != b {
                    cur.push(b);
                }
            }
            None => {
                if cur.len() >= 2 {
                    out.push(std::mem::take(&mut cur));
                }
                cur.clear();
            }
        }
    }
    if cur.len() >= 2 {
        out.push(cur);
    }
    out
}
