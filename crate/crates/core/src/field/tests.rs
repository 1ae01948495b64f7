use std::f64::consts::PI;

use super::*;
use crate::error::FieldError;
use crate::triangle::{self, TrianglePoint};

fn count<F: Fn(&[f64]) -> f64 + Sync>(f: &F, chart: &Chart, cracks: &CrackSet, base: usize) -> NodalCountReport {
    let cells = chart.default_cells(base);
    count_nodal_domains(f, chart, cracks, &Refinement::doubling(cells, 3)).unwrap()
}

#[test]
fn constant_field_is_one_domain() {
    let r = count(&|_: &[f64]| 1.0, &Chart::rectangle(), &CrackSet::none(), 16);
    assert_eq!((r.count, r.positive, r.negative, r.stable), (1, 1, 0, true));
    assert_eq!(r.counts, vec![1, 1]);
}

#[test]
fn half_wave_product_on_rectangle() {
    let f = |p: &[f64]| (p[0] / 2.0).sin() * (p[1] / 2.0).sin();
    let grid = GridSpec::new(Chart::rectangle(), vec![32, 16]).unwrap();
    let s = sample(&f, &grid, &CrackSet::none()).unwrap();
    for (idx, &sg) in s.signs().iter().enumerate() {
        let i = idx % 32;
        assert_eq!(sg, if i < 16 { 1 } else { -1 });
    }
    assert_eq!(s.components(), (1, 1));
}

#[test]
fn product_modes_give_m_times_n() {
    for m in 1..=5u32 {
        for n in 1..=3u32 {
            let f = move |p: &[f64]| (m as f64 * p[0] / 4.0).sin() * (n as f64 * p[1] / 2.0).sin();
            let r = count(&f, &Chart::rectangle(), &CrackSet::none(), 32);
            assert!(r.stable);
            assert_eq!(r.count, (m * n) as usize, "m={m} n={n}");
        }
    }
}

#[test]
fn torus_seam_is_glued() {
    let f = |p: &[f64]| (p[0] / 2.0).sin();
    let r = count(&f, &Chart::torus(), &CrackSet::none(), 16);
    assert_eq!(r.count, 2);
    // the same field on the rectangle has no gluing but also two domains;
    // a shifted phase distinguishes them
    let g = |p: &[f64]| (p[0] / 2.0 - 1.0).sin();
    assert_eq!(count(&g, &Chart::torus(), &CrackSet::none(), 16).count, 2);
    assert_eq!(count(&g, &Chart::rectangle(), &CrackSet::none(), 16).count, 3);
}

#[test]
fn sphere_poles_and_seam() {
    let x = |p: &[f64]| (1.0 - p[1] * p[1]).sqrt() * p[0].cos();
    assert_eq!(count(&x, &Chart::sphere(), &CrackSet::none(), 16).count, 2);
    let z = |p: &[f64]| p[1] - 0.3;
    assert_eq!(count(&z, &Chart::sphere(), &CrackSet::none(), 16).count, 2);
    // a cap-shaped field that only touches the pole rows through the hub
    let near_pole = |p: &[f64]| p[1] - 0.95;
    assert_eq!(count(&near_pole, &Chart::sphere(), &CrackSet::none(), 16).count, 2);
}

#[test]
fn meridian_cracks_split_the_cap() {
    let z = |p: &[f64]| p[1] - 0.7;
    let mut cracks = CrackSet::none();
    cracks.push(CrackSet::meridian(0.0, 0.5).unwrap());
    cracks.push(CrackSet::meridian(PI, 0.5).unwrap());
    assert_eq!(count(&z, &Chart::sphere(), &cracks, 16).count, 3);
    // cap deeper than the cracks stays whole
    let deep = |p: &[f64]| p[1] - 0.3;
    assert_eq!(count(&deep, &Chart::sphere(), &cracks, 16).count, 2);
}

#[test]
fn rectangle_crack_separates_only_when_it_crosses_the_line() {
    let f = |p: &[f64]| -(0.25f64).cos() + (p[0] / 4.0).cos();
    let long = CrackSet::new(vec![CrackSet::horizontal(0.0, 2.0, PI).unwrap()]);
    let short = CrackSet::new(vec![CrackSet::horizontal(0.0, 0.5, PI).unwrap()]);
    assert_eq!(count(&f, &Chart::rectangle(), &long, 32).count, 3);
    assert_eq!(count(&f, &Chart::rectangle(), &short, 32).count, 2);
    assert_eq!(count(&f, &Chart::rectangle(), &CrackSet::none(), 32).count, 2);
}

#[test]
fn torus_crack_copies_cover_the_seam() {
    // crack straddling x = 0 must still cut
    let f = |p: &[f64]| (p[1]).sin();
    let across = CrackSet::new(vec![CrackSet::horizontal(-1.0, 4.0 * PI - 2.0, PI / 2.0).unwrap()]);
    let r = count(&f, &Chart::torus(), &across, 16);
    assert_eq!(r.count, 2);
    let full = CrackSet::new(vec![
        CrackSet::horizontal(-1.0, 4.0 * PI + 1.0, PI / 2.0).unwrap(),
    ]);
    assert_eq!(count(&f, &Chart::torus(), &full, 16).count, 3);
}

#[test]
fn disk_radial_cracks() {
    let f = |p: &[f64]| p[0] - 0.5;
    let mut cracks = CrackSet::none();
    for k in 0..6 {
        cracks.push(CrackSet::radial(k as f64 * PI / 3.0, 0.3, 1.0).unwrap());
    }
    let chart = Chart::disk();
    let refine = Refinement::doubling(vec![16, 48], 3);
    assert_eq!(count_nodal_domains(&f, &chart, &cracks, &refine).unwrap().count, 7);
    assert_eq!(count_nodal_domains(&f, &chart, &CrackSet::none(), &refine).unwrap().count, 2);
    // crack reaching the center closes the hub
    let through = CrackSet::new(vec![
        CrackSet::radial(0.0, 0.0, 1.0).unwrap(),
        CrackSet::radial(PI, 0.0, 1.0).unwrap(),
    ]);
    assert_eq!(count_nodal_domains(&f, &chart, &through, &refine).unwrap().count, 4);
}

#[test]
fn triangle_level_set() {
    let f = |p: &[f64]| triangle::phi_n2(TrianglePoint::unchecked(p[0], p[1])) + 1.05;
    let r = count(&f, &Chart::triangle(), &CrackSet::none(), 128);
    assert_eq!(r.count, 3);
    let g = |p: &[f64]| triangle::phi_n2(TrianglePoint::unchecked(p[0], p[1])) + 0.7;
    assert_eq!(count(&g, &Chart::triangle(), &CrackSet::none(), 128).count, 2);
}

#[test]
fn adding_cracks_never_merges() {
    let f = |p: &[f64]| (p[0] / 4.0).cos() - 0.2 + 0.3 * (p[1] / 2.0).cos();
    let grid = GridSpec::new(Chart::rectangle(), vec![64, 32]).unwrap();
    let mut cracks = CrackSet::none();
    let mut last = sample(&f, &grid, &cracks).unwrap().components();
    for (k, y) in [1.0, 2.5, 4.1].iter().enumerate() {
        cracks.push(CrackSet::horizontal(0.0, 3.0 + 2.0 * k as f64, *y).unwrap());
        let now = sample(&f, &grid, &cracks).unwrap().components();
        assert!(now.0 + now.1 >= last.0 + last.1);
        last = now;
    }
}

#[test]
fn three_dimensional_counts() {
    let chart = Chart::cuboid(vec![PI; 3]);
    let f = |p: &[f64]| p.iter().map(|x| x.sin()).product::<f64>() * (p.iter().map(|x| x.cos().powi(2)).sum::<f64>() - 2.5);
    let r = count_nodal_domains(&f, &chart, &CrackSet::none(), &Refinement::doubling(vec![16; 3], 2)).unwrap();
    assert_eq!(r.count, 9);
    assert!(r.stable);
}

#[test]
fn errors() {
    assert!(matches!(
        GridSpec::new(Chart::rectangle(), vec![4, 16]),
        Err(FieldError::ResolutionTooSmall(4))
    ));
    assert!(matches!(
        GridSpec::new(Chart::rectangle(), vec![16]),
        Err(FieldError::DimensionMismatch { .. })
    ));
    assert!(matches!(Crack::new([1.0, 1.0], [1.0, 1.0]), Err(FieldError::DegenerateCrack)));
    // a crack through cell centers
    let grid = GridSpec::new(Chart::cuboid(vec![16.0, 16.0]), vec![16, 16]).unwrap();
    let cracks = CrackSet::new(vec![CrackSet::horizontal(0.0, 3.0, 0.5).unwrap()]);
    assert!(matches!(sample(&|_: &[f64]| 1.0, &grid, &cracks), Err(FieldError::CenterOnCrack(_))));
    let cube = GridSpec::new(Chart::cuboid(vec![1.0; 3]), vec![8; 3]).unwrap();
    let c = CrackSet::new(vec![CrackSet::horizontal(0.1, 0.3, 0.21).unwrap()]);
    assert!(matches!(sample(&|_: &[f64]| 1.0, &cube, &c), Err(FieldError::CracksNeed2d)));
    let nan = |_: &[f64]| f64::NAN;
    assert!(matches!(sample(&nan, &grid, &CrackSet::none()), Err(FieldError::NonFinite(_))));
    assert!(matches!(
        count_nodal_domains(&nan, &Chart::rectangle(), &CrackSet::none(), &Refinement::Ladder(vec![])),
        Err(FieldError::EmptyLadder)
    ));
}

#[test]
fn lines_vertical() {
    let f = |p: &[f64]| (p[0] / 4.0).cos() - 1f64.cos();
    let lines = extract_nodal_lines(&f, &Chart::rectangle(), [64, 32]).unwrap();
    assert_eq!(lines.len(), 1);
    for p in &lines[0] {
        assert!((p[0] - 4.0).abs() < 1e-3, "{p:?}");
    }
    let ys: Vec<f64> = lines[0].iter().map(|p| p[1]).collect();
    assert!(ys.iter().cloned().fold(f64::INFINITY, f64::min) < 1e-9);
    assert!(ys.iter().cloned().fold(0.0, f64::max) > 2.0 * PI - 1e-9);
}

#[test]
fn lines_constant_is_empty() {
    let lines = extract_nodal_lines(&|_: &[f64]| 1.0, &Chart::rectangle(), [16, 16]).unwrap();
    assert!(lines.is_empty());
    assert!(matches!(
        extract_nodal_lines(&|_: &[f64]| 1.0, &Chart::cuboid(vec![1.0; 3]), [16, 16]),
        Err(FieldError::NotPlanar(3))
    ));
}

#[test]
fn lines_triangle_segments_meet_at_m() {
    let f = |p: &[f64]| triangle::phi_n2(TrianglePoint::unchecked(p[0], p[1])) + 1.0;
    let lines = extract_nodal_lines(&f, &Chart::triangle(), [200, 200]).unwrap();
    assert!(!lines.is_empty());
    let m = [0.75, triangle::SQRT3 / 4.0];
    let mut near_m = false;
    for l in &lines {
        for p in l {
            assert!(triangle::contains(p[0], p[1]) || (p[1] >= -1e-12));
            let d1 = (p[0] - 0.75).abs();
            let d2 = (p[0] + triangle::SQRT3 * p[1] - 1.5).abs();
            assert!(d1.min(d2) < 5e-3, "{p:?}");
            if (p[0] - m[0]).hypot(p[1] - m[1]) < 1e-2 {
                near_m = true;
            }
        }
    }
    assert!(near_m);
}

#[test]
fn deterministic_labels() {
    let f = |p: &[f64]| (p[0] / 4.0 * 3.0).sin() * (p[1]).cos();
    let grid = GridSpec::new(Chart::rectangle(), vec![64, 32]).unwrap();
    let a = sample(&f, &grid, &CrackSet::none()).unwrap().component_labels();
    let b = sample(&f, &grid, &CrackSet::none()).unwrap().component_labels();
    assert_eq!(a, b);
}

#[test]
fn pole_on_the_nodal_set_does_not_glue_lobes() {
    // sin^2(theta) cos(2 phi): four lobes meeting at both poles
    let f = |p: &[f64]| (1.0 - p[1] * p[1]) * (2.0 * p[0]).cos();
    assert_eq!(count(&f, &Chart::sphere(), &CrackSet::none(), 16).count, 4);
}

#[test]
fn wedge_at_a_triangle_vertex_stays_attached() {
    // phi_n3 vanishes on the median from the origin, leaving a 30 degree
    // wedge between the median and the left edge
    let f = |p: &[f64]| crate::triangle::phi_n3(crate::triangle::TrianglePoint::unchecked(p[0], p[1]));
    for n in [16, 32, 64, 128] {
        let g = GridSpec::new(Chart::triangle(), vec![n, n]).unwrap();
        assert_eq!(count_on_grid(&f, &g, &CrackSet::none()).unwrap(), (1, 1), "n = {n}");
    }
}

#[test]
fn diagonal_crossing_is_not_bridged() {
    // X-shaped nodal set at an arbitrary point: four quadrant domains
    for (x0, y0) in [(2.0, 3.0), (6.1234, 2.2), (7.77, 4.01)] {
        let f = move |p: &[f64]| (p[0] - x0).powi(2) - (p[1] - y0).powi(2);
        for n in [16, 24, 32, 48, 64, 128] {
            let g = GridSpec::new(Chart::rectangle(), vec![2 * n, n]).unwrap();
            assert_eq!(count_on_grid(&f, &g, &CrackSet::none()).unwrap(), (2, 2), "({x0},{y0}) n = {n}");
        }
    }
}
