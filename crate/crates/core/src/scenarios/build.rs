use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use super::params::{out_of_range, require, Params};
use super::{run_config, ScenarioConfig, ScenarioResult, Setup};
use crate::error::ScenarioError;
use crate::field::{Chart, CrackSet, Refinement, MAX_CELLS};
use crate::spectra::{
    self, parallelepiped_table, table3_coefficients, BoundaryCondition, Combination, DomainSpec, EigenMode,
    ModeIndex, Part, Trig, MERGE_TOL,
};

use BoundaryCondition::{Dirichlet, Neumann};

/// `kappa(11)` on the unperturbed cube, reported next to the perturbed value.
const CUBE_KAPPA: usize = 8;

// Output of a scenario builder before the common fields are attached.
struct Built {
    chart: Chart,
    cracks: CrackSet,
    combination: Combination,
    kappa: usize,
    refinement: Refinement,
    kappa_assumed_small_crack: bool,
    measurements: BTreeMap<String, f64>,
}

impl Built {
    fn plain(chart: Chart, combination: Combination, kappa: usize, refinement: Refinement) -> Self {
        Self {
            chart,
            cracks: CrackSet::none(),
            combination,
            kappa,
            refinement,
            kappa_assumed_small_crack: false,
            measurements: BTreeMap::new(),
        }
    }
}

// Drops zero coefficients so `lambda_max` only sees modes that are present.
fn combine(domain: &DomainSpec, terms: Vec<(f64, ModeIndex)>) -> Result<Combination, ScenarioError> {
    let mut out = Vec::new();
    for (c, idx) in terms {
        if c != 0.0 {
            out.push((c, EigenMode::new(domain, idx)?));
        }
    }
    if out.is_empty() {
        return Err(out_of_range("coefficients", 0.0, "the combination vanishes identically"));
    }
    Ok(Combination::new(out)?)
}

fn doubling(chart: &Chart, res: usize, cfg: &ScenarioConfig) -> Refinement {
    Refinement::doubling(chart.default_cells(res), cfg.max_refinements)
}

// Geometric ladder with ratio 7/5 for grids where doubling is too costly.
fn gentle_ladder(chart: &Chart, res: usize, cfg: &ScenarioConfig) -> Refinement {
    let mut levels = Vec::new();
    let mut r = res;
    for _ in 0..=cfg.max_refinements {
        let cells = chart.default_cells(r);
        if cells.iter().product::<usize>() > MAX_CELLS {
            break;
        }
        levels.push(cells);
        r = r * 7 / 5;
    }
    Refinement::Ladder(levels)
}

fn box_mode(n: usize, bump: Option<usize>) -> ModeIndex {
    let mut k = vec![1; n];
    if let Some(i) = bump {
        k[i] = 3;
    }
    ModeIndex::Box { k }
}

fn ground_times_cos_sum(domain: &DomainSpec, n: usize, a: f64) -> Result<Combination, ScenarioError> {
    // phi_1 * (sum cos^2 x_i - a), using sin t cos^2 t = (sin t + sin 3t) / 4
    let mut terms = vec![(n as f64 / 4.0 - a, box_mode(n, None))];
    terms.extend((0..n).map(|i| (0.25, box_mode(n, Some(i)))));
    combine(domain, terms)
}

fn hypercube_grid(chart: &Chart, n: usize, res: Option<usize>, cfg: &ScenarioConfig) -> (usize, Refinement) {
    if n >= 4 {
        let r = res.unwrap_or(40);
        (r, gentle_ladder(chart, r, cfg))
    } else {
        let r = res.unwrap_or(64);
        (r, doubling(chart, r, cfg))
    }
}

fn build_hypercube(p: &mut Params, cfg: &ScenarioConfig, bc: BoundaryCondition) -> Result<(usize, Built), ScenarioError> {
    let default_n = if bc == Dirichlet { 3 } else { 4 };
    let n = p.int("n", default_n, 1, 4)?;
    let a = p.get("a", n as f64 - 0.5)?;
    require(a > 0.0 && a < n as f64, "a", a, "must satisfy 0 < a < n")?;
    let domain = DomainSpec::hypercube(n, bc)?;
    let combination = if bc == Dirichlet {
        ground_times_cos_sum(&domain, n, a)?
    } else {
        // sum cos^2 x_i - a = (n/2 - a) + sum cos(2 x_i) / 2
        let mut terms = vec![(n as f64 / 2.0 - a, ModeIndex::Box { k: vec![0; n] })];
        for i in 0..n {
            let mut k = vec![0; n];
            k[i] = 2;
            terms.push((0.5, ModeIndex::Box { k }));
        }
        combine(&domain, terms)?
    };
    let kappa = spectra::kappa(&domain, combination.lambda_max())?;
    let chart = Chart::for_domain(&domain);
    let (res, refinement) = hypercube_grid(&chart, n, cfg.resolution, cfg);
    Ok((res, Built::plain(chart, combination, kappa, refinement)))
}

fn build_parallelepiped(p: &mut Params, cfg: &ScenarioConfig) -> Result<(usize, Built), ScenarioError> {
    let a = p.get("a", 2.5)?;
    require(a > 0.0 && a < 3.0, "a", a, "must satisfy 0 < a < 3")?;
    let coeffs = table3_coefficients();
    let table = parallelepiped_table(coeffs)?;
    let mut measurements = BTreeMap::new();
    for (k, row) in table.iter().enumerate() {
        if let Some(next) = table.get(k + 1) {
            if (next.eigenvalue - row.eigenvalue).abs() <= MERGE_TOL * row.eigenvalue.max(1.0) {
                return Err(ScenarioError::Multiplicity(format!(
                    "{:?} and {:?} share eigenvalue {}",
                    row.triple, next.triple, row.eigenvalue
                )));
            }
        }
        measurements.insert(format!("delta_{:02}", row.index), row.eigenvalue);
    }
    measurements.insert("cube_kappa".into(), CUBE_KAPPA as f64);
    let domain = DomainSpec::new(spectra::Domain::Parallelepiped { a: coeffs }, Dirichlet)?;
    let combination = ground_times_cos_sum(&domain, 3, a)?;
    let kappa = spectra::kappa(&domain, combination.lambda_max())?;
    let chart = Chart::for_domain(&domain);
    let res = cfg.resolution.unwrap_or(64);
    let refinement = doubling(&chart, res, cfg);
    let mut built = Built::plain(chart, combination, kappa, refinement);
    built.measurements = measurements;
    Ok((res, built))
}

fn tri(m: i64, n: i64, part: Part) -> ModeIndex {
    ModeIndex::Triangle { m, n, part }
}

fn build_triangle(p: &mut Params, cfg: &ScenarioConfig, bc: BoundaryCondition) -> Result<(usize, Built), ScenarioError> {
    let a = p.get("a", 1.05)?;
    require(a >= 0.0, "a", a, "must be non-negative")?;
    let domain = DomainSpec::triangle(bc)?;
    let combination = if bc == Neumann {
        // phi_n2 = C_{1,0} / 2 and the constant mode C_{0,0} equals 6
        combine(&domain, vec![(0.5, tri(1, 0, Part::Re)), (a / 6.0, tri(0, 0, Part::Re))])?
    } else {
        combine(&domain, vec![(1.0, tri(2, 1, Part::Im)), (a, tri(1, 1, Part::Im))])?
    };
    let kappa = spectra::kappa(&domain, combination.lambda_max())?;
    let chart = Chart::triangle();
    let res = cfg.resolution.unwrap_or(128);
    let refinement = doubling(&chart, res, cfg);
    Ok((res, Built::plain(chart, combination, kappa, refinement)))
}

// alpha + beta cos(x/4) (Neumann) or sin(x/4) sin(y/2) (alpha + 2 beta cos(x/4)) (Dirichlet).
fn rectangle_field(dirichlet: bool, alpha: f64, beta: f64) -> Result<(DomainSpec, Combination), ScenarioError> {
    let bc = if dirichlet { Dirichlet } else { Neumann };
    let domain = DomainSpec::rectangle(bc)?;
    let terms = if dirichlet {
        vec![(alpha, ModeIndex::Rect { m: 1, n: 1 }), (beta, ModeIndex::Rect { m: 2, n: 1 })]
    } else {
        vec![(alpha, ModeIndex::Rect { m: 0, n: 0 }), (beta, ModeIndex::Rect { m: 1, n: 0 })]
    };
    let comb = combine(&domain, terms)?;
    Ok((domain, comb))
}

fn build_rectangle_crack(p: &mut Params, cfg: &ScenarioConfig) -> Result<(usize, Built), ScenarioError> {
    let dirichlet = p.flag("dirichlet")?;
    let a = p.get("a", 2.0)?;
    require(a >= 0.0 && a <= 4.0 * PI, "a", a, "crack length must lie in [0, 4pi]")?;
    let alpha_default = if dirichlet { -2.0 * 0.25f64.cos() } else { -(0.25f64.cos()) };
    let alpha = p.get("alpha", alpha_default)?;
    let beta = p.get("beta", 1.0)?;
    let (domain, combination) = rectangle_field(dirichlet, alpha, beta)?;
    let mut cracks = CrackSet::none();
    if a > 0.0 {
        cracks.push(CrackSet::horizontal(0.0, a, PI)?);
    }
    let kappa = spectra::kappa(&domain, combination.lambda_max())?;
    let chart = Chart::rectangle();
    let res = cfg.resolution.unwrap_or(64);
    let refinement = doubling(&chart, res, cfg);
    let mut built = Built::plain(chart, combination, kappa, refinement);
    built.kappa_assumed_small_crack = !cracks.is_empty();
    built.cracks = cracks;
    Ok((res, built))
}

/// Position of the vertical nodal line giving `d` domains with horizontal
/// cracks of the given lengths starting at `x = 0`, or `None` if infeasible.
pub(super) fn multi_crack_line(lengths: &[f64], d: usize) -> Option<f64> {
    let k = lengths.len();
    if d < 2 || d > k + 2 {
        return None;
    }
    // d - 2 cracks must be longer than the line and the rest shorter
    let mut sorted: Vec<f64> = lengths.to_vec();
    sorted.sort_by(|x, y| y.total_cmp(x));
    let c = d - 2;
    let upper = if c == 0 { 4.0 * PI } else { sorted[c - 1] };
    let lower = if c == k { 0.0 } else { sorted[c] };
    (upper > lower).then(|| 0.5 * (upper + lower))
}

fn build_multi_crack(p: &mut Params, cfg: &ScenarioConfig) -> Result<(usize, Built), ScenarioError> {
    let k = p.int("k", 4, 0, 16)?;
    let mut lengths = Vec::with_capacity(k);
    let mut ys = Vec::with_capacity(k);
    for i in 1..=k {
        let l = p.get(&format!("l{i}"), i as f64)?;
        require(l > 0.0 && l < 4.0 * PI, &format!("l{i}"), l, "crack length must lie in ]0, 4pi[")?;
        let y = p.get(&format!("y{i}"), 2.0 * PI * i as f64 / (k + 1) as f64)?;
        require(y > 0.0 && y < 2.0 * PI, &format!("y{i}"), y, "crack height must lie in ]0, 2pi[")?;
        lengths.push(l);
        ys.push(y);
    }
    let d = p.int("d", 4.min(k + 2), 0, usize::MAX >> 12)?;
    let x0 = multi_crack_line(&lengths, d).ok_or(ScenarioError::Infeasible { d })?;
    let (domain, combination) = rectangle_field(false, -(x0 / 4.0).cos(), 1.0)?;
    let mut cracks = CrackSet::none();
    for (&l, &y) in lengths.iter().zip(&ys) {
        cracks.push(CrackSet::horizontal(0.0, l, y)?);
    }
    let kappa = spectra::kappa(&domain, combination.lambda_max())?;
    let chart = Chart::rectangle();
    let res = cfg.resolution.unwrap_or(64);
    let refinement = doubling(&chart, res, cfg);
    let mut built = Built::plain(chart, combination, kappa, refinement);
    built.kappa_assumed_small_crack = k > 0;
    built.cracks = cracks;
    built.measurements.insert("x0".into(), x0);
    Ok((res, built))
}

fn build_disk(p: &mut Params, cfg: &ScenarioConfig) -> Result<(usize, Built), ScenarioError> {
    let m = p.int("m", 6, 0, 64)?;
    let c0 = p.get("c0", 0.2)?;
    let c1 = p.get("c1", 1.0)?;
    let r1 = p.get("r1", 0.6)?;
    require(r1 > 0.0 && r1 < 1.0, "r1", r1, "crack start must lie in ]0, 1[")?;
    let domain = DomainSpec::disk();
    // k = 1 is the constant; k = 2 is J_0(j'_{0,2} r)
    let combination = combine(
        &domain,
        vec![
            (c0, ModeIndex::Disk { m: 0, k: 1, kind: Trig::Cos }),
            (c1, ModeIndex::Disk { m: 0, k: 2, kind: Trig::Cos }),
        ],
    )?;
    let mut cracks = CrackSet::none();
    for j in 0..m {
        cracks.push(CrackSet::radial(2.0 * PI * j as f64 / m as f64, r1, 1.0)?);
    }
    let kappa = spectra::kappa(&domain, combination.lambda_max())?;
    let chart = Chart::disk();
    let res = cfg.resolution.unwrap_or(64);
    let refinement = doubling(&chart, res, cfg);
    let mut built = Built::plain(chart, combination, kappa, refinement);
    built.kappa_assumed_small_crack = m > 0;
    built.cracks = cracks;
    Ok((res, built))
}

fn build_torus(p: &mut Params, cfg: &ScenarioConfig) -> Result<(usize, Built), ScenarioError> {
    let a = p.get("a", 2.0 * PI + 2.0)?;
    require(a >= 0.0 && a < 4.0 * PI, "a", a, "crack length must lie in [0, 4pi[")?;
    let alpha = p.get("alpha", 0.0)?;
    let beta = p.get("beta", 1.0)?;
    let theta = p.get("theta", 0.0)?;
    let domain = DomainSpec::torus();
    // alpha + beta sin(x/2 - theta)
    let cc = |m| ModeIndex::Torus { m, n: 0, kx: Trig::Cos, ky: Trig::Cos };
    let combination = combine(
        &domain,
        vec![
            (alpha, cc(0)),
            (beta * theta.cos(), ModeIndex::Torus { m: 1, n: 0, kx: Trig::Sin, ky: Trig::Cos }),
            (-beta * theta.sin(), cc(1)),
        ],
    )?;
    let mut cracks = CrackSet::none();
    if a > 0.0 {
        // centered on the crest of the sine, between its two nodal circles
        let c = (2.0 * theta + PI).rem_euclid(4.0 * PI);
        for y in [0.5 * PI, 1.5 * PI] {
            cracks.push(CrackSet::horizontal(c - 0.5 * a, c + 0.5 * a, y)?);
        }
    }
    let kappa = spectra::kappa(&domain, combination.lambda_max())?;
    let chart = Chart::torus();
    let res = cfg.resolution.unwrap_or(64);
    let refinement = doubling(&chart, res, cfg);
    let mut built = Built::plain(chart, combination, kappa, refinement);
    built.kappa_assumed_small_crack = !cracks.is_empty();
    built.cracks = cracks;
    Ok((res, built))
}

/// Index of `z` among the eigenvalues of the slit sphere. Slits can only
/// lower eigenvalues, `z` keeps eigenvalue 2, and for short slits the next
/// eigenvalue stays above 2.
const CRACKED_SPHERE_KAPPA: usize = 4;

fn build_sphere(p: &mut Params, cfg: &ScenarioConfig) -> Result<(usize, Built), ScenarioError> {
    let m = p.int("m", 2, 0, 32)?;
    let a = p.get("a", 0.5)?;
    require(a > 0.0 && a < 1.0, "a", a, "crack depth must lie in ]0, 1[")?;
    let b = p.get("b", 0.3)?;
    require(b > 0.0 && b < 2.0, "b", b, "cap depth must lie in ]0, 2[")?;
    let domain = DomainSpec::sphere();
    // z - (1 - b): the cap of depth b around the north pole
    let combination = combine(
        &domain,
        vec![(1.0, ModeIndex::Sphere { l: 1, m: 0 }), (b - 1.0, ModeIndex::Sphere { l: 0, m: 0 })],
    )?;
    let mut cracks = CrackSet::none();
    for j in 0..2 * m {
        cracks.push(CrackSet::meridian(PI * j as f64 / m as f64, a)?);
    }
    let kappa = if m == 0 {
        spectra::kappa(&domain, combination.lambda_max())?
    } else {
        CRACKED_SPHERE_KAPPA
    };
    let chart = Chart::sphere();
    let res = cfg.resolution.unwrap_or(64);
    let refinement = doubling(&chart, res, cfg);
    let mut built = Built::plain(chart, combination, kappa, refinement);
    built.kappa_assumed_small_crack = m > 0;
    built.cracks = cracks;
    Ok((res, built))
}

pub(super) fn setup(config: &ScenarioConfig) -> Result<Setup, ScenarioError> {
    let mut p = Params::new(&config.params);
    let (res, built) = match config.name.as_str() {
        "hypercube_dirichlet" => build_hypercube(&mut p, config, Dirichlet)?,
        "hypercube_neumann" => build_hypercube(&mut p, config, Neumann)?,
        "parallelepiped_stability" => build_parallelepiped(&mut p, config)?,
        "triangle_neumann" => build_triangle(&mut p, config, Neumann)?,
        "triangle_dirichlet" => build_triangle(&mut p, config, Dirichlet)?,
        "rectangle_crack" => build_rectangle_crack(&mut p, config)?,
        "rectangle_multi_crack" => build_multi_crack(&mut p, config)?,
        "disk_cracks" => build_disk(&mut p, config)?,
        "torus_cracks" => build_torus(&mut p, config)?,
        "sphere_cracks" => build_sphere(&mut p, config)?,
        other => return Err(ScenarioError::UnknownScenario(other.to_string())),
    };
    let params = p.finish()?;
    Ok(Setup {
        config: ScenarioConfig {
            name: config.name.clone(),
            params,
            resolution: Some(res),
            max_refinements: config.max_refinements,
        },
        chart: built.chart,
        cracks: built.cracks,
        combination: Arc::new(built.combination),
        kappa: built.kappa,
        refinement: built.refinement,
        kappa_assumed_small_crack: built.kappa_assumed_small_crack,
        measurements: built.measurements,
    })
}

fn run(name: &str, params: &[(&str, f64)]) -> Result<ScenarioResult, ScenarioError> {
    let mut cfg = ScenarioConfig::new(name);
    for &(k, v) in params {
        cfg = cfg.param(k, v);
    }
    run_config(&cfg)
}

/// `phi_1 (sum cos^2 x_i - a)` on `]0, pi[^n` with Dirichlet conditions.
pub fn hypercube_dirichlet(n: usize, a: f64) -> Result<ScenarioResult, ScenarioError> {
    run("hypercube_dirichlet", &[("n", n as f64), ("a", a)])
}

/// `sum cos^2 x_i - a` on `]0, pi[^n` with Neumann conditions.
pub fn hypercube_neumann(n: usize, a: f64) -> Result<ScenarioResult, ScenarioError> {
    run("hypercube_neumann", &[("n", n as f64), ("a", a)])
}

/// The Dirichlet cube combination carried over to the slightly perturbed box.
pub fn parallelepiped_stability() -> Result<ScenarioResult, ScenarioError> {
    run("parallelepiped_stability", &[])
}

/// `phi_n2 + a` on the equilateral triangle.
pub fn triangle_neumann(a: f64) -> Result<ScenarioResult, ScenarioError> {
    run("triangle_neumann", &[("a", a)])
}

/// `phi_d2 + a phi_d1` on the equilateral triangle.
pub fn triangle_dirichlet(a: f64) -> Result<ScenarioResult, ScenarioError> {
    run("triangle_dirichlet", &[("a", a)])
}

/// Rectangle `]0, 4pi[ x ]0, 2pi[` with the slit `[0, a] x {pi}`.
pub fn rectangle_crack(bc: BoundaryCondition, a: f64, alpha: f64, beta: f64) -> Result<ScenarioResult, ScenarioError> {
    let dirichlet = match bc {
        Dirichlet => 1.0,
        Neumann => 0.0,
        BoundaryCondition::Closed => return Err(out_of_range("dirichlet", f64::NAN, "the rectangle has a boundary")),
    };
    run(
        "rectangle_crack",
        &[("dirichlet", dirichlet), ("a", a), ("alpha", alpha), ("beta", beta)],
    )
}

/// Rectangle with slits `[0, l_i] x {y_i}` and a nodal line placed to give `d` domains.
pub fn rectangle_multi_crack(lengths: &[f64], ys: &[f64], d: usize) -> Result<ScenarioResult, ScenarioError> {
    if lengths.len() != ys.len() {
        return Err(out_of_range("k", ys.len() as f64, "one height is needed per crack length"));
    }
    let mut cfg = ScenarioConfig::new("rectangle_multi_crack")
        .param("k", lengths.len() as f64)
        .param("d", d as f64);
    for (i, (&l, &y)) in lengths.iter().zip(ys).enumerate() {
        cfg = cfg.param(&format!("l{}", i + 1), l).param(&format!("y{}", i + 1), y);
    }
    run_config(&cfg)
}

/// Neumann disk with `c0 + c1 J_0(j'_{0,2} r)` and six radial slits.
pub fn disk_cracks() -> Result<ScenarioResult, ScenarioError> {
    run("disk_cracks", &[])
}

/// `alpha + beta sin(x/2 - theta)` on the torus with two slits of length `a`.
pub fn torus_cracks(a: f64, alpha: f64, beta: f64, theta: f64) -> Result<ScenarioResult, ScenarioError> {
    run("torus_cracks", &[("a", a), ("alpha", alpha), ("beta", beta), ("theta", theta)])
}

/// `z - (1 - b)` on the sphere slit along `m` great circles through the pole, to depth `a`.
pub fn sphere_cracks(m: usize, a: f64, b: f64) -> Result<ScenarioResult, ScenarioError> {
    run("sphere_cracks", &[("m", m as f64), ("a", a), ("b", b)])
}
