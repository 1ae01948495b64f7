//! End-to-end acceptance checks. Runs without the libtest harness so every
//! criterion prints exactly one status line; exits non-zero if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use nodal_core::chebyshev::{build_q, is_q_factorization, verify_q_factorization};
use nodal_core::plot::{render, Size};
use nodal_core::scenarios::{self, courant_audit, run_config, run_setup, setup};
use nodal_core::spectra::{bessel_j0_prime_zero, kappa, parallelepiped_table, table3_coefficients, Part, Trig};
use nodal_core::triangle::{self, TrianglePoint};
use nodal_core::{BoundaryCondition, DomainSpec, EigenMode, ModeIndex, ScenarioConfig};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use BoundaryCondition::{Dirichlet, Neumann};

type Outcome = Result<String, String>;

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn c1_chebyshev() -> Outcome {
    let exact = verify_q_factorization();
    let mutated = is_q_factorization(&build_q().perturbed((1, 1), 1));
    check(exact && !mutated, format!("factorization {exact}, mutant accepted {mutated}"))
}

fn c2_product_identity() -> Outcome {
    let dev = triangle::verify_lemma_identity(1000);
    check(dev < 1e-9, format!("max deviation {dev:.2e} over 1000 points"))
}

fn c3_cube_dirichlet() -> Outcome {
    let r = scenarios::hypercube_dirichlet(3, 2.5).map_err(err)?;
    let ladder_ok = r.resolutions.first() == Some(&vec![64; 3]) && r.resolutions.last() == Some(&vec![128; 3]);
    check(
        r.beta0 == 9 && r.kappa == 8 && r.ecp_violated && r.stable && ladder_ok,
        format!("beta0 {} kappa {} counts {:?} at {:?}", r.beta0, r.kappa, r.counts, r.resolutions),
    )
}

fn c4_hypercube_neumann() -> Outcome {
    let r = scenarios::hypercube_neumann(4, 3.5).map_err(err)?;
    let ladder_ok = r.resolutions.first() == Some(&vec![40; 4]) && r.resolutions.last() == Some(&vec![56; 4]);
    check(
        r.beta0 == 17 && r.kappa == 16 && r.ecp_violated && r.stable && ladder_ok,
        format!("beta0 {} kappa {} counts {:?} at {:?}", r.beta0, r.kappa, r.counts, r.resolutions),
    )
}

// Printed table: triple and value.
const TABLE: [([u32; 3], f64); 12] = [
    ([1, 1, 1], 3.016),
    ([2, 1, 1], 6.016),
    ([1, 2, 1], 6.037),
    ([1, 1, 2], 6.042),
    ([2, 2, 1], 9.037),
    ([2, 1, 2], 9.042),
    ([1, 2, 2], 9.063),
    ([3, 1, 1], 11.016),
    ([1, 3, 1], 11.072),
    ([1, 1, 3], 11.085),
    ([2, 2, 2], 12.063),
    ([3, 2, 1], 14.037),
];

fn c5_table() -> Outcome {
    let rows = parallelepiped_table(table3_coefficients()).map_err(err)?;
    let mut worst: f64 = 0.0;
    let mut triples = true;
    for (row, (triple, value)) in rows.iter().zip(TABLE) {
        worst = worst.max((row.eigenvalue - value).abs());
        triples &= row.triple == triple;
    }
    let simple = rows.windows(2).all(|w| w[1].eigenvalue - w[0].eigenvalue > 1e-3);
    check(
        rows.len() == 12 && worst <= 1e-3 && triples && simple,
        format!("{} rows, max error {worst:.5}, triples match {triples}, simple {simple}", rows.len()),
    )
}

fn c6_triangle_neumann() -> Outcome {
    let mut got = Vec::new();
    for (a, want) in [(0.7, 2), (0.9, 2), (1.0, 3), (1.05, 3), (1.1, 3)] {
        let r = scenarios::triangle_neumann(a).map_err(err)?;
        got.push((a, r.beta0, want));
    }
    let k = kappa(&DomainSpec::triangle(Neumann).map_err(err)?, 16.0 * PI * PI / 9.0).map_err(err)?;
    let ok = got.iter().all(|&(_, b, w)| b == w) && k == 2;
    let counts: Vec<String> = got.iter().map(|(a, b, _)| format!("a={a}:{b}")).collect();
    check(ok, format!("{} kappa {k}", counts.join(" ")))
}

fn c7_triangle_dirichlet() -> Outcome {
    let r = scenarios::triangle_dirichlet(1.05).map_err(err)?;
    check(
        r.beta0 == 3 && r.kappa == 2 && r.ecp_violated,
        format!("beta0 {} kappa {}", r.beta0, r.kappa),
    )
}

fn c8_rectangle() -> Outcome {
    let alpha = -(0.25f64).cos();
    let short = scenarios::rectangle_crack(Neumann, 0.5, alpha, 1.0).map_err(err)?;
    let long = scenarios::rectangle_crack(Neumann, 2.0, alpha, 1.0).map_err(err)?;
    let mut multi = Vec::new();
    for d in 2..=6 {
        let cfg = ScenarioConfig::new("rectangle_multi_crack").param("d", d as f64);
        multi.push(run_config(&cfg).map_err(err)?.beta0);
    }
    check(
        short.beta0 == 2 && long.beta0 == 3 && long.kappa == 2 && multi == vec![2, 3, 4, 5, 6],
        format!("panels {} and {}, four cracks give {multi:?}", short.beta0, long.beta0),
    )
}

fn c9_disk() -> Outcome {
    let lambda = bessel_j0_prime_zero(2).map_err(err)?.powi(2);
    let k = kappa(&DomainSpec::disk(), lambda).map_err(err)?;
    let r = scenarios::disk_cracks().map_err(err)?;
    check(
        (lambda - 14.68).abs() < 0.005 && k == 6 && r.beta0 == 7 && r.kappa == 6,
        format!("lambda {lambda:.4} kappa {k}, six cracks beta0 {}", r.beta0),
    )
}

fn c10_torus() -> Outcome {
    let r = scenarios::torus_cracks(2.0 * PI + 2.0, 0.0, 1.0, 0.0).map_err(err)?;
    check(
        r.beta0 == 3 && r.kappa == 2 && r.ecp_violated,
        format!("beta0 {} kappa {}", r.beta0, r.kappa),
    )
}

fn c11_sphere() -> Outcome {
    let cross = scenarios::sphere_cracks(2, 0.5, 0.3).map_err(err)?;
    let mut counts = Vec::new();
    for m in 1..=4 {
        counts.push(scenarios::sphere_cracks(m, 0.5, 0.3).map_err(err)?.beta0);
    }
    check(
        cross.beta0 == 5 && cross.kappa == 4 && counts == vec![3, 5, 7, 9],
        format!("cross beta0 {} kappa {}, m=1..4 give {counts:?}", cross.beta0, cross.kappa),
    )
}

fn c12_audit() -> Outcome {
    let domains = [
        DomainSpec::rectangle(Dirichlet),
        DomainSpec::rectangle(Neumann),
        Ok(DomainSpec::torus()),
        DomainSpec::triangle(Dirichlet),
        DomainSpec::triangle(Neumann),
        DomainSpec::hypercube(3, Dirichlet),
        DomainSpec::hypercube(3, Neumann),
    ];
    let (mut rows, mut bad) = (0, Vec::new());
    for d in domains {
        let d = d.map_err(err)?;
        for row in courant_audit(&d, 10, 64).map_err(err)? {
            rows += 1;
            if !(row.ok && row.stable) {
                bad.push(format!("{:?} {} beta0 {} kappa {}", d.domain, row.mode, row.beta0, row.kappa));
            }
        }
    }
    check(bad.is_empty(), format!("{rows} modes audited, failures {bad:?}"))
}

// Fourth-order central second derivative along `axis`.
fn second_derivative<F: Fn(&[f64]) -> f64>(f: &F, p: &[f64], axis: usize, h: f64) -> f64 {
    let at = |s: f64| {
        let mut q = p.to_vec();
        q[axis] += s * h;
        f(&q)
    };
    (-at(2.0) + 16.0 * at(1.0) - 30.0 * at(0.0) + 16.0 * at(-1.0) - at(-2.0)) / (12.0 * h * h)
}

// Max of `|lap f + lambda f|` over the sample, relative to `lambda max|f|`.
fn pde_residual<F: Fn(&[f64]) -> f64>(f: F, lambda: f64, points: &[Vec<f64>], h: f64) -> f64 {
    let (mut res, mut scale) = (0.0f64, 0.0f64);
    for p in points {
        let lap: f64 = (0..p.len()).map(|i| second_derivative(&f, p, i, h)).sum();
        res = res.max((lap + lambda * f(p)).abs());
        scale = scale.max(lambda * f(p).abs());
    }
    res / scale
}

fn c13_pde() -> Outcome {
    let mut rng = StdRng::seed_from_u64(13);
    let tri_points: Vec<Vec<f64>> = (0..50)
        .map(|_| {
            let p = triangle::random_interior_point(&mut rng);
            vec![p.x, p.y]
        })
        .collect();
    let lam = |m, n| triangle::eigenvalue_of(triangle::LatticePoint::new(m, n));
    let tri: [(&str, fn(TrianglePoint) -> f64, f64); 5] = [
        ("phi_n2", triangle::phi_n2, lam(1, 0)),
        ("phi_n3", triangle::phi_n3, lam(1, 0)),
        ("phi_d1", triangle::phi_d1, lam(1, 1)),
        ("phi_d2", triangle::phi_d2, lam(2, 1)),
        ("phi_d3", triangle::phi_d3, lam(2, 1)),
    ];
    let mut worst = (0.0f64, String::new());
    let mut note = |r: f64, name: String| {
        if r > worst.0 || worst.1.is_empty() {
            worst = (r, name);
        }
    };
    for (name, f, lambda) in tri {
        let r = pde_residual(|p: &[f64]| f(TrianglePoint::unchecked(p[0], p[1])), lambda, &tri_points, 1e-3);
        note(r, name.to_string());
    }
    // Weyl-sum modes of both parities as well
    for (m, n, bc) in [(2, 0, Neumann), (3, 1, Dirichlet), (3, 1, Neumann)] {
        for part in [Part::Re, Part::Im] {
            let mode = EigenMode::new(&DomainSpec::triangle(bc).map_err(err)?, ModeIndex::Triangle { m, n, part })
                .map_err(err)?;
            let r = pde_residual(|p: &[f64]| mode.eval_unchecked(p), mode.eigenvalue, &tri_points, 1e-3);
            note(r, mode.index.to_string());
        }
    }
    for i in 0..20 {
        let (domain, index) = match i % 4 {
            0 => (
                DomainSpec::hypercube(3, Dirichlet).map_err(err)?,
                ModeIndex::Box { k: (0..3).map(|_| rng.gen_range(1..5)).collect() },
            ),
            1 => (
                DomainSpec::hypercube(2, Neumann).map_err(err)?,
                ModeIndex::Box { k: (0..2).map(|_| rng.gen_range(0..5)).collect() },
            ),
            2 => (
                DomainSpec::rectangle(Dirichlet).map_err(err)?,
                ModeIndex::Rect { m: rng.gen_range(1..6), n: rng.gen_range(1..4) },
            ),
            _ => {
                let trig = |c: bool| if c { Trig::Cos } else { Trig::Sin };
                (
                    DomainSpec::torus(),
                    ModeIndex::Torus {
                        m: rng.gen_range(1..6),
                        n: rng.gen_range(1..4),
                        kx: trig(rng.gen()),
                        ky: trig(rng.gen()),
                    },
                )
            }
        };
        let mode = EigenMode::new(&domain, index).map_err(err)?;
        let pts: Vec<Vec<f64>> = (0..20)
            .map(|_| (0..domain.dimension()).map(|_| rng.gen_range(0.3..2.8)).collect())
            .collect();
        let r = pde_residual(|p: &[f64]| mode.eval_unchecked(p), mode.eigenvalue, &pts, 1e-3);
        note(r, mode.index.to_string());
    }
    check(worst.0 < 1e-5, format!("worst relative residual {:.2e} ({})", worst.0, worst.1))
}

fn c14_determinism() -> Outcome {
    let text = r#"{"name":"rectangle_crack","params":{"a":2.0,"alpha":-0.9689124217106447,"beta":1.0}}"#;
    let once = || -> Result<(String, String), String> {
        let cfg: ScenarioConfig = serde_json::from_str(text).map_err(err)?;
        let r = run_setup(&setup(&cfg).map_err(err)?, true).map_err(err)?;
        let art = r.artifacts.clone().ok_or("no artifacts")?;
        let svg = render(&art.chart, &art.cracks, &art.nodal_lines, None, Size::default()).map_err(err)?;
        Ok((serde_json::to_string_pretty(&r).map_err(err)?, svg))
    };
    let (j1, s1) = once()?;
    let (j2, s2) = once()?;
    check(
        j1 == j2 && s1 == s2,
        format!("json {} bytes, svg {} bytes, identical {}", j1.len(), s1.len(), j1 == j2 && s1 == s2),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 14] = [
        ("chebyshev factorization", c1_chebyshev),
        ("product identity on the triangle", c2_product_identity),
        ("3-cube Dirichlet", c3_cube_dirichlet),
        ("4-cube Neumann", c4_hypercube_neumann),
        ("parallelepiped table", c5_table),
        ("triangle Neumann", c6_triangle_neumann),
        ("triangle Dirichlet", c7_triangle_dirichlet),
        ("rectangle cracks", c8_rectangle),
        ("disk", c9_disk),
        ("torus", c10_torus),
        ("sphere", c11_sphere),
        ("Courant audit", c12_audit),
        ("eigenfunction PDE", c13_pde),
        ("determinism", c14_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = f();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("criterion {:>2}: PASS  {name}: {d} [{secs:.1}s]", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name}: {d} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
