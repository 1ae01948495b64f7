//! Eigenfunctions of the equilateral triangle `T_e = [O, A, B]` with
//! `O = (0,0)`, `A = (1,0)`, `B = (1/2, sqrt(3)/2)`, obtained by folding
//! exponentials on the equilateral torus with the Weyl group of `A_2`.
//!
//! Lattice points `p = m w1 + n w2` of the dual lattice are written `(m, n)`,
//! with `w1 = (2/3, 0)` and `w2 = (1/3, 1/sqrt(3))`. In the oblique chart
//! `x = s a1 + t a2` (coroots `a1 = (3/2, -sqrt(3)/2)`, `a2 = (0, sqrt(3))`)
//! the pairing reduces to `<x, p> = m s + n t`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand::rngs::StdRng;
use serde::{Deserialize, Serialize};

use crate::error::SpectraError;
use crate::spectra::BoundaryCondition;

pub const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Vertices of `T_e`.
pub const VERTEX_O: [f64; 2] = [0.0, 0.0];
pub const VERTEX_A: [f64; 2] = [1.0, 0.0];
pub const VERTEX_B: [f64; 2] = [0.5, SQRT3 / 2.0];

/// Point `m w1 + n w2` of the dual lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePoint {
    pub m: i64,
    pub n: i64,
}

impl LatticePoint {
    pub const fn new(m: i64, n: i64) -> Self {
        Self { m, n }
    }

    /// `m^2 + mn + n^2`, proportional to the squared Euclidean norm.
    pub fn quadratic_form(self) -> i64 {
        self.m * self.m + self.m * self.n + self.n * self.n
    }

    pub fn cartesian(self) -> [f64; 2] {
        let (m, n) = (self.m as f64, self.n as f64);
        [2.0 * m / 3.0 + n / 3.0, n / SQRT3]
    }

    pub fn norm_squared(self) -> f64 {
        4.0 * self.quadratic_form() as f64 / 9.0
    }
}

/// Element of the Weyl group of `A_2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WeylElement {
    Identity,
    S1,
    S2,
    S3,
    /// `s1 ∘ s2`, rotation by `2π/3`.
    S1S2,
    /// `s2 ∘ s1`, rotation by `-2π/3`.
    S2S1,
}

impl WeylElement {
    pub const ALL: [WeylElement; 6] = [
        WeylElement::Identity,
        WeylElement::S1,
        WeylElement::S2,
        WeylElement::S3,
        WeylElement::S1S2,
        WeylElement::S2S1,
    ];

    pub fn det(self) -> i64 {
        match self {
            WeylElement::Identity | WeylElement::S1S2 | WeylElement::S2S1 => 1,
            WeylElement::S1 | WeylElement::S2 | WeylElement::S3 => -1,
        }
    }

    /// Action on `(m, n)` coordinates of the dual lattice.
    pub fn act(self, p: LatticePoint) -> LatticePoint {
        let LatticePoint { m, n } = p;
        match self {
            WeylElement::Identity => LatticePoint::new(m, n),
            WeylElement::S1 => LatticePoint::new(-m, m + n),
            WeylElement::S2 => LatticePoint::new(m + n, -n),
            WeylElement::S3 => LatticePoint::new(-n, -m),
            WeylElement::S1S2 => LatticePoint::new(-m - n, m),
            WeylElement::S2S1 => LatticePoint::new(n, -m - n),
        }
    }

    /// Group element acting as `self ∘ other`, found by matching the action on
    /// the basis; `None` if the table were not closed under composition.
    pub fn compose(self, other: WeylElement) -> Option<WeylElement> {
        let probe = |w: WeylElement| (w.act(LatticePoint::new(1, 0)), w.act(LatticePoint::new(0, 1)));
        let target = (
            self.act(other.act(LatticePoint::new(1, 0))),
            self.act(other.act(LatticePoint::new(0, 1))),
        );
        WeylElement::ALL.into_iter().find(|&w| probe(w) == target)
    }
}

pub fn weyl_act(w: WeylElement, p: LatticePoint) -> LatticePoint {
    w.act(p)
}

/// Point of the closed triangle `T_e` in Cartesian coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrianglePoint {
    pub x: f64,
    pub y: f64,
}

impl TrianglePoint {
    /// Tolerance used when deciding whether a point lies in the closed triangle.
    pub const EPS: f64 = 1e-12;

    pub fn new(x: f64, y: f64) -> Result<Self, SpectraError> {
        if contains(x, y) {
            Ok(Self { x, y })
        } else {
            Err(SpectraError::OutsideChart(vec![x, y]))
        }
    }

    /// No containment check; formulas are defined on the whole plane.
    pub fn unchecked(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Oblique chart `(s, t) = (2x/3, x/3 + y/sqrt(3))`.
    pub fn chart(self) -> (f64, f64) {
        (2.0 * self.x / 3.0, self.x / 3.0 + self.y / SQRT3)
    }

    pub fn from_chart(s: f64, t: f64) -> Self {
        Self {
            x: 1.5 * s,
            y: SQRT3 * (t - 0.5 * s),
        }
    }

    pub fn centroid() -> Self {
        Self { x: 0.5, y: SQRT3 / 6.0 }
    }
}

/// Closed-triangle membership with tolerance [`TrianglePoint::EPS`].
pub fn contains(x: f64, y: f64) -> bool {
    let e = TrianglePoint::EPS;
    y >= -e && y <= SQRT3 * x + e && y <= SQRT3 * (1.0 - x) + e
}

/// Midpoint of `AB`, the far end of the median through `O`.
pub fn median_foot() -> [f64; 2] {
    [
        0.5 * (VERTEX_A[0] + VERTEX_B[0]),
        0.5 * (VERTEX_A[1] + VERTEX_B[1]),
    ]
}

/// Mirror image across the median `OM`, built from the vertex coordinates.
pub fn reflect_median(p: TrianglePoint) -> TrianglePoint {
    let m = median_foot();
    let len = (m[0] * m[0] + m[1] * m[1]).sqrt();
    let d = [m[0] / len, m[1] / len];
    let dot = p.x * d[0] + p.y * d[1];
    TrianglePoint {
        x: 2.0 * dot * d[0] - p.x,
        y: 2.0 * dot * d[1] - p.y,
    }
}

/// `(16 pi^2 / 9) (m^2 + mn + n^2)`.
pub fn eigenvalue_of(p: LatticePoint) -> f64 {
    16.0 * PI * PI / 9.0 * p.quadratic_form() as f64
}

fn admissible(p: LatticePoint, bc: BoundaryCondition) -> Result<(), SpectraError> {
    let ok = match bc {
        BoundaryCondition::Dirichlet => p.m >= 1 && p.n >= 1,
        BoundaryCondition::Neumann => p.m >= 0 && p.n >= 0,
        BoundaryCondition::Closed => false,
    };
    if ok {
        Ok(())
    } else {
        Err(SpectraError::InadmissibleMode(format!(
            "({}, {}) with {bc:?} boundary condition",
            p.m, p.n
        )))
    }
}

/// Number of chamber points `q` with `|q| = |p|` (open chamber for Dirichlet,
/// closed chamber for Neumann), by exhaustive search.
pub fn multiplicity(p: LatticePoint, bc: BoundaryCondition) -> Result<usize, SpectraError> {
    admissible(p, bc)?;
    let target = p.quadratic_form();
    let bound = 4 * (p.m.abs() + p.n.abs()).max(1);
    let lo = if bc == BoundaryCondition::Dirichlet { 1 } else { 0 };
    let mut count = 0;
    for m in lo..=bound {
        for n in lo..=bound {
            if LatticePoint::new(m, n).quadratic_form() == target {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Complex value `re + i im`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

/// `sum over W of det(w)^e exp(2 i pi <x, w(p)>)`, with `e = 1` for Dirichlet
/// and `e = 0` for Neumann.
pub fn phi_complex(p: LatticePoint, bc: BoundaryCondition, pt: TrianglePoint) -> Result<Complex, SpectraError> {
    admissible(p, bc)?;
    Ok(weyl_sum(p, bc, pt))
}

fn weyl_sum(p: LatticePoint, bc: BoundaryCondition, pt: TrianglePoint) -> Complex {
    let mut out = Complex { re: 0.0, im: 0.0 };
    for w in WeylElement::ALL {
        let q = w.act(p).cartesian();
        let phase = 2.0 * PI * (pt.x * q[0] + pt.y * q[1]);
        let sign = match bc {
            BoundaryCondition::Dirichlet => w.det() as f64,
            _ => 1.0,
        };
        out.re += sign * phase.cos();
        out.im += sign * phase.sin();
    }
    out
}

/// Real part of the Weyl sum, `C_{m,n}`.
pub fn c_mn(p: LatticePoint, bc: BoundaryCondition, pt: TrianglePoint) -> Result<f64, SpectraError> {
    phi_complex(p, bc, pt).map(|z| z.re)
}

/// Imaginary part of the Weyl sum, `S_{m,n}`.
pub fn s_mn(p: LatticePoint, bc: BoundaryCondition, pt: TrianglePoint) -> Result<f64, SpectraError> {
    phi_complex(p, bc, pt).map(|z| z.im)
}

/// Second Neumann eigenfunction, symmetric about the median `OM`.
pub fn phi_n2(pt: TrianglePoint) -> f64 {
    let (x, y) = (pt.x, pt.y);
    let k = 2.0 * PI / 3.0;
    (2.0 * k * x).cos() + (k * (-x + SQRT3 * y)).cos() + (k * (x + SQRT3 * y)).cos()
}

/// `phi_n2` in the factored form `2 cos(2 pi x/3) (cos(2 pi x/3) + cos(2 pi y/sqrt 3)) - 1`.
pub fn phi_n2_compact(pt: TrianglePoint) -> f64 {
    let cx = (2.0 * PI * pt.x / 3.0).cos();
    let cy = (2.0 * PI * pt.y / SQRT3).cos();
    2.0 * cx * (cx + cy) - 1.0
}

/// Third Neumann eigenfunction, anti-symmetric about the median; vanishes on it.
pub fn phi_n3(pt: TrianglePoint) -> f64 {
    let (x, y) = (pt.x, pt.y);
    let k = 2.0 * PI / 3.0;
    (2.0 * k * x).sin() + (k * (-x + SQRT3 * y)).sin() - (k * (x + SQRT3 * y)).sin()
}

/// Dirichlet ground state as a sum of three sines.
pub fn phi_d1(pt: TrianglePoint) -> f64 {
    let (x, y) = (pt.x, pt.y);
    2.0 * (2.0 * PI * (x + y / SQRT3)).sin()
        - 2.0 * (4.0 * PI * y / SQRT3).sin()
        - 2.0 * (2.0 * PI * (x - y / SQRT3)).sin()
}

/// Dirichlet ground state as a product; its sign is constant inside `T_e`.
pub fn phi_d1_product(pt: TrianglePoint) -> f64 {
    let (x, y) = (pt.x, pt.y);
    -8.0 * (2.0 * PI * y / SQRT3).sin() * (PI * (x + y / SQRT3)).sin() * (PI * (x - y / SQRT3)).sin()
}

/// Second Dirichlet eigenfunction, symmetric about the median.
pub fn phi_d2(pt: TrianglePoint) -> f64 {
    let (x, y) = (pt.x, pt.y);
    let k = 2.0 * PI / 3.0;
    (k * (5.0 * x + SQRT3 * y)).sin() - (k * (5.0 * x - SQRT3 * y)).sin()
        + (k * (x - 3.0 * SQRT3 * y)).sin()
        - (k * (x + 3.0 * SQRT3 * y)).sin()
        + (2.0 * k * (2.0 * x + SQRT3 * y)).sin()
        - (2.0 * k * (2.0 * x - SQRT3 * y)).sin()
}

/// Third Dirichlet eigenfunction, anti-symmetric about the median.
pub fn phi_d3(pt: TrianglePoint) -> f64 {
    let (x, y) = (pt.x, pt.y);
    let k = 2.0 * PI / 3.0;
    // cosine is even, so the signs differ from the sine pattern of phi_d2
    (k * (5.0 * x + SQRT3 * y)).cos() - (k * (5.0 * x - SQRT3 * y)).cos()
        - (k * (x - 3.0 * SQRT3 * y)).cos()
        + (k * (x + 3.0 * SQRT3 * y)).cos()
        - (2.0 * k * (2.0 * x + SQRT3 * y)).cos()
        + (2.0 * k * (2.0 * x - SQRT3 * y)).cos()
}

/// Uniform sample from the interior of `T_e` (reflected parallelogram trick).
pub fn random_interior_point<R: Rng>(rng: &mut R) -> TrianglePoint {
    loop {
        let (mut u, mut v): (f64, f64) = (rng.gen(), rng.gen());
        if u + v > 1.0 {
            u = 1.0 - u;
            v = 1.0 - v;
        }
        let x = u * VERTEX_A[0] + v * VERTEX_B[0];
        let y = u * VERTEX_A[1] + v * VERTEX_B[1];
        // strictly interior
        if y > 1e-9 && y < SQRT3 * x - 1e-9 && y < SQRT3 * (1.0 - x) - 1e-9 {
            return TrianglePoint { x, y };
        }
    }
}

/// Max of `|phi_d2 - phi_d1 * neumann|` over `sample_count` interior points.
pub fn lemma_deviation<F: Fn(TrianglePoint) -> f64>(sample_count: usize, seed: u64, neumann: F) -> f64 {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..sample_count.max(1))
        .map(|_| {
            let pt = random_interior_point(&mut rng);
            (phi_d2(pt) - phi_d1(pt) * neumann(pt)).abs()
        })
        .fold(0.0, f64::max)
}

/// Max deviation of the product identity `phi_d2 = phi_d1 * phi_n2`.
pub fn verify_lemma_identity(sample_count: usize) -> f64 {
    lemma_deviation(sample_count, 0x7e1a, phi_n2)
}
