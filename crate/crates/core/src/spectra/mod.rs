//! Spectra of the separable model domains: enumeration with multiplicities,
//! the minimal index `kappa(lambda)`, and pointwise evaluation of the
//! closed-form eigenfunctions.
//!
//! Every enumeration is an exhaustive search over mode indices. Eigenvalues
//! that are rational multiples of a fixed constant are grouped exactly on an
//! integer key; the remaining ones (parallelepiped, disk) are merged with an
//! absolute tolerance of [`MERGE_TOL`].

pub mod bessel;

use std::f64::consts::PI;
use std::fmt;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::SpectraError;
use crate::triangle::{self, LatticePoint, TrianglePoint};

pub use bessel::{bessel_j0, bessel_j0_prime_zero, bessel_jm_prime_zero, bessel_jn};

/// Tolerance for merging floating eigenvalues and for matching a requested
/// eigenvalue in [`kappa`].
pub const MERGE_TOL: f64 = 1e-9;

/// Upper limit for disk enumeration: every mode `J_m(j'_{m,k} r)` with
/// eigenvalue below it has `m <= 8` and `k <= 5` (`j'_{9,1}^2 > 99`).
pub const DISK_LIMIT: f64 = 99.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
    /// No boundary (torus, sphere).
    Closed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Domain {
    /// `]0, pi[^n`.
    Hypercube { n: usize },
    /// Box with eigenvalues `sum a_i k_i^2`, i.e. sides `pi / sqrt(a_i)`.
    Parallelepiped { a: [f64; 3] },
    /// `]0, 4pi[ x ]0, 2pi[`.
    Rectangle,
    /// `R^2 / (4pi Z + 2pi Z)`.
    Torus,
    /// Unit round sphere.
    Sphere,
    /// Unit disk.
    Disk,
    /// Equilateral triangle of side 1.
    Triangle,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub domain: Domain,
    pub bc: BoundaryCondition,
}

impl DomainSpec {
    pub fn new(domain: Domain, bc: BoundaryCondition) -> Result<Self, SpectraError> {
        let closed = matches!(domain, Domain::Torus | Domain::Sphere);
        if closed != (bc == BoundaryCondition::Closed) {
            return Err(SpectraError::InvalidDomain(format!(
                "{domain:?} does not take a {bc:?} boundary condition"
            )));
        }
        match &domain {
            Domain::Hypercube { n } if *n == 0 => {
                return Err(SpectraError::InvalidDomain("hypercube dimension must be >= 1".into()))
            }
            Domain::Parallelepiped { a } if a.iter().any(|&v| !(v > 0.0 && v.is_finite())) => {
                return Err(SpectraError::InvalidDomain(format!(
                    "parallelepiped coefficients must be positive, got {a:?}"
                )))
            }
            _ => {}
        }
        Ok(Self { domain, bc })
    }

    pub fn hypercube(n: usize, bc: BoundaryCondition) -> Result<Self, SpectraError> {
        Self::new(Domain::Hypercube { n }, bc)
    }

    /// Box `]0, b1 pi[ x ]0, b2 pi[ x ]0, b3 pi[`, i.e. `a_i = 1 / b_i^2`.
    pub fn parallelepiped_from_sides(b: [f64; 3], bc: BoundaryCondition) -> Result<Self, SpectraError> {
        if b.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            return Err(SpectraError::InvalidDomain(format!("side factors must be positive, got {b:?}")));
        }
        Self::new(Domain::Parallelepiped { a: b.map(|v| 1.0 / (v * v)) }, bc)
    }

    pub fn rectangle(bc: BoundaryCondition) -> Result<Self, SpectraError> {
        Self::new(Domain::Rectangle, bc)
    }

    pub fn torus() -> Self {
        Self { domain: Domain::Torus, bc: BoundaryCondition::Closed }
    }

    pub fn sphere() -> Self {
        Self { domain: Domain::Sphere, bc: BoundaryCondition::Closed }
    }

    pub fn disk() -> Self {
        Self { domain: Domain::Disk, bc: BoundaryCondition::Neumann }
    }

    pub fn triangle(bc: BoundaryCondition) -> Result<Self, SpectraError> {
        Self::new(Domain::Triangle, bc)
    }

    /// Number of chart coordinates.
    pub fn dimension(&self) -> usize {
        match self.domain {
            Domain::Hypercube { n } => n,
            Domain::Parallelepiped { .. } => 3,
            _ => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Trig {
    Cos,
    Sin,
}

impl Trig {
    fn apply(self, v: f64) -> f64 {
        match self {
            Trig::Cos => v.cos(),
            Trig::Sin => v.sin(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Part {
    Re,
    Im,
}

/// Domain-specific index data of an eigenfunction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum ModeIndex {
    /// `prod trig(k_j sqrt(a_j) x_j)`: sines for Dirichlet, cosines for Neumann.
    Box { k: Vec<u32> },
    /// `trig(m x/4) trig(n y/2)` on the rectangle.
    Rect { m: u32, n: u32 },
    /// `kx(m x/2) ky(n y)` on the torus; the kind is irrelevant when the frequency is 0.
    Torus { m: u32, n: u32, kx: Trig, ky: Trig },
    /// Real spherical harmonic of degree `l`; `m > 0` cosine, `m < 0` sine, `0` zonal.
    Sphere { l: u32, m: i32 },
    /// `J_m(j'_{m,k} r) trig(m theta)` on the unit disk.
    Disk { m: u32, k: u32, kind: Trig },
    /// Real or imaginary part of the Weyl sum at `(m, n)`.
    Triangle { m: i64, n: i64, part: Part },
}

impl fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = |k: &Trig| match k {
            Trig::Cos => "c",
            Trig::Sin => "s",
        };
        match self {
            ModeIndex::Box { k } => {
                let parts: Vec<String> = k.iter().map(u32::to_string).collect();
                write!(f, "({})", parts.join(","))
            }
            ModeIndex::Rect { m, n } => write!(f, "({m},{n})"),
            ModeIndex::Torus { m, n, kx, ky } => write!(f, "({m},{n}):{}{}", t(kx), t(ky)),
            ModeIndex::Sphere { l, m } => write!(f, "({l},{m})"),
            ModeIndex::Disk { m, k, kind } => write!(f, "({m},{k}):{}", t(kind)),
            ModeIndex::Triangle { m, n, part } => {
                let p = match part {
                    Part::Re => "re",
                    Part::Im => "im",
                };
                write!(f, "({m},{n}):{p}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenMode {
    pub domain: DomainSpec,
    pub index: ModeIndex,
    pub eigenvalue: f64,
    /// Integer key proportional to the eigenvalue when it is exactly known.
    #[serde(skip)]
    exact_key: Option<u64>,
    /// Cached `j'_{m,k}` for disk modes.
    #[serde(skip)]
    radial_root: f64,
}

impl EigenMode {
    /// Build a mode, checking admissibility and computing its eigenvalue.
    pub fn new(domain: &DomainSpec, index: ModeIndex) -> Result<Self, SpectraError> {
        use BoundaryCondition::*;
        let bad = || SpectraError::InadmissibleMode(format!("{index} on {:?}/{:?}", domain.domain, domain.bc));
        let lo = |bc: BoundaryCondition| if bc == Dirichlet { 1 } else { 0 };
        let mut radial_root = 0.0;
        let (eigenvalue, exact_key) = match (&domain.domain, &index) {
            (Domain::Hypercube { n }, ModeIndex::Box { k }) => {
                if k.len() != *n || k.iter().any(|&v| v < lo(domain.bc)) {
                    return Err(bad());
                }
                let s: u64 = k.iter().map(|&v| (v as u64).pow(2)).sum();
                (s as f64, Some(s))
            }
            (Domain::Parallelepiped { a }, ModeIndex::Box { k }) => {
                if k.len() != 3 || k.iter().any(|&v| v < lo(domain.bc)) {
                    return Err(bad());
                }
                let v = a.iter().zip(k).map(|(ai, &ki)| ai * (ki as f64).powi(2)).sum();
                (v, None)
            }
            (Domain::Rectangle, &ModeIndex::Rect { m, n }) => {
                if m < lo(domain.bc) || n < lo(domain.bc) {
                    return Err(bad());
                }
                let key = (m as u64).pow(2) + 4 * (n as u64).pow(2);
                (key as f64 / 16.0, Some(key))
            }
            (Domain::Torus, &ModeIndex::Torus { m, n, kx, ky }) => {
                // zero frequency has only the constant (cosine) representative
                if (m == 0 && kx == Trig::Sin) || (n == 0 && ky == Trig::Sin) {
                    return Err(bad());
                }
                let key = (m as u64).pow(2) + 4 * (n as u64).pow(2);
                (key as f64 / 4.0, Some(key))
            }
            (Domain::Sphere, &ModeIndex::Sphere { l, m }) => {
                if m.unsigned_abs() > l {
                    return Err(bad());
                }
                let key = l as u64 * (l as u64 + 1);
                (key as f64, Some(key))
            }
            (Domain::Disk, &ModeIndex::Disk { m, k, kind }) => {
                if domain.bc != Neumann || (m == 0 && kind == Trig::Sin) {
                    return Err(bad());
                }
                radial_root = bessel::bessel_jm_prime_zero(m as usize, k as usize)?;
                (radial_root * radial_root, None)
            }
            (Domain::Triangle, &ModeIndex::Triangle { m, n, part }) => {
                let p = LatticePoint::new(m, n);
                let ok = match domain.bc {
                    Dirichlet => m >= 1 && n >= 1 && m >= n && !(m == n && part == Part::Re),
                    Neumann => m >= 0 && n >= 0 && m >= n && !(m == n && part == Part::Im),
                    Closed => false,
                };
                if !ok {
                    return Err(bad());
                }
                (triangle::eigenvalue_of(p), Some(p.quadratic_form() as u64))
            }
            _ => return Err(bad()),
        };
        Ok(Self {
            domain: domain.clone(),
            index,
            eigenvalue,
            exact_key,
            radial_root,
        })
    }

    /// Closed-form value at a point of the domain chart.
    ///
    /// Charts: boxes and the rectangle/torus use Cartesian coordinates; the
    /// sphere takes `(colatitude, longitude)`; the disk takes `(r, theta)`;
    /// the triangle takes Cartesian `(x, y)` in the closed triangle.
    pub fn eval(&self, point: &[f64]) -> Result<f64, SpectraError> {
        self.check_chart(point)?;
        Ok(self.eval_unchecked(point))
    }

    /// Evaluate without the chart check (formulas are entire functions).
    pub fn eval_unchecked(&self, p: &[f64]) -> f64 {
        let dirichlet = self.domain.bc == BoundaryCondition::Dirichlet;
        let trig = if dirichlet { Trig::Sin } else { Trig::Cos };
        match (&self.domain.domain, &self.index) {
            (Domain::Hypercube { .. }, ModeIndex::Box { k }) => {
                k.iter().zip(p).map(|(&kj, &x)| trig.apply(kj as f64 * x)).product()
            }
            (Domain::Parallelepiped { a }, ModeIndex::Box { k }) => k
                .iter()
                .zip(p)
                .zip(a)
                .map(|((&kj, &x), aj)| trig.apply(kj as f64 * aj.sqrt() * x))
                .product(),
            (Domain::Rectangle, &ModeIndex::Rect { m, n }) => {
                trig.apply(m as f64 * p[0] / 4.0) * trig.apply(n as f64 * p[1] / 2.0)
            }
            (Domain::Torus, &ModeIndex::Torus { m, n, kx, ky }) => {
                kx.apply(m as f64 * p[0] / 2.0) * ky.apply(n as f64 * p[1])
            }
            (Domain::Sphere, &ModeIndex::Sphere { l, m }) => {
                let (theta, phi) = (p[0], p[1]);
                let am = m.unsigned_abs();
                let leg = assoc_legendre(l, am, theta.cos(), theta.sin());
                match m.signum() {
                    1 => leg * (am as f64 * phi).cos(),
                    -1 => leg * (am as f64 * phi).sin(),
                    _ => leg,
                }
            }
            (Domain::Disk, &ModeIndex::Disk { m, kind, .. }) => {
                bessel::bessel_jn(m as usize, self.radial_root * p[0]) * kind.apply(m as f64 * p[1])
            }
            (Domain::Triangle, &ModeIndex::Triangle { m, n, part }) => {
                let z = triangle::phi_complex(
                    LatticePoint::new(m, n),
                    self.domain.bc,
                    TrianglePoint::unchecked(p[0], p[1]),
                )
                .expect("admissibility checked at construction");
                match part {
                    Part::Re => z.re,
                    Part::Im => z.im,
                }
            }
            _ => unreachable!("mode index matches its domain by construction"),
        }
    }

    fn check_chart(&self, p: &[f64]) -> Result<(), SpectraError> {
        let eps = 1e-12;
        let within = |v: f64, lo: f64, hi: f64| v >= lo - eps && v <= hi + eps;
        let out = || SpectraError::OutsideChart(p.to_vec());
        if p.len() != self.domain.dimension() || p.iter().any(|v| !v.is_finite()) {
            return Err(out());
        }
        let ok = match &self.domain.domain {
            Domain::Hypercube { .. } => p.iter().all(|&x| within(x, 0.0, PI)),
            Domain::Parallelepiped { a } => p.iter().zip(a).all(|(&x, aj)| within(x, 0.0, PI / aj.sqrt())),
            Domain::Rectangle | Domain::Torus => within(p[0], 0.0, 4.0 * PI) && within(p[1], 0.0, 2.0 * PI),
            Domain::Sphere => within(p[0], 0.0, PI) && within(p[1], 0.0, 2.0 * PI),
            Domain::Disk => within(p[0], 0.0, 1.0) && within(p[1], 0.0, 2.0 * PI),
            Domain::Triangle => triangle::contains(p[0], p[1]),
        };
        if ok {
            Ok(())
        } else {
            Err(out())
        }
    }
}

pub fn eval_mode(mode: &EigenMode, point: &[f64]) -> Result<f64, SpectraError> {
    mode.eval(point)
}

// Unnormalised associated Legendre function without the Condon-Shortley
// phase, so that degree one gives exactly x, y, z.
fn assoc_legendre(l: u32, m: u32, x: f64, s: f64) -> f64 {
    let mut pmm = 1.0;
    for i in 1..=m {
        pmm *= (2 * i - 1) as f64 * s;
    }
    if l == m {
        return pmm;
    }
    let mut pm1 = x * (2 * m + 1) as f64 * pmm;
    if l == m + 1 {
        return pm1;
    }
    let mut pm0 = pmm;
    for ll in (m + 2)..=l {
        let next = ((2 * ll - 1) as f64 * x * pm1 - (ll + m - 1) as f64 * pm0) / (ll - m) as f64;
        pm0 = pm1;
        pm1 = next;
    }
    pm1
}

/// One distinct eigenvalue with all its modes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumEntry {
    pub eigenvalue: f64,
    pub multiplicity: usize,
    pub modes: Vec<EigenMode>,
    /// Minimal index `k` with `lambda_k` equal to this eigenvalue.
    pub kappa: usize,
}

/// All distinct eigenvalues `<= limit`, sorted, with full mode lists.
pub fn enumerate_spectrum(domain: &DomainSpec, limit: f64) -> Result<Vec<SpectrumEntry>, SpectraError> {
    if !(limit >= 0.0) {
        return Err(SpectraError::NegativeLimit(limit));
    }
    let mut modes = enumerate_modes(domain, limit)?;
    modes.sort_by(|a, b| match (a.exact_key, b.exact_key) {
        (Some(x), Some(y)) => x.cmp(&y),
        _ => a.eigenvalue.total_cmp(&b.eigenvalue),
    });
    let mut entries: Vec<SpectrumEntry> = Vec::new();
    let mut next_kappa = 1;
    for mode in modes {
        let same = entries.last().is_some_and(|e| {
            let head = &e.modes[0];
            match (head.exact_key, mode.exact_key) {
                (Some(x), Some(y)) => x == y,
                _ => (head.eigenvalue - mode.eigenvalue).abs() <= MERGE_TOL,
            }
        });
        if same {
            let e = entries.last_mut().expect("checked above");
            e.multiplicity += 1;
            e.modes.push(mode);
        } else {
            entries.push(SpectrumEntry {
                eigenvalue: mode.eigenvalue,
                multiplicity: 1,
                modes: vec![mode],
                kappa: next_kappa,
            });
        }
        next_kappa += 1;
    }
    Ok(entries)
}

fn enumerate_modes(domain: &DomainSpec, limit: f64) -> Result<Vec<EigenMode>, SpectraError> {
    use BoundaryCondition::*;
    let mut out = Vec::new();
    let mut push = |index: ModeIndex| -> Result<(), SpectraError> {
        let mode = EigenMode::new(domain, index)?;
        if mode.eigenvalue <= limit + MERGE_TOL {
            out.push(mode);
        }
        Ok(())
    };
    let lo = if domain.bc == Dirichlet { 1u32 } else { 0 };
    match &domain.domain {
        Domain::Hypercube { n } => {
            let kmax = limit.sqrt().floor() as u32;
            for k in box_indices(*n, lo, kmax, &|k: &[u32]| {
                k.iter().map(|&v| (v as f64).powi(2)).sum::<f64>() <= limit + MERGE_TOL
            }) {
                push(ModeIndex::Box { k })?;
            }
        }
        Domain::Parallelepiped { a } => {
            let amin = a.iter().cloned().fold(f64::INFINITY, f64::min);
            let kmax = (limit / amin).sqrt().floor() as u32;
            for k in box_indices(3, lo, kmax, &|k: &[u32]| {
                k.iter().zip(a).map(|(&v, ai)| ai * (v as f64).powi(2)).sum::<f64>() <= limit + MERGE_TOL
            }) {
                push(ModeIndex::Box { k })?;
            }
        }
        Domain::Rectangle => {
            let mmax = (16.0 * limit).sqrt().floor() as u32;
            let nmax = (4.0 * limit).sqrt().floor() as u32;
            for m in lo..=mmax {
                for n in lo..=nmax {
                    push(ModeIndex::Rect { m, n })?;
                }
            }
        }
        Domain::Torus => {
            let mmax = (4.0 * limit).sqrt().floor() as u32;
            let nmax = limit.sqrt().floor() as u32;
            for m in 0..=mmax {
                for n in 0..=nmax {
                    let kxs: &[Trig] = if m == 0 { &[Trig::Cos] } else { &[Trig::Cos, Trig::Sin] };
                    let kys: &[Trig] = if n == 0 { &[Trig::Cos] } else { &[Trig::Cos, Trig::Sin] };
                    for &kx in kxs {
                        for &ky in kys {
                            push(ModeIndex::Torus { m, n, kx, ky })?;
                        }
                    }
                }
            }
        }
        Domain::Sphere => {
            let mut l = 0u32;
            while (l as f64) * (l as f64 + 1.0) <= limit {
                for m in -(l as i32)..=(l as i32) {
                    push(ModeIndex::Sphere { l, m })?;
                }
                l += 1;
            }
        }
        Domain::Disk => {
            if domain.bc != Neumann {
                return Err(SpectraError::Unsupported("disk spectrum is only available for Neumann".into()));
            }
            if limit >= DISK_LIMIT {
                return Err(SpectraError::LimitTooLarge { limit, bound: DISK_LIMIT });
            }
            for m in 0..=bessel::MAX_ORDER as u32 {
                for k in 1..=5u32 {
                    let kinds: &[Trig] = if m == 0 { &[Trig::Cos] } else { &[Trig::Cos, Trig::Sin] };
                    for &kind in kinds {
                        push(ModeIndex::Disk { m, k, kind })?;
                    }
                }
            }
        }
        Domain::Triangle => {
            let scale = 16.0 * PI * PI / 9.0;
            let qmax = (limit / scale + MERGE_TOL).floor() as i64;
            let bound = (qmax as f64).sqrt().ceil() as i64 + 1;
            let lo = lo as i64;
            for m in lo..=bound {
                for n in lo..=m {
                    if LatticePoint::new(m, n).quadratic_form() > qmax {
                        continue;
                    }
                    for part in [Part::Re, Part::Im] {
                        let skip = m == n
                            && ((domain.bc == Neumann && part == Part::Im)
                                || (domain.bc == Dirichlet && part == Part::Re));
                        if !skip {
                            push(ModeIndex::Triangle { m, n, part })?;
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

// All index tuples with entries in lo..=kmax accepted by `keep`, pruned on
// partial tuples (keep must be monotone in each entry).
fn box_indices(n: usize, lo: u32, kmax: u32, keep: &dyn Fn(&[u32]) -> bool) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![lo; n];
    fn rec(i: usize, lo: u32, kmax: u32, cur: &mut Vec<u32>, keep: &dyn Fn(&[u32]) -> bool, out: &mut Vec<Vec<u32>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for k in lo..=kmax {
            cur[i] = k;
            // remaining entries at their minimum
            if !keep(cur) {
                break;
            }
            rec(i + 1, lo, kmax, cur, keep, out);
        }
        cur[i] = lo;
    }
    if keep(&cur) {
        rec(0, lo, kmax, &mut cur, keep, &mut out);
    }
    out
}

/// Minimal index `k` such that `lambda_k = lambda`.
pub fn kappa(domain: &DomainSpec, lambda: f64) -> Result<usize, SpectraError> {
    let tol = MERGE_TOL * lambda.abs().max(1.0);
    let entries = enumerate_spectrum(domain, lambda + tol)?;
    entries
        .iter()
        .find(|e| (e.eigenvalue - lambda).abs() <= tol)
        .map(|e| e.kappa)
        .ok_or(SpectraError::NotAnEigenvalue(lambda))
}

/// Multiplicity of `lambda` in the spectrum.
pub fn multiplicity(domain: &DomainSpec, lambda: f64) -> Result<usize, SpectraError> {
    let tol = MERGE_TOL * lambda.abs().max(1.0);
    let entries = enumerate_spectrum(domain, lambda + tol)?;
    entries
        .iter()
        .find(|e| (e.eigenvalue - lambda).abs() <= tol)
        .map(|e| e.multiplicity)
        .ok_or(SpectraError::NotAnEigenvalue(lambda))
}

/// Linear combination of eigenfunctions of one domain.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Combination {
    terms: Vec<(f64, EigenMode)>,
}

impl Combination {
    pub fn new(terms: Vec<(f64, EigenMode)>) -> Result<Self, SpectraError> {
        let Some((_, first)) = terms.first() else {
            return Err(SpectraError::InvalidDomain("empty combination".into()));
        };
        if terms.iter().any(|(_, m)| m.domain != first.domain) {
            return Err(SpectraError::InvalidDomain("combination mixes domains".into()));
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[(f64, EigenMode)] {
        &self.terms
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.terms[0].1.domain
    }

    /// Largest eigenvalue among the modes.
    pub fn lambda_max(&self) -> f64 {
        self.terms.iter().map(|(_, m)| m.eigenvalue).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn eval(&self, point: &[f64]) -> Result<f64, SpectraError> {
        self.terms[0].1.check_chart(point)?;
        Ok(self.eval_unchecked(point))
    }

    pub fn eval_unchecked(&self, point: &[f64]) -> f64 {
        self.terms.iter().map(|(c, m)| c * m.eval_unchecked(point)).sum()
    }
}

/// One row of the parallelepiped table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub index: usize,
    pub triple: [u32; 3],
    pub eigenvalue: f64,
}

/// Coefficients `a_i` reproducing the published perturbed-cube table.
pub fn table3_coefficients() -> [f64; 3] {
    [
        1.0,
        (1.0 + std::f64::consts::SQRT_2 / 100.0).sqrt(),
        (1.0 + 3f64.sqrt() / 100.0).sqrt(),
    ]
}

/// First 12 Dirichlet eigenvalues `a1 k1^2 + a2 k2^2 + a3 k3^2` with their
/// triples, sorted by value; ties are listed with the triple in decreasing
/// lexicographic order.
pub fn parallelepiped_table(a: [f64; 3]) -> Result<Vec<TableRow>, SpectraError> {
    const ROWS: usize = 12;
    if a.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(SpectraError::InvalidDomain(format!("coefficients must be positive, got {a:?}")));
    }
    let amin = a.iter().cloned().fold(f64::INFINITY, f64::min);
    let asum: f64 = a.iter().sum();
    let mut kmax = 4u32;
    while kmax <= 256 {
        let mut rows: Vec<([u32; 3], f64)> = Vec::new();
        for k1 in 1..=kmax {
            for k2 in 1..=kmax {
                for k3 in 1..=kmax {
                    let v = a[0] * (k1 * k1) as f64 + a[1] * (k2 * k2) as f64 + a[2] * (k3 * k3) as f64;
                    rows.push(([k1, k2, k3], v));
                }
            }
        }
        rows.sort_by(|x, y| x.1.total_cmp(&y.1).then(y.0.cmp(&x.0)));
        if rows.len() >= ROWS {
            let v12 = rows[ROWS - 1].1;
            // any triple with an entry above kmax exceeds this value
            let escape = amin * ((kmax + 1) as f64).powi(2) + (asum - amin.max(0.0)).max(0.0).min(asum);
            let escape = escape.min(amin * (((kmax + 1) as f64).powi(2) + 2.0));
            if v12 < escape {
                return Ok(rows
                    .into_iter()
                    .take(ROWS)
                    .enumerate()
                    .map(|(i, (triple, eigenvalue))| TableRow { index: i + 1, triple, eigenvalue })
                    .collect());
            }
        }
        kmax *= 2;
    }
    Err(SpectraError::TooFewEigenvalues { found: 0, wanted: ROWS })
}

/// CSV export: `eigenvalue,multiplicity,kappa,modes` with modes joined by `;`.
pub fn write_spectrum_csv<W: Write>(entries: &[SpectrumEntry], mut out: W) -> io::Result<()> {
    writeln!(out, "eigenvalue,multiplicity,kappa,modes")?;
    for e in entries {
        let modes: Vec<String> = e.modes.iter().map(|m| m.index.to_string()).collect();
        writeln!(out, "{},{},{},\"{}\"", e.eigenvalue, e.multiplicity, e.kappa, modes.join(";"))?;
    }
    Ok(())
}
