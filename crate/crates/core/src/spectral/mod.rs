//! Direct computation of the lowest eigenvalues of the magnetic Laplacian.
//!
//! The quadratic form `∫|(−i∇ + A)u|²` is discretized on a square lattice of
//! spacing `h` with Peierls link factors: each lattice edge `i → j` carries
//! `|u_i − e^{iθ_ij} u_j|²` with `θ_ij = ∫_{x_i}^{x_j} A·dl`.
//!
//! - Dirichlet: interior lattice nodes; an edge that leaves the domain is
//!   replaced by a boundary arm of length `ϑh` to the true boundary crossing,
//!   contributing `|u_i|²/ϑ`. Mass `h²` per node.
//! - Neumann: cut-cell finite volumes. The node mass is the area of its dual
//!   square inside the domain and an edge weight is the inside length of the
//!   dual face divided by `h`, so constants are in the kernel when `B = 0`.
//!
//! The stored matrix is the Hermitian `S = M^{-1/2} K M^{-1/2}`, whose
//! eigenvectors `x` give grid functions `u = M^{-1/2} x` with `Σ m_i |u_i|² = 1`.

pub mod cholesky;
mod gauge;
pub mod lanczos;
pub mod ordering;
pub mod sparse;

pub use gauge::{Gauge, LandauGauge, NoField};
pub use sparse::{CsrMatrix, C64};

use crate::error::{Error, Result};
use crate::fields::{MagneticField, SuperPotential};
use crate::geometry::{Domain, Point};
use crate::par;
use serde::{Deserialize, Serialize};

/// Nodes closer than this fraction of `h` to the Dirichlet boundary are dropped.
pub const DIRICHLET_ARM_MIN: f64 = 1e-3;
/// Neumann nodes whose dual cell has less than this fraction of `h²` inside are dropped.
pub const NEUMANN_AREA_MIN: f64 = 1e-4;
/// Minimum number of unknowns accepted by [`assemble`].
pub const MIN_NODES: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
}

impl BoundaryCondition {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Dirichlet => "dirichlet",
            Self::Neumann => "neumann",
        }
    }
}

/// Square lattice `origin + (i·h, j·h)`, `0 ≤ i < nx`, `0 ≤ j < ny`, with the
/// unknown index of each site (`u32::MAX` where there is none).
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    pub origin: Point,
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
    index: Vec<u32>,
}

impl Lattice {
    pub fn point(&self, i: i64, j: i64) -> Point {
        self.origin + Point::new(i as f64 * self.h, j as f64 * self.h)
    }

    pub fn node(&self, i: i64, j: i64) -> Option<usize> {
        if i < 0 || j < 0 || i as usize >= self.nx || j as usize >= self.ny {
            return None;
        }
        let v = self.index[j as usize * self.nx + i as usize];
        (v != u32::MAX).then_some(v as usize)
    }

    /// Lattice cell containing `p`: `(i, j)` with `p` in `[x_i, x_{i+1}) × [y_j, y_{j+1})`.
    pub fn locate(&self, p: Point) -> (i64, i64) {
        (((p.x - self.origin.x) / self.h).floor() as i64, ((p.y - self.origin.y) / self.h).floor() as i64)
    }
}

/// One lattice edge of the assembled form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Link {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
    /// `e^{iθ_ij}`.
    pub phase: C64,
}

#[derive(Debug, Clone)]
pub struct DiscretizedOperator {
    matrix: CsrMatrix,
    mass: Vec<f64>,
    coords: Vec<(i64, i64)>,
    links: Vec<Link>,
    lattice: Lattice,
    bc: BoundaryCondition,
    gauge: String,
    domain: String,
    diameter: f64,
}

impl DiscretizedOperator {
    pub fn dim(&self) -> usize {
        self.mass.len()
    }
    pub fn matrix(&self) -> &CsrMatrix {
        &self.matrix
    }
    pub fn mass(&self) -> &[f64] {
        &self.mass
    }
    pub fn coords(&self) -> &[(i64, i64)] {
        &self.coords
    }
    pub fn links(&self) -> &[Link] {
        &self.links
    }
    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }
    pub fn h(&self) -> f64 {
        self.lattice.h
    }
    pub fn bc(&self) -> BoundaryCondition {
        self.bc
    }
    pub fn gauge(&self) -> &str {
        &self.gauge
    }
    pub fn points(&self) -> Vec<Point> {
        self.coords.iter().map(|&(i, j)| self.lattice.point(i, j)).collect()
    }
}

const DIRS: [(i64, i64); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];

/// Assembles the discrete operator for `(−i∇ + A)²` on `domain`.
pub fn assemble(domain: &Domain, gauge: &dyn Gauge, bc: BoundaryCondition, h: f64) -> Result<DiscretizedOperator> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Config(format!("grid spacing must be positive, got {h}")));
    }
    let (lo, hi) = domain.bounding_box();
    let nx = ((hi.x - lo.x) / h).ceil() as usize + 2;
    let ny = ((hi.y - lo.y) / h).ceil() as usize + 2;
    let mut lattice = Lattice { origin: lo, h, nx, ny, index: vec![u32::MAX; nx * ny] };
    let site = |k: usize| ((k % nx) as i64, (k / nx) as i64);

    // Per-site data: Dirichlet arm fractions, or Neumann cell area.
    let keep: Vec<Option<f64>> = par::map_range(nx * ny, |k| {
        let (i, j) = site(k);
        let p = lattice.point(i, j);
        match bc {
            BoundaryCondition::Dirichlet => {
                if !domain.contains(p) {
                    return None;
                }
                let near = DIRS
                    .iter()
                    .map(|&(di, dj)| domain.ray_exit(p, Point::new(di as f64, dj as f64)) / h)
                    .fold(f64::INFINITY, f64::min);
                (near >= DIRICHLET_ARM_MIN).then_some(h * h)
            }
            BoundaryCondition::Neumann => {
                let a = domain.square_area(p, h);
                (a >= NEUMANN_AREA_MIN * h * h).then_some(a)
            }
        }
    });
    let mut coords = Vec::new();
    let mut mass = Vec::new();
    for (k, m) in keep.iter().enumerate() {
        if let Some(m) = *m {
            lattice.index[k] = coords.len() as u32;
            coords.push(site(k));
            mass.push(m);
        }
    }
    let n = coords.len();
    if n < MIN_NODES {
        return Err(Error::TooFewNodes { found: n, required: MIN_NODES });
    }

    // Edges to the right and upward from each node; boundary arms for Dirichlet.
    struct NodeTerms {
        links: Vec<(usize, f64)>,
        diag: f64,
    }
    let lat = &lattice;
    let terms: Vec<NodeTerms> = par::map_range(n, |a| {
        let (i, j) = coords[a];
        let p = lat.point(i, j);
        let mut links = Vec::new();
        let mut diag = 0.0;
        for &(di, dj) in &DIRS {
            let d = Point::new(di as f64, dj as f64);
            let q = lat.node(i + di, j + dj);
            match bc {
                BoundaryCondition::Dirichlet => {
                    let t = domain.ray_exit(p, d) / h;
                    match q {
                        Some(b) if t >= 1.0 - 1e-12 => {
                            if di + dj > 0 {
                                links.push((b, 1.0));
                            }
                            diag += 1.0;
                        }
                        _ => diag += 1.0 / t.min(1.0),
                    }
                }
                BoundaryCondition::Neumann => {
                    if let Some(b) = q {
                        let mid = p + d * (0.5 * h);
                        let half = d.perp() * (0.5 * h);
                        let w = domain.segment_inside_length(mid - half, mid + half) / h;
                        if w > 0.0 {
                            if di + dj > 0 {
                                links.push((b, w));
                            }
                            diag += w;
                        }
                    }
                }
            }
        }
        NodeTerms { links, diag }
    });

    let pairs: Vec<(usize, usize, f64)> =
        terms.iter().enumerate().flat_map(|(a, t)| t.links.iter().map(move |&(b, w)| (a, b, w))).collect();
    let phases = par::map_slice(&pairs, |&(a, b, _)| {
        let (pa, pb) = (lat.point(coords[a].0, coords[a].1), lat.point(coords[b].0, coords[b].1));
        gauge.link_phase(pa, pb).map(|t| C64::from_polar(1.0, t))
    });
    let mut links = Vec::with_capacity(pairs.len());
    for (&(i, j, weight), ph) in pairs.iter().zip(phases) {
        links.push(Link { i, j, weight, phase: ph? });
    }

    let d: Vec<f64> = mass.iter().map(|m| 1.0 / m.sqrt()).collect();
    let mut trip = Vec::with_capacity(n + 2 * links.len());
    for (a, t) in terms.iter().enumerate() {
        trip.push((a, a, C64::new(t.diag * d[a] * d[a], 0.0)));
    }
    for l in &links {
        let s = d[l.i] * d[l.j];
        let v = -l.phase * (l.weight * s);
        trip.push((l.i, l.j, v));
        trip.push((l.j, l.i, v.conj()));
    }
    Ok(DiscretizedOperator {
        matrix: CsrMatrix::from_triplets(n, trip),
        mass,
        coords,
        links,
        lattice,
        bc,
        gauge: gauge.describe(),
        domain: domain.describe(),
        diameter: domain.diameter(),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    /// Relative residual tolerance `‖Sv − λv‖ ≤ tol·max(|λ|, 1)`.
    pub tol: f64,
    #[serde(alias = "max_iter")]
    pub max_restarts: usize,
    pub max_basis: usize,
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: 1e-8, max_restarts: 12, max_basis: 60, seed: 20_240_601 }
    }
}

#[derive(Debug, Clone)]
pub struct SpectralResult {
    pub eigenvalues: Vec<f64>,
    /// Eigenvectors of `S` with unit 2-norm.
    pub eigenvectors: Vec<Vec<C64>>,
    pub residuals: Vec<f64>,
    pub h: f64,
    pub bc: BoundaryCondition,
    pub lattice: Lattice,
    pub coords: Vec<(i64, i64)>,
    pub mass: Vec<f64>,
    pub shift: f64,
    pub domain: String,
    pub gauge: String,
}

impl SpectralResult {
    /// `u = M^{-1/2} x` for eigenvector `k`, so that `Σ m_i |u_i|² = 1`.
    pub fn grid_function(&self, k: usize) -> Vec<C64> {
        self.eigenvectors[k].iter().zip(&self.mass).map(|(x, m)| x / m.sqrt()).collect()
    }

    pub fn lowest(&self) -> f64 {
        self.eigenvalues[0]
    }
}

/// The `k` lowest eigenpairs of `op`. `shift` must lie below the spectrum;
/// by default `−1/diam²` is used.
pub fn lowest_eigenpairs(
    op: &DiscretizedOperator,
    k: usize,
    opts: &SolverOptions,
    shift: Option<f64>,
) -> Result<SpectralResult> {
    if k == 0 || k >= op.dim() {
        return Err(Error::Config(format!("cannot compute {k} eigenpairs of a {}-node operator", op.dim())));
    }
    let perm = ordering::nested_dissection(&op.coords);
    let cfg = lanczos::LanczosConfig {
        count: k,
        tol: opts.tol,
        max_restarts: opts.max_restarts,
        max_basis: opts.max_basis,
        seed: opts.seed,
        shift: shift.unwrap_or(-1.0 / (op.diameter * op.diameter)),
    };
    let e = lanczos::lowest(&op.matrix, &perm, &cfg)?;
    Ok(SpectralResult {
        eigenvalues: e.values,
        eigenvectors: e.vectors,
        residuals: e.residuals,
        h: op.h(),
        bc: op.bc,
        lattice: op.lattice.clone(),
        coords: op.coords.clone(),
        mass: op.mass.clone(),
        shift: e.shift,
        domain: op.domain.clone(),
        gauge: op.gauge.clone(),
    })
}

/// A real grid function on the lattice, interpolated bilinearly with zero at
/// missing sites.
#[derive(Debug, Clone)]
pub struct GridFunction {
    pub lattice: Lattice,
    /// One value per unknown, in unknown order.
    pub values: Vec<f64>,
    pub coords: Vec<(i64, i64)>,
    pub mass: Vec<f64>,
}

impl GridFunction {
    pub fn site(&self, i: i64, j: i64) -> f64 {
        self.lattice.node(i, j).map(|k| self.values[k]).unwrap_or(0.0)
    }

    pub fn eval(&self, p: Point) -> f64 {
        let (i, j) = self.lattice.locate(p);
        let s = (p.x - self.lattice.origin.x) / self.lattice.h - i as f64;
        let t = (p.y - self.lattice.origin.y) / self.lattice.h - j as f64;
        (1.0 - t) * ((1.0 - s) * self.site(i, j) + s * self.site(i + 1, j))
            + t * ((1.0 - s) * self.site(i, j + 1) + s * self.site(i + 1, j + 1))
    }

    /// Unknowns at lattice sites inside the closed disc `𝔅̄(y, r)`.
    pub fn nodes_in_disc(&self, y: Point, r: f64) -> impl Iterator<Item = (Point, f64)> + '_ {
        let lat = &self.lattice;
        let (i0, j0) = lat.locate(y - Point::new(r, r));
        let (i1, j1) = lat.locate(y + Point::new(r, r));
        (j0..=j1 + 1).flat_map(move |j| {
            (i0..=i1 + 1).filter_map(move |i| {
                let k = lat.node(i, j)?;
                let p = lat.point(i, j);
                (p.dist(y) <= r).then_some((p, self.values[k]))
            })
        })
    }

    /// `Σ m_i f_i²`.
    pub fn norm2(&self) -> f64 {
        self.values.iter().zip(&self.mass).map(|(v, m)| m * v * v).sum()
    }
}

/// Non-magnetic data needed by the second-type bounds.
#[derive(Debug, Clone)]
pub struct NonMagnetic {
    /// `λ₁(Ω,0)` or `μ₁(Ω,0)`.
    pub lambda1: f64,
    /// `λ₂(Ω,0)` or `μ₂(Ω,0)`.
    pub lambda2: f64,
    /// `φ₁ > 0` with `∫φ₁² = 1` (Dirichlet), or the constant `|Ω|^{-1/2}` (Neumann).
    pub ground_state: GridFunction,
    pub result: SpectralResult,
}

impl NonMagnetic {
    pub fn gap(&self) -> f64 {
        self.lambda2 - self.lambda1
    }
}

pub fn solve_nonmagnetic(domain: &Domain, bc: BoundaryCondition, h: f64, opts: &SolverOptions) -> Result<NonMagnetic> {
    let op = assemble(domain, &NoField, bc, h)?;
    let res = lowest_eigenpairs(&op, 2, opts, None)?;
    let values = match bc {
        BoundaryCondition::Dirichlet => {
            let u = res.grid_function(0);
            let pivot = u.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap_or_default();
            let phase = pivot.conj() / pivot.norm();
            u.iter().map(|z| (z * phase).re).collect()
        }
        BoundaryCondition::Neumann => vec![1.0 / domain.area().sqrt(); res.mass.len()],
    };
    Ok(NonMagnetic {
        lambda1: res.eigenvalues[0],
        lambda2: res.eigenvalues[1],
        ground_state: GridFunction {
            lattice: res.lattice.clone(),
            values,
            coords: res.coords.clone(),
            mass: res.mass.clone(),
        },
        result: res,
    })
}

/// A gauge with `rot A = B`: the quadratic radial super potential about the
/// in-center for constant fields, the Newtonian potential for radial
/// profiles, and the Landau gauge for sampled grids.
pub fn gauge_for(field: &MagneticField, domain: &Domain) -> Box<dyn Gauge> {
    match field {
        MagneticField::Constant(b) if *b == 0.0 => Box::new(NoField),
        MagneticField::Constant(b) => {
            Box::new(SuperPotential::QuadraticRadial { b0: *b, center: domain.incenter() })
        }
        MagneticField::Radial { .. } => Box::new(SuperPotential::newtonian(field.clone(), domain)),
        MagneticField::Grid { .. } => {
            Box::new(LandauGauge { field: field.clone(), x0: domain.bounding_box().0.x })
        }
    }
}

/// Lowest eigenvalue of the magnetic operator.
pub fn solve_magnetic(
    domain: &Domain,
    field: &MagneticField,
    bc: BoundaryCondition,
    h: f64,
    opts: &SolverOptions,
) -> Result<SpectralResult> {
    solve_magnetic_k(domain, field, bc, h, opts, 1)
}

pub fn solve_magnetic_k(
    domain: &Domain,
    field: &MagneticField,
    bc: BoundaryCondition,
    h: f64,
    opts: &SolverOptions,
    k: usize,
) -> Result<SpectralResult> {
    let gauge = gauge_for(field, domain);
    let op = assemble(domain, gauge.as_ref(), bc, h)?;
    let hint = match (bc, field.as_constant()) {
        (BoundaryCondition::Dirichlet, Some(b)) if b != 0.0 => Some(0.9 * b.abs()),
        _ => None,
    };
    lowest_eigenpairs(&op, k, opts, hint)
}

/// Richardson extrapolation `(4·fine − coarse)/3` for an `O(h²)` error.
pub fn richardson(coarse: f64, fine: f64) -> f64 {
    (4.0 * fine - coarse) / 3.0
}

/// Extrapolated eigenvalues from results at `h` and `h/2`.
pub fn extrapolate(coarse: &SpectralResult, fine: &SpectralResult) -> Result<Vec<f64>> {
    if (coarse.h - 2.0 * fine.h).abs() > 1e-12 * coarse.h {
        return Err(Error::Mismatch(format!("fine spacing {} is not half of {}", fine.h, coarse.h)));
    }
    if coarse.bc != fine.bc || coarse.domain != fine.domain || coarse.gauge != fine.gauge {
        return Err(Error::Mismatch("coarse and fine solves describe different problems".into()));
    }
    if coarse.eigenvalues.len() != fine.eigenvalues.len() {
        return Err(Error::Mismatch("coarse and fine solves hold different eigenvalue counts".into()));
    }
    Ok(coarse.eigenvalues.iter().zip(&fine.eigenvalues).map(|(&c, &f)| richardson(c, f)).collect())
}

/// Observed order `log₂((a − b)/(b − c))` from three successive halvings;
/// `None` when the differences vanish or change sign.
pub fn observed_order(a: f64, b: f64, c: f64) -> Option<f64> {
    let (d1, d2) = (a - b, b - c);
    (d1 != 0.0 && d2 != 0.0 && d1 / d2 > 0.0).then(|| (d1 / d2).log2())
}

#[cfg(test)]
mod tests;
