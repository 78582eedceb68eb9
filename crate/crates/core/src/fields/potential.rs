use super::newtonian::{newtonian_gradient, newtonian_potential};
use super::MagneticField;
use crate::error::{Error, Result};
use crate::geometry::{Domain, Point, Shape};
use crate::par;
use crate::quadrature::golden_min;
use serde::{Deserialize, Serialize};

/// Parametric families of super potentials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    QuadraticRadial,
    QuadraticDirectional,
    Newtonian,
}

/// A scalar `Ψ` with `ΔΨ = B` on a disc containing the domain.
#[derive(Debug, Clone, PartialEq)]
pub enum SuperPotential {
    /// `Ψ = (B₀/4)|x − a|²`.
    QuadraticRadial { b0: f64, center: Point },
    /// `Ψ = (B₀/2)(n·x − a)²` with `n = (sin θ, cos θ)`, the second coordinate
    /// after rotation by `θ`.
    QuadraticDirectional { b0: f64, offset: f64, theta: f64 },
    /// The logarithmic potential of `field` restricted to `𝔅(0, support_radius)`.
    Newtonian { field: MagneticField, support_radius: f64 },
}

impl SuperPotential {
    /// Newtonian potential with the default support radius, 1.25 times the
    /// largest distance from the origin to the domain.
    pub fn newtonian(field: MagneticField, domain: &Domain) -> Self {
        Self::Newtonian { field, support_radius: 1.25 * domain.farthest_distance(Point::ORIGIN) }
    }

    pub fn family(&self) -> Family {
        match self {
            Self::QuadraticRadial { .. } => Family::QuadraticRadial,
            Self::QuadraticDirectional { .. } => Family::QuadraticDirectional,
            Self::Newtonian { .. } => Family::Newtonian,
        }
    }

    /// The field `ΔΨ`.
    pub fn field(&self) -> MagneticField {
        match self {
            Self::QuadraticRadial { b0, .. } | Self::QuadraticDirectional { b0, .. } => MagneticField::Constant(*b0),
            Self::Newtonian { field, .. } => field.clone(),
        }
    }

    pub fn value(&self, p: Point) -> Result<f64> {
        match self {
            Self::QuadraticRadial { b0, center } => Ok(0.25 * b0 * (p - *center).norm2()),
            Self::QuadraticDirectional { b0, offset, theta } => {
                let s = direction(*theta).dot(p) - offset;
                Ok(0.5 * b0 * s * s)
            }
            Self::Newtonian { field, support_radius } => newtonian_potential(field, *support_radius, p),
        }
    }

    pub fn gradient(&self, p: Point) -> Result<Point> {
        match self {
            Self::QuadraticRadial { b0, center } => Ok((p - *center) * (0.5 * b0)),
            Self::QuadraticDirectional { b0, offset, theta } => {
                let n = direction(*theta);
                Ok(n * (b0 * (n.dot(p) - offset)))
            }
            Self::Newtonian { field, support_radius } => newtonian_gradient(field, *support_radius, p),
        }
    }

    /// `A = (−∂₂Ψ, ∂₁Ψ)`, so that `rot A = ΔΨ = B` and `div A = 0`.
    pub fn vector_potential(&self, p: Point) -> Result<Point> {
        let g = self.gradient(p)?;
        Ok(Point::new(-g.y, g.x))
    }

    /// `max |Δ_h Ψ − B|` over `points` with the five-point Laplacian of step `h`.
    pub fn laplacian_residual(&self, points: &[Point], h: f64) -> Result<f64> {
        let field = self.field();
        let res = par::map_slice(points, |&p| -> Result<f64> {
            let c = self.value(p)?;
            let mut s = -4.0 * c;
            for d in [Point::new(h, 0.0), Point::new(-h, 0.0), Point::new(0.0, h), Point::new(0.0, -h)] {
                s += self.value(p + d)?;
            }
            Ok((s / (h * h) - field.eval(p)).abs())
        });
        res.into_iter().try_fold(0.0f64, |a, r| Ok(a.max(r?)))
    }
}

fn direction(theta: f64) -> Point {
    Point::new(theta.sin(), theta.cos())
}

/// How an oscillation value was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Resolution {
    Exact,
    /// Dense sampling plus local pattern search, final step `spacing`.
    Sampled { spacing: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Oscillation {
    pub value: f64,
    pub resolution: Resolution,
}

/// `Osc(Ω, Ψ) = sup_Ω Ψ − inf_Ω Ψ`.
///
/// Exact for the quadratic families on every shape. The Newtonian potential
/// is sampled on a 40 × 40 lattice and the boundary, and the best samples are
/// refined by a compass search down to 1/64 of the lattice spacing.
pub fn oscillation(psi: &SuperPotential, domain: &Domain) -> Result<Oscillation> {
    let exact = |value: f64| Ok(Oscillation { value, resolution: Resolution::Exact });
    match psi {
        SuperPotential::QuadraticRadial { b0, center } => {
            let far = domain.farthest_distance(*center);
            let near = domain.distance_from_outside(*center);
            exact(0.25 * b0.abs() * (far * far - near * near))
        }
        SuperPotential::QuadraticDirectional { b0, offset, theta } => {
            let n = direction(*theta);
            let hi = domain.support(n) - offset;
            let lo = -domain.support(-n) - offset;
            let top = hi.abs().max(lo.abs());
            let bottom = if lo <= 0.0 && hi >= 0.0 { 0.0 } else { hi.abs().min(lo.abs()) };
            exact(0.5 * b0.abs() * (top * top - bottom * bottom))
        }
        SuperPotential::Newtonian { .. } => sampled_oscillation(domain, |p| psi.value(p)),
    }
}

/// Sampled `sup f − inf f` over `Ω̄`. The infimum is computed as `−sup(−f)` so
/// that the result is exactly symmetric under `f ↦ −f`.
pub fn sampled_oscillation(domain: &Domain, f: impl Fn(Point) -> Result<f64> + Sync) -> Result<Oscillation> {
    const LATTICE: usize = 40;
    let (lo, hi) = domain.bounding_box();
    let spacing = (hi.x - lo.x).max(hi.y - lo.y) / LATTICE as f64;
    let mut pts: Vec<Point> = (0..=LATTICE)
        .flat_map(|j| (0..=LATTICE).map(move |i| (i, j)))
        .map(|(i, j)| lo + Point::new(i as f64 * spacing, j as f64 * spacing))
        .filter(|&p| domain.contains(p))
        .collect();
    pts.extend(domain.boundary_samples(4 * LATTICE));
    if pts.is_empty() {
        return Err(Error::DegenerateDomain("no sample points in the domain".into()));
    }
    let vals = par::map_slice(&pts, |&p| f(p)).into_iter().collect::<Result<Vec<f64>>>()?;
    let in_closure = |p: Point| domain.distance_from_outside(p) <= 1e-12;
    let climb = |sign: f64| -> Result<f64> {
        let mut order: Vec<usize> = (0..pts.len()).collect();
        order.sort_by(|&a, &b| (sign * vals[b]).total_cmp(&(sign * vals[a])));
        let mut best = f64::NEG_INFINITY;
        for &k in order.iter().take(3) {
            let (mut p, mut v) = (pts[k], sign * vals[k]);
            let mut step = spacing;
            while step > spacing / 64.0 {
                let mut moved = false;
                for d in [Point::new(step, 0.0), Point::new(-step, 0.0), Point::new(0.0, step), Point::new(0.0, -step)] {
                    let q = p + d;
                    if in_closure(q) {
                        let w = sign * f(q)?;
                        if w > v {
                            p = q;
                            v = w;
                            moved = true;
                        }
                    }
                }
                if !moved {
                    step *= 0.5;
                }
            }
            best = best.max(v);
        }
        Ok(best)
    };
    let sup = climb(1.0)?;
    let neg_inf = climb(-1.0)?;
    Ok(Oscillation { value: sup + neg_inf, resolution: Resolution::Sampled { spacing: spacing / 64.0 } })
}

/// Minimizes the oscillation over the free parameters of `family` for the
/// constant field `B₀`. The result is an upper bound on `𝒟(Ω, B₀)`.
pub fn optimize_superpotential(domain: &Domain, b0: f64, family: Family) -> Result<(SuperPotential, f64)> {
    if !(b0 > 0.0 && b0.is_finite()) {
        return Err(Error::InvalidField(format!("B0 must be positive, got {b0}")));
    }
    let psi = match family {
        Family::QuadraticDirectional => {
            let (theta, _) = domain.min_width_direction();
            let n = direction(theta);
            let offset = 0.5 * (domain.support(n) - domain.support(-n));
            SuperPotential::QuadraticDirectional { b0, offset, theta }
        }
        Family::QuadraticRadial => {
            let center = match domain.shape() {
                Shape::Disc { center, .. } | Shape::Ellipse { center, .. } => *center,
                Shape::Rectangle { corner, width, height } => *corner + Point::new(0.5 * width, 0.5 * height),
                _ => {
                    let (lo, hi) = domain.bounding_box();
                    let far = |a: Point| domain.farthest_distance(a);
                    let tol = 1e-10 * (hi.x - lo.x).max(hi.y - lo.y);
                    let best_y = |x: f64| golden_min(lo.y, hi.y, tol, |y| far(Point::new(x, y)));
                    let (x, _) = golden_min(lo.x, hi.x, tol, |x| best_y(x).1);
                    Point::new(x, best_y(x).0)
                }
            };
            SuperPotential::QuadraticRadial { b0, center }
        }
        Family::Newtonian => SuperPotential::newtonian(MagneticField::Constant(b0), domain),
    };
    let osc = oscillation(&psi, domain)?.value;
    Ok((psi, osc))
}
