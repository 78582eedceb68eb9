//! Magnetic fields `B(x)`, super potentials `Ψ` with `ΔΨ = B`, the
//! logarithmic potential of a field, oscillation over a domain and the
//! divergence-free vector potential `A = (−∂₂Ψ, ∂₁Ψ)`.

mod io;
mod newtonian;
mod potential;

pub use newtonian::{newtonian_gradient, newtonian_potential, NEWTONIAN_RTOL};
pub use potential::{
    optimize_superpotential, oscillation, Family, Oscillation, Resolution, SuperPotential,
};

use crate::error::{Error, Result};
use crate::geometry::{Domain, Point};
use crate::quadrature::GaussRule;
use std::f64::consts::PI;

/// A real scalar magnetic field on the plane.
#[derive(Debug, Clone, PartialEq)]
pub enum MagneticField {
    Constant(f64),
    /// `B(|x|)` by linear interpolation of samples on an increasing radius
    /// grid, held constant beyond the last sample.
    Radial { radii: Vec<f64>, values: Vec<f64> },
    /// Bilinear interpolation of node samples; `values[j·nx + i]` sits at
    /// `origin + (i·cell, j·cell)`. Zero outside the sampled rectangle.
    Grid { origin: Point, cell: f64, nx: usize, ny: usize, values: Vec<f64> },
}

impl MagneticField {
    pub fn zero() -> Self {
        Self::Constant(0.0)
    }

    pub fn radial(radii: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if radii.len() != values.len() || radii.len() < 2 {
            return Err(Error::InvalidField("radial profile needs at least two (r, B) samples".into()));
        }
        if radii[0] < 0.0 || radii.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidField("radial grid must be nonnegative and strictly increasing".into()));
        }
        if radii.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(Error::InvalidField("radial profile has non-finite samples".into()));
        }
        Ok(Self::Radial { radii, values })
    }

    pub fn grid(origin: Point, cell: f64, nx: usize, ny: usize, values: Vec<f64>) -> Result<Self> {
        if nx < 2 || ny < 2 || values.len() != nx * ny {
            return Err(Error::InvalidField(format!("grid field needs {nx}x{ny} >= 2x2 samples")));
        }
        if !(cell > 0.0 && cell.is_finite()) || !origin.is_finite() {
            return Err(Error::InvalidField("grid field needs a positive cell size".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidField("grid field has non-finite samples".into()));
        }
        Ok(Self::Grid { origin, cell, nx, ny, values })
    }

    /// `B(x) = |x|` sampled on `n + 1` radii in `[0, r_max]`; exact under
    /// linear interpolation.
    pub fn linear_radial(r_max: f64, n: usize) -> Self {
        let radii: Vec<f64> = (0..=n).map(|k| r_max * k as f64 / n as f64).collect();
        Self::Radial { values: radii.clone(), radii }
    }

    pub fn as_constant(&self) -> Option<f64> {
        match self {
            Self::Constant(b) => Some(*b),
            _ => None,
        }
    }

    pub fn is_identically_zero(&self) -> bool {
        match self {
            Self::Constant(b) => *b == 0.0,
            Self::Radial { values, .. } | Self::Grid { values, .. } => values.iter().all(|&v| v == 0.0),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Self::Constant(b) => format!("constant({b})"),
            Self::Radial { radii, .. } => format!("radial({} samples)", radii.len()),
            Self::Grid { nx, ny, .. } => format!("grid({nx}x{ny})"),
        }
    }

    pub fn eval(&self, p: Point) -> f64 {
        match self {
            Self::Constant(b) => *b,
            Self::Radial { radii, values } => interp_linear(radii, values, p.norm()),
            Self::Grid { origin, cell, nx, ny, values } => {
                let u = (p.x - origin.x) / cell;
                let v = (p.y - origin.y) / cell;
                let (mx, my) = ((nx - 1) as f64, (ny - 1) as f64);
                if !(0.0..=mx).contains(&u) || !(0.0..=my).contains(&v) {
                    return 0.0;
                }
                let i = (u.floor() as usize).min(nx - 2);
                let j = (v.floor() as usize).min(ny - 2);
                let (s, t) = (u - i as f64, v - j as f64);
                let at = |a: usize, b: usize| values[b * nx + a];
                (1.0 - t) * ((1.0 - s) * at(i, j) + s * at(i + 1, j)) + t * ((1.0 - s) * at(i, j + 1) + s * at(i + 1, j + 1))
            }
        }
    }

    /// `(inf_Ω B, sup_Ω B)`. Exact for constant and radial profiles; for grid
    /// fields the extremes over sample nodes in `Ω̄` and boundary samples.
    pub fn range_over(&self, domain: &Domain) -> (f64, f64) {
        match self {
            Self::Constant(b) => (*b, *b),
            Self::Radial { radii, values } => {
                let lo = domain.distance_from_outside(Point::ORIGIN);
                let hi = domain.farthest_distance(Point::ORIGIN);
                let mut vals = vec![interp_linear(radii, values, lo), interp_linear(radii, values, hi)];
                vals.extend(radii.iter().zip(values).filter(|(r, _)| (lo..=hi).contains(*r)).map(|(_, v)| *v));
                min_max(&vals)
            }
            Self::Grid { origin, cell, nx, ny, values } => {
                let mut vals: Vec<f64> = domain.boundary_samples(512).into_iter().map(|p| self.eval(p)).collect();
                for j in 0..*ny {
                    for i in 0..*nx {
                        if domain.contains(*origin + Point::new(i as f64 * cell, j as f64 * cell)) {
                            vals.push(values[j * nx + i]);
                        }
                    }
                }
                min_max(&vals)
            }
        }
    }

    /// Normalized flux `Φ(r, y) = (1/2π) ∫_{𝔅(y,r)} B`.
    pub fn flux(&self, y: Point, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        match self {
            Self::Constant(b) => 0.5 * b * r * r,
            Self::Radial { radii, .. } if y == Point::ORIGIN => {
                // ∫₀^r B(s) s ds, split at the profile knots.
                let rule = GaussRule::new(4);
                let mut knots: Vec<f64> = std::iter::once(0.0)
                    .chain(radii.iter().copied().filter(|&s| s > 0.0 && s < r))
                    .collect();
                knots.push(r);
                knots.windows(2).map(|w| rule.integrate(w[0], w[1], |s| self.eval(Point::new(s, 0.0)) * s)).sum()
            }
            _ => {
                let rule = GaussRule::new(16);
                let panels = 8;
                let m = 128;
                let total: f64 = (0..m)
                    .map(|k| {
                        let e = Point::unit(2.0 * PI * k as f64 / m as f64);
                        rule.integrate_composite(0.0, r, panels, |s| self.eval(y + e * s) * s)
                    })
                    .sum();
                total / m as f64
            }
        }
    }

    pub fn from_radial_csv(path: &std::path::Path) -> Result<Self> {
        io::load_radial(path)
    }

    pub fn from_grid_csv(path: &std::path::Path) -> Result<Self> {
        io::load_grid(path)
    }
}

fn interp_linear(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    if x <= xs[0] {
        return ys[0];
    }
    if x >= xs[xs.len() - 1] {
        return ys[ys.len() - 1];
    }
    let k = xs.partition_point(|&v| v <= x) - 1;
    let t = (x - xs[k]) / (xs[k + 1] - xs[k]);
    ys[k] + t * (ys[k + 1] - ys[k])
}

fn min_max(v: &[f64]) -> (f64, f64) {
    v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flux_closed_forms() {
        let b = MagneticField::Constant(3.0);
        assert!((b.flux(Point::new(0.2, 0.1), 0.5) - 0.375).abs() < 1e-15);
        assert_eq!(MagneticField::zero().flux(Point::ORIGIN, 1.0), 0.0);
        let lin = MagneticField::linear_radial(2.0, 4);
        assert!((lin.flux(Point::ORIGIN, 1.0) - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn off_center_flux_matches_polar_oracle() {
        // B = |x| through 𝔅((0.3, 0), 0.2): compare with a fine midpoint sum.
        let lin = MagneticField::linear_radial(2.0, 4);
        let y = Point::new(0.3, 0.0);
        let n = 800;
        let h = 0.4 / n as f64;
        let mut s = 0.0;
        for j in 0..n {
            for i in 0..n {
                let p = Point::new(0.1 + (i as f64 + 0.5) * h, -0.2 + (j as f64 + 0.5) * h);
                if p.dist(y) < 0.2 {
                    s += p.norm() * h * h;
                }
            }
        }
        let oracle = s / (2.0 * PI);
        assert!((lin.flux(y, 0.2) - oracle).abs() < 2e-5 * oracle.abs().max(1.0));
    }

    #[test]
    fn grid_field_is_bilinear_and_zero_outside() {
        let g = MagneticField::grid(Point::ORIGIN, 0.5, 3, 2, vec![0.0, 1.0, 2.0, 1.0, 2.0, 3.0]).unwrap();
        assert!((g.eval(Point::new(0.25, 0.25)) - 1.0).abs() < 1e-15);
        assert!((g.eval(Point::new(1.0, 0.5)) - 3.0).abs() < 1e-15);
        assert_eq!(g.eval(Point::new(1.5, 0.2)), 0.0);
        assert!(MagneticField::grid(Point::ORIGIN, 0.5, 3, 2, vec![0.0; 5]).is_err());
    }

    #[test]
    fn flux_is_monotone_for_nonnegative_fields() {
        let lin = MagneticField::linear_radial(2.0, 8);
        let y = Point::new(0.1, -0.2);
        let mut prev = 0.0;
        for k in 1..20 {
            let f = lin.flux(y, k as f64 * 0.05);
            assert!(f >= prev);
            prev = f;
        }
    }

    #[test]
    fn radial_range_over_disc() {
        let lin = MagneticField::linear_radial(2.0, 4);
        let (lo, hi) = lin.range_over(&Domain::unit_disc());
        assert_eq!((lo, hi), (0.0, 1.0));
    }
}
