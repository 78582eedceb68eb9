//! The logarithmic potential `Ψ₀(x) = (1/2π) ∫_{𝔅(0,r)} log|x − y| B(y) dy`.
//!
//! Radially symmetric fields reduce to a one-dimensional integral through the
//! circle mean of the log kernel, `(1/2π)∮ log|x − s e| = log max(|x|, s)`.
//! Other fields use polar quadrature: centered at `x` when `x` lies in the
//! support disc (the substitution `s = s_max u²` smooths the kernel), centered
//! at the origin otherwise. Both rules are refined by doubling until the
//! relative change drops below the tolerance.

use super::MagneticField;
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::par;
use crate::quadrature::GaussRule;
use std::f64::consts::PI;

/// Default relative tolerance of the refinement loop.
pub const NEWTONIAN_RTOL: f64 = 1e-6;

const MAX_LEVELS: usize = 7;

pub fn newtonian_potential(field: &MagneticField, support_radius: f64, x: Point) -> Result<f64> {
    check(support_radius, x)?;
    let v = match field {
        MagneticField::Constant(b) => {
            let (r, rho) = (support_radius, x.norm());
            if rho <= r {
                b * (0.5 * r * r * r.ln() - 0.25 * r * r + 0.25 * rho * rho)
            } else {
                0.5 * b * r * r * rho.ln()
            }
        }
        MagneticField::Radial { .. } => radial_potential(field, support_radius, x.norm()),
        MagneticField::Grid { .. } => polar_potential(field, support_radius, x, NEWTONIAN_RTOL)?,
    };
    finite(v, x)
}

/// `∇Ψ₀(x)`.
pub fn newtonian_gradient(field: &MagneticField, support_radius: f64, x: Point) -> Result<Point> {
    check(support_radius, x)?;
    let g = match field {
        MagneticField::Constant(_) | MagneticField::Radial { .. } => {
            let rho = x.norm();
            if rho == 0.0 {
                Point::ORIGIN
            } else {
                // Ψ₀′(ρ) = Φ(min(ρ, r))/ρ along x/ρ.
                x * (field.flux(Point::ORIGIN, rho.min(support_radius)) / (rho * rho))
            }
        }
        MagneticField::Grid { .. } => polar_gradient(field, support_radius, x, NEWTONIAN_RTOL)?,
    };
    if g.is_finite() {
        Ok(g)
    } else {
        Err(Error::NonFinitePotential { x: x.x, y: x.y })
    }
}

fn check(r: f64, x: Point) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidField(format!("support radius {r}")));
    }
    if !x.is_finite() {
        return Err(Error::NonFinitePotential { x: x.x, y: x.y });
    }
    Ok(())
}

fn finite(v: f64, x: Point) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinitePotential { x: x.x, y: x.y })
    }
}

/// `∫₀^r log max(ρ, s) B(s) s ds` with panels split at `ρ` and at the knots.
fn radial_potential(field: &MagneticField, r: f64, rho: f64) -> f64 {
    let MagneticField::Radial { radii, .. } = field else { unreachable!() };
    let rule = GaussRule::new(12);
    let mut knots: Vec<f64> = std::iter::once(0.0)
        .chain(radii.iter().copied().filter(|&s| s > 0.0 && s < r))
        .chain((rho > 0.0 && rho < r).then_some(rho))
        .collect();
    knots.push(r);
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let b = |s: f64| field.eval(Point::new(s, 0.0));
    knots
        .windows(2)
        .map(|w| {
            if w[1] <= rho {
                rho.ln() * rule.integrate(w[0], w[1], |s| b(s) * s)
            } else if w[0] == 0.0 {
                // s log s near the origin: s = w₁u² removes the log singularity.
                rule.integrate_composite(0.0, 1.0, 8, |u| {
                    let s = w[1] * u * u;
                    b(s) * s * s.ln() * 2.0 * w[1] * u
                })
            } else {
                rule.integrate(w[0], w[1], |s| b(s) * s * s.ln())
            }
        })
        .sum()
}

/// Distance from `x` (with `|x| ≤ r`) along `e` to the circle `|y| = r`.
fn exit_length(x: Point, e: Point, r: f64) -> f64 {
    let b = x.dot(e);
    (-b + (b * b - (x.norm2() - r * r)).max(0.0).sqrt()).max(0.0)
}

fn refine<T, F>(scale: f64, rtol: f64, norm: impl Fn(&T) -> f64, diff: impl Fn(&T, &T) -> f64, eval: F) -> Result<T>
where
    F: Fn(usize, usize) -> T,
{
    let (mut panels, mut angles) = (2usize, 32usize);
    let mut prev = eval(panels, angles);
    let mut change = f64::INFINITY;
    for _ in 0..MAX_LEVELS {
        panels *= 2;
        angles *= 2;
        let next = eval(panels, angles);
        change = diff(&next, &prev) / norm(&next).max(scale).max(f64::MIN_POSITIVE);
        prev = next;
        if change < rtol {
            return Ok(prev);
        }
    }
    Err(Error::Quadrature { change, levels: MAX_LEVELS })
}

fn field_scale(field: &MagneticField, r: f64) -> f64 {
    let bmax = match field {
        MagneticField::Constant(b) => b.abs(),
        MagneticField::Radial { values, .. } | MagneticField::Grid { values, .. } => {
            values.iter().fold(0.0f64, |a, v| a.max(v.abs()))
        }
    };
    1e-3 * bmax * r * r
}

/// Tensor polar rule for `Ψ₀` at arbitrary `x`; used for fields without
/// radial symmetry, and exposed so the radial reduction can be cross-checked.
pub(crate) fn polar_potential(field: &MagneticField, r: f64, x: Point, rtol: f64) -> Result<f64> {
    let rule = GaussRule::new(8);
    let inside = x.norm() <= r;
    let eval = |panels: usize, m: usize| -> f64 {
        let w = 2.0 * PI / m as f64;
        let total = par::sum_range(m, 0.0, |k| {
            let e = Point::unit((k as f64 + 0.5) * w);
            if inside {
                let smax = exit_length(x, e, r);
                if smax == 0.0 {
                    return 0.0;
                }
                rule.integrate_composite(0.0, 1.0, panels, |u| {
                    let s = smax * u * u;
                    if s == 0.0 {
                        return 0.0;
                    }
                    s.ln() * field.eval(x + e * s) * s * 2.0 * smax * u
                })
            } else {
                rule.integrate_composite(0.0, r, panels, |rho| {
                    let y = e * rho;
                    x.dist(y).ln() * field.eval(y) * rho
                })
            }
        });
        total * w / (2.0 * PI)
    };
    refine(field_scale(field, r), rtol, |v: &f64| v.abs(), |a, b| (a - b).abs(), eval)
}

pub(crate) fn polar_gradient(field: &MagneticField, r: f64, x: Point, rtol: f64) -> Result<Point> {
    let rule = GaussRule::new(8);
    let inside = x.norm() <= r;
    let eval = |panels: usize, m: usize| -> Point {
        let w = 2.0 * PI / m as f64;
        let total = par::sum_range(m, Point::ORIGIN, |k| {
            let e = Point::unit((k as f64 + 0.5) * w);
            if inside {
                let smax = exit_length(x, e, r);
                e * -rule.integrate_composite(0.0, smax, panels, |s| field.eval(x + e * s))
            } else {
                let gx = rule.integrate_composite(0.0, r, panels, |rho| {
                    let d = x - e * rho;
                    d.x / d.norm2() * field.eval(e * rho) * rho
                });
                let gy = rule.integrate_composite(0.0, r, panels, |rho| {
                    let d = x - e * rho;
                    d.y / d.norm2() * field.eval(e * rho) * rho
                });
                Point::new(gx, gy)
            }
        });
        total * (w / (2.0 * PI))
    };
    let scale = field_scale(field, r) / r;
    refine(scale, rtol, |v: &Point| v.norm(), |a, b| a.dist(*b), eval)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_field_at_origin() {
        // Oracle: ∫₀^r s log s ds by composite Gauss on the smoothed variable.
        for (b0, r) in [(1.0, 1.0), (2.5, 1.7), (0.3, 0.6)] {
            let rule = GaussRule::new(20);
            let oracle = b0 * rule.integrate_composite(0.0, 1.0, 64, |u: f64| {
                let s = r * u * u;
                s * s.ln() * 2.0 * r * u
            });
            let v = newtonian_potential(&MagneticField::Constant(b0), r, Point::ORIGIN).unwrap();
            assert!((v - oracle).abs() < 1e-12 * oracle.abs().max(1.0));
            assert!((v - b0 * r * r * (2.0 * r.ln() - 1.0) / 4.0).abs() < 1e-13);
        }
    }

    #[test]
    fn zero_field_vanishes() {
        let z = MagneticField::zero();
        assert_eq!(newtonian_potential(&z, 1.0, Point::new(0.3, 0.2)).unwrap(), 0.0);
        assert_eq!(newtonian_potential(&z, 1.0, Point::new(3.0, 0.2)).unwrap(), 0.0);
    }

    #[test]
    fn polar_rule_matches_radial_reduction() {
        let lin = MagneticField::linear_radial(2.0, 4);
        let c = MagneticField::Constant(1.0);
        for x in [Point::new(0.0, 0.0), Point::new(0.4, -0.3), Point::new(0.95, 0.1), Point::new(2.0, 0.0)] {
            for f in [&lin, &c] {
                let a = newtonian_potential(f, 1.0, x).unwrap();
                let b = polar_potential(f, 1.0, x, 1e-8).unwrap();
                assert!((a - b).abs() < 1e-7, "{x:?}: {a} vs {b}");
                let ga = newtonian_gradient(f, 1.0, x).unwrap();
                let gb = polar_gradient(f, 1.0, x, 1e-8).unwrap();
                assert!(ga.dist(gb) < 1e-7, "{x:?}: {ga:?} vs {gb:?}");
            }
        }
    }

    #[test]
    fn exterior_value_against_midpoint_refinement() {
        // Constant B₀ = 1, r = 1, x = (2, 0): 2D midpoint rule on a fine grid.
        let n = 1600;
        let h = 2.0 / n as f64;
        let x = Point::new(2.0, 0.0);
        let mut s = 0.0;
        for j in 0..n {
            for i in 0..n {
                let y = Point::new(-1.0 + (i as f64 + 0.5) * h, -1.0 + (j as f64 + 0.5) * h);
                if y.norm() < 1.0 {
                    s += x.dist(y).ln() * h * h;
                }
            }
        }
        let oracle = s / (2.0 * PI);
        let v = newtonian_potential(&MagneticField::Constant(1.0), 1.0, x).unwrap();
        assert!((v - oracle).abs() < 1e-5, "{v} vs {oracle}");
        assert!((v - 0.5 * 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn grid_field_uses_polar_rule() {
        let n = 21;
        let cell = 2.2 / (n - 1) as f64;
        let origin = Point::new(-1.1, -1.1);
        let values = (0..n * n).map(|_| 2.0).collect();
        let g = MagneticField::grid(origin, cell, n, n, values).unwrap();
        let x = Point::new(0.2, 0.1);
        let v = newtonian_potential(&g, 1.0, x).unwrap();
        let exact = newtonian_potential(&MagneticField::Constant(2.0), 1.0, x).unwrap();
        assert!((v - exact).abs() < 1e-6 * exact.abs());
    }
}
