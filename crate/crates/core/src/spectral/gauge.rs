use crate::error::{Error, Result};
use crate::fields::{MagneticField, SuperPotential};
use crate::geometry::Point;
use crate::quadrature::GaussRule;

/// A vector potential `A` together with the line integrals used as link phases.
pub trait Gauge: Sync {
    fn vector_potential(&self, p: Point) -> Result<Point>;

    /// `∫_a^b A·dl`, by default with the midpoint rule (exact for affine `A`).
    fn link_phase(&self, a: Point, b: Point) -> Result<f64> {
        let m = (a + b) * 0.5;
        let v = self.vector_potential(m)?.dot(b - a);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinitePotential { x: m.x, y: m.y })
        }
    }

    fn describe(&self) -> String;
}

/// `A = 0`.
#[derive(Debug, Clone, Copy)]
pub struct NoField;

impl Gauge for NoField {
    fn vector_potential(&self, _: Point) -> Result<Point> {
        Ok(Point::ORIGIN)
    }

    fn link_phase(&self, _: Point, _: Point) -> Result<f64> {
        Ok(0.0)
    }

    fn describe(&self) -> String {
        "none".into()
    }
}

impl Gauge for SuperPotential {
    fn vector_potential(&self, p: Point) -> Result<Point> {
        SuperPotential::vector_potential(self, p)
    }

    fn describe(&self) -> String {
        match self {
            SuperPotential::QuadraticRadial { b0, center } => {
                format!("quadratic_radial(B0={b0},a=({},{}))", center.x, center.y)
            }
            SuperPotential::QuadraticDirectional { b0, offset, theta } => {
                format!("quadratic_directional(B0={b0},a={offset},theta={theta})")
            }
            SuperPotential::Newtonian { field, support_radius } => {
                format!("newtonian({},r={support_radius})", field.describe())
            }
        }
    }
}

/// `A = (0, ∫_{x₀}^{x} B(t, y) dt)`; used for sampled fields, where a
/// quadrature of the log kernel per lattice edge would be too costly.
#[derive(Debug, Clone)]
pub struct LandauGauge {
    pub field: MagneticField,
    pub x0: f64,
}

impl Gauge for LandauGauge {
    fn vector_potential(&self, p: Point) -> Result<Point> {
        let rule = GaussRule::new(4);
        let panels = (((p.x - self.x0).abs() / 0.01).ceil() as usize).max(1);
        let ay = rule.integrate_composite(self.x0, p.x, panels, |t| self.field.eval(Point::new(t, p.y)));
        Ok(Point::new(0.0, ay))
    }

    fn describe(&self) -> String {
        format!("landau({},x0={})", self.field.describe(), self.x0)
    }
}
