//! Planar domains and the geometric quantities the eigenvalue bounds use:
//! distance to the boundary `δ(x)`, in-radius, directional extent and minimal
//! width `ℓ(Ω)`, diameter, and the disc packing used in the large-field
//! second-type bounds.

mod ellipse;
mod mask;
mod point;
mod polygon;

pub use mask::Mask;
pub use point::Point;
pub use polygon::{clip_half_plane, convex_hull, polygon_area, ConvexPolygon};

use crate::error::{Error, Result};
use crate::quadrature::{golden_min, GaussRule};
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Number of angles in the coarse `θ` scan of [`Domain::min_width`] for masks.
pub const MASK_WIDTH_ANGLES: usize = 1024;

#[derive(Debug, Clone)]
pub enum Shape {
    Disc { center: Point, radius: f64 },
    Rectangle { corner: Point, width: f64, height: f64 },
    Ellipse { center: Point, semi_axes: (f64, f64), rotation: f64 },
    ConvexPolygon(ConvexPolygon),
    Mask(Mask),
}

/// A bounded open planar domain.
#[derive(Debug, Clone)]
pub struct Domain {
    shape: Shape,
    incircle: OnceLock<(f64, Point)>,
}

impl Domain {
    fn from_shape(shape: Shape) -> Self {
        Self { shape, incircle: OnceLock::new() }
    }

    pub fn disc(center: Point, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) || !center.is_finite() {
            return Err(Error::DegenerateDomain(format!("disc radius {radius}")));
        }
        Ok(Self::from_shape(Shape::Disc { center, radius }))
    }

    pub fn unit_disc() -> Self {
        Self::from_shape(Shape::Disc { center: Point::ORIGIN, radius: 1.0 })
    }

    pub fn rectangle(corner: Point, width: f64, height: f64) -> Result<Self> {
        if !(width > 0.0 && height > 0.0 && width.is_finite() && height.is_finite()) || !corner.is_finite() {
            return Err(Error::DegenerateDomain(format!("rectangle {width} x {height}")));
        }
        Ok(Self::from_shape(Shape::Rectangle { corner, width, height }))
    }

    /// The unit square `(0,1)²`.
    pub fn unit_square() -> Self {
        Self::from_shape(Shape::Rectangle { corner: Point::ORIGIN, width: 1.0, height: 1.0 })
    }

    pub fn ellipse(center: Point, semi_axes: (f64, f64), rotation: f64) -> Result<Self> {
        let (a, b) = semi_axes;
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite() && rotation.is_finite()) || !center.is_finite() {
            return Err(Error::DegenerateDomain(format!("ellipse semi-axes ({a}, {b})")));
        }
        Ok(Self::from_shape(Shape::Ellipse { center, semi_axes, rotation }))
    }

    pub fn polygon(vertices: Vec<Point>) -> Result<Self> {
        Ok(Self::from_shape(Shape::ConvexPolygon(ConvexPolygon::new(vertices)?)))
    }

    /// Equilateral triangle with side `s`, base on the x axis starting at the origin.
    pub fn equilateral_triangle(s: f64) -> Result<Self> {
        Self::polygon(vec![
            Point::new(0.0, 0.0),
            Point::new(s, 0.0),
            Point::new(0.5 * s, 0.5 * 3f64.sqrt() * s),
        ])
    }

    pub fn mask(mask: Mask) -> Self {
        Self::from_shape(Shape::Mask(mask))
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn is_disc(&self) -> Option<(Point, f64)> {
        match self.shape {
            Shape::Disc { center, radius } => Some((center, radius)),
            _ => None,
        }
    }

    /// Short human-readable description used in reports.
    pub fn describe(&self) -> String {
        match &self.shape {
            Shape::Disc { radius, .. } => format!("disc(R={radius})"),
            Shape::Rectangle { width, height, .. } => format!("rectangle({width}x{height})"),
            Shape::Ellipse { semi_axes, rotation, .. } => {
                format!("ellipse({},{};rot={})", semi_axes.0, semi_axes.1, rotation)
            }
            Shape::ConvexPolygon(p) => format!("polygon({} vertices)", p.len()),
            Shape::Mask(m) => {
                let (nx, ny) = m.dims();
                format!("mask({nx}x{ny};cell={})", m.cell())
            }
        }
    }

    /// Open-set membership.
    pub fn contains(&self, p: Point) -> bool {
        match &self.shape {
            Shape::Disc { center, radius } => p.dist(*center) < *radius,
            Shape::Rectangle { corner, width, height } => {
                p.x > corner.x && p.x < corner.x + width && p.y > corner.y && p.y < corner.y + height
            }
            Shape::Ellipse { center, semi_axes, rotation } => {
                let q = (p - *center).rotate(-rotation);
                (q.x / semi_axes.0).powi(2) + (q.y / semi_axes.1).powi(2) < 1.0
            }
            Shape::ConvexPolygon(poly) => poly.contains(p),
            Shape::Mask(m) => m.contains(p),
        }
    }

    /// Convex by construction (analytic shapes) or digitally convex (masks).
    pub fn is_convex(&self) -> bool {
        match &self.shape {
            Shape::Mask(m) => m.is_digitally_convex(),
            _ => true,
        }
    }

    pub fn area(&self) -> f64 {
        match &self.shape {
            Shape::Disc { radius, .. } => PI * radius * radius,
            Shape::Rectangle { width, height, .. } => width * height,
            Shape::Ellipse { semi_axes, .. } => PI * semi_axes.0 * semi_axes.1,
            Shape::ConvexPolygon(p) => p.area(),
            Shape::Mask(m) => m.area(),
        }
    }

    /// Axis-aligned bounding box `(min, max)`.
    pub fn bounding_box(&self) -> (Point, Point) {
        match &self.shape {
            Shape::Disc { center, radius } => {
                (*center - Point::new(*radius, *radius), *center + Point::new(*radius, *radius))
            }
            Shape::Rectangle { corner, width, height } => (*corner, *corner + Point::new(*width, *height)),
            Shape::Ellipse { center, .. } => {
                let hx = self.support(Point::new(1.0, 0.0)) - center.x;
                let hy = self.support(Point::new(0.0, 1.0)) - center.y;
                (*center - Point::new(hx, hy), *center + Point::new(hx, hy))
            }
            Shape::ConvexPolygon(p) => {
                let v = p.vertices();
                let lo = v.iter().fold(v[0], |a, q| Point::new(a.x.min(q.x), a.y.min(q.y)));
                let hi = v.iter().fold(v[0], |a, q| Point::new(a.x.max(q.x), a.y.max(q.y)));
                (lo, hi)
            }
            Shape::Mask(m) => m.bounding_box(),
        }
    }

    /// Support function `sup_{x∈Ω} dir·x`.
    pub fn support(&self, dir: Point) -> f64 {
        match &self.shape {
            Shape::Disc { center, radius } => dir.dot(*center) + radius * dir.norm(),
            Shape::Rectangle { corner, width, height } => {
                dir.dot(*corner) + (dir.x * width).max(0.0) + (dir.y * height).max(0.0)
            }
            Shape::Ellipse { center, semi_axes, rotation } => {
                let q = dir.rotate(-rotation);
                dir.dot(*center) + ((semi_axes.0 * q.x).powi(2) + (semi_axes.1 * q.y).powi(2)).sqrt()
            }
            Shape::ConvexPolygon(p) => p.support(dir),
            Shape::Mask(m) => m.support(dir),
        }
    }

    /// `δ(x) = dist(x, ∂Ω)` for `x ∈ Ω`, and 0 outside `Ω`. Exact for every
    /// shape; for masks the boundary is that of the union of cells.
    pub fn boundary_distance(&self, p: Point) -> f64 {
        if !self.contains(p) {
            return 0.0;
        }
        match &self.shape {
            Shape::Disc { center, radius } => radius - p.dist(*center),
            Shape::Rectangle { corner, width, height } => (p.x - corner.x)
                .min(corner.x + width - p.x)
                .min(p.y - corner.y)
                .min(corner.y + height - p.y),
            Shape::Ellipse { center, semi_axes, rotation } => {
                let q = (p - *center).rotate(-rotation);
                ellipse::distance_to_ellipse(semi_axes.0, semi_axes.1, q)
            }
            Shape::ConvexPolygon(poly) => poly.interior_distance(p),
            Shape::Mask(m) => m.interior_distance(p),
        }
        .max(0.0)
    }

    fn incircle(&self) -> (f64, Point) {
        *self.incircle.get_or_init(|| match &self.shape {
            Shape::Disc { center, radius } => (*radius, *center),
            Shape::Rectangle { corner, width, height } => {
                let r = 0.5 * width.min(*height);
                (r, *corner + Point::new(r, r))
            }
            Shape::Ellipse { center, semi_axes, .. } => (semi_axes.0.min(semi_axes.1), *center),
            Shape::ConvexPolygon(p) => p.incircle(),
            Shape::Mask(m) => m.incircle(),
        })
    }

    /// `R_in = sup δ`. Closed form for analytic shapes, bisection on the edge
    /// offset for polygons, and the maximum over cell centers for masks.
    pub fn inradius(&self) -> f64 {
        self.incircle().0
    }

    /// A point where `δ` attains `R_in`: the lexicographically smallest one
    /// when the maximizer is not unique.
    pub fn incenter(&self) -> Point {
        self.incircle().1
    }

    /// `sup x₂ − inf x₂` of the domain rotated by `theta` about `x0`.
    pub fn directional_extent(&self, x0: Point, theta: f64) -> Result<f64> {
        if !self.contains(x0) {
            return Err(Error::OutsideDomain { x: x0.x, y: x0.y });
        }
        Ok(self.extent_about(x0, theta))
    }

    fn extent_about(&self, x0: Point, theta: f64) -> f64 {
        // The second coordinate of R(θ)(x − x0) is n·(x − x0) with n = (sin θ, cos θ).
        let t = theta.rem_euclid(PI);
        let n = Point::new(t.sin(), t.cos());
        let up = self.support(n) - n.dot(x0);
        let down = self.support(-n) + n.dot(x0);
        up + down
    }

    /// `ℓ(Ω) = inf_θ ℓ(Ω, x0, θ)`, evaluated with the in-center as base point.
    pub fn min_width(&self) -> f64 {
        self.min_width_about(self.incenter())
    }

    /// `ℓ(Ω)` computed with an explicit base point. Closed form for discs,
    /// rectangles and ellipses, a calipers sweep for polygons, and for masks a
    /// scan over [`MASK_WIDTH_ANGLES`] angles refined by golden section.
    pub fn min_width_about(&self, x0: Point) -> f64 {
        match &self.shape {
            Shape::Disc { radius, .. } => 2.0 * radius,
            Shape::Rectangle { width, height, .. } => width.min(*height),
            Shape::Ellipse { semi_axes, .. } => 2.0 * semi_axes.0.min(semi_axes.1),
            Shape::ConvexPolygon(p) => p.min_width(),
            Shape::Mask(_) => {
                let step = PI / MASK_WIDTH_ANGLES as f64;
                let samples: Vec<f64> =
                    (0..MASK_WIDTH_ANGLES).map(|k| self.extent_about(x0, k as f64 * step)).collect();
                let mut order: Vec<usize> = (0..MASK_WIDTH_ANGLES).collect();
                order.sort_by(|&a, &b| samples[a].total_cmp(&samples[b]));
                order
                    .iter()
                    .take(4)
                    .map(|&k| {
                        let t = k as f64 * step;
                        golden_min(t - step, t + step, 1e-12, |th| self.extent_about(x0, th)).1
                    })
                    .fold(samples[order[0]], f64::min)
            }
        }
    }

    pub fn diameter(&self) -> f64 {
        match &self.shape {
            Shape::Disc { radius, .. } => 2.0 * radius,
            Shape::Rectangle { width, height, .. } => width.hypot(*height),
            Shape::Ellipse { semi_axes, .. } => 2.0 * semi_axes.0.max(semi_axes.1),
            Shape::ConvexPolygon(p) => p.diameter(),
            Shape::Mask(m) => m.diameter(),
        }
    }

    /// Distance from an interior point along the unit direction `d` to the
    /// first boundary crossing.
    pub fn ray_exit(&self, p: Point, d: Point) -> f64 {
        if !self.contains(p) {
            return 0.0;
        }
        match &self.shape {
            Shape::Mask(m) => m.ray_exit(p, d),
            _ => self.chord(p, d).map(|(_, t1)| t1.max(0.0)).unwrap_or(0.0),
        }
    }

    /// Parameter interval `{t : p + t d ∈ Ω}` for the convex shapes.
    fn chord(&self, p: Point, d: Point) -> Option<(f64, f64)> {
        match &self.shape {
            Shape::Disc { center, radius } => {
                let q = p - *center;
                quadratic_chord(d.norm2(), q.dot(d), q.norm2() - radius * radius)
            }
            Shape::Rectangle { corner, width, height } => {
                let mut t0 = f64::NEG_INFINITY;
                let mut t1 = f64::INFINITY;
                for (pc, dc, lo, hi) in
                    [(p.x, d.x, corner.x, corner.x + width), (p.y, d.y, corner.y, corner.y + height)]
                {
                    if dc == 0.0 {
                        if pc <= lo || pc >= hi {
                            return None;
                        }
                    } else {
                        let (a, b) = ((lo - pc) / dc, (hi - pc) / dc);
                        t0 = t0.max(a.min(b));
                        t1 = t1.min(a.max(b));
                    }
                }
                (t0 < t1).then_some((t0, t1))
            }
            Shape::Ellipse { center, semi_axes, rotation } => {
                let q = (p - *center).rotate(-rotation);
                let e = d.rotate(-rotation);
                let q = Point::new(q.x / semi_axes.0, q.y / semi_axes.1);
                let e = Point::new(e.x / semi_axes.0, e.y / semi_axes.1);
                quadratic_chord(e.norm2(), q.dot(e), q.norm2() - 1.0)
            }
            Shape::ConvexPolygon(poly) => poly.chord(p, d),
            Shape::Mask(_) => None,
        }
    }

    /// Length of the part of the segment `[a, b]` lying in `Ω`.
    pub fn segment_inside_length(&self, a: Point, b: Point) -> f64 {
        match &self.shape {
            Shape::Mask(m) => m.segment_inside_length(a, b),
            _ => {
                let len = a.dist(b);
                match self.chord(a, b - a) {
                    Some((t0, t1)) => (t1.min(1.0) - t0.max(0.0)).max(0.0) * len,
                    None => 0.0,
                }
            }
        }
    }

    /// Area of the axis-aligned square of side `h` centered at `c` inside `Ω`.
    pub fn square_area(&self, c: Point, h: f64) -> f64 {
        let half = 0.5 * h;
        let corners = [
            c + Point::new(-half, -half),
            c + Point::new(half, -half),
            c + Point::new(half, half),
            c + Point::new(-half, half),
        ];
        match &self.shape {
            Shape::Mask(m) => m.square_area(c, h),
            Shape::Rectangle { corner, width, height } => {
                let ox = ((c.x + half).min(corner.x + width) - (c.x - half).max(corner.x)).max(0.0);
                let oy = ((c.y + half).min(corner.y + height) - (c.y - half).max(corner.y)).max(0.0);
                ox * oy
            }
            Shape::ConvexPolygon(p) => p.clip_area(&corners),
            Shape::Disc { .. } | Shape::Ellipse { .. } => {
                if corners.iter().all(|&q| self.contains(q)) {
                    return h * h;
                }
                let rule = GaussRule::new(8);
                rule.integrate_composite(c.y - half, c.y + half, 8, |y| {
                    self.segment_inside_length(Point::new(c.x - half, y), Point::new(c.x + half, y))
                })
            }
        }
    }

    /// Points on `∂Ω`, roughly `n` of them, evenly spread along the boundary.
    pub fn boundary_samples(&self, n: usize) -> Vec<Point> {
        let n = n.max(8);
        match &self.shape {
            Shape::Disc { center, radius } => {
                (0..n).map(|k| *center + Point::unit(2.0 * PI * k as f64 / n as f64) * *radius).collect()
            }
            Shape::Ellipse { center, semi_axes, rotation } => (0..n)
                .map(|k| {
                    let t = 2.0 * PI * k as f64 / n as f64;
                    *center + Point::new(semi_axes.0 * t.cos(), semi_axes.1 * t.sin()).rotate(*rotation)
                })
                .collect(),
            Shape::Rectangle { corner, width, height } => {
                let v = [
                    *corner,
                    *corner + Point::new(*width, 0.0),
                    *corner + Point::new(*width, *height),
                    *corner + Point::new(0.0, *height),
                ];
                polyline_samples(&v, n)
            }
            Shape::ConvexPolygon(p) => polyline_samples(p.vertices(), n),
            Shape::Mask(m) => {
                let per = n.div_ceil(m.segments().len()).max(1);
                m.segments()
                    .iter()
                    .flat_map(|&(a, b)| (0..per).map(move |k| a + (b - a) * (k as f64 / per as f64)))
                    .collect()
            }
        }
    }

    /// `sup_{p∈Ω} |p − a|`.
    pub fn farthest_distance(&self, a: Point) -> f64 {
        match &self.shape {
            Shape::Disc { center, radius } => a.dist(*center) + radius,
            Shape::Rectangle { corner, width, height } => {
                let dx = (a.x - corner.x).abs().max((corner.x + width - a.x).abs());
                let dy = (a.y - corner.y).abs().max((corner.y + height - a.y).abs());
                dx.hypot(dy)
            }
            Shape::ConvexPolygon(p) => p.vertices().iter().map(|v| v.dist(a)).fold(0.0, f64::max),
            Shape::Mask(m) => m.hull().iter().map(|v| v.dist(a)).fold(0.0, f64::max),
            Shape::Ellipse { center, semi_axes, rotation } => {
                let q = (a - *center).rotate(-rotation);
                let f = |t: f64| Point::new(semi_axes.0 * t.cos(), semi_axes.1 * t.sin()).dist(q);
                let n = 720;
                let step = 2.0 * PI / n as f64;
                let k = (0..n).max_by(|&i, &j| f(i as f64 * step).total_cmp(&f(j as f64 * step))).unwrap_or(0);
                let t = k as f64 * step;
                crate::quadrature::golden_max(t - step, t + step, 1e-13, f).1.max(f(t))
            }
        }
    }

    /// `dist(a, Ω)`: 0 on the closure, positive outside.
    pub fn distance_from_outside(&self, a: Point) -> f64 {
        if self.contains(a) {
            return 0.0;
        }
        match &self.shape {
            Shape::Disc { center, radius } => (a.dist(*center) - radius).max(0.0),
            Shape::Rectangle { corner, width, height } => {
                let dx = (corner.x - a.x).max(a.x - corner.x - width).max(0.0);
                let dy = (corner.y - a.y).max(a.y - corner.y - height).max(0.0);
                dx.hypot(dy)
            }
            Shape::Ellipse { center, semi_axes, rotation } => {
                let q = (a - *center).rotate(-rotation);
                ellipse::distance_to_ellipse(semi_axes.0, semi_axes.1, q)
            }
            Shape::ConvexPolygon(p) => {
                let v = p.vertices();
                (0..v.len())
                    .map(|i| mask::segment_distance(a, v[i], v[(i + 1) % v.len()]))
                    .fold(f64::INFINITY, f64::min)
            }
            Shape::Mask(m) => m
                .segments()
                .iter()
                .map(|&(p, q)| mask::segment_distance(a, p, q))
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// Angle `θ` minimizing the directional extent, with the extent there.
    pub fn min_width_direction(&self) -> (f64, f64) {
        let x0 = self.incenter();
        let step = PI / MASK_WIDTH_ANGLES as f64;
        let samples: Vec<f64> = (0..MASK_WIDTH_ANGLES).map(|k| self.extent_about(x0, k as f64 * step)).collect();
        let k = (0..MASK_WIDTH_ANGLES).min_by(|&a, &b| samples[a].total_cmp(&samples[b])).unwrap_or(0);
        let t = k as f64 * step;
        let (tr, wr) = golden_min(t - step, t + step, 1e-13, |th| self.extent_about(x0, th));
        if wr < samples[k] {
            (tr.rem_euclid(PI), wr)
        } else {
            (t, samples[k])
        }
    }

    /// Disc packing for the large-field regime `B₀ > R_in⁻²`.
    ///
    /// Discs of radius `ρ = ½ B₀^{-1/2}` are centered on a square lattice of
    /// pitch `2ρ` around the in-center `x₀`, restricted to `|y − x₀| ≤ R_in/2 − ρ`.
    /// Both the node-centered and the cell-centered lattice are tried and the
    /// denser one is kept; centers are listed row by row. At most
    /// `N(B₀) = [R_in² B₀]` discs are returned, and `shortfall` is set when
    /// fewer fit.
    pub fn pack_discs(&self, b0: f64) -> Result<PackingPlan> {
        let r_in = self.inradius();
        if !(b0.is_finite() && b0 > 0.0 && b0 * r_in * r_in > 1.0) {
            return Err(Error::Regime(format!(
                "disc packing needs B0 > R_in^-2 = {}, got B0 = {b0}",
                1.0 / (r_in * r_in)
            )));
        }
        let x0 = self.incenter();
        let target = (r_in * r_in * b0).floor() as usize;
        let rho = 0.5 / b0.sqrt();
        let pitch = 2.0 * rho;
        let reach = 0.5 * r_in - rho;
        let lattice = |offset: f64| -> Vec<Point> {
            if reach < 0.0 {
                return Vec::new();
            }
            let k = (reach / pitch).ceil() as i64 + 1;
            let mut pts = Vec::new();
            for j in -k..=k {
                for i in -k..=k {
                    let p = x0 + Point::new((i as f64 + offset) * pitch, (j as f64 + offset) * pitch);
                    if p.dist(x0) <= reach * (1.0 + 1e-12) {
                        pts.push(p);
                    }
                }
            }
            pts
        };
        let centered = lattice(0.0);
        let shifted = lattice(0.5);
        let mut centers = if shifted.len() > centered.len() { shifted } else { centered };
        centers.truncate(target);
        Ok(PackingPlan {
            count: centers.len(),
            target,
            disc_radius: rho,
            center: x0,
            shortfall: centers.len() < target,
            centers,
        })
    }
}

fn polyline_samples(v: &[Point], n: usize) -> Vec<Point> {
    let per = n.div_ceil(v.len()).max(1);
    (0..v.len())
        .flat_map(|i| {
            let (a, b) = (v[i], v[(i + 1) % v.len()]);
            (0..per).map(move |k| a + (b - a) * (k as f64 / per as f64))
        })
        .collect()
}

fn quadratic_chord(a: f64, b: f64, c: f64) -> Option<(f64, f64)> {
    // Roots of a t² + 2 b t + c = 0.
    let disc = b * b - a * c;
    if disc <= 0.0 || a == 0.0 {
        return None;
    }
    let s = disc.sqrt();
    let q = -(b + b.signum() * s);
    let (r1, r2) = if q == 0.0 { (-s / a, s / a) } else { (q / a, c / q) };
    Some((r1.min(r2), r1.max(r2)))
}

/// Disc packing inside `𝔅(x₀, R_in/2)`.
#[derive(Debug, Clone)]
pub struct PackingPlan {
    /// Number of discs actually placed.
    pub count: usize,
    /// `N(B₀) = [R_in² B₀]`.
    pub target: usize,
    /// `ρ = ½ B₀^{-1/2}`.
    pub disc_radius: f64,
    /// The in-center `x₀`.
    pub center: Point,
    pub centers: Vec<Point>,
    /// Fewer than `target` discs fit on the lattice.
    pub shortfall: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disc_and_rectangle_closed_forms() {
        let d = Domain::unit_disc();
        assert_eq!(d.inradius(), 1.0);
        assert_eq!(d.diameter(), 2.0);
        for k in 0..8 {
            let e = d.directional_extent(Point::ORIGIN, k as f64 * 0.7).unwrap();
            assert!((e - 2.0).abs() < 1e-15);
        }
        let r = Domain::rectangle(Point::ORIGIN, 3.0, 1.0).unwrap();
        assert_eq!(r.inradius(), 0.5);
        assert_eq!(r.min_width(), 1.0);
        assert!((r.boundary_distance(Point::new(1.5, 0.5)) - 0.5).abs() < 1e-15);
        assert_eq!(r.boundary_distance(Point::new(5.0, 0.5)), 0.0);
        assert_eq!(r.boundary_distance(Point::new(0.0, 0.5)), 0.0);
        let r2 = Domain::rectangle(Point::ORIGIN, 2.0, 1.0).unwrap();
        let c = Point::new(1.0, 0.5);
        assert!((r2.directional_extent(c, 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((r2.directional_extent(c, PI / 2.0).unwrap() - 2.0).abs() < 1e-15);
        assert!(r2.directional_extent(Point::new(9.0, 9.0), 0.0).is_err());
        assert!((Domain::unit_square().diameter() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn degenerate_shapes_are_rejected() {
        assert!(Domain::disc(Point::ORIGIN, 0.0).is_err());
        assert!(Domain::rectangle(Point::ORIGIN, 1.0, 0.0).is_err());
        assert!(Domain::ellipse(Point::ORIGIN, (1.0, -1.0), 0.0).is_err());
    }

    #[test]
    fn ellipse_quantities() {
        let e = Domain::ellipse(Point::ORIGIN, (2.0, 0.5), 0.3).unwrap();
        assert_eq!(e.inradius(), 0.5);
        assert!((e.min_width() - 1.0).abs() < 1e-15);
        assert_eq!(e.diameter(), 4.0);
        assert!((e.boundary_distance(Point::ORIGIN) - 0.5).abs() < 1e-12);
        let chord = e.ray_exit(Point::ORIGIN, Point::unit(0.3));
        assert!((chord - 2.0).abs() < 1e-12);
    }

    #[test]
    fn equilateral_triangle_incircle() {
        let s = 2.0;
        let t = Domain::equilateral_triangle(s).unwrap();
        let r = s / (2.0 * 3f64.sqrt());
        assert!((t.inradius() - r).abs() < 1e-12);
        assert!((t.min_width() - s * 3f64.sqrt() / 2.0).abs() < 1e-12);
        assert!((t.min_width() / t.inradius() - 3.0).abs() < 1e-10);
    }

    #[test]
    fn packing_counts() {
        let d = Domain::unit_disc();
        let p = d.pack_discs(4.5).unwrap();
        assert_eq!(p.target, 4);
        let p = d.pack_discs(16.0).unwrap();
        assert_eq!(p.target, 16);
        assert_eq!(p.disc_radius, 0.125);
        assert!(p.centers.iter().all(|c| c.dist(p.center) <= 0.5 - 0.125 + 1e-12));
        assert!(p.shortfall);
        assert!(d.pack_discs(0.5).is_err());
    }

    #[test]
    fn square_area_of_cut_cells() {
        let d = Domain::unit_disc();
        assert!((d.square_area(Point::ORIGIN, 0.1) - 0.01).abs() < 1e-15);
        // arc x = sqrt(1 - y²) through the cell center
        let h: f64 = 0.01;
        let exact = 0.5 * h * h - h.powi(3) / 24.0 - h.powi(5) / 640.0;
        let a = d.square_area(Point::new(1.0, 0.0), h);
        assert!((a - exact).abs() < 1e-12, "{a} vs {exact}");
        let r = Domain::unit_square();
        assert!((r.square_area(Point::new(0.0, 0.0), 0.1) - 0.0025).abs() < 1e-15);
    }
}
