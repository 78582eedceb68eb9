use super::Point;
use crate::error::{Error, Result};

/// A strictly convex polygon with counterclockwise vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

impl ConvexPolygon {
    /// Validates orientation and strict convexity.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::InvalidDomain(format!("polygon needs at least 3 vertices, got {n}")));
        }
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidDomain("non-finite polygon vertex".into()));
        }
        let scale = vertices
            .iter()
            .map(|v| v.x.abs().max(v.y.abs()))
            .fold(0.0, f64::max)
            .max(1e-300);
        let mut turning = 0.0;
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let c = vertices[(i + 2) % n];
            let e1 = b - a;
            let e2 = c - b;
            let cr = e1.cross(e2);
            if cr <= 1e-12 * scale * scale {
                return Err(Error::InvalidDomain(format!(
                    "polygon is not strictly convex and counterclockwise at vertex {}",
                    (i + 1) % n
                )));
            }
            turning += cr.atan2(e1.dot(e2));
        }
        if (turning - std::f64::consts::TAU).abs() > 1e-6 {
            return Err(Error::InvalidDomain("polygon winds more than once".into()));
        }
        Ok(Self { vertices })
    }

    /// Convex hull (Andrew's monotone chain), collinear points dropped.
    pub fn hull(points: &[Point]) -> Result<Self> {
        Self::new(convex_hull(points))
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    fn edge(&self, i: usize) -> (Point, Point) {
        let n = self.vertices.len();
        (self.vertices[i], self.vertices[(i + 1) % n])
    }

    /// Outward unit normal and offset `c` of edge `i`: the edge lies on `n·x = c`.
    pub fn half_plane(&self, i: usize) -> (Point, f64) {
        let (a, b) = self.edge(i);
        let e = b - a;
        let n = Point::new(e.y, -e.x) * (1.0 / e.norm());
        (n, n.dot(a))
    }

    pub fn contains(&self, p: Point) -> bool {
        (0..self.len()).all(|i| {
            let (n, c) = self.half_plane(i);
            n.dot(p) < c
        })
    }

    /// Distance to the boundary for interior points.
    pub fn interior_distance(&self, p: Point) -> f64 {
        (0..self.len())
            .map(|i| {
                let (n, c) = self.half_plane(i);
                c - n.dot(p)
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn area(&self) -> f64 {
        polygon_area(&self.vertices)
    }

    pub fn support(&self, dir: Point) -> f64 {
        self.vertices.iter().map(|v| dir.dot(*v)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Minimal width via a rotating-calipers sweep over edge normals.
    pub fn min_width(&self) -> f64 {
        let v = &self.vertices;
        let n = v.len();
        let height = |i: usize, j: usize| {
            let (a, b) = self.edge(i);
            (b - a).cross(v[j] - a)
        };
        let mut j = 1;
        let mut best = f64::INFINITY;
        for i in 0..n {
            while height(i, (j + 1) % n) > height(i, j) {
                j = (j + 1) % n;
            }
            let (a, b) = self.edge(i);
            best = best.min(height(i, j) / (b - a).norm());
        }
        best
    }

    /// Diameter via antipodal pairs of the calipers sweep.
    pub fn diameter(&self) -> f64 {
        let v = &self.vertices;
        let n = v.len();
        let height = |i: usize, j: usize| {
            let (a, b) = self.edge(i);
            (b - a).cross(v[j] - a)
        };
        let mut j = 1;
        let mut best: f64 = 0.0;
        for i in 0..n {
            while height(i, (j + 1) % n) > height(i, j) {
                j = (j + 1) % n;
            }
            let (a, b) = self.edge(i);
            let k = (j + 1) % n;
            best = best
                .max(a.dist(v[j]))
                .max(b.dist(v[j]))
                .max(a.dist(v[k]))
                .max(b.dist(v[k]));
        }
        best
    }

    /// In-radius and the lexicographically smallest in-center, by bisection on
    /// the inward offset of all edges.
    pub fn incircle(&self) -> (f64, Point) {
        let mut lo = 0.0;
        let mut hi = 0.5 * self.min_width();
        let mut region = self.vertices.clone();
        for _ in 0..200 {
            if hi - lo <= 1e-15 * hi {
                break;
            }
            let mid = 0.5 * (lo + hi);
            let r = self.offset_region(mid);
            if r.is_empty() {
                hi = mid;
            } else {
                lo = mid;
                region = r;
            }
        }
        let center = region
            .iter()
            .copied()
            .fold(region[0], |best, p| if p.lex_lt(best) { p } else { best });
        (lo, center)
    }

    fn offset_region(&self, r: f64) -> Vec<Point> {
        let mut region = self.vertices.clone();
        for i in 0..self.len() {
            let (n, c) = self.half_plane(i);
            region = clip_half_plane(&region, n, c - r);
            if region.is_empty() {
                break;
            }
        }
        region
    }

    /// Parameter interval of `{t : p + t d ∈ Ω}`, if non-empty.
    pub fn chord(&self, p: Point, d: Point) -> Option<(f64, f64)> {
        let mut t0 = f64::NEG_INFINITY;
        let mut t1 = f64::INFINITY;
        for i in 0..self.len() {
            let (n, c) = self.half_plane(i);
            let nd = n.dot(d);
            let slack = c - n.dot(p);
            if nd.abs() < 1e-300 {
                if slack <= 0.0 {
                    return None;
                }
            } else if nd > 0.0 {
                t1 = t1.min(slack / nd);
            } else {
                t0 = t0.max(slack / nd);
            }
        }
        (t0 < t1).then_some((t0, t1))
    }

    /// Area of the intersection with another convex polygon given as a vertex list.
    pub fn clip_area(&self, other: &[Point]) -> f64 {
        let mut region = other.to_vec();
        for i in 0..self.len() {
            let (n, c) = self.half_plane(i);
            region = clip_half_plane(&region, n, c);
            if region.is_empty() {
                return 0.0;
            }
        }
        polygon_area(&region)
    }
}

/// Sutherland–Hodgman clip of a convex polygon by `n·x ≤ c`.
pub fn clip_half_plane(poly: &[Point], n: Point, c: f64) -> Vec<Point> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    let m = poly.len();
    for i in 0..m {
        let a = poly[i];
        let b = poly[(i + 1) % m];
        let fa = n.dot(a) - c;
        let fb = n.dot(b) - c;
        if fa <= 0.0 {
            out.push(a);
        }
        if (fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0) {
            let t = fa / (fa - fb);
            out.push(a + (b - a) * t);
        }
    }
    out
}

/// Signed shoelace area (positive for counterclockwise).
pub fn polygon_area(v: &[Point]) -> f64 {
    let n = v.len();
    if n < 3 {
        return 0.0;
    }
    0.5 * (0..n).map(|i| v[i].cross(v[(i + 1) % n])).sum::<f64>()
}

/// Andrew's monotone chain; returns counterclockwise hull without collinear points.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                if (b - a).cross(p - a) <= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> ConvexPolygon {
        ConvexPolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(4.0, 0.0),
            Point::new(4.0, 1.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn rejects_clockwise_and_collinear() {
        let cw = vec![Point::new(0.0, 0.0), Point::new(0.0, 1.0), Point::new(1.0, 0.0)];
        assert!(ConvexPolygon::new(cw).is_err());
        let col = vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(1.0, 1.0),
        ];
        assert!(ConvexPolygon::new(col).is_err());
    }

    #[test]
    fn rectangle_polygon_quantities() {
        let p = square();
        assert!((p.area() - 4.0).abs() < 1e-15);
        assert!((p.min_width() - 1.0).abs() < 1e-15);
        assert!((p.diameter() - 17f64.sqrt()).abs() < 1e-14);
        let (r, c) = p.incircle();
        assert!((r - 0.5).abs() < 1e-12);
        // lexicographically smallest in-center of the 4x1 rectangle
        assert!((c.x - 0.5).abs() < 1e-9 && (c.y - 0.5).abs() < 1e-9);
    }

    #[test]
    fn hull_drops_interior_points() {
        let pts = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.5, 0.2),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
            Point::new(0.5, 0.0),
        ];
        let h = ConvexPolygon::hull(&pts).unwrap();
        assert_eq!(h.len(), 4);
    }

    #[test]
    fn chord_through_square() {
        let p = square();
        let (t0, t1) = p.chord(Point::new(1.0, 0.5), Point::new(1.0, 0.0)).unwrap();
        assert!((t0 + 1.0).abs() < 1e-15 && (t1 - 3.0).abs() < 1e-15);
        assert!(p.chord(Point::new(0.0, 2.0), Point::new(1.0, 0.0)).is_none());
    }
}
