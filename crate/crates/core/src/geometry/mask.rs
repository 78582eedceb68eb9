use super::polygon::{convex_hull, ConvexPolygon};
use super::Point;
use crate::error::{Error, Result};
use crate::par;

/// A raster domain: the interior of the union of the marked square cells.
///
/// Cell `(i, j)` covers `[ox + i·c, ox + (i+1)·c] × [oy + j·c, oy + (j+1)·c]`
/// and is stored at index `j·nx + i`.
#[derive(Debug, Clone)]
pub struct Mask {
    origin: Point,
    cell: f64,
    nx: usize,
    ny: usize,
    cells: Vec<bool>,
    segments: Vec<(Point, Point)>,
    hull: Vec<Point>,
}

impl Mask {
    pub fn new(origin: Point, cell: f64, nx: usize, ny: usize, cells: Vec<bool>) -> Result<Self> {
        if !(cell > 0.0 && cell.is_finite()) || !origin.is_finite() {
            return Err(Error::InvalidDomain("mask needs a positive cell size and finite origin".into()));
        }
        if cells.len() != nx * ny {
            return Err(Error::InvalidDomain(format!(
                "mask has {} cells, expected {}x{}",
                cells.len(),
                nx,
                ny
            )));
        }
        if !cells.iter().any(|&c| c) {
            return Err(Error::DegenerateDomain("mask has no interior cell".into()));
        }
        let mut mask = Self { origin, cell, nx, ny, cells, segments: Vec::new(), hull: Vec::new() };
        mask.segments = mask.boundary_segments();
        let mut corners = Vec::new();
        for j in 0..ny {
            for i in 0..nx {
                if mask.cells[j * nx + i] {
                    for (di, dj) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                        corners.push(mask.corner(i + di, j + dj));
                    }
                }
            }
        }
        mask.hull = convex_hull(&corners);
        Ok(mask)
    }

    /// Builds a mask from text rows, `'#'` marking interior cells. The first
    /// row is the top of the raster.
    pub fn from_rows<S: AsRef<str>>(origin: Point, cell: f64, rows: &[S]) -> Result<Self> {
        let ny = rows.len();
        let nx = rows.first().map(|r| r.as_ref().chars().count()).unwrap_or(0);
        if rows.iter().any(|r| r.as_ref().chars().count() != nx) {
            return Err(Error::InvalidDomain("mask rows have unequal length".into()));
        }
        let mut cells = vec![false; nx * ny];
        for (r, row) in rows.iter().enumerate() {
            let j = ny - 1 - r;
            for (i, ch) in row.as_ref().chars().enumerate() {
                cells[j * nx + i] = ch == '#';
            }
        }
        Self::new(origin, cell, nx, ny, cells)
    }

    pub fn origin(&self) -> Point {
        self.origin
    }

    pub fn cell(&self) -> f64 {
        self.cell
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn cells(&self) -> &[bool] {
        &self.cells
    }

    /// Text rows in the format accepted by [`Mask::from_rows`].
    pub fn to_rows(&self) -> Vec<String> {
        (0..self.ny)
            .rev()
            .map(|j| (0..self.nx).map(|i| if self.cells[j * self.nx + i] { '#' } else { '.' }).collect())
            .collect()
    }

    fn corner(&self, i: usize, j: usize) -> Point {
        Point::new(self.origin.x + i as f64 * self.cell, self.origin.y + j as f64 * self.cell)
    }

    fn cell_center(&self, i: usize, j: usize) -> Point {
        Point::new(
            self.origin.x + (i as f64 + 0.5) * self.cell,
            self.origin.y + (j as f64 + 0.5) * self.cell,
        )
    }

    pub fn inside_cell(&self, i: isize, j: isize) -> bool {
        i >= 0
            && j >= 0
            && (i as usize) < self.nx
            && (j as usize) < self.ny
            && self.cells[j as usize * self.nx + i as usize]
    }

    fn locate(&self, p: Point) -> (isize, isize) {
        (
            ((p.x - self.origin.x) / self.cell).floor() as isize,
            ((p.y - self.origin.y) / self.cell).floor() as isize,
        )
    }

    fn boundary_segments(&self) -> Vec<(Point, Point)> {
        let mut segs = Vec::new();
        for j in 0..self.ny {
            for i in 0..self.nx {
                if !self.cells[j * self.nx + i] {
                    continue;
                }
                let (ii, jj) = (i as isize, j as isize);
                if !self.inside_cell(ii - 1, jj) {
                    segs.push((self.corner(i, j), self.corner(i, j + 1)));
                }
                if !self.inside_cell(ii + 1, jj) {
                    segs.push((self.corner(i + 1, j), self.corner(i + 1, j + 1)));
                }
                if !self.inside_cell(ii, jj - 1) {
                    segs.push((self.corner(i, j), self.corner(i + 1, j)));
                }
                if !self.inside_cell(ii, jj + 1) {
                    segs.push((self.corner(i, j + 1), self.corner(i + 1, j + 1)));
                }
            }
        }
        segs
    }

    pub fn contains(&self, p: Point) -> bool {
        let (i, j) = self.locate(p);
        self.inside_cell(i, j)
    }

    pub fn area(&self) -> f64 {
        self.cells.iter().filter(|&&c| c).count() as f64 * self.cell * self.cell
    }

    pub fn bounding_box(&self) -> (Point, Point) {
        let lo = self.hull.iter().fold(Point::new(f64::INFINITY, f64::INFINITY), |a, p| {
            Point::new(a.x.min(p.x), a.y.min(p.y))
        });
        let hi = self.hull.iter().fold(Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY), |a, p| {
            Point::new(a.x.max(p.x), a.y.max(p.y))
        });
        (lo, hi)
    }

    /// Exact distance from an interior point to the boundary of the cell union.
    pub fn interior_distance(&self, p: Point) -> f64 {
        self.segments
            .iter()
            .map(|&(a, b)| segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn support(&self, dir: Point) -> f64 {
        self.hull.iter().map(|v| dir.dot(*v)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Unit-length boundary edges of the cell union.
    pub fn segments(&self) -> &[(Point, Point)] {
        &self.segments
    }

    pub fn hull(&self) -> &[Point] {
        &self.hull
    }

    pub fn diameter(&self) -> f64 {
        match ConvexPolygon::new(self.hull.clone()) {
            Ok(poly) => poly.diameter(),
            Err(_) => {
                let h = &self.hull;
                let mut d: f64 = 0.0;
                for a in h {
                    for b in h {
                        d = d.max(a.dist(*b));
                    }
                }
                d
            }
        }
    }

    /// Largest distance to the boundary over interior cell centers, with the
    /// lexicographically smallest maximizing center. Resolution: `cell/√2`.
    pub fn incircle(&self) -> (f64, Point) {
        let centers: Vec<Point> = (0..self.ny)
            .flat_map(|j| (0..self.nx).map(move |i| (i, j)))
            .filter(|&(i, j)| self.cells[j * self.nx + i])
            .map(|(i, j)| self.cell_center(i, j))
            .collect();
        let dists = par::map_slice(&centers, |&p| self.interior_distance(p));
        let mut best = (f64::NEG_INFINITY, centers[0]);
        for (&p, &d) in centers.iter().zip(&dists) {
            if d > best.0 || (d == best.0 && p.lex_lt(best.1)) {
                best = (d, p);
            }
        }
        best
    }

    /// Distance along the unit direction `d` from an interior point to the
    /// first boundary crossing (grid traversal).
    pub fn ray_exit(&self, p: Point, d: Point) -> f64 {
        let (mut i, mut j) = self.locate(p);
        if !self.inside_cell(i, j) {
            return 0.0;
        }
        let (step_i, mut t_x, dt_x) = axis_setup(p.x, d.x, self.origin.x, self.cell, i);
        let (step_j, mut t_y, dt_y) = axis_setup(p.y, d.y, self.origin.y, self.cell, j);
        loop {
            let t;
            if t_x < t_y {
                t = t_x;
                i += step_i;
                t_x += dt_x;
            } else {
                t = t_y;
                j += step_j;
                t_y += dt_y;
            }
            if !t.is_finite() {
                return f64::INFINITY;
            }
            if !self.inside_cell(i, j) {
                return t;
            }
        }
    }

    /// Length of the part of segment `[a, b]` inside the mask.
    pub fn segment_inside_length(&self, a: Point, b: Point) -> f64 {
        let len = a.dist(b);
        if len == 0.0 {
            return 0.0;
        }
        let d = (b - a) * (1.0 / len);
        let (mut i, mut j) = self.locate(a);
        let (step_i, mut t_x, dt_x) = axis_setup(a.x, d.x, self.origin.x, self.cell, i);
        let (step_j, mut t_y, dt_y) = axis_setup(a.y, d.y, self.origin.y, self.cell, j);
        let mut t = 0.0;
        let mut inside = 0.0;
        while t < len {
            let next = t_x.min(t_y).min(len);
            if self.inside_cell(i, j) {
                inside += next - t;
            }
            t = next;
            if t_x < t_y {
                i += step_i;
                t_x += dt_x;
            } else {
                j += step_j;
                t_y += dt_y;
            }
        }
        inside
    }

    /// Area of the axis-aligned square of side `h` centered at `c` inside the mask.
    pub fn square_area(&self, c: Point, h: f64) -> f64 {
        let (x0, x1) = (c.x - 0.5 * h, c.x + 0.5 * h);
        let (y0, y1) = (c.y - 0.5 * h, c.y + 0.5 * h);
        let (i0, j0) = self.locate(Point::new(x0, y0));
        let (i1, j1) = self.locate(Point::new(x1, y1));
        let mut area = 0.0;
        for j in j0.max(0)..=j1.min(self.ny as isize - 1) {
            for i in i0.max(0)..=i1.min(self.nx as isize - 1) {
                if !self.inside_cell(i, j) {
                    continue;
                }
                let cx0 = self.origin.x + i as f64 * self.cell;
                let cy0 = self.origin.y + j as f64 * self.cell;
                let ox = (x1.min(cx0 + self.cell) - x0.max(cx0)).max(0.0);
                let oy = (y1.min(cy0 + self.cell) - y0.max(cy0)).max(0.0);
                area += ox * oy;
            }
        }
        area
    }

    /// Digital convexity: every cell whose center lies in the convex hull of
    /// the interior cell centers is itself interior.
    pub fn is_digitally_convex(&self) -> bool {
        let centers: Vec<Point> = (0..self.ny)
            .flat_map(|j| (0..self.nx).map(move |i| (i, j)))
            .filter(|&(i, j)| self.cells[j * self.nx + i])
            .map(|(i, j)| self.cell_center(i, j))
            .collect();
        let hull = convex_hull(&centers);
        let tol = 1e-9 * self.cell;
        let in_hull = |p: Point| -> bool {
            match hull.len() {
                0 => false,
                1 => p.dist(hull[0]) <= tol,
                2 => {
                    let (a, b) = (hull[0], hull[1]);
                    let e = b - a;
                    let t = (p - a).dot(e) / e.norm2();
                    (-1e-12..=1.0 + 1e-12).contains(&t) && (p - a).cross(e).abs() <= tol * e.norm()
                }
                n => (0..n).all(|k| {
                    let a = hull[k];
                    let b = hull[(k + 1) % n];
                    (b - a).cross(p - a) >= -tol * (b - a).norm()
                }),
            }
        };
        for j in 0..self.ny {
            for i in 0..self.nx {
                if !self.cells[j * self.nx + i] && in_hull(self.cell_center(i, j)) {
                    return false;
                }
            }
        }
        true
    }
}

fn axis_setup(p: f64, d: f64, origin: f64, cell: f64, idx: isize) -> (isize, f64, f64) {
    if d > 0.0 {
        (1, (origin + (idx + 1) as f64 * cell - p) / d, cell / d)
    } else if d < 0.0 {
        (-1, (origin + idx as f64 * cell - p) / d, -cell / d)
    } else {
        (0, f64::INFINITY, f64::INFINITY)
    }
}

pub(crate) fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let e = b - a;
    let t = ((p - a).dot(e) / e.norm2()).clamp(0.0, 1.0);
    p.dist(a + e * t)
}
