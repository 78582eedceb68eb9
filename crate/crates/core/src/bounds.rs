//! Eigenvalue bounds as validity-guarded formulas.
//!
//! Every function returns [`BoundReport`]s that carry the bound value, the
//! quantity it bounds, the preconditions that failed, and the intermediate
//! values used. Numerical inputs such as `λ₁(Ω,0)`, `Δλ` and `φ₁` come from
//! the [`spectral`](crate::spectral) module.

use crate::error::Result;
use crate::fields::MagneticField;
use crate::flux_lemma::{lemma_constants, printed_f1_large, printed_f1_small, DEFAULT_SAMPLES};
use crate::geometry::{Domain, Point};
use crate::par;
use crate::quadrature::{golden_max, GaussRule};
use crate::spectral::{self, BoundaryCondition, GridFunction, NonMagnetic, SolverOptions};
use crate::J0_1;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::{E, PI};

/// Identifiers accepted in a configuration's bound list.
pub const BOUND_IDS: &[&str] = &[
    "baseline",
    "first_type_general",
    "first_type_const",
    "upper_bound",
    "disc_sandwich",
    "faber_krahn",
    "second_type",
    "cor_small_b",
    "cor_large_b",
    "gap_floor",
    "neumann_lower",
];

/// Log-spaced radii in the search for `sup_R`.
pub const RADIUS_GRID: usize = 32;
/// Side of the base-point lattice for `sup_y`.
pub const BASE_POINT_GRID: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Lower,
    Upper,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Lower => "lower",
            Kind::Upper => "upper",
        }
    }
}

/// The quantity a bound refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    /// `λ₁(Ω,B)`.
    DirichletLambda1,
    /// `Δλ = λ₂(Ω,0) − λ₁(Ω,0)`.
    DirichletGap,
    /// `λ₁(Ω,B) − λ₁(Ω,0)`.
    DirichletShift,
    /// `μ₁(Ω,B)`.
    NeumannMu1,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub kind: Kind,
    pub value: f64,
    pub target: Target,
    pub valid: bool,
    pub violations: Vec<String>,
    pub inputs: BTreeMap<String, f64>,
    /// True when every constant is one the toolkit derives itself.
    pub certified: bool,
}

impl BoundReport {
    fn new(name: &str, kind: Kind, target: Target, value: f64) -> Self {
        Self {
            name: name.to_owned(),
            kind,
            value,
            target,
            valid: true,
            violations: Vec::new(),
            inputs: BTreeMap::new(),
            certified: true,
        }
    }

    fn input(mut self, key: &str, v: f64) -> Self {
        self.inputs.insert(key.to_owned(), v);
        self
    }

    fn require(mut self, ok: bool, what: impl Into<String>) -> Self {
        if !ok {
            self.valid = false;
            self.violations.push(what.into());
        }
        self
    }

    fn printed(mut self) -> Self {
        self.certified = false;
        self
    }

    /// Signed distance from violation: `truth − value` for lower bounds and
    /// `value − truth` for upper bounds.
    pub fn margin(&self, truth: f64) -> f64 {
        match self.kind {
            Kind::Lower => truth - self.value,
            Kind::Upper => self.value - truth,
        }
    }

    pub fn holds(&self, truth: f64, slack: f64) -> bool {
        self.margin(truth) >= -slack
    }
}

/// `λ₁(Ω,B₀) ≥ |B₀|` and `λ₁(Ω,B₀) ≥ λ₁(Ω,0)`.
pub fn baseline_bounds(b0: f64, lambda1_0: f64) -> [BoundReport; 2] {
    [
        BoundReport::new("commutator", Kind::Lower, Target::DirichletLambda1, b0.abs()).input("B0", b0),
        BoundReport::new("diamagnetic", Kind::Lower, Target::DirichletLambda1, lambda1_0).input("lambda1_0", lambda1_0),
    ]
}

/// `λ₁(Ω,B) ≥ max(inf B, −sup B) + e^{−2·osc} λ₁(Ω,0)` for a super potential
/// of oscillation `osc` over the domain.
pub fn first_type_general(domain: &Domain, field: &MagneticField, osc: f64, lambda1_0: f64) -> BoundReport {
    let (lo, hi) = field.range_over(domain);
    let sign_term = lo.max(-hi);
    let value = sign_term + (-2.0 * osc).exp() * lambda1_0;
    BoundReport::new("first_type_general", Kind::Lower, Target::DirichletLambda1, value)
        .input("osc", osc)
        .input("inf_B", lo)
        .input("sup_B", hi)
        .input("lambda1_0", lambda1_0)
        .require(osc >= 0.0 && osc.is_finite(), "oscillation must be finite and nonnegative")
        .require(lambda1_0 > 0.0, "lambda1(0) must be positive")
}

/// `λ₁(Ω,B₀) ≥ |B₀| + e^{−|B₀|ℓ(Ω)²/4} λ₁(Ω,0)`.
pub fn first_type_const(domain: &Domain, b0: f64, lambda1_0: f64) -> BoundReport {
    let ell = domain.min_width();
    let value = b0.abs() + (-0.25 * b0.abs() * ell * ell).exp() * lambda1_0;
    BoundReport::new("first_type_const", Kind::Lower, Target::DirichletLambda1, value)
        .input("ell", ell)
        .input("B0", b0)
        .input("lambda1_0", lambda1_0)
        .require(b0 != 0.0, "B0 must be nonzero")
}

/// `λ₁(Ω,B₀) ≤ B₀ + e B₀² R_in² e^{−B₀R_in²/2}`, valid for `B₀R_in² ≥ 4`.
pub fn upper_bound(domain: &Domain, b0: f64) -> BoundReport {
    let r = domain.inradius();
    let t = b0.abs() * r * r;
    let value = b0.abs() + E * b0 * b0 * r * r * (-0.5 * t).exp();
    BoundReport::new("upper_bound", Kind::Upper, Target::DirichletLambda1, value)
        .input("R_in", r)
        .input("B0R_in2", t)
        .require(t >= 4.0, format!("needs B0*R_in^2 >= 4, got {t}"))
}

/// `B₀(1 + j₀,₁²/(B₀R²) e^{−B₀R²/2}) ≤ λ₁(𝔅(0,R),B₀) ≤ B₀(1 + e B₀R² e^{−B₀R²/2})`
/// for `B₀R² ≥ 4`.
pub fn disc_sandwich(radius: f64, b0: f64) -> [BoundReport; 2] {
    let b = b0.abs();
    let t = b * radius * radius;
    let decay = (-0.5 * t).exp();
    let lower = b * (1.0 + J0_1 * J0_1 / t * decay);
    let upper = b * (1.0 + E * t * decay);
    let gate = |r: BoundReport| r.input("B0R2", t).require(t >= 4.0, format!("needs B0*R^2 >= 4, got {t}"));
    [
        gate(BoundReport::new("disc_sandwich_lower", Kind::Lower, Target::DirichletLambda1, lower)),
        gate(BoundReport::new("disc_sandwich_upper", Kind::Upper, Target::DirichletLambda1, upper)),
    ]
}

/// `λ₁(Ω,B₀) ≥ λ₁(𝔅,B₀)` for the disc of equal area, evaluated by
/// extrapolating eigensolves at `h` and `h/2`. The disc shares the domain's
/// in-center so that a disc compares exactly with itself.
pub fn faber_krahn_compare(domain: &Domain, b0: f64, h: f64, opts: &SolverOptions) -> Result<BoundReport> {
    let r_eq = (domain.area() / PI).sqrt();
    let disc = Domain::disc(domain.incenter(), r_eq)?;
    let field = MagneticField::Constant(b0);
    let coarse = spectral::solve_magnetic(&disc, &field, BoundaryCondition::Dirichlet, h, opts)?;
    let fine = spectral::solve_magnetic(&disc, &field, BoundaryCondition::Dirichlet, 0.5 * h, opts)?;
    let value = spectral::extrapolate(&coarse, &fine)?[0];
    Ok(BoundReport::new("faber_krahn", Kind::Lower, Target::DirichletLambda1, value)
        .input("R_eq", r_eq)
        .input("lambda1_disc_raw", fine.lowest()))
}

/// `inf`, `sup` and integral of `φ₁²` over a disc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscStats {
    pub inf: f64,
    pub sup: f64,
    pub integral: f64,
}

/// Evaluates `φ₁²` from its bilinear interpolant: the integral by a polar
/// rule resolving the lattice spacing, the extrema over lattice sites in the
/// disc together with the quadrature points and the bounding circle.
pub fn disc_stats(phi: &GridFunction, y: Point, r: f64) -> DiscStats {
    let h = phi.lattice.h;
    let rule = GaussRule::new(4);
    let panels = ((r / (2.0 * h)).ceil() as usize).max(2);
    let angles = ((PI * r / h).ceil() as usize).max(32);
    let dtheta = 2.0 * PI / angles as f64;
    let dirs: Vec<Point> = (0..angles).map(|k| Point::unit(k as f64 * dtheta)).collect();
    let (mut inf, mut sup) = (f64::INFINITY, 0.0f64);
    let mut see = |v: f64| {
        inf = inf.min(v);
        sup = sup.max(v);
    };
    let mut integral = 0.0;
    let dr = r / panels as f64;
    for p in 0..panels {
        for (s, w) in rule.on(p as f64 * dr, (p + 1) as f64 * dr) {
            let mut ring = 0.0;
            for d in &dirs {
                let v = phi.eval(y + *d * s).powi(2);
                see(v);
                ring += v;
            }
            integral += w * s * ring * dtheta;
        }
    }
    for d in &dirs {
        see(phi.eval(y + *d * r).powi(2));
    }
    for (_, v) in phi.nodes_in_disc(y, r) {
        see(v * v);
    }
    DiscStats { inf, sup, integral }
}

/// The chain `F₂ = ½F₁·inf φ₁²/sup φ₁²`, `β = Δλ/4`, `F₃ = F₂β/(F₂ + β)` and
/// the candidate `F₃ ∫φ₁²` for one disc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscTerms {
    pub radius: f64,
    pub f1: f64,
    pub f2: f64,
    pub beta: f64,
    pub f3: f64,
    /// `inf φ₁²/sup φ₁²`.
    pub ratio: f64,
    pub integral: f64,
    pub value: f64,
}

impl DiscTerms {
    pub fn new(f1: f64, stats: DiscStats, gap: f64, radius: f64) -> Self {
        let ratio = if stats.sup > 0.0 { stats.inf / stats.sup } else { 0.0 };
        let f2 = 0.5 * f1 * ratio;
        let beta = 0.25 * gap;
        let f3 = if f2 + beta > 0.0 { f2 * beta / (f2 + beta) } else { 0.0 };
        Self { radius, f1, f2, beta, f3, ratio, integral: stats.integral, value: f3 * stats.integral }
    }

    fn record(&self, r: BoundReport) -> BoundReport {
        r.input("R", self.radius)
            .input("F1", self.f1)
            .input("F2", self.f2)
            .input("F3", self.f3)
            .input("beta", self.beta)
            .input("Q", self.radius * self.radius * self.ratio)
            .input("int_phi1_sq", self.integral)
    }
}

/// `sup_{lo<R<hi} f(R)` over log-spaced radii with golden-section refinement
/// next to the best one.
fn sup_over_radius(lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let n = RADIUS_GRID;
    let rs: Vec<f64> = (0..n).map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64)).collect();
    let vals: Vec<f64> = rs.iter().map(|&r| f(r)).collect();
    let k = (0..n).max_by(|&a, &b| vals[a].total_cmp(&vals[b])).expect("radius grid");
    let (a, b) = (rs[k.saturating_sub(1)], rs[(k + 1).min(n - 1)]);
    let (r, v) = golden_max(a, b, 1e-6 * (b - a), &f);
    if v > vals[k] {
        (r, v)
    } else {
        (rs[k], vals[k])
    }
}

/// Search interval `(h, δ(y))` for the disc radius, or `None` when empty.
fn radius_interval(domain: &Domain, y: Point, h: f64) -> Option<(f64, f64)> {
    let delta = domain.boundary_distance(y);
    let hi = delta * (1.0 - 1e-9);
    (hi > 2.0 * h).then_some((h, hi))
}

fn second_type_terms(field: &MagneticField, y: Point, nonmag: &NonMagnetic, r: f64) -> DiscTerms {
    let f1 = lemma_constants(field, y, r, DEFAULT_SAMPLES).f1;
    DiscTerms::new(f1, disc_stats(&nonmag.ground_state, y, r), nonmag.gap(), r)
}

/// `λ₁(Ω,B) − λ₁(Ω,0) ≥ D(y,B) = sup_{0<R<δ(y)} F₃ ∫_{𝔅(y,R)} φ₁²` with
/// `F₁ = 1/c₁` from the flux lemma.
pub fn second_type(domain: &Domain, field: &MagneticField, y: Point, nonmag: &NonMagnetic) -> BoundReport {
    let base = |v: f64| {
        BoundReport::new("second_type", Kind::Lower, Target::DirichletShift, v)
            .input("y_x", y.x)
            .input("y_y", y.y)
            .input("delta_lambda", nonmag.gap())
    };
    let h = nonmag.ground_state.lattice.h;
    let Some((lo, hi)) = radius_interval(domain, y, h) else {
        return base(0.0).require(false, "base point is within two grid cells of the boundary");
    };
    if !lemma_constants(field, y, hi, DEFAULT_SAMPLES).positive {
        return base(0.0).require(false, "flux vanishes on every disc about y");
    }
    let (r, _) = sup_over_radius(lo, hi, |r| second_type_terms(field, y, nonmag, r).value);
    let t = second_type_terms(field, y, nonmag, r);
    t.record(base(t.value))
}

/// The largest `D(y,B)` over `ys`.
pub fn second_type_best(domain: &Domain, field: &MagneticField, ys: &[Point], nonmag: &NonMagnetic) -> BoundReport {
    par::map_slice(ys, |y| second_type(domain, field, *y, nonmag))
        .into_iter()
        .max_by(|a, b| a.value.total_cmp(&b.value))
        .unwrap_or_else(|| {
            BoundReport::new("second_type", Kind::Lower, Target::DirichletShift, 0.0).require(false, "no base points")
        })
}

/// Candidate base points for `sup_y`: the in-center followed by the nodes of
/// a `9 × 9` lattice over the bounding box that lie more than two grid cells
/// inside the domain.
pub fn base_points(domain: &Domain, h: f64) -> Vec<Point> {
    let (lo, hi) = domain.bounding_box();
    let n = BASE_POINT_GRID;
    let mut ys = vec![domain.incenter()];
    for j in 0..n {
        for i in 0..n {
            let p = Point::new(
                lo.x + (hi.x - lo.x) * (i as f64 + 1.0) / (n as f64 + 1.0),
                lo.y + (hi.y - lo.y) * (j as f64 + 1.0) / (n as f64 + 1.0),
            );
            if domain.boundary_distance(p) > 2.0 * h {
                ys.push(p);
            }
        }
    }
    ys
}

/// Small-field second-type bound, `B₀ ≤ R_in⁻²`. Returns the printed form
/// `(B₀²/8) sup_y sup_R QΔλ/(B₀²Q + 3Δλ) ∫φ₁²` with `Q = R² inf φ₁²/sup φ₁²`,
/// and the certified form `sup_y D(y,B₀)` with `F₁ = 1/c₁`.
pub fn cor_small_b(domain: &Domain, b0: f64, nonmag: &NonMagnetic) -> [BoundReport; 2] {
    let r_in = domain.inradius();
    let h = nonmag.ground_state.lattice.h;
    let gap = nonmag.gap();
    let field = MagneticField::Constant(b0);
    let ys = base_points(domain, h);
    let b2 = b0 * b0;
    let printed_at = |y: Point| -> (f64, f64, Point) {
        let Some((lo, hi)) = radius_interval(domain, y, h) else {
            return (0.0, 0.0, y);
        };
        let f = |r: f64| {
            let s = disc_stats(&nonmag.ground_state, y, r);
            let q = r * r * s.inf / s.sup;
            b2 / 8.0 * q * gap / (b2 * q + 3.0 * gap) * s.integral
        };
        let (r, v) = sup_over_radius(lo, hi, f);
        (v, r, y)
    };
    let printed = par::map_slice(&ys, |y| printed_at(*y))
        .into_iter()
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .unwrap_or((0.0, 0.0, Point::ORIGIN));
    let gate = |r: BoundReport| {
        r.input("B0", b0)
            .input("R_in", r_in)
            .input("delta_lambda", gap)
            .input("base_points", ys.len() as f64)
            .require(b0 * r_in * r_in <= 1.0, format!("needs B0 <= R_in^-2 = {}", 1.0 / (r_in * r_in)))
    };
    let a = gate(BoundReport::new("cor_small_b_printed", Kind::Lower, Target::DirichletShift, printed.0))
        .input("R", printed.1)
        .input("y_x", printed.2.x)
        .input("y_y", printed.2.y)
        .input("F1_printed", printed_f1_small(b0, printed.1))
        .printed();
    let mut b = gate(second_type_best(domain, &field, &ys, nonmag));
    b.name = "cor_small_b_certified".into();
    [a, b]
}

/// Large-field second-type bound, `B₀ > R_in⁻²`, summed over the disc
/// packing of radius `ρ = ½B₀^{-1/2}`. Returns the printed form
/// `(B₀/8) Σ_j Q_jΔλ/(B₀Q_j + 12Δλ) ∫_{𝔅(y_j,ρ)} φ₁²` with
/// `Q_j = inf φ₁²/sup φ₁²`, and the certified form `Σ_j F₃,j ∫_{𝔅(y_j,ρ)} φ₁²`
/// with `F₁ = 1/c₁` on each disc.
pub fn cor_large_b(domain: &Domain, b0: f64, nonmag: &NonMagnetic) -> [BoundReport; 2] {
    let r_in = domain.inradius();
    let gap = nonmag.gap();
    let field = MagneticField::Constant(b0);
    let head = |name: &str, v: f64| {
        BoundReport::new(name, Kind::Lower, Target::DirichletShift, v)
            .input("B0", b0)
            .input("R_in", r_in)
            .input("delta_lambda", gap)
    };
    let plan = match domain.pack_discs(b0) {
        Ok(p) => p,
        Err(e) => {
            return [
                head("cor_large_b_printed", 0.0).require(false, e.to_string()).printed(),
                head("cor_large_b_certified", 0.0).require(false, e.to_string()),
            ]
        }
    };
    let rho = plan.disc_radius;
    let stats = par::map_slice(&plan.centers, |y| disc_stats(&nonmag.ground_state, *y, rho));
    let printed: f64 = stats
        .iter()
        .map(|s| {
            let q = s.inf / s.sup;
            b0 / 8.0 * q * gap / (b0 * q + 12.0 * gap) * s.integral
        })
        .sum();
    let terms: Vec<DiscTerms> = plan
        .centers
        .iter()
        .zip(&stats)
        .map(|(y, s)| DiscTerms::new(lemma_constants(&field, *y, rho, DEFAULT_SAMPLES).f1, *s, gap, rho))
        .collect();
    let certified: f64 = terms.iter().map(|t| t.value).sum();
    let pack = |r: BoundReport| {
        r.input("N", plan.count as f64)
            .input("N_target", plan.target as f64)
            .input("rho", rho)
            .input("sum_B0_int_phi1_sq", b0 * stats.iter().map(|s| s.integral).sum::<f64>())
    };
    let a = pack(head("cor_large_b_printed", printed)).input("F1_printed", printed_f1_large(b0)).printed();
    let mut b = pack(head("cor_large_b_certified", certified));
    if let Some(t) = terms.first() {
        b = b.input("F1", t.f1).input("F3", t.f3);
    }
    [a, b]
}

/// `Δλ ≥ 3π²/diam(Ω)²` for convex domains.
pub fn gap_floor(domain: &Domain) -> BoundReport {
    let d = domain.diameter();
    BoundReport::new("gap_floor", Kind::Lower, Target::DirichletGap, 3.0 * PI * PI / (d * d))
        .input("diameter", d)
        .require(domain.is_convex(), "domain is not convex")
}

/// Neumann lower bounds on `μ₁(Ω,B₀)` from `ψ₁ = |Ω|^{-1/2}` and
/// `μ₂ = μ₂(Ω,0)`: one disc `𝔅(x₀,R)`, `R < R_in`, when `B₀ ≤ R_in⁻²`, and
/// the disc packing otherwise. Each disc contributes
/// `(πR²/|Ω|)·F₁μ₂/(4F₁ + 2μ₂)`. Returns the printed closed form and the
/// certified form with `F₁ = 1/c₁`.
pub fn neumann_lower(domain: &Domain, b0: f64, mu2: f64) -> [BoundReport; 2] {
    let r_in = domain.inradius();
    let area = domain.area();
    let field = MagneticField::Constant(b0);
    let term = |f1: f64, r: f64| PI * r * r / area * f1 * mu2 / (4.0 * f1 + 2.0 * mu2);
    let head = |name: &str, v: f64| {
        BoundReport::new(name, Kind::Lower, Target::NeumannMu1, v)
            .input("B0", b0)
            .input("R_in", r_in)
            .input("area", area)
            .input("mu2", mu2)
            .require(mu2 > 0.0, "mu2 must be positive")
    };
    if b0 * r_in * r_in <= 1.0 {
        let b2 = b0 * b0;
        let printed = PI / (4.0 * area) * b2 * r_in.powi(4) * mu2 / (b2 * r_in * r_in + 6.0 * mu2);
        let x0 = domain.incenter();
        let f1 = |r: f64| lemma_constants(&field, x0, r, DEFAULT_SAMPLES).f1;
        let hi = r_in * (1.0 - 1e-9);
        let (r, v) = sup_over_radius(1e-3 * r_in, hi, |r| term(f1(r), r));
        [
            head("neumann_lower_printed", printed).input("regime_small", 1.0).printed(),
            head("neumann_lower_certified", v).input("regime_small", 1.0).input("R", r).input("F1", f1(r)),
        ]
    } else {
        let plan = match domain.pack_discs(b0) {
            Ok(p) => p,
            Err(e) => {
                return [
                    head("neumann_lower_printed", 0.0).require(false, e.to_string()).printed(),
                    head("neumann_lower_certified", 0.0).require(false, e.to_string()),
                ]
            }
        };
        let n = plan.count as f64;
        let rho = plan.disc_radius;
        let printed = PI / (32.0 * area) * n * mu2 / (b0 + 12.0 * mu2);
        let f1s: Vec<f64> = plan.centers.iter().map(|y| lemma_constants(&field, *y, rho, DEFAULT_SAMPLES).f1).collect();
        let certified: f64 = f1s.iter().map(|&f| term(f, rho)).sum();
        let pack = |r: BoundReport| {
            r.input("regime_small", 0.0).input("N", n).input("N_target", plan.target as f64).input("rho", rho)
        };
        [
            pack(head("neumann_lower_printed", printed)).printed(),
            pack(head("neumann_lower_certified", certified)).input("F1", f1s.first().copied().unwrap_or(0.0)),
        ]
    }
}
