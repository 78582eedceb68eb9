//! Experiment orchestration behind the `magbound` command line: verification
//! of every bound against extrapolated eigenvalues, field-strength sweeps,
//! grid convergence studies, and CSV/SVG output.

mod config;
mod emit;

pub use config::{
    BcSpec, BoundSelection, CaseConfig, Config, DomainSpec, FieldSpec, GapSource, GridSpec, OutputConfig,
    SCHEMA_VERSION,
};
pub use emit::{emit, write_csv, write_svg, CSV_COLUMNS};

use crate::bounds::{self, BoundReport, Target};
use crate::error::{Error, Result};
use crate::fields::{optimize_superpotential, oscillation, Family, MagneticField, SuperPotential};
use crate::geometry::Domain;
use crate::par;
use crate::spectral::{self, BoundaryCondition, NonMagnetic, SolverOptions};
use std::path::Path;
use std::time::Instant;

/// `ε = max(3|extrapolated − fine|, 10⁻⁶|extrapolated|)`.
pub fn slack(extrapolated: f64, fine: f64) -> f64 {
    (3.0 * (extrapolated - fine).abs()).max(1e-6 * extrapolated.abs())
}

/// An eigenvalue from one or two grid levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    /// Value on the finest level.
    pub raw: f64,
    pub extrapolated: f64,
    pub slack: f64,
}

impl Estimate {
    /// From the finest one or two levels of a halving sequence.
    pub fn from_levels(levels: &[f64]) -> Self {
        match levels {
            [coarse, fine] => {
                let e = spectral::richardson(*coarse, *fine);
                Self { raw: *fine, extrapolated: e, slack: slack(e, *fine) }
            }
            [.., coarse, fine] => Self::from_levels(&[*coarse, *fine]),
            [only] => Self { raw: *only, extrapolated: *only, slack: 1e-6 * only.abs() },
            [] => Self { raw: f64::NAN, extrapolated: f64::NAN, slack: f64::NAN },
        }
    }

    pub fn minus(self, o: Estimate) -> Estimate {
        Estimate {
            raw: self.raw - o.raw,
            extrapolated: self.extrapolated - o.extrapolated,
            slack: self.slack + o.slack,
        }
    }
}

/// Lowest eigenvalue extrapolated from `h` and `h/2`.
pub fn estimate_lowest(
    domain: &Domain,
    field: &MagneticField,
    bc: BoundaryCondition,
    h: f64,
    opts: &SolverOptions,
) -> Result<Estimate> {
    let coarse = spectral::solve_magnetic(domain, field, bc, h, opts)?.lowest();
    let fine = spectral::solve_magnetic(domain, field, bc, 0.5 * h, opts)?.lowest();
    Ok(Estimate::from_levels(&[coarse, fine]))
}

/// A bound checked against the estimate of its target.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckedBound {
    pub report: BoundReport,
    pub truth: Estimate,
    /// `report.margin(truth)`; negative beyond the slack means a violation.
    pub margin: f64,
    /// `None` when the report's preconditions fail and no check applies.
    pub pass: Option<bool>,
}

impl CheckedBound {
    fn new(report: BoundReport, truth: Estimate) -> Self {
        let margin = report.margin(truth.extrapolated);
        let pass = report.valid.then(|| report.holds(truth.extrapolated, truth.slack));
        Self { report, truth, margin, pass }
    }
}

/// Results for one boundary condition.
#[derive(Debug, Clone)]
pub struct BcOutcome {
    pub bc: BoundaryCondition,
    /// Finest grid spacing.
    pub h: f64,
    /// `λ₁(Ω,B)` or `μ₁(Ω,B)`.
    pub lambda1: Estimate,
    /// `λ₁(Ω,0)` or `μ₁(Ω,0)`.
    pub lambda1_0: Estimate,
    /// `λ₂(Ω,0)` or `μ₂(Ω,0)`.
    pub lambda2_0: Estimate,
    pub bounds: Vec<CheckedBound>,
}

#[derive(Debug, Clone)]
pub struct VerificationRecord {
    pub case_id: String,
    pub domain: String,
    pub field: String,
    /// The field strength for constant fields.
    pub b0: Option<f64>,
    pub outcomes: Vec<BcOutcome>,
    pub runtime_ms: f64,
}

impl VerificationRecord {
    /// Every applicable check passes.
    pub fn passed(&self) -> bool {
        self.outcomes.iter().flat_map(|o| &o.bounds).all(|b| b.pass != Some(false))
    }

    pub fn outcome(&self, bc: BoundaryCondition) -> Option<&BcOutcome> {
        self.outcomes.iter().find(|o| o.bc == bc)
    }

    pub fn bound(&self, bc: BoundaryCondition, name: &str) -> Option<&CheckedBound> {
        self.outcome(bc)?.bounds.iter().find(|b| b.report.name == name)
    }
}

/// A case with its domain, field and spacing resolved.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub config: CaseConfig,
    pub domain: Domain,
    pub field: MagneticField,
    pub h: f64,
}

impl Prepared {
    pub fn new(config: &CaseConfig, base: &Path) -> Result<Self> {
        let domain = config.domain.build()?;
        let field = config.field.build(base)?;
        let h = config.grid.spacing(&domain)?;
        Ok(Self { config: config.clone(), domain, field, h })
    }

    pub fn with_field(&self, field: MagneticField) -> Self {
        Self { field, ..self.clone() }
    }

    fn levels(&self) -> Vec<f64> {
        if self.config.grid.extrapolate {
            vec![self.h, 0.5 * self.h]
        } else {
            vec![self.h]
        }
    }
}

/// Smallest oscillation over the super-potential families that apply to the
/// field.
pub fn best_oscillation(domain: &Domain, field: &MagneticField) -> Result<f64> {
    match field.as_constant() {
        Some(0.0) => Ok(0.0),
        Some(b) => {
            let (_, radial) = optimize_superpotential(domain, b.abs(), Family::QuadraticRadial)?;
            let (_, strip) = optimize_superpotential(domain, b.abs(), Family::QuadraticDirectional)?;
            Ok(radial.min(strip))
        }
        None => Ok(oscillation(&SuperPotential::newtonian(field.clone(), domain), domain)?.value),
    }
}

struct Levels {
    magnetic: Estimate,
    nonmag: NonMagnetic,
    lambda1_0: Estimate,
    lambda2_0: Estimate,
}

fn solve_levels(p: &Prepared, bc: BoundaryCondition, opts: &SolverOptions) -> Result<Levels> {
    let levels = p.levels();
    let mut mag = Vec::new();
    let mut l1 = Vec::new();
    let mut l2 = Vec::new();
    let mut nonmag = None;
    for &h in &levels {
        let nm = spectral::solve_nonmagnetic(&p.domain, bc, h, opts)?;
        let m = if p.field.is_identically_zero() {
            nm.lambda1
        } else {
            spectral::solve_magnetic(&p.domain, &p.field, bc, h, opts)?.lowest()
        };
        mag.push(m);
        l1.push(nm.lambda1);
        l2.push(nm.lambda2);
        nonmag = Some(nm);
    }
    Ok(Levels {
        magnetic: Estimate::from_levels(&mag),
        nonmag: nonmag.expect("at least one level"),
        lambda1_0: Estimate::from_levels(&l1),
        lambda2_0: Estimate::from_levels(&l2),
    })
}

/// Solves at `h` and `h/2`, extrapolates, evaluates the requested bounds and
/// checks each valid one against the estimate of its target.
pub fn run_verify(p: &Prepared) -> Result<VerificationRecord> {
    let start = Instant::now();
    let ids = p.config.bounds.ids()?;
    let want = |id: &str| ids.iter().any(|s| s == id);
    let opts = &p.config.solver;
    let domain = &p.domain;
    let field = &p.field;
    let b0 = field.as_constant();
    let mut outcomes = Vec::new();
    for bc in p.config.bc.conditions() {
        let lv = solve_levels(p, bc, opts)?;
        let mut nonmag = lv.nonmag;
        let mut lambda2_0 = lv.lambda2_0;
        if p.config.gap_source == GapSource::Floor {
            let floor = bounds::gap_floor(domain);
            if !floor.valid {
                return Err(Error::Config(format!("case {}: gap floor needs a convex domain", p.config.id)));
            }
            nonmag.lambda2 = nonmag.lambda1 + floor.value;
            lambda2_0 = Estimate { extrapolated: lv.lambda1_0.extrapolated + floor.value, ..lambda2_0 };
        }
        let l0 = lv.lambda1_0.extrapolated;
        let mut reports: Vec<BoundReport> = Vec::new();
        match bc {
            BoundaryCondition::Dirichlet => {
                if want("baseline") {
                    let [c, d] = bounds::baseline_bounds(b0.unwrap_or(0.0), l0);
                    if b0.is_some() {
                        reports.push(c);
                    }
                    reports.push(d);
                }
                if want("first_type_general") {
                    let osc = best_oscillation(domain, field)?;
                    reports.push(bounds::first_type_general(domain, field, osc, l0));
                }
                if let Some(b) = b0.filter(|b| *b != 0.0) {
                    if want("first_type_const") {
                        reports.push(bounds::first_type_const(domain, b, l0));
                    }
                    if want("upper_bound") {
                        reports.push(bounds::upper_bound(domain, b));
                    }
                    if want("disc_sandwich") {
                        if let Some((_, r)) = domain.is_disc() {
                            reports.extend(bounds::disc_sandwich(r, b));
                        }
                    }
                    if want("faber_krahn") {
                        reports.push(bounds::faber_krahn_compare(domain, b, p.h, opts)?);
                    }
                }
                if want("second_type") {
                    reports.push(bounds::second_type(domain, field, domain.incenter(), &nonmag));
                }
                if let Some(b) = b0.filter(|b| *b != 0.0) {
                    if want("cor_small_b") {
                        reports.extend(bounds::cor_small_b(domain, b.abs(), &nonmag));
                    }
                    if want("cor_large_b") {
                        reports.extend(bounds::cor_large_b(domain, b.abs(), &nonmag));
                    }
                }
                if want("gap_floor") {
                    reports.push(bounds::gap_floor(domain));
                }
            }
            BoundaryCondition::Neumann => {
                if let Some(b) = b0.filter(|b| *b != 0.0) {
                    if want("neumann_lower") {
                        reports.extend(bounds::neumann_lower(domain, b.abs(), nonmag.lambda2));
                    }
                }
            }
        }
        let truth = |t: Target| match t {
            Target::DirichletLambda1 | Target::NeumannMu1 => lv.magnetic,
            Target::DirichletShift => lv.magnetic.minus(lv.lambda1_0),
            Target::DirichletGap => lambda2_0.minus(lv.lambda1_0),
        };
        let bounds = reports.into_iter().map(|r| {
            let t = truth(r.target);
            CheckedBound::new(r, t)
        });
        outcomes.push(BcOutcome {
            bc,
            h: *p.levels().last().expect("levels"),
            lambda1: lv.magnetic,
            lambda1_0: lv.lambda1_0,
            lambda2_0,
            bounds: bounds.collect(),
        });
    }
    Ok(VerificationRecord {
        case_id: p.config.id.clone(),
        domain: domain.describe(),
        field: field.describe(),
        b0,
        outcomes,
        runtime_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Records of a field-strength sweep with the derived asymptotic quantities.
#[derive(Debug, Clone)]
pub struct SweepReport {
    pub records: Vec<VerificationRecord>,
    /// Least-squares slope of `log(λ₁(B₀) − λ₁(0))` against `log B₀` over
    /// the field strengths with `B₀R_in² ≤ 1/4`, per boundary condition.
    pub slopes: Vec<(BoundaryCondition, f64)>,
    /// `(B₀, log(λ₁ − B₀)/(B₀R²))` for discs and `B₀R² ≥ 4`.
    pub log_limit: Vec<(f64, f64)>,
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    if xs.len() < 2 || xs.len() != ys.len() {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Runs [`run_verify`] for each constant field strength in `b0s`.
pub fn run_sweep(p: &Prepared, b0s: &[f64]) -> Result<SweepReport> {
    if b0s.is_empty() || b0s.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("sweep needs a nonempty ascending B0 list".into()));
    }
    let records = par::map_slice(b0s, |b| {
        let mut q = p.with_field(MagneticField::Constant(*b));
        q.config.id = format!("{}@B0={b}", p.config.id);
        run_verify(&q)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let r_in = p.domain.inradius();
    let mut slopes = Vec::new();
    for bc in p.config.bc.conditions() {
        let (xs, ys): (Vec<f64>, Vec<f64>) = records
            .iter()
            .filter_map(|r| {
                let b = r.b0?;
                let o = r.outcome(bc)?;
                let shift = o.lambda1.extrapolated - o.lambda1_0.extrapolated;
                (b > 0.0 && b * r_in * r_in <= 0.25 && shift > 0.0).then(|| (b.ln(), shift.ln()))
            })
            .unzip();
        if let Some(s) = fit_slope(&xs, &ys) {
            slopes.push((bc, s));
        }
    }
    let mut log_limit = Vec::new();
    if let Some((_, radius)) = p.domain.is_disc() {
        for r in &records {
            let (Some(b), Some(o)) = (r.b0, r.outcome(BoundaryCondition::Dirichlet)) else { continue };
            let t = b * radius * radius;
            if t >= 4.0 {
                log_limit.push((b, (o.lambda1.extrapolated - b).ln() / t));
            }
        }
    }
    Ok(SweepReport { records, slopes, log_limit })
}

#[derive(Debug, Clone)]
pub struct ConvergenceTable {
    pub bc: BoundaryCondition,
    /// `(h, λ₁(h))` in the given order.
    pub levels: Vec<(f64, f64)>,
    /// Observed order for each consecutive triple of levels.
    pub orders: Vec<Option<f64>>,
    /// Richardson value from the last two levels when they halve.
    pub extrapolated: Option<f64>,
    pub warnings: Vec<String>,
}

/// Lowest eigenvalue on each spacing in `hs` (at least three levels).
pub fn run_converge(p: &Prepared, hs: &[f64]) -> Result<Vec<ConvergenceTable>> {
    if hs.len() < 3 {
        return Err(Error::Config(format!("convergence study needs at least 3 levels, got {}", hs.len())));
    }
    let opts = &p.config.solver;
    let mut out = Vec::new();
    for bc in p.config.bc.conditions() {
        let mut levels = Vec::new();
        for &h in hs {
            let v = spectral::solve_magnetic(&p.domain, &p.field, bc, h, opts)?.lowest();
            levels.push((h, v));
        }
        let mut warnings = Vec::new();
        let orders: Vec<Option<f64>> = levels
            .windows(3)
            .map(|w| spectral::observed_order(w[0].1, w[1].1, w[2].1))
            .collect();
        for (k, o) in orders.iter().enumerate() {
            if o.is_none() {
                warnings.push(format!("degenerate order at levels {}..{}", k, k + 2));
            }
        }
        let halving = |a: f64, b: f64| (a - 2.0 * b).abs() <= 1e-12 * a;
        if levels.windows(2).any(|w| !halving(w[0].0, w[1].0)) {
            warnings.push("spacings do not halve between every pair of levels".into());
        }
        let n = levels.len();
        let extrapolated = halving(levels[n - 2].0, levels[n - 1].0)
            .then(|| spectral::richardson(levels[n - 2].1, levels[n - 1].1));
        out.push(ConvergenceTable { bc, levels, orders, extrapolated, warnings });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slack_and_estimates() {
        assert_eq!(slack(10.0, 10.001), 3.0 * (10.0f64 - 10.001).abs());
        assert_eq!(slack(10.0, 10.0), 1e-6 * 10.0);
        let e = Estimate::from_levels(&[1.0, 1.75]);
        assert_eq!(e.extrapolated, 2.0);
        assert_eq!(e.raw, 1.75);
        let d = e.minus(Estimate::from_levels(&[0.5]));
        assert_eq!(d.extrapolated, 1.5);
        assert!(d.slack > e.slack);
    }

    #[test]
    fn slope_fit() {
        let xs: Vec<f64> = (1..6).map(|k| (k as f64).ln()).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x + 0.3).collect();
        assert!((fit_slope(&xs, &ys).unwrap() - 2.0).abs() < 1e-12);
        assert!(fit_slope(&[1.0], &[1.0]).is_none());
        assert!(fit_slope(&[1.0, 1.0], &[1.0, 2.0]).is_none());
    }

    #[test]
    fn zero_field_matches_nonmagnetic() {
        let cfg = Config::from_json(
            r#"{"schema_version": 1, "cases": [{"id": "z",
                "domain": {"shape": "rectangle", "corner": [0, 0], "width": 1, "height": 1},
                "grid": {"h": 0.0625}, "bounds": ["baseline"]}]}"#,
        )
        .unwrap();
        let p = Prepared::new(&cfg.cases[0], Path::new(".")).unwrap();
        let r = run_verify(&p).unwrap();
        let o = r.outcome(BoundaryCondition::Dirichlet).unwrap();
        assert_eq!(o.lambda1, o.lambda1_0);
        assert!(r.passed());
        assert_eq!(o.bounds.len(), 2);
    }

    #[test]
    fn converge_needs_three_levels_and_flags_repeats() {
        let cfg = Config::from_json(
            r#"{"schema_version": 1, "cases": [{"id": "c",
                "domain": {"shape": "rectangle", "corner": [0, 0], "width": 1, "height": 1},
                "grid": {"h": 0.0625}}]}"#,
        )
        .unwrap();
        let p = Prepared::new(&cfg.cases[0], Path::new(".")).unwrap();
        assert!(run_converge(&p, &[0.0625, 0.03125]).is_err());
        let t = &run_converge(&p, &[0.0625; 3]).unwrap()[0];
        assert_eq!(t.orders, vec![None]);
        assert!(t.warnings.iter().any(|w| w.contains("degenerate order")));
        assert!(t.extrapolated.is_none());
    }
}
