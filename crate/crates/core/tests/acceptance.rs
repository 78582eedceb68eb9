//! Acceptance criteria 1–11. Each test writes one PASS/FAIL line to stderr,
//! bypassing the test harness's output capture.

use magbound::bounds::{self, Kind};
use magbound::fields::{MagneticField, SuperPotential};
use magbound::flux_lemma::lemma_constants;
use magbound::geometry::{convex_hull, Domain, Point};
use magbound::harness::{self, Config, Estimate, Prepared};
use magbound::spectral::{self, BoundaryCondition, SolverOptions};
use magbound::{J0_1, J1_1};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

const H: f64 = 1.0 / 32.0;

fn report(n: u32, title: &str, pass: bool, detail: impl AsRef<str>) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "criterion {n:>2} {verdict} {title}: {}", detail.as_ref());
}

fn opts() -> SolverOptions {
    SolverOptions::default()
}

fn estimate(domain: &Domain, b0: f64, bc: BoundaryCondition) -> Estimate {
    harness::estimate_lowest(domain, &MagneticField::Constant(b0), bc, H, &opts()).unwrap()
}

fn rect4x1() -> Domain {
    Domain::rectangle(Point::ORIGIN, 4.0, 1.0).unwrap()
}

fn ellipse() -> Domain {
    Domain::ellipse(Point::ORIGIN, (2.0, 0.5), 0.0).unwrap()
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

#[test]
fn criterion_01_disc_fixture() {
    let start = Instant::now();
    let e = harness::estimate_lowest(&Domain::unit_disc(), &MagneticField::zero(), BoundaryCondition::Dirichlet, 1.0 / 64.0, &opts())
        .unwrap();
    let secs = start.elapsed().as_secs_f64();
    let rel = (e.extrapolated / (J0_1 * J0_1) - 1.0).abs();
    let pass = rel < 1e-3 && secs < 30.0;
    report(1, "disc eigenvalue", pass, format!("lambda1 = {:.8}, relative error {rel:.2e}, {secs:.2} s", e.extrapolated));
    assert!(pass);
}

#[test]
fn criterion_02_disc_sandwich() {
    let mut lines = Vec::new();
    let mut pass = true;
    for b0 in [4.0, 8.0, 12.0, 16.0] {
        let e = estimate(&Domain::unit_disc(), b0, BoundaryCondition::Dirichlet);
        let [lo, hi] = bounds::disc_sandwich(1.0, b0);
        let ok = lo.valid && hi.valid && lo.holds(e.extrapolated, e.slack) && hi.holds(e.extrapolated, e.slack);
        pass &= ok;
        lines.push(format!("B0={b0}: {:.4} <= {:.6} <= {:.4}", lo.value, e.extrapolated, hi.value));
    }
    report(2, "disc sandwich", pass, lines.join("; "));
    assert!(pass);
}

#[test]
fn criterion_03_first_type_const() {
    let mut pass = true;
    let mut worst = f64::INFINITY;
    let mut count = 0;
    for domain in [Domain::unit_disc(), rect4x1(), ellipse()] {
        let l0 = estimate(&domain, 0.0, BoundaryCondition::Dirichlet).extrapolated;
        for b0 in [0.5, 1.0, 2.0, 4.0] {
            let e = estimate(&domain, b0, BoundaryCondition::Dirichlet);
            let r = bounds::first_type_const(&domain, b0, l0);
            pass &= r.holds(e.extrapolated, e.slack);
            worst = worst.min(r.margin(e.extrapolated));
            count += 1;
        }
    }
    pass &= count == 12;
    report(3, "first-type bound for constant fields", pass, format!("{count} cases, smallest margin {worst:.4e}"));
    assert!(pass);
}

#[test]
fn criterion_04_upper_bound() {
    let mut pass = true;
    let mut lines = Vec::new();
    for domain in [Domain::unit_disc(), rect4x1()] {
        let r_in = domain.inradius();
        for t in [4.0, 8.0] {
            let b0 = t / (r_in * r_in);
            let e = estimate(&domain, b0, BoundaryCondition::Dirichlet);
            let u = bounds::upper_bound(&domain, b0);
            let ok = u.valid && u.holds(e.extrapolated, e.slack);
            pass &= ok;
            lines.push(format!("{} B0={b0}: {:.5} <= {:.5}", domain.describe(), e.extrapolated, u.value));
        }
    }
    report(4, "upper bound", pass, lines.join("; "));
    assert!(pass);
}

fn random_convex_polygon(rng: &mut ChaCha8Rng) -> Option<Domain> {
    let n = rng.gen_range(3..=12);
    let sx = rng.gen_range(0.2..3.0);
    let pts: Vec<Point> = (0..n)
        .map(|_| {
            let t = rng.gen_range(0.0..std::f64::consts::TAU);
            let r = rng.gen_range(0.3..1.0);
            Point::new(sx * r * t.cos(), r * t.sin())
        })
        .collect();
    let hull = convex_hull(&pts);
    Domain::polygon(hull).ok()
}

#[test]
fn criterion_05_width_inradius() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    let mut pass = true;
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    while checked < 500 {
        let Some(d) = random_convex_polygon(&mut rng) else { continue };
        let (ell, r) = (d.min_width(), d.inradius());
        pass &= 2.0 * r <= ell + 1e-9 && ell <= 3.0 * r + 1e-9;
        lo = lo.min(ell / r);
        hi = hi.max(ell / r);
        checked += 1;
    }
    let tri = Domain::equilateral_triangle(1.7).unwrap();
    let ratio = tri.min_width() / tri.inradius();
    pass &= (ratio - 3.0).abs() < 1e-6;
    report(5, "width and in-radius", pass, format!("{checked} polygons, ratio in [{lo:.4}, {hi:.4}]; triangle {ratio:.10}"));
    assert!(pass);
}

#[test]
fn criterion_06_second_type() {
    let sq = Domain::unit_square();
    let o = opts();
    let coarse = spectral::solve_nonmagnetic(&sq, BoundaryCondition::Dirichlet, H, &o).unwrap();
    let nonmag = spectral::solve_nonmagnetic(&sq, BoundaryCondition::Dirichlet, 0.5 * H, &o).unwrap();
    let l0 = Estimate::from_levels(&[coarse.lambda1, nonmag.lambda1]);
    let mut pass = true;
    let mut lines = Vec::new();
    for b0 in [0.25, 0.5, 8.0, 16.0, 32.0] {
        let shift = estimate(&sq, b0, BoundaryCondition::Dirichlet).minus(l0);
        let field = MagneticField::Constant(b0);
        let thm = bounds::second_type(&sq, &field, sq.incenter(), &nonmag);
        let cor = if b0 <= 4.0 { bounds::cor_small_b(&sq, b0, &nonmag) } else { bounds::cor_large_b(&sq, b0, &nonmag) };
        let cert = &cor[1];
        let ok = thm.valid
            && cert.valid
            && cert.certified
            && thm.value > 0.0
            && cert.value > 0.0
            && thm.holds(shift.extrapolated, shift.slack)
            && cert.holds(shift.extrapolated, shift.slack);
        pass &= ok;
        lines.push(format!("B0={b0}: D={:.3e}, {}={:.3e} <= {:.4e}", thm.value, cert.name, cert.value, shift.extrapolated));
    }
    report(6, "second-type bounds", pass, lines.join("; "));
    assert!(pass);
}

#[test]
fn criterion_07_neumann() {
    let sq = Domain::unit_square();
    let o = opts();
    let c = spectral::solve_nonmagnetic(&sq, BoundaryCondition::Neumann, H, &o).unwrap();
    let f = spectral::solve_nonmagnetic(&sq, BoundaryCondition::Neumann, 0.5 * H, &o).unwrap();
    let mu2 = Estimate::from_levels(&[c.lambda2, f.lambda2]).extrapolated;
    let mut pass = (mu2 / (std::f64::consts::PI.powi(2)) - 1.0).abs() < 1e-3;
    let mut lines = vec![format!("mu2 = {mu2:.6}")];
    for (b0, small) in [(0.5, true), (2.0, true), (8.0, false), (16.0, false)] {
        let e = estimate(&sq, b0, BoundaryCondition::Neumann);
        let [printed, cert] = bounds::neumann_lower(&sq, b0, mu2);
        let branch = cert.inputs["regime_small"] == 1.0;
        let ok = branch == small && cert.valid && cert.value > 0.0 && cert.holds(e.extrapolated, e.slack);
        pass &= ok && printed.valid;
        lines.push(format!("B0={b0}: {:.3e} <= {:.5e}", cert.value, e.extrapolated));
    }
    report(7, "Neumann lower bounds", pass, lines.join("; "));
    assert!(pass);
}

#[test]
fn criterion_08_lemma_closed_forms() {
    let mut pass = true;
    let mut worst = 0.0f64;
    let mut lines = Vec::new();
    let disc = Domain::unit_disc();
    for b0 in [0.25, 0.5, 1.0] {
        let r = 1.0;
        let c = lemma_constants(&MagneticField::Constant(b0), Point::ORIGIN, r, 512);
        let expected = [
            (c.mu0, 2.0 / (b0 * r)),
            (c.nu0, b0 / 2.0),
            (c.r0, r),
            (c.c0, 4.0 * r * r / (J0_1 * J0_1)),
            (c.c1, (8.0 + 64.0 / (J0_1 * J0_1)) / (b0 * b0 * r * r)),
        ];
        for (got, want) in expected {
            worst = worst.max((got / want - 1.0).abs());
        }
        let mu1 = estimate(&disc, b0, BoundaryCondition::Neumann);
        let ok = mu1.extrapolated + mu1.slack >= c.f1;
        pass &= ok;
        lines.push(format!("B0R^2={b0}: F1={:.5e} <= mu1={:.5e}", c.f1, mu1.extrapolated));
    }
    pass &= worst < 1e-6;
    report(8, "lemma constants", pass, format!("max relative deviation {worst:.2e}; {}", lines.join("; ")));
    assert!(pass);
}

fn sweep(json: &str) -> harness::SweepReport {
    let cfg = Config::from_json(json).unwrap();
    let p = Prepared::new(&cfg.cases[0], Path::new(".")).unwrap();
    harness::run_sweep(&p, &p.config.b0_list).unwrap()
}

#[test]
fn criterion_09_small_field_slopes() {
    let s = sweep(
        r#"{"schema_version": 1, "cases": [{"id": "sq",
            "domain": {"shape": "rectangle", "corner": [0, 0], "width": 1, "height": 1},
            "bc": "both", "grid": {"h": 0.03125}, "bounds": ["baseline"],
            "b0_list": [0.05, 0.1, 0.2, 0.4]}]}"#,
    );
    let slope = |bc| s.slopes.iter().find(|(b, _)| *b == bc).map(|(_, v)| *v).unwrap_or(f64::NAN);
    let (d, n) = (slope(BoundaryCondition::Dirichlet), slope(BoundaryCondition::Neumann));
    let pass = (d - 2.0).abs() <= 0.15 && (n - 2.0).abs() <= 0.2;
    report(9, "small-field slopes", pass, format!("Dirichlet {d:.4}, Neumann {n:.4}"));
    assert!(pass);
}

fn log_limit_sequence() -> Vec<(f64, f64)> {
    sweep(
        r#"{"schema_version": 1, "cases": [{"id": "disc",
            "domain": {"shape": "disc", "center": [0, 0], "radius": 1},
            "grid": {"h": 0.03125}, "bounds": ["baseline"],
            "b0_list": [4, 8, 12, 16]}]}"#,
    )
    .log_limit
}

fn log_limit_criterion(seq: &[(f64, f64)]) -> bool {
    let decreasing = seq.windows(2).all(|w| w[1].1 < w[0].1);
    let last = seq.last().map(|x| x.1).unwrap_or(f64::NAN);
    seq.len() == 4 && decreasing && last > -0.6 && last < -0.35
}

/// The criterion as stated. The exact eigenvalues put the last element near
/// −0.163, so this fails; run with `--ignored`.
#[test]
#[ignore = "unattainable at B0R^2 <= 16; see log_limit_matches_exact_eigenvalues"]
fn criterion_10_log_limit() {
    let seq = log_limit_sequence();
    let pass = log_limit_criterion(&seq);
    report(10, "large-field log-limit", pass, format!("{seq:?}"));
    assert!(pass);
}

/// Reference values: lowest root in `λ` of `M((1 − λ/B₀)/2, 1, B₀/2)`,
/// computed to 15 digits with arbitrary precision offline.
const DISC_EXACT: [(f64, f64); 4] =
    [(4.0, 6.635827674831901), (8.0, 8.977668237431347), (12.0, 12.293558403925747), (16.0, 16.073491039646946)];

#[test]
fn criterion_10_log_limit_matches_exact_eigenvalues() {
    let seq = log_limit_sequence();
    let stated = log_limit_criterion(&seq);
    report(10, "large-field log-limit", stated, format!("sequence {:?}", seq.iter().map(|x| x.1).collect::<Vec<_>>()));
    // The computed sequence agrees with the exact one, which decreases but
    // stays far above −1/2 at B₀R² = 16.
    for ((b, v), (b_ref, l_ref)) in seq.iter().zip(DISC_EXACT) {
        assert_eq!(*b, b_ref);
        let exact = (l_ref - b_ref).ln() / b_ref;
        assert!((v - exact).abs() < 2e-4, "B0 = {b}: {v} vs {exact}");
    }
    assert!(seq.windows(2).all(|w| w[1].1 < w[0].1));
    assert!(seq[3].1 > -0.2);
}

#[test]
fn criterion_11_property_suites() {
    let o = opts();
    let tol = o.tol;
    let mut failures = Vec::new();
    let mut checks = 0;
    let mut cases: Vec<(String, Domain, f64, Vec<BoundaryCondition>, f64)> = Vec::new();
    let mut files: Vec<PathBuf> =
        std::fs::read_dir(fixtures()).unwrap().map(|e| e.unwrap().path()).filter(|p| p.extension().is_some_and(|x| x == "json")).collect();
    files.sort();
    for f in files {
        let cfg = Config::load(&f).unwrap();
        for c in &cfg.cases {
            let p = Prepared::new(c, f.parent().unwrap()).unwrap();
            let Some(b) = p.field.as_constant() else { continue };
            let mut bs = vec![b];
            bs.extend(&c.b0_list);
            for b0 in bs {
                cases.push((c.id.clone(), p.domain.clone(), b0, c.bc.conditions(), p.h));
            }
        }
    }
    for (id, domain, b0, bcs, h) in &cases {
        for &bc in bcs {
            // Hermiticity of both quadratic gauges, and gauge invariance.
            let radial = SuperPotential::QuadraticRadial { b0: *b0, center: domain.incenter() };
            let strip = SuperPotential::QuadraticDirectional { b0: *b0, offset: 0.3, theta: 0.7 };
            let ops: Vec<_> = [&radial, &strip].iter().map(|g| spectral::assemble(domain, *g, bc, *h).unwrap()).collect();
            checks += 1;
            if !ops.iter().all(|op| op.matrix().is_hermitian()) {
                failures.push(format!("{id} B0={b0} {}: not Hermitian", bc.as_str()));
            }
            let hint = (bc == BoundaryCondition::Dirichlet && *b0 != 0.0).then(|| 0.9 * b0.abs());
            let ev: Vec<f64> = ops.iter().map(|op| spectral::lowest_eigenpairs(op, 1, &o, hint).unwrap().lowest()).collect();
            checks += 1;
            if (ev[0] - ev[1]).abs() > 10.0 * tol * ev[0].abs().max(1.0) {
                failures.push(format!("{id} B0={b0} {}: gauges give {} and {}", bc.as_str(), ev[0], ev[1]));
            }
            // Diamagnetic and commutator baselines on extrapolated values.
            let field = MagneticField::Constant(*b0);
            let e = harness::estimate_lowest(domain, &field, bc, *h, &o).unwrap();
            let e0 = harness::estimate_lowest(domain, &MagneticField::zero(), bc, *h, &o).unwrap();
            checks += 1;
            if e.extrapolated < e0.extrapolated - e.slack - e0.slack {
                failures.push(format!("{id} B0={b0} {}: diamagnetic", bc.as_str()));
            }
            if bc == BoundaryCondition::Dirichlet {
                checks += 1;
                if e.extrapolated < b0.abs() - e.slack {
                    failures.push(format!("{id} B0={b0}: commutator"));
                }
            }
        }
    }
    let pass = failures.is_empty() && cases.len() >= 10;
    report(11, "property suites", pass, format!("{} fixture cases, {checks} checks, failures: {failures:?}", cases.len()));
    assert!(pass);
}

#[test]
fn reference_spectrum_sanity() {
    // The disc gap used by the floor comparison.
    let gap = J1_1 * J1_1 - J0_1 * J0_1;
    assert!(bounds::gap_floor(&Domain::unit_disc()).value < gap);
    assert_eq!(bounds::gap_floor(&Domain::unit_disc()).kind, Kind::Lower);
}
