use super::*;
use crate::J0_1;
use std::f64::consts::PI;

fn opts() -> SolverOptions {
    SolverOptions::default()
}

/// Lowest Dirichlet eigenvalue of the unit disc with constant field `b`
/// (angular momentum 0): root in `λ` of `M((1 − λ/b)/2, 1, b/2)`.
fn kummer_disc(b: f64) -> f64 {
    let m = |lam: f64| {
        let a = 0.5 * (1.0 - lam / b);
        let z = 0.5 * b;
        let (mut term, mut sum) = (1.0, 1.0);
        for n in 0..400 {
            let n = n as f64;
            term *= (a + n) * z / ((n + 1.0) * (n + 1.0));
            sum += term;
        }
        sum
    };
    let (mut lo, mut hi) = (b, b + J0_1 * J0_1);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if m(mid).signum() == m(lo).signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn unit_square_dirichlet_spectrum_and_ground_state() {
    let sq = Domain::unit_square();
    let nm = solve_nonmagnetic(&sq, BoundaryCondition::Dirichlet, 1.0 / 64.0, &opts()).unwrap();
    assert!((nm.lambda1 / (2.0 * PI * PI) - 1.0).abs() < 5e-3);
    assert!((nm.lambda2 / (5.0 * PI * PI) - 1.0).abs() < 5e-3);
    let phi = &nm.ground_state;
    assert!(phi.values.iter().all(|&v| v > 0.0));
    assert!((phi.norm2() - 1.0).abs() < 1e-12);
    let mut worst: f64 = 0.0;
    for (k, &(i, j)) in phi.coords.iter().enumerate() {
        let p = phi.lattice.point(i, j);
        let exact = 2.0 * (PI * p.x).sin() * (PI * p.y).sin();
        worst = worst.max((phi.values[k] - exact).abs() / 2.0);
    }
    assert!(worst < 1e-2, "{worst}");
}

#[test]
fn unit_square_neumann_kernel_and_gap() {
    let sq = Domain::unit_square();
    let op = assemble(&sq, &NoField, BoundaryCondition::Neumann, 1.0 / 64.0).unwrap();
    let r = lowest_eigenpairs(&op, 2, &opts(), None).unwrap();
    assert!(r.eigenvalues[0].abs() < 1e-10);
    assert!((r.eigenvalues[1] / (PI * PI) - 1.0).abs() < 5e-3);
    let u = r.grid_function(0);
    let spread = u.iter().map(|z| z.norm()).fold((f64::INFINITY, 0.0f64), |(a, b), v| (a.min(v), b.max(v)));
    assert!(spread.1 - spread.0 < 1e-8);
}

#[test]
fn neumann_rows_sum_to_zero_on_curved_domains() {
    let e = Domain::ellipse(Point::new(0.1, -0.2), (1.0, 0.6), 0.4).unwrap();
    let op = assemble(&e, &NoField, BoundaryCondition::Neumann, 1.0 / 24.0).unwrap();
    let x: Vec<C64> = op.mass().iter().map(|m| C64::new(m.sqrt(), 0.0)).collect();
    let y = op.matrix().mul(&x);
    let worst = y.iter().map(|v| v.norm()).fold(0.0, f64::max);
    assert!(worst < 1e-10, "{worst}");
    assert!((op.mass().iter().sum::<f64>() - e.area()).abs() < 1e-4 * e.area());
}

#[test]
fn links_have_unit_modulus_and_matrix_is_hermitian() {
    let d = Domain::ellipse(Point::ORIGIN, (1.0, 0.7), 0.2).unwrap();
    let g = SuperPotential::QuadraticRadial { b0: 7.0, center: Point::new(0.2, 0.1) };
    for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann] {
        let op = assemble(&d, &g, bc, 1.0 / 20.0).unwrap();
        assert!(op.links().iter().all(|l| (l.phase.norm() - 1.0).abs() < 1e-15));
        assert!(op.matrix().is_hermitian());
    }
}

#[test]
fn disc_extrapolation_and_order() {
    let disc = Domain::unit_disc();
    let levels: Vec<SpectralResult> = [16.0, 32.0, 64.0]
        .iter()
        .map(|n| {
            let op = assemble(&disc, &NoField, BoundaryCondition::Dirichlet, 1.0 / n).unwrap();
            lowest_eigenpairs(&op, 1, &opts(), None).unwrap()
        })
        .collect();
    let ex = extrapolate(&levels[1], &levels[2]).unwrap()[0];
    assert!((ex / (J0_1 * J0_1) - 1.0).abs() < 1e-3);
    let order = observed_order(levels[0].lowest(), levels[1].lowest(), levels[2].lowest()).unwrap();
    assert!((1.8..=2.2).contains(&order), "{order}");
    assert!(extrapolate(&levels[0], &levels[2]).is_err());
}

#[test]
fn square_extrapolation_accuracy() {
    let sq = Domain::unit_square();
    let solve = |n: f64| {
        let op = assemble(&sq, &NoField, BoundaryCondition::Dirichlet, 1.0 / n).unwrap();
        lowest_eigenpairs(&op, 1, &opts(), None).unwrap()
    };
    let (c, f) = (solve(32.0), solve(64.0));
    let ex = extrapolate(&c, &f).unwrap()[0];
    assert!((ex / (2.0 * PI * PI) - 1.0).abs() < 2e-4);
    assert!((richardson(ex, ex) - ex).abs() < 1e-14 * ex);
}

#[test]
fn degenerate_levels_have_no_order() {
    assert_eq!(observed_order(1.0, 1.0, 1.0), None);
    assert_eq!(observed_order(1.0, 2.0, 1.5), None);
    assert!((observed_order(1.0, 1.25, 1.3125).unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn solves_are_bitwise_deterministic() {
    let d = Domain::rectangle(Point::ORIGIN, 2.0, 1.0).unwrap();
    let f = MagneticField::Constant(3.0);
    let a = solve_magnetic(&d, &f, BoundaryCondition::Dirichlet, 1.0 / 24.0, &opts()).unwrap();
    let b = solve_magnetic(&d, &f, BoundaryCondition::Dirichlet, 1.0 / 24.0, &opts()).unwrap();
    assert_eq!(a.eigenvalues[0].to_bits(), b.eigenvalues[0].to_bits());
    let c = par::with_mode(par::Mode::Sequential, || {
        solve_magnetic(&d, &f, BoundaryCondition::Dirichlet, 1.0 / 24.0, &opts()).unwrap()
    });
    assert_eq!(a.eigenvalues[0].to_bits(), c.eigenvalues[0].to_bits());
}

#[test]
fn magnetic_disc_matches_kummer_root() {
    let disc = Domain::unit_disc();
    let f = MagneticField::Constant(8.0);
    let c = solve_magnetic(&disc, &f, BoundaryCondition::Dirichlet, 1.0 / 32.0, &opts()).unwrap();
    let fi = solve_magnetic(&disc, &f, BoundaryCondition::Dirichlet, 1.0 / 64.0, &opts()).unwrap();
    let ex = extrapolate(&c, &fi).unwrap()[0];
    let oracle = kummer_disc(8.0);
    assert!((ex / oracle - 1.0).abs() < 1e-5, "{ex} vs {oracle}");
}

#[test]
fn zero_field_matches_nonmagnetic() {
    let disc = Domain::unit_disc();
    let nm = solve_nonmagnetic(&disc, BoundaryCondition::Dirichlet, 1.0 / 32.0, &opts()).unwrap();
    let m = solve_magnetic(&disc, &MagneticField::zero(), BoundaryCondition::Dirichlet, 1.0 / 32.0, &opts()).unwrap();
    assert!((nm.lambda1 - m.lowest()).abs() < 1e-8 * nm.lambda1);
}

#[test]
fn gauges_give_the_same_spectrum() {
    let sq = Domain::unit_square();
    let g1 = SuperPotential::QuadraticRadial { b0: 6.0, center: Point::new(0.3, 0.7) };
    let g2 = SuperPotential::QuadraticDirectional { b0: 6.0, offset: 0.2, theta: 0.4 };
    for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann] {
        let a = lowest_eigenpairs(&assemble(&sq, &g1, bc, 1.0 / 32.0).unwrap(), 2, &opts(), None).unwrap();
        let b = lowest_eigenpairs(&assemble(&sq, &g2, bc, 1.0 / 32.0).unwrap(), 2, &opts(), None).unwrap();
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            assert!((x - y).abs() <= 10.0 * opts().tol * x.abs().max(1.0), "{bc:?}: {x} vs {y}");
        }
    }
}

#[test]
fn grid_field_landau_gauge_matches_constant_field() {
    let sq = Domain::unit_square();
    let n = 11;
    let g = MagneticField::grid(Point::new(-0.25, -0.25), 0.15, n, n, vec![5.0; n * n]).unwrap();
    let a = solve_magnetic(&sq, &g, BoundaryCondition::Neumann, 1.0 / 32.0, &opts()).unwrap();
    let b = solve_magnetic(&sq, &MagneticField::Constant(5.0), BoundaryCondition::Neumann, 1.0 / 32.0, &opts()).unwrap();
    assert!((a.lowest() - b.lowest()).abs() < 1e-7 * b.lowest());
}

#[test]
fn too_coarse_grids_are_rejected() {
    let r = assemble(&Domain::unit_square(), &NoField, BoundaryCondition::Dirichlet, 0.1);
    assert!(matches!(r, Err(Error::TooFewNodes { .. })));
}

#[test]
fn ground_state_interpolation() {
    let sq = Domain::unit_square();
    let nm = solve_nonmagnetic(&sq, BoundaryCondition::Dirichlet, 1.0 / 32.0, &opts()).unwrap();
    let phi = &nm.ground_state;
    let c = Point::new(0.5, 0.5);
    assert!((phi.eval(c) - 2.0).abs() < 2e-2);
    let inside: Vec<_> = phi.nodes_in_disc(c, 0.1).collect();
    assert!(inside.iter().all(|(p, _)| p.dist(c) <= 0.1));
    assert!(inside.len() > 30);
}
