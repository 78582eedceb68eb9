//! Local lower bound for the magnetic form on a disc `𝔅(y, R)`:
//! `c₁ ∫|(−i∇ + A)v|² ≥ ∫|v|²` for every `v ∈ H¹`, with constants built from
//! the reduced flux `μ(r) = dist(Φ(r, y), ℤ)`:
//!
//! - `μ₀ = (max μ(r)/r)⁻¹` and `χ(r) = μ₀² μ(r)²/r²`, so `χ ≤ 1`;
//! - `ν₀ = max |r⁻²(r μ′(r) − μ(r))|`;
//! - any `r₀` with `χ(r₀) = 1` gives
//!   `c₀ = 4 max{r₀²/j₀,₁², (2R³ − 3R² r₀ + r₀³)/(6 r₀)}` and
//!   `c₁ = max{2μ₀² + 4 c₀ ν₀² μ₀⁴, c₀}`.
//!
//! The certified local constant is `F₁ = 1/c₁`.

use crate::fields::MagneticField;
use crate::geometry::Point;
use crate::quadrature::golden_max;
use crate::J0_1;

/// Default number of radii in `(0, R]`.
pub const DEFAULT_SAMPLES: usize = 512;
/// `|χ(r) − 1|` below which a grid radius counts as an `r₀` candidate.
pub const CHI_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaConstants {
    pub mu0: f64,
    pub nu0: f64,
    /// Every radius with `χ = 1` found on the grid or by refinement.
    pub r0_candidates: Vec<f64>,
    /// The candidate giving the smallest `c₁`.
    pub r0: f64,
    pub c0: f64,
    pub c1: f64,
    /// `1/c₁`, or 0 when the flux vanishes on `(0, R]`.
    pub f1: f64,
    pub radius: f64,
    pub center: Point,
    /// False when `μ ≡ 0` and the lemma gives no positive bound.
    pub positive: bool,
}

/// `μ(r) = min_k |k − Φ(r, y)| ∈ [0, 1/2]`.
pub fn reduced_flux_mu(field: &MagneticField, y: Point, r: f64) -> f64 {
    distance_to_integer(field.flux(y, r))
}

fn distance_to_integer(phi: f64) -> f64 {
    (phi - phi.round()).abs()
}

/// `|r⁻²(r μ′ − μ)|` for a constant field on the branch `k = round(Φ ± 0)`,
/// `side = −1` for the branch left of `r` and `+1` for the right.
fn nu_constant(b: f64, r: f64, side: f64) -> f64 {
    let phi = 0.5 * b * r * r;
    let k = (phi + side * 1e-12 * phi.abs().max(1.0)).round();
    let (mu, dmu) = if phi >= k { (phi - k, b * r) } else { (k - phi, -b * r) };
    ((r * dmu - mu) / (r * r)).abs()
}

/// Computes the constants on the radius grid `R k / samples`, `k = 1..=samples`.
///
/// Constant fields use the closed-form flux and one-sided derivatives at the
/// kinks `Φ ∈ ℤ/2`, which are added to the grid. Other fields use the
/// quadrature flux and central differences. The maximum of `μ/r` is refined
/// by golden section, and the maximizer is always an `r₀` candidate.
pub fn lemma_constants(field: &MagneticField, y: Point, radius: f64, samples: usize) -> LemmaConstants {
    let samples = samples.max(256);
    let mut rs: Vec<f64> = (1..=samples).map(|k| radius * k as f64 / samples as f64).collect();
    let constant = field.as_constant();
    if let Some(b) = constant.filter(|b| *b != 0.0) {
        // Φ = m/2 at r = sqrt(m/|B|).
        let mut m = 1.0;
        loop {
            let r = (m / b.abs()).sqrt();
            if r >= radius {
                break;
            }
            rs.push(r);
            m += 1.0;
        }
        rs.sort_by(f64::total_cmp);
        rs.dedup();
    }
    let mu = |r: f64| reduced_flux_mu(field, y, r);
    let mus: Vec<f64> = rs.iter().map(|&r| mu(r)).collect();
    let ratio: Vec<f64> = rs.iter().zip(&mus).map(|(r, m)| m / r).collect();

    let (kbest, &best_grid) = ratio
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty radius grid");
    if best_grid <= 0.0 {
        return LemmaConstants {
            mu0: f64::INFINITY,
            nu0: 0.0,
            r0_candidates: Vec::new(),
            r0: 0.0,
            c0: 0.0,
            c1: f64::INFINITY,
            f1: 0.0,
            radius,
            center: y,
            positive: false,
        };
    }
    let lo = if kbest == 0 { 0.5 * rs[0] } else { rs[kbest - 1] };
    let hi = rs.get(kbest + 1).copied().unwrap_or(radius);
    let (r_star, refined) = golden_max(lo, hi, 1e-14 * radius, |r| mu(r) / r);
    let (r_max, max_ratio) = if refined > best_grid { (r_star, refined) } else { (rs[kbest], best_grid) };
    let mu0 = 1.0 / max_ratio;

    let nu0 = match constant {
        Some(b) => rs
            .iter()
            .map(|&r| {
                let left = nu_constant(b, r, -1.0);
                if r < radius { left.max(nu_constant(b, r, 1.0)) } else { left }
            })
            .fold(0.0, f64::max),
        None => {
            let n = rs.len();
            (0..n)
                .map(|k| {
                    let (a, c) = (k.saturating_sub(1), (k + 1).min(n - 1));
                    let d = (mus[c] - mus[a]) / (rs[c] - rs[a]);
                    ((rs[k] * d - mus[k]) / (rs[k] * rs[k])).abs()
                })
                .fold(0.0, f64::max)
        }
    };

    let chi = |m: f64, r: f64| (mu0 * m / r).powi(2);
    let mut r0_candidates: Vec<f64> = rs
        .iter()
        .zip(&mus)
        .filter(|(r, m)| (chi(**m, **r) - 1.0).abs() < CHI_TOL)
        .map(|(r, _)| *r)
        .collect();
    r0_candidates.push(r_max);
    r0_candidates.sort_by(f64::total_cmp);
    r0_candidates.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * radius);

    let consts = |r0: f64| {
        let c0 = 4.0 * (r0 * r0 / (J0_1 * J0_1)).max((2.0 * radius.powi(3) - 3.0 * radius * radius * r0 + r0.powi(3)) / (6.0 * r0));
        let c1 = (2.0 * mu0 * mu0 + 4.0 * c0 * nu0 * nu0 * mu0.powi(4)).max(c0);
        (c0, c1)
    };
    let (r0, (c0, c1)) = r0_candidates
        .iter()
        .map(|&r| (r, consts(r)))
        .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .expect("at least the maximizer");
    LemmaConstants { mu0, nu0, r0_candidates, r0, c0, c1, f1: 1.0 / c1, radius, center: y, positive: true }
}

/// `F₁ = 1/c₁` on `𝔅(y, R)`.
pub fn certified_local_bound(field: &MagneticField, y: Point, radius: f64) -> f64 {
    lemma_constants(field, y, radius, DEFAULT_SAMPLES).f1
}

/// The value `B₀²R²/12` quoted for `B₀R² ≤ 1`.
pub fn printed_f1_small(b0: f64, radius: f64) -> f64 {
    b0 * b0 * radius * radius / 12.0
}

/// The value `B₀/48` quoted for discs of radius `½B₀^{-1/2}`.
pub fn printed_f1_large(b0: f64) -> f64 {
    b0 / 48.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_flux_values() {
        let b = MagneticField::Constant(1.0);
        let r = |phi: f64| (2.0 * phi).sqrt();
        assert!((reduced_flux_mu(&b, Point::ORIGIN, r(0.3)) - 0.3).abs() < 1e-15);
        assert!((reduced_flux_mu(&b, Point::ORIGIN, r(0.8)) - 0.2).abs() < 1e-15);
        assert!((reduced_flux_mu(&b, Point::ORIGIN, r(1.5)) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn closed_forms_for_weak_constant_field() {
        // By hand: μ = B₀r²/2 below 1/2, so μ/r peaks at R and χ = r²/R².
        for (b0, r) in [(0.25, 1.0), (2.0, 0.5), (1.0, 1.0), (4.0, 0.3)] {
            let c = lemma_constants(&MagneticField::Constant(b0), Point::ORIGIN, r, 256);
            let rel = |a: f64, b: f64| ((a - b) / b).abs();
            assert!(rel(c.mu0, 2.0 / (b0 * r)) < 1e-12);
            assert!(rel(c.nu0, b0 / 2.0) < 1e-12);
            assert!(rel(c.r0, r) < 1e-12);
            assert!(rel(c.c0, 4.0 * r * r / (J0_1 * J0_1)) < 1e-12);
            let c1 = (8.0 + 64.0 / (J0_1 * J0_1)) / (b0 * b0 * r * r);
            assert!(rel(c.c1, c1) < 1e-12);
            assert_eq!(c.f1 * c.c1, 1.0);
        }
    }

    #[test]
    fn numeric_oracle_agrees_with_closed_form_c1() {
        // Independent evaluation: μ, χ and ν sampled on a dense grid.
        let (b0, r) = (0.8, 1.0);
        let n = 20_000;
        let mut best = 0.0f64;
        let mut nu = 0.0f64;
        for k in 1..=n {
            let s = r * k as f64 / n as f64;
            let m = 0.5 * b0 * s * s;
            best = best.max(m / s);
            nu = nu.max(((s * b0 * s - m) / (s * s)).abs());
        }
        let mu0 = 1.0 / best;
        let c0 = 4.0 * r * r / (J0_1 * J0_1);
        let c1 = (2.0 * mu0 * mu0 + 4.0 * c0 * nu * nu * mu0.powi(4)).max(c0);
        let c = lemma_constants(&MagneticField::Constant(b0), Point::ORIGIN, r, 512);
        assert!((c.c1 / c1 - 1.0).abs() < 1e-9);
        assert!((b0 * b0 * r * r / c.f1 - 19.07).abs() < 0.01);
    }

    #[test]
    fn doubling_radius_quadruples_f1() {
        let f = MagneticField::Constant(0.2);
        let a = certified_local_bound(&f, Point::ORIGIN, 1.0);
        let b = certified_local_bound(&f, Point::ORIGIN, 2.0);
        assert!((b / a - 4.0).abs() < 1e-10);
    }

    #[test]
    fn strong_field_kink() {
        // B₀R² = 4: μ/r peaks at the kink r = B₀^{-1/2}, where ν reaches 3B₀/2.
        let b0 = 4.0;
        let c = lemma_constants(&MagneticField::Constant(b0), Point::ORIGIN, 1.0, 256);
        assert!((c.mu0 - 2.0 / b0.sqrt()).abs() < 1e-12);
        assert!((c.nu0 - 1.5 * b0).abs() < 1e-9);
        assert!((c.r0 - 0.5).abs() < 1e-12);
        assert!(c.c1 >= c.c0);
    }

    #[test]
    fn zero_field_is_flagged() {
        let c = lemma_constants(&MagneticField::zero(), Point::ORIGIN, 1.0, 256);
        assert!(!c.positive);
        assert_eq!(c.f1, 0.0);
    }

    #[test]
    fn sampled_field_uses_differences() {
        let lin = MagneticField::linear_radial(2.0, 20);
        let c = lemma_constants(&lin, Point::ORIGIN, 1.0, 256);
        // Φ = r³/3 ≤ 1/3: μ/r = r²/3 peaks at R; ν = |r⁻²(r·r² − r³/3)| ≤ 2/3.
        assert!((c.mu0 - 3.0).abs() < 1e-9);
        assert!((c.nu0 - 2.0 / 3.0).abs() < 1e-2);
        assert!((c.r0 - 1.0).abs() < 1e-12);
    }
}
