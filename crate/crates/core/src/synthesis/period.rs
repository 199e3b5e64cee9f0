//! Period of the closed-in-y oscillating solutions of `y_xx = −y³`.

use super::intrinsic::{next_heading_crossing, IntrinsicState};
use crate::error::{Error, Result};
use crate::geometry::affine::SolitonData;
use crate::geometry::linalg::{Mat2, Vec2};
use crate::numerics::quad::{integrate_endpoint_singular, Endpoint, QuadTol};

/// Amplitude `a = (2·C₁)^{1/4}` of the oscillation with first integral
/// `y_x² + y⁴/2 = C₁`.
pub fn amplitude(c1: f64) -> Result<f64> {
    if !(c1 > 0.0 && c1.is_finite()) {
        return Err(Error::InvalidConstants(format!("C1 = {c1} must be positive")));
    }
    Ok((2.0 * c1).powf(0.25))
}

/// `T = 4·∫₀ᵃ √2 dξ / √(2C₁ − ξ⁴)`, with the square-root endpoint singularity
/// at `ξ = a` handled by substitution.
pub fn period_1d(c1: f64) -> Result<f64> {
    let a = amplitude(c1)?;
    // 2C₁ − ξ⁴ = (a − ξ)(a + ξ)(a² + ξ²)
    let q = integrate_endpoint_singular(
        |xi, _| (2.0 / ((a + xi) * (a * a + xi * xi))).sqrt(),
        0.0,
        a,
        0.5,
        Endpoint::Upper,
        QuadTol { abs: 1e-14, rel: 1e-13 },
    )?;
    Ok(4.0 * q.value[0])
}

/// The period measured by integrating the soliton equation for
/// `B = diag(0, −1)`, `C = 0` in arclength from the crest `(0, a)` until the
/// next crest.
pub fn period_from_intrinsic(c1: f64, tol: f64) -> Result<f64> {
    let a = amplitude(c1)?;
    let data = SolitonData::new(Mat2::diag(0.0, -1.0), Vec2::ZERO);
    let start = IntrinsicState::new(Vec2::new(0.0, a), 0.0);
    // one period is shorter than its x-extent plus twice the y-travel
    let span = 2.0 * period_1d(c1)? + 8.0 * a;
    let end = next_heading_crossing(&data, start, 0.0, span, tol)?;
    Ok(end.position.x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// Arithmetic–geometric mean, for the complete elliptic integral
    /// `K(1/√2) = π / (2·AGM(1, 1/√2))`.
    fn agm(mut x: f64, mut y: f64) -> f64 {
        while (x - y).abs() > 1e-16 * x {
            (x, y) = (0.5 * (x + y), (x * y).sqrt());
        }
        x
    }

    #[test]
    fn period_matches_elliptic_closed_form() {
        // with ξ = a·sin φ the integral becomes (√2/a)·∫ dφ/√(1 + sin² φ),
        // i.e. T = 4·(√2/a)·K(i) = 4·(√2/a)·π/(2·AGM(1, √2))
        for c1 in [0.05, 0.5, 1.0, 3.0, 40.0] {
            let a = (2.0f64 * c1).powf(0.25);
            let exact = 4.0 * 2f64.sqrt() / a * PI / (2.0 * agm(1.0, 2f64.sqrt()));
            let t = period_1d(c1).unwrap();
            assert!((t - exact).abs() < 1e-10 * exact, "C1 = {c1}: {t} vs {exact}");
        }
        assert!((period_1d(0.5).unwrap() - 7.416_298_709).abs() < 1e-8);
    }

    #[test]
    fn period_scales_with_quarter_power() {
        let t1 = period_1d(1.0).unwrap();
        for c1 in [0.01, 0.3, 7.0, 1e4] {
            let t = period_1d(c1).unwrap();
            assert!((t * c1.powf(0.25) - t1).abs() < 1e-10 * t1);
        }
    }

    #[test]
    fn intrinsic_period_agrees() {
        for c1 in [0.5, 2.0] {
            let t = period_1d(c1).unwrap();
            let ti = period_from_intrinsic(c1, 1e-12).unwrap();
            assert!((t - ti).abs() < 1e-8 * t, "{t} vs {ti}");
        }
    }

    #[test]
    fn rejects_non_positive_constant() {
        assert!(period_1d(0.0).is_err());
        assert!(period_1d(-1.0).is_err());
        assert!(period_1d(f64::NAN).is_err());
    }
}
