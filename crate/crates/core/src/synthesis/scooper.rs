//! The 1-g "scooper" curves.
//!
//! For `B` nilpotent and `C = e₂` a graph `x = x(y)` satisfies
//! `x_yy = (y − x_y)³`, so `w = y − x_y` obeys `w_y = 1 − w³`. Off the
//! parabola `w = 1` the solutions are given by `y = C₁ + y±(w)` with
//!
//! ```text
//! y±(w) = ⅙·ln((1 + w + w²)/(1 − w)²) + (1/√3)·(atan((2w + 1)/√3) ∓ π/2),
//! ```
//!
//! the upper sign for `w > 1`, the lower for `w < 1`. The two branches meet
//! where `w = ±∞` (a horizontal tangent), and the curve is smooth there.
//! With `u = 1/(w − 1)` the whole curve is one smooth arc: `u < 0` is the
//! `w < 1` branch, `u > 0` the `w > 1` branch and `u = 0` the seam, with
//!
//! ```text
//! D = 3u² + 3u + 1,   y = C₁ + ⅙·ln(1 + 3u(u + 1)) − (1/√3)·atan2(2√3·u, 6u + 4),
//! y_u = u/D,          x_u = ((y − 1)·u − 1)/D.
//! ```

use crate::error::{Error, Result};
use crate::geometry::curve::{Chart, DiscreteCurve, Jet};
use crate::geometry::linalg::Vec2;
use crate::numerics::quad::{cumulative, QuadTol};
use std::f64::consts::FRAC_PI_2;

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Smallest admissible margin `1/max|u|` between the window and `w = 1`.
pub const MIN_POLE_MARGIN: f64 = 1e-4;

/// Largest allowed jump between the two branch formulas evaluated just off
/// the seam.
pub const SEAM_LIMIT: f64 = 1e-5;

/// `⅙·ln((1 + w + w²)/(1 − w)²)`, written to stay accurate for large `|w|`.
fn log_part(w: f64) -> f64 {
    let d = w - 1.0;
    (3.0 * w / (d * d)).ln_1p() / 6.0
}

/// Branch function for `w > 1`.
pub fn y_plus(w: f64) -> f64 {
    let z = (2.0 * w + 1.0) / SQRT3;
    // atan z − π/2 = −atan(1/z) for z > 0
    log_part(w) - (1.0 / z).atan() / SQRT3
}

/// Branch function for `w < 1`.
pub fn y_minus(w: f64) -> f64 {
    let z = (2.0 * w + 1.0) / SQRT3;
    let angle = if z < 0.0 {
        -(1.0 / z).atan()
    } else {
        z.atan() + FRAC_PI_2
    };
    log_part(w) + angle / SQRT3
}

/// `y(u) − C₁`.
pub fn y_of_u(u: f64) -> f64 {
    (3.0 * u * (u + 1.0)).ln_1p() / 6.0 - (2.0 * SQRT3 * u).atan2(6.0 * u + 4.0) / SQRT3
}

fn d_of_u(u: f64) -> f64 {
    3.0 * u * u + 3.0 * u + 1.0
}

/// `(x_u, y_u)` at `u` for the curve with constant `C₁`.
fn velocity(c1: f64, u: f64) -> Vec2 {
    let d = d_of_u(u);
    let y = c1 + y_of_u(u);
    Vec2::new(((y - 1.0) * u - 1.0) / d, u / d)
}

fn jet(c1: f64, u: f64) -> Jet {
    let d = d_of_u(u);
    let dd = 6.0 * u + 3.0;
    let y = c1 + y_of_u(u);
    let y_u = u / d;
    let y_uu = (1.0 - 3.0 * u * u) / (d * d);
    let num = (y - 1.0) * u - 1.0;
    let x_uu = ((y_u * u + (y - 1.0)) * d - num * dd) / (d * d);
    Jet {
        d1: Vec2::new(num / d, y_u),
        d2: Vec2::new(x_uu, y_uu),
    }
}

/// Samples the scooper on the `u`-window `[lo, hi]` (cell centres of a
/// uniform partition into `samples` cells). When the window contains the
/// seam `u = 0` with at least four samples either side, the curve records it.
pub fn scooper(c1: f64, c2: f64, lo: f64, hi: f64, samples: usize) -> Result<DiscreteCurve> {
    if !(c1.is_finite() && c2.is_finite() && lo < hi) || samples < 4 {
        return Err(Error::InvalidConstants(format!(
            "C1 = {c1}, C2 = {c2}, window [{lo}, {hi}], {samples} samples"
        )));
    }
    let margin = 1.0 / lo.abs().max(hi.abs());
    if !(margin >= MIN_POLE_MARGIN) {
        return Err(Error::WindowTouchesPole { margin });
    }
    check_seam(c1)?;
    let h = (hi - lo) / samples as f64;
    let params: Vec<f64> = (0..samples).map(|i| lo + h * (i as f64 + 0.5)).collect();
    let split = params.partition_point(|&u| u < 0.0);
    let tol = QuadTol { abs: 1e-14, rel: 1e-13 };

    // x(u) = C₂ + ∫₀ᵘ x_u
    let xs = cumulative(|u| velocity(c1, u).x, 0.0, &params, tol)?;
    let points = params
        .iter()
        .zip(&xs)
        .map(|(&u, &x)| Vec2::new(c2 + x, c1 + y_of_u(u)))
        .collect();
    let jets = params.iter().map(|&u| jet(c1, u)).collect();
    let seams = if split >= 4 && samples - split >= 4 {
        vec![split]
    } else {
        Vec::new()
    };
    DiscreteCurve::with_seams(params, points, Chart::Parametric, seams)?.with_jets(jets)
}

/// Compares the two branch formulas just either side of `w = ±∞`, where both
/// should give `y = C₁` and `x ≈ C₂`.
fn check_seam(c1: f64) -> Result<()> {
    let delta = 1e-7;
    let w_above = 1.0 + 1.0 / delta;
    let w_below = 1.0 - 1.0 / delta;
    let above = Vec2::new(-delta, c1 + y_plus(w_above));
    let below = Vec2::new(delta, c1 + y_minus(w_below));
    let mismatch = (above - below).norm();
    if mismatch > SEAM_LIMIT {
        return Err(Error::SeamMismatch {
            mismatch,
            limit: SEAM_LIMIT,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::affine::SolitonData;
    use crate::geometry::linalg::Mat2;
    use crate::verify::soliton_residual;

    fn data() -> SolitonData {
        SolitonData::new(Mat2::new(0.0, 1.0, 0.0, 0.0), Vec2::new(0.0, 1.0))
    }

    #[test]
    fn unified_formula_matches_branches() {
        for &w in &[1.001, 1.5, 2.0, 10.0, 1e4] {
            let u = 1.0 / (w - 1.0);
            assert!((y_of_u(u) - y_plus(w)).abs() < 1e-13, "w = {w}");
        }
        for &w in &[0.999, 0.5, 0.0, -0.5, -0.6, -3.0, -1e4] {
            let u = 1.0 / (w - 1.0);
            assert!((y_of_u(u) - y_minus(w)).abs() < 1e-13, "w = {w}");
        }
    }

    #[test]
    fn slope_law_holds() {
        for &u in &[-5.0, -0.7, -0.1, 0.05, 0.3, 4.0] {
            let v = velocity(0.4, u);
            let w = 1.0 + 1.0 / u;
            let y = 0.4 + y_of_u(u);
            // x_y = y − w
            assert!((v.x / v.y - (y - w)).abs() < 1e-12 * w.abs().max(1.0));
            // w_y = (dw/du)/(dy/du) = (−1/u²)/(u/D)
            let dw_dy = -d_of_u(u) / (u * u * u);
            assert!(
                (dw_dy - (1.0 - w.powi(3))).abs() < 1e-9 * dw_dy.abs().max(1.0),
                "u = {u}"
            );
        }
    }

    #[test]
    fn scooper_is_a_soliton() {
        let c = scooper(0.3, -1.0, -20.0, 20.0, 512).unwrap();
        assert_eq!(c.seams(), &[256]);
        let r = soliton_residual(&c, &data()).unwrap();
        assert!(r.sup_norm < 1e-10, "{}", r.sup_norm);
        // and without the exact jets, on a window that resolves the bottom
        let c = scooper(0.3, -1.0, -5.0, 5.0, 512).unwrap();
        let r = soliton_residual(&c.without_jets(), &data()).unwrap();
        assert!(r.sup_norm < 1e-5, "{}", r.sup_norm);
    }

    #[test]
    fn jets_match_differences() {
        let c1 = -0.2;
        for &u in &[-3.0, -0.4, 0.0, 0.6, 2.5] {
            let h = 1e-5;
            let j = jet(c1, u);
            let d1 = (velocity(c1, u + h) - velocity(c1, u - h)).scale(0.5 / h);
            assert!((j.d1 - velocity(c1, u)).norm() < 1e-15);
            assert!((j.d2 - d1).norm() < 1e-8, "u = {u}");
        }
    }

    #[test]
    fn pole_margin() {
        assert!(matches!(
            scooper(0.0, 0.0, -1e5, 1.0, 64),
            Err(Error::WindowTouchesPole { .. })
        ));
        assert!(scooper(0.0, 0.0, -1e3, 1e3, 64).is_ok());
    }
}
