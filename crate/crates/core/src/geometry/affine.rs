//! Affine maps and their action on soliton data and curves.

use super::curve::{DiscreteCurve, FrenetSample, Jet};
use super::linalg::{Mat2, Vec2};
use crate::error::{Error, Result};

/// Below this `|det|` a linear part counts as singular.
pub const SINGULAR_DET: f64 = 1e-12;

/// `Y = linear · X + shift`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    pub linear: Mat2,
    pub shift: Vec2,
}

impl AffineMap {
    pub const IDENTITY: AffineMap = AffineMap {
        linear: Mat2::IDENTITY,
        shift: Vec2::ZERO,
    };

    pub fn new(linear: Mat2, shift: Vec2) -> Self {
        AffineMap { linear, shift }
    }

    pub fn linear(linear: Mat2) -> Self {
        AffineMap {
            linear,
            shift: Vec2::ZERO,
        }
    }

    pub fn translation(shift: Vec2) -> Self {
        AffineMap {
            linear: Mat2::IDENTITY,
            shift,
        }
    }

    pub fn apply(&self, x: Vec2) -> Vec2 {
        self.linear * x + self.shift
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &AffineMap) -> AffineMap {
        AffineMap {
            linear: self.linear * first.linear,
            shift: self.linear * first.shift + self.shift,
        }
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &AffineMap) -> AffineMap {
        then.after(self)
    }

    pub fn inverse(&self) -> Result<AffineMap> {
        let det = self.linear.det();
        if det.abs() < SINGULAR_DET || !det.is_finite() {
            return Err(Error::SingularMap { det: det.abs() });
        }
        let inv = self.linear.inverse().ok_or(Error::SingularMap { det: det.abs() })?;
        Ok(AffineMap {
            linear: inv,
            shift: -(inv * self.shift),
        })
    }
}

/// Coefficients of the soliton equation `⟨B·X + C, N⟩ = k^{1/3}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolitonData {
    pub b: Mat2,
    pub c: Vec2,
}

impl SolitonData {
    pub fn new(b: Mat2, c: Vec2) -> Self {
        SolitonData { b, c }
    }

    pub fn is_finite(&self) -> bool {
        self.b.is_finite() && self.c.is_finite()
    }

    /// `‖B‖_F + ‖C‖`, the scale used for relative tolerances.
    pub fn norm(&self) -> f64 {
        self.b.norm() + self.c.norm()
    }

    /// Max-entry distance between two data sets.
    pub fn distance(&self, other: &SolitonData) -> f64 {
        let db = self.b.max_abs_diff(other.b);
        let dc = (self.c - other.c).x.abs().max((self.c - other.c).y.abs());
        db.max(dc)
    }

    /// The left-hand side `⟨B·X + C, N⟩`.
    pub fn lhs(&self, x: Vec2, normal: Vec2) -> f64 {
        (self.b * x + self.c).dot(normal)
    }
}

/// Soliton data satisfied by the image of a solution under `Y = P·X + H`.
///
/// Translation is applied after the linear part, so in source coordinates the
/// shift is `P⁻¹H`; the data transform as
/// `C ↦ s·P·(C − B·P⁻¹H)` and `B ↦ s·P·B·P⁻¹` with `s = |det P|^{-2/3}`.
pub fn pushforward(data: &SolitonData, map: &AffineMap) -> Result<SolitonData> {
    let p = map.linear;
    let det = p.det();
    if det.abs() < SINGULAR_DET || !det.is_finite() {
        return Err(Error::SingularMap { det: det.abs() });
    }
    let p_inv = p.inverse().ok_or(Error::SingularMap { det: det.abs() })?;
    let s = det.abs().powf(-2.0 / 3.0);
    let c_shifted = data.c - data.b * (p_inv * map.shift);
    Ok(SolitonData {
        b: (p * data.b * p_inv).scale(s),
        c: (p * c_shifted).scale(s),
    })
}

/// Pointwise image of a curve; exact jets are carried along.
pub fn transform_curve(curve: &DiscreteCurve, map: &AffineMap) -> Result<DiscreteCurve> {
    let det = map.linear.det();
    if det.abs() < SINGULAR_DET || !det.is_finite() {
        return Err(Error::SingularMap { det: det.abs() });
    }
    let points = curve.points().iter().map(|&x| map.apply(x)).collect();
    let out = DiscreteCurve::with_seams(curve.params().to_vec(), points, curve.chart(), curve.seams().to_vec())?;
    match curve.jets() {
        Some(jets) => {
            let p = map.linear;
            out.with_jets(
                jets.iter()
                    .map(|j| Jet {
                        d1: p * j.d1,
                        d2: p * j.d2,
                    })
                    .collect(),
            )
        }
        None => Ok(out),
    }
}

/// Curvature of the image curve under the linear part `p`, predicted from the
/// frame of the source curve: `k̂ = det P · k / ‖P·T‖³`.
pub fn predicted_curvature(sample: &FrenetSample, p: Mat2) -> f64 {
    let pt = (p * sample.tangent).norm();
    p.det() * sample.curvature / (pt * pt * pt)
}

/// Unit normal of the image curve: `J·P·T / ‖P·T‖`.
pub fn predicted_normal(sample: &FrenetSample, p: Mat2) -> Vec2 {
    (p * sample.tangent).normalized().perp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::curve::{frenet, frenet_at, Chart};
    use proptest::prelude::*;

    fn close(a: &SolitonData, b: &SolitonData, tol: f64) -> bool {
        a.distance(b) <= tol
    }

    #[test]
    fn identity_pushforward() {
        let d = SolitonData::new(Mat2::new(1.0, 2.0, -3.0, 0.5), Vec2::new(0.3, -1.0));
        assert!(close(&pushforward(&d, &AffineMap::IDENTITY).unwrap(), &d, 0.0));
    }

    #[test]
    fn scalar_map_normalizes_diag() {
        let d = SolitonData::new(Mat2::diag(0.0, 4.0), Vec2::ZERO);
        let m = AffineMap::linear(Mat2::scalar(4f64.powf(0.75)));
        let out = pushforward(&d, &m).unwrap();
        assert!(close(&out, &SolitonData::new(Mat2::diag(0.0, 1.0), Vec2::ZERO), 1e-14));
    }

    #[test]
    fn vertical_squash_normalizes_translation() {
        let d = SolitonData::new(Mat2::ZERO, Vec2::new(0.0, 3.0));
        let m = AffineMap::linear(Mat2::diag(1.0, 1.0 / 27.0));
        let out = pushforward(&d, &m).unwrap();
        assert!(close(&out, &SolitonData::new(Mat2::ZERO, Vec2::new(0.0, 1.0)), 1e-14));
    }

    #[test]
    fn translation_shifts_c() {
        let b = Mat2::new(1.0, 2.0, 0.0, -1.0);
        let d = SolitonData::new(b, Vec2::new(1.0, 1.0));
        let h = Vec2::new(0.5, -2.0);
        let out = pushforward(&d, &AffineMap::translation(h)).unwrap();
        assert_eq!(out.b, b);
        assert!((out.c - (d.c - b * h)).norm() < 1e-15);
    }

    #[test]
    fn singular_map_rejected() {
        let d = SolitonData::new(Mat2::IDENTITY, Vec2::ZERO);
        let m = AffineMap::linear(Mat2::new(1.0, 2.0, 2.0, 4.0));
        assert!(matches!(pushforward(&d, &m), Err(Error::SingularMap { .. })));
    }

    #[test]
    fn circle_scaled_by_two_halves_curvature() {
        let n = 256;
        let params: Vec<f64> = (0..n).map(|i| i as f64 * std::f64::consts::TAU / n as f64).collect();
        let points = params.iter().map(|&u| Vec2::new(u.cos(), u.sin())).collect();
        let c = DiscreteCurve::new(params, points, Chart::Parametric).unwrap();
        let p = Mat2::scalar(2.0);
        let image = transform_curve(&c, &AffineMap::linear(p)).unwrap();
        for i in [0, 17, 100] {
            let s = frenet_at(&c, i).unwrap();
            let k_hat = predicted_curvature(&s, p);
            assert!((k_hat - 0.5).abs() < 1e-4);
            assert!((frenet_at(&image, i).unwrap().curvature - k_hat).abs() < 1e-4);
        }
    }

    #[test]
    fn sheared_parabola_matches_prediction() {
        let params: Vec<f64> = (0..401).map(|i| -2.0 + 0.01 * i as f64).collect();
        let points = params.iter().map(|&x| Vec2::new(x, 0.5 * x * x)).collect();
        let c = DiscreteCurve::new(params, points, Chart::GraphOverX).unwrap();
        let p = Mat2::new(1.0, 1.0, 0.0, 1.0);
        let image = transform_curve(&c, &AffineMap::new(p, Vec2::new(3.0, -1.0))).unwrap();
        let src = frenet(&c);
        let dst = frenet(&image);
        for (s, d) in src.iter().zip(&dst) {
            let (s, d) = (s.as_ref().unwrap(), d.as_ref().unwrap());
            assert!((predicted_curvature(s, p) - d.curvature).abs() < 1e-6);
            assert!((predicted_normal(s, p) - d.normal).norm() < 1e-6);
        }
    }

    fn mat() -> impl Strategy<Value = Mat2> {
        prop::array::uniform4(-2.0..2.0f64).prop_map(Mat2::from_row_major)
    }

    fn invertible() -> impl Strategy<Value = Mat2> {
        mat().prop_filter("well conditioned", |m| m.det().abs() > 0.2)
    }

    fn vec() -> impl Strategy<Value = Vec2> {
        (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(x, y)| Vec2::new(x, y))
    }

    proptest! {
        #[test]
        fn pushforward_is_functorial(
            b in mat(), c in vec(),
            p1 in invertible(), h1 in vec(),
            p2 in invertible(), h2 in vec(),
        ) {
            let d = SolitonData::new(b, c);
            let m1 = AffineMap::new(p1, h1);
            let m2 = AffineMap::new(p2, h2);
            let stepwise = pushforward(&pushforward(&d, &m1).unwrap(), &m2).unwrap();
            let composed = pushforward(&d, &m2.after(&m1)).unwrap();
            let scale = 1.0 + stepwise.norm();
            prop_assert!(close(&stepwise, &composed, 1e-10 * scale));
        }

        #[test]
        fn inverse_round_trips(p in invertible(), h in vec(), x in vec()) {
            let m = AffineMap::new(p, h);
            let back = m.inverse().unwrap().apply(m.apply(x));
            prop_assert!((back - x).norm() < 1e-10);
        }
    }
}
