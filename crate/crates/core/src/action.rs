//! The one-parameter family of affine maps `X ↦ A(t)·X + H(t)` carrying a
//! soliton along the flow.
//!
//! `A` and `H` solve `(det A)^{2/3}·A⁻¹·A′ = B`, `(det A)^{2/3}·A⁻¹·H′ = C`
//! with `A(0) = I`, `H(0) = 0`. Taking determinants gives
//! `det A(t) = (1 + ⅔·tr B·t)^{3/2}`, and then `A(t) = exp(τ(t)·B)` with
//! `τ′ = (1 + ⅔·tr B·t)^{-1}`.

use crate::error::{Error, Result};
use crate::geometry::affine::SolitonData;
use crate::geometry::linalg::{expm2, Mat2, Vec2};
use crate::numerics::quad::{integrate_vec, QuadTol};

/// Supremum of the existence interval: `-3/(2·tr B)` when `tr B < 0`,
/// infinite otherwise.
pub fn max_time(data: &SolitonData) -> f64 {
    let tr = data.b.tr();
    if tr < 0.0 {
        -1.5 / tr
    } else {
        f64::INFINITY
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolitonAction {
    pub data: SolitonData,
    pub t_max: f64,
    pub quad_tol: QuadTol,
}

impl SolitonAction {
    pub fn new(data: SolitonData) -> Self {
        SolitonAction {
            data,
            t_max: max_time(&data),
            quad_tol: QuadTol { abs: 1e-12, rel: 1e-12 },
        }
    }

    fn check(&self, t: f64) -> Result<()> {
        if t.is_finite() && t >= 0.0 && t < self.t_max {
            Ok(())
        } else {
            Err(Error::TimeOutOfRange { t, t_max: self.t_max })
        }
    }

    /// `1 + ⅔·tr B·t`.
    fn growth(&self, t: f64) -> f64 {
        1.0 + 2.0 * self.data.b.tr() * t / 3.0
    }

    /// Reparametrized time `τ(t) = (3/(2 tr B))·ln(1 + ⅔·tr B·t)`, or `t`
    /// when `tr B = 0`.
    pub fn tau(&self, t: f64) -> f64 {
        let x = 2.0 * self.data.b.tr() * t / 3.0;
        if x == 0.0 {
            t
        } else {
            t * x.ln_1p() / x
        }
    }

    /// `det A(t)` from the closed-form law.
    pub fn det_law(&self, t: f64) -> f64 {
        self.growth(t).powf(1.5)
    }

    /// `A(t)`.
    pub fn matrix(&self, t: f64) -> Result<Mat2> {
        self.check(t)?;
        Ok(self.matrix_unchecked(t))
    }

    fn matrix_unchecked(&self, t: f64) -> Mat2 {
        expm2(self.data.b.scale(self.tau(t)))
    }

    /// `A′(t) = τ′(t)·B·A(t)`.
    pub fn matrix_derivative(&self, t: f64) -> Result<Mat2> {
        self.check(t)?;
        Ok((self.data.b * self.matrix_unchecked(t)).scale(1.0 / self.growth(t)))
    }

    /// `H′(t) = (det A)^{-2/3}·A(t)·C`.
    pub fn translation_velocity(&self, t: f64) -> Result<Vec2> {
        self.check(t)?;
        Ok(self.velocity_unchecked(t))
    }

    fn velocity_unchecked(&self, t: f64) -> Vec2 {
        (self.matrix_unchecked(t) * self.data.c).scale(1.0 / self.growth(t))
    }

    /// `H(t) = ∫₀ᵗ (det A)^{-2/3}·A ds · C` by adaptive quadrature.
    pub fn translation(&self, t: f64) -> Result<Vec2> {
        self.check(t)?;
        if self.data.c == Vec2::ZERO || t == 0.0 {
            return Ok(Vec2::ZERO);
        }
        let q = integrate_vec(
            |s| {
                let v = self.velocity_unchecked(s);
                [v.x, v.y]
            },
            0.0,
            t,
            self.quad_tol,
        )?;
        Ok(Vec2::new(q.value[0], q.value[1]))
    }
}
