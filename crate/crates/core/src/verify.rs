//! Residuals of the soliton equation and of the flow along the self-similar
//! motion.
//!
//! The residual at a sample is `⟨B·X + C, N⟩ − k^{1/3}`. Near inflection
//! points the cube root is infinitely steep, so an uncertainty `δ` in a
//! finite-difference curvature would dominate; the residual is therefore the
//! distance from the left-hand side to the interval `cbrt([k − δ, k + δ])`,
//! with `δ = 0` when exact jets are available.

use crate::action::SolitonAction;
use crate::error::{Error, Result};
use crate::geometry::affine::SolitonData;
use crate::geometry::curve::{frenet, DiscreteCurve};
use crate::geometry::linalg::{cbrt_signed, Vec2};

/// Soliton residual above which [`flow_residual`] refuses a curve.
pub const FLOW_PRECONDITION: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub sup_norm: f64,
    /// Per-sample residual (maximum over times for flow residuals); `None`
    /// for excluded samples.
    pub residuals: Vec<Option<f64>>,
    pub n_samples: usize,
    pub n_excluded: usize,
    pub argmax_index: usize,
    pub argmax_u: f64,
    pub argmax_t: Option<f64>,
}

/// Distance from `lhs` to the cube roots of `[k − δ, k + δ]`.
fn cube_root_gap(lhs: f64, k: f64, delta: f64) -> f64 {
    let lo = cbrt_signed(k - delta);
    let hi = cbrt_signed(k + delta);
    if lhs < lo {
        lo - lhs
    } else if lhs > hi {
        lhs - hi
    } else {
        0.0
    }
}

struct Accumulator {
    residuals: Vec<Option<f64>>,
    best: Option<(f64, usize, Option<f64>)>,
}

impl Accumulator {
    fn new(n: usize) -> Self {
        Accumulator {
            residuals: vec![None; n],
            best: None,
        }
    }

    fn record(&mut self, i: usize, r: f64, t: Option<f64>) {
        let slot = &mut self.residuals[i];
        *slot = Some(slot.map_or(r, |old| old.max(r)));
        // NaN residuals must surface, so they always win
        let better = match self.best {
            None => true,
            Some((m, _, _)) => r > m || r.is_nan(),
        };
        if better && !self.best.is_some_and(|(m, _, _)| m.is_nan()) {
            self.best = Some((r, i, t));
        }
    }

    fn finish(self, curve: &DiscreteCurve) -> Result<ResidualReport> {
        let n_excluded = self.residuals.iter().filter(|r| r.is_none()).count();
        let Some((sup, idx, t)) = self.best else {
            return Err(Error::InvalidCurve("no regular samples to evaluate".into()));
        };
        Ok(ResidualReport {
            sup_norm: sup,
            n_samples: curve.len(),
            n_excluded,
            argmax_index: idx,
            argmax_u: curve.params()[idx],
            argmax_t: t,
            residuals: self.residuals,
        })
    }
}

/// Residual of `⟨B·X + C, N⟩ = k^{1/3}` along a sampled curve.
///
/// Samples whose Frenet frame cannot be estimated (vanishing speed) are
/// excluded and counted.
pub fn soliton_residual(curve: &DiscreteCurve, data: &SolitonData) -> Result<ResidualReport> {
    let mut acc = Accumulator::new(curve.len());
    for (i, sample) in frenet(curve).into_iter().enumerate() {
        let s = match sample {
            Ok(s) => s,
            Err(Error::DegenerateSample { .. }) => continue,
            Err(e) => return Err(e),
        };
        let lhs = data.lhs(curve.points()[i], s.normal);
        acc.record(i, cube_root_gap(lhs, s.curvature, s.curvature_err), None);
    }
    acc.finish(curve)
}

/// Residual of the flow `⟨X̂_t, N̂⟩ = k̂^{1/3}` for the moving curve
/// `X̂(t) = A(t)·X + H(t)`, over the given times.
///
/// `X̂_t = A′X + H′` is evaluated from the closed forms; `N̂` and `k̂` come from
/// the transformation laws applied to the frame of the base curve.
pub fn flow_residual(curve: &DiscreteCurve, data: &SolitonData, times: &[f64]) -> Result<ResidualReport> {
    let action = SolitonAction::new(*data);
    for &t in times {
        if !(t >= 0.0 && t < action.t_max) {
            return Err(Error::TimeOutOfRange { t, t_max: action.t_max });
        }
    }
    let base = soliton_residual(curve, data)?;
    if !(base.sup_norm < FLOW_PRECONDITION) {
        return Err(Error::NotASoliton {
            residual: base.sup_norm,
        });
    }
    let frames = frenet(curve);
    let mut acc = Accumulator::new(curve.len());
    for &t in times {
        let a = action.matrix(t)?;
        let da = action.matrix_derivative(t)?;
        let dh = action.translation_velocity(t)?;
        let det = a.det();
        for (i, frame) in frames.iter().enumerate() {
            let Ok(s) = frame else { continue };
            let at = a * s.tangent;
            let len = at.norm();
            let normal: Vec2 = at.scale(1.0 / len).perp();
            let factor = det / (len * len * len);
            let velocity = da * curve.points()[i] + dh;
            let gap = cube_root_gap(
                velocity.dot(normal),
                factor * s.curvature,
                factor.abs() * s.curvature_err,
            );
            acc.record(i, gap, Some(t));
        }
    }
    acc.finish(curve)
}
