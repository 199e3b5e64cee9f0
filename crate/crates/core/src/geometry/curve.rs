//! Sampled planar curves and their discrete Frenet frames.

use super::linalg::Vec2;
use crate::error::{Error, Result};
use std::ops::Range;

/// Which chart a curve was produced in. Informational only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    GraphOverX,
    GraphOverY,
    Intrinsic,
    Parametric,
}

/// Exact first and second parameter derivatives at a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub d1: Vec2,
    pub d2: Vec2,
}

/// Ordered samples `X(u_i)` of a regular curve.
///
/// A curve may consist of several pieces separated by seams; finite
/// difference stencils never straddle a seam. Closed-form generators attach
/// exact jets, in which case the Frenet frame is evaluated from them instead
/// of from finite differences.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteCurve {
    params: Vec<f64>,
    points: Vec<Vec2>,
    chart: Chart,
    jets: Option<Vec<Jet>>,
    /// Indices at which a new piece begins (strictly inside `1..len`).
    seams: Vec<usize>,
}

/// Minimum number of samples per piece.
pub const MIN_PIECE_LEN: usize = 4;

impl DiscreteCurve {
    pub fn new(params: Vec<f64>, points: Vec<Vec2>, chart: Chart) -> Result<Self> {
        Self::with_seams(params, points, chart, Vec::new())
    }

    pub fn with_seams(params: Vec<f64>, points: Vec<Vec2>, chart: Chart, mut seams: Vec<usize>) -> Result<Self> {
        if params.len() != points.len() {
            return Err(Error::InvalidCurve(format!(
                "{} params for {} points",
                params.len(),
                points.len()
            )));
        }
        seams.sort_unstable();
        seams.dedup();
        let curve = DiscreteCurve {
            params,
            points,
            chart,
            jets: None,
            seams,
        };
        curve.validate()?;
        Ok(curve)
    }

    fn validate(&self) -> Result<()> {
        let n = self.points.len();
        if n < MIN_PIECE_LEN {
            return Err(Error::InvalidCurve(format!(
                "{n} samples, need at least {MIN_PIECE_LEN}"
            )));
        }
        if let Some(bad) = self.seams.iter().find(|&&s| s == 0 || s >= n) {
            return Err(Error::InvalidCurve(format!("seam index {bad} out of range")));
        }
        for piece in self.pieces() {
            if piece.len() < MIN_PIECE_LEN {
                return Err(Error::InvalidCurve(format!(
                    "piece {piece:?} has fewer than {MIN_PIECE_LEN} samples"
                )));
            }
        }
        for (i, (u, p)) in self.params.iter().zip(&self.points).enumerate() {
            if !u.is_finite() || !p.is_finite() {
                return Err(Error::InvalidCurve(format!("non-finite sample at {i}")));
            }
        }
        for i in 1..n {
            if self.params[i] <= self.params[i - 1] {
                return Err(Error::InvalidCurve(format!("parameters not increasing at index {i}")));
            }
            if !self.seams.contains(&i) && self.points[i] == self.points[i - 1] {
                return Err(Error::InvalidCurve(format!("repeated point at index {i}")));
            }
        }
        Ok(())
    }

    /// Attach exact derivatives; must match the sample count.
    pub fn with_jets(mut self, jets: Vec<Jet>) -> Result<Self> {
        if jets.len() != self.points.len() {
            return Err(Error::InvalidCurve(format!(
                "{} jets for {} points",
                jets.len(),
                self.points.len()
            )));
        }
        self.jets = Some(jets);
        Ok(self)
    }

    /// The same samples with exact derivatives dropped, as a curve read back
    /// from CSV would be.
    pub fn without_jets(&self) -> Self {
        DiscreteCurve {
            jets: None,
            ..self.clone()
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn points(&self) -> &[Vec2] {
        &self.points
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn jets(&self) -> Option<&[Jet]> {
        self.jets.as_deref()
    }

    pub fn seams(&self) -> &[usize] {
        &self.seams
    }

    /// Index ranges of the seam-separated pieces.
    pub fn pieces(&self) -> Vec<Range<usize>> {
        let mut out = Vec::with_capacity(self.seams.len() + 1);
        let mut start = 0;
        for &s in &self.seams {
            out.push(start..s);
            start = s;
        }
        out.push(start..self.points.len());
        out
    }

    fn piece_of(&self, i: usize) -> Range<usize> {
        let start = self.seams.iter().rev().find(|&&s| s <= i).copied().unwrap_or(0);
        let end = self
            .seams
            .iter()
            .find(|&&s| s > i)
            .copied()
            .unwrap_or(self.points.len());
        start..end
    }

    /// Mean parametric speed, used as the reference scale for degeneracy.
    fn mean_speed(&self) -> f64 {
        let mut len = 0.0;
        let mut span = 0.0;
        for piece in self.pieces() {
            for i in piece.start + 1..piece.end {
                len += (self.points[i] - self.points[i - 1]).norm();
                span += self.params[i] - self.params[i - 1];
            }
        }
        if span > 0.0 {
            len / span
        } else {
            0.0
        }
    }
}

/// Unit tangent, unit normal `N = J·T` and signed curvature at a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrenetSample {
    pub tangent: Vec2,
    pub normal: Vec2,
    pub curvature: f64,
    /// Estimated absolute error of `curvature` (zero for exact jets).
    pub curvature_err: f64,
    /// `|X_u|`.
    pub speed: f64,
}

/// Relative speed below which a sample is treated as singular.
pub const DEGENERATE_SPEED_RATIO: f64 = 1e-10;

impl FrenetSample {
    pub fn from_derivatives(d1: Vec2, d2: Vec2) -> Self {
        let speed = d1.norm();
        let tangent = d1.scale(1.0 / speed);
        FrenetSample {
            tangent,
            normal: tangent.perp(),
            curvature: d1.cross(d2) / (speed * speed * speed),
            curvature_err: 0.0,
            speed,
        }
    }
}

/// Frenet frame at sample `i`.
///
/// Uses exact jets when attached; otherwise second-order finite differences
/// on a non-uniform 3-point stencil (4-point one-sided at piece ends),
/// cross-checked against a 5-point (6-point one-sided) stencil whose value is
/// returned, with the disagreement plus a rounding allowance reported as
/// `curvature_err`.
pub fn frenet_at(curve: &DiscreteCurve, i: usize) -> Result<FrenetSample> {
    frenet_with_ref(curve, i, curve.mean_speed())
}

/// Frenet frames for every sample.
pub fn frenet(curve: &DiscreteCurve) -> Vec<Result<FrenetSample>> {
    let reference = curve.mean_speed();
    (0..curve.len()).map(|i| frenet_with_ref(curve, i, reference)).collect()
}

fn frenet_with_ref(curve: &DiscreteCurve, i: usize, reference: f64) -> Result<FrenetSample> {
    let degenerate = |speed: f64| speed <= DEGENERATE_SPEED_RATIO * reference || speed == 0.0;
    if let Some(jets) = curve.jets() {
        let jet = jets[i];
        let speed = jet.d1.norm();
        if degenerate(speed) {
            return Err(Error::DegenerateSample { index: i, speed });
        }
        return Ok(FrenetSample::from_derivatives(jet.d1, jet.d2));
    }

    let piece = curve.piece_of(i);
    let (lo_d1, lo_d2, _) = fd_derivatives(curve, i, &piece, 3);
    let (hi_d1, hi_d2, noise) = fd_derivatives(curve, i, &piece, 5);
    let speed = hi_d1.norm();
    if degenerate(speed) || degenerate(lo_d1.norm()) {
        return Err(Error::DegenerateSample { index: i, speed });
    }
    let hi = FrenetSample::from_derivatives(hi_d1, hi_d2);
    let lo = FrenetSample::from_derivatives(lo_d1, lo_d2);
    // rounding in the coordinates perturbs X_uu by up to `noise`, which
    // moves the curvature by up to noise/|X_u|²
    Ok(FrenetSample {
        curvature_err: (hi.curvature - lo.curvature).abs() + 4.0 * noise / (speed * speed),
        ..hi
    })
}

/// First and second derivative at `i` from a stencil of `width` points
/// (odd), centred when it fits inside the piece and one-sided with one extra
/// point otherwise. The third value bounds the effect of coordinate
/// rounding on the second derivative.
fn fd_derivatives(curve: &DiscreteCurve, i: usize, piece: &Range<usize>, width: usize) -> (Vec2, Vec2, f64) {
    let len = piece.len();
    let half = width / 2;
    let idx = if i >= piece.start + half && i + half < piece.end {
        i - half..i + half + 1
    } else {
        let w = (width + 1).min(len);
        let start = i.saturating_sub(w / 2).clamp(piece.start, piece.end - w);
        start..start + w
    };
    let nodes = &curve.params[idx.clone()];
    let weights = fd_weights(curve.params[i], nodes, 2);
    let mut d1 = Vec2::ZERO;
    let mut d2 = Vec2::ZERO;
    let mut noise = 0.0;
    for (k, j) in idx.enumerate() {
        let p = curve.points[j];
        d1 += p.scale(weights[k][1]);
        d2 += p.scale(weights[k][2]);
        noise += weights[k][2].abs() * p.x.abs().max(p.y.abs()) * f64::EPSILON;
    }
    (d1, d2, noise)
}

/// Finite-difference weights on arbitrary nodes (Fornberg's recursion).
///
/// Returns, for each node, the weights of derivatives `0..=order` at `z`.
pub fn fd_weights(z: f64, nodes: &[f64], order: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; order + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - z;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c
}
