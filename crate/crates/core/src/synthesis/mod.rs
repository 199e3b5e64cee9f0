//! Solution curves of the degenerate cases, from closed forms, quadratures
//! and phase-plane integration, plus a chart-free intrinsic integrator that
//! works for any `(B, C)`.

mod families;
mod intrinsic;
mod period;
mod scooper;

pub use intrinsic::{intrinsic_field, next_heading_crossing, synthesize_intrinsic, IntrinsicState};
pub use period::{amplitude, period_1d, period_from_intrinsic};
pub use scooper::{scooper, y_minus, y_of_u, y_plus, MIN_POLE_MARGIN, SEAM_LIMIT};

use crate::classify::{canonical_form, CaseTag, SolitonCase};
use crate::error::{Error, Result};
use crate::geometry::affine::SolitonData;
use crate::geometry::curve::DiscreteCurve;

/// Residual tolerance for families sampled from closed forms with exact
/// derivatives.
pub const CLOSED_FORM_TOL: f64 = 1e-8;
/// Residual tolerance for families that involve quadrature or ODE solves.
pub const NUMERIC_TOL: f64 = 1e-5;

/// One family of solutions. The parameter the window refers to is given
/// per variant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Variant {
    /// `y = x²/2 + C₁x + C₂` (1-a); parameter `x`.
    Parabola { c1: f64, c2: f64 },
    /// `x = C` (1-a, 1-b, 1-d); parameter `y`.
    VerticalLine { c: f64 },
    /// `y = C` (any `C` for 1-f, `C = 0` for 1-b to 1-e); parameter `x`.
    HorizontalLine { c: f64 },
    /// `(x − C)·y = ±√2` with `sign = ±1` (1-b); parameter `x`, one branch.
    Hyperbola { c: f64, sign: f64 },
    /// `y_x² = y⁴/2 − C₁`, `y ≥ (2C₁)^{1/4}` with minimum at `x = C₂`
    /// (1-b); parameter `s` with `y = a + s²`.
    ConvexWell { c1: f64, c2: f64 },
    /// Mirror image `y ↦ −y` of [`Variant::ConvexWell`].
    ConcaveCap { c1: f64, c2: f64 },
    /// `x_y = (y⁴/2 + C₁)^{-1/2}`, `x(0) = C₂` (1-b); parameter `y`.
    Increasing { c1: f64, c2: f64 },
    /// `x_y = −(y⁴/2 + C₁)^{-1/2}`, `x(0) = C₂` (1-b); parameter `y`.
    Decreasing { c1: f64, c2: f64 },
    /// `y_x² + y⁴/2 = C₁`, `y(C₂) = 0` rising (1-d); parameter `φ` with
    /// `y = a·sin φ`, so `[0, 2π]` is one period.
    Periodic { c1: f64, c2: f64 },
    /// `x = y⁵/20 + C₁y + C₂` (1-f); parameter `y`.
    Quintic { c1: f64, c2: f64 },
    /// `x = y²/2 − y + C` (1-g); parameter `y`.
    ScooperParabola { c: f64 },
    /// The two-branch 1-g curve, bottom point `(C₂, C₁)`; parameter
    /// `u = 1/(w − 1)`.
    Scooper { c1: f64, c2: f64 },
    /// 1-c graph through `(0, ε)` with the slope found by separatrix
    /// bisection; increasing and convex, tending to `0` as `x → −∞`;
    /// parameter `x`.
    Separatrix { eps: f64 },
    /// Graph with `(y, y_x) = (u0, v0)` at `x = 0` (1-c, 1-e); parameter `x`.
    Trajectory { u0: f64, v0: f64 },
    /// Curve through `(0, y0)` with a vertical tangent there (1-c, 1-e);
    /// parameter arclength.
    VerticalTangent { y0: f64 },
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::Parabola { .. } => "parabola",
            Variant::VerticalLine { .. } => "vertical-line",
            Variant::HorizontalLine { .. } => "horizontal-line",
            Variant::Hyperbola { .. } => "hyperbola",
            Variant::ConvexWell { .. } => "convex-well",
            Variant::ConcaveCap { .. } => "concave-cap",
            Variant::Increasing { .. } => "increasing",
            Variant::Decreasing { .. } => "decreasing",
            Variant::Periodic { .. } => "periodic",
            Variant::Quintic { .. } => "quintic",
            Variant::ScooperParabola { .. } => "scooper-parabola",
            Variant::Scooper { .. } => "scooper",
            Variant::Separatrix { .. } => "separatrix",
            Variant::Trajectory { .. } => "trajectory",
            Variant::VerticalTangent { .. } => "vertical-tangent",
        }
    }

    /// Whether the family is sampled with exact derivatives from a closed
    /// form.
    pub fn is_closed_form(&self) -> bool {
        matches!(
            self,
            Variant::Parabola { .. }
                | Variant::VerticalLine { .. }
                | Variant::HorizontalLine { .. }
                | Variant::Hyperbola { .. }
                | Variant::Quintic { .. }
                | Variant::ScooperParabola { .. }
        )
    }

    /// Cases in which the family solves the normal form.
    pub fn cases(&self) -> &'static [CaseTag] {
        use CaseTag::*;
        match self {
            Variant::Parabola { .. } => &[Deg1a],
            Variant::VerticalLine { .. } => &[Deg1a, Deg1b, Deg1d],
            Variant::HorizontalLine { c } if *c != 0.0 => &[Deg1f],
            Variant::HorizontalLine { .. } => &[Deg1b, Deg1c, Deg1d, Deg1e, Deg1f],
            Variant::Hyperbola { .. }
            | Variant::ConvexWell { .. }
            | Variant::ConcaveCap { .. }
            | Variant::Increasing { .. }
            | Variant::Decreasing { .. } => &[Deg1b],
            Variant::Periodic { .. } => &[Deg1d],
            Variant::Quintic { .. } => &[Deg1f],
            Variant::ScooperParabola { .. } | Variant::Scooper { .. } => &[Deg1g],
            Variant::Separatrix { .. } => &[Deg1c],
            Variant::Trajectory { .. } | Variant::VerticalTangent { .. } => &[Deg1c, Deg1e],
        }
    }

    /// A window showing the characteristic shape.
    pub fn default_window(&self) -> Window {
        let (lo, hi) = match *self {
            Variant::Hyperbola { c, sign: _ } => (c + 0.5, c + 3.0),
            Variant::ConvexWell { .. } | Variant::ConcaveCap { .. } => (-1.5, 1.5),
            Variant::Periodic { .. } => (0.0, std::f64::consts::TAU),
            Variant::Scooper { .. } => (-5.0, 5.0),
            Variant::Separatrix { .. } => (-10.0, 3.0),
            Variant::Trajectory { .. } => (-1.0, 1.0),
            _ => (-2.0, 2.0),
        };
        Window { lo, hi, samples: 512 }
    }
}

/// Parameter range and sample count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
    pub samples: usize,
}

impl Window {
    pub fn new(lo: f64, hi: f64, samples: usize) -> Self {
        Window { lo, hi, samples }
    }

    /// `samples` equally spaced values from `lo` to `hi` inclusive.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.samples;
        (0..n)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (n - 1) as f64)
            .collect()
    }

    fn validate(&self) -> Result<()> {
        if self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi && self.samples >= 4 {
            Ok(())
        } else {
            Err(Error::InvalidConstants(format!(
                "window [{}, {}] with {} samples",
                self.lo, self.hi, self.samples
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveFamily {
    pub case: CaseTag,
    pub variant: Variant,
    pub window: Window,
}

impl CurveFamily {
    pub fn new(case: CaseTag, variant: Variant, window: Window) -> Result<Self> {
        if !variant.cases().contains(&case) {
            return Err(Error::InvalidConstants(format!(
                "{} is not a family of case {}",
                variant.name(),
                case.label()
            )));
        }
        window.validate()?;
        Ok(CurveFamily { case, variant, window })
    }

    /// Residual bound the synthesized curve is expected to meet.
    pub fn tolerance(&self) -> f64 {
        if self.variant.is_closed_form() {
            CLOSED_FORM_TOL
        } else {
            NUMERIC_TOL
        }
    }

    /// The normal form the curve solves.
    pub fn data(&self) -> SolitonData {
        canonical_form(&SolitonCase::plain(self.case).expect("degenerate cases carry no parameter"))
            .expect("degenerate cases carry no parameter")
    }
}

/// Samples the family over its window.
pub fn synthesize(family: &CurveFamily) -> Result<DiscreteCurve> {
    let CurveFamily { case, variant, window } = *family;
    if !variant.cases().contains(&case) {
        return Err(Error::InvalidConstants(format!(
            "{} is not a family of case {}",
            variant.name(),
            case.label()
        )));
    }
    window.validate()?;
    families::sample(case, variant, window)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership() {
        let w = Window::new(-1.0, 1.0, 16);
        assert!(CurveFamily::new(CaseTag::Deg1a, Variant::Parabola { c1: 0.0, c2: 0.0 }, w).is_ok());
        assert!(CurveFamily::new(CaseTag::Deg1b, Variant::Parabola { c1: 0.0, c2: 0.0 }, w).is_err());
        assert!(CurveFamily::new(CaseTag::Deg1f, Variant::HorizontalLine { c: 3.0 }, w).is_ok());
        assert!(CurveFamily::new(CaseTag::Deg1b, Variant::HorizontalLine { c: 3.0 }, w).is_err());
        assert!(CurveFamily::new(CaseTag::Deg1e, Variant::HorizontalLine { c: 0.0 }, w).is_ok());
        let bad = Window::new(1.0, -1.0, 16);
        assert!(CurveFamily::new(CaseTag::Deg1a, Variant::Parabola { c1: 0.0, c2: 0.0 }, bad).is_err());
    }

    #[test]
    fn every_degenerate_case_has_a_family() {
        let all = [
            Variant::Parabola { c1: 0.0, c2: 0.0 },
            Variant::Hyperbola { c: 0.0, sign: 1.0 },
            Variant::Trajectory { u0: 0.0, v0: 1.0 },
            Variant::Periodic { c1: 1.0, c2: 0.0 },
            Variant::Quintic { c1: 0.0, c2: 0.0 },
            Variant::Scooper { c1: 0.0, c2: 0.0 },
        ];
        for tag in CaseTag::ALL.into_iter().filter(|t| t.is_degenerate()) {
            assert!(all.iter().any(|v| v.cases().contains(&tag)), "{tag}");
        }
    }
}
