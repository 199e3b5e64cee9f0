//! Arclength integration of the soliton equation.
//!
//! With `X′ = (cos θ, sin θ)` the normal is `N = (−sin θ, cos θ)` and the
//! equation solved for the curvature reads `θ′ = ⟨B·X + C, N⟩³`, an ODE that
//! has no chart singularities.

use crate::error::{Error, Result};
use crate::geometry::affine::SolitonData;
use crate::geometry::curve::{Chart, DiscreteCurve};
use crate::geometry::linalg::Vec2;
use crate::numerics::ode::{solve, solve_on_grid, Control, OdeTol, State};

/// Position, heading and arclength of a point on a unit-speed curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntrinsicState {
    pub position: Vec2,
    pub theta: f64,
    pub s: f64,
}

impl IntrinsicState {
    pub fn new(position: Vec2, theta: f64) -> Self {
        IntrinsicState {
            position,
            theta,
            s: 0.0,
        }
    }

    fn to_state(self) -> State<3> {
        [self.position.x, self.position.y, self.theta]
    }
}

/// Right-hand side `(cos θ, sin θ, ⟨B·X + C, N⟩³)`.
pub fn intrinsic_field(data: &SolitonData) -> impl Fn(f64, &State<3>) -> State<3> + '_ {
    move |_s, y| {
        let (sin, cos) = y[2].sin_cos();
        let x = Vec2::new(y[0], y[1]);
        let l = data.lhs(x, Vec2::new(-sin, cos));
        [cos, sin, l * l * l]
    }
}

/// Samples the solution through `start` on `samples` equally spaced
/// arclength values covering `[s_lo, s_hi]`.
pub fn synthesize_intrinsic(
    data: &SolitonData,
    start: IntrinsicState,
    s_lo: f64,
    s_hi: f64,
    samples: usize,
    tol: f64,
) -> Result<DiscreteCurve> {
    if !(s_lo < s_hi) || samples < 4 {
        return Err(Error::InvalidConstants(format!(
            "arclength window [{s_lo}, {s_hi}] with {samples} samples"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidConstants(format!("tolerance {tol}")));
    }
    let grid: Vec<f64> = (0..samples)
        .map(|i| s_lo + (s_hi - s_lo) * i as f64 / (samples - 1) as f64)
        .collect();
    let f = intrinsic_field(data);
    let ode_tol = OdeTol::with_tolerance(tol);
    let y0 = start.to_state();

    let split = grid.partition_point(|&s| s < start.s);
    let mut backward: Vec<f64> = grid[..split].iter().rev().copied().collect();
    let forward = &grid[split..];
    let mut states_back = Vec::new();
    if !backward.is_empty() {
        states_back = solve_on_grid(&f, start.s, y0, &backward, &ode_tol, |_, _| true)?;
        states_back.reverse();
        backward.reverse();
    }
    let states_fwd = if forward.is_empty() {
        Vec::new()
    } else {
        solve_on_grid(&f, start.s, y0, forward, &ode_tol, |_, _| true)?
    };
    let points = states_back
        .iter()
        .chain(&states_fwd)
        .map(|y| Vec2::new(y[0], y[1]))
        .collect();
    DiscreteCurve::new(grid, points, Chart::Intrinsic)
}

/// Integrates from `start` until the heading, decreasing, crosses
/// `theta_target + 2πk` for the first time after leaving the start, and
/// returns the state there. Used to measure periods.
pub fn next_heading_crossing(
    data: &SolitonData,
    start: IntrinsicState,
    theta_target: f64,
    max_span: f64,
    tol: f64,
) -> Result<IntrinsicState> {
    let f = intrinsic_field(data);
    let ode_tol = OdeTol::with_tolerance(tol);
    let mut hit = None;
    let g = |_s: f64, y: &State<3>| y[2] - theta_target;
    solve(&f, start.s, start.to_state(), start.s + max_span, &ode_tol, |step| {
        let (g0, g1) = (g(step.t0, &step.y0), g(step.t1, &step.y1));
        if g0 > 0.0 && g1 <= 0.0 {
            if let Some((s, y)) = step.find_root(&f, g, 1e-13) {
                hit = Some(IntrinsicState {
                    position: Vec2::new(y[0], y[1]),
                    theta: y[2],
                    s,
                });
                return Control::Stop;
            }
        }
        Control::Continue
    })?;
    hit.ok_or_else(|| Error::InvalidConstants(format!("no heading crossing within arclength {max_span}")))
}
