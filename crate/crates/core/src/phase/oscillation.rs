//! Extrema, inflections and zeros of the oscillating 1-e graphs.
//!
//! Along a trajectory spiralling into the origin the graph `y = f(x)` has
//! extrema `xₙ` (`v = 0`), inflections `yₙ` (`u + v = 0`) and zeros `zₙ`
//! (`u = 0`), interleaved as `xₙ < yₙ < zₙ < xₙ₊₁`. The gaps obey two-sided
//! bounds in terms of `|f′(yₙ)|` and `|f(xₙ₊₁)|`.

use super::{Event, PhaseSystem, TrajectorySegment};
use crate::error::{Error, Result};
use crate::numerics::ode::State;
use crate::numerics::quad::{integrate_endpoint_singular, Endpoint, QuadTol};

/// `u⁴ + 2v²`, non-increasing along 1-e trajectories.
pub fn lyapunov_1e(p: &State<2>) -> f64 {
    p[0].powi(4) + 2.0 * p[1] * p[1]
}

/// `2v² + (u + v)⁴`, i.e. `2v² + w^{4/3}` with `w = v_x`; also
/// non-increasing.
pub fn lyapunov_1e_lifted(p: &State<2>) -> f64 {
    2.0 * p[1] * p[1] + (p[0] + p[1]).powi(4)
}

/// `A = 2^{-3/4}·∫₀¹ (1 − x²)^{-3/4} dx` and `B = √2·∫₀¹ (1 − x⁴)^{-1/2} dx`.
pub fn bound_constants() -> (f64, f64) {
    let tol = QuadTol { abs: 1e-14, rel: 1e-14 };
    // (1 − x²) = (1 − x)(1 + x), (1 − x⁴) = (1 − x)(1 + x)(1 + x²)
    let a = integrate_endpoint_singular(|x, _| (1.0 + x).powf(-0.75), 0.0, 1.0, 0.75, Endpoint::Upper, tol)
        .expect("bounded smooth integrand");
    let b = integrate_endpoint_singular(
        |x, _| 1.0 / ((1.0 + x) * (1.0 + x * x)).sqrt(),
        0.0,
        1.0,
        0.5,
        Endpoint::Upper,
        tol,
    )
    .expect("bounded smooth integrand");
    (2f64.powf(-0.75) * a.value[0], 2f64.sqrt() * b.value[0])
}

/// Sequences read off a 1-e trajectory and the per-index bound checks.
#[derive(Debug, Clone, PartialEq)]
pub struct OscillationReport {
    /// Extrema.
    pub xs: Vec<f64>,
    /// Inflections.
    pub ys: Vec<f64>,
    /// Zeros.
    pub zs: Vec<f64>,
    /// `f(xₙ)`.
    pub f_at_x: Vec<f64>,
    /// `f′(yₙ)`.
    pub df_at_y: Vec<f64>,
    /// `f′(zₙ)`.
    pub df_at_z: Vec<f64>,
    /// `yₙ − xₙ < A/√|f′(yₙ)| < xₙ₊₁ − yₙ`, one entry per index with `xₙ₊₁`.
    pub inflection_bounds_ok: Vec<bool>,
    /// `xₙ₊₁ − zₙ < B/|f(xₙ₊₁)| < zₙ₊₁ − xₙ₊₁`, one entry per index with
    /// `zₙ₊₁`.
    pub zero_bounds_ok: Vec<bool>,
    pub interleaved: bool,
    /// `f(xₙ)` alternates in sign starting positive.
    pub alternating: bool,
    pub a: f64,
    pub b: f64,
}

impl OscillationReport {
    /// Number of indices `n` with `xₙ, yₙ, zₙ, xₙ₊₁` all present.
    pub fn full_oscillations(&self) -> usize {
        self.xs.len().saturating_sub(1).min(self.zs.len())
    }

    pub fn all_bounds_hold(&self) -> bool {
        self.inflection_bounds_ok.iter().all(|&b| b) && self.zero_bounds_ok.iter().all(|&b| b)
    }

    /// `|f(xₙ)|` strictly decreasing.
    pub fn amplitudes_decrease(&self) -> bool {
        self.f_at_x.windows(2).all(|w| w[1].abs() < w[0].abs())
    }
}

/// Extracts `xₙ, yₙ, zₙ` from a forward 1-e trajectory recorded with the
/// events `v = 0`, `u + v = 0` and `u = 0`. A start on `v = 0` counts as
/// `x₁`. Requires at least `min_oscillations` full oscillations.
pub fn oscillation_sequences(traj: &TrajectorySegment, min_oscillations: usize) -> Result<OscillationReport> {
    if traj.system != PhaseSystem::Deg1e {
        return Err(Error::WrongRegime(format!(
            "expected the 1-e system, got {}",
            traj.system.label()
        )));
    }
    let mut marks: Vec<(Event, f64, State<2>)> = Vec::new();
    if let (Some(&x0), Some(&p0)) = (traj.xs.first(), traj.states.first()) {
        if p0[1] == 0.0 {
            marks.push((Event::VZero, x0, p0));
        }
    }
    marks.extend(
        traj.events
            .iter()
            .filter(|h| matches!(h.event, Event::VZero | Event::AntiDiagonal | Event::UZero))
            .map(|h| (h.event, h.x, h.state)),
    );
    // skip to the first extremum
    let first = marks.iter().position(|m| m.0 == Event::VZero).unwrap_or(marks.len());
    let pattern = [Event::VZero, Event::AntiDiagonal, Event::UZero];
    let (a, b) = bound_constants();
    let mut report = OscillationReport {
        xs: Vec::new(),
        ys: Vec::new(),
        zs: Vec::new(),
        f_at_x: Vec::new(),
        df_at_y: Vec::new(),
        df_at_z: Vec::new(),
        inflection_bounds_ok: Vec::new(),
        zero_bounds_ok: Vec::new(),
        interleaved: true,
        alternating: true,
        a,
        b,
    };
    for (k, &(event, x, p)) in marks[first..].iter().enumerate() {
        if event != pattern[k % 3] {
            report.interleaved = false;
            break;
        }
        match event {
            Event::VZero => {
                report.xs.push(x);
                report.f_at_x.push(p[0]);
            }
            Event::AntiDiagonal => {
                report.ys.push(x);
                report.df_at_y.push(p[1]);
            }
            _ => {
                report.zs.push(x);
                report.df_at_z.push(p[1]);
            }
        }
    }
    let found = report.full_oscillations();
    if found < min_oscillations {
        return Err(Error::TooFewOscillations {
            found,
            needed: min_oscillations,
        });
    }
    report.alternating = report
        .f_at_x
        .iter()
        .enumerate()
        .all(|(n, f)| if n % 2 == 0 { *f > 0.0 } else { *f < 0.0 });
    let (xs, ys, zs) = (&report.xs, &report.ys, &report.zs);
    for n in 0..found {
        let bound = a / report.df_at_y[n].abs().sqrt();
        report
            .inflection_bounds_ok
            .push(ys[n] - xs[n] < bound && bound < xs[n + 1] - ys[n]);
        if n + 1 < zs.len() {
            let bound = b / report.f_at_x[n + 1].abs();
            report
                .zero_bounds_ok
                .push(xs[n + 1] - zs[n] < bound && bound < zs[n + 1] - xs[n + 1]);
        }
    }
    Ok(report)
}
