//! Sampling of the individual families.

use super::intrinsic::{synthesize_intrinsic, IntrinsicState};
use super::period::amplitude;
use super::scooper::scooper;
use super::{Variant, Window};
use crate::classify::{canonical_form, CaseTag, SolitonCase};
use crate::error::{Error, Result};
use crate::geometry::curve::{Chart, DiscreteCurve, Jet};
use crate::geometry::linalg::Vec2;
use crate::numerics::ode::{solve_on_grid, OdeTol, State};
use crate::numerics::quad::{cumulative, QuadTol};
use crate::phase::{find_separatrix, PhaseSystem};
use std::f64::consts::{FRAC_PI_2, SQRT_2};

/// Tolerance for the ODE solves behind the numerically generated families.
const ODE_TOL: f64 = 1e-12;

/// Phase states beyond this radius count as a blow-up inside the window.
const BLOWUP_RADIUS: f64 = 1e8;

fn quad_tol() -> QuadTol {
    QuadTol { abs: 1e-14, rel: 1e-13 }
}

/// Graph `y = f(x)` from `(f, f′, f″)`.
fn graph_over_x(xs: Vec<f64>, f: impl Fn(f64) -> [f64; 3]) -> Result<DiscreteCurve> {
    let vals: Vec<[f64; 3]> = xs.iter().map(|&x| f(x)).collect();
    let points = xs.iter().zip(&vals).map(|(&x, v)| Vec2::new(x, v[0])).collect();
    let jets = vals
        .iter()
        .map(|v| Jet {
            d1: Vec2::new(1.0, v[1]),
            d2: Vec2::new(0.0, v[2]),
        })
        .collect();
    DiscreteCurve::new(xs, points, Chart::GraphOverX)?.with_jets(jets)
}

/// Graph `x = g(y)` from `(g, g′, g″)`.
fn graph_over_y(ys: Vec<f64>, g: impl Fn(f64) -> [f64; 3]) -> Result<DiscreteCurve> {
    let vals: Vec<[f64; 3]> = ys.iter().map(|&y| g(y)).collect();
    let points = ys.iter().zip(&vals).map(|(&y, v)| Vec2::new(v[0], y)).collect();
    let jets = vals
        .iter()
        .map(|v| Jet {
            d1: Vec2::new(v[1], 1.0),
            d2: Vec2::new(v[2], 0.0),
        })
        .collect();
    DiscreteCurve::new(ys, points, Chart::GraphOverY)?.with_jets(jets)
}

fn positive(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidConstants(format!("{name} = {value} must be positive")))
    }
}

fn finite(values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidConstants(format!("non-finite constants {values:?}")))
    }
}

pub(super) fn sample(case: CaseTag, variant: Variant, window: Window) -> Result<DiscreteCurve> {
    let grid = window.grid();
    match variant {
        Variant::Parabola { c1, c2 } => {
            finite(&[c1, c2])?;
            graph_over_x(grid, |x| [0.5 * x * x + c1 * x + c2, x + c1, 1.0])
        }
        Variant::VerticalLine { c } => {
            finite(&[c])?;
            graph_over_y(grid, |_| [c, 0.0, 0.0])
        }
        Variant::HorizontalLine { c } => {
            finite(&[c])?;
            graph_over_x(grid, |_| [c, 0.0, 0.0])
        }
        Variant::Hyperbola { c, sign } => {
            finite(&[c])?;
            if sign.abs() != 1.0 {
                return Err(Error::InvalidConstants(format!("sign = {sign} must be ±1")));
            }
            if (window.lo - c) * (window.hi - c) <= 0.0 {
                return Err(Error::InvalidConstants(format!(
                    "window [{}, {}] meets the asymptote x = {c}",
                    window.lo, window.hi
                )));
            }
            let k = sign * SQRT_2;
            graph_over_x(grid, |x| {
                let d = x - c;
                [k / d, -k / (d * d), 2.0 * k / (d * d * d)]
            })
        }
        Variant::ConvexWell { c1, c2 } => well(c1, c2, grid, 1.0),
        Variant::ConcaveCap { c1, c2 } => well(c1, c2, grid, -1.0),
        Variant::Increasing { c1, c2 } => monotone(c1, c2, grid, 1.0),
        Variant::Decreasing { c1, c2 } => monotone(c1, c2, grid, -1.0),
        Variant::Periodic { c1, c2 } => periodic(c1, c2, grid),
        Variant::Quintic { c1, c2 } => {
            finite(&[c1, c2])?;
            graph_over_y(grid, |y| {
                let y2 = y * y;
                [y2 * y2 * y / 20.0 + c1 * y + c2, y2 * y2 / 4.0 + c1, y2 * y]
            })
        }
        Variant::ScooperParabola { c } => {
            finite(&[c])?;
            graph_over_y(grid, |y| [0.5 * y * y - y + c, y - 1.0, 1.0])
        }
        Variant::Scooper { c1, c2 } => scooper(c1, c2, window.lo, window.hi, window.samples),
        Variant::Separatrix { eps } => {
            let sep = find_separatrix(eps, 1e-14)?;
            phase_graph(PhaseSystem::Deg1c, [eps, sep.b_star], grid)
        }
        Variant::Trajectory { u0, v0 } => {
            finite(&[u0, v0])?;
            if u0 == 0.0 && v0 == 0.0 {
                return Err(Error::SingularStart);
            }
            let system = if case == CaseTag::Deg1c {
                PhaseSystem::Deg1c
            } else {
                PhaseSystem::Deg1e
            };
            phase_graph(system, [u0, v0], grid)
        }
        Variant::VerticalTangent { y0 } => {
            finite(&[y0])?;
            let data = canonical_form(&SolitonCase::plain(case)?)?;
            let start = IntrinsicState::new(Vec2::new(0.0, y0), FRAC_PI_2);
            synthesize_intrinsic(&data, start, window.lo, window.hi, window.samples, ODE_TOL)
        }
    }
}

/// `y = ±(a + s²)` with `x = C₂ + ∫₀ˢ 2/R`, `R(y) = √((y + a)(y² + a²)/2)`.
/// Parametrizing by `s` removes the square-root singularity of
/// `dx/dy = (y⁴/2 − C₁)^{-1/2}` at the bottom `y = a`.
fn well(c1: f64, c2: f64, ss: Vec<f64>, mirror: f64) -> Result<DiscreteCurve> {
    positive("C1", c1)?;
    finite(&[c2])?;
    let a = amplitude(c1)?;
    let r = |y: f64| ((y + a) * (y * y + a * a) / 2.0).sqrt();
    let xs = cumulative(|s| 2.0 / r(a + s * s), 0.0, &ss, quad_tol())?;
    let mut points = Vec::with_capacity(ss.len());
    let mut jets = Vec::with_capacity(ss.len());
    for (&s, &x) in ss.iter().zip(&xs) {
        let y = a + s * s;
        let rv = r(y);
        let dr = (3.0 * y * y + 2.0 * a * y + a * a) / (4.0 * rv);
        points.push(Vec2::new(c2 + x, mirror * y));
        jets.push(Jet {
            d1: Vec2::new(2.0 / rv, mirror * 2.0 * s),
            d2: Vec2::new(-4.0 * s * dr / (rv * rv), mirror * 2.0),
        });
    }
    DiscreteCurve::new(ss, points, Chart::Parametric)?.with_jets(jets)
}

/// `x = C₂ ± ∫₀ʸ (ξ⁴/2 + C₁)^{-1/2} dξ`.
fn monotone(c1: f64, c2: f64, ys: Vec<f64>, sign: f64) -> Result<DiscreteCurve> {
    positive("C1", c1)?;
    finite(&[c2])?;
    let q = |y: f64| 0.5 * y.powi(4) + c1;
    let xs = cumulative(|y| q(y).powf(-0.5), 0.0, &ys, quad_tol())?;
    let table: Vec<(f64, f64)> = ys.iter().copied().zip(xs).collect();
    let points = table.iter().map(|&(y, x)| Vec2::new(c2 + sign * x, y)).collect();
    let jets = ys
        .iter()
        .map(|&y| Jet {
            d1: Vec2::new(sign * q(y).powf(-0.5), 1.0),
            d2: Vec2::new(-sign * y * y * y * q(y).powf(-1.5), 0.0),
        })
        .collect();
    DiscreteCurve::new(ys, points, Chart::GraphOverY)?.with_jets(jets)
}

/// `y = a·sin φ`, `x = C₂ + ∫₀^φ g`, `g = √2/(a·√(1 + sin² φ))`.
fn periodic(c1: f64, c2: f64, phis: Vec<f64>) -> Result<DiscreteCurve> {
    positive("C1", c1)?;
    finite(&[c2])?;
    let a = amplitude(c1)?;
    let g = |phi: f64| SQRT_2 / (a * (1.0 + phi.sin().powi(2)).sqrt());
    let xs = cumulative(g, 0.0, &phis, quad_tol())?;
    let mut points = Vec::with_capacity(phis.len());
    let mut jets = Vec::with_capacity(phis.len());
    for (&phi, &x) in phis.iter().zip(&xs) {
        let (sin, cos) = phi.sin_cos();
        let dg = -SQRT_2 / a * sin * cos / (1.0 + sin * sin).powf(1.5);
        points.push(Vec2::new(c2 + x, a * sin));
        jets.push(Jet {
            d1: Vec2::new(g(phi), a * cos),
            d2: Vec2::new(dg, -a * sin),
        });
    }
    DiscreteCurve::new(phis, points, Chart::Parametric)?.with_jets(jets)
}

/// Graph `y = u(x)` of the phase trajectory through `start` at `x = 0`.
fn phase_graph(system: PhaseSystem, start: State<2>, xs: Vec<f64>) -> Result<DiscreteCurve> {
    let f = |_x: f64, p: &State<2>| system.field(p);
    let tol = OdeTol::with_tolerance(ODE_TOL);
    let bounded = |_x: f64, p: &State<2>| p[0].hypot(p[1]) < BLOWUP_RADIUS;
    let split = xs.partition_point(|&x| x < 0.0);
    let back: Vec<f64> = xs[..split].iter().rev().copied().collect();
    let mut states = if back.is_empty() {
        Vec::new()
    } else {
        solve_on_grid(&f, 0.0, start, &back, &tol, bounded)?
    };
    if states.len() < back.len() {
        return Err(blowup(xs[split - 1 - states.len()]));
    }
    states.reverse();
    let fwd = &xs[split..];
    if !fwd.is_empty() {
        let ahead = solve_on_grid(&f, 0.0, start, fwd, &tol, bounded)?;
        if ahead.len() < fwd.len() {
            return Err(blowup(fwd[ahead.len()]));
        }
        states.extend(ahead);
    }
    let points = xs.iter().zip(&states).map(|(&x, p)| Vec2::new(x, p[0])).collect();
    DiscreteCurve::new(xs, points, Chart::GraphOverX)
}

fn blowup(x: f64) -> Error {
    Error::InvalidConstants(format!("trajectory leaves |(u, v)| < {BLOWUP_RADIUS:e} before x = {x}"))
}
