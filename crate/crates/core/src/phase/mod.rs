//! Phase-plane systems for the two cases whose solutions are not available
//! in closed form.
//!
//! Writing the curve as a graph `y = u(x)` with `v = u_x`, the soliton
//! equation becomes a planar autonomous system in `(u, v)` with the graph
//! variable `x` as time.

mod oscillation;
mod separatrix;

pub use oscillation::{bound_constants, lyapunov_1e, lyapunov_1e_lifted, oscillation_sequences, OscillationReport};
pub use separatrix::{
    classify_backward, find_separatrix, first_return, upper_branch_bracket, upper_branch_check,
    upper_branch_trajectory, BranchCheck, Separatrix, SeparatrixClass,
};

use crate::error::{Error, Result};
use crate::numerics::ode::{solve, Control, OdeTol, State};

/// The planar systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseSystem {
    /// `u′ = v`, `v′ = (u − v)³`.
    Deg1c,
    /// `u′ = v`, `v′ = −(u + v)³`.
    Deg1e,
    /// `w = u − v`: `w′ = v − w³`, `v′ = w³`.
    Deg1cWV,
    /// `(v, w)` with `w = v_x`: `v′ = w`, `w′ = −3·w^{2/3}·(v + w)`. The
    /// field is not Lipschitz at `w = 0` and is only evaluated, never
    /// integrated.
    Deg1eWV,
}

impl PhaseSystem {
    pub fn field(self, p: &State<2>) -> State<2> {
        let [a, b] = *p;
        match self {
            PhaseSystem::Deg1c => {
                let d = a - b;
                [b, d * d * d]
            }
            PhaseSystem::Deg1e => {
                let s = a + b;
                [b, -s * s * s]
            }
            PhaseSystem::Deg1cWV => {
                let w3 = a * a * a;
                [b - w3, w3]
            }
            PhaseSystem::Deg1eWV => {
                let w23 = b.abs().powf(2.0 / 3.0);
                [b, -3.0 * w23 * (a + b)]
            }
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            PhaseSystem::Deg1c => "1-c",
            PhaseSystem::Deg1e => "1-e",
            PhaseSystem::Deg1cWV => "1-c (w, v)",
            PhaseSystem::Deg1eWV => "1-e (v, w)",
        }
    }

    /// Nullclines that are lines through the origin, given by their
    /// direction. The curved nullcline `v = w³` of the `(w, v)` form of 1-c
    /// is left out.
    pub fn nullclines(self) -> Vec<(f64, f64)> {
        match self {
            PhaseSystem::Deg1c => vec![(1.0, 0.0), (1.0, 1.0)],
            PhaseSystem::Deg1e => vec![(1.0, 0.0), (1.0, -1.0)],
            PhaseSystem::Deg1cWV => vec![(0.0, 1.0)],
            PhaseSystem::Deg1eWV => vec![(1.0, 0.0), (1.0, -1.0)],
        }
    }
}

/// Lines through the origin whose crossings are recorded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Event {
    /// `v = 0`.
    VZero,
    /// `u = 0`.
    UZero,
    /// `u + v = 0`.
    AntiDiagonal,
    /// `u − v = 0`.
    Diagonal,
}

impl Event {
    pub const ALL: [Event; 4] = [Event::VZero, Event::UZero, Event::AntiDiagonal, Event::Diagonal];

    pub fn value(self, p: &State<2>) -> f64 {
        match self {
            Event::VZero => p[1],
            Event::UZero => p[0],
            Event::AntiDiagonal => p[0] + p[1],
            Event::Diagonal => p[0] - p[1],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Event::VZero => "v=0",
            Event::UZero => "u=0",
            Event::AntiDiagonal => "u+v=0",
            Event::Diagonal => "u-v=0",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventHit {
    pub event: Event,
    pub x: f64,
    pub state: State<2>,
}

/// When to stop integrating.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopRules {
    /// Largest `|x − x₀|`.
    pub max_span: f64,
    /// Largest `√(u² + v²)`.
    pub max_radius: f64,
    /// Stop once `u⁴ + 2v²` falls below this (only meaningful for 1-e,
    /// whose trajectories spiral into the origin).
    pub origin_energy: f64,
    /// Stop after this many recorded events.
    pub max_events: usize,
}

impl Default for StopRules {
    fn default() -> Self {
        StopRules {
            max_span: 100.0,
            max_radius: 1e6,
            origin_energy: 1e-12,
            max_events: usize::MAX,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    SpanReached,
    RadiusExceeded,
    ReachedOrigin,
    EventLimit,
}

/// Accepted integration steps and the event crossings along them, both in
/// the order of integration.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySegment {
    pub system: PhaseSystem,
    pub xs: Vec<f64>,
    pub states: Vec<State<2>>,
    pub events: Vec<EventHit>,
    pub stop: StopReason,
}

impl TrajectorySegment {
    pub fn hits(&self, event: Event) -> impl Iterator<Item = &EventHit> {
        self.events.iter().filter(move |h| h.event == event)
    }
}

/// Absolute/relative tolerance used for phase-plane integration.
pub const PHASE_TOL: f64 = 1e-12;

/// Integrates `system` from `start` at `x0` forwards (`direction > 0`) or
/// backwards, recording crossings of `events`.
pub fn integrate(
    system: PhaseSystem,
    start: State<2>,
    x0: f64,
    direction: f64,
    rules: &StopRules,
    events: &[Event],
) -> Result<TrajectorySegment> {
    integrate_with_tol(system, start, x0, direction, rules, events, PHASE_TOL)
}

pub fn integrate_with_tol(
    system: PhaseSystem,
    start: State<2>,
    x0: f64,
    direction: f64,
    rules: &StopRules,
    events: &[Event],
    tol: f64,
) -> Result<TrajectorySegment> {
    if start == [0.0, 0.0] {
        return Err(Error::SingularStart);
    }
    if system == PhaseSystem::Deg1eWV {
        return Err(Error::InvalidConstants(
            "the (v, w) form of 1-e is not integrated".into(),
        ));
    }
    if !start.iter().all(|v| v.is_finite()) || !(rules.max_span > 0.0) {
        return Err(Error::InvalidConstants(format!(
            "start {start:?}, span {}",
            rules.max_span
        )));
    }
    let f = |_x: f64, p: &State<2>| system.field(p);
    let ode_tol = OdeTol::with_tolerance(tol);
    let mut xs = vec![x0];
    let mut states = vec![start];
    let mut hits = Vec::new();
    let mut stop = StopReason::SpanReached;
    let energy = |p: &State<2>| p[0].powi(4) + 2.0 * p[1] * p[1];
    let x_end = x0 + direction.signum() * rules.max_span;
    solve(&f, x0, start, x_end, &ode_tol, |step| {
        let mut found: Vec<EventHit> = events
            .iter()
            .filter_map(|&e| {
                step.find_root(&f, |_, p| e.value(p), 1e-14)
                    .map(|(x, state)| EventHit { event: e, x, state })
            })
            .collect();
        found.sort_by(|a, b| ((a.x - step.t0).abs()).total_cmp(&(b.x - step.t0).abs()));
        for h in found {
            if hits.len() >= rules.max_events {
                break;
            }
            hits.push(h);
        }
        xs.push(step.t1);
        states.push(step.y1);
        let p = step.y1;
        if hits.len() >= rules.max_events {
            stop = StopReason::EventLimit;
            Control::Stop
        } else if p[0].hypot(p[1]) > rules.max_radius {
            stop = StopReason::RadiusExceeded;
            Control::Stop
        } else if system == PhaseSystem::Deg1e && energy(&p) < rules.origin_energy {
            stop = StopReason::ReachedOrigin;
            Control::Stop
        } else {
            Control::Continue
        }
    })?;
    Ok(TrajectorySegment {
        system,
        xs,
        states,
        events: hits,
        stop,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fields() {
        assert_eq!(PhaseSystem::Deg1c.field(&[2.0, 1.0]), [1.0, 1.0]);
        assert_eq!(PhaseSystem::Deg1e.field(&[1.0, 1.0]), [1.0, -8.0]);
        assert_eq!(PhaseSystem::Deg1cWV.field(&[2.0, 1.0]), [-7.0, 8.0]);
    }

    #[test]
    fn rotated_coordinates_agree() {
        // w = u − v along a 1-c trajectory obeys the (w, v) system
        let rules = StopRules {
            max_span: 2.0,
            ..Default::default()
        };
        let a = integrate(PhaseSystem::Deg1c, [0.3, -0.2], 0.0, 1.0, &rules, &[]).unwrap();
        let b = integrate(PhaseSystem::Deg1cWV, [0.5, -0.2], 0.0, 1.0, &rules, &[]).unwrap();
        let (pa, pb) = (a.states.last().unwrap(), b.states.last().unwrap());
        assert!((pa[0] - pa[1] - pb[0]).abs() < 1e-9);
        assert!((pa[1] - pb[1]).abs() < 1e-9);
    }

    #[test]
    fn origin_is_rejected() {
        let r = integrate(PhaseSystem::Deg1e, [0.0, 0.0], 0.0, 1.0, &StopRules::default(), &[]);
        assert_eq!(r.unwrap_err(), Error::SingularStart);
    }

    #[test]
    fn events_are_ordered_and_on_their_lines() {
        let t = integrate(
            PhaseSystem::Deg1e,
            [1.0, 0.0],
            0.0,
            1.0,
            &StopRules {
                max_span: 30.0,
                ..Default::default()
            },
            &Event::ALL,
        )
        .unwrap();
        assert!(t.events.len() > 8);
        for w in t.events.windows(2) {
            assert!(w[1].x >= w[0].x);
        }
        for h in &t.events {
            assert!(h.event.value(&h.state).abs() < 1e-12);
        }
    }

    #[test]
    fn radius_stop() {
        let rules = StopRules {
            max_radius: 10.0,
            ..Default::default()
        };
        let t = integrate(PhaseSystem::Deg1c, [1.0, 2.0], 0.0, 1.0, &rules, &[]).unwrap();
        assert_eq!(t.stop, StopReason::RadiusExceeded);
    }
}
