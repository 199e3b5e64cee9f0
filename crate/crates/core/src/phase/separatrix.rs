//! Separatrix search for 1-c and the escaping branch of 1-e.

use super::{integrate, Event, PhaseSystem, StopReason, StopRules, TrajectorySegment};
use crate::error::{Error, Result};

/// Route by which a backward 1-c trajectory from `(ε, b)` leaves the sector
/// `0 < v < u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeparatrixClass {
    /// Crosses `v = 0` first.
    Phi,
    /// Crosses `u = v` first.
    Psi,
    /// Neither within the integration budget; the start is on (or within
    /// rounding of) the separatrix.
    Undecided,
}

/// Span budget for one backward classification run.
const CLASSIFY_SPAN: f64 = 1e6;

/// Classifies the backward trajectory of 1-c from `(eps, b)`.
pub fn classify_backward(eps: f64, b: f64) -> Result<SeparatrixClass> {
    if b <= 0.0 {
        return Ok(SeparatrixClass::Phi);
    }
    if b >= eps {
        return Ok(SeparatrixClass::Psi);
    }
    let rules = StopRules {
        max_span: CLASSIFY_SPAN,
        max_events: 1,
        ..Default::default()
    };
    let t = integrate(
        PhaseSystem::Deg1c,
        [eps, b],
        0.0,
        -1.0,
        &rules,
        &[Event::VZero, Event::Diagonal],
    )?;
    Ok(match t.events.first().map(|h| h.event) {
        Some(Event::VZero) => SeparatrixClass::Phi,
        Some(_) => SeparatrixClass::Psi,
        None => SeparatrixClass::Undecided,
    })
}

/// Bracket `[b_phi, b_psi]` around the starting slope of the trajectory
/// through `u = ε` that tends to the origin as `x → −∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Separatrix {
    pub eps: f64,
    pub b_phi: f64,
    pub b_psi: f64,
    pub b_star: f64,
}

/// Bisection over `b ∈ [0, ε]` on the backward escape route.
pub fn find_separatrix(eps: f64, tol: f64) -> Result<Separatrix> {
    if !(eps > 0.0 && eps <= 0.5) || !(tol > 0.0) {
        return Err(Error::InvalidConstants(format!("eps = {eps}, tol = {tol}")));
    }
    let (mut lo, mut hi) = (0.0, eps);
    // the endpoints are decided by their position on the sector boundary,
    // so probe the interior to make sure both routes actually occur
    let probe_lo = classify_backward(eps, 1e-3 * eps)?;
    let probe_hi = classify_backward(eps, (1.0 - 1e-3) * eps)?;
    if probe_lo == probe_hi {
        return Err(Error::BracketFailure(format!(
            "both ends escape via {probe_lo:?} for eps = {eps}"
        )));
    }
    while hi - lo >= tol {
        let mid = 0.5 * (lo + hi);
        match classify_backward(eps, mid)? {
            SeparatrixClass::Phi => lo = mid,
            SeparatrixClass::Psi => hi = mid,
            SeparatrixClass::Undecided => {
                lo = mid;
                hi = mid;
            }
        }
    }
    Ok(Separatrix {
        eps,
        b_phi: lo,
        b_psi: hi,
        b_star: 0.5 * (lo + hi),
    })
}

/// Where the forward 1-e trajectory from `(u0, 0)`, `u0 < 0`, next meets the
/// positive `u`-axis.
pub fn first_return(u0: f64) -> Result<f64> {
    if !(u0 < 0.0) {
        return Err(Error::InvalidConstants(format!("u0 = {u0} must be negative")));
    }
    let rules = StopRules {
        max_span: 1e4,
        ..Default::default()
    };
    let mut t = integrate(PhaseSystem::Deg1e, [u0, 0.0], 0.0, 1.0, &rules, &[Event::VZero])?;
    t.events.retain(|h| h.state[0] > 0.0);
    t.events
        .first()
        .map(|h| h.state[0])
        .ok_or_else(|| Error::WrongRegime(format!("no return to the positive u-axis from {u0}")))
}

/// Escape threshold for the backward 1-e runs used by
/// [`upper_branch_bracket`].
const ESCAPE_V: f64 = 1e4;

/// Whether the backward 1-e trajectory from `(p, 0)` escapes to
/// `v → +∞` instead of returning to `v = 0`.
fn escapes_backward(p: f64) -> Result<bool> {
    let rules = StopRules {
        max_span: 1e4,
        max_radius: ESCAPE_V,
        max_events: 1,
        ..Default::default()
    };
    let t = integrate(PhaseSystem::Deg1e, [p, 0.0], 0.0, -1.0, &rules, &[Event::VZero])?;
    match t.stop {
        StopReason::RadiusExceeded => Ok(true),
        StopReason::EventLimit => Ok(false),
        other => Err(Error::WrongRegime(format!(
            "backward run from ({p}, 0) ended with {other:?}"
        ))),
    }
}

/// Bracket `[lo, hi]` for the supremum `u_m` of the first-return map: points
/// `(p, 0)` with `p < u_m` are reached from the negative axis, points above
/// escape backwards.
pub fn upper_branch_bracket(tol: f64) -> Result<(f64, f64)> {
    let (mut lo, mut hi) = (0.05, 4.0);
    if escapes_backward(lo)? || !escapes_backward(hi)? {
        return Err(Error::BracketFailure(format!(
            "[{lo}, {hi}] does not straddle the escape threshold"
        )));
    }
    while hi - lo >= tol {
        let mid = 0.5 * (lo + hi);
        if escapes_backward(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo, hi))
}

/// The trajectory of 1-e that escapes with `u → −∞`, `v → +∞` as
/// `x → −∞`.
///
/// Backwards in `x` it hugs the curve `u + v = v^{1/3}` and any error is
/// amplified without bound, so it is integrated forwards from a far start on
/// that curve, where neighbouring trajectories contract onto it, until it
/// reaches `v = 0` at `u = u_m`. The segment is in forward order.
pub fn upper_branch_trajectory(v_far: f64) -> Result<TrajectorySegment> {
    if !(v_far > 50.0 && v_far.is_finite()) {
        return Err(Error::InvalidConstants(format!(
            "starting height {v_far} must exceed 50"
        )));
    }
    let rules = StopRules {
        max_span: 1e3,
        max_radius: 4.0 * v_far,
        max_events: 1,
        ..Default::default()
    };
    let start = [-v_far + v_far.cbrt(), v_far];
    let t = integrate(PhaseSystem::Deg1e, start, 0.0, 1.0, &rules, &[Event::VZero])?;
    if t.stop != StopReason::EventLimit {
        return Err(Error::WrongRegime(format!("escaping branch ended with {:?}", t.stop)));
    }
    Ok(t)
}

/// Outcome of checking `u ≤ −v + 2v^{1/3}` on states with `1 < v ≤ 50`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchCheck {
    pub checked: usize,
    pub violations: usize,
    /// Smallest `−v + 2v^{1/3} − u` seen.
    pub min_margin: f64,
}

impl BranchCheck {
    pub fn holds(&self) -> bool {
        self.checked > 0 && self.violations == 0
    }
}

/// Evaluates the upper-branch inequality along a 1-e trajectory in the
/// escaping regime (`u → −∞`, `v → +∞`), such as the one from
/// [`upper_branch_trajectory`].
pub fn upper_branch_check(traj: &TrajectorySegment) -> Result<BranchCheck> {
    if traj.system != PhaseSystem::Deg1e {
        return Err(Error::WrongRegime(format!(
            "expected the 1-e system, got {}",
            traj.system.label()
        )));
    }
    let Some(top) = traj.states.iter().max_by(|a, b| a[1].total_cmp(&b[1])) else {
        return Err(Error::WrongRegime("empty trajectory".into()));
    };
    if top[1] < 2.0 || top[0] >= 0.0 {
        return Err(Error::WrongRegime(format!(
            "largest v is {} at u = {}; not escaping towards u → −∞, v → +∞",
            top[1], top[0]
        )));
    }
    let mut check = BranchCheck {
        checked: 0,
        violations: 0,
        min_margin: f64::INFINITY,
    };
    for p in traj.states.iter().filter(|p| p[1] > 1.0 && p[1] <= 50.0) {
        let margin = -p[1] + 2.0 * p[1].cbrt() - p[0];
        check.checked += 1;
        check.min_margin = check.min_margin.min(margin);
        if margin < 0.0 {
            check.violations += 1;
        }
    }
    Ok(check)
}
