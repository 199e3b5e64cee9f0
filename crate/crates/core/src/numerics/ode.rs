//! Adaptive Dormand–Prince 5(4) integration with step observers.
//!
//! Values inside an accepted step are obtained by re-stepping from the step
//! start with the 5th-order formula, which keeps interior samples and event
//! locations at the accuracy of the step itself.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;

const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;

// 5th minus embedded 4th order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

pub type State<const N: usize> = [f64; N];

/// Step-size control settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeTol {
    pub abs: f64,
    pub rel: f64,
    /// Initial step magnitude (0 picks one automatically).
    pub h_init: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for OdeTol {
    fn default() -> Self {
        OdeTol {
            abs: 1e-10,
            rel: 1e-10,
            h_init: 0.0,
            h_min: 1e-14,
            h_max: f64::INFINITY,
            max_steps: 2_000_000,
        }
    }
}

impl OdeTol {
    pub fn with_tolerance(tol: f64) -> Self {
        OdeTol {
            abs: tol,
            rel: tol,
            ..Default::default()
        }
    }
}

fn axpy<const N: usize>(y: &State<N>, h: f64, terms: &[(f64, &State<N>)]) -> State<N> {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

/// One Dormand–Prince step; returns the 5th-order solution, the local error
/// vector and the derivative at the new point.
fn dopri_step<const N: usize, F>(f: &F, t: f64, y: &State<N>, k1: &State<N>, h: f64) -> (State<N>, State<N>, State<N>)
where
    F: Fn(f64, &State<N>) -> State<N>,
{
    let k2 = f(t + C2 * h, &axpy(y, h, &[(A21, k1)]));
    let k3 = f(t + C3 * h, &axpy(y, h, &[(A31, k1), (A32, &k2)]));
    let k4 = f(t + C4 * h, &axpy(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]));
    let k5 = f(
        t + C5 * h,
        &axpy(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
    );
    let k6 = f(
        t + h,
        &axpy(y, h, &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
    );
    let y1 = axpy(y, h, &[(B1, k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
    let k7 = f(t + h, &y1);
    let mut err = [0.0; N];
    for i in 0..N {
        err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
    }
    (y1, err, k7)
}

/// An accepted step from `(t0, y0)` to `(t1, y1)`.
#[derive(Debug, Clone, Copy)]
pub struct Step<const N: usize> {
    pub t0: f64,
    pub y0: State<N>,
    pub k0: State<N>,
    pub t1: f64,
    pub y1: State<N>,
}

impl<const N: usize> Step<N> {
    /// State at `t` between `t0` and `t1`, by a fresh 5th-order step from `t0`.
    pub fn at<F: Fn(f64, &State<N>) -> State<N>>(&self, f: &F, t: f64) -> State<N> {
        if t == self.t0 {
            return self.y0;
        }
        if t == self.t1 {
            return self.y1;
        }
        dopri_step(f, self.t0, &self.y0, &self.k0, t - self.t0).0
    }

    /// Whether `t` lies in the half-open step interval `(t0, t1]`, in the
    /// direction of integration.
    pub fn covers(&self, t: f64) -> bool {
        if self.t1 >= self.t0 {
            t > self.t0 && t <= self.t1
        } else {
            t < self.t0 && t >= self.t1
        }
    }

    /// Locates a sign change of `g` inside the step with the Illinois
    /// variant of regula falsi. Returns `None` when `g` does not change sign.
    pub fn find_root<F, G>(&self, f: &F, g: G, tol: f64) -> Option<(f64, State<N>)>
    where
        F: Fn(f64, &State<N>) -> State<N>,
        G: Fn(f64, &State<N>) -> f64,
    {
        let g0 = g(self.t0, &self.y0);
        let g1 = g(self.t1, &self.y1);
        if g0 == 0.0 || g0.signum() == g1.signum() {
            return None;
        }
        if g1 == 0.0 {
            return Some((self.t1, self.y1));
        }
        let (mut ta, mut ga) = (self.t0, g0);
        let (mut tb, mut gb) = (self.t1, g1);
        let mut side = 0i8;
        let mut best = (self.t1, self.y1);
        for _ in 0..200 {
            let t = (ta * gb - tb * ga) / (gb - ga);
            let t = if t.is_finite() && (t - ta) * (t - tb) <= 0.0 {
                t
            } else {
                0.5 * (ta + tb)
            };
            let y = self.at(f, t);
            let gt = g(t, &y);
            best = (t, y);
            if gt.abs() <= tol || (tb - ta).abs() <= 4.0 * f64::EPSILON * t.abs().max(1.0) {
                break;
            }
            if gt.signum() == gb.signum() {
                tb = t;
                gb = gt;
                if side == 1 {
                    ga *= 0.5;
                }
                side = 1;
            } else {
                ta = t;
                ga = gt;
                if side == -1 {
                    gb *= 0.5;
                }
                side = -1;
            }
        }
        Some(best)
    }
}

/// What an observer wants after seeing a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

/// Outcome of [`solve`].
#[derive(Debug, Clone, Copy)]
pub struct Solution<const N: usize> {
    pub t: f64,
    pub y: State<N>,
    pub steps: usize,
    /// True when an observer stopped the integration before `t_end`.
    pub stopped: bool,
}

fn error_norm<const N: usize>(err: &State<N>, y0: &State<N>, y1: &State<N>, tol: &OdeTol) -> f64 {
    let mut acc = 0.0;
    for i in 0..N {
        let sc = tol.abs + tol.rel * y0[i].abs().max(y1[i].abs());
        acc += (err[i] / sc).powi(2);
    }
    (acc / N as f64).sqrt()
}

/// Integrates `y' = f(t, y)` from `t0` towards `t_end` (either direction),
/// handing every accepted step to `observer`.
pub fn solve<const N: usize, F, O>(
    f: &F,
    t0: f64,
    y0: State<N>,
    t_end: f64,
    tol: &OdeTol,
    mut observer: O,
) -> Result<Solution<N>>
where
    F: Fn(f64, &State<N>) -> State<N>,
    O: FnMut(&Step<N>) -> Control,
{
    let dir = if t_end >= t0 { 1.0 } else { -1.0 };
    let mut t = t0;
    let mut y = y0;
    let mut k = f(t, &y);
    let span = (t_end - t0).abs();
    let mut h = if tol.h_init > 0.0 {
        tol.h_init
    } else {
        let scale = y.iter().fold(0.0f64, |m, v| m.max(v.abs())) + 1.0;
        let slope = k.iter().fold(0.0f64, |m, v| m.max(v.abs())) + 1e-300;
        (0.01 * scale / slope).min(0.1).max(tol.h_min)
    }
    .min(tol.h_max)
    .min(span.max(tol.h_min));
    let mut steps = 0;
    while (t_end - t) * dir > 0.0 {
        if steps >= tol.max_steps {
            return Err(Error::TooManySteps(tol.max_steps));
        }
        let remaining = (t_end - t).abs();
        let last = h >= remaining;
        let hs = if last { remaining } else { h };
        let (y1, err, k1) = dopri_step(f, t, &y, &k, dir * hs);
        let en = error_norm(&err, &y, &y1, tol);
        if !en.is_finite() || y1.iter().any(|v| !v.is_finite()) {
            h = 0.2 * hs;
            if h < tol.h_min {
                return Err(Error::StepUnderflow { at: t, step: h });
            }
            continue;
        }
        if en <= 1.0 {
            let t1 = if last { t_end } else { t + dir * hs };
            let step = Step {
                t0: t,
                y0: y,
                k0: k,
                t1,
                y1,
            };
            steps += 1;
            t = t1;
            y = y1;
            k = k1;
            if observer(&step) == Control::Stop {
                return Ok(Solution {
                    t,
                    y,
                    steps,
                    stopped: true,
                });
            }
            let grow = if en == 0.0 {
                5.0
            } else {
                (0.9 * en.powf(-0.2)).clamp(0.2, 5.0)
            };
            h = (hs * grow).min(tol.h_max);
        } else {
            h = hs * (0.9 * en.powf(-0.2)).clamp(0.1, 1.0);
            if h < tol.h_min {
                return Err(Error::StepUnderflow { at: t, step: h });
            }
        }
    }
    Ok(Solution {
        t,
        y,
        steps,
        stopped: false,
    })
}

/// Samples the solution on the given grid (monotone in the direction of
/// integration, starting at `t0`). Stops early if `keep_going` rejects a
/// state; the returned vector then covers a prefix of the grid.
pub fn solve_on_grid<const N: usize, F, K>(
    f: &F,
    t0: f64,
    y0: State<N>,
    grid: &[f64],
    tol: &OdeTol,
    mut keep_going: K,
) -> Result<Vec<State<N>>>
where
    F: Fn(f64, &State<N>) -> State<N>,
    K: FnMut(f64, &State<N>) -> bool,
{
    let mut out = Vec::with_capacity(grid.len());
    let mut next = 0;
    while next < grid.len() && grid[next] == t0 {
        out.push(y0);
        next += 1;
    }
    let Some(&t_end) = grid.last() else {
        return Ok(out);
    };
    if next == grid.len() {
        return Ok(out);
    }
    solve(f, t0, y0, t_end, tol, |step| {
        while next < grid.len() && step.covers(grid[next]) {
            let y = step.at(f, grid[next]);
            out.push(y);
            next += 1;
        }
        if keep_going(step.t1, &step.y1) {
            Control::Continue
        } else {
            Control::Stop
        }
    })?;
    Ok(out)
}
