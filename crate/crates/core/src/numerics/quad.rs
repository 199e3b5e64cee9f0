//! Adaptive Gauss–Kronrod (7/15) quadrature.

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for the odd-indexed Kronrod nodes.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Maximum number of interval bisections.
pub const MAX_SUBDIVISIONS: usize = 4000;

/// Requested accuracy: the estimate is accepted when the error bound is below
/// `max(abs, rel·|I|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadTol {
    pub abs: f64,
    pub rel: f64,
}

impl QuadTol {
    pub fn abs(abs: f64) -> Self {
        QuadTol { abs, rel: 0.0 }
    }
}

impl Default for QuadTol {
    fn default() -> Self {
        QuadTol { abs: 1e-12, rel: 1e-12 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<const N: usize> {
    pub value: [f64; N],
    pub error: f64,
}

fn gk15<const N: usize, F: FnMut(f64) -> [f64; N]>(f: &mut F, a: f64, b: f64) -> ([f64; N], f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut kron = [0.0; N];
    let mut gauss = [0.0; N];
    let fc = f(c);
    for d in 0..N {
        kron[d] = WGK[7] * fc[d];
        gauss[d] = WG[3] * fc[d];
    }
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        for d in 0..N {
            let s = f1[d] + f2[d];
            kron[d] += WGK[j] * s;
            if j % 2 == 1 {
                gauss[d] += WG[j / 2] * s;
            }
        }
    }
    let mut err: f64 = 0.0;
    for d in 0..N {
        kron[d] *= h;
        gauss[d] *= h;
        err = err.max((kron[d] - gauss[d]).abs());
    }
    (kron, err)
}

/// Integrates a vector-valued function over `[a, b]` by globally adaptive
/// bisection of the interval with the largest error estimate.
pub fn integrate_vec<const N: usize, F>(mut f: F, a: f64, b: f64, tol: QuadTol) -> Result<Quadrature<N>>
where
    F: FnMut(f64) -> [f64; N],
{
    if a == b {
        return Ok(Quadrature {
            value: [0.0; N],
            error: 0.0,
        });
    }
    let (v, e) = gk15(&mut f, a, b);
    let mut parts = vec![(a, b, v, e)];
    let mut total = v;
    let mut error = e;
    for _ in 0..MAX_SUBDIVISIONS {
        let magnitude = total.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if error.is_finite() && magnitude.is_finite() && error <= tol.abs.max(tol.rel * magnitude) {
            return Ok(Quadrature { value: total, error });
        }
        let worst = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (lo, hi, v_old, e_old) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&mut f, lo, mid);
        let (v2, e2) = gk15(&mut f, mid, hi);
        for d in 0..N {
            total[d] += v1[d] + v2[d] - v_old[d];
        }
        error += e1 + e2 - e_old;
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
        if !error.is_finite() {
            break;
        }
    }
    // recompute the sum from scratch to shed accumulated rounding
    let error: f64 = parts.iter().map(|p| p.3).sum();
    let magnitude = total.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let requested = tol.abs.max(tol.rel * magnitude);
    if error.is_finite() && magnitude.is_finite() && error <= requested {
        let mut value = [0.0; N];
        for p in &parts {
            for d in 0..N {
                value[d] += p.2[d];
            }
        }
        return Ok(Quadrature { value, error });
    }
    Err(Error::QuadratureFailure {
        estimate: error,
        requested,
    })
}

/// Scalar version of [`integrate_vec`].
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: QuadTol) -> Result<Quadrature<1>> {
    integrate_vec(|x| [f(x)], a, b, tol)
}

/// `∫_origin^{pᵢ} f` for every point `pᵢ`, accumulated outwards from
/// `origin` over consecutive points on either side.
pub fn cumulative<F: FnMut(f64) -> f64>(mut f: F, origin: f64, points: &[f64], tol: QuadTol) -> Result<Vec<f64>> {
    let mut out = vec![0.0; points.len()];
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| (points[i] - origin).abs().total_cmp(&(points[j] - origin).abs()));
    let (mut above, mut below) = ((origin, 0.0), (origin, 0.0));
    for i in order {
        let p = points[i];
        let side = if p >= origin { &mut above } else { &mut below };
        side.1 += integrate(&mut f, side.0, p, tol)?.value[0];
        side.0 = p;
        out[i] = side.1;
    }
    Ok(out)
}

/// Which end of the interval carries the singularity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Lower,
    Upper,
}

/// `∫ₐᵇ g(x, d)·d^{-α} dx` where `d` is the distance from `x` to the singular
/// endpoint and `0 ≤ α < 1`.
///
/// Substituting `d = L·s^m` with `m = 1/(1-α)` turns the integrand into
/// `m·L^{1-α}·g(x(s), L·s^m)`, which is bounded. `g` receives `d` directly so
/// callers can avoid cancellation in factors like `a - ξ`.
pub fn integrate_endpoint_singular<F>(
    mut g: F,
    a: f64,
    b: f64,
    alpha: f64,
    end: Endpoint,
    tol: QuadTol,
) -> Result<Quadrature<1>>
where
    F: FnMut(f64, f64) -> f64,
{
    assert!((0.0..1.0).contains(&alpha), "exponent must lie in [0, 1)");
    let len = b - a;
    let m = 1.0 / (1.0 - alpha);
    let factor = m * len.abs().powf(1.0 - alpha) * len.signum();
    integrate(
        |s| {
            let d = len.abs() * s.powf(m);
            let x = match end {
                Endpoint::Upper => b - d * len.signum(),
                Endpoint::Lower => a + d * len.signum(),
            };
            factor * g(x, d)
        },
        0.0,
        1.0,
        tol,
    )
}
