//! Affine normal forms of soliton data.
//!
//! Every pair `(B, C)` is affinely equivalent to exactly one of seventeen
//! normal forms: seven with `det B = 0` and ten with `det B ≠ 0`. The
//! classifier decides the case and builds the affine map realizing the
//! equivalence; exact algebraic dichotomies become tolerance bands, and data
//! falling inside a band is reported instead of being forced into a case.

use crate::error::{Error, Result};
use crate::geometry::affine::{pushforward, AffineMap, SolitonData};
use crate::geometry::linalg::{cbrt_signed, eigen2_with_tol, eigenvector, Eigenvalues, Mat2, Vec2, DEFAULT_REL_TOL};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseTag {
    Deg1a,
    Deg1b,
    Deg1c,
    Deg1d,
    Deg1e,
    Deg1f,
    Deg1g,
    Nondeg2a,
    Nondeg2b,
    Nondeg2c,
    Nondeg2d,
    Nondeg2e,
    Nondeg2f,
    Nondeg2g,
    Nondeg2h,
    Nondeg2i,
    Nondeg2j,
}

impl CaseTag {
    pub const ALL: [CaseTag; 17] = [
        CaseTag::Deg1a,
        CaseTag::Deg1b,
        CaseTag::Deg1c,
        CaseTag::Deg1d,
        CaseTag::Deg1e,
        CaseTag::Deg1f,
        CaseTag::Deg1g,
        CaseTag::Nondeg2a,
        CaseTag::Nondeg2b,
        CaseTag::Nondeg2c,
        CaseTag::Nondeg2d,
        CaseTag::Nondeg2e,
        CaseTag::Nondeg2f,
        CaseTag::Nondeg2g,
        CaseTag::Nondeg2h,
        CaseTag::Nondeg2i,
        CaseTag::Nondeg2j,
    ];

    /// Short label such as `"1-c"`.
    pub fn label(self) -> &'static str {
        match self {
            CaseTag::Deg1a => "1-a",
            CaseTag::Deg1b => "1-b",
            CaseTag::Deg1c => "1-c",
            CaseTag::Deg1d => "1-d",
            CaseTag::Deg1e => "1-e",
            CaseTag::Deg1f => "1-f",
            CaseTag::Deg1g => "1-g",
            CaseTag::Nondeg2a => "2-a",
            CaseTag::Nondeg2b => "2-b",
            CaseTag::Nondeg2c => "2-c",
            CaseTag::Nondeg2d => "2-d",
            CaseTag::Nondeg2e => "2-e",
            CaseTag::Nondeg2f => "2-f",
            CaseTag::Nondeg2g => "2-g",
            CaseTag::Nondeg2h => "2-h",
            CaseTag::Nondeg2i => "2-i",
            CaseTag::Nondeg2j => "2-j",
        }
    }

    /// Parses `"1-c"`, `"1c"` or `"Deg1c"` (case-insensitive).
    pub fn from_label(s: &str) -> Option<CaseTag> {
        let norm: String = s
            .trim()
            .to_ascii_lowercase()
            .trim_start_matches("nondeg")
            .trim_start_matches("deg")
            .chars()
            .filter(|c| *c != '-' && *c != '_')
            .collect();
        CaseTag::ALL.into_iter().find(|t| t.label().replace('-', "") == norm)
    }

    pub fn is_degenerate(self) -> bool {
        self <= CaseTag::Deg1g
    }

    /// Open interval of admissible values of the free constant `a`, for the
    /// cases whose normal form carries one.
    pub fn parameter_range(self) -> Option<(f64, f64)> {
        match self {
            CaseTag::Nondeg2b | CaseTag::Nondeg2c | CaseTag::Nondeg2j => Some((0.0, f64::INFINITY)),
            CaseTag::Nondeg2h | CaseTag::Nondeg2i => Some((0.0, 1.0)),
            _ => None,
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A normal form: tag plus the free constant where there is one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolitonCase {
    pub tag: CaseTag,
    pub a: Option<f64>,
}

impl SolitonCase {
    /// Validates presence and range of the parameter.
    pub fn new(tag: CaseTag, a: Option<f64>) -> Result<Self> {
        match (tag.parameter_range(), a) {
            (None, _) => Ok(SolitonCase { tag, a: None }),
            (Some(_), None) => Err(Error::MissingParameter(tag.label())),
            (Some((lo, hi)), Some(v)) if v > lo && v < hi => Ok(SolitonCase { tag, a: Some(v) }),
            (Some(_), Some(v)) => Err(Error::InvalidParameter {
                case: tag.label(),
                value: v,
            }),
        }
    }

    pub fn plain(tag: CaseTag) -> Result<Self> {
        SolitonCase::new(tag, None)
    }
}

/// The literal normal form `(B₀, C₀)` of a case.
pub fn canonical_form(case: &SolitonCase) -> Result<SolitonData> {
    let tag = case.tag;
    let a = match (tag.parameter_range(), case.a) {
        (Some(_), None) => return Err(Error::MissingParameter(tag.label())),
        (_, a) => a.unwrap_or(0.0),
    };
    let e1 = Vec2::new(1.0, 0.0);
    let e2 = Vec2::new(0.0, 1.0);
    let nil = Mat2::new(0.0, 1.0, 0.0, 0.0);
    let (b, c) = match tag {
        CaseTag::Deg1a => (Mat2::ZERO, e2),
        CaseTag::Deg1b => (Mat2::diag(0.0, 1.0), Vec2::ZERO),
        CaseTag::Deg1c => (Mat2::diag(0.0, 1.0), e1),
        CaseTag::Deg1d => (Mat2::diag(0.0, -1.0), Vec2::ZERO),
        CaseTag::Deg1e => (Mat2::diag(0.0, -1.0), e1),
        CaseTag::Deg1f => (nil, Vec2::ZERO),
        CaseTag::Deg1g => (nil, e2),
        CaseTag::Nondeg2a => (Mat2::J, Vec2::ZERO),
        CaseTag::Nondeg2b => (Mat2::IDENTITY + Mat2::J.scale(a), Vec2::ZERO),
        CaseTag::Nondeg2c => (-Mat2::IDENTITY + Mat2::J.scale(a), Vec2::ZERO),
        CaseTag::Nondeg2d => (Mat2::IDENTITY, Vec2::ZERO),
        CaseTag::Nondeg2e => (-Mat2::IDENTITY, Vec2::ZERO),
        CaseTag::Nondeg2f => (Mat2::new(1.0, 1.0, 0.0, 1.0), Vec2::ZERO),
        CaseTag::Nondeg2g => (Mat2::new(-1.0, 1.0, 0.0, -1.0), Vec2::ZERO),
        CaseTag::Nondeg2h => (Mat2::diag(a, 1.0), Vec2::ZERO),
        CaseTag::Nondeg2i => (Mat2::diag(-a, -1.0), Vec2::ZERO),
        CaseTag::Nondeg2j => (Mat2::diag(-a, 1.0), Vec2::ZERO),
    };
    Ok(SolitonData::new(b, c))
}

/// Result of [`classify`].
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    pub case: SolitonCase,
    /// `Y = Q·X + H` taking solutions of the input data to solutions of the
    /// normal form.
    pub map: AffineMap,
    pub canonical: SolitonData,
    /// `‖pushforward(data, map) − canonical‖`.
    pub residual_norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sign {
    Neg,
    Zero,
    Pos,
}

/// Three-way sign with an ambiguity band: `|x| ≤ tol·scale` is zero,
/// `|x| > √tol·scale` has a definite sign, anything between is reported.
fn sign_banded(x: f64, scale: f64, tol: f64, what: &str) -> Result<Sign> {
    let ax = x.abs();
    if ax <= tol * scale {
        Ok(Sign::Zero)
    } else if ax <= tol.sqrt() * scale {
        Err(Error::BoundaryCase {
            flags: vec![format!("{what} = {x:.3e} is within tolerance of zero")],
        })
    } else if x > 0.0 {
        Ok(Sign::Pos)
    } else {
        Ok(Sign::Neg)
    }
}

fn unit_det_basis(c1: Vec2, c2: Vec2) -> Mat2 {
    let q = Mat2::from_cols(c1, c2);
    q.scale(1.0 / q.det().abs().sqrt())
}

/// Flips the sign of a vector so that its largest component is positive.
fn canonical_sign(v: Vec2) -> Vec2 {
    let lead = if v.x.abs() >= v.y.abs() { v.x } else { v.y };
    if lead < 0.0 {
        -v
    } else {
        v
    }
}

/// Basis `[c1, c2]` scaled to unit determinant, flipping `c1` if needed so the
/// determinant is positive.
fn oriented_basis(c1: Vec2, c2: Vec2) -> Mat2 {
    let c1 = if c1.cross(c2) < 0.0 { -c1 } else { c1 };
    unit_det_basis(c1, c2)
}

fn inv(q: Mat2) -> Result<Mat2> {
    q.inverse().ok_or(Error::SingularMap { det: q.det().abs() })
}

/// Decides the normal form of `(B, C)` and constructs the normalizing map.
///
/// `tol` is the relative tolerance of every algebraic test; quantities between
/// `tol` and `√tol` (relative) are reported as [`Error::BoundaryCase`].
pub fn classify(data: &SolitonData, tol: f64) -> Result<ClassificationReport> {
    if !data.is_finite() {
        return Err(Error::InvalidConstants("non-finite soliton data".into()));
    }
    let b = data.b;
    let nb = b.norm();
    let (case, map) = match sign_banded(nb, 1.0, tol, "‖B‖")? {
        Sign::Zero => translation_case(data, tol)?,
        _ => {
            let det_sign = sign_banded(b.det(), nb * nb, tol, "det B")?;
            if det_sign == Sign::Zero {
                degenerate_case(data, tol)?
            } else {
                nondegenerate_case(data, tol)?
            }
        }
    };
    let canonical = canonical_form(&case)?;
    let image = pushforward(data, &map)?;
    let residual_norm = (image.b - canonical.b).norm() + (image.c - canonical.c).norm();
    Ok(ClassificationReport {
        case,
        map,
        canonical,
        residual_norm,
    })
}

/// Classification with the default tolerance.
pub fn classify_default(data: &SolitonData) -> Result<ClassificationReport> {
    classify(data, DEFAULT_REL_TOL)
}

fn translation_case(data: &SolitonData, tol: f64) -> Result<(SolitonCase, AffineMap)> {
    let c = data.c;
    let nc = c.norm();
    if sign_banded(nc, 1.0, tol, "‖C‖")? == Sign::Zero {
        return Err(Error::BoundaryCase {
            flags: vec!["B = 0 and C = 0: every curve is a solution".into()],
        });
    }
    // rotate C onto the y-axis, then scale by ‖C‖³ so that s·‖C‖³·‖C‖ = 1
    let dir = c.scale(1.0 / nc);
    let rot = Mat2::new(dir.y, -dir.x, dir.x, dir.y);
    let map = AffineMap::linear(rot.scale(nc.powi(3)));
    Ok((SolitonCase::plain(CaseTag::Deg1a)?, map))
}

fn degenerate_case(data: &SolitonData, tol: f64) -> Result<(SolitonCase, AffineMap)> {
    let b = data.b;
    let nb = b.norm();
    // B = u·wᵀ with ‖u‖ = 1; range(B) = span(u), kernel = span(J·w)
    let col = if b.col(0).norm() >= b.col(1).norm() {
        b.col(0)
    } else {
        b.col(1)
    };
    let u = canonical_sign(col.normalized());
    let w = b.transpose() * u;
    let kernel = w.perp().normalized();

    // scale-free membership test of C in range(B): rescale so that ‖B‖ = 1
    let c_unit = data.c.scale(nb.powf(-0.25));
    let off_range = u.cross(c_unit);
    let in_range = sign_banded(off_range, 1.0 + c_unit.norm(), tol, "distance of C from range(B)")? == Sign::Zero;

    let lambda = b.tr();
    match sign_banded(lambda, nb, tol, "tr B")? {
        Sign::Zero => nilpotent_case(data, u, w, in_range),
        sign => {
            let q1 = oriented_basis(kernel, u);
            let p = inv(q1)?.scale(lambda.abs().powf(0.75));
            let tag = match (sign, in_range) {
                (Sign::Pos, true) => CaseTag::Deg1b,
                (Sign::Pos, false) => CaseTag::Deg1c,
                (_, true) => CaseTag::Deg1d,
                (_, false) => CaseTag::Deg1e,
            };
            let map = if in_range {
                // shift by a solution of B·H = C, then diagonalize and scale
                let h = w.scale(u.dot(data.c) / w.dot(w));
                AffineMap::linear(p).after(&AffineMap::translation(h))
            } else {
                // after diagonalizing, C₁ = (α, β); kill β by a shift along
                // the eigendirection, then rescale by diag(1/α, α)
                let step1 = AffineMap::linear(p);
                let d1 = pushforward(data, &step1)?;
                let lambda0 = d1.b.a22;
                let shift = AffineMap::translation(Vec2::new(0.0, d1.c.y / lambda0));
                let alpha = d1.c.x;
                let squeeze = AffineMap::linear(Mat2::diag(1.0 / alpha, alpha));
                squeeze.after(&shift.after(&step1))
            };
            Ok((SolitonCase::plain(tag)?, map))
        }
    }
}

fn nilpotent_case(data: &SolitonData, u: Vec2, w: Vec2, in_range: bool) -> Result<(SolitonCase, AffineMap)> {
    let b = data.b;
    // Jordan chain v1 = B·v2, B·v1 = 0
    let v2 = if b.col(0).norm() >= b.col(1).norm() {
        Vec2::new(1.0, 0.0)
    } else {
        Vec2::new(0.0, 1.0)
    };
    let v1 = b * v2;
    let q1 = unit_det_basis(v1, v2);
    let q1_inv = inv(q1)?;
    if in_range {
        let h = w.scale(u.dot(data.c) / w.dot(w));
        let map = AffineMap::linear(q1_inv).after(&AffineMap::translation(h));
        return Ok((SolitonCase::plain(CaseTag::Deg1f)?, map));
    }
    let step1 = AffineMap::linear(q1_inv);
    let c1 = pushforward(data, &step1)?.c;
    let shift = AffineMap::translation(Vec2::new(0.0, c1.x));
    let beta = c1.y;
    let r = cbrt_signed(beta);
    let scale = AffineMap::linear(Mat2::diag(r.powi(5), r));
    Ok((SolitonCase::plain(CaseTag::Deg1g)?, scale.after(&shift.after(&step1))))
}

fn nondegenerate_case(data: &SolitonData, tol: f64) -> Result<(SolitonCase, AffineMap)> {
    let b = data.b;
    let nb = b.norm();
    let b_inv = inv(b)?;
    let center = AffineMap::translation(b_inv * data.c);
    let spec = eigen2_with_tol(b, 0.0);
    let disc_sign = sign_banded(spec.disc, nb * nb, tol, "discriminant")?;

    let (case, linear) = match disc_sign {
        Sign::Neg => {
            let (re, im) = match spec.eigenvalues {
                Eigenvalues::Complex { re, im } => (re, im),
                Eigenvalues::Real(l, _) => (l, 0.0),
            };
            let q = rotation_basis(b, re, im);
            match sign_banded(spec.tr, nb, tol, "tr B")? {
                Sign::Zero => (SolitonCase::plain(CaseTag::Nondeg2a)?, inv(q)?.scale(im.powf(0.75))),
                s => {
                    let tag = if s == Sign::Pos {
                        CaseTag::Nondeg2b
                    } else {
                        CaseTag::Nondeg2c
                    };
                    let case = SolitonCase::new(tag, Some(im / re.abs()))?;
                    (case, inv(q)?.scale(re.abs().powf(0.75)))
                }
            }
        }
        Sign::Zero => {
            let lambda = 0.5 * spec.tr;
            let n = b - Mat2::scalar(lambda);
            let positive = lambda > 0.0;
            if sign_banded(n.norm(), nb, tol, "‖B − (tr B/2)·I‖")? == Sign::Zero {
                let tag = if positive { CaseTag::Nondeg2d } else { CaseTag::Nondeg2e };
                (SolitonCase::plain(tag)?, Mat2::scalar(lambda.abs().powf(0.75)))
            } else {
                let v2 = if n.col(0).norm() >= n.col(1).norm() {
                    Vec2::new(1.0, 0.0)
                } else {
                    Vec2::new(0.0, 1.0)
                };
                let q = unit_det_basis(n * v2, v2);
                let l = lambda.abs();
                let d = Mat2::diag(l.powf(1.25), l.powf(0.25));
                let tag = if positive { CaseTag::Nondeg2f } else { CaseTag::Nondeg2g };
                (SolitonCase::plain(tag)?, d * inv(q)?)
            }
        }
        Sign::Pos => {
            let (l1, l2) = match spec.eigenvalues {
                Eigenvalues::Real(l1, l2) => (l1, l2),
                Eigenvalues::Complex { re, .. } => (re, re),
            };
            // order so that the second eigenvalue is the one sent to ±1
            let (first, second, tag) = if l1 < 0.0 && l2 > 0.0 {
                (l1, l2, CaseTag::Nondeg2j)
            } else if l1 > 0.0 {
                (l1, l2, CaseTag::Nondeg2h)
            } else {
                (l2, l1, CaseTag::Nondeg2i)
            };
            let v1 = canonical_sign(eigenvector(b, first));
            let v2 = canonical_sign(eigenvector(b, second));
            let q = oriented_basis(v1, v2);
            let case = SolitonCase::new(tag, Some((first / second).abs()))?;
            (case, inv(q)?.scale(second.abs().powf(0.75)))
        }
    };
    Ok((case, AffineMap::linear(linear).after(&center)))
}

/// Real basis `[q, p]` from the eigenvector `p + i·q` of `re + i·im`, in
/// which `B` reads `re·I + im·J`. The complex phase is fixed so that `q`
/// points along the positive x-axis, making the basis the identity when `B`
/// is already in normal form.
fn rotation_basis(b: Mat2, re: f64, im: f64) -> Mat2 {
    // (B − λI)v = 0: take v orthogonal to the larger conjugated row
    let r1 = (b.a11 - re, -im, b.a12);
    let r2 = (b.a21, b.a22 - re, -im);
    let (p, q) = if (r1.0 * r1.0 + r1.1 * r1.1 + r1.2 * r1.2) >= (r2.0 * r2.0 + r2.1 * r2.1 + r2.2 * r2.2) {
        // row (b11 − λ, b12): v = (b12, λ − b11)
        (Vec2::new(b.a12, re - b.a11), Vec2::new(0.0, im))
    } else {
        // row (b21, b22 − λ): v = (λ − b22, b21)
        (Vec2::new(re - b.a22, b.a21), Vec2::new(im, 0.0))
    };
    // v·e^{iθ} has imaginary part p·sinθ + q·cosθ; choose θ so that it lies on +x
    let theta = (-q.y).atan2(p.y);
    let (s, c) = theta.sin_cos();
    let mut q_rot = p.scale(s) + q.scale(c);
    let mut p_rot = p.scale(c) - q.scale(s);
    if q_rot.x < 0.0 {
        q_rot = -q_rot;
        p_rot = -p_rot;
    }
    unit_det_basis(q_rot, p_rot)
}

/// Draws the free constant of a case (if any) from a range kept away from
/// the boundaries of its admissible interval.
pub fn random_case(tag: CaseTag, seed: u64) -> SolitonCase {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_ca5e);
    let a = match tag {
        CaseTag::Nondeg2b | CaseTag::Nondeg2c => Some(rng.gen_range(0.3..3.0)),
        CaseTag::Nondeg2h | CaseTag::Nondeg2i => Some(rng.gen_range(0.1..0.9)),
        CaseTag::Nondeg2j => Some(rng.gen_range(0.2..5.0)),
        _ => None,
    };
    SolitonCase { tag, a }
}

/// Bounds on the random conjugating matrix.
const RANDOM_MIN_DET: f64 = 0.5;
const RANDOM_MAX_COND: f64 = 20.0;

/// A random affine map `Y = P·X + H` with moderately conditioned `P`.
pub fn random_affine_map(rng: &mut impl Rng) -> AffineMap {
    loop {
        let p = Mat2::new(
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        );
        let det = p.det();
        if det.abs() < RANDOM_MIN_DET {
            continue;
        }
        // Frobenius condition number of a 2×2 matrix is ‖P‖²/|det P|
        if p.norm() * p.norm() / det.abs() > RANDOM_MAX_COND {
            continue;
        }
        let h = Vec2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        return AffineMap::new(p, h);
    }
}

/// Soliton data affinely equivalent to the normal form of `case`: the normal
/// form pulled back through a random map. Deterministic in `seed`.
pub fn random_case_instance(case: &SolitonCase, seed: u64) -> Result<SolitonData> {
    let canonical = canonical_form(case)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let map = random_affine_map(&mut rng);
    pushforward(&canonical, &map.inverse()?)
}
