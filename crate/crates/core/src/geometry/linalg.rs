//! Fixed-size 2D linear algebra.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// Default relative tolerance for rank and range decisions.
pub const DEFAULT_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the planar cross product, `det(self, o)`.
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Rotation by +π/2, i.e. `J·self`.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn scale(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }

    pub fn normalized(self) -> Vec2 {
        self.scale(1.0 / self.norm())
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn from_angle(theta: f64) -> Vec2 {
        let (s, c) = theta.sin_cos();
        Vec2::new(c, s)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    fn mul(self, v: Vec2) -> Vec2 {
        v.scale(self)
    }
}

/// Row-major 2×2 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mat2 {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
}

impl Mat2 {
    pub const ZERO: Mat2 = Mat2::new(0.0, 0.0, 0.0, 0.0);
    pub const IDENTITY: Mat2 = Mat2::new(1.0, 0.0, 0.0, 1.0);
    /// The rotation generator `[[0, -1], [1, 0]]`.
    pub const J: Mat2 = Mat2::new(0.0, -1.0, 1.0, 0.0);

    pub const fn new(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Mat2 { a11, a12, a21, a22 }
    }

    pub const fn diag(d1: f64, d2: f64) -> Self {
        Mat2::new(d1, 0.0, 0.0, d2)
    }

    pub fn scalar(s: f64) -> Self {
        Mat2::diag(s, s)
    }

    /// Matrix with the given columns.
    pub fn from_cols(c1: Vec2, c2: Vec2) -> Self {
        Mat2::new(c1.x, c2.x, c1.y, c2.y)
    }

    pub fn from_row_major(e: [f64; 4]) -> Self {
        Mat2::new(e[0], e[1], e[2], e[3])
    }

    pub fn to_row_major(self) -> [f64; 4] {
        [self.a11, self.a12, self.a21, self.a22]
    }

    pub fn col(self, j: usize) -> Vec2 {
        match j {
            0 => Vec2::new(self.a11, self.a21),
            _ => Vec2::new(self.a12, self.a22),
        }
    }

    pub fn det(self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn tr(self) -> f64 {
        self.a11 + self.a22
    }

    /// Frobenius norm.
    pub fn norm(self) -> f64 {
        (self.a11 * self.a11 + self.a12 * self.a12 + self.a21 * self.a21 + self.a22 * self.a22).sqrt()
    }

    pub fn transpose(self) -> Mat2 {
        Mat2::new(self.a11, self.a21, self.a12, self.a22)
    }

    pub fn scale(self, s: f64) -> Mat2 {
        Mat2::new(self.a11 * s, self.a12 * s, self.a21 * s, self.a22 * s)
    }

    /// Inverse, or `None` when the determinant is exactly zero.
    pub fn inverse(self) -> Option<Mat2> {
        let d = self.det();
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        Some(Mat2::new(self.a22, -self.a12, -self.a21, self.a11).scale(1.0 / d))
    }

    pub fn mul_vec(self, v: Vec2) -> Vec2 {
        Vec2::new(self.a11 * v.x + self.a12 * v.y, self.a21 * v.x + self.a22 * v.y)
    }

    pub fn is_finite(self) -> bool {
        self.to_row_major().iter().all(|e| e.is_finite())
    }

    pub fn max_abs_diff(self, o: Mat2) -> f64 {
        (self - o).to_row_major().iter().fold(0.0, |m, e| m.max(e.abs()))
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        Mat2::new(self.a11 + o.a11, self.a12 + o.a12, self.a21 + o.a21, self.a22 + o.a22)
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        Mat2::new(self.a11 - o.a11, self.a12 - o.a12, self.a21 - o.a21, self.a22 - o.a22)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(-1.0)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a11 * o.a11 + self.a12 * o.a21,
            self.a11 * o.a12 + self.a12 * o.a22,
            self.a21 * o.a11 + self.a22 * o.a21,
            self.a21 * o.a12 + self.a22 * o.a22,
        )
    }
}

impl Mul<Vec2> for Mat2 {
    type Output = Vec2;
    fn mul(self, v: Vec2) -> Vec2 {
        self.mul_vec(v)
    }
}

/// Odd real cube root.
pub fn cbrt_signed(x: f64) -> f64 {
    // f64::cbrt is already the odd real root; kept as a named entry point
    // because every k^{1/3} in the crate must go through it.
    x.cbrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Eigenvalues {
    /// Real pair, ordered `first <= second`.
    Real(f64, f64),
    /// Conjugate pair `re ± i·im` with `im > 0`.
    Complex { re: f64, im: f64 },
}

/// Spectral summary of a 2×2 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spectrum {
    pub tr: f64,
    pub det: f64,
    /// Discriminant `tr² − 4·det` of the characteristic polynomial.
    pub disc: f64,
    pub eigenvalues: Eigenvalues,
    /// Real eigenvectors matching `Eigenvalues::Real` order, when two
    /// independent ones exist.
    pub eigenvectors: Option<[Vec2; 2]>,
    pub diagonalizable: bool,
    pub rank: u8,
}

pub fn eigen2(b: Mat2) -> Spectrum {
    eigen2_with_tol(b, DEFAULT_REL_TOL)
}

/// Spectral summary with an explicit relative tolerance for the rank,
/// `Δ = 0` and diagonalizability decisions.
pub fn eigen2_with_tol(b: Mat2, rel_tol: f64) -> Spectrum {
    let tr = b.tr();
    let det = b.det();
    let disc = tr * tr - 4.0 * det;
    let n = b.norm();

    let rank = if n == 0.0 {
        0
    } else if det.abs() <= rel_tol * n * n {
        1
    } else {
        2
    };

    let disc_zero = disc.abs() <= rel_tol * n * n;
    if disc_zero {
        let lambda = 0.5 * tr;
        let nil = b - Mat2::scalar(lambda);
        let diagonalizable = nil.norm() <= rel_tol * n.max(f64::MIN_POSITIVE);
        let eigenvectors = if diagonalizable {
            Some([Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)])
        } else {
            None
        };
        return Spectrum {
            tr,
            det,
            disc,
            eigenvalues: Eigenvalues::Real(lambda, lambda),
            eigenvectors,
            diagonalizable,
            rank,
        };
    }

    if disc < 0.0 {
        return Spectrum {
            tr,
            det,
            disc,
            eigenvalues: Eigenvalues::Complex {
                re: 0.5 * tr,
                im: 0.5 * (-disc).sqrt(),
            },
            eigenvectors: None,
            diagonalizable: true,
            rank,
        };
    }

    // Stable quadratic roots.
    let sq = disc.sqrt();
    let big = 0.5 * (tr + if tr >= 0.0 { sq } else { -sq });
    let small = if big != 0.0 { det / big } else { 0.0 };
    let (l1, l2) = if small <= big { (small, big) } else { (big, small) };
    let eigenvectors = Some([eigenvector(b, l1), eigenvector(b, l2)]);
    Spectrum {
        tr,
        det,
        disc,
        eigenvalues: Eigenvalues::Real(l1, l2),
        eigenvectors,
        diagonalizable: true,
        rank,
    }
}

/// Unit eigenvector of `b` for a real eigenvalue `lambda` (assumed simple).
pub fn eigenvector(b: Mat2, lambda: f64) -> Vec2 {
    // Rows of (B − λI) are orthogonal to the eigenvector; use the larger row.
    let r1 = Vec2::new(b.a11 - lambda, b.a12);
    let r2 = Vec2::new(b.a21, b.a22 - lambda);
    let r = if r1.norm() >= r2.norm() { r1 } else { r2 };
    if r.norm() == 0.0 {
        return Vec2::new(1.0, 0.0);
    }
    Vec2::new(-r.y, r.x).normalized()
}

/// Closed-form exponential of a 2×2 matrix.
///
/// Splits `M = (tr/2)·I + M₀` with `tr M₀ = 0`, so that `M₀² = δ²·I` where
/// `δ² = −det M₀`, and evaluates `e^{tr/2}(cosh δ·I + sinh(δ)/δ·M₀)` on the
/// appropriate real/imaginary/zero branch of δ.
pub fn expm2(m: Mat2) -> Mat2 {
    let half_tr = 0.5 * m.tr();
    let m0 = m - Mat2::scalar(half_tr);
    let p = 0.5 * (m.a11 - m.a22);
    let delta2 = p * p + m.a12 * m.a21;
    let (c, s) = cosh_sinhc(delta2);
    (Mat2::scalar(c) + m0.scale(s)).scale(half_tr.exp())
}

/// `(cosh δ, sinh δ / δ)` as functions of `δ²`, analytic through zero.
fn cosh_sinhc(d2: f64) -> (f64, f64) {
    if d2.abs() < 1e-3 {
        let c = 1.0 + d2 * (0.5 + d2 * (1.0 / 24.0 + d2 * (1.0 / 720.0 + d2 / 40320.0)));
        let s = 1.0 + d2 * (1.0 / 6.0 + d2 * (1.0 / 120.0 + d2 * (1.0 / 5040.0 + d2 / 362880.0)));
        (c, s)
    } else if d2 > 0.0 {
        let d = d2.sqrt();
        (d.cosh(), d.sinh() / d)
    } else {
        let w = (-d2).sqrt();
        (w.cos(), w.sin() / w)
    }
}
