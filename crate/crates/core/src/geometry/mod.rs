//! Planar linear algebra, sampled curves and affine transformation laws.

pub mod affine;
pub mod curve;
pub mod linalg;

pub use affine::{pushforward, transform_curve, AffineMap, SolitonData};
pub use curve::{frenet, frenet_at, Chart, DiscreteCurve, FrenetSample, Jet};
pub use linalg::{cbrt_signed, eigen2, expm2, Eigenvalues, Mat2, Spectrum, Vec2};
