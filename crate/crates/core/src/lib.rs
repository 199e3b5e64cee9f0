//! Affine self-similar solutions of the affine curve shortening flow.

pub mod action;
pub mod classify;
pub mod error;
pub mod geometry;
pub mod io;
pub mod numerics;
pub mod phase;
pub mod synthesis;
pub mod verify;

pub use error::{Error, Result};
