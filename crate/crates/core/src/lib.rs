//! Planar potential theory and Bergman kernel numerics.
//!
//! Everything here runs on a masked uniform grid over a bounded planar domain.
//! The crate is `no_std` with `alloc`; file formats, the experiment suite and
//! the command line live in the `potlab` crate.

#![no_std]
#![cfg_attr(test, allow(unused_imports))]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bergman;
pub mod dbar;
pub mod fft;
pub mod geom;
pub mod grid;
pub mod linalg;
pub mod potential;
pub mod spectral;

mod error;
mod util;

pub use error::Error;
pub use util::{fit_line, pairwise_sum, pairwise_sum_c};
pub use num_complex::Complex64;

/// Points of the plane are complex numbers.
pub type Point = Complex64;

pub type Result<T> = core::result::Result<T, Error>;

#[inline]
pub fn pt(x: f64, y: f64) -> Point {
    Complex64::new(x, y)
}
