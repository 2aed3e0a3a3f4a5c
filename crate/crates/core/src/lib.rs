//! Leaky integrate-and-fire models driven by periodic and almost periodic inputs.
//!
//! The crate is `no_std` (it needs `alloc`). It provides:
//!
//! * [`signals`]: symbolic input signals with exact integration,
//! * [`apnorms`]: Stepanov, measure and F-norm deviations, almost-period scans and
//!   mean values,
//! * [`firing`]: firing maps, spike trains, firing rates and rotation numbers,
//! * [`haar`]: Haar–Fourier coefficients and projections on unit cells.

#![cfg_attr(not(test), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::too_many_arguments)]

extern crate alloc;

pub mod apnorms;
pub mod error;
pub mod firing;
pub mod haar;
pub mod math;
pub mod presets;
pub mod quad;
pub mod signals;

pub use error::{Error, Result};

pub use signals::{DyadicKind, Integral, Signal, Window};
