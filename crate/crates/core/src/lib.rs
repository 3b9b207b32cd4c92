//! Instantaneous complex phase and frequency of electrical signals.
//!
//! Three formulations are implemented side by side:
//!
//! * [`analytic`]: per-channel analytic signal `v + j H{v}`; complex phase
//!   `ln u + j theta` and complex frequency `u'/u + j theta'`.
//! * [`space_vector`]: Clarke and Park vectors of a three-phase set, their
//!   planar phase and frequency, and the permuted Clarke-frame variant.
//! * [`geometric`]: scalar and bivector parts of the geometric frequency of
//!   the abc trajectory, its torsion, and the plane it lies in.
//!
//! [`equivalence`] checks numerically when the three agree.

pub mod analytic;
pub mod diff;
pub mod equivalence;
pub mod error;
pub mod geometric;
pub mod series;
pub mod signal_model;
pub mod space_vector;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use series::{ComplexSeries, RealSeries, Series};
pub use signal_model::{generate, SignalSpec, ThreePhaseSignal};
pub use space_vector::RotatingFrame;
