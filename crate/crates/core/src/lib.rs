//! Particle on a constant-curvature surface (sphere, plane, hyperbolic plane)
//! in the oscillator potential V(r) = −(α²/2) r²/(1−κr²).
//!
//! * [`sym`]: exact normal-form engine proving the Killing, bracket and
//!   measure identities with κ symbolic.
//! * [`model`]: charts, Lagrangian, Hamiltonian, Noether momenta, unit scaling.
//! * [`classical`]: adaptive Runge–Kutta integration of the equations of motion
//!   with conservation and closed-form-shape diagnostics.
//! * [`quantum`]: closed-form spectra and wavefunctions, the Frobenius/₂F₁
//!   machinery, and an independent finite-volume Sturm–Liouville eigensolver
//!   used to adjudicate between candidate energy families.
//! * [`report`]: JSON and CSV serialization shared with the CLI.

pub mod classical;
pub mod error;
pub mod model;
pub mod quantum;
pub mod report;
pub mod sym;

pub use error::{Error, Result};
