//! Numerical laboratory for radially symmetric solutions of
//! `u_t = Δu + e^u` on a ball in dimension N.
//!
//! The crate simulates radial solutions into finite-time blow-up, estimates
//! the blow-up time, classifies the blow-up rate, continues solutions past
//! blow-up through truncated nonlinearities, rescales trajectories into
//! similarity frames, shoots the associated radial profile ODE families,
//! brackets the threshold tail constant separating regularization from
//! complete blow-up, and counts sign changes of radial fields along
//! parabolic flows.
//!
//! Modules:
//! - [`grid`]: radial discretization and the discrete radial Laplacian
//! - [`evolution`]: IMEX time stepping, blow-up detection and estimation
//! - [`continuation`]: trajectories with truncated nonlinearities past blow-up
//! - [`similarity`]: backward / forward / intrinsic frames, rate reports,
//!   final-profile fits
//! - [`profiles`]: shooting for the three radial profile ODE families
//! - [`sturm`]: zero-number diagnostics and flow-monotonicity harnesses
//! - [`csvio`]: fixed CSV serialization for every artifact

pub mod continuation;
pub mod csvio;
pub mod error;
pub mod evolution;
pub mod grid;
pub mod interp;
pub mod profiles;
pub mod similarity;
pub mod sturm;
pub mod tridiag;

pub use error::{Error, Result};
pub use grid::{Grading, RadialField, RadialGrid};
