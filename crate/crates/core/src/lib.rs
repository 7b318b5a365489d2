//! Diffusive prey / susceptible-predator / infected-predator model with
//! cannibalism-driven disease transmission.
//!
//! The crate covers the homogeneous steady state and its stability,
//! time integration and Lyapunov spectra of the kinetics, linear Turing
//! analysis, explicit simulation of the reaction–diffusion system, and
//! classification of the resulting patterns.
//!
//! ```
//! use ecoepi_core::{equilibrium::find_equilibria, params::ModelParams, turing::{turing_check, Verdict}};
//!
//! let p = ModelParams::reference().with_sigma(0.026).with_diffusion(1e-5, 1e-3, 1e-10);
//! let eq = find_equilibria(&p).unwrap()[0];
//! assert_eq!(turing_check(&eq, &p).unwrap().verdict, Verdict::Turing);
//! ```

pub mod bounds;
pub mod equilibrium;
mod error;
pub mod exec;
pub mod jacobian;
pub mod kinetics;
pub mod params;
pub mod pattern;
pub mod pde;
pub mod poly;
pub mod presets;
pub mod report;
pub mod sampling;
pub mod stability;
pub mod temporal;
pub mod turing;

pub use error::{Error, Result};
pub use exec::Execution;
