//! Time integration of the spatially homogeneous (ODE) system.

mod bifurcation;
mod lyapunov;
mod rk4;

pub use bifurcation::{bifurcation_sweep, BifurcationSweep, SweepParameter, SweepPoint, SweepSettings};
pub use lyapunov::{lyapunov_spectrum, LyapunovSettings, LyapunovSpectrum};
pub use rk4::{integrate_flow, integrate_rk4, rk4_step, Trajectory, DIVERGENCE_CEILING, NEGATIVITY_FLOOR};

use crate::jacobian::{jacobian_at, Jacobian3};
use crate::kinetics::{rates, State};
use crate::params::ModelParams;

/// An autonomous vector field on R³ with its Jacobian.
pub trait Flow {
    fn rate(&self, x: &State) -> State;
    fn jacobian(&self, x: &State) -> Jacobian3;
}

impl Flow for ModelParams {
    #[inline]
    fn rate(&self, x: &State) -> State {
        rates(x[0], x[1], x[2], self)
    }

    #[inline]
    fn jacobian(&self, x: &State) -> Jacobian3 {
        jacobian_at(*x, self)
    }
}

/// dx/dt = M x.
#[derive(Debug, Clone, Copy)]
pub struct LinearFlow(pub Jacobian3);

impl Flow for LinearFlow {
    fn rate(&self, x: &State) -> State {
        self.0.apply(x)
    }

    fn jacobian(&self, _x: &State) -> Jacobian3 {
        self.0
    }
}
