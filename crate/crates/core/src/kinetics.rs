//! Reaction terms G1, G2, G3.

use crate::error::{Error, Result};
use crate::params::ModelParams;

/// (prey u, susceptible predator v, infected predator w).
pub type State = [f64; 3];

/// Reaction terms at `(u, v, w)` without input checks. This is the hot path
/// of every integrator in the crate.
#[inline(always)]
pub fn rates(u: f64, v: f64, w: f64, p: &ModelParams) -> State {
    let predation = (p.alpha1 * v + p.alpha2 * w) * u / (p.gamma + u);
    let encounter = p.beta * v + w;
    let g1 = p.r * u * (1.0 - u / p.k) - predation;
    let g2 = p.alpha * predation + p.c1 * p.sigma * encounter * v + p.c2 * p.sigma * encounter * w
        - p.sigma * encounter * v
        - p.sigma * p.l * p.f * v * w
        - p.lambda * v * w
        - p.d * v;
    let g3 = p.lambda * v * w + p.sigma * p.l * p.f * v * w
        - p.sigma * encounter * w
        - (p.d + p.e) * w;
    [g1, g2, g3]
}

/// Checked evaluation of the reaction terms.
pub fn kinetics(state: State, p: &ModelParams) -> Result<State> {
    if state.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("state"));
    }
    if p.gamma + state[0] <= 0.0 {
        return Err(Error::InvalidSettings(format!(
            "gamma + u must be positive, got {}",
            p.gamma + state[0]
        )));
    }
    Ok(rates(state[0], state[1], state[2], p))
}

/// max |G_i| at a state.
pub fn residual_norm(state: State, p: &ModelParams) -> f64 {
    rates(state[0], state[1], state[2], p)
        .iter()
        .fold(0.0_f64, |m, g| m.max(g.abs()))
}
