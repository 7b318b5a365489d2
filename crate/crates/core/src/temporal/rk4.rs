use super::Flow;
use crate::error::{Error, Result};
use crate::kinetics::State;
use crate::params::ModelParams;

/// Any component above this aborts the integration.
pub const DIVERGENCE_CEILING: f64 = 1e6;
/// Any component below this aborts the integration.
pub const NEGATIVITY_FLOOR: f64 = -1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<State>,
    pub params: Option<ModelParams>,
}

impl Trajectory {
    pub fn last(&self) -> State {
        *self.states.last().expect("trajectory holds the initial state")
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

#[inline(always)]
fn axpy(x: &State, h: f64, k: &State) -> State {
    [x[0] + h * k[0], x[1] + h * k[1], x[2] + h * k[2]]
}

/// One classic fourth-order Runge–Kutta step.
#[inline]
pub fn rk4_step<F: Flow + ?Sized>(flow: &F, x: &State, dt: f64) -> State {
    let k1 = flow.rate(x);
    let k2 = flow.rate(&axpy(x, 0.5 * dt, &k1));
    let k3 = flow.rate(&axpy(x, 0.5 * dt, &k2));
    let k4 = flow.rate(&axpy(x, dt, &k3));
    let w = dt / 6.0;
    [
        x[0] + w * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        x[1] + w * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        x[2] + w * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
    ]
}

pub(crate) fn check_state(x: &State, step: usize, time: f64) -> Result<()> {
    if x.iter().any(|c| !c.is_finite() || *c > DIVERGENCE_CEILING || *c < NEGATIVITY_FLOOR) {
        return Err(Error::Divergence { step, time, state: *x });
    }
    Ok(())
}

pub(crate) fn step_count(dt: f64, t_end: f64) -> Result<usize> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidSettings(format!("dt must be positive, got {dt}")));
    }
    if !(t_end >= 0.0) || !t_end.is_finite() {
        return Err(Error::InvalidSettings(format!("t_end must be non-negative, got {t_end}")));
    }
    Ok((t_end / dt).round() as usize)
}

/// Fixed-step RK4 of an arbitrary flow, keeping every `decimation`-th state
/// (the final state is always kept).
pub fn integrate_flow<F: Flow + ?Sized>(
    flow: &F,
    init: State,
    dt: f64,
    t_end: f64,
    decimation: usize,
) -> Result<Trajectory> {
    let n = step_count(dt, t_end)?;
    let decimation = decimation.max(1);
    check_state(&init, 0, 0.0)?;
    let mut times = Vec::with_capacity(n / decimation + 2);
    let mut states = Vec::with_capacity(n / decimation + 2);
    times.push(0.0);
    states.push(init);
    let mut x = init;
    for step in 1..=n {
        x = rk4_step(flow, &x, dt);
        let t = step as f64 * dt;
        check_state(&x, step, t)?;
        if step % decimation == 0 || step == n {
            times.push(t);
            states.push(x);
        }
    }
    Ok(Trajectory { times, states, params: None })
}

/// Integrates the model kinetics from a strictly positive initial state.
pub fn integrate_rk4(
    params: &ModelParams,
    init: State,
    dt: f64,
    t_end: f64,
    decimation: usize,
) -> Result<Trajectory> {
    params.validate()?;
    if init.iter().any(|c| !(*c > 0.0)) {
        return Err(Error::InvalidSettings(format!(
            "initial state must be strictly positive, got {init:?}"
        )));
    }
    let mut traj = integrate_flow(params, init, dt, t_end, decimation)?;
    traj.params = Some(*params);
    Ok(traj)
}
