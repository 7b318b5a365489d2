//! Lyapunov spectrum by the tangent-space (Benettin) method.
//!
//! The state and three tangent vectors are advanced together by RK4 using
//! the variational equation δx' = J(x) δx. Every `renorm_interval` time
//! units the tangent frame is re-orthonormalised by modified Gram–Schmidt
//! and the logarithms of the stretched norms are accumulated.

use super::rk4::{check_state, rk4_step, step_count};
use super::Flow;
use crate::error::{Error, Result};
use crate::kinetics::State;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovSettings {
    pub dt: f64,
    /// Time discarded before the tangent frame is started.
    pub transient: f64,
    /// Total integration time, transient included.
    pub total: f64,
    pub renorm_interval: f64,
    /// Largest change of any exponent over the final tenth of the
    /// accumulation window still counted as converged.
    pub drift_tolerance: f64,
}

impl Default for LyapunovSettings {
    fn default() -> Self {
        Self {
            dt: 0.01,
            transient: 5_000.0,
            total: 55_000.0,
            renorm_interval: 1.0,
            drift_tolerance: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LyapunovSpectrum {
    /// Exponents per unit time, descending.
    pub exponents: [f64; 3],
    pub transient_time: f64,
    pub total_time: f64,
    pub renorm_interval: f64,
    pub converged: bool,
    /// Largest |ΔL_i| over the tail window.
    pub tail_drift: f64,
    /// Time average of tr J along the accumulated part of the trajectory.
    pub mean_trace: f64,
}

impl LyapunovSpectrum {
    pub fn sum(&self) -> f64 {
        self.exponents.iter().sum()
    }

    pub fn signs(&self) -> [i8; 3] {
        self.exponents.map(|l| if l > 0.0 { 1 } else if l < 0.0 { -1 } else { 0 })
    }
}

type Frame = [[f64; 3]; 3];

/// RK4 step of the state together with the tangent frame.
fn coupled_step<F: Flow + ?Sized>(flow: &F, x: &State, q: &Frame, dt: f64) -> (State, Frame) {
    let eval = |x: &State, q: &Frame| -> (State, Frame) {
        let j = flow.jacobian(x);
        (flow.rate(x), [j.apply(&q[0]), j.apply(&q[1]), j.apply(&q[2])])
    };
    let shift = |x: &State, q: &Frame, h: f64, kx: &State, kq: &Frame| -> (State, Frame) {
        let mut qs = *q;
        for (v, dv) in qs.iter_mut().zip(kq) {
            for i in 0..3 {
                v[i] += h * dv[i];
            }
        }
        (
            [x[0] + h * kx[0], x[1] + h * kx[1], x[2] + h * kx[2]],
            qs,
        )
    };
    let (k1x, k1q) = eval(x, q);
    let (x2, q2) = shift(x, q, 0.5 * dt, &k1x, &k1q);
    let (k2x, k2q) = eval(&x2, &q2);
    let (x3, q3) = shift(x, q, 0.5 * dt, &k2x, &k2q);
    let (k3x, k3q) = eval(&x3, &q3);
    let (x4, q4) = shift(x, q, dt, &k3x, &k3q);
    let (k4x, k4q) = eval(&x4, &q4);

    let w = dt / 6.0;
    let mut nx = *x;
    let mut nq = *q;
    for i in 0..3 {
        nx[i] += w * (k1x[i] + 2.0 * k2x[i] + 2.0 * k3x[i] + k4x[i]);
        for v in 0..3 {
            nq[v][i] += w * (k1q[v][i] + 2.0 * k2q[v][i] + 2.0 * k3q[v][i] + k4q[v][i]);
        }
    }
    (nx, nq)
}

/// Modified Gram–Schmidt in place; returns the norms removed from each
/// vector.
fn orthonormalise(q: &mut Frame) -> [f64; 3] {
    let mut norms = [0.0; 3];
    for i in 0..3 {
        for j in 0..i {
            let (head, tail) = q.split_at_mut(i);
            let proj: f64 = (0..3).map(|c| tail[0][c] * head[j][c]).sum();
            for c in 0..3 {
                tail[0][c] -= proj * head[j][c];
            }
        }
        let n = q[i].iter().map(|c| c * c).sum::<f64>().sqrt();
        norms[i] = n;
        for c in 0..3 {
            q[i][c] /= n;
        }
    }
    norms
}

/// Estimates the three Lyapunov exponents of `flow` from `init`.
///
/// Numerical blow-up of the trajectory is an error; failure of the running
/// estimates to settle only clears [`LyapunovSpectrum::converged`].
pub fn lyapunov_spectrum<F: Flow + ?Sized>(
    flow: &F,
    init: State,
    settings: &LyapunovSettings,
) -> Result<LyapunovSpectrum> {
    let s = settings;
    if !(s.transient >= 0.0 && s.transient < s.total) {
        return Err(Error::InvalidSettings(format!(
            "need 0 <= transient < total, got {} and {}",
            s.transient, s.total
        )));
    }
    let transient_steps = step_count(s.dt, s.transient)?;
    let total_steps = step_count(s.dt, s.total)?;
    let renorm_steps = ((s.renorm_interval / s.dt).round() as usize).max(1);
    let blocks = (total_steps - transient_steps) / renorm_steps;
    if blocks < 10 {
        return Err(Error::InvalidSettings(
            "accumulation window shorter than ten renormalisation intervals".into(),
        ));
    }

    let mut x = init;
    check_state(&x, 0, 0.0)?;
    for step in 1..=transient_steps {
        x = rk4_step(flow, &x, s.dt);
        check_state(&x, step, step as f64 * s.dt)?;
    }

    let mut q: Frame = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let mut log_sums = [0.0_f64; 3];
    let mut trace_sum = 0.0;
    let tail_start = blocks - blocks / 10;
    let mut tail_reference = [0.0; 3];
    let mut step = transient_steps;
    for block in 1..=blocks {
        for _ in 0..renorm_steps {
            // trapezoidal average of tr J over the step
            let tr0 = flow.jacobian(&x).trace();
            let (nx, nq) = coupled_step(flow, &x, &q, s.dt);
            let tr1 = flow.jacobian(&nx).trace();
            trace_sum += 0.5 * (tr0 + tr1);
            x = nx;
            q = nq;
            step += 1;
            check_state(&x, step, step as f64 * s.dt)?;
        }
        let norms = orthonormalise(&mut q);
        for i in 0..3 {
            log_sums[i] += norms[i].ln();
        }
        if block == tail_start {
            let elapsed = block as f64 * renorm_steps as f64 * s.dt;
            tail_reference = log_sums.map(|l| l / elapsed);
        }
    }
    let accumulated = blocks as f64 * renorm_steps as f64 * s.dt;
    let mut exponents = log_sums.map(|l| l / accumulated);
    let tail_drift = (0..3)
        .map(|i| (exponents[i] - tail_reference[i]).abs())
        .fold(0.0, f64::max);
    exponents.sort_by(|a, b| b.total_cmp(a));
    Ok(LyapunovSpectrum {
        exponents,
        transient_time: transient_steps as f64 * s.dt,
        total_time: step as f64 * s.dt,
        renorm_interval: renorm_steps as f64 * s.dt,
        converged: tail_drift < s.drift_tolerance && exponents.iter().all(|l| l.is_finite()),
        tail_drift,
        mean_trace: trace_sum / (blocks * renorm_steps) as f64,
    })
}
