//! Forward-time, centred-space integration with zero-flux boundaries.

use super::grid::{FieldGrid, GridSpec, SnapshotSchedule, FIELD_NAMES};
use crate::equilibrium::Equilibrium;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::kinetics::State;
use crate::params::ModelParams;
use crate::temporal::Flow;

/// Values between this and zero are rounded up to zero; anything lower
/// aborts the run.
pub const NEGATIVITY_TOL: f64 = -1e-10;

/// Perturbation a·cos²(m x)·cos²(m y) added to the chosen fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Perturbation {
    pub amplitude: f64,
    pub wavenumber: f64,
    pub fields: [bool; 3],
}

impl Default for Perturbation {
    fn default() -> Self {
        Self { amplitude: 0.1, wavenumber: 10.0, fields: [true; 3] }
    }
}

/// Equilibrium plus the default cos² perturbation on all three fields.
pub fn initial_condition(eq: &Equilibrium, grid: &GridSpec) -> Result<FieldGrid> {
    perturbed_state(eq, grid, &Perturbation::default())
}

pub fn perturbed_state(eq: &Equilibrium, grid: &GridSpec, pert: &Perturbation) -> Result<FieldGrid> {
    eq.require_feasible()?;
    let mut f = FieldGrid::constant(grid.nx, grid.ny(), eq.state());
    let profile: Vec<f64> = (0..grid.nx)
        .map(|i| (pert.wavenumber * i as f64 * grid.h).cos().powi(2))
        .collect();
    let fields = [&mut f.u, &mut f.v, &mut f.w];
    for (field, on) in fields.into_iter().zip(pert.fields) {
        if !on {
            continue;
        }
        for j in 0..grid.nx {
            for i in 0..grid.nx {
                field[j * grid.nx + i] += pert.amplitude * profile[i] * profile[j];
            }
        }
    }
    Ok(f)
}

struct Stencil<'a, F: ?Sized> {
    flow: &'a F,
    diffusion: [f64; 3],
    dt: f64,
    inv_h2: f64,
    nx: usize,
    ny: usize,
    time: f64,
}

impl<F: Flow + Sync + ?Sized> Stencil<'_, F> {
    /// Updates row `j` of all three fields into the output slices.
    fn row(&self, src: &FieldGrid, j: usize, out: [&mut [f64]; 3]) -> Result<()> {
        let nx = self.nx;
        let jn = if j == 0 { 1 } else { j - 1 };
        let js = if j + 1 == self.ny { self.ny - 2 } else { j + 1 };
        let src_fields = src.fields();
        let c = src_fields.map(|f| &f[j * nx..(j + 1) * nx]);
        let n = src_fields.map(|f| &f[jn * nx..(jn + 1) * nx]);
        let s = src_fields.map(|f| &f[js * nx..(js + 1) * nx]);
        let [ou, ov, ow] = out;
        for i in 0..nx {
            let iw = if i == 0 { 1 } else { i - 1 };
            let ie = if i + 1 == nx { nx - 2 } else { i + 1 };
            let x: State = [c[0][i], c[1][i], c[2][i]];
            let g = self.flow.rate(&x);
            let mut next = [0.0; 3];
            for k in 0..3 {
                let lap = (n[k][i] + s[k][i] + c[k][iw] + c[k][ie] - 4.0 * x[k]) * self.inv_h2;
                next[k] = x[k] + self.dt * (g[k] + self.diffusion[k] * lap);
            }
            for (k, val) in next.iter_mut().enumerate() {
                if !val.is_finite() || *val < NEGATIVITY_TOL {
                    return Err(Error::FieldFailure {
                        field: FIELD_NAMES[k],
                        i,
                        j,
                        time: self.time,
                        value: *val,
                    });
                }
                if *val < 0.0 {
                    *val = 0.0;
                }
            }
            ou[i] = next[0];
            ov[i] = next[1];
            ow[i] = next[2];
        }
        Ok(())
    }
}

/// One explicit step of an arbitrary reaction term with the given
/// diffusion coefficients, written into `dst`.
pub fn ftcs_step_into<F: Flow + Sync + ?Sized>(
    src: &FieldGrid,
    dst: &mut FieldGrid,
    flow: &F,
    diffusion: [f64; 3],
    grid: &GridSpec,
    exec: Execution,
) -> Result<()> {
    grid.check_guard(diffusion)?;
    if src.nx != grid.nx || src.ny != grid.ny() || !src.same_shape(dst) {
        return Err(Error::GridMismatch(format!(
            "fields are {}x{}, grid is {}x{}",
            src.nx,
            src.ny,
            grid.nx,
            grid.ny()
        )));
    }
    let time = src.time + grid.dt;
    let stencil = Stencil {
        flow,
        diffusion,
        dt: grid.dt,
        inv_h2: 1.0 / (grid.h * grid.h),
        nx: grid.nx,
        ny: grid.ny(),
        time,
    };
    let nx = grid.nx;

    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        let failure = dst
            .u
            .par_chunks_mut(nx)
            .zip(dst.v.par_chunks_mut(nx))
            .zip(dst.w.par_chunks_mut(nx))
            .enumerate()
            .with_min_len(8)
            .filter_map(|(j, ((u, v), w))| stencil.row(src, j, [u, v, w]).err().map(|e| (j, e)))
            .min_by_key(|(j, _)| *j);
        if let Some((_, e)) = failure {
            return Err(e);
        }
        dst.time = time;
        return Ok(());
    }
    let _ = exec;
    for (j, ((u, v), w)) in dst
        .u
        .chunks_mut(nx)
        .zip(dst.v.chunks_mut(nx))
        .zip(dst.w.chunks_mut(nx))
        .enumerate()
    {
        stencil.row(src, j, [u, v, w])?;
    }
    dst.time = time;
    Ok(())
}

/// One explicit step of the full model.
pub fn ftcs_step(fields: &FieldGrid, p: &ModelParams, grid: &GridSpec, exec: Execution) -> Result<FieldGrid> {
    let mut out = fields.clone();
    ftcs_step_into(fields, &mut out, p, [p.d1, p.d2, p.d3], grid, exec)?;
    Ok(out)
}

/// Advances `init` and returns a copy at every scheduled time. A time of
/// zero captures the initial state.
pub fn simulate_from<F: Flow + Sync + ?Sized>(
    flow: &F,
    diffusion: [f64; 3],
    init: FieldGrid,
    grid: &GridSpec,
    schedule: &SnapshotSchedule,
    exec: Execution,
) -> Result<Vec<FieldGrid>> {
    grid.check_guard(diffusion)?;
    let targets = schedule.steps(grid.dt);
    let mut cur = init;
    cur.time = 0.0;
    let mut next = cur.clone();
    let mut out = Vec::with_capacity(targets.len());
    let mut step = 0usize;
    for &target in &targets {
        while step < target {
            ftcs_step_into(&cur, &mut next, flow, diffusion, grid, exec)?;
            step += 1;
            // time from the step count, not by accumulation
            next.time = step as f64 * grid.dt;
            std::mem::swap(&mut cur, &mut next);
        }
        out.push(cur.clone());
    }
    Ok(out)
}

/// Runs the model from the perturbed equilibrium.
pub fn simulate(
    p: &ModelParams,
    eq: &Equilibrium,
    grid: &GridSpec,
    schedule: &SnapshotSchedule,
    exec: Execution,
) -> Result<Vec<FieldGrid>> {
    p.validate()?;
    let init = initial_condition(eq, grid)?;
    simulate_from(p, [p.d1, p.d2, p.d3], init, grid, schedule, exec)
}
