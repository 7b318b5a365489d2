//! Checks shared by the property tests and the acceptance run.
#![allow(dead_code)]

use ecoepi_core::equilibrium::{find_equilibria, Equilibrium};
use ecoepi_core::jacobian::{jacobian_at, Jacobian3};
use ecoepi_core::kinetics::{rates, State};
use ecoepi_core::params::ModelParams;
use ecoepi_core::pde::{simulate_from, FieldGrid, GridSpec, SnapshotSchedule};
use ecoepi_core::stability::{characteristic_coefficients, routh_hurwitz};
use ecoepi_core::temporal::{integrate_flow, lyapunov_spectrum, LinearFlow, LyapunovSettings};
use ecoepi_core::turing::{dispersion, turing_check, Verdict};
use ecoepi_core::Execution;

pub fn turing_params() -> ModelParams {
    ModelParams::reference().with_sigma(0.026).with_diffusion(1e-5, 1e-3, 1e-10)
}

pub fn only_equilibrium(p: &ModelParams) -> Equilibrium {
    let eqs = find_equilibria(p).expect("reduction succeeds");
    assert_eq!(eqs.len(), 1, "expected one equilibrium, got {eqs:?}");
    eqs[0]
}

/// Relative Frobenius distance between the analytic Jacobian and central
/// differences of the kinetics.
pub fn jacobian_fd_error(x: State, p: &ModelParams) -> f64 {
    let j = jacobian_at(x, p);
    let mut diff = 0.0;
    let mut norm = 0.0;
    for col in 0..3 {
        let h = 1e-6 * x[col].abs().max(1.0);
        let mut hi = x;
        let mut lo = x;
        hi[col] += h;
        lo[col] -= h;
        let (fh, fl) = (rates(hi[0], hi[1], hi[2], p), rates(lo[0], lo[1], lo[2], p));
        for row in 0..3 {
            let fd = (fh[row] - fl[row]) / (2.0 * h);
            diff += (fd - j.0[row][col]).powi(2);
            norm += j.0[row][col].powi(2);
        }
    }
    (diff / norm).sqrt()
}

/// Error ratio e(dt)/e(dt/2) of RK4 on the model kinetics at t = 20.
pub fn rk4_order_ratio() -> f64 {
    let p = ModelParams::reference().with_sigma(0.026);
    let init = [15.1342, 20.5234, 6.3140];
    let at = |dt: f64| integrate_flow(&p, init, dt, 20.0, usize::MAX).expect("integrates").last();
    let reference = at(0.4 / 64.0);
    let err = |x: State| (0..3).map(|i| (x[i] - reference[i]).abs()).fold(0.0, f64::max);
    err(at(0.4)) / err(at(0.2))
}

fn pure_diffusion() -> LinearFlow {
    LinearFlow(Jacobian3([[0.0; 3]; 3]))
}

fn bumpy(grid: &GridSpec, seed: u64) -> FieldGrid {
    let n = grid.nx;
    let mut f = FieldGrid::constant(n, n, [1.0, 2.0, 3.0]);
    let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    for field in [&mut f.u, &mut f.v, &mut f.w] {
        for x in field.iter_mut() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            *x += (s >> 11) as f64 / (1u64 << 53) as f64;
        }
    }
    f
}

/// Trapezoid-weighted total of a field; the quantity pure diffusion with
/// reflecting boundaries conserves exactly in exact arithmetic.
pub fn weighted_total(f: &[f64], n: usize) -> f64 {
    let w = |i: usize| if i == 0 || i + 1 == n { 0.5 } else { 1.0 };
    (0..n).flat_map(|j| (0..n).map(move |i| (i, j))).map(|(i, j)| w(i) * w(j) * f[j * n + i]).sum()
}

/// Largest relative change of the weighted total over 1000 diffusion steps.
pub fn mass_drift(seed: u64) -> f64 {
    let grid = GridSpec::new(1.0, 0.05, 1e-3).unwrap();
    let init = bumpy(&grid, seed);
    let schedule = SnapshotSchedule::new(vec![1.0], grid.dt).unwrap();
    let out = simulate_from(&pure_diffusion(), [0.5, 0.1, 0.01], init.clone(), &grid, &schedule, Execution::Serial)
        .unwrap();
    let last = out.last().unwrap();
    (0..3)
        .map(|k| {
            let before = weighted_total(init.fields()[k], grid.nx);
            let after = weighted_total(last.fields()[k], grid.nx);
            ((after - before) / before).abs()
        })
        .fold(0.0, f64::max)
}

/// Profile constant in y, varying in x: after 500 steps the boundary rows
/// must still equal their neighbours exactly. Returns the largest
/// difference found.
pub fn zero_flux_difference() -> f64 {
    let grid = GridSpec::new(1.0, 0.05, 1e-3).unwrap();
    let n = grid.nx;
    let mut init = FieldGrid::constant(n, n, [1.0, 1.0, 1.0]);
    for j in 0..n {
        for i in 0..n {
            init.u[j * n + i] += (i as f64 * 0.37).sin();
            init.v[i * n + j] += (i as f64 * 0.21).cos();
        }
    }
    let schedule = SnapshotSchedule::new(vec![0.5], grid.dt).unwrap();
    let out = simulate_from(&pure_diffusion(), [0.3, 0.3, 0.3], init, &grid, &schedule, Execution::Serial).unwrap();
    let f = out.last().unwrap();
    let mut worst: f64 = 0.0;
    for k in 0..n {
        // u is constant in y, v constant in x
        worst = worst.max((f.u[k] - f.u[n + k]).abs());
        worst = worst.max((f.u[(n - 1) * n + k] - f.u[(n - 2) * n + k]).abs());
        worst = worst.max((f.v[k * n] - f.v[k * n + 1]).abs());
        worst = worst.max((f.v[k * n + n - 1] - f.v[k * n + n - 2]).abs());
    }
    worst
}

/// Relative mismatch between dispersion at k = 0 and the temporal
/// characteristic coefficients.
pub fn dispersion_k0_error(p: &ModelParams) -> f64 {
    let eq = only_equilibrium(p);
    let s = dispersion(&eq, p, 0.0).unwrap();
    let a = characteristic_coefficients(&jacobian_at(eq.state(), p));
    let hurwitz = a[0] * a[1] - a[2];
    [(s.rho1, a[0]), (s.rho2, a[1]), (s.rho3, a[2]), (s.phi, hurwitz)]
        .iter()
        .map(|(got, want)| ((got - want) / want).abs())
        .fold(0.0, f64::max)
}

/// |sum of exponents − mean trace| on the stable-focus set.
pub fn lyapunov_sum_gap() -> f64 {
    let p = ModelParams::reference().with_sigma(0.026);
    let settings = LyapunovSettings { transient: 500.0, total: 5_500.0, ..LyapunovSettings::default() };
    let s = lyapunov_spectrum(&p, [15.1342, 20.5234, 6.3140], &settings).unwrap();
    (s.sum() - s.mean_trace).abs()
}

/// Max deviation of a spatially constant PDE run from forward Euler on the
/// kinetics after `steps` steps.
pub fn euler_oracle_gap(state: State, p: &ModelParams, steps: usize) -> f64 {
    let grid = GridSpec::new(0.2, 0.02, 0.01).unwrap();
    let init = FieldGrid::constant(grid.nx, grid.nx, state);
    let schedule = SnapshotSchedule::new(vec![steps as f64 * grid.dt], grid.dt).unwrap();
    let out = simulate_from(p, [p.d1, p.d2, p.d3], init, &grid, &schedule, Execution::Serial).unwrap();
    let f = out.last().unwrap();
    let mut x = state;
    for _ in 0..steps {
        let g = rates(x[0], x[1], x[2], p);
        for k in 0..3 {
            x[k] += grid.dt * g[k];
        }
    }
    let mut worst: f64 = 0.0;
    for (k, field) in f.fields().iter().enumerate() {
        for v in field.iter() {
            worst = worst.max((v - x[k]).abs());
        }
    }
    worst
}

/// Verdict at the equilibrium with all three coefficients set to `d`.
pub fn equal_diffusion_verdict(sigma: f64, d: f64) -> Option<(bool, Verdict)> {
    let p = ModelParams::reference().with_sigma(sigma).with_diffusion(d, d, d);
    let eq = find_equilibria(&p).ok()?.into_iter().next()?;
    let diag = turing_check(&eq, &p).ok()?;
    Some((diag.planar_stable, diag.verdict))
}

/// Max-norm error of FTCS pure diffusion against the exact decaying
/// cosine mode on [0, 1]², with dt ∝ h².
pub fn refinement_error(h: f64) -> f64 {
    use std::f64::consts::PI;
    let d = 1.0;
    let dt = 0.1 * h * h;
    let grid = GridSpec::new(1.0, h, dt).unwrap();
    let n = grid.nx;
    let mode = |i: usize, j: usize| (PI * i as f64 * h).cos() * (PI * j as f64 * h).cos();
    let mut init = FieldGrid::constant(n, n, [1.0, 1.0, 1.0]);
    for j in 0..n {
        for i in 0..n {
            init.u[j * n + i] += 0.5 * mode(i, j);
        }
    }
    let t_end = 0.05;
    let steps = (t_end / dt).round();
    let schedule = SnapshotSchedule::new(vec![steps * dt], dt).unwrap();
    let out = simulate_from(&pure_diffusion(), [d, d, d], init, &grid, &schedule, Execution::Serial).unwrap();
    let t = steps * dt;
    let decay = (-2.0 * PI * PI * d * t).exp();
    let f = out.last().unwrap();
    let mut worst: f64 = 0.0;
    for j in 0..n {
        for i in 0..n {
            worst = worst.max((f.u[j * n + i] - (1.0 + 0.5 * decay * mode(i, j))).abs());
        }
    }
    worst
}

/// Routh–Hurwitz stability agrees with the sign of the leading eigenvalue.
pub fn routh_matches_eigenvalues(j: &Jacobian3) -> Option<bool> {
    let m = nalgebra::Matrix3::from_fn(|r, c| j.0[r][c]);
    let max_re = m.complex_eigenvalues().iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    // too close to the boundary to decide either way
    if max_re.abs() < 1e-9 {
        return None;
    }
    Some(routh_hurwitz(characteristic_coefficients(j)) == (max_re < 0.0))
}

/// Multistart Newton on the full kinetics; every positive root it finds
/// must be in `find_equilibria`. Returns the roots it could not match.
pub fn unmatched_roots(p: &ModelParams) -> Vec<State> {
    let found = find_equilibria(p).unwrap();
    let mut missing = Vec::new();
    for u0 in [0.5, 2.0, 5.0, 10.0, 20.0, 40.0, 60.0] {
        for v0 in [1.0, 5.0, 15.0, 30.0] {
            for w0 in [0.5, 3.0, 8.0] {
                let mut x = [u0, v0, w0];
                for _ in 0..100 {
                    let g = rates(x[0], x[1], x[2], p);
                    let Some(dx) = jacobian_at(x, p).solve([-g[0], -g[1], -g[2]]) else { break };
                    x = [x[0] + dx[0], x[1] + dx[1], x[2] + dx[2]];
                    if !x.iter().all(|c| c.is_finite()) {
                        break;
                    }
                }
                let g = rates(x[0], x[1], x[2], p);
                let converged = g.iter().all(|r| r.abs() < 1e-10) && x.iter().all(|c| c.is_finite());
                let eq = Equilibrium::at(x, p);
                // Newton also lands on the w = 0 boundary state, reached as
                // a subnormal w; only interior states count
                if !converged || !eq.feasible || x[0] > p.k || x.iter().any(|c| *c < 1e-8) {
                    continue;
                }
                let known = found.iter().any(|e| {
                    let s = e.state();
                    (0..3).all(|k| (s[k] - x[k]).abs() <= 1e-6 * s[k].abs().max(1.0))
                });
                if !known {
                    missing.push(x);
                }
            }
        }
    }
    missing
}
