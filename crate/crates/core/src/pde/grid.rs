use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Square grid with nodes at (i·h, j·h), i, j = 0..nx.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub length: f64,
    pub h: f64,
    pub nx: usize,
    pub dt: f64,
}

impl GridSpec {
    pub fn new(length: f64, h: f64, dt: f64) -> Result<Self> {
        for (name, v) in [("length", length), ("h", h), ("dt", dt)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidGrid(format!("{name} must be positive, got {v}")));
            }
        }
        let nx = (length / h).round() as usize + 1;
        if nx < 3 {
            return Err(Error::InvalidGrid(format!("need at least 3 nodes per side, got {nx}")));
        }
        Ok(Self { length, h, nx, dt })
    }

    /// Grid that also satisfies the explicit stability bound for the
    /// given diffusion coefficients.
    pub fn checked(length: f64, h: f64, dt: f64, diffusion: [f64; 3]) -> Result<Self> {
        let g = Self::new(length, h, dt)?;
        g.check_guard(diffusion)?;
        Ok(g)
    }

    /// L = π, h = dt = 0.01.
    pub fn full() -> Self {
        Self::new(PI, 0.01, 0.01).expect("valid preset")
    }

    /// L = π, h = 0.02, dt = 0.01.
    pub fn coarse() -> Self {
        Self::new(PI, 0.02, 0.01).expect("valid preset")
    }

    pub fn ny(&self) -> usize {
        self.nx
    }

    pub fn nodes(&self) -> usize {
        self.nx * self.nx
    }

    /// max(d)·dt·4/h².
    pub fn guard_value(&self, diffusion: [f64; 3]) -> f64 {
        let dmax = diffusion.iter().copied().fold(0.0, f64::max);
        dmax * self.dt * 4.0 / (self.h * self.h)
    }

    pub fn check_guard(&self, diffusion: [f64; 3]) -> Result<()> {
        let value = self.guard_value(diffusion);
        if value < 1.0 {
            Ok(())
        } else {
            Err(Error::StabilityGuard { value })
        }
    }
}

/// The three densities on the grid, row-major with index `j * nx + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    pub nx: usize,
    pub ny: usize,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
    pub time: f64,
}

pub const FIELD_NAMES: [char; 3] = ['u', 'v', 'w'];

impl FieldGrid {
    pub fn constant(nx: usize, ny: usize, state: [f64; 3]) -> Self {
        let n = nx * ny;
        Self {
            nx,
            ny,
            u: vec![state[0]; n],
            v: vec![state[1]; n],
            w: vec![state[2]; n],
            time: 0.0,
        }
    }

    pub fn fields(&self) -> [&[f64]; 3] {
        [&self.u, &self.v, &self.w]
    }

    pub fn field(&self, name: char) -> Option<&[f64]> {
        match name {
            'u' => Some(&self.u),
            'v' => Some(&self.v),
            'w' => Some(&self.w),
            _ => None,
        }
    }

    pub fn at(&self, i: usize, j: usize) -> [f64; 3] {
        let n = j * self.nx + i;
        [self.u[n], self.v[n], self.w[n]]
    }

    /// max − min per field.
    pub fn amplitude(&self) -> [f64; 3] {
        self.fields().map(|f| {
            let (lo, hi) = f
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
            hi - lo
        })
    }

    pub fn max(&self) -> [f64; 3] {
        self.fields().map(|f| f.iter().copied().fold(f64::NEG_INFINITY, f64::max))
    }

    pub fn min(&self) -> [f64; 3] {
        self.fields().map(|f| f.iter().copied().fold(f64::INFINITY, f64::min))
    }

    pub fn mean(&self) -> [f64; 3] {
        self.fields().map(|f| f.iter().sum::<f64>() / f.len() as f64)
    }

    pub fn same_shape(&self, other: &FieldGrid) -> bool {
        self.nx == other.nx && self.ny == other.ny
    }
}

/// Strictly increasing capture times, each on the time-step lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotSchedule {
    times: Vec<f64>,
}

impl SnapshotSchedule {
    pub fn new(times: Vec<f64>, dt: f64) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::InvalidSchedule("no snapshot times".into()));
        }
        for w in times.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidSchedule(format!(
                    "times must be strictly increasing ({} then {})",
                    w[0], w[1]
                )));
            }
        }
        for &t in &times {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::InvalidSchedule(format!("bad snapshot time {t}")));
            }
            let steps = t / dt;
            if (steps - steps.round()).abs() * dt > 1e-9 {
                return Err(Error::InvalidSchedule(format!("{t} is not a multiple of dt = {dt}")));
            }
        }
        Ok(Self { times })
    }

    /// Captures every `interval` from `interval` to `t_end`, plus `t_end`.
    pub fn every(interval: f64, t_end: f64, dt: f64) -> Result<Self> {
        if !(interval > 0.0) || !(t_end > 0.0) {
            return Err(Error::InvalidSchedule("interval and t_end must be positive".into()));
        }
        let n = (t_end / interval + 1e-9).floor() as usize;
        let mut times: Vec<f64> = (1..=n).map(|i| i as f64 * interval).collect();
        if times.last().is_none_or(|&t| (t - t_end).abs() > 1e-9) {
            times.push(t_end);
        }
        Self::new(times, dt)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn end(&self) -> f64 {
        *self.times.last().expect("schedule is non-empty")
    }

    /// Step indices matching each time.
    pub fn steps(&self, dt: f64) -> Vec<usize> {
        self.times.iter().map(|t| (t / dt).round() as usize).collect()
    }
}
