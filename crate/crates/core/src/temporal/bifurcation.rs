//! One-parameter sweeps recording post-transient extrema of v.

use super::rk4::{check_state, rk4_step, step_count};
use crate::error::{Error, Result};
use crate::exec::{map_ordered, Execution};
use crate::kinetics::State;
use crate::params::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    Lambda,
    Sigma,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::Lambda => "lambda",
            SweepParameter::Sigma => "sigma",
        }
    }

    pub fn apply(self, p: &ModelParams, value: f64) -> ModelParams {
        match self {
            SweepParameter::Lambda => p.with_lambda(value),
            SweepParameter::Sigma => p.with_sigma(value),
        }
    }
}

impl std::str::FromStr for SweepParameter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lambda" => Ok(SweepParameter::Lambda),
            "sigma" => Ok(SweepParameter::Sigma),
            other => Err(Error::InvalidSettings(format!(
                "sweep parameter must be lambda or sigma, got `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSettings {
    pub dt: f64,
    pub transient: f64,
    pub window: f64,
}

impl Default for SweepSettings {
    fn default() -> Self {
        Self { dt: 0.01, transient: 10_000.0, window: 5_000.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub value: f64,
    /// Local extrema of v in the observation window. A run that approaches
    /// its limit monotonically contributes its final v.
    pub extrema: Vec<f64>,
    /// Set when the run diverged; `extrema` is then empty.
    pub failure: Option<Error>,
}

impl SweepPoint {
    /// max − min of the recorded extrema.
    pub fn band_width(&self) -> Option<f64> {
        let (lo, hi) = self
            .extrema
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
        (lo <= hi).then_some(hi - lo)
    }

    /// Settled onto a constant population: extrema cluster within `band`.
    pub fn is_settled(&self, band: f64) -> bool {
        self.band_width().is_some_and(|w| w < band)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BifurcationSweep {
    pub parameter: SweepParameter,
    pub points: Vec<SweepPoint>,
}

impl BifurcationSweep {
    pub fn grid(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.value)
    }
}

fn run_point(p: &ModelParams, init: State, settings: &SweepSettings) -> Result<Vec<f64>> {
    let transient = step_count(settings.dt, settings.transient)?;
    let window = step_count(settings.dt, settings.window)?;
    let mut x = init;
    for step in 1..=transient {
        x = rk4_step(p, &x, settings.dt);
        check_state(&x, step, step as f64 * settings.dt)?;
    }
    let mut extrema = Vec::new();
    let mut prev = x[1];
    let mut prev_slope = 0.0_f64;
    for step in 1..=window {
        x = rk4_step(p, &x, settings.dt);
        let n = transient + step;
        check_state(&x, n, n as f64 * settings.dt)?;
        let slope = x[1] - prev;
        if slope != 0.0 && prev_slope != 0.0 && slope.signum() != prev_slope.signum() {
            extrema.push(prev);
        }
        if slope != 0.0 {
            prev_slope = slope;
        }
        prev = x[1];
    }
    if extrema.is_empty() {
        extrema.push(x[1]);
    }
    Ok(extrema)
}

/// Integrates past `settings.transient` at every grid value and collects
/// the local extrema of v over `settings.window`. Divergent runs are
/// recorded as gaps rather than failing the sweep.
pub fn bifurcation_sweep(
    params: &ModelParams,
    which: SweepParameter,
    grid: &[f64],
    init: State,
    settings: &SweepSettings,
    exec: Execution,
) -> Result<BifurcationSweep> {
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidSettings("sweep grid must be strictly increasing".into()));
    }
    if init.iter().any(|c| !(*c > 0.0)) {
        return Err(Error::InvalidSettings("initial state must be strictly positive".into()));
    }
    step_count(settings.dt, settings.transient + settings.window)?;
    let points = map_ordered(exec, grid, |&value| {
        let p = which.apply(params, value);
        match run_point(&p, init, settings) {
            Ok(extrema) => SweepPoint { value, extrema, failure: None },
            Err(e) => SweepPoint { value, extrema: Vec::new(), failure: Some(e) },
        }
    });
    Ok(BifurcationSweep { parameter: which, points })
}
