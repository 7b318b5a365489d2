//! Named parameter sets for the standard runs.

use crate::kinetics::State;
use crate::params::ModelParams;

/// Initial state used for the temporal runs.
pub const ODE_INIT: State = [15.1342, 20.5234, 6.3140];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub params: ModelParams,
    /// Snapshot times for pattern runs; empty for temporal runs.
    pub snapshots: &'static [f64],
    /// Initial state for temporal runs.
    pub init: Option<State>,
}

const fn diffusive(sigma: f64, d1: f64, d2: f64, d3: f64) -> ModelParams {
    let mut p = ModelParams::reference();
    p.sigma = sigma;
    p.d1 = d1;
    p.d2 = d2;
    p.d3 = d3;
    p
}

pub const PRESETS: [Preset; 8] = [
    Preset {
        name: "reference",
        description: "reference kinetics, sigma = 0.005, no diffusion",
        params: ModelParams::reference(),
        snapshots: &[],
        init: Some(ODE_INIT),
    },
    Preset {
        name: "row-a",
        description: "Turing patterns, d = (1e-5, 1e-3, 1e-10), sigma = 0.026",
        params: diffusive(0.026, 1e-5, 1e-3, 1e-10),
        snapshots: &[200.0, 400.0, 600.0, 800.0, 1000.0],
        init: None,
    },
    Preset {
        name: "row-b",
        description: "Turing patterns, d = (1e-6, 1e-3, 1e-10), sigma = 0.026",
        params: diffusive(0.026, 1e-6, 1e-3, 1e-10),
        snapshots: &[200.0, 400.0, 600.0, 800.0, 1000.0],
        init: None,
    },
    Preset {
        name: "row-c",
        description: "non-stationary non-Turing patterns, d = (1e-6, 1e-6, 1e-10), sigma = 0.005",
        params: diffusive(0.005, 1e-6, 1e-6, 1e-10),
        snapshots: &[200.0, 300.0, 500.0, 1000.0],
        init: None,
    },
    Preset {
        name: "row-d",
        description: "stationary non-Turing patterns, d = (1e-10, 1e-4, 1e-10), sigma = 0.005",
        params: diffusive(0.005, 1e-10, 1e-4, 1e-10),
        snapshots: &[500.0, 2000.0, 3000.0, 5000.0],
        init: None,
    },
    Preset {
        name: "row-e",
        description: "stationary non-Turing patterns, d = (1e-10, 1e-6, 1e-10), sigma = 0.005",
        params: diffusive(0.005, 1e-10, 1e-6, 1e-10),
        snapshots: &[500.0, 1000.0, 1500.0, 2000.0],
        init: None,
    },
    Preset {
        name: "lyapunov-oscillating",
        description: "sigma = 0.005, lambda = 0.003: oscillating kinetics",
        params: ModelParams::reference(),
        snapshots: &[],
        init: Some(ODE_INIT),
    },
    Preset {
        name: "lyapunov-stable",
        description: "sigma = 0.026: stable focus",
        params: diffusive(0.026, 0.0, 0.0, 0.0),
        snapshots: &[],
        init: Some(ODE_INIT),
    },
];

pub fn preset(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}
