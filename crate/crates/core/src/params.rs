//! Biological and diffusion parameters of the model.

use crate::error::{Error, Result};

/// All rate constants of the three-compartment system plus the three
/// self-diffusion coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Intrinsic prey growth rate.
    pub r: f64,
    /// Prey carrying capacity.
    pub k: f64,
    /// Disease transmission rate.
    pub lambda: f64,
    /// Predation rate of the susceptible predator.
    pub alpha1: f64,
    /// Predation rate of the infected predator.
    pub alpha2: f64,
    /// Half-saturation constant of the Holling II response.
    pub gamma: f64,
    /// Conversion efficiency.
    pub alpha: f64,
    /// Natural predator death rate.
    pub d: f64,
    /// Disease-related mortality.
    pub e: f64,
    /// Cannibalistic attack rate.
    pub sigma: f64,
    pub c1: f64,
    pub c2: f64,
    pub beta: f64,
    /// Transmission probability per cannibalistic interaction.
    pub l: f64,
    /// Conspecifics shared per predator.
    pub f: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

/// Parameter names in canonical order, matching the config keys.
pub const PARAM_NAMES: [&str; 18] = [
    "r", "k", "lambda", "alpha1", "alpha2", "gamma", "alpha", "d", "e", "sigma", "c1", "c2",
    "beta", "l", "f", "d1", "d2", "d3",
];

impl ModelParams {
    /// The reference parameter point used for the non-Turing runs
    /// (σ = 0.005, λ = 0.003), with all diffusion switched off.
    pub const fn reference() -> Self {
        Self {
            r: 0.4,
            k: 68.0,
            lambda: 0.003,
            alpha1: 0.3,
            alpha2: 0.1,
            gamma: 10.0,
            alpha: 1.0,
            d: 0.02,
            e: 0.01,
            sigma: 0.005,
            c1: 1.0,
            c2: 0.2,
            beta: 0.5,
            l: 0.08,
            f: 10.0,
            d1: 0.0,
            d2: 0.0,
            d3: 0.0,
        }
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_diffusion(mut self, d1: f64, d2: f64, d3: f64) -> Self {
        self.d1 = d1;
        self.d2 = d2;
        self.d3 = d3;
        self
    }

    /// Net per-contact gain of the infected class, λ + σlf − σβ.
    #[inline]
    pub fn infection_gain(&self) -> f64 {
        self.lambda + self.sigma * self.l * self.f - self.sigma * self.beta
    }

    /// Total infected removal rate d + e.
    #[inline]
    pub fn removal(&self) -> f64 {
        self.d + self.e
    }

    pub fn max_diffusion(&self) -> f64 {
        self.d1.max(self.d2).max(self.d3)
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        Some(match name {
            "r" => self.r,
            "k" => self.k,
            "lambda" => self.lambda,
            "alpha1" => self.alpha1,
            "alpha2" => self.alpha2,
            "gamma" => self.gamma,
            "alpha" => self.alpha,
            "d" => self.d,
            "e" => self.e,
            "sigma" => self.sigma,
            "c1" => self.c1,
            "c2" => self.c2,
            "beta" => self.beta,
            "l" => self.l,
            "f" => self.f,
            "d1" => self.d1,
            "d2" => self.d2,
            "d3" => self.d3,
            _ => return None,
        })
    }

    /// Sets a parameter by its config name. Returns `false` for unknown names.
    pub fn set(&mut self, name: &str, value: f64) -> bool {
        let slot = match name {
            "r" => &mut self.r,
            "k" => &mut self.k,
            "lambda" => &mut self.lambda,
            "alpha1" => &mut self.alpha1,
            "alpha2" => &mut self.alpha2,
            "gamma" => &mut self.gamma,
            "alpha" => &mut self.alpha,
            "d" => &mut self.d,
            "e" => &mut self.e,
            "sigma" => &mut self.sigma,
            "c1" => &mut self.c1,
            "c2" => &mut self.c2,
            "beta" => &mut self.beta,
            "l" => &mut self.l,
            "f" => &mut self.f,
            "d1" => &mut self.d1,
            "d2" => &mut self.d2,
            "d3" => &mut self.d3,
            _ => return false,
        };
        *slot = value;
        true
    }

    /// Checks sign and range constraints. λ, σ and the diffusion
    /// coefficients may be zero; everything else must be strictly positive,
    /// and the two cannibalism conversion rates may not exceed one.
    pub fn validate(&self) -> Result<()> {
        const MAY_BE_ZERO: [&str; 5] = ["lambda", "sigma", "d1", "d2", "d3"];
        for name in PARAM_NAMES {
            let value = self.get(name).expect("canonical name");
            if !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("{value} is not finite"),
                });
            }
            if MAY_BE_ZERO.contains(&name) {
                if value < 0.0 {
                    return Err(Error::InvalidParameter {
                        name,
                        reason: format!("{value} is negative"),
                    });
                }
            } else if value <= 0.0 {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("{value} must be strictly positive"),
                });
            }
        }
        for (name, value) in [("c1", self.c1), ("c2", self.c2)] {
            if value > 1.0 {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("{value} exceeds 1"),
                });
            }
        }
        Ok(())
    }
}

impl Default for ModelParams {
    fn default() -> Self {
        Self::reference()
    }
}
