use crate::bounds::a_priori_bounds;
use crate::error::{Error, Result};
use crate::params::ModelParams;

/// Eigenvalues of −Δ with zero-flux boundaries on the square [0, L]².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainSpectrum {
    pub length: f64,
}

impl DomainSpectrum {
    pub fn new(length: f64) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidSettings(format!("domain length must be positive, got {length}")));
        }
        Ok(Self { length })
    }

    /// μ for mode (m, n): (π/L)² (m² + n²).
    pub fn mode(&self, m: u32, n: u32) -> f64 {
        let base = (std::f64::consts::PI / self.length).powi(2);
        base * f64::from(m * m + n * n)
    }

    /// Smallest positive eigenvalue.
    pub fn mu1(&self) -> f64 {
        self.mode(1, 0)
    }

    /// The first `count` eigenvalues in ascending order, μ0 = 0 included
    /// and repeated according to multiplicity.
    pub fn eigenvalues(&self, count: usize) -> Vec<f64> {
        let mut side = 1u32;
        while ((side * side) as usize) < count {
            side += 1;
        }
        // modes with m, n < side cover everything below (π/L)² side²
        let mut all: Vec<(u32, f64)> = Vec::new();
        let limit = side * 2;
        for m in 0..limit {
            for n in 0..limit {
                all.push((m * m + n * n, self.mode(m, n)));
            }
        }
        all.sort_by_key(|&(s, _)| s);
        all.into_iter().take(count).map(|(_, mu)| mu).collect()
    }
}

/// Diffusion levels above which no nonconstant positive steady state
/// exists, on a square domain of side `length`.
#[derive(Debug, Clone, PartialEq)]
pub struct NonexistenceReport {
    pub mu1: f64,
    pub w_prime: f64,
    pub d1_star: f64,
    pub d2_star: f64,
    pub d1_exceeds: bool,
    pub d2_exceeds: bool,
    /// Whether the prey and predator thresholds are both met. The infected
    /// predator threshold has no closed form and is not checked.
    pub excluded: bool,
}

pub fn nonexistence_thresholds(p: &ModelParams, length: f64) -> Result<NonexistenceReport> {
    let spectrum = DomainSpectrum::new(length)?;
    let bounds = a_priori_bounds(p)?;
    if !bounds.valid {
        return Err(Error::InvalidSettings(format!(
            "a priori bounds invalid: {}",
            bounds.diagnostic.as_deref().unwrap_or("unknown")
        )));
    }
    Ok(thresholds_with(p, spectrum.mu1(), bounds.w_max))
}

pub(crate) fn thresholds_with(p: &ModelParams, mu1: f64, w_prime: f64) -> NonexistenceReport {
    let d1_star = p.r / mu1;
    let d2_star = p.sigma * w_prime * (p.c1 + p.c2 * p.beta) / mu1;
    let d1_exceeds = p.d1 >= d1_star;
    let d2_exceeds = p.d2 >= d2_star;
    NonexistenceReport {
        mu1,
        w_prime,
        d1_star,
        d2_star,
        d1_exceeds,
        d2_exceeds,
        excluded: d1_exceeds && d2_exceeds,
    }
}
