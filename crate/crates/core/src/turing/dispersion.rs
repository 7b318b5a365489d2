use crate::equilibrium::Equilibrium;
use crate::error::Result;
use crate::jacobian::{jacobian_at, Jacobian3};
use crate::params::ModelParams;

/// Coefficients of det(J − k²D − ηI) = −(η³ + ρ1 η² + ρ2 η + ρ3) at one
/// wave number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionSample {
    pub k: f64,
    pub rho1: f64,
    pub rho2: f64,
    pub rho3: f64,
    /// ρ1ρ2 − ρ3
    pub phi: f64,
}

/// ρ1, ρ2, ρ3 as explicit polynomials in z = k².
pub fn rho_at(j: &Jacobian3, diffusion: [f64; 3], z: f64) -> [f64; 3] {
    let [d1, d2, d3] = diffusion;
    let a = |i, k| j.a(i, k);
    let rho1 = -(a(1, 1) + a(2, 2) + a(3, 3)) + (d1 + d2 + d3) * z;
    let rho2 = z * z * (d1 * d2 + d2 * d3 + d3 * d1)
        - (a(1, 1) * (d2 + d3) + a(2, 2) * (d3 + d1) + a(3, 3) * (d1 + d2)) * z
        + j.minor_sum();
    let rho3 = d1 * d2 * d3 * z * z * z
        - z * z * (a(1, 1) * d2 * d3 + a(2, 2) * d1 * d3 + a(3, 3) * d1 * d2)
        + z * (d1 * (a(2, 2) * a(3, 3) - a(2, 3) * a(3, 2))
            + d2 * (a(1, 1) * a(3, 3) - a(1, 3) * a(3, 1))
            + d3 * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)))
        - j.det();
    [rho1, rho2, rho3]
}

/// Dispersion coefficients at scalar wave number `k` (k_y = 0).
pub fn dispersion(eq: &Equilibrium, p: &ModelParams, k: f64) -> Result<DispersionSample> {
    eq.require_feasible()?;
    let j = jacobian_at(eq.state(), p);
    Ok(sample(&j, [p.d1, p.d2, p.d3], k))
}

pub(crate) fn sample(j: &Jacobian3, diffusion: [f64; 3], k: f64) -> DispersionSample {
    let [rho1, rho2, rho3] = rho_at(j, diffusion, k * k);
    DispersionSample { k, rho1, rho2, rho3, phi: rho1 * rho2 - rho3 }
}

/// Dispersion curve over a list of wave numbers.
pub fn dispersion_curve(eq: &Equilibrium, p: &ModelParams, ks: &[f64]) -> Result<Vec<DispersionSample>> {
    eq.require_feasible()?;
    let j = jacobian_at(eq.state(), p);
    Ok(ks.iter().map(|&k| sample(&j, [p.d1, p.d2, p.d3], k)).collect())
}
