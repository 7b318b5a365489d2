use std::fmt;
use std::str::FromStr;

use super::dispersion::rho_at;
use crate::bounds::a_priori_bounds;
use crate::equilibrium::Equilibrium;
use crate::error::{Error, Result};
use crate::jacobian::{jacobian_at, Jacobian3};
use crate::params::ModelParams;
use crate::stability::{characteristic_coefficients, check_global_stability_conditions, routh_hurwitz};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// Stable at k = 0 and no wave number destabilises it.
    PlanarStable,
    /// Stable at k = 0, unstable for some band of k > 0.
    Turing,
    /// Already unstable at k = 0.
    HopfUnstable,
    /// Planar stable and the global stability inequalities hold as well.
    StableEverywhere,
}

impl Verdict {
    pub const ALL: [Verdict; 4] = [
        Verdict::PlanarStable,
        Verdict::Turing,
        Verdict::HopfUnstable,
        Verdict::StableEverywhere,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::PlanarStable => "planar_stable",
            Verdict::Turing => "turing",
            Verdict::HopfUnstable => "hopf_unstable",
            Verdict::StableEverywhere => "stable_everywhere",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Verdict {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Verdict::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| Error::InvalidSettings(format!("unknown verdict `{s}`")))
    }
}

/// Minimum of the cubic c1 z³ + c2 z² + c3 z + c4 over z > 0, when the
/// cubic has an interior local minimum there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicMinimum {
    pub z: f64,
    pub value: f64,
}

/// Local minimiser z* = (−c2 + √(c2² − 3c1c3)) / (3c1) of a cubic with
/// c1 > 0, and the value there.
///
/// Both quantities are evaluated in a form free of cancellation: for tiny
/// c1 the textbook expressions subtract nearly equal numbers and lose most
/// of their significant digits.
pub fn cubic_minimum(c: [f64; 4]) -> Option<CubicMinimum> {
    let [c1, c2, c3, c4] = c;
    if !(c1 > 0.0) {
        return None;
    }
    let disc = c2 * c2 - 3.0 * c1 * c3;
    if !(disc > 0.0) {
        return None;
    }
    let s = disc.sqrt();
    let (z, value) = if c2 >= 0.0 {
        let t = c2 + s;
        (-c3 / t, c4 - c3 * c3 * (c2 + 2.0 * s) / (3.0 * t * t))
    } else {
        let value = (2.0 * c2.powi(3) - 9.0 * c1 * c2 * c3 + 27.0 * c1 * c1 * c4 - 2.0 * s.powi(3))
            / (27.0 * c1 * c1);
        ((s - c2) / (3.0 * c1), value)
    };
    (z > 0.0 && z.is_finite()).then_some(CubicMinimum { z, value })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TuringDiagnostic {
    /// ρ3(z) = q1 z³ + q2 z² + q3 z + q4 with z = k².
    pub q: [f64; 4],
    /// Φ(z) = ρ1ρ2 − ρ3 = r1 z³ + r2 z² + r3 z + r4.
    pub r: [f64; 4],
    pub kd_sq: Option<f64>,
    pub kf_sq: Option<f64>,
    pub rho3_min: Option<f64>,
    pub phi_min: Option<f64>,
    /// (ρ1, ρ2, ρ3) at k = 0.
    pub planar: [f64; 3],
    pub planar_stable: bool,
    pub verdict: Verdict,
}

impl TuringDiagnostic {
    pub fn rho3(&self, z: f64) -> f64 {
        horner(&self.q, z)
    }

    pub fn phi(&self, z: f64) -> f64 {
        horner(&self.r, z)
    }

    /// φ(0) = ρ1(0)ρ2(0) − ρ3(0).
    pub fn planar_phi(&self) -> f64 {
        self.planar[0] * self.planar[1] - self.planar[2]
    }
}

fn horner(c: &[f64; 4], z: f64) -> f64 {
    ((c[0] * z + c[1]) * z + c[2]) * z + c[3]
}

pub(crate) fn coefficients(j: &Jacobian3, d: [f64; 3]) -> ([f64; 4], [f64; 4]) {
    let [d1, d2, d3] = d;
    let a = |i, k| j.a(i, k);
    let q1 = d1 * d2 * d3;
    let q2 = -(a(1, 1) * d2 * d3 + a(2, 2) * d1 * d3 + a(3, 3) * d1 * d2);
    let q3 = d1 * (a(2, 2) * a(3, 3) - a(2, 3) * a(3, 2))
        + d2 * (a(1, 1) * a(3, 3) - a(1, 3) * a(3, 1))
        + d3 * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1));
    let q4 = -j.det();

    let tr = j.trace();
    let dsum = d1 + d2 + d3;
    let p1 = d1 * d2 + d2 * d3 + d3 * d1;
    let p2 = -(a(1, 1) * (d2 + d3) + a(2, 2) * (d3 + d1) + a(3, 3) * (d1 + d2));
    let p3 = j.minor_sum();
    let r1 = dsum * p1 - q1;
    let r2 = dsum * p2 - tr * p1 - q2;
    let r3 = dsum * p3 - tr * p2 - q3;
    let r4 = -(tr * p3 + q4);
    ([q1, q2, q3, q4], [r1, r2, r3, r4])
}

/// Linear diffusion-driven instability test at a feasible equilibrium.
pub fn turing_check(eq: &Equilibrium, p: &ModelParams) -> Result<TuringDiagnostic> {
    eq.require_feasible()?;
    Ok(diagnose(eq, p, &jacobian_at(eq.state(), p)))
}

pub(crate) fn diagnose(eq: &Equilibrium, p: &ModelParams, j: &Jacobian3) -> TuringDiagnostic {
    let d = [p.d1, p.d2, p.d3];
    let (q, r) = coefficients(j, d);
    let planar = rho_at(j, d, 0.0);
    let planar_stable = routh_hurwitz(characteristic_coefficients(j));
    let rho3 = cubic_minimum(q);
    let phi = cubic_minimum(r);
    let verdict = if !planar_stable {
        Verdict::HopfUnstable
    } else if rho3.is_some_and(|m| m.value < 0.0) || phi.is_some_and(|m| m.value < 0.0) {
        Verdict::Turing
    } else if globally_stable(eq, p) {
        Verdict::StableEverywhere
    } else {
        Verdict::PlanarStable
    };
    TuringDiagnostic {
        q,
        r,
        kd_sq: rho3.map(|m| m.z),
        kf_sq: phi.map(|m| m.z),
        rho3_min: rho3.map(|m| m.value),
        phi_min: phi.map(|m| m.value),
        planar,
        planar_stable,
        verdict,
    }
}

fn globally_stable(eq: &Equilibrium, p: &ModelParams) -> bool {
    let Ok(bounds) = a_priori_bounds(p) else {
        return false;
    };
    if !bounds.valid {
        return false;
    }
    check_global_stability_conditions(eq, p, bounds.w_max).is_ok_and(|r| r.holds)
}
