//! Temporal (Routh–Hurwitz) stability of a constant steady state and the
//! closed-form sufficient conditions for local and global stability.

use crate::equilibrium::Equilibrium;
use crate::error::Result;
use crate::jacobian::{jacobian_at, Jacobian3};
use crate::params::ModelParams;

/// Auxiliary constants of the linearisation at (u*, v*, w*).
///
/// `a`, `b`, `c` here are the predation pressure, saturation denominator and
/// the a21 entry. They are unrelated to the quadratic coefficients stored in
/// [`crate::bounds::AprioriBounds`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityConstants {
    /// α1 v* + α2 w*
    pub a: f64,
    /// γ + u*
    pub b: f64,
    /// α A/B − α A u*/B²
    pub c: f64,
    pub m1: f64,
    pub m2: f64,
    pub e1: f64,
    pub d1: f64,
    /// λ + σlf − σβ
    pub p1: f64,
}

impl StabilityConstants {
    pub fn at(eq: &Equilibrium, p: &ModelParams) -> Self {
        let (u, v, w) = (eq.u_star, eq.v_star, eq.w_star);
        let a = p.alpha1 * v + p.alpha2 * w;
        let b = p.gamma + u;
        let s = p.sigma;
        Self {
            a,
            b,
            c: p.alpha * a / b - p.alpha * a * u / (b * b),
            m1: s * (2.0 * p.beta * v + w) + s * p.l * p.f * w + p.lambda * w + p.d,
            m2: s * v + s * p.l * p.f * v + p.lambda * v,
            e1: p.alpha * p.alpha2 * u / b + p.c1 * s * v + p.c2 * s * (p.beta * v + 2.0 * w),
            d1: p.alpha * p.alpha1 * u / b + p.c1 * s * (2.0 * p.beta * v + w) + p.c2 * s * p.beta * w,
            p1: p.infection_gain(),
        }
    }
}

/// Characteristic polynomial ξ³ + A1 ξ² + A2 ξ + A3 of the kinetic
/// Jacobian and the Routh–Hurwitz verdict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemporalStabilityReport {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    /// A1 A2 − A3
    pub hurwitz_product: f64,
    pub stable: bool,
    pub constants: StabilityConstants,
}

/// Coefficients (A1, A2, A3) = (−tr J, sum of principal minors, −det J).
pub fn characteristic_coefficients(j: &Jacobian3) -> [f64; 3] {
    [-j.trace(), j.minor_sum(), -j.det()]
}

/// Routh–Hurwitz test for a cubic with coefficients (A1, A2, A3).
pub fn routh_hurwitz(coeffs: [f64; 3]) -> bool {
    let [a1, a2, a3] = coeffs;
    a1 > 0.0 && a2 > 0.0 && a3 > 0.0 && a1 * a2 - a3 > 0.0
}

pub fn temporal_stability(eq: &Equilibrium, p: &ModelParams) -> Result<TemporalStabilityReport> {
    eq.require_feasible()?;
    let j = jacobian_at(eq.state(), p);
    let [a1, a2, a3] = characteristic_coefficients(&j);
    Ok(TemporalStabilityReport {
        a1,
        a2,
        a3,
        hurwitz_product: a1 * a2 - a3,
        stable: routh_hurwitz([a1, a2, a3]),
        constants: StabilityConstants::at(eq, p),
    })
}

/// One evaluated inequality `lhs <op> rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Condition {
    /// Identifier used in reports.
    pub key: &'static str,
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl Condition {
    fn greater(key: &'static str, name: &'static str, lhs: f64, rhs: f64) -> Self {
        Self { key, name, lhs, rhs, holds: lhs > rhs }
    }

    fn at_most(key: &'static str, name: &'static str, lhs: f64, rhs: f64) -> Self {
        Self { key, name, lhs, rhs, holds: lhs <= rhs }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub conditions: Vec<Condition>,
    pub holds: bool,
}

impl ConditionReport {
    fn new(conditions: Vec<Condition>) -> Self {
        let holds = conditions.iter().all(|c| c.holds);
        Self { conditions, holds }
    }

    pub fn get(&self, name: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.name == name || c.key == name)
    }
}

/// Sufficient conditions for local asymptotic stability of the diffusive
/// system: M1 > D1, M2 > E1, r/k > A/B² and a lower bound on u*.
pub fn check_local_stability_conditions(eq: &Equilibrium, p: &ModelParams) -> Result<ConditionReport> {
    eq.require_feasible()?;
    let c = StabilityConstants::at(eq, p);
    let gap = c.m1 - c.d1;
    let margin = p.r / p.k - c.a / (c.b * c.b);
    let s = p.sigma;
    let w = eq.w_star;
    let u_bound = [
        1.0 / w,
        s / (gap + s * w),
        (-gap + (gap * gap + 4.0 * margin * s).sqrt()) / (2.0 * margin),
    ]
    .into_iter()
    .fold(f64::NEG_INFINITY, f64::max);
    Ok(ConditionReport::new(vec![
        Condition::greater("m1_gt_d1", "M1 > D1", c.m1, c.d1),
        Condition::greater("m2_gt_e1", "M2 > E1", c.m2, c.e1),
        Condition::greater("logistic_margin", "r/k > A/B^2", p.r / p.k, c.a / (c.b * c.b)),
        Condition::greater("u_star_floor", "u* > max bound", eq.u_star, u_bound),
    ]))
}

/// Sufficient conditions for global asymptotic stability. `w_prime` is an
/// upper bound for w over the domain, normally
/// [`crate::bounds::AprioriBounds::w_max`].
pub fn check_global_stability_conditions(
    eq: &Equilibrium,
    p: &ModelParams,
    w_prime: f64,
) -> Result<ConditionReport> {
    eq.require_feasible()?;
    if !(w_prime >= 0.0) {
        return Err(crate::error::Error::InvalidSettings(format!(
            "w' must be non-negative, got {w_prime}"
        )));
    }
    let (u, v, w) = (eq.u_star, eq.v_star, eq.w_star);
    let b = p.gamma + u;
    let cross = p.alpha * p.gamma * (p.alpha1 + p.alpha2 * w) / (2.0 * b);
    let prey_lhs = (p.alpha1 * v + p.alpha2 * w) / b + cross;
    let pred_lhs = cross + p.c2 * p.sigma * (w_prime + w + p.beta) + p.alpha * p.alpha2 * p.k;
    let pred_rhs = p.sigma * p.beta + p.sigma * (1.0 - p.c1);
    Ok(ConditionReport::new(vec![
        Condition::at_most("prey", "prey inequality", prey_lhs, p.r / p.k),
        Condition::at_most("predator", "predator inequality", pred_lhs, pred_rhs),
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::find_equilibria;

    fn eq_for(sigma: f64) -> (ModelParams, Equilibrium) {
        let p = ModelParams::reference().with_sigma(sigma);
        let eq = find_equilibria(&p).unwrap()[0];
        (p, eq)
    }

    #[test]
    fn turing_point_is_temporally_stable() {
        let (p, eq) = eq_for(0.026);
        let rep = temporal_stability(&eq, &p).unwrap();
        for (got, want) in [
            (rep.a1, 0.0942),
            (rep.a2, 0.0297),
            (rep.a3, 0.0024),
            (rep.hurwitz_product, 0.0004),
        ] {
            assert!((got - want).abs() <= 2e-3, "{got} vs {want}");
        }
        assert!(rep.stable);
    }

    #[test]
    fn non_turing_point_is_unstable() {
        let (p, eq) = eq_for(0.005);
        let rep = temporal_stability(&eq, &p).unwrap();
        assert!((rep.a1 + 0.01156).abs() <= 1e-3);
        assert!(!rep.stable);
    }

    #[test]
    fn known_stable_matrix() {
        let j = Jacobian3([[-3.0, 0.5, 0.2], [0.1, -2.0, 0.4], [0.0, 0.3, -4.0]]);
        assert!(routh_hurwitz(characteristic_coefficients(&j)));
        let j = Jacobian3([[1.0, 0.0, 0.0], [0.0, -2.0, 0.0], [0.0, 0.0, -4.0]]);
        assert!(!routh_hurwitz(characteristic_coefficients(&j)));
    }

    #[test]
    fn infeasible_equilibrium_rejected() {
        let p = ModelParams::reference();
        let eq = Equilibrium::at([1.0, 1.0, -1.0], &p);
        assert!(temporal_stability(&eq, &p).is_err());
        assert!(check_local_stability_conditions(&eq, &p).is_err());
        assert!(check_global_stability_conditions(&eq, &p, 1.0).is_err());
    }

    #[test]
    fn local_conditions_match_direct_substitution() {
        let (p, eq) = eq_for(0.026);
        let rep = check_local_stability_conditions(&eq, &p).unwrap();
        assert_eq!(rep.conditions.len(), 4);
        // Independent re-evaluation of the first three inequalities.
        let (u, v, w) = (eq.u_star, eq.v_star, eq.w_star);
        let s = p.sigma;
        let m1 = s * (2.0 * p.beta * v + w) + s * p.l * p.f * w + p.lambda * w + p.d;
        let d1 = p.alpha * p.alpha1 * u / (p.gamma + u)
            + p.c1 * s * (2.0 * p.beta * v + w)
            + p.c2 * s * p.beta * w;
        let m2 = s * v + s * p.l * p.f * v + p.lambda * v;
        let e1 = p.alpha * p.alpha2 * u / (p.gamma + u) + p.c1 * s * v + p.c2 * s * (p.beta * v + 2.0 * w);
        let aa = p.alpha1 * v + p.alpha2 * w;
        let bb = p.gamma + u;
        assert_eq!(rep.get("M1 > D1").unwrap().holds, m1 > d1);
        assert_eq!(rep.get("M2 > E1").unwrap().holds, m2 > e1);
        assert_eq!(rep.get("r/k > A/B^2").unwrap().holds, p.r / p.k > aa / (bb * bb));
    }

    #[test]
    fn unstable_point_fails_local_conditions() {
        let (p, eq) = eq_for(0.005);
        assert!(!check_local_stability_conditions(&eq, &p).unwrap().holds);
    }

    #[test]
    fn first_conjunct_failure_is_overall_failure() {
        let (p, eq) = eq_for(0.026);
        let rep = check_local_stability_conditions(&eq, &p).unwrap();
        if !rep.get("M1 > D1").unwrap().holds {
            assert!(!rep.holds);
        }
    }

    #[test]
    fn global_conditions_with_zero_bound() {
        let (p, eq) = eq_for(0.026);
        let rep = check_global_stability_conditions(&eq, &p, 0.0).unwrap();
        let c = rep.get("predator inequality").unwrap();
        let b = p.gamma + eq.u_star;
        let cross = p.alpha * p.gamma * (p.alpha1 + p.alpha2 * eq.w_star) / (2.0 * b);
        let expect = cross + p.c2 * p.sigma * (eq.w_star + p.beta) + p.alpha * p.alpha2 * p.k;
        assert!((c.lhs - expect).abs() < 1e-14);
        assert!(check_global_stability_conditions(&eq, &p, -1.0).is_err());
    }
}
