//! A priori upper bounds for positive steady states of the diffusive system.

use crate::error::{Error, Result};
use crate::params::ModelParams;

/// Upper bounds on (u, v, w) together with the quadratic A v² + B v + C ≤ 0
/// they come from. The letters are local to this struct; see
/// [`crate::stability::StabilityConstants`] for the unrelated A, B, C of the
/// linearisation.
#[derive(Debug, Clone, PartialEq)]
pub struct AprioriBounds {
    pub u_max: f64,
    /// NaN when the quadratic has no real root.
    pub v_max: f64,
    pub w_max: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// A > 0, B < 0 and 4AC < B².
    pub valid: bool,
    pub diagnostic: Option<String>,
}

pub fn a_priori_bounds(p: &ModelParams) -> Result<AprioriBounds> {
    if p.sigma == 0.0 {
        return Err(Error::NoCannibalism);
    }
    let s = p.sigma;
    let gain = p.infection_gain();
    let de = p.removal();
    let sat_k = p.k / (p.gamma + p.k);

    let a = (1.0 - p.c1) * s * p.beta - p.c2 / s * gain * gain
        + gain / s * (s + s * p.l * p.f + p.lambda - p.c1 * s - p.c2 * s * p.beta);
    let b = -p.alpha * p.alpha1 * sat_k
        + gain / s * (2.0 * p.c2 * de - p.alpha * p.alpha2 * sat_k)
        + de * (p.c1 * s + p.c2 * s * p.beta - s - s * p.l * p.f - p.lambda);
    let c = de / s * (p.alpha * p.alpha2 * sat_k - p.c2 * de);

    let disc = b * b - 4.0 * a * c;
    let v_max = if disc >= 0.0 && a != 0.0 {
        (-b + disc.sqrt()) / (2.0 * a)
    } else {
        f64::NAN
    };
    let w_max = (gain * v_max - de) / s;

    let mut problems = Vec::new();
    if !(a > 0.0) {
        problems.push(format!("A = {a} is not positive"));
    }
    if !(b < 0.0) {
        problems.push(format!("B = {b} is not negative"));
    }
    if !(4.0 * a * c < b * b) {
        problems.push(format!("B^2 - 4AC = {disc} is not positive"));
    }
    let valid = problems.is_empty();
    if valid && !(w_max > 0.0) {
        problems.push(format!("w bound {w_max} is not positive (infeasible bound)"));
    }
    Ok(AprioriBounds {
        u_max: p.k,
        v_max,
        w_max,
        a,
        b,
        c,
        valid,
        diagnostic: (!problems.is_empty()).then(|| problems.join("; ")),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prey_bound_is_carrying_capacity() {
        let b = a_priori_bounds(&ModelParams::reference()).unwrap();
        assert_eq!(b.u_max, 68.0);
    }

    #[test]
    fn sigma_zero_rejected() {
        assert_eq!(
            a_priori_bounds(&ModelParams::reference().with_sigma(0.0)),
            Err(Error::NoCannibalism)
        );
    }

    #[test]
    fn valid_bound_is_a_root_of_the_quadratic() {
        for sigma in [0.005, 0.026] {
            let b = a_priori_bounds(&ModelParams::reference().with_sigma(sigma)).unwrap();
            if b.valid {
                assert!(b.v_max > 0.0);
                let q = b.a * b.v_max * b.v_max + b.b * b.v_max + b.c;
                assert!(q.abs() < 1e-9 * (1.0 + b.c.abs()), "{q}");
            }
        }
    }

    #[test]
    fn non_positive_gain_gives_negative_w_bound() {
        // gain = λ + σ(lf − β) < 0 with lf < β
        let mut p = ModelParams::reference().with_lambda(0.0);
        p.l = 0.01;
        assert!(p.infection_gain() < 0.0);
        let b = a_priori_bounds(&p).unwrap();
        if b.v_max.is_finite() && b.v_max >= 0.0 {
            assert!(b.w_max <= -p.removal() / p.sigma + 1e-12);
        }
        assert!(b.diagnostic.is_some());
    }
}
