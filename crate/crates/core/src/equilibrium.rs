//! Constant positive steady states.
//!
//! The w-equation gives w* = ((λ + σlf − σβ)v* − (d + e))/σ directly. With
//! that substitution the prey equation is linear in v and the susceptible
//! predator equation is quadratic in v, so eliminating v and clearing the
//! (γ + u) denominator leaves a single quintic in u.

use crate::error::{Error, Result};
use crate::kinetics::{rates, residual_norm, State};
use crate::params::ModelParams;
use crate::poly::Poly;

/// Coefficients of the two reduced steady-state equations
///
/// ```text
/// m1 u² + m2 u + m3 v + m4 = 0
/// n1 v² + n2 uv/(γ+u) + n3 v + n4 u/(γ+u) + n5 = 0
/// ```
///
/// The second equation is σ·G2 after eliminating w. `n1` and `n3` include the
/// c2σβ contribution of the infected-cannibalism term (c2σβvw), which is easy
/// to drop when expanding by hand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedEquilibriumSystem {
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
    pub m4: f64,
    pub n1: f64,
    pub n2: f64,
    pub n3: f64,
    pub n4: f64,
    pub n5: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equilibrium {
    pub u_star: f64,
    pub v_star: f64,
    pub w_star: f64,
    /// max |G_i| at the point.
    pub residual_norm: f64,
    /// All coordinates positive and (λ+σlf−σβ)v* > d+e.
    pub feasible: bool,
}

impl Equilibrium {
    /// Wraps a state, computing its residual and feasibility.
    pub fn at(state: State, p: &ModelParams) -> Self {
        let [u, v, w] = state;
        Self {
            u_star: u,
            v_star: v,
            w_star: w,
            residual_norm: residual_norm(state, p),
            feasible: u > 0.0 && v > 0.0 && w > 0.0 && p.infection_gain() * v > p.removal(),
        }
    }

    pub fn state(&self) -> State {
        [self.u_star, self.v_star, self.w_star]
    }

    pub(crate) fn require_feasible(&self) -> Result<()> {
        if self.feasible {
            Ok(())
        } else {
            Err(Error::InfeasibleEquilibrium {
                u: self.u_star,
                v: self.v_star,
                w: self.w_star,
            })
        }
    }
}

/// Grid resolution of the sign-change scan over (0, k].
pub const SCAN_STEPS: usize = 10_000;
const BISECTION_TOL: f64 = 1e-12;
/// Maximum accepted residual max |G_i| for a returned equilibrium.
pub const RESIDUAL_TOL: f64 = 1e-10;

pub fn reduce_equilibrium_system(p: &ModelParams) -> Result<ReducedEquilibriumSystem> {
    if p.sigma == 0.0 {
        return Err(Error::NoCannibalism);
    }
    let s = p.sigma;
    let gain = p.infection_gain();
    let de = p.removal();
    // c1σ − σ − σlf − λ
    let loss = p.c1 * s - s - s * p.l * p.f - p.lambda;
    Ok(ReducedEquilibriumSystem {
        m1: p.r / p.k,
        m2: p.r * (p.gamma / p.k - 1.0),
        m3: p.alpha1 + p.alpha2 * (p.l * p.f - p.beta + p.lambda / s),
        m4: -(p.r * p.gamma + p.alpha2 / s * de),
        n1: p.c2 * gain * gain
            + loss * gain
            + (p.c1 * s * p.beta - s * p.beta) * s
            + p.c2 * s * p.beta * gain,
        n2: p.alpha * (p.alpha1 * s + p.alpha2 * gain),
        n3: -(loss * de + 2.0 * p.c2 * de * gain + s * p.d) - p.c2 * s * p.beta * de,
        n4: -p.alpha * p.alpha2 * de,
        n5: p.c2 * de * de,
    })
}

impl ReducedEquilibriumSystem {
    /// v as a function of u from the first reduced equation.
    pub fn v_of_u(&self) -> Result<Poly> {
        if self.m3 == 0.0 {
            return Err(Error::DegenerateReduction("m3 = 0, v cannot be eliminated"));
        }
        Ok(Poly::new(vec![-self.m4 / self.m3, -self.m2 / self.m3, -self.m1 / self.m3]))
    }

    /// The quintic in u obtained by substituting v(u) into the second
    /// equation multiplied through by (γ + u).
    pub fn quintic(&self, gamma: f64) -> Result<Poly> {
        let v = self.v_of_u()?;
        let x = Poly::new(vec![0.0, 1.0]);
        let shifted = Poly::new(vec![gamma, 1.0]);
        let v_sq = &v * &v;
        let terms = [
            (&v_sq * &shifted).scale(self.n1),
            (&x * &v).scale(self.n2),
            (&v * &shifted).scale(self.n3),
            x.scale(self.n4),
            shifted.scale(self.n5),
        ];
        Ok(terms.iter().fold(Poly::new(vec![0.0]), |acc, t| &acc + t))
    }

    pub fn residuals(&self, u: f64, v: f64, gamma: f64) -> [f64; 2] {
        let sat = u / (gamma + u);
        [
            self.m1 * u * u + self.m2 * u + self.m3 * v + self.m4,
            self.n1 * v * v + self.n2 * sat * v + self.n3 * v + self.n4 * sat + self.n5,
        ]
    }
}

/// All constant positive steady states with u in (0, k].
///
/// Every root of the reduction quintic with positive (u, v, w) is returned
/// once, polished by Newton on the full three-dimensional system. An empty
/// list means no positive equilibrium exists (e.g. λ = 0 at the reference
/// point).
pub fn find_equilibria(p: &ModelParams) -> Result<Vec<Equilibrium>> {
    p.validate()?;
    let reduced = reduce_equilibrium_system(p)?;
    let quintic = reduced.quintic(p.gamma)?;
    let v_of_u = reduced.v_of_u()?;
    let u_max = p.k;

    let mut found = Vec::new();
    for u in quintic.bracketed_roots(0.0, u_max, SCAN_STEPS, BISECTION_TOL) {
        if u <= 0.0 {
            continue;
        }
        let v = v_of_u.eval(u);
        let w = (p.infection_gain() * v - p.removal()) / p.sigma;
        if v <= 0.0 || w <= 0.0 {
            continue;
        }
        let state = newton_polish([u, v, w], p);
        let eq = Equilibrium::at(state, p);
        if eq.residual_norm >= RESIDUAL_TOL {
            return Err(Error::DegenerateReduction(
                "equilibrium residual above tolerance after refinement",
            ));
        }
        found.push(eq);
    }
    Ok(found)
}

/// A few Newton iterations on G(x) = 0, kept only while they reduce the
/// residual.
fn newton_polish(mut x: State, p: &ModelParams) -> State {
    let mut best = residual_norm(x, p);
    for _ in 0..8 {
        if best < 1e-14 {
            break;
        }
        let j = crate::jacobian::jacobian_at(x, p);
        let g = rates(x[0], x[1], x[2], p);
        let Some(dx) = j.solve([-g[0], -g[1], -g[2]]) else {
            break;
        };
        let trial = [x[0] + dx[0], x[1] + dx[1], x[2] + dx[2]];
        let r = residual_norm(trial, p);
        if !(r < best) {
            break;
        }
        x = trial;
        best = r;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn leading_prey_coefficients() {
        let s = reduce_equilibrium_system(&ModelParams::reference()).unwrap();
        assert!(close(s.m1, 0.4 / 68.0, 1e-15));
        assert!(close(s.m2, 0.4 * (10.0 / 68.0 - 1.0), 1e-15));
        assert!(close(s.m2, -0.341176, 1e-6));
    }

    #[test]
    fn sigma_zero_is_an_error() {
        let p = ModelParams::reference().with_sigma(0.0);
        assert_eq!(reduce_equilibrium_system(&p), Err(Error::NoCannibalism));
        assert_eq!(find_equilibria(&p), Err(Error::NoCannibalism));
    }

    #[test]
    fn recovers_turing_point() {
        let p = ModelParams::reference().with_sigma(0.026);
        let eqs = find_equilibria(&p).unwrap();
        let hit = eqs
            .iter()
            .find(|e| {
                close(e.u_star, 8.1844, 1e-3)
                    && close(e.v_star, 19.0716, 1e-3)
                    && close(e.w_star, 6.7682, 1e-3)
            })
            .unwrap_or_else(|| panic!("{eqs:?}"));
        assert!(hit.feasible);
        assert!(hit.residual_norm < RESIDUAL_TOL);
    }

    #[test]
    fn recovers_non_turing_point() {
        let p = ModelParams::reference();
        let eqs = find_equilibria(&p).unwrap();
        assert!(eqs.iter().any(|e| close(e.u_star, 1.9756, 1e-3)
            && close(e.v_star, 13.4643, 1e-3)
            && close(e.w_star, 6.1178, 1e-3)));
    }

    #[test]
    fn no_transmission_no_positive_equilibrium() {
        let p = ModelParams::reference().with_lambda(0.0);
        let eqs = find_equilibria(&p).unwrap();
        assert!(eqs.iter().all(|e| !e.feasible), "{eqs:?}");
        assert!(eqs.is_empty());
    }

    #[test]
    fn w_star_relation_holds() {
        let p = ModelParams::reference().with_sigma(0.026);
        for e in find_equilibria(&p).unwrap() {
            let w = -(1.0 / p.sigma) * (p.removal() - p.infection_gain() * e.v_star);
            assert!(close(w, e.w_star, 1e-9));
            assert!(p.infection_gain() * e.v_star > p.removal());
        }
    }
}
