//! Analytic Jacobian of the reaction terms.

use crate::error::{Error, Result};
use crate::kinetics::State;
use crate::params::ModelParams;

/// 3×3 matrix of partial derivatives ∂G_i/∂x_j, row-major: `self.0[i][j]`
/// is a_{i+1, j+1}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jacobian3(pub [[f64; 3]; 3]);

impl Jacobian3 {
    #[inline]
    pub fn a(&self, i: usize, j: usize) -> f64 {
        self.0[i - 1][j - 1]
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    /// Sum of the three principal 2×2 minors.
    pub fn minor_sum(&self) -> f64 {
        let m = &self.0;
        (m[0][0] * m[1][1] - m[0][1] * m[1][0])
            + (m[0][0] * m[2][2] - m[0][2] * m[2][0])
            + (m[1][1] * m[2][2] - m[1][2] * m[2][1])
    }

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    #[inline]
    pub fn apply(&self, x: &[f64; 3]) -> [f64; 3] {
        let m = &self.0;
        [
            m[0][0] * x[0] + m[0][1] * x[1] + m[0][2] * x[2],
            m[1][0] * x[0] + m[1][1] * x[1] + m[1][2] * x[2],
            m[2][0] * x[0] + m[2][1] * x[1] + m[2][2] * x[2],
        ]
    }

    /// Solves `J x = b` by Cramer's rule; `None` when singular.
    pub fn solve(&self, b: [f64; 3]) -> Option<[f64; 3]> {
        let det = self.det();
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let mut out = [0.0; 3];
        for (col, slot) in out.iter_mut().enumerate() {
            let mut m = self.0;
            for row in 0..3 {
                m[row][col] = b[row];
            }
            *slot = Jacobian3(m).det() / det;
        }
        Some(out)
    }

    /// The matrix J − k² diag(d1, d2, d3) governing a Fourier mode of wave
    /// number k.
    pub fn with_diffusion(&self, k_sq: f64, d: [f64; 3]) -> Jacobian3 {
        let mut m = self.0;
        for i in 0..3 {
            m[i][i] -= k_sq * d[i];
        }
        Jacobian3(m)
    }
}

/// Jacobian of the kinetics at an arbitrary state.
#[inline]
pub fn jacobian_at(state: State, p: &ModelParams) -> Jacobian3 {
    let [u, v, w] = state;
    let b = p.gamma + u;
    let pressure = p.alpha1 * v + p.alpha2 * w;
    let sat = u / b;
    let gain = p.infection_gain();

    let a11 = p.r * (1.0 - 2.0 * u / p.k) - pressure * p.gamma / (b * b);
    let a12 = -p.alpha1 * sat;
    let a13 = -p.alpha2 * sat;

    let a21 = p.alpha * pressure * p.gamma / (b * b);
    let a22 = p.alpha * p.alpha1 * sat
        + p.c1 * p.sigma * (2.0 * p.beta * v + w)
        + p.c2 * p.sigma * p.beta * w
        - p.sigma * (2.0 * p.beta * v + w)
        - p.sigma * p.l * p.f * w
        - p.lambda * w
        - p.d;
    let a23 = p.alpha * p.alpha2 * sat + p.c1 * p.sigma * v + p.c2 * p.sigma * (p.beta * v + 2.0 * w)
        - p.sigma * v
        - p.sigma * p.l * p.f * v
        - p.lambda * v;

    let a32 = gain * w;
    let a33 = gain * v - 2.0 * p.sigma * w - p.removal();

    Jacobian3([[a11, a12, a13], [a21, a22, a23], [0.0, a32, a33]])
}

/// Checked variant of [`jacobian_at`].
pub fn jacobian(state: State, p: &ModelParams) -> Result<Jacobian3> {
    if state.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("state"));
    }
    Ok(jacobian_at(state, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinetics::rates;

    #[test]
    fn structural_zero() {
        let p = ModelParams::reference().with_sigma(0.026);
        for s in [[1.0, 2.0, 3.0], [40.0, 0.5, 12.0], [0.0, 0.0, 0.0]] {
            assert_eq!(jacobian_at(s, &p).a(3, 1), 0.0);
        }
    }

    #[test]
    fn trace_at_turing_point() {
        let p = ModelParams::reference().with_sigma(0.026);
        let j = jacobian_at([8.1844, 19.0716, 6.7682], &p);
        assert!((-j.trace() - 0.0942).abs() <= 2e-3);
    }

    #[test]
    fn equilibrium_forms_agree() {
        // At a steady state a11 reduces to -ru/k + A u/B^2 and a33 to -σw.
        let p = ModelParams::reference().with_sigma(0.026);
        let eq = crate::equilibrium::find_equilibria(&p).unwrap()[0];
        let [u, v, w] = eq.state();
        let j = jacobian_at(eq.state(), &p);
        let a = p.alpha1 * v + p.alpha2 * w;
        let b = p.gamma + u;
        assert!((j.a(1, 1) - (-p.r * u / p.k + a * u / (b * b))).abs() < 1e-10);
        assert!((j.a(3, 3) + p.sigma * w).abs() < 1e-10);
    }

    #[test]
    fn matches_central_differences() {
        let p = ModelParams::reference().with_sigma(0.026);
        let x = [12.0, 7.0, 3.0];
        let j = jacobian_at(x, &p);
        let h = 1e-6;
        for col in 0..3 {
            let mut hi = x;
            let mut lo = x;
            hi[col] += h;
            lo[col] -= h;
            let gh = rates(hi[0], hi[1], hi[2], &p);
            let gl = rates(lo[0], lo[1], lo[2], &p);
            for row in 0..3 {
                let fd = (gh[row] - gl[row]) / (2.0 * h);
                let exact = j.0[row][col];
                assert!((fd - exact).abs() <= 1e-5 * exact.abs().max(1e-3));
            }
        }
    }

    #[test]
    fn cramer_solve() {
        let j = Jacobian3([[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 4.0]]);
        let x = j.solve([1.0, 2.0, 3.0]).unwrap();
        let back = j.apply(&x);
        for i in 0..3 {
            assert!((back[i] - [1.0, 2.0, 3.0][i]).abs() < 1e-12);
        }
        assert!(Jacobian3([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [0.0, 0.0, 1.0]])
            .solve([1.0, 1.0, 1.0])
            .is_none());
    }
}
