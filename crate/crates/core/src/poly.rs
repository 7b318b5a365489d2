//! Dense real polynomials and bracketed real-root search.

use std::ops::{Add, Mul};

/// Polynomial with coefficients in ascending order of degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn new(coeffs: impl Into<Vec<f64>>) -> Self {
        let mut p = Poly(coeffs.into());
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.0.len() > 1 && self.0.last() == Some(&0.0) {
            self.0.pop();
        }
        if self.0.is_empty() {
            self.0.push(0.0);
        }
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly::new(self.0.iter().map(|c| c * s).collect::<Vec<_>>())
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        if self.0.len() <= 1 {
            return Poly::new(vec![0.0]);
        }
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * i as f64)
                .collect::<Vec<_>>(),
        )
    }

    /// Real roots in `(lo, hi]`, found by sign-change scanning on `steps`
    /// equal sub-intervals, bisection to `tol` and one Newton polish.
    /// Roots of even multiplicity that never change sign are not reported.
    pub fn bracketed_roots(&self, lo: f64, hi: f64, steps: usize, tol: f64) -> Vec<f64> {
        let dp = self.derivative();
        let h = (hi - lo) / steps as f64;
        let mut roots = Vec::new();
        let mut x0 = lo;
        let mut f0 = self.eval(x0);
        for i in 1..=steps {
            let x1 = if i == steps { hi } else { lo + h * i as f64 };
            let f1 = self.eval(x1);
            if f1 == 0.0 {
                roots.push(x1);
            } else if f0 != 0.0 && f0.signum() != f1.signum() {
                roots.push(self.refine(&dp, x0, x1, f0, tol));
            }
            x0 = x1;
            f0 = f1;
        }
        roots
    }

    fn refine(&self, dp: &Poly, mut a: f64, mut b: f64, mut fa: f64, tol: f64) -> f64 {
        while b - a > tol {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            let fm = self.eval(m);
            if fm == 0.0 {
                return m;
            }
            if fm.signum() == fa.signum() {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        let mid = 0.5 * (a + b);
        let slope = dp.eval(mid);
        if slope != 0.0 && slope.is_finite() {
            let polished = mid - self.eval(mid) / slope;
            if polished >= a && polished <= b && self.eval(polished).abs() <= self.eval(mid).abs() {
                return polished;
            }
        }
        mid
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.0.len().max(rhs.0.len());
        Poly::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&0.0) + rhs.0.get(i).unwrap_or(&0.0))
                .collect::<Vec<_>>(),
        )
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = vec![0.0; self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let a = Poly::new(vec![1.0, 1.0]); // 1 + x
        let b = Poly::new(vec![-1.0, 1.0]); // -1 + x
        assert_eq!((&a * &b).0, vec![-1.0, 0.0, 1.0]);
        assert_eq!((&a + &b).0, vec![0.0, 2.0]);
        assert_eq!((&a + &b.scale(-1.0)).0, vec![2.0]);
        assert_eq!(Poly::new(vec![3.0, 2.0, 1.0]).derivative().0, vec![2.0, 2.0]);
        assert_eq!(Poly::new(vec![3.0, 2.0, 1.0]).eval(2.0), 11.0);
    }

    #[test]
    fn finds_all_simple_roots_of_a_quintic() {
        // (x-0.5)(x-1)(x-2)(x-2.001)(x+3)
        let mut p = Poly::new(vec![1.0]);
        for r in [0.5, 1.0, 2.0, 2.001, -3.0] {
            p = &p * &Poly::new(vec![-r, 1.0]);
        }
        let roots = p.bracketed_roots(0.0, 4.0, 10_000, 1e-12);
        assert_eq!(roots.len(), 4);
        for (got, want) in roots.iter().zip([0.5, 1.0, 2.0, 2.001]) {
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
    }

    #[test]
    fn double_root_without_sign_change_is_skipped() {
        let p = Poly::new(vec![1.0, -2.0, 1.0]); // (x-1)^2
        assert!(p.bracketed_roots(0.0, 3.0, 7, 1e-12).is_empty());
    }
}
