//! Flat `key = value` text reports.

use std::fmt::{self, Display};

use crate::bounds::AprioriBounds;
use crate::equilibrium::Equilibrium;
use crate::pattern::PatternReport;
use crate::pde::FIELD_NAMES;
use crate::stability::{ConditionReport, TemporalStabilityReport};
use crate::temporal::LyapunovSpectrum;
use crate::turing::{NonexistenceReport, TuringDiagnostic};

/// Ordered key-value lines. Floats are written with 17 significant digits
/// so that they read back bit-for-bit.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KeyValues {
    entries: Vec<(String, String)>,
}

pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

impl KeyValues {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn text(&mut self, key: impl Into<String>, value: impl Display) -> &mut Self {
        self.entries.push((key.into(), value.to_string()));
        self
    }

    pub fn num(&mut self, key: impl Into<String>, value: f64) -> &mut Self {
        self.entries.push((key.into(), fmt_f64(value)));
        self
    }

    pub fn opt(&mut self, key: impl Into<String>, value: Option<f64>) -> &mut Self {
        match value {
            Some(v) => self.num(key, v),
            None => self.text(key, "undefined"),
        }
    }

    pub fn extend(&mut self, prefix: &str, other: &impl ToKeyValues) -> &mut Self {
        let mut inner = KeyValues::new();
        other.key_values(&mut inner);
        for (k, v) in inner.entries {
            self.entries.push((format!("{prefix}{k}"), v));
        }
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }
}

impl Display for KeyValues {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}

pub trait ToKeyValues {
    fn key_values(&self, kv: &mut KeyValues);

    fn to_key_values(&self) -> KeyValues {
        let mut kv = KeyValues::new();
        self.key_values(&mut kv);
        kv
    }
}

impl ToKeyValues for Equilibrium {
    fn key_values(&self, kv: &mut KeyValues) {
        kv.num("u_star", self.u_star)
            .num("v_star", self.v_star)
            .num("w_star", self.w_star)
            .num("residual_norm", self.residual_norm)
            .text("feasible", self.feasible);
    }
}

impl ToKeyValues for TemporalStabilityReport {
    fn key_values(&self, kv: &mut KeyValues) {
        let c = &self.constants;
        kv.num("a1", self.a1)
            .num("a2", self.a2)
            .num("a3", self.a3)
            .num("a1a2_minus_a3", self.hurwitz_product)
            .text("stable", self.stable)
            .num("A", c.a)
            .num("B", c.b)
            .num("C", c.c)
            .num("M1", c.m1)
            .num("M2", c.m2)
            .num("E1", c.e1)
            .num("D1", c.d1)
            .num("P1", c.p1);
    }
}

impl ToKeyValues for ConditionReport {
    fn key_values(&self, kv: &mut KeyValues) {
        for c in &self.conditions {
            let key = c.key;
            kv.num(format!("{key}.lhs"), c.lhs).num(format!("{key}.rhs"), c.rhs).text(
                format!("{key}.holds"),
                c.holds,
            );
        }
        kv.text("holds", self.holds);
    }
}

impl ToKeyValues for AprioriBounds {
    fn key_values(&self, kv: &mut KeyValues) {
        kv.num("u_max", self.u_max)
            .num("v_max", self.v_max)
            .num("w_max", self.w_max)
            .num("A", self.a)
            .num("B", self.b)
            .num("C", self.c)
            .text("valid", self.valid);
        if let Some(d) = &self.diagnostic {
            kv.text("diagnostic", d);
        }
    }
}

impl ToKeyValues for TuringDiagnostic {
    fn key_values(&self, kv: &mut KeyValues) {
        for (i, q) in self.q.iter().enumerate() {
            kv.num(format!("q{}", i + 1), *q);
        }
        for (i, r) in self.r.iter().enumerate() {
            kv.num(format!("r{}", i + 1), *r);
        }
        kv.opt("kd_sq", self.kd_sq)
            .opt("kf_sq", self.kf_sq)
            .opt("rho3_min", self.rho3_min)
            .opt("phi_min", self.phi_min)
            .num("rho1_0", self.planar[0])
            .num("rho2_0", self.planar[1])
            .num("rho3_0", self.planar[2])
            .num("phi_0", self.planar_phi())
            .text("planar_stable", self.planar_stable)
            .text("verdict", self.verdict);
    }
}

impl ToKeyValues for NonexistenceReport {
    fn key_values(&self, kv: &mut KeyValues) {
        kv.num("mu1", self.mu1)
            .num("w_prime", self.w_prime)
            .num("d1_star", self.d1_star)
            .num("d2_star", self.d2_star)
            .text("d1_exceeds", self.d1_exceeds)
            .text("d2_exceeds", self.d2_exceeds)
            .text("d3_threshold", "qualitative")
            .text("excluded", self.excluded);
    }
}

impl ToKeyValues for LyapunovSpectrum {
    fn key_values(&self, kv: &mut KeyValues) {
        for (i, l) in self.exponents.iter().enumerate() {
            kv.num(format!("lambda{}", i + 1), *l);
        }
        let signs: String = self
            .signs()
            .iter()
            .map(|s| match s {
                1 => '+',
                -1 => '-',
                _ => '0',
            })
            .collect();
        kv.text("signs", signs)
            .num("sum", self.sum())
            .num("mean_trace", self.mean_trace)
            .num("transient", self.transient_time)
            .num("total", self.total_time)
            .num("renorm_interval", self.renorm_interval)
            .num("tail_drift", self.tail_drift)
            .text("converged", self.converged);
    }
}

impl ToKeyValues for PatternReport {
    fn key_values(&self, kv: &mut KeyValues) {
        if let Some(d) = self.distances.last() {
            kv.num("t_a", d.t_a).num("t_b", d.t_b);
            for (k, f) in FIELD_NAMES.iter().enumerate() {
                kv.num(format!("distance.{f}"), d.distance[k]);
            }
        }
        if let Some((t, amp)) = self.amplitudes.last() {
            kv.num("amplitude.t", *t);
            for (k, f) in FIELD_NAMES.iter().enumerate() {
                kv.num(format!("amplitude.{f}"), amp[k]);
            }
        }
        kv.num("threshold", self.settings.stationary_threshold)
            .text("stationary", self.stationary)
            .text("verdict", self.verdict)
            .text("label", self.label);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 8.184374523e-7, -2.5e300, 0.0] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(fmt_f64(f64::NAN), "NaN");
    }

    #[test]
    fn prefixed_extension() {
        let eq = Equilibrium { u_star: 1.0, v_star: 2.0, w_star: 3.0, residual_norm: 0.0, feasible: true };
        let mut kv = KeyValues::new();
        kv.text("run", "x").extend("eq.", &eq);
        assert_eq!(kv.get("eq.v_star"), Some("2.0000000000000000e0"));
        assert!(kv.to_string().starts_with("run = x\neq.u_star = "));
    }
}
