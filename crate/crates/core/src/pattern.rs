//! Stationarity and pattern labelling of simulation snapshots.

use std::fmt;
use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::pde::{FieldGrid, FIELD_NAMES};
use crate::turing::Verdict;

/// Guards the relative distance against an all-zero reference field.
pub const NORM_EPS: f64 = 1e-30;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifySettings {
    /// Relative L² change below which two snapshots count as the same.
    pub stationary_threshold: f64,
    /// Spatial amplitude below which a field counts as flat.
    pub homogeneous_amplitude: f64,
    /// Minimum separation of the two compared snapshots.
    pub min_gap: f64,
}

impl Default for ClassifySettings {
    fn default() -> Self {
        Self { stationary_threshold: 1e-2, homogeneous_amplitude: 1e-6, min_gap: 100.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PatternLabel {
    Turing,
    StationaryNonTuring,
    NonStationaryNonTuring,
    Homogeneous,
}

impl PatternLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            PatternLabel::Turing => "turing",
            PatternLabel::StationaryNonTuring => "stationary_non_turing",
            PatternLabel::NonStationaryNonTuring => "non_stationary_non_turing",
            PatternLabel::Homogeneous => "homogeneous",
        }
    }
}

impl fmt::Display for PatternLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// ‖a − b‖₂ / max(‖a‖₂, ε) for each of u, v, w.
pub fn snapshot_distance(a: &FieldGrid, b: &FieldGrid) -> Result<[f64; 3]> {
    if !a.same_shape(b) {
        return Err(Error::GridMismatch(format!(
            "{}x{} vs {}x{}",
            a.nx, a.ny, b.nx, b.ny
        )));
    }
    let fa = a.fields();
    let fb = b.fields();
    Ok([0, 1, 2].map(|k| {
        let (diff, norm) = fa[k]
            .iter()
            .zip(fb[k])
            .fold((0.0, 0.0), |(d, n), (x, y)| (d + (x - y) * (x - y), n + x * x));
        diff.sqrt() / norm.sqrt().max(NORM_EPS)
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairDistance {
    pub t_a: f64,
    pub t_b: f64,
    pub distance: [f64; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatternReport {
    /// Distances between consecutive snapshots; the last entry is the one
    /// used for the stationarity decision.
    pub distances: Vec<PairDistance>,
    pub stationary: bool,
    /// (time, max − min per field) for every snapshot.
    pub amplitudes: Vec<(f64, [f64; 3])>,
    pub verdict: Verdict,
    pub label: PatternLabel,
    pub settings: ClassifySettings,
}

impl PatternReport {
    pub fn final_distance(&self) -> [f64; 3] {
        self.distances.last().map_or([0.0; 3], |d| d.distance)
    }

    /// `t_a,t_b,field,distance` rows.
    pub fn write_distances_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "t_a,t_b,field,distance")?;
        for d in &self.distances {
            for (k, name) in FIELD_NAMES.iter().enumerate() {
                writeln!(out, "{},{},{name},{:e}", d.t_a, d.t_b, d.distance[k])?;
            }
        }
        Ok(())
    }
}

/// Labels a snapshot history (ascending in time) given the linear verdict
/// at its equilibrium.
pub fn classify(history: &[FieldGrid], verdict: Verdict, settings: &ClassifySettings) -> Result<PatternReport> {
    if history.len() < 2 {
        return Err(Error::InsufficientSnapshots { min_gap: settings.min_gap });
    }
    if history.windows(2).any(|w| !(w[1].time > w[0].time)) {
        return Err(Error::InvalidSchedule("snapshots must be in increasing time order".into()));
    }
    let (prev, last) = (&history[history.len() - 2], &history[history.len() - 1]);
    if last.time - prev.time < settings.min_gap {
        return Err(Error::InsufficientSnapshots { min_gap: settings.min_gap });
    }
    let distances = history
        .windows(2)
        .map(|w| Ok(PairDistance { t_a: w[0].time, t_b: w[1].time, distance: snapshot_distance(&w[0], &w[1])? }))
        .collect::<Result<Vec<_>>>()?;
    let amplitudes: Vec<(f64, [f64; 3])> = history.iter().map(|g| (g.time, g.amplitude())).collect();

    let final_dist = distances.last().map_or([f64::INFINITY; 3], |d| d.distance);
    let stationary = final_dist.iter().all(|&d| d < settings.stationary_threshold);
    let flat = last.amplitude().iter().all(|&a| a < settings.homogeneous_amplitude);
    let label = if flat {
        PatternLabel::Homogeneous
    } else if !stationary {
        PatternLabel::NonStationaryNonTuring
    } else if verdict == Verdict::Turing {
        PatternLabel::Turing
    } else {
        PatternLabel::StationaryNonTuring
    };
    Ok(PatternReport { distances, stationary, amplitudes, verdict, label, settings: *settings })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(values: [f64; 9], time: f64) -> FieldGrid {
        FieldGrid { nx: 3, ny: 3, u: values.to_vec(), v: values.to_vec(), w: values.to_vec(), time }
    }

    #[test]
    fn identical_is_zero() {
        let a = grid([1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0], 0.0);
        assert_eq!(snapshot_distance(&a, &a).unwrap(), [0.0; 3]);
    }

    #[test]
    fn constant_shift_by_hand() {
        // a has unit norm: one entry of 1. b = a + 1 everywhere → ‖a − b‖ = 3.
        let mut v = [0.0; 9];
        v[4] = 1.0;
        let a = grid(v, 0.0);
        let b = grid(v.map(|x| x + 1.0), 1.0);
        let d = snapshot_distance(&a, &b).unwrap();
        assert!(d.iter().all(|&x| (x - 3.0).abs() < 1e-15));
    }

    #[test]
    fn zero_reference_uses_epsilon() {
        let a = grid([0.0; 9], 0.0);
        let b = grid([1e-40; 9], 0.0);
        let d = snapshot_distance(&a, &b).unwrap()[0];
        assert!((d - 3e-40 / NORM_EPS).abs() < 1e-20);
    }

    #[test]
    fn mismatch_rejected() {
        let a = grid([0.0; 9], 0.0);
        let b = FieldGrid::constant(2, 2, [0.0; 3]);
        assert!(matches!(snapshot_distance(&a, &b), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn constant_history_is_homogeneous() {
        let a = FieldGrid { time: 0.0, ..FieldGrid::constant(4, 4, [8.0, 19.0, 6.7]) };
        let b = FieldGrid { time: 200.0, ..a.clone() };
        let rep = classify(&[a, b], Verdict::Turing, &ClassifySettings::default()).unwrap();
        assert_eq!(rep.label, PatternLabel::Homogeneous);
        assert!(rep.stationary);
    }

    #[test]
    fn labels_follow_verdict_and_stationarity() {
        let v = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0];
        let a = grid(v, 800.0);
        let b = grid(v.map(|x| x * 1.001), 1000.0);
        let c = grid(v.map(|x| x * 1.5), 1000.0);
        let s = ClassifySettings::default();
        assert_eq!(classify(&[a.clone(), b.clone()], Verdict::Turing, &s).unwrap().label, PatternLabel::Turing);
        assert_eq!(
            classify(&[a.clone(), b], Verdict::HopfUnstable, &s).unwrap().label,
            PatternLabel::StationaryNonTuring
        );
        assert_eq!(
            classify(&[a, c], Verdict::Turing, &s).unwrap().label,
            PatternLabel::NonStationaryNonTuring
        );
    }

    #[test]
    fn needs_two_spaced_snapshots() {
        let a = grid([1.0; 9], 0.0);
        let s = ClassifySettings::default();
        assert!(classify(std::slice::from_ref(&a), Verdict::Turing, &s).is_err());
        let b = grid([1.0; 9], 50.0);
        assert!(matches!(
            classify(&[a, b], Verdict::Turing, &s),
            Err(Error::InsufficientSnapshots { .. })
        ));
    }

    #[test]
    fn distances_csv() {
        let a = grid([1.0; 9], 0.0);
        let b = grid([1.0; 9], 100.0);
        let rep = classify(&[a, b], Verdict::PlanarStable, &ClassifySettings::default()).unwrap();
        let mut buf = Vec::new();
        rep.write_distances_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next(), Some("t_a,t_b,field,distance"));
        assert_eq!(text.lines().count(), 4);
        assert!(text.contains("0,100,u,0e0"));
    }
}
