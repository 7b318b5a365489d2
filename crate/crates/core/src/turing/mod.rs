//! Linear stability of the homogeneous state against spatial modes.

mod diagnostic;
mod dispersion;
mod region;
mod thresholds;

pub use diagnostic::{cubic_minimum, turing_check, CubicMinimum, TuringDiagnostic, Verdict};
pub use dispersion::{dispersion, dispersion_curve, rho_at, DispersionSample};
pub use region::{region_scan, Axis, Cell, CellState, HopfCrossing, RegionMap, HOPF_TOL};
pub use thresholds::{nonexistence_thresholds, DomainSpectrum, NonexistenceReport};

use std::io::{self, Write};

/// `k,rho1,rho2,rho3,phi` rows.
pub fn write_dispersion_csv<W: Write>(out: &mut W, samples: &[DispersionSample]) -> io::Result<()> {
    writeln!(out, "k,rho1,rho2,rho3,phi")?;
    for s in samples {
        writeln!(out, "{:e},{:e},{:e},{:e},{:e}", s.k, s.rho1, s.rho2, s.rho3, s.phi)?;
    }
    Ok(())
}

/// `p1,p2,verdict` rows, axis 1 outer.
pub fn write_region_csv<W: Write>(out: &mut W, map: &RegionMap) -> io::Result<()> {
    writeln!(out, "p1,p2,verdict")?;
    for (a, b, cell) in map.iter() {
        writeln!(out, "{a:e},{b:e},{}", cell.state)?;
    }
    Ok(())
}

/// Key-value sidecar naming the axes and the cell states.
pub fn write_region_legend<W: Write>(out: &mut W, map: &RegionMap) -> io::Result<()> {
    writeln!(out, "p1 = {}", map.axis1.name)?;
    writeln!(out, "p2 = {}", map.axis2.name)?;
    writeln!(out, "n1 = {}", map.axis1.values.len())?;
    writeln!(out, "n2 = {}", map.axis2.values.len())?;
    for v in Verdict::ALL {
        writeln!(out, "count.{v} = {}", map.count(CellState::Classified(v)))?;
    }
    writeln!(out, "count.infeasible = {}", map.count(CellState::Infeasible))?;
    writeln!(out, "planar_stable = stable at k=0 and for every k>0")?;
    writeln!(out, "turing = stable at k=0, unstable for a band of k>0")?;
    writeln!(out, "hopf_unstable = unstable at k=0 (non-Turing)")?;
    writeln!(out, "stable_everywhere = planar stable and globally stable")?;
    writeln!(out, "infeasible = no positive equilibrium")?;
    writeln!(out, "hopf_crossings = {}", map.hopf.len())?;
    for (n, h) in map.hopf.iter().enumerate() {
        let loc = h.location.map_or_else(|| "nan".to_string(), |x| format!("{x:e}"));
        let axis = if h.axis == 1 { &map.axis1.name } else { &map.axis2.name };
        writeln!(out, "hopf.{n} = {axis}:{loc}")?;
    }
    Ok(())
}
