use std::fmt;

use super::diagnostic::{diagnose, TuringDiagnostic, Verdict};
use crate::equilibrium::{find_equilibria, Equilibrium};
use crate::error::{Error, Result};
use crate::exec::{map_ordered, Execution};
use crate::jacobian::jacobian_at;
use crate::params::ModelParams;

/// Width below which a Hopf crossing bracket stops being bisected.
pub const HOPF_TOL: f64 = 1e-6;

/// One scanned parameter and its grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        let name = name.into();
        if ModelParams::reference().get(&name).is_none() {
            return Err(Error::InvalidSettings(format!("unknown scan parameter `{name}`")));
        }
        if values.is_empty() {
            return Err(Error::InvalidSettings(format!("axis `{name}` has an empty grid")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSettings(format!("axis `{name}` has non-finite values")));
        }
        Ok(Self { name, values })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellState {
    Classified(Verdict),
    /// No feasible equilibrium at this parameter pair.
    Infeasible,
}

impl CellState {
    pub fn as_str(self) -> &'static str {
        match self {
            CellState::Classified(v) => v.as_str(),
            CellState::Infeasible => "infeasible",
        }
    }

    pub fn verdict(self) -> Option<Verdict> {
        match self {
            CellState::Classified(v) => Some(v),
            CellState::Infeasible => None,
        }
    }
}

impl fmt::Display for CellState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub state: CellState,
    /// φ(0) at the cell's equilibrium.
    pub planar_phi: Option<f64>,
    /// More than one feasible equilibrium existed; the one with the
    /// smallest prey density was classified.
    pub multiple_equilibria: bool,
}

/// Adjacent pair of cells across which φ(0) changes sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopfCrossing {
    /// Grid indices (i1, i2) of the stable and unstable cell.
    pub stable: (usize, usize),
    pub unstable: (usize, usize),
    /// 1 or 2: the axis along which the neighbours differ.
    pub axis: u8,
    /// Location of φ(0) = 0 on that axis, if bisection succeeded.
    pub location: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionMap {
    pub axis1: Axis,
    pub axis2: Axis,
    /// Row-major: index `i1 * axis2.len() + i2`.
    pub cells: Vec<Cell>,
    pub hopf: Vec<HopfCrossing>,
}

impl RegionMap {
    pub fn cell(&self, i1: usize, i2: usize) -> &Cell {
        &self.cells[i1 * self.axis2.values.len() + i2]
    }

    pub fn count(&self, state: CellState) -> usize {
        self.cells.iter().filter(|c| c.state == state).count()
    }

    pub fn contains(&self, verdict: Verdict) -> bool {
        self.count(CellState::Classified(verdict)) > 0
    }

    /// `(value1, value2, cell)` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64, &Cell)> + '_ {
        let n2 = self.axis2.values.len();
        self.cells
            .iter()
            .enumerate()
            .map(move |(idx, c)| (self.axis1.values[idx / n2], self.axis2.values[idx % n2], c))
    }
}

fn apply(base: &ModelParams, name: &str, value: f64) -> ModelParams {
    let mut p = *base;
    p.set(name, value);
    p
}

/// Smallest-u feasible equilibrium, and whether there were several.
fn select_equilibrium(p: &ModelParams) -> Option<(Equilibrium, bool)> {
    let eqs = find_equilibria(p).ok()?;
    let mut feasible = eqs.into_iter().filter(|e| e.feasible);
    let first = feasible.next()?;
    Some((first, feasible.next().is_some()))
}

fn evaluate(p: &ModelParams) -> Option<(Equilibrium, TuringDiagnostic, bool)> {
    if p.validate().is_err() {
        return None;
    }
    let (eq, multiple) = select_equilibrium(p)?;
    let j = jacobian_at(eq.state(), p);
    Some((eq, diagnose(&eq, p, &j), multiple))
}

fn classify_cell(p: &ModelParams) -> Cell {
    match evaluate(p) {
        Some((_, diag, multiple)) => Cell {
            state: CellState::Classified(diag.verdict),
            planar_phi: Some(diag.planar_phi()),
            multiple_equilibria: multiple,
        },
        None => Cell { state: CellState::Infeasible, planar_phi: None, multiple_equilibria: false },
    }
}

fn planar_phi(p: &ModelParams) -> Option<f64> {
    evaluate(p).map(|(_, d, _)| d.planar_phi())
}

/// φ(0) = 0 between `a` (φ > 0) and `b` (φ ≤ 0) along one parameter.
fn bisect_hopf(base: &ModelParams, name: &str, mut stable: f64, mut unstable: f64) -> Option<f64> {
    for _ in 0..200 {
        if (unstable - stable).abs() <= HOPF_TOL {
            break;
        }
        let mid = 0.5 * (stable + unstable);
        let phi = planar_phi(&apply(base, name, mid))?;
        if phi > 0.0 {
            stable = mid;
        } else {
            unstable = mid;
        }
    }
    Some(0.5 * (stable + unstable))
}

fn is_hopf_pair(a: &Cell, b: &Cell) -> bool {
    // the stable side must be planar stable, so ρ1(0), ρ3(0) > 0 there
    let stable_side = |c: &Cell| {
        matches!(
            c.state,
            CellState::Classified(Verdict::PlanarStable | Verdict::Turing | Verdict::StableEverywhere)
        )
    };
    match (a.planar_phi, b.planar_phi) {
        (Some(pa), Some(pb)) if (pa > 0.0) != (pb > 0.0) => stable_side(if pa > 0.0 { a } else { b }),
        _ => false,
    }
}

/// Classifies every cell of a two-parameter grid and locates the Hopf
/// line, where φ(0) changes sign between neighbouring cells.
pub fn region_scan(base: &ModelParams, axis1: Axis, axis2: Axis, exec: Execution) -> Result<RegionMap> {
    if axis1.name == axis2.name {
        return Err(Error::InvalidSettings("scan axes must differ".into()));
    }
    let (n1, n2) = (axis1.values.len(), axis2.values.len());
    let indices: Vec<(usize, usize)> = (0..n1).flat_map(|i| (0..n2).map(move |j| (i, j))).collect();
    let cells = map_ordered(exec, &indices, |&(i, j)| {
        let p = apply(&apply(base, &axis1.name, axis1.values[i]), &axis2.name, axis2.values[j]);
        classify_cell(&p)
    });

    let at = |i: usize, j: usize| &cells[i * n2 + j];
    let mut pairs = Vec::new();
    for i in 0..n1 {
        for j in 0..n2 {
            if i + 1 < n1 && is_hopf_pair(at(i, j), at(i + 1, j)) {
                pairs.push(((i, j), (i + 1, j), 1u8));
            }
            if j + 1 < n2 && is_hopf_pair(at(i, j), at(i, j + 1)) {
                pairs.push(((i, j), (i, j + 1), 2u8));
            }
        }
    }
    let hopf = map_ordered(exec, &pairs, |&(a, b, axis)| {
        let (stable, unstable) = if at(a.0, a.1).planar_phi.is_some_and(|p| p > 0.0) { (a, b) } else { (b, a) };
        let location = if axis == 1 {
            let fixed = apply(base, &axis2.name, axis2.values[a.1]);
            bisect_hopf(&fixed, &axis1.name, axis1.values[stable.0], axis1.values[unstable.0])
        } else {
            let fixed = apply(base, &axis1.name, axis1.values[a.0]);
            bisect_hopf(&fixed, &axis2.name, axis2.values[stable.1], axis2.values[unstable.1])
        };
        HopfCrossing { stable, unstable, axis, location }
    });
    Ok(RegionMap { axis1, axis2, cells, hopf })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::turing::turing_check;

    fn table3() -> ModelParams {
        ModelParams::reference().with_diffusion(1e-5, 1e-3, 1e-10)
    }

    #[test]
    fn single_cell_matches_turing_check() {
        let base = table3();
        let map = region_scan(
            &base,
            Axis::new("sigma", vec![0.026]).unwrap(),
            Axis::new("d1", vec![1e-5]).unwrap(),
            Execution::Serial,
        )
        .unwrap();
        let p = base.with_sigma(0.026);
        let eq = find_equilibria(&p).unwrap()[0];
        let want = turing_check(&eq, &p).unwrap().verdict;
        assert_eq!(map.cells.len(), 1);
        assert_eq!(map.cells[0].state, CellState::Classified(want));
        assert_eq!(want, Verdict::Turing);
    }

    #[test]
    fn non_turing_cell() {
        let base = ModelParams::reference().with_diffusion(1e-6, 1e-6, 1e-10);
        let map = region_scan(
            &base,
            Axis::new("sigma", vec![0.005]).unwrap(),
            Axis::new("d1", vec![1e-6]).unwrap(),
            Execution::Serial,
        )
        .unwrap();
        assert_eq!(map.cells[0].state, CellState::Classified(Verdict::HopfUnstable));
    }

    #[test]
    fn hopf_line_is_bracketed() {
        let sig = crate::sampling::linspace(0.005, 0.026, 8);
        let map = region_scan(
            &table3(),
            Axis::new("sigma", sig).unwrap(),
            Axis::new("d1", vec![1e-6, 1e-5]).unwrap(),
            Execution::Parallel,
        )
        .unwrap();
        assert!(!map.hopf.is_empty());
        for h in &map.hopf {
            let x = h.location.unwrap();
            let p = table3().with_sigma(x);
            let eq = find_equilibria(&p).unwrap()[0];
            let t = turing_check(&eq, &p).unwrap();
            assert!(t.planar_phi().abs() < 1e-5, "{}", t.planar_phi());
        }
    }

    #[test]
    fn lambda_zero_is_infeasible() {
        let map = region_scan(
            &table3(),
            Axis::new("lambda", vec![0.0]).unwrap(),
            Axis::new("sigma", vec![0.005]).unwrap(),
            Execution::Serial,
        )
        .unwrap();
        assert_eq!(map.cells[0].state, CellState::Infeasible);
    }

    #[test]
    fn rejects_bad_axes() {
        assert!(Axis::new("nope", vec![1.0]).is_err());
        assert!(Axis::new("sigma", vec![]).is_err());
    }
}
