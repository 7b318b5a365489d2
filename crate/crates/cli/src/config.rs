//! INI run configuration: `[params]`, `[grid]`, `[schedule]`, `[analysis]`
//! and `[output]`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use ecoepi_core::params::{ModelParams, PARAM_NAMES};
use ecoepi_core::pde::{GridSpec, SnapshotSchedule};
use ini::Ini;

use crate::error::CliError;

const SECTIONS: [&str; 5] = ["params", "grid", "schedule", "analysis", "output"];
const GRID_KEYS: [&str; 3] = ["length", "h", "dt"];
const SCHEDULE_KEYS: [&str; 3] = ["times", "t_end", "interval"];
const OUTPUT_KEYS: [&str; 2] = ["dir", "run"];
const ANALYSIS_KEYS: [&str; 34] = [
    "equilibrium",
    "k_min",
    "k_max",
    "k_points",
    "init",
    "dt",
    "t_end",
    "decimation",
    "transient",
    "total",
    "renorm_interval",
    "drift_tolerance",
    "sweep_parameter",
    "sweep_min",
    "sweep_max",
    "sweep_points",
    "window",
    "axis1",
    "axis1_min",
    "axis1_max",
    "axis1_points",
    "axis1_scale",
    "axis2",
    "axis2_min",
    "axis2_max",
    "axis2_points",
    "axis2_scale",
    "threshold",
    "homogeneous_amplitude",
    "min_gap",
    "snapshots",
    "perturb",
    "amplitude",
    "wavenumber",
];

#[derive(Debug, Clone, PartialEq)]
pub struct GridSection {
    pub length: f64,
    pub h: f64,
    pub dt: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        Self { length: std::f64::consts::PI, h: 0.01, dt: 0.01 }
    }
}

impl GridSection {
    pub fn spec(&self) -> Result<GridSpec, CliError> {
        Ok(GridSpec::new(self.length, self.h, self.dt)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScheduleSection {
    Times(Vec<f64>),
    Every { t_end: f64, interval: f64 },
}

impl ScheduleSection {
    pub fn build(&self, dt: f64) -> Result<SnapshotSchedule, CliError> {
        Ok(match self {
            ScheduleSection::Times(t) => SnapshotSchedule::new(t.clone(), dt)?,
            ScheduleSection::Every { t_end, interval } => SnapshotSchedule::every(*interval, *t_end, dt)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub grid: GridSection,
    pub schedule: Option<ScheduleSection>,
    pub analysis: BTreeMap<String, String>,
    pub out_dir: Option<PathBuf>,
    pub run: String,
}

fn parse_f64(section: &str, key: &str, value: &str) -> Result<f64, CliError> {
    value
        .trim()
        .parse::<f64>()
        .map_err(|_| CliError::Validation(format!("[{section}] {key}: `{value}` is not a number")))
}

pub fn parse_list(section: &str, key: &str, value: &str) -> Result<Vec<f64>, CliError> {
    value
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_f64(section, key, s))
        .collect()
}

fn check_keys<'a>(
    section: &str,
    keys: impl Iterator<Item = &'a str>,
    allowed: &[&str],
) -> Result<(), CliError> {
    for key in keys {
        if !allowed.contains(&key) {
            return Err(CliError::Validation(format!("[{section}] unknown key `{key}`")));
        }
    }
    Ok(())
}

impl RunConfig {
    /// Configuration with the given parameters and defaults everywhere else.
    pub fn from_params(params: ModelParams, run: &str) -> Self {
        Self {
            params,
            grid: GridSection::default(),
            schedule: None,
            analysis: BTreeMap::new(),
            out_dir: None,
            run: run.to_string(),
        }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let ini = Ini::load_from_str(text).map_err(|e| CliError::Validation(format!("config syntax: {e}")))?;
        for (name, props) in ini.iter() {
            match name {
                Some(s) if SECTIONS.contains(&s) => {}
                Some(s) => return Err(CliError::Validation(format!("unknown section [{s}]"))),
                None if props.is_empty() => {}
                None => {
                    let key = props.iter().next().map(|(k, _)| k).unwrap_or_default();
                    return Err(CliError::Validation(format!("key `{key}` outside any section")));
                }
            }
        }
        let empty = ini::Properties::new();
        let section = |name: &str| ini.section(Some(name)).unwrap_or(&empty);

        let params_sec = section("params");
        check_keys("params", params_sec.iter().map(|(k, _)| k), &PARAM_NAMES)?;
        let mut params = ModelParams::reference();
        for name in PARAM_NAMES {
            let raw = params_sec
                .get(name)
                .ok_or_else(|| CliError::Validation(format!("[params] missing key `{name}`")))?;
            params.set(name, parse_f64("params", name, raw)?);
        }
        params.validate()?;

        let grid_sec = section("grid");
        check_keys("grid", grid_sec.iter().map(|(k, _)| k), &GRID_KEYS)?;
        let mut grid = GridSection::default();
        for (key, slot) in [("length", &mut grid.length), ("h", &mut grid.h), ("dt", &mut grid.dt)] {
            if let Some(v) = grid_sec.get(key) {
                *slot = parse_f64("grid", key, v)?;
            }
        }
        grid.spec()?;

        let sched_sec = section("schedule");
        check_keys("schedule", sched_sec.iter().map(|(k, _)| k), &SCHEDULE_KEYS)?;
        let schedule = match (sched_sec.get("times"), sched_sec.get("t_end"), sched_sec.get("interval")) {
            (None, None, None) => None,
            (Some(t), None, None) => Some(ScheduleSection::Times(parse_list("schedule", "times", t)?)),
            (None, Some(end), Some(every)) => Some(ScheduleSection::Every {
                t_end: parse_f64("schedule", "t_end", end)?,
                interval: parse_f64("schedule", "interval", every)?,
            }),
            _ => {
                return Err(CliError::Validation(
                    "[schedule] give either `times` or both `t_end` and `interval`".into(),
                ))
            }
        };
        if let Some(s) = &schedule {
            s.build(grid.dt)?;
        }

        let analysis_sec = section("analysis");
        check_keys("analysis", analysis_sec.iter().map(|(k, _)| k), &ANALYSIS_KEYS)?;
        let analysis = analysis_sec.iter().map(|(k, v)| (k.to_string(), v.trim().to_string())).collect();

        let out_sec = section("output");
        check_keys("output", out_sec.iter().map(|(k, _)| k), &OUTPUT_KEYS)?;
        let run = out_sec.get("run").unwrap_or("run").trim().to_string();
        if run.is_empty() || run.contains(['/', '\\']) {
            return Err(CliError::Validation(format!("[output] run: `{run}` is not a plain name")));
        }
        let out_dir = out_sec.get("dir").map(|d| PathBuf::from(d.trim()));

        Ok(Self { params, grid, schedule, analysis, out_dir, run })
    }

    /// Canonical INI text; parsing it gives back an equal configuration.
    pub fn to_ini_string(&self) -> String {
        let mut ini = Ini::new();
        for name in PARAM_NAMES {
            let v = self.params.get(name).unwrap_or(f64::NAN);
            ini.with_section(Some("params")).set(name, v.to_string());
        }
        ini.with_section(Some("grid"))
            .set("length", self.grid.length.to_string())
            .set("h", self.grid.h.to_string())
            .set("dt", self.grid.dt.to_string());
        match &self.schedule {
            Some(ScheduleSection::Times(t)) => {
                let list: Vec<String> = t.iter().map(f64::to_string).collect();
                ini.with_section(Some("schedule")).set("times", list.join(", "));
            }
            Some(ScheduleSection::Every { t_end, interval }) => {
                ini.with_section(Some("schedule"))
                    .set("t_end", t_end.to_string())
                    .set("interval", interval.to_string());
            }
            None => {}
        }
        for (k, v) in &self.analysis {
            ini.with_section(Some("analysis")).set(k.as_str(), v.as_str());
        }
        let mut out = ini.with_section(Some("output"));
        out.set("run", self.run.as_str());
        if let Some(dir) = &self.out_dir {
            out.set("dir", dir.to_string_lossy().into_owned());
        }
        let mut buf = Vec::new();
        ini.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ini output is utf-8")
    }

    pub fn has(&self, key: &str) -> bool {
        self.analysis.contains_key(key)
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64, CliError> {
        self.analysis.get(key).map_or(Ok(default), |v| parse_f64("analysis", key, v))
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize, CliError> {
        self.analysis.get(key).map_or(Ok(default), |v| {
            v.parse::<usize>()
                .map_err(|_| CliError::Validation(format!("[analysis] {key}: `{v}` is not a count")))
        })
    }

    pub fn str_or<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.analysis.get(key).map_or(default, String::as_str)
    }

    pub fn list(&self, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        self.analysis.get(key).map(|v| parse_list("analysis", key, v)).transpose()
    }
}
