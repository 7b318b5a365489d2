use std::fs;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use ecoepi_core::bounds::a_priori_bounds;
use ecoepi_core::equilibrium::{find_equilibria, Equilibrium};
use ecoepi_core::params::ModelParams;
use ecoepi_core::pattern::{classify, ClassifySettings, PatternReport};
use ecoepi_core::pde::io::{load_snapshots, write_snapshot};
use ecoepi_core::pde::{perturbed_state, simulate_from, FieldGrid, GridSpec, Perturbation, SnapshotSchedule};
use ecoepi_core::presets::{preset, Preset, ODE_INIT};
use ecoepi_core::report::{fmt_f64, KeyValues, ToKeyValues};
use ecoepi_core::sampling::{linspace, logspace};
use ecoepi_core::stability::{check_global_stability_conditions, check_local_stability_conditions, temporal_stability};
use ecoepi_core::temporal::{
    bifurcation_sweep, integrate_rk4, lyapunov_spectrum, LyapunovSettings, SweepParameter, SweepSettings,
};
use ecoepi_core::turing::{
    dispersion, dispersion_curve, nonexistence_thresholds, region_scan, turing_check, write_dispersion_csv,
    write_region_csv, write_region_legend, Axis, Verdict,
};
use ecoepi_core::Execution;

use crate::config::RunConfig;
use crate::error::CliError;

/// Where a command writes, and what it has written so far.
pub struct Ctx {
    pub out: PathBuf,
    pub exec: Execution,
    pub coarse: bool,
    pub files: Vec<PathBuf>,
}

impl Ctx {
    pub fn new(out: PathBuf, exec: Execution, coarse: bool) -> Result<Self, CliError> {
        fs::create_dir_all(&out).map_err(CliError::io(&out))?;
        Ok(Self { out, exec, coarse, files: Vec::new() })
    }

    fn write_with(
        &mut self,
        name: &str,
        f: impl FnOnce(&mut BufWriter<fs::File>) -> std::io::Result<()>,
    ) -> Result<(), CliError> {
        let path = self.out.join(name);
        let file = fs::File::create(&path).map_err(CliError::io(&path))?;
        let mut w = BufWriter::new(file);
        f(&mut w).and_then(|_| w.flush()).map_err(CliError::io(&path))?;
        self.files.push(path);
        Ok(())
    }

    /// Writes a key-value report to `name` and echoes it to stdout.
    fn report(&mut self, name: &str, kv: &KeyValues) -> Result<(), CliError> {
        print!("{kv}");
        self.write_with(name, |w| write!(w, "{kv}"))
    }

    fn grid(&self, cfg: &RunConfig) -> Result<GridSpec, CliError> {
        if self.coarse {
            Ok(GridSpec::new(cfg.grid.length, 0.02, cfg.grid.dt)?)
        } else {
            cfg.grid.spec()
        }
    }
}

fn select_equilibrium(cfg: &RunConfig) -> Result<Equilibrium, CliError> {
    let eqs = find_equilibria(&cfg.params)?;
    match (eqs.len(), cfg.has("equilibrium")) {
        (0, _) => Err(CliError::Validation("no feasible equilibrium for these parameters".into())),
        (1, false) => Ok(eqs[0]),
        (n, false) => Err(CliError::Validation(format!(
            "{n} feasible equilibria; choose one with [analysis] equilibrium = <index>"
        ))),
        (n, true) => {
            let i = cfg.usize_or("equilibrium", 0)?;
            eqs.get(i).copied().ok_or_else(|| {
                CliError::Validation(format!("[analysis] equilibrium = {i} but only {n} exist"))
            })
        }
    }
}

fn init_state(cfg: &RunConfig) -> Result<[f64; 3], CliError> {
    match cfg.list("init")? {
        None => Ok(ODE_INIT),
        Some(v) if v.len() == 3 => Ok([v[0], v[1], v[2]]),
        Some(v) => Err(CliError::Validation(format!("[analysis] init needs 3 values, got {}", v.len()))),
    }
}

pub fn equilibria(ctx: &mut Ctx, cfg: &RunConfig) -> Result<(), CliError> {
    let eqs = find_equilibria(&cfg.params)?;
    let mut kv = KeyValues::new();
    kv.text("count", eqs.len());
    for (i, eq) in eqs.iter().enumerate() {
        kv.extend(&format!("eq.{i}."), eq);
    }
    ctx.report("equilibria.txt", &kv)
}

pub fn stability(ctx: &mut Ctx, cfg: &RunConfig) -> Result<(), CliError> {
    let eq = select_equilibrium(cfg)?;
    let mut kv = KeyValues::new();
    kv.extend("equilibrium.", &eq);
    kv.extend("temporal.", &temporal_stability(&eq, &cfg.params)?);
    kv.extend("local.", &check_local_stability_conditions(&eq, &cfg.params)?);
    match a_priori_bounds(&cfg.params) {
        Ok(b) if b.valid => {
            kv.num("global.w_prime", b.w_max);
            kv.extend("global.", &check_global_stability_conditions(&eq, &cfg.params, b.w_max)?);
        }
        Ok(b) => {
            kv.text("global.skipped", b.diagnostic.unwrap_or_else(|| "invalid bounds".into()));
        }
        Err(e) => {
            kv.text("global.skipped", e);
        }
    }
    ctx.report("stability.txt", &kv)
}

pub fn bounds(ctx: &mut Ctx, cfg: &RunConfig) -> Result<(), CliError> {
    let b = a_priori_bounds(&cfg.params)?;
    let mut kv = KeyValues::new();
    kv.extend("bounds.", &b);
    if b.valid {
        kv.extend("nonexistence.", &nonexistence_thresholds(&cfg.params, cfg.grid.length)?);
    }
    ctx.report("bounds.txt", &kv)
}

pub fn dispersion_cmd(ctx: &mut Ctx, cfg: &RunConfig) -> Result<(), CliError> {
    let eq = select_equilibrium(cfg)?;
    let ks = linspace(cfg.f64_or("k_min", 0.0)?, cfg.f64_or("k_max", 200.0)?, cfg.usize_or("k_points", 401)?);
    if ks.iter().any(|k| !(*k >= 0.0)) {
        return Err(CliError::Validation("wave numbers must be non-negative".into()));
    }
    let samples = dispersion_curve(&eq, &cfg.params, &ks)?;
    ctx.write_with("dispersion.csv", |w| write_dispersion_csv(w, &samples))?;
    println!("wrote {} samples", samples.len());
    Ok(())
}

pub fn turing(ctx: &mut Ctx, cfg: &RunConfig) -> Result<(), CliError> {
    let eq = select_equilibrium(cfg)?;
    let mut kv = KeyValues::new();
    kv.extend("equilibrium.", &eq);
    kv.extend("", &turing_check(&eq, &cfg.params)?);
    ctx.report("turing.txt", &kv)
}

fn axis(cfg: &RunConfig, which: &str, name: &str, lo: f64, hi: f64, n: usize, scale: &str) -> Result<Axis, CliError> {
    let name = cfg.str_or(which, name).to_string();
    let lo = cfg.f64_or(&format!("{which}_min"), lo)?;
    let hi = cfg.f64_or(&format!("{which}_max"), hi)?;
    let n = cfg.usize_or(&format!("{which}_points"), n)?;
    let values = match cfg.str_or(&format!("{which}_scale"), scale) {
        "linear" => linspace(lo, hi, n),
        "log" if lo > 0.0 && hi > 0.0 => logspace(lo, hi, n),
        "log" => return Err(CliError::Validation(format!("{which}: log scale needs positive bounds"))),
        other => return Err(CliError::Validation(format!("{which}_scale must be linear or log, got `{other}`"))),
    };
    Ok(Axis::new(name, values)?)
}

pub fn region(ctx: &mut Ctx, cfg: &RunConfig) -> Result<(), CliError> {
    let a1 = axis(cfg, "axis1", "sigma", 0.001, 0.05, 50, "linear")?;
    let a2 = axis(cfg, "axis2", "d1", 1e-7, 1e-4, 50, "log")?;
    let map = region_scan(&cfg.params, a1, a2, ctx.exec)?;
    ctx.write_with("region.csv", |w| write_region_csv(w, &map))?;
    ctx.write_with("region_legend.txt", |w| write_region_legend(w, &map))?;
    for v in Verdict::ALL {
        println!("{v}: {}", map.count(ecoepi_core::turing::CellState::Classified(v)));
    }
    println!("hopf crossings: {}", map.hopf.len());
    Ok(())
}

pub fn integrate(ctx: &mut Ctx, cfg: &RunConfig) -> Result<(), CliError> {
    let init = init_state(cfg)?;
    let traj = integrate_rk4(
        &cfg.params,
        init,
        cfg.f64_or("dt", 0.01)?,
        cfg.f64_or("t_end", 1000.0)?,
        cfg.usize_or("decimation", 100)?,
    )?;
    ctx.write_with("trajectory.csv", |w| {
        writeln!(w, "t,u,v,w")?;
        for (t, s) in traj.times.iter().zip(&traj.states) {
            writeln!(w, "{t:.9e},{:.9e},{:.9e},{:.9e}", s[0], s[1], s[2])?;
        }
        Ok(())
    })?;
    let last = traj.last();
    println!("t={} u={} v={} w={}", traj.times.last().unwrap_or(&0.0), last[0], last[1], last[2]);
    Ok(())
}

pub fn lyapunov(ctx: &mut Ctx, cfg: &RunConfig) -> Result<(), CliError> {
    let d = LyapunovSettings::default();
    let settings = LyapunovSettings {
        dt: cfg.f64_or("dt", d.dt)?,
        transient: cfg.f64_or("transient", d.transient)?,
        total: cfg.f64_or("total", d.total)?,
        renorm_interval: cfg.f64_or("renorm_interval", d.renorm_interval)?,
        drift_tolerance: cfg.f64_or("drift_tolerance", d.drift_tolerance)?,
    };
    let spec = lyapunov_spectrum(&cfg.params, init_state(cfg)?, &settings)?;
    ctx.report("lyapunov.txt", &spec.to_key_values())
}

pub fn bifurcate(ctx: &mut Ctx, cfg: &RunConfig) -> Result<(), CliError> {
    let which: SweepParameter = cfg.str_or("sweep_parameter", "lambda").parse()?;
    let grid = linspace(
        cfg.f64_or("sweep_min", 0.001)?,
        cfg.f64_or("sweep_max", 0.01)?,
        cfg.usize_or("sweep_points", 50)?,
    );
    let d = SweepSettings::default();
    let settings = SweepSettings {
        dt: cfg.f64_or("dt", d.dt)?,
        transient: cfg.f64_or("transient", d.transient)?,
        window: cfg.f64_or("window", d.window)?,
    };
    let sweep = bifurcation_sweep(&cfg.params, which, &grid, init_state(cfg)?, &settings, ctx.exec)?;
    ctx.write_with("bifurcation.csv", |w| {
        writeln!(w, "param,extremum_value")?;
        for p in &sweep.points {
            // diverged runs leave a gap
            if p.extrema.is_empty() {
                writeln!(w, "{:.9e},nan", p.value)?;
            }
            for x in &p.extrema {
                writeln!(w, "{:.9e},{x:.9e}", p.value)?;
            }
        }
        Ok(())
    })?;
    let gaps = sweep.points.iter().filter(|p| p.failure.is_some()).count();
    println!("{} points, {gaps} diverged", sweep.points.len());
    Ok(())
}

fn perturbation(cfg: &RunConfig) -> Result<Perturbation, CliError> {
    let mut p = Perturbation::default();
    p.amplitude = cfg.f64_or("amplitude", p.amplitude)?;
    p.wavenumber = cfg.f64_or("wavenumber", p.wavenumber)?;
    if let Some(list) = cfg.analysis.get("perturb") {
        p.fields = [false; 3];
        for f in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match f {
                "u" => p.fields[0] = true,
                "v" => p.fields[1] = true,
                "w" => p.fields[2] = true,
                other => return Err(CliError::Validation(format!("[analysis] perturb: unknown field `{other}`"))),
            }
        }
    }
    Ok(p)
}

fn run_simulation(
    ctx: &mut Ctx,
    params: &ModelParams,
    eq: &Equilibrium,
    grid: &GridSpec,
    schedule: &SnapshotSchedule,
    pert: &Perturbation,
    run: &str,
) -> Result<Vec<FieldGrid>, CliError> {
    params.validate()?;
    let init = perturbed_state(eq, grid, pert)?;
    let snaps = simulate_from(params, [params.d1, params.d2, params.d3], init, grid, schedule, ctx.exec)?;
    for s in &snaps {
        ctx.files.extend(write_snapshot(&ctx.out, run, s, grid.h)?);
    }
    Ok(snaps)
}

pub fn simulate(ctx: &mut Ctx, cfg: &RunConfig) -> Result<(), CliError> {
    let grid = ctx.grid(cfg)?;
    grid.check_guard([cfg.params.d1, cfg.params.d2, cfg.params.d3])?;
    let schedule = cfg
        .schedule
        .as_ref()
        .ok_or_else(|| CliError::Validation("simulate needs a [schedule] section".into()))?
        .build(grid.dt)?;
    let eq = select_equilibrium(cfg)?;
    let snaps = run_simulation(ctx, &cfg.params, &eq, &grid, &schedule, &perturbation(cfg)?, &cfg.run)?;
    let mut kv = KeyValues::new();
    kv.text("run", &cfg.run).num("h", grid.h).num("dt", grid.dt).text("nx", grid.nx);
    kv.num("guard", grid.guard_value([cfg.params.d1, cfg.params.d2, cfg.params.d3]));
    for s in &snaps {
        let amp = s.amplitude();
        kv.text(
            format!("amplitude.t{}", s.time),
            format!("{},{},{}", fmt_f64(amp[0]), fmt_f64(amp[1]), fmt_f64(amp[2])),
        );
    }
    ctx.report("simulate.txt", &kv)
}

fn classify_settings(cfg: &RunConfig) -> Result<ClassifySettings, CliError> {
    let d = ClassifySettings::default();
    Ok(ClassifySettings {
        stationary_threshold: cfg.f64_or("threshold", d.stationary_threshold)?,
        homogeneous_amplitude: cfg.f64_or("homogeneous_amplitude", d.homogeneous_amplitude)?,
        min_gap: cfg.f64_or("min_gap", d.min_gap)?,
    })
}

fn write_pattern(ctx: &mut Ctx, report: &PatternReport, prefix: &str) -> Result<(), CliError> {
    ctx.write_with(&format!("{prefix}distances.csv"), |w| report.write_distances_csv(w))?;
    ctx.report(&format!("{prefix}pattern.txt"), &report.to_key_values())
}

pub fn classify_cmd(ctx: &mut Ctx, cfg: &RunConfig) -> Result<(), CliError> {
    let dir = cfg.analysis.get("snapshots").map_or_else(|| ctx.out.clone(), PathBuf::from);
    let mut history = load_snapshots(&dir, &cfg.run)?;
    if let Some(times) = cfg.schedule.as_ref().map(|s| s.build(cfg.grid.dt)).transpose()? {
        history.retain(|g| times.times().iter().any(|t| (t - g.time).abs() < 1e-9));
    }
    let eq = select_equilibrium(cfg)?;
    let verdict = turing_check(&eq, &cfg.params)?.verdict;
    let report = classify(&history, verdict, &classify_settings(cfg)?)?;
    write_pattern(ctx, &report, "")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Recipe {
    Table2,
    Fig8,
    Fig9,
    Fig12,
    Spectra,
}

impl Recipe {
    pub fn name(self) -> &'static str {
        match self {
            Recipe::Table2 => "table2",
            Recipe::Fig8 => "fig8",
            Recipe::Fig9 => "fig9",
            Recipe::Fig12 => "fig12",
            Recipe::Spectra => "spectra",
        }
    }

    fn presets(self) -> Vec<&'static Preset> {
        let names: &[&str] = match self {
            Recipe::Table2 => &["row-a", "row-b"],
            Recipe::Fig8 => &["row-a"],
            Recipe::Fig9 => &["row-c"],
            Recipe::Fig12 => &["row-e"],
            Recipe::Spectra => &["lyapunov-oscillating", "lyapunov-stable"],
        };
        names.iter().map(|n| preset(n).expect("recipe preset exists")).collect()
    }

    /// The configurations this recipe runs, in canonical form.
    pub fn configs(self) -> Vec<RunConfig> {
        self.presets()
            .into_iter()
            .map(|p| {
                let mut cfg = RunConfig::from_params(p.params, p.name);
                if !p.snapshots.is_empty() {
                    cfg.schedule = Some(crate::config::ScheduleSection::Times(p.snapshots.to_vec()));
                }
                if let Some(init) = p.init {
                    cfg.analysis.insert("init".into(), format!("{}, {}, {}", init[0], init[1], init[2]));
                }
                cfg
            })
            .collect()
    }
}

fn table2(ctx: &mut Ctx) -> Result<(), CliError> {
    let mut rows = Vec::new();
    for (label, cfg) in ["A", "B"].into_iter().zip(Recipe::Table2.configs()) {
        let eq = select_equilibrium(&cfg)?;
        for k in [0.0, 15.0] {
            rows.push((label, cfg.params.d1, dispersion(&eq, &cfg.params, k)?));
        }
    }
    ctx.write_with("table2.csv", |w| {
        writeln!(w, "row,d1,k,rho1,rho2,rho3,phi")?;
        for (label, d1, s) in &rows {
            writeln!(w, "{label},{d1:e},{},{:.4},{:.4},{:.4},{:.4}", s.k, s.rho1, s.rho2, s.rho3, s.phi)?;
        }
        Ok(())
    })?;
    for (label, _, s) in &rows {
        println!("{label} k={:<4} {:.4} {:.4} {:.4} {:.4}", s.k, s.rho1, s.rho2, s.rho3, s.phi);
    }
    Ok(())
}

fn pattern_recipe(ctx: &mut Ctx, recipe: Recipe) -> Result<(), CliError> {
    let cfg = recipe.configs().remove(0);
    let grid = ctx.grid(&cfg)?;
    let schedule = cfg.schedule.as_ref().expect("pattern presets carry a schedule").build(grid.dt)?;
    let eq = select_equilibrium(&cfg)?;
    let diag = turing_check(&eq, &cfg.params)?;
    let snaps = run_simulation(ctx, &cfg.params, &eq, &grid, &schedule, &Perturbation::default(), recipe.name())?;
    let report = classify(&snaps, diag.verdict, &ClassifySettings::default())?;
    let mut kv = KeyValues::new();
    kv.text("recipe", recipe.name()).num("h", grid.h).extend("turing.", &diag);
    ctx.write_with(&format!("{}_turing.txt", recipe.name()), |w| write!(w, "{kv}"))?;
    write_pattern(ctx, &report, &format!("{}_", recipe.name()))
}

fn spectra(ctx: &mut Ctx) -> Result<(), CliError> {
    for cfg in Recipe::Spectra.configs() {
        let spec = lyapunov_spectrum(&cfg.params, init_state(&cfg)?, &LyapunovSettings::default())?;
        println!("{}:", cfg.run);
        ctx.report(&format!("{}.txt", cfg.run), &spec.to_key_values())?;
    }
    Ok(())
}

pub fn reproduce(ctx: &mut Ctx, recipe: Recipe) -> Result<(), CliError> {
    match recipe {
        Recipe::Table2 => table2(ctx),
        Recipe::Fig8 | Recipe::Fig9 | Recipe::Fig12 => pattern_recipe(ctx, recipe),
        Recipe::Spectra => spectra(ctx),
    }
}
