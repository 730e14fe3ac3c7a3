mod args;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;
use lwi_core::compare::{run_comparison, CompareSetup};
use lwi_core::exec::Execution;
use lwi_core::export::{write_steady_csv, write_trajectory_csv, SteadyRow};
use lwi_core::gain::{
    analytic_gain_conditions, classify_steady_state, steady_pair, sweep_regimes, Axis,
};
use lwi_core::secular::bare_strong_field_steady;
use lwi_core::{
    build_dressed_basis, derive_rates, integrate_bare, integrate_dressed, to_dressed, Basis,
    DensityMatrix, StepControl, StepMode, SystemParams,
};

use args::{BasisArg, Cli, Command, GlobalOpts, InitialArg};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = std::io::stdout().lock();
    match run(cli, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        // Reader went away (`lwi conditions | head`); nothing left to report.
        Err(e)
            if e.downcast_ref::<std::io::Error>()
                .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe) =>
        {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let config = e
                .chain()
                .find_map(|c| c.downcast_ref::<lwi_core::Error>())
                .is_some_and(|c| c.is_config());
            ExitCode::from(if config { 2 } else { 1 })
        }
    }
}

fn load_params(g: &GlobalOpts) -> lwi_core::Result<SystemParams> {
    let mut p = match &g.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                lwi_core::Error::Config(format!("cannot read {}: {e}", path.display()))
            })?;
            SystemParams::from_config_str(&text)?
        }
        None => SystemParams::default(),
    };
    for (name, value) in g.params.pairs() {
        if let Some(v) = value {
            p.set(name, v);
        }
    }
    p.validate()?;
    Ok(p)
}

fn step_control(g: &GlobalOpts, sample_interval: f64) -> lwi_core::Result<StepControl> {
    let bad = |what: &str, v: f64| {
        lwi_core::Error::Config(format!("{what} must be positive and finite, got {v}"))
    };
    if !(sample_interval > 0.0 && sample_interval.is_finite()) {
        return Err(bad("sample interval", sample_interval));
    }
    let control = match (g.fixed_step, g.tol) {
        (Some(dt), _) if !(dt > 0.0 && dt.is_finite()) => return Err(bad("--fixed-step", dt)),
        (Some(dt), _) => StepControl::fixed(dt),
        (None, Some((atol, rtol))) => StepControl::adaptive(atol, rtol),
        (None, None) => StepControl::default(),
    };
    Ok(control.with_sample_interval(sample_interval))
}

fn check_t_end(t_end: f64) -> lwi_core::Result<()> {
    if t_end > 0.0 && t_end.is_finite() {
        Ok(())
    } else {
        Err(lwi_core::Error::Config(format!(
            "--t-end must be positive and finite, got {t_end}"
        )))
    }
}

fn out_path(g: &GlobalOpts, default_name: &str) -> PathBuf {
    g.out
        .clone()
        .unwrap_or_else(|| g.out_dir.join(default_name))
}

/// `dir/map.csv` -> `dir/map_numeric.csv`.
fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{suffix}"),
    };
    path.with_file_name(name)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn run(cli: Cli, out: &mut impl Write) -> Result<()> {
    let g = &cli.global;
    let p = load_params(g)?;
    match cli.command {
        Command::Simulate {
            basis,
            t_end,
            sample_interval,
            initial,
        } => simulate(out, g, &p, basis, t_end, sample_interval, initial),
        Command::Compare {
            target,
            t_end,
            sample_interval,
        } => {
            check_t_end(t_end)?;
            let mut setup = CompareSetup::standard(p);
            setup.t_end = t_end;
            setup.control = step_control(g, sample_interval)?;
            let cmp = run_comparison(target, &setup)?;
            let path = out_path(g, &format!("compare_{target}.csv"));
            cmp.write_csv(create(&path)?, &setup.control)?;
            writeln!(out, "{target}: {p}")?;
            for m in &cmp.metrics {
                writeln!(out, "  {:<24} {:.6e}", m.name, m.value)?;
            }
            writeln!(out, "wrote {}", path.display())?;
            Ok(())
        }
        Command::Steady { source } => steady(out, g, &p, source.sources()),
        Command::Sweep {
            x,
            y,
            source,
            sequential,
        } => {
            let exec = if sequential {
                Execution::Sequential
            } else {
                Execution::default()
            };
            for &s in source.sources() {
                let map = sweep_regimes(
                    &p,
                    Axis::linspace(x.name, x.lo, x.hi, x.n),
                    Axis::linspace(y.name, y.lo, y.hi, y.n),
                    s,
                    exec,
                );
                let mut path = out_path(g, "regime_map.csv");
                if source == args::SourceArg::Both {
                    path = with_suffix(&path, &format!("{s:?}").to_lowercase());
                }
                map.write_csv(create(&path)?)?;
                if map.error_count() > 0 {
                    eprintln!(
                        "warning: {} of {} cells failed (see ERROR rows)",
                        map.error_count(),
                        map.cells.len()
                    );
                }
                writeln!(
                    out,
                    "{:?} regime map, {} x {} cells: {}",
                    s,
                    x.n,
                    y.n,
                    path.display()
                )?;
            }
            Ok(())
        }
        Command::Conditions => {
            let report = analytic_gain_conditions(&p)?;
            write!(out, "{report}")?;
            let json = serde_json::to_string_pretty(&report)?;
            writeln!(out, "{json}")?;
            if let Some(path) = &g.out {
                std::fs::write(path, format!("{json}\n"))
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
            Ok(())
        }
    }
}

fn simulate(
    out: &mut impl Write,
    g: &GlobalOpts,
    p: &SystemParams,
    basis: BasisArg,
    t_end: f64,
    sample_interval: f64,
    initial: InitialArg,
) -> Result<()> {
    check_t_end(t_end)?;
    let control = step_control(g, sample_interval)?;
    let rho0 = match initial {
        InitialArg::A => DensityMatrix::pure_level(Basis::Bare, 0),
        InitialArg::B => DensityMatrix::pure_level(Basis::Bare, 1),
        InitialArg::C => DensityMatrix::pure_level(Basis::Bare, 2),
        InitialArg::Mixed => DensityMatrix::maximally_mixed(Basis::Bare),
    };
    let traj = match basis {
        BasisArg::Bare => integrate_bare(&rho0, p, t_end, &control)?,
        BasisArg::Dressed => {
            let b = build_dressed_basis(p)?;
            integrate_dressed(&to_dressed(&rho0, &b)?, &derive_rates(p)?, t_end, &control)?
        }
    };
    let path = out_path(g, &format!("trajectory_{}.csv", traj.basis));
    let note = format!("initial state (bare basis): {initial:?}").to_lowercase();
    write_trajectory_csv(&traj, create(&path)?, &[note])?;

    let last = traj.final_state();
    let sep = if traj.basis == Basis::Dressed {
        "_"
    } else {
        ""
    };
    writeln!(out, "{} basis, t = {}: {p}", traj.basis, t_end)?;
    for (k, name) in traj.basis.level_names().iter().enumerate() {
        writeln!(out, "  rho_{name}{sep}{name} = {:.6}", last.population(k))?;
    }
    writeln!(out, "  trace drift = {:.3e}", traj.trace_drift())?;
    writeln!(
        out,
        "  max hermiticity error = {:.3e}",
        traj.max_hermiticity_error()
    )?;
    if let StepMode::Fixed { dt } = control.mode {
        writeln!(out, "  fixed step dt = {dt}")?;
    }
    writeln!(
        out,
        "wrote {} ({} samples)",
        path.display(),
        traj.samples.len()
    )?;
    Ok(())
}

fn steady(
    out: &mut impl Write,
    g: &GlobalOpts,
    p: &SystemParams,
    sources: &[lwi_core::gain::RegimeSource],
) -> Result<()> {
    let mut rows = Vec::new();
    for &source in sources {
        let (dressed, bare) = steady_pair(p, source)?;
        let [aa, bb, gg] = dressed.populations();
        writeln!(out, "{source:?} steady state: {p}")?;
        writeln!(
            out,
            "  dressed populations: alpha {aa:.4}  beta {bb:.4}  gamma {gg:.4}"
        )?;
        let [a, b, c] = bare.populations();
        writeln!(out, "  bare populations:    a {a:.4}  b {b:.4}  c {c:.4}")?;
        writeln!(
            out,
            "  {:<14} {:<8} {:>12} {:>12}  regime",
            "transition", "sideband", "Im rho", "dN"
        )?;
        for r in classify_steady_state(&dressed, &bare)? {
            writeln!(
                out,
                "  {:<14} {:<8} {:>12.4e} {:>12.4e}  {}",
                r.transition.label(),
                r.sideband.to_string(),
                r.im_coherence,
                r.pop_difference,
                r.regime
            )?;
        }
        rows.push(SteadyRow {
            source: format!("{source:?}").to_lowercase(),
            params: *p,
            dressed,
            bare,
        });
    }
    if p.is_resonant() {
        let sf = bare_strong_field_steady(p)?;
        let [a, b, c] = sf.value.populations();
        writeln!(
            out,
            "strong-field bare populations: a {a:.4}  b {b:.4}  c {c:.4}"
        )?;
        if let Some(w) = sf.warning() {
            writeln!(out, "  warning: {w}")?;
        }
    }
    let path = out_path(g, "steady.csv");
    write_steady_csv(&rows, create(&path)?)?;
    writeln!(out, "wrote {}", path.display())?;
    Ok(())
}
