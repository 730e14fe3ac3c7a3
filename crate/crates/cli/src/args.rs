use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lwi_core::compare::CompareTarget;
use lwi_core::gain::RegimeSource;
use lwi_core::ParamName;

/// Driven three-level V atom with an incoherent pump: density-matrix
/// dynamics, secular closed forms, and gain/absorption classification.
///
/// Rates are in units of gamma_c and times in 1/gamma_c.
#[derive(Debug, Parser)]
#[command(name = "lwi", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Parameter file (flat TOML, keys as the parameter flags). Missing keys
    /// keep the reference values.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Output file. Defaults to a per-command name in $LWI_OUT_DIR.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Directory for default output file names.
    #[arg(
        long,
        global = true,
        env = "LWI_OUT_DIR",
        default_value = ".",
        value_name = "DIR"
    )]
    pub out_dir: PathBuf,

    /// Use fixed-step RK4 with this step instead of the adaptive integrator.
    #[arg(long, global = true, value_name = "DT", conflicts_with = "tol")]
    pub fixed_step: Option<f64>,

    /// Absolute and relative tolerance of the adaptive integrator.
    #[arg(long, global = true, value_name = "ABS,REL", value_parser = parse_tol)]
    pub tol: Option<(f64, f64)>,

    #[command(flatten)]
    pub params: ParamOverrides,
}

#[derive(Debug, Args, Default)]
pub struct ParamOverrides {
    #[arg(
        long,
        global = true,
        allow_hyphen_values = true,
        help_heading = "Parameters"
    )]
    pub omega: Option<f64>,
    #[arg(
        long = "g_probe",
        visible_alias = "g-probe",
        global = true,
        allow_hyphen_values = true,
        help_heading = "Parameters"
    )]
    pub g_probe: Option<f64>,
    #[arg(
        long,
        global = true,
        allow_hyphen_values = true,
        help_heading = "Parameters"
    )]
    pub delta1: Option<f64>,
    #[arg(
        long,
        global = true,
        allow_hyphen_values = true,
        help_heading = "Parameters"
    )]
    pub delta2: Option<f64>,
    #[arg(
        long = "gamma_b",
        visible_alias = "gamma-b",
        global = true,
        allow_hyphen_values = true,
        help_heading = "Parameters"
    )]
    pub gamma_b: Option<f64>,
    #[arg(
        long = "gamma_c",
        visible_alias = "gamma-c",
        global = true,
        allow_hyphen_values = true,
        help_heading = "Parameters"
    )]
    pub gamma_c: Option<f64>,
    #[arg(
        long = "lambda_pump",
        visible_alias = "lambda-pump",
        global = true,
        allow_hyphen_values = true,
        help_heading = "Parameters"
    )]
    pub lambda_pump: Option<f64>,
}

impl ParamOverrides {
    pub fn pairs(&self) -> [(ParamName, Option<f64>); 7] {
        [
            (ParamName::Omega, self.omega),
            (ParamName::GProbe, self.g_probe),
            (ParamName::Delta1, self.delta1),
            (ParamName::Delta2, self.delta2),
            (ParamName::GammaB, self.gamma_b),
            (ParamName::GammaC, self.gamma_c),
            (ParamName::LambdaPump, self.lambda_pump),
        ]
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate the master equation and write the trajectory.
    Simulate {
        #[arg(long, value_enum, default_value_t = BasisArg::Dressed)]
        basis: BasisArg,
        #[arg(long, default_value_t = 30.0)]
        t_end: f64,
        /// Spacing of the written samples.
        #[arg(long, default_value_t = 0.01)]
        sample_interval: f64,
        /// Initial state, given in the bare basis.
        #[arg(long, value_enum, default_value_t = InitialArg::A)]
        initial: InitialArg,
    },
    /// Exact dynamics against the secular closed forms.
    Compare {
        #[arg(long, value_parser = parse_target)]
        target: CompareTarget,
        #[arg(long, default_value_t = 30.0)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-3)]
        sample_interval: f64,
    },
    /// Steady state (numeric and closed form) with the regime table.
    Steady {
        #[arg(long, value_enum, default_value_t = SourceArg::Both)]
        source: SourceArg,
    },
    /// Regime map over two parameters.
    Sweep {
        /// First axis as NAME:LO:HI:N.
        #[arg(long, value_parser = parse_axis)]
        x: AxisSpec,
        /// Second axis as NAME:LO:HI:N.
        #[arg(long, value_parser = parse_axis)]
        y: AxisSpec,
        #[arg(long, value_enum, default_value_t = SourceArg::Numeric)]
        source: SourceArg,
        /// Evaluate cells on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Evaluate the analytic gain conditions; prints text and JSON.
    Conditions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    Bare,
    Dressed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitialArg {
    A,
    B,
    C,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceArg {
    Analytic,
    Numeric,
    Both,
}

impl SourceArg {
    pub fn sources(self) -> &'static [RegimeSource] {
        match self {
            SourceArg::Analytic => &[RegimeSource::Analytic],
            SourceArg::Numeric => &[RegimeSource::Numeric],
            SourceArg::Both => &[RegimeSource::Numeric, RegimeSource::Analytic],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxisSpec {
    pub name: ParamName,
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

fn parse_tol(s: &str) -> Result<(f64, f64), String> {
    let (a, r) = s.split_once(',').ok_or("expected ABS,REL")?;
    let parse = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}"));
    let (a, r) = (parse(a)?, parse(r)?);
    if !(a > 0.0 && r > 0.0) {
        return Err("tolerances must be positive".into());
    }
    Ok((a, r))
}

fn parse_target(s: &str) -> Result<CompareTarget, String> {
    s.parse().map_err(|e: lwi_core::Error| e.to_string())
}

fn parse_axis(s: &str) -> Result<AxisSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [name, lo, hi, n] = parts[..] else {
        return Err("expected NAME:LO:HI:N".into());
    };
    let name: ParamName = name.parse().map_err(|e: lwi_core::Error| e.to_string())?;
    let num = |x: &str| x.parse::<f64>().map_err(|e| format!("`{x}`: {e}"));
    let (lo, hi) = (num(lo)?, num(hi)?);
    let n: usize = n.parse().map_err(|e| format!("`{n}`: {e}"))?;
    if n == 0 {
        return Err("N must be at least 1".into());
    }
    Ok(AxisSpec { name, lo, hi, n })
}
