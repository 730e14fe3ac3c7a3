//! Gain/absorption and inversion bookkeeping for dressed and bare transitions.
//!
//! Emission on |j⟩ → |i⟩ is amplified when Im ρ_ij > 0.

use std::fmt;
use std::io::Write;

use serde::Serialize;

use crate::density::{Basis, DensityMatrix};
use crate::dressed::dressed_steady_state;
use crate::dressed_basis::{build_dressed_basis, to_bare};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::params::{derive_rates, DressedRates, FieldRegime, ParamName, SystemParams};
use crate::secular::{
    bare_strong_field_steady, secular_alpha_beta_leading, secular_coherence_steady,
    secular_population_steady, strong_field_im_coherences,
};

/// |Im ρ| at or below this is NEUTRAL.
pub const IM_TOL: f64 = 1e-12;
/// Population differences at or below this do not count as inversion.
pub const INVERSION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Transition {
    BetaToAlpha,
    AlphaToGamma,
    GammaToAlpha,
    BetaToGamma,
    GammaToBeta,
    /// b → a, the coupling-laser transition.
    BareCoupling,
    /// c → a, the probe transition.
    BareProbe,
}

impl Transition {
    pub const DRESSED: [Transition; 5] = [
        Transition::BetaToAlpha,
        Transition::AlphaToGamma,
        Transition::GammaToAlpha,
        Transition::BetaToGamma,
        Transition::GammaToBeta,
    ];
    pub const BARE: [Transition; 2] = [Transition::BareCoupling, Transition::BareProbe];

    pub fn basis(self) -> Basis {
        match self {
            Transition::BareCoupling | Transition::BareProbe => Basis::Bare,
            _ => Basis::Dressed,
        }
    }

    /// (emitting level, receiving level) as basis indices.
    pub fn levels(self) -> (usize, usize) {
        match self {
            Transition::BetaToAlpha => (1, 0),
            Transition::AlphaToGamma => (0, 2),
            Transition::GammaToAlpha => (2, 0),
            Transition::BetaToGamma => (1, 2),
            Transition::GammaToBeta => (2, 1),
            Transition::BareCoupling => (1, 0),
            Transition::BareProbe => (2, 0),
        }
    }

    /// Index (i, j) of the coherence whose imaginary part is the gain.
    pub fn gain_element(self) -> (usize, usize) {
        let (from, to) = self.levels();
        (to, from)
    }

    pub fn sideband(self) -> Sideband {
        match self {
            Transition::BetaToAlpha | Transition::AlphaToGamma => Sideband::PlusR,
            Transition::GammaToAlpha => Sideband::MinusR,
            Transition::BetaToGamma => Sideband::Plus2R,
            Transition::GammaToBeta => Sideband::Minus2R,
            Transition::BareCoupling | Transition::BareProbe => Sideband::Carrier,
        }
    }

    pub fn label(self) -> String {
        let (from, to) = self.levels();
        let names = self.basis().level_names();
        format!("{}->{}", names[from], names[to])
    }
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Emission frequency relative to the laser and probe carriers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sideband {
    Carrier,
    PlusR,
    MinusR,
    Plus2R,
    Minus2R,
}

impl fmt::Display for Sideband {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sideband::Carrier => "w",
            Sideband::PlusR => "w+R",
            Sideband::MinusR => "w-R",
            Sideband::Plus2R => "w+2R",
            Sideband::Minus2R => "w-2R",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Regime {
    GainWithInversion,
    GainWithoutInversion,
    AbsorptionWithInversion,
    AbsorptionWithoutInversion,
    Neutral,
}

impl Regime {
    pub fn classify(im_coherence: f64, pop_difference: f64) -> Regime {
        let inverted = pop_difference > INVERSION_TOL;
        if im_coherence > IM_TOL {
            if inverted {
                Regime::GainWithInversion
            } else {
                Regime::GainWithoutInversion
            }
        } else if im_coherence < -IM_TOL {
            if inverted {
                Regime::AbsorptionWithInversion
            } else {
                Regime::AbsorptionWithoutInversion
            }
        } else {
            Regime::Neutral
        }
    }

    pub fn is_gain(self) -> bool {
        matches!(
            self,
            Regime::GainWithInversion | Regime::GainWithoutInversion
        )
    }

    pub fn is_absorption(self) -> bool {
        matches!(
            self,
            Regime::AbsorptionWithInversion | Regime::AbsorptionWithoutInversion
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Regime::GainWithInversion => "GAIN_WITH_INVERSION",
            Regime::GainWithoutInversion => "GAIN_WITHOUT_INVERSION",
            Regime::AbsorptionWithInversion => "ABSORPTION_WITH_INVERSION",
            Regime::AbsorptionWithoutInversion => "ABSORPTION_WITHOUT_INVERSION",
            Regime::Neutral => "NEUTRAL",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransitionReport {
    pub transition: Transition,
    pub sideband: Sideband,
    pub im_coherence: f64,
    /// ρ(emitting) − ρ(receiving).
    pub pop_difference: f64,
    pub regime: Regime,
}

impl TransitionReport {
    pub fn evaluate(transition: Transition, rho: &DensityMatrix) -> Result<Self> {
        transition.basis().ensure(rho.basis())?;
        let (i, j) = transition.gain_element();
        let (from, to) = transition.levels();
        let im_coherence = rho.get(i, j).im;
        let pop_difference = rho.population(from) - rho.population(to);
        Ok(Self {
            transition,
            sideband: transition.sideband(),
            im_coherence,
            pop_difference,
            regime: Regime::classify(im_coherence, pop_difference),
        })
    }
}

/// Reports for the five dressed transitions followed by the two bare ones.
pub fn classify_steady_state(
    rho_dressed: &DensityMatrix,
    rho_bare: &DensityMatrix,
) -> Result<Vec<TransitionReport>> {
    Basis::Dressed.ensure(rho_dressed.basis())?;
    Basis::Bare.ensure(rho_bare.basis())?;
    Transition::DRESSED
        .iter()
        .map(|&t| TransitionReport::evaluate(t, rho_dressed))
        .chain(
            Transition::BARE
                .iter()
                .map(|&t| TransitionReport::evaluate(t, rho_bare)),
        )
        .collect()
}

/// Dressed steady state assembled from the secular closed forms.
pub fn secular_steady_matrix(rates: &DressedRates) -> Result<DensityMatrix> {
    let pops = secular_population_steady(rates)?;
    let coh = secular_coherence_steady(rates)?;
    let mut m = DensityMatrix::from_populations(Basis::Dressed, pops)?.into_matrix();
    m[(0, 1)] = coh.alpha_beta;
    m[(1, 0)] = coh.alpha_beta.conj();
    m[(0, 2)] = coh.alpha_gamma;
    m[(2, 0)] = coh.alpha_gamma.conj();
    m[(1, 2)] = coh.beta_gamma;
    m[(2, 1)] = coh.gamma_beta;
    Ok(DensityMatrix::new_unchecked(Basis::Dressed, m))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RegimeSource {
    /// Secular closed forms.
    Analytic,
    /// Exact stationary state of the dressed equations.
    Numeric,
}

impl std::str::FromStr for RegimeSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(RegimeSource::Analytic),
            "numeric" => Ok(RegimeSource::Numeric),
            other => Err(Error::Config(format!(
                "unknown source '{other}' (analytic|numeric)"
            ))),
        }
    }
}

/// Dressed and bare steady states of `p` from the chosen source.
pub fn steady_pair(
    p: &SystemParams,
    source: RegimeSource,
) -> Result<(DensityMatrix, DensityMatrix)> {
    let basis = build_dressed_basis(p)?;
    let rates = derive_rates(p)?;
    let dressed = match source {
        RegimeSource::Analytic => secular_steady_matrix(&rates)?,
        RegimeSource::Numeric => dressed_steady_state(&rates)?,
    };
    let bare = to_bare(&dressed, &basis)?;
    Ok((dressed, bare))
}

pub fn classify_params(p: &SystemParams, source: RegimeSource) -> Result<Vec<TransitionReport>> {
    let (dressed, bare) = steady_pair(p, source)?;
    classify_steady_state(&dressed, &bare)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionStatus {
    Satisfied,
    NotSatisfied,
    Inapplicable,
}

impl fmt::Display for ConditionStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConditionStatus::Satisfied => "satisfied",
            ConditionStatus::NotSatisfied => "not satisfied",
            ConditionStatus::Inapplicable => "inapplicable",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GainCondition {
    pub id: &'static str,
    pub statement: &'static str,
    pub status: ConditionStatus,
    /// Pump rate above which the condition holds, where one exists.
    pub critical_lambda: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictedRegime {
    pub transition: &'static str,
    pub regime: Regime,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GainConditionReport {
    pub params: SystemParams,
    pub field_regime: FieldRegime,
    pub conditions: Vec<GainCondition>,
    pub predictions: Vec<PredictedRegime>,
}

impl GainConditionReport {
    pub fn condition(&self, id: &str) -> Option<&GainCondition> {
        self.conditions.iter().find(|c| c.id == id)
    }
}

impl fmt::Display for GainConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.params)?;
        for (n, c) in self.conditions.iter().enumerate() {
            write!(f, "condition {}: {} ({})", n + 1, c.status, c.statement)?;
            if let Some(l) = c.critical_lambda {
                write!(f, ", critical lambda_pump = {l:.6}")?;
            }
            writeln!(f, " [{}]", c.id)?;
        }
        for p in &self.predictions {
            writeln!(f, "predicted {}: {}", p.transition, p.regime)?;
        }
        Ok(())
    }
}

fn status(applicable: bool, holds: bool) -> ConditionStatus {
    match (applicable, holds) {
        (false, _) => ConditionStatus::Inapplicable,
        (true, true) => ConditionStatus::Satisfied,
        (true, false) => ConditionStatus::NotSatisfied,
    }
}

/// Evaluates the gain inequalities obtained from the leading steady-state
/// coherences, for general fields, for Ω ≫ G, and for the bare probe.
pub fn analytic_gain_conditions(p: &SystemParams) -> Result<GainConditionReport> {
    p.validate()?;
    let rates = derive_rates(p)?;
    let (gb, gc, l) = (p.gamma_b, p.gamma_c, p.lambda_pump);
    let field_regime = FieldRegime::of(p);
    let strong = field_regime.is_strong();
    let w2 = p.omega * p.omega;
    let r2 = rates.r * rates.r;
    let ga = rates.gamma_alpha;

    let general_window = gc * w2 / (w2 + r2) < gb && gb < gc;
    let general_crit = general_window.then(|| ga * (gc - gb) / (ga - 2.0 * w2 * (gc - gb) / r2));
    let strong_window = strong && 0.5 * gc < gb && gb < gc;
    let strong_crit = strong_window.then(|| gc * (gc - gb) / (2.0 * gb - gc));
    let probe_crit = (strong && gb > gc).then(|| gc * gc / (gb - gc));

    let conditions = vec![
        GainCondition {
            id: "general_1",
            statement: "gamma_b > gamma_c: gain for any lambda_pump",
            status: status(true, gb > gc),
            critical_lambda: None,
        },
        GainCondition {
            id: "general_2",
            statement: "gamma_c omega^2/(omega^2+R^2) < gamma_b < gamma_c and lambda_pump above threshold",
            status: status(general_window, general_crit.is_some_and(|c| l > c)),
            critical_lambda: general_crit,
        },
        GainCondition {
            id: "strong_1",
            statement: "omega >> g_probe, gamma_b > gamma_c: Autler-Townes gain for any lambda_pump",
            status: status(strong, gb > gc),
            critical_lambda: None,
        },
        GainCondition {
            id: "strong_2",
            statement: "omega >> g_probe, gamma_c/2 < gamma_b < gamma_c and lambda_pump above threshold",
            status: status(strong_window, strong_crit.is_some_and(|c| l > c)),
            critical_lambda: strong_crit,
        },
        GainCondition {
            id: "bare_probe",
            statement: "omega >> g_probe, gamma_b > gamma_c and lambda_pump > gamma_c^2/(gamma_b-gamma_c): probe gain",
            status: if strong { status(true, probe_crit.is_some_and(|c| l > c)) } else { ConditionStatus::Inapplicable },
            critical_lambda: probe_crit,
        },
    ];

    let satisfied = |id: &str| {
        conditions
            .iter()
            .any(|c| c.id == id && c.status == ConditionStatus::Satisfied)
    };
    let dressed_gain = satisfied("general_1") || satisfied("general_2");
    let [pa, pb, _] = secular_population_steady(&rates)?;
    let mut predictions = vec![
        PredictedRegime {
            transition: "beta->alpha",
            regime: Regime::classify(if dressed_gain { 1.0 } else { -1.0 }, pb - pa),
        },
        PredictedRegime {
            transition: "alpha->gamma",
            regime: Regime::classify(if dressed_gain { 1.0 } else { -1.0 }, pa - pb),
        },
    ];
    if strong {
        let at_gain = satisfied("strong_1") || satisfied("strong_2");
        let [sa, sb, _] = crate::secular::strong_field_populations(p)?;
        for t in ["c->beta", "c->gamma"] {
            predictions.push(PredictedRegime {
                transition: t,
                regime: Regime::classify(if at_gain { 1.0 } else { -1.0 }, sa - sb),
            });
        }
    }
    Ok(GainConditionReport {
        params: *p,
        field_regime,
        conditions,
        predictions,
    })
}

/// The analytic quantity whose sign each gain condition predicts: the
/// leading Im ρ_αβ (general), the strong-field Im ρ_αβ, or the strong-field
/// bare Im ρ_ac.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionProbe {
    General,
    StrongField,
    BareProbe,
}

pub fn condition_indicator(p: &SystemParams, which: ConditionProbe) -> Result<f64> {
    match which {
        ConditionProbe::General => Ok(secular_alpha_beta_leading(&derive_rates(p)?)?.im),
        ConditionProbe::StrongField => Ok(strong_field_im_coherences(p)?.value.im_alpha_beta),
        ConditionProbe::BareProbe => Ok(bare_strong_field_steady(p)?.value.get(0, 2).im),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Axis {
    pub name: ParamName,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn new(name: ParamName, values: Vec<f64>) -> Self {
        Self { name, values }
    }

    /// `n` evenly spaced points from `lo` to `hi` inclusive.
    pub fn linspace(name: ParamName, lo: f64, hi: f64, n: usize) -> Self {
        let values = match n {
            0 => vec![],
            1 => vec![lo],
            _ => (0..n)
                .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
                .collect(),
        };
        Self { name, values }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeCell {
    pub x: f64,
    pub y: f64,
    pub reports: Vec<TransitionReport>,
    pub error: Option<String>,
}

impl RegimeCell {
    pub fn regime(&self, transition: Transition) -> Option<Regime> {
        self.reports
            .iter()
            .find(|r| r.transition == transition)
            .map(|r| r.regime)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeMap {
    pub base: SystemParams,
    pub source: RegimeSource,
    pub x_axis: Axis,
    pub y_axis: Axis,
    /// Row-major over (x, y): index = ix * ny + iy.
    pub cells: Vec<RegimeCell>,
}

impl RegimeMap {
    pub fn cell(&self, ix: usize, iy: usize) -> &RegimeCell {
        &self.cells[ix * self.y_axis.values.len() + iy]
    }

    pub fn error_count(&self) -> usize {
        self.cells.iter().filter(|c| c.error.is_some()).count()
    }

    /// One row per (cell, transition); failed cells get a single ERROR row.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# regime map, source = {:?}", self.source)?;
        writeln!(out, "# base: {}", self.base)?;
        writeln!(
            out,
            "# rates in units of gamma_c; im_coherence and pop_difference dimensionless"
        )?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            self.x_axis.name.key(),
            self.y_axis.name.key(),
            "transition",
            "regime",
            "im_coherence",
            "pop_difference",
        ])?;
        for c in &self.cells {
            let (x, y) = (c.x.to_string(), c.y.to_string());
            if let Some(e) = &c.error {
                w.write_record([x.as_str(), &y, "", "ERROR", "", e])?;
                continue;
            }
            for r in &c.reports {
                w.write_record([
                    x.as_str(),
                    &y,
                    &r.transition.label(),
                    r.regime.as_str(),
                    &format!("{:e}", r.im_coherence),
                    &format!("{:e}", r.pop_difference),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// Classifies every grid point of a two-parameter sweep. Cells that fail
/// (invalid parameters, degenerate steady state) carry the error and the
/// sweep carries on.
pub fn sweep_regimes(
    base: &SystemParams,
    x_axis: Axis,
    y_axis: Axis,
    source: RegimeSource,
    exec: Execution,
) -> RegimeMap {
    let points: Vec<(f64, f64)> = x_axis
        .values
        .iter()
        .flat_map(|&x| y_axis.values.iter().map(move |&y| (x, y)))
        .collect();
    let cells = exec.map(&points, |&(x, y)| {
        let p = base.with(x_axis.name, x).with(y_axis.name, y);
        match p.validate().and_then(|_| classify_params(&p, source)) {
            Ok(reports) => RegimeCell {
                x,
                y,
                reports,
                error: None,
            },
            Err(e) => RegimeCell {
                x,
                y,
                reports: vec![],
                error: Some(e.to_string()),
            },
        }
    });
    RegimeMap {
        base: *base,
        source,
        x_axis,
        y_axis,
        cells,
    }
}
