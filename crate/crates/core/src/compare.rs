//! Exact dressed dynamics set against the secular closed forms, sample by
//! sample, for the three standard comparisons:
//!
//! * `fig3`: populations against the plain secular transient;
//! * `fig4`: coherences against the fitted secular mode solution;
//! * `fig5`: ρ_αα against the transient with the βγ source term.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::density::{Basis, DensityMatrix};
use crate::dressed::{dressed_steady_state, integrate_dressed};
use crate::dressed_basis::{build_dressed_basis, to_dressed};
use crate::error::{Error, Result};
use crate::export::{csv_with_comments, describe_step_mode, UNITS_NOTE};
use crate::integrator::{StepControl, Trajectory};
use crate::params::{derive_rates, DressedRates, SystemParams};
use crate::secular::{
    fit_mode_constants, improved_population_transient, secular_coherence_transient,
    secular_population_transient,
};
use crate::spectrum::dominant_frequency;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CompareTarget {
    Fig3,
    Fig4,
    Fig5,
}

impl FromStr for CompareTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig3" => Ok(CompareTarget::Fig3),
            "fig4" => Ok(CompareTarget::Fig4),
            "fig5" => Ok(CompareTarget::Fig5),
            other => Err(Error::Config(format!(
                "unknown comparison '{other}' (fig3|fig4|fig5)"
            ))),
        }
    }
}

impl fmt::Display for CompareTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CompareTarget::Fig3 => "fig3",
            CompareTarget::Fig4 => "fig4",
            CompareTarget::Fig5 => "fig5",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareSetup {
    pub params: SystemParams,
    pub t_end: f64,
    /// Its sample interval sets the output grid; keep it well below π/R.
    pub control: StepControl,
    /// Initial state in the bare basis.
    pub initial: DensityMatrix,
}

impl CompareSetup {
    /// Atom in the bare ground state, 30/γ_c of evolution on a 0.001 grid.
    pub fn standard(params: SystemParams) -> Self {
        Self {
            params,
            t_end: 30.0,
            control: StepControl::default().with_sample_interval(1e-3),
            initial: DensityMatrix::pure_level(Basis::Bare, 0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metric {
    pub name: &'static str,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub target: CompareTarget,
    pub params: SystemParams,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub metrics: Vec<Metric>,
    pub exact: Trajectory,
}

impl Comparison {
    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metrics
            .iter()
            .find(|m| m.name == name)
            .map(|m| m.value)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn write_csv<W: Write>(&self, out: W, control: &StepControl) -> Result<()> {
        let mut comments = vec![
            format!(
                "comparison {}: exact dressed integration vs secular closed forms",
                self.target
            ),
            format!("params: {}", self.params),
            format!("integrator: {}", describe_step_mode(&control.mode)),
            UNITS_NOTE.to_string(),
        ];
        comments.extend(
            self.metrics
                .iter()
                .map(|m| format!("{} = {}", m.name, m.value)),
        );
        let mut w = csv_with_comments(out, &comments)?;
        w.write_record(&self.columns)?;
        for r in &self.rows {
            w.write_record(r.iter().map(|x| x.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Centered running mean over `window` samples; entries without a full
/// window are None.
pub fn moving_average(values: &[f64], window: usize) -> Vec<Option<f64>> {
    let window = window.max(1);
    let half = window / 2;
    let mut prefix = Vec::with_capacity(values.len() + 1);
    prefix.push(0.0);
    for v in values {
        prefix.push(prefix.last().unwrap() + v);
    }
    (0..values.len())
        .map(|k| {
            let start = k.checked_sub(half)?;
            let end = start + window;
            (end <= values.len()).then(|| (prefix[end] - prefix[start]) / window as f64)
        })
        .collect()
}

/// Max |⟨exact⟩ − approx| where ⟨·⟩ averages over `window` samples.
pub fn envelope_deviation(exact: &[f64], approx: &[f64], window: usize) -> f64 {
    moving_average(exact, window)
        .iter()
        .zip(approx)
        .filter_map(|(m, a)| m.map(|m| (m - a).abs()))
        .fold(0.0, f64::max)
}

/// Exponential decay rate of a signal from its RMS over two windows
/// centred on `t1` and `t2`.
pub fn decay_rate(
    times: &[f64],
    values: &[Complex64],
    t1: f64,
    t2: f64,
    half_width: f64,
) -> Result<f64> {
    let rms = |tc: f64| {
        let (sum, n) = times
            .iter()
            .zip(values)
            .filter(|(t, _)| (**t - tc).abs() <= half_width)
            .fold((0.0, 0usize), |(s, n), (_, v)| (s + v.norm_sqr(), n + 1));
        (n > 0).then(|| (sum / n as f64).sqrt())
    };
    match (rms(t1), rms(t2)) {
        (Some(a), Some(b)) if a > 0.0 && b > 0.0 => Ok((a / b).ln() / (t2 - t1)),
        _ => Err(Error::Domain(
            "decay-rate windows are empty or the signal vanishes".into(),
        )),
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn uniform_dt(traj: &Trajectory) -> f64 {
    let t = &traj.samples;
    if t.len() > 1 {
        t[1].t - t[0].t
    } else {
        0.0
    }
}

fn period_window(rates: &DressedRates, dt: f64) -> usize {
    ((std::f64::consts::PI / rates.r) / dt).round().max(1.0) as usize
}

pub fn run_comparison(target: CompareTarget, setup: &CompareSetup) -> Result<Comparison> {
    Basis::Bare.ensure(setup.initial.basis())?;
    let p = &setup.params;
    let basis = build_dressed_basis(p)?;
    let rates = derive_rates(p)?;
    let rho0 = to_dressed(&setup.initial, &basis)?;
    let exact = integrate_dressed(&rho0, &rates, setup.t_end, &setup.control)?;
    let times = exact.times();
    let (columns, rows, metrics) = match target {
        CompareTarget::Fig3 => populations(&exact, &rho0, &rates)?,
        CompareTarget::Fig4 => coherences(&exact, &rho0, &rates)?,
        CompareTarget::Fig5 => improved(&exact, &rho0, &rates)?,
    };
    debug_assert_eq!(rows.len(), times.len());
    Ok(Comparison {
        target,
        params: *p,
        columns,
        rows,
        metrics,
        exact,
    })
}

type Table = (Vec<String>, Vec<Vec<f64>>, Vec<Metric>);

fn populations(exact: &Trajectory, rho0: &DensityMatrix, rates: &DressedRates) -> Result<Table> {
    let names = ["aa", "bb", "gg"];
    let mut columns = vec!["t".to_string()];
    for n in names {
        columns.extend([
            format!("exact_{n}"),
            format!("secular_{n}"),
            format!("diff_{n}"),
        ]);
    }
    let approx: Vec<[f64; 3]> = exact
        .samples
        .iter()
        .map(|s| secular_population_transient(s.t, rho0.populations(), rates))
        .collect::<Result<_>>()?;
    let rows = exact
        .samples
        .iter()
        .zip(&approx)
        .map(|(s, a)| {
            let mut row = vec![s.t];
            for k in 0..3 {
                let e = s.rho.population(k);
                row.extend([e, a[k], e - a[k]]);
            }
            row
        })
        .collect();
    let window = period_window(rates, uniform_dt(exact));
    let mut metrics = Vec::new();
    let max_names = ["max_dev_aa", "max_dev_bb", "max_dev_gg"];
    let env_names = ["envelope_dev_aa", "envelope_dev_bb", "envelope_dev_gg"];
    for k in 0..3 {
        let e = exact.population(k);
        let a: Vec<f64> = approx.iter().map(|x| x[k]).collect();
        metrics.push(Metric {
            name: max_names[k],
            value: max_abs_diff(&e, &a),
        });
        metrics.push(Metric {
            name: env_names[k],
            value: envelope_deviation(&e, &a, window),
        });
    }
    metrics.push(Metric {
        name: "envelope_window_samples",
        value: window as f64,
    });
    Ok((columns, rows, metrics))
}

fn coherences(exact: &Trajectory, rho0: &DensityMatrix, rates: &DressedRates) -> Result<Table> {
    let constants = fit_mode_constants(rho0, rates)?;
    let approx: Vec<[Complex64; 3]> = exact
        .samples
        .iter()
        .map(|s| {
            secular_coherence_transient(s.t, &constants, rates)
                .map(|c| [c.alpha_beta, c.alpha_gamma, c.beta_gamma])
        })
        .collect::<Result<_>>()?;
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let names = ["ab", "ag", "bg"];
    let mut columns = vec!["t".to_string()];
    for n in names {
        columns.extend([
            format!("exact_re_{n}"),
            format!("exact_im_{n}"),
            format!("secular_re_{n}"),
            format!("secular_im_{n}"),
            format!("diff_abs_{n}"),
        ]);
    }
    let rows = exact
        .samples
        .iter()
        .zip(&approx)
        .map(|(s, a)| {
            let mut row = vec![s.t];
            for (k, &(i, j)) in pairs.iter().enumerate() {
                let e = s.rho.get(i, j);
                row.extend([e.re, e.im, a[k].re, a[k].im, (e - a[k]).norm()]);
            }
            row
        })
        .collect();

    let dt = uniform_dt(exact);
    let steady = dressed_steady_state(rates)?;
    let times = exact.times();
    let mut metrics = vec![Metric {
        name: "rabi",
        value: rates.r,
    }];
    let peak_names = [
        ("exact_peak_ab", "secular_peak_ab"),
        ("exact_peak_ag", "secular_peak_ag"),
        ("exact_peak_bg", "secular_peak_bg"),
    ];
    for (k, &(i, j)) in pairs.iter().enumerate() {
        let e = exact.element(i, j);
        let a: Vec<Complex64> = approx.iter().map(|x| x[k]).collect();
        metrics.push(Metric {
            name: peak_names[k].0,
            value: dominant_frequency(&e, dt)?.omega,
        });
        metrics.push(Metric {
            name: peak_names[k].1,
            value: dominant_frequency(&a, dt)?.omega,
        });
    }
    // Relaxation of ρ_βγ toward its stationary value, early against later.
    let half = std::f64::consts::PI / rates.r;
    let (t1, t2) = (0.5, 2.0);
    let bg_dev: Vec<Complex64> = exact
        .element(1, 2)
        .iter()
        .map(|z| z - steady.get(1, 2))
        .collect();
    let bg_approx: Vec<Complex64> = approx.iter().map(|x| x[2]).collect();
    if times.last().copied().unwrap_or(0.0) >= t2 + half {
        metrics.push(Metric {
            name: "exact_decay_bg",
            value: decay_rate(&times, &bg_dev, t1, t2, half)?,
        });
        metrics.push(Metric {
            name: "secular_decay_bg",
            value: decay_rate(&times, &bg_approx, t1, t2, half)?,
        });
    }
    let s = steady.matrix();
    metrics.push(Metric {
        name: "steady_ratio_bg_ab",
        value: s[(1, 2)].norm() / s[(0, 1)].norm(),
    });
    Ok((columns, rows, metrics))
}

fn improved(exact: &Trajectory, rho0: &DensityMatrix, rates: &DressedRates) -> Result<Table> {
    let columns = [
        "t",
        "exact_aa",
        "improved_aa",
        "secular_aa",
        "err_improved",
        "err_secular",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let mut rows = Vec::with_capacity(exact.samples.len());
    let (mut worst_improved, mut worst_secular) = (0.0_f64, 0.0_f64);
    for s in &exact.samples {
        let e = s.rho.population(0);
        let imp = improved_population_transient(s.t, rho0, rates)?[0];
        let sec = secular_population_transient(s.t, rho0.populations(), rates)?[0];
        worst_improved = worst_improved.max((e - imp).abs());
        worst_secular = worst_secular.max((e - sec).abs());
        rows.push(vec![s.t, e, imp, sec, e - imp, e - sec]);
    }
    let metrics = vec![
        Metric {
            name: "max_err_improved",
            value: worst_improved,
        },
        Metric {
            name: "max_err_secular",
            value: worst_secular,
        },
    ];
    Ok((columns, rows, metrics))
}
