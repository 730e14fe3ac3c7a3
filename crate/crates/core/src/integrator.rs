//! Explicit Runge–Kutta integration of the linear density-matrix equations.
//!
//! The adaptive path is Dormand–Prince 5(4) with a Hairer-style error norm;
//! the fixed-step path is classical RK4 and exists for reproducible output.
//! Both land exactly on every sample time and symmetrize ρ ← (ρ + ρ†)/2 after
//! each accepted step. The trace is left alone so drift stays observable.

use num_complex::Complex64;
use serde::Serialize;

use crate::density::{hermitize, max_abs, Basis, CMatrix3, DensityMatrix};
use crate::error::{Error, Result};
use crate::params::{DressedRates, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepMode {
    Adaptive { atol: f64, rtol: f64 },
    Fixed { dt: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepControl {
    pub mode: StepMode,
    /// Spacing of recorded samples; the final sample is always at `t_end`.
    pub sample_interval: f64,
    pub max_steps: usize,
}

pub const DEFAULT_ATOL: f64 = 1e-10;
pub const DEFAULT_RTOL: f64 = 1e-8;

impl Default for StepControl {
    fn default() -> Self {
        Self {
            mode: StepMode::Adaptive {
                atol: DEFAULT_ATOL,
                rtol: DEFAULT_RTOL,
            },
            sample_interval: 0.01,
            max_steps: 50_000_000,
        }
    }
}

impl StepControl {
    pub fn adaptive(atol: f64, rtol: f64) -> Self {
        Self {
            mode: StepMode::Adaptive { atol, rtol },
            ..Self::default()
        }
    }

    pub fn fixed(dt: f64) -> Self {
        Self {
            mode: StepMode::Fixed { dt },
            ..Self::default()
        }
    }

    pub fn with_sample_interval(mut self, dt: f64) -> Self {
        self.sample_interval = dt;
        self
    }

    fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Config(format!("invalid step control: {what}")));
        if !(self.sample_interval > 0.0 && self.sample_interval.is_finite()) {
            return bad("sample interval must be positive");
        }
        match self.mode {
            StepMode::Adaptive { atol, rtol } if !(atol > 0.0 && rtol >= 0.0) => {
                bad("tolerances must be positive")
            }
            StepMode::Fixed { dt } if !(dt > 0.0 && dt.is_finite()) => bad("dt must be positive"),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct IntegratorStats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evaluations: usize,
}

/// Which equations produced a trajectory, and with what inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ModelSnapshot {
    Bare(SystemParams),
    Dressed(DressedRates),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub rho: DensityMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub basis: Basis,
    pub model: ModelSnapshot,
    pub control: StepControl,
    pub stats: IntegratorStats,
    pub samples: Vec<Sample>,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    pub fn element(&self, i: usize, j: usize) -> Vec<Complex64> {
        self.samples.iter().map(|s| s.rho.get(i, j)).collect()
    }

    pub fn population(&self, i: usize) -> Vec<f64> {
        self.samples.iter().map(|s| s.rho.population(i)).collect()
    }

    pub fn final_state(&self) -> &DensityMatrix {
        &self
            .samples
            .last()
            .expect("trajectory has at least one sample")
            .rho
    }

    /// max_t |Tr ρ(t) − Tr ρ(0)|
    pub fn trace_drift(&self) -> f64 {
        let t0 = self.samples[0].rho.trace();
        self.samples
            .iter()
            .map(|s| (s.rho.trace() - t0).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_hermiticity_error(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.rho.hermiticity_error())
            .fold(0.0, f64::max)
    }
}

fn sample_times(t_end: f64, interval: f64) -> Vec<f64> {
    let n = (t_end / interval).floor() as usize;
    let mut times: Vec<f64> = (1..=n).map(|k| k as f64 * interval).collect();
    // Drop a last grid point that is a rounding hair away from t_end.
    if let Some(&last) = times.last() {
        if t_end - last <= 1e-9 * interval {
            times.pop();
        }
    }
    times.push(t_end);
    times
}

/// Integrates dρ/dt = rhs(ρ) from t = 0 and returns (t, ρ) at the sample times.
pub fn integrate_linear<F>(
    rhs: F,
    rho0: CMatrix3,
    t_end: f64,
    control: &StepControl,
) -> Result<(Vec<(f64, CMatrix3)>, IntegratorStats)>
where
    F: Fn(&CMatrix3) -> CMatrix3,
{
    control.validate()?;
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::Config(format!(
            "t_end must be positive, got {t_end}"
        )));
    }
    let targets = sample_times(t_end, control.sample_interval);
    let mut out = Vec::with_capacity(targets.len() + 1);
    out.push((0.0, rho0));
    let mut stats = IntegratorStats::default();
    match control.mode {
        StepMode::Fixed { dt } => {
            let mut y = rho0;
            let mut t = 0.0;
            for &target in &targets {
                let n = ((target - t) / dt).ceil().max(1.0) as usize;
                let h = (target - t) / n as f64;
                for _ in 0..n {
                    y = rk4_step(&rhs, &y, h);
                    hermitize(&mut y);
                    stats.accepted += 1;
                    stats.rhs_evaluations += 4;
                    if stats.accepted > control.max_steps {
                        return Err(Error::Integration {
                            t,
                            reason: "maximum step count exceeded".into(),
                        });
                    }
                }
                if !y.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::Integration {
                        t,
                        reason: "non-finite state".into(),
                    });
                }
                t = target;
                out.push((t, y));
            }
        }
        StepMode::Adaptive { atol, rtol } => {
            let mut stepper = Dopri5::new(rhs, atol, rtol, control.max_steps);
            let mut y = rho0;
            let mut t = 0.0;
            let mut h = stepper.initial_step(&y, t_end);
            for &target in &targets {
                while t < target {
                    let (t_new, y_new, h_next) = stepper.step(t, &y, h, target)?;
                    t = t_new;
                    y = y_new;
                    h = h_next;
                }
                out.push((t, y));
            }
            stats = stepper.stats;
        }
    }
    Ok((out, stats))
}

fn rk4_step<F: Fn(&CMatrix3) -> CMatrix3>(f: &F, y: &CMatrix3, h: f64) -> CMatrix3 {
    let hc = Complex64::new(h, 0.0);
    let half = Complex64::new(0.5 * h, 0.0);
    let k1 = f(y);
    let k2 = f(&(y + k1 * half));
    let k3 = f(&(y + k2 * half));
    let k4 = f(&(y + k3 * hc));
    y + (k1 + (k2 + k3).scale(2.0) + k4) * (hc / 6.0)
}

// Dormand–Prince 5(4) tableau. The generators are time-independent, so the
// stage nodes c_i are not needed.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

struct Dopri5<F> {
    f: F,
    atol: f64,
    rtol: f64,
    max_steps: usize,
    stats: IntegratorStats,
}

impl<F: Fn(&CMatrix3) -> CMatrix3> Dopri5<F> {
    fn new(f: F, atol: f64, rtol: f64, max_steps: usize) -> Self {
        Self {
            f,
            atol,
            rtol,
            max_steps,
            stats: IntegratorStats::default(),
        }
    }

    fn error_norm(&self, y: &CMatrix3, y_new: &CMatrix3, err: &CMatrix3) -> f64 {
        let mut acc = 0.0;
        for ((a, b), e) in y.iter().zip(y_new.iter()).zip(err.iter()) {
            for (ya, yb, ee) in [(a.re, b.re, e.re), (a.im, b.im, e.im)] {
                let sc = self.atol + self.rtol * ya.abs().max(yb.abs());
                acc += (ee / sc).powi(2);
            }
        }
        (acc / 18.0).sqrt()
    }

    fn initial_step(&mut self, y: &CMatrix3, span: f64) -> f64 {
        let f0 = (self.f)(y);
        self.stats.rhs_evaluations += 1;
        let d0 = max_abs(y).max(1e-5);
        let d1 = max_abs(&f0).max(1e-5);
        (0.01 * d0 / d1).min(span)
    }

    /// Takes one accepted step, never passing `t_stop`. Returns (t, y, next h).
    fn step(
        &mut self,
        t: f64,
        y: &CMatrix3,
        h_try: f64,
        t_stop: f64,
    ) -> Result<(f64, CMatrix3, f64)> {
        let mut h = h_try;
        loop {
            let remaining = t_stop - t;
            let clipped = h >= remaining;
            let hs = if clipped { remaining } else { h };
            if hs <= 1e-14 * t.abs().max(1.0) && !clipped {
                return Err(Error::Integration {
                    t,
                    reason: format!("step size underflow (h = {hs:e})"),
                });
            }
            if self.stats.accepted + self.stats.rejected >= self.max_steps {
                return Err(Error::Integration {
                    t,
                    reason: "maximum step count exceeded".into(),
                });
            }
            let f = &self.f;
            let c = |x: f64| Complex64::new(x * hs, 0.0);
            let k1 = f(y);
            let k2 = f(&(y + k1 * c(A21)));
            let k3 = f(&(y + k1 * c(A31) + k2 * c(A32)));
            let k4 = f(&(y + k1 * c(A41) + k2 * c(A42) + k3 * c(A43)));
            let k5 = f(&(y + k1 * c(A51) + k2 * c(A52) + k3 * c(A53) + k4 * c(A54)));
            let k6 = f(&(y + k1 * c(A61) + k2 * c(A62) + k3 * c(A63) + k4 * c(A64) + k5 * c(A65)));
            let y_new = y + k1 * c(B1) + k3 * c(B3) + k4 * c(B4) + k5 * c(B5) + k6 * c(B6);
            let k7 = f(&y_new);
            self.stats.rhs_evaluations += 7;
            let err = k1 * c(E1) + k3 * c(E3) + k4 * c(E4) + k5 * c(E5) + k6 * c(E6) + k7 * c(E7);
            let en = self.error_norm(y, &y_new, &err);
            if !en.is_finite() {
                return Err(Error::Integration {
                    t,
                    reason: "non-finite state or derivative".into(),
                });
            }
            if en <= 1.0 {
                self.stats.accepted += 1;
                let grow = if en == 0.0 {
                    5.0
                } else {
                    (0.9 * en.powf(-0.2)).clamp(0.2, 5.0)
                };
                let mut y_new = y_new;
                hermitize(&mut y_new);
                let t_new = if clipped { t_stop } else { t + hs };
                // A clipped step says nothing about the natural step size; keep h.
                let h_next = if clipped { h.max(hs * grow) } else { hs * grow };
                return Ok((t_new, y_new, h_next));
            }
            self.stats.rejected += 1;
            h = hs * (0.9 * en.powf(-0.2)).clamp(0.2, 1.0);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decay(rate: f64) -> impl Fn(&CMatrix3) -> CMatrix3 {
        move |y: &CMatrix3| {
            let mut d = CMatrix3::zeros();
            d[(1, 1)] = -rate * y[(1, 1)];
            d[(0, 0)] = rate * y[(1, 1)];
            d
        }
    }

    fn excited() -> CMatrix3 {
        DensityMatrix::pure_level(Basis::Bare, 1).into_matrix()
    }

    #[test]
    fn adaptive_matches_exponential() {
        let (out, stats) =
            integrate_linear(decay(2.0), excited(), 5.0, &StepControl::default()).unwrap();
        for (t, y) in &out {
            assert!((y[(1, 1)].re - (-2.0 * t).exp()).abs() < 1e-8, "t = {t}");
        }
        assert!(stats.accepted > 0);
        assert_eq!(out.last().unwrap().0, 5.0);
    }

    #[test]
    fn fixed_step_is_deterministic_and_accurate() {
        let ctrl = StepControl::fixed(1e-3).with_sample_interval(0.1);
        let (a, _) = integrate_linear(decay(1.0), excited(), 3.0, &ctrl).unwrap();
        let (b, _) = integrate_linear(decay(1.0), excited(), 3.0, &ctrl).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 31);
        let (t, y) = a.last().unwrap();
        assert!((y[(1, 1)].re - (-t).exp()).abs() < 1e-12);
    }

    #[test]
    fn sample_grid_ends_at_t_end() {
        assert_eq!(sample_times(1.0, 0.25), vec![0.25, 0.5, 0.75, 1.0]);
        assert_eq!(sample_times(1.1, 0.5), vec![0.5, 1.0, 1.1]);
        assert_eq!(sample_times(0.3, 0.1).len(), 3);
    }

    #[test]
    fn rejects_bad_controls() {
        let f = decay(1.0);
        assert!(integrate_linear(&f, excited(), -1.0, &StepControl::default()).is_err());
        assert!(integrate_linear(&f, excited(), 1.0, &StepControl::fixed(0.0)).is_err());
        assert!(integrate_linear(&f, excited(), 1.0, &StepControl::adaptive(0.0, 1e-8)).is_err());
    }

    #[test]
    fn non_finite_derivative_is_an_error() {
        let f = |_: &CMatrix3| CMatrix3::from_element(Complex64::new(f64::NAN, 0.0));
        let err = integrate_linear(f, excited(), 1.0, &StepControl::default()).unwrap_err();
        assert!(matches!(err, Error::Integration { t, .. } if t == 0.0));
    }

    #[test]
    fn step_budget_is_reported_with_time() {
        let mut ctrl = StepControl::default();
        ctrl.max_steps = 3;
        let err = integrate_linear(decay(50.0), excited(), 100.0, &ctrl).unwrap_err();
        assert!(matches!(err, Error::Integration { .. }));
    }
}
