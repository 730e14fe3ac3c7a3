//! Physical inputs and the relaxation rates they induce in the dressed basis.
//!
//! Every rate and frequency is expressed in units of `gamma_c` (the spontaneous
//! rate of the probe level), times in `1/gamma_c`, and ħ = 1.

use std::f64::consts::SQRT_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The seven inputs of the driven V atom.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemParams {
    /// Rabi frequency of the coupling laser on |a⟩↔|b⟩.
    pub omega: f64,
    /// Rabi frequency of the probe on |a⟩↔|c⟩.
    pub g_probe: f64,
    /// Coupling detuning ω_L − ω_ba.
    pub delta1: f64,
    /// Probe detuning ω_p − ω_ca.
    pub delta2: f64,
    /// Spontaneous rate of |b⟩.
    pub gamma_b: f64,
    /// Spontaneous rate of |c⟩; 1 in the natural unit system.
    pub gamma_c: f64,
    /// Incoherent pump rate on |a⟩↔|c⟩.
    pub lambda_pump: f64,
}

impl Default for SystemParams {
    /// The reference working point: Ω = 20, G = 0.1, γ_b = 2, γ_c = 1, Λ = 3, on resonance.
    fn default() -> Self {
        Self {
            omega: 20.0,
            g_probe: 0.1,
            delta1: 0.0,
            delta2: 0.0,
            gamma_b: 2.0,
            gamma_c: 1.0,
            lambda_pump: 3.0,
        }
    }
}

impl SystemParams {
    pub fn new(omega: f64, g_probe: f64, gamma_b: f64, gamma_c: f64, lambda_pump: f64) -> Self {
        Self {
            omega,
            g_probe,
            delta1: 0.0,
            delta2: 0.0,
            gamma_b,
            gamma_c,
            lambda_pump,
        }
    }

    pub fn with_detunings(mut self, delta1: f64, delta2: f64) -> Self {
        self.delta1 = delta1;
        self.delta2 = delta2;
        self
    }

    /// Parses a flat key/value TOML document. Missing keys keep their defaults.
    pub fn from_config_str(text: &str) -> Result<Self> {
        let params: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        for name in ParamName::ALL {
            let value = self.get(name);
            if !value.is_finite() {
                return Err(Error::InvalidParameter {
                    field: name.key(),
                    value,
                    reason: "must be finite",
                });
            }
        }
        let nonneg = [
            (ParamName::Omega, self.omega),
            (ParamName::GProbe, self.g_probe),
            (ParamName::GammaB, self.gamma_b),
            (ParamName::LambdaPump, self.lambda_pump),
        ];
        for (name, value) in nonneg {
            if value < 0.0 {
                return Err(Error::InvalidParameter {
                    field: name.key(),
                    value,
                    reason: "must be non-negative",
                });
            }
        }
        if self.gamma_c <= 0.0 {
            return Err(Error::InvalidParameter {
                field: ParamName::GammaC.key(),
                value: self.gamma_c,
                reason: "must be positive",
            });
        }
        Ok(())
    }

    /// Generalized Rabi frequency √(Ω² + G²).
    pub fn rabi(&self) -> f64 {
        self.omega.hypot(self.g_probe)
    }

    pub fn is_resonant(&self) -> bool {
        self.delta1 == 0.0 && self.delta2 == 0.0
    }

    pub fn get(&self, name: ParamName) -> f64 {
        match name {
            ParamName::Omega => self.omega,
            ParamName::GProbe => self.g_probe,
            ParamName::Delta1 => self.delta1,
            ParamName::Delta2 => self.delta2,
            ParamName::GammaB => self.gamma_b,
            ParamName::GammaC => self.gamma_c,
            ParamName::LambdaPump => self.lambda_pump,
        }
    }

    pub fn set(&mut self, name: ParamName, value: f64) {
        match name {
            ParamName::Omega => self.omega = value,
            ParamName::GProbe => self.g_probe = value,
            ParamName::Delta1 => self.delta1 = value,
            ParamName::Delta2 => self.delta2 = value,
            ParamName::GammaB => self.gamma_b = value,
            ParamName::GammaC => self.gamma_c = value,
            ParamName::LambdaPump => self.lambda_pump = value,
        }
    }

    pub fn with(mut self, name: ParamName, value: f64) -> Self {
        self.set(name, value);
        self
    }

    /// Classifies the coupling/probe ratio used to gate the strong-field formulas.
    pub fn field_regime(&self) -> FieldRegime {
        FieldRegime::of(self)
    }
}

impl fmt::Display for SystemParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "omega={} g_probe={} delta1={} delta2={} gamma_b={} gamma_c={} lambda_pump={}",
            self.omega,
            self.g_probe,
            self.delta1,
            self.delta2,
            self.gamma_b,
            self.gamma_c,
            self.lambda_pump
        )
    }
}

/// Names of the configurable inputs, spelled as in config files and CLI flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamName {
    Omega,
    GProbe,
    Delta1,
    Delta2,
    GammaB,
    GammaC,
    LambdaPump,
}

impl ParamName {
    pub const ALL: [ParamName; 7] = [
        ParamName::Omega,
        ParamName::GProbe,
        ParamName::Delta1,
        ParamName::Delta2,
        ParamName::GammaB,
        ParamName::GammaC,
        ParamName::LambdaPump,
    ];

    pub fn key(self) -> &'static str {
        match self {
            ParamName::Omega => "omega",
            ParamName::GProbe => "g_probe",
            ParamName::Delta1 => "delta1",
            ParamName::Delta2 => "delta2",
            ParamName::GammaB => "gamma_b",
            ParamName::GammaC => "gamma_c",
            ParamName::LambdaPump => "lambda_pump",
        }
    }
}

impl fmt::Display for ParamName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for ParamName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ParamName::ALL
            .into_iter()
            .find(|p| p.key() == s)
            .ok_or_else(|| Error::Config(format!("unknown parameter name `{s}`")))
    }
}

/// Ratio Ω/G at or above which the strong-field closed forms are trusted.
pub const STRONG_FIELD_RATIO: f64 = 10.0;
/// Ratio Ω/G at or above which asymptotic checks are expected to be clean.
pub const ASYMPTOTIC_RATIO: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldRegime {
    /// Ω ≥ 100 G.
    Asymptotic,
    /// 10 G ≤ Ω < 100 G.
    Strong,
    /// Ω < 10 G: strong-field formulas are outside their range.
    Weak,
}

impl FieldRegime {
    pub fn of(p: &SystemParams) -> Self {
        if p.omega >= ASYMPTOTIC_RATIO * p.g_probe {
            FieldRegime::Asymptotic
        } else if p.omega >= STRONG_FIELD_RATIO * p.g_probe {
            FieldRegime::Strong
        } else {
            FieldRegime::Weak
        }
    }

    pub fn is_strong(self) -> bool {
        !matches!(self, FieldRegime::Weak)
    }
}

/// Relaxation coefficients of the dressed-basis equations of motion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DressedRates {
    /// Generalized Rabi frequency R.
    pub r: f64,
    pub gamma_alpha: f64,
    pub gamma_beta: f64,
    pub gamma_alpha_beta: f64,
    pub gamma_beta_gamma: f64,
    /// Interference term ∝ GΩ(γ_b − γ_c − Λ).
    pub gamma_tilde: f64,
    /// Interference term ∝ GΩΛ.
    pub gamma_tilde_prime: f64,
    /// Dressed pump rate ΛΩ²/R².
    pub lambda_prime: f64,
    /// The bare pump rate Λ, carried along because several coefficients need it.
    pub lambda: f64,
}

impl DressedRates {
    /// Γ_β + Λ/2 − Λ′/2: the ρ_βγ ↔ ρ_γβ exchange coefficient.
    pub fn beta_gamma_exchange(&self) -> f64 {
        self.gamma_beta + 0.5 * self.lambda - 0.5 * self.lambda_prime
    }

    /// Γ_α + 3Λ′/2: decay constant of ρ_αα in the secular limit.
    pub fn alpha_population_decay(&self) -> f64 {
        self.gamma_alpha + 1.5 * self.lambda_prime
    }

    /// 2Γ_β + Λ − Λ′/2: decay constant of ρ_ββ − ρ_γγ in the secular limit.
    pub fn beta_gamma_population_decay(&self) -> f64 {
        2.0 * self.gamma_beta + self.lambda - 0.5 * self.lambda_prime
    }
}

pub fn derive_rates(p: &SystemParams) -> Result<DressedRates> {
    p.validate()?;
    let r2 = p.omega * p.omega + p.g_probe * p.g_probe;
    if r2 == 0.0 {
        return Err(Error::Domain(
            "no field present (omega = g_probe = 0): dressed basis undefined".into(),
        ));
    }
    let (w2, g2) = (p.omega * p.omega, p.g_probe * p.g_probe);
    let lambda = p.lambda_pump;

    let gamma_alpha = (p.gamma_b * g2 + p.gamma_c * w2) / r2;
    let gamma_beta = (p.gamma_b * w2 + p.gamma_c * g2) / (4.0 * r2);
    let lambda_prime = lambda * w2 / r2;
    let interference = p.g_probe * p.omega / (2.0 * SQRT_2 * r2);

    Ok(DressedRates {
        r: r2.sqrt(),
        gamma_alpha,
        gamma_beta,
        gamma_alpha_beta: gamma_beta + 0.5 * (gamma_alpha + lambda + 0.5 * lambda_prime),
        gamma_beta_gamma: 3.0 * gamma_beta + 1.5 * lambda - lambda_prime,
        gamma_tilde: interference * (p.gamma_b - p.gamma_c - lambda),
        gamma_tilde_prime: interference * lambda,
        lambda_prime,
        lambda,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn reference_point_rates() {
        let rates = derive_rates(&SystemParams::default()).unwrap();
        assert_relative_eq!(
            rates.lambda_prime,
            3.0 * 400.0 / 400.01,
            max_relative = 1e-15
        );
        assert_relative_eq!(rates.gamma_alpha, 1.00002, epsilon = 1e-5);
        assert_relative_eq!(rates.r, 20.00025, epsilon = 1e-5);
        assert_eq!(rates.r * rates.r, 400.01_f64.sqrt().powi(2));
    }

    #[test]
    fn no_probe_kills_interference() {
        let rates = derive_rates(&SystemParams::new(1.0, 0.0, 1.0, 1.0, 0.0)).unwrap();
        assert_eq!(rates.gamma_tilde, 0.0);
        assert_eq!(rates.gamma_tilde_prime, 0.0);
        assert_eq!(rates.lambda_prime, 0.0);
        assert_eq!(rates.r, 1.0);
    }

    #[test]
    fn equal_decays_without_pump_kill_gamma_tilde() {
        let rates = derive_rates(&SystemParams::new(3.0, 4.0, 1.0, 1.0, 0.0)).unwrap();
        assert_eq!(rates.r, 5.0);
        assert_eq!(rates.gamma_tilde, 0.0);
    }

    #[test]
    fn zero_field_is_a_domain_error() {
        let err = derive_rates(&SystemParams::new(0.0, 0.0, 1.0, 1.0, 1.0)).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn gamma_tilde_sign_follows_decay_imbalance() {
        let base = SystemParams::new(5.0, 1.0, 1.0, 1.0, 0.5);
        for gamma_b in [0.2, 1.0, 1.49, 1.5, 1.51, 3.0] {
            let p = base.with(ParamName::GammaB, gamma_b);
            let t = derive_rates(&p).unwrap().gamma_tilde;
            let driver = p.gamma_b - p.gamma_c - p.lambda_pump;
            assert_eq!(
                t.partial_cmp(&0.0),
                driver.partial_cmp(&0.0),
                "gamma_b = {gamma_b}"
            );
        }
    }

    #[test]
    fn validation_names_the_field() {
        let mut p = SystemParams::default();
        p.gamma_b = -1.0;
        match p.validate().unwrap_err() {
            Error::InvalidParameter { field, .. } => assert_eq!(field, "gamma_b"),
            other => panic!("unexpected {other:?}"),
        }
        p.gamma_b = 1.0;
        p.gamma_c = 0.0;
        assert!(p.validate().is_err());
    }

    #[test]
    fn config_keys_and_defaults() {
        let p = SystemParams::from_config_str("# pump only\nlambda_pump = 0.5\ngamma_b = 0.75\n")
            .unwrap();
        assert_eq!(p.lambda_pump, 0.5);
        assert_eq!(p.gamma_b, 0.75);
        assert_eq!(p.omega, 20.0);
        assert!(SystemParams::from_config_str("").unwrap() == SystemParams::default());
        assert!(SystemParams::from_config_str("gamma_x = 1.0").is_err());
        assert!(SystemParams::from_config_str("gamma_b = -2.0").is_err());
    }

    #[test]
    fn param_names_round_trip() {
        for name in ParamName::ALL {
            assert_eq!(name.key().parse::<ParamName>().unwrap(), name);
        }
    }

    #[test]
    fn recomputation_is_bit_identical() {
        let p = SystemParams::new(7.3, 0.9, 1.7, 1.0, 2.2);
        assert_eq!(derive_rates(&p).unwrap(), derive_rates(&p).unwrap());
    }
}
