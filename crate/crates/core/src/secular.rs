//! Closed-form solutions of the dressed equations in the secular limit
//! (R large compared with every relaxation rate).
//!
//! Everything here is a scalar formula in the dressed rates or the atomic
//! parameters. Nothing calls the ODE or steady-state solvers, so comparisons
//! against them are independent checks.

use num_complex::Complex64;
use serde::Serialize;

use crate::density::{hermitize, Basis, CMatrix3, DensityMatrix};
use crate::dressed_basis::{build_dressed_basis, to_bare};
use crate::error::{Error, Result};
use crate::params::{DressedRates, FieldRegime, SystemParams};

fn nonzero(value: f64, what: &'static str) -> Result<f64> {
    if value == 0.0 || !value.is_finite() {
        Err(Error::DegenerateDenominator(what))
    } else {
        Ok(value)
    }
}

fn nonzero_c(value: Complex64, what: &'static str) -> Result<Complex64> {
    if value.norm() == 0.0 || !value.is_finite() {
        Err(Error::DegenerateDenominator(what))
    } else {
        Ok(value)
    }
}

/// Secular steady populations (α, β, γ).
pub fn secular_population_steady(k: &DressedRates) -> Result<[f64; 3]> {
    let den = nonzero(2.0 * k.gamma_alpha + 3.0 * k.lambda_prime, "2Γα + 3Λ′")?;
    let aa = k.lambda_prime / den;
    let bb = (k.gamma_alpha + k.lambda_prime) / den;
    Ok([aa, bb, bb])
}

/// Secular steady populations with Ω ≫ G, in the atomic parameters.
pub fn strong_field_populations(p: &SystemParams) -> Result<[f64; 3]> {
    let den = nonzero(2.0 * p.gamma_c + 3.0 * p.lambda_pump, "2γc + 3Λ")?;
    let bb = (p.gamma_c + p.lambda_pump) / den;
    Ok([p.lambda_pump / den, bb, bb])
}

/// Population relaxation with the coherences dropped.
pub fn secular_population_transient(t: f64, rho0: [f64; 3], k: &DressedRates) -> Result<[f64; 3]> {
    let [sa, sb, sg] = secular_population_steady(k)?;
    let da = rho0[0] - sa;
    let c2 = rho0[1] - sb + 0.5 * da;
    let e1 = (-k.alpha_population_decay() * t).exp();
    let e2 = (-k.beta_gamma_population_decay() * t).exp();
    Ok([
        sa + da * e1,
        sb + c2 * e2 - 0.5 * da * e1,
        sg - c2 * e2 - 0.5 * da * e1,
    ])
}

/// Population relaxation with the free ρ_βγ oscillation kept as a source
/// for ρ_αα.
///
/// The source term is −Λ′ Re ρ_βγ with ρ_βγ(t) = ρ_βγ(0) e^{−(Γ_βγ + 2iR)t};
/// its forced response is taken for complex ρ_βγ(0), which reduces to the
/// familiar cos/sin form when ρ_βγ(0) is real.
pub fn improved_population_transient(
    t: f64,
    rho0: &DensityMatrix,
    k: &DressedRates,
) -> Result<[f64; 3]> {
    Basis::Dressed.ensure(rho0.basis())?;
    let [sa, sb, sg] = secular_population_steady(k)?;
    let k1 = k.alpha_population_decay();
    let shift = nonzero_c(
        Complex64::new(k1 - k.gamma_beta_gamma, -2.0 * k.r),
        "(Γα + 3Λ′/2 − Γβγ)² + 4R²",
    )?;
    let mode = Complex64::new(-k.gamma_beta_gamma, -2.0 * k.r);
    let amplitude = -k.lambda_prime * rho0.get(1, 2) / shift;
    let par = |s: f64| (amplitude * (mode * s).exp()).re;

    let [a0, b0, _] = rho0.populations();
    let c1 = a0 - sa - par(0.0);
    let c2 = b0 - sb + 0.5 * (a0 - sa);
    let e1 = (-k1 * t).exp();
    let e2 = (-k.beta_gamma_population_decay() * t).exp();
    let p = par(t);
    Ok([
        sa + c1 * e1 + p,
        sb - 0.5 * c1 * e1 + c2 * e2 - 0.5 * p,
        sg - 0.5 * c1 * e1 - c2 * e2 - 0.5 * p,
    ])
}

/// The off-diagonal elements the secular coherence solutions describe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecularCoherences {
    pub alpha_beta: Complex64,
    pub alpha_gamma: Complex64,
    pub beta_gamma: Complex64,
    pub gamma_beta: Complex64,
}

/// Amplitudes of the four coherence modes: A and B are the free αβ and αγ
/// oscillations, C and D the two βγ modes near e^{∓2iRt}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecularModeConstants {
    pub a_const: Complex64,
    pub b_const: Complex64,
    pub c_const: Complex64,
    pub d_const: Complex64,
}

impl SecularModeConstants {
    pub const ZERO: Self = Self {
        a_const: Complex64::new(0.0, 0.0),
        b_const: Complex64::new(0.0, 0.0),
        c_const: Complex64::new(0.0, 0.0),
        d_const: Complex64::new(0.0, 0.0),
    };
}

/// Per-mode coefficients multiplying C and D in each coherence.
struct ModeShapes {
    ab_c: Complex64,
    ab_d: Complex64,
    ag_c: Complex64,
    ag_d: Complex64,
    bg_c: Complex64,
    bg_d: Complex64,
}

fn mode_shapes(k: &DressedRates) -> Result<ModeShapes> {
    let i = Complex64::i();
    let x = nonzero(k.beta_gamma_exchange(), "Γβ + Λ/2 − Λ′/2")?;
    let r = nonzero(k.r, "R")?;
    let (gt, gtp) = (k.gamma_tilde, k.gamma_tilde_prime);
    // Γ_αγ and Γ_αβ are the same rate.
    let gap = k.gamma_beta_gamma - k.gamma_alpha_beta;
    let den_ab_c = nonzero_c(x * Complex64::new(gap, 3.0 * r), "Γβγ − Γαβ + 3iR")?;
    let den_ab_d = nonzero_c(Complex64::new(gap, -r), "Γβγ − Γαβ − iR")?;
    let den_ag_c = nonzero_c(x * Complex64::new(gap, r), "Γβγ − Γαβ + iR")?;
    let den_ag_d = nonzero_c(Complex64::new(gap, -3.0 * r), "Γβγ − Γαβ − 3iR")?;
    Ok(ModeShapes {
        // The first term carries a minus sign: it is what the forced response
        // of ρ_αβ to the C mode of ρ_γβ gives.
        ab_c: (-(gt - gtp) * x + 4.0 * i * gtp * r) / den_ab_c,
        ab_d: ((gtp - gt) + i * gtp * x / (4.0 * r)) / den_ab_d,
        ag_c: (gtp * x - 4.0 * i * r * (gt - gtp)) / den_ag_c,
        ag_d: (gtp - i * (gt - gtp) * x / (4.0 * r)) / den_ag_d,
        bg_c: 4.0 * i * r / x,
        bg_d: i * x / (4.0 * r),
    })
}

/// Secular coherence transients for given mode amplitudes.
pub fn secular_coherence_transient(
    t: f64,
    c: &SecularModeConstants,
    k: &DressedRates,
) -> Result<SecularCoherences> {
    let s = mode_shapes(k)?;
    let e = |re: f64, im: f64| (Complex64::new(-re, -im) * t).exp();
    let free_ab = e(k.gamma_alpha_beta, -k.r);
    let free_ag = e(k.gamma_alpha_beta, k.r);
    let mode_c = e(k.gamma_beta_gamma, 2.0 * k.r);
    let mode_d = e(k.gamma_beta_gamma, -2.0 * k.r);
    let cc = c.c_const * mode_c;
    let dd = c.d_const * mode_d;
    Ok(SecularCoherences {
        alpha_beta: c.a_const * free_ab + s.ab_c * cc + s.ab_d * dd,
        alpha_gamma: c.b_const * free_ag + s.ag_c * cc + s.ag_d * dd,
        beta_gamma: s.bg_c * cc + s.bg_d * dd,
        gamma_beta: cc + dd,
    })
}

/// Mode amplitudes matching the coherences of `rho0` at t = 0.
pub fn fit_mode_constants(rho0: &DensityMatrix, k: &DressedRates) -> Result<SecularModeConstants> {
    Basis::Dressed.ensure(rho0.basis())?;
    let s = mode_shapes(k)?;
    // ρ_βγ(0) = bg_c C + bg_d D, ρ_γβ(0) = C + D
    let det = s.bg_c - s.bg_d;
    if det.norm() == 0.0 {
        return Err(Error::SingularSystem("βγ mode matrix (16R² = K²)"));
    }
    let (bg, gb) = (rho0.get(1, 2), rho0.get(2, 1));
    let c_const = (bg - s.bg_d * gb) / det;
    let d_const = gb - c_const;
    Ok(SecularModeConstants {
        a_const: rho0.get(0, 1) - s.ab_c * c_const - s.ab_d * d_const,
        b_const: rho0.get(0, 2) - s.ag_c * c_const - s.ag_d * d_const,
        c_const,
        d_const,
    })
}

fn steady_prefactors(k: &DressedRates) -> Result<(f64, f64)> {
    let den_ab = nonzero(k.gamma_alpha_beta.powi(2) + k.r * k.r, "Γαβ² + R²")?;
    let den_pop = nonzero(2.0 * k.gamma_alpha + 3.0 * k.lambda_prime, "2Γα + 3Λ′")?;
    Ok((den_ab, den_pop))
}

/// First term of the secular steady ρ_αβ, the part that carries the gain at
/// leading order in G/R.
pub fn secular_alpha_beta_leading(k: &DressedRates) -> Result<Complex64> {
    let (den_ab, den_pop) = steady_prefactors(k)?;
    let (ga, gt, gtp, lp) = (
        k.gamma_alpha,
        k.gamma_tilde,
        k.gamma_tilde_prime,
        k.lambda_prime,
    );
    let numerator = ga * gtp + (ga + 2.0 * lp) * (gt + gtp);
    Ok(Complex64::new(k.gamma_alpha_beta, k.r) * numerator / (den_ab * den_pop))
}

/// Secular steady-state coherences; ρ_αγ and ρ_γβ are the conjugates of
/// ρ_αβ and ρ_βγ.
pub fn secular_coherence_steady(k: &DressedRates) -> Result<SecularCoherences> {
    let i = Complex64::i();
    let (den_ab, den_pop) = steady_prefactors(k)?;
    let x = k.beta_gamma_exchange();
    let resonance = nonzero(
        k.gamma_beta_gamma.powi(2) + 4.0 * k.r * k.r - x * x,
        "Γβγ² + 4R² − (Γβ + Λ/2 − Λ′/2)²",
    )?;
    let (ga, gb, gt, gtp, lp, l) = (
        k.gamma_alpha,
        k.gamma_beta,
        k.gamma_tilde,
        k.gamma_tilde_prime,
        k.lambda_prime,
        k.lambda,
    );
    let drive = 2.0 * gb + l - 0.5 * lp;
    let second = 4.0
        * gb
        * Complex64::new(k.gamma_alpha_beta, k.r)
        * (ga + lp)
        * ((2.0 * gtp - gt) * drive - 2.0 * i * k.r * gt)
        / (den_ab * den_pop * resonance);
    let alpha_beta = secular_alpha_beta_leading(k)? + second;
    let beta_gamma = 4.0 * gb * (ga + lp) / den_pop * (drive - 2.0 * i * k.r) / -resonance;
    Ok(SecularCoherences {
        alpha_beta,
        alpha_gamma: alpha_beta.conj(),
        beta_gamma,
        gamma_beta: beta_gamma.conj(),
    })
}

/// A closed form that only holds for Ω ≫ G, tagged with how well the
/// parameters satisfy that.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StrongField<T> {
    pub value: T,
    pub regime: FieldRegime,
}

impl<T> StrongField<T> {
    pub fn warning(&self) -> Option<String> {
        (!self.regime.is_strong()).then(|| {
            "strong-field formula used with omega < 10 g_probe; expect large errors".to_string()
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StrongFieldImCoherences {
    pub im_alpha_beta: f64,
    /// Equal to `im_alpha_beta` in this limit.
    pub im_gamma_alpha: f64,
    pub im_beta_gamma: f64,
}

/// Leading-order imaginary parts of the steady coherences for Ω ≫ G.
pub fn strong_field_im_coherences(
    p: &SystemParams,
) -> Result<StrongField<StrongFieldImCoherences>> {
    p.validate()?;
    let (gb, gc, l) = (p.gamma_b, p.gamma_c, p.lambda_pump);
    let den = 2.0 * gc + 3.0 * l;
    let w = nonzero(p.omega, "Ω")?;
    let im_ab = p.g_probe * ((gc + 2.0 * l) * (gb - gc) + gc * l)
        / (2.0 * std::f64::consts::SQRT_2 * w * w * den);
    Ok(StrongField {
        value: StrongFieldImCoherences {
            im_alpha_beta: im_ab,
            im_gamma_alpha: im_ab,
            im_beta_gamma: gb * (gc + l) / (2.0 * w * den),
        },
        regime: FieldRegime::of(p),
    })
}

/// Bare-basis steady state for Ω ≫ G.
///
/// Populations are the strong-field dressed populations rotated back with the
/// G → 0 dressed basis, which keeps the trace at exactly one. The coherences
/// are the leading-order closed forms.
pub fn bare_strong_field_steady(p: &SystemParams) -> Result<StrongField<DensityMatrix>> {
    p.validate()?;
    let w = nonzero(p.omega, "Ω")?;
    let (g, gb, gc, l) = (p.g_probe, p.gamma_b, p.gamma_c, p.lambda_pump);
    let den = 2.0 * gc + 3.0 * l;

    let limit_basis = build_dressed_basis(&SystemParams { g_probe: 0.0, ..*p })?;
    let dressed = DensityMatrix::from_populations(Basis::Dressed, strong_field_populations(p)?)?;
    let mut m: CMatrix3 = to_bare(&dressed, &limit_basis)?.into_matrix();

    let ab = Complex64::new(0.0, -gb * (gc + l) / (2.0 * w * den));
    let ac = Complex64::new(0.0, g * (l * (gb - gc) - gc * gc) / (2.0 * w * w * den));
    let bc = Complex64::new(g * gc / (w * den), 0.0);
    for (i, j, v) in [(0, 1, ab), (0, 2, ac), (1, 2, bc)] {
        m[(i, j)] = v;
        m[(j, i)] = v.conj();
    }
    hermitize(&mut m);
    Ok(StrongField {
        value: DensityMatrix::new_unchecked(Basis::Bare, m),
        regime: FieldRegime::of(p),
    })
}
