//! Density-matrix equations of the V atom in the bare basis (a, b, c).
//!
//! |a⟩ is the ground state, |b⟩ is driven from |a⟩ by the coupling laser (Ω,
//! detuning Δ₁) and decays at γ_b, |c⟩ is driven by the probe (G, Δ₂), decays
//! at γ_c and is pumped incoherently from |a⟩ at Λ in both directions.

use num_complex::Complex64;

use crate::density::{Basis, CMatrix3, DensityMatrix};
use crate::error::Result;
use crate::integrator::{integrate_linear, ModelSnapshot, Sample, StepControl, Trajectory};
use crate::params::SystemParams;
use crate::steady::stationary_state;

const A: usize = 0;
const B: usize = 1;
const C: usize = 2;

/// Time derivative of an arbitrary 3×3 matrix under the bare equations.
///
/// Lower-triangle elements are written out as the linear extension of the
/// conjugate equations, so the map is linear on all of ℂ³ˣ³ and
/// Hermiticity-preserving on Hermitian inputs.
///
/// The ρ_ac coherence is damped at Λ + γ_c/2: |a⟩ is emptied by the pump at
/// Λ and |c⟩ by decay plus reverse pumping at γ_c + Λ, and the coherence
/// loses half the sum of the two.
pub fn bare_derivative(rho: &CMatrix3, p: &SystemParams) -> CMatrix3 {
    let i = Complex64::i();
    let (w, g, gb, gc, l) = (p.omega, p.g_probe, p.gamma_b, p.gamma_c, p.lambda_pump);
    let r = |x: usize, y: usize| rho[(x, y)];

    let damp_ab = Complex64::new(0.5 * (l + gb), p.delta1);
    let damp_ac = Complex64::new(l + 0.5 * gc, p.delta2);
    let damp_bc = Complex64::new(0.5 * (l + gb + gc), p.delta2 - p.delta1);

    let mut d = CMatrix3::zeros();
    d[(A, A)] = -l * r(A, A)
        + (l + gc) * r(C, C)
        + gb * r(B, B)
        + i * w * (r(B, A) - r(A, B))
        + i * g * (r(C, A) - r(A, C));
    d[(B, B)] = -gb * r(B, B) + i * w * (r(A, B) - r(B, A));
    d[(C, C)] = l * r(A, A) - (l + gc) * r(C, C) + i * g * (r(A, C) - r(C, A));

    d[(A, B)] = -damp_ab * r(A, B) + i * w * (r(B, B) - r(A, A)) + i * g * r(C, B);
    d[(A, C)] = -damp_ac * r(A, C) + i * g * (r(C, C) - r(A, A)) + i * w * r(B, C);
    d[(B, C)] = -damp_bc * r(B, C) + i * w * r(A, C) - i * g * r(B, A);

    d[(B, A)] = -damp_ab.conj() * r(B, A) - i * w * (r(B, B) - r(A, A)) - i * g * r(B, C);
    d[(C, A)] = -damp_ac.conj() * r(C, A) - i * g * (r(C, C) - r(A, A)) - i * w * r(C, B);
    d[(C, B)] = -damp_bc.conj() * r(C, B) - i * w * r(C, A) + i * g * r(A, B);
    d
}

/// dρ/dt for a bare-basis density matrix.
pub fn bare_rhs(rho: &DensityMatrix, p: &SystemParams) -> Result<CMatrix3> {
    Basis::Bare.ensure(rho.basis())?;
    Ok(bare_derivative(rho.matrix(), p))
}

pub fn integrate_bare(
    rho0: &DensityMatrix,
    p: &SystemParams,
    t_end: f64,
    control: &StepControl,
) -> Result<Trajectory> {
    Basis::Bare.ensure(rho0.basis())?;
    rho0.check()?;
    p.validate()?;
    let (points, stats) =
        integrate_linear(|m| bare_derivative(m, p), *rho0.matrix(), t_end, control)?;
    Ok(Trajectory {
        basis: Basis::Bare,
        model: ModelSnapshot::Bare(*p),
        control: *control,
        stats,
        samples: points
            .into_iter()
            .map(|(t, m)| Sample {
                t,
                rho: DensityMatrix::new_unchecked(Basis::Bare, m),
            })
            .collect(),
    })
}

/// Exact stationary point of the bare equations.
pub fn bare_steady_state(p: &SystemParams) -> Result<DensityMatrix> {
    p.validate()?;
    let m = stationary_state(|m| bare_derivative(m, p))?;
    Ok(DensityMatrix::new_unchecked(Basis::Bare, m))
}
