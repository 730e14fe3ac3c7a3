//! Full dressed-basis equations of motion (α, β, γ), including every
//! population–coherence coupling the relaxation terms generate.

use num_complex::Complex64;

use crate::density::{Basis, CMatrix3, DensityMatrix};
use crate::error::Result;
use crate::integrator::{integrate_linear, ModelSnapshot, Sample, StepControl, Trajectory};
use crate::params::DressedRates;
use crate::steady::stationary_state;

const AL: usize = 0;
const BE: usize = 1;
const GA: usize = 2;

/// The six independent equations, read off the upper triangle of `rho`
/// (with lower-triangle entries taken from `rho` as they are).
fn upper_derivatives(rho: &CMatrix3, k: &DressedRates) -> [Complex64; 6] {
    let i = Complex64::i();
    let r = |x: usize, y: usize| rho[(x, y)];
    let (gt, gtp, lp) = (k.gamma_tilde, k.gamma_tilde_prime, k.lambda_prime);
    let exchange = k.beta_gamma_exchange();

    let aa = -(k.gamma_alpha + lp) * r(AL, AL)
        + gt * (r(AL, BE) + r(BE, AL))
        + gt * (r(AL, GA) + r(GA, AL))
        + 0.5 * lp * r(BE, BE)
        - 0.5 * lp * (r(BE, GA) + r(GA, BE))
        + 0.5 * lp * r(GA, GA);

    let ab = -(k.gamma_alpha_beta - i * k.r) * r(AL, BE)
        - (k.gamma_beta - 0.25 * lp) * r(AL, GA)
        - gtp * r(BE, GA)
        + (gt - gtp) * r(GA, BE)
        + gt * r(AL, AL)
        + (gt + gtp) * r(BE, BE)
        + gtp * r(GA, GA);

    let ag = -(k.gamma_alpha_beta + i * k.r) * r(AL, GA) - (k.gamma_beta - 0.25 * lp) * r(AL, BE)
        + (gt - gtp) * r(BE, GA)
        - gtp * r(GA, BE)
        + gt * r(AL, AL)
        + gtp * r(BE, BE)
        + (gt + gtp) * r(GA, GA);

    let bb = -(k.gamma_beta + 0.5 * k.lambda) * r(BE, BE)
        + 0.5 * (k.gamma_alpha + lp) * r(AL, AL)
        + exchange * r(GA, GA)
        - gt * (r(AL, GA) + r(GA, AL))
        + 0.25 * lp * (r(BE, GA) + r(GA, BE));

    let bg = -(k.gamma_beta_gamma + 2.0 * i * k.r) * r(BE, GA) - exchange * r(GA, BE)
        + gt * (r(AL, BE) + r(GA, AL))
        + 2.0 * gt * (r(BE, AL) + r(AL, GA))
        - 0.5 * (k.gamma_alpha + lp) * r(AL, AL)
        - (2.0 * k.gamma_beta - 0.25 * lp) * (r(BE, BE) + r(GA, GA));

    let gg = -(k.gamma_beta + 0.5 * k.lambda) * r(GA, GA) - gt * (r(AL, BE) + r(BE, AL))
        + 0.25 * lp * (r(BE, GA) + r(GA, BE))
        + 0.5 * (k.gamma_alpha + lp) * r(AL, AL)
        + exchange * r(BE, BE);

    [aa, ab, ag, bb, bg, gg]
}

/// Time derivative of an arbitrary 3×3 matrix under the dressed equations.
///
/// The written equations give the diagonal and (αβ, αγ, βγ); the remaining
/// elements follow from d/dt ρ_ji = (d/dt ρ_ij)* evaluated on ρ†, which is
/// linear in ρ and reduces to plain conjugation for Hermitian input.
pub fn dressed_derivative(rho: &CMatrix3, k: &DressedRates) -> CMatrix3 {
    let [aa, ab, ag, bb, bg, gg] = upper_derivatives(rho, k);
    let [_, ba, ga, _, gb, _] = upper_derivatives(&rho.adjoint(), k);
    let mut d = CMatrix3::zeros();
    d[(AL, AL)] = aa;
    d[(BE, BE)] = bb;
    d[(GA, GA)] = gg;
    d[(AL, BE)] = ab;
    d[(AL, GA)] = ag;
    d[(BE, GA)] = bg;
    d[(BE, AL)] = ba.conj();
    d[(GA, AL)] = ga.conj();
    d[(GA, BE)] = gb.conj();
    d
}

pub fn dressed_rhs(rho: &DensityMatrix, rates: &DressedRates) -> Result<CMatrix3> {
    Basis::Dressed.ensure(rho.basis())?;
    Ok(dressed_derivative(rho.matrix(), rates))
}

pub fn integrate_dressed(
    rho0: &DensityMatrix,
    rates: &DressedRates,
    t_end: f64,
    control: &StepControl,
) -> Result<Trajectory> {
    Basis::Dressed.ensure(rho0.basis())?;
    rho0.check()?;
    let (points, stats) = integrate_linear(
        |m| dressed_derivative(m, rates),
        *rho0.matrix(),
        t_end,
        control,
    )?;
    Ok(Trajectory {
        basis: Basis::Dressed,
        model: ModelSnapshot::Dressed(*rates),
        control: *control,
        stats,
        samples: points
            .into_iter()
            .map(|(t, m)| Sample {
                t,
                rho: DensityMatrix::new_unchecked(Basis::Dressed, m),
            })
            .collect(),
    })
}

pub fn dressed_steady_state(rates: &DressedRates) -> Result<DensityMatrix> {
    let m = stationary_state(|m| dressed_derivative(m, rates))?;
    Ok(DensityMatrix::new_unchecked(Basis::Dressed, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bare::bare_derivative;
    use crate::density::max_abs;
    use crate::dressed_basis::build_dressed_basis;
    use crate::params::{derive_rates, SystemParams};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn arbitrary_matrix(rng: &mut impl Rng) -> CMatrix3 {
        CMatrix3::from_fn(|_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
    }

    #[test]
    fn closure_on_arbitrary_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let rates = derive_rates(&SystemParams::default()).unwrap();
        for _ in 0..100 {
            let d = dressed_derivative(&arbitrary_matrix(&mut rng), &rates);
            assert!(d.trace().norm() < 1e-13);
        }
    }

    /// The dressed equations must be the rotation of the bare ones.
    #[test]
    fn similarity_image_of_bare_equations() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let cases = [
            SystemParams::default(),
            SystemParams::new(3.0, 4.0, 1.0, 1.0, 0.0),
            SystemParams::new(1.0, 2.0, 0.5, 1.0, 0.7),
            SystemParams::new(5.0, 5.0, 3.0, 1.0, 2.0),
        ];
        for p in cases {
            let basis = build_dressed_basis(&p).unwrap();
            let rates = derive_rates(&p).unwrap();
            for _ in 0..25 {
                let m = arbitrary_matrix(&mut rng);
                let direct = dressed_derivative(&m, &rates);
                let rotated =
                    basis.rotate_to_dressed(&bare_derivative(&basis.rotate_to_bare(&m), &p));
                assert!(max_abs(&(direct - rotated)) <= 1e-10, "{p}");
            }
        }
    }

    #[test]
    fn no_interference_decouples_populations() {
        let rates = derive_rates(&SystemParams::new(4.0, 3.0, 1.0, 1.0, 0.0)).unwrap();
        let mut m = CMatrix3::zeros();
        m[(AL, BE)] = Complex64::new(0.2, 0.1);
        m[(BE, AL)] = Complex64::new(0.2, -0.1);
        m[(AL, GA)] = Complex64::new(-0.1, 0.3);
        m[(GA, AL)] = Complex64::new(-0.1, -0.3);
        let d = dressed_derivative(&m, &rates);
        for n in 0..3 {
            assert_eq!(d[(n, n)].norm(), 0.0);
        }
    }

    #[test]
    fn conjugate_inputs_give_conjugate_derivatives() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let rates = derive_rates(&SystemParams::new(2.0, 0.5, 1.5, 1.0, 0.4)).unwrap();
        let rho = DensityMatrix::random(Basis::Dressed, &mut rng);
        let d = dressed_derivative(rho.matrix(), &rates);
        let dc = dressed_derivative(&rho.matrix().adjoint(), &rates);
        assert!(max_abs(&(d.adjoint() - dc)) < 1e-14);
    }

    #[test]
    fn steady_state_residual_and_trace() {
        let rates = derive_rates(&SystemParams::default()).unwrap();
        let rho = dressed_steady_state(&rates).unwrap();
        assert!(max_abs(&dressed_rhs(&rho, &rates).unwrap()) <= 1e-12);
        assert!((rho.trace().re - 1.0).abs() < 1e-14);
        rho.check().unwrap();
    }

    #[test]
    fn bare_input_is_rejected() {
        let rates = derive_rates(&SystemParams::default()).unwrap();
        assert!(dressed_rhs(&DensityMatrix::pure_level(Basis::Bare, 0), &rates).is_err());
    }
}
