//! The dressed eigenbasis at two-photon resonance and the rotation between bases.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::Matrix3;
use num_complex::Complex64;

use crate::density::{Basis, CMatrix3, DensityMatrix};
use crate::error::{Error, Result};
use crate::params::SystemParams;

/// Atom–field interaction Hamiltonian in the bare basis (a, b, c), ħ = 1.
#[rustfmt::skip]
pub fn interaction_hamiltonian(p: &SystemParams) -> Matrix3<f64> {
    Matrix3::new(
        0.0, -p.omega, -p.g_probe,
        -p.omega, -p.delta1, 0.0,
        -p.g_probe, 0.0, -p.delta2,
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedBasis {
    /// Rows are ⟨α|, ⟨β|, ⟨γ| in bare components (a, b, c).
    t: Matrix3<f64>,
    r: f64,
}

impl DressedBasis {
    pub fn t_matrix(&self) -> &Matrix3<f64> {
        &self.t
    }

    pub fn rabi(&self) -> f64 {
        self.r
    }

    /// Dressed energies in basis order (α, β, γ): (0, R, −R).
    pub fn energies(&self) -> [f64; 3] {
        [0.0, self.r, -self.r]
    }

    fn t_complex(&self) -> CMatrix3 {
        self.t.map(|x| Complex64::new(x, 0.0))
    }

    /// T M Tᵀ for an arbitrary matrix.
    pub fn rotate_to_dressed(&self, m: &CMatrix3) -> CMatrix3 {
        let t = self.t_complex();
        t * m * t.transpose()
    }

    /// Tᵀ M T for an arbitrary matrix.
    pub fn rotate_to_bare(&self, m: &CMatrix3) -> CMatrix3 {
        let t = self.t_complex();
        t.transpose() * m * t
    }
}

/// Eigenvectors of the resonant interaction Hamiltonian, in closed form.
pub fn build_dressed_basis(p: &SystemParams) -> Result<DressedBasis> {
    p.validate()?;
    if !p.is_resonant() {
        return Err(Error::Domain(format!(
            "dressed basis requires delta1 = delta2 = 0 (got {}, {})",
            p.delta1, p.delta2
        )));
    }
    let r = p.rabi();
    if r == 0.0 {
        return Err(Error::Domain(
            "no field present: dressed basis undefined".into(),
        ));
    }
    let (w, g) = (p.omega / r, p.g_probe / r);
    let s = FRAC_1_SQRT_2;
    #[rustfmt::skip]
    let t = Matrix3::new(
        0.0, -g, w,
        -s, s * w, s * g,
        s, s * w, s * g,
    );
    Ok(DressedBasis { t, r })
}

pub fn to_dressed(rho: &DensityMatrix, basis: &DressedBasis) -> Result<DensityMatrix> {
    Basis::Bare.ensure(rho.basis())?;
    Ok(DensityMatrix::new_unchecked(
        Basis::Dressed,
        basis.rotate_to_dressed(rho.matrix()),
    ))
}

pub fn to_bare(rho: &DensityMatrix, basis: &DressedBasis) -> Result<DensityMatrix> {
    Basis::Dressed.ensure(rho.basis())?;
    Ok(DensityMatrix::new_unchecked(
        Basis::Bare,
        basis.rotate_to_bare(rho.matrix()),
    ))
}
