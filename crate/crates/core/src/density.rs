//! 3×3 density matrices tagged with the basis they are expressed in.

use std::fmt;

use nalgebra::Matrix3;
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

pub type CMatrix3 = Matrix3<Complex64>;

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-10;
pub const POPULATION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    /// Ordered (a, b, c).
    Bare,
    /// Ordered (α, β, γ).
    Dressed,
}

impl Basis {
    pub fn level_names(self) -> [&'static str; 3] {
        match self {
            Basis::Bare => ["a", "b", "c"],
            Basis::Dressed => ["alpha", "beta", "gamma"],
        }
    }

    pub fn ensure(self, found: Basis) -> Result<()> {
        if self == found {
            Ok(())
        } else {
            Err(Error::BasisMismatch {
                expected: self,
                found,
            })
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::Bare => "bare",
            Basis::Dressed => "dressed",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    basis: Basis,
    elements: CMatrix3,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and population range.
    pub fn new(basis: Basis, elements: CMatrix3) -> Result<Self> {
        let rho = Self { basis, elements };
        rho.check()?;
        Ok(rho)
    }

    /// Wraps a matrix without validation. Used by integrators, which
    /// track trace drift and Hermiticity separately.
    pub fn new_unchecked(basis: Basis, elements: CMatrix3) -> Self {
        Self { basis, elements }
    }

    pub fn from_populations(basis: Basis, populations: [f64; 3]) -> Result<Self> {
        let m = CMatrix3::from_diagonal(&nalgebra::Vector3::from_iterator(
            populations.iter().map(|&p| Complex64::new(p, 0.0)),
        ));
        Self::new(basis, m)
    }

    /// All population in level `index` of `basis`.
    pub fn pure_level(basis: Basis, index: usize) -> Self {
        let mut m = CMatrix3::zeros();
        m[(index, index)] = Complex64::new(1.0, 0.0);
        Self { basis, elements: m }
    }

    pub fn maximally_mixed(basis: Basis) -> Self {
        Self {
            basis,
            elements: CMatrix3::identity() / Complex64::new(3.0, 0.0),
        }
    }

    /// Random full-rank state ρ = A A† / Tr(A A†) with Gaussian-like complex entries.
    pub fn random<R: Rng + ?Sized>(basis: Basis, rng: &mut R) -> Self {
        let a = CMatrix3::from_fn(|_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let m = a * a.adjoint();
        let tr = m.trace();
        let mut m = m / tr;
        hermitize(&mut m);
        Self { basis, elements: m }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn matrix(&self) -> &CMatrix3 {
        &self.elements
    }

    pub fn into_matrix(self) -> CMatrix3 {
        self.elements
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.elements[(i, j)]
    }

    pub fn population(&self, i: usize) -> f64 {
        self.elements[(i, i)].re
    }

    pub fn populations(&self) -> [f64; 3] {
        [self.population(0), self.population(1), self.population(2)]
    }

    pub fn trace(&self) -> Complex64 {
        self.elements.trace()
    }

    pub fn hermiticity_error(&self) -> f64 {
        max_abs(&(self.elements - self.elements.adjoint()))
    }

    pub fn check(&self) -> Result<()> {
        let herm = self.hermiticity_error();
        if !(herm <= HERMITIAN_TOL) {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (max |rho - rho^dag| = {herm:e})"
            )));
        }
        let tr = self.trace();
        if !((tr - Complex64::new(1.0, 0.0)).norm() <= TRACE_TOL) {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr} != 1")));
        }
        for (i, p) in self.populations().into_iter().enumerate() {
            if !(-POPULATION_TOL..=1.0 + POPULATION_TOL).contains(&p) {
                return Err(Error::InvalidDensityMatrix(format!(
                    "population {i} = {p} outside [0, 1]"
                )));
            }
        }
        Ok(())
    }
}

pub fn max_abs(m: &CMatrix3) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// Replaces `m` with (m + m†)/2.
pub fn hermitize(m: &mut CMatrix3) {
    let h = (*m + m.adjoint()) * Complex64::new(0.5, 0.0);
    *m = h;
}

/// Real coordinates of a Hermitian matrix:
/// (ρ00, ρ11, ρ22, Re ρ01, Im ρ01, Re ρ02, Im ρ02, Re ρ12, Im ρ12).
pub(crate) fn hermitian_coords(m: &CMatrix3) -> [f64; 9] {
    [
        m[(0, 0)].re,
        m[(1, 1)].re,
        m[(2, 2)].re,
        m[(0, 1)].re,
        m[(0, 1)].im,
        m[(0, 2)].re,
        m[(0, 2)].im,
        m[(1, 2)].re,
        m[(1, 2)].im,
    ]
}

pub(crate) fn from_hermitian_coords(x: &[f64]) -> CMatrix3 {
    let c = Complex64::new;
    let mut m = CMatrix3::zeros();
    m[(0, 0)] = c(x[0], 0.0);
    m[(1, 1)] = c(x[1], 0.0);
    m[(2, 2)] = c(x[2], 0.0);
    for (k, (i, j)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
        let z = c(x[3 + 2 * k], x[4 + 2 * k]);
        m[(i, j)] = z;
        m[(j, i)] = z.conj();
    }
    m
}
