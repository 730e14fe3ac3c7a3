//! Stationary states of Hermiticity-preserving linear generators on 3×3 matrices.

use nalgebra::{DMatrix, DVector, SMatrix};

use crate::density::{from_hermitian_coords, hermitian_coords, CMatrix3};
use crate::error::{Error, Result};

/// Singular values below this fraction of the largest are treated as zero.
const NULLITY_RTOL: f64 = 1e-12;

/// The generator as a real 9×9 matrix acting on Hermitian coordinates.
pub fn real_generator<F>(rhs: F) -> SMatrix<f64, 9, 9>
where
    F: Fn(&CMatrix3) -> CMatrix3,
{
    let mut l = SMatrix::<f64, 9, 9>::zeros();
    for k in 0..9 {
        let mut unit = [0.0; 9];
        unit[k] = 1.0;
        let image = hermitian_coords(&rhs(&from_hermitian_coords(&unit)));
        for (row, v) in image.into_iter().enumerate() {
            l[(row, k)] = v;
        }
    }
    l
}

/// Number of (numerically) vanishing singular values of the generator.
pub fn nullity(l: &SMatrix<f64, 9, 9>) -> usize {
    let sv = l.singular_values();
    let scale = sv.max().max(f64::MIN_POSITIVE);
    sv.iter().filter(|&&s| s <= NULLITY_RTOL * scale).count()
}

/// Unit-trace null vector of `rhs`, found by least squares on the generator
/// stacked with the trace row. Fails if the null space is not one-dimensional.
pub fn stationary_state<F>(rhs: F) -> Result<CMatrix3>
where
    F: Fn(&CMatrix3) -> CMatrix3,
{
    let l = real_generator(rhs);
    let dim = nullity(&l);
    if dim != 1 {
        return Err(Error::DegenerateSteadyState { nullity: dim });
    }
    let mut a = DMatrix::<f64>::zeros(10, 9);
    a.view_mut((0, 0), (9, 9)).copy_from(&l);
    for k in 0..3 {
        a[(9, k)] = 1.0;
    }
    let mut b = DVector::<f64>::zeros(10);
    b[9] = 1.0;
    let x = a
        .svd(true, true)
        .solve(&b, 1e-300)
        .map_err(|_| Error::SingularSystem("stationary-state least squares"))?;
    Ok(from_hermitian_coords(x.as_slice()))
}
