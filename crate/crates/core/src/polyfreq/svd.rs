use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Singular values `(sigma1, sigma2)` of a complex 2x2 matrix.
///
/// From the Gram matrix `A^H A`: its trace is `||A||_F^2` and its determinant
/// is `|det A|^2`, so `sigma1^2` is the larger root of the characteristic
/// quadratic. `sigma2 = |det A| / sigma1` avoids cancellation.
pub fn singular_values_2x2(a: &Matrix2<Complex64>) -> (f64, f64) {
    let fro2: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    let det = a.determinant().norm();
    let half = 0.5 * fro2;
    let disc = (half * half - det * det).max(0.0).sqrt();
    let s1 = (half + disc).sqrt();
    let s2 = if s1 > 0.0 { det / s1 } else { 0.0 };
    (s1, s2.min(s1))
}

pub fn sigma1_2x2(a: &Matrix2<Complex64>) -> f64 {
    singular_values_2x2(a).0
}

/// `sigma1(I + R)` for a numerically rank-one `R`.
///
/// With `sigma2(R) = 0` the singular-value interlacing bound gives
/// `sigma1(I + R) >= |sigma2(I) - sigma2(-R)| = 1`.
pub fn rank1_perturbation_bound(r: &Matrix2<Complex64>) -> Result<f64> {
    let (s1, s2) = singular_values_2x2(r);
    if s2 > 1e-10 * s1 {
        return Err(Error::NotRankDeficient { ratio: s2 / s1 });
    }
    let sigma = sigma1_2x2(&(Matrix2::identity() + r));
    if sigma < 1.0 - 1e-9 {
        return Err(Error::Consistency(format!(
            "sigma1(I + R) = {sigma} below 1 for a rank-one R"
        )));
    }
    Ok(sigma)
}
