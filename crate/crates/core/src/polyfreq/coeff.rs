//! Sufficient attenuation test on `|D(jw)|^2 - |N(jw)|^2`.

use super::poly::Poly;
use super::rational::RationalTF;
use super::transfer::build_h_lfp_scalar;
use crate::control::GainSet;
use crate::error::{Error, Result};
use crate::model::VehicleParams;

const RESIDUE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientCondition {
    pub a0: f64,
    pub a2: f64,
    pub a4: f64,
    pub a6: f64,
    /// All four coefficients strictly positive, which makes `|H(jw)| < 1`
    /// at every finite frequency.
    pub all_positive: bool,
    /// The full difference polynomial in `w`.
    pub difference: Poly,
}

impl CoefficientCondition {
    pub fn coefficients(&self) -> [f64; 4] {
        [self.a6, self.a4, self.a2, self.a0]
    }
}

pub fn coefficient_condition(
    params: &VehicleParams,
    gains: &GainSet,
) -> Result<CoefficientCondition> {
    coefficient_condition_tf(&build_h_lfp_scalar(params, gains)?)
}

/// Expand `|D(jw)|^2 - |N(jw)|^2` for `H = N / D` and read off the even
/// coefficients up to `w^6`.
pub fn coefficient_condition_tf(h: &RationalTF) -> Result<CoefficientCondition> {
    let d2 = h.den.magnitude_squared_jw();
    let n2 = h.num.magnitude_squared_jw();
    let difference = &d2 - &n2;
    let scale = d2.norm_inf().max(n2.norm_inf());
    if scale == 0.0 {
        return Err(Error::ZeroPolynomial);
    }
    for (k, &c) in difference.coeffs().iter().enumerate() {
        let residue = c.abs() / scale;
        if (k % 2 == 1 || k > 6) && residue > RESIDUE_TOL {
            return Err(Error::Consistency(format!(
                "coefficient of w^{k} is {c:e}, expected zero"
            )));
        }
    }
    let [a0, a2, a4, a6] = [0, 2, 4, 6].map(|k| difference.coeff(k));
    Ok(CoefficientCondition {
        a0,
        a2,
        a4,
        a6,
        all_positive: a0 > 0.0 && a2 > 0.0 && a4 > 0.0 && a6 > 0.0,
        difference,
    })
}
