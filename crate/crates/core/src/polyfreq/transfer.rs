//! Inter-vehicle transfer functions in the spatial Laplace variable `s`.
//!
//! With `Mhat(s) = s^2 v^2 M + s v C + L` and `K_fb(s) = K_P + s v K_D`,
//! the closed loop of a single vehicle is `A(s) = Mhat(s) + B K_fb(s)`.

use super::poly::Poly;
use super::rational::{PolyMatrix2, RationalTF, TFMatrix};
use crate::control::{GainSet, OutputSelector};
use crate::error::{Error, Result};
use crate::model::{build_matrices, VehicleParams};

/// `Mhat(s) + B K_fb(s)` as a polynomial matrix.
pub fn closed_loop_matrix(params: &VehicleParams, gains: &GainSet) -> Result<PolyMatrix2> {
    gains.validate()?;
    let mats = build_matrices(params)?;
    let v = mats.speed;
    let entry = |r: usize, c: usize| {
        Poly::quadratic(
            mats.l[(r, c)] + mats.b[r] * gains.k_p[c],
            v * mats.c[(r, c)] + v * mats.b[r] * gains.k_d[c],
            v * v * mats.m[(r, c)],
        )
    };
    Ok(PolyMatrix2::new(
        entry(0, 0),
        entry(0, 1),
        entry(1, 0),
        entry(1, 1),
    ))
}

fn input_column(params: &VehicleParams) -> [Poly; 2] {
    [
        Poly::constant(params.cornering_front),
        Poly::constant(params.cg_to_front * params.cornering_front),
    ]
}

/// `adj(A) B`, the numerator of `A^{-1} B` over `det A`.
pub fn adj_input(params: &VehicleParams, gains: &GainSet) -> Result<(Poly, [Poly; 2])> {
    let (det, adj) = closed_loop_matrix(params, gains)?.det_adj();
    let b = input_column(params);
    Ok((det, adj.mul_col([&b[0], &b[1]])))
}

/// Learning open loop `G = [1 0] A^{-1} B (K_LP + s K_LD)` for a lateral output.
pub fn lfp_open_loop(params: &VehicleParams, gains: &GainSet) -> Result<RationalTF> {
    if gains.output != OutputSelector::Lateral {
        return Err(Error::InvalidInput(
            "scalar transfer function requires the lateral output".into(),
        ));
    }
    let (det, ab) = adj_input(params, gains)?;
    let (k_lp, k_ld) = gains.scalar_learning();
    let n_g = &ab[0] * &Poly::linear(k_lp, k_ld);
    RationalTF::new(n_g, det)
}

/// `H(s) = 1 + G(s) = (D + n_G) / D`, mapping `e_lat,i-1` to `e_lat,i`.
pub fn build_h_lfp_scalar(params: &VehicleParams, gains: &GainSet) -> Result<RationalTF> {
    let g = lfp_open_loop(params, gains)?;
    RationalTF::new(&g.den + &g.num, g.den)
}

/// `H(s) = I + A^{-1} B K_L(s)` with a row-vector `K_L = K_LP + s K_LD`,
/// mapping `e_i-1` to `e_i`.
pub fn build_h_lfp_vector(params: &VehicleParams, gains: &GainSet) -> Result<TFMatrix> {
    if gains.output != OutputSelector::Full {
        return Err(Error::InvalidInput(
            "vector transfer matrix requires the full output".into(),
        ));
    }
    let (det, ab) = adj_input(params, gains)?;
    let k_l = [
        Poly::linear(gains.k_lp[0], gains.k_ld[0]),
        Poly::linear(gains.k_lp[1], gains.k_ld[1]),
    ];
    let r = PolyMatrix2::outer([&ab[0], &ab[1]], [&k_l[0], &k_l[1]]);
    TFMatrix::new(PolyMatrix2::identity().scale_poly(&det).add(&r), det)
}

/// Predecessor-tracking transfer from vehicle 1 to vehicle 2.
#[derive(Debug, Clone, PartialEq)]
pub struct FfTransfer {
    /// `H_2(s) = I + R(s)`
    pub matrix: TFMatrix,
    /// `R(s) = A^{-1} B (K_fb(s) + s k_ff [0 1])`, rank one for every `s`.
    pub perturbation: TFMatrix,
    /// Scalar channel from `theta_err,1` to `e_lat,2`.
    pub heading_to_lateral: RationalTF,
    /// Scalar channel from `e_lat,1` to `e_lat,2`.
    pub lateral_to_lateral: RationalTF,
}

pub fn build_h_ff_matrix(params: &VehicleParams, gains: &GainSet) -> Result<FfTransfer> {
    let (det, ab) = adj_input(params, gains)?;
    let v = params.speed;
    let row = [
        Poly::linear(gains.k_p[0], v * gains.k_d[0]),
        Poly::linear(gains.k_p[1], v * gains.k_d[1] + gains.k_ff),
    ];
    let r = PolyMatrix2::outer([&ab[0], &ab[1]], [&row[0], &row[1]]);
    let h = PolyMatrix2::identity().scale_poly(&det).add(&r);
    let matrix = TFMatrix::new(h, det.clone())?;
    let perturbation = TFMatrix::new(r, det)?;
    Ok(FfTransfer {
        heading_to_lateral: perturbation.entry(0, 1),
        lateral_to_lateral: matrix.entry(0, 0),
        matrix,
        perturbation,
    })
}
