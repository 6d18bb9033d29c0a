//! Sensitivity integral `int_0^inf ln|S(jw)| dw` for `S = 1/H = 1/(1+G)`.

use std::f64::consts::FRAC_PI_2;

use super::poly::Poly;
use super::rational::RationalTF;
use super::routh::is_hurwitz;
use crate::error::{Error, Result};

/// Integrand magnitude below which the tail takes over.
const CUTOFF_LEVEL: f64 = 1e-9;
const MAX_CUTOFF: f64 = 1e9;
const PANEL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct BodeResult {
    /// Quadrature over `[0, cutoff]` plus the tail estimate.
    pub numeric: f64,
    /// `-(pi/2) lim_{s->inf} s G(s)`
    pub prediction: f64,
    /// Analytic tail `int_cutoff^inf c / w^2 dw`.
    pub tail: f64,
    /// `int_0^cutoff |ln|S||`, the scale for the tail check.
    pub absolute_mass: f64,
    pub cutoff: f64,
    /// `lim s G(s)`
    pub high_frequency_gain: f64,
}

/// Evaluate the sensitivity integral for `H = N / D`, where `G = H - 1` must
/// be stable and strictly proper and `H` must have no right-half-plane zero.
pub fn bode_integral(h: &RationalTF) -> Result<BodeResult> {
    if !is_hurwitz(&h.den)? {
        return Err(Error::UnstableDenominator);
    }
    let n_g = &h.num - &h.den;
    let g = RationalTF::new(n_g.clone(), h.den.clone())?;
    if !matches!(g.relative_degree(), None | Some(1..)) {
        return Err(Error::InvalidInput(
            "open loop H - 1 must be strictly proper".into(),
        ));
    }
    if h.num.is_zero() || !is_hurwitz(&h.num)? {
        return Err(Error::RhpZero);
    }

    let high_frequency_gain = match g.relative_degree() {
        Some(1) => n_g.leading() / h.den.leading(),
        _ => 0.0,
    };
    // `+ 0.0` turns a negative zero positive.
    let prediction = -FRAC_PI_2 * high_frequency_gain + 0.0;

    // ln|S| = -0.5 ln(1 + (|N|^2 - |D|^2) / |D|^2), kept accurate where the
    // ratio is tiny.
    let d2 = h.den.magnitude_squared_jw();
    let excess: Poly = &h.num.magnitude_squared_jw() - &d2;
    let f = |w: f64| -0.5 * (excess.eval_real(w) / d2.eval_real(w)).ln_1p();

    let mut cutoff = 100.0;
    while cutoff < MAX_CUTOFF && f(cutoff).abs() >= CUTOFF_LEVEL {
        cutoff *= 10.0;
    }

    let mut edges = vec![0.0, 1e-4];
    let mut e = 1e-4;
    while e < cutoff {
        e *= 10.0;
        edges.push(e.min(cutoff));
    }
    let (mut integral, mut absolute_mass) = (0.0, 0.0);
    for pair in edges.windows(2) {
        integral += adaptive_gk(&f, pair[0], pair[1], PANEL_TOL, 0);
        absolute_mass += adaptive_gk(&|w| f(w).abs(), pair[0], pair[1], PANEL_TOL, 0);
    }

    // ln|S| ~ c / w^2 beyond the cutoff for either relative degree.
    let c = f(cutoff) * cutoff * cutoff;
    let tail = c / cutoff;
    if tail.abs() > 0.01 * absolute_mass.max(f64::MIN_POSITIVE) && tail.abs() > 1e-12 {
        return Err(Error::TailTooLarge {
            tail,
            mass: absolute_mass,
        });
    }

    Ok(BodeResult {
        numeric: integral + tail,
        prediction,
        tail,
        absolute_mass,
        cutoff,
        high_frequency_gain,
    })
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const K15_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
// Gauss weights for the odd-indexed nodes and the center.
const G7_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = K15_WEIGHTS[7] * fc;
    let mut gauss = G7_WEIGHTS[3] * fc;
    for i in 0..7 {
        let x = h * GK_NODES[i];
        let pair = f(c - x) + f(c + x);
        kronrod += K15_WEIGHTS[i] * pair;
        if i % 2 == 1 {
            gauss += G7_WEIGHTS[i / 2] * pair;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

fn adaptive_gk(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (value, err) = gk15(f, a, b);
    if err <= tol.max(1e-12 * value.abs()) || depth >= 40 {
        return value;
    }
    let m = 0.5 * (a + b);
    adaptive_gk(f, a, m, 0.5 * tol, depth + 1) + adaptive_gk(f, m, b, 0.5 * tol, depth + 1)
}
