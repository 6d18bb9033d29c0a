//! Peak gain over spatial frequency by dense logarithmic sweep plus
//! golden-section refinement.

use num_complex::Complex64;

use super::rational::{RationalTF, TFMatrix};
use super::routh::is_hurwitz;
use super::svd::{sigma1_2x2, singular_values_2x2};
use crate::error::{Error, Result};

pub const SWEEP_MIN: f64 = 1e-4;
pub const SWEEP_MAX: f64 = 1e4;
pub const POINTS_PER_DECADE: usize = 200;
const REFINE_PEAKS: usize = 3;
const REFINE_TOL: f64 = 1e-6;

/// Where the supremum is reached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PeakLocation {
    /// Finite frequency, rad/m.
    At(f64),
    /// Only approached as frequency grows without bound.
    Infinity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HinfResult {
    /// Supremum over all frequencies including both limits.
    pub norm: f64,
    pub location: PeakLocation,
    /// Largest gain found at a finite frequency in the sweep range.
    pub finite_peak: f64,
    pub finite_peak_omega: f64,
    pub at_zero: f64,
    /// Gain in the limit `w -> inf`; infinite for improper systems.
    pub at_infinity: f64,
    /// The finite maximum sits on the sweep boundary.
    pub boundary_warning: bool,
}

impl HinfResult {
    /// Gain below one at every finite frequency, including zero.
    pub fn attenuates_pointwise(&self) -> bool {
        self.finite_peak < 1.0 && self.at_zero < 1.0
    }
}

pub fn sweep_grid() -> Vec<f64> {
    let decades = (SWEEP_MAX / SWEEP_MIN).log10().round() as usize;
    let n = decades * POINTS_PER_DECADE;
    let (lo, hi) = (SWEEP_MIN.log10(), SWEEP_MAX.log10());
    (0..=n)
        .map(|k| 10f64.powf(lo + (hi - lo) * k as f64 / n as f64))
        .collect()
}

/// `sup_w |H(jw)|` for a scalar transfer function with Hurwitz denominator.
pub fn hinf_norm(tf: &RationalTF) -> Result<HinfResult> {
    if !is_hurwitz(&tf.den)? {
        return Err(Error::UnstableDenominator);
    }
    let at_infinity = tf.limit_at_infinity().map_or(f64::INFINITY, f64::abs);
    Ok(peak_search(|w| tf.magnitude(w), at_infinity))
}

/// `sup_w sigma1(H(jw))` for a 2x2 transfer matrix with Hurwitz denominator.
pub fn hinf_norm_matrix(tf: &TFMatrix) -> Result<HinfResult> {
    if !is_hurwitz(&tf.den)? {
        return Err(Error::UnstableDenominator);
    }
    let at_infinity = tf.limit_at_infinity().map_or(f64::INFINITY, |m| {
        singular_values_2x2(&m.map(Complex64::from)).0
    });
    Ok(peak_search(
        |w| sigma1_2x2(&tf.eval(Complex64::new(0.0, w))),
        at_infinity,
    ))
}

fn peak_search(f: impl Fn(f64) -> f64, at_infinity: f64) -> HinfResult {
    let grid = sweep_grid();
    let vals: Vec<f64> = grid.iter().map(|&w| f(w)).collect();
    let n = grid.len();

    let mut peaks: Vec<usize> = (0..n)
        .filter(|&k| {
            let left = k == 0 || vals[k] >= vals[k - 1];
            let right = k == n - 1 || vals[k] >= vals[k + 1];
            left && right
        })
        .collect();
    peaks.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));
    peaks.truncate(REFINE_PEAKS);

    let (mut best, mut best_w, mut best_idx) = (vals[0], grid[0], 0);
    for &k in &peaks {
        let lo = grid[k.saturating_sub(1)];
        let hi = grid[(k + 1).min(n - 1)];
        let (w, v) = golden_max(&f, lo, hi);
        let (w, v) = if v >= vals[k] {
            (w, v)
        } else {
            (grid[k], vals[k])
        };
        if v > best {
            best = v;
            best_w = w;
            best_idx = k;
        }
    }

    let at_zero = f(0.0);
    let mut norm = best;
    let mut location = PeakLocation::At(best_w);
    if at_zero > norm {
        norm = at_zero;
        location = PeakLocation::At(0.0);
    }
    if at_infinity >= norm {
        norm = at_infinity;
        location = PeakLocation::Infinity;
    }
    HinfResult {
        norm,
        location,
        finite_peak: best,
        finite_peak_omega: best_w,
        at_zero,
        at_infinity,
        boundary_warning: best_idx == 0 || best_idx == n - 1,
    }
}

/// Golden-section maximization in log-frequency.
fn golden_max(f: &impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let g = |x: f64| f(x.exp());
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (g(c), g(d));
    // Relative tolerance in frequency is an absolute one in log space.
    while (b - a) > REFINE_TOL {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = g(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = g(d);
        }
    }
    let x = 0.5 * (a + b);
    (x.exp(), g(x))
}
