use super::poly::Poly;
use crate::error::{Error, Result};

/// Replacement for a vanishing first-column entry, relative to the
/// normalized coefficients.
const ZERO_PIVOT: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct RouthReport {
    /// All roots strictly in the open left half plane.
    pub stable: bool,
    /// Sign changes in the first column, the number of right-half-plane roots
    /// when no pivot had to be perturbed.
    pub rhp_roots: usize,
    /// A zero pivot or zero row was met, so a root may sit on the axis.
    pub degenerate: bool,
    pub first_column: Vec<f64>,
}

/// Routh array test for strict Hurwitz stability.
///
/// A nonzero constant has no roots and counts as stable.
pub fn routh_hurwitz(p: &Poly) -> Result<RouthReport> {
    let deg = p.degree().ok_or(Error::ZeroPolynomial)?;
    let scale = p.norm_inf();
    // Descending coefficients, normalized.
    let desc: Vec<f64> = p.coeffs().iter().rev().map(|c| c / scale).collect();
    if deg == 0 {
        return Ok(RouthReport {
            stable: true,
            rhp_roots: 0,
            degenerate: false,
            first_column: desc,
        });
    }

    let width = deg / 2 + 1;
    let row_from = |start: usize| -> Vec<f64> {
        (0..width)
            .map(|k| desc.get(start + 2 * k).copied().unwrap_or(0.0))
            .collect()
    };
    let mut prev = row_from(0);
    let mut cur = row_from(1);
    let mut first_column = vec![prev[0]];
    let mut degenerate = false;

    for level in 1..=deg {
        if cur.iter().all(|&x| x.abs() <= ZERO_PIVOT) {
            // Symmetric root pair: continue with the auxiliary polynomial's derivative.
            degenerate = true;
            let order = deg + 1 - level;
            cur = prev
                .iter()
                .enumerate()
                .map(|(k, &c)| {
                    let power = order as i64 - 2 * k as i64;
                    c * power.max(0) as f64
                })
                .collect();
        }
        if cur[0].abs() <= ZERO_PIVOT {
            degenerate = true;
            cur[0] = ZERO_PIVOT;
        }
        first_column.push(cur[0]);
        if level == deg {
            break;
        }
        let next: Vec<f64> = (0..width)
            .map(|k| {
                let a = prev.get(k + 1).copied().unwrap_or(0.0);
                let b = cur.get(k + 1).copied().unwrap_or(0.0);
                (cur[0] * a - prev[0] * b) / cur[0]
            })
            .collect();
        prev = std::mem::replace(&mut cur, next);
    }

    let rhp_roots = first_column
        .windows(2)
        .filter(|w| w[0].signum() != w[1].signum())
        .count();
    Ok(RouthReport {
        stable: rhp_roots == 0 && !degenerate,
        rhp_roots,
        degenerate,
        first_column,
    })
}

pub fn is_hurwitz(p: &Poly) -> Result<bool> {
    Ok(routh_hurwitz(p)?.stable)
}
