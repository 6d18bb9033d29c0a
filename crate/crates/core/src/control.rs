//! Steering laws: feedback-feedforward under predecessor tracking and
//! learn-from-predecessor under desired-path tracking.

use crate::error::{Error, Result};
use crate::model::ErrorState;

/// Which part of the error vector a vehicle transmits as its output `y_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputSelector {
    /// `y_i = e_lat`
    #[default]
    Lateral,
    /// `y_i = [e_lat, theta_err]`
    Full,
}

impl OutputSelector {
    pub fn label(&self) -> &'static str {
        match self {
            OutputSelector::Lateral => "lateral",
            OutputSelector::Full => "full",
        }
    }
}

/// Controller gains.
///
/// Learning gains are stored as row vectors. With a lateral output only the
/// first entry is used and the second must be zero, which makes the scalar
/// case the vector case with `K_L = [K_LP + s K_LD, 0]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainSet {
    /// `[k_elat (rad/m), k_theta (rad/rad)]`
    pub k_p: [f64; 2],
    /// `[k_elat' (rad s/m), k_theta' (rad s/rad)]`
    pub k_d: [f64; 2],
    /// Curvature feedforward gain, m.
    pub k_ff: f64,
    pub k_lp: [f64; 2],
    pub k_ld: [f64; 2],
    pub output: OutputSelector,
}

impl GainSet {
    /// Feedback and feedforward only.
    pub fn feedback(k_p: [f64; 2], k_d: [f64; 2], k_ff: f64) -> Self {
        Self {
            k_p,
            k_d,
            k_ff,
            k_lp: [0.0; 2],
            k_ld: [0.0; 2],
            output: OutputSelector::Lateral,
        }
    }

    pub fn lateral(k_p: [f64; 2], k_d: [f64; 2], k_ff: f64, k_lp: f64, k_ld: f64) -> Self {
        Self {
            k_lp: [k_lp, 0.0],
            k_ld: [k_ld, 0.0],
            ..Self::feedback(k_p, k_d, k_ff)
        }
    }

    pub fn full(k_p: [f64; 2], k_d: [f64; 2], k_ff: f64, k_lp: [f64; 2], k_ld: [f64; 2]) -> Self {
        Self {
            k_lp,
            k_ld,
            output: OutputSelector::Full,
            ..Self::feedback(k_p, k_d, k_ff)
        }
    }

    /// The tuned Lincoln MKZ gains at 10 m/s.
    pub fn table3() -> Self {
        Self::lateral([0.06, 0.96], [0.0, 0.08], 1.59, -0.04, -0.3)
    }

    pub fn with_learning(self, k_lp: f64, k_ld: f64) -> Self {
        Self {
            k_lp: [k_lp, 0.0],
            k_ld: [k_ld, 0.0],
            output: OutputSelector::Lateral,
            ..self
        }
    }

    /// Scalar learning gains `(K_LP, K_LD)` for a lateral output.
    pub fn scalar_learning(&self) -> (f64, f64) {
        (self.k_lp[0], self.k_ld[0])
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            ("k_elat", self.k_p[0]),
            ("k_theta", self.k_p[1]),
            ("k_elat_prime", self.k_d[0]),
            ("k_theta_prime", self.k_d[1]),
            ("k_ff", self.k_ff),
            ("k_lp", self.k_lp[0]),
            ("k_lp_theta", self.k_lp[1]),
            ("k_ld", self.k_ld[0]),
            ("k_ld_theta", self.k_ld[1]),
        ];
        for (name, value) in all {
            if !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must be finite",
                });
            }
        }
        if self.output == OutputSelector::Lateral {
            for (name, value) in [("k_lp_theta", self.k_lp[1]), ("k_ld_theta", self.k_ld[1])] {
                if value != 0.0 {
                    return Err(Error::InvalidParameter {
                        name,
                        value,
                        reason: "heading learning gain requires the full output",
                    });
                }
            }
        }
        Ok(())
    }

    pub fn has_learning(&self) -> bool {
        self.k_lp.iter().chain(self.k_ld.iter()).any(|&g| g != 0.0)
    }
}

/// `u = -K_P e_ref - v K_D e_ref' + k_ff theta_ref'`
pub fn ff_control(
    gains: &GainSet,
    speed: f64,
    ref_error: &ErrorState,
    ref_heading_prime: f64,
) -> f64 {
    feedback_term(gains, speed, ref_error) + gains.k_ff * ref_heading_prime
}

fn feedback_term(gains: &GainSet, speed: f64, e: &ErrorState) -> f64 {
    -(gains.k_p[0] * e.e_lat + gains.k_p[1] * e.heading)
        - speed * (gains.k_d[0] * e.e_lat_prime + gains.k_d[1] * e.heading_prime)
}

/// Reference error and reference heading rate for vehicle `i` (1-based)
/// under predecessor tracking.
///
/// `des_errors[k]` is vehicle `k + 1`'s error against the desired path at the
/// current arc position. Vehicle 1 tracks the desired path directly; every
/// follower tracks the difference to its predecessor, and its reference
/// heading rate picks up the predecessor's heading-error rate.
pub fn ff_reference_error(
    i: usize,
    des_errors: &[ErrorState],
    path_heading_prime: f64,
) -> Result<(ErrorState, f64)> {
    if i == 0 || i > des_errors.len() {
        return Err(Error::VehicleIndex {
            index: i,
            available: des_errors.len(),
        });
    }
    let own = des_errors[i - 1];
    if i == 1 {
        return Ok((own, path_heading_prime));
    }
    let pred = des_errors[i - 2];
    Ok((own - pred, path_heading_prime + pred.heading_prime))
}

/// `u = -K_P e - v K_D e' + u_l`
pub fn lfp_control(
    gains: &GainSet,
    speed: f64,
    own_error: &ErrorState,
    learned: &LearnedSignal,
    l_d: f64,
) -> Result<f64> {
    Ok(feedback_term(gains, speed, own_error) + learned.at(l_d)?)
}

/// Learned control term sampled on the shared arc-length grid.
///
/// Stored as the lead vehicle's feedforward `k_ff theta_des'` plus the
/// accumulated learning increment, so `u_l = feedforward + increment`.
/// The predecessor output used for the last update is kept for export.
#[derive(Debug, Clone, PartialEq)]
pub struct LearnedSignal {
    pub step: f64,
    pub feedforward: Vec<f64>,
    pub increment: Vec<f64>,
    pub y_prev: Vec<[f64; 2]>,
    pub y_prev_prime: Vec<[f64; 2]>,
}

impl LearnedSignal {
    /// `u_l,1 = k_ff theta_des'` on the grid.
    pub fn lead(step: f64, heading_prime: &[f64], k_ff: f64) -> Self {
        let n = heading_prime.len();
        Self {
            step,
            feedforward: heading_prime.iter().map(|k| k_ff * k).collect(),
            increment: vec![0.0; n],
            y_prev: vec![[0.0; 2]; n],
            y_prev_prime: vec![[0.0; 2]; n],
        }
    }

    pub fn len(&self) -> usize {
        self.feedforward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.feedforward.is_empty()
    }

    pub fn value(&self, k: usize) -> f64 {
        self.feedforward[k] + self.increment[k]
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.value(k)).collect()
    }

    /// Linear interpolation of the learning increment at `l_d`.
    pub fn increment_at(&self, l_d: f64) -> Result<f64> {
        interp(&self.increment, self.step, l_d)
    }

    /// Linear interpolation of `u_l` at `l_d`.
    pub fn at(&self, l_d: f64) -> Result<f64> {
        Ok(interp(&self.feedforward, self.step, l_d)? + self.increment_at(l_d)?)
    }

    /// First `n` grid samples.
    pub fn truncated(&self, n: usize) -> Self {
        let n = n.min(self.len());
        Self {
            step: self.step,
            feedforward: self.feedforward[..n].to_vec(),
            increment: self.increment[..n].to_vec(),
            y_prev: self.y_prev[..n].to_vec(),
            y_prev_prime: self.y_prev_prime[..n].to_vec(),
        }
    }
}

fn interp(values: &[f64], step: f64, l_d: f64) -> Result<f64> {
    let unavailable = Error::LearnedUnavailable { position: l_d };
    if values.is_empty() || !l_d.is_finite() || l_d < 0.0 {
        return Err(unavailable);
    }
    let last = values.len() - 1;
    let x = l_d / step;
    // Allow rounding slop at the far end of the grid.
    if x > last as f64 + 1e-9 {
        return Err(unavailable);
    }
    let k = (x.floor() as usize).min(last);
    if k == last {
        return Ok(values[last]);
    }
    let t = x - k as f64;
    Ok(values[k] + t * (values[k + 1] - values[k]))
}

/// `u_l,i = u_l,i-1 + K_LP y_i-1 + K_LD y_i-1'` pointwise on the grid.
///
/// `y` and `y_prime` carry the predecessor's full error vector; with a
/// lateral output the heading component is multiplied by a zero gain.
pub fn learned_update(
    gains: &GainSet,
    prev: &LearnedSignal,
    y: &[[f64; 2]],
    y_prime: &[[f64; 2]],
) -> Result<LearnedSignal> {
    let n = prev.len();
    for len in [y.len(), y_prime.len()] {
        if len != n {
            return Err(Error::GridMismatch {
                expected: n,
                found: len,
            });
        }
    }
    let increment = (0..n)
        .map(|k| {
            prev.increment[k]
                + gains.k_lp[0] * y[k][0]
                + gains.k_lp[1] * y[k][1]
                + gains.k_ld[0] * y_prime[k][0]
                + gains.k_ld[1] * y_prime[k][1]
        })
        .collect();
    Ok(LearnedSignal {
        step: prev.step,
        feedforward: prev.feedforward.clone(),
        increment,
        y_prev: y.to_vec(),
        y_prev_prime: y_prime.to_vec(),
    })
}

/// Derivative of uniformly sampled data: central differences inside,
/// one-sided first-order differences at the ends.
pub fn central_difference(values: &[f64], step: f64) -> Vec<f64> {
    let n = values.len();
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n)
            .map(|k| {
                if k == 0 {
                    (values[1] - values[0]) / step
                } else if k == n - 1 {
                    (values[n - 1] - values[n - 2]) / step
                } else {
                    (values[k + 1] - values[k - 1]) / (2.0 * step)
                }
            })
            .collect(),
    }
}

/// Outcome of the communication-delay check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayMargin {
    pub feasible: bool,
    /// Spatial time gap minus delay, s.
    pub margin_s: f64,
}

/// A follower reaches its predecessor's current position after
/// `spacing / speed` seconds. Data delayed by less than that arrives before
/// it is needed.
pub fn delay_margin(spacing_m: f64, follower_speed: f64, delay_s: f64) -> DelayMargin {
    let margin_s = spacing_m / follower_speed - delay_s;
    DelayMargin {
        feasible: margin_s > 0.0,
        margin_s,
    }
}
