//! Discrete L2 norms, attenuation ratios and string-stability verdicts.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::control::{GainSet, OutputSelector};
use crate::error::{Error, Result};
use crate::model::VehicleParams;
use crate::polyfreq::{
    bode_integral, build_h_ff_matrix, build_h_lfp_scalar, build_h_lfp_vector, closed_loop_matrix,
    coefficient_condition_tf, hinf_norm, hinf_norm_matrix, is_hurwitz, sigma1_2x2, BodeResult,
    CoefficientCondition, HinfResult, PeakLocation,
};
use crate::sim::{PlatoonTrajectory, Strategy};

/// Ratios are only formed when the predecessor norm exceeds this.
pub const RATIO_FLOOR: f64 = 1e-12;

/// `sqrt(sum z_k^2 * step)` over a uniformly sampled signal.
pub fn l2_norm(signal: &[f64], step: f64) -> Result<f64> {
    if signal.is_empty() {
        return Err(Error::EmptySignal);
    }
    Ok((signal.iter().map(|z| z * z).sum::<f64>() * step).sqrt())
}

/// Vector version: component squares are summed.
pub fn l2_norm_vec(signal: &[[f64; 2]], step: f64) -> Result<f64> {
    if signal.is_empty() {
        return Err(Error::EmptySignal);
    }
    Ok((signal
        .iter()
        .map(|z| z[0] * z[0] + z[1] * z[1])
        .sum::<f64>()
        * step)
        .sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmpiricalVerdict {
    /// Every consecutive ratio is below one.
    StringStableEmpirical,
    /// Some ratio reaches one; `vehicle` is the first follower (1-based)
    /// whose norm does not shrink.
    Amplifying { vehicle: usize },
    /// The lead vehicle never leaves the path.
    Vacuous,
}

impl EmpiricalVerdict {
    pub fn label(&self) -> String {
        match self {
            Self::StringStableEmpirical => "STRING-STABLE-EMPIRICAL".into(),
            Self::Amplifying { vehicle } => format!("AMPLIFYING (from vehicle {vehicle})"),
            Self::Vacuous => "VACUOUS".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormReport {
    pub output: OutputSelector,
    /// Finite horizon the norms cover, m.
    pub horizon: f64,
    pub norm_elat: Vec<f64>,
    pub norm_evec: Vec<f64>,
    /// `ratio[k]` compares vehicle `k + 2` with vehicle `k + 1`.
    pub ratio_elat: Vec<Option<f64>>,
    pub ratio_evec: Vec<Option<f64>>,
    /// Verdict on the selected output.
    pub verdict: EmpiricalVerdict,
}

impl NormReport {
    fn selected(&self) -> (&[f64], &[Option<f64>]) {
        match self.output {
            OutputSelector::Lateral => (&self.norm_elat, &self.ratio_elat),
            OutputSelector::Full => (&self.norm_evec, &self.ratio_evec),
        }
    }

    /// Largest consecutive ratio of the selected output, the empirical gamma.
    pub fn max_ratio(&self) -> Option<f64> {
        self.selected().1.iter().flatten().copied().reduce(f64::max)
    }

    pub fn elat_strictly_decreasing(&self) -> bool {
        self.norm_elat.windows(2).all(|w| w[1] < w[0])
    }

    pub fn elat_strictly_increasing(&self) -> bool {
        self.norm_elat.windows(2).all(|w| w[1] > w[0])
    }

    pub fn evec_strictly_increasing(&self) -> bool {
        self.norm_evec.windows(2).all(|w| w[1] > w[0])
    }

    pub const CSV_HEADER: &'static str =
        "vehicle,norm_elat_m_sqrt_m,norm_evec_mixed,ratio_elat,ratio_evec";

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", Self::CSV_HEADER);
        let fmt = |r: Option<&Option<f64>>| match r {
            Some(Some(x)) => format!("{x:.9}"),
            _ => String::new(),
        };
        for i in 0..self.norm_elat.len() {
            let prev = i.checked_sub(1);
            let _ = writeln!(
                out,
                "{},{:.9e},{:.9e},{},{}",
                i + 1,
                self.norm_elat[i],
                self.norm_evec[i],
                fmt(prev.and_then(|p| self.ratio_elat.get(p))),
                fmt(prev.and_then(|p| self.ratio_evec.get(p))),
            );
        }
        out
    }
}

fn ratios(norms: &[f64]) -> Vec<Option<f64>> {
    norms
        .windows(2)
        .map(|w| (w[0] > RATIO_FLOOR).then(|| w[1] / w[0]))
        .collect()
}

pub fn attenuation_report(traj: &PlatoonTrajectory, output: OutputSelector) -> Result<NormReport> {
    if traj.vehicles.is_empty() {
        return Err(Error::EmptySignal);
    }
    let norm_elat = traj
        .vehicles
        .iter()
        .map(|v| l2_norm(&v.lateral(), traj.step))
        .collect::<Result<Vec<_>>>()?;
    let norm_evec = traj
        .vehicles
        .iter()
        .map(|v| l2_norm_vec(&v.e, traj.step))
        .collect::<Result<Vec<_>>>()?;
    let mut report = NormReport {
        output,
        horizon: traj.horizon(),
        ratio_elat: ratios(&norm_elat),
        ratio_evec: ratios(&norm_evec),
        norm_elat,
        norm_evec,
        verdict: EmpiricalVerdict::Vacuous,
    };
    let (norms, rs) = report.selected();
    report.verdict = if norms[0] <= RATIO_FLOOR {
        EmpiricalVerdict::Vacuous
    } else {
        match rs.iter().position(|r| r.is_none_or(|x| x >= 1.0)) {
            Some(k) => EmpiricalVerdict::Amplifying { vehicle: k + 2 },
            None => EmpiricalVerdict::StringStableEmpirical,
        }
    };
    Ok(report)
}

/// Frequency-domain verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// `sup |H(jw)| < 1`.
    Stable,
    /// `|H(jw)| < 1` at every finite frequency but the supremum equals one,
    /// approached only as `w -> inf`.
    PointwiseAttenuating,
    /// Numerically not attenuating.
    NotStable,
    /// Ruled out structurally by a theorem, with a numeric witness.
    UnstableByTheorem,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Stable => "STABLE",
            Verdict::PointwiseAttenuating => "POINTWISE-ATTENUATING",
            Verdict::NotStable => "NOT-STABLE",
            Verdict::UnstableByTheorem => "UNSTABLE-BY-THEOREM",
        }
    }
}

/// Which structural result produced the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    /// `H = I + R` with `rank R <= 1` forces `sigma1(H(jw)) >= 1`.
    RankOnePerturbation,
    /// Constant curvature: follower lateral error is `k_theta / k_elat`
    /// times the leader's nonzero heading error.
    FeedforwardCounterexample,
    /// Without derivative learning `G` has relative degree two, the
    /// sensitivity integral is zero, and `|H|` must exceed one somewhere.
    NoDerivativeLearning,
    /// Peak-gain test on a stable transfer function.
    PeakGain,
}

impl Theorem {
    pub fn label(&self) -> &'static str {
        match self {
            Theorem::RankOnePerturbation => "rank-one perturbation of the identity",
            Theorem::FeedforwardCounterexample => "feedforward constant-curvature counterexample",
            Theorem::NoDerivativeLearning => "no derivative learning (sensitivity integral)",
            Theorem::PeakGain => "peak gain below one",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// Largest singular value at one frequency, rad/m.
    Sigma {
        omega: f64,
        sigma1: f64,
    },
    /// Low-frequency gain of the heading-to-lateral channel.
    DcGain {
        value: f64,
    },
    Bode {
        numeric: f64,
        prediction: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub strategy: Strategy,
    pub output: OutputSelector,
    pub gains: GainSet,
    pub verdict: Verdict,
    pub theorem: Theorem,
    pub witnesses: Vec<Witness>,
    /// The closed-loop determinant is Hurwitz.
    pub feedback_stable: bool,
    pub hinf: Option<HinfResult>,
    pub coefficients: Option<CoefficientCondition>,
    pub bode: Option<BodeResult>,
    pub notes: Vec<String>,
}

/// Frequency at which structural witnesses are sampled, rad/m.
pub const WITNESS_OMEGA: f64 = 1.0;

pub fn verdict(
    params: &VehicleParams,
    gains: &GainSet,
    strategy: Strategy,
    output: OutputSelector,
) -> Result<Certificate> {
    let det = closed_loop_matrix(params, gains)?.det();
    if !is_hurwitz(&det)? {
        return Err(Error::UnstableFeedback);
    }
    let jw = Complex64::new(0.0, WITNESS_OMEGA);
    let mut cert = Certificate {
        strategy,
        output,
        gains: *gains,
        verdict: Verdict::UnstableByTheorem,
        theorem: Theorem::RankOnePerturbation,
        witnesses: Vec::new(),
        feedback_stable: true,
        hinf: None,
        coefficients: None,
        bode: None,
        notes: Vec::new(),
    };

    match (strategy, output) {
        (Strategy::FeedforwardPredecessor, _) => {
            let ff = build_h_ff_matrix(params, gains)?;
            let sigma1 = sigma1_2x2(&ff.matrix.eval(jw));
            cert.witnesses.push(Witness::Sigma {
                omega: WITNESS_OMEGA,
                sigma1,
            });
            cert.hinf = Some(hinf_norm_matrix(&ff.matrix)?);
            if output == OutputSelector::Lateral {
                cert.theorem = Theorem::FeedforwardCounterexample;
                let dc = ff.heading_to_lateral.eval(Complex64::new(0.0, 0.0)).re;
                cert.witnesses.insert(0, Witness::DcGain { value: dc });
            }
        }
        (Strategy::LearnFromPredecessor, OutputSelector::Full) => {
            let h = build_h_lfp_vector(params, gains)?;
            cert.witnesses.push(Witness::Sigma {
                omega: WITNESS_OMEGA,
                sigma1: sigma1_2x2(&h.eval(jw)),
            });
            cert.hinf = Some(hinf_norm_matrix(&h)?);
        }
        (Strategy::LearnFromPredecessor, OutputSelector::Lateral) => {
            let h = build_h_lfp_scalar(params, gains)?;
            cert.coefficients = Some(coefficient_condition_tf(&h)?);
            cert.hinf = Some(hinf_norm(&h)?);
            match bode_integral(&h) {
                Ok(b) => cert.bode = Some(b),
                Err(Error::RhpZero) => cert.notes.push(
                    "H has a right-half-plane zero; the sensitivity integral does not apply".into(),
                ),
                Err(e) => return Err(e),
            }
            let (_, k_ld) = gains.scalar_learning();
            if let (0.0, Some(b)) = (k_ld, cert.bode.as_ref()) {
                cert.theorem = Theorem::NoDerivativeLearning;
                cert.witnesses.push(Witness::Bode {
                    numeric: b.numeric,
                    prediction: b.prediction,
                });
            } else {
                if k_ld == 0.0 {
                    cert.notes
                        .push("falling back to the numeric peak gain".into());
                }
                let hinf = cert.hinf.as_ref().expect("computed above");
                cert.theorem = Theorem::PeakGain;
                cert.verdict = if hinf.norm < 1.0 {
                    Verdict::Stable
                } else if hinf.attenuates_pointwise() && hinf.location == PeakLocation::Infinity {
                    Verdict::PointwiseAttenuating
                } else {
                    Verdict::NotStable
                };
                if cert.verdict == Verdict::PointwiseAttenuating {
                    cert.notes.push(format!(
                        "|H(jw)| < 1 at every finite frequency; H(inf) = {} so the supremum is not below one",
                        hinf.at_infinity
                    ));
                }
            }
        }
    }
    Ok(cert)
}

impl Certificate {
    /// Deterministic text report.
    pub fn render(&self) -> String {
        let g = &self.gains;
        let mut s = String::new();
        let _ = writeln!(s, "strategy: {}", self.strategy.label());
        let _ = writeln!(s, "output: {}", self.output.label());
        let _ = writeln!(
            s,
            "gains: k_p = [{}, {}], k_d = [{}, {}], k_ff = {}, k_lp = [{}, {}], k_ld = [{}, {}]",
            g.k_p[0],
            g.k_p[1],
            g.k_d[0],
            g.k_d[1],
            g.k_ff,
            g.k_lp[0],
            g.k_lp[1],
            g.k_ld[0],
            g.k_ld[1]
        );
        let _ = writeln!(
            s,
            "closed-loop determinant (Routh): {}",
            if self.feedback_stable {
                "stable"
            } else {
                "unstable"
            }
        );
        if let Some(h) = &self.hinf {
            let at = match h.location {
                PeakLocation::At(w) => format!("{w:.6e} rad/m"),
                PeakLocation::Infinity => "infinity".into(),
            };
            let _ = writeln!(s, "peak gain: {:.12} at {at}", h.norm);
            let _ = writeln!(
                s,
                "largest finite-frequency gain: {:.12} at {:.6e} rad/m{}",
                h.finite_peak,
                h.finite_peak_omega,
                if h.boundary_warning {
                    " (sweep boundary)"
                } else {
                    ""
                }
            );
            let _ = writeln!(s, "gain at w = 0: {:.12}", h.at_zero);
            let _ = writeln!(s, "gain as w -> inf: {:.12}", h.at_infinity);
        }
        if let Some(c) = &self.coefficients {
            let _ = writeln!(
                s,
                "coefficients: a6 = {:.6e}, a4 = {:.6e}, a2 = {:.6e}, a0 = {:.6e} ({})",
                c.a6,
                c.a4,
                c.a2,
                c.a0,
                if c.all_positive {
                    "all positive"
                } else {
                    "not all positive"
                }
            );
        }
        if let Some(b) = &self.bode {
            let _ = writeln!(
                s,
                "sensitivity integral: numeric {:.9}, predicted {:.9} (cutoff {:.1e} rad/m, tail {:.3e})",
                b.numeric, b.prediction, b.cutoff, b.tail
            );
        }
        for w in &self.witnesses {
            let _ = match w {
                Witness::Sigma { omega, sigma1 } => {
                    writeln!(s, "witness: sigma1(H(j{omega})) = {sigma1:.12}")
                }
                Witness::DcGain { value } => {
                    writeln!(
                        s,
                        "witness: heading-to-lateral gain at w = 0 is {value:.12}"
                    )
                }
                Witness::Bode {
                    numeric,
                    prediction,
                } => writeln!(
                    s,
                    "witness: sensitivity integral {numeric:.9} (predicted {prediction:.9})"
                ),
            };
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        let _ = writeln!(s, "basis: {}", self.theorem.label());
        let _ = writeln!(s, "verdict: {}", self.verdict.label());
        s
    }
}
