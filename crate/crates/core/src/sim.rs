//! Platoon integration over the shared arc-length coordinate.
//!
//! Every vehicle is a 4-state linear system in `l_d`, integrated with
//! fixed-step RK4. Vehicles run in index order and each one reads only its
//! predecessor's sealed grid record.

use std::io::Write;

use crate::control::{
    central_difference, delay_margin, ff_control, learned_update, GainSet, LearnedSignal,
};
use crate::error::{Error, Result};
use crate::model::{build_matrices, error_accel, ErrorState, SystemMatrices, VehicleParams};
use crate::path::DesiredPath;

/// Any lateral error beyond this aborts the run, m.
pub const BLOW_UP_LIMIT: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Feedback-feedforward, each follower tracks its predecessor's path.
    FeedforwardPredecessor,
    /// Learn-from-predecessor, every vehicle tracks the desired path.
    LearnFromPredecessor,
}

impl Strategy {
    pub fn label(&self) -> &'static str {
        match self {
            Strategy::FeedforwardPredecessor => "ff-pt",
            Strategy::LearnFromPredecessor => "lfp-dt",
        }
    }
}

/// Static V2V delay budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelaySpec {
    /// Arc-length spacing between consecutive vehicles, m.
    pub spacing_m: f64,
    /// Communication delay, s.
    pub delay_s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub params: VehicleParams,
    pub gains: GainSet,
    pub strategy: Strategy,
    pub vehicles: usize,
    pub path: DesiredPath,
    /// Integration step, m.
    pub step: f64,
    /// Per-vehicle initial errors; missing entries start at zero.
    pub initial: Vec<ErrorState>,
    pub delay: Option<DelaySpec>,
}

impl Scenario {
    pub fn new(
        params: VehicleParams,
        gains: GainSet,
        strategy: Strategy,
        vehicles: usize,
        path: DesiredPath,
    ) -> Self {
        Self {
            step: path.step(),
            params,
            gains,
            strategy,
            vehicles,
            path,
            initial: Vec::new(),
            delay: None,
        }
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    /// Number of grid intervals.
    pub fn intervals(&self) -> Result<usize> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "step",
                value: self.step,
                reason: "must be finite and strictly positive",
            });
        }
        let len = self.path.length();
        let n = (len / self.step).round();
        if n < 1.0 || (n * self.step - len).abs() > 1e-9 * len.max(1.0) {
            return Err(Error::InvalidInput(format!(
                "step {} m does not divide the path length {len} m",
                self.step
            )));
        }
        Ok(n as usize)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.gains.validate()?;
        if self.vehicles < 2 {
            return Err(Error::InvalidInput(format!(
                "a platoon needs at least 2 vehicles, got {}",
                self.vehicles
            )));
        }
        if self.initial.len() > self.vehicles {
            return Err(Error::InvalidInput(format!(
                "{} initial states given for {} vehicles",
                self.initial.len(),
                self.vehicles
            )));
        }
        if let Some(s) = self.initial.iter().find(|s| !s.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite initial state {s:?}"
            )));
        }
        self.intervals()?;
        Ok(())
    }
}

/// Grid record of one vehicle.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct VehicleRecord {
    pub e: Vec<[f64; 2]>,
    pub e_prime: Vec<[f64; 2]>,
    pub e_accel: Vec<[f64; 2]>,
    pub u: Vec<f64>,
}

impl VehicleRecord {
    pub fn state(&self, k: usize) -> ErrorState {
        ErrorState::new(
            self.e[k][0],
            self.e[k][1],
            self.e_prime[k][0],
            self.e_prime[k][1],
        )
    }

    pub fn lateral(&self) -> Vec<f64> {
        self.e.iter().map(|e| e[0]).collect()
    }

    /// Cubic Hermite state at fraction `t` of interval `k`, using the
    /// recorded derivatives as slopes.
    fn hermite(&self, k: usize, t: f64, step: f64) -> ErrorState {
        if t == 0.0 {
            return self.state(k);
        }
        if t == 1.0 {
            return self.state(k + 1);
        }
        let h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
        let h10 = t * (1.0 - t) * (1.0 - t);
        let h01 = t * t * (3.0 - 2.0 * t);
        let h11 = t * t * (t - 1.0);
        let blend = |p0: f64, m0: f64, p1: f64, m1: f64| {
            h00 * p0 + h10 * step * m0 + h01 * p1 + h11 * step * m1
        };
        let (a, b) = (k, k + 1);
        let c = |j: usize| {
            (
                blend(
                    self.e[a][j],
                    self.e_prime[a][j],
                    self.e[b][j],
                    self.e_prime[b][j],
                ),
                blend(
                    self.e_prime[a][j],
                    self.e_accel[a][j],
                    self.e_prime[b][j],
                    self.e_accel[b][j],
                ),
            )
        };
        let (x0, d0) = c(0);
        let (x1, d1) = c(1);
        ErrorState::new(x0, x1, d0, d1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlatoonTrajectory {
    pub strategy: Strategy,
    pub step: f64,
    pub vehicles: Vec<VehicleRecord>,
    /// Learned control of each vehicle, for learn-from-predecessor runs.
    pub learned: Vec<LearnedSignal>,
    /// Grid samples whose heading error left the small-angle regime.
    pub small_angle_samples: usize,
}

impl PlatoonTrajectory {
    pub fn len(&self) -> usize {
        self.vehicles.first().map_or(0, |v| v.e.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.len()).map(|k| k as f64 * self.step).collect()
    }

    /// Horizon of the finite norms, m.
    pub fn horizon(&self) -> f64 {
        self.len().saturating_sub(1) as f64 * self.step
    }

    /// 1-based vehicle access.
    pub fn vehicle(&self, i: usize) -> Result<&VehicleRecord> {
        if i == 0 {
            return Err(Error::VehicleIndex {
                index: i,
                available: self.vehicles.len(),
            });
        }
        self.vehicles.get(i - 1).ok_or(Error::VehicleIndex {
            index: i,
            available: self.vehicles.len(),
        })
    }
}

struct Controller<'a> {
    scenario: &'a Scenario,
    pred: Option<&'a VehicleRecord>,
    learned: Option<&'a LearnedSignal>,
}

impl Controller<'_> {
    /// Steering at grid interval `k`, fraction `t`, for the vehicle's own state.
    fn steer(&self, own: &ErrorState, k: usize, t: f64, l: f64) -> Result<f64> {
        let s = self.scenario;
        let kappa = s.path.curvature_at(l);
        match (s.strategy, self.pred) {
            (Strategy::FeedforwardPredecessor, None) => {
                Ok(ff_control(&s.gains, s.params.speed, own, kappa))
            }
            (Strategy::FeedforwardPredecessor, Some(pred)) => {
                let p = pred.hermite(k, t, s.step);
                Ok(ff_control(
                    &s.gains,
                    s.params.speed,
                    &(*own - p),
                    kappa + p.heading_prime,
                ))
            }
            (Strategy::LearnFromPredecessor, _) => {
                // The lead feedforward is evaluated analytically; only the
                // learned increment is interpolated from the grid.
                let increment = match self.learned {
                    Some(sig) => sig.increment_at(l)?,
                    None => 0.0,
                };
                Ok(ff_control(&s.gains, s.params.speed, own, kappa) + increment)
            }
        }
    }
}

fn derivative(
    mats: &SystemMatrices,
    ctrl: &Controller<'_>,
    x: &[f64; 4],
    k: usize,
    t: f64,
    l: f64,
) -> Result<[f64; 4]> {
    let st = ErrorState::new(x[0], x[1], x[2], x[3]);
    let u = ctrl.steer(&st, k, t, l)?;
    let a = error_accel(mats, &st, u, ctrl.scenario.path.curvature_at(l));
    Ok([x[2], x[3], a[0], a[1]])
}

fn integrate_vehicle(
    index: usize,
    mats: &SystemMatrices,
    ctrl: &Controller<'_>,
    n: usize,
    small_angle: &mut usize,
) -> Result<VehicleRecord> {
    let s = ctrl.scenario;
    let h = s.step;
    let init = s.initial.get(index).copied().unwrap_or_default();
    let mut x = [
        init.e_lat,
        init.heading,
        init.e_lat_prime,
        init.heading_prime,
    ];
    let mut rec = VehicleRecord {
        e: Vec::with_capacity(n + 1),
        e_prime: Vec::with_capacity(n + 1),
        e_accel: Vec::with_capacity(n + 1),
        u: Vec::with_capacity(n + 1),
    };
    for k in 0..=n {
        let l = k as f64 * h;
        let st = ErrorState::new(x[0], x[1], x[2], x[3]);
        if !st.is_finite() || st.e_lat.abs() > BLOW_UP_LIMIT {
            return Err(Error::BlowUp {
                vehicle: index + 1,
                position: l,
                e_lat: st.e_lat,
            });
        }
        if st.outside_small_angle() {
            *small_angle += 1;
        }
        // Grid samples use the end of the previous interval for k = n.
        let (kk, t) = if k == n { (n - 1, 1.0) } else { (k, 0.0) };
        let u = ctrl.steer(&st, kk, t, l)?;
        let a = error_accel(mats, &st, u, s.path.curvature_at(l));
        rec.e.push([x[0], x[1]]);
        rec.e_prime.push([x[2], x[3]]);
        rec.e_accel.push([a[0], a[1]]);
        rec.u.push(u);
        if k == n {
            break;
        }

        let k1 = derivative(mats, ctrl, &x, k, 0.0, l)?;
        let x2 = axpy(&x, 0.5 * h, &k1);
        let k2 = derivative(mats, ctrl, &x2, k, 0.5, l + 0.5 * h)?;
        let x3 = axpy(&x, 0.5 * h, &k2);
        let k3 = derivative(mats, ctrl, &x3, k, 0.5, l + 0.5 * h)?;
        let x4 = axpy(&x, h, &k3);
        let k4 = derivative(mats, ctrl, &x4, k, 1.0, l + h)?;
        for j in 0..4 {
            x[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
    }
    Ok(rec)
}

fn axpy(x: &[f64; 4], a: f64, y: &[f64; 4]) -> [f64; 4] {
    [
        x[0] + a * y[0],
        x[1] + a * y[1],
        x[2] + a * y[2],
        x[3] + a * y[3],
    ]
}

pub fn simulate(scenario: &Scenario) -> Result<PlatoonTrajectory> {
    scenario.validate()?;
    if let (Strategy::LearnFromPredecessor, Some(d)) = (scenario.strategy, scenario.delay) {
        let m = delay_margin(d.spacing_m, scenario.params.speed, d.delay_s);
        if !m.feasible {
            return Err(Error::DelayInfeasible {
                margin_s: m.margin_s,
            });
        }
    }
    let mats = build_matrices(&scenario.params)?;
    let n = scenario.intervals()?;
    let h = scenario.step;
    let lfp = scenario.strategy == Strategy::LearnFromPredecessor;

    let mut vehicles: Vec<VehicleRecord> = Vec::with_capacity(scenario.vehicles);
    let mut learned = Vec::new();
    if lfp {
        let kappa: Vec<f64> = (0..=n)
            .map(|k| scenario.path.curvature_at(k as f64 * h))
            .collect();
        learned.push(LearnedSignal::lead(h, &kappa, scenario.gains.k_ff));
    }
    let mut small_angle = 0;
    for i in 0..scenario.vehicles {
        let ctrl = Controller {
            scenario,
            pred: vehicles.last().filter(|_| !lfp),
            learned: learned.last(),
        };
        let rec = integrate_vehicle(i, &mats, &ctrl, n, &mut small_angle)?;
        if lfp && i + 1 < scenario.vehicles {
            let y: Vec<[f64; 2]> = rec.e.clone();
            let d0 = central_difference(&rec.lateral(), h);
            let d1 = central_difference(&rec.e.iter().map(|e| e[1]).collect::<Vec<_>>(), h);
            let y_prime: Vec<[f64; 2]> = d0.into_iter().zip(d1).map(|(a, b)| [a, b]).collect();
            let next = learned_update(
                &scenario.gains,
                learned.last().expect("lead signal"),
                &y,
                &y_prime,
            )?;
            learned.push(next);
        }
        vehicles.push(rec);
    }
    Ok(PlatoonTrajectory {
        strategy: scenario.strategy,
        step: h,
        vehicles,
        learned,
        small_angle_samples: small_angle,
    })
}

/// Worst pointwise mismatch of the governing equation over the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    /// `max |e''_fd - (v^2 M)^{-1} (B u - F kappa - v C e' - L e)|`, 1/m.
    pub accel: f64,
    /// The same mismatch multiplied back by `v^2 M`, N.
    pub force: f64,
}

/// Second differences of the recorded errors against the model right-hand
/// side at every interior grid point.
pub fn residual_check(traj: &PlatoonTrajectory, scenario: &Scenario) -> Result<Residual> {
    let mats = build_matrices(&scenario.params)?;
    let h = traj.step;
    let v2 = mats.speed * mats.speed;
    let mut out = Residual {
        accel: 0.0,
        force: 0.0,
    };
    for rec in &traj.vehicles {
        for k in 1..rec.e.len().saturating_sub(1) {
            let st = rec.state(k);
            let model = error_accel(
                &mats,
                &st,
                rec.u[k],
                scenario.path.curvature_at(k as f64 * h),
            );
            for j in 0..2 {
                let fd = (rec.e[k + 1][j] - 2.0 * rec.e[k][j] + rec.e[k - 1][j]) / (h * h);
                let diff = (fd - model[j]).abs();
                out.accel = out.accel.max(diff);
                out.force = out.force.max(diff * v2 * mats.m[(j, j)]);
            }
        }
    }
    Ok(out)
}

/// Planar trace of every vehicle: the desired-path point offset by `e_lat`
/// along the left normal.
pub fn reconstruct_xy(traj: &PlatoonTrajectory, path: &DesiredPath) -> Result<Vec<Vec<[f64; 2]>>> {
    let pts: Vec<_> = traj
        .positions()
        .into_iter()
        .map(|l| path.query(l))
        .collect::<Result<_>>()?;
    Ok(traj
        .vehicles
        .iter()
        .map(|rec| {
            rec.e
                .iter()
                .zip(&pts)
                .map(|(e, p)| [p.x - e[0] * p.heading.sin(), p.y + e[0] * p.heading.cos()])
                .collect()
        })
        .collect())
}

pub const TRAJECTORY_HEADER: &str =
    "l_d_m,vehicle,e_lat_m,theta_err_rad,e_lat_prime_m_per_m,theta_err_prime_rad_per_m,u_rad,x_m,y_m";

/// Vehicle-major rows, every `stride`-th grid sample plus the last one.
pub fn write_trajectory_csv<W: Write>(
    traj: &PlatoonTrajectory,
    path: &DesiredPath,
    mut out: W,
    stride: usize,
) -> Result<()> {
    let xy = reconstruct_xy(traj, path)?;
    let stride = stride.max(1);
    writeln!(out, "{TRAJECTORY_HEADER}")?;
    let last = traj.len().saturating_sub(1);
    for (i, rec) in traj.vehicles.iter().enumerate() {
        for k in (0..traj.len()).filter(|&k| k % stride == 0 || k == last) {
            writeln!(
                out,
                "{:.4},{},{:.9e},{:.9e},{:.9e},{:.9e},{:.9e},{:.6},{:.6}",
                k as f64 * traj.step,
                i + 1,
                rec.e[k][0],
                rec.e[k][1],
                rec.e_prime[k][0],
                rec.e_prime[k][1],
                rec.u[k],
                xy[i][k][0],
                xy[i][k][1]
            )?;
        }
    }
    Ok(())
}

pub const LEARNED_HEADER: &str =
    "l_d_m,vehicle,u_l_rad,y_lat_m,y_theta_rad,y_lat_prime_m_per_m,y_theta_prime_rad_per_m";

pub fn write_learned_csv<W: Write>(
    traj: &PlatoonTrajectory,
    mut out: W,
    stride: usize,
) -> Result<()> {
    let stride = stride.max(1);
    writeln!(out, "{LEARNED_HEADER}")?;
    for (i, sig) in traj.learned.iter().enumerate() {
        let last = sig.len().saturating_sub(1);
        for k in (0..sig.len()).filter(|&k| k % stride == 0 || k == last) {
            writeln!(
                out,
                "{:.4},{},{:.9e},{:.9e},{:.9e},{:.9e},{:.9e}",
                k as f64 * sig.step,
                i + 1,
                sig.value(k),
                sig.y_prev[k][0],
                sig.y_prev[k][1],
                sig.y_prev_prime[k][0],
                sig.y_prev_prime[k][1]
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::CircuitSpec;

    fn short_track() -> DesiredPath {
        DesiredPath::lane_change_track(1, 3.5, 50.0, 20.0).unwrap()
    }

    fn scenario(
        strategy: Strategy,
        gains: GainSet,
        vehicles: usize,
        path: DesiredPath,
    ) -> Scenario {
        Scenario::new(
            VehicleParams::lincoln_mkz(10.0),
            gains,
            strategy,
            vehicles,
            path,
        )
    }

    #[test]
    fn straight_path_stays_at_zero() {
        let path = DesiredPath::constant_curvature(0.0, 20.0).unwrap();
        for strat in [
            Strategy::FeedforwardPredecessor,
            Strategy::LearnFromPredecessor,
        ] {
            let t = simulate(&scenario(strat, GainSet::table3(), 3, path.clone())).unwrap();
            assert!(t
                .vehicles
                .iter()
                .all(|v| v.e.iter().all(|e| e == &[0.0, 0.0])));
            let r =
                residual_check(&t, &scenario(strat, GainSet::table3(), 3, path.clone())).unwrap();
            assert_eq!(r.accel, 0.0);
        }
    }

    #[test]
    fn zero_learning_replicates_the_lead() {
        let g = GainSet::table3().with_learning(0.0, 0.0);
        let t = simulate(&scenario(
            Strategy::LearnFromPredecessor,
            g,
            4,
            short_track(),
        ))
        .unwrap();
        for v in &t.vehicles[1..] {
            assert_eq!(v.e, t.vehicles[0].e);
            assert_eq!(v.u, t.vehicles[0].u);
        }
        let ff = simulate(&scenario(
            Strategy::FeedforwardPredecessor,
            g,
            2,
            short_track(),
        ))
        .unwrap();
        assert_eq!(ff.vehicles[0], t.vehicles[0]);
    }

    #[test]
    fn lead_learned_signal_is_curvature_feedforward() {
        let path = short_track();
        let t = simulate(&scenario(
            Strategy::LearnFromPredecessor,
            GainSet::table3(),
            2,
            path.clone(),
        ))
        .unwrap();
        for (k, l) in t.positions().iter().enumerate() {
            assert_eq!(t.learned[0].value(k), 1.59 * path.curvature_at(*l));
        }
    }

    #[test]
    fn learned_control_matches_direct_recursion() {
        let path = short_track();
        let g = GainSet::table3();
        let t = simulate(&scenario(
            Strategy::LearnFromPredecessor,
            g,
            3,
            path.clone(),
        ))
        .unwrap();
        let h = t.step;
        let mut u_l: Vec<f64> = t
            .positions()
            .iter()
            .map(|&l| g.k_ff * path.curvature_at(l))
            .collect();
        for i in 1..3 {
            let y = t.vehicles[i - 1].lateral();
            let n = y.len();
            for k in 0..n {
                let dy = if k == 0 {
                    (y[1] - y[0]) / h
                } else if k == n - 1 {
                    (y[n - 1] - y[n - 2]) / h
                } else {
                    (y[k + 1] - y[k - 1]) / (2.0 * h)
                };
                u_l[k] += g.k_lp[0] * y[k] + g.k_ld[0] * dy;
            }
            for k in (0..n).step_by(97) {
                assert!((t.learned[i].value(k) - u_l[k]).abs() < 1e-14);
                let st = t.vehicles[i].state(k);
                let expected = -(g.k_p[0] * st.e_lat + g.k_p[1] * st.heading)
                    - 10.0 * (g.k_d[0] * st.e_lat_prime + g.k_d[1] * st.heading_prime)
                    + u_l[k];
                assert!((t.vehicles[i].u[k] - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn superposition_in_curvature() {
        let path = short_track();
        let doubled = path.scaled(2.0).unwrap();
        for strat in [
            Strategy::FeedforwardPredecessor,
            Strategy::LearnFromPredecessor,
        ] {
            let a = simulate(&scenario(strat, GainSet::table3(), 3, path.clone())).unwrap();
            let b = simulate(&scenario(strat, GainSet::table3(), 3, doubled.clone())).unwrap();
            let scale = a
                .vehicles
                .iter()
                .flat_map(|v| v.e.iter().map(|e| e[0].abs()))
                .fold(0.0, f64::max);
            for (va, vb) in a.vehicles.iter().zip(&b.vehicles) {
                for k in 0..va.e.len() {
                    assert!((vb.e[k][0] - 2.0 * va.e[k][0]).abs() <= 1e-9 * scale);
                }
            }
        }
    }

    #[test]
    fn reconstruct_parallel_and_circle() {
        let straight = DesiredPath::constant_curvature(0.0, 10.0).unwrap();
        let d = 0.7;
        let rec = VehicleRecord {
            e: vec![[d, 0.0]; 1001],
            e_prime: vec![[0.0; 2]; 1001],
            e_accel: vec![[0.0; 2]; 1001],
            u: vec![0.0; 1001],
        };
        let traj = PlatoonTrajectory {
            strategy: Strategy::FeedforwardPredecessor,
            step: 0.01,
            vehicles: vec![rec.clone()],
            learned: Vec::new(),
            small_angle_samples: 0,
        };
        let xy = reconstruct_xy(&traj, &straight).unwrap();
        assert!(xy[0].iter().all(|p| (p[1] - d).abs() < 1e-12));
        let r = 20.0;
        let circle = DesiredPath::constant_curvature(1.0 / r, 10.0).unwrap();
        let xy = reconstruct_xy(&traj, &circle).unwrap();
        // Left of a left-turning circle is toward the centre (0, r).
        for p in &xy[0] {
            let rho = (p[0].powi(2) + (p[1] - r).powi(2)).sqrt();
            assert!((rho - (r - d)).abs() < 1e-6);
        }
    }

    #[test]
    fn rejects_bad_scenarios() {
        let path = short_track();
        assert!(simulate(&scenario(
            Strategy::LearnFromPredecessor,
            GainSet::table3(),
            1,
            path.clone()
        ))
        .is_err());
        let uneven = scenario(
            Strategy::LearnFromPredecessor,
            GainSet::table3(),
            2,
            path.clone(),
        )
        .with_step(0.07);
        assert!(simulate(&uneven).is_err());
        let mut late = scenario(Strategy::LearnFromPredecessor, GainSet::table3(), 2, path);
        late.delay = Some(DelaySpec {
            spacing_m: 5.0,
            delay_s: 0.6,
        });
        assert!(matches!(
            simulate(&late),
            Err(Error::DelayInfeasible { .. })
        ));
    }

    #[test]
    fn blow_up_guard_reports_vehicle() {
        // Positive heading gain with negative lateral gain destabilizes the loop.
        let g = GainSet::feedback([-0.5, 0.96], [0.0, 0.08], 1.59);
        let path = DesiredPath::circuit(&CircuitSpec::default()).unwrap();
        let err = simulate(&scenario(Strategy::FeedforwardPredecessor, g, 2, path)).unwrap_err();
        assert!(matches!(err, Error::BlowUp { vehicle: 1, .. }), "{err}");
    }

    #[test]
    fn csv_layout() {
        let path = DesiredPath::constant_curvature(0.01, 1.0).unwrap();
        let t = simulate(&scenario(
            Strategy::LearnFromPredecessor,
            GainSet::table3(),
            2,
            path.clone(),
        ))
        .unwrap();
        let mut buf = Vec::new();
        write_trajectory_csv(&t, &path, &mut buf, 50).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], TRAJECTORY_HEADER);
        assert_eq!(lines.len(), 1 + 2 * 3);
        assert!(lines[4].starts_with("0.0000,2,"));
        let mut buf = Vec::new();
        write_learned_csv(&t, &mut buf, 100).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 1 + 2 * 2);
    }
}
