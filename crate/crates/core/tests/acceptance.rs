//! Acceptance suite. One PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines show up in plain
//! `cargo test` output.

use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use platoon_lateral::analysis::{attenuation_report, verdict, Verdict};
use platoon_lateral::control::{delay_margin, GainSet, OutputSelector};
use platoon_lateral::design::{design_lfp, kff_formula, DesignSpec};
use platoon_lateral::model::VehicleParams;
use platoon_lateral::path::{CircuitSpec, DesiredPath};
use platoon_lateral::polyfreq::{
    bode_integral, build_h_ff_matrix, build_h_lfp_scalar, build_h_lfp_vector, closed_loop_matrix,
    coefficient_condition, hinf_norm, rank1_perturbation_bound, routh_hurwitz, sigma1_2x2,
};
use platoon_lateral::sim::{residual_check, simulate, PlatoonTrajectory, Scenario, Strategy};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria that cannot hold for the model as stated. The suite still
/// evaluates them at full tolerance and prints FAIL.
///
/// 4: `G` is strictly proper, so `H(s) = 1 + G(s) -> 1` and `sup |H(jw)| = 1`
/// exactly; `hinf_norm < 1` is impossible for every lateral-output LFP design.
const UNATTAINABLE: &[usize] = &[4];

const RESIDUAL_LIMIT: f64 = 1e-4;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn params() -> VehicleParams {
    VehicleParams::lincoln_mkz(10.0)
}

fn track() -> DesiredPath {
    DesiredPath::circuit(&CircuitSpec::default()).expect("default circuit")
}

fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| 10f64.powf(lo + (hi - lo) * k as f64 / (n - 1) as f64))
        .collect()
}

fn rel(x: f64, target: f64) -> f64 {
    ((x - target) / target).abs()
}

/// Residuals of every simulation run by the suite, for criterion 11.
#[derive(Default)]
struct Residuals(Vec<(&'static str, f64, f64)>);

impl Residuals {
    fn record(&mut self, name: &'static str, traj: &PlatoonTrajectory, sc: &Scenario) {
        let r = residual_check(traj, sc).expect("residual");
        self.0.push((name, r.accel, r.force));
    }
}

fn c1() -> Outcome {
    let c = coefficient_condition(&params(), &GainSet::table3()).expect("coefficients");
    let targets = [2.91e22, 4.42e23, 5.70e22, 6.07e20];
    let got = c.coefficients();
    let worst = got
        .iter()
        .zip(targets)
        .map(|(&g, t)| rel(g, t))
        .fold(0.0, f64::max);
    outcome(
        worst <= 0.02,
        format!(
            "a6 {:.4e}, a4 {:.4e}, a2 {:.4e}, a0 {:.4e}; worst relative error {:.2e} (limit 2e-2)",
            got[0], got[1], got[2], got[3], worst
        ),
    )
}

fn c2() -> Outcome {
    let k = kff_formula(&params(), 0.96);
    outcome(
        (k - 1.59).abs() <= 0.01,
        format!("k_ff = {k:.6} (target 1.59 +/- 0.01)"),
    )
}

fn c3() -> Outcome {
    let p = params();
    let h = build_h_lfp_scalar(&p, &GainSet::table3()).expect("H");
    let h0 = h.eval(Complex64::new(0.0, 0.0)).re;
    let mut pass = (h0 - 1.0 / 3.0).abs() <= 1e-10;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let k_elat = rng.random_range(0.01..0.3);
        let g = GainSet::lateral(
            [k_elat, rng.random_range(0.1..2.0)],
            [rng.random_range(0.0..0.1), rng.random_range(0.0..0.2)],
            rng.random_range(0.5..3.0),
            rng.random_range(-2.0 * k_elat..0.0),
            rng.random_range(-1.0..0.0),
        );
        let q = p.with_speed(rng.random_range(3.0..30.0));
        let h = build_h_lfp_scalar(&q, &g).expect("H");
        let closed = (k_elat + g.k_lp[0]) / k_elat;
        let err = (h.eval(Complex64::new(0.0, 0.0)).re - closed).abs() / closed.abs().max(1.0);
        worst = worst.max(err);
    }
    pass &= worst <= 1e-12;
    outcome(
        pass,
        format!("H(0) = {h0:.15}; 100 random gain sets, worst deviation {worst:.2e} (limit 1e-12)"),
    )
}

fn c4() -> Outcome {
    let p = params();
    let designed = design_lfp(&DesignSpec::table3()).expect("design");
    let gains = *designed.gains().expect("accepted");
    let den = closed_loop_matrix(&p, &gains).expect("A(s)").det();
    let routh = routh_hurwitz(&den).expect("routh");
    let h = build_h_lfp_scalar(&p, &gains).expect("H");
    let hinf = hinf_norm(&h).expect("hinf");
    let cert = verdict(
        &p,
        &gains,
        Strategy::LearnFromPredecessor,
        OutputSelector::Lateral,
    )
    .expect("verdict");
    outcome(
        routh.stable && hinf.norm < 1.0 && cert.verdict == Verdict::Stable,
        format!(
            "Routh stable {}; hinf_norm {:.12} (H(inf) = {}); largest finite gain {:.10} at {:.1e} rad/m; verdict {}",
            routh.stable,
            hinf.norm,
            hinf.at_infinity,
            hinf.finite_peak,
            hinf.finite_peak_omega,
            cert.verdict.label()
        ),
    )
}

fn lfp_scenario(k_ld: f64) -> Scenario {
    let gains = GainSet::table3().with_learning(-0.04, k_ld);
    Scenario::new(params(), gains, Strategy::LearnFromPredecessor, 12, track())
}

fn c5(res: &mut Residuals) -> Outcome {
    let t = Instant::now();
    let sc = lfp_scenario(-0.3);
    let traj = simulate(&sc).expect("simulate");
    let report = attenuation_report(&traj, OutputSelector::Lateral).expect("norms");
    let elapsed = t.elapsed().as_secs_f64();
    res.record("lfp k_ld=-0.3", &traj, &sc);
    let hinf = hinf_norm(&build_h_lfp_scalar(&sc.params, &sc.gains).expect("H")).expect("hinf");
    let gamma = report.max_ratio().expect("ratios");
    let decreasing = report.elat_strictly_decreasing();
    outcome(
        decreasing && gamma <= hinf.norm + 0.05 && elapsed < 10.0,
        format!(
            "norms strictly decreasing {decreasing} ({:.4} -> {:.4}); max gamma {gamma:.4} <= {:.4}; {elapsed:.2} s",
            report.norm_elat[0],
            report.norm_elat[11],
            hinf.norm + 0.05
        ),
    )
}

fn c6(res: &mut Residuals) -> Outcome {
    let t = Instant::now();
    let sc = lfp_scenario(0.0);
    let cert =
        verdict(&sc.params, &sc.gains, sc.strategy, OutputSelector::Lateral).expect("verdict");
    let bode = cert.bode.as_ref().expect("bode").numeric;
    let traj = simulate(&sc).expect("simulate");
    let report = attenuation_report(&traj, OutputSelector::Lateral).expect("norms");
    let elapsed = t.elapsed().as_secs_f64();
    res.record("lfp k_ld=0", &traj, &sc);
    let first = report
        .ratio_elat
        .iter()
        .position(|r| r.is_some_and(|x| x >= 1.0));
    outcome(
        cert.verdict == Verdict::UnstableByTheorem && bode.abs() <= 1e-3 && first.is_some() && elapsed < 10.0,
        format!(
            "verdict {}; sensitivity integral {bode:.2e}; first gamma >= 1 at vehicle {:?}; {elapsed:.2} s",
            cert.verdict.label(),
            first.map(|k| k + 2)
        ),
    )
}

fn c7() -> Outcome {
    let p = params();
    let h = build_h_lfp_scalar(&p, &GainSet::table3()).expect("H");
    let b = bode_integral(&h).expect("bode");
    let by_hand = -std::f64::consts::FRAC_PI_2 * p.cornering_front * -0.3 / (p.mass * 100.0);
    let pass = (b.prediction - by_hand).abs() < 1e-12
        && rel(b.prediction, 0.9940) <= 0.02
        && rel(b.numeric, b.prediction) <= 0.02;
    outcome(
        pass,
        format!(
            "prediction {:.6} (by hand {by_hand:.6}, quoted 0.9940); numeric {:.6}, relative gap {:.1e}",
            b.prediction,
            b.numeric,
            rel(b.numeric, b.prediction)
        ),
    )
}

fn c8(res: &mut Residuals) -> Outcome {
    let t = Instant::now();
    let sc = Scenario::new(
        params(),
        GainSet::table3(),
        Strategy::FeedforwardPredecessor,
        12,
        track(),
    );
    let traj = simulate(&sc).expect("simulate");
    let report = attenuation_report(&traj, OutputSelector::Lateral).expect("norms");
    let elapsed = t.elapsed().as_secs_f64();
    res.record("ff table3", &traj, &sc);
    let ff = build_h_ff_matrix(&sc.params, &sc.gains).expect("H2");
    let min_sigma = logspace(-4.0, 4.0, 500)
        .into_iter()
        .map(|w| sigma1_2x2(&ff.matrix.eval(Complex64::new(0.0, w))))
        .fold(f64::INFINITY, f64::min);
    let (lat, vec) = (
        report.elat_strictly_increasing(),
        report.evec_strictly_increasing(),
    );
    outcome(
        lat && vec && min_sigma >= 1.0 - 1e-9,
        format!(
            "||e_lat|| increasing {lat} ({:.3} -> {:.3}); ||e|| increasing {vec}; min sigma1 over 500 w {min_sigma:.12}; {elapsed:.2} s",
            report.norm_elat[0], report.norm_elat[11]
        ),
    )
}

fn c9(res: &mut Residuals) -> Outcome {
    let p = params();
    let mut gains = GainSet::table3();
    // The lead vehicle must settle on the path, so k_ff comes from the formula.
    gains.k_ff = kff_formula(&p, gains.k_p[1]);
    let path = DesiredPath::constant_curvature(0.01, 500.0).expect("path");
    let sc = Scenario::new(p, gains, Strategy::FeedforwardPredecessor, 2, path);
    let traj = simulate(&sc).expect("simulate");
    res.record("ff constant curvature", &traj, &sc);
    let last = traj.len() - 1;
    let theta1 = traj.vehicles[0].e[last][1];
    let elat2 = traj.vehicles[1].e[last][0];
    let ratio = elat2 / theta1;
    let expected = gains.k_p[1] / gains.k_p[0];
    let dc = build_h_ff_matrix(&p, &gains)
        .expect("H2")
        .heading_to_lateral
        .eval(Complex64::new(0.0, 0.0))
        .re;
    outcome(
        rel(ratio, expected) <= 0.05 && (dc - expected).abs() <= 1e-8,
        format!(
            "e_lat,2 / theta_1 = {ratio:.5} at {} m (target {expected}, 5%); H2(0) = {dc:.12}",
            traj.horizon()
        ),
    )
}

fn c10() -> Outcome {
    let p = params();
    let base = GainSet::table3();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let omegas = logspace(-3.0, 3.0, 100);
    let mut min_sigma = f64::INFINITY;
    let mut all_theorem = true;
    for _ in 0..50 {
        let mut row = || [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        let (k_lp, k_ld) = (row(), row());
        let g = GainSet::full(base.k_p, base.k_d, base.k_ff, k_lp, k_ld);
        let h = build_h_lfp_vector(&p, &g).expect("H");
        for &w in &omegas {
            min_sigma = min_sigma.min(sigma1_2x2(&h.eval(Complex64::new(0.0, w))));
        }
        let cert =
            verdict(&p, &g, Strategy::LearnFromPredecessor, OutputSelector::Full).expect("verdict");
        all_theorem &= cert.verdict == Verdict::UnstableByTheorem;
    }
    outcome(
        min_sigma >= 1.0 - 1e-9 && all_theorem,
        format!("min sigma1 over 50 x 100 samples {min_sigma:.12}; all UNSTABLE-BY-THEOREM {all_theorem}"),
    )
}

fn c11(res: &Residuals) -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = f64::INFINITY;
    for _ in 0..1000 {
        let mut c = || Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let u = nalgebra::Vector2::new(c(), c());
        let v = nalgebra::Vector2::new(c(), c());
        let s = rank1_perturbation_bound(&(u * v.adjoint())).map_or(f64::NEG_INFINITY, |s| s);
        worst = worst.min(s);
    }
    pass &= worst >= 1.0 - 1e-9;
    notes.push(format!("rank-one min {worst:.12}"));

    let max_res = res.0.iter().map(|r| r.1).fold(0.0, f64::max);
    pass &= max_res < RESIDUAL_LIMIT;
    for (name, accel, force) in &res.0 {
        notes.push(format!("residual[{name}] {accel:.1e} 1/m ({force:.1e} N)"));
    }

    // Grid halving on a short lane change.
    let small = DesiredPath::lane_change_track(1, 3.5, 50.0, 30.0).expect("path");
    let base = Scenario::new(
        params(),
        GainSet::table3(),
        Strategy::LearnFromPredecessor,
        3,
        small.clone(),
    );
    let steps = [0.04, 0.02, 0.01, 0.005];
    let runs: Vec<_> = steps
        .iter()
        .map(|&h| simulate(&base.clone().with_step(h)).expect("simulate"))
        .collect();
    let diffs: Vec<f64> = runs
        .windows(2)
        .map(|w| {
            let (coarse, fine) = (&w[0], &w[1]);
            let mut d: f64 = 0.0;
            for (vc, vf) in coarse.vehicles.iter().zip(&fine.vehicles) {
                for k in 0..coarse.len() {
                    d = d.max((vc.e[k][0] - vf.e[2 * k][0]).abs());
                }
            }
            d
        })
        .collect();
    let monotone = diffs.windows(2).all(|w| w[1] < w[0]);
    pass &= monotone;
    notes.push(format!(
        "halving diffs {:?}",
        diffs.iter().map(|d| format!("{d:.1e}")).collect::<Vec<_>>()
    ));

    // Superposition.
    let once = simulate(&base).expect("simulate");
    let twice_sc = Scenario {
        path: small.scaled(2.0).expect("scaled"),
        ..base.clone()
    };
    let twice = simulate(&twice_sc).expect("simulate");
    let (mut num, mut den): (f64, f64) = (0.0, 0.0);
    for (a, b) in once.vehicles.iter().zip(&twice.vehicles) {
        for k in 0..once.len() {
            for j in 0..2 {
                num = num.max((b.e[k][j] - 2.0 * a.e[k][j]).abs());
                den = den.max((2.0 * a.e[k][j]).abs());
            }
            num = num.max((b.u[k] - 2.0 * a.u[k]).abs());
            den = den.max((2.0 * a.u[k]).abs());
        }
    }
    let lin = num / den;
    pass &= lin <= 1e-9;
    notes.push(format!("superposition {lin:.1e}"));

    let table = [
        (delay_margin(20.0, 10.0, 1.0), true, 1.0),
        (delay_margin(20.0, 10.0, 2.0), false, 0.0),
        (delay_margin(5.0, 10.0, 0.6), false, -0.1),
    ];
    let delay_ok = table.iter().all(|(m, feasible, margin)| {
        m.feasible == *feasible && (m.margin_s - margin).abs() < 1e-12
    });
    pass &= delay_ok;
    notes.push(format!("delay table {delay_ok}"));
    outcome(pass, notes.join("; "))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut res = Residuals::default();
    let criteria: Vec<(&str, Outcome)> = vec![
        ("coefficient reproduction", c1()),
        ("k_ff reproduction", c2()),
        ("H(0) closed form", c3()),
        ("stability certificate", c4()),
        ("LFP attenuation", c5(&mut res)),
        ("K_LD = 0 instability", c6(&mut res)),
        ("sensitivity integral with learning", c7()),
        ("FF amplification", c8(&mut res)),
        ("constant curvature counterexample", c9(&mut res)),
        ("vector-output impossibility", c10()),
        ("property suites", c11(&res)),
    ];
    let mut unexpected = Vec::new();
    for (i, (name, o)) in criteria.iter().enumerate() {
        let n = i + 1;
        println!(
            "{} [{n:>2}] {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        if o.pass == UNATTAINABLE.contains(&n) {
            unexpected.push(n);
        }
    }
    let passed = criteria.iter().filter(|c| c.1.pass).count();
    println!(
        "acceptance: {passed}/{} PASS in {:.1} s; known unattainable {UNATTAINABLE:?}",
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected outcome for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
