//! Scenario configuration files.
//!
//! TOML with one table per block. Keys carry their unit in the name. Unknown
//! keys are rejected and every error names the offending line.

use std::path::Path;

use serde::Deserialize;

use crate::control::{GainSet, OutputSelector};
use crate::design::{kff_formula, DesignSpec};
use crate::error::{Error, Result};
use crate::model::{ErrorState, VehicleParams};
use crate::path::{CircuitSpec, DesiredPath, LaneChangePlacement, DEFAULT_STEP};
use crate::sim::{DelaySpec, Scenario, Strategy};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub vehicle: VehicleBlock,
    pub path: PathBlock,
    #[serde(default)]
    pub gains: GainsBlock,
    pub platoon: PlatoonBlock,
    #[serde(default)]
    pub outputs: OutputsBlock,
    pub design: Option<DesignBlock>,
}

/// Omitted keys fall back to the Lincoln MKZ.
#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VehicleBlock {
    pub mass_kg: Option<f64>,
    pub yaw_inertia_kg_m2: Option<f64>,
    pub cornering_front_n_per_rad: Option<f64>,
    pub cornering_rear_n_per_rad: Option<f64>,
    pub cg_to_front_m: Option<f64>,
    pub cg_to_rear_m: Option<f64>,
    pub speed_mps: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum PathBlock {
    Circuit {
        laps: Option<usize>,
        straight_length_m: Option<f64>,
        change_length_m: Option<f64>,
        lane_offset_m: Option<f64>,
        corner_length_m: Option<f64>,
        corner_angle_rad: Option<f64>,
        final_straight_m: Option<f64>,
        placement: Option<Placement>,
    },
    LaneChange {
        changes: usize,
        lane_offset_m: f64,
        change_length_m: f64,
        straight_length_m: f64,
    },
    ConstantCurvature {
        curvature_per_m: f64,
        length_m: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    Straights,
    Corners,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum LearningGain {
    Scalar(f64),
    Vector([f64; 2]),
}

impl LearningGain {
    fn row(self) -> [f64; 2] {
        match self {
            Self::Scalar(x) => [x, 0.0],
            Self::Vector(v) => v,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GainsBlock {
    /// `[k_elat (rad/m), k_theta (rad/rad)]`.
    pub k_p: Option<[f64; 2]>,
    /// `[k_elat' (rad s/m), k_theta' (rad s/rad)]`.
    pub k_d: Option<[f64; 2]>,
    /// Omitted: the zero steady-state lateral error formula.
    pub k_ff_m: Option<f64>,
    pub k_lp: Option<LearningGain>,
    pub k_ld: Option<LearningGain>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum StrategyName {
    #[serde(rename = "lfp-dt")]
    Lfp,
    #[serde(rename = "ff-pt")]
    Ff,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputName {
    #[default]
    Lateral,
    Full,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlatoonBlock {
    pub vehicles: usize,
    pub strategy: StrategyName,
    #[serde(default)]
    pub output: OutputName,
    pub step_m: Option<f64>,
    pub spacing_m: Option<f64>,
    pub delay_s: Option<f64>,
    /// `[e_lat (m), theta_err (rad), e_lat' (m/m), theta_err' (rad/m)]`.
    pub lead_initial: Option<[f64; 4]>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputsBlock {
    pub directory: Option<String>,
    #[serde(default = "yes")]
    pub trajectory: bool,
    #[serde(default = "yes")]
    pub learned: bool,
    #[serde(default = "yes")]
    pub norms: bool,
    #[serde(default = "yes")]
    pub certificate: bool,
    #[serde(default)]
    pub path: bool,
    /// Every n-th grid sample goes to the trajectory CSVs.
    #[serde(default = "ten")]
    pub stride: usize,
}

fn yes() -> bool {
    true
}

fn ten() -> usize {
    10
}

impl Default for OutputsBlock {
    fn default() -> Self {
        Self {
            directory: None,
            trajectory: true,
            learned: true,
            norms: true,
            certificate: true,
            path: false,
            stride: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignBlock {
    pub k_lp_range: [f64; 2],
    pub k_ld_range: [f64; 2],
    pub resolution: Option<[usize; 2]>,
    pub refinements: Option<usize>,
    pub seed: Option<[f64; 2]>,
}

/// Everything a command needs, validated.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub scenario: Scenario,
    pub output: OutputSelector,
    pub outputs: OutputsBlock,
    pub design: Option<DesignSpec>,
}

/// 1-based line of `key` inside `[block]`, if present.
fn locate(src: &str, block: &str, key: &str) -> Option<usize> {
    let mut current = String::new();
    for (i, raw) in src.lines().enumerate() {
        let line = raw.trim();
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            current = name.trim().to_string();
            continue;
        }
        if current == block {
            if let Some(rest) = line.strip_prefix(key) {
                if rest.trim_start().starts_with('=') {
                    return Some(i + 1);
                }
            }
        }
    }
    None
}

fn at(src: &str, block: &str, key: &str, msg: impl std::fmt::Display) -> Error {
    match locate(src, block, key) {
        Some(n) => Error::Config(format!("line {n}: [{block}] {key}: {msg}")),
        None => Error::Config(format!("[{block}] {key}: {msg}")),
    }
}

fn config_key(name: &str) -> (&'static str, &'static str) {
    match name {
        "mass" => ("vehicle", "mass_kg"),
        "yaw_inertia" => ("vehicle", "yaw_inertia_kg_m2"),
        "cornering_front" => ("vehicle", "cornering_front_n_per_rad"),
        "cornering_rear" => ("vehicle", "cornering_rear_n_per_rad"),
        "cg_to_front" => ("vehicle", "cg_to_front_m"),
        "cg_to_rear" => ("vehicle", "cg_to_rear_m"),
        "speed" => ("vehicle", "speed_mps"),
        "k_elat" | "k_theta" => ("gains", "k_p"),
        "k_elat_prime" | "k_theta_prime" => ("gains", "k_d"),
        "k_ff" => ("gains", "k_ff_m"),
        "k_lp" | "k_lp_theta" => ("gains", "k_lp"),
        "k_ld" | "k_ld_theta" => ("gains", "k_ld"),
        _ => ("platoon", "step_m"),
    }
}

/// Attach a line to library validation errors.
fn relocate(src: &str, e: Error) -> Error {
    match e {
        Error::InvalidParameter {
            name,
            value,
            reason,
        } => {
            let (block, key) = config_key(name);
            at(src, block, key, format!("{name} = {value}: {reason}"))
        }
        other => Error::Config(other.to_string()),
    }
}

impl ScenarioConfig {
    pub fn parse(src: &str) -> Result<Self> {
        toml::from_str(src).map_err(|e| Error::Config(e.to_string().trim_end().to_string()))
    }

    pub fn params(&self) -> VehicleParams {
        let d = VehicleParams::lincoln_mkz(10.0);
        let v = &self.vehicle;
        VehicleParams {
            mass: v.mass_kg.unwrap_or(d.mass),
            yaw_inertia: v.yaw_inertia_kg_m2.unwrap_or(d.yaw_inertia),
            cornering_front: v.cornering_front_n_per_rad.unwrap_or(d.cornering_front),
            cornering_rear: v.cornering_rear_n_per_rad.unwrap_or(d.cornering_rear),
            cg_to_front: v.cg_to_front_m.unwrap_or(d.cg_to_front),
            cg_to_rear: v.cg_to_rear_m.unwrap_or(d.cg_to_rear),
            speed: v.speed_mps.unwrap_or(d.speed),
        }
    }

    fn build_path(&self, src: &str, step: f64) -> Result<DesiredPath> {
        let path = match &self.path {
            PathBlock::Circuit {
                laps,
                straight_length_m,
                change_length_m,
                lane_offset_m,
                corner_length_m,
                corner_angle_rad,
                final_straight_m,
                placement,
            } => {
                let d = CircuitSpec::default();
                DesiredPath::circuit(&CircuitSpec {
                    laps: laps.unwrap_or(d.laps),
                    straight_length: straight_length_m.unwrap_or(d.straight_length),
                    change_length: change_length_m.unwrap_or(d.change_length),
                    lane_offset: lane_offset_m.unwrap_or(d.lane_offset),
                    corner_length: corner_length_m.unwrap_or(d.corner_length),
                    corner_angle: corner_angle_rad.unwrap_or(d.corner_angle),
                    final_straight: final_straight_m.unwrap_or(d.final_straight),
                    placement: match placement {
                        Some(Placement::Corners) => LaneChangePlacement::Corners,
                        _ => LaneChangePlacement::Straights,
                    },
                    step,
                })
            }
            PathBlock::LaneChange {
                changes,
                lane_offset_m,
                change_length_m,
                straight_length_m,
            } => DesiredPath::lane_change_track(
                *changes,
                *lane_offset_m,
                *change_length_m,
                *straight_length_m,
            ),
            PathBlock::ConstantCurvature {
                curvature_per_m,
                length_m,
            } => DesiredPath::constant_curvature(*curvature_per_m, *length_m),
        }
        .map_err(|e| at(src, "path", "type", e))?;
        if path.step() == step {
            return Ok(path);
        }
        DesiredPath::from_segments(path.segments().to_vec(), step)
            .map_err(|e| at(src, "platoon", "step_m", e))
    }

    fn gains(&self, src: &str, params: &VehicleParams, output: OutputSelector) -> Result<GainSet> {
        let d = GainSet::table3();
        let g = &self.gains;
        let k_p = g.k_p.unwrap_or(d.k_p);
        let k_ff = g.k_ff_m.unwrap_or_else(|| kff_formula(params, k_p[1]));
        let lp = g.k_lp.unwrap_or(LearningGain::Scalar(0.0));
        let ld = g.k_ld.unwrap_or(LearningGain::Scalar(0.0));
        if output == OutputSelector::Lateral {
            for (key, gain) in [("k_lp", lp), ("k_ld", ld)] {
                if let LearningGain::Vector(_) = gain {
                    return Err(at(
                        src,
                        "gains",
                        key,
                        "a row vector needs output = \"full\" in [platoon]",
                    ));
                }
            }
        }
        let gains = GainSet {
            k_p,
            k_d: g.k_d.unwrap_or(d.k_d),
            k_ff,
            k_lp: lp.row(),
            k_ld: ld.row(),
            output,
        };
        gains.validate().map_err(|e| relocate(src, e))?;
        Ok(gains)
    }

    pub fn resolve(&self, src: &str) -> Result<Resolved> {
        let params = self.params();
        params.validate().map_err(|e| relocate(src, e))?;
        let p = &self.platoon;
        let output = match p.output {
            OutputName::Lateral => OutputSelector::Lateral,
            OutputName::Full => OutputSelector::Full,
        };
        let strategy = match p.strategy {
            StrategyName::Lfp => Strategy::LearnFromPredecessor,
            StrategyName::Ff => Strategy::FeedforwardPredecessor,
        };
        let step = p.step_m.unwrap_or(DEFAULT_STEP);
        if !(step > 0.0 && step.is_finite()) {
            return Err(at(
                src,
                "platoon",
                "step_m",
                "must be finite and strictly positive",
            ));
        }
        if p.vehicles < 2 {
            return Err(at(
                src,
                "platoon",
                "vehicles",
                "a platoon needs at least 2 vehicles",
            ));
        }
        let delay = match (p.spacing_m, p.delay_s) {
            (Some(spacing_m), Some(delay_s)) => Some(DelaySpec { spacing_m, delay_s }),
            (None, None) => None,
            (Some(_), None) => {
                return Err(at(src, "platoon", "spacing_m", "delay_s is also required"))
            }
            (None, Some(_)) => {
                return Err(at(src, "platoon", "delay_s", "spacing_m is also required"))
            }
        };
        let gains = self.gains(src, &params, output)?;
        let path = self.build_path(src, step)?;
        let mut scenario = Scenario::new(params, gains, strategy, p.vehicles, path).with_step(step);
        scenario.delay = delay;
        if let Some(x) = p.lead_initial {
            scenario.initial = vec![ErrorState::new(x[0], x[1], x[2], x[3])];
        }
        scenario.validate().map_err(|e| relocate(src, e))?;
        if self.outputs.stride == 0 {
            return Err(at(src, "outputs", "stride", "must be at least 1"));
        }

        let design = self.design.as_ref().map(|d| {
            let mut spec = DesignSpec::new(params, gains.k_p, gains.k_d);
            spec.k_ff = Some(gains.k_ff);
            spec.k_lp_range = (d.k_lp_range[0], d.k_lp_range[1]);
            spec.k_ld_range = (d.k_ld_range[0], d.k_ld_range[1]);
            if let Some([a, b]) = d.resolution {
                spec.resolution = (a, b);
            }
            if let Some(r) = d.refinements {
                spec.refinements = r;
            }
            spec.seed = d.seed.map(|[a, b]| (a, b));
            spec
        });
        Ok(Resolved {
            scenario,
            output,
            outputs: self.outputs.clone(),
            design,
        })
    }
}

pub fn load_str(src: &str) -> Result<Resolved> {
    ScenarioConfig::parse(src)?.resolve(src)
}

pub fn load(path: &Path) -> Result<Resolved> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    load_str(&src).map_err(|e| match e {
        Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC: &str = r#"
[vehicle]
speed_mps = 10.0

[path]
type = "lane_change"
changes = 1
lane_offset_m = 3.5
change_length_m = 50.0
straight_length_m = 30.0

[gains]
k_p = [0.06, 0.96]
k_d = [0.0, 0.08]
k_ff_m = 1.59
k_lp = -0.04
k_ld = -0.3

[platoon]
vehicles = 3
strategy = "lfp-dt"
"#;

    #[test]
    fn parses_and_resolves() {
        let r = load_str(BASIC).unwrap();
        assert_eq!(r.scenario.gains, GainSet::table3());
        assert_eq!(r.scenario.vehicles, 3);
        assert_eq!(r.scenario.strategy, Strategy::LearnFromPredecessor);
        assert_eq!(r.output, OutputSelector::Lateral);
        assert!((r.scenario.path.length() - 110.0).abs() < 1e-9);
        assert!(r.outputs.trajectory && !r.outputs.path);
        assert!(r.design.is_none());
    }

    #[test]
    fn defaults_use_formula_and_default_circuit() {
        let src = "[path]\ntype = \"circuit\"\n[platoon]\nvehicles = 2\nstrategy = \"ff-pt\"\n";
        let r = load_str(src).unwrap();
        let k = kff_formula(&VehicleParams::lincoln_mkz(10.0), 0.96);
        assert_eq!(r.scenario.gains.k_ff, k);
        assert!((r.scenario.path.length() - 873.0).abs() < 1e-9);
    }

    #[test]
    fn unknown_key_names_line() {
        let src = BASIC.replace("speed_mps = 10.0", "speed_mps = 10.0\nspeed_kmh = 36.0");
        let msg = load_str(&src).unwrap_err().to_string();
        assert!(msg.contains("line 4"), "{msg}");
        assert!(msg.contains("speed_kmh"), "{msg}");
    }

    #[test]
    fn bad_values_name_line() {
        let src = BASIC.replace("speed_mps = 10.0", "speed_mps = -1.0");
        let msg = load_str(&src).unwrap_err().to_string();
        assert!(msg.contains("line 3") && msg.contains("speed_mps"), "{msg}");

        let src = BASIC.replace("k_lp = -0.04", "k_lp = [-0.04, 0.1]");
        let msg = load_str(&src).unwrap_err().to_string();
        assert!(msg.contains("line 16") && msg.contains("full"), "{msg}");

        let src = BASIC.replace("vehicles = 3", "vehicles = 1");
        let msg = load_str(&src).unwrap_err().to_string();
        assert!(msg.contains("line 20"), "{msg}");

        let src = BASIC.replace(
            "strategy = \"lfp-dt\"",
            "strategy = \"lfp-dt\"\nspacing_m = 10.0",
        );
        assert!(load_str(&src).unwrap_err().to_string().contains("delay_s"));

        let msg = load_str("[path]\ntype = \"spiral\"\n")
            .unwrap_err()
            .to_string();
        assert!(msg.contains("line"), "{msg}");
    }

    #[test]
    fn design_block() {
        let src = format!("{BASIC}\n[design]\nk_lp_range = [-0.1, 0.0]\nk_ld_range = [-1.0, 0.0]\nseed = [-0.04, -0.3]\n");
        let spec = load_str(&src).unwrap().design.unwrap();
        assert_eq!(spec.seed, Some((-0.04, -0.3)));
        assert_eq!(spec.k_ff, Some(1.59));
    }

    #[test]
    fn full_output_accepts_rows() {
        let src = BASIC
            .replace("k_lp = -0.04", "k_lp = [-0.04, 0.01]")
            .replace(
                "strategy = \"lfp-dt\"",
                "strategy = \"lfp-dt\"\noutput = \"full\"",
            );
        let r = load_str(&src).unwrap();
        assert_eq!(r.scenario.gains.k_lp, [-0.04, 0.01]);
        assert_eq!(r.output, OutputSelector::Full);
    }
}
