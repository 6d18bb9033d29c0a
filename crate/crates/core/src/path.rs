//! Arc-length parameterized desired paths.
//!
//! A path is a sequence of segments whose curvature is a sum of closed-form
//! shapes, so heading is available analytically at any arc position. Planar
//! coordinates are integrated once onto a dense grid.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::io::Write;

use crate::error::{Error, Result};

/// Default sampling step of the dense grid, m.
pub const DEFAULT_STEP: f64 = 0.01;
/// Tightest lane-change curvature accepted, 1/m.
pub const MAX_LANE_CHANGE_CURVATURE: f64 = 0.2;

/// Curvature shape over a segment of length `L`, with local coordinate `xi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    /// `kappa = k`
    Constant(f64),
    /// `kappa = peak sin(2 pi xi / L)`: zero net heading change.
    Sine(f64),
    /// `kappa = peak (1 - cos(2 pi xi / L)) / 2`: turns by `peak L / 2`.
    RaisedCosine(f64),
}

impl Shape {
    fn curvature(&self, xi: f64, len: f64) -> f64 {
        match *self {
            Shape::Constant(k) => k,
            Shape::Sine(p) => p * (TAU * xi / len).sin(),
            Shape::RaisedCosine(p) => 0.5 * p * (1.0 - (TAU * xi / len).cos()),
        }
    }

    /// Heading change from the segment start to `xi`.
    fn heading_change(&self, xi: f64, len: f64) -> f64 {
        match *self {
            Shape::Constant(k) => k * xi,
            Shape::Sine(p) => p * len / TAU * (1.0 - (TAU * xi / len).cos()),
            Shape::RaisedCosine(p) => 0.5 * p * (xi - len / TAU * (TAU * xi / len).sin()),
        }
    }

    fn peak(&self) -> f64 {
        match *self {
            Shape::Constant(k) => k.abs(),
            Shape::Sine(p) | Shape::RaisedCosine(p) => p.abs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub length: f64,
    pub shapes: Vec<Shape>,
}

impl Segment {
    pub fn straight(length: f64) -> Self {
        Self {
            length,
            shapes: Vec::new(),
        }
    }

    pub fn arc(curvature: f64, length: f64) -> Self {
        Self {
            length,
            shapes: vec![Shape::Constant(curvature)],
        }
    }

    /// Smooth lane change with exact net lateral offset `offset` (left positive).
    pub fn lane_change(offset: f64, length: f64) -> Result<Self> {
        let peak = lane_change_peak(offset, length)?;
        Ok(Self {
            length,
            shapes: if peak == 0.0 {
                Vec::new()
            } else {
                vec![Shape::Sine(peak)]
            },
        })
    }

    /// Smooth corner turning by `angle` rad (left positive).
    pub fn corner(angle: f64, length: f64) -> Self {
        Self {
            length,
            shapes: vec![Shape::RaisedCosine(2.0 * angle / length)],
        }
    }

    pub fn with_shape(mut self, shape: Shape) -> Self {
        self.shapes.push(shape);
        self
    }

    fn curvature(&self, xi: f64) -> f64 {
        self.shapes
            .iter()
            .map(|s| s.curvature(xi, self.length))
            .sum()
    }

    fn heading_change(&self, xi: f64) -> f64 {
        self.shapes
            .iter()
            .map(|s| s.heading_change(xi, self.length))
            .sum()
    }
}

/// Peak curvature of a sine lane change producing lateral offset `offset`
/// over `length`.
///
/// With `A = peak L / (2 pi)` the heading inside the segment is
/// `A (1 - cos phi)`, and the lateral displacement is
/// `L * mean(sin(A - A cos phi)) = L sin(A) J0(A)`.
pub fn lane_change_peak(offset: f64, length: f64) -> Result<f64> {
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "change_length",
            value: length,
            reason: "must be finite and strictly positive",
        });
    }
    if !offset.is_finite() {
        return Err(Error::InvalidParameter {
            name: "lane_offset",
            value: offset,
            reason: "must be finite",
        });
    }
    if offset == 0.0 {
        return Ok(0.0);
    }
    let target = offset.abs() / length;
    let g = |a: f64| a.sin() * bessel_j0(a);
    // g rises monotonically up to its first maximum.
    let mut a_max = 0.0;
    let mut best = 0.0;
    for k in 1..=2000 {
        let a = k as f64 * 1e-3 * FRAC_PI_2;
        let v = g(a);
        if v < best {
            break;
        }
        best = v;
        a_max = a;
    }
    if target >= best {
        return Err(Error::InvalidInput(format!(
            "lane offset {offset} m is not reachable within {length} m"
        )));
    }
    let (mut lo, mut hi) = (0.0, a_max);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let peak = TAU * 0.5 * (lo + hi) / length;
    if peak > MAX_LANE_CHANGE_CURVATURE {
        return Err(Error::InvalidInput(format!(
            "lane change needs peak curvature {peak:.4} 1/m, above the {MAX_LANE_CHANGE_CURVATURE} 1/m cap"
        )));
    }
    Ok(peak.copysign(offset))
}

/// `J0(a) = mean over phi of cos(a cos phi)`; the trapezoid rule on a
/// periodic integrand converges spectrally.
fn bessel_j0(a: f64) -> f64 {
    const N: usize = 64;
    (0..N)
        .map(|k| (a * (TAU * k as f64 / N as f64).cos()).cos())
        .sum::<f64>()
        / N as f64
}

/// One dense-grid sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathPoint {
    pub l_d: f64,
    pub heading: f64,
    pub curvature: f64,
    pub x: f64,
    pub y: f64,
}

/// Desired path with analytic curvature and heading and gridded coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct DesiredPath {
    segments: Vec<Segment>,
    starts: Vec<f64>,
    start_headings: Vec<f64>,
    length: f64,
    step: f64,
    grid: Vec<PathPoint>,
}

impl DesiredPath {
    pub fn from_segments(segments: Vec<Segment>, step: f64) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidInput("path has no segments".into()));
        }
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "step",
                value: step,
                reason: "must be finite and strictly positive",
            });
        }
        let mut starts = Vec::with_capacity(segments.len());
        let mut start_headings = Vec::with_capacity(segments.len());
        let (mut l, mut theta) = (0.0, 0.0);
        for seg in &segments {
            if !(seg.length > 0.0 && seg.length.is_finite()) {
                return Err(Error::InvalidParameter {
                    name: "segment_length",
                    value: seg.length,
                    reason: "must be finite and strictly positive",
                });
            }
            starts.push(l);
            start_headings.push(theta);
            l += seg.length;
            theta += seg.heading_change(seg.length);
        }
        let n = (l / step).round();
        if (n * step - l).abs() > 1e-9 * l.max(1.0) {
            return Err(Error::InvalidInput(format!(
                "path length {l} m is not a whole number of {step} m steps"
            )));
        }
        let mut path = Self {
            segments,
            starts,
            start_headings,
            length: l,
            step,
            grid: Vec::new(),
        };
        path.grid = path.integrate(n as usize);
        Ok(path)
    }

    fn integrate(&self, n: usize) -> Vec<PathPoint> {
        let mut grid = Vec::with_capacity(n + 1);
        let (mut x, mut y) = (0.0, 0.0);
        let mut theta = self.heading_at(0.0);
        grid.push(PathPoint {
            l_d: 0.0,
            heading: theta,
            curvature: self.curvature_at(0.0),
            x,
            y,
        });
        for k in 1..=n {
            let l = (k as f64 * self.step).min(self.length);
            let mid = self.heading_at(l - 0.5 * self.step);
            let next = self.heading_at(l);
            // Simpson on each grid interval.
            x += self.step / 6.0 * (theta.cos() + 4.0 * mid.cos() + next.cos());
            y += self.step / 6.0 * (theta.sin() + 4.0 * mid.sin() + next.sin());
            theta = next;
            grid.push(PathPoint {
                l_d: l,
                heading: theta,
                curvature: self.curvature_at(l),
                x,
                y,
            });
        }
        grid
    }

    /// Same geometry type with every curvature shape multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let segments = self
            .segments
            .iter()
            .map(|s| Segment {
                length: s.length,
                shapes: s
                    .shapes
                    .iter()
                    .map(|sh| match *sh {
                        Shape::Constant(k) => Shape::Constant(k * factor),
                        Shape::Sine(p) => Shape::Sine(p * factor),
                        Shape::RaisedCosine(p) => Shape::RaisedCosine(p * factor),
                    })
                    .collect(),
            })
            .collect();
        Self::from_segments(segments, self.step)
    }

    pub fn constant_curvature(curvature: f64, length: f64) -> Result<Self> {
        Self::from_segments(vec![Segment::arc(curvature, length)], DEFAULT_STEP)
    }

    /// `n_changes` lane changes of alternating direction, each preceded by a
    /// straight, with a closing straight.
    pub fn lane_change_track(
        n_changes: usize,
        lane_offset: f64,
        change_length: f64,
        straight_length: f64,
    ) -> Result<Self> {
        if n_changes == 0 {
            return Err(Error::InvalidInput(
                "at least one lane change is required".into(),
            ));
        }
        let mut segs = Vec::with_capacity(2 * n_changes + 1);
        for k in 0..n_changes {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            segs.push(Segment::straight(straight_length));
            segs.push(Segment::lane_change(sign * lane_offset, change_length)?);
        }
        segs.push(Segment::straight(straight_length));
        Self::from_segments(segs, DEFAULT_STEP)
    }

    pub fn circuit(spec: &CircuitSpec) -> Result<Self> {
        spec.build()
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn grid(&self) -> &[PathPoint] {
        &self.grid
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    fn locate(&self, l_d: f64) -> (usize, f64) {
        let idx = self.starts.partition_point(|&s| s <= l_d).saturating_sub(1);
        (
            idx,
            (l_d - self.starts[idx]).clamp(0.0, self.segments[idx].length),
        )
    }

    /// Analytic curvature; clamps to the path ends.
    pub fn curvature_at(&self, l_d: f64) -> f64 {
        let (i, xi) = self.locate(l_d);
        self.segments[i].curvature(xi)
    }

    /// Analytic heading; clamps to the path ends.
    pub fn heading_at(&self, l_d: f64) -> f64 {
        let (i, xi) = self.locate(l_d);
        self.start_headings[i] + self.segments[i].heading_change(xi)
    }

    /// Heading, curvature and position by linear interpolation on the grid.
    pub fn query(&self, l_d: f64) -> Result<PathPoint> {
        let slop = 1e-9 * self.length.max(1.0);
        if !l_d.is_finite() || l_d < -slop || l_d > self.length + slop {
            return Err(Error::OutOfRange {
                position: l_d,
                length: self.length,
            });
        }
        let last = self.grid.len() - 1;
        let x = (l_d.clamp(0.0, self.length) / self.step).min(last as f64);
        let k = (x.floor() as usize).min(last.saturating_sub(1));
        let t = x - k as f64;
        let (a, b) = (self.grid[k], self.grid[(k + 1).min(last)]);
        let mix = |p: f64, q: f64| p + t * (q - p);
        Ok(PathPoint {
            l_d,
            heading: mix(a.heading, b.heading),
            curvature: mix(a.curvature, b.curvature),
            x: mix(a.x, b.x),
            y: mix(a.y, b.y),
        })
    }

    /// Smallest and largest turning radius over grid samples with nonzero
    /// curvature, m.
    pub fn radius_span(&self) -> Option<(f64, f64)> {
        let radii = self
            .grid
            .iter()
            .filter(|p| p.curvature.abs() > 1e-15)
            .map(|p| 1.0 / p.curvature.abs());
        radii.fold(None, |acc, r| match acc {
            None => Some((r, r)),
            Some((lo, hi)) => Some((lo.min(r), hi.max(r))),
        })
    }

    /// Largest curvature magnitude of any shape, 1/m.
    pub fn peak_curvature(&self) -> f64 {
        self.segments
            .iter()
            .map(|s| s.shapes.iter().map(Shape::peak).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn write_csv<W: Write>(&self, mut out: W, stride: usize) -> Result<()> {
        writeln!(out, "l_d_m,x_m,y_m,heading_rad,curvature_per_m")?;
        let stride = stride.max(1);
        let last = self.grid.len() - 1;
        for (k, p) in self.grid.iter().enumerate() {
            if k % stride == 0 || k == last {
                writeln!(
                    out,
                    "{:.4},{:.9e},{:.9e},{:.9e},{:.9e}",
                    p.l_d, p.x, p.y, p.heading, p.curvature
                )?;
            }
        }
        Ok(())
    }
}

/// Where lane changes sit on the circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LaneChangePlacement {
    #[default]
    Straights,
    /// Superposed on the corners, which then span the lane-change length.
    Corners,
}

/// Closed circuit unrolled into one open lap sequence.
///
/// Each lap is straight, lane change, straight, corner; a closing straight
/// lets errors settle. The default corner peaks at 1/7.4 1/m.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitSpec {
    pub laps: usize,
    pub straight_length: f64,
    pub change_length: f64,
    pub lane_offset: f64,
    pub corner_length: f64,
    /// Turn of each corner, rad.
    pub corner_angle: f64,
    pub final_straight: f64,
    pub placement: LaneChangePlacement,
    pub step: f64,
}

impl Default for CircuitSpec {
    fn default() -> Self {
        Self {
            laps: 4,
            straight_length: 60.0,
            change_length: 50.0,
            lane_offset: 3.5,
            corner_length: 23.25,
            corner_angle: FRAC_PI_2,
            final_straight: 100.0,
            placement: LaneChangePlacement::Straights,
            step: DEFAULT_STEP,
        }
    }
}

impl CircuitSpec {
    fn build(&self) -> Result<DesiredPath> {
        if self.laps == 0 {
            return Err(Error::InvalidInput("circuit needs at least one lap".into()));
        }
        let angle = self.corner_angle;
        let mut segs = Vec::new();
        for k in 0..self.laps {
            let offset = if k % 2 == 0 {
                self.lane_offset
            } else {
                -self.lane_offset
            };
            match self.placement {
                LaneChangePlacement::Straights => {
                    segs.push(Segment::straight(self.straight_length));
                    segs.push(Segment::lane_change(offset, self.change_length)?);
                    segs.push(Segment::straight(self.straight_length));
                    segs.push(Segment::corner(angle, self.corner_length));
                }
                LaneChangePlacement::Corners => {
                    segs.push(Segment::straight(self.straight_length));
                    segs.push(Segment::straight(self.straight_length));
                    let peak = lane_change_peak(offset, self.change_length)?;
                    segs.push(
                        Segment::corner(angle, self.change_length).with_shape(Shape::Sine(peak)),
                    );
                }
            }
        }
        segs.push(Segment::straight(self.final_straight));
        DesiredPath::from_segments(segs, self.step)
    }
}

/// Projection of a point onto a recorded polyline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    /// Arc length along the polyline to the closest point, m.
    pub arc: f64,
    /// Signed distance, positive to the left of the direction of travel, m.
    pub offset: f64,
    /// Direction of the winning segment, rad.
    pub heading: f64,
}

/// Closest point on a polyline, searched globally over all segments.
pub fn nearest_point(polyline: &[[f64; 2]], query: [f64; 2]) -> Result<Projection> {
    if polyline.len() < 2 {
        return Err(Error::DegeneratePolyline("needs at least two samples"));
    }
    let mut best: Option<(f64, Projection)> = None;
    let mut arc = 0.0;
    for w in polyline.windows(2) {
        let (p, q) = (w[0], w[1]);
        let d = [q[0] - p[0], q[1] - p[1]];
        let len2 = d[0] * d[0] + d[1] * d[1];
        if len2 == 0.0 {
            continue;
        }
        let len = len2.sqrt();
        let r = [query[0] - p[0], query[1] - p[1]];
        let t = ((r[0] * d[0] + r[1] * d[1]) / len2).clamp(0.0, 1.0);
        let foot = [p[0] + t * d[0], p[1] + t * d[1]];
        let dist2 = (query[0] - foot[0]).powi(2) + (query[1] - foot[1]).powi(2);
        if best.is_none_or(|(b, _)| dist2 < b) {
            let cross = d[0] * r[1] - d[1] * r[0];
            best = Some((
                dist2,
                Projection {
                    arc: arc + t * len,
                    offset: dist2
                        .sqrt()
                        .copysign(if cross == 0.0 { 1.0 } else { cross }),
                    heading: d[1].atan2(d[0]),
                },
            ));
        }
        arc += len;
    }
    best.map(|(_, p)| p)
        .ok_or(Error::DegeneratePolyline("all segments have zero length"))
}
