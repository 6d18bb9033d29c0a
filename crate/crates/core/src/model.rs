//! Bicycle-model tracking-error dynamics in the arc-length domain.
//!
//! The error vector is `e = [e_lat, theta_err]`. With `'` denoting d/dl_d the
//! governing equation is
//!
//! ```text
//! v^2 M e'' + v C e' + L e = B u - F theta_des'
//! ```
//!
//! Sign convention: positive `e_lat` means the vehicle is left of the path
//! when facing the direction of increasing arc length.

use nalgebra::{Matrix2, Vector2};

use crate::error::{Error, Result};

/// Heading errors above this magnitude leave the small-angle regime.
pub const SMALL_ANGLE_LIMIT_RAD: f64 = 0.3;

/// Physical bicycle-model constants plus the operating speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VehicleParams {
    /// kg
    pub mass: f64,
    /// kg m^2
    pub yaw_inertia: f64,
    /// N/rad
    pub cornering_front: f64,
    /// N/rad
    pub cornering_rear: f64,
    /// CG to front axle, m
    pub cg_to_front: f64,
    /// CG to rear axle, m
    pub cg_to_rear: f64,
    /// Longitudinal speed, m/s
    pub speed: f64,
}

impl VehicleParams {
    /// Lincoln MKZ parameters at the given speed.
    pub fn lincoln_mkz(speed: f64) -> Self {
        Self {
            mass: 1896.0,
            yaw_inertia: 3803.0,
            cornering_front: 400_000.0,
            cornering_rear: 381_900.0,
            cg_to_front: 1.2682,
            cg_to_rear: 1.5818,
            speed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("mass", self.mass),
            ("yaw_inertia", self.yaw_inertia),
            ("cornering_front", self.cornering_front),
            ("cornering_rear", self.cornering_rear),
            ("cg_to_front", self.cg_to_front),
            ("cg_to_rear", self.cg_to_rear),
            ("speed", self.speed),
        ];
        for (name, value) in fields {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must be finite and strictly positive",
                });
            }
        }
        Ok(())
    }

    pub fn wheelbase(&self) -> f64 {
        self.cg_to_front + self.cg_to_rear
    }

    pub fn with_speed(&self, speed: f64) -> Self {
        Self { speed, ..*self }
    }
}

/// The five matrices of the error dynamics, built for one speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemMatrices {
    pub m: Matrix2<f64>,
    pub c: Matrix2<f64>,
    pub l: Matrix2<f64>,
    pub b: Vector2<f64>,
    pub f: Vector2<f64>,
    pub speed: f64,
}

pub fn build_matrices(params: &VehicleParams) -> Result<SystemMatrices> {
    params.validate()?;
    let VehicleParams {
        mass: m,
        yaw_inertia: iz,
        cornering_front: cf,
        cornering_rear: cr,
        cg_to_front: a,
        cg_to_rear: b,
        speed: v,
    } = *params;

    let cross = a * cf - b * cr;
    Ok(SystemMatrices {
        m: Matrix2::new(m, 0.0, 0.0, iz),
        c: Matrix2::new(
            (cf + cr) / v,
            cross / v,
            cross / v,
            (a * a * cf + b * b * cr) / v,
        ),
        l: Matrix2::new(0.0, -(cf + cr), 0.0, -cross),
        b: Vector2::new(cf, a * cf),
        f: Vector2::new(m * v * v + cross, a * a * cf + b * b * cr),
        speed: v,
    })
}

/// Tracking error and its arc-length derivative.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ErrorState {
    /// m
    pub e_lat: f64,
    /// rad
    pub heading: f64,
    /// dimensionless
    pub e_lat_prime: f64,
    /// rad/m
    pub heading_prime: f64,
}

impl ErrorState {
    pub fn new(e_lat: f64, heading: f64, e_lat_prime: f64, heading_prime: f64) -> Self {
        Self {
            e_lat,
            heading,
            e_lat_prime,
            heading_prime,
        }
    }

    pub fn from_vectors(e: Vector2<f64>, e_prime: Vector2<f64>) -> Self {
        Self::new(e[0], e[1], e_prime[0], e_prime[1])
    }

    pub fn error(&self) -> Vector2<f64> {
        Vector2::new(self.e_lat, self.heading)
    }

    pub fn error_prime(&self) -> Vector2<f64> {
        Vector2::new(self.e_lat_prime, self.heading_prime)
    }

    pub fn is_finite(&self) -> bool {
        [
            self.e_lat,
            self.heading,
            self.e_lat_prime,
            self.heading_prime,
        ]
        .iter()
        .all(|x| x.is_finite())
    }

    /// True when the heading error is outside the small-angle regime the
    /// linear model assumes. Diagnostic only.
    pub fn outside_small_angle(&self) -> bool {
        self.heading.abs() > SMALL_ANGLE_LIMIT_RAD
    }
}

impl std::ops::Sub for ErrorState {
    type Output = ErrorState;

    fn sub(self, rhs: ErrorState) -> ErrorState {
        ErrorState::new(
            self.e_lat - rhs.e_lat,
            self.heading - rhs.heading,
            self.e_lat_prime - rhs.e_lat_prime,
            self.heading_prime - rhs.heading_prime,
        )
    }
}

/// Second arc-length derivative of the error vector.
pub fn error_accel(
    mats: &SystemMatrices,
    state: &ErrorState,
    steer: f64,
    heading_prime: f64,
) -> Vector2<f64> {
    let v = mats.speed;
    let rhs = mats.b * steer
        - mats.f * heading_prime
        - mats.c * state.error_prime() * v
        - mats.l * state.error();
    // M is diagonal with positive entries.
    Vector2::new(
        rhs[0] / (v * v * mats.m[(0, 0)]),
        rhs[1] / (v * v * mats.m[(1, 1)]),
    )
}

/// Equilibrium of the closed loop `(L + B K_P) e = B u - F theta_des'` for a
/// constant feedforward steer `u` and constant path heading rate.
///
/// The open-loop `L` has a zero first column, so a stabilizing `K_P` is
/// required for the equilibrium to be unique.
pub fn steady_state_error(
    mats: &SystemMatrices,
    k_p: [f64; 2],
    steer: f64,
    heading_prime: f64,
) -> Result<ErrorState> {
    let stiffness = mats.l + mats.b * nalgebra::RowVector2::new(k_p[0], k_p[1]);
    let det = stiffness.determinant();
    let scale = stiffness.abs().max().powi(2);
    if det.abs() <= 1e-12 * scale {
        return Err(Error::SingularSteadyState { det });
    }
    let rhs = mats.b * steer - mats.f * heading_prime;
    let inv = stiffness
        .try_inverse()
        .ok_or(Error::SingularSteadyState { det })?;
    let e = inv * rhs;
    Ok(ErrorState::new(e[0], e[1], 0.0, 0.0))
}
