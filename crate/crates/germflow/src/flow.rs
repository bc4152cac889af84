//! Integration of `dy/dt = W(t, y)` on `[0, 1]`.
//!
//! The integrator is an explicit Dormand–Prince 5(4) pair with PI step
//! control. `F(t, y(t))` is a first integral of the flow, so its drift
//! along a trajectory is recorded as the primary accuracy diagnostic.
//! The endpoint map `φ(x) = y_x(1)` realizes the right equivalence
//! `g(φ(x)) = f(x)`; integrating the time-reversed field gives `φ⁻¹`.

use crate::homotopy::{GapViolation, HomotopyField};
use serde::Serialize;

/// Integrator tolerances and guards.
#[derive(Debug, Clone)]
pub struct FlowConfig {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub h_min: f64,
    pub max_steps: usize,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig {
            rtol: 1e-10,
            atol: 1e-12,
            h_init: 1e-3,
            h_min: 1e-12,
            max_steps: 100_000,
        }
    }
}

impl FlowConfig {
    fn validate(&self) {
        assert!(self.rtol > 0.0 && self.atol > 0.0, "tolerances must be positive");
        assert!(
            0.0 < self.h_min && self.h_min < self.h_init,
            "need 0 < h_min < h_init"
        );
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowStatus {
    Completed,
    GapViolation,
    StepUnderflow,
    MaxSteps,
}

/// One accepted step: time, state, first-integral value, step size taken.
#[derive(Debug, Clone)]
pub struct TrajectoryState {
    pub t: f64,
    pub y: Vec<f64>,
    pub f_value: f64,
    pub step: f64,
}

/// Time-stamped solution record. `t` increases strictly from 0 and reaches
/// 1 exactly when `status == Completed`.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub states: Vec<TrajectoryState>,
    pub status: FlowStatus,
    pub violation: Option<GapViolation>,
}

impl Trajectory {
    pub fn last(&self) -> &TrajectoryState {
        self.states.last().expect("trajectory records its start")
    }

    /// Rows `[t, y..., F, h]` for the report JSON.
    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.states
            .iter()
            .map(|s| {
                let mut row = Vec::with_capacity(s.y.len() + 3);
                row.push(s.t);
                row.extend_from_slice(&s.y);
                row.push(s.f_value);
                row.push(s.step);
                row
            })
            .collect()
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum FlowError {
    #[error(transparent)]
    Gap(#[from] GapViolation),
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("step budget exhausted at t = {t}")]
    MaxSteps { t: f64 },
}

// Dormand-Prince 5(4) coefficients.
const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const B5: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
// b5 - b4, applied to all seven stages for the embedded error estimate.
const ERR: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 5.0;
// PI exponents for a 4(5) embedded pair.
const PI_ALPHA: f64 = 0.17;
const PI_BETA: f64 = 0.04;

/// Integrate `dy/dt = W(t, y)` from `y(0) = x0` up to `t = 1`, recording
/// the first integral `F(t, y(t))` at every accepted step.
pub fn integrate(field: &HomotopyField, x0: &[f64], config: &FlowConfig) -> Trajectory {
    assert_eq!(x0.len(), field.dim(), "starting point dimension mismatch");
    integrate_with(
        |t, y| field.w_eval(t, y),
        |t, y| field.f_eval(t, y),
        x0,
        config,
    )
}

/// Generic driver shared by the forward and time-reversed flows.
fn integrate_with(
    rhs: impl Fn(f64, &[f64]) -> Result<Vec<f64>, GapViolation>,
    monitor: impl Fn(f64, &[f64]) -> f64,
    y0: &[f64],
    config: &FlowConfig,
) -> Trajectory {
    config.validate();
    let dim = y0.len();
    let mut t = 0.0f64;
    let mut y = y0.to_vec();
    let mut h = config.h_init.min(1.0);
    let mut err_old = 1e-4f64;
    let mut states = vec![TrajectoryState {
        t,
        y: y.clone(),
        f_value: monitor(t, &y),
        step: 0.0,
    }];

    let fail = |states: Vec<TrajectoryState>, status: FlowStatus, violation: Option<GapViolation>| {
        Trajectory {
            states,
            status,
            violation,
        }
    };

    let mut steps = 0usize;
    while t < 1.0 {
        if steps >= config.max_steps {
            return fail(states, FlowStatus::MaxSteps, None);
        }
        if h < config.h_min {
            return fail(states, FlowStatus::StepUnderflow, None);
        }
        let remaining = 1.0 - t;
        let last_step = h >= remaining;
        if last_step {
            h = remaining;
        }

        let stage = |k: &[Vec<f64>], coeffs: &[f64]| -> Vec<f64> {
            let mut arg = y.clone();
            for (kj, &c) in k.iter().zip(coeffs) {
                if c != 0.0 {
                    for (a, b) in arg.iter_mut().zip(kj) {
                        *a += h * c * b;
                    }
                }
            }
            arg
        };

        let mut k: Vec<Vec<f64>> = Vec::with_capacity(7);
        macro_rules! push_stage {
            ($tau:expr, $coeffs:expr) => {{
                let arg = stage(&k, $coeffs);
                match rhs($tau, &arg) {
                    Ok(v) => k.push(v),
                    Err(g) => return fail(states, FlowStatus::GapViolation, Some(g)),
                }
            }};
        }

        push_stage!(t, &[]);
        push_stage!(t + C[0] * h, &A2);
        push_stage!(t + C[1] * h, &A3);
        push_stage!(t + C[2] * h, &A4);
        push_stage!(t + C[3] * h, &A5);
        push_stage!(t + C[4] * h, &A6);

        let mut y_new = y.clone();
        for (kj, &b) in k.iter().zip(&B5) {
            if b != 0.0 {
                for (a, v) in y_new.iter_mut().zip(kj) {
                    *a += h * b * v;
                }
            }
        }
        let t_new = if last_step { 1.0 } else { t + h };
        match rhs(t_new, &y_new) {
            Ok(v) => k.push(v),
            Err(g) => return fail(states, FlowStatus::GapViolation, Some(g)),
        }

        // Component-wise scaled error of the embedded 4th-order solution.
        let mut err: f64 = 0.0;
        for i in 0..dim {
            let e: f64 = k.iter().zip(&ERR).map(|(kj, &c)| c * kj[i]).sum::<f64>() * h;
            let scale = config.atol + config.rtol * y[i].abs().max(y_new[i].abs());
            err = err.max((e / scale).abs());
        }

        steps += 1;
        if err <= 1.0 {
            t = t_new;
            y = y_new;
            states.push(TrajectoryState {
                t,
                y: y.clone(),
                f_value: monitor(t, &y),
                step: h,
            });
            let fac = if err == 0.0 {
                FAC_MAX
            } else {
                (SAFETY * err.powf(-PI_ALPHA) * err_old.powf(PI_BETA)).clamp(FAC_MIN, FAC_MAX)
            };
            err_old = err.max(1e-4);
            h *= fac;
        } else {
            h *= (SAFETY * err.powf(-0.2)).clamp(FAC_MIN, 1.0);
        }
    }

    Trajectory {
        states,
        status: FlowStatus::Completed,
        violation: None,
    }
}

/// `φ(x) = y_x(1)` together with the observed first-integral drift.
pub fn phi(field: &HomotopyField, x: &[f64], config: &FlowConfig) -> Result<(Vec<f64>, f64), FlowError> {
    let traj = integrate(field, x, config);
    into_result(&traj)?;
    Ok((traj.last().y.clone(), conservation_drift(&traj)))
}

/// Endpoint of the time-reversed flow: integrates `dỹ/ds = −W(1−s, ỹ)`
/// on `s ∈ [0, 1]` and returns `ỹ(1)`, the point the forward flow maps
/// onto `x`.
pub fn phi_inverse(field: &HomotopyField, x: &[f64], config: &FlowConfig) -> Result<Vec<f64>, FlowError> {
    assert_eq!(x.len(), field.dim(), "point dimension mismatch");
    let traj = integrate_with(
        |s, y| {
            field
                .w_eval(1.0 - s, y)
                .map(|w| w.into_iter().map(|c| -c).collect())
        },
        |s, y| field.f_eval(1.0 - s, y),
        x,
        config,
    );
    into_result(&traj)?;
    Ok(traj.last().y.clone())
}

fn into_result(traj: &Trajectory) -> Result<(), FlowError> {
    match traj.status {
        FlowStatus::Completed => Ok(()),
        FlowStatus::GapViolation => Err(FlowError::Gap(
            traj.violation.clone().expect("violation recorded"),
        )),
        FlowStatus::StepUnderflow => Err(FlowError::StepUnderflow { t: traj.last().t }),
        FlowStatus::MaxSteps => Err(FlowError::MaxSteps { t: traj.last().t }),
    }
}

/// Max deviation of the first integral from its initial value.
pub fn conservation_drift(traj: &Trajectory) -> f64 {
    let f0 = traj.states[0].f_value;
    traj.states
        .iter()
        .map(|s| (s.f_value - f0).abs())
        .fold(0.0, f64::max)
}

/// `|g(φ(x)) − f(x)|`, the direct numerical witness of right equivalence.
pub fn equivalence_residual(
    field: &HomotopyField,
    x: &[f64],
    config: &FlowConfig,
) -> Result<f64, FlowError> {
    let (y, _) = phi(field, x, config)?;
    Ok((field.case.g.eval(&y) - field.case.f.eval(x)).abs())
}
