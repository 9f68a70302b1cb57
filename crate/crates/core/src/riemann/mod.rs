//! Two-medium Riemann problem for Mie-Grüneisen materials.
//!
//! The star pressure `p*` is the root of the pressure function
//!
//! ```text
//! f(p) = f_l(p) + f_r(p) + u_r - u_l
//! ```
//!
//! where each `f_k` follows the Hugoniot locus of side `k` for `p > p_k` and
//! its isentrope for `p <= p_k`. Neither branch has a closed form for general
//! Mie-Grüneisen materials, so [`solve_star`] runs an inexact Newton iteration:
//! the Hugoniot density comes from an inner Newton solve of the Hugoniot
//! function and the isentrope from fourth-order Runge-Kutta steps.

mod sample;
mod solver;
mod vacuum;
mod wave_curves;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eos::{Eos, EosError};

pub use sample::{sample_profile, sample_solution, ProfilePoint, Side};
pub use solver::{acoustic_guess, pressure_floor, solve_star, wave_branch};
pub use vacuum::{check_vacuum, isentrope_integral_to_zero, IsentropeIntegral, VacuumCheck};
pub use wave_curves::{
    hugoniot_density, hugoniot_function, hugoniot_slope, rarefaction_branch, rho_max, shock_branch, RhoMax,
};

/// Primitive state on one side of a Riemann problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluidState {
    /// Density, kg/m³.
    pub rho: f64,
    /// Velocity, m/s.
    pub u: f64,
    /// Pressure, Pa.
    pub p: f64,
}

impl FluidState {
    pub fn new(rho: f64, u: f64, p: f64) -> Self {
        FluidState { rho, u, p }
    }

    /// Checks density against the EOS validity interval and that the sound
    /// speed is real.
    pub fn validate(&self, eos: &Eos) -> Result<f64, EosError> {
        eos.sound_speed(self.rho, self.p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WaveType {
    Shock,
    Rarefaction,
}

/// Signal speeds bounding a nonlinear wave. For a shock `head == tail`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveSpeeds {
    pub head: f64,
    pub tail: f64,
}

/// Converged solution of the star region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarState {
    pub p_star: f64,
    pub u_star: f64,
    pub rho_star_l: f64,
    pub rho_star_r: f64,
    pub wave_l: WaveType,
    pub wave_r: WaveType,
    pub speeds_l: WaveSpeeds,
    pub speeds_r: WaveSpeeds,
    /// Number of outer Newton updates performed.
    pub iterations: usize,
    /// `|f(p*)|` in m/s, evaluated with the same branch approximations as the
    /// iteration. Diagnostic only.
    pub residual: f64,
    /// Relative pressure change of the last Newton update.
    pub rel_change: f64,
}

impl StarState {
    /// Slowest and fastest signal speeds of the whole wave fan.
    pub fn extreme_speeds(&self) -> (f64, f64) {
        let lo = self.speeds_l.head.min(self.speeds_l.tail);
        let hi = self.speeds_r.head.max(self.speeds_r.tail);
        (lo, hi)
    }
}

/// `F_k`, `F'_k` and the density reached on the wave curve at the evaluation
/// pressure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchEval {
    pub f: f64,
    pub df: f64,
    pub rho: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Outer tolerance on `|p_{n+1} - p_n| / p_{n+1}`.
    pub tol: f64,
    pub max_iter: usize,
    /// Inner tolerance on the relative density change of the Hugoniot solve.
    pub hugoniot_tol: f64,
    /// RK4 steps per isentrope evaluation, spaced geometrically in pressure.
    /// One step reproduces the classic single-step evaluation.
    pub substeps: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-8,
            max_iter: 100,
            hugoniot_tol: 1e-8,
            substeps: 32,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RiemannError {
    #[error(transparent)]
    Eos(#[from] EosError),
    #[error("shock branch needs p > p_k, got p = {p} Pa, p_k = {p_k} Pa")]
    NotCompressive { p: f64, p_k: f64 },
    #[error(
        "Hugoniot locus leaves the validity interval: no post-shock density below {rho_limit} kg/m^3 at p = {p} Pa"
    )]
    HugoniotOutOfDomain { p: f64, rho_limit: f64 },
    #[error("{eos} isentrope breaks down at RK stage {stage} (p = {p} Pa, rho = {rho} kg/m^3): {source}")]
    IsentropeBreakdown {
        eos: &'static str,
        stage: usize,
        p: f64,
        rho: f64,
        source: EosError,
    },
    #[error("initial states generate a vacuum (positive-pressure margin {margin} m/s)")]
    Vacuum { margin: f64 },
    #[error("star pressure iteration did not converge in {} iterations (last iterate {:?} Pa)", history.len(), history.last())]
    NonConvergence { history: Vec<f64> },
}
