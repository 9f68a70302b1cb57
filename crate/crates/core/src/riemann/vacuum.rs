use serde::{Deserialize, Serialize};

use crate::eos::Eos;

use super::solver::pressure_floor;
use super::{FluidState, RiemannError};

/// `∫_0^{p_k} dp / (ρ c)` along the isentrope through a state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsentropeIntegral {
    pub value: f64,
    /// Power-law estimate of the contribution below the integration floor.
    pub tail: f64,
    pub floor: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VacuumCheck {
    /// `I_l + I_r - (u_r - u_l)`; a vacuum forms when this is not positive.
    pub margin: f64,
    pub left: IsentropeIntegral,
    pub right: IsentropeIntegral,
    /// False when the extrapolated tails exceed 1e-6 of `|margin|`.
    pub converged: bool,
}

// dρ/ds and dI/ds with s = ln p.
fn rhs(eos: &Eos, s: f64, rho: f64) -> Result<(f64, f64), RiemannError> {
    let p = s.exp();
    let c2 = eos
        .sound_speed_sq(rho, p)
        .map_err(|source| RiemannError::IsentropeBreakdown {
            eos: eos.model().name(),
            stage: 0,
            p,
            rho,
            source,
        })?;
    Ok((p / c2, p / (rho * c2.sqrt())))
}

fn rk4(eos: &Eos, s: f64, rho: f64, h: f64) -> Result<(f64, f64), RiemannError> {
    let (k1, g1) = rhs(eos, s, rho)?;
    let (k2, g2) = rhs(eos, s + 0.5 * h, rho + 0.5 * h * k1)?;
    let (k3, g3) = rhs(eos, s + 0.5 * h, rho + 0.5 * h * k2)?;
    let (k4, g4) = rhs(eos, s + h, rho + h * k3)?;
    Ok((
        rho + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4),
        h / 6.0 * (g1 + 2.0 * g2 + 2.0 * g3 + g4),
    ))
}

/// Integrates `dp / (ρ c)` from `state.p` down to `floor` in `ln p` with
/// step-doubling RK4, then adds a power-law tail for `(0, floor)`.
pub fn isentrope_integral_to_zero(
    eos: &Eos,
    state: &FluidState,
    floor: f64,
) -> Result<IsentropeIntegral, RiemannError> {
    if !(state.p > floor) || !(floor > 0.0) {
        return Ok(IsentropeIntegral {
            value: 0.0,
            tail: 0.0,
            floor,
        });
    }
    let s_end = floor.ln();
    let mut s = state.p.ln();
    let mut rho = state.rho;
    let mut total = 0.0f64;
    let mut h = -0.25;
    // Integrand 1/(ρc) at the last two accepted pressures.
    let g = |p: f64, rho: f64| -> Result<f64, RiemannError> {
        let (_, dids) = rhs(eos, p.ln(), rho)?;
        Ok(dids / p)
    };
    let mut prev = (state.p, g(state.p, state.rho)?);
    let mut last = prev;
    while s > s_end {
        if s + h < s_end {
            h = s_end - s;
        }
        let (rho_full, di_full) = rk4(eos, s, rho, h)?;
        let (rho_half, di_a) = rk4(eos, s, rho, 0.5 * h)?;
        let (rho_two, di_b) = rk4(eos, s + 0.5 * h, rho_half, 0.5 * h)?;
        let di_two = di_a + di_b;
        let err = ((di_two - di_full).abs() / (total.abs() + di_two.abs()).max(f64::MIN_POSITIVE))
            .max((rho_two - rho_full).abs() / rho_two.abs());
        if err > 1e-10 && h.abs() > 1e-6 {
            h *= 0.5;
            continue;
        }
        s += h;
        rho = rho_two + (rho_two - rho_full) / 15.0;
        total += di_two + (di_two - di_full) / 15.0;
        let p = if s <= s_end { floor } else { s.exp() };
        prev = last;
        last = (p, g(p, rho)?);
        if err < 1e-12 {
            h *= 2.0;
        }
    }
    let (p1, g1) = prev;
    let (p2, g2) = last;
    let tail = if p1 > p2 && g1 > 0.0 && g2 > 0.0 {
        let a = (g2 / g1).ln() / (p1 / p2).ln();
        if a < 1.0 {
            g2 * p2 / (1.0 - a)
        } else {
            f64::INFINITY
        }
    } else {
        0.0
    };
    Ok(IsentropeIntegral {
        // Integrated downwards in p.
        value: -total,
        tail,
        floor,
    })
}

/// Positive-pressure condition for the pair of states.
pub fn check_vacuum(
    eos_l: &Eos,
    left: &FluidState,
    eos_r: &Eos,
    right: &FluidState,
) -> Result<VacuumCheck, RiemannError> {
    let floor = pressure_floor(left, right);
    let il = isentrope_integral_to_zero(eos_l, left, floor)?;
    let ir = isentrope_integral_to_zero(eos_r, right, floor)?;
    let margin = il.value + il.tail + ir.value + ir.tail - (right.u - left.u);
    let converged = il.tail + ir.tail <= 1e-6 * margin.abs();
    Ok(VacuumCheck {
        margin,
        left: il,
        right: ir,
        converged,
    })
}
