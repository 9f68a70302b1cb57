use serde::{Deserialize, Serialize};

use crate::eos::Eos;

use super::wave_curves::{isentrope_step, pressure_nodes};
use super::{FluidState, RiemannError, StarState, WaveType};

const FAN_NODES: usize = 256;

/// Medium occupying a sampled point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub x: f64,
    pub state: FluidState,
    /// Specific internal energy from the occupying medium's EOS.
    pub e: f64,
    pub side: Side,
}

/// Self-similar solution at `ξ = x/t`. Points with `ξ <= u*` belong to the
/// left medium.
pub fn sample_solution(
    eos_l: &Eos,
    left: &FluidState,
    eos_r: &Eos,
    right: &FluidState,
    star: &StarState,
    xi: f64,
) -> Result<(FluidState, Side), RiemannError> {
    if xi <= star.u_star {
        let inner = FluidState::new(star.rho_star_l, star.u_star, star.p_star);
        let s = &star.speeds_l;
        let state = match star.wave_l {
            WaveType::Shock if xi < s.head => *left,
            WaveType::Shock => inner,
            WaveType::Rarefaction if xi <= s.head => *left,
            WaveType::Rarefaction if xi >= s.tail => inner,
            WaveType::Rarefaction => fan_state(eos_l, left, star.p_star, xi, -1.0)?,
        };
        Ok((state, Side::Left))
    } else {
        let inner = FluidState::new(star.rho_star_r, star.u_star, star.p_star);
        let s = &star.speeds_r;
        let state = match star.wave_r {
            WaveType::Shock if xi > s.head => *right,
            WaveType::Shock => inner,
            WaveType::Rarefaction if xi >= s.head => *right,
            WaveType::Rarefaction if xi <= s.tail => inner,
            WaveType::Rarefaction => fan_state(eos_r, right, star.p_star, xi, 1.0)?,
        };
        Ok((state, Side::Right))
    }
}

// Point of the rarefaction fan where the characteristic speed u + sign*c
// equals ξ. sign = -1 for the left fan, +1 for the right one.
fn fan_state(eos: &Eos, outer: &FluidState, p_star: f64, xi: f64, sign: f64) -> Result<FluidState, RiemannError> {
    let state_at = |p: f64, rho: f64, f: f64| -> Result<(FluidState, f64), RiemannError> {
        let u = outer.u + sign * f;
        let c = eos.sound_speed(rho, p)?;
        Ok((FluidState::new(rho, u, p), u + sign * c))
    };
    // Offset of the characteristic speed from ξ, oriented to increase
    // from head to tail.
    let gap = |lambda: f64| -sign * (lambda - xi);
    let (mut p0, mut rho0, mut f0) = (outer.p, outer.rho, 0.0);
    for p1 in pressure_nodes(outer.p, p_star, FAN_NODES) {
        let (df, rho1) = isentrope_step(eos, p0, rho0, p1)?;
        let (s1, l1) = state_at(p1, rho1, f0 + df)?;
        if gap(l1) >= 0.0 {
            // Bisect in pressure between the previous node and p1.
            let (mut hi, mut lo) = (p0, p1);
            let mut best = s1;
            for _ in 0..100 {
                let pm = 0.5 * (hi + lo);
                let (dfm, rhom) = isentrope_step(eos, p0, rho0, pm)?;
                let (sm, lm) = state_at(pm, rhom, f0 + dfm)?;
                best = sm;
                if gap(lm) >= 0.0 {
                    lo = pm;
                } else {
                    hi = pm;
                }
                if (hi - lo).abs() <= 1e-14 * hi.abs().max(lo.abs()) {
                    break;
                }
            }
            return Ok(best);
        }
        p0 = p1;
        rho0 = rho1;
        f0 += df;
    }
    Ok(state_at(p0, rho0, f0)?.0)
}

/// Samples the solution on `n` cell centres of `[x0, x1]` at time `t` for a
/// discontinuity initially at `x_interface`.
#[allow(clippy::too_many_arguments)]
pub fn sample_profile(
    eos_l: &Eos,
    left: &FluidState,
    eos_r: &Eos,
    right: &FluidState,
    star: &StarState,
    x_interface: f64,
    t: f64,
    (x0, x1): (f64, f64),
    n: usize,
) -> Result<Vec<ProfilePoint>, RiemannError> {
    let dx = (x1 - x0) / n as f64;
    (0..n)
        .map(|i| {
            let x = x0 + (i as f64 + 0.5) * dx;
            let xi = if t > 0.0 {
                (x - x_interface) / t
            } else if x <= x_interface {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            };
            let (state, side) = sample_solution(eos_l, left, eos_r, right, star, xi)?;
            let eos = match side {
                Side::Left => eos_l,
                Side::Right => eos_r,
            };
            let e = eos.internal_energy(state.rho, state.p)?;
            Ok(ProfilePoint { x, state, e, side })
        })
        .collect()
}
