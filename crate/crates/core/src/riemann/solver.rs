use crate::eos::Eos;

use super::vacuum::check_vacuum;
use super::wave_curves::{rarefaction_branch, shock_branch};
use super::{BranchEval, FluidState, RiemannError, SolverOptions, StarState, WaveSpeeds, WaveType};

/// Lower bound kept on every pressure iterate.
pub fn pressure_floor(left: &FluidState, right: &FluidState) -> f64 {
    (1e-8 * left.p.min(right.p)).max(f64::MIN_POSITIVE)
}

/// Acoustic-impedance estimate of `p*`, floored at [`pressure_floor`].
pub fn acoustic_guess(eos_l: &Eos, left: &FluidState, eos_r: &Eos, right: &FluidState) -> Result<f64, RiemannError> {
    let zl = left.rho * eos_l.sound_speed(left.rho, left.p)?;
    let zr = right.rho * eos_r.sound_speed(right.rho, right.p)?;
    let p0 = (zl * right.p + zr * left.p + zl * zr * (left.u - right.u)) / (zl + zr);
    Ok(p0.max(pressure_floor(left, right)))
}

/// Shock branch above `p_k`, isentrope otherwise.
pub fn wave_branch(eos: &Eos, state: &FluidState, p: f64, opts: &SolverOptions) -> Result<BranchEval, RiemannError> {
    if p > state.p {
        shock_branch(eos, state, p, opts.hugoniot_tol)
    } else {
        rarefaction_branch(eos, state, p, opts.substeps)
    }
}

pub fn solve_star(
    eos_l: &Eos,
    left: &FluidState,
    eos_r: &Eos,
    right: &FluidState,
    opts: &SolverOptions,
) -> Result<StarState, RiemannError> {
    let cl = left.validate(eos_l)?;
    let cr = right.validate(eos_r)?;
    let du = right.u - left.u;
    if du > 0.0 {
        let vac = check_vacuum(eos_l, left, eos_r, right)?;
        if vac.margin <= 0.0 {
            return Err(RiemannError::Vacuum { margin: vac.margin });
        }
    }

    let floor = pressure_floor(left, right);
    let mut p = acoustic_guess(eos_l, left, eos_r, right)?;
    let mut history = vec![p];
    let mut rel_change = f64::INFINITY;
    let mut iterations = 0;
    // Last pressure at which both branches could be evaluated. Below
    // min(p_l, p_r) neither side needs a Hugoniot solve.
    let mut p_safe = left.p.min(right.p).max(floor);
    let mut domain_error = None;
    while iterations < opts.max_iter {
        iterations += 1;
        let (bl, br) = match (wave_branch(eos_l, left, p, opts), wave_branch(eos_r, right, p, opts)) {
            (Ok(bl), Ok(br)) => (bl, br),
            (Err(e @ RiemannError::HugoniotOutOfDomain { .. }), _)
            | (_, Err(e @ RiemannError::HugoniotOutOfDomain { .. })) => {
                // Overshoot past the admissible Hugoniot range: backtrack.
                p = 0.5 * (p + p_safe);
                history.push(p);
                domain_error = Some(e);
                continue;
            }
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        domain_error = None;
        p_safe = p;
        let f = bl.f + br.f + du;
        let df = bl.df + br.df;
        let next = (p - f / df).max(floor);
        history.push(next);
        if !next.is_finite() {
            break;
        }
        rel_change = (next - p).abs() / next;
        p = next;
        if rel_change < opts.tol {
            break;
        }
    }
    if !(rel_change < opts.tol) {
        return Err(domain_error.unwrap_or(RiemannError::NonConvergence { history }));
    }

    let bl = wave_branch(eos_l, left, p, opts)?;
    let br = wave_branch(eos_r, right, p, opts)?;
    let u_star = 0.5 * (left.u + right.u + br.f - bl.f);
    let residual = (bl.f + br.f + du).abs();

    let wave_l = if p > left.p {
        WaveType::Shock
    } else {
        WaveType::Rarefaction
    };
    let wave_r = if p > right.p {
        WaveType::Shock
    } else {
        WaveType::Rarefaction
    };
    let speeds_l = match wave_l {
        WaveType::Shock => {
            let s = shock_speed(left, bl.rho, u_star).unwrap_or(left.u - cl);
            WaveSpeeds { head: s, tail: s }
        }
        WaveType::Rarefaction => WaveSpeeds {
            head: left.u - cl,
            tail: u_star - eos_l.sound_speed(bl.rho, p)?,
        },
    };
    let speeds_r = match wave_r {
        WaveType::Shock => {
            let s = shock_speed(right, br.rho, u_star).unwrap_or(right.u + cr);
            WaveSpeeds { head: s, tail: s }
        }
        WaveType::Rarefaction => WaveSpeeds {
            head: right.u + cr,
            tail: u_star + eos_r.sound_speed(br.rho, p)?,
        },
    };

    Ok(StarState {
        p_star: p,
        u_star,
        rho_star_l: bl.rho,
        rho_star_r: br.rho,
        wave_l,
        wave_r,
        speeds_l,
        speeds_r,
        iterations,
        residual,
        rel_change,
    })
}

// Mass jump condition; None when the density jump is too small to divide by.
fn shock_speed(pre: &FluidState, rho_star: f64, u_star: f64) -> Option<f64> {
    let drho = rho_star - pre.rho;
    if drho.abs() <= 1e-10 * pre.rho {
        return None;
    }
    Some((rho_star * u_star - pre.rho * pre.u) / drho)
}
