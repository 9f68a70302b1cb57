use crate::eos::{CoeffBundle, Eos};

use super::{BranchEval, FluidState, RiemannError};

/// Compressive limit of the shock density, the root of
/// `W(ρ) = (ρ/ρ_k - 1) Γ(ρ) - 2`. When the root lies beyond the admissible
/// density interval of the EOS the interval bound is returned with `clipped`
/// set, so Hugoniot solves never leave that interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoMax {
    pub rho: f64,
    pub clipped: bool,
}

// Quantities of the pre-shock state that enter the Hugoniot function.
struct HugoniotRef {
    rho_k: f64,
    p_k: f64,
    gamma_k: f64,
    // ρ_k e_k = (p_k - h_k) / Γ_k
    rho_e_k: f64,
}

impl HugoniotRef {
    fn new(eos: &Eos, state: &FluidState) -> Result<Self, RiemannError> {
        eos.check_density(state.rho)?;
        let k = eos.coefficients_unchecked(state.rho);
        Ok(HugoniotRef {
            rho_k: state.rho,
            p_k: state.p,
            gamma_k: k.gamma,
            rho_e_k: (state.p - k.h) / k.gamma,
        })
    }

    // Φ_k(p, ρ) and ∂Φ_k/∂ρ.
    fn eval(&self, k: &CoeffBundle, p: f64, rho: f64) -> (f64, f64) {
        let gk = self.gamma_k;
        let rk = self.rho_k;
        let pm = 0.5 * (p + self.p_k);
        let phi = gk * rk * (p - k.h) - k.gamma * rho * gk * self.rho_e_k - gk * pm * k.gamma * (rho - rk);
        let dphi = -gk * rk * (k.dh - pm * k.dgamma) - gk * k.rho_gamma_d1(rho) * (self.rho_e_k + pm);
        (phi, dphi)
    }
}

/// Hugoniot function `Φ_k(p, ρ)` and its density derivative.
pub fn hugoniot_function(eos: &Eos, state: &FluidState, p: f64, rho: f64) -> Result<(f64, f64), RiemannError> {
    let href = HugoniotRef::new(eos, state)?;
    eos.check_density(rho)?;
    Ok(href.eval(&eos.coefficients_unchecked(rho), p, rho))
}

/// Slope `χ = ∂p/∂ρ` of the Hugoniot locus through `(p, ρ)`.
pub fn hugoniot_slope(eos: &Eos, state: &FluidState, p: f64, rho: f64) -> Result<f64, RiemannError> {
    let href = HugoniotRef::new(eos, state)?;
    eos.check_density(rho)?;
    let k = eos.coefficients_unchecked(rho);
    let (_, dphi) = href.eval(&k, p, rho);
    Ok(slope(&href, &k, rho, dphi))
}

fn slope(href: &HugoniotRef, k: &CoeffBundle, rho: f64, dphi: f64) -> f64 {
    -2.0 * dphi / (href.gamma_k * (2.0 * href.rho_k - k.gamma * (rho - href.rho_k)))
}

pub fn rho_max(eos: &Eos, state: &FluidState) -> Result<RhoMax, RiemannError> {
    eos.check_density(state.rho)?;
    let rho_k = state.rho;
    let w = |rho: f64| {
        let k = eos.coefficients_unchecked(rho);
        (
            (rho / rho_k - 1.0) * k.gamma - 2.0,
            k.gamma / rho_k + (rho / rho_k - 1.0) * k.dgamma,
        )
    };
    // Γ decreases towards Γ∞, so W is already non-negative at ρ_k (1 + 2/Γ∞).
    let mut hi = rho_k * (1.0 + 2.0 / eos.gamma_infinity());
    let upper = eos.admissible_domain().upper;
    if upper < hi {
        if w(upper).0 < 0.0 {
            return Ok(RhoMax {
                rho: upper,
                clipped: true,
            });
        }
        hi = upper;
    }
    let mut lo = rho_k;
    let mut rho = hi;
    for _ in 0..200 {
        let (wv, dw) = w(rho);
        if wv == 0.0 {
            break;
        }
        if wv < 0.0 {
            lo = rho;
        } else {
            hi = rho;
        }
        let step = wv / dw;
        if step.abs() <= 1e-12 * rho {
            rho -= step;
            break;
        }
        let mut next = rho - step;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        rho = next;
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    Ok(RhoMax { rho, clipped: false })
}

/// Post-shock density on the Hugoniot locus through `state` at pressure `p`.
///
/// Newton's method on `Φ_k(p, ·)` starting from the acoustic estimate, kept
/// inside the bracket `(ρ_k, ρ_max)` where `Φ_k` changes sign; a step that
/// leaves the bracket is replaced by bisection.
pub fn hugoniot_density(eos: &Eos, state: &FluidState, p: f64, tol: f64) -> Result<f64, RiemannError> {
    if !(p > state.p) {
        return Err(RiemannError::NotCompressive { p, p_k: state.p });
    }
    let href = HugoniotRef::new(eos, state)?;
    let limit = rho_max(eos, state)?;
    let phi_hi = href.eval(&eos.coefficients_unchecked(limit.rho), p, limit.rho).0;
    if !(phi_hi < 0.0) {
        return Err(RiemannError::HugoniotOutOfDomain {
            p,
            rho_limit: limit.rho,
        });
    }
    let (mut lo, mut hi) = (state.rho, limit.rho);
    let c2 = eos.sound_speed_sq(state.rho, state.p)?;
    let mut rho = state.rho + (p - state.p) / c2;
    if !(rho > lo && rho < hi) {
        rho = 0.5 * (lo + hi);
    }
    for _ in 0..200 {
        let (phi, dphi) = href.eval(&eos.coefficients_unchecked(rho), p, rho);
        if phi == 0.0 {
            return Ok(rho);
        }
        if phi > 0.0 {
            lo = rho;
        } else {
            hi = rho;
        }
        let step = phi / dphi;
        if step.abs() <= tol * rho {
            return Ok(rho - step);
        }
        let mut next = rho - step;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            return Ok(next);
        }
        rho = next;
    }
    Ok(rho)
}

/// `F_k` and `F'_k` along the Hugoniot locus (`p > p_k`).
pub fn shock_branch(eos: &Eos, state: &FluidState, p: f64, tol: f64) -> Result<BranchEval, RiemannError> {
    let rho = hugoniot_density(eos, state, p, tol)?;
    let dp = p - state.p;
    let jump = 1.0 / state.rho - 1.0 / rho;
    if !(jump > 0.0) {
        // Too weak to resolve the density jump: acoustic limit.
        let z = state.rho * eos.sound_speed(state.rho, state.p)?;
        return Ok(BranchEval {
            f: dp / z,
            df: 1.0 / z,
            rho: state.rho,
        });
    }
    let href = HugoniotRef::new(eos, state)?;
    let k = eos.coefficients_unchecked(rho);
    let (_, dphi) = href.eval(&k, p, rho);
    let chi = slope(&href, &k, rho, dphi);
    let f = (dp * jump).sqrt();
    let df = (jump + dp / (rho * rho * chi)) / (2.0 * f);
    Ok(BranchEval { f, df, rho })
}

// One classical RK4 step of dρ/dp = 1/c², df/dp = 1/(ρc) from (p0, ρ0) to p1.
// Returns (Δf, ρ1).
pub(crate) fn isentrope_step(eos: &Eos, p0: f64, rho0: f64, p1: f64) -> Result<(f64, f64), RiemannError> {
    let h = p1 - p0;
    let sound = |stage: usize, p: f64, rho: f64| {
        eos.sound_speed(rho, p)
            .map_err(|source| RiemannError::IsentropeBreakdown {
                eos: eos.model().name(),
                stage,
                p,
                rho,
                source,
            })
    };
    let c1 = sound(1, p0, rho0)?;
    let rho2 = rho0 + 0.5 * h / (c1 * c1);
    let c2 = sound(2, p0 + 0.5 * h, rho2)?;
    let rho3 = rho0 + 0.5 * h / (c2 * c2);
    let c3 = sound(3, p0 + 0.5 * h, rho3)?;
    let rho4 = rho0 + h / (c3 * c3);
    let c4 = sound(4, p1, rho4)?;
    let z1 = rho0 * c1;
    let z2 = rho2 * c2;
    let z3 = rho3 * c3;
    let z4 = rho4 * c4;
    let df = h / 6.0 * (1.0 / z1 + 2.0 / z2 + 2.0 / z3 + 1.0 / z4);
    let rho1 = rho0 + h / 6.0 * (1.0 / (c1 * c1) + 2.0 / (c2 * c2) + 2.0 / (c3 * c3) + 1.0 / (c4 * c4));
    Ok((df, rho1))
}

// Pressure nodes from p_k to p: geometric when both are positive.
pub(crate) fn pressure_nodes(p_k: f64, p: f64, n: usize) -> impl Iterator<Item = f64> {
    let n = n.max(1);
    let geometric = p_k > 0.0 && p > 0.0;
    let ratio = p / p_k;
    (1..=n).map(move |i| {
        if i == n {
            p
        } else if geometric {
            p_k * ratio.powf(i as f64 / n as f64)
        } else {
            p_k + (p - p_k) * i as f64 / n as f64
        }
    })
}

/// `F_k` and `F'_k` along the isentrope (`p <= p_k`), integrated from `p_k`
/// down to `p` with `substeps` RK4 steps.
pub fn rarefaction_branch(eos: &Eos, state: &FluidState, p: f64, substeps: usize) -> Result<BranchEval, RiemannError> {
    if p > state.p {
        return Err(RiemannError::NotCompressive { p: state.p, p_k: p });
    }
    let mut f = 0.0;
    let mut rho = state.rho;
    let mut p0 = state.p;
    if p < state.p {
        for p1 in pressure_nodes(state.p, p, substeps) {
            let (df, rho1) = isentrope_step(eos, p0, rho, p1)?;
            f += df;
            rho = rho1;
            p0 = p1;
        }
    }
    let c = eos
        .sound_speed(rho, p)
        .map_err(|source| RiemannError::IsentropeBreakdown {
            eos: eos.model().name(),
            stage: 5,
            p,
            rho,
            source,
        })?;
    Ok(BranchEval {
        f,
        df: 1.0 / (rho * c),
        rho,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eos::EosModel;

    fn shyue() -> Eos {
        Eos::new(EosModel::Jwl {
            a1: 8.545e11,
            a2: 2.05e10,
            omega: 0.25,
            r1: 4.6,
            r2: 1.35,
            rho0: 1840.0,
        })
        .unwrap()
    }

    #[test]
    fn rho_max_ideal_closed_form() {
        let eos = Eos::ideal(1.4).unwrap();
        let r = rho_max(&eos, &FluidState::new(1.0, 0.0, 1.0)).unwrap();
        assert!((r.rho - 6.0).abs() < 1e-11);
        assert!(!r.clipped);
        let eos = Eos::ideal(1.2).unwrap();
        let r = rho_max(&eos, &FluidState::new(618.935, 0.0, 6.314e12)).unwrap();
        assert!((r.rho - 6808.285).abs() < 1e-8);
    }

    #[test]
    fn rho_max_clipped_by_jwl_bound() {
        let eos = shyue();
        let r = rho_max(&eos, &FluidState::new(1700.0, 0.0, 1e12)).unwrap();
        assert!(r.clipped);
        assert_eq!(r.rho, eos.admissible_domain().upper);
        // 9 ρ_k lies inside the admissible interval.
        let r = rho_max(&eos, &FluidState::new(1000.0, 0.0, 5e10)).unwrap();
        assert!(!r.clipped);
        assert!((r.rho - 9000.0).abs() < 1e-6, "{}", r.rho);
    }

    #[test]
    fn ideal_hugoniot_density() {
        let eos = Eos::ideal(1.4).unwrap();
        let s = FluidState::new(1.0, 0.0, 1.0);
        let rho = hugoniot_density(&eos, &s, 2.0, 1e-8).unwrap();
        assert!((rho - 1.625).abs() < 1e-12, "{rho}");
    }

    #[test]
    fn hugoniot_density_tends_to_initial_density() {
        let eos = Eos::stiffened(7.15, 3.31e8).unwrap();
        let s = FluidState::new(1000.0, 0.0, 1e5);
        let rho = hugoniot_density(&eos, &s, 1e5 * (1.0 + 1e-9), 1e-8).unwrap();
        assert!((rho - 1000.0).abs() < 1e-6);
    }

    #[test]
    fn compressive_contract_is_checked() {
        let eos = Eos::ideal(1.4).unwrap();
        let s = FluidState::new(1.0, 0.0, 1.0);
        assert!(matches!(
            hugoniot_density(&eos, &s, 1.0, 1e-8),
            Err(RiemannError::NotCompressive { .. })
        ));
    }

    #[test]
    fn hugoniot_beyond_validity_bound_is_an_error() {
        let eos = shyue();
        let s = FluidState::new(1700.0, 0.0, 1e12);
        assert!(matches!(
            hugoniot_density(&eos, &s, 1e16, 1e-8),
            Err(RiemannError::HugoniotOutOfDomain { .. })
        ));
    }

    #[test]
    fn ideal_shock_branch_value() {
        let eos = Eos::ideal(1.4).unwrap();
        let s = FluidState::new(1.0, 0.0, 1.0);
        let b = shock_branch(&eos, &s, 2.0, 1e-8).unwrap();
        let expected = (1.0f64 - 1.0 / 1.625).sqrt();
        assert!((b.f - expected).abs() < 1e-12);
        assert!((b.f - 0.62017).abs() < 1e-5);
    }

    #[test]
    fn rarefaction_at_initial_pressure_is_trivial() {
        let eos = Eos::ideal(1.4).unwrap();
        let s = FluidState::new(1.0, 0.0, 1.0);
        let b = rarefaction_branch(&eos, &s, 1.0, 1).unwrap();
        assert_eq!(b.f, 0.0);
        assert_eq!(b.rho, 1.0);
        assert!((b.df - 1.0 / 1.4f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn single_step_matches_hand_expanded_stages() {
        let eos = Eos::ideal(1.4).unwrap();
        let (pk, rk, pn) = (1.0f64, 1.0f64, 0.5f64);
        let c = |p: f64, r: f64| (1.4 * p / r).sqrt();
        let c1 = c(pk, rk);
        let r2 = rk - (pk - pn) / (2.0 * c1 * c1);
        let c2 = c(0.5 * (pk + pn), r2);
        let r3 = rk - (pk - pn) / (2.0 * c2 * c2);
        let c3 = c(0.5 * (pk + pn), r3);
        let r4 = rk - (pk - pn) / (c3 * c3);
        let c4 = c(pn, r4);
        let f = -(pk - pn) / 6.0 * (1.0 / (rk * c1) + 2.0 / (r2 * c2) + 2.0 / (r3 * c3) + 1.0 / (r4 * c4));
        let rho = rk - (pk - pn) / 6.0 * (1.0 / (c1 * c1) + 2.0 / (c2 * c2) + 2.0 / (c3 * c3) + 1.0 / (c4 * c4));
        let b = rarefaction_branch(&eos, &FluidState::new(rk, 0.0, pk), pn, 1).unwrap();
        assert!((b.f - f).abs() < 1e-15);
        assert!((b.rho - rho).abs() < 1e-15);
        assert!((b.df - 1.0 / (rho * c(pn, rho))).abs() < 1e-15);
    }

    #[test]
    fn isentrope_breakdown_names_the_stage() {
        // One huge step drives the stage-4 density negative.
        let eos = Eos::ideal(1.4).unwrap();
        let s = FluidState::new(1.0, 0.0, 1.0);
        let err = rarefaction_branch(&eos, &s, -5.0, 1).unwrap_err();
        assert!(matches!(err, RiemannError::IsentropeBreakdown { .. }), "{err:?}");
    }
}
