//! Mie-Grüneisen equations of state.
//!
//! Every model in this module has the form
//!
//! ```text
//! p(ρ, e) = Γ(ρ) ρ e + h(ρ)
//! ```
//!
//! where `Γ` is the Grüneisen coefficient and `h` the cold-reference pressure.
//! The Riemann solver only ever touches a material through [`CoeffBundle`]
//! (`Γ`, `h` and their first two density derivatives), so adding a material is
//! a matter of adding a row to [`Eos::coefficients`].
//!
//! The wave-structure theory behind the solver assumes three conditions on the
//! coefficients:
//!
//! * C1: `Γ' ≤ 0`, `(ρΓ)' ≥ 0`, `(ρΓ)'' ≥ 0`
//! * C2: `Γ → Γ∞ > 0` as `ρ → ∞` and `Γ ≤ Γ∞ + 2`
//! * C3: `h' ≥ 0`, `h'' ≥ 0`
//!
//! Some materials only satisfy them on a density interval, returned by
//! [`Eos::validity_domain`]. C3 is only sufficient for convexity, and strong
//! JWL shocks can end past it, so state-dependent operations accept the
//! wider [`Eos::admissible_domain`] (for JWL: as long as `h' ≥ 0`) and reject
//! densities outside it instead of extrapolating.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EosError {
    #[error("density must be positive, got {rho} kg/m^3")]
    NonPositiveDensity { rho: f64 },
    #[error("density {rho} kg/m^3 lies outside the admissible interval {domain}")]
    OutOfDomain { rho: f64, domain: DensityInterval },
    #[error("hyperbolicity lost at rho = {rho} kg/m^3, p = {p} Pa (c^2 = {c2})")]
    HyperbolicityLoss { rho: f64, p: f64, c2: f64 },
    #[error("invalid {eos} parameters: {reason}")]
    InvalidParameters { eos: &'static str, reason: String },
}

/// Coefficient sets for the supported Mie-Grüneisen materials. SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EosModel {
    Ideal {
        gamma: f64,
    },
    Stiffened {
        gamma: f64,
        p_inf: f64,
    },
    /// Polynomial EOS. The tension branch (`μ < 0`) uses `(B₀ + B₁μ)ρ₀e` so
    /// that the sound speed is continuous at `μ = 0`.
    Polynomial {
        a1: f64,
        a2: f64,
        a3: f64,
        b0: f64,
        b1: f64,
        t1: f64,
        t2: f64,
        rho0: f64,
    },
    Jwl {
        a1: f64,
        a2: f64,
        omega: f64,
        r1: f64,
        r2: f64,
        rho0: f64,
    },
    CochranChan {
        a1: f64,
        a2: f64,
        omega: f64,
        r1: f64,
        r2: f64,
        rho0: f64,
    },
}

impl EosModel {
    pub fn name(&self) -> &'static str {
        match self {
            EosModel::Ideal { .. } => "ideal",
            EosModel::Stiffened { .. } => "stiffened",
            EosModel::Polynomial { .. } => "polynomial",
            EosModel::Jwl { .. } => "jwl",
            EosModel::CochranChan { .. } => "cochran_chan",
        }
    }
}

/// Density interval on which C1-C3 hold. `lower == 0` means open at zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityInterval {
    pub lower: f64,
    pub upper: f64,
}

impl DensityInterval {
    pub const POSITIVE: DensityInterval = DensityInterval {
        lower: 0.0,
        upper: f64::INFINITY,
    };

    pub fn contains(&self, rho: f64) -> bool {
        rho > 0.0 && rho >= self.lower && rho <= self.upper
    }

    pub fn is_bounded_above(&self) -> bool {
        self.upper.is_finite()
    }
}

impl fmt::Display for DensityInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lower > 0.0 {
            write!(f, "[{}, ", self.lower)?;
        } else {
            write!(f, "(0, ")?;
        }
        if self.upper.is_finite() {
            write!(f, "{}]", self.upper)
        } else {
            write!(f, "inf)")
        }
    }
}

/// `Γ`, `h` and their first two derivatives with respect to density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoeffBundle {
    pub gamma: f64,
    pub dgamma: f64,
    pub d2gamma: f64,
    pub h: f64,
    pub dh: f64,
    pub d2h: f64,
}

impl CoeffBundle {
    /// `(ρΓ)'`
    pub fn rho_gamma_d1(&self, rho: f64) -> f64 {
        self.gamma + rho * self.dgamma
    }

    /// `(ρΓ)''`
    pub fn rho_gamma_d2(&self, rho: f64) -> f64 {
        2.0 * self.dgamma + rho * self.d2gamma
    }
}

/// A validated material model. The validity interval is computed once here.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EosModel", into = "EosModel")]
pub struct Eos {
    model: EosModel,
    domain: DensityInterval,
    admissible: DensityInterval,
}

impl TryFrom<EosModel> for Eos {
    type Error = EosError;

    fn try_from(model: EosModel) -> Result<Self, Self::Error> {
        Eos::new(model)
    }
}

impl From<Eos> for EosModel {
    fn from(eos: Eos) -> Self {
        eos.model
    }
}

fn invalid(eos: &'static str, reason: impl Into<String>) -> EosError {
    EosError::InvalidParameters {
        eos,
        reason: reason.into(),
    }
}

fn require(ok: bool, eos: &'static str, reason: &str) -> Result<(), EosError> {
    if ok {
        Ok(())
    } else {
        Err(invalid(eos, reason))
    }
}

/// Maximum over `ν = ρ₀/ρ` of the JWL auxiliary function `G(ν)`; the cold
/// term is convex whenever `R₁ν - 2 - ω ≥ α`.
pub fn jwl_alpha(a1: f64, a2: f64, omega: f64, r1: f64, r2: f64) -> f64 {
    a2 * r2 * r2 / (a1 * r1 * (r1 - r2)) * (((2.0 + omega) * (r1 - r2) - r2) / r2).exp()
}

/// Sufficient JWL density bound `R₁ρ₀ / (2 + ω + α)` for `h'' ≥ 0`.
pub fn jwl_sufficient_bound(a1: f64, a2: f64, omega: f64, r1: f64, r2: f64, rho0: f64) -> f64 {
    r1 * rho0 / (2.0 + omega + jwl_alpha(a1, a2, omega, r1, r2))
}

/// Largest density up to which `R₁ν - 2 - ω ≥ G(ν)` holds for all
/// `ν = ρ₀/ρ`, i.e. the exact extent of `h'' ≥ 0`. Never below
/// [`jwl_sufficient_bound`].
pub fn jwl_convexity_limit(a1: f64, a2: f64, omega: f64, r1: f64, r2: f64, rho0: f64) -> f64 {
    let q = |nu: f64| r1 * nu - 2.0 - omega - a2 * r2 / (a1 * r1) * (2.0 + omega - r2 * nu) * ((r1 - r2) * nu).exp();
    let nu_s = (2.0 + omega + jwl_alpha(a1, a2, omega, r1, r2)) / r1;
    // q(0) < 0, so marching down from ν_s always finds a sign change.
    let step = 1e-3 * nu_s;
    let mut ok = nu_s;
    let mut bad = ok - step;
    while bad > 0.0 && q(bad) >= 0.0 {
        ok = bad;
        bad -= step;
    }
    let mut bad = bad.max(0.0);
    for _ in 0..100 {
        let mid = 0.5 * (ok + bad);
        if q(mid) >= 0.0 {
            ok = mid;
        } else {
            bad = mid;
        }
        if ok - bad <= 1e-15 * ok {
            break;
        }
    }
    rho0 / ok
}

/// Density at which the JWL cold pressure stops increasing (`h' = 0`).
pub fn jwl_monotone_limit(a1: f64, a2: f64, omega: f64, r1: f64, r2: f64, rho0: f64) -> f64 {
    let dh = |rho: f64| {
        [(a1, r1), (a2, r2)]
            .iter()
            .map(|&(a, r)| a * (r * rho0 / (rho * rho) - omega / rho - omega / (r * rho0)) * (-r * rho0 / rho).exp())
            .sum::<f64>()
    };
    let mut lo = jwl_convexity_limit(a1, a2, omega, r1, r2, rho0);
    let mut hi = 2.0 * lo;
    while dh(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if dh(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    lo
}

impl Eos {
    pub fn new(model: EosModel) -> Result<Self, EosError> {
        let name = model.name();
        let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
        let (domain, admissible) = match model {
            EosModel::Ideal { gamma } => {
                require(finite(&[gamma]) && gamma > 1.0, name, "gamma must exceed 1")?;
                (DensityInterval::POSITIVE, DensityInterval::POSITIVE)
            }
            EosModel::Stiffened { gamma, p_inf } => {
                require(finite(&[gamma, p_inf]), name, "non-finite coefficient")?;
                require(gamma > 1.0, name, "gamma must exceed 1")?;
                require(p_inf >= 0.0, name, "p_inf must be non-negative")?;
                (DensityInterval::POSITIVE, DensityInterval::POSITIVE)
            }
            EosModel::Polynomial {
                a1,
                a2,
                a3,
                b0,
                b1,
                t1,
                t2,
                rho0,
            } => {
                require(
                    finite(&[a1, a2, a3, b0, b1, t1, t2, rho0]),
                    name,
                    "non-finite coefficient",
                )?;
                require(rho0 > 0.0 && b1 > 0.0, name, "rho0 and B1 must be positive")?;
                require(
                    a1 >= 0.0 && a2 >= 0.0 && a3 >= 0.0 && t1 >= 0.0 && t2 >= 0.0,
                    name,
                    "A1..A3, T1, T2 must be non-negative",
                )?;
                require(b1 <= b0 && b0 <= b1 + 2.0, name, "requires B1 <= B0 <= B1 + 2")?;
                require(t1 >= 2.0 * t2, name, "requires T1 >= 2 T2")?;
                let d = DensityInterval {
                    lower: b0 * rho0 / (b1 + 2.0),
                    upper: f64::INFINITY,
                };
                (d, d)
            }
            EosModel::Jwl {
                a1,
                a2,
                omega,
                r1,
                r2,
                rho0,
            } => {
                require(finite(&[a1, a2, omega, r1, r2, rho0]), name, "non-finite coefficient")?;
                require(
                    a1 > 0.0 && a2 > 0.0 && omega > 0.0 && r1 > 0.0 && r2 > 0.0 && rho0 > 0.0,
                    name,
                    "all coefficients must be positive",
                )?;
                require(r1 > r2, name, "requires R1 > R2")?;
                (
                    DensityInterval {
                        lower: 0.0,
                        upper: jwl_convexity_limit(a1, a2, omega, r1, r2, rho0),
                    },
                    DensityInterval {
                        lower: 0.0,
                        upper: jwl_monotone_limit(a1, a2, omega, r1, r2, rho0),
                    },
                )
            }
            EosModel::CochranChan {
                a1,
                a2,
                omega,
                r1,
                r2,
                rho0,
            } => {
                require(finite(&[a1, a2, omega, r1, r2, rho0]), name, "non-finite coefficient")?;
                require(
                    a1 > 0.0 && a2 > 0.0 && omega > 0.0 && rho0 > 0.0,
                    name,
                    "all coefficients must be positive",
                )?;
                require(
                    1.0 < r2 && r2 <= 1.0 + omega && 1.0 + omega <= r1,
                    name,
                    "requires 1 < R2 <= 1 + omega <= R1",
                )?;
                (DensityInterval::POSITIVE, DensityInterval::POSITIVE)
            }
        };
        Ok(Eos {
            model,
            domain,
            admissible,
        })
    }

    pub fn ideal(gamma: f64) -> Result<Self, EosError> {
        Eos::new(EosModel::Ideal { gamma })
    }

    pub fn stiffened(gamma: f64, p_inf: f64) -> Result<Self, EosError> {
        Eos::new(EosModel::Stiffened { gamma, p_inf })
    }

    pub fn model(&self) -> &EosModel {
        &self.model
    }

    /// Interval on which C1-C3 hold.
    pub fn validity_domain(&self) -> DensityInterval {
        self.domain
    }

    /// Interval on which states are accepted. Contains [`Eos::validity_domain`].
    pub fn admissible_domain(&self) -> DensityInterval {
        self.admissible
    }

    /// `Γ∞ = lim Γ(ρ)` as `ρ → ∞`.
    pub fn gamma_infinity(&self) -> f64 {
        match self.model {
            EosModel::Ideal { gamma } | EosModel::Stiffened { gamma, .. } => gamma - 1.0,
            EosModel::Polynomial { b1, .. } => b1,
            EosModel::Jwl { omega, .. } | EosModel::CochranChan { omega, .. } => omega,
        }
    }

    pub fn check_density(&self, rho: f64) -> Result<(), EosError> {
        if !(rho > 0.0) {
            return Err(EosError::NonPositiveDensity { rho });
        }
        if !self.admissible.contains(rho) {
            return Err(EosError::OutOfDomain {
                rho,
                domain: self.admissible,
            });
        }
        Ok(())
    }

    pub fn coefficients(&self, rho: f64) -> Result<CoeffBundle, EosError> {
        if !(rho > 0.0) {
            return Err(EosError::NonPositiveDensity { rho });
        }
        Ok(self.coefficients_unchecked(rho))
    }

    pub(crate) fn coefficients_unchecked(&self, rho: f64) -> CoeffBundle {
        match self.model {
            EosModel::Ideal { gamma } => CoeffBundle {
                gamma: gamma - 1.0,
                dgamma: 0.0,
                d2gamma: 0.0,
                h: 0.0,
                dh: 0.0,
                d2h: 0.0,
            },
            EosModel::Stiffened { gamma, p_inf } => CoeffBundle {
                gamma: gamma - 1.0,
                dgamma: 0.0,
                d2gamma: 0.0,
                h: -gamma * p_inf,
                dh: 0.0,
                d2h: 0.0,
            },
            EosModel::Polynomial {
                a1,
                a2,
                a3,
                b0,
                b1,
                t1,
                t2,
                rho0,
            } => {
                let mu = rho / rho0 - 1.0;
                let db = (b0 - b1) * rho0;
                let (h, dh, d2h) = if mu >= 0.0 {
                    (
                        mu * (a1 + mu * (a2 + mu * a3)),
                        (a1 + mu * (2.0 * a2 + 3.0 * a3 * mu)) / rho0,
                        (2.0 * a2 + 6.0 * a3 * mu) / (rho0 * rho0),
                    )
                } else {
                    (
                        mu * (t1 + t2 * mu),
                        (t1 + 2.0 * t2 * mu) / rho0,
                        2.0 * t2 / (rho0 * rho0),
                    )
                };
                CoeffBundle {
                    gamma: b1 + db / rho,
                    dgamma: -db / (rho * rho),
                    d2gamma: 2.0 * db / (rho * rho * rho),
                    h,
                    dh,
                    d2h,
                }
            }
            EosModel::Jwl {
                a1,
                a2,
                omega,
                r1,
                r2,
                rho0,
            } => {
                let term = |a: f64, r: f64| {
                    let x = r * rho0 / rho;
                    let ex = (-x).exp();
                    (
                        a * (1.0 - omega * rho / (r * rho0)) * ex,
                        a * (x / rho - omega / rho - omega / (r * rho0)) * ex,
                        a * x / (rho * rho) * (x - 2.0 - omega) * ex,
                    )
                };
                let (h1, dh1, d2h1) = term(a1, r1);
                let (h2, dh2, d2h2) = term(a2, r2);
                CoeffBundle {
                    gamma: omega,
                    dgamma: 0.0,
                    d2gamma: 0.0,
                    h: h1 + h2,
                    dh: dh1 + dh2,
                    d2h: d2h1 + d2h2,
                }
            }
            EosModel::CochranChan {
                a1,
                a2,
                omega,
                r1,
                r2,
                rho0,
            } => {
                let x = rho / rho0;
                let k1 = a1 * (r1 - 1.0 - omega) / (r1 - 1.0);
                let k2 = a2 * (r2 - 1.0 - omega) / (r2 - 1.0);
                CoeffBundle {
                    gamma: omega,
                    dgamma: 0.0,
                    d2gamma: 0.0,
                    h: k1 * x.powf(r1) - k2 * x.powf(r2),
                    dh: (k1 * r1 * x.powf(r1 - 1.0) - k2 * r2 * x.powf(r2 - 1.0)) / rho0,
                    d2h: (k1 * r1 * (r1 - 1.0) * x.powf(r1 - 2.0) - k2 * r2 * (r2 - 1.0) * x.powf(r2 - 2.0))
                        / (rho0 * rho0),
                }
            }
        }
    }

    pub fn pressure(&self, rho: f64, e: f64) -> Result<f64, EosError> {
        self.check_density(rho)?;
        let k = self.coefficients_unchecked(rho);
        Ok(k.gamma * rho * e + k.h)
    }

    /// Inverse of [`Eos::pressure`] at fixed density: `e = (p - h) / (Γρ)`.
    pub fn internal_energy(&self, rho: f64, p: f64) -> Result<f64, EosError> {
        self.check_density(rho)?;
        let k = self.coefficients_unchecked(rho);
        Ok((p - k.h) / (k.gamma * rho))
    }

    pub fn sound_speed_sq(&self, rho: f64, p: f64) -> Result<f64, EosError> {
        self.check_density(rho)?;
        let k = self.coefficients_unchecked(rho);
        let c2 = (1.0 / rho + k.dgamma / k.gamma) * (p - k.h) + p * k.gamma / rho + k.dh;
        if c2 > 0.0 && c2.is_finite() {
            Ok(c2)
        } else {
            Err(EosError::HyperbolicityLoss { rho, p, c2 })
        }
    }

    pub fn sound_speed(&self, rho: f64, p: f64) -> Result<f64, EosError> {
        self.sound_speed_sq(rho, p).map(f64::sqrt)
    }

    /// Fundamental derivative `𝒢 = 1 + (ρ / 2c²) ∂c²/∂ρ|_s`, written in terms
    /// of the Mie-Grüneisen coefficients.
    pub fn fundamental_derivative(&self, rho: f64, p: f64) -> Result<f64, EosError> {
        let c2 = self.sound_speed_sq(rho, p)?;
        let k = self.coefficients_unchecked(rho);
        let e = (p - k.h) / (k.gamma * rho);
        let d1 = k.rho_gamma_d1(rho);
        let d2 = k.rho_gamma_d2(rho);
        let numer = 0.5 * (rho * d2 + d1 * (2.0 + k.gamma)) * e
            + 0.5 * rho * k.d2h
            + p / (2.0 * rho) * (k.gamma * k.gamma + 2.0 * d1)
            + 0.5 * (2.0 + k.gamma) * k.dh;
        Ok(numer / c2)
    }

    /// Sweeps the density grid and reports each of C1-C3 (and `𝒢 > 0` at the
    /// given pressures wherever `e > 0`) as a separate outcome.
    pub fn check_conditions(&self, rho_lo: f64, rho_hi: f64, n: usize, pressures: &[f64]) -> ConditionReport {
        let lo = rho_lo.max(self.domain.lower).max(f64::MIN_POSITIVE);
        let hi = rho_hi.min(self.domain.upper);
        let mut outcomes: Vec<ConditionOutcome> = Condition::ALL
            .iter()
            .map(|&condition| ConditionOutcome::new(condition))
            .collect();
        let n = n.max(2);
        let g_inf = self.gamma_infinity();
        for i in 0..n {
            let t = i as f64 / (n - 1) as f64;
            let rho = if hi > lo { lo * (hi / lo).powf(t) } else { lo };
            let k = self.coefficients_unchecked(rho);
            let d1 = k.rho_gamma_d1(rho);
            let d2 = k.rho_gamma_d2(rho);
            let gscale = k.gamma.abs() / rho;
            let checks = [
                (Condition::GammaNonIncreasing, -k.dgamma, gscale),
                (Condition::RhoGammaNonDecreasing, d1, k.gamma.abs()),
                (
                    Condition::RhoGammaConvex,
                    d2,
                    (2.0 * k.dgamma).abs() + (rho * k.d2gamma).abs(),
                ),
                (
                    Condition::GammaBounded,
                    (g_inf + 2.0 - k.gamma).min(k.gamma),
                    k.gamma.abs(),
                ),
                (Condition::ColdNonDecreasing, k.dh, k.h.abs() / rho),
                (Condition::ColdConvex, k.d2h, k.dh.abs() / rho + k.h.abs() / (rho * rho)),
            ];
            for (condition, value, scale) in checks {
                outcomes[condition as usize].record(rho, f64::NAN, value, scale);
            }
            for &p in pressures {
                if p <= k.h {
                    continue;
                }
                let Ok(g) = self.fundamental_derivative(rho, p) else {
                    outcomes[Condition::FundamentalDerivativePositive as usize].record(rho, p, f64::NAN, 0.0);
                    continue;
                };
                outcomes[Condition::FundamentalDerivativePositive as usize].record_strict(rho, p, g);
            }
        }
        ConditionReport {
            eos: self.model.name(),
            domain: self.domain,
            rho_range: (lo, hi),
            outcomes,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    GammaNonIncreasing,
    RhoGammaNonDecreasing,
    RhoGammaConvex,
    GammaBounded,
    ColdNonDecreasing,
    ColdConvex,
    FundamentalDerivativePositive,
}

impl Condition {
    pub const ALL: [Condition; 7] = [
        Condition::GammaNonIncreasing,
        Condition::RhoGammaNonDecreasing,
        Condition::RhoGammaConvex,
        Condition::GammaBounded,
        Condition::ColdNonDecreasing,
        Condition::ColdConvex,
        Condition::FundamentalDerivativePositive,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Condition::GammaNonIncreasing => "C1: Gamma' <= 0",
            Condition::RhoGammaNonDecreasing => "C1: (rho Gamma)' >= 0",
            Condition::RhoGammaConvex => "C1: (rho Gamma)'' >= 0",
            Condition::GammaBounded => "C2: 0 <= Gamma <= Gamma_inf + 2",
            Condition::ColdNonDecreasing => "C3: h' >= 0",
            Condition::ColdConvex => "C3: h'' >= 0",
            Condition::FundamentalDerivativePositive => "G > 0",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionOutcome {
    pub condition: Condition,
    pub checked: usize,
    pub violations: usize,
    /// Smallest (most negative) value seen, with the density and pressure it
    /// occurred at. Pressure is NaN for density-only conditions.
    pub worst: Option<(f64, f64, f64)>,
}

impl ConditionOutcome {
    fn new(condition: Condition) -> Self {
        ConditionOutcome {
            condition,
            checked: 0,
            violations: 0,
            worst: None,
        }
    }

    fn note_worst(&mut self, rho: f64, p: f64, value: f64) {
        match self.worst {
            Some((_, _, w)) if !(value < w) => {}
            _ => self.worst = Some((rho, p, value)),
        }
    }

    // `value >= 0` up to rounding relative to `scale`.
    fn record(&mut self, rho: f64, p: f64, value: f64, scale: f64) {
        self.checked += 1;
        if !(value >= -1e-12 * scale) {
            self.violations += 1;
        }
        self.note_worst(rho, p, value);
    }

    fn record_strict(&mut self, rho: f64, p: f64, value: f64) {
        self.checked += 1;
        if !(value > 0.0) {
            self.violations += 1;
        }
        self.note_worst(rho, p, value);
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub eos: &'static str,
    pub domain: DensityInterval,
    pub rho_range: (f64, f64),
    pub outcomes: Vec<ConditionOutcome>,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(ConditionOutcome::passed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tnt() -> Eos {
        Eos::new(EosModel::Jwl {
            a1: 3.712e11,
            a2: 3.23e9,
            omega: 0.30,
            r1: 4.15,
            r2: 0.95,
            rho0: 1630.0,
        })
        .unwrap()
    }

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

    fn water_poly() -> Eos {
        Eos::new(EosModel::Polynomial {
            a1: 2.2e9,
            a2: 9.54e9,
            a3: 1.45e10,
            b0: 0.28,
            b1: 0.28,
            t1: 2.2e9,
            t2: 0.0,
            rho0: 1000.0,
        })
        .unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn ideal_coefficients() {
        let k = Eos::ideal(1.4).unwrap().coefficients(2.0).unwrap();
        assert!((k.gamma - 0.4).abs() < 1e-15);
        assert_eq!(k.dgamma, 0.0);
        assert_eq!(k.h, 0.0);
    }

    #[test]
    fn stiffened_cold_term() {
        let eos = Eos::stiffened(7.15, 3.31e8).unwrap();
        for rho in [1.0, 1000.0, 5000.0] {
            let k = eos.coefficients(rho).unwrap();
            assert!(rel(k.h, -2.36665e9) < 1e-14);
            assert_eq!(k.dh, 0.0);
        }
    }

    #[test]
    fn polynomial_with_equal_b_has_constant_gamma() {
        let eos = water_poly();
        for rho in [200.0, 999.0, 1000.0, 1500.0] {
            let k = eos.coefficients(rho).unwrap();
            assert!((k.gamma - 0.28).abs() < 1e-15);
            assert_eq!(k.dgamma, 0.0);
        }
    }

    #[test]
    fn jwl_cold_term_at_reference_density() {
        let k = tnt().coefficients(1630.0).unwrap();
        let expected =
            3.712e11 * (1.0 - 0.30 / 4.15) * (-4.15f64).exp() + 3.23e9 * (1.0 - 0.30 / 0.95) * (-0.95f64).exp();
        assert!(rel(k.h, expected) < 1e-14);
    }

    #[test]
    fn nonpositive_density_is_rejected() {
        let eos = Eos::ideal(1.4).unwrap();
        assert!(matches!(
            eos.coefficients(0.0),
            Err(EosError::NonPositiveDensity { .. })
        ));
        assert!(matches!(
            eos.pressure(-1.0, 1.0),
            Err(EosError::NonPositiveDensity { .. })
        ));
    }

    #[test]
    fn ideal_pressure_and_energy() {
        let eos = Eos::ideal(1.4).unwrap();
        assert!((eos.pressure(1.0, 2.5).unwrap() - 1.0).abs() < 1e-15);
        assert!((eos.internal_energy(1.0, 1.0).unwrap() - 2.5).abs() < 1e-15);
    }

    #[test]
    fn stiffened_zero_pressure_crossing() {
        let eos = Eos::stiffened(7.15, 3.31e8).unwrap();
        let e = 7.15 * 3.31e8 / (6.15 * 1000.0);
        assert!(eos.pressure(1000.0, e).unwrap().abs() < 1e-6);
        let e = eos.internal_energy(1000.0, 1.0e5).unwrap();
        assert!(rel(e, (1.0e5 + 7.15 * 3.31e8) / (6.15 * 1000.0)) < 1e-14);
    }

    #[test]
    fn jwl_energy_pressure_round_trip() {
        let eos = tnt();
        let e = eos.internal_energy(1630.0, 9.5e9).unwrap();
        assert!(rel(eos.pressure(1630.0, e).unwrap(), 9.5e9) < 1e-14);
    }

    #[test]
    fn sound_speed_closed_forms() {
        let c = Eos::ideal(1.4).unwrap().sound_speed(1.0, 1.0).unwrap();
        assert!((c - 1.4f64.sqrt()).abs() < 1e-15);
        let c = Eos::stiffened(7.15, 3.31e8).unwrap().sound_speed(1000.0, 1e5).unwrap();
        let expected = (7.15 * (1e5 + 3.31e8) / 1000.0f64).sqrt();
        assert!(rel(c, expected) < 1e-14);
        assert!((c - 1538.62).abs() < 0.01);
    }

    #[test]
    fn hyperbolicity_loss_is_reported() {
        let eos = Eos::stiffened(7.15, 3.31e8).unwrap();
        let err = eos.sound_speed(1000.0, -4e8).unwrap_err();
        assert!(matches!(err, EosError::HyperbolicityLoss { .. }));
    }

    #[test]
    fn ideal_fundamental_derivative() {
        for (gamma, expected) in [(1.4, 1.2), (1.2, 1.1)] {
            let eos = Eos::ideal(gamma).unwrap();
            for (rho, p) in [(1.0, 1.0), (0.01, 3e5), (618.935, 6.314e12)] {
                let g = eos.fundamental_derivative(rho, p).unwrap();
                assert!((g - expected).abs() < 1e-13, "{g}");
            }
        }
    }

    #[test]
    fn validity_domains() {
        let d = Eos::ideal(1.4).unwrap().validity_domain();
        assert_eq!(d, DensityInterval::POSITIVE);
        let d = water_poly().validity_domain();
        assert!((d.lower - 0.28 * 1000.0 / 2.28).abs() < 1e-12);
        assert!((d.lower - 122.807).abs() < 1e-3);
        let d = tnt().validity_domain();
        let alpha = jwl_alpha(3.712e11, 3.23e9, 0.30, 4.15, 0.95);
        let sufficient = 4.15 * 1630.0 / (2.30 + alpha);
        assert!(
            rel(
                jwl_sufficient_bound(3.712e11, 3.23e9, 0.30, 4.15, 0.95, 1630.0),
                sufficient
            ) < 1e-15
        );
        assert!((sufficient - 2412.69).abs() < 0.01);
        assert!(d.upper >= sufficient);
        assert!((d.upper - 2914.36).abs() < 0.01, "{}", d.upper);
    }

    #[test]
    fn jwl_limit_is_where_cold_term_stops_being_convex() {
        for eos in [tnt(), shyue()] {
            let upper = eos.validity_domain().upper;
            let h2 = |rho: f64| eos.coefficients_unchecked(rho).d2h;
            assert!(h2(upper * (1.0 - 1e-9)) >= 0.0);
            assert!(h2(upper * (1.0 + 1e-6)) < 0.0);
            let n = 2000;
            for i in 0..=n {
                let rho = 0.05 * upper + (upper - 0.05 * upper) * i as f64 / n as f64;
                assert!(h2(rho) >= 0.0, "h'' < 0 at {rho}");
            }
        }
    }

    #[test]
    fn jwl_admissible_limit_is_where_cold_pressure_peaks() {
        for eos in [tnt(), shyue()] {
            let upper = eos.admissible_domain().upper;
            assert!(upper > eos.validity_domain().upper);
            let dh = |rho: f64| eos.coefficients_unchecked(rho).dh;
            assert!(dh(upper * (1.0 - 1e-9)) > 0.0);
            assert!(dh(upper * (1.0 + 1e-9)) < 0.0);
        }
        assert!((tnt().admissible_domain().upper - 9186.3).abs() < 10.0);
    }

    #[test]
    fn out_of_domain_density_is_rejected() {
        let eos = tnt();
        assert!(eos.pressure(eos.validity_domain().upper * 1.01, 1e6).is_ok());
        let upper = eos.admissible_domain().upper;
        assert!(matches!(
            eos.pressure(upper * 1.01, 1e6),
            Err(EosError::OutOfDomain { .. })
        ));
        assert!(matches!(
            water_poly().sound_speed(100.0, 1e5),
            Err(EosError::OutOfDomain { .. })
        ));
    }

    #[test]
    fn cochran_chan_parameter_ordering() {
        let bad = Eos::new(EosModel::CochranChan {
            a1: 8.192e8,
            a2: 1.508e9,
            omega: 1.19,
            r1: 2.0,
            r2: 1.42,
            rho0: 1134.0,
        });
        assert!(matches!(bad, Err(EosError::InvalidParameters { .. })));
    }

    #[test]
    fn polynomial_sound_speed_continuous_at_reference_density() {
        let eos = water_poly();
        for p in [1e5, 1e8, 5e9] {
            let below = eos.sound_speed(1000.0 * (1.0 - 1e-13), p).unwrap();
            let at = eos.sound_speed(1000.0, p).unwrap();
            assert!(rel(below, at) < 1e-10, "{below} {at}");
        }
    }

    #[test]
    fn serde_round_trip_keeps_tag() {
        let eos = tnt();
        let json = serde_json::to_string(&eos).unwrap();
        assert!(json.contains("\"kind\":\"jwl\""));
        let back: Eos = serde_json::from_str(&json).unwrap();
        assert_eq!(back, eos);
        let bad = r#"{"kind":"ideal","gamma":0.9}"#;
        assert!(serde_json::from_str::<Eos>(bad).is_err());
    }
}
