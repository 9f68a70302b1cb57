//! One-dimensional two-medium cut-cell finite-volume scheme.
//!
//! Each fluid is updated with a local Lax-Friedrichs flux on the faces it
//! owns. The interface between the fluids is tracked as a point and the two
//! media only interact through the interface flux `Δt A [0, p*, p* u*]`
//! obtained from the exact two-medium Riemann solver. The cell holding the
//! interface carries a sub-cell state for each fluid.
//!
//! Spherical symmetry uses the `r²`-weighted conservation law with the
//! geometric source `(0, 2 r p, 0)`.

mod mesh;
mod run;

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eos::{Eos, EosError};
use crate::riemann::{FluidState, RiemannError, StarState};

pub use mesh::{Mesh1D, StepInfo};
pub use run::{
    run_mesh, run_simulation, CellKind, ConservationAudit, RunOutput, RunParams, Snapshot, SnapshotRow, Totals,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    Planar,
    Spherical,
}

impl Geometry {
    /// Measure of `[a, b]`: length, or `∫ r² dr` in spherical symmetry.
    pub fn volume(self, a: f64, b: f64) -> f64 {
        match self {
            Geometry::Planar => b - a,
            Geometry::Spherical => (b * b * b - a * a * a) / 3.0,
        }
    }

    /// Face weight at coordinate `x`.
    pub fn area(self, x: f64) -> f64 {
        match self {
            Geometry::Planar => 1.0,
            Geometry::Spherical => x * x,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// Mirror ghost with negated velocity.
    Reflective,
    /// Zero-gradient ghost.
    Outflow,
}

/// Which side of the interface a sub-cell belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fluid {
    Minus,
    Plus,
}

/// Conserved variables `(ρ, ρu, E)`. Also used for flux and source triples.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ConsState {
    pub mass: f64,
    pub momentum: f64,
    pub energy: f64,
}

impl ConsState {
    pub const ZERO: ConsState = ConsState {
        mass: 0.0,
        momentum: 0.0,
        energy: 0.0,
    };

    pub fn new(mass: f64, momentum: f64, energy: f64) -> Self {
        ConsState { mass, momentum, energy }
    }

    pub fn from_primitive(eos: &Eos, s: &FluidState) -> Result<Self, EosError> {
        let e = eos.internal_energy(s.rho, s.p)?;
        Ok(ConsState {
            mass: s.rho,
            momentum: s.rho * s.u,
            energy: s.rho * e + 0.5 * s.rho * s.u * s.u,
        })
    }

    /// Primitive state and sound speed.
    pub fn to_primitive(&self, eos: &Eos) -> Result<(FluidState, f64), EosError> {
        let rho = self.mass;
        if !(rho > 0.0) {
            return Err(EosError::NonPositiveDensity { rho });
        }
        let u = self.momentum / rho;
        let e = (self.energy - 0.5 * self.momentum * u) / rho;
        let p = eos.pressure(rho, e)?;
        let c = eos.sound_speed(rho, p)?;
        Ok((FluidState { rho, u, p }, c))
    }

    /// Specific internal energy.
    pub fn internal_energy(&self) -> f64 {
        (self.energy - 0.5 * self.momentum * self.momentum / self.mass) / self.mass
    }
}

impl Add for ConsState {
    type Output = ConsState;
    fn add(self, o: ConsState) -> ConsState {
        ConsState::new(self.mass + o.mass, self.momentum + o.momentum, self.energy + o.energy)
    }
}

impl Sub for ConsState {
    type Output = ConsState;
    fn sub(self, o: ConsState) -> ConsState {
        ConsState::new(self.mass - o.mass, self.momentum - o.momentum, self.energy - o.energy)
    }
}

impl Neg for ConsState {
    type Output = ConsState;
    fn neg(self) -> ConsState {
        ConsState::new(-self.mass, -self.momentum, -self.energy)
    }
}

impl Mul<f64> for ConsState {
    type Output = ConsState;
    fn mul(self, k: f64) -> ConsState {
        ConsState::new(self.mass * k, self.momentum * k, self.energy * k)
    }
}

impl AddAssign for ConsState {
    fn add_assign(&mut self, o: ConsState) {
        *self = *self + o;
    }
}

impl SubAssign for ConsState {
    fn sub_assign(&mut self, o: ConsState) {
        *self = *self - o;
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error("invalid {fluid:?} state in cell {cell} at t = {time} s: {source}")]
    InvalidState {
        cell: usize,
        fluid: Fluid,
        time: f64,
        source: EosError,
    },
    #[error(
        "interface Riemann problem failed at t = {time} s in cell {cell} (left {left:?}, right {right:?}): {source}"
    )]
    Riemann {
        time: f64,
        cell: usize,
        left: FluidState,
        right: FluidState,
        source: RiemannError,
    },
    #[error("interface jumped from cell {from} to cell {to} in one step; reduce the CFL number")]
    InterfaceJump { from: usize, to: usize },
    #[error("interface left the domain (x = {x} m)")]
    InterfaceLeftDomain { x: f64 },
    #[error("{fluid:?} fluid has no cells left")]
    FluidVanished { fluid: Fluid },
    #[error("invalid configuration: {0}")]
    Config(String),
}

// Primitive state plus sound speed of an occupied sub-cell.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Prim {
    pub(crate) s: FluidState,
    pub(crate) c: f64,
    pub(crate) u: ConsState,
}

impl Prim {
    fn flux(&self) -> ConsState {
        let s = &self.s;
        ConsState::new(
            self.u.momentum,
            self.u.momentum * s.u + s.p,
            (self.u.energy + s.p) * s.u,
        )
    }

    fn ghost(&self, bc: Boundary) -> Prim {
        match bc {
            Boundary::Outflow => *self,
            Boundary::Reflective => Prim {
                s: FluidState { u: -self.s.u, ..self.s },
                c: self.c,
                u: ConsState {
                    momentum: -self.u.momentum,
                    ..self.u
                },
            },
        }
    }
}

// LLF flux with normal +1 from `l` to `r`.
pub(crate) fn llf(l: &Prim, r: &Prim) -> ConsState {
    let lambda = (l.s.u.abs() + l.c).max(r.s.u.abs() + r.c);
    (l.flux() + r.flux()) * 0.5 - (r.u - l.u) * (0.5 * lambda)
}

/// Local Lax-Friedrichs flux `½(F(U_l) + F(U_r))·n - ½λ(U_r - U_l)` with
/// `λ = max(|u| + c)` over the two states.
pub fn llf_flux(eos: &Eos, left: &ConsState, right: &ConsState, normal: f64) -> Result<ConsState, EosError> {
    let prim = |u: &ConsState| -> Result<Prim, EosError> {
        let (s, c) = u.to_primitive(eos)?;
        Ok(Prim { s, c, u: *u })
    };
    let l = prim(left)?;
    let r = prim(right)?;
    let lambda = (l.s.u.abs() + l.c).max(r.s.u.abs() + r.c);
    Ok((l.flux() + r.flux()) * (0.5 * normal) - (r.u - l.u) * (0.5 * lambda))
}

/// `Δt A [0, p* n, p* u* n]`: what crosses the interface from the side whose
/// outward normal is `n`.
pub fn interface_flux(star: &StarState, normal: f64, area: f64, dt: f64) -> ConsState {
    let k = dt * area * normal;
    ConsState::new(0.0, k * star.p_star, k * star.p_star * star.u_star)
}

/// Explicit-Euler geometric source integrated over `[a, b]` in the
/// `r²`-weighted formulation: `Δt (0, p (b² - a²), 0)`, i.e. `2 r̄ p` times
/// the sub-cell length with `r̄` the midpoint radius.
pub fn geometric_source(geometry: Geometry, a: f64, b: f64, p: f64, dt: f64) -> ConsState {
    match geometry {
        Geometry::Planar => ConsState::ZERO,
        Geometry::Spherical => ConsState::new(0.0, dt * 2.0 * (0.5 * (a + b)) * p * (b - a), 0.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::riemann::{WaveSpeeds, WaveType};

    fn star(p: f64, u: f64) -> StarState {
        let w = WaveSpeeds { head: 0.0, tail: 0.0 };
        StarState {
            p_star: p,
            u_star: u,
            rho_star_l: 1.0,
            rho_star_r: 1.0,
            wave_l: WaveType::Shock,
            wave_r: WaveType::Shock,
            speeds_l: w,
            speeds_r: w,
            iterations: 0,
            residual: 0.0,
            rel_change: 0.0,
        }
    }

    #[test]
    fn interface_flux_components() {
        let f = interface_flux(&star(1e5, 10.0), 1.0, 1.0, 1e-3);
        assert_eq!(f, ConsState::new(0.0, 100.0, 1000.0));
        let g = interface_flux(&star(1e5, 10.0), -1.0, 1.0, 1e-3);
        assert_eq!(f + g, ConsState::ZERO);
        let s = interface_flux(&star(2.0, 0.0), 1.0, 4.0, 0.5);
        assert_eq!(s, ConsState::new(0.0, 4.0, 0.0));
    }

    #[test]
    fn llf_consistency_and_antisymmetry() {
        let eos = Eos::ideal(1.4).unwrap();
        let u = ConsState::from_primitive(&eos, &FluidState::new(1.0, 0.3, 1.0)).unwrap();
        let f = llf_flux(&eos, &u, &u, 1.0).unwrap();
        let exact = ConsState::new(0.3, 0.09 + 1.0, (u.energy + 1.0) * 0.3);
        assert!((f - exact).mass.abs() < 1e-15 && (f - exact).momentum.abs() < 1e-15);
        assert!((f - exact).energy.abs() < 1e-15);
        let v = ConsState::from_primitive(&eos, &FluidState::new(0.125, 0.0, 0.1)).unwrap();
        let a = llf_flux(&eos, &u, &v, 1.0).unwrap();
        let b = llf_flux(&eos, &v, &u, -1.0).unwrap();
        assert_eq!(a, -b);
    }

    #[test]
    fn sod_interface_llf_by_hand() {
        let eos = Eos::ideal(1.4).unwrap();
        let l = ConsState::from_primitive(&eos, &FluidState::new(1.0, 0.0, 1.0)).unwrap();
        let r = ConsState::from_primitive(&eos, &FluidState::new(0.125, 0.0, 0.1)).unwrap();
        let f = llf_flux(&eos, &l, &r, 1.0).unwrap();
        let lambda = 1.4f64.sqrt();
        assert!((f.mass - 0.5 * lambda * (1.0 - 0.125)).abs() < 1e-15);
        assert!((f.momentum - 0.55).abs() < 1e-15);
        assert!((f.energy - 0.5 * lambda * (2.5 - 0.25)).abs() < 1e-15);
    }

    #[test]
    fn geometric_source_vanishes_where_expected() {
        assert_eq!(geometric_source(Geometry::Planar, 1.0, 2.0, 5.0, 1.0), ConsState::ZERO);
        assert_eq!(geometric_source(Geometry::Spherical, 1.0, 2.0, 0.0, 1.0).momentum, 0.0);
        let s = geometric_source(Geometry::Spherical, 1.0, 2.0, 3.0, 0.5);
        assert!((s.momentum - 0.5 * 3.0 * (4.0 - 1.0)).abs() < 1e-15);
    }
}
