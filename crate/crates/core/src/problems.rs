//! Benchmark set-ups and blast-wave diagnostics.
//!
//! Problems are plain data ([`ProblemSpec`]) and round-trip through JSON, so a
//! built-in case can be exported, edited and fed back to the CLI.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eos::{Eos, EosError, EosModel};
use crate::flow1d::{run_simulation, Boundary, FlowError, Geometry, Mesh1D, RunParams, Snapshot};
use crate::riemann::{check_vacuum, solve_star, FluidState, RiemannError, SolverOptions, StarState};

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("unknown problem `{0}` (known: {known})", known = BUILTIN_NAMES.join(", "))]
    Unknown(String),
    #[error("invalid problem: {0}")]
    Invalid(String),
    #[error(transparent)]
    Eos(#[from] EosError),
    #[error(transparent)]
    Riemann(#[from] RiemannError),
    #[error("malformed problem file: {0}")]
    Json(#[from] serde_json::Error),
}

/// A material and its initial state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Material {
    pub eos: Eos,
    pub state: FluidState,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub name: String,
    pub geometry: Geometry,
    /// `[x0, x1]` in metres (radius for spherical problems).
    pub domain: [f64; 2],
    pub interface: f64,
    /// Material on the low-coordinate side (inner for spherical problems).
    pub left: Material,
    pub right: Material,
    pub t_end: f64,
    pub p_ambient: f64,
    pub bc_left: Boundary,
    pub bc_right: Boundary,
    #[serde(default)]
    pub gauges: Vec<f64>,
    #[serde(default = "default_cells")]
    pub cells: usize,
}

fn default_cells() -> usize {
    400
}

pub const BUILTIN_NAMES: [&str; 8] = [
    "sod",
    "shyue",
    "saurel",
    "gas_water_sg",
    "gas_water_poly",
    "jwl_poly",
    "air_blast",
    "udex",
];

/// The planar two-medium Riemann problems among the built-ins.
pub const SHOCK_TUBES: [&str; 5] = ["shyue", "saurel", "gas_water_sg", "gas_water_poly", "jwl_poly"];

fn eos(model: EosModel) -> Eos {
    Eos::new(model).expect("built-in parameters are valid")
}

pub fn shyue_jwl() -> Eos {
    eos(EosModel::Jwl {
        a1: 8.545e11,
        a2: 2.05e10,
        omega: 0.25,
        r1: 4.6,
        r2: 1.35,
        rho0: 1840.0,
    })
}

pub fn nitromethane() -> Eos {
    eos(EosModel::CochranChan {
        a1: 8.192e8,
        a2: 1.508e9,
        omega: 1.19,
        r1: 4.53,
        r2: 1.42,
        rho0: 1134.0,
    })
}

pub fn water_stiffened() -> Eos {
    eos(EosModel::Stiffened {
        gamma: 7.15,
        p_inf: 3.31e8,
    })
}

pub fn water_polynomial() -> Eos {
    eos(EosModel::Polynomial {
        a1: 2.2e9,
        a2: 9.54e9,
        a3: 1.45e10,
        b0: 0.28,
        b1: 0.28,
        t1: 2.2e9,
        t2: 0.0,
        rho0: 1000.0,
    })
}

pub fn tnt_jwl() -> Eos {
    eos(EosModel::Jwl {
        a1: 3.712e11,
        a2: 3.23e9,
        omega: 0.3,
        r1: 4.15,
        r2: 0.95,
        rho0: 1630.0,
    })
}

fn tube(name: &str, left: Material, right: Material, t_end: f64, p_ambient: f64, gauges: Vec<f64>) -> ProblemSpec {
    ProblemSpec {
        name: name.to_string(),
        geometry: Geometry::Planar,
        domain: [0.0, 1.0],
        interface: 0.5,
        left,
        right,
        t_end,
        p_ambient,
        bc_left: Boundary::Outflow,
        bc_right: Boundary::Outflow,
        gauges,
        cells: 400,
    }
}

fn mat(eos: Eos, rho: f64, u: f64, p: f64) -> Material {
    Material {
        eos,
        state: FluidState::new(rho, u, p),
    }
}

pub fn builtin_problem(name: &str) -> Result<ProblemSpec, ProblemError> {
    let ideal = |g: f64| eos(EosModel::Ideal { gamma: g });
    let spec = match name {
        "sod" => tube(
            "sod",
            mat(ideal(1.4), 1.0, 0.0, 1.0),
            mat(ideal(1.4), 0.125, 0.0, 0.1),
            0.2,
            0.1,
            vec![],
        ),
        "shyue" => tube(
            "shyue",
            mat(shyue_jwl(), 1700.0, 0.0, 1e12),
            mat(shyue_jwl(), 1000.0, 0.0, 5e10),
            1.2e-5,
            5e10,
            vec![],
        ),
        "saurel" => tube(
            "saurel",
            mat(nitromethane(), 1134.0, 1000.0, 2e10),
            mat(nitromethane(), 500.0, 1000.0, 2e10),
            4e-5,
            2e10,
            vec![],
        ),
        "gas_water_sg" => tube(
            "gas_water_sg",
            mat(ideal(2.0), 1630.0, 0.0, 7e9),
            mat(water_stiffened(), 1000.0, 0.0, 1e5),
            8e-5,
            1e5,
            vec![0.6, 0.7, 0.8],
        ),
        "gas_water_poly" => tube(
            "gas_water_poly",
            mat(ideal(2.0), 1630.0, 0.0, 7e9),
            mat(water_polynomial(), 1000.0, 0.0, 1e5),
            8e-5,
            1e5,
            vec![0.6, 0.7, 0.8],
        ),
        "jwl_poly" => tube(
            "jwl_poly",
            mat(tnt_jwl(), 1630.0, 0.0, 8.3e9),
            mat(water_polynomial(), 1000.0, 0.0, 1e5),
            8e-5,
            1e5,
            vec![0.6, 0.7, 0.8],
        ),
        "air_blast" => ProblemSpec {
            name: "air_blast".into(),
            geometry: Geometry::Spherical,
            domain: [0.0, 5000.0],
            interface: 0.3,
            left: mat(ideal(1.2), 618.935, 0.0, 6.314e12),
            right: mat(ideal(1.4), 1.29, 0.0, 1.013e5),
            t_end: 2.0,
            p_ambient: 1.013e5,
            bc_left: Boundary::Reflective,
            bc_right: Boundary::Outflow,
            gauges: vec![100.0, 200.0, 300.0, 400.0, 500.0, 600.0, 800.0],
            cells: 4000,
        },
        "udex" => ProblemSpec {
            name: "udex".into(),
            geometry: Geometry::Spherical,
            domain: [0.0, 15.0],
            interface: 0.245,
            left: mat(tnt_jwl(), 1630.0, 0.0, 9.5e9),
            right: mat(water_polynomial(), 1000.0, 0.0, 1e5),
            t_end: 4e-3,
            p_ambient: 1e5,
            bc_left: Boundary::Reflective,
            bc_right: Boundary::Outflow,
            gauges: vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0],
            cells: 4000,
        },
        other => return Err(ProblemError::Unknown(other.to_string())),
    };
    Ok(spec)
}

impl ProblemSpec {
    pub fn from_json(text: &str) -> Result<Self, ProblemError> {
        let spec: ProblemSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem specs serialize")
    }

    /// States valid for their EOS, interface strictly inside the domain and
    /// no vacuum in the initial Riemann problem.
    pub fn validate(&self) -> Result<(), ProblemError> {
        let [x0, x1] = self.domain;
        if !(x1 > x0) {
            return Err(ProblemError::Invalid(format!("empty domain [{x0}, {x1}]")));
        }
        if !(self.interface > x0 && self.interface < x1) {
            return Err(ProblemError::Invalid(format!(
                "interface {} outside the domain [{x0}, {x1}]",
                self.interface
            )));
        }
        if self.geometry == Geometry::Spherical && x0 < 0.0 {
            return Err(ProblemError::Invalid("spherical domain must start at r >= 0".into()));
        }
        if !(self.t_end >= 0.0) {
            return Err(ProblemError::Invalid(format!("negative t_end {}", self.t_end)));
        }
        if self.cells < 3 {
            return Err(ProblemError::Invalid(format!(
                "need at least 3 cells, got {}",
                self.cells
            )));
        }
        for m in [&self.left, &self.right] {
            m.state.validate(&m.eos)?;
        }
        let v = check_vacuum(&self.left.eos, &self.left.state, &self.right.eos, &self.right.state)?;
        if v.margin <= 0.0 {
            return Err(RiemannError::Vacuum { margin: v.margin }.into());
        }
        Ok(())
    }

    pub fn star_state(&self, opts: &SolverOptions) -> Result<StarState, RiemannError> {
        solve_star(
            &self.left.eos,
            &self.left.state,
            &self.right.eos,
            &self.right.state,
            opts,
        )
    }

    pub fn build_mesh(&self, cells: usize) -> Result<Mesh1D, FlowError> {
        Mesh1D::two_medium(
            self.geometry,
            (self.domain[0], self.domain[1]),
            cells,
            self.interface,
            (self.left.eos, self.left.state),
            (self.right.eos, self.right.state),
            (self.bc_left, self.bc_right),
        )
    }
}

/// Pressure history at a fixed position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaugeRecord {
    pub position: f64,
    /// `(t, p)` pairs, strictly increasing in `t`.
    pub samples: Vec<(f64, f64)>,
}

impl GaugeRecord {
    pub fn new(position: f64) -> Self {
        GaugeRecord {
            position,
            samples: Vec::new(),
        }
    }

    /// Appends a sample; a time not after the last one replaces it.
    pub fn push(&mut self, t: f64, p: f64) {
        match self.samples.last_mut() {
            Some(last) if t <= last.0 => *last = (last.0, p),
            _ => self.samples.push((t, p)),
        }
    }

    /// CSV with header `t,p`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "t,p")?;
        for (t, p) in &self.samples {
            writeln!(w, "{t:.16e},{p:.16e}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImpulseWindow {
    /// Whole record.
    FullRecord,
    /// From arrival until the overpressure first returns to zero.
    PositivePhase,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShockMetrics {
    pub peak_overpressure: f64,
    pub impulse: f64,
    pub arrival_time: Option<f64>,
}

/// Relative overpressure that marks shock arrival.
pub const ARRIVAL_THRESHOLD: f64 = 1e-3;

/// Peak overpressure, impulse (trapezoidal integral of the positive
/// overpressure) and first time `p > p_ambient (1 + δ)`.
pub fn shock_metrics(record: &GaugeRecord, p_ambient: f64, window: ImpulseWindow) -> ShockMetrics {
    let s = &record.samples;
    let peak = s.iter().map(|&(_, p)| p).fold(f64::NEG_INFINITY, f64::max) - p_ambient;
    let arrival_idx = s.iter().position(|&(_, p)| p > p_ambient * (1.0 + ARRIVAL_THRESHOLD));
    let over = |p: f64| (p - p_ambient).max(0.0);
    let (start, end) = match window {
        ImpulseWindow::FullRecord => (0, s.len()),
        ImpulseWindow::PositivePhase => match arrival_idx {
            None => (0, 0),
            Some(a) => {
                let stop = s[a..]
                    .iter()
                    .position(|&(_, p)| p <= p_ambient)
                    .map_or(s.len(), |k| a + k + 1);
                (a.saturating_sub(1), stop)
            }
        },
    };
    let impulse = s[start..end]
        .windows(2)
        .map(|w| 0.5 * (over(w[0].1) + over(w[1].1)) * (w[1].0 - w[0].0))
        .fold(0.0, |a, b| a + b);
    ShockMetrics {
        peak_overpressure: if s.is_empty() { 0.0 } else { peak },
        impulse,
        arrival_time: arrival_idx.map(|i| s[i].0),
    }
}

/// Fine-mesh run of a planar problem used as a comparison reference.
pub fn reference_profile(problem: &ProblemSpec, cells: usize) -> Result<Snapshot, FlowError> {
    if problem.geometry != Geometry::Planar {
        return Err(FlowError::Config("reference profiles are for planar problems".into()));
    }
    let out = run_simulation(problem, cells, &RunParams::new(problem.t_end))?;
    Ok(out.snapshots.into_iter().last().expect("t_end snapshot"))
}
