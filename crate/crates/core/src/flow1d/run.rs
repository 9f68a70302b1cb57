use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::problems::{GaugeRecord, ProblemSpec};
use crate::riemann::SolverOptions;

use super::{ConsState, FlowError, Fluid, Mesh1D};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunParams {
    pub cfl: f64,
    pub t_end: f64,
    /// Output times; `t_end` is always added.
    pub snapshots: Vec<f64>,
    pub gauges: Vec<f64>,
    pub riemann: SolverOptions,
    pub max_steps: usize,
}

impl RunParams {
    pub fn new(t_end: f64) -> Self {
        RunParams {
            cfl: 0.4,
            t_end,
            snapshots: Vec::new(),
            gauges: Vec::new(),
            riemann: SolverOptions::default(),
            max_steps: 10_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellKind {
    Minus,
    Plus,
    Cut,
}

impl CellKind {
    fn label(self) -> &'static str {
        match self {
            CellKind::Minus => "minus",
            CellKind::Plus => "plus",
            CellKind::Cut => "cut",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnapshotRow {
    pub x: f64,
    pub rho: f64,
    pub u: f64,
    pub p: f64,
    pub e: f64,
    pub fluid: CellKind,
}

/// Cell-centred primitive variables at one time. A cut cell is reported as
/// the volume average of its two sub-cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub t: f64,
    pub interface: Option<f64>,
    pub rows: Vec<SnapshotRow>,
}

impl Snapshot {
    pub fn of(mesh: &Mesh1D) -> Result<Self, FlowError> {
        let mut rows = Vec::with_capacity(mesh.cells());
        for i in 0..mesh.cells() {
            let x = mesh.center(i);
            let m = mesh.primitive(Fluid::Minus, i)?;
            let p = mesh.primitive(Fluid::Plus, i)?;
            let row = match (m, p) {
                (Some(s), None) | (None, Some(s)) => {
                    let fluid = if m.is_some() { Fluid::Minus } else { Fluid::Plus };
                    let e = mesh.state(fluid, i).expect("occupied").internal_energy();
                    SnapshotRow {
                        x,
                        rho: s.rho,
                        u: s.u,
                        p: s.p,
                        e,
                        fluid: if m.is_some() { CellKind::Minus } else { CellKind::Plus },
                    }
                }
                (Some(sm), Some(sp)) => {
                    let vm = mesh.sub_volume(Fluid::Minus, i);
                    let vp = mesh.sub_volume(Fluid::Plus, i);
                    let v = vm + vp;
                    let q = mesh.state(Fluid::Minus, i).expect("occupied") * vm
                        + mesh.state(Fluid::Plus, i).expect("occupied") * vp;
                    SnapshotRow {
                        x,
                        rho: q.mass / v,
                        u: q.momentum / q.mass,
                        p: (vm * sm.p + vp * sp.p) / v,
                        e: (q.energy - 0.5 * q.momentum * q.momentum / q.mass) / q.mass,
                        fluid: CellKind::Cut,
                    }
                }
                (None, None) => return Err(FlowError::Config(format!("cell {i} holds no fluid"))),
            };
            rows.push(row);
        }
        Ok(Snapshot {
            t: mesh.time(),
            interface: mesh.interface(),
            rows,
        })
    }

    /// CSV with header `x,rho,u,p,e,fluid`, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "x,rho,u,p,e,fluid")?;
        for r in &self.rows {
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}",
                r.x,
                r.rho,
                r.u,
                r.p,
                r.e,
                r.fluid.label()
            )?;
        }
        Ok(())
    }
}

/// Volume integrals of the conserved variables per fluid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Totals {
    pub minus: ConsState,
    pub plus: ConsState,
    /// `Σ V ρ (|u| + c)`, the scale for momentum drift.
    pub momentum_scale: f64,
    /// `Σ V |E|`.
    pub energy_scale: f64,
}

impl Totals {
    pub fn of(mesh: &Mesh1D) -> Result<Self, FlowError> {
        let mut t = Totals {
            minus: ConsState::ZERO,
            plus: ConsState::ZERO,
            momentum_scale: 0.0,
            energy_scale: 0.0,
        };
        for fluid in [Fluid::Minus, Fluid::Plus] {
            let prim = mesh.primitives(fluid)?;
            for (i, p) in prim.iter().enumerate() {
                let Some(p) = p else { continue };
                let v = mesh.sub_volume(fluid, i);
                match fluid {
                    Fluid::Minus => t.minus += p.u * v,
                    Fluid::Plus => t.plus += p.u * v,
                }
                t.momentum_scale += v * p.s.rho * (p.s.u.abs() + p.c);
                t.energy_scale += v * p.u.energy.abs();
            }
        }
        Ok(t)
    }
}

/// Relative drifts after accounting for boundary fluxes and sources.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConservationAudit {
    pub mass_minus: f64,
    pub mass_plus: f64,
    pub momentum: f64,
    pub energy: f64,
    /// `|x_I - x_I(0) - Σ u* Δt|` relative to the cell size.
    pub interface: f64,
}

impl ConservationAudit {
    pub fn compute(mesh: &Mesh1D, initial: &Totals, x0: Option<f64>) -> Result<Self, FlowError> {
        let now = Totals::of(mesh)?;
        let rel = |now: f64, before: f64, inflow: f64, scale: f64| {
            if scale > 0.0 {
                (now - before - inflow).abs() / scale
            } else {
                (now - before - inflow).abs()
            }
        };
        let in_m = mesh.boundary_inflow(Fluid::Minus);
        let in_p = mesh.boundary_inflow(Fluid::Plus);
        let src = mesh.source_total();
        let total_now = now.minus + now.plus;
        let total_before = initial.minus + initial.plus;
        let inflow = in_m + in_p + src;
        let interface = match (x0, mesh.interface()) {
            (Some(a), Some(b)) => (b - a - mesh.interface_travel()).abs() / mesh.dx(),
            _ => 0.0,
        };
        Ok(ConservationAudit {
            mass_minus: rel(now.minus.mass, initial.minus.mass, in_m.mass, initial.minus.mass),
            mass_plus: rel(now.plus.mass, initial.plus.mass, in_p.mass, initial.plus.mass),
            momentum: rel(
                total_now.momentum,
                total_before.momentum,
                inflow.momentum,
                initial.momentum_scale,
            ),
            energy: rel(
                total_now.energy,
                total_before.energy,
                inflow.energy,
                initial.energy_scale,
            ),
            interface,
        })
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub snapshots: Vec<Snapshot>,
    pub gauges: Vec<GaugeRecord>,
    pub audit: ConservationAudit,
    pub mesh: Mesh1D,
}

/// Runs `problem` on `cells` cells until `params.t_end`, clipping steps to
/// land exactly on snapshot times and `t_end`.
pub fn run_simulation(problem: &ProblemSpec, cells: usize, params: &RunParams) -> Result<RunOutput, FlowError> {
    let mesh = problem.build_mesh(cells)?.with_solver_options(params.riemann);
    run_mesh(mesh, params)
}

/// Time loop on an already built mesh. `params.riemann` is not applied here;
/// set it with [`Mesh1D::with_solver_options`].
pub fn run_mesh(mut mesh: Mesh1D, params: &RunParams) -> Result<RunOutput, FlowError> {
    if !(params.cfl > 0.0 && params.cfl <= 1.0) {
        return Err(FlowError::Config(format!("cfl must lie in (0, 1], got {}", params.cfl)));
    }
    if !(params.t_end >= 0.0) {
        return Err(FlowError::Config(format!(
            "t_end must be non-negative, got {}",
            params.t_end
        )));
    }
    let mut targets: Vec<f64> = params
        .snapshots
        .iter()
        .copied()
        .filter(|&t| t >= 0.0 && t < params.t_end)
        .chain(std::iter::once(params.t_end))
        .collect();
    targets.sort_by(f64::total_cmp);
    targets.dedup();

    let initial = Totals::of(&mesh)?;
    let x0 = mesh.interface();
    let mut gauges: Vec<GaugeRecord> = params.gauges.iter().map(|&r| GaugeRecord::new(r)).collect();
    let record = |mesh: &Mesh1D, gauges: &mut Vec<GaugeRecord>| -> Result<(), FlowError> {
        for g in gauges.iter_mut() {
            g.push(mesh.time(), mesh.pressure_at(g.position)?);
        }
        Ok(())
    };
    record(&mesh, &mut gauges)?;
    let mut snapshots = Vec::new();
    let mut next = 0;
    while next < targets.len() && targets[next] <= mesh.time() {
        snapshots.push(Snapshot::of(&mesh)?);
        next += 1;
    }
    while next < targets.len() {
        if mesh.steps() >= params.max_steps {
            return Err(FlowError::Config(format!(
                "step limit {} reached at t = {} s",
                params.max_steps,
                mesh.time()
            )));
        }
        let target = targets[next];
        let mut dt = mesh.cfl_time_step(params.cfl)?;
        let hit = mesh.time() + dt >= target;
        if hit {
            dt = target - mesh.time();
        }
        mesh.advance_step(dt)?;
        if hit {
            mesh.set_time(target);
        }
        record(&mesh, &mut gauges)?;
        while next < targets.len() && targets[next] <= mesh.time() {
            snapshots.push(Snapshot::of(&mesh)?);
            next += 1;
        }
    }
    let audit = ConservationAudit::compute(&mesh, &initial, x0)?;
    Ok(RunOutput {
        snapshots,
        gauges,
        audit,
        mesh,
    })
}
