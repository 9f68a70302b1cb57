use crate::eos::Eos;
use crate::riemann::{solve_star, FluidState, SolverOptions, StarState};

use super::{geometric_source, interface_flux, llf, Boundary, ConsState, FlowError, Fluid, Geometry, Prim};

/// Uniform 1D mesh holding up to two fluids separated by a tracked interface.
///
/// Cells strictly left of the interface hold the minus fluid, cells strictly
/// right hold the plus fluid and the cell containing the interface holds a
/// sub-cell of each. When the interface sits exactly on a node the minus
/// sub-cell of that cell is empty.
#[derive(Debug, Clone)]
pub struct Mesh1D {
    geometry: Geometry,
    nodes: Vec<f64>,
    dx: f64,
    minus: Vec<Option<ConsState>>,
    plus: Vec<Option<ConsState>>,
    interface: Option<f64>,
    eos_minus: Eos,
    eos_plus: Eos,
    bc_left: Boundary,
    bc_right: Boundary,
    time: f64,
    theta: f64,
    riemann: SolverOptions,
    boundary_inflow: [ConsState; 2],
    source_total: ConsState,
    interface_travel: f64,
    steps: usize,
}

/// What one call of [`Mesh1D::advance_step`] did.
#[derive(Debug, Clone)]
pub struct StepInfo {
    pub dt: f64,
    pub star: Option<StarState>,
}

fn slot(fluid: Fluid) -> usize {
    match fluid {
        Fluid::Minus => 0,
        Fluid::Plus => 1,
    }
}

impl Mesh1D {
    fn empty(
        geometry: Geometry,
        (x0, x1): (f64, f64),
        cells: usize,
        eos_minus: Eos,
        eos_plus: Eos,
        (bc_left, bc_right): (Boundary, Boundary),
    ) -> Result<Self, FlowError> {
        if cells < 3 {
            return Err(FlowError::Config(format!("need at least 3 cells, got {cells}")));
        }
        if !(x1 > x0) {
            return Err(FlowError::Config(format!("empty domain [{x0}, {x1}]")));
        }
        if geometry == Geometry::Spherical && x0 < 0.0 {
            return Err(FlowError::Config("spherical domain must start at r >= 0".into()));
        }
        let dx = (x1 - x0) / cells as f64;
        let mut nodes: Vec<f64> = (0..=cells).map(|i| x0 + i as f64 * dx).collect();
        nodes[cells] = x1;
        Ok(Mesh1D {
            geometry,
            nodes,
            dx,
            minus: vec![None; cells],
            plus: vec![None; cells],
            interface: None,
            eos_minus,
            eos_plus,
            bc_left,
            bc_right,
            time: 0.0,
            theta: 0.5,
            riemann: SolverOptions::default(),
            boundary_inflow: [ConsState::ZERO; 2],
            source_total: ConsState::ZERO,
            interface_travel: 0.0,
            steps: 0,
        })
    }

    /// Single medium without an interface; `init` gives the primitive state
    /// at each cell centre. This is the plain LLF finite-volume method.
    pub fn single_medium(
        geometry: Geometry,
        domain: (f64, f64),
        cells: usize,
        eos: Eos,
        init: impl Fn(f64) -> FluidState,
        bcs: (Boundary, Boundary),
    ) -> Result<Self, FlowError> {
        let mut mesh = Mesh1D::empty(geometry, domain, cells, eos, eos, bcs)?;
        for i in 0..cells {
            let s = init(mesh.center(i));
            mesh.minus[i] = Some(
                ConsState::from_primitive(&eos, &s).map_err(|source| FlowError::InvalidState {
                    cell: i,
                    fluid: Fluid::Minus,
                    time: 0.0,
                    source,
                })?,
            );
        }
        Ok(mesh)
    }

    /// Two constant states separated by an interface at `x_interface`.
    #[allow(clippy::too_many_arguments)]
    pub fn two_medium(
        geometry: Geometry,
        domain: (f64, f64),
        cells: usize,
        x_interface: f64,
        (eos_minus, state_minus): (Eos, FluidState),
        (eos_plus, state_plus): (Eos, FluidState),
        bcs: (Boundary, Boundary),
    ) -> Result<Self, FlowError> {
        let mut mesh = Mesh1D::empty(geometry, domain, cells, eos_minus, eos_plus, bcs)?;
        if !(x_interface > domain.0 && x_interface < domain.1) {
            return Err(FlowError::InterfaceLeftDomain { x: x_interface });
        }
        mesh.interface = Some(x_interface);
        let um = ConsState::from_primitive(&eos_minus, &state_minus).map_err(|source| FlowError::InvalidState {
            cell: 0,
            fluid: Fluid::Minus,
            time: 0.0,
            source,
        })?;
        let up = ConsState::from_primitive(&eos_plus, &state_plus).map_err(|source| FlowError::InvalidState {
            cell: cells - 1,
            fluid: Fluid::Plus,
            time: 0.0,
            source,
        })?;
        for i in 0..cells {
            if mesh.extent(Fluid::Minus, i, mesh.interface).is_some() {
                mesh.minus[i] = Some(um);
            }
            if mesh.extent(Fluid::Plus, i, mesh.interface).is_some() {
                mesh.plus[i] = Some(up);
            }
        }
        Ok(mesh)
    }

    pub fn with_solver_options(mut self, opts: SolverOptions) -> Self {
        self.riemann = opts;
        self
    }

    /// Sub-cells shorter than `theta · Δx` are merged with a neighbour.
    pub fn with_merge_threshold(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn cells(&self) -> usize {
        self.minus.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn center(&self, i: usize) -> f64 {
        0.5 * (self.nodes[i] + self.nodes[i + 1])
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub(crate) fn set_time(&mut self, t: f64) {
        self.time = t;
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn interface(&self) -> Option<f64> {
        self.interface
    }

    /// Sum of `u* Δt` over all steps taken.
    pub fn interface_travel(&self) -> f64 {
        self.interface_travel
    }

    pub fn eos(&self, fluid: Fluid) -> &Eos {
        match fluid {
            Fluid::Minus => &self.eos_minus,
            Fluid::Plus => &self.eos_plus,
        }
    }

    pub fn state(&self, fluid: Fluid, i: usize) -> Option<ConsState> {
        match fluid {
            Fluid::Minus => self.minus[i],
            Fluid::Plus => self.plus[i],
        }
    }

    /// Cumulative `Δt A F` that entered through the outer boundaries.
    pub fn boundary_inflow(&self, fluid: Fluid) -> ConsState {
        self.boundary_inflow[slot(fluid)]
    }

    /// Cumulative geometric source (spherical only).
    pub fn source_total(&self) -> ConsState {
        self.source_total
    }

    /// Index of the cell `[x_i, x_{i+1})` containing `x`, clamped to the mesh.
    pub fn cell_of(&self, x: f64) -> usize {
        let n = self.cells();
        let guess = ((x - self.nodes[0]) / self.dx).floor();
        let mut i = if guess.is_finite() {
            guess.clamp(0.0, (n - 1) as f64) as usize
        } else {
            0
        };
        while i > 0 && self.nodes[i] > x {
            i -= 1;
        }
        while i + 1 < n && self.nodes[i + 1] <= x {
            i += 1;
        }
        i
    }

    /// Extent of the sub-cell of `fluid` in cell `i` for an interface at
    /// `x_interface`.
    pub fn extent(&self, fluid: Fluid, i: usize, x_interface: Option<f64>) -> Option<(f64, f64)> {
        let (a, b) = (self.nodes[i], self.nodes[i + 1]);
        match (x_interface, fluid) {
            (None, Fluid::Minus) => Some((a, b)),
            (None, Fluid::Plus) => None,
            (Some(x), Fluid::Minus) => {
                if b <= x {
                    Some((a, b))
                } else if a < x {
                    Some((a, x))
                } else {
                    None
                }
            }
            (Some(x), Fluid::Plus) => {
                if a >= x {
                    Some((a, b))
                } else if b > x {
                    Some((x, b))
                } else {
                    None
                }
            }
        }
    }

    /// Measure of the sub-cell of `fluid` in cell `i` (0 when empty).
    pub fn sub_volume(&self, fluid: Fluid, i: usize) -> f64 {
        self.extent(fluid, i, self.interface)
            .map_or(0.0, |(a, b)| self.geometry.volume(a, b))
    }

    fn sub_length(&self, fluid: Fluid, i: usize, x_interface: Option<f64>) -> f64 {
        self.extent(fluid, i, x_interface).map_or(0.0, |(a, b)| b - a)
    }

    // Volume over the larger face weight; equals the length in planar
    // geometry and shrinks to a third of it in the first spherical cell.
    // 2V/(A_a + A_b): keeps the diagonal LLF coefficient non-negative.
    fn effective_length(&self, a: f64, b: f64) -> f64 {
        let g = self.geometry;
        2.0 * g.volume(a, b) / (g.area(a) + g.area(b))
    }

    pub(crate) fn primitives(&self, fluid: Fluid) -> Result<Vec<Option<Prim>>, FlowError> {
        let states = match fluid {
            Fluid::Minus => &self.minus,
            Fluid::Plus => &self.plus,
        };
        let eos = self.eos(fluid);
        states
            .iter()
            .enumerate()
            .map(|(i, u)| match u {
                None => Ok(None),
                Some(u) => {
                    let (s, c) = u.to_primitive(eos).map_err(|source| FlowError::InvalidState {
                        cell: i,
                        fluid,
                        time: self.time,
                        source,
                    })?;
                    Ok(Some(Prim { s, c, u: *u }))
                }
            })
            .collect()
    }

    /// Primitive state of `fluid` in cell `i`.
    pub fn primitive(&self, fluid: Fluid, i: usize) -> Result<Option<FluidState>, FlowError> {
        match self.state(fluid, i) {
            None => Ok(None),
            Some(u) => {
                u.to_primitive(self.eos(fluid))
                    .map(|(s, _)| Some(s))
                    .map_err(|source| FlowError::InvalidState {
                        cell: i,
                        fluid,
                        time: self.time,
                        source,
                    })
            }
        }
    }

    /// Fluid found at coordinate `x`.
    pub fn fluid_at(&self, x: f64) -> Fluid {
        match self.interface {
            Some(xi) if x >= xi => Fluid::Plus,
            _ => Fluid::Minus,
        }
    }

    /// Pressure of the fluid occupying `x`.
    pub fn pressure_at(&self, x: f64) -> Result<f64, FlowError> {
        let i = self.cell_of(x);
        let fluid = self.fluid_at(x);
        let other = match fluid {
            Fluid::Minus => Fluid::Plus,
            Fluid::Plus => Fluid::Minus,
        };
        let s = match self.primitive(fluid, i)? {
            Some(s) => s,
            None => self.primitive(other, i)?.ok_or(FlowError::FluidVanished { fluid })?,
        };
        Ok(s.p)
    }

    fn interface_riemann(
        &self,
        prim_m: &[Option<Prim>],
        prim_p: &[Option<Prim>],
        x: f64,
    ) -> Result<(usize, usize, StarState), FlowError> {
        let k = self.cell_of(x);
        let lc = if prim_m[k].is_some() {
            k
        } else if k > 0 && prim_m[k - 1].is_some() {
            k - 1
        } else {
            return Err(FlowError::FluidVanished { fluid: Fluid::Minus });
        };
        let l = prim_m[lc].expect("checked above");
        let r = prim_p[k].ok_or(FlowError::FluidVanished { fluid: Fluid::Plus })?;
        let star = solve_star(&self.eos_minus, &l.s, &self.eos_plus, &r.s, &self.riemann).map_err(|source| {
            FlowError::Riemann {
                time: self.time,
                cell: k,
                left: l.s,
                right: r.s,
                source,
            }
        })?;
        Ok((lc, k, star))
    }

    /// `cfl · min Δx_eff / (|u| + c)` over occupied sub-cells, with the full
    /// cell used for cut sub-cells that can be merged with a neighbour, and
    /// the interface wave speeds included.
    pub fn cfl_time_step(&self, cfl: f64) -> Result<f64, FlowError> {
        let n = self.cells();
        let prim_m = self.primitives(Fluid::Minus)?;
        let prim_p = self.primitives(Fluid::Plus)?;
        let cut = self.interface.map(|x| self.cell_of(x));
        let mut dt = f64::INFINITY;
        for (fluid, prim) in [(Fluid::Minus, &prim_m), (Fluid::Plus, &prim_p)] {
            for (i, p) in prim.iter().enumerate() {
                let Some(p) = p else { continue };
                let (mut a, mut b) = (self.nodes[i], self.nodes[i + 1]);
                let lone = match fluid {
                    Fluid::Minus => i == 0,
                    Fluid::Plus => i + 1 == n,
                };
                if cut == Some(i) && lone {
                    (a, b) = self.extent(fluid, i, self.interface).expect("occupied");
                }
                dt = dt.min(self.effective_length(a, b) / (p.s.u.abs() + p.c));
            }
        }
        if let Some(x) = self.interface {
            let (_, k, star) = self.interface_riemann(&prim_m, &prim_p, x)?;
            let (lo, hi) = star.extreme_speeds();
            let len = self.effective_length(self.nodes[k], self.nodes[k + 1]);
            dt = dt.min(len / lo.abs().max(hi.abs()));
        }
        Ok(cfl * dt)
    }

    fn edge_fluxes(&mut self, fluid: Fluid, prim: &[Option<Prim>], dq: &mut [ConsState], dt: f64) {
        let n = self.cells();
        for j in 0..=n {
            let l = if j > 0 { prim[j - 1] } else { None };
            let r = if j < n { prim[j] } else { None };
            let w = dt * self.geometry.area(self.nodes[j]);
            match (l, r) {
                (Some(l), Some(r)) => {
                    let f = llf(&l, &r) * w;
                    dq[j - 1] -= f;
                    dq[j] += f;
                }
                (None, Some(r)) if j == 0 => {
                    let f = llf(&r.ghost(self.bc_left), &r) * w;
                    dq[0] += f;
                    self.boundary_inflow[slot(fluid)] += f;
                }
                (Some(l), None) if j == n => {
                    let f = llf(&l, &l.ghost(self.bc_right)) * w;
                    dq[n - 1] -= f;
                    self.boundary_inflow[slot(fluid)] -= f;
                }
                _ => {}
            }
        }
    }

    fn add_sources(&mut self, fluid: Fluid, prim: &[Option<Prim>], dq: &mut [ConsState], dt: f64) {
        if self.geometry != Geometry::Spherical {
            return;
        }
        for (i, p) in prim.iter().enumerate() {
            if let (Some(p), Some((a, b))) = (p, self.extent(fluid, i, self.interface)) {
                let s = geometric_source(self.geometry, a, b, p.s.p, dt);
                dq[i] += s;
                self.source_total += s;
            }
        }
    }

    fn update_fluid(
        &mut self,
        fluid: Fluid,
        prim: &[Option<Prim>],
        dq: &[ConsState],
        x_new: Option<f64>,
    ) -> Result<(), FlowError> {
        let n = self.cells();
        let g = self.geometry;
        let x_old = self.interface;
        let block = match (x_old, x_new) {
            (Some(xo), Some(xn)) => {
                let k = self.cell_of(xo);
                let kn = self.cell_of(xn);
                let (mut lo, mut hi) = (k.min(kn), k.max(kn));
                let small_len = self.theta * self.dx;
                let small =
                    self.sub_length(fluid, k, x_old) < small_len || self.sub_length(fluid, kn, x_new) < small_len;
                match fluid {
                    Fluid::Minus if small && lo > 0 => lo -= 1,
                    Fluid::Plus if small && hi + 1 < n => hi += 1,
                    _ => {}
                }
                Some((lo, hi))
            }
            _ => None,
        };
        let mut next: Vec<Option<ConsState>> = vec![None; n];
        for i in 0..n {
            if matches!(block, Some((lo, hi)) if i >= lo && i <= hi) {
                continue;
            }
            if let (Some(p), Some((a, b))) = (prim[i], self.extent(fluid, i, x_old)) {
                let v = g.volume(a, b);
                next[i] = Some(p.u + dq[i] * (1.0 / v));
            }
        }
        if let Some((lo, hi)) = block {
            let mut q = ConsState::ZERO;
            let mut v_new = 0.0;
            for i in lo..=hi {
                if let (Some(p), Some((a, b))) = (prim[i], self.extent(fluid, i, x_old)) {
                    q += p.u * g.volume(a, b) + dq[i];
                }
                if let Some((a, b)) = self.extent(fluid, i, x_new) {
                    v_new += g.volume(a, b);
                }
            }
            if !(v_new > 0.0) {
                return Err(FlowError::FluidVanished { fluid });
            }
            let u = q * (1.0 / v_new);
            for (i, slot) in next.iter_mut().enumerate().take(hi + 1).skip(lo) {
                if self.extent(fluid, i, x_new).is_some() {
                    *slot = Some(u);
                }
            }
        }
        match fluid {
            Fluid::Minus => self.minus = next,
            Fluid::Plus => self.plus = next,
        }
        Ok(())
    }

    /// Advances by `dt` with forward Euler: edge and interface fluxes, the
    /// geometric source, interface motion by `u* dt` and the cut-cell update
    /// with small sub-cells merged into their same-fluid neighbour.
    pub fn advance_step(&mut self, dt: f64) -> Result<StepInfo, FlowError> {
        let n = self.cells();
        let prim_m = self.primitives(Fluid::Minus)?;
        let prim_p = self.primitives(Fluid::Plus)?;
        let mut dq_m = vec![ConsState::ZERO; n];
        let mut dq_p = vec![ConsState::ZERO; n];
        self.edge_fluxes(Fluid::Minus, &prim_m, &mut dq_m, dt);
        self.edge_fluxes(Fluid::Plus, &prim_p, &mut dq_p, dt);

        let mut star = None;
        let mut x_new = None;
        if let Some(x) = self.interface {
            let (lc, k, st) = self.interface_riemann(&prim_m, &prim_p, x)?;
            let f = interface_flux(&st, 1.0, self.geometry.area(x), dt);
            dq_m[lc] -= f;
            dq_p[k] += f;
            let xn = x + st.u_star * dt;
            if !(xn > self.nodes[0] && xn < self.nodes[n]) {
                return Err(FlowError::InterfaceLeftDomain { x: xn });
            }
            let kn = self.cell_of(xn);
            if kn.abs_diff(k) > 1 {
                return Err(FlowError::InterfaceJump { from: k, to: kn });
            }
            x_new = Some(xn);
            star = Some(st);
        }
        self.add_sources(Fluid::Minus, &prim_m, &mut dq_m, dt);
        self.add_sources(Fluid::Plus, &prim_p, &mut dq_p, dt);

        self.update_fluid(Fluid::Minus, &prim_m, &dq_m, x_new)?;
        self.update_fluid(Fluid::Plus, &prim_p, &dq_p, x_new)?;
        if let (Some(st), Some(xn)) = (&star, x_new) {
            self.interface = Some(xn);
            self.interface_travel += st.u_star * dt;
        }
        self.time += dt;
        self.steps += 1;
        Ok(StepInfo { dt, star })
    }
}
