//! Reference solutions used as test oracles. Nothing in here calls into
//! `mgriemann::riemann`; only EOS evaluations are shared.
#![allow(dead_code)]

use mgriemann::eos::Eos;
use mgriemann::riemann::FluidState;

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

// ---------------------------------------------------------------------------
// Classical exact solver for two ideal gases with the same γ.

fn ideal_f(g: f64, s: &FluidState, p: f64) -> f64 {
    let c = (g * s.p / s.rho).sqrt();
    if p > s.p {
        let a = 2.0 / ((g + 1.0) * s.rho);
        let b = (g - 1.0) / (g + 1.0) * s.p;
        (p - s.p) * (a / (p + b)).sqrt()
    } else {
        2.0 * c / (g - 1.0) * ((p / s.p).powf((g - 1.0) / (2.0 * g)) - 1.0)
    }
}

/// `(p*, u*)` by bisection on the closed-form pressure function.
pub fn ideal_star(g: f64, l: &FluidState, r: &FluidState) -> (f64, f64) {
    let f = |p: f64| ideal_f(g, l, p) + ideal_f(g, r, p) + r.u - l.u;
    let mut lo = 1e-14 * l.p.min(r.p);
    let mut hi = l.p.max(r.p);
    while f(hi) < 0.0 {
        hi *= 2.0;
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    let p = 0.5 * (lo + hi);
    (p, 0.5 * (l.u + r.u + ideal_f(g, r, p) - ideal_f(g, l, p)))
}

/// Exact ideal-gas solution at `ξ = x/t`.
pub fn ideal_sample(g: f64, l: &FluidState, r: &FluidState, xi: f64) -> FluidState {
    let (p, u) = ideal_star(g, l, r);
    let gm = (g - 1.0) / (g + 1.0);
    if xi <= u {
        let c = (g * l.p / l.rho).sqrt();
        if p > l.p {
            let rho = l.rho * (p / l.p + gm) / (gm * p / l.p + 1.0);
            let s = l.u - c * ((g + 1.0) / (2.0 * g) * p / l.p + (g - 1.0) / (2.0 * g)).sqrt();
            if xi < s {
                *l
            } else {
                FluidState::new(rho, u, p)
            }
        } else {
            let rho = l.rho * (p / l.p).powf(1.0 / g);
            let cs = c * (p / l.p).powf((g - 1.0) / (2.0 * g));
            if xi < l.u - c {
                *l
            } else if xi > u - cs {
                FluidState::new(rho, u, p)
            } else {
                let k = 2.0 / (g + 1.0) + gm / c * (l.u - xi);
                let rho = l.rho * k.powf(2.0 / (g - 1.0));
                let uu = 2.0 / (g + 1.0) * (c + (g - 1.0) / 2.0 * l.u + xi);
                FluidState::new(rho, uu, l.p * k.powf(2.0 * g / (g - 1.0)))
            }
        }
    } else {
        let c = (g * r.p / r.rho).sqrt();
        if p > r.p {
            let rho = r.rho * (p / r.p + gm) / (gm * p / r.p + 1.0);
            let s = r.u + c * ((g + 1.0) / (2.0 * g) * p / r.p + (g - 1.0) / (2.0 * g)).sqrt();
            if xi > s {
                *r
            } else {
                FluidState::new(rho, u, p)
            }
        } else {
            let rho = r.rho * (p / r.p).powf(1.0 / g);
            let cs = c * (p / r.p).powf((g - 1.0) / (2.0 * g));
            if xi > r.u + c {
                *r
            } else if xi < u + cs {
                FluidState::new(rho, u, p)
            } else {
                let k = 2.0 / (g + 1.0) - gm / c * (r.u - xi);
                let rho = r.rho * k.powf(2.0 / (g - 1.0));
                let uu = 2.0 / (g + 1.0) * (-c + (g - 1.0) / 2.0 * r.u + xi);
                FluidState::new(rho, uu, r.p * k.powf(2.0 * g / (g - 1.0)))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// General Mie-Grüneisen oracle: bisection everywhere, fine quadrature.

/// Post-shock density from the energy form of the Rankine-Hugoniot
/// condition, `e(ρ, p) - e_k = ½ (p + p_k)(1/ρ_k - 1/ρ)`, by bisection.
pub fn hugoniot_bisect(eos: &Eos, s: &FluidState, p: f64, rel_tol: f64) -> f64 {
    let ek = eos.internal_energy(s.rho, s.p).unwrap();
    let upper = eos.admissible_domain().upper;
    let g = |rho: f64| eos.internal_energy(rho, p).unwrap() - ek - 0.5 * (p + s.p) * (1.0 / s.rho - 1.0 / rho);
    let mut lo = s.rho;
    let mut hi = s.rho;
    loop {
        let next = (hi * 1.05).min(upper);
        if g(next) < 0.0 {
            hi = next;
            break;
        }
        assert!(next < upper, "no Hugoniot root below {upper}");
        lo = next;
        hi = next;
    }
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= rel_tol * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// `∫_{p_k}^{p} dp / (ρ c)` along the isentrope and the end density, with
/// `n` classical RK4 steps on geometric pressure nodes.
pub fn isentrope(eos: &Eos, s: &FluidState, p: f64, n: usize) -> (f64, f64) {
    let rhs = |p: f64, rho: f64| {
        let c = eos.sound_speed(rho, p).unwrap();
        (1.0 / (c * c), 1.0 / (rho * c))
    };
    let ratio = (p / s.p).powf(1.0 / n as f64);
    let (mut rho, mut f, mut p0) = (s.rho, 0.0, s.p);
    for i in 0..n {
        let p1 = if i + 1 == n { p } else { p0 * ratio };
        let h = p1 - p0;
        let k1 = rhs(p0, rho);
        let k2 = rhs(p0 + 0.5 * h, rho + 0.5 * h * k1.0);
        let k3 = rhs(p0 + 0.5 * h, rho + 0.5 * h * k2.0);
        let k4 = rhs(p1, rho + h * k3.0);
        rho += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        f += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        p0 = p1;
    }
    (f, rho)
}

/// Branch value `f_k(p)` and star density.
pub fn branch(eos: &Eos, s: &FluidState, p: f64, n: usize, tol: f64) -> (f64, f64) {
    if p > s.p {
        let rho = hugoniot_bisect(eos, s, p, tol);
        (((p - s.p) * (1.0 / s.rho - 1.0 / rho)).sqrt(), rho)
    } else {
        isentrope(eos, s, p, n)
    }
}

pub struct OracleStar {
    pub p: f64,
    pub u: f64,
    pub rho_l: f64,
    pub rho_r: f64,
}

/// Bisection on `f_l(p) + f_r(p) + u_r - u_l` with 4096-step isentropes and
/// 1e-13 Hugoniot solves.
pub fn bisection_star(eos_l: &Eos, l: &FluidState, eos_r: &Eos, r: &FluidState) -> OracleStar {
    let (n, tol) = (4096, 1e-13);
    let f = |p: f64| branch(eos_l, l, p, n, tol).0 + branch(eos_r, r, p, n, tol).0 + r.u - l.u;
    let mut lo = 1e-8 * l.p.min(r.p);
    let mut hi = l.p.max(r.p);
    while f(hi) < 0.0 {
        lo = hi;
        hi *= 1.5;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-13 * hi {
            break;
        }
    }
    let p = 0.5 * (lo + hi);
    let (fl, rho_l) = branch(eos_l, l, p, n, tol);
    let (fr, rho_r) = branch(eos_r, r, p, n, tol);
    OracleStar {
        p,
        u: 0.5 * (l.u + r.u + fr - fl),
        rho_l,
        rho_r,
    }
}

// ---------------------------------------------------------------------------
// Plain single-fluid LLF finite-volume method on a planar mesh with
// zero-gradient boundaries. Arithmetic is ordered as
// `U + (F_{i-1/2} Δt - F_{i+1/2} Δt) · (1/V)` so results can be compared bit
// for bit.

pub fn llf_reference(eos: &Eos, nodes: &[f64], init: &[FluidState], cfl: f64, t_end: f64) -> Vec<[f64; 3]> {
    let n = init.len();
    let mut u: Vec<[f64; 3]> = init
        .iter()
        .map(|s| {
            let e = eos.internal_energy(s.rho, s.p).unwrap();
            [s.rho, s.rho * s.u, s.rho * e + 0.5 * s.rho * s.u * s.u]
        })
        .collect();
    let prim = |q: &[f64; 3]| {
        let v = q[1] / q[0];
        let e = (q[2] - 0.5 * q[1] * v) / q[0];
        let p = eos.pressure(q[0], e).unwrap();
        let c = eos.sound_speed(q[0], p).unwrap();
        (v, p, c)
    };
    let mut t = 0.0;
    while t < t_end {
        let w: Vec<_> = u.iter().map(prim).collect();
        let mut dt = f64::INFINITY;
        for i in 0..n {
            dt = dt.min((nodes[i + 1] - nodes[i]) / (w[i].0.abs() + w[i].2));
        }
        dt *= cfl;
        let hit = t + dt >= t_end;
        if hit {
            dt = t_end - t;
        }
        let flux = |a: usize, b: usize| {
            let (qa, qb) = (&u[a], &u[b]);
            let ((va, pa, ca), (vb, pb, cb)) = (w[a], w[b]);
            let fa = [qa[1], qa[1] * va + pa, (qa[2] + pa) * va];
            let fb = [qb[1], qb[1] * vb + pb, (qb[2] + pb) * vb];
            let lam = (va.abs() + ca).max(vb.abs() + cb);
            [0, 1, 2].map(|k| ((fa[k] + fb[k]) * 0.5 - (qb[k] - qa[k]) * (0.5 * lam)) * dt)
        };
        let faces: Vec<[f64; 3]> = (0..=n).map(|j| flux(j.saturating_sub(1), j.min(n - 1))).collect();
        for i in 0..n {
            let inv = 1.0 / (nodes[i + 1] - nodes[i]);
            for k in 0..3 {
                u[i][k] += (faces[i][k] - faces[i + 1][k]) * inv;
            }
        }
        t = if hit { t_end } else { t + dt };
    }
    u
}
