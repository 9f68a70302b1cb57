mod common;

use common::{ideal_sample, rel};
use mgriemann::eos::EosModel;
use mgriemann::flow1d::{run_simulation, Geometry, RunParams, Snapshot};
use mgriemann::problems::*;
use mgriemann::riemann::FluidState;

fn sod_l1(snap: &Snapshot) -> f64 {
    let (l, r) = (FluidState::new(1.0, 0.0, 1.0), FluidState::new(0.125, 0.0, 0.1));
    let dx = 1.0 / snap.rows.len() as f64;
    snap.rows
        .iter()
        .map(|row| (row.rho - ideal_sample(1.4, &l, &r, (row.x - 0.5) / snap.t).rho).abs() * dx)
        .sum()
}

#[test]
fn builtin_configurations() {
    let s = builtin_problem("shyue").unwrap();
    assert_eq!(
        *s.left.eos.model(),
        EosModel::Jwl {
            a1: 8.545e11,
            a2: 2.05e10,
            omega: 0.25,
            r1: 4.6,
            r2: 1.35,
            rho0: 1840.0
        }
    );
    assert_eq!(s.left.eos, s.right.eos);
    assert_eq!(s.left.state, FluidState::new(1700.0, 0.0, 1e12));
    assert_eq!(s.right.state, FluidState::new(1000.0, 0.0, 5e10));
    assert_eq!((s.interface, s.t_end, s.domain), (0.5, 1.2e-5, [0.0, 1.0]));

    let s = builtin_problem("saurel").unwrap();
    assert!(matches!(
        *s.left.eos.model(),
        EosModel::CochranChan { a1, a2, omega, r1, r2, rho0 }
            if (a1, a2, omega, r1, r2, rho0) == (8.192e8, 1.508e9, 1.19, 4.53, 1.42, 1134.0)
    ));
    assert_eq!(s.left.state, FluidState::new(1134.0, 1000.0, 2e10));
    assert_eq!(s.right.state, FluidState::new(500.0, 1000.0, 2e10));
    assert_eq!(s.t_end, 4e-5);

    let s = builtin_problem("air_blast").unwrap();
    assert_eq!(s.geometry, Geometry::Spherical);
    assert_eq!(*s.left.eos.model(), EosModel::Ideal { gamma: 1.2 });
    assert_eq!(*s.right.eos.model(), EosModel::Ideal { gamma: 1.4 });
    assert_eq!(s.left.state, FluidState::new(618.935, 0.0, 6.314e12));
    assert_eq!(s.right.state, FluidState::new(1.29, 0.0, 1.013e5));
    assert_eq!((s.interface, s.domain[1], s.cells), (0.3, 5000.0, 4000));

    let s = builtin_problem("udex").unwrap();
    assert_eq!(s.geometry, Geometry::Spherical);
    assert!(matches!(s.left.eos.model(), EosModel::Jwl { .. }));
    assert!(matches!(s.right.eos.model(), EosModel::Polynomial { .. }));
    assert_eq!(s.left.state.p, 9.5e9);
    assert_eq!((s.interface, s.domain[1]), (0.245, 15.0));
}

#[test]
fn every_builtin_loads_validated() {
    for name in BUILTIN_NAMES {
        let s = builtin_problem(name).unwrap();
        s.validate().unwrap();
        assert_eq!(ProblemSpec::from_json(&s.to_json()).unwrap(), s);
    }
}

#[test]
fn invalid_problem_files_are_rejected() {
    let mut s = builtin_problem("shyue").unwrap();
    s.interface = 1.5;
    assert!(matches!(
        ProblemSpec::from_json(&s.to_json()),
        Err(ProblemError::Invalid(_))
    ));

    let mut s = builtin_problem("sod").unwrap();
    s.left.state = FluidState::new(1.0, -10.0, 1.0);
    s.right.state = FluidState::new(1.0, 10.0, 1.0);
    assert!(matches!(
        ProblemSpec::from_json(&s.to_json()),
        Err(ProblemError::Riemann(_))
    ));

    let mut s = builtin_problem("shyue").unwrap();
    s.right.state.rho = 2e4;
    assert!(matches!(
        ProblemSpec::from_json(&s.to_json()),
        Err(ProblemError::Eos(_))
    ));

    let mut s = builtin_problem("sod").unwrap();
    s.cells = 2;
    assert!(ProblemSpec::from_json(&s.to_json()).is_err());

    assert!(matches!(ProblemSpec::from_json("{}"), Err(ProblemError::Json(_))));
    assert!(matches!(builtin_problem("kiloton"), Err(ProblemError::Unknown(_))));
}

#[test]
fn problem_files_accept_hand_written_eos() {
    let text = r#"{
        "name": "hand",
        "geometry": "planar",
        "domain": [0.0, 1.0],
        "interface": 0.5,
        "left": { "eos": { "kind": "ideal", "gamma": 1.4 }, "state": { "rho": 1.0, "u": 0.0, "p": 1.0 } },
        "right": { "eos": { "kind": "stiffened", "gamma": 4.4, "p_inf": 6e8 }, "state": { "rho": 1000.0, "u": 0.0, "p": 1e5 } },
        "t_end": 1e-4,
        "p_ambient": 1e5,
        "bc_left": "outflow",
        "bc_right": "reflective"
    }"#;
    let s = ProblemSpec::from_json(text).unwrap();
    assert_eq!(s.cells, 400);
    assert!(s.gauges.is_empty());
}

#[test]
fn reference_profile_is_deterministic_and_beats_coarse_runs() {
    let sod = builtin_problem("sod").unwrap();
    let a = reference_profile(&sod, 2000).unwrap();
    let b = reference_profile(&sod, 2000).unwrap();
    assert_eq!(a, b);
    let coarse = run_simulation(&sod, 200, &RunParams::new(sod.t_end)).unwrap();
    assert!(sod_l1(&a) < sod_l1(coarse.snapshots.last().unwrap()));

    let blast = builtin_problem("air_blast").unwrap();
    assert!(reference_profile(&blast, 100).is_err());
}

#[test]
fn stiffened_water_shock_arrives_first() {
    let arrival = |name: &str| {
        let spec = builtin_problem(name).unwrap();
        let mut params = RunParams::new(spec.t_end);
        params.gauges = vec![0.7];
        let out = run_simulation(&spec, 400, &params).unwrap();
        shock_metrics(&out.gauges[0], spec.p_ambient, ImpulseWindow::FullRecord)
            .arrival_time
            .unwrap()
    };
    let (sg, poly) = (arrival("gas_water_sg"), arrival("gas_water_poly"));
    assert!(sg < poly, "{sg} vs {poly}");
}

#[test]
fn gauge_impulse_matches_its_definition() {
    let spec = builtin_problem("jwl_poly").unwrap();
    let mut params = RunParams::new(spec.t_end);
    params.gauges = spec.gauges.clone();
    let out = run_simulation(&spec, 400, &params).unwrap();
    assert!(shock_metrics(&out.gauges[0], spec.p_ambient, ImpulseWindow::FullRecord)
        .arrival_time
        .is_some());
    for g in &out.gauges {
        assert!(g.samples.windows(2).all(|w| w[1].0 > w[0].0));
        let m = shock_metrics(g, spec.p_ambient, ImpulseWindow::FullRecord);
        // Independent trapezoid over the record.
        let over = |p: f64| (p - spec.p_ambient).max(0.0);
        let want: f64 = g
            .samples
            .windows(2)
            .map(|w| 0.5 * (over(w[0].1) + over(w[1].1)) * (w[1].0 - w[0].0))
            .sum();
        assert!(rel(m.impulse, want) < 1e-12);
        let peak = g.samples.iter().map(|s| s.1).fold(f64::MIN, f64::max);
        assert_eq!(m.peak_overpressure, peak - spec.p_ambient);
        let pos = shock_metrics(g, spec.p_ambient, ImpulseWindow::PositivePhase);
        assert!(pos.impulse <= m.impulse);
        match m.arrival_time {
            Some(_) => assert!(pos.impulse > 0.0),
            None => assert_eq!(pos.impulse.to_bits(), 0.0f64.to_bits()),
        }
    }
}
