//! Whole-run invariants on the shipped configurations.

use exergy_core::cycle::DriveCycle;
use exergy_core::ledger::Term;
use exergy_core::presets;
use exergy_core::sim::{run, SimConfig, SimResult};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// 1000 s of random accelerations between standstill and 30 m/s.
fn random_cycle(seed: u64) -> DriveCycle {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut v: f64 = 0.0;
    let mut speeds = vec![0.0];
    for _ in 0..1000 {
        v = (v + rng.gen_range(-1.5..1.5)).clamp(0.0, 30.0);
        speeds.push(v);
    }
    let t = (0..speeds.len()).map(|k| k as f64).collect();
    DriveCycle::new(t, speeds).unwrap()
}

fn closure_error(r: &SimResult) -> f64 {
    let l = &r.ledger;
    let dx = l.x_veh() - l.x0();
    (l.closure_sum() - dx).abs() / dx.abs().max(1.0)
}

fn check_run(config: &SimConfig, cycle: &DriveCycle) -> SimResult {
    let r = run(config, cycle).unwrap();
    assert!(closure_error(&r) < 1e-6, "closure {}", closure_error(&r));
    let x0 = r.ledger.x0();
    for w in r.ledger.trajectory().windows(2) {
        assert!(
            w[1] <= w[0] + 1e-9 * x0,
            "exergy rose: {} -> {}",
            w[0],
            w[1]
        );
    }
    for s in &r.samples {
        assert!(s.rates.s_gen_batt >= 0.0 && s.rates.s_gen_mot >= 0.0);
        assert!(s.rates.x_dest_batt <= 0.0 && s.rates.x_dest_mot <= 0.0);
        assert!(s.rates.x_comb <= 0.0 && s.rates.x_fric <= 0.0);
        assert!(s.f_brake >= 0.0);
        assert!(s.t_batt >= config.reference.t0() && s.t_mot >= config.reference.t0());
    }
    assert_eq!(r.samples.len(), cycle.time_grid(config.dt).len());
    let pct = r.summary.losses.percent_sum();
    assert!((pct - 100.0).abs() < 0.1, "{pct}");
    r
}

#[test]
fn ev_surrogate_cycle_closes() {
    let r = check_run(&presets::ev_config(), &presets::surrogate_wltc());
    assert!(r.summary.delta_soc < 0.0);
    assert_eq!(r.ledger.total(Term::FuelEng), 0.0);
    assert!(r.summary.max_tracking_error < 1.0 / 3.6);
}

#[test]
fn hev_surrogate_cycle_closes_and_sustains_charge() {
    let r = check_run(&presets::hev_config(), &presets::surrogate_wltc());
    for s in &r.samples {
        assert!((s.soc - 0.5).abs() <= 0.1, "soc {} at {}", s.soc, s.t);
    }
    assert!(r.summary.fuel_mass > 0.0);
    assert_eq!(r.summary.comb_warnings, 0);
    assert!(r.summary.max_tracking_error < 1.0 / 3.6);
}

#[test]
fn random_demand_closes() {
    for seed in [1, 2, 3] {
        let cycle = random_cycle(seed);
        check_run(&presets::ev_config(), &cycle);
        check_run(&presets::hev_config(), &cycle);
    }
}

#[test]
fn runs_are_deterministic() {
    let cycle = random_cycle(7);
    for config in [presets::ev_config(), presets::hev_config()] {
        let a = run(&config, &cycle).unwrap();
        let b = run(&config, &cycle).unwrap();
        assert_eq!(a, b);
        let bits = |r: &SimResult| {
            r.ledger
                .trajectory()
                .iter()
                .map(|x| x.to_bits())
                .collect::<Vec<_>>()
        };
        assert_eq!(bits(&a), bits(&b));
    }
}

#[test]
fn halving_the_step_converges() {
    let cycle = presets::surrogate_wltc();
    for base in [presets::ev_config(), presets::hev_config()] {
        let coarse = run(&base, &cycle).unwrap();
        let fine = run(
            &SimConfig {
                dt: base.dt / 2.0,
                ..base.clone()
            },
            &cycle,
        )
        .unwrap();
        let (xc, xf) = (coarse.summary.x_veh_final, fine.summary.x_veh_final);
        assert!((xc - xf).abs() / xf < 1e-3, "{xc} vs {xf}");
        // the consumed exergy itself agrees to a few percent
        let (dc, df) = (xc - coarse.summary.x_veh0, xf - fine.summary.x_veh0);
        assert!((dc - df).abs() / df.abs() < 0.05, "{dc} vs {df}");
    }
}

#[test]
fn invalid_configurations_are_rejected() {
    let cycle = presets::surrogate_wltc();
    let bad = [
        SimConfig {
            dt: 0.0,
            ..presets::ev_config()
        },
        SimConfig {
            soc0: 1.2,
            ..presets::ev_config()
        },
        SimConfig {
            t_batt0: 200.0,
            ..presets::ev_config()
        },
        SimConfig {
            engine: None,
            ..presets::hev_config()
        },
    ];
    for c in bad {
        assert!(run(&c, &cycle).is_err());
    }
}

#[test]
fn constant_cruise_reaches_no_steady_gain() {
    let cycle = DriveCycle::constant(0.0, 60.0, 1.0).unwrap();
    let r = run(&presets::ev_config(), &cycle).unwrap();
    // parked: nothing moves, nothing is lost
    assert_eq!(r.ledger.x_veh(), r.ledger.x0());
    assert!(r.summary.losses.is_empty());
}
