//! Enthalpy and entropy against numerical derivatives and integrals of cp.

use exergy_core::thermo::{Gas, ThermoData};

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn cp_is_the_derivative_of_enthalpy() {
    let data = ThermoData::embedded();
    for gas in Gas::ALL {
        let sp = data.species(gas);
        let (lo, hi) = (sp.t_min() + 1.0, sp.t_max() - 1.0);
        for k in 0..=40 {
            let t = lo + (hi - lo) * k as f64 / 40.0;
            if (t - sp.t_split()).abs() < 1.0 {
                continue;
            }
            let d = 1e-2;
            let fd = (sp.enthalpy(t + d).unwrap() - sp.enthalpy(t - d).unwrap()) / (2.0 * d);
            let cp = sp.cp(t).unwrap();
            assert!(rel(fd, cp) < 1e-6, "{} at {t}: {fd} vs {cp}", sp.name());
        }
    }
}

#[test]
fn enthalpy_and_entropy_match_quadrature_of_cp() {
    let data = ThermoData::embedded();
    for gas in Gas::ALL {
        let sp = data.species(gas);
        let segments = [(sp.t_min(), sp.t_split()), (sp.t_split(), sp.t_max())];
        for (seg, (a, b)) in segments.into_iter().enumerate() {
            // stay inside one polynomial
            let (a, b) = if seg == 0 {
                (a, b - 1e-9)
            } else {
                (a + 1e-9, b)
            };
            let cp = |t: f64| sp.cp(t).unwrap();
            let dh = simpson(cp, a, b, 2000);
            let ds = simpson(|t| cp(t) / t, a, b, 2000);
            let h_ref = sp.enthalpy(b).unwrap() - sp.enthalpy(a).unwrap();
            let s_ref = sp.entropy(b).unwrap() - sp.entropy(a).unwrap();
            assert!(rel(dh, h_ref) < 1e-6, "{} h: {dh} vs {h_ref}", sp.name());
            assert!(rel(ds, s_ref) < 1e-6, "{} s: {ds} vs {s_ref}", sp.name());
        }
    }
}
