//! Entropy generation is never negative, whatever the operating point.

use exergy_core::battery::{step_battery, BatteryState};
use exergy_core::motor::{step_motor, MotorState};
use exergy_core::presets;
use exergy_core::thermo::ReferenceState;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn battery_generates_entropy(
        soc in 0.05f64..0.95,
        power_frac in -1.0f64..1.0,
        dtemp in 0.0f64..60.0,
        dt in 0.01f64..10.0,
        hev in any::<bool>(),
    ) {
        let pack = if hev { presets::hev_pack() } else { presets::ev_pack() };
        let r = ReferenceState::standard();
        let p = if power_frac >= 0.0 {
            power_frac * pack.max_discharge_power(soc)
        } else {
            -power_frac * pack.max_charge_power(soc)
        };
        let state = BatteryState::new(soc, soc, r.t0() + dtemp);
        let (next, x) = step_battery(&pack, &state, p, &r, dt).unwrap();
        prop_assert!(x.s_gen >= 0.0);
        prop_assert!(x.x_dest <= 0.0);
        prop_assert!(x.x_heat <= 0.0);
        prop_assert!(next.t >= r.t0());
        prop_assert!((0.0..=1.0).contains(&next.soe));
    }

    #[test]
    fn motor_generates_entropy(
        tau_frac in -1.0f64..1.0,
        omega in 0.0f64..1000.0,
        dtemp in 0.0f64..120.0,
        dt in 0.01f64..10.0,
    ) {
        let m = presets::ev_motor();
        let r = ReferenceState::standard();
        let tau = tau_frac * m.torque_limit(omega);
        let state = MotorState::new(r.t0() + dtemp);
        let (next, x) = step_motor(&m, &state, tau, omega, &r, dt).unwrap();
        prop_assert!(x.s_gen >= 0.0);
        prop_assert!(x.x_dest <= 0.0);
        prop_assert!(x.x_heat <= 0.0);
        prop_assert!(next.t >= r.t0());
    }
}
