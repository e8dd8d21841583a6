//! Shared inputs for the `gravsig-core` benchmarks in `benches/kernels.rs`.

use gravsig_core::feasibility::{InternalEnergies, Scenario};
use gravsig_core::{AliceQuadrupole, InterferometerSetup};

/// A small Planck-unit interferometer used across benchmarks.
pub fn toy_setup() -> InterferometerSetup {
    InterferometerSetup {
        m: 1.0,
        d: 1.0,
        big_d: 1.0,
        tau_a: 1.0,
        tau_f: 10.0,
        sigma: 1.0,
        delta_t: 0.01,
    }
}

/// Two-level scenario that passes every constraint.
pub fn two_level() -> Scenario {
    Scenario {
        setup: InterferometerSetup {
            m: 0.1,
            d: 10.0,
            big_d: 10.0,
            tau_a: 0.01,
            tau_f: 1.0,
            sigma: 0.1,
            delta_t: 1.0,
        },
        alice: AliceQuadrupole {
            q0: 0.2,
            delta_q: 0.1,
            t_close: 1.0,
        },
        internal: Some(InternalEnergies { e0: 0.1, e1: 2.0 }),
    }
}
