use std::f64::consts::PI;

use blochmap::{
    density_of, dilate, fidelity, gram_of, maximize, orthogonal_state, quantum_output, state_from_angles, BlochAngles,
    C64, FidelityFunctional, GramParams,
};
use proptest::prelude::*;

fn angles() -> impl Strategy<Value = BlochAngles> {
    (0.0..PI, 0.0..2.0 * PI).prop_map(|(t, p)| BlochAngles::new(t, p))
}

fn gram() -> impl Strategy<Value = GramParams> {
    (0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64, -PI..PI).prop_map(|(x, y, frac, phase)| {
        let r = (x * y).sqrt() * frac;
        GramParams::new(x, y, C64::from_polar(r, phase)).expect("scaled z is feasible")
    })
}

fn functional() -> impl Strategy<Value = FidelityFunctional> {
    (0.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, 0.0..1.0f64, -PI..PI)
        .prop_map(|(v, x, y, r, phase)| FidelityFunctional { v, x, y, w: C64::from_polar(r, phase) })
}

proptest! {
    #[test]
    fn states_are_normalized(a in angles()) {
        let s = state_from_angles(a);
        prop_assert!((s.norm_sq() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn orthogonal_states_have_zero_overlap(a in angles()) {
        let s = state_from_angles(a);
        let o = orthogonal_state(a);
        prop_assert!(s.overlap(&o).norm() < 1e-12);
    }

    #[test]
    fn self_fidelity_is_one(a in angles()) {
        let s = state_from_angles(a);
        prop_assert!((fidelity(&s, &density_of(&s)).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gram_round_trips_through_dilation(g in gram()) {
        let back = gram_of(&dilate(&g));
        prop_assert!((back.x - g.x).abs() < 1e-10);
        prop_assert!((back.y - g.y).abs() < 1e-10);
        prop_assert!((back.z - g.z).norm() < 1e-10);
    }

    #[test]
    fn channel_outputs_stay_physical(g in gram(), a in angles()) {
        let out = quantum_output(a, &dilate(&g));
        prop_assert!(out.validate(1e-9).is_ok());
    }

    #[test]
    fn optimum_dominates_feasible_points(f in functional(), g in gram()) {
        let opt = maximize(&f);
        prop_assert!(opt.value >= f.eval(&g) - 1e-9);
    }

    #[test]
    fn optimum_stays_feasible(f in functional()) {
        let best = maximize(&f).best;
        prop_assert!((0.0..=1.0 + 1e-12).contains(&best.x));
        prop_assert!((0.0..=1.0 + 1e-12).contains(&best.y));
        prop_assert!(best.z.norm_sqr() <= best.x * best.y + 1e-9);
    }
}
