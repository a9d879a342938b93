use proptest::prelude::*;

use walklab::evolution::{evolve_plane, evolve_torus, step_torus};
use walklab::momentum::{dft_forward, dft_inverse, evolve_via_momentum, momentum_matrix};
use walklab::random::{random_alpha, random_coin, random_state, rng};
use walklab::{fourier_coin, grover_coin, PlaneState, ShiftKind, TorusState};

fn shift_of(flag: bool) -> ShiftKind {
    if flag {
        ShiftKind::FlipFlop
    } else {
        ShiftKind::Moving
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn norm_is_preserved(seed in any::<u64>(), n_side in 1usize..9, steps in 0usize..60, ff in any::<bool>()) {
        let mut r = rng(seed);
        let coin = random_coin(&mut r, shift_of(ff));
        let init = random_state(&mut r, n_side).unwrap();
        let last = evolve_torus(&init, &coin, steps).unwrap();
        prop_assert!((last.norm_sqr().sqrt() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn translation_commutes_with_evolution(
        seed in any::<u64>(), n_side in 2usize..8, d1 in 0usize..8, d2 in 0usize..8, steps in 0usize..12, ff in any::<bool>()
    ) {
        let mut r = rng(seed);
        let coin = random_coin(&mut r, shift_of(ff));
        let init = random_state(&mut r, n_side).unwrap();
        let a = evolve_torus(&init.translated(d1, d2), &coin, steps).unwrap();
        let b = evolve_torus(&init, &coin, steps).unwrap().translated(d1, d2);
        prop_assert!(a.max_abs_diff(&b) <= 1e-12);
    }

    #[test]
    fn parity_of_delta_start(seed in any::<u64>(), steps in 0usize..20, ff in any::<bool>(), grover in any::<bool>()) {
        let mut r = rng(seed);
        let shift = shift_of(ff);
        let coin = if grover { grover_coin(shift) } else { random_coin(&mut r, shift) };
        let n_side = 2 * (steps + 2);
        let init = TorusState::delta(n_side, random_alpha(&mut r)).unwrap();
        let last = evolve_torus(&init, &coin, steps).unwrap();
        for (a, b, v) in last.iter() {
            if (a + b + steps) % 2 == 1 {
                prop_assert!(v.is_zero());
            }
        }
    }

    #[test]
    fn dft_round_trip(seed in any::<u64>(), n_side in 1usize..12) {
        let s = random_state(&mut rng(seed), n_side).unwrap();
        let k = dft_forward(&s).unwrap();
        prop_assert!(dft_inverse(&k).unwrap().max_abs_diff(&s) <= 1e-13);
        // A 1/N prefactor over N² sites makes the transform unitary.
        prop_assert!((k.norm_sqr() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn engines_agree(seed in any::<u64>(), n_side in 1usize..10, steps in 0usize..40, ff in any::<bool>()) {
        let mut r = rng(seed);
        let coin = random_coin(&mut r, shift_of(ff));
        let init = random_state(&mut r, n_side).unwrap();
        let a = evolve_torus(&init, &coin, steps).unwrap();
        let b = evolve_via_momentum(&init, &coin, steps).unwrap();
        prop_assert!(a.max_abs_diff(&b) <= 1e-9);
    }

    #[test]
    fn momentum_decouples(seed in any::<u64>(), n_side in 1usize..8, ff in any::<bool>()) {
        let mut r = rng(seed);
        let coin = random_coin(&mut r, shift_of(ff));
        let init = random_state(&mut r, n_side).unwrap();
        let before = dft_forward(&init).unwrap();
        let after = dft_forward(&step_torus(&init, &coin).unwrap()).unwrap();
        for (k1, k2, v) in before.iter() {
            let m = momentum_matrix(&coin, k1, k2, n_side).unwrap().m;
            prop_assert!(after.get(k1, k2).max_abs_diff(&v.apply(&m)) <= 1e-13);
        }
    }

    #[test]
    fn plane_matches_large_torus(seed in any::<u64>(), steps in 0usize..10, ff in any::<bool>()) {
        let mut r = rng(seed);
        let coin = random_coin(&mut r, shift_of(ff));
        let alpha = random_alpha(&mut r);
        let n_side = 2 * steps + 3;
        let torus = evolve_torus(&TorusState::delta(n_side, alpha).unwrap(), &coin, steps).unwrap();
        let plane = evolve_plane(&PlaneState::delta(steps + 1, alpha), &coin, steps).unwrap();
        let nn = n_side as i64;
        for (x1, x2, v) in plane.iter() {
            let t = torus.get(x1.rem_euclid(nn) as usize, x2.rem_euclid(nn) as usize);
            prop_assert!(t.max_abs_diff(v) <= 1e-12);
            if x1.abs() + x2.abs() > steps as i64 {
                prop_assert!(v.is_zero());
            }
        }
    }
}

#[test]
fn long_fourier_runs_stay_normalised() {
    for shift in [ShiftKind::Moving, ShiftKind::FlipFlop] {
        let init = random_state(&mut rng(5), 7).unwrap();
        let last = evolve_torus(&init, &fourier_coin(shift), 1000).unwrap();
        assert!((last.norm_sqr().sqrt() - 1.0).abs() <= 1e-10);
    }
}
