use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::demos;
use crate::game::{eval_exact, legality_check_exact};
use crate::strategy::{MealyStrategy, StrategyRef};
use crate::streams::UpStream;

fn samples() -> Vec<UpStream> {
    let up = |p: &[u64], q: &[u64]| UpStream::new(p.to_vec(), q.to_vec()).unwrap();
    vec![
        UpStream::zeros(),
        UpStream::constant(3),
        up(&[0, 4], &[1, 2]),
        up(&[2], &[0, 5]),
        up(&[0, 0, 0], &[9]),
        up(&[1, 0], &[0]),
        up(&[], &[0, 1, 2, 3]),
        up(&[7, 7], &[8]),
    ]
}

#[test]
fn piecewise_xi2_matches_oracle() {
    let d = demos::piecewise_xi2();
    let tau = piecewise_compile(&d.spec, &d.inner).unwrap();
    for x in samples() {
        assert_eq!(
            eval_exact(&d.game, &tau, &x, 32).unwrap(),
            (d.oracle)(&x),
            "x = {x:?}"
        );
    }
}

#[test]
fn piecewise_xi3_matches_oracle_and_decompiles() {
    let d = demos::piecewise_xi3();
    let tau: StrategyRef = Arc::new(piecewise_compile(&d.spec, &d.inner).unwrap());
    let dec = piecewise_decompile(&d.game, tau.clone()).unwrap();
    let again = piecewise_compile(&dec.to_spec(), &d.inner).unwrap();
    for x in samples() {
        assert_eq!(eval_exact(&d.game, &*tau, &x, 32).unwrap(), (d.oracle)(&x));
        assert_eq!(dec.region_of(&x, 32).unwrap(), (d.region)(&x));
        assert_eq!(eval_exact(&d.game, &again, &x, 32).unwrap(), (d.oracle)(&x));
    }
}

#[test]
fn compiled_piecewise_is_legal() {
    let d = demos::piecewise_xi2();
    let tau = piecewise_compile(&d.spec, &d.inner).unwrap();
    assert!(legality_check_exact(&d.game, &tau).unwrap().is_legal());
}

#[test]
fn uncovered_schedule_is_illegal() {
    let d = demos::piecewise_xi2();
    let only_outside = CompositeStrategy::with_controls(
        Vec::new(),
        &d.spec.controls,
        Arc::new(MealyStrategy::copy()),
    );
    assert!(!legality_check_exact(&d.game, &only_outside)
        .unwrap()
        .is_legal());
}

#[test]
fn swap_both_directions_preserves_output() {
    let d2 = demos::piecewise_xi2();
    let s = demos::swap_z_to_inf0();
    let tau = piecewise_compile(&d2.spec, &d2.inner).unwrap();
    let copy: StrategyRef = Arc::new(MealyStrategy::copy());
    let swapped = control_swap(
        &tau,
        &s.old,
        &s.new,
        &s.index_map,
        &s.sigmas,
        copy.clone(),
        &samples(),
    )
    .unwrap();
    let g = make_gfxi(&d2.inner, s.new.clone()).unwrap();
    for x in samples() {
        assert_eq!(eval_exact(&g, &swapped, &x, 32).unwrap(), (d2.oracle)(&x));
    }

    let d3 = demos::piecewise_xi3();
    let s = demos::swap_inf0_to_alternating();
    let tau = piecewise_compile(&d3.spec, &d3.inner).unwrap();
    let swapped = control_swap(
        &tau,
        &s.old,
        &s.new,
        &s.index_map,
        &s.sigmas,
        copy,
        &samples(),
    )
    .unwrap();
    let g = make_gfxi(&d3.inner, s.new.clone()).unwrap();
    for x in samples() {
        assert_eq!(eval_exact(&g, &swapped, &x, 32).unwrap(), (d3.oracle)(&x));
    }
}

#[test]
fn swap_rejects_bad_witness() {
    let d2 = demos::piecewise_xi2();
    let s = demos::swap_z_to_inf0();
    let tau = piecewise_compile(&d2.spec, &d2.inner).unwrap();
    let bad: StrategyRef = Arc::new(MealyStrategy::constant(&UpStream::zeros()));
    let r = control_swap(
        &tau,
        &s.old,
        &s.new,
        &s.index_map,
        &[bad.clone(), bad],
        s.sigmas[0].clone(),
        &samples(),
    );
    assert!(matches!(r, Err(Error::WitnessFailure { .. })));
}

#[test]
fn glim_zero_test() {
    let d = demos::glim_zero_test();
    for x in samples() {
        assert_eq!(
            eval_exact(&d.game, &d.strategy, &x, 0).unwrap(),
            (d.oracle)(&x),
            "x = {x:?}"
        );
    }
}

#[test]
fn gamma_identity_round_trip() {
    let tau: StrategyRef =
        Arc::new(gamma_compile(demos::gamma_identity(), &samples(), 4, 10).unwrap());
    for x in samples() {
        assert_eq!(gamma_digits(&*tau, &x, 6, 10).unwrap(), x.take(6));
    }
    let dec = gamma_decompile(tau).unwrap();
    let x = UpStream::new(vec![2, 0], vec![1]).unwrap();
    assert!(dec.member(0, 2, &x).unwrap());
    assert!(!dec.member(0, 1, &x).unwrap());
    assert!(dec.member(3, 1, &x).unwrap());
}

#[test]
fn gamma_compile_rejects_incoherent_family() {
    let family: CodeFamily = Arc::new(|_, _| crate::omega::gallery::empty());
    assert!(matches!(
        gamma_compile(family, &samples(), 2, 3),
        Err(Error::IncoherentSpec { n: 0, .. })
    ));
}

#[test]
fn glip_two_pieces() {
    let d = demos::glip_two_pieces();
    let (tau, schedule) = glip_compile(&d.pieces, &d.controls).unwrap();
    assert!(schedule.windows(2).all(|w| w[0] < w[1]));
    for x in samples() {
        assert_eq!(
            eval_exact(&d.game, &tau, &x, 32).unwrap(),
            (d.oracle)(&x),
            "x = {x:?}"
        );
    }
}

#[test]
fn lip_schedule_formula() {
    assert_eq!(lip_schedule(&[0, 0, 5], &[1, 2, 0]), vec![1, 2, 5]);
    assert_eq!(lip_schedule(&[3, 1], &[0, 0]), vec![3, 4]);
}
