//! The successor operators `Σ^ξ(A)`, `Π^ξ(A)` and the residual set `R_ξ`,
//! with exact membership on ultimately periodic reals, and the merge of
//! two Wadge strategies into one for the activation game.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::composite::{CompositeStrategy, ControlSchedule};
use crate::error::{Error, Result};
use crate::game::{eval_exact, make_base_game, BaseKind};
use crate::omega::{DetOmegaAutomaton, Membership};
use crate::strategy::{project_strategy, StrategyRef};
use crate::streams::{lcm, ProjectionSpectrum, UpStream};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SuccessorKind {
    Sigma,
    Pi,
    R,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuccessorSet {
    pub base: DetOmegaAutomaton,
    pub controls: ControlSchedule,
    pub kind: SuccessorKind,
}

/// Least `n` with `π₂ₙ(x) ∈ Pₙ`, if any.
///
/// For `n` past both the spectrum's and the schedule's preperiod, the pair
/// `(π₂ₙ(x), Pₙ)` repeats with period dividing the lcm of the two periods,
/// so one block past the preperiods decides the quantifier.
pub fn activation(controls: &ControlSchedule, x: &UpStream) -> Option<u64> {
    let spectrum = ProjectionSpectrum::of(x);
    let (c_start, c_len) = controls.period();
    let start = spectrum.cycle_start().div_ceil(2).max(c_start);
    let end = start + lcm(spectrum.cycle_len(), c_len);
    (0..end).find(|&n| controls.control(n).contains(spectrum.entry(2 * n)))
}

fn decide(s: &SuccessorSet, x: &UpStream, least: Option<u64>) -> Membership {
    let sigma = least.is_some_and(|n| s.base.membership_up(&x.project(2 * n + 1)).is_in());
    Membership::from_bool(match s.kind {
        SuccessorKind::Sigma => sigma,
        SuccessorKind::R => least.is_none(),
        SuccessorKind::Pi => sigma || least.is_none(),
    })
}

pub fn successor_member(s: &SuccessorSet, x: &UpStream) -> Membership {
    decide(s, x, activation(&s.controls, x))
}

/// The definition applied to `π₀(x), π₂(x), ..., π₂ₘₐₓ(x)` directly, taking
/// no activation up to `max_n` as no activation at all.
pub fn successor_member_bounded(s: &SuccessorSet, x: &UpStream, max_n: u64) -> Membership {
    let least = (0..=max_n).find(|&n| s.controls.control(n).contains(&x.project(2 * n)));
    decide(s, x, least)
}

/// `P̂₂ₙ = P̂₂ₙ₊₁ = Pₙ`.
pub fn hatted(controls: &ControlSchedule) -> ControlSchedule {
    let doubled = controls
        .explicit()
        .iter()
        .flat_map(|c| [c.clone(), c.clone()])
        .collect();
    ControlSchedule::new(doubled, controls.tail()).expect("same sets as a valid schedule")
}

/// Given `σ⁰` reducing `A` to `Σ^ξ(B)` and `σ¹` reducing `A` to `Π^ξ(B)` in
/// the Wadge game, builds `τ` for the activation game over the hatted
/// controls: rows `4k`, `4k+1` are `π₂ₖ(σ⁰)`, `π₂ₖ₊₁(σ⁰)` and rows `4k+2`,
/// `4k+3` are `π₂ₖ(σ¹)`, `π₂ₖ₊₁(σ¹)`.
///
/// Both inputs are checked on `samples`: each must win there, and
/// `f_σ⁰(x) ∈ R ⇒ x ∉ A ⇒ f_σ¹(x) ∉ R` must hold.
pub fn successor_merge(
    sigma0: StrategyRef,
    sigma1: StrategyRef,
    a: &DetOmegaAutomaton,
    b: &DetOmegaAutomaton,
    controls: &ControlSchedule,
    samples: &[UpStream],
) -> Result<(CompositeStrategy, ControlSchedule)> {
    let w = make_base_game(BaseKind::W);
    let set = |kind| SuccessorSet {
        base: b.clone(),
        controls: controls.clone(),
        kind,
    };
    let (sigma_b, pi_b) = (set(SuccessorKind::Sigma), set(SuccessorKind::Pi));
    for x in samples {
        let fail = || Error::WitnessFailure { sample: x.clone() };
        let y0 = eval_exact(&w, &*sigma0, x, 0).map_err(|_| fail())?;
        let y1 = eval_exact(&w, &*sigma1, x, 0).map_err(|_| fail())?;
        let in_a = a.membership_up(x).is_in();
        let a0 = activation(controls, &y0);
        let a1 = activation(controls, &y1);
        let wins =
            decide(&sigma_b, &y0, a0).is_in() == in_a && decide(&pi_b, &y1, a1).is_in() == in_a;
        let chain = (a0.is_some() || !in_a) && (in_a || a1.is_some());
        if !wins || !chain {
            return Err(fail());
        }
    }
    let sigmas = [sigma0, sigma1];
    let tau = CompositeStrategy::family(
        Vec::new(),
        move |r| {
            let i = (r % 4 / 2) as usize;
            Arc::new(project_strategy(sigmas[i].clone(), 2 * (r / 4) + r % 2)) as StrategyRef
        },
        None,
    );
    Ok((tau, hatted(controls)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::omega::gallery;
    use crate::streams::{StreamView, TensorView};
    use alloc::vec;

    fn z_schedule() -> ControlSchedule {
        ControlSchedule::repeat(gallery::canonical_pi1()).unwrap()
    }

    fn set(kind: SuccessorKind) -> SuccessorSet {
        SuccessorSet {
            base: gallery::cylinder(&[0]),
            controls: z_schedule(),
            kind,
        }
    }

    /// Row 0 zeros, row 1 constant `c`, other rows ones.
    fn coded(c: u64) -> UpStream {
        // rows are read off k mod 4 for rows 0 and 1; deeper rows are all 1
        let period: Vec<u64> = (0..4)
            .map(|k| {
                if k % 2 == 0 {
                    0
                } else if k == 1 {
                    c
                } else {
                    1
                }
            })
            .collect();
        UpStream::periodic(period).unwrap()
    }

    #[test]
    fn sigma_example() {
        let x = coded(0);
        assert_eq!(x.project(0), UpStream::zeros());
        assert!(successor_member(&set(SuccessorKind::Sigma), &x).is_in());
        assert!(!successor_member(&set(SuccessorKind::Sigma), &coded(1)).is_in());
        assert!(!successor_member(&set(SuccessorKind::R), &coded(1)).is_in());
    }

    #[test]
    fn residual_example() {
        let x = UpStream::constant(1);
        assert!(successor_member(&set(SuccessorKind::R), &x).is_in());
        assert!(successor_member(&set(SuccessorKind::Pi), &x).is_in());
        assert!(!successor_member(&set(SuccessorKind::Sigma), &x).is_in());
    }

    #[test]
    fn late_activation_matches_bounded() {
        // row 6 is the first zero even row
        let x =
            UpStream::periodic(TensorView::from_fn(|n, _| u64::from(n != 6)).take(1 << 8)).unwrap();
        assert_eq!(activation(&z_schedule(), &x), Some(3));
        for kind in [SuccessorKind::Sigma, SuccessorKind::Pi, SuccessorKind::R] {
            assert_eq!(
                successor_member(&set(kind), &x),
                successor_member_bounded(&set(kind), &x, 16)
            );
        }
    }

    #[test]
    fn hatted_doubles() {
        let c = ControlSchedule::new(
            vec![gallery::canonical_pi1(), gallery::canonical_pi2()],
            crate::composite::Tail::Cycle,
        )
        .unwrap();
        let h = hatted(&c);
        for n in 0..12 {
            assert_eq!(h.control(n), c.control(n / 2));
        }
    }

    fn merge_wins(d: crate::demos::SuccessorDemo) {
        use crate::composite::make_gfxi;
        use crate::game::{adjudicate_up, Winner};
        let samples: Vec<UpStream> = (0..6)
            .map(|i| UpStream::new(vec![i % 3], vec![i, 1]).unwrap())
            .collect();
        let (tau, hat) =
            successor_merge(d.sigma0, d.sigma1, &d.a, &d.b, &d.controls, &samples).unwrap();
        let g = make_gfxi(&make_base_game(BaseKind::W), hat).unwrap();
        for x in &samples {
            assert_eq!(
                adjudicate_up(&g, x, &tau, &d.a, &d.b, 16).unwrap().winner,
                Winner::II,
                "x = {x:?}"
            );
        }
    }

    #[test]
    fn merge_demos_win() {
        merge_wins(crate::demos::successor_cylinder());
        merge_wins(crate::demos::successor_empty());
    }

    #[test]
    fn broken_merge_reports_sample() {
        let d = crate::demos::successor_broken();
        let x = UpStream::constant(4);
        let r = successor_merge(
            d.sigma0,
            d.sigma1,
            &d.a,
            &d.b,
            &d.controls,
            &[UpStream::zeros(), x.clone()],
        );
        assert_eq!(r.err(), Some(Error::WitnessFailure { sample: x }));
    }
}
