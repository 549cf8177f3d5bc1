//! Letter-to-letter reductions of automaton languages to the canonical
//! control sets.

use alloc::vec::Vec;

use super::DetOmegaAutomaton;
use crate::error::{Error, Result};
use crate::strategy::{MealyStrategy, Out};

/// Runs `a` and writes `bit(state entered)` on every step.
fn mirror(a: &DetOmegaAutomaton, bit: impl Fn(usize) -> bool) -> MealyStrategy {
    let out = |q: usize| Out::Nat(if bit(q) { 0 } else { 1 });
    let steps: Vec<_> = a
        .edge_list()
        .into_iter()
        .map(|(src, label, dst)| (src, label, dst, out(dst)))
        .collect();
    MealyStrategy::new(a.states(), a.initial(), &steps).expect("edges of a complete automaton")
}

/// `x ∈ L(a)` iff the output is the zero stream: 0 while the run can still
/// be accepted, 1 forever once it cannot.
pub fn reduce_safety_to_z(a: &DetOmegaAutomaton) -> Result<MealyStrategy> {
    if !a.is_safety() {
        return Err(Error::NotSafety);
    }
    let live = a.facts().live;
    Ok(mirror(a, |q| live[q]))
}

/// `x ∈ L(a)` iff the output has infinitely many zeros: 0 exactly when an
/// accepting state is entered.
pub fn reduce_buchi_to_inf0(a: &DetOmegaAutomaton) -> Result<MealyStrategy> {
    if !a.is_buchi_shape() {
        return Err(Error::NotBuchi);
    }
    Ok(mirror(a, |q| a.priority(q) == 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{eval_exact, make_base_game, BaseKind};
    use crate::omega::gallery;
    use crate::streams::UpStream;
    use alloc::vec;

    fn image(t: &MealyStrategy, x: &UpStream) -> UpStream {
        eval_exact(&make_base_game(BaseKind::L), t, x, 0).unwrap()
    }

    #[test]
    fn safety_examples() {
        let z = gallery::zero_stream();
        let t = reduce_safety_to_z(&z).unwrap();
        assert_eq!(image(&t, &UpStream::zeros()), UpStream::zeros());

        let n3 = gallery::cylinder(&[3]);
        let t = reduce_safety_to_z(&n3).unwrap();
        assert_eq!(
            image(&t, &UpStream::new(vec![3], vec![8, 1]).unwrap()),
            UpStream::zeros()
        );
        assert!(image(&t, &UpStream::new(vec![4], vec![3]).unwrap())
            .take(4)
            .contains(&1));

        let t = reduce_safety_to_z(&gallery::empty()).unwrap();
        assert!(!gallery::zero_stream()
            .membership_up(&image(&t, &UpStream::zeros()))
            .is_in());

        assert_eq!(
            reduce_safety_to_z(&gallery::infinitely_many_zeros()),
            Err(Error::NotSafety)
        );
    }

    #[test]
    fn buchi_reduction_preserves_membership() {
        let inf0 = gallery::infinitely_many_zeros();
        let t = reduce_buchi_to_inf0(&inf0).unwrap();
        for x in [
            UpStream::zeros(),
            UpStream::periodic(vec![5, 0]).unwrap(),
            UpStream::new(vec![0, 0, 0], vec![7]).unwrap(),
            UpStream::constant(2),
        ] {
            assert_eq!(inf0.membership_up(&image(&t, &x)), inf0.membership_up(&x));
        }
        assert_eq!(
            reduce_buchi_to_inf0(&inf0.complement()),
            Err(Error::NotBuchi)
        );
    }
}
