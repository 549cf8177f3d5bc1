use alloc::vec;
use alloc::vec::Vec;

use super::{ControlSet, DetOmegaAutomaton, RankTag};
use crate::streams::Digit;

pub fn full() -> DetOmegaAutomaton {
    DetOmegaAutomaton::new(1, 0, &[(0, None, 0)], vec![0]).unwrap()
}

pub fn empty() -> DetOmegaAutomaton {
    DetOmegaAutomaton::new(1, 0, &[(0, None, 0)], vec![1]).unwrap()
}

/// `{x : x(n) = 0 for all n}`.
pub fn zero_stream() -> DetOmegaAutomaton {
    DetOmegaAutomaton::new(
        2,
        0,
        &[(0, Some(0), 0), (0, None, 1), (1, None, 1)],
        vec![0, 1],
    )
    .unwrap()
}

/// `{x : x(n) = 0 for infinitely many n}`.
pub fn infinitely_many_zeros() -> DetOmegaAutomaton {
    DetOmegaAutomaton::new(
        2,
        0,
        &[(0, Some(0), 0), (0, None, 1), (1, Some(0), 0), (1, None, 1)],
        vec![0, 1],
    )
    .unwrap()
}

/// The basic open set of reals extending `s`.
pub fn cylinder(s: &[Digit]) -> DetOmegaAutomaton {
    full().prepend(s)
}

/// `{x : x(n) = m}`.
pub fn digit_equals(n: usize, m: Digit) -> DetOmegaAutomaton {
    // states 0..n skip digits, n checks, n+1 accepts, n+2 rejects
    let mut edges: Vec<(usize, Option<Digit>, usize)> = (0..n).map(|i| (i, None, i + 1)).collect();
    edges.push((n, Some(m), n + 1));
    edges.push((n, None, n + 2));
    edges.push((n + 1, None, n + 1));
    edges.push((n + 2, None, n + 2));
    let mut priority = vec![1; n + 3];
    priority[n + 1] = 0;
    DetOmegaAutomaton::new(n + 3, 0, &edges, priority).unwrap()
}

/// The canonical closed complete set: the single zero stream.
pub fn canonical_pi1() -> ControlSet {
    ControlSet::new(zero_stream(), RankTag::Closed, "Z").unwrap()
}

/// The canonical complete set of rank two: infinitely many zeros.
pub fn canonical_pi2() -> ControlSet {
    ControlSet::new(infinitely_many_zeros(), RankTag::Pi02, "INF0").unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::streams::UpStream;

    #[test]
    fn digit_equals_matches_definition() {
        let a = digit_equals(2, 5);
        assert!(a
            .membership_up(&UpStream::new(vec![0, 0, 5], vec![1]).unwrap())
            .is_in());
        assert!(!a
            .membership_up(&UpStream::new(vec![5, 5, 4], vec![5]).unwrap())
            .is_in());
        assert!(a.is_safety());
    }

    #[test]
    fn cylinder_is_clopen() {
        let c = cylinder(&[3]);
        assert!(c
            .membership_up(&UpStream::new(vec![3], vec![9]).unwrap())
            .is_in());
        assert!(!c
            .membership_up(&UpStream::new(vec![4], vec![3]).unwrap())
            .is_in());
        assert!(c.complement().is_safety());
    }
}
