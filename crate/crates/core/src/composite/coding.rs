//! Codings used by the composite games: the enumeration of `k`-tuples of
//! digits by single numbers, and the self-delimiting automaton codes.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::moves::Move;
use crate::omega::{gallery, DetOmegaAutomaton};
use crate::streams::{checked_pair, unpair, Digit};

/// The `m`-th sequence of length `k ≥ 1`: `[m]` for `k = 1`, otherwise
/// `[a] ⌢ enum_seq(k - 1, b)` where `(a, b) = unpair(m)`.
pub fn enum_seq(k: usize, m: u64) -> Vec<Digit> {
    assert!(k >= 1, "sequences have positive length");
    let mut out = Vec::with_capacity(k);
    let mut m = m;
    for _ in 1..k {
        let (a, b) = unpair(m);
        out.push(a);
        m = b;
    }
    out.push(m);
    out
}

/// Inverse of [`enum_seq`]; `None` if the index exceeds `u64`.
pub fn enum_index(s: &[Digit]) -> Option<u64> {
    let (&last, init) = s.split_last()?;
    init.iter()
        .rev()
        .try_fold(last, |acc, &a| checked_pair(a, acc))
}

fn big_pair(a: Digit, b: &BigUint) -> BigUint {
    (((b << 1u32) + 1u32) << a as usize) - 1u32
}

fn big_unpair(m: &BigUint) -> (Digit, BigUint) {
    let k = m + 1u32;
    let a = k.trailing_zeros().expect("positive");
    (a, ((k >> a as usize) - 1u32) >> 1u32)
}

/// [`enum_seq`] over unbounded indices; `None` when an entry exceeds `u64`.
pub fn enum_seq_big(k: usize, m: &BigUint) -> Option<Vec<Digit>> {
    assert!(k >= 1, "sequences have positive length");
    let mut out = Vec::with_capacity(k);
    let mut m = m.clone();
    for _ in 1..k {
        let (a, b) = big_unpair(&m);
        out.push(a);
        m = b;
    }
    out.push(u64::try_from(&m).ok()?);
    Some(out)
}

pub fn enum_index_big(s: &[Digit]) -> BigUint {
    let (&last, init) = s.split_last().expect("sequences have positive length");
    init.iter()
        .rev()
        .fold(BigUint::from(last), |acc, &a| big_pair(a, &acc))
}

/// A move carrying the code `c`: a plain digit when it fits.
pub fn coded_move(c: BigUint) -> Move {
    match u64::try_from(&c) {
        Ok(d) => Move::Nat(d),
        Err(_) => Move::Coded(c),
    }
}

pub fn move_code(m: &Move) -> Option<BigUint> {
    match m {
        Move::Nat(d) => Some(BigUint::from(*d)),
        Move::Coded(c) => Some(c.clone()),
        _ => None,
    }
}

/// Serializes an automaton as `L` followed by `L` digits:
/// `states, initial, edges, (src, label, dst)*, priorities*`, where label `0`
/// marks the otherwise edge and `d + 1` the digit `d`.
pub fn encode_automaton(a: &DetOmegaAutomaton) -> Vec<Digit> {
    let edges = a.edge_list();
    let mut body = vec![a.states() as u64, a.initial() as u64, edges.len() as u64];
    for (src, label, dst) in edges {
        body.extend([src as u64, label.map_or(0, |d| d + 1), dst as u64]);
    }
    body.extend(a.priorities().iter().map(|&p| u64::from(p)));
    let mut out = vec![body.len() as u64];
    out.extend(body);
    out
}

/// Number of digits a code occupies, read from its first digit.
pub fn code_len(first: Digit) -> u64 {
    first.saturating_add(1)
}

/// Reads an automaton from the start of `s`; malformed or truncated codes
/// give the empty set.
pub fn decode_automaton(s: &[Digit]) -> DetOmegaAutomaton {
    try_decode(s).unwrap_or_else(gallery::empty)
}

fn try_decode(s: &[Digit]) -> Option<DetOmegaAutomaton> {
    let (&len, rest) = s.split_first()?;
    let body = rest.get(..usize::try_from(len).ok()?)?;
    let mut it = body.iter().copied();
    let small = |v: u64| usize::try_from(v).ok().filter(|&v| v <= 1 << 16);
    let states = small(it.next()?)?;
    let initial = small(it.next()?)?;
    let n_edges = small(it.next()?)?;
    let mut edges = Vec::with_capacity(n_edges);
    for _ in 0..n_edges {
        let src = small(it.next()?)?;
        let label = it.next()?;
        let dst = small(it.next()?)?;
        edges.push((src, label.checked_sub(1), dst));
    }
    let priorities = (0..states)
        .map(|_| it.next().and_then(|p| u32::try_from(p).ok()))
        .collect::<Option<Vec<_>>>()?;
    if it.next().is_some() {
        return None;
    }
    DetOmegaAutomaton::new(states, initial, &edges, priorities).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::streams::UpStream;

    #[test]
    fn enumeration_examples() {
        assert_eq!(enum_seq(1, 7), vec![7]);
        assert_eq!(enum_seq(2, 5), vec![1, 1]);
        for k in 1..=4 {
            for m in 0..1000 {
                assert_eq!(enum_index(&enum_seq(k, m)), Some(m));
            }
        }
    }

    #[test]
    fn big_enumeration_round_trip() {
        let s: Vec<Digit> = (0..40).map(|i| i % 7).collect();
        let m = enum_index_big(&s);
        assert_eq!(enum_seq_big(s.len(), &m), Some(s));
        assert_eq!(
            enum_index_big(&[3, 4]),
            BigUint::from(enum_index(&[3, 4]).unwrap())
        );
    }

    #[test]
    fn automaton_codes() {
        let a = gallery::infinitely_many_zeros();
        let mut code = encode_automaton(&a);
        code.extend([9, 9, 9]);
        let b = decode_automaton(&code);
        assert!(b.equivalent(&a));
        assert!(decode_automaton(&[5, 1]).is_empty());
        assert!(decode_automaton(&[]).is_empty());
        // one state, no priority listed
        assert!(decode_automaton(&[3, 1, 0, 0]).is_empty());
        let full = encode_automaton(&gallery::full());
        assert!(decode_automaton(&full)
            .membership_up(&UpStream::constant(3))
            .is_in());
    }
}
