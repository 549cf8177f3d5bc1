//! Complement, intersection, union and prefixing.
//!
//! Products of two parity conditions are turned back into a single parity
//! condition with a latest appearance record over the disjoint union of the
//! two priority sets.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use super::DetOmegaAutomaton;
use crate::streams::Digit;

type Color = (u8, u32);

#[derive(Clone, Copy)]
enum Combine {
    And,
    Or,
}

impl DetOmegaAutomaton {
    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        for p in &mut out.priority {
            *p += 1;
        }
        out
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.product(other, Combine::And)
    }

    pub fn union(&self, other: &Self) -> Self {
        self.product(other, Combine::Or)
    }

    /// `{s⌢x : x ∈ L(self)}`.
    pub fn prepend(&self, s: &[Digit]) -> Self {
        if s.is_empty() {
            return self.clone();
        }
        let k = s.len();
        let sink = k + self.states();
        let shift = |q: usize| q + k;
        let mut edges = Vec::new();
        for (i, &d) in s.iter().enumerate() {
            let next = if i + 1 == k {
                shift(self.initial)
            } else {
                i + 1
            };
            edges.push((i, Some(d), next));
            edges.push((i, None, sink));
        }
        for (q, label, t) in self.edge_list() {
            edges.push((shift(q), label, shift(t)));
        }
        edges.push((sink, None, sink));
        let mut priority = vec![1; k];
        priority.extend_from_slice(&self.priority);
        priority.push(1);
        DetOmegaAutomaton::new(sink + 1, 0, &edges, priority).unwrap()
    }

    fn product(&self, other: &Self, how: Combine) -> Self {
        let colors: Vec<Color> = {
            let a: BTreeSet<u32> = self.priority.iter().copied().collect();
            let b: BTreeSet<u32> = other.priority.iter().copied().collect();
            a.into_iter()
                .map(|p| (0, p))
                .chain(b.into_iter().map(|p| (1, p)))
                .collect()
        };
        let n = colors.len() as u32;
        let accepts = |hit: &[Color]| {
            let min_of = |tag: u8| hit.iter().filter(|c| c.0 == tag).map(|c| c.1).min();
            let ok = |m: Option<u32>| m.is_some_and(|m| m % 2 == 0);
            match how {
                Combine::And => ok(min_of(0)) && ok(min_of(1)),
                Combine::Or => ok(min_of(0)) || ok(min_of(1)),
            }
        };

        type Key = (usize, usize, Vec<Color>, u32);
        let mut ids: BTreeMap<Key, usize> = BTreeMap::new();
        let mut keys: Vec<Key> = Vec::new();
        let mut queue = VecDeque::new();
        let init: Key = (self.initial, other.initial, colors.clone(), 2 * n + 1);
        ids.insert(init.clone(), 0);
        keys.push(init);
        queue.push_back(0usize);
        let mut edges = Vec::new();

        while let Some(id) = queue.pop_front() {
            let (q1, q2, record, _) = keys[id].clone();
            let mut labels: Vec<Option<Digit>> = self.edges[q1]
                .keys()
                .chain(other.edges[q2].keys())
                .copied()
                .collect::<BTreeSet<_>>()
                .into_iter()
                .map(Some)
                .collect();
            labels.push(None);
            for label in labels {
                let (t1, t2) = match label {
                    Some(d) => (self.step(q1, d), other.step(q2, d)),
                    None => (self.otherwise[q1], other.otherwise[q2]),
                };
                let moved = [(0u8, self.priority[t1]), (1u8, other.priority[t2])];
                let h = moved
                    .iter()
                    .map(|c| record.iter().position(|r| r == c).unwrap())
                    .max()
                    .unwrap();
                let hit = &record[..=h];
                let pri = 2 * (n - hit.len() as u32) + u32::from(!accepts(hit));
                let mut next_record: Vec<Color> = moved.to_vec();
                next_record.extend(record.iter().filter(|c| !moved.contains(c)));
                let key: Key = (t1, t2, next_record, pri);
                let tid = *ids.entry(key.clone()).or_insert_with(|| {
                    keys.push(key);
                    queue.push_back(keys.len() - 1);
                    keys.len() - 1
                });
                edges.push((id, label, tid));
            }
        }
        let priority = keys.iter().map(|k| k.3).collect();
        DetOmegaAutomaton::new(keys.len(), 0, &edges, priority).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::super::gallery::*;
    use crate::streams::UpStream;

    fn samples() -> alloc::vec::Vec<UpStream> {
        let mut out = alloc::vec::Vec::new();
        for a in 0..3u64 {
            for b in 0..3u64 {
                out.push(UpStream::new(alloc::vec![a], alloc::vec![b]).unwrap());
                out.push(UpStream::new(alloc::vec![], alloc::vec![a, b]).unwrap());
                out.push(UpStream::new(alloc::vec![a, b, 0], alloc::vec![b, 1, a]).unwrap());
            }
        }
        out
    }

    #[test]
    fn intersection_of_z_and_inf0_is_z() {
        let z = zero_stream();
        let both = z.intersection(&infinitely_many_zeros());
        for x in samples() {
            assert_eq!(both.membership_up(&x), z.membership_up(&x), "{x:?}");
        }
        assert!(both.equivalent(&z));
    }

    #[test]
    fn de_morgan() {
        let a = infinitely_many_zeros();
        let b = cylinder(&[1]).union(&zero_stream());
        let lhs = a.union(&b).complement();
        let rhs = a.complement().intersection(&b.complement());
        for x in samples() {
            assert_eq!(lhs.membership_up(&x), rhs.membership_up(&x), "{x:?}");
        }
    }

    #[test]
    fn prepend_is_cylinder_shift() {
        let a = infinitely_many_zeros();
        let p = a.prepend(&[0, 0]);
        for x in samples() {
            assert_eq!(p.membership_up(&x.prepend(&[0, 0])), a.membership_up(&x));
            assert!(!p.membership_up(&x.prepend(&[0, 1])).is_in());
        }
    }
}
