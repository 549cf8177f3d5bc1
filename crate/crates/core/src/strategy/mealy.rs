use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{Play, PlayBox, Strategy};
use crate::error::{Error, Result};
use crate::moves::{Move, RowInner};
use crate::streams::{Digit, UpStream};

/// Output template of a Mealy transition. `Echo` repeats I's digit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Out {
    Nat(Digit),
    Echo,
    Pass,
    Erase,
    Bt,
    Row(u64, RowOut),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RowOut {
    Pass,
    Nat(Digit),
    Echo,
}

impl Out {
    pub fn apply(self, d: Digit) -> Move {
        match self {
            Out::Nat(n) => Move::Nat(n),
            Out::Echo => Move::Nat(d),
            Out::Pass => Move::PASS,
            Out::Erase => Move::ERASE,
            Out::Bt => Move::BT,
            Out::Row(row, RowOut::Pass) => Move::Row {
                row,
                inner: RowInner::Pass,
            },
            Out::Row(row, RowOut::Nat(n)) => Move::Row {
                row,
                inner: RowInner::Nat(n),
            },
            Out::Row(row, RowOut::Echo) => Move::Row {
                row,
                inner: RowInner::Nat(d),
            },
        }
    }
}

/// A finite-state strategy for II: each transition reads I's digit and
/// emits one move.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MealyStrategy {
    initial: usize,
    edges: Vec<BTreeMap<Digit, (usize, Out)>>,
    otherwise: Vec<(usize, Out)>,
}

impl MealyStrategy {
    /// `steps` are `(src, label, dst, out)`; `None` labels are otherwise edges.
    pub fn new(
        states: usize,
        initial: usize,
        steps: &[(usize, Option<Digit>, usize, Out)],
    ) -> Result<Self> {
        if states == 0 || initial >= states {
            return Err(Error::InvalidAutomaton(
                "bad state count or initial state".into(),
            ));
        }
        let mut edges = vec![BTreeMap::new(); states];
        let mut otherwise = vec![None; states];
        for &(src, label, dst, out) in steps {
            if src >= states || dst >= states {
                return Err(Error::InvalidAutomaton(format!(
                    "step {src} -> {dst} out of range"
                )));
            }
            let clash = match label {
                Some(d) => edges[src]
                    .insert(d, (dst, out))
                    .is_some_and(|old| old != (dst, out)),
                None => otherwise[src]
                    .replace((dst, out))
                    .is_some_and(|old| old != (dst, out)),
            };
            if clash {
                return Err(Error::InvalidAutomaton(format!(
                    "nondeterministic step from state {src}"
                )));
            }
        }
        let otherwise = otherwise
            .into_iter()
            .enumerate()
            .map(|(q, o)| {
                o.ok_or_else(|| Error::InvalidAutomaton(format!("state {q} has no otherwise step")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MealyStrategy {
            initial,
            edges,
            otherwise,
        })
    }

    /// A one-state machine emitting `out` forever.
    pub fn always(out: Out) -> Self {
        MealyStrategy {
            initial: 0,
            edges: vec![BTreeMap::new()],
            otherwise: vec![(0, out)],
        }
    }

    /// Copies I's digits.
    pub fn copy() -> Self {
        Self::always(Out::Echo)
    }

    /// Plays the digits of `y` regardless of I.
    pub fn constant(y: &UpStream) -> Self {
        let p = y.prefix().len();
        let n = y.size();
        let steps: Vec<_> = (0..n)
            .map(|i| {
                let next = if i + 1 == n { p } else { i + 1 };
                (i, None, next, Out::Nat(y.at(i as u64)))
            })
            .collect();
        Self::new(n, 0, &steps).unwrap()
    }

    pub fn states(&self) -> usize {
        self.otherwise.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn step(&self, q: usize, d: Digit) -> (usize, Move) {
        let (next, out) = *self.edges[q].get(&d).unwrap_or(&self.otherwise[q]);
        (next, out.apply(d))
    }

    pub fn step_list(&self) -> Vec<(usize, Option<Digit>, usize, Out)> {
        let mut out = Vec::new();
        for q in 0..self.states() {
            for (&d, &(t, o)) in &self.edges[q] {
                out.push((q, Some(d), t, o));
            }
            let (t, o) = self.otherwise[q];
            out.push((q, None, t, o));
        }
        out
    }

    /// The product machine of [`compose`](super::compose): `inner`'s digits
    /// drive `outer`, and moves of `inner` other than digits become passes.
    pub fn compose(outer: &MealyStrategy, inner: &MealyStrategy) -> MealyStrategy {
        // `Some(e)`: a known digit; `None`: the fresh digit I just played
        let outer_step = |p: usize, e: Option<Digit>| -> (usize, Out) {
            let (next, out) = match e {
                Some(e) => *outer.edges[p].get(&e).unwrap_or(&outer.otherwise[p]),
                None => outer.otherwise[p],
            };
            let out = match (out, e) {
                (Out::Echo, Some(e)) => Out::Nat(e),
                (Out::Row(r, RowOut::Echo), Some(e)) => Out::Row(r, RowOut::Nat(e)),
                (o, _) => o,
            };
            (next, out)
        };
        let step = |(p, q): (usize, usize), d: Option<Digit>| -> ((usize, usize), Out) {
            let (q2, out) = match d {
                Some(d) => *inner.edges[q].get(&d).unwrap_or(&inner.otherwise[q]),
                None => inner.otherwise[q],
            };
            let e = match out {
                Out::Nat(v) => Some(Some(v)),
                Out::Echo => Some(d),
                _ => None,
            };
            match e {
                Some(e) => {
                    let (p2, o) = outer_step(p, e);
                    ((p2, q2), o)
                }
                None => ((p, q2), Out::Pass),
            }
        };
        let mut index = BTreeMap::new();
        let mut order = vec![(outer.initial, inner.initial)];
        index.insert(order[0], 0usize);
        let mut steps = Vec::new();
        let mut i = 0;
        while i < order.len() {
            let (p, q) = order[i];
            let labels: BTreeSet<Digit> = inner.edges[q]
                .keys()
                .chain(outer.edges[p].keys())
                .copied()
                .collect();
            let moves = labels.into_iter().map(Some).chain(core::iter::once(None));
            for d in moves {
                let (dst, out) = step((p, q), d);
                let next = *index.entry(dst).or_insert_with(|| {
                    order.push(dst);
                    order.len() - 1
                });
                steps.push((i, d, next, out));
            }
            i += 1;
        }
        MealyStrategy::new(order.len(), 0, &steps).expect("total by construction")
    }
}

struct MealyPlay<'a> {
    machine: &'a MealyStrategy,
    state: usize,
}

impl<'a> Play<'a> for MealyPlay<'a> {
    fn respond(&mut self, d: Digit) -> Move {
        let (next, mv) = self.machine.step(self.state, d);
        self.state = next;
        mv
    }

    fn key(&self) -> Option<Vec<u64>> {
        Some(vec![self.state as u64])
    }

    fn fork(&self) -> PlayBox<'a> {
        Box::new(MealyPlay {
            machine: self.machine,
            state: self.state,
        })
    }
}

impl Strategy for MealyStrategy {
    fn start(&self) -> PlayBox<'_> {
        Box::new(MealyPlay {
            machine: self,
            state: self.initial,
        })
    }

    fn explicit_digits(&self) -> BTreeSet<Digit> {
        let mut out: BTreeSet<Digit> = self.edges.iter().flat_map(|m| m.keys().copied()).collect();
        for (_, o) in self
            .edges
            .iter()
            .flat_map(|m| m.values())
            .chain(self.otherwise.iter())
        {
            if let Out::Nat(d) | Out::Row(_, RowOut::Nat(d)) = o {
                out.insert(*d);
            }
        }
        out
    }

    fn as_mealy(&self) -> Option<&MealyStrategy> {
        Some(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::responses;

    #[test]
    fn constant_machine_plays_stream() {
        let y = UpStream::new(vec![3], vec![1, 2]).unwrap();
        let m = MealyStrategy::constant(&y);
        let moves = responses(&m, &[9; 6]);
        assert_eq!(moves, [3, 1, 2, 1, 2, 1].map(Move::Nat).to_vec());
    }

    #[test]
    fn product_matches_composition() {
        use crate::strategy::compose;
        use alloc::sync::Arc;
        // outer: 0 while zeros come, then 1 forever; inner: pass, then echo,
        // except that 3 is answered by 0
        let outer = MealyStrategy::new(
            2,
            0,
            &[
                (0, Some(0), 0, Out::Nat(0)),
                (0, None, 1, Out::Nat(1)),
                (1, None, 1, Out::Echo),
            ],
        )
        .unwrap();
        let inner = MealyStrategy::new(
            2,
            0,
            &[
                (0, None, 1, Out::Pass),
                (1, Some(3), 1, Out::Nat(0)),
                (1, None, 1, Out::Echo),
            ],
        )
        .unwrap();
        let lazy = compose(Arc::new(outer.clone()), Arc::new(inner.clone()));
        let product = MealyStrategy::compose(&outer, &inner);
        for input in [
            [5, 3, 0, 3, 2, 7, 1, 0],
            [0, 0, 3, 0, 3, 4, 4, 9],
            [1, 2, 3, 4, 5, 6, 7, 8],
        ] {
            assert_eq!(responses(&product, &input), responses(&lazy, &input));
        }
    }

    #[test]
    fn rejects_missing_otherwise() {
        assert!(MealyStrategy::new(1, 0, &[(0, Some(1), 0, Out::Echo)]).is_err());
    }
}
