use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{Play, PlayBox, Strategy};
use crate::error::{Error, Result};
use crate::moves::Move;
use crate::streams::{Digit, UpStream};

/// What a transducer step writes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Emit {
    Skip,
    Nat(Digit),
    Echo,
}

impl Emit {
    fn apply(self, d: Digit) -> Option<Digit> {
        match self {
            Emit::Skip => None,
            Emit::Nat(n) => Some(n),
            Emit::Echo => Some(d),
        }
    }
}

/// Finite-state machine writing at most one digit per digit read.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DelayTransducer {
    initial: usize,
    edges: Vec<BTreeMap<Digit, (usize, Emit)>>,
    otherwise: Vec<(usize, Emit)>,
}

impl DelayTransducer {
    pub fn new(
        states: usize,
        initial: usize,
        steps: &[(usize, Option<Digit>, usize, Emit)],
    ) -> Result<Self> {
        if states == 0 || initial >= states {
            return Err(Error::InvalidAutomaton(
                "bad state count or initial state".into(),
            ));
        }
        let mut edges = vec![BTreeMap::new(); states];
        let mut otherwise = vec![None; states];
        for &(src, label, dst, e) in steps {
            if src >= states || dst >= states {
                return Err(Error::InvalidAutomaton(format!(
                    "step {src} -> {dst} out of range"
                )));
            }
            let clash = match label {
                Some(d) => edges[src]
                    .insert(d, (dst, e))
                    .is_some_and(|old| old != (dst, e)),
                None => otherwise[src]
                    .replace((dst, e))
                    .is_some_and(|old| old != (dst, e)),
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
        Ok(DelayTransducer {
            initial,
            edges,
            otherwise,
        })
    }

    pub fn identity() -> Self {
        DelayTransducer::new(1, 0, &[(0, None, 0, Emit::Echo)]).unwrap()
    }

    /// Output digit `i` is input digit `i + k`.
    pub fn shift(k: usize) -> Self {
        let mut steps: Vec<_> = (0..k).map(|i| (i, None, i + 1, Emit::Skip)).collect();
        steps.push((k, None, k, Emit::Echo));
        DelayTransducer::new(k + 1, 0, &steps).unwrap()
    }

    /// The constant `c` after `k` silent steps.
    pub fn constant_after(c: Digit, k: usize) -> Self {
        let mut steps: Vec<_> = (0..k).map(|i| (i, None, i + 1, Emit::Skip)).collect();
        steps.push((k, None, k, Emit::Nat(c)));
        DelayTransducer::new(k + 1, 0, &steps).unwrap()
    }

    pub fn states(&self) -> usize {
        self.otherwise.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn step(&self, q: usize, d: Digit) -> (usize, Option<Digit>) {
        let (next, e) = self.edges[q].get(&d).copied().unwrap_or(self.otherwise[q]);
        (next, e.apply(d))
    }

    pub fn step_list(&self) -> Vec<(usize, Option<Digit>, usize, Emit)> {
        let mut out = Vec::new();
        for q in 0..self.states() {
            for (&d, &(dst, e)) in &self.edges[q] {
                out.push((q, Some(d), dst, e));
            }
            let (dst, e) = self.otherwise[q];
            out.push((q, None, dst, e));
        }
        out
    }

    fn successors(&self, q: usize) -> impl Iterator<Item = (usize, Emit)> + '_ {
        self.edges[q]
            .values()
            .copied()
            .chain(core::iter::once(self.otherwise[q]))
    }

    /// Largest number of silent steps along any run; `None` if unbounded.
    pub fn budget(&self) -> Option<u64> {
        let n = self.states();
        let mut best: Vec<Option<u64>> = vec![None; n];
        best[self.initial] = Some(0);
        // longest path; still improving after n rounds means a silent cycle
        for round in 0..=n {
            let mut changed = false;
            for q in 0..n {
                let Some(b) = best[q] else { continue };
                for (dst, e) in self.successors(q) {
                    let nb = b + u64::from(e == Emit::Skip);
                    if best[dst].is_none_or(|old| nb > old) {
                        best[dst] = Some(nb);
                        changed = true;
                    }
                }
            }
            if !changed {
                return best.into_iter().flatten().max();
            }
            if round == n {
                break;
            }
        }
        None
    }

    /// Digits written while reading `input`.
    pub fn run(&self, input: &[Digit]) -> Vec<Digit> {
        let mut q = self.initial;
        let mut out = Vec::new();
        for &d in input {
            let (next, e) = self.step(q, d);
            out.extend(e);
            q = next;
        }
        out
    }

    /// The transduced real, when infinitely many digits are written.
    pub fn apply_up(&self, x: &UpStream) -> Option<UpStream> {
        let p = x.prefix().len();
        let l = x.period().len();
        let mut q = self.initial;
        let mut out = Vec::new();
        let mut seen = BTreeMap::new();
        let mut t = 0usize;
        loop {
            if t >= p {
                let pos = (t - p) % l;
                if let Some(&start) = seen.get(&(q, pos)) {
                    let period = out.split_off(start);
                    return UpStream::new(out, period);
                }
                seen.insert((q, pos), out.len());
            }
            let (next, e) = self.step(q, x.at(t as u64));
            out.extend(e);
            q = next;
            t += 1;
        }
    }
}

/// II's strategy in the `k`-Lipschitz game realising `t`: `k` passes, then
/// the transducer's digits in order.
#[derive(Clone, Debug)]
pub struct CompiledTransducer {
    t: DelayTransducer,
    k: u64,
}

pub fn lipschitz_compile(t: DelayTransducer, k: u64) -> Result<CompiledTransducer> {
    match t.budget() {
        Some(b) if b <= k => Ok(CompiledTransducer { t, k }),
        found => Err(Error::BudgetViolation { budget: k, found }),
    }
}

impl CompiledTransducer {
    pub fn transducer(&self) -> &DelayTransducer {
        &self.t
    }

    pub fn lead_in(&self) -> u64 {
        self.k
    }
}

#[derive(Clone)]
struct CompiledPlay<'a> {
    t: &'a DelayTransducer,
    k: u64,
    q: usize,
    turn: u64,
    buffer: VecDeque<Digit>,
}

impl<'a> Play<'a> for CompiledPlay<'a> {
    fn respond(&mut self, d: Digit) -> Move {
        let (next, e) = self.t.step(self.q, d);
        self.q = next;
        self.buffer.extend(e);
        self.turn += 1;
        if self.turn <= self.k {
            return Move::PASS;
        }
        // the budget guarantees a digit is waiting
        Move::Nat(self.buffer.pop_front().expect("delay budget respected"))
    }

    fn key(&self) -> Option<Vec<u64>> {
        let mut key = vec![self.q as u64, self.turn.min(self.k)];
        key.extend(self.buffer.iter().copied());
        Some(key)
    }

    fn fork(&self) -> PlayBox<'a> {
        Box::new(self.clone())
    }
}

impl Strategy for CompiledTransducer {
    fn start(&self) -> PlayBox<'_> {
        Box::new(CompiledPlay {
            t: &self.t,
            k: self.k,
            q: self.t.initial,
            turn: 0,
            buffer: VecDeque::new(),
        })
    }

    fn explicit_digits(&self) -> BTreeSet<Digit> {
        let mut ds = BTreeSet::new();
        for (_, label, _, e) in self.t.step_list() {
            ds.extend(label);
            if let Emit::Nat(n) = e {
                ds.insert(n);
            }
        }
        ds
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budgets() {
        assert_eq!(DelayTransducer::identity().budget(), Some(0));
        assert_eq!(DelayTransducer::shift(2).budget(), Some(2));
        let stall =
            DelayTransducer::new(2, 0, &[(0, None, 1, Emit::Echo), (1, None, 0, Emit::Skip)])
                .unwrap();
        assert_eq!(stall.budget(), None);
        assert!(matches!(
            lipschitz_compile(DelayTransducer::shift(2), 1),
            Err(Error::BudgetViolation { .. })
        ));
    }

    #[test]
    fn shift_on_up_input() {
        let x = UpStream::new(vec![1, 2], vec![3, 4]).unwrap();
        let y = DelayTransducer::shift(1).apply_up(&x).unwrap();
        assert_eq!(y.take(6), vec![2, 3, 4, 3, 4, 3]);
        assert_eq!(DelayTransducer::shift(1).run(&[5, 6, 7]), vec![6, 7]);
    }
}
