use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::moves::Move;
use crate::streams::{Digit, UpStream};

/// A running cursor of a player I strategy. I moves first each turn, so
/// `digit` is I's next move given the II moves observed so far.
pub trait PlayI<'a> {
    fn digit(&self) -> Digit;
    fn observe(&mut self, m: &Move);
    fn key(&self) -> Option<Vec<u64>>;
    fn fork(&self) -> PlayIBox<'a>;
}

pub type PlayIBox<'a> = Box<dyn PlayI<'a> + 'a>;

pub trait StrategyI: Send + Sync {
    fn start(&self) -> PlayIBox<'_>;

    /// The real played, when it does not depend on II's moves.
    fn as_stream(&self) -> Option<UpStream> {
        None
    }
}

impl<S: StrategyI + ?Sized> StrategyI for Box<S> {
    fn start(&self) -> PlayIBox<'_> {
        (**self).start()
    }

    fn as_stream(&self) -> Option<UpStream> {
        (**self).as_stream()
    }
}

/// Plays a fixed real, ignoring II.
#[derive(Clone, Debug)]
pub struct StreamStrategyI(pub UpStream);

struct StreamPlayI<'a> {
    x: &'a UpStream,
    pos: usize,
}

impl<'a> PlayI<'a> for StreamPlayI<'a> {
    fn digit(&self) -> Digit {
        self.x.at(self.pos as u64)
    }

    fn observe(&mut self, _: &Move) {
        self.pos += 1;
        if self.pos == self.x.size() {
            self.pos = self.x.prefix().len();
        }
    }

    fn key(&self) -> Option<Vec<u64>> {
        Some(vec![self.pos as u64])
    }

    fn fork(&self) -> PlayIBox<'a> {
        Box::new(StreamPlayI {
            x: self.x,
            pos: self.pos,
        })
    }
}

impl StrategyI for StreamStrategyI {
    fn start(&self) -> PlayIBox<'_> {
        Box::new(StreamPlayI { x: &self.0, pos: 0 })
    }

    fn as_stream(&self) -> Option<UpStream> {
        Some(self.0.clone())
    }
}

/// A finite-state strategy for I: each state has an output digit, and II's
/// moves drive the transitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MealyStrategyI {
    initial: usize,
    output: Vec<Digit>,
    edges: Vec<BTreeMap<Move, usize>>,
    otherwise: Vec<usize>,
}

impl MealyStrategyI {
    pub fn new(
        output: Vec<Digit>,
        initial: usize,
        steps: &[(usize, Option<Move>, usize)],
    ) -> Result<Self> {
        let n = output.len();
        if n == 0 || initial >= n {
            return Err(Error::InvalidAutomaton(
                "bad state count or initial state".into(),
            ));
        }
        let mut edges = vec![BTreeMap::new(); n];
        let mut otherwise = vec![None; n];
        for (src, label, dst) in steps {
            if *src >= n || *dst >= n {
                return Err(Error::InvalidAutomaton(format!(
                    "step {src} -> {dst} out of range"
                )));
            }
            match label {
                Some(m) => {
                    edges[*src].insert(m.clone(), *dst);
                }
                None => otherwise[*src] = Some(*dst),
            }
        }
        let otherwise = otherwise
            .into_iter()
            .enumerate()
            .map(|(q, o)| {
                o.ok_or_else(|| Error::InvalidAutomaton(format!("state {q} has no otherwise step")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MealyStrategyI {
            initial,
            output,
            edges,
            otherwise,
        })
    }

    /// Plays `x` obliviously.
    pub fn oblivious(x: &UpStream) -> Self {
        let p = x.prefix().len();
        let n = x.size();
        let steps: Vec<_> = (0..n)
            .map(|i| (i, None, if i + 1 == n { p } else { i + 1 }))
            .collect();
        let output = (0..n).map(|i| x.at(i as u64)).collect();
        Self::new(output, 0, &steps).unwrap()
    }

    /// True when no transition depends on II's move.
    pub fn is_oblivious(&self) -> bool {
        self.edges
            .iter()
            .zip(&self.otherwise)
            .all(|(m, &o)| m.values().all(|&t| t == o))
    }

    pub fn states(&self) -> usize {
        self.output.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn output(&self, q: usize) -> Digit {
        self.output[q]
    }

    pub fn step(&self, q: usize, m: &Move) -> usize {
        *self.edges[q].get(m).unwrap_or(&self.otherwise[q])
    }

    pub fn step_list(&self) -> Vec<(usize, Option<Move>, usize)> {
        let mut out = Vec::new();
        for q in 0..self.states() {
            for (m, &t) in &self.edges[q] {
                out.push((q, Some(m.clone()), t));
            }
            out.push((q, None, self.otherwise[q]));
        }
        out
    }
}

struct MealyPlayI<'a> {
    machine: &'a MealyStrategyI,
    state: usize,
}

impl<'a> PlayI<'a> for MealyPlayI<'a> {
    fn digit(&self) -> Digit {
        self.machine.output[self.state]
    }

    fn observe(&mut self, m: &Move) {
        self.state = self.machine.step(self.state, m);
    }

    fn key(&self) -> Option<Vec<u64>> {
        Some(vec![self.state as u64])
    }

    fn fork(&self) -> PlayIBox<'a> {
        Box::new(MealyPlayI {
            machine: self.machine,
            state: self.state,
        })
    }
}

impl StrategyI for MealyStrategyI {
    fn start(&self) -> PlayIBox<'_> {
        Box::new(MealyPlayI {
            machine: self,
            state: self.initial,
        })
    }

    fn as_stream(&self) -> Option<UpStream> {
        if !self.is_oblivious() {
            return None;
        }
        let mut seen = vec![None; self.states()];
        let (mut q, mut digits) = (self.initial, Vec::new());
        while seen[q].is_none() {
            seen[q] = Some(digits.len());
            digits.push(self.output[q]);
            q = self.otherwise[q];
        }
        let cut = seen[q].unwrap();
        let period = digits.split_off(cut);
        UpStream::new(digits, period)
    }
}
