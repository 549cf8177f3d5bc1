//! Deterministic parity automata over the infinite digit alphabet.
//!
//! Every state has finitely many explicit digit edges and one mandatory
//! "otherwise" edge taken by every other digit. A run is accepted when the
//! least priority visited infinitely often is even.

pub mod analysis;
mod boolean;
pub mod gallery;
mod reduce;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

pub use gallery::{canonical_pi1, canonical_pi2};
pub use reduce::{reduce_buchi_to_inf0, reduce_safety_to_z};

use crate::error::{Error, Result};
use crate::streams::{Digit, UpStream};
use analysis::LabeledGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Membership {
    In,
    Out,
}

impl Membership {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Membership::In
        } else {
            Membership::Out
        }
    }

    pub fn is_in(self) -> bool {
        self == Membership::In
    }
}

/// Three-valued verdict on a finite prefix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PrefixVerdict {
    Accepted,
    Rejected,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DetOmegaAutomaton {
    initial: usize,
    edges: Vec<BTreeMap<Digit, usize>>,
    otherwise: Vec<usize>,
    priority: Vec<u32>,
}

/// Per-state language facts, computed once per query batch.
#[derive(Clone, Debug)]
pub struct StateFacts {
    /// some accepted word starts here
    pub live: Vec<bool>,
    /// every word starting here is accepted
    pub universal: Vec<bool>,
}

impl DetOmegaAutomaton {
    /// Builds an automaton from `(src, label, dst)` edges where `None` is the
    /// otherwise edge.
    pub fn new(
        states: usize,
        initial: usize,
        edge_list: &[(usize, Option<Digit>, usize)],
        priority: Vec<u32>,
    ) -> Result<Self> {
        if states == 0 {
            return Err(Error::InvalidAutomaton("no states".into()));
        }
        if initial >= states {
            return Err(Error::InvalidAutomaton(format!(
                "initial state {initial} out of range"
            )));
        }
        if priority.len() != states {
            return Err(Error::InvalidAutomaton(format!(
                "{} priorities for {} states",
                priority.len(),
                states
            )));
        }
        let mut edges = vec![BTreeMap::new(); states];
        let mut otherwise: Vec<Option<usize>> = vec![None; states];
        for &(src, label, dst) in edge_list {
            if src >= states || dst >= states {
                return Err(Error::InvalidAutomaton(format!(
                    "edge {src} -> {dst} out of range"
                )));
            }
            let clash = match label {
                Some(d) => edges[src].insert(d, dst).is_some_and(|old| old != dst),
                None => otherwise[src].replace(dst).is_some_and(|old| old != dst),
            };
            if clash {
                return Err(Error::InvalidAutomaton(format!(
                    "nondeterministic edge from state {src}"
                )));
            }
        }
        let otherwise = otherwise
            .into_iter()
            .enumerate()
            .map(|(q, o)| {
                o.ok_or_else(|| Error::InvalidAutomaton(format!("state {q} has no otherwise edge")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DetOmegaAutomaton {
            initial,
            edges,
            otherwise,
            priority,
        })
    }

    pub fn states(&self) -> usize {
        self.priority.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn priority(&self, q: usize) -> u32 {
        self.priority[q]
    }

    pub fn priorities(&self) -> &[u32] {
        &self.priority
    }

    pub fn explicit_edges(&self, q: usize) -> &BTreeMap<Digit, usize> {
        &self.edges[q]
    }

    pub fn otherwise(&self, q: usize) -> usize {
        self.otherwise[q]
    }

    /// All edges as `(src, label, dst)`, otherwise edges last per state.
    pub fn edge_list(&self) -> Vec<(usize, Option<Digit>, usize)> {
        let mut out = Vec::new();
        for q in 0..self.states() {
            for (&d, &t) in &self.edges[q] {
                out.push((q, Some(d), t));
            }
            out.push((q, None, self.otherwise[q]));
        }
        out
    }

    pub fn step(&self, q: usize, d: Digit) -> usize {
        *self.edges[q].get(&d).unwrap_or(&self.otherwise[q])
    }

    pub fn run(&self, s: &[Digit]) -> usize {
        s.iter().fold(self.initial, |q, &d| self.step(q, d))
    }

    /// Every digit mentioned on some explicit edge.
    pub fn explicit_digits(&self) -> BTreeSet<Digit> {
        self.edges.iter().flat_map(|m| m.keys().copied()).collect()
    }

    /// A digit that takes the otherwise edge everywhere.
    pub fn fresh_digit(&self) -> Digit {
        self.explicit_digits().last().map_or(0, |d| d + 1)
    }

    /// Transition graph labelled by representative digits.
    pub fn graph(&self) -> LabeledGraph<Digit> {
        let fresh = self.fresh_digit();
        let succ = (0..self.states())
            .map(|q| {
                let mut out: Vec<(Digit, usize)> =
                    self.edges[q].iter().map(|(&d, &t)| (d, t)).collect();
                out.push((fresh, self.otherwise[q]));
                out
            })
            .collect();
        LabeledGraph { succ }
    }

    /// Exact membership of an ultimately periodic stream.
    pub fn membership_up(&self, x: &UpStream) -> Membership {
        let q = self.run(x.prefix());
        Membership::from_bool(self.accepts_periodic_from(q, x.period()))
    }

    /// Whether `period^ω` is accepted from state `q`.
    pub fn accepts_periodic_from(&self, mut q: usize, period: &[Digit]) -> bool {
        // state at the start of each period block; a repeat closes the lasso
        let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
        let mut starts = Vec::new();
        while !seen.contains_key(&q) {
            seen.insert(q, starts.len());
            starts.push(q);
            q = period.iter().fold(q, |q, &d| self.step(q, d));
        }
        let mut min = u32::MAX;
        for &start in &starts[seen[&q]..] {
            let mut p = start;
            for &d in period {
                p = self.step(p, d);
                min = min.min(self.priority[p]);
            }
        }
        min % 2 == 0
    }

    pub fn facts(&self) -> StateFacts {
        let g = self.graph();
        let all = vec![true; self.states()];
        let good = g.good_nodes(&all, &[&self.priority]);
        let live = g.backward_closure(&good);
        let shifted: Vec<u32> = self.priority.iter().map(|p| p + 1).collect();
        let bad = g.good_nodes(&all, &[&shifted]);
        let co_live = g.backward_closure(&bad);
        StateFacts {
            live,
            universal: co_live.into_iter().map(|b| !b).collect(),
        }
    }

    pub fn prefix_verdict(&self, s: &[Digit]) -> PrefixVerdict {
        self.facts().verdict(self.run(s))
    }

    pub fn is_empty(&self) -> bool {
        !self.facts().live[self.initial]
    }

    pub fn is_universal(&self) -> bool {
        self.facts().universal[self.initial]
    }

    /// A stream accepted by the automaton, if any.
    pub fn accepted_witness(&self) -> Option<UpStream> {
        let g = self.graph();
        let (stem, cycle) = analysis::find_lasso(
            &g,
            self.initial,
            &vec![true; self.states()],
            &[&self.priority],
        )?;
        UpStream::new(stem, cycle)
    }

    /// A stream rejected by the automaton, if any.
    pub fn rejected_witness(&self) -> Option<UpStream> {
        self.complement().accepted_witness()
    }

    /// Safety shape: every infinite run that stays inside live states is accepted.
    pub fn is_safety(&self) -> bool {
        let g = self.graph();
        let facts = self.facts();
        let shifted: Vec<u32> = self.priority.iter().map(|p| p + 1).collect();
        let reach = g.reachable_within(self.initial, &facts.live);
        analysis::good_component(&g, &reach, &[&shifted]).is_none()
    }

    pub fn is_buchi_shape(&self) -> bool {
        self.priority.iter().all(|&p| p <= 1)
    }

    /// Language equivalence.
    pub fn equivalent(&self, other: &Self) -> bool {
        self.intersection(&other.complement()).is_empty()
            && other.intersection(&self.complement()).is_empty()
    }
}

impl StateFacts {
    pub fn verdict(&self, q: usize) -> PrefixVerdict {
        if !self.live[q] {
            PrefixVerdict::Rejected
        } else if self.universal[q] {
            PrefixVerdict::Accepted
        } else {
            PrefixVerdict::Unknown
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RankTag {
    Closed,
    Pi02,
    User,
}

/// A control set: an automaton with a declared Borel rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ControlSet {
    pub automaton: DetOmegaAutomaton,
    pub rank: RankTag,
    pub name: String,
}

impl ControlSet {
    pub fn new(
        automaton: DetOmegaAutomaton,
        rank: RankTag,
        name: impl Into<String>,
    ) -> Result<Self> {
        let name = name.into();
        let ok = match rank {
            RankTag::Closed => automaton.is_safety(),
            RankTag::Pi02 => automaton.is_buchi_shape(),
            RankTag::User => true,
        };
        if !ok {
            return Err(Error::RankMismatch { name });
        }
        Ok(ControlSet {
            automaton,
            rank,
            name,
        })
    }

    pub fn contains(&self, x: &UpStream) -> bool {
        self.automaton.membership_up(x).is_in()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::omega::gallery::*;

    fn up(prefix: &[Digit], period: &[Digit]) -> UpStream {
        UpStream::new(prefix.to_vec(), period.to_vec()).unwrap()
    }

    #[test]
    fn gallery_membership() {
        let z = canonical_pi1();
        let inf0 = canonical_pi2();
        assert_eq!(z.automaton.states(), 2);
        assert_eq!(inf0.automaton.states(), 2);
        assert!(z.contains(&UpStream::zeros()));
        assert!(!z.contains(&up(&[1], &[0])));
        assert!(inf0.contains(&up(&[], &[0, 1])));
        assert!(!inf0.contains(&up(&[], &[1])));
        assert!(inf0.contains(&up(&[], &[5, 0])));
        assert!(!inf0.contains(&up(&[0, 0, 0], &[7])));
    }

    #[test]
    fn verdicts() {
        let z = canonical_pi1().automaton;
        assert_eq!(z.prefix_verdict(&[0, 0, 0]), PrefixVerdict::Unknown);
        assert_eq!(z.prefix_verdict(&[0, 1]), PrefixVerdict::Rejected);
        assert_eq!(full().prefix_verdict(&[]), PrefixVerdict::Accepted);
        assert_eq!(empty().prefix_verdict(&[]), PrefixVerdict::Rejected);
        let inf0 = canonical_pi2().automaton;
        assert_eq!(inf0.prefix_verdict(&[1, 1]), PrefixVerdict::Unknown);
    }

    #[test]
    fn shapes() {
        assert!(canonical_pi1().automaton.is_safety());
        assert!(!canonical_pi2().automaton.is_safety());
        assert!(cylinder(&[3]).is_safety());
        assert!(!canonical_pi2().automaton.complement().is_buchi_shape());
    }

    #[test]
    fn rejects_partial_automata() {
        assert!(DetOmegaAutomaton::new(1, 0, &[(0, Some(0), 0)], vec![0]).is_err());
        assert!(DetOmegaAutomaton::new(1, 0, &[(0, None, 0), (0, None, 0)], vec![0]).is_ok());
        assert!(DetOmegaAutomaton::new(
            2,
            0,
            &[(0, None, 0), (0, None, 1), (1, None, 1)],
            vec![0, 0]
        )
        .is_err());
    }

    #[test]
    fn witnesses() {
        let inf0 = canonical_pi2().automaton;
        let w = inf0.accepted_witness().unwrap();
        assert!(inf0.membership_up(&w).is_in());
        let r = inf0.rejected_witness().unwrap();
        assert!(!inf0.membership_up(&r).is_in());
        assert!(full().rejected_witness().is_none());
    }
}
