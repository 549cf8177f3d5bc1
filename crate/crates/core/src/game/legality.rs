//! Legality of finite-state strategies.
//!
//! The exact check explores the product of the strategy cursors, the rule
//! trackers and the domain automaton over the explicit digits plus one fresh
//! representative. Safety violations are reachable violated nodes; liveness
//! violations are reachable cycles satisfying a conjunction of parity
//! conditions read off the last move, or, for the eraser game, cycles along
//! which the output does not grow.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{engine, BaseKind, GameKind, GameSpec, Status, Tracker};
use crate::composite;
use crate::error::{Error, Result};
use crate::moves::{Move, RowInner};
use crate::omega::analysis::{find_lasso, LabeledGraph};
use crate::omega::DetOmegaAutomaton;
use crate::strategy::{PlayBox, Strategy};
use crate::streams::{Digit, FinSeq, StreamView, UpStream};

const MAX_NODES: usize = 1 << 17;

/// Priority used for nodes that must not influence a parity condition.
const NEUTRAL: u32 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// A finite prefix of I's real after which the rules are already broken.
    Prefix(FinSeq),
    /// An input on whose run a liveness rule fails.
    Lasso(UpStream),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LegalityReport {
    Legal,
    Illegal { witness: Witness, reason: String },
    UnknownAtDepth(u64),
}

impl LegalityReport {
    pub fn is_legal(&self) -> bool {
        matches!(self, LegalityReport::Legal)
    }

    pub fn is_illegal(&self) -> bool {
        matches!(self, LegalityReport::Illegal { .. })
    }
}

/// One strategy running in one game inside a product exploration; `output`
/// optionally tracks the game's output through an automaton (only for
/// games whose output is the sequence of II's digits).
pub(crate) struct Track<'a> {
    pub game: &'a GameSpec,
    pub strategy: &'a dyn Strategy,
    pub output: Option<&'a DetOmegaAutomaton>,
}

#[derive(Clone, Debug)]
pub(crate) struct TrackInfo {
    pub last: Option<Move>,
    pub violated: Option<String>,
    /// output automaton state, and whether it moved on the last turn
    pub out: Option<(usize, bool)>,
}

pub(crate) struct Product {
    pub graph: LabeledGraph<Digit>,
    pub x_state: Vec<usize>,
    pub info: Vec<Vec<TrackInfo>>,
    domain: DetOmegaAutomaton,
}

struct Cursor<'a> {
    play: PlayBox<'a>,
    tracker: Box<dyn Tracker>,
    info: TrackInfo,
}

impl Cursor<'_> {
    fn fork(&self) -> Self {
        Cursor {
            play: self.play.fork(),
            tracker: self.tracker.fork(),
            info: self.info.clone(),
        }
    }
}

type NodeKey = (
    usize,
    Vec<(Vec<u64>, Vec<u64>, Option<Move>, Option<(usize, bool)>)>,
);

/// Builds the product graph. With `absorbing`, exploration continues past
/// violations (which then persist); otherwise violated nodes are terminal.
pub(crate) fn explore(
    domain: &DetOmegaAutomaton,
    tracks: &[Track<'_>],
    absorbing: bool,
) -> Result<Product> {
    let mut digits: BTreeSet<Digit> = domain.explicit_digits();
    for t in tracks {
        digits.extend(t.strategy.explicit_digits());
        if let Some(a) = t.output {
            digits.extend(a.explicit_digits());
        }
    }
    let fresh = digits.last().map_or(0, |d| d + 1);
    digits.insert(fresh);
    let facts = domain.facts();

    let key_of = |x: usize, cs: &[Cursor<'_>]| -> Result<NodeKey> {
        let mut parts = Vec::new();
        for c in cs {
            let k = c.play.key().ok_or(Error::NotFiniteState)?;
            parts.push((k, c.tracker.rule_key(), c.info.last.clone(), c.info.out));
        }
        Ok((x, parts))
    };

    let start: Vec<Cursor<'_>> = tracks
        .iter()
        .map(|t| Cursor {
            play: t.strategy.start(),
            tracker: t.game.tracker(),
            info: TrackInfo {
                last: None,
                violated: None,
                out: t.output.map(|a| (a.initial(), false)),
            },
        })
        .collect();
    let mut ids: BTreeMap<NodeKey, usize> = BTreeMap::new();
    let mut nodes: Vec<(usize, Vec<Cursor<'_>>)> = Vec::new();
    let mut succ: Vec<Vec<(Digit, usize)>> = Vec::new();
    ids.insert(key_of(domain.initial(), &start)?, 0);
    nodes.push((domain.initial(), start));
    succ.push(Vec::new());
    let mut queue = VecDeque::from([0usize]);

    while let Some(id) = queue.pop_front() {
        // violated nodes are terminal: the witness is the path to them
        if !absorbing && nodes[id].1.iter().any(|c| c.info.violated.is_some()) {
            continue;
        }
        for &d in &digits {
            let q = domain.step(nodes[id].0, d);
            if !facts.live[q] {
                continue;
            }
            let mut cs: Vec<Cursor<'_>> = nodes[id].1.iter().map(Cursor::fork).collect();
            for (c, t) in cs.iter_mut().zip(tracks) {
                let m = c.play.respond(d);
                c.tracker.step(d, &m);
                if let (Status::Violated { reason, .. }, None) =
                    (c.tracker.status(), &c.info.violated)
                {
                    c.info.violated = Some(reason.clone());
                }
                if let (Some(a), Some((s, _))) = (t.output, c.info.out) {
                    c.info.out = Some(match m.nat() {
                        Some(v) => (a.step(s, v), true),
                        None => (s, false),
                    });
                }
                c.info.last = Some(m);
            }
            let key = key_of(q, &cs)?;
            let tid = match ids.get(&key) {
                Some(&t) => t,
                None => {
                    if nodes.len() >= MAX_NODES {
                        return Err(Error::UnsupportedGame(format!(
                            "product state space exceeds {MAX_NODES} nodes"
                        )));
                    }
                    ids.insert(key, nodes.len());
                    nodes.push((q, cs));
                    succ.push(Vec::new());
                    queue.push_back(nodes.len() - 1);
                    nodes.len() - 1
                }
            };
            succ[id].push((d, tid));
        }
    }
    let x_state = nodes.iter().map(|n| n.0).collect();
    let info = nodes
        .into_iter()
        .map(|n| n.1.into_iter().map(|c| c.info).collect())
        .collect();
    Ok(Product {
        graph: LabeledGraph { succ },
        x_state,
        info,
        domain: domain.clone(),
    })
}

#[derive(Clone, Copy, Debug)]
enum Pred {
    Nat,
    NonPass,
    Bt,
    NatOnRow(u64),
}

impl Pred {
    fn holds(self, m: &Move) -> bool {
        match self {
            Pred::Nat => matches!(
                m,
                Move::Nat(_)
                    | Move::Row {
                        inner: RowInner::Nat(_),
                        ..
                    }
            ),
            Pred::NonPass => !m.is_pass(),
            Pred::Bt => *m == Move::BT,
            Pred::NatOnRow(r) => {
                matches!(m, Move::Row { row, inner: RowInner::Nat(_) } if *row == r)
            }
        }
    }
}

/// `Inf(p)`: p holds infinitely often. `Fin(p)`: p holds finitely often.
#[derive(Clone, Copy, Debug)]
enum Cond {
    Inf(Pred),
    Fin(Pred),
}

impl Cond {
    fn priority(self, m: Option<&Move>) -> u32 {
        match (self, m) {
            (_, None) => NEUTRAL,
            (Cond::Inf(p), Some(m)) => u32::from(!p.holds(m)),
            (Cond::Fin(p), Some(m)) => 1 + u32::from(!p.holds(m)),
        }
    }
}

/// Ways a play can break the liveness rules of `g`: each entry is a
/// conjunction, plus whether the eraser growth condition applies.
fn patterns(g: &GameSpec, rows: &BTreeSet<u64>) -> (Vec<(Vec<Cond>, &'static str)>, bool) {
    match &g.kind {
        GameKind::Base(b) => match b {
            BaseKind::L | BaseKind::KLip(_) => (vec![], false),
            BaseKind::W => (
                vec![(vec![Cond::Fin(Pred::Nat)], "only finitely many digits")],
                false,
            ),
            BaseKind::E => (vec![], true),
            BaseKind::Bt => (
                vec![
                    (vec![Cond::Inf(Pred::Bt)], "infinitely many backtracks"),
                    (vec![Cond::Fin(Pred::Nat)], "only finitely many digits"),
                ],
                false,
            ),
            BaseKind::M => {
                let mut out = vec![(
                    vec![Cond::Fin(Pred::Nat)],
                    "no row receives infinitely many digits",
                )];
                for &r in rows {
                    for &s in rows.range(r + 1..) {
                        out.push((
                            vec![Cond::Inf(Pred::NatOnRow(r)), Cond::Inf(Pred::NatOnRow(s))],
                            "two rows receive infinitely many digits",
                        ));
                    }
                }
                (out, false)
            }
        },
        GameKind::PClose(inner) => {
            let (mut out, growth) = patterns(inner, rows);
            out.push((
                vec![Cond::Fin(Pred::NonPass)],
                "only passes from some turn on",
            ));
            (out, growth)
        }
        GameKind::Delay(inner, _) => patterns(inner, rows),
        GameKind::Composite(_) => (vec![], false),
    }
}

impl Product {
    pub fn len(&self) -> usize {
        self.info.len()
    }

    fn all(&self) -> Vec<bool> {
        vec![true; self.len()]
    }

    fn path_to(&self, v: usize) -> FinSeq {
        self.graph
            .path(0, v, &self.all())
            .expect("explored nodes are reachable")
    }

    fn x_priorities(&self) -> Vec<u32> {
        self.x_state
            .iter()
            .map(|&q| self.domain.priority(q))
            .collect()
    }

    /// A finite prefix on which track `t` breaks a rule.
    pub fn safety_violation(&self, t: usize) -> Option<(FinSeq, String)> {
        (0..self.len()).find_map(|v| {
            self.info[v][t]
                .violated
                .clone()
                .map(|r| (self.path_to(v), r))
        })
    }

    fn sound(&self) -> Vec<bool> {
        (0..self.len())
            .map(|v| self.info[v].iter().all(|i| i.violated.is_none()))
            .collect()
    }

    fn lasso(&self, conds: &[Vec<u32>]) -> Option<UpStream> {
        self.lasso_within(&self.sound(), conds)
    }

    /// An input accepted by the domain whose run stays in `allowed` and
    /// satisfies every parity condition in `conds`.
    pub fn lasso_within(&self, allowed: &[bool], conds: &[Vec<u32>]) -> Option<UpStream> {
        let mut all: Vec<&[u32]> = conds.iter().map(Vec::as_slice).collect();
        let xp = self.x_priorities();
        all.push(&xp);
        let (stem, cycle) = find_lasso(&self.graph, 0, allowed, &all)?;
        UpStream::new(stem, cycle)
    }

    /// Nodes where track `t` has not broken a rule.
    pub fn unviolated(&self, t: usize) -> Vec<bool> {
        self.info.iter().map(|i| i[t].violated.is_none()).collect()
    }

    /// Priority `0` where track `t` has broken a rule, `1` elsewhere.
    pub fn violated_priorities(&self, t: usize) -> Vec<u32> {
        self.info
            .iter()
            .map(|i| u32::from(i[t].violated.is_none()))
            .collect()
    }

    /// Priorities that are even on a cycle iff the output of track `t` is
    /// accepted by its output automaton, given infinitely many digits.
    pub fn output_priorities(&self, t: usize, out: &DetOmegaAutomaton, accept: bool) -> Vec<u32> {
        self.info
            .iter()
            .map(|i| match i[t].out {
                Some((s, true)) => out.priority(s) + u32::from(!accept),
                _ => NEUTRAL,
            })
            .collect()
    }

    /// An input on which track `t` breaks a liveness rule while every
    /// condition in `extra` holds.
    pub fn liveness_violation(
        &self,
        t: usize,
        game: &GameSpec,
        extra: &[Vec<u32>],
    ) -> Result<Option<(UpStream, String)>> {
        let rows: BTreeSet<u64> = self
            .info
            .iter()
            .filter_map(|i| match i[t].last {
                Some(Move::Row { row, .. }) => Some(row),
                _ => None,
            })
            .collect();
        let (pats, growth) = patterns(game, &rows);
        for (conj, reason) in pats {
            let mut conds: Vec<Vec<u32>> = conj
                .iter()
                .map(|c| {
                    self.info
                        .iter()
                        .map(|i| c.priority(i[t].last.as_ref()))
                        .collect()
                })
                .collect();
            conds.extend(extra.iter().cloned());
            if let Some(x) = self.lasso(&conds) {
                return Ok(Some((x, reason.into())));
            }
        }
        if growth {
            if !extra.is_empty() || !self.domain.is_safety() {
                return Err(Error::UnsupportedGame(
                    "eraser growth check only under safety domains without extra conditions".into(),
                ));
            }
            if let Some(x) = self.non_growing_cycle(t) {
                return Ok(Some((x, "output length stays bounded".into())));
            }
        }
        Ok(None)
    }

    /// A reachable cycle along which the eraser output of track `t` does
    /// not grow, found as a negative cycle after rescaling weights.
    fn non_growing_cycle(&self, t: usize) -> Option<UpStream> {
        let sound = self.sound();
        let n = self.len() as i64;
        let weight = |v: usize| -> i64 {
            let w = match &self.info[v][t].last {
                Some(Move::Nat(_)) => 1,
                Some(m) if *m == Move::ERASE => -1,
                _ => 0,
            };
            // cycles of total weight ≤ 0 become negative, positive ones stay positive
            w * (n + 1) - 1
        };
        let mut dist = vec![0i64; self.len()];
        let mut parent: Vec<Option<(usize, Digit)>> = vec![None; self.len()];
        let mut last_relaxed = None;
        for _ in 0..self.len() {
            last_relaxed = None;
            for u in 0..self.len() {
                if !sound[u] {
                    continue;
                }
                for &(d, v) in &self.graph.succ[u] {
                    if sound[v] && dist[u] + weight(v) < dist[v] {
                        dist[v] = dist[u] + weight(v);
                        parent[v] = Some((u, d));
                        last_relaxed = Some(v);
                    }
                }
            }
            last_relaxed?;
        }
        let mut v = last_relaxed?;
        for _ in 0..self.len() {
            v = parent[v]?.0;
        }
        // v lies on the cycle; walk it back
        let mut labels = Vec::new();
        let mut u = v;
        loop {
            let (p, d) = parent[u]?;
            labels.push(d);
            u = p;
            if u == v {
                break;
            }
        }
        labels.reverse();
        UpStream::new(self.path_to(v), labels)
    }
}

/// Exact legality of a finite-state strategy.
pub fn legality_check_exact(g: &GameSpec, tau: &dyn Strategy) -> Result<LegalityReport> {
    if let GameKind::Composite(c) = &g.kind {
        return composite::legality_exact(c, &g.domain, tau);
    }
    let product = explore(
        &g.domain,
        &[Track {
            game: g,
            strategy: tau,
            output: None,
        }],
        false,
    )?;
    if let Some((prefix, reason)) = product.safety_violation(0) {
        return Ok(LegalityReport::Illegal {
            witness: Witness::Prefix(prefix),
            reason,
        });
    }
    if let Some((x, reason)) = product.liveness_violation(0, g, &[])? {
        return Ok(LegalityReport::Illegal {
            witness: Witness::Lasso(x),
            reason,
        });
    }
    Ok(LegalityReport::Legal)
}

/// Legality evidence from sample inputs: a violation is conclusive, its
/// absence is not.
pub fn legality_check_sampled(
    g: &GameSpec,
    tau: &dyn Strategy,
    samples: &[UpStream],
    depth: u64,
    max_rows: u64,
) -> LegalityReport {
    for x in samples {
        if !g.domain.membership_up(x).is_in() {
            continue;
        }
        let r = engine::run_to_depth(g, x as &dyn StreamView, tau, depth);
        if let Status::Violated { turn, reason } = r.status {
            return LegalityReport::Illegal {
                witness: Witness::Prefix(x.take(turn as usize + 1)),
                reason,
            };
        }
        if let Err(Error::RuleViolation { reason, .. }) = engine::eval_exact(g, tau, x, max_rows) {
            return LegalityReport::Illegal {
                witness: Witness::Lasso(x.clone()),
                reason,
            };
        }
    }
    LegalityReport::UnknownAtDepth(depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{delay, make_base_game, p_close, BaseKind};
    use crate::strategy::{delayed_identity, MealyStrategy, Out};

    #[test]
    fn wadge_examples() {
        let w = make_base_game(BaseKind::W);
        let r = legality_check_exact(&w, &MealyStrategy::always(Out::Pass)).unwrap();
        assert!(matches!(
            r,
            LegalityReport::Illegal {
                witness: Witness::Lasso(_),
                ..
            }
        ));
        assert!(
            legality_check_exact(&w, &MealyStrategy::always(Out::Nat(0)))
                .unwrap()
                .is_legal()
        );
    }

    #[test]
    fn klip_identity_is_legal() {
        let g = make_base_game(BaseKind::KLip(2));
        assert!(legality_check_exact(&g, &delayed_identity(2))
            .unwrap()
            .is_legal());
        assert!(legality_check_exact(&g, &MealyStrategy::copy())
            .unwrap()
            .is_illegal());
    }

    #[test]
    fn eraser_growth() {
        let e = make_base_game(BaseKind::E);
        // erase after every digit: output never grows
        let tau =
            MealyStrategy::new(2, 0, &[(0, None, 1, Out::Echo), (1, None, 0, Out::Erase)]).unwrap();
        assert!(legality_check_exact(&e, &tau).unwrap().is_illegal());
        // erase only after a 7
        let tau = MealyStrategy::new(
            2,
            0,
            &[
                (0, Some(7), 1, Out::Echo),
                (0, None, 0, Out::Echo),
                (1, None, 0, Out::Erase),
            ],
        )
        .unwrap();
        match legality_check_exact(&e, &tau).unwrap() {
            LegalityReport::Illegal {
                witness: Witness::Lasso(x),
                ..
            } => {
                assert!(engine::eval_exact(&e, &tau, &x, 0).is_err());
            }
            other => panic!("{other:?}"),
        }
        assert!(legality_check_exact(&e, &MealyStrategy::copy())
            .unwrap()
            .is_legal());
    }

    #[test]
    fn multitape_two_rows() {
        let m = make_base_game(BaseKind::M);
        use crate::strategy::RowOut;
        let alternate = MealyStrategy::new(
            2,
            0,
            &[
                (0, None, 1, Out::Row(0, RowOut::Echo)),
                (1, None, 0, Out::Row(1, RowOut::Echo)),
            ],
        )
        .unwrap();
        assert!(legality_check_exact(&m, &alternate).unwrap().is_illegal());
        let switch = MealyStrategy::new(
            2,
            0,
            &[
                (0, Some(5), 1, Out::Row(1, RowOut::Echo)),
                (0, None, 0, Out::Row(0, RowOut::Echo)),
                (1, None, 1, Out::Row(1, RowOut::Echo)),
            ],
        )
        .unwrap();
        assert!(legality_check_exact(&m, &switch).unwrap().is_legal());
    }

    #[test]
    fn domain_restricts_inputs() {
        // passes on digit 9 only; legal once the domain excludes 9
        let tau = MealyStrategy::new(1, 0, &[(0, Some(9), 0, Out::Pass), (0, None, 0, Out::Echo)])
            .unwrap();
        let l = make_base_game(BaseKind::L);
        assert!(legality_check_exact(&l, &tau).unwrap().is_illegal());
        let always_no_nine = DetOmegaAutomaton::new(
            2,
            0,
            &[(0, Some(9), 1), (0, None, 0), (1, None, 1)],
            vec![0, 1],
        )
        .unwrap();
        let l = l.with_domain(always_no_nine);
        assert!(legality_check_exact(&l, &tau).unwrap().is_legal());
    }

    #[test]
    fn wrappers() {
        let pw = p_close(&make_base_game(BaseKind::L));
        assert!(legality_check_exact(&pw, &MealyStrategy::always(Out::Pass))
            .unwrap()
            .is_illegal());
        let d = delay(&make_base_game(BaseKind::L), 2);
        assert!(legality_check_exact(&d, &delayed_identity(2))
            .unwrap()
            .is_legal());
    }
}
