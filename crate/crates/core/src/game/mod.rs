//! Reduction games `(X, M, R, ι)`: the move alphabet and rules are checked
//! by a per-run [`Tracker`], which also maintains the tentative output.

mod engine;
mod judge;
mod legality;

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

pub use engine::{
    adjudicate_up, adjudicate_vs, eval_depth, eval_exact, run_lasso, run_lasso_vs, run_to_depth,
    run_vs_to_depth, DepthReport, Verdict, Winner, MAX_LASSO_TURNS,
};
pub use judge::eraser_naive;
pub(crate) use legality::{explore, Track};
pub use legality::{legality_check_exact, legality_check_sampled, LegalityReport, Witness};

use crate::composite::CompositeGame;
use crate::error::{Error, Result};
use crate::moves::{Move, RowInner, Sym};
use crate::omega::{gallery, DetOmegaAutomaton, PrefixVerdict};
use crate::streams::{Digit, FinSeq, UpStream};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseKind {
    /// Lipschitz: II plays a digit every turn.
    L,
    /// Wadge: II may pass, but must play infinitely many digits.
    W,
    /// II passes exactly on the first `k` turns.
    KLip(u64),
    /// Eraser: II may erase her last digit; the output must grow unboundedly.
    E,
    /// Backtrack: II may delete her whole output finitely often.
    Bt,
    /// Multitape: II writes on one of her rows each turn; exactly one row
    /// must receive infinitely many digits.
    M,
}

#[derive(Clone, Debug)]
pub enum GameKind {
    Base(BaseKind),
    PClose(Box<GameSpec>),
    Delay(Box<GameSpec>, u64),
    Composite(Box<CompositeGame>),
}

#[derive(Clone, Debug)]
pub struct GameSpec {
    pub domain: DetOmegaAutomaton,
    pub kind: GameKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Violated { turn: u64, reason: String },
}

impl Status {
    pub fn is_ok(&self) -> bool {
        matches!(self, Status::Ok)
    }
}

/// Rule monitor and interpreter of a single run.
pub trait Tracker {
    /// Feeds one turn: I's digit and II's answer.
    fn step(&mut self, i: Digit, m: &Move);
    fn status(&self) -> &Status;
    /// Liveness conditions that cannot be settled at finite depth.
    fn pending_obligations(&self) -> Vec<String>;
    fn tentative(&self) -> FinSeq;
    /// Length of the prefix of `tentative` that can no longer change.
    fn committed_len(&self) -> usize;
    /// Finite-depth verdicts of control rows, for composite games.
    fn row_verdicts(&self) -> Vec<(u64, PrefixVerdict)> {
        Vec::new()
    }
    /// State relevant to the rules (not the output), for state-space search.
    fn rule_key(&self) -> Vec<u64>;
    fn fork(&self) -> Box<dyn Tracker>;
}

pub fn make_base_game(kind: BaseKind) -> GameSpec {
    GameSpec {
        domain: gallery::full(),
        kind: GameKind::Base(kind),
    }
}

pub fn p_close(g: &GameSpec) -> GameSpec {
    if g.p_closed() {
        return g.clone();
    }
    GameSpec {
        domain: g.domain.clone(),
        kind: GameKind::PClose(Box::new(g.clone())),
    }
}

pub fn delay(g: &GameSpec, n: u64) -> GameSpec {
    if n == 0 {
        return g.clone();
    }
    GameSpec {
        domain: g.domain.clone(),
        kind: GameKind::Delay(Box::new(g.clone()), n),
    }
}

impl GameSpec {
    pub fn with_domain(mut self, domain: DetOmegaAutomaton) -> Self {
        self.domain = domain;
        self
    }

    pub fn base_kind(&self) -> Option<BaseKind> {
        match &self.kind {
            GameKind::Base(b) => Some(*b),
            _ => None,
        }
    }

    pub fn composite(&self) -> Option<&CompositeGame> {
        match &self.kind {
            GameKind::Composite(c) => Some(c),
            _ => None,
        }
    }

    pub fn p_closed(&self) -> bool {
        match &self.kind {
            GameKind::Base(b) => matches!(b, BaseKind::W | BaseKind::Bt),
            GameKind::PClose(_) => true,
            GameKind::Delay(..) => false,
            GameKind::Composite(c) => c.p_closed(),
        }
    }

    pub fn delayable(&self) -> bool {
        match &self.kind {
            GameKind::Base(b) => !matches!(b, BaseKind::L | BaseKind::KLip(_)),
            GameKind::PClose(_) => true,
            GameKind::Delay(g, _) => g.delayable(),
            GameKind::Composite(_) => true,
        }
    }

    /// Number of initial turns on which II must pass.
    pub fn lead_in(&self) -> u64 {
        match &self.kind {
            GameKind::Base(BaseKind::KLip(k)) => *k,
            GameKind::Delay(g, n) => n + g.lead_in(),
            _ => 0,
        }
    }

    pub fn tracker(&self) -> Box<dyn Tracker> {
        match &self.kind {
            GameKind::Base(b) => Box::new(BaseTracker::new(*b)),
            GameKind::PClose(g) => Box::new(PCloseTracker {
                inner: g.tracker(),
                turn: 0,
                status: Status::Ok,
            }),
            GameKind::Delay(g, n) => Box::new(DelayTracker {
                inner: g.tracker(),
                n: *n,
                turn: 0,
                status: Status::Ok,
            }),
            GameKind::Composite(c) => c.tracker(),
        }
    }

    /// Exact output of an eventually periodic run, or the rule it breaks.
    pub fn up_output(&self, lasso: &LassoRun) -> Result<UpStream> {
        if let GameKind::Composite(_) = self.kind {
            return Err(Error::UnsupportedGame(
                "composite runs are evaluated row by row, not as a single lasso".into(),
            ));
        }
        let pre: Vec<Move> = lasso.prefix.iter().map(|t| t.1.clone()).collect();
        let per: Vec<Move> = lasso.period.iter().map(|t| t.1.clone()).collect();
        judge::judge(self, pre, per).map_err(|reason| {
            // report the first finite violation if there is one
            let mut t = self.tracker();
            let reps = 2 + self.lead_in() as usize / lasso.period.len().max(1);
            let turns = lasso
                .prefix
                .iter()
                .chain(lasso.period.iter().cycle().take(reps * lasso.period.len()));
            for (i, m) in turns {
                t.step(*i, m);
                if let Status::Violated { turn, reason } = t.status() {
                    return Error::RuleViolation {
                        turn: *turn,
                        reason: reason.clone(),
                    };
                }
            }
            Error::RuleViolation {
                turn: lasso.prefix.len() as u64,
                reason,
            }
        })
    }

    pub fn up_verdict(&self, lasso: &LassoRun) -> bool {
        self.up_output(lasso).is_ok()
    }

    /// II's identity strategy in this game.
    pub fn identity_strategy(&self) -> crate::strategy::StrategyRef {
        use crate::strategy::{delayed_identity, MealyStrategy, Out, RowOut};
        use alloc::sync::Arc;
        match &self.kind {
            GameKind::Base(BaseKind::M) => {
                Arc::new(MealyStrategy::always(Out::Row(0, RowOut::Echo)))
            }
            _ => match self.lead_in() {
                0 => Arc::new(MealyStrategy::copy()),
                k => Arc::new(delayed_identity(k)),
            },
        }
    }
}

/// An eventually periodic transcript of `(I digit, II move)` pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LassoRun {
    pub prefix: Vec<(Digit, Move)>,
    pub period: Vec<(Digit, Move)>,
}

pub(crate) fn violation(turn: u64, reason: impl Into<String>) -> Status {
    Status::Violated {
        turn,
        reason: reason.into(),
    }
}

#[derive(Clone, Debug)]
struct BaseTracker {
    kind: BaseKind,
    turn: u64,
    status: Status,
    out: Vec<Digit>,
    rows: BTreeMap<u64, Vec<Digit>>,
    last_row: Option<u64>,
}

impl BaseTracker {
    fn new(kind: BaseKind) -> Self {
        BaseTracker {
            kind,
            turn: 0,
            status: Status::Ok,
            out: Vec::new(),
            rows: BTreeMap::new(),
            last_row: None,
        }
    }

    fn apply(&mut self, m: &Move) -> core::result::Result<(), String> {
        use BaseKind::*;
        match (self.kind, m) {
            (KLip(k), m) if self.turn < k => {
                if !m.is_pass() {
                    return Err(format!("must pass on the first {k} turns"));
                }
            }
            (L | W | KLip(_) | E | Bt, Move::Nat(d)) => self.out.push(*d),
            (W | Bt, Move::Sym(Sym::Pass)) => {}
            (E, Move::Sym(Sym::Erase)) => {
                self.out.pop();
            }
            (Bt, Move::Sym(Sym::Bt)) => self.out.clear(),
            (M, Move::Row { row, inner }) => {
                if let RowInner::Nat(d) = inner {
                    self.rows.entry(*row).or_default().push(*d);
                    self.last_row = Some(*row);
                }
            }
            (kind, m) => return Err(format!("move {m} is not allowed in {kind:?}")),
        }
        Ok(())
    }
}

impl Tracker for BaseTracker {
    fn step(&mut self, _i: Digit, m: &Move) {
        if self.status.is_ok() {
            if let Err(reason) = self.apply(m) {
                self.status = violation(self.turn, reason);
            }
        }
        self.turn += 1;
    }

    fn status(&self) -> &Status {
        &self.status
    }

    fn pending_obligations(&self) -> Vec<String> {
        let tags: &[&str] = match self.kind {
            BaseKind::L | BaseKind::KLip(_) => &[],
            BaseKind::W => &["infinitely many digits"],
            BaseKind::E => &["output length unbounded"],
            BaseKind::Bt => &[
                "finitely many backtracks",
                "infinitely many digits after the last backtrack",
            ],
            BaseKind::M => &["exactly one row receives infinitely many digits"],
        };
        tags.iter().map(|s| String::from(*s)).collect()
    }

    fn tentative(&self) -> FinSeq {
        match self.kind {
            BaseKind::M => self
                .last_row
                .map(|r| self.rows[&r].clone())
                .unwrap_or_default(),
            _ => self.out.clone(),
        }
    }

    fn committed_len(&self) -> usize {
        match self.kind {
            BaseKind::L | BaseKind::W | BaseKind::KLip(_) => self.out.len(),
            _ => 0,
        }
    }

    fn rule_key(&self) -> Vec<u64> {
        let violated = u64::from(!self.status.is_ok());
        match self.kind {
            BaseKind::KLip(k) => vec![violated, self.turn.min(k)],
            _ => vec![violated],
        }
    }

    fn fork(&self) -> Box<dyn Tracker> {
        Box::new(self.clone())
    }
}

struct PCloseTracker {
    inner: Box<dyn Tracker>,
    turn: u64,
    status: Status,
}

impl Tracker for PCloseTracker {
    fn step(&mut self, i: Digit, m: &Move) {
        if !m.is_pass() {
            self.inner.step(i, m);
            if let (Status::Ok, Status::Violated { reason, .. }) =
                (&self.status, self.inner.status())
            {
                self.status = violation(self.turn, reason.clone());
            }
        }
        self.turn += 1;
    }

    fn status(&self) -> &Status {
        &self.status
    }

    fn pending_obligations(&self) -> Vec<String> {
        let mut out = vec![String::from("infinitely many non-pass moves")];
        out.extend(self.inner.pending_obligations());
        out
    }

    fn tentative(&self) -> FinSeq {
        self.inner.tentative()
    }

    fn committed_len(&self) -> usize {
        self.inner.committed_len()
    }

    fn rule_key(&self) -> Vec<u64> {
        self.inner.rule_key()
    }

    fn fork(&self) -> Box<dyn Tracker> {
        Box::new(PCloseTracker {
            inner: self.inner.fork(),
            turn: self.turn,
            status: self.status.clone(),
        })
    }
}

struct DelayTracker {
    inner: Box<dyn Tracker>,
    n: u64,
    turn: u64,
    status: Status,
}

impl Tracker for DelayTracker {
    fn step(&mut self, i: Digit, m: &Move) {
        if self.turn < self.n {
            if !m.is_pass() && self.status.is_ok() {
                self.status = violation(
                    self.turn,
                    format!("must pass on the first {} turns", self.n),
                );
            }
        } else {
            self.inner.step(i, m);
            if let (Status::Ok, Status::Violated { reason, .. }) =
                (&self.status, self.inner.status())
            {
                self.status = violation(self.turn, reason.clone());
            }
        }
        self.turn += 1;
    }

    fn status(&self) -> &Status {
        &self.status
    }

    fn pending_obligations(&self) -> Vec<String> {
        self.inner.pending_obligations()
    }

    fn tentative(&self) -> FinSeq {
        self.inner.tentative()
    }

    fn committed_len(&self) -> usize {
        self.inner.committed_len()
    }

    fn rule_key(&self) -> Vec<u64> {
        let mut k = vec![u64::from(!self.status.is_ok()), self.turn.min(self.n)];
        k.extend(self.inner.rule_key());
        k
    }

    fn fork(&self) -> Box<dyn Tracker> {
        Box::new(DelayTracker {
            inner: self.inner.fork(),
            n: self.n,
            turn: self.turn,
            status: self.status.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn feed(g: &GameSpec, moves: &[Move]) -> Box<dyn Tracker> {
        let mut t = g.tracker();
        for m in moves {
            t.step(0, m);
        }
        t
    }

    #[test]
    fn interpreter_examples() {
        let w = feed(
            &make_base_game(BaseKind::W),
            &[Move::PASS, Move::Nat(5), Move::PASS, Move::Nat(7)],
        );
        assert_eq!(w.tentative(), vec![5, 7]);
        assert_eq!(w.committed_len(), 2);
        let e = feed(
            &make_base_game(BaseKind::E),
            &[Move::Nat(1), Move::Nat(2), Move::ERASE, Move::Nat(3)],
        );
        assert_eq!(e.tentative(), vec![1, 3]);
        let bt = feed(
            &make_base_game(BaseKind::Bt),
            &[Move::Nat(1), Move::Nat(2), Move::BT, Move::Nat(4)],
        );
        assert_eq!(bt.tentative(), vec![4]);
    }

    #[test]
    fn erase_on_empty_is_clamped() {
        let e = feed(&make_base_game(BaseKind::E), &[Move::ERASE, Move::Nat(1)]);
        assert_eq!(e.tentative(), vec![1]);
        assert!(e.status().is_ok());
    }

    #[test]
    fn delay_rejects_early_digit() {
        let g = delay(&make_base_game(BaseKind::L), 2);
        let t = feed(&g, &[Move::Nat(1)]);
        assert!(matches!(t.status(), Status::Violated { turn: 0, .. }));
        let t = feed(&g, &[Move::PASS, Move::PASS, Move::Nat(3), Move::PASS]);
        assert!(matches!(t.status(), Status::Violated { turn: 3, .. }));
    }

    #[test]
    fn violation_is_absorbing() {
        let mut t = make_base_game(BaseKind::L).tracker();
        t.step(0, &Move::PASS);
        let s = t.status().clone();
        t.step(0, &Move::Nat(1));
        assert_eq!(t.status(), &s);
        assert!(t.tentative().is_empty());
    }
}
