use alloc::boxed::Box;
use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use super::{
    join_keys, MealyStrategy, Out, Play, PlayBox, PlayI, PlayIBox, Strategy, StrategyI, StrategyRef,
};
use crate::composite::{RowFamily, RowSchema};
use crate::moves::Move;
use crate::streams::{pair, unpair, Digit, UpStream};

/// `f = const y`.
pub fn const_strategy(y: &UpStream) -> MealyStrategy {
    MealyStrategy::constant(y)
}

/// `f = id`.
pub fn id_strategy() -> MealyStrategy {
    MealyStrategy::copy()
}

/// Passes `k` times, then plays I's digits `k` turns late.
#[derive(Clone, Copy, Debug)]
pub struct DelayedIdentity {
    k: u64,
}

pub fn delayed_identity(k: u64) -> DelayedIdentity {
    DelayedIdentity { k }
}

#[derive(Clone)]
struct DelayedIdentityPlay {
    k: u64,
    turn: u64,
    buffer: VecDeque<Digit>,
}

impl<'a> Play<'a> for DelayedIdentityPlay {
    fn respond(&mut self, d: Digit) -> Move {
        self.buffer.push_back(d);
        self.turn += 1;
        if self.turn <= self.k {
            Move::PASS
        } else {
            Move::Nat(self.buffer.pop_front().unwrap())
        }
    }

    fn key(&self) -> Option<Vec<u64>> {
        let mut k = vec![self.turn.min(self.k)];
        k.extend(self.buffer.iter().copied());
        Some(k)
    }

    fn fork(&self) -> PlayBox<'a> {
        Box::new(self.clone())
    }
}

impl Strategy for DelayedIdentity {
    fn start(&self) -> PlayBox<'_> {
        Box::new(DelayedIdentityPlay {
            k: self.k,
            turn: 0,
            buffer: VecDeque::new(),
        })
    }
}

/// `⊗ₙ τₙ`: at turn `⟨n, m⟩` row `n` answers I's first `m + 1` digits.
pub struct TensorStrategy {
    rows: RowFamily<StrategyRef>,
}

pub fn tensor_strategies(rows: RowFamily<StrategyRef>) -> TensorStrategy {
    TensorStrategy { rows }
}

impl TensorStrategy {
    pub fn rows(&self) -> &RowFamily<StrategyRef> {
        &self.rows
    }
}

struct TensorPlay<'a> {
    rows: &'a RowFamily<StrategyRef>,
    plays: Vec<PlayBox<'a>>,
    xs: Vec<Digit>,
}

impl<'a> Play<'a> for TensorPlay<'a> {
    fn respond(&mut self, d: Digit) -> Move {
        let t = self.xs.len() as u64;
        self.xs.push(d);
        let (n, m) = unpair(t);
        while self.plays.len() as u64 <= n {
            let next = self.plays.len() as u64;
            self.plays.push(self.rows.get(next).start());
        }
        self.plays[n as usize].respond(self.xs[m as usize])
    }

    fn key(&self) -> Option<Vec<u64>> {
        None
    }

    fn fork(&self) -> PlayBox<'a> {
        Box::new(TensorPlay {
            rows: self.rows,
            plays: self.plays.iter().map(|p| p.fork()).collect(),
            xs: self.xs.clone(),
        })
    }
}

impl Strategy for TensorStrategy {
    fn start(&self) -> PlayBox<'_> {
        Box::new(TensorPlay {
            rows: &self.rows,
            plays: Vec::new(),
            xs: Vec::new(),
        })
    }

    fn as_schema(&self) -> Option<&dyn RowSchema> {
        Some(self)
    }
}

/// `πₙ(τ)`: passes, except that τ's output digits with index `⟨n, m⟩` are
/// played. The output is `πₙ` of τ's output.
pub struct ProjectedStrategy {
    inner: StrategyRef,
    row: u64,
}

pub fn project_strategy(inner: StrategyRef, row: u64) -> ProjectedStrategy {
    ProjectedStrategy { inner, row }
}

struct ProjectedPlay<'a> {
    inner: PlayBox<'a>,
    row: u64,
    /// digits τ has output so far
    count: u64,
}

impl<'a> Play<'a> for ProjectedPlay<'a> {
    fn respond(&mut self, d: Digit) -> Move {
        let m = self.inner.respond(d);
        let Move::Nat(_) = m else { return Move::PASS };
        let k = self.count;
        self.count += 1;
        if unpair(k).0 == self.row {
            m
        } else {
            Move::PASS
        }
    }

    fn key(&self) -> Option<Vec<u64>> {
        // whether digit k belongs to row n depends on k mod 2^(n+1)
        let modulus = 1u64
            .checked_shl(self.row as u32 + 1)
            .filter(|_| self.row < 63)?;
        join_keys(&[Some(vec![self.count % modulus]), self.inner.key()])
    }

    fn fork(&self) -> PlayBox<'a> {
        Box::new(ProjectedPlay {
            inner: self.inner.fork(),
            row: self.row,
            count: self.count,
        })
    }
}

impl Strategy for ProjectedStrategy {
    fn start(&self) -> PlayBox<'_> {
        Box::new(ProjectedPlay {
            inner: self.inner.start(),
            row: self.row,
            count: 0,
        })
    }

    fn explicit_digits(&self) -> BTreeSet<Digit> {
        self.inner.explicit_digits()
    }
}

/// Global turn of row `n`'s `m`-th move.
pub fn tensor_turn(n: u64, m: u64) -> u64 {
    pair(n, m)
}

/// `τ₁ ⋆ τ₀`: τ₀'s digits are fed to τ₁ as they appear; passes of τ₀ become
/// passes. Meant for p-closed games with pass-style interpretations.
struct Compose {
    outer: StrategyRef,
    inner: StrategyRef,
    product: Option<MealyStrategy>,
}

pub fn compose(outer: StrategyRef, inner: StrategyRef) -> impl Strategy {
    let product = outer
        .as_mealy()
        .zip(inner.as_mealy())
        .map(|(o, i)| MealyStrategy::compose(o, i));
    Compose {
        outer,
        inner,
        product,
    }
}

struct ComposePlay<'a> {
    outer: PlayBox<'a>,
    inner: PlayBox<'a>,
}

impl<'a> Play<'a> for ComposePlay<'a> {
    fn respond(&mut self, d: Digit) -> Move {
        match self.inner.respond(d) {
            Move::Nat(e) => self.outer.respond(e),
            _ => Move::PASS,
        }
    }

    fn key(&self) -> Option<Vec<u64>> {
        join_keys(&[self.outer.key(), self.inner.key()])
    }

    fn fork(&self) -> PlayBox<'a> {
        Box::new(ComposePlay {
            outer: self.outer.fork(),
            inner: self.inner.fork(),
        })
    }
}

impl Strategy for Compose {
    fn start(&self) -> PlayBox<'_> {
        Box::new(ComposePlay {
            outer: self.outer.start(),
            inner: self.inner.start(),
        })
    }

    fn explicit_digits(&self) -> BTreeSet<Digit> {
        let mut d = self.outer.explicit_digits();
        d.extend(self.inner.explicit_digits());
        d
    }

    fn as_mealy(&self) -> Option<&MealyStrategy> {
        self.product.as_ref()
    }
}

/// Replaces passes in an eraser-game strategy by a dummy digit that is
/// erased again, keeping at most one move in hand.
struct PEliminate {
    inner: StrategyRef,
}

pub fn p_eliminate_eraser(inner: StrategyRef) -> impl Strategy {
    PEliminate { inner }
}

struct PEliminatePlay<'a> {
    inner: PlayBox<'a>,
    pending: Option<Move>,
}

impl<'a> Play<'a> for PEliminatePlay<'a> {
    fn respond(&mut self, d: Digit) -> Move {
        let r = self.inner.respond(d);
        // invariant: our stack with `pending` applied equals the inner stack
        let (emit, pending) = match (self.pending.take(), r) {
            (None, m) if m.is_pass() => (Move::Nat(0), Some(Move::ERASE)),
            (None, m) => (m, None),
            (Some(Move::Nat(p)), m) if m == Move::ERASE => {
                let _ = p;
                (Move::Nat(0), Some(Move::ERASE))
            }
            (Some(p), m) if m.is_pass() => (p, None),
            (Some(p), m) => (p, Some(m)),
        };
        self.pending = pending;
        emit
    }

    fn key(&self) -> Option<Vec<u64>> {
        let p = match &self.pending {
            None => vec![0],
            Some(Move::Nat(d)) => vec![1, *d],
            Some(_) => vec![2],
        };
        join_keys(&[Some(p), self.inner.key()])
    }

    fn fork(&self) -> PlayBox<'a> {
        Box::new(PEliminatePlay {
            inner: self.inner.fork(),
            pending: self.pending.clone(),
        })
    }
}

impl Strategy for PEliminate {
    fn start(&self) -> PlayBox<'_> {
        Box::new(PEliminatePlay {
            inner: self.inner.start(),
            pending: None,
        })
    }

    fn explicit_digits(&self) -> BTreeSet<Digit> {
        let mut d = self.inner.explicit_digits();
        d.insert(0);
        d
    }
}

/// I's strategy for the `k`-Lipschitz game built from one for the
/// Lipschitz game with `0^k` prepended to the target: II's `k` passes are
/// reported to the inner strategy as zeros.
struct KLipTransferI<S> {
    inner: S,
    k: u64,
}

pub fn klip_transfer_i<S: StrategyI>(inner: S, k: u64) -> impl StrategyI {
    KLipTransferI { inner, k }
}

struct KLipTransferIPlay<'a> {
    inner: PlayIBox<'a>,
    k: u64,
    turn: u64,
}

impl<'a> PlayI<'a> for KLipTransferIPlay<'a> {
    fn digit(&self) -> Digit {
        self.inner.digit()
    }

    fn observe(&mut self, m: &Move) {
        let relayed = match m {
            _ if self.turn < self.k => Move::Nat(0),
            Move::Nat(d) => Move::Nat(*d),
            // II already broke the rules; any continuation wins for I
            _ => Move::Nat(0),
        };
        self.inner.observe(&relayed);
        self.turn += 1;
    }

    fn key(&self) -> Option<Vec<u64>> {
        join_keys(&[Some(vec![self.turn.min(self.k)]), self.inner.key()])
    }

    fn fork(&self) -> PlayIBox<'a> {
        Box::new(KLipTransferIPlay {
            inner: self.inner.fork(),
            k: self.k,
            turn: self.turn,
        })
    }
}

impl<S: StrategyI> StrategyI for KLipTransferI<S> {
    fn start(&self) -> PlayIBox<'_> {
        Box::new(KLipTransferIPlay {
            inner: self.inner.start(),
            k: self.k,
            turn: 0,
        })
    }

    fn as_stream(&self) -> Option<UpStream> {
        self.inner.as_stream()
    }
}

/// II's strategy for the `k`-Lipschitz game built from one for the
/// Lipschitz game against `0^k ⌢ B`: pass `k` times, then follow `inner`,
/// unless its first `k` digits were not all zero, in which case play
/// `fallback` (a real outside `B`).
struct KLipTransferII {
    inner: StrategyRef,
    fallback: UpStream,
    k: u64,
}

pub fn klip_transfer_ii(inner: StrategyRef, fallback: UpStream, k: u64) -> impl Strategy {
    KLipTransferII { inner, fallback, k }
}

struct KLipTransferIIPlay<'a> {
    inner: PlayBox<'a>,
    fallback: &'a UpStream,
    k: u64,
    turn: u64,
    /// position in the fallback real once the guard has failed
    fallback_pos: Option<u64>,
}

impl<'a> Play<'a> for KLipTransferIIPlay<'a> {
    fn respond(&mut self, d: Digit) -> Move {
        let r = self.inner.respond(d);
        let t = self.turn;
        self.turn += 1;
        if t < self.k {
            if r != Move::Nat(0) && self.fallback_pos.is_none() {
                self.fallback_pos = Some(0);
            }
            return Move::PASS;
        }
        match self.fallback_pos {
            None => r,
            Some(p) => {
                let size = self.fallback.size() as u64;
                let next = if p + 1 == size {
                    self.fallback.prefix().len() as u64
                } else {
                    p + 1
                };
                self.fallback_pos = Some(next);
                Move::Nat(self.fallback.at(p))
            }
        }
    }

    fn key(&self) -> Option<Vec<u64>> {
        let own = vec![
            self.turn.min(self.k),
            self.fallback_pos.map_or(0, |p| p + 1),
        ];
        join_keys(&[Some(own), self.inner.key()])
    }

    fn fork(&self) -> PlayBox<'a> {
        Box::new(KLipTransferIIPlay {
            inner: self.inner.fork(),
            fallback: self.fallback,
            k: self.k,
            turn: self.turn,
            fallback_pos: self.fallback_pos,
        })
    }
}

impl Strategy for KLipTransferII {
    fn start(&self) -> PlayBox<'_> {
        Box::new(KLipTransferIIPlay {
            inner: self.inner.start(),
            fallback: &self.fallback,
            k: self.k,
            turn: 0,
            fallback_pos: None,
        })
    }

    fn explicit_digits(&self) -> BTreeSet<Digit> {
        let mut d = self.inner.explicit_digits();
        d.insert(0);
        d
    }
}

/// Passes `k` times, then plays the digits of `inner` in order, `k` turns
/// late. `inner` should answer every turn with a digit.
pub struct DelayOutput {
    inner: StrategyRef,
    k: u64,
}

pub fn delay_output(inner: StrategyRef, k: u64) -> DelayOutput {
    DelayOutput { inner, k }
}

struct DelayOutputPlay<'a> {
    inner: PlayBox<'a>,
    k: u64,
    turn: u64,
    buffer: VecDeque<Digit>,
}

impl<'a> Play<'a> for DelayOutputPlay<'a> {
    fn respond(&mut self, d: Digit) -> Move {
        if let Move::Nat(v) = self.inner.respond(d) {
            self.buffer.push_back(v);
        }
        self.turn += 1;
        if self.turn <= self.k {
            return Move::PASS;
        }
        self.buffer.pop_front().map_or(Move::PASS, Move::Nat)
    }

    fn key(&self) -> Option<Vec<u64>> {
        let mut own = vec![self.turn.min(self.k)];
        own.extend(self.buffer.iter().copied());
        join_keys(&[Some(own), self.inner.key()])
    }

    fn fork(&self) -> PlayBox<'a> {
        Box::new(DelayOutputPlay {
            inner: self.inner.fork(),
            k: self.k,
            turn: self.turn,
            buffer: self.buffer.clone(),
        })
    }
}

impl Strategy for DelayOutput {
    fn start(&self) -> PlayBox<'_> {
        Box::new(DelayOutputPlay {
            inner: self.inner.start(),
            k: self.k,
            turn: 0,
            buffer: VecDeque::new(),
        })
    }

    fn explicit_digits(&self) -> BTreeSet<Digit> {
        self.inner.explicit_digits()
    }
}

/// Constant `y` in the `k`-Lipschitz game: `k` passes, then `y`.
pub fn const_klip(y: &UpStream, k: u64) -> MealyStrategy {
    let k = k as usize;
    let p = y.prefix().len();
    let n = y.size();
    let mut steps: Vec<_> = (0..k).map(|i| (i, None, i + 1, Out::Pass)).collect();
    for i in 0..n {
        let next = if i + 1 == n { p } else { i + 1 };
        steps.push((k + i, None, k + next, Out::Nat(y.at(i as u64))));
    }
    MealyStrategy::new(k + n, 0, &steps).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::responses;
    use alloc::sync::Arc;

    #[test]
    fn tensor_rows_answer_at_their_turns() {
        let rows = RowFamily::new(
            vec![Arc::new(MealyStrategy::copy()) as StrategyRef],
            Arc::new(MealyStrategy::always(Out::Pass)),
        );
        let t = tensor_strategies(rows);
        let x: Vec<Digit> = (1..=16).collect();
        let moves = responses(&t, &x);
        // row 0 answers at turns 0, 2, 4, ... with I's digits 1, 2, 3, ...
        for m in 0..8u64 {
            assert_eq!(moves[pair(0, m) as usize], Move::Nat(m + 1));
        }
        assert_eq!(moves[1], Move::PASS);
    }

    #[test]
    fn projection_inverts_tensor() {
        let shift = MealyStrategy::new(2, 0, &[(0, None, 1, Out::Nat(9)), (1, None, 1, Out::Echo)])
            .unwrap();
        let rows = RowFamily::new(
            vec![
                Arc::new(MealyStrategy::copy()) as StrategyRef,
                Arc::new(shift.clone()),
            ],
            Arc::new(MealyStrategy::constant(&UpStream::constant(4))),
        );
        let t: StrategyRef = Arc::new(tensor_strategies(rows));
        let x: Vec<Digit> = (0..64).map(|i| i * 3 % 11).collect();
        let projected = responses(&project_strategy(t, 1), &x);
        let direct = responses(&shift, &x);
        for m in 0..16u64 {
            assert_eq!(projected[pair(1, m) as usize], direct[m as usize]);
        }
        assert!(projected
            .iter()
            .enumerate()
            .all(|(i, mv)| unpair(i as u64).0 == 1 || mv.is_pass()));
    }

    #[test]
    fn const_klip_passes_first() {
        let s = const_klip(&UpStream::periodic(vec![1, 2]).unwrap(), 2);
        assert_eq!(
            responses(&s, &[0; 5]),
            vec![
                Move::PASS,
                Move::PASS,
                Move::Nat(1),
                Move::Nat(2),
                Move::Nat(1)
            ]
        );
    }
}
