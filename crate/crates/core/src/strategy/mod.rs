//! Strategies for both players.
//!
//! A strategy for II answers each finite prefix of I's real with a move; it
//! is run incrementally through a [`Play`] cursor. Cursors expose a `key`
//! identifying their internal state so that runs on ultimately periodic
//! inputs can be closed into lassos, and `fork` so that state spaces can be
//! explored.

mod combinators;
mod mealy;
mod player_one;
mod transducer;

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

pub use combinators::{
    compose, const_klip, const_strategy, delay_output, delayed_identity, id_strategy,
    klip_transfer_i, klip_transfer_ii, p_eliminate_eraser, project_strategy, tensor_strategies,
    tensor_turn, DelayOutput, DelayedIdentity, ProjectedStrategy, TensorStrategy,
};
pub use mealy::{MealyStrategy, Out, RowOut};
pub use player_one::{MealyStrategyI, PlayI, PlayIBox, StrategyI, StreamStrategyI};
pub use transducer::{lipschitz_compile, CompiledTransducer, DelayTransducer, Emit};

use crate::composite::RowSchema;
use crate::moves::Move;
use crate::streams::{Digit, FinSeq};

/// A running cursor of a player II strategy.
pub trait Play<'a> {
    /// II's answer once I has played `d`.
    fn respond(&mut self, d: Digit) -> Move;
    /// Identifies the cursor state: equal keys guarantee equal future
    /// behaviour. `None` when the strategy has no finite description.
    fn key(&self) -> Option<Vec<u64>>;
    fn fork(&self) -> PlayBox<'a>;
}

pub type PlayBox<'a> = Box<dyn Play<'a> + 'a>;

pub trait Strategy: Send + Sync {
    fn start(&self) -> PlayBox<'_>;

    /// Digits the strategy treats specially. All other digits are handled
    /// uniformly, so one fresh representative covers them.
    fn explicit_digits(&self) -> BTreeSet<Digit> {
        BTreeSet::new()
    }

    /// Row structure, for strategies in composite games.
    fn as_schema(&self) -> Option<&dyn RowSchema> {
        None
    }

    fn as_mealy(&self) -> Option<&MealyStrategy> {
        None
    }
}

pub type StrategyRef = Arc<dyn Strategy>;

impl<S: Strategy + ?Sized> Strategy for Arc<S> {
    fn start(&self) -> PlayBox<'_> {
        (**self).start()
    }

    fn explicit_digits(&self) -> BTreeSet<Digit> {
        (**self).explicit_digits()
    }

    fn as_schema(&self) -> Option<&dyn RowSchema> {
        (**self).as_schema()
    }

    fn as_mealy(&self) -> Option<&MealyStrategy> {
        (**self).as_mealy()
    }
}

/// Responses to the first `n` digits of `input`.
pub fn responses(strategy: &dyn Strategy, input: &[Digit]) -> Vec<Move> {
    let mut play = strategy.start();
    input.iter().map(|&d| play.respond(d)).collect()
}

/// Concatenates keys so that the result determines each part.
pub(crate) fn join_keys(parts: &[Option<Vec<u64>>]) -> Option<Vec<u64>> {
    let mut out = Vec::new();
    for p in parts {
        let p = p.as_ref()?;
        out.push(p.len() as u64);
        out.extend_from_slice(p);
    }
    Some(out)
}

/// A finite table of responses indexed by I's prefix; prefixes not in the
/// table get the default move.
#[derive(Clone, Debug)]
pub struct TableStrategy {
    table: BTreeMap<FinSeq, Move>,
    default: Move,
    depth: usize,
}

impl TableStrategy {
    pub fn new(table: BTreeMap<FinSeq, Move>, default: Move) -> Self {
        let depth = table.keys().map(Vec::len).max().unwrap_or(0);
        TableStrategy {
            table,
            default,
            depth,
        }
    }
}

struct TablePlay<'a> {
    table: &'a TableStrategy,
    seen: FinSeq,
}

impl<'a> Play<'a> for TablePlay<'a> {
    fn respond(&mut self, d: Digit) -> Move {
        if self.seen.len() <= self.table.depth {
            self.seen.push(d);
        }
        self.table
            .table
            .get(&self.seen)
            .cloned()
            .unwrap_or_else(|| self.table.default.clone())
    }

    fn key(&self) -> Option<Vec<u64>> {
        // past the table depth every answer is the default
        if self.seen.len() > self.table.depth {
            Some(vec![u64::MAX])
        } else {
            Some(self.seen.clone())
        }
    }

    fn fork(&self) -> PlayBox<'a> {
        Box::new(TablePlay {
            table: self.table,
            seen: self.seen.clone(),
        })
    }
}

impl Strategy for TableStrategy {
    fn start(&self) -> PlayBox<'_> {
        Box::new(TablePlay {
            table: self,
            seen: Vec::new(),
        })
    }

    fn explicit_digits(&self) -> BTreeSet<Digit> {
        self.table.keys().flatten().copied().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moves::Move;

    #[test]
    fn table_strategy_falls_back_to_default() {
        let mut t = BTreeMap::new();
        t.insert(vec![1], Move::Nat(5));
        t.insert(vec![1, 2], Move::PASS);
        let s = TableStrategy::new(t, Move::Nat(0));
        assert_eq!(
            responses(&s, &[1, 2, 3]),
            vec![Move::Nat(5), Move::PASS, Move::Nat(0)]
        );
        assert_eq!(responses(&s, &[2, 2]), vec![Move::Nat(0), Move::Nat(0)]);
    }
}
