use alloc::boxed::Box;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use super::coding::{coded_move, enum_index_big};
use super::{ControlSchedule, Layout};
use crate::moves::Move;
use crate::strategy::{
    const_klip, delayed_identity, MealyStrategy, Play, PlayBox, Strategy, StrategyRef,
    TensorStrategy,
};
use crate::streams::{unpair, Digit, UpStream};

/// A row-indexed family: explicit entries, then a periodic tail.
#[derive(Clone)]
pub struct RowFamily<T> {
    explicit: Vec<T>,
    tail: Vec<T>,
}

impl<T> RowFamily<T> {
    pub fn new(explicit: Vec<T>, tail: T) -> Self {
        RowFamily {
            explicit,
            tail: alloc::vec![tail],
        }
    }

    /// `None` if `tail` is empty.
    pub fn periodic(explicit: Vec<T>, tail: Vec<T>) -> Option<Self> {
        (!tail.is_empty()).then_some(RowFamily { explicit, tail })
    }

    pub fn get(&self, n: u64) -> &T {
        let e = self.explicit.len() as u64;
        if n < e {
            &self.explicit[n as usize]
        } else {
            &self.tail[((n - e) % self.tail.len() as u64) as usize]
        }
    }

    pub fn explicit_len(&self) -> u64 {
        self.explicit.len() as u64
    }

    pub fn tail_len(&self) -> u64 {
        self.tail.len() as u64
    }

    pub fn explicit(&self) -> &[T] {
        &self.explicit
    }

    pub fn tail(&self) -> &[T] {
        &self.tail
    }

    /// Every entry that occurs.
    pub fn distinct(&self) -> impl Iterator<Item = &T> {
        self.explicit.iter().chain(&self.tail)
    }
}

impl<T: fmt::Debug> fmt::Debug for RowFamily<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RowFamily")
            .field("explicit", &self.explicit)
            .field("tail", &self.tail)
            .finish()
    }
}

/// How rows at and above [`RowSchema::explicit_rows`] are produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DefaultShape {
    /// Rows repeat with this period.
    Periodic(u64),
    /// Constants outside the controls and identities; legal by construction.
    Uniform,
    /// Generated row by row; only finitely many can be checked.
    Generated,
}

/// Row structure of a composite-game strategy.
pub trait RowSchema: Send + Sync {
    fn row(&self, n: u64) -> StrategyRef;
    fn explicit_rows(&self) -> u64;
    fn default_shape(&self) -> DefaultShape;
    /// A row from which all rows induce the same output on `x`, when the
    /// family declares one.
    fn stable_from(&self, _x: &UpStream) -> Option<u64> {
        None
    }
}

impl RowSchema for TensorStrategy {
    fn row(&self, n: u64) -> StrategyRef {
        self.rows().get(n).clone()
    }

    fn explicit_rows(&self) -> u64 {
        self.rows().explicit_len()
    }

    fn default_shape(&self) -> DefaultShape {
        DefaultShape::Periodic(self.rows().tail_len())
    }
}

type RowMaker = Arc<dyn Fn(u64) -> StrategyRef + Send + Sync>;
type Modulus = Arc<dyn Fn(&UpStream) -> Option<u64> + Send + Sync>;

#[derive(Clone)]
enum Defaults {
    Periodic(Vec<StrategyRef>),
    /// Even rows `2i`: the constant outside `Pᵢ`; odd rows: `inner`.
    Controls {
        consts: Vec<StrategyRef>,
        schedule: ControlSchedule,
        inner: StrategyRef,
    },
    /// As `Controls`, shifted into the `i`-Lipschitz rows of the coded game.
    LipControls {
        schedule: ControlSchedule,
    },
    Family {
        make: RowMaker,
        stable_from: Option<Modulus>,
    },
}

/// An explicit row-indexed bundle of strategies with a default rule for
/// the rows above them.
#[derive(Clone)]
pub struct CompositeStrategy {
    layout: Layout,
    explicit: Vec<StrategyRef>,
    defaults: Defaults,
}

impl fmt::Debug for CompositeStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shape = match &self.defaults {
            Defaults::Periodic(t) => alloc::format!("periodic({})", t.len()),
            Defaults::Controls { .. } => "controls".into(),
            Defaults::LipControls { .. } => "lip-controls".into(),
            Defaults::Family { .. } => "family".into(),
        };
        f.debug_struct("CompositeStrategy")
            .field("layout", &self.layout)
            .field("explicit_rows", &self.explicit.len())
            .field("defaults", &shape)
            .finish()
    }
}

impl CompositeStrategy {
    /// Rows from `explicit`, then `tail` repeating.
    pub fn periodic(explicit: Vec<StrategyRef>, tail: Vec<StrategyRef>) -> Option<Self> {
        (!tail.is_empty()).then_some(CompositeStrategy {
            layout: Layout::Tensor,
            explicit,
            defaults: Defaults::Periodic(tail),
        })
    }

    /// Rows from `explicit`; above them, control rows play a constant
    /// outside their control set and inner rows play `inner`.
    pub fn with_controls(
        explicit: Vec<StrategyRef>,
        schedule: &ControlSchedule,
        inner: StrategyRef,
    ) -> Self {
        let consts = (0..schedule.explicit().len() as u64)
            .map(|i| Arc::new(MealyStrategy::constant(schedule.outside(i))) as StrategyRef)
            .collect();
        CompositeStrategy {
            layout: Layout::Tensor,
            explicit,
            defaults: Defaults::Controls {
                consts,
                schedule: schedule.clone(),
                inner,
            },
        }
    }

    /// A strategy for the coded Lipschitz game: row `2k + i` must be a
    /// `k`-Lipschitz strategy.
    pub fn lip(explicit: Vec<StrategyRef>, schedule: &ControlSchedule) -> Self {
        CompositeStrategy {
            layout: Layout::LipCoded,
            explicit,
            defaults: Defaults::LipControls {
                schedule: schedule.clone(),
            },
        }
    }

    /// Rows generated by `make` above `explicit`, with an optional modulus
    /// of stabilization for limit games.
    pub fn family(
        explicit: Vec<StrategyRef>,
        make: impl Fn(u64) -> StrategyRef + Send + Sync + 'static,
        stable_from: Option<Modulus>,
    ) -> Self {
        CompositeStrategy {
            layout: Layout::Tensor,
            explicit,
            defaults: Defaults::Family {
                make: Arc::new(make),
                stable_from,
            },
        }
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn explicit(&self) -> &[StrategyRef] {
        &self.explicit
    }

    /// A cursor for row `n` borrowing from `self` where possible.
    fn row_play(&self, n: u64) -> PlayBox<'_> {
        let e = self.explicit.len() as u64;
        if n < e {
            return self.explicit[n as usize].start();
        }
        match &self.defaults {
            Defaults::Periodic(tail) => tail[((n - e) % tail.len() as u64) as usize].start(),
            Defaults::Controls {
                consts,
                schedule,
                inner,
            } => {
                if n.is_multiple_of(2) {
                    consts[schedule.slot(n / 2)].start()
                } else {
                    inner.start()
                }
            }
            _ => Box::new(ReplayPlay {
                strategy: self.row(n),
                xs: Vec::new(),
            }),
        }
    }
}

impl RowSchema for CompositeStrategy {
    fn row(&self, n: u64) -> StrategyRef {
        let e = self.explicit.len() as u64;
        if n < e {
            return self.explicit[n as usize].clone();
        }
        match &self.defaults {
            Defaults::Periodic(tail) => tail[((n - e) % tail.len() as u64) as usize].clone(),
            Defaults::Controls {
                consts,
                schedule,
                inner,
            } => {
                if n.is_multiple_of(2) {
                    consts[schedule.slot(n / 2)].clone()
                } else {
                    inner.clone()
                }
            }
            Defaults::LipControls { schedule } => {
                let k = n / 2;
                if n.is_multiple_of(2) {
                    Arc::new(const_klip(schedule.outside(k), k))
                } else {
                    Arc::new(delayed_identity(k))
                }
            }
            Defaults::Family { make, .. } => make(n),
        }
    }

    fn explicit_rows(&self) -> u64 {
        self.explicit.len() as u64
    }

    fn default_shape(&self) -> DefaultShape {
        match &self.defaults {
            Defaults::Periodic(t) => DefaultShape::Periodic(t.len() as u64),
            Defaults::Controls { .. } | Defaults::LipControls { .. } => DefaultShape::Uniform,
            Defaults::Family { .. } => DefaultShape::Generated,
        }
    }

    fn stable_from(&self, x: &UpStream) -> Option<u64> {
        match &self.defaults {
            Defaults::Family {
                stable_from: Some(m),
                ..
            } => m(x).map(|n| n.max(self.explicit.len() as u64)),
            _ => None,
        }
    }
}

/// Re-runs a strategy from scratch on each turn; for rows whose strategy
/// is built on demand.
struct ReplayPlay {
    strategy: StrategyRef,
    xs: Vec<Digit>,
}

impl<'a> Play<'a> for ReplayPlay {
    fn respond(&mut self, d: Digit) -> Move {
        self.xs.push(d);
        let mut p = self.strategy.start();
        let (last, init) = self.xs.split_last().expect("just pushed");
        for &x in init {
            p.respond(x);
        }
        p.respond(*last)
    }

    fn key(&self) -> Option<Vec<u64>> {
        None
    }

    fn fork(&self) -> PlayBox<'a> {
        Box::new(ReplayPlay {
            strategy: self.strategy.clone(),
            xs: self.xs.clone(),
        })
    }
}

struct CompositePlay<'a> {
    s: &'a CompositeStrategy,
    rows: Vec<PlayBox<'a>>,
    xs: Vec<Digit>,
}

impl<'a> CompositePlay<'a> {
    fn ensure(&mut self, n: u64) {
        while self.rows.len() as u64 <= n {
            let next = self.rows.len() as u64;
            let mut p = self.s.row_play(next);
            if self.s.layout == Layout::LipCoded {
                // rows 2k and 2k + 1 join at turn k; catch up on the passes
                for &x in self.xs.iter().take((next / 2) as usize) {
                    p.respond(x);
                }
            }
            self.rows.push(p);
        }
    }
}

impl<'a> Play<'a> for CompositePlay<'a> {
    fn respond(&mut self, d: Digit) -> Move {
        let t = self.xs.len() as u64;
        self.xs.push(d);
        match self.s.layout {
            Layout::Tensor => {
                let (n, m) = unpair(t);
                self.ensure(n);
                self.rows[n as usize].respond(self.xs[m as usize])
            }
            Layout::LipCoded => {
                self.ensure(2 * t + 1);
                let mut digits = Vec::with_capacity(2 * t as usize + 2);
                let mut ok = true;
                for p in &mut self.rows {
                    match p.respond(d) {
                        Move::Nat(v) => digits.push(v),
                        _ => ok = false,
                    }
                }
                // a row that does not answer with a digit has no code
                if ok {
                    coded_move(enum_index_big(&digits))
                } else {
                    Move::PASS
                }
            }
        }
    }

    fn key(&self) -> Option<Vec<u64>> {
        None
    }

    fn fork(&self) -> PlayBox<'a> {
        Box::new(CompositePlay {
            s: self.s,
            rows: self.rows.iter().map(|p| p.fork()).collect(),
            xs: self.xs.clone(),
        })
    }
}

impl Strategy for CompositeStrategy {
    fn start(&self) -> PlayBox<'_> {
        Box::new(CompositePlay {
            s: self,
            rows: Vec::new(),
            xs: Vec::new(),
        })
    }

    fn as_schema(&self) -> Option<&dyn super::RowSchema> {
        Some(self)
    }
}
