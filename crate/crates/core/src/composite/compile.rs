//! Compilers and decompilers between piecewise descriptions of functions
//! and row-schema strategies.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::coding::encode_automaton;
use super::{
    code_of, row_output, schema_of, CompositeGame, CompositeStrategy, ControlSchedule, RowSchema,
};
use crate::error::{Error, Result};
use crate::game::{self, make_base_game, BaseKind, GameSpec};
use crate::omega::{gallery, reduce_buchi_to_inf0, reduce_safety_to_z, DetOmegaAutomaton};
use crate::strategy::{
    compose, const_klip, delay_output, delayed_identity, lipschitz_compile, DelayTransducer,
    MealyStrategy, Strategy, StrategyRef,
};
use crate::streams::{checked_pair, unpair, Digit, FinSeq, UpStream};

/// Where a piece of a piecewise function applies.
#[derive(Clone)]
pub enum Region {
    /// An automaton of safety or Büchi shape; its reduction to a control
    /// set is built automatically.
    Automaton(DetOmegaAutomaton),
    /// The preimage of the control set named `control` under `sigma`, a
    /// strategy for the Wadge game.
    Witness { sigma: StrategyRef, control: String },
    /// Everything not in an earlier region.
    Rest,
}

#[derive(Clone)]
pub struct Piece {
    pub region: Region,
    pub strategy: StrategyRef,
}

#[derive(Clone)]
pub struct PiecewiseSpec {
    pub pieces: Vec<Piece>,
    pub controls: ControlSchedule,
}

fn arc(s: impl Strategy + 'static) -> StrategyRef {
    Arc::new(s)
}

/// Least `n ≥ from` with a control set reducing `region`, and the
/// reduction.
fn reduction(region: &Region, controls: &ControlSchedule, from: u64) -> Option<(u64, StrategyRef)> {
    let (start, len) = controls.period();
    let window = from..from.max(start) + len;
    match region {
        Region::Automaton(a) => {
            let mut candidates: Vec<(DetOmegaAutomaton, StrategyRef)> = Vec::new();
            if let Ok(t) = reduce_safety_to_z(a) {
                candidates.push((gallery::zero_stream(), arc(t)));
            }
            if let Ok(t) = reduce_buchi_to_inf0(a) {
                candidates.push((gallery::infinitely_many_zeros(), arc(t)));
            }
            window.clone().find_map(|n| {
                let p = &controls.control(n).automaton;
                candidates
                    .iter()
                    .find(|(target, _)| target.equivalent(p))
                    .map(|(_, t)| (n, t.clone()))
            })
        }
        Region::Witness { sigma, control } => controls
            .next_named(control, from)
            .map(|n| (n, sigma.clone())),
        Region::Rest => {
            let y = controls.control(from).automaton.accepted_witness()?;
            Some((from, arc(MealyStrategy::constant(&y))))
        }
    }
}

/// Rows activating piece `k` at control row `n_k` with its reduction, and
/// inactive rows (a constant outside the control, the identity) between.
pub fn piecewise_compile(spec: &PiecewiseSpec, inner: &GameSpec) -> Result<CompositeStrategy> {
    let controls = &spec.controls;
    let id = inner.identity_strategy();
    let mut rows: Vec<StrategyRef> = Vec::new();
    let mut next = 0;
    for (k, piece) in spec.pieces.iter().enumerate() {
        let (n, sigma) =
            reduction(&piece.region, controls, next).ok_or(Error::UnsupportedRegionShape(k))?;
        for i in next..n {
            rows.push(arc(MealyStrategy::constant(controls.outside(i))));
            rows.push(id.clone());
        }
        rows.push(sigma);
        rows.push(piece.strategy.clone());
        next = n + 1;
    }
    Ok(CompositeStrategy::with_controls(rows, controls, id))
}

/// Region deciders and piece strategies read off a strategy for the
/// activation game.
pub struct Decompiled {
    game: GameSpec,
    strategy: StrategyRef,
    pieces: u64,
}

pub fn piecewise_decompile(g: &GameSpec, tau: StrategyRef) -> Result<Decompiled> {
    let Some(CompositeGame::Gfxi { .. }) = g.composite() else {
        return Err(Error::UnsupportedGame(
            "decompilation applies to the activation games".into(),
        ));
    };
    let pieces = schema_of(&*tau)?.explicit_rows().div_ceil(2);
    Ok(Decompiled {
        game: g.clone(),
        strategy: tau,
        pieces,
    })
}

impl Decompiled {
    fn parts(&self) -> (&CompositeGame, &dyn RowSchema) {
        (
            self.game.composite().expect("checked"),
            self.strategy.as_schema().expect("checked"),
        )
    }

    pub fn pieces(&self) -> u64 {
        self.pieces
    }

    /// Index of the region containing `x`: the least activated row.
    pub fn region_of(&self, x: &UpStream, max_rows: u64) -> Result<u64> {
        let (c, s) = self.parts();
        super::profile(c, s, x, max_rows)?
            .least
            .ok_or(Error::NoActivationWithinBound(max_rows))
    }

    pub fn in_region(&self, n: u64, x: &UpStream, max_rows: u64) -> Result<bool> {
        Ok(self.region_of(x, max_rows)? == n)
    }

    pub fn piece(&self, n: u64) -> StrategyRef {
        self.parts().1.row(2 * n + 1)
    }

    /// The piece of `x`'s region evaluated at `x`.
    pub fn eval_piece(&self, x: &UpStream, max_rows: u64) -> Result<UpStream> {
        let n = self.region_of(x, max_rows)?;
        let (c, s) = self.parts();
        row_output(c, s, 2 * n + 1, x)
    }

    /// The explicit rows as a piecewise specification with witness regions.
    pub fn to_spec(&self) -> PiecewiseSpec {
        let (c, s) = self.parts();
        let controls = c.controls().expect("activation game").clone();
        let pieces = (0..self.pieces)
            .map(|n| Piece {
                region: Region::Witness {
                    sigma: s.row(2 * n),
                    control: controls.control(n).name.clone(),
                },
                strategy: s.row(2 * n + 1),
            })
            .collect();
        PiecewiseSpec { pieces, controls }
    }
}

/// Moves the explicit rows of `tau_hat` (for controls `old`) to the rows
/// `index_map[k]` of a strategy for controls `new`, composing control row
/// `k` with `sigmas[k]`, a reduction of `old.control(k)` to
/// `new.control(index_map[k])`.
pub fn control_swap(
    tau_hat: &CompositeStrategy,
    old: &ControlSchedule,
    new: &ControlSchedule,
    index_map: &[u64],
    sigmas: &[StrategyRef],
    inner_default: StrategyRef,
    samples: &[UpStream],
) -> Result<CompositeStrategy> {
    let k_count = tau_hat.explicit_rows().div_ceil(2) as usize;
    if index_map.len() != k_count || sigmas.len() != k_count {
        return Err(Error::InvalidParams(
            "one target row and one reduction per explicit control row".into(),
        ));
    }
    if index_map.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParams("target rows must increase".into()));
    }
    let w = make_base_game(BaseKind::W);
    for (k, sigma) in sigmas.iter().enumerate() {
        let row = tau_hat.row(2 * k as u64);
        let mut ys: Vec<UpStream> = samples.to_vec();
        for x in samples {
            if let Ok(y) = game::eval_exact(&w, &*row, x, 0) {
                ys.push(y);
            }
        }
        for y in ys {
            let image = game::eval_exact(&w, &**sigma, &y, 0)?;
            if old.control(k as u64).contains(&y) != new.control(index_map[k]).contains(&image) {
                return Err(Error::WitnessFailure { sample: y });
            }
        }
    }
    let mut rows: Vec<StrategyRef> = Vec::new();
    let mut next = 0;
    for (k, &n) in index_map.iter().enumerate() {
        for i in next..n {
            rows.push(arc(MealyStrategy::constant(new.outside(i))));
            rows.push(inner_default.clone());
        }
        rows.push(arc(compose(sigmas[k].clone(), tau_hat.row(2 * k as u64))));
        rows.push(tau_hat.row(2 * k as u64 + 1));
        next = n + 1;
    }
    Ok(CompositeStrategy::with_controls(rows, new, inner_default))
}

/// The automaton `S(n, m)` of a coded-set specification.
pub type CodeFamily = Arc<dyn Fn(u64, u64) -> DetOmegaAutomaton + Send + Sync>;

/// Row `⟨n, m⟩` plays the code of `family(n, m)` forever. Each sample must
/// lie in some `S(n, m)` with `m ≤ max_m` for every `n < max_n`.
pub fn gamma_compile(
    family: CodeFamily,
    samples: &[UpStream],
    max_n: u64,
    max_m: u64,
) -> Result<CompositeStrategy> {
    for x in samples {
        for n in 0..max_n {
            if !(0..=max_m).any(|m| family(n, m).membership_up(x).is_in()) {
                return Err(Error::IncoherentSpec {
                    n,
                    sample: x.clone(),
                });
            }
        }
    }
    Ok(CompositeStrategy::family(
        Vec::new(),
        move |r| {
            let (n, m) = unpair(r);
            let code = UpStream::new(encode_automaton(&family(n, m)), alloc::vec![0])
                .expect("nonempty period");
            arc(MealyStrategy::constant(&code))
        },
        None,
    ))
}

/// The first `digits` output digits of the coded-set game: digit `n` is the
/// least `m ≤ max_m` whose row codes an automaton accepting `x`.
pub fn gamma_digits(tau: &dyn Strategy, x: &UpStream, digits: u64, max_m: u64) -> Result<FinSeq> {
    let schema = schema_of(tau)?;
    let c = CompositeGame::Ggamma { max_m };
    let mut z = Vec::new();
    for n in 0..digits {
        let m = least_witness(&c, schema, n, x, max_m)?.ok_or(Error::NoWitnessWithinBound(n))?;
        z.push(m);
    }
    Ok(z)
}

fn least_witness(
    c: &CompositeGame,
    schema: &dyn RowSchema,
    n: u64,
    x: &UpStream,
    max_m: u64,
) -> Result<Option<Digit>> {
    for m in 0..=max_m {
        let r = checked_pair(n, m).ok_or(Error::NoWitnessWithinBound(n))?;
        if code_of(&row_output(c, schema, r, x)?)
            .membership_up(x)
            .is_in()
        {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// Decides `x ∈ f_τ⁻¹{z : z(n) = m}`: `x` is in the set coded at `(n, m)`
/// and in none coded at `(n, k)` for `k < m`.
pub struct GammaDecider {
    strategy: StrategyRef,
}

pub fn gamma_decompile(tau: StrategyRef) -> Result<GammaDecider> {
    schema_of(&*tau)?;
    Ok(GammaDecider { strategy: tau })
}

impl GammaDecider {
    pub fn member(&self, n: u64, m: u64, x: &UpStream) -> Result<bool> {
        let schema = self.strategy.as_schema().expect("checked");
        let c = CompositeGame::Ggamma { max_m: m };
        Ok(least_witness(&c, schema, n, x, m)? == Some(m))
    }
}

/// A piece of a piecewise-Lipschitz function.
#[derive(Clone)]
pub struct LipPiece {
    pub region: Region,
    pub transducer: DelayTransducer,
}

/// `m₀ = max(n₀, i₀)`, `mₖ₊₁ = max(nₖ₊₁, iₖ₊₁, mₖ + 1)`.
pub fn lip_schedule(ns: &[u64], is: &[u64]) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::with_capacity(ns.len());
    for (&n, &i) in ns.iter().zip(is) {
        let floor = out.last().map_or(0, |m| m + 1);
        out.push(n.max(i).max(floor));
    }
    out
}

/// Places piece `k` at rows `2mₖ` and `2mₖ + 1` of the coded Lipschitz
/// game. Returns the strategy and the rows `mₖ`.
pub fn glip_compile(
    pieces: &[LipPiece],
    controls: &ControlSchedule,
) -> Result<(CompositeStrategy, Vec<u64>)> {
    let mut rows: Vec<StrategyRef> = Vec::new();
    let mut schedule: Vec<u64> = Vec::new();
    for (k, piece) in pieces.iter().enumerate() {
        let budget = piece.transducer.budget().ok_or(Error::BudgetViolation {
            budget: 0,
            found: None,
        })?;
        let (n, _) =
            reduction(&piece.region, controls, 0).ok_or(Error::UnsupportedRegionShape(k))?;
        let floor = schedule.last().map_or(0, |m| m + 1);
        let m = lip_schedule(&[n], &[budget])[0].max(floor);
        // the formula's row may carry another control set on cyclic schedules
        let (m, sigma) =
            reduction(&piece.region, controls, m).ok_or(Error::UnsupportedRegionShape(k))?;
        for i in schedule.last().map_or(0, |p| p + 1)..m {
            rows.push(arc(const_klip(controls.outside(i), i)));
            rows.push(arc(delayed_identity(i)));
        }
        rows.push(arc(delay_output(sigma, m)));
        rows.push(arc(lipschitz_compile(piece.transducer.clone(), m)?));
        schedule.push(m);
    }
    Ok((CompositeStrategy::lip(rows, controls), schedule))
}
