//! Composite games: II's play is split into rows, each row is a reduction
//! game of its own, and the rows are combined by an activation rule or a
//! limit.
//!
//! Row `n` of a tensor-layout game receives II's moves at the turns
//! `⟨n, m⟩`, and is played against I's digit `x(m)`. In the coded layout
//! used by [`make_glipxi`] every turn carries one digit for each of the
//! first `2n + 2` rows.

pub mod coding;
mod compile;
mod strategy;
mod tracker;
mod transfer;

use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

pub use compile::{
    control_swap, gamma_compile, gamma_decompile, gamma_digits, glip_compile, lip_schedule,
    piecewise_compile, piecewise_decompile, CodeFamily, Decompiled, GammaDecider, LipPiece, Piece,
    PiecewiseSpec, Region,
};
pub use strategy::{CompositeStrategy, DefaultShape, RowFamily, RowSchema};
pub use transfer::{player_one_transfer, Transfer, TransferVariant};

use crate::error::{Error, Result};
use crate::game::{
    self, explore, legality_check_exact, make_base_game, BaseKind, GameKind, GameSpec,
    LegalityReport, Track, Tracker, Witness,
};
use crate::omega::{ControlSet, DetOmegaAutomaton, Membership};
use crate::strategy::Strategy;
use crate::streams::{lcm, pair, UpStream};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tail {
    /// The last explicit control set repeats forever.
    Repeat,
    /// The explicit list repeats as a whole.
    Cycle,
}

/// The control sets `Pₙ`: a nonempty list and a tail rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ControlSchedule {
    explicit: Vec<ControlSet>,
    tail: Tail,
    outside: Vec<UpStream>,
}

impl ControlSchedule {
    pub fn new(explicit: Vec<ControlSet>, tail: Tail) -> Result<Self> {
        if explicit.is_empty() {
            return Err(Error::InvalidParams(
                "a control schedule needs at least one set".into(),
            ));
        }
        let outside = explicit
            .iter()
            .map(|c| {
                c.automaton.rejected_witness().ok_or_else(|| {
                    Error::InvalidParams(format!("control set {} is the whole space", c.name))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ControlSchedule {
            explicit,
            tail,
            outside,
        })
    }

    pub fn repeat(c: ControlSet) -> Result<Self> {
        ControlSchedule::new(vec![c], Tail::Repeat)
    }

    pub fn explicit(&self) -> &[ControlSet] {
        &self.explicit
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    pub(crate) fn slot(&self, n: u64) -> usize {
        let len = self.explicit.len() as u64;
        let s = match self.tail {
            _ if n < len => n,
            Tail::Repeat => len - 1,
            Tail::Cycle => n % len,
        };
        s as usize
    }

    pub fn control(&self, n: u64) -> &ControlSet {
        &self.explicit[self.slot(n)]
    }

    /// A real outside `Pₙ`.
    pub fn outside(&self, n: u64) -> &UpStream {
        &self.outside[self.slot(n)]
    }

    /// `(start, len)`: `control(n + len) = control(n)` for `n ≥ start`.
    pub fn period(&self) -> (u64, u64) {
        let len = self.explicit.len() as u64;
        match self.tail {
            Tail::Repeat => (len - 1, 1),
            Tail::Cycle => (0, len),
        }
    }

    /// Least `n ≥ from` whose control set carries `name`.
    pub fn next_named(&self, name: &str, from: u64) -> Option<u64> {
        let (start, len) = self.period();
        (from..from.max(start) + len).find(|&n| self.control(n).name == name)
    }
}

#[derive(Clone, Debug)]
pub enum CompositeGame {
    /// Even rows are Wadge games against the controls, odd rows replay
    /// `inner`; with `tilde` the odd rows only answer to the rules where
    /// the control row below them is activated.
    Gfxi {
        inner: GameSpec,
        controls: ControlSchedule,
        tilde: bool,
    },
    /// Row `n` replays game `n`; the output is the limit of the rows.
    Glim { rows: RowFamily<GameSpec> },
    /// Row `⟨n, m⟩` writes the code of an automaton; output digit `n` is
    /// the least `m` whose automaton accepts I's real.
    Ggamma { max_m: u64 },
    /// Even rows write automaton codes, odd rows replay `inner`; row `i`
    /// is activated when its automaton accepts I's real.
    Gfgamma { inner: GameSpec },
    /// II writes single digits coding one digit for each of the first
    /// `2n + 2` rows; row `2k + i` is a `k`-Lipschitz game.
    GlipXi { controls: ControlSchedule },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layout {
    Tensor,
    LipCoded,
}

fn reject_nested(g: &GameSpec) -> Result<()> {
    if let GameKind::Composite(_) = g.kind {
        return Err(Error::UnsupportedGame(
            "composite games as rows of composite games".into(),
        ));
    }
    Ok(())
}

fn composite(domain: DetOmegaAutomaton, c: CompositeGame) -> GameSpec {
    GameSpec {
        domain,
        kind: GameKind::Composite(Box::new(c)),
    }
}

pub fn make_gfxi(inner: &GameSpec, controls: ControlSchedule) -> Result<GameSpec> {
    reject_nested(inner)?;
    if !inner.delayable() {
        return Err(Error::NotDelayable);
    }
    Ok(composite(
        inner.domain.clone(),
        CompositeGame::Gfxi {
            inner: inner.clone(),
            controls,
            tilde: false,
        },
    ))
}

pub fn make_tilde(inner: &GameSpec, controls: ControlSchedule) -> Result<GameSpec> {
    reject_nested(inner)?;
    if !inner.delayable() {
        return Err(Error::NotDelayable);
    }
    Ok(composite(
        inner.domain.clone(),
        CompositeGame::Gfxi {
            inner: inner.clone(),
            controls,
            tilde: true,
        },
    ))
}

pub fn make_glim(rows: RowFamily<GameSpec>) -> Result<GameSpec> {
    for g in rows.distinct() {
        reject_nested(g)?;
        if !g.p_closed() {
            return Err(Error::InvalidParams(
                "limit rows must be p-closed games".into(),
            ));
        }
    }
    Ok(composite(
        rows.get(0).domain.clone(),
        CompositeGame::Glim { rows },
    ))
}

pub fn make_ggamma(max_m: u64) -> GameSpec {
    composite(
        crate::omega::gallery::full(),
        CompositeGame::Ggamma { max_m },
    )
}

pub fn make_gfgamma(inner: &GameSpec) -> Result<GameSpec> {
    reject_nested(inner)?;
    if !inner.delayable() {
        return Err(Error::NotDelayable);
    }
    Ok(composite(
        inner.domain.clone(),
        CompositeGame::Gfgamma {
            inner: inner.clone(),
        },
    ))
}

pub fn make_glipxi(controls: ControlSchedule) -> GameSpec {
    composite(
        crate::omega::gallery::full(),
        CompositeGame::GlipXi { controls },
    )
}

/// Per-row activation verdicts, up to the least activated row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActivationProfile {
    pub verdicts: Vec<Membership>,
    pub least: Option<u64>,
    pub bound: u64,
}

impl CompositeGame {
    pub fn layout(&self) -> Layout {
        match self {
            CompositeGame::GlipXi { .. } => Layout::LipCoded,
            _ => Layout::Tensor,
        }
    }

    /// The reduction game played on row `n`.
    pub fn row_game(&self, n: u64) -> GameSpec {
        match self {
            CompositeGame::Gfxi { inner, .. } | CompositeGame::Gfgamma { inner } => {
                if n.is_multiple_of(2) {
                    make_base_game(BaseKind::W)
                } else {
                    inner.clone()
                }
            }
            CompositeGame::Glim { rows } => rows.get(n).clone(),
            CompositeGame::Ggamma { .. } => make_base_game(BaseKind::W),
            CompositeGame::GlipXi { .. } => make_base_game(BaseKind::KLip(n / 2)),
        }
    }

    pub fn p_closed(&self) -> bool {
        match self {
            CompositeGame::Gfxi { inner, .. } | CompositeGame::Gfgamma { inner } => {
                inner.p_closed()
            }
            CompositeGame::Glim { .. } | CompositeGame::Ggamma { .. } => true,
            CompositeGame::GlipXi { .. } => false,
        }
    }

    pub fn controls(&self) -> Option<&ControlSchedule> {
        match self {
            CompositeGame::Gfxi { controls, .. } | CompositeGame::GlipXi { controls } => {
                Some(controls)
            }
            _ => None,
        }
    }

    fn has_activation(&self) -> bool {
        !matches!(
            self,
            CompositeGame::Glim { .. } | CompositeGame::Ggamma { .. }
        )
    }

    /// Global turn of row `n`'s local turn `m`.
    pub fn global_turn(&self, n: u64, m: u64) -> u64 {
        match self.layout() {
            Layout::Tensor => pair(n, m),
            Layout::LipCoded => m,
        }
    }

    pub fn tracker(&self) -> Box<dyn Tracker> {
        Box::new(tracker::CompositeTracker::new(self.clone()))
    }

    /// Whether control row `i`, with output `out`, is activated on `x`.
    fn activated(&self, i: u64, out: &UpStream, x: &UpStream) -> bool {
        match self {
            CompositeGame::Gfxi { controls, .. } | CompositeGame::GlipXi { controls } => {
                controls.control(i).contains(out)
            }
            CompositeGame::Gfgamma { .. } => code_of(out).membership_up(x).is_in(),
            _ => false,
        }
    }

    /// Rows whose legality is checked individually, beyond which every row
    /// repeats one of them (or is legal by construction).
    fn checked_rows(&self, schema: &dyn RowSchema, fallback: u64) -> (u64, bool) {
        let r = schema.explicit_rows();
        let game_period = match self {
            CompositeGame::Glim { rows } => (rows.explicit_len(), rows.tail_len()),
            _ => (0, 2),
        };
        match schema.default_shape() {
            DefaultShape::Periodic(p) => {
                let span = lcm(p, lcm(game_period.1, 2));
                (r.max(game_period.0) + span, true)
            }
            DefaultShape::Uniform => (r, true),
            DefaultShape::Generated => (r.max(fallback), false),
        }
    }
}

/// The automaton coded at the start of `out`.
pub(crate) fn code_of(out: &UpStream) -> DetOmegaAutomaton {
    let len = coding::code_len(out.at(0));
    if len > 1 << 16 {
        return crate::omega::gallery::empty();
    }
    coding::decode_automaton(&out.take(len as usize))
}

fn schema_of(tau: &dyn Strategy) -> Result<&dyn RowSchema> {
    tau.as_schema().ok_or_else(|| {
        Error::UnsupportedGame(
            "exact composite evaluation needs a row-schema strategy; use depth mode".into(),
        )
    })
}

/// Exact output of row `n` on `x`.
pub(crate) fn row_output(
    c: &CompositeGame,
    schema: &dyn RowSchema,
    n: u64,
    x: &UpStream,
) -> Result<UpStream> {
    let g = c.row_game(n);
    let s = schema.row(n);
    game::eval_exact(&g, &*s, x, 0).map_err(|e| match e {
        Error::RuleViolation { turn, reason } => Error::RuleViolation {
            turn: c.global_turn(n, turn),
            reason: format!("row {n}: {reason}"),
        },
        e => e,
    })
}

/// Activation verdicts of control rows `0, 1, ...` on `x`, stopping at the
/// first activated row or at `max_rows`.
pub fn activation_profile(
    g: &GameSpec,
    tau: &dyn Strategy,
    x: &UpStream,
    max_rows: u64,
) -> Result<ActivationProfile> {
    let c = g
        .composite()
        .ok_or_else(|| Error::UnsupportedGame("not a composite game".into()))?;
    profile(c, schema_of(tau)?, x, max_rows)
}

fn profile(
    c: &CompositeGame,
    schema: &dyn RowSchema,
    x: &UpStream,
    max_rows: u64,
) -> Result<ActivationProfile> {
    if !c.has_activation() {
        return Err(Error::UnsupportedGame(
            "this composite game has no activation rule".into(),
        ));
    }
    let mut verdicts = Vec::new();
    for i in 0..max_rows {
        let out = row_output(c, schema, 2 * i, x)?;
        let on = c.activated(i, &out, x);
        verdicts.push(Membership::from_bool(on));
        if on {
            return Ok(ActivationProfile {
                verdicts,
                least: Some(i),
                bound: max_rows,
            });
        }
    }
    Ok(ActivationProfile {
        verdicts,
        least: None,
        bound: max_rows,
    })
}

/// Checks on `x` the per-row rules of `c`, given the activation verdicts
/// can be recomputed as needed.
fn check_rows_on(
    c: &CompositeGame,
    schema: &dyn RowSchema,
    x: &UpStream,
    max_rows: u64,
) -> Result<()> {
    let (bound, _) = c.checked_rows(schema, max_rows);
    for n in 0..bound {
        let conditional = matches!(c, CompositeGame::Gfxi { tilde: true, .. }) && n % 2 == 1;
        if conditional {
            let control = row_output(c, schema, n - 1, x)?;
            if !c.activated(n / 2, &control, x) {
                continue;
            }
        }
        row_output(c, schema, n, x)?;
    }
    Ok(())
}

/// Exact `f_τ(x)` for a row-schema strategy.
pub(crate) fn eval_exact(
    c: &CompositeGame,
    tau: &dyn Strategy,
    x: &UpStream,
    max_rows: u64,
) -> Result<UpStream> {
    let schema = schema_of(tau)?;
    match c {
        CompositeGame::Glim { .. } => {
            check_rows_on(c, schema, x, max_rows)?;
            limit(c, schema, x)
        }
        CompositeGame::Ggamma { .. } => Err(Error::UnsupportedGame(
            "the coded-set game is evaluated digit by digit; see gamma_digits".into(),
        )),
        _ => {
            check_rows_on(c, schema, x, max_rows)?;
            let p = profile(c, schema, x, max_rows)?;
            let i = p.least.ok_or(Error::NoActivationWithinBound(max_rows))?;
            row_output(c, schema, 2 * i + 1, x)
        }
    }
}

fn limit(c: &CompositeGame, schema: &dyn RowSchema, x: &UpStream) -> Result<UpStream> {
    let rows: Vec<u64> = if let Some(n) = schema.stable_from(x) {
        (n..n + 5).collect()
    } else if let DefaultShape::Periodic(p) = schema.default_shape() {
        let r = schema.explicit_rows();
        (r..r + p).collect()
    } else {
        return Err(Error::LimitUndetermined);
    };
    let first = row_output(c, schema, rows[0], x)?;
    for &n in &rows[1..] {
        if row_output(c, schema, n, x)? != first {
            return Err(Error::LimitUndetermined);
        }
    }
    Ok(first)
}

fn illegal_row(n: u64, report: LegalityReport) -> LegalityReport {
    match report {
        LegalityReport::Illegal { witness, reason } => LegalityReport::Illegal {
            witness,
            reason: format!("row {n}: {reason}"),
        },
        r => r,
    }
}

/// Exact legality of a row-schema strategy in a composite game.
pub(crate) fn legality_exact(
    c: &CompositeGame,
    domain: &DetOmegaAutomaton,
    tau: &dyn Strategy,
) -> Result<LegalityReport> {
    let schema = schema_of(tau)?;
    let (bound, complete) = c.checked_rows(schema, 16);
    let tilde = matches!(c, CompositeGame::Gfxi { tilde: true, .. });
    for n in 0..bound {
        let g = c.row_game(n).with_domain(domain.clone());
        let s = schema.row(n);
        let report = if tilde && n % 2 == 1 {
            conditional_legality(c, domain, schema, n / 2)?
        } else {
            legality_check_exact(&g, &*s)?
        };
        if !report.is_legal() {
            return Ok(illegal_row(n, report));
        }
    }
    if !complete {
        return Ok(LegalityReport::UnknownAtDepth(bound));
    }
    match c {
        CompositeGame::Gfxi { .. } | CompositeGame::GlipXi { .. } => {
            cover(c, domain, schema, bound)
        }
        CompositeGame::Glim { .. } => match schema.default_shape() {
            DefaultShape::Periodic(1) => Ok(LegalityReport::Legal),
            _ => Err(Error::UnsupportedGame(
                "existence of the limit for a non-constant tail".into(),
            )),
        },
        CompositeGame::Ggamma { .. } | CompositeGame::Gfgamma { .. } => {
            Ok(LegalityReport::UnknownAtDepth(bound))
        }
    }
}

/// Legality of odd row `2i + 1` of the tilde game: its rules only bind on
/// inputs where control row `2i` is activated.
fn conditional_legality(
    c: &CompositeGame,
    domain: &DetOmegaAutomaton,
    schema: &dyn RowSchema,
    i: u64,
) -> Result<LegalityReport> {
    let CompositeGame::Gfxi { controls, .. } = c else {
        unreachable!("tilde rows belong to the tilde game")
    };
    let p = &controls.control(i).automaton;
    let (cg, ig) = (
        c.row_game(2 * i),
        c.row_game(2 * i + 1).with_domain(domain.clone()),
    );
    let (cs, is) = (schema.row(2 * i), schema.row(2 * i + 1));
    let tracks = [
        Track {
            game: &cg,
            strategy: &*cs,
            output: Some(p),
        },
        Track {
            game: &ig,
            strategy: &*is,
            output: None,
        },
    ];
    let product = explore(domain, &tracks, true)?;
    let activated = product.output_priorities(0, p, true);
    let safe = product.unviolated(0);
    if let Some(x) =
        product.lasso_within(&safe, &[product.violated_priorities(1), activated.clone()])
    {
        return Ok(LegalityReport::Illegal {
            witness: Witness::Lasso(x),
            reason: "an activated row breaks the inner rules".into(),
        });
    }
    if let Some((x, reason)) = product.liveness_violation(1, &ig, &[activated])? {
        return Ok(LegalityReport::Illegal {
            witness: Witness::Lasso(x),
            reason,
        });
    }
    Ok(LegalityReport::Legal)
}

/// Whether some control row below `bound` is activated on every input in
/// the domain.
fn cover(
    c: &CompositeGame,
    domain: &DetOmegaAutomaton,
    schema: &dyn RowSchema,
    bound: u64,
) -> Result<LegalityReport> {
    let controls = c.controls().expect("activation by control sets");
    let rows: Vec<u64> = (0..bound.div_ceil(2).max(1)).collect();
    let games: Vec<GameSpec> = rows.iter().map(|&i| c.row_game(2 * i)).collect();
    let strategies: Vec<_> = rows.iter().map(|&i| schema.row(2 * i)).collect();
    let tracks: Vec<Track<'_>> = rows
        .iter()
        .map(|&i| Track {
            game: &games[i as usize],
            strategy: &*strategies[i as usize],
            output: Some(&controls.control(i).automaton),
        })
        .collect();
    let product = explore(domain, &tracks, false)?;
    let conds: Vec<Vec<u32>> = rows
        .iter()
        .map(|&i| product.output_priorities(i as usize, &controls.control(i).automaton, false))
        .collect();
    let all = vec![true; product.len()];
    let Some(x) = product.lasso_within(&all, &conds) else {
        return Ok(LegalityReport::Legal);
    };
    // rows above the checked window repeat checked ones, so a witness
    // activating nothing up to a generous bound activates nothing at all
    let far = bound + 2 * (controls.explicit().len() as u64 + 8);
    match profile(c, schema, &x, far)?.least {
        None => Ok(LegalityReport::Illegal {
            witness: Witness::Lasso(x),
            reason: "no control row is activated".into(),
        }),
        Some(_) => Ok(LegalityReport::UnknownAtDepth(far)),
    }
}

#[cfg(test)]
mod tests;
