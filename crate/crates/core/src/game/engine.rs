//! Running games: finite-depth runs, exact evaluation on ultimately
//! periodic inputs, and adjudication.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::{GameKind, GameSpec, LassoRun, Status};
use crate::composite;
use crate::error::{Error, Result};
use crate::moves::Move;
use crate::omega::{DetOmegaAutomaton, PrefixVerdict};
use crate::strategy::{Strategy, StrategyI};
use crate::streams::{Digit, FinSeq, StreamView, UpStream};

/// Longest run searched for a repeated state before giving up.
pub const MAX_LASSO_TURNS: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepthReport {
    pub transcript: Vec<(Digit, Move)>,
    pub status: Status,
    pub tentative: FinSeq,
    pub committed_len: usize,
    pub domain: PrefixVerdict,
    pub rows: Vec<(u64, PrefixVerdict)>,
    pub obligations: Vec<String>,
}

/// Plays `d` turns of `g` with I's digits read from `input`.
pub fn run_to_depth(
    g: &GameSpec,
    input: &dyn StreamView,
    tau: &dyn Strategy,
    d: u64,
) -> DepthReport {
    let mut play = tau.start();
    let mut tracker = g.tracker();
    let mut transcript = Vec::new();
    for t in 0..d {
        let i = input.digit(t);
        let m = play.respond(i);
        tracker.step(i, &m);
        transcript.push((i, m));
    }
    report(g, transcript, &*tracker)
}

/// Plays `d` turns of `g` between two strategies.
pub fn run_vs_to_depth(
    g: &GameSpec,
    sigma: &dyn StrategyI,
    tau: &dyn Strategy,
    d: u64,
) -> DepthReport {
    let mut one = sigma.start();
    let mut two = tau.start();
    let mut tracker = g.tracker();
    let mut transcript = Vec::new();
    for _ in 0..d {
        let i = one.digit();
        let m = two.respond(i);
        one.observe(&m);
        tracker.step(i, &m);
        transcript.push((i, m));
    }
    report(g, transcript, &*tracker)
}

fn report(
    g: &GameSpec,
    transcript: Vec<(Digit, Move)>,
    tracker: &dyn super::Tracker,
) -> DepthReport {
    let xs: Vec<Digit> = transcript.iter().map(|t| t.0).collect();
    DepthReport {
        status: tracker.status().clone(),
        tentative: tracker.tentative(),
        committed_len: tracker.committed_len(),
        domain: g.domain.prefix_verdict(&xs),
        rows: tracker.row_verdicts(),
        obligations: tracker.pending_obligations(),
        transcript,
    }
}

/// Tentative output after `d` turns; a finite rule violation is an error.
pub fn eval_depth(g: &GameSpec, tau: &dyn Strategy, x: &dyn StreamView, d: u64) -> Result<FinSeq> {
    let r = run_to_depth(g, x, tau, d);
    if r.domain == PrefixVerdict::Rejected {
        return Err(Error::DomainViolation);
    }
    match r.status {
        Status::Ok => Ok(r.tentative),
        Status::Violated { turn, reason } => Err(Error::RuleViolation { turn, reason }),
    }
}

/// Runs a finite-state strategy on `x` until its state and the position in
/// `x`'s period repeat.
pub fn run_lasso(x: &UpStream, tau: &dyn Strategy) -> Result<LassoRun> {
    let p = x.prefix().len() as u64;
    let l = x.period().len() as u64;
    let mut play = tau.start();
    let mut seen: BTreeMap<(Vec<u64>, u64), usize> = BTreeMap::new();
    let mut transcript = Vec::new();
    for t in 0..MAX_LASSO_TURNS {
        if t >= p {
            let key = play.key().ok_or(Error::NotFiniteState)?;
            if let Some(&start) = seen.get(&(key.clone(), (t - p) % l)) {
                let period = transcript.split_off(start);
                return Ok(LassoRun {
                    prefix: transcript,
                    period,
                });
            }
            seen.insert((key, (t - p) % l), transcript.len());
        }
        let d = x.at(t);
        let m = play.respond(d);
        transcript.push((d, m));
    }
    Err(Error::NoLasso(MAX_LASSO_TURNS))
}

/// Runs two finite-state strategies against each other until their joint
/// state repeats.
pub fn run_lasso_vs(sigma: &dyn StrategyI, tau: &dyn Strategy) -> Result<LassoRun> {
    let mut one = sigma.start();
    let mut two = tau.start();
    let mut seen: BTreeMap<(Vec<u64>, Vec<u64>), usize> = BTreeMap::new();
    let mut transcript = Vec::new();
    for _ in 0..MAX_LASSO_TURNS {
        let key = (
            one.key().ok_or(Error::NotFiniteState)?,
            two.key().ok_or(Error::NotFiniteState)?,
        );
        if let Some(&start) = seen.get(&key) {
            let period = transcript.split_off(start);
            return Ok(LassoRun {
                prefix: transcript,
                period,
            });
        }
        seen.insert(key, transcript.len());
        let d = one.digit();
        let m = two.respond(d);
        one.observe(&m);
        transcript.push((d, m));
    }
    Err(Error::NoLasso(MAX_LASSO_TURNS))
}

/// The exact value `f_τ(x)`.
pub fn eval_exact(
    g: &GameSpec,
    tau: &dyn Strategy,
    x: &UpStream,
    max_rows: u64,
) -> Result<UpStream> {
    if !g.domain.membership_up(x).is_in() {
        return Err(Error::DomainViolation);
    }
    match &g.kind {
        GameKind::Composite(c) => composite::eval_exact(c, tau, x, max_rows),
        _ => g.up_output(&run_lasso(x, tau)?),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Winner {
    I,
    II,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub winner: Winner,
    pub reason: String,
}

fn verdict(winner: Winner, reason: &str) -> Verdict {
    Verdict {
        winner,
        reason: reason.into(),
    }
}

fn payoff(
    x: &UpStream,
    out: Result<UpStream>,
    a: &DetOmegaAutomaton,
    b: &DetOmegaAutomaton,
) -> Result<Verdict> {
    match out {
        Err(Error::DomainViolation) => Ok(verdict(Winner::II, "I's real is outside the domain")),
        Err(Error::RuleViolation { reason, .. }) => Ok(Verdict {
            winner: Winner::I,
            reason,
        }),
        Err(e) => Err(e),
        Ok(y) => {
            let xa = a.membership_up(x).is_in();
            let yb = b.membership_up(&y).is_in();
            Ok(if xa == yb {
                verdict(Winner::II, "x ∈ A iff output ∈ B")
            } else {
                verdict(
                    Winner::I,
                    "membership of x in A and of the output in B differ",
                )
            })
        }
    }
}

/// Exact winner of the run where I plays `x` and II follows `tau`.
pub fn adjudicate_up(
    g: &GameSpec,
    x: &UpStream,
    tau: &dyn Strategy,
    a: &DetOmegaAutomaton,
    b: &DetOmegaAutomaton,
    max_rows: u64,
) -> Result<Verdict> {
    payoff(x, eval_exact(g, tau, x, max_rows), a, b)
}

/// Exact winner of the run between two finite-state strategies in a
/// non-composite game.
pub fn adjudicate_vs(
    g: &GameSpec,
    sigma: &dyn StrategyI,
    tau: &dyn Strategy,
    a: &DetOmegaAutomaton,
    b: &DetOmegaAutomaton,
) -> Result<Verdict> {
    if let GameKind::Composite(_) = g.kind {
        return Err(Error::UnsupportedGame(
            "strategy-vs-strategy adjudication of composite games".into(),
        ));
    }
    let run = run_lasso_vs(sigma, tau)?;
    let x = UpStream::new(
        run.prefix.iter().map(|t| t.0).collect(),
        run.period.iter().map(|t| t.0).collect(),
    )
    .expect("lasso period is nonempty");
    let out = if g.domain.membership_up(&x).is_in() {
        g.up_output(&run)
    } else {
        Err(Error::DomainViolation)
    };
    payoff(&x, out, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{make_base_game, BaseKind};
    use crate::omega::gallery;
    use crate::strategy::{MealyStrategy, Out};
    use alloc::vec;

    #[test]
    fn const_strategy_in_wadge_game() {
        let g = make_base_game(BaseKind::W);
        let tau = MealyStrategy::constant(&UpStream::zeros());
        let r = run_to_depth(&g, &UpStream::constant(4), &tau, 8);
        assert_eq!(r.tentative, vec![0; 8]);
    }

    #[test]
    fn two_lip_identity_after_passes() {
        let g = make_base_game(BaseKind::KLip(2));
        let tau = crate::strategy::delayed_identity(2);
        let x = UpStream::new(vec![4, 7], vec![1]).unwrap();
        let r = run_to_depth(&g, &x, &tau, 4);
        assert_eq!(r.tentative, vec![4, 7]);
        assert_eq!(eval_exact(&g, &tau, &x, 0).unwrap(), x);
    }

    #[test]
    fn exact_examples() {
        let l = make_base_game(BaseKind::L);
        let x = UpStream::periodic(vec![2, 9]).unwrap();
        assert_eq!(eval_exact(&l, &MealyStrategy::copy(), &x, 0).unwrap(), x);

        // pass on odd turns, copy on even ones
        let w = make_base_game(BaseKind::W);
        let tau =
            MealyStrategy::new(2, 0, &[(0, None, 1, Out::Echo), (1, None, 0, Out::Pass)]).unwrap();
        for x in [
            UpStream::periodic(vec![1, 2, 3]).unwrap(),
            UpStream::new(vec![5], vec![0, 1]).unwrap(),
        ] {
            let y = eval_exact(&w, &tau, &x, 0).unwrap();
            let evens: Vec<_> = (0..20).map(|i| x.at(2 * i)).collect();
            assert_eq!(y.take(20), evens);
        }

        // copy, but on a 1 erase the previous digit and write 1 next turn
        let e = make_base_game(BaseKind::E);
        let tau = MealyStrategy::new(
            2,
            0,
            &[
                (0, Some(1), 1, Out::Erase),
                (0, None, 0, Out::Echo),
                (1, None, 0, Out::Nat(1)),
            ],
        )
        .unwrap();
        let x = UpStream::new(vec![0, 1], vec![0]).unwrap();
        assert_eq!(
            eval_exact(&e, &tau, &x, 0).unwrap(),
            UpStream::new(vec![1], vec![0]).unwrap()
        );
    }

    #[test]
    fn adjudication_examples() {
        let w = make_base_game(BaseKind::W);
        let full = gallery::full();
        let empty = gallery::empty();
        let copy = MealyStrategy::copy();
        let x = UpStream::constant(3);
        assert_eq!(
            adjudicate_up(&w, &x, &copy, &full, &full, 0)
                .unwrap()
                .winner,
            Winner::II
        );
        assert_eq!(
            adjudicate_up(&w, &x, &copy, &full, &empty, 0)
                .unwrap()
                .winner,
            Winner::I
        );
        let n0 = gallery::cylinder(&[0]);
        for x in [UpStream::zeros(), UpStream::constant(1)] {
            assert_eq!(
                adjudicate_up(&w, &x, &copy, &n0, &n0, 0).unwrap().winner,
                Winner::II
            );
        }
        let pass = MealyStrategy::always(Out::Pass);
        assert_eq!(
            adjudicate_up(&w, &x, &pass, &full, &full, 0)
                .unwrap()
                .winner,
            Winner::I
        );
    }
}
