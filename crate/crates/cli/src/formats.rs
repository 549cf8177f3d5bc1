//! JSON readers and writers for streams, automata, moves, strategies, games
//! and composite specifications.

use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use baire_games::composite::{
    make_gfgamma, make_gfxi, make_ggamma, make_glim, make_glipxi, make_tilde, CompositeStrategy,
    ControlSchedule, Piece, PiecewiseSpec, Region, RowFamily, Tail,
};
use baire_games::degree::{SuccessorKind, SuccessorSet};
use baire_games::game::{delay, make_base_game, p_close, BaseKind, GameSpec};
use baire_games::moves::{RowInner, Sym};
use baire_games::omega::{gallery, ControlSet, DetOmegaAutomaton, RankTag};
use baire_games::strategy::{
    MealyStrategy, MealyStrategyI, Out, RowOut, Strategy, StrategyI, StrategyRef, StreamStrategyI,
};
use baire_games::{demos, Digit, Move, UpStream};
use num_bigint::BigUint;
use serde_json::{json, Value};

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| anyhow!("missing field {key:?} in {v}"))
}

fn uint(v: &Value) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| anyhow!("expected a natural number, got {v}"))
}

fn index(v: &Value) -> Result<usize> {
    Ok(uint(v)? as usize)
}

fn array(v: &Value) -> Result<&Vec<Value>> {
    v.as_array()
        .ok_or_else(|| anyhow!("expected an array, got {v}"))
}

fn digits(v: &Value) -> Result<Vec<Digit>> {
    array(v)?.iter().map(uint).collect()
}

/// A digit label or `"_"` for the otherwise edge.
fn label(v: &Value) -> Result<Option<Digit>> {
    match v {
        Value::String(s) if s == "_" => Ok(None),
        v => uint(v).map(Some),
    }
}

fn label_json(l: Option<Digit>) -> Value {
    l.map_or(json!("_"), |d| json!(d))
}

pub fn stream(v: &Value) -> Result<UpStream> {
    let prefix = digits(field(v, "prefix")?)?;
    let period = digits(field(v, "period")?)?;
    UpStream::new(prefix, period).ok_or_else(|| anyhow!("a stream needs a nonempty period"))
}

pub fn stream_json(x: &UpStream) -> Value {
    json!({"prefix": x.prefix(), "period": x.period()})
}

/// A gallery name (`full`, `empty`, `Z`, `INF0`, `cylinder:d,d,...`) or an
/// explicit automaton.
pub fn automaton(v: &Value) -> Result<DetOmegaAutomaton> {
    if let Some(name) = v.as_str() {
        return match name {
            "full" => Ok(gallery::full()),
            "empty" => Ok(gallery::empty()),
            "Z" => Ok(gallery::zero_stream()),
            "INF0" => Ok(gallery::infinitely_many_zeros()),
            _ => {
                let s = name
                    .strip_prefix("cylinder:")
                    .ok_or_else(|| anyhow!("unknown automaton {name:?}"))?;
                let ds = s
                    .split(',')
                    .filter(|t| !t.is_empty())
                    .map(str::parse)
                    .collect::<Result<Vec<Digit>, _>>()?;
                Ok(gallery::cylinder(&ds))
            }
        };
    }
    let edges = array(field(v, "edges")?)?
        .iter()
        .map(|e| {
            let e = array(e)?;
            if e.len() != 3 {
                bail!("an edge is [state, digit|\"_\", state]");
            }
            Ok((index(&e[0])?, label(&e[1])?, index(&e[2])?))
        })
        .collect::<Result<Vec<_>>>()?;
    let priority = array(field(v, "priority")?)?
        .iter()
        .map(|p| Ok(uint(p)? as u32))
        .collect::<Result<Vec<_>>>()?;
    Ok(DetOmegaAutomaton::new(
        index(field(v, "states")?)?,
        index(field(v, "initial")?)?,
        &edges,
        priority,
    )?)
}

pub fn automaton_json(a: &DetOmegaAutomaton) -> Value {
    let edges: Vec<Value> = a
        .edge_list()
        .into_iter()
        .map(|(s, l, t)| json!([s, label_json(l), t]))
        .collect();
    json!({"states": a.states(), "initial": a.initial(), "edges": edges, "priority": a.priorities()})
}

pub fn move_from(v: &Value) -> Result<Move> {
    if let Some(sym) = v.get("sym").and_then(Value::as_str) {
        return Ok(Move::Sym(match sym {
            "P" => Sym::Pass,
            "E" => Sym::Erase,
            "BT" => Sym::Bt,
            _ => bail!("unknown symbol {sym:?}"),
        }));
    }
    if let Some(c) = v.get("coded").and_then(Value::as_str) {
        return Ok(Move::Coded(c.parse::<BigUint>().context("coded move")?));
    }
    match (v.get("row"), v.get("nat")) {
        (Some(r), Some(d)) => Ok(Move::Row {
            row: uint(r)?,
            inner: RowInner::Nat(uint(d)?),
        }),
        (Some(r), None) if v.get("pass") == Some(&Value::Bool(true)) => Ok(Move::Row {
            row: uint(r)?,
            inner: RowInner::Pass,
        }),
        (None, Some(d)) => Ok(Move::Nat(uint(d)?)),
        _ => bail!("not a move: {v}"),
    }
}

pub fn move_json(m: &Move) -> Value {
    match m {
        Move::Nat(d) => json!({"nat": d}),
        Move::Sym(Sym::Pass) => json!({"sym": "P"}),
        Move::Sym(Sym::Erase) => json!({"sym": "E"}),
        Move::Sym(Sym::Bt) => json!({"sym": "BT"}),
        Move::Row {
            row,
            inner: RowInner::Nat(d),
        } => json!({"row": row, "nat": d}),
        Move::Row {
            row,
            inner: RowInner::Pass,
        } => json!({"row": row, "pass": true}),
        Move::Coded(c) => json!({"coded": c.to_string()}),
    }
}

fn out_from(v: &Value) -> Result<Out> {
    let echo = v.get("echo") == Some(&Value::Bool(true));
    match (v.get("row"), echo) {
        (None, true) => return Ok(Out::Echo),
        (Some(r), true) => return Ok(Out::Row(uint(r)?, RowOut::Echo)),
        _ => {}
    }
    Ok(match move_from(v)? {
        Move::Nat(d) => Out::Nat(d),
        Move::Sym(Sym::Pass) => Out::Pass,
        Move::Sym(Sym::Erase) => Out::Erase,
        Move::Sym(Sym::Bt) => Out::Bt,
        Move::Row {
            row,
            inner: RowInner::Pass,
        } => Out::Row(row, RowOut::Pass),
        Move::Row {
            row,
            inner: RowInner::Nat(d),
        } => Out::Row(row, RowOut::Nat(d)),
        Move::Coded(_) => bail!("finite-state strategies cannot emit coded moves"),
    })
}

fn out_json(o: Out) -> Value {
    match o {
        Out::Echo => json!({"echo": true}),
        Out::Row(row, RowOut::Echo) => json!({"row": row, "echo": true}),
        o => move_json(&o.apply(0)),
    }
}

pub fn mealy(v: &Value) -> Result<MealyStrategy> {
    let steps = array(field(v, "step")?)?
        .iter()
        .map(|s| {
            let s = array(s)?;
            if s.len() != 4 {
                bail!("a step is [state, digit|\"_\", state, move]");
            }
            Ok((
                index(&s[0])?,
                label(&s[1])?,
                index(&s[2])?,
                out_from(&s[3])?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MealyStrategy::new(
        index(field(v, "states")?)?,
        index(field(v, "initial")?)?,
        &steps,
    )?)
}

pub fn mealy_json(m: &MealyStrategy) -> Value {
    let steps: Vec<Value> = m
        .step_list()
        .into_iter()
        .map(|(s, l, t, o)| json!([s, label_json(l), t, out_json(o)]))
        .collect();
    json!({"states": m.states(), "initial": m.initial(), "step": steps})
}

/// Strategies for I: `{"stream": ...}` or a finite-state machine with
/// per-state output digits.
pub fn strategy_i(v: &Value) -> Result<Box<dyn StrategyI>> {
    if let Some(x) = v.get("stream") {
        return Ok(Box::new(StreamStrategyI(stream(x)?)));
    }
    let steps = array(field(v, "step")?)?
        .iter()
        .map(|s| {
            let s = array(s)?;
            if s.len() != 3 {
                bail!("a step of I is [state, move|\"_\", state]");
            }
            let m = if s[1] == json!("_") {
                None
            } else {
                Some(move_from(&s[1])?)
            };
            Ok((index(&s[0])?, m, index(&s[2])?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Box::new(MealyStrategyI::new(
        digits(field(v, "output")?)?,
        index(field(v, "initial")?)?,
        &steps,
    )?))
}

pub fn strategy_i_json(m: &MealyStrategyI) -> Value {
    let steps: Vec<Value> = m
        .step_list()
        .into_iter()
        .map(|(s, l, t)| json!([s, l.as_ref().map_or(json!("_"), move_json), t]))
        .collect();
    let output: Vec<Digit> = (0..m.states()).map(|q| m.output(q)).collect();
    json!({"states": m.states(), "initial": m.initial(), "output": output, "step": steps})
}

pub fn schedule(v: &Value) -> Result<ControlSchedule> {
    let sets = array(field(v, "sets")?)?
        .iter()
        .map(|s| match s.as_str() {
            Some("Z") => Ok(gallery::canonical_pi1()),
            Some("INF0") => Ok(gallery::canonical_pi2()),
            Some(other) => bail!("unknown control set {other:?}"),
            None => {
                let rank = match field(s, "rank")?.as_str() {
                    Some("closed") => RankTag::Closed,
                    Some("pi02") => RankTag::Pi02,
                    Some("user") => RankTag::User,
                    _ => bail!("rank is closed, pi02 or user"),
                };
                let name = field(s, "name")?
                    .as_str()
                    .ok_or_else(|| anyhow!("name must be a string"))?;
                Ok(ControlSet::new(
                    automaton(field(s, "automaton")?)?,
                    rank,
                    name,
                )?)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let tail = match v.get("tail").and_then(Value::as_str).unwrap_or("repeat") {
        "repeat" => Tail::Repeat,
        "cycle" => Tail::Cycle,
        t => bail!("unknown tail {t:?}"),
    };
    Ok(ControlSchedule::new(sets, tail)?)
}

pub fn schedule_json(c: &ControlSchedule) -> Value {
    let sets: Vec<Value> = c
        .explicit()
        .iter()
        .map(|s| {
            let rank = match s.rank {
                RankTag::Closed => "closed",
                RankTag::Pi02 => "pi02",
                RankTag::User => "user",
            };
            json!({"name": s.name, "rank": rank, "automaton": automaton_json(&s.automaton)})
        })
        .collect();
    let tail = match c.tail() {
        Tail::Repeat => "repeat",
        Tail::Cycle => "cycle",
    };
    json!({"sets": sets, "tail": tail})
}

pub fn game(v: &Value) -> Result<GameSpec> {
    let g = if let Some(b) = v.get("base") {
        make_base_game(match b.as_str() {
            Some("L") => BaseKind::L,
            Some("W") => BaseKind::W,
            Some("E") => BaseKind::E,
            Some("Bt") => BaseKind::Bt,
            Some("M") => BaseKind::M,
            _ => bail!("unknown base game {b}"),
        })
    } else if let Some(k) = v.get("klip") {
        make_base_game(BaseKind::KLip(uint(k)?))
    } else if let Some(inner) = v.get("pclose") {
        p_close(&game(inner)?)
    } else if let Some(inner) = v.get("delay") {
        delay(&game(inner)?, uint(field(v, "by")?)?)
    } else if let Some(c) = v.get("gfxi") {
        make_gfxi(&game(field(c, "inner")?)?, schedule(field(c, "controls")?)?)?
    } else if let Some(c) = v.get("tilde") {
        make_tilde(&game(field(c, "inner")?)?, schedule(field(c, "controls")?)?)?
    } else if let Some(c) = v.get("glim") {
        let rows = array(field(c, "rows")?)?
            .iter()
            .map(game)
            .collect::<Result<Vec<_>>>()?;
        make_glim(RowFamily::new(rows, game(field(c, "tail")?)?))?
    } else if let Some(c) = v.get("ggamma") {
        make_ggamma(uint(field(c, "max_m")?)?)
    } else if let Some(c) = v.get("gfgamma") {
        make_gfgamma(&game(field(c, "inner")?)?)?
    } else if let Some(c) = v.get("glipxi") {
        make_glipxi(schedule(field(c, "controls")?)?)
    } else {
        bail!("unknown game description {v}")
    };
    Ok(match v.get("domain") {
        Some(d) => g.with_domain(automaton(d)?),
        None => g,
    })
}

/// A strategy for II: a finite-state machine, a composite bundle or a
/// built-in demo.
pub fn strategy(v: &Value) -> Result<StrategyRef> {
    if let Some(name) = v.get("demo").and_then(Value::as_str) {
        return demo_strategy(name);
    }
    if let Some(c) = v.get("composite") {
        return Ok(Arc::new(composite(c)?));
    }
    Ok(Arc::new(mealy(v)?))
}

fn strategies(v: &Value) -> Result<Vec<StrategyRef>> {
    array(v)?.iter().map(strategy).collect()
}

/// `{"explicit": [...], "tail": [...]}` or
/// `{"explicit": [...], "controls": schedule, "inner": strategy}`.
pub fn composite(v: &Value) -> Result<CompositeStrategy> {
    let explicit = strategies(field(v, "explicit")?)?;
    if let Some(t) = v.get("tail") {
        return CompositeStrategy::periodic(explicit, strategies(t)?)
            .ok_or_else(|| anyhow!("empty tail"));
    }
    Ok(CompositeStrategy::with_controls(
        explicit,
        &schedule(field(v, "controls")?)?,
        strategy(field(v, "inner")?)?,
    ))
}

/// The explicit rows of a controls-based composite strategy.
pub fn composite_json(
    explicit: &[StrategyRef],
    controls: &ControlSchedule,
    inner: &dyn Strategy,
) -> Result<Value> {
    let as_json = |s: &dyn Strategy| {
        s.as_mealy()
            .map(mealy_json)
            .ok_or_else(|| anyhow!("row has no finite-state form"))
    };
    let rows = explicit
        .iter()
        .map(|s| as_json(&**s))
        .collect::<Result<Vec<_>>>()?;
    Ok(
        json!({"composite": {"explicit": rows, "controls": schedule_json(controls), "inner": as_json(inner)?}}),
    )
}

fn demo_strategy(name: &str) -> Result<StrategyRef> {
    Ok(match name {
        "glim-zero" => Arc::new(demos::glim_zero_test().strategy),
        "gamma-identity" => Arc::new(baire_games::composite::gamma_compile(
            demos::gamma_identity(),
            &[],
            0,
            0,
        )?),
        "glip-two-pieces" => {
            let d = demos::glip_two_pieces();
            Arc::new(baire_games::composite::glip_compile(&d.pieces, &d.controls)?.0)
        }
        "successor-cylinder" => {
            let d = demos::successor_cylinder();
            Arc::new(
                baire_games::degree::successor_merge(
                    d.sigma0,
                    d.sigma1,
                    &d.a,
                    &d.b,
                    &d.controls,
                    &[],
                )?
                .0,
            )
        }
        _ => bail!("unknown demo strategy {name:?}"),
    })
}

/// `{"controls": schedule, "inner": game, "pieces": [{"region": ..., "strategy": ...}]}`
/// with regions `"rest"`, `{"automaton": A}` or `{"witness": strategy, "control": name}`.
pub fn piecewise(v: &Value) -> Result<(PiecewiseSpec, GameSpec)> {
    let controls = schedule(field(v, "controls")?)?;
    let inner = game(field(v, "inner")?)?;
    let pieces = array(field(v, "pieces")?)?
        .iter()
        .map(|p| {
            let r = field(p, "region")?;
            let region = if r == "rest" {
                Region::Rest
            } else if let Some(a) = r.get("automaton") {
                Region::Automaton(automaton(a)?)
            } else {
                let control = field(r, "control")?
                    .as_str()
                    .ok_or_else(|| anyhow!("control must be a name"))?;
                Region::Witness {
                    sigma: strategy(field(r, "witness")?)?,
                    control: control.into(),
                }
            };
            Ok(Piece {
                region,
                strategy: strategy(field(p, "strategy")?)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((PiecewiseSpec { pieces, controls }, inner))
}

pub fn successor_set(v: &Value) -> Result<SuccessorSet> {
    let kind = match field(v, "kind")?.as_str() {
        Some("sigma") => SuccessorKind::Sigma,
        Some("pi") => SuccessorKind::Pi,
        Some("r") => SuccessorKind::R,
        _ => bail!("kind is sigma, pi or r"),
    };
    Ok(SuccessorSet {
        base: automaton(field(v, "base")?)?,
        controls: schedule(field(v, "controls")?)?,
        kind,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stream_round_trip_is_canonical() {
        let v = json!({"prefix": [1, 2, 1, 2], "period": [1, 2, 1, 2]});
        assert_eq!(
            stream_json(&stream(&v).unwrap()),
            json!({"prefix": [], "period": [1, 2]})
        );
    }

    #[test]
    fn automaton_round_trip() {
        let a = gallery::infinitely_many_zeros();
        assert_eq!(automaton(&automaton_json(&a)).unwrap(), a);
        assert_eq!(
            automaton(&json!("cylinder:0,3")).unwrap(),
            gallery::cylinder(&[0, 3])
        );
    }

    #[test]
    fn moves_round_trip() {
        for m in [
            Move::Nat(3),
            Move::PASS,
            Move::ERASE,
            Move::BT,
            Move::Row {
                row: 2,
                inner: RowInner::Pass,
            },
        ] {
            assert_eq!(move_from(&move_json(&m)).unwrap(), m);
        }
        let big = Move::Coded(BigUint::from(u64::MAX) * 7u32);
        assert_eq!(move_from(&move_json(&big)).unwrap(), big);
    }

    #[test]
    fn mealy_round_trip() {
        let m = demos::glim_row(3);
        assert_eq!(mealy(&mealy_json(&m)).unwrap(), m);
        let copy = json!({"states": 1, "initial": 0, "step": [[0, "_", 0, {"echo": true}]]});
        assert_eq!(mealy(&copy).unwrap(), MealyStrategy::copy());
    }

    #[test]
    fn schedule_and_game() {
        let g = json!({"gfxi": {"inner": {"base": "W"}, "controls": {"sets": ["Z", "INF0"], "tail": "cycle"}}});
        assert!(game(&g).unwrap().composite().is_some());
        let c = demos::alternating_schedule();
        assert_eq!(schedule(&schedule_json(&c)).unwrap(), c);
        assert!(
            game(&json!({"gfxi": {"inner": {"base": "L"}, "controls": {"sets": ["Z"]}}})).is_err()
        );
    }
}
