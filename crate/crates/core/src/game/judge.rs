//! Exact rule verdicts and outputs for eventually periodic move sequences.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{BaseKind, GameKind, GameSpec};
use crate::moves::{Move, RowInner, Sym};
use crate::streams::{Digit, UpStream};

type Verdict = core::result::Result<UpStream, String>;

/// Unrolls the period until the prefix has at least `n` moves.
fn unroll(mut pre: Vec<Move>, per: &[Move], n: usize) -> Vec<Move> {
    let mut i = 0;
    while pre.len() < n {
        pre.push(per[i % per.len()].clone());
        i += 1;
    }
    pre
}

fn rotate(per: &[Move], by: usize) -> Vec<Move> {
    let by = by % per.len();
    per[by..].iter().chain(&per[..by]).cloned().collect()
}

fn nats(ms: &[Move]) -> Vec<Digit> {
    ms.iter().filter_map(Move::nat).collect()
}

fn stream(pre: Vec<Digit>, per: Vec<Digit>) -> Verdict {
    UpStream::new(pre, per).ok_or_else(|| String::from("only finitely many digits"))
}

fn check_alphabet(
    ms: &[Move],
    ok: impl Fn(&Move) -> bool,
    kind: BaseKind,
) -> core::result::Result<(), String> {
    match ms.iter().find(|m| !ok(m)) {
        Some(m) => Err(format!("move {m} is not allowed in {kind:?}")),
        None => Ok(()),
    }
}

pub(super) fn judge(g: &GameSpec, pre: Vec<Move>, per: Vec<Move>) -> Verdict {
    if per.is_empty() {
        return Err("empty period".into());
    }
    match &g.kind {
        GameKind::Base(b) => judge_base(*b, pre, per),
        GameKind::PClose(inner) => {
            let keep = |ms: &[Move]| {
                ms.iter()
                    .filter(|m| !m.is_pass())
                    .cloned()
                    .collect::<Vec<_>>()
            };
            let per_f = keep(&per);
            if per_f.is_empty() {
                return Err("only passes from some turn on".into());
            }
            judge(inner, keep(&pre), per_f)
        }
        GameKind::Delay(inner, n) => {
            let n = *n as usize;
            let consumed = pre.len().max(n) - pre.len();
            let pre = unroll(pre, &per, n);
            if pre[..n].iter().any(|m| !m.is_pass()) {
                return Err(format!("must pass on the first {n} turns"));
            }
            judge(inner, pre[n..].to_vec(), rotate(&per, consumed))
        }
        GameKind::Composite(_) => Err("composite games have no single-lasso verdict".into()),
    }
}

fn judge_base(kind: BaseKind, pre: Vec<Move>, per: Vec<Move>) -> Verdict {
    match kind {
        BaseKind::L => {
            check_alphabet(&pre, |m| m.nat().is_some(), kind)?;
            check_alphabet(&per, |m| m.nat().is_some(), kind)?;
            stream(nats(&pre), nats(&per))
        }
        BaseKind::W => {
            let ok = |m: &Move| m.nat().is_some() || m.is_pass();
            check_alphabet(&pre, ok, kind)?;
            check_alphabet(&per, ok, kind)?;
            stream(nats(&pre), nats(&per))
        }
        BaseKind::KLip(k) => {
            let k = k as usize;
            let consumed = pre.len().max(k) - pre.len();
            let pre = unroll(pre, &per, k);
            let per = rotate(&per, consumed);
            if pre[..k].iter().any(|m| !m.is_pass()) {
                return Err(format!("must pass on the first {k} turns"));
            }
            check_alphabet(&pre[k..], |m| m.nat().is_some(), kind)?;
            check_alphabet(&per, |m| m.nat().is_some(), kind)?;
            stream(nats(&pre), nats(&per))
        }
        BaseKind::E => {
            let ok = |m: &Move| m.nat().is_some() || *m == Move::ERASE;
            check_alphabet(&pre, ok, kind)?;
            check_alphabet(&per, ok, kind)?;
            let mut stack = Vec::new();
            for m in &pre {
                match m {
                    Move::Nat(d) => stack.push(*d),
                    _ => {
                        stack.pop();
                    }
                }
            }
            // one period removes `below` digits of what it finds, then leaves `w`
            let mut w = Vec::new();
            let mut below = 0usize;
            for m in &per {
                match m {
                    Move::Nat(d) => w.push(*d),
                    _ => {
                        if w.pop().is_none() {
                            below += 1;
                        }
                    }
                }
            }
            if w.len() <= below {
                return Err("output length stays bounded".into());
            }
            let growth = w.len() - below;
            stack.truncate(stack.len().saturating_sub(below));
            stream(stack, w[..growth].to_vec())
        }
        BaseKind::Bt => {
            let ok = |m: &Move| m.nat().is_some() || m.is_pass() || *m == Move::BT;
            check_alphabet(&pre, ok, kind)?;
            check_alphabet(&per, ok, kind)?;
            if per.contains(&Move::BT) {
                return Err("infinitely many backtracks".into());
            }
            let after = pre
                .iter()
                .rposition(|m| *m == Move::BT)
                .map_or(0, |i| i + 1);
            stream(nats(&pre[after..]), nats(&per))
        }
        BaseKind::M => {
            let ok = |m: &Move| matches!(m, Move::Row { .. });
            check_alphabet(&pre, ok, kind)?;
            check_alphabet(&per, ok, kind)?;
            let row_nat = |m: &Move| match m {
                Move::Row {
                    row,
                    inner: RowInner::Nat(d),
                } => Some((*row, *d)),
                _ => None,
            };
            let live: BTreeSet<u64> = per.iter().filter_map(row_nat).map(|(r, _)| r).collect();
            if live.len() != 1 {
                return Err(format!(
                    "{} rows receive infinitely many digits",
                    live.len()
                ));
            }
            let r = *live.first().unwrap();
            let on_row = |ms: &[Move]| {
                ms.iter()
                    .filter_map(row_nat)
                    .filter(|p| p.0 == r)
                    .map(|p| p.1)
                    .collect()
            };
            stream(on_row(&pre), on_row(&per))
        }
    }
}

/// Naive recursive evaluation of the eraser interpretation on a finite play.
pub fn eraser_naive(s: &[Move]) -> Vec<Digit> {
    match s.split_last() {
        None => Vec::new(),
        Some((Move::Nat(d), rest)) => {
            let mut v = eraser_naive(rest);
            v.push(*d);
            v
        }
        Some((Move::Sym(Sym::Erase), rest)) => {
            let mut v = eraser_naive(rest);
            v.truncate(v.len().saturating_sub(1));
            v
        }
        Some((_, rest)) => eraser_naive(rest),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::make_base_game;
    use alloc::vec;

    fn nat(ds: &[Digit]) -> Vec<Move> {
        ds.iter().map(|&d| Move::Nat(d)).collect()
    }

    #[test]
    fn eraser_lasso() {
        // prefix 1 2 E, period 3 4 E: stack [1], each period leaves [3]
        let pre = vec![Move::Nat(1), Move::Nat(2), Move::ERASE];
        let per = vec![Move::Nat(3), Move::Nat(4), Move::ERASE];
        let out = judge(&make_base_game(BaseKind::E), pre, per).unwrap();
        assert_eq!(out, UpStream::new(vec![1], vec![3]).unwrap());
    }

    #[test]
    fn eraser_period_eating_prefix() {
        // period E E 5 6 7: removes two, adds three
        let pre = nat(&[1, 2, 3]);
        let per = vec![
            Move::ERASE,
            Move::ERASE,
            Move::Nat(5),
            Move::Nat(6),
            Move::Nat(7),
        ];
        let out = judge(&make_base_game(BaseKind::E), pre.clone(), per.clone()).unwrap();
        let mut all = pre;
        for _ in 0..10 {
            all.extend(per.iter().cloned());
        }
        let finite = eraser_naive(&all);
        assert_eq!(out.take(8), finite[..8].to_vec());
    }

    #[test]
    fn klip_lasso_rotates_period() {
        let g = make_base_game(BaseKind::KLip(3));
        let per = vec![Move::PASS];
        assert!(judge(&g, vec![], per).is_err());
        let pre = vec![Move::PASS, Move::PASS, Move::PASS];
        assert_eq!(judge(&g, pre, nat(&[4])).unwrap(), UpStream::constant(4));
    }

    #[test]
    fn multitape_needs_one_live_row() {
        let g = make_base_game(BaseKind::M);
        let r = |row, d| Move::Row {
            row,
            inner: RowInner::Nat(d),
        };
        assert!(judge(&g, vec![], vec![r(0, 1), r(1, 1)]).is_err());
        let out = judge(&g, vec![r(1, 9), r(0, 2)], vec![r(0, 3)]).unwrap();
        assert_eq!(out, UpStream::new(vec![2], vec![3]).unwrap());
    }
}
