//! Strategies for I in a composite game turned into strategies for I in a
//! single-row game: I follows the composite strategy against a simulated
//! II whose activated row relays the real II.

use alloc::boxed::Box;
use alloc::vec::Vec;

use super::coding::encode_automaton;
use super::CompositeGame;
use crate::error::{Error, Result};
use crate::game::GameSpec;
use crate::moves::Move;
use crate::omega::gallery;
use crate::strategy::{responses, PlayI, PlayIBox, StrategyI, StrategyRef};
use crate::streams::{unpair, Digit, UpStream};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TransferVariant {
    /// From the activation game to its inner game.
    Gfxi,
    /// From the conditional activation game to its inner game.
    Tilde,
    /// From the coded-set game to the Wadge game.
    Gamma,
}

enum Sim {
    Activation {
        anchor: UpStream,
        outside: Vec<UpStream>,
        inner_id: StrategyRef,
    },
    Gamma {
        full: Vec<Digit>,
        empty: Vec<Digit>,
    },
}

pub struct Transfer<R> {
    rho: R,
    sim: Sim,
}

/// Turns `rho`, a strategy for I in the composite `game`, into one for I
/// in the game it is built over. For the activation games `anchor` must
/// lie in the first control set, so that row 0 is activated and the
/// composite output is that of the relayed row 1.
pub fn player_one_transfer<R: StrategyI>(
    variant: TransferVariant,
    game: &GameSpec,
    rho: R,
    anchor: Option<UpStream>,
) -> Result<Transfer<R>> {
    let c = game.composite();
    let sim = match (variant, c) {
        (
            TransferVariant::Gfxi,
            Some(CompositeGame::Gfxi {
                inner,
                controls,
                tilde: false,
            }),
        )
        | (
            TransferVariant::Tilde,
            Some(CompositeGame::Gfxi {
                inner,
                controls,
                tilde: true,
            }),
        ) => {
            let anchor = anchor.ok_or(Error::BadAnchor)?;
            if !controls.control(0).contains(&anchor) {
                return Err(Error::BadAnchor);
            }
            let (start, len) = controls.period();
            let outside = (0..start + len)
                .map(|i| controls.outside(i).clone())
                .collect();
            Sim::Activation {
                anchor,
                outside,
                inner_id: inner.identity_strategy(),
            }
        }
        (TransferVariant::Gamma, Some(CompositeGame::Ggamma { .. })) => Sim::Gamma {
            full: encode_automaton(&gallery::full()),
            empty: encode_automaton(&gallery::empty()),
        },
        _ => {
            return Err(Error::UnsupportedGame(
                "transfer variant does not match the game".into(),
            ))
        }
    };
    Ok(Transfer { rho, sim })
}

#[derive(Clone)]
struct SimState {
    xs: Vec<Digit>,
    /// II's moves in the single-row game
    real: Vec<Move>,
    /// moves made so far on each simulated row
    rows: Vec<Vec<Move>>,
}

struct TransferPlay<'a, R> {
    owner: &'a Transfer<R>,
    rho: PlayIBox<'a>,
    st: SimState,
}

impl<R: StrategyI> Transfer<R> {
    fn row_move(&self, st: &SimState, n: u64, j: u64) -> Move {
        let x = &st.xs[..=j as usize];
        match &self.sim {
            Sim::Activation {
                anchor,
                outside,
                inner_id,
            } => match n {
                0 => Move::Nat(anchor.at(j)),
                1 => st.real[j as usize].clone(),
                n if n % 2 == 0 => {
                    let k = (n / 2) as usize;
                    let o = &outside[k.min(outside.len() - 1)];
                    Move::Nat(o.at(j))
                }
                _ => responses(&**inner_id, x).pop().expect("nonempty"),
            },
            Sim::Gamma { full, empty } => {
                let (i, m) = unpair(n);
                let ys: Vec<Digit> = st.real.iter().filter_map(|mv| mv.nat()).collect();
                let Some(&y) = ys.get(i as usize) else {
                    return Move::PASS;
                };
                let code = if y == m { full } else { empty };
                let done = st
                    .rows
                    .get(n as usize)
                    .map_or(0, |r| r.iter().filter(|m| m.nat().is_some()).count());
                Move::Nat(code.get(done).copied().unwrap_or(0))
            }
        }
    }
}

impl<'a, R: StrategyI> PlayI<'a> for TransferPlay<'a, R> {
    fn digit(&self) -> Digit {
        self.rho.digit()
    }

    fn observe(&mut self, m: &Move) {
        let s = self.st.xs.len() as u64;
        self.st.real.push(m.clone());
        self.st.xs.push(self.rho.digit());
        let (n, j) = unpair(s);
        let mv = self.owner.row_move(&self.st, n, j);
        if self.st.rows.len() as u64 <= n {
            self.st.rows.resize(n as usize + 1, Vec::new());
        }
        self.st.rows[n as usize].push(mv.clone());
        self.rho.observe(&mv);
    }

    fn key(&self) -> Option<Vec<u64>> {
        None
    }

    fn fork(&self) -> PlayIBox<'a> {
        Box::new(TransferPlay {
            owner: self.owner,
            rho: self.rho.fork(),
            st: self.st.clone(),
        })
    }
}

impl<R: StrategyI> StrategyI for Transfer<R> {
    fn start(&self) -> PlayIBox<'_> {
        let st = SimState {
            xs: Vec::new(),
            real: Vec::new(),
            rows: Vec::new(),
        };
        Box::new(TransferPlay {
            owner: self,
            rho: self.rho.start(),
            st,
        })
    }

    fn as_stream(&self) -> Option<UpStream> {
        self.rho.as_stream()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demos;
    use crate::game::{adjudicate_up, Winner};
    use crate::strategy::{MealyStrategy, MealyStrategyI, Out};
    use alloc::vec;

    #[test]
    fn transfers_beat_copy_and_constants() {
        for (a, b) in demos::transfer_pairs() {
            for d in [
                demos::transfer_gfxi(a.clone(), b.clone()),
                demos::transfer_tilde(a.clone(), b.clone()),
                demos::transfer_gamma(a.clone(), b.clone()),
            ] {
                let variant = match d.game.composite() {
                    Some(CompositeGame::Gfxi { tilde: false, .. }) => TransferVariant::Gfxi,
                    Some(CompositeGame::Gfxi { .. }) => TransferVariant::Tilde,
                    _ => TransferVariant::Gamma,
                };
                let t =
                    player_one_transfer(variant, &d.game, d.rho.clone(), d.anchor.clone()).unwrap();
                let x = t.as_stream().unwrap();
                for tau in [
                    MealyStrategy::copy(),
                    MealyStrategy::constant(&UpStream::constant(2)),
                ] {
                    assert_eq!(
                        adjudicate_up(&d.inner, &x, &tau, &d.a, &d.b, 0)
                            .unwrap()
                            .winner,
                        Winner::I
                    );
                }
            }
        }
    }

    #[test]
    fn transferred_play_simulates_rows() {
        // I copies II's first digit forever; the simulated row 1 relays II
        let d = demos::transfer_gfxi(gallery::full(), gallery::empty());
        let rho = MealyStrategyI::new(
            vec![0, 1],
            0,
            &[(0, Some(Move::Nat(1)), 1), (0, None, 0), (1, None, 1)],
        )
        .unwrap();
        let t = player_one_transfer(TransferVariant::Gfxi, &d.game, rho, d.anchor.clone()).unwrap();
        assert!(t.as_stream().is_none());
        let tau = MealyStrategy::always(Out::Nat(1));
        let r = crate::game::run_vs_to_depth(&d.inner, &t, &tau, 8);
        // row 1 first moves at composite turn 1, so rho sees the 1 from turn 2 on
        let xs: Vec<Digit> = r.transcript.iter().map(|p| p.0).collect();
        assert_eq!(xs, vec![0, 0, 1, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn bad_anchor() {
        let d = demos::transfer_gfxi(gallery::full(), gallery::empty());
        let r = player_one_transfer(
            TransferVariant::Gfxi,
            &d.game,
            d.rho,
            Some(UpStream::constant(1)),
        );
        assert_eq!(r.err(), Some(Error::BadAnchor));
    }
}
