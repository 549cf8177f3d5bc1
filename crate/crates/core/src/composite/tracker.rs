use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::coding::{code_len, decode_automaton, enum_seq_big, move_code};
use super::{CompositeGame, Layout};
use crate::game::{violation, Status, Tracker};
use crate::moves::Move;
use crate::omega::PrefixVerdict;
use crate::streams::{pair, unpair, Digit, FinSeq};

/// Monitor and interpreter of a composite run: one tracker per row.
pub(super) struct CompositeTracker {
    game: CompositeGame,
    xs: Vec<Digit>,
    rows: Vec<Box<dyn Tracker>>,
    /// local turn count per row
    fed: Vec<u64>,
    status: Status,
}

impl CompositeTracker {
    pub fn new(game: CompositeGame) -> Self {
        CompositeTracker {
            game,
            xs: Vec::new(),
            rows: Vec::new(),
            fed: Vec::new(),
            status: Status::Ok,
        }
    }

    fn ensure(&mut self, n: u64) {
        while self.rows.len() as u64 <= n {
            let next = self.rows.len() as u64;
            self.rows.push(self.game.row_game(next).tracker());
            self.fed.push(0);
        }
    }

    fn feed(&mut self, n: u64, m: &Move) {
        self.ensure(n);
        let local = self.fed[n as usize];
        let x = self.xs[local as usize];
        self.rows[n as usize].step(x, m);
        self.fed[n as usize] += 1;
    }

    fn control_row(&self, i: u64) -> Option<&dyn Tracker> {
        self.rows.get(2 * i as usize).map(|r| &**r)
    }

    /// What the finite run shows about the activation of control row `i`.
    fn control_verdict(&self, i: u64) -> PrefixVerdict {
        let Some(r) = self.control_row(i) else {
            return PrefixVerdict::Unknown;
        };
        let out = r.tentative();
        match &self.game {
            CompositeGame::Gfxi { controls, .. } | CompositeGame::GlipXi { controls } => {
                controls.control(i).automaton.prefix_verdict(&out)
            }
            CompositeGame::Gfgamma { .. } => self.code_verdict(&out),
            _ => PrefixVerdict::Unknown,
        }
    }

    /// Verdict on I's prefix of the automaton coded by `out`, once the code
    /// is complete.
    fn code_verdict(&self, out: &[Digit]) -> PrefixVerdict {
        match out.first() {
            Some(&l) if (out.len() as u64) >= code_len(l) => {
                decode_automaton(out).prefix_verdict(&self.xs)
            }
            _ => PrefixVerdict::Unknown,
        }
    }

    fn known_controls(&self) -> u64 {
        (self.rows.len() as u64).div_ceil(2)
    }

    /// Least control row known to be activated, if all below are known not
    /// to be.
    fn settled_activation(&self) -> Option<u64> {
        for i in 0..self.known_controls() {
            match self.control_verdict(i) {
                PrefixVerdict::Accepted => return Some(i),
                PrefixVerdict::Rejected => {}
                PrefixVerdict::Unknown => return None,
            }
        }
        None
    }

    fn refresh_status(&mut self, turn: u64) {
        if !self.status.is_ok() {
            return;
        }
        let tilde = matches!(self.game, CompositeGame::Gfxi { tilde: true, .. });
        for (n, r) in self.rows.iter().enumerate() {
            let Status::Violated { reason, .. } = r.status() else {
                continue;
            };
            let binding = !(tilde && n % 2 == 1)
                || self.control_verdict(n as u64 / 2) == PrefixVerdict::Accepted;
            if binding {
                self.status = violation(turn, format!("row {n}: {reason}"));
                return;
            }
        }
    }

    /// Digits `z(0), z(1), ...` of the coded-set game settled so far.
    fn gamma_digits(&self) -> FinSeq {
        let mut z = Vec::new();
        'digits: for n in 0.. {
            for m in 0.. {
                let r = pair(n, m);
                let Some(row) = self.rows.get(r as usize) else {
                    break 'digits;
                };
                match self.code_verdict(&row.tentative()) {
                    PrefixVerdict::Accepted => {
                        z.push(m);
                        continue 'digits;
                    }
                    PrefixVerdict::Rejected => {}
                    PrefixVerdict::Unknown => break 'digits,
                }
            }
        }
        z
    }
}

impl Tracker for CompositeTracker {
    fn step(&mut self, i: Digit, m: &Move) {
        let t = self.xs.len() as u64;
        self.xs.push(i);
        match self.game.layout() {
            Layout::Tensor => {
                let (n, _) = unpair(t);
                self.feed(n, m);
            }
            Layout::LipCoded => {
                let digits = move_code(m).and_then(|c| enum_seq_big(2 * t as usize + 2, &c));
                let Some(digits) = digits else {
                    if self.status.is_ok() {
                        self.status =
                            violation(t, format!("move {m} is not a code of {} digits", 2 * t + 2));
                    }
                    return;
                };
                self.ensure(2 * t + 1);
                for (j, d) in digits.into_iter().enumerate() {
                    // rows 2k and 2k + 1 open at turn k after k passes
                    while self.fed[j] < t {
                        self.feed(j as u64, &Move::PASS);
                    }
                    self.feed(j as u64, &Move::Nat(d));
                }
            }
        }
        self.refresh_status(t);
    }

    fn status(&self) -> &Status {
        &self.status
    }

    fn pending_obligations(&self) -> Vec<String> {
        let mut out: Vec<String> = match &self.game {
            CompositeGame::Glim { .. } => vec!["the row outputs converge".into()],
            CompositeGame::Ggamma { .. } => vec!["every output digit has a witnessing row".into()],
            _ if self.settled_activation().is_none() => {
                vec!["some control row is activated".into()]
            }
            _ => Vec::new(),
        };
        for (n, r) in self.rows.iter().enumerate() {
            out.extend(
                r.pending_obligations()
                    .into_iter()
                    .map(|o| format!("row {n}: {o}")),
            );
        }
        out
    }

    fn tentative(&self) -> FinSeq {
        match &self.game {
            CompositeGame::Glim { .. } => {
                // digits on which the two newest rows agree
                let n = self.rows.len();
                if n < 2 {
                    return Vec::new();
                }
                let (a, b) = (self.rows[n - 2].tentative(), self.rows[n - 1].tentative());
                a.iter()
                    .zip(&b)
                    .take_while(|(p, q)| p == q)
                    .map(|p| *p.0)
                    .collect()
            }
            CompositeGame::Ggamma { .. } => self.gamma_digits(),
            _ => match self.settled_activation() {
                Some(i) => self
                    .rows
                    .get(2 * i as usize + 1)
                    .map(|r| r.tentative())
                    .unwrap_or_default(),
                None => Vec::new(),
            },
        }
    }

    fn committed_len(&self) -> usize {
        match &self.game {
            CompositeGame::Glim { .. } => 0,
            CompositeGame::Ggamma { .. } => self.gamma_digits().len(),
            _ => match self.settled_activation() {
                Some(i) => self
                    .rows
                    .get(2 * i as usize + 1)
                    .map_or(0, |r| r.committed_len()),
                None => 0,
            },
        }
    }

    fn row_verdicts(&self) -> Vec<(u64, PrefixVerdict)> {
        match &self.game {
            CompositeGame::Glim { .. } | CompositeGame::Ggamma { .. } => Vec::new(),
            _ => (0..self.known_controls())
                .map(|i| (i, self.control_verdict(i)))
                .collect(),
        }
    }

    fn rule_key(&self) -> Vec<u64> {
        let mut k = vec![u64::from(!self.status.is_ok())];
        for r in &self.rows {
            let rk = r.rule_key();
            k.push(rk.len() as u64);
            k.extend(rk);
        }
        k
    }

    fn fork(&self) -> Box<dyn Tracker> {
        Box::new(CompositeTracker {
            game: self.game.clone(),
            xs: self.xs.clone(),
            rows: self.rows.iter().map(|r| r.fork()).collect(),
            fed: self.fed.clone(),
            status: self.status.clone(),
        })
    }
}
