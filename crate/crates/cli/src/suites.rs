//! Seeded property batteries, one per acceptance criterion. Every report
//! is a pure function of the seed.

use std::sync::Arc;

use anyhow::Result;
use baire_games::composite::coding::{coded_move, enum_index_big, enum_seq_big, move_code};
use baire_games::composite::{
    control_swap, gamma_compile, gamma_decompile, gamma_digits, glip_compile, make_gfxi,
    piecewise_compile, piecewise_decompile, player_one_transfer, CompositeGame, TransferVariant,
};
use baire_games::degree::{
    activation, successor_member, successor_member_bounded, successor_merge, SuccessorKind,
    SuccessorSet,
};
use baire_games::game::{
    adjudicate_up, adjudicate_vs, delay, eraser_naive, eval_exact, make_base_game, p_close,
    BaseKind, GameSpec, LassoRun, Status, Winner,
};
use baire_games::omega::gallery;
use baire_games::strategy::{
    const_klip, klip_transfer_i, klip_transfer_ii, lipschitz_compile, MealyStrategy, Strategy,
    StrategyI, StrategyRef,
};
use baire_games::{demos, pair, unpair, Digit, Move, ProjectionSpectrum, StreamView, UpStream};
use rand::Rng;

use crate::random::{self, Rng8};

pub const CRITERIA: std::ops::RangeInclusive<u8> = 1..=11;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub criterion: u8,
    pub title: &'static str,
    pub lines: Vec<String>,
    pub pass: bool,
}

impl Report {
    fn new(criterion: u8, title: &'static str) -> Self {
        Report {
            criterion,
            title,
            lines: Vec::new(),
            pass: true,
        }
    }

    /// Records a check over `total` cases of which `failed` failed.
    fn check(&mut self, what: &str, total: usize, failed: &[String]) {
        let ok = total - failed.len();
        self.lines.push(format!("{what}: {ok}/{total}"));
        for f in failed.iter().take(3) {
            self.lines.push(format!("  failed: {f}"));
        }
        self.pass &= failed.is_empty();
    }

    fn note(&mut self, line: String) {
        self.lines.push(line);
    }

    pub fn render(&self) -> String {
        let mut s = format!(
            "criterion {} [{}] {}\n",
            self.criterion,
            if self.pass { "pass" } else { "FAIL" },
            self.title
        );
        for l in &self.lines {
            s.push_str("  ");
            s.push_str(l);
            s.push('\n');
        }
        s
    }
}

pub fn run(criterion: u8, seed: u64) -> Result<Report> {
    let mut rng = random::seeded(seed, u64::from(criterion));
    let rng = &mut rng;
    match criterion {
        1 => coding(rng),
        2 => lipschitz(rng),
        3 => base_semantics(rng),
        4 => piecewise(rng),
        5 => swap(rng),
        6 => transfers(rng),
        7 => limit(rng),
        8 => gamma(rng),
        9 => glip(rng),
        10 => successors(rng),
        11 => klip_transfers(rng),
        _ => anyhow::bail!("no criterion {criterion}; the suites are 1 to 11"),
    }
}

fn samples(rng: &mut Rng8, n: usize, alphabet: Digit) -> Vec<UpStream> {
    (0..n)
        .map(|_| random::up_stream(rng, alphabet, 6, 4))
        .collect()
}

fn coding(rng: &mut Rng8) -> Result<Report> {
    let mut r = Report::new(1, "pairing, projections, tensors and spectra");
    let bad: Vec<String> = (0..100_000u64)
        .filter(|&k| {
            let (n, m) = unpair(k);
            pair(n, m) != k
        })
        .map(|k| format!("k = {k}"))
        .collect();
    r.check("pair(unpair(k)) = k for k < 10^5", 100_000, &bad);

    let xs = samples(rng, 200, 4);
    let mut proj = Vec::new();
    let mut tensor = Vec::new();
    let mut spectrum = Vec::new();
    for x in &xs {
        let sp = ProjectionSpectrum::of(x);
        for n in 0..=12u64 {
            let p = x.project(n);
            if p.take(200) != (0..200).map(|m| x.at(pair(n, m))).collect::<Vec<_>>() {
                proj.push(format!("x = {x:?}, n = {n}"));
            }
            if *sp.entry(n) != p {
                spectrum.push(format!("x = {x:?}, n = {n}"));
            }
        }
        let rows: Vec<UpStream> = (0..=12).map(|n| x.project(n)).collect();
        let t = baire_games::streams::TensorView::from_fn(|n, m| rows[n as usize].at(m));
        if t.take(200) != x.take(200) {
            tensor.push(format!("x = {x:?}"));
        }
    }
    r.check("projection rows n <= 12, depth 200", 200 * 13, &proj);
    r.check("tensor of projections, depth 200", 200, &tensor);
    r.check("spectrum entries n <= 12", 200 * 13, &spectrum);
    Ok(r)
}

fn lipschitz(rng: &mut Rng8) -> Result<Report> {
    let mut r = Report::new(2, "k-Lipschitz strategies and delay transducers");
    for k in 0..=3u64 {
        let g = make_base_game(BaseKind::KLip(k));
        let mut bad = Vec::new();
        for s in 0..100 {
            let tau = random::mealy(rng, 4, k as usize);
            for _ in 0..10 {
                let x = random::up_stream(rng, 4, 6, 4);
                let fx = eval_exact(&g, &tau, &x, 0)?;
                for _ in 0..100 {
                    let y = random::near(rng, &x, 4);
                    let fy = eval_exact(&g, &tau, &y, 0)?;
                    if !fx.distance(&fy).le_scaled(x.distance(&y), k) {
                        bad.push(format!("strategy {s}, x = {x:?}, y = {y:?}"));
                    }
                }
            }
        }
        r.check(
            &format!("d(f x, f y) <= 2^{k} d(x, y), 100 strategies x 10^3 pairs"),
            100_000,
            &bad,
        );
    }
    let mut bad = Vec::new();
    for i in 0..20 {
        let k = i % 4;
        let t = random::delay_transducer(rng, 4, k);
        let g = make_base_game(BaseKind::KLip(k as u64));
        let tau = lipschitz_compile(t.clone(), k as u64)?;
        for _ in 0..1000 {
            let x = random::up_stream(rng, 4, 6, 4);
            if t.apply_up(&x) != Some(eval_exact(&g, &tau, &x, 0)?) {
                bad.push(format!("transducer {i}, x = {x:?}"));
            }
        }
    }
    r.check(
        "compiled transducers: f = f_tau, 20 x 10^3 inputs",
        20_000,
        &bad,
    );
    Ok(r)
}

/// Runs `moves` through both games' trackers and reports the first turn
/// at which status or tentative output differ.
fn diverge(g: &GameSpec, h: &GameSpec, moves: &[Move]) -> Option<usize> {
    let (mut s, mut t) = (g.tracker(), h.tracker());
    for (i, m) in moves.iter().enumerate() {
        s.step(0, m);
        t.step(0, m);
        let same_status = match (s.status(), t.status()) {
            (Status::Ok, Status::Ok) => true,
            (Status::Violated { turn: a, .. }, Status::Violated { turn: b, .. }) => a == b,
            _ => false,
        };
        if !same_status || (s.status().is_ok() && s.tentative() != t.tentative()) {
            return Some(i);
        }
    }
    None
}

fn lasso_verdict(g: &GameSpec, pre: &[Move], per: &[Move]) -> Option<UpStream> {
    let tag = |ms: &[Move]| ms.iter().map(|m| (0, m.clone())).collect();
    g.up_output(&LassoRun {
        prefix: tag(pre),
        period: tag(per),
    })
    .ok()
}

/// Move at turn `t` of a random run.
type MoveGen = Box<dyn Fn(&mut Rng8, usize) -> Move>;

fn base_semantics(rng: &mut Rng8) -> Result<Report> {
    let mut r = Report::new(3, "base-game interpreters");
    let e = make_base_game(BaseKind::E);
    let mut bad = Vec::new();
    for i in 0..500 {
        let len = rng.gen_range(1..=64);
        let moves: Vec<Move> = (0..len)
            .map(|_| {
                if rng.gen_bool(0.3) {
                    Move::ERASE
                } else {
                    Move::Nat(rng.gen_range(0..4))
                }
            })
            .collect();
        let mut tr = e.tracker();
        for (t, m) in moves.iter().enumerate() {
            tr.step(0, m);
            if tr.tentative() != eraser_naive(&moves[..=t]) {
                bad.push(format!("sequence {i}, turn {t}"));
                break;
            }
        }
    }
    r.check("eraser stack vs naive recursion", 500, &bad);

    let l = make_base_game(BaseKind::L);
    let pairs: Vec<(String, GameSpec, GameSpec, MoveGen)> = vec![
        (
            "p_close(L) vs W".into(),
            p_close(&l),
            make_base_game(BaseKind::W),
            Box::new(|rng: &mut Rng8, _| random::base_move(rng, 4, 0.3, 0.02)),
        ),
        (
            "delay(L, 2) vs 2-Lip".into(),
            delay(&l, 2),
            make_base_game(BaseKind::KLip(2)),
            Box::new(|rng: &mut Rng8, t| {
                if t < 2 && rng.gen_bool(0.9) {
                    Move::PASS
                } else {
                    random::base_move(rng, 4, 0.03, 0.02)
                }
            }),
        ),
    ];
    for (name, g, h, gen) in &pairs {
        let mut bad = Vec::new();
        for i in 0..50 {
            let moves: Vec<Move> = (0..64).map(|t| gen(rng, t)).collect();
            if let Some(t) = diverge(g, h, &moves) {
                bad.push(format!("run {i}, turn {t}"));
            }
            let cut = rng.gen_range(0..=8);
            let (pre, per) = moves[..cut + 4].split_at(cut);
            if lasso_verdict(g, pre, per) != lasso_verdict(h, pre, per) {
                bad.push(format!("run {i}, lasso cut at {cut}"));
            }
        }
        r.check(
            &format!("{name}, 50 runs to depth 64 plus their lassos"),
            50,
            &bad,
        );
    }
    Ok(r)
}

fn piecewise(rng: &mut Rng8) -> Result<Report> {
    let mut r = Report::new(4, "piecewise compile, decompile and recompile");
    for (name, d) in [
        ("two pieces over Z controls", demos::piecewise_xi2()),
        ("two pieces over INF0 controls", demos::piecewise_xi3()),
    ] {
        let tau: StrategyRef = Arc::new(piecewise_compile(&d.spec, &d.inner)?);
        let dec = piecewise_decompile(&d.game, tau.clone())?;
        let again = piecewise_compile(&dec.to_spec(), &d.inner)?;
        let (mut f, mut region, mut re) = (Vec::new(), Vec::new(), Vec::new());
        for x in samples(rng, 100, 4) {
            let want = (d.oracle)(&x);
            if eval_exact(&d.game, &*tau, &x, 32)? != want {
                f.push(format!("x = {x:?}"));
            }
            if dec.region_of(&x, 32)? != (d.region)(&x) {
                region.push(format!("x = {x:?}"));
            }
            if eval_exact(&d.game, &again, &x, 32)? != want {
                re.push(format!("x = {x:?}"));
            }
        }
        r.check(&format!("{name}: f_tau matches the piecewise map"), 100, &f);
        r.check(&format!("{name}: decompiled regions"), 100, &region);
        r.check(&format!("{name}: recompiled f_tau"), 100, &re);
    }
    Ok(r)
}

fn swap(rng: &mut Rng8) -> Result<Report> {
    let mut r = Report::new(5, "control swaps preserve f_tau");
    let copy: StrategyRef = Arc::new(MealyStrategy::copy());
    let cases = [
        ("Z to INF0", demos::piecewise_xi2(), demos::swap_z_to_inf0()),
        (
            "INF0 to alternating Z/INF0",
            demos::piecewise_xi3(),
            demos::swap_inf0_to_alternating(),
        ),
    ];
    for (name, d, s) in cases {
        let xs = samples(rng, 100, 4);
        let tau = piecewise_compile(&d.spec, &d.inner)?;
        let swapped = control_swap(
            &tau,
            &s.old,
            &s.new,
            &s.index_map,
            &s.sigmas,
            copy.clone(),
            &xs,
        )?;
        let g = make_gfxi(&d.inner, s.new.clone())?;
        let mut bad = Vec::new();
        for x in &xs {
            let before = eval_exact(&d.game, &tau, x, 32)?;
            if eval_exact(&g, &swapped, x, 32)? != before {
                bad.push(format!("x = {x:?}"));
            }
        }
        r.check(name, 100, &bad);
    }
    Ok(r)
}

/// II-strategies legal in the Lipschitz game: random machines and
/// constants.
fn ii_battery(rng: &mut Rng8, machines: usize, constants: usize) -> Vec<MealyStrategy> {
    let mut out: Vec<MealyStrategy> = (0..machines).map(|_| random::mealy(rng, 4, 0)).collect();
    out.extend((0..constants).map(|_| MealyStrategy::constant(&random::up_stream(rng, 4, 6, 4))));
    out
}

fn transfers(rng: &mut Rng8) -> Result<Report> {
    let mut r = Report::new(6, "transfers of I-strategies out of composite games");
    let battery = ii_battery(rng, 20, 1000);
    for (i, (a, b)) in demos::transfer_pairs().into_iter().enumerate() {
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
            let t = player_one_transfer(variant, &d.game, d.rho.clone(), d.anchor.clone())?;
            let x = t
                .as_stream()
                .ok_or_else(|| anyhow::anyhow!("demo strategies are oblivious"))?;
            let mut bad = Vec::new();
            for (j, tau) in battery.iter().enumerate() {
                if adjudicate_up(&d.inner, &x, tau, &a, &b, 0)?.winner != Winner::I {
                    bad.push(format!("II-strategy {j}"));
                }
            }
            r.check(
                &format!("pair {i}, {variant:?}: 20 machines and 10^3 plays of II"),
                battery.len(),
                &bad,
            );
        }
    }
    Ok(r)
}

fn limit(rng: &mut Rng8) -> Result<Report> {
    let mut r = Report::new(7, "limit game: the zero test");
    let d = demos::glim_zero_test();
    let mut xs = vec![UpStream::zeros()];
    while xs.len() < 51 {
        let x = random::up_stream(rng, 3, 6, 4);
        if x != UpStream::zeros() {
            xs.push(x);
        }
    }
    let mut bad = Vec::new();
    for x in &xs {
        if eval_exact(&d.game, &d.strategy, x, 0)? != (d.oracle)(x) {
            bad.push(format!("x = {x:?}"));
        }
    }
    r.check("zero stream and 50 nonzero reals", xs.len(), &bad);
    Ok(r)
}

fn gamma(rng: &mut Rng8) -> Result<Report> {
    const DIGITS: u64 = 6;
    const MAX_M: u64 = 4;
    let mut r = Report::new(8, "coded-set identity");
    let xs = samples(rng, 50, MAX_M + 1);
    let tau: StrategyRef = Arc::new(gamma_compile(demos::gamma_identity(), &xs, DIGITS, MAX_M)?);
    let mut id = Vec::new();
    for x in &xs {
        if gamma_digits(&*tau, x, DIGITS, MAX_M)? != x.take(DIGITS as usize) {
            id.push(format!("x = {x:?}"));
        }
    }
    r.check(
        &format!("first {DIGITS} output digits equal the input"),
        xs.len(),
        &id,
    );
    let dec = gamma_decompile(tau)?;
    let mut member = Vec::new();
    let mut total = 0;
    for x in &xs {
        for n in 0..DIGITS {
            for m in 0..=MAX_M {
                total += 1;
                if dec.member(n, m, x)? != (x.at(n) == m) {
                    member.push(format!("n = {n}, m = {m}, x = {x:?}"));
                }
            }
        }
    }
    r.check("decompiled membership of (n, m, x)", total, &member);
    Ok(r)
}

fn glip(rng: &mut Rng8) -> Result<Report> {
    let mut r = Report::new(9, "Lipschitz-coded composite game");
    let mut bad = Vec::new();
    for t in 0..=64u64 {
        let digits: Vec<Digit> = (0..2 * t + 2)
            .map(|_| {
                if rng.gen_bool(0.1) {
                    rng.gen_range(0..256)
                } else {
                    rng.gen_range(0..8)
                }
            })
            .collect();
        let m = coded_move(enum_index_big(&digits));
        let back = move_code(&m).and_then(|c| enum_seq_big(digits.len(), &c));
        if back.as_deref() != Some(&digits[..]) {
            bad.push(format!("turn {t}"));
        }
    }
    r.check("move coding round trip at turns 0..=64", 65, &bad);

    let d = demos::glip_two_pieces();
    let (tau, schedule) = glip_compile(&d.pieces, &d.controls)?;
    let mut bad = Vec::new();
    for x in samples(rng, 100, 4) {
        if eval_exact(&d.game, &tau, &x, 32)? != (d.oracle)(&x) {
            bad.push(format!("x = {x:?}"));
        }
    }
    r.check(
        "two pieces with budgets 1 and 2 match the case split",
        100,
        &bad,
    );
    let increasing = schedule.windows(2).all(|w| w[0] < w[1]);
    r.check(
        &format!("row schedule {schedule:?} strictly increasing"),
        1,
        &if increasing {
            vec![]
        } else {
            vec!["order".into()]
        },
    );
    Ok(r)
}

const BOUND: u64 = 16;

fn successors(rng: &mut Rng8) -> Result<Report> {
    let mut r = Report::new(10, "successor sets and the merged strategy");
    let sets: Vec<SuccessorSet> = [demos::z_schedule(), demos::alternating_schedule()]
        .into_iter()
        .flat_map(|controls| {
            [SuccessorKind::Sigma, SuccessorKind::Pi, SuccessorKind::R].map(|kind| SuccessorSet {
                base: gallery::cylinder(&[0]),
                controls: controls.clone(),
                kind,
            })
        })
        .collect();
    let mut bad = Vec::new();
    let mut skipped = 0;
    let mut taken = 0;
    while taken < 500 {
        let x = random::biased_binary(rng, 0.6, 8, 8);
        let s = &sets[taken % sets.len()];
        if activation(&s.controls, &x).is_some_and(|n| n > BOUND) {
            skipped += 1;
            continue;
        }
        taken += 1;
        if successor_member(s, &x) != successor_member_bounded(s, &x, BOUND) {
            bad.push(format!("{:?}, x = {x:?}", s.kind));
        }
    }
    r.check(
        &format!("exact membership vs brute force with n <= {BOUND}"),
        500,
        &bad,
    );
    r.note(format!(
        "samples activated past row {BOUND} and skipped: {skipped}"
    ));

    for (name, d) in [
        ("cylinder", demos::successor_cylinder()),
        ("empty", demos::successor_empty()),
    ] {
        let xs: Vec<UpStream> = (0..1000).map(|_| random::up_stream(rng, 3, 6, 4)).collect();
        let (tau, hat) = successor_merge(d.sigma0, d.sigma1, &d.a, &d.b, &d.controls, &xs)?;
        let g = make_gfxi(&make_base_game(BaseKind::W), hat)?;
        let mut bad = Vec::new();
        for x in &xs {
            if adjudicate_up(&g, x, &tau, &d.a, &d.b, BOUND)?.winner != Winner::II {
                bad.push(format!("x = {x:?}"));
            }
        }
        r.check(
            &format!("merged strategy ({name}) wins on 10^3 inputs"),
            xs.len(),
            &bad,
        );
    }
    Ok(r)
}

fn klip_transfers(rng: &mut Rng8) -> Result<Report> {
    let mut r = Report::new(11, "k-Lipschitz transfers for the N<1> demo");
    let z = gallery::zero_stream();
    let n1 = gallery::cylinder(&[1]);
    for k in 0..=2u64 {
        let g = make_base_game(BaseKind::KLip(k));
        let sigma = klip_transfer_i(demos::klip_sigma_i(k as usize), k);
        let mut battery: Vec<Box<dyn Strategy>> = (0..20)
            .map(|_| Box::new(random::mealy(rng, 3, k as usize)) as Box<dyn Strategy>)
            .collect();
        battery.extend((0..1000).map(|_| {
            Box::new(const_klip(&random::up_stream(rng, 3, 6, 4), k)) as Box<dyn Strategy>
        }));
        let mut bad = Vec::new();
        for (j, tau) in battery.iter().enumerate() {
            if adjudicate_vs(&g, &sigma, &**tau, &z, &n1)?.winner != Winner::I {
                bad.push(format!("II-strategy {j}"));
            }
        }
        r.check(
            &format!("k = {k}, I transferred: 20 machines and 10^3 plays of II"),
            battery.len(),
            &bad,
        );

        let tau = klip_transfer_ii(
            Arc::new(demos::klip_tau_ii(k as usize)),
            UpStream::zeros(),
            k,
        );
        let mut bad = Vec::new();
        let machines: Vec<_> = (0..20).map(|_| random::mealy_i(rng, 3)).collect();
        for (j, sigma) in machines.iter().enumerate() {
            if adjudicate_vs(&g, sigma, &tau, &n1, &n1)?.winner != Winner::II {
                bad.push(format!("I-strategy {j}"));
            }
        }
        for _ in 0..1000 {
            let x = random::up_stream(rng, 3, 6, 4);
            if adjudicate_up(&g, &x, &tau, &n1, &n1, 0)?.winner != Winner::II {
                bad.push(format!("x = {x:?}"));
            }
        }
        r.check(
            &format!("k = {k}, II transferred: 20 machines and 10^3 plays of I"),
            1020,
            &bad,
        );
    }
    Ok(r)
}
