//! Seeded generators for the property batteries.

use baire_games::moves::Sym;
use baire_games::strategy::{DelayTransducer, Emit, MealyStrategy, MealyStrategyI, Out};
use baire_games::{Digit, Move, UpStream};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Rng8 = ChaCha8Rng;

pub fn seeded(seed: u64, stream: u64) -> Rng8 {
    let mut r = <ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn digits(rng: &mut Rng8, n: usize, alphabet: Digit) -> Vec<Digit> {
    (0..n).map(|_| rng.gen_range(0..alphabet)).collect()
}

/// Prefix of length `0..=max_prefix`, period of length `1..=max_period`.
pub fn up_stream(
    rng: &mut Rng8,
    alphabet: Digit,
    max_prefix: usize,
    max_period: usize,
) -> UpStream {
    let p = rng.gen_range(0..=max_prefix);
    let l = rng.gen_range(1..=max_period);
    let prefix = digits(rng, p, alphabet);
    let period = digits(rng, l, alphabet);
    UpStream::new(prefix, period).expect("nonempty period")
}

/// Digits 0 and 1 with 0 drawn with probability `zero`.
pub fn biased_binary(rng: &mut Rng8, zero: f64, max_prefix: usize, max_period: usize) -> UpStream {
    let bit = |rng: &mut Rng8| Digit::from(!rng.gen_bool(zero));
    let p = rng.gen_range(0..=max_prefix);
    let l = rng.gen_range(1..=max_period);
    let prefix = (0..p).map(|_| bit(rng)).collect();
    let period = (0..l).map(|_| bit(rng)).collect();
    UpStream::new(prefix, period).expect("nonempty period")
}

/// A real agreeing with `x` on a random number of leading digits.
pub fn near(rng: &mut Rng8, x: &UpStream, alphabet: Digit) -> UpStream {
    let cut = rng.gen_range(0..=12);
    up_stream(rng, alphabet, 4, 4).prepend(&x.take(cut))
}

/// A Mealy strategy answering every turn with a digit; the first `passes`
/// states pass instead.
pub fn mealy(rng: &mut Rng8, alphabet: Digit, passes: usize) -> MealyStrategy {
    let core = rng.gen_range(1..=4);
    let n = passes + core;
    let mut steps: Vec<(usize, Option<Digit>, usize, Out)> =
        (0..passes).map(|i| (i, None, i + 1, Out::Pass)).collect();
    let out = |rng: &mut Rng8| {
        if rng.gen_bool(0.3) {
            Out::Echo
        } else {
            Out::Nat(rng.gen_range(0..alphabet))
        }
    };
    for q in passes..n {
        let mut labels: Vec<Digit> = (0..alphabet).collect();
        labels.shuffle(rng);
        for &d in &labels[..rng.gen_range(0..=2.min(labels.len()))] {
            let dst = rng.gen_range(passes..n);
            steps.push((q, Some(d), dst, out(rng)));
        }
        let dst = rng.gen_range(passes..n);
        steps.push((q, None, dst, out(rng)));
    }
    MealyStrategy::new(n, 0, &steps).expect("total by construction")
}

/// A strategy for I reading II's digits.
pub fn mealy_i(rng: &mut Rng8, alphabet: Digit) -> MealyStrategyI {
    let n = rng.gen_range(1..=4);
    let output = digits(rng, n, alphabet);
    let mut steps = Vec::new();
    for q in 0..n {
        for _ in 0..rng.gen_range(0..=2) {
            steps.push((
                q,
                Some(Move::Nat(rng.gen_range(0..alphabet))),
                rng.gen_range(0..n),
            ));
        }
        steps.push((q, None, rng.gen_range(0..n)));
    }
    // duplicate labels with different targets would be nondeterministic
    steps.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    steps.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);
    MealyStrategyI::new(output, 0, &steps).expect("total by construction")
}

/// A transducer with at most `k` silent steps on any run: states carry a
/// phase `0..=k` that only a silent step advances.
pub fn delay_transducer(rng: &mut Rng8, alphabet: Digit, k: usize) -> DelayTransducer {
    let width = rng.gen_range(1..=3);
    let n = (k + 1) * width;
    let mut steps = Vec::new();
    let edge = |rng: &mut Rng8, q: usize| {
        let phase = q / width;
        if phase < k && rng.gen_bool(0.4) {
            ((phase + 1) * width + rng.gen_range(0..width), Emit::Skip)
        } else {
            let e = if rng.gen_bool(0.4) {
                Emit::Echo
            } else {
                Emit::Nat(rng.gen_range(0..alphabet))
            };
            (phase * width + rng.gen_range(0..width), e)
        }
    };
    for q in 0..n {
        if rng.gen_bool(0.5) {
            let (dst, e) = edge(rng, q);
            steps.push((q, Some(rng.gen_range(0..alphabet)), dst, e));
        }
        let (dst, e) = edge(rng, q);
        steps.push((q, None, dst, e));
    }
    DelayTransducer::new(n, 0, &steps).expect("total by construction")
}

/// Digits with occasional passes, erasures and backtracks.
pub fn base_move(rng: &mut Rng8, alphabet: Digit, pass: f64, other: f64) -> Move {
    let r: f64 = rng.gen();
    if r < pass {
        Move::PASS
    } else if r < pass + other {
        Move::Sym(*[Sym::Erase, Sym::Bt].choose(rng).expect("nonempty"))
    } else {
        Move::Nat(rng.gen_range(0..alphabet))
    }
}
