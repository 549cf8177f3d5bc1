//! Ready-made specifications with their reference semantics, shared by the
//! tests and the command line tool.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::composite::{
    make_gfxi, make_ggamma, make_glim, make_glipxi, make_tilde, CodeFamily, CompositeStrategy,
    ControlSchedule, LipPiece, Piece, PiecewiseSpec, Region, RowFamily, Tail,
};
use crate::game::{make_base_game, BaseKind, GameSpec};
use crate::omega::{gallery, reduce_buchi_to_inf0, DetOmegaAutomaton};
use crate::strategy::{
    DelayTransducer, MealyStrategy, MealyStrategyI, Out, StrategyRef, StreamStrategyI,
};
use crate::streams::{Digit, UpStream};

fn arc(m: MealyStrategy) -> StrategyRef {
    Arc::new(m)
}

pub fn z_schedule() -> ControlSchedule {
    ControlSchedule::repeat(gallery::canonical_pi1()).expect("Z is a proper subset")
}

pub fn inf0_schedule() -> ControlSchedule {
    ControlSchedule::repeat(gallery::canonical_pi2()).expect("INF0 is a proper subset")
}

/// `Z, INF0, Z, INF0, ...`
pub fn alternating_schedule() -> ControlSchedule {
    ControlSchedule::new(
        vec![gallery::canonical_pi1(), gallery::canonical_pi2()],
        Tail::Cycle,
    )
    .expect("proper subsets")
}

/// Passes once, then copies: output digit `i` is input digit `i + 1`.
pub fn shift_one() -> MealyStrategy {
    MealyStrategy::new(2, 0, &[(0, None, 1, Out::Pass), (1, None, 1, Out::Echo)]).expect("valid")
}

/// A piecewise function with its game and reference semantics.
pub struct PiecewiseDemo {
    pub game: GameSpec,
    pub inner: GameSpec,
    pub spec: PiecewiseSpec,
    pub oracle: fn(&UpStream) -> UpStream,
    /// index of the piece applying to `x`
    pub region: fn(&UpStream) -> u64,
}

/// Two pieces split by the clopen set `N⟨0⟩`, Z controls: on `N⟨0⟩` drop the
/// first digit, elsewhere the constant 5.
pub fn piecewise_xi2() -> PiecewiseDemo {
    let inner = make_base_game(BaseKind::W);
    let controls = z_schedule();
    let spec = PiecewiseSpec {
        pieces: vec![
            Piece {
                region: Region::Automaton(gallery::cylinder(&[0])),
                strategy: arc(shift_one()),
            },
            Piece {
                region: Region::Rest,
                strategy: arc(MealyStrategy::constant(&UpStream::constant(5))),
            },
        ],
        controls: controls.clone(),
    };
    PiecewiseDemo {
        game: make_gfxi(&inner, controls).expect("W is delayable"),
        inner,
        spec,
        oracle: |x| {
            if x.at(0) == 0 {
                x.shift(1)
            } else {
                UpStream::constant(5)
            }
        },
        region: |x| u64::from(x.at(0) != 0),
    }
}

/// Two pieces split by the set of reals with infinitely many zeros, INF0
/// controls: the identity there, elsewhere the constant 7.
pub fn piecewise_xi3() -> PiecewiseDemo {
    let inner = make_base_game(BaseKind::W);
    let controls = inf0_schedule();
    let spec = PiecewiseSpec {
        pieces: vec![
            Piece {
                region: Region::Automaton(gallery::infinitely_many_zeros()),
                strategy: arc(MealyStrategy::copy()),
            },
            Piece {
                region: Region::Rest,
                strategy: arc(MealyStrategy::constant(&UpStream::constant(7))),
            },
        ],
        controls: controls.clone(),
    };
    PiecewiseDemo {
        game: make_gfxi(&inner, controls).expect("W is delayable"),
        inner,
        spec,
        oracle: |x| {
            if x.period().contains(&0) {
                x.clone()
            } else {
                UpStream::constant(7)
            }
        },
        region: |x| u64::from(!x.period().contains(&0)),
    }
}

/// Arguments of a control swap, ready to pass on.
pub struct SwapDemo {
    pub old: ControlSchedule,
    pub new: ControlSchedule,
    pub index_map: Vec<u64>,
    pub sigmas: Vec<StrategyRef>,
}

/// Z controls to INF0 controls, rows kept in place.
pub fn swap_z_to_inf0() -> SwapDemo {
    let sigma: StrategyRef =
        Arc::new(reduce_buchi_to_inf0(&gallery::zero_stream()).expect("Z is Büchi-shaped"));
    SwapDemo {
        old: z_schedule(),
        new: inf0_schedule(),
        index_map: vec![0, 1],
        sigmas: vec![sigma.clone(), sigma],
    }
}

/// INF0 controls to alternating Z/INF0 controls, rows moved to the INF0
/// slots.
pub fn swap_inf0_to_alternating() -> SwapDemo {
    let copy = arc(MealyStrategy::copy());
    SwapDemo {
        old: inf0_schedule(),
        new: alternating_schedule(),
        index_map: vec![1, 3],
        sigmas: vec![copy.clone(), copy],
    }
}

/// Row `n` passes for `n` turns, then plays 1 forever if a nonzero digit
/// was seen and 0 forever otherwise.
pub fn glim_row(n: u64) -> MealyStrategy {
    let n = n as usize;
    // states 0..n: (turn, nothing seen), n..2n: (turn, seen), 2n: zeros, 2n+1: ones
    let (zeros, ones) = (2 * n, 2 * n + 1);
    let mut steps = vec![
        (zeros, None, zeros, Out::Nat(0)),
        (ones, None, ones, Out::Nat(1)),
    ];
    for t in 0..n {
        let (clean_next, seen_next) = if t + 1 == n {
            (zeros, ones)
        } else {
            (t + 1, n + t + 1)
        };
        steps.push((t, Some(0), clean_next, Out::Pass));
        steps.push((t, None, seen_next, Out::Pass));
        steps.push((n + t, None, seen_next, Out::Pass));
    }
    MealyStrategy::new(2 * n + 2, if n == 0 { zeros } else { 0 }, &steps).expect("valid")
}

pub struct LimitDemo {
    pub game: GameSpec,
    pub strategy: CompositeStrategy,
    pub oracle: fn(&UpStream) -> UpStream,
}

/// The characteristic function of the zero stream as a limit of continuous
/// functions.
pub fn glim_zero_test() -> LimitDemo {
    let game =
        make_glim(RowFamily::new(Vec::new(), make_base_game(BaseKind::W))).expect("W is p-closed");
    let strategy = CompositeStrategy::family(
        Vec::new(),
        |n| arc(glim_row(n)),
        Some(Arc::new(|x: &UpStream| {
            Some(
                (0..x.size() as u64)
                    .find(|&i| x.at(i) != 0)
                    .map_or(0, |i| i + 1),
            )
        })),
    );
    LimitDemo {
        game,
        strategy,
        oracle: |x| UpStream::constant(u64::from(*x != UpStream::zeros())),
    }
}

/// `S(n, m) = {x : x(n) = m}`: the coded-set identity.
pub fn gamma_identity() -> CodeFamily {
    Arc::new(|n, m| gallery::digit_equals(n as usize, m))
}

pub fn gamma_game(max_m: u64) -> GameSpec {
    make_ggamma(max_m)
}

pub struct LipDemo {
    pub game: GameSpec,
    pub pieces: Vec<LipPiece>,
    pub controls: ControlSchedule,
    pub oracle: fn(&UpStream) -> UpStream,
}

/// On `N⟨0⟩` drop one digit (delay 1), elsewhere drop two (delay 2).
pub fn glip_two_pieces() -> LipDemo {
    let controls = z_schedule();
    LipDemo {
        game: make_glipxi(controls.clone()),
        pieces: vec![
            LipPiece {
                region: Region::Automaton(gallery::cylinder(&[0])),
                transducer: DelayTransducer::shift(1),
            },
            LipPiece {
                region: Region::Rest,
                transducer: DelayTransducer::shift(2),
            },
        ],
        controls,
        oracle: |x| if x.at(0) == 0 { x.shift(1) } else { x.shift(2) },
    }
}

/// A hand-built pair of Wadge strategies for the successor merge.
pub struct SuccessorDemo {
    pub a: DetOmegaAutomaton,
    pub b: DetOmegaAutomaton,
    pub controls: ControlSchedule,
    pub sigma0: StrategyRef,
    pub sigma1: StrategyRef,
}

/// Digits `k ≡ 1 (mod 4)` (row 1) are `c`, all others 0.
fn row_one_is(c: Digit) -> UpStream {
    UpStream::periodic(vec![0, c, 0, 0]).expect("nonempty")
}

/// Reads `x(0)`; then plays row 0 all zeros and row 1 constant
/// `[x(0) ≠ 0]`. States `1 + 4c + p` emit digit `p (mod 4)` of that stream.
fn sigma_row_one() -> MealyStrategy {
    let mut steps = vec![(0, Some(0), 2, Out::Nat(0)), (0, None, 6, Out::Nat(0))];
    for c in 0..2 {
        for p in 0..4 {
            let out = if p == 1 { c as u64 } else { 0 };
            steps.push((1 + 4 * c + p, None, 1 + 4 * c + (p + 1) % 4, Out::Nat(out)));
        }
    }
    MealyStrategy::new(9, 0, &steps).expect("valid")
}

/// `A = B = N⟨0⟩` over Z controls. `σ⁰` always activates row 0 and puts
/// `[x(0) ≠ 0]^ω` on row 1; `σ¹` plays `1^ω` (in `R`) on `N⟨0⟩` and like
/// `σ⁰` elsewhere.
pub fn successor_cylinder() -> SuccessorDemo {
    let mut steps = vec![
        (0, Some(0), 9, Out::Nat(1)),
        (0, None, 6, Out::Nat(0)),
        (9, None, 9, Out::Nat(1)),
    ];
    steps.extend(sigma_row_one().step_list().into_iter().filter(|s| s.0 != 0));
    let sigma1 = MealyStrategy::new(10, 0, &steps).expect("valid");
    SuccessorDemo {
        a: gallery::cylinder(&[0]),
        b: gallery::cylinder(&[0]),
        controls: z_schedule(),
        sigma0: arc(sigma_row_one()),
        sigma1: arc(sigma1),
    }
}

/// `A = ∅`, `B = N⟨0⟩`: `σ⁰` plays `1^ω` (in `R`), `σ¹` activates row 0 with
/// `1^ω` on row 1.
pub fn successor_empty() -> SuccessorDemo {
    SuccessorDemo {
        a: gallery::empty(),
        b: gallery::cylinder(&[0]),
        controls: z_schedule(),
        sigma0: arc(MealyStrategy::constant(&UpStream::constant(1))),
        sigma1: arc(MealyStrategy::constant(&row_one_is(1))),
    }
}

/// `σ¹` of [`successor_cylinder`] replaced by `1^ω`, which loses on
/// reals outside `N⟨0⟩`.
pub fn successor_broken() -> SuccessorDemo {
    SuccessorDemo {
        sigma1: arc(MealyStrategy::constant(&UpStream::constant(1))),
        ..successor_cylinder()
    }
}

/// A composite game and an oblivious winning strategy for I in it.
pub struct TransferDemo {
    pub game: GameSpec,
    pub inner: GameSpec,
    pub a: DetOmegaAutomaton,
    pub b: DetOmegaAutomaton,
    pub rho: StreamStrategyI,
    pub anchor: Option<UpStream>,
}

/// The pairs `(ω^ω, ∅)` and `(N⟨0⟩, ∅)`: I plays `0^ω ∈ A`, and no output
/// lies in `∅`.
pub fn transfer_pairs() -> Vec<(DetOmegaAutomaton, DetOmegaAutomaton)> {
    vec![
        (gallery::full(), gallery::empty()),
        (gallery::cylinder(&[0]), gallery::empty()),
    ]
}

/// Over the Wadge game: `L` itself is not delayable, and an I strategy
/// for `W` is one for `L`.
pub fn transfer_gfxi(a: DetOmegaAutomaton, b: DetOmegaAutomaton) -> TransferDemo {
    let inner = make_base_game(BaseKind::W);
    TransferDemo {
        game: make_gfxi(&inner, z_schedule()).expect("W is delayable"),
        inner,
        a,
        b,
        rho: StreamStrategyI(UpStream::zeros()),
        anchor: Some(UpStream::zeros()),
    }
}

pub fn transfer_tilde(a: DetOmegaAutomaton, b: DetOmegaAutomaton) -> TransferDemo {
    let inner = make_base_game(BaseKind::W);
    TransferDemo {
        game: make_tilde(&inner, z_schedule()).expect("W is delayable"),
        inner,
        a,
        b,
        rho: StreamStrategyI(UpStream::zeros()),
        anchor: Some(UpStream::zeros()),
    }
}

pub fn transfer_gamma(a: DetOmegaAutomaton, b: DetOmegaAutomaton) -> TransferDemo {
    TransferDemo {
        game: make_ggamma(16),
        inner: make_base_game(BaseKind::W),
        a,
        b,
        rho: StreamStrategyI(UpStream::zeros()),
        anchor: None,
    }
}

/// I's winning strategy in `G_L(Z, 0^k ⌢ N⟨1⟩)`: play 0 until II's first
/// `k + 1` digits are known, then 1 forever if they are `0^k 1` and 0
/// forever otherwise.
pub fn klip_sigma_i(k: usize) -> MealyStrategyI {
    // states 0..=k: matched so far; k+1: zeros forever; k+2: ones forever
    let (zeros, ones) = (k + 1, k + 2);
    let mut output = vec![0; k + 3];
    output[ones] = 1;
    let mut steps = vec![(zeros, None, zeros), (ones, None, ones)];
    for i in 0..k {
        steps.push((i, Some(crate::moves::Move::Nat(0)), i + 1));
        steps.push((i, None, zeros));
    }
    steps.push((k, Some(crate::moves::Move::Nat(1)), ones));
    steps.push((k, None, zeros));
    MealyStrategyI::new(output, 0, &steps).expect("valid")
}

/// II's winning strategy in `G_L(N⟨1⟩, 0^k ⌢ N⟨1⟩)`: `0^k`, then
/// `[x(0) = 1]`, then zeros.
pub fn klip_tau_ii(k: usize) -> MealyStrategy {
    // states 0..k: leading zeros, remembering x(0) from state 1 on
    // layout: 0 start; 1 + 2i + c for i in 0..k with c = [x(0) = 1]; tail state last
    let tail = 2 * k + 1;
    let mut steps = vec![(tail, None, tail, Out::Nat(0))];
    if k == 0 {
        steps.push((0, Some(1), tail, Out::Nat(1)));
        steps.push((0, None, tail, Out::Nat(0)));
    } else {
        steps.push((0, Some(1), 2, Out::Nat(0)));
        steps.push((0, None, 1, Out::Nat(0)));
        for i in 0..k {
            for c in 0..2 {
                let q = 1 + 2 * i + c;
                if i + 1 < k {
                    steps.push((q, None, q + 2, Out::Nat(0)));
                } else {
                    steps.push((q, None, tail, Out::Nat(c as u64)));
                }
            }
        }
    }
    MealyStrategy::new(2 * k + 2, 0, &steps).expect("valid")
}
