//! The subcommands. Exit codes: 0 for success or a true verdict, 1 for a
//! false verdict, 2 for errors.

use std::io::{BufRead, Write};
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use baire_games::composite::{
    control_swap, piecewise_compile, piecewise_decompile, player_one_transfer, CompositeGame,
    TransferVariant,
};
use baire_games::degree::successor_member;
use baire_games::game::{
    adjudicate_up, adjudicate_vs, eval_depth, eval_exact, legality_check_exact,
    legality_check_sampled, make_base_game, run_vs_to_depth, BaseKind, GameSpec, LegalityReport,
    Status, Verdict, Winner, Witness,
};
use baire_games::omega::PrefixVerdict;
use baire_games::strategy::{Strategy, StrategyI, StrategyRef};
use baire_games::{Digit, UpStream};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::formats;
use crate::random;
use crate::suites;

pub const DEFAULT_SEED: u64 = 20240601;

#[derive(Parser, Debug)]
#[command(
    name = "baire-games",
    version,
    about = "Reduction games on Baire space"
)]
pub struct Cli {
    /// Print machine-readable JSON
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// A JSON document, given inline or as a file path.
#[derive(Clone, Debug)]
pub struct Doc(pub Value);

fn parse_doc(s: &str) -> Result<Doc, String> {
    let text = if s.trim_start().starts_with(['{', '[', '"']) {
        s.to_owned()
    } else {
        std::fs::read_to_string(PathBuf::from(s)).map_err(|e| format!("{s}: {e}"))?
    };
    serde_json::from_str(&text)
        .map(Doc)
        .map_err(|e| format!("{s}: {e}"))
}

#[derive(Args, Debug)]
pub struct Bounds {
    /// Rows searched for an activation in composite games
    #[arg(long, default_value_t = 32)]
    pub max_rows: u64,
}

#[derive(Args, Debug)]
pub struct Sampling {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Variant {
    Gfxi,
    Tilde,
    Gamma,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Output of a strategy for II on an eventually periodic input
    Eval {
        #[arg(value_parser = parse_doc)]
        game: Doc,
        #[arg(value_parser = parse_doc)]
        strategy: Doc,
        #[arg(long, value_parser = parse_doc)]
        input: Doc,
        /// Print the first D output digits instead of the exact output
        #[arg(long)]
        depth: Option<u64>,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Whether a strategy for II obeys the rules against every input
    Legal {
        #[arg(value_parser = parse_doc)]
        game: Doc,
        #[arg(value_parser = parse_doc)]
        strategy: Doc,
        /// Check on random inputs instead of exactly
        #[arg(long)]
        sampled: bool,
        #[arg(long, default_value_t = 64)]
        depth: u64,
        #[command(flatten)]
        bounds: Bounds,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Compile a piecewise specification into a strategy for the activation game
    Compile {
        #[arg(value_parser = parse_doc)]
        spec: Doc,
    },
    /// Read regions and pieces off a strategy for the activation game
    Decompile {
        #[arg(value_parser = parse_doc)]
        game: Doc,
        #[arg(value_parser = parse_doc)]
        strategy: Doc,
        /// Report the region of this input
        #[arg(long, value_parser = parse_doc)]
        input: Option<Doc>,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Move the rows of a compiled strategy onto a new control schedule
    Swap {
        /// `{"game", "strategy", "new", "index_map", "sigmas", "inner"}`
        #[arg(value_parser = parse_doc)]
        config: Doc,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Decide who wins a run; true when II wins
    Adjudicate {
        #[arg(value_parser = parse_doc)]
        game: Doc,
        #[arg(value_parser = parse_doc)]
        strategy: Doc,
        #[arg(long, value_parser = parse_doc)]
        a: Doc,
        #[arg(long, value_parser = parse_doc)]
        b: Doc,
        /// I's real
        #[arg(long, value_parser = parse_doc, conflicts_with = "opponent")]
        input: Option<Doc>,
        /// A strategy for I
        #[arg(long, value_parser = parse_doc)]
        opponent: Option<Doc>,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Turn a strategy for I in a composite game into one for the game it
    /// is built over, and play it against a strategy for II
    Transfer {
        #[arg(value_enum)]
        variant: Variant,
        #[arg(value_parser = parse_doc)]
        game: Doc,
        #[arg(value_parser = parse_doc)]
        rho: Doc,
        #[arg(long, value_parser = parse_doc)]
        against: Doc,
        #[arg(long, value_parser = parse_doc)]
        anchor: Option<Doc>,
        #[arg(long, value_parser = parse_doc)]
        a: Doc,
        #[arg(long, value_parser = parse_doc)]
        b: Doc,
        #[arg(long, default_value_t = 32)]
        depth: u64,
    },
    /// Membership of a real in an automaton or successor set
    Member {
        #[arg(value_parser = parse_doc)]
        set: Doc,
        #[arg(long, value_parser = parse_doc)]
        input: Doc,
    },
    /// Run the property batteries: a criterion number, a name, `all`, or a
    /// fixture file
    Suite {
        name: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        max_m: u64,
    },
    /// Play as I against a strategy, one digit per line on stdin
    Play {
        #[arg(value_parser = parse_doc)]
        game: Doc,
        #[arg(value_parser = parse_doc)]
        strategy: Doc,
        #[arg(long, default_value_t = 16)]
        depth: u64,
    },
}

/// Runs a parsed command line; errors are reported and mapped to exit
/// code 2.
pub fn execute(cli: Cli, input: &mut dyn BufRead, out: &mut dyn Write) -> i32 {
    match dispatch(&cli, input, out) {
        Ok(code) => code,
        Err(e) => {
            if cli.json {
                let _ = writeln!(out, "{}", json!({"error": format!("{e:#}")}));
            } else {
                eprintln!("error: {e:#}");
            }
            2
        }
    }
}

fn truth(b: bool) -> i32 {
    if b {
        0
    } else {
        1
    }
}

fn dispatch(cli: &Cli, input: &mut dyn BufRead, out: &mut dyn Write) -> Result<i32> {
    let json = cli.json;
    match &cli.command {
        Command::Eval {
            game,
            strategy,
            input: x,
            depth,
            bounds,
        } => {
            let g = formats::game(&game.0)?;
            let tau = formats::strategy(&strategy.0)?;
            let x = formats::stream(&x.0)?;
            let v = match depth {
                Some(d) => json!(eval_depth(&g, &*tau, &x, *d)?),
                None => formats::stream_json(&eval_exact(&g, &*tau, &x, bounds.max_rows)?),
            };
            writeln!(out, "{}", if json { json!({"output": v}) } else { v })?;
            Ok(0)
        }
        Command::Legal {
            game,
            strategy,
            sampled,
            depth,
            bounds,
            sampling,
        } => {
            let g = formats::game(&game.0)?;
            let tau = formats::strategy(&strategy.0)?;
            let report = if *sampled {
                let mut rng = random::seeded(sampling.seed, 0);
                let xs: Vec<UpStream> = (0..sampling.samples)
                    .map(|_| random::up_stream(&mut rng, 4, 6, 4))
                    .collect();
                legality_check_sampled(&g, &*tau, &xs, *depth, bounds.max_rows)
            } else {
                legality_check_exact(&g, &*tau)?
            };
            legality(report, json, out)
        }
        Command::Compile { spec } => {
            let (spec, inner) = formats::piecewise(&spec.0)?;
            let tau = piecewise_compile(&spec, &inner)?;
            let v = formats::composite_json(
                tau.explicit(),
                &spec.controls,
                &*inner.identity_strategy(),
            )?;
            writeln!(out, "{v}")?;
            Ok(0)
        }
        Command::Decompile {
            game,
            strategy,
            input: x,
            bounds,
        } => decompile(game, strategy, x.as_ref(), bounds, json, out),
        Command::Swap { config, sampling } => swap(&config.0, sampling, out),
        Command::Adjudicate {
            game,
            strategy,
            a,
            b,
            input: x,
            opponent,
            bounds,
        } => {
            let g = formats::game(&game.0)?;
            let tau = formats::strategy(&strategy.0)?;
            let (a, b) = (formats::automaton(&a.0)?, formats::automaton(&b.0)?);
            let v = match (x, opponent) {
                (Some(x), _) => {
                    adjudicate_up(&g, &formats::stream(&x.0)?, &*tau, &a, &b, bounds.max_rows)?
                }
                (None, Some(s)) => adjudicate_vs(&g, &*formats::strategy_i(&s.0)?, &*tau, &a, &b)?,
                (None, None) => bail!("give --input or --opponent"),
            };
            verdict(&v, json, out)
        }
        Command::Transfer {
            variant,
            game,
            rho,
            against,
            anchor,
            a,
            b,
            depth,
        } => transfer(
            *variant,
            game,
            rho,
            against,
            anchor.as_ref(),
            (a, b),
            *depth,
            json,
            out,
        ),
        Command::Member { set, input: x } => {
            let x = formats::stream(&x.0)?;
            let m = if set.0.get("kind").is_some() {
                successor_member(&formats::successor_set(&set.0)?, &x).is_in()
            } else {
                formats::automaton(&set.0)?.membership_up(&x).is_in()
            };
            writeln!(
                out,
                "{}",
                if json {
                    json!({"member": m}).to_string()
                } else {
                    m.to_string()
                }
            )?;
            Ok(truth(m))
        }
        Command::Suite { name, seed, max_m } => suite(name, *seed, *max_m, json, out),
        Command::Play {
            game,
            strategy,
            depth,
        } => {
            let g = formats::game(&game.0)?;
            let tau = formats::strategy(&strategy.0)?;
            play(&g, &*tau, *depth, input, out)
        }
    }
}

fn legality(report: LegalityReport, json: bool, out: &mut dyn Write) -> Result<i32> {
    let (code, v) = match &report {
        LegalityReport::Legal => (0, json!({"legal": true})),
        LegalityReport::UnknownAtDepth(d) => (0, json!({"legal": null, "depth": d})),
        LegalityReport::Illegal { witness, reason } => {
            let w = match witness {
                Witness::Prefix(p) => json!({"prefix": p}),
                Witness::Lasso(x) => json!({"input": formats::stream_json(x)}),
            };
            (1, json!({"legal": false, "witness": w, "reason": reason}))
        }
    };
    if json {
        writeln!(out, "{v}")?;
    } else {
        match report {
            LegalityReport::Legal => writeln!(out, "legal")?,
            LegalityReport::UnknownAtDepth(d) => {
                writeln!(out, "no violation found on the samples to depth {d}")?
            }
            LegalityReport::Illegal { reason, .. } => {
                writeln!(out, "illegal: {reason}; witness {}", v["witness"])?
            }
        }
    }
    Ok(code)
}

fn verdict(v: &Verdict, json: bool, out: &mut dyn Write) -> Result<i32> {
    let who = match v.winner {
        Winner::I => "I",
        Winner::II => "II",
    };
    if json {
        writeln!(out, "{}", json!({"winner": who, "reason": v.reason}))?;
    } else {
        writeln!(out, "{who} wins: {}", v.reason)?;
    }
    Ok(truth(v.winner == Winner::II))
}

fn decompile(
    game: &Doc,
    strategy: &Doc,
    x: Option<&Doc>,
    bounds: &Bounds,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32> {
    let g = formats::game(&game.0)?;
    let tau = formats::strategy(&strategy.0)?;
    let dec = piecewise_decompile(&g, tau)?;
    if let Some(x) = x {
        let x = formats::stream(&x.0)?;
        let n = dec.region_of(&x, bounds.max_rows)?;
        let y = dec.eval_piece(&x, bounds.max_rows)?;
        let v = json!({"region": n, "output": formats::stream_json(&y)});
        writeln!(
            out,
            "{}",
            if json {
                v.to_string()
            } else {
                format!("region {n}, output {}", v["output"])
            }
        )?;
        return Ok(0);
    }
    let spec = dec.to_spec();
    let inner = game
        .0
        .get("gfxi")
        .or_else(|| game.0.get("tilde"))
        .and_then(|c| c.get("inner"))
        .cloned();
    let pieces = spec
        .pieces
        .iter()
        .map(|p| {
            let baire_games::composite::Region::Witness { sigma, control } = &p.region else { unreachable!() };
            let row = |s: &StrategyRef| s.as_mealy().map(formats::mealy_json).ok_or_else(|| anyhow!("row has no finite-state form"));
            Ok(json!({"region": {"witness": row(sigma)?, "control": control}, "strategy": row(&p.strategy)?}))
        })
        .collect::<Result<Vec<_>>>()?;
    let v = json!({"controls": formats::schedule_json(&spec.controls), "inner": inner, "pieces": pieces});
    writeln!(out, "{v}")?;
    Ok(0)
}

fn swap(config: &Value, sampling: &Sampling, out: &mut dyn Write) -> Result<i32> {
    let field = |k: &str| {
        config
            .get(k)
            .ok_or_else(|| anyhow!("swap config needs {k:?}"))
    };
    let g = formats::game(field("game")?)?;
    let Some(CompositeGame::Gfxi { controls: old, .. }) = g.composite() else {
        bail!("swap applies to the activation games");
    };
    let tau = formats::composite(
        field("strategy")?
            .get("composite")
            .ok_or_else(|| anyhow!("strategy must be composite"))?,
    )?;
    let new = formats::schedule(field("new")?)?;
    let index_map: Vec<u64> =
        serde_json::from_value(field("index_map")?.clone()).context("index_map")?;
    let sigmas = field("sigmas")?
        .as_array()
        .ok_or_else(|| anyhow!("sigmas must be an array"))?;
    let sigmas = sigmas
        .iter()
        .map(formats::strategy)
        .collect::<Result<Vec<_>>>()?;
    let inner = formats::strategy(field("inner")?)?;
    let mut rng = random::seeded(sampling.seed, 0);
    let xs: Vec<UpStream> = (0..sampling.samples)
        .map(|_| random::up_stream(&mut rng, 4, 6, 4))
        .collect();
    let swapped = control_swap(&tau, old, &new, &index_map, &sigmas, inner.clone(), &xs)?;
    writeln!(
        out,
        "{}",
        formats::composite_json(swapped.explicit(), &new, &*inner)?
    )?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn transfer(
    variant: Variant,
    game: &Doc,
    rho: &Doc,
    against: &Doc,
    anchor: Option<&Doc>,
    (a, b): (&Doc, &Doc),
    depth: u64,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32> {
    let g = formats::game(&game.0)?;
    let inner = match g.composite() {
        Some(CompositeGame::Gfxi { inner, .. }) => inner.clone(),
        _ => make_base_game(BaseKind::W),
    };
    let variant = match variant {
        Variant::Gfxi => TransferVariant::Gfxi,
        Variant::Tilde => TransferVariant::Tilde,
        Variant::Gamma => TransferVariant::Gamma,
    };
    let anchor = anchor.map(|d| formats::stream(&d.0)).transpose()?;
    let sigma = player_one_transfer(variant, &g, formats::strategy_i(&rho.0)?, anchor)?;
    let tau = formats::strategy(&against.0)?;
    let (a, b) = (formats::automaton(&a.0)?, formats::automaton(&b.0)?);
    if let Some(x) = sigma.as_stream() {
        if !json {
            writeln!(out, "I plays {}", formats::stream_json(&x))?;
        }
        return verdict(&adjudicate_up(&inner, &x, &*tau, &a, &b, 0)?, json, out);
    }
    // an adaptive strategy for I has no lasso to judge; show a finite run
    let r = run_vs_to_depth(&inner, &sigma, &*tau, depth);
    let xs: Vec<Digit> = r.transcript.iter().map(|t| t.0).collect();
    let v = json!({"input": xs, "output": r.tentative, "ok": r.status.is_ok()});
    writeln!(out, "{v}")?;
    Ok(0)
}

const NAMES: [&str; 11] = [
    "pairing",
    "lipschitz",
    "base-games",
    "piecewise",
    "swap",
    "transfers",
    "limit",
    "coded-sets",
    "lip-coded",
    "successors",
    "klip-transfers",
];

fn suite(name: &str, seed: u64, max_m: u64, json: bool, out: &mut dyn Write) -> Result<i32> {
    let which: Vec<u8> = if name == "all" {
        suites::CRITERIA.collect()
    } else if let Ok(n) = name.parse::<u8>() {
        vec![n]
    } else if let Some(i) = NAMES.iter().position(|&n| n == name) {
        vec![i as u8 + 1]
    } else if std::path::Path::new(name).exists() {
        return fixture(name, max_m, json, out);
    } else {
        bail!(
            "unknown suite {name:?}; try a number 1 to 11, one of {}, or all",
            NAMES.join(", ")
        );
    };
    if !json {
        writeln!(out, "seed {seed}")?;
    }
    let mut all = true;
    for c in which {
        let r = suites::run(c, seed)?;
        all &= r.pass;
        if json {
            writeln!(
                out,
                "{}",
                json!({"criterion": c, "title": r.title, "pass": r.pass, "lines": r.lines})
            )?;
        } else {
            write!(out, "{}", r.render())?;
        }
    }
    Ok(truth(all))
}

/// `{"game", "strategy", "cases": [{"input", "output"}]}`: every case must
/// evaluate to its recorded output.
fn fixture(path: &str, max_m: u64, json: bool, out: &mut dyn Write) -> Result<i32> {
    let Doc(v) = parse_doc(path).map_err(|e| anyhow!(e))?;
    let g = formats::game(
        v.get("game")
            .ok_or_else(|| anyhow!("fixture needs a game"))?,
    )?;
    let tau = formats::strategy(
        v.get("strategy")
            .ok_or_else(|| anyhow!("fixture needs a strategy"))?,
    )?;
    let cases = v
        .get("cases")
        .and_then(Value::as_array)
        .ok_or_else(|| anyhow!("fixture needs cases"))?;
    let mut failed = Vec::new();
    for (i, c) in cases.iter().enumerate() {
        let x = formats::stream(
            c.get("input")
                .ok_or_else(|| anyhow!("case {i} needs an input"))?,
        )?;
        let want = formats::stream(
            c.get("output")
                .ok_or_else(|| anyhow!("case {i} needs an output"))?,
        )?;
        if eval_exact(&g, &*tau, &x, max_m.max(32))? != want {
            failed.push(i);
        }
    }
    let pass = failed.is_empty();
    let path = std::path::Path::new(path)
        .file_name()
        .map_or(path.into(), |f| f.to_string_lossy());
    if json {
        writeln!(
            out,
            "{}",
            json!({"fixture": path, "cases": cases.len(), "failed": failed, "pass": pass})
        )?;
    } else {
        writeln!(
            out,
            "fixture {path}: {}/{} cases",
            cases.len() - failed.len(),
            cases.len()
        )?;
        for i in &failed {
            writeln!(out, "  case {i} failed")?;
        }
    }
    Ok(truth(pass))
}

fn verdict_name(v: PrefixVerdict) -> &'static str {
    match v {
        PrefixVerdict::Accepted => "in",
        PrefixVerdict::Rejected => "out",
        PrefixVerdict::Unknown => "open",
    }
}

fn play(
    g: &GameSpec,
    tau: &dyn Strategy,
    depth: u64,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
) -> Result<i32> {
    let mut two = tau.start();
    let mut tracker = g.tracker();
    let mut xs: Vec<Digit> = Vec::new();
    let mut lines = input.lines();
    while (xs.len() as u64) < depth {
        let Some(line) = lines.next() else {
            writeln!(out, "input ended after {} turns", xs.len())?;
            break;
        };
        let line = line?;
        let Ok(d) = line.trim().parse::<Digit>() else {
            writeln!(
                out,
                "not a digit: {:?}; enter a natural number",
                line.trim()
            )?;
            continue;
        };
        let t = xs.len();
        xs.push(d);
        let m = two.respond(d);
        tracker.step(d, &m);
        let status = match tracker.status() {
            Status::Ok => "ok".to_owned(),
            Status::Violated { turn, reason } => format!("violated at turn {turn}: {reason}"),
        };
        let mut board = format!(
            "turn {t}: I {d}, II {m} | output {:?} committed {} | {status} | domain {}",
            tracker.tentative(),
            tracker.committed_len(),
            verdict_name(g.domain.prefix_verdict(&xs)),
        );
        let rows = tracker.row_verdicts();
        if !rows.is_empty() {
            let shown: Vec<String> = rows
                .iter()
                .map(|(n, v)| format!("{n}:{}", verdict_name(*v)))
                .collect();
            board.push_str(&format!(" | rows {}", shown.join(" ")));
        }
        writeln!(out, "{board}")?;
        if let Status::Violated { reason, .. } = tracker.status() {
            writeln!(out, "game over: {reason}")?;
            return Ok(1);
        }
    }
    Ok(0)
}
