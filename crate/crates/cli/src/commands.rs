//! Subcommands. Each returns its exit status and output instead of printing,
//! so the binary stays a thin wrapper.
//!
//! Exit statuses: 0 ok, 1 internal invariant violated, 2 bad input,
//! 3 the pair is not apart.

use std::fmt::Write;
use std::path::PathBuf;

use apart_core::invariants::{self, Analysis};
use apart_core::random::{LtsGenerator, RandomLtsParams};
use apart_core::{
    apartness, bisimulation_witness, build_game, build_proof, check_proof, fixtures, parse_aut_with, solve, write_aut,
    AutOptions, GameKind, Lts, Player, ProofDocument, StateId,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::render;

pub const EXIT_OK: i32 = 0;
pub const EXIT_BUG: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NOT_APART: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "apart", version, about = "Bisimulation games and apartness proofs for labelled transition systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute apartness and bisimilarity and cross-check them against the game.
    Check(CheckArgs),
    /// Solve the game and print winners and ranks.
    Solve(PairArgs),
    /// Print a minimal apartness proof, or a bisimulation if there is none.
    Prove(ProveArgs),
    /// Print the game graph.
    Game(PairArgs),
    /// Serve interactive game sessions over HTTP.
    Serve(ServeArgs),
    /// Check all invariants on random transition systems.
    Selftest(SelftestArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    #[default]
    Strong,
    Branching,
}

impl From<KindArg> for GameKind {
    fn from(k: KindArg) -> GameKind {
        match k {
            KindArg::Strong => GameKind::Strong,
            KindArg::Branching => GameKind::Branching,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Dot,
    Json,
}

#[derive(Debug, Args)]
pub struct LtsArgs {
    /// An .aut file, or fixture:fig1 / fixture:fig2.
    pub lts: String,
    #[arg(long, value_enum, default_value_t)]
    pub kind: KindArg,
    /// Label to treat as the silent action (default: tau or i).
    #[arg(long)]
    pub tau: Option<String>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub lts: LtsArgs,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[command(flatten)]
    pub lts: LtsArgs,
    /// Start pair; all pairs when omitted.
    #[arg(num_args = 2, value_names = ["X", "Y"])]
    pub pair: Vec<String>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ProveArgs {
    #[command(flatten)]
    pub lts: LtsArgs,
    pub x: String,
    pub y: String,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    /// Seconds an idle session is kept.
    #[arg(long, default_value_t = 3600)]
    pub ttl: u64,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 500)]
    pub count: usize,
    #[arg(long, default_value_t = 7)]
    pub max_states: usize,
    #[arg(long, default_value_t = 3)]
    pub max_labels: usize,
    #[arg(long, default_value_t = 0.0)]
    pub tau_prob: f64,
    #[arg(long, default_value_t = 0.25)]
    pub density: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t)]
    pub kind: KindArg,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CmdOutput {
    pub exit: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CmdOutput {
    fn ok(stdout: String) -> Self {
        CmdOutput { exit: EXIT_OK, stdout, stderr: String::new() }
    }

    fn input_error(msg: impl std::fmt::Display) -> Self {
        CmdOutput { exit: EXIT_INPUT, stdout: String::new(), stderr: format!("error: {msg}\n") }
    }
}

/// Runs any subcommand except `serve`.
pub fn run(command: &Command) -> CmdOutput {
    match command {
        Command::Check(a) => cmd_check(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Prove(a) => cmd_prove(a),
        Command::Game(a) => cmd_game(a),
        Command::Selftest(a) => cmd_selftest(a),
        Command::Serve(_) => CmdOutput::input_error("serve is handled by the binary"),
    }
}

/// Reads an LTS from a path or a `fixture:` name.
pub fn load_lts(source: &str, tau: Option<&str>) -> Result<Lts, String> {
    if let Some(name) = source.strip_prefix("fixture:") {
        return fixtures::by_name(name).ok_or_else(|| format!("unknown fixture {name:?} (known: fig1, fig2)"));
    }
    let text = std::fs::read_to_string(PathBuf::from(source)).map_err(|e| format!("{source}: {e}"))?;
    let options = tau.map(AutOptions::with_tau).unwrap_or_default();
    parse_aut_with(&text, &options).map_err(|e| format!("{source}: {e}"))
}

fn load(args: &LtsArgs) -> Result<Lts, CmdOutput> {
    load_lts(&args.lts, args.tau.as_deref()).map_err(CmdOutput::input_error)
}

fn resolve_pair(lts: &Lts, x: &str, y: &str) -> Result<(StateId, StateId), CmdOutput> {
    let x = lts.resolve_state(x).map_err(CmdOutput::input_error)?;
    let y = lts.resolve_state(y).map_err(CmdOutput::input_error)?;
    Ok((x, y))
}

/// Properties `check` confirms; the full list is run by `selftest`.
const CHECKED: &[&str] = &[
    "relation.apartness_shape",
    "relation.duality",
    "relation.game_agreement",
    "solver.determinacy",
    "relation.level_rank",
];

pub fn cmd_check(args: &CheckArgs) -> CmdOutput {
    let lts = match load(&args.lts) {
        Ok(l) => l,
        Err(e) => return e,
    };
    let kind = GameKind::from(args.lts.kind);
    let a = Analysis::new(&lts, kind);
    let mut out = String::new();
    writeln!(out, "{}", lts.validate()).unwrap();
    writeln!(out, "kind: {kind}").unwrap();

    writeln!(out, "apart pairs:").unwrap();
    let mut apart: Vec<_> = a.apartness.pairs().filter(|(x, y)| x < y).collect();
    apart.sort_by_key(|&(x, y)| (a.apartness.level(x, y), x, y));
    for (x, y) in &apart {
        let level = a.apartness.level(*x, *y).unwrap();
        writeln!(out, "  {} # {}  level {level}", lts.state_name(*x), lts.state_name(*y)).unwrap();
    }
    if apart.is_empty() {
        writeln!(out, "  (none)").unwrap();
    }
    writeln!(out, "bisimilarity classes:").unwrap();
    for class in a.bisimilarity.classes() {
        let names: Vec<&str> = class.iter().map(|&s| lts.state_name(s)).collect();
        writeln!(out, "  {{{}}}", names.join(", ")).unwrap();
    }
    writeln!(out, "game: {} configurations, {} moves", a.game.len(), a.game.num_moves()).unwrap();

    let mut exit = EXIT_OK;
    for (name, check) in invariants::PROPERTIES.iter().filter(|(n, _)| CHECKED.contains(n)) {
        match check(&a) {
            Ok(()) => writeln!(out, "{name}: ok").unwrap(),
            Err(e) => {
                writeln!(out, "{name}: FAILED: {e}").unwrap();
                exit = EXIT_BUG;
            }
        }
    }
    CmdOutput { exit, stdout: out, stderr: String::new() }
}

pub fn cmd_prove(args: &ProveArgs) -> CmdOutput {
    let lts = match load(&args.lts) {
        Ok(l) => l,
        Err(e) => return e,
    };
    let (x, y) = match resolve_pair(&lts, &args.x, &args.y) {
        Ok(p) => p,
        Err(e) => return e,
    };
    let kind = GameKind::from(args.lts.kind);
    if apartness(&lts, kind).contains(x, y) {
        let proof = match build_proof(&lts, kind, x, y) {
            Ok(p) => p,
            Err(e) => return bug(format!("no proof built: {e}")),
        };
        let check = check_proof(&lts, kind, &proof);
        if !check.valid {
            return bug(format!("built proof rejected: {:?}", check.failures));
        }
        let stdout = match args.format {
            Format::Text => render::proof_text(&lts, &proof),
            Format::Dot => render::proof_dot(&lts, &proof),
            Format::Json => ProofDocument::new(&lts, kind, &proof).to_json() + "\n",
        };
        return CmdOutput::ok(stdout);
    }

    let game = match build_game(&lts, kind, &[(x, y)]) {
        Ok(g) => g,
        Err(e) => return bug(e.to_string()),
    };
    let sol = solve(&game);
    let witness = match bisimulation_witness(&game, &sol, game.roots()[0], lts.num_states()) {
        Ok(r) => r,
        Err(e) => return bug(e.to_string()),
    };
    let pairs: Vec<[&str; 2]> = witness.pairs().map(|(a, b)| [lts.state_name(a), lts.state_name(b)]).collect();
    let stdout = match args.format {
        Format::Json => {
            let doc = json!({ "apart": false, "kind": kind, "pair": [&args.x, &args.y], "bisimulation": pairs });
            serde_json::to_string_pretty(&doc).unwrap() + "\n"
        }
        Format::Text | Format::Dot => {
            let mut s = format!(
                "{} and {} are not {kind} apart; a {kind} bisimulation relating them:\n",
                lts.state_name(x),
                lts.state_name(y)
            );
            for [a, b] in &pairs {
                writeln!(s, "  ({a}, {b})").unwrap();
            }
            s
        }
    };
    CmdOutput { exit: EXIT_NOT_APART, stdout, stderr: String::new() }
}

fn bug(msg: String) -> CmdOutput {
    CmdOutput { exit: EXIT_BUG, stdout: String::new(), stderr: format!("internal error: {msg}\n") }
}

fn roots(lts: &Lts, pair: &[String]) -> Result<Vec<(StateId, StateId)>, CmdOutput> {
    match pair {
        [x, y] => Ok(vec![resolve_pair(lts, x, y)?]),
        _ => Ok(apart_core::all_pairs(lts)),
    }
}

pub fn cmd_solve(args: &PairArgs) -> CmdOutput {
    let lts = match load(&args.lts) {
        Ok(l) => l,
        Err(e) => return e,
    };
    let roots = match roots(&lts, &args.pair) {
        Ok(r) => r,
        Err(e) => return e,
    };
    let game = build_game(&lts, args.lts.kind.into(), &roots).expect("roots are resolved states");
    let sol = solve(&game);

    if args.format == Format::Json {
        let configs: Vec<_> = game
            .ids()
            .map(|c| {
                let winner = sol.winner(c);
                json!({
                    "id": c.0,
                    "config": game.config(c).describe(&lts),
                    "owner": game.owner(c),
                    "winner": winner,
                    "rank": sol.rank(c),
                    "strategy": sol.strategy(winner).get(c).map(|t| t.0),
                })
            })
            .collect();
        let doc = json!({ "kind": game.kind(), "roots": game.roots(), "configs": configs });
        return CmdOutput::ok(serde_json::to_string_pretty(&doc).unwrap() + "\n");
    }

    let mut out = String::new();
    for &root in game.roots() {
        let desc = game.config(root).describe(&lts);
        match sol.rank(root) {
            Some(r) => writeln!(out, "{desc}: Spoiler wins within {r} round(s)").unwrap(),
            None => writeln!(out, "{desc}: Duplicator wins").unwrap(),
        }
    }
    if let [root] = game.roots() {
        let winner = sol.winner(*root);
        writeln!(out, "{winner} strategy:").unwrap();
        for c in game.reachable_from(*root) {
            if let Some(t) = sol.strategy(winner).get(c) {
                writeln!(out, "  {} -> {}", game.config(c).describe(&lts), game.config(t).describe(&lts)).unwrap();
            }
        }
    }
    CmdOutput::ok(out)
}

pub fn cmd_game(args: &PairArgs) -> CmdOutput {
    let lts = match load(&args.lts) {
        Ok(l) => l,
        Err(e) => return e,
    };
    let roots = match roots(&lts, &args.pair) {
        Ok(r) => r,
        Err(e) => return e,
    };
    let game = build_game(&lts, args.lts.kind.into(), &roots).expect("roots are resolved states");
    let stdout = match args.format {
        Format::Dot => render::game_dot(&lts, &game),
        Format::Json => {
            let configs: Vec<_> = game
                .ids()
                .map(|c| {
                    let moves: Vec<_> =
                        game.moves(c).iter().map(|m| json!({ "kind": m.kind, "target": m.target.0 })).collect();
                    json!({ "id": c.0, "config": game.config(c).describe(&lts), "owner": game.owner(c), "moves": moves })
                })
                .collect();
            serde_json::to_string_pretty(&json!({ "kind": game.kind(), "configs": configs })).unwrap() + "\n"
        }
        Format::Text => {
            let mut s = String::new();
            for c in game.ids() {
                let mark = if game.owner(c) == Player::Spoiler { 'S' } else { 'D' };
                writeln!(s, "c{} {mark} {}", c.0, game.config(c).describe(&lts)).unwrap();
                for m in game.moves(c) {
                    writeln!(s, "    -{}-> c{} {}", m.kind.tag(), m.target.0, game.config(m.target).describe(&lts))
                        .unwrap();
                }
            }
            s
        }
    };
    CmdOutput::ok(stdout)
}

pub fn cmd_selftest(args: &SelftestArgs) -> CmdOutput {
    if args.max_states == 0 || args.max_labels == 0 || !(0.0..=1.0).contains(&args.tau_prob) {
        return CmdOutput::input_error("need max-states >= 1, max-labels >= 1 and 0 <= tau-prob <= 1");
    }
    let kind = GameKind::from(args.kind);
    let params = RandomLtsParams {
        max_states: args.max_states,
        max_labels: args.max_labels,
        tau_probability: args.tau_prob,
        density: args.density,
    };
    let mut passes = vec![0usize; invariants::PROPERTIES.len()];
    for (i, lts) in LtsGenerator::new(params, args.seed).take(args.count).enumerate() {
        let a = Analysis::new(&lts, kind);
        for (p, (name, check)) in invariants::PROPERTIES.iter().enumerate() {
            if let Err(detail) = check(&a) {
                let mut out = report(&passes);
                writeln!(out, "counterexample #{i} for {name}: {detail}").unwrap();
                out.push_str(&write_aut(&lts));
                return CmdOutput { exit: EXIT_BUG, stdout: out, stderr: String::new() };
            }
            passes[p] += 1;
        }
    }
    let mut out = report(&passes);
    writeln!(out, "{} {kind} instances, all properties hold", args.count).unwrap();
    CmdOutput::ok(out)
}

fn report(passes: &[usize]) -> String {
    let mut out = String::new();
    for ((name, _), n) in invariants::PROPERTIES.iter().zip(passes) {
        writeln!(out, "{name:<32} {n} passed").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> CmdOutput {
        let cli = Cli::try_parse_from(std::iter::once("apart").chain(args.iter().copied())).unwrap();
        run(&cli.command)
    }

    #[test]
    fn check_fig1_reports_level_two() {
        let out = run_args(&["check", "fixture:fig1"]);
        assert_eq!(out.exit, 0, "{}", out.stdout);
        assert!(out.stdout.contains("x0 # y0  level 2"), "{}", out.stdout);
        assert!(out.stdout.contains("relation.duality: ok"));
    }

    #[test]
    fn check_fig2_branching() {
        let out = run_args(&["check", "fixture:fig2", "--kind", "branching"]);
        assert_eq!(out.exit, 0, "{}", out.stdout);
        assert!(out.stdout.contains("x0 # y0  level 2"), "{}", out.stdout);
    }

    #[test]
    fn prove_bisimilar_pair_exits_3() {
        let out = run_args(&["prove", "fixture:fig1", "x3", "y2"]);
        assert_eq!(out.exit, EXIT_NOT_APART);
        assert!(out.stdout.contains("(x3, y2)"), "{}", out.stdout);
    }

    #[test]
    fn prove_unknown_state_is_input_error() {
        let out = run_args(&["prove", "fixture:fig1", "x0", "nope"]);
        assert_eq!(out.exit, EXIT_INPUT);
        assert!(out.stderr.contains("nope"));
    }

    #[test]
    fn unknown_fixture_is_input_error() {
        assert_eq!(run_args(&["check", "fixture:fig9"]).exit, EXIT_INPUT);
    }

    #[test]
    fn selftest_zero_count_is_vacuous() {
        let out = run_args(&["selftest", "--count", "0"]);
        assert_eq!(out.exit, 0);
    }

    #[test]
    fn solve_pair_prints_rank() {
        let out = run_args(&["solve", "fixture:fig1", "x0", "y0"]);
        assert!(out.stdout.starts_with("[x0, y0]: Spoiler wins within 2 round(s)"), "{}", out.stdout);
    }
}
