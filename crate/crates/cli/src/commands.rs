use std::fs;
use std::io::{BufRead, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use honeybee::duel::{strategy_move, transcript_jsonl, Game, MoveRecord, Player, Policy, VerdictReason};
use honeybee::hexboard::{hex_to_graph, random_duel_board};
use honeybee::reductions::{
    gen_fvs_split, gen_mscs_tree, gen_qbf, gen_scs_sp, scs_to_mscs, BinarySequences, Digraph, QbfFormula,
    ReductionArtifact, TernarySequences,
};
use honeybee::solitaire::{order::load_order, solve, SolveError};
use honeybee::{load_instance, write_instance, Instance, Method};
use serde_json::json;
use thiserror::Error;

use crate::service::{self, ServiceConfig};
use crate::source::{load_game_source, GameSource};

/// Environment variable that overrides `serve --port`.
pub const PORT_ENV: &str = "HONEYBEE_PORT";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 1,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Domain(_) => "domain",
        }
    }
}

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "honeybee", version, about = "Honey-Bee color-conquest engine, solvers and generators")]
pub struct Cli {
    /// Machine-readable output; errors become one JSON line on stderr.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Shortest conquering call sequence from one start node.
    Solve(SolveArgs),
    /// Play against a policy in the terminal, one color per line.
    Play(PlayArgs),
    /// Compile a source problem into a game instance.
    Gen(GenArgs),
    /// Pit two policies against each other over seeded games.
    Simulate(SimulateArgs),
    /// Run the HTTP game service.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    /// Start node name; defaults to the instance's `start` (or `start_a`).
    #[arg(long)]
    pub start: Option<String>,
    #[arg(long, default_value = "exact")]
    pub method: Method,
    /// Partial order file for `cocomp`; searched for when omitted.
    #[arg(long, value_name = "FILE")]
    pub order: Option<PathBuf>,
    #[arg(long, default_value_t = 2_000_000)]
    pub budget: usize,
}

#[derive(Debug, Args)]
pub struct BoardArgs {
    /// Instance or hex board file; a random board is generated otherwise.
    #[arg(long = "in", value_name = "FILE")]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 5)]
    pub rows: usize,
    #[arg(long, default_value_t = 5)]
    pub cols: usize,
    #[arg(long, default_value_t = 4)]
    pub k: u32,
    #[arg(long, default_value_t = 0.0)]
    pub holes: f64,
    #[arg(long)]
    pub symmetric: bool,
}

#[derive(Debug, Args)]
pub struct PlayArgs {
    #[command(flatten)]
    pub board: BoardArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Side the human plays.
    #[arg(long, default_value = "A")]
    pub human: Player,
    /// Policy of the computer opponent.
    #[arg(long, default_value = "greedy")]
    pub policy: Policy,
    /// Write the transcript as JSON lines.
    #[arg(long, value_name = "FILE")]
    pub transcript: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    /// Feedback vertex set to a split graph.
    Fvs,
    /// Binary supersequence instance through the symbol map to a spider.
    ScsTree,
    /// Ternary supersequence instance to a spider.
    MscsTree,
    /// Binary supersequence instance to a series-parallel two-player game.
    ScsSp,
    /// Quantified formula to a two-player game.
    Qbf,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    pub kind: GenKind,
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    /// Emit honey pots as unit-weight paths or cliques instead of single heavy nodes.
    #[arg(long)]
    pub expand_pots: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub board: BoardArgs,
    #[arg(long = "policyA", default_value = "greedy")]
    pub policy_a: Policy,
    #[arg(long = "policyB", default_value = "greedy")]
    pub policy_b: Policy,
    #[arg(long, default_value_t = 10)]
    pub games: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    /// Listening port; the HONEYBEE_PORT environment variable takes precedence.
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    /// Directory with the web client bundle.
    #[arg(long = "static", value_name = "DIR")]
    pub static_dir: Option<PathBuf>,
    /// Largest instance (in nodes) the service accepts.
    #[arg(long, default_value_t = service::DEFAULT_NODE_CAP)]
    pub node_cap: usize,
    /// Append each session's transcript to DIR/<id>.jsonl.
    #[arg(long, value_name = "DIR")]
    pub transcripts: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Domain(format!("cannot read {}: {e}", path.display())))
}

/// Runs one command. Human input for `play` comes from `input`.
pub fn run(cli: Cli, input: &mut dyn BufRead, out: &mut dyn Write) -> Result<(), CliError> {
    let json = cli.json;
    match cli.command {
        Command::Solve(a) => cmd_solve(a, json, out),
        Command::Play(a) => cmd_play(a, json, input, out),
        Command::Gen(a) => cmd_gen(a, json, out),
        Command::Simulate(a) => cmd_simulate(a, json, out),
        Command::Serve(a) => cmd_serve(a),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    writeln!(out, "{text}").map_err(domain)
}

fn cmd_solve(a: SolveArgs, json: bool, out: &mut dyn Write) -> Result<(), CliError> {
    let inst = load_instance(&read(&a.input)?).map_err(domain)?;
    let g = &inst.graph;
    let start = match &a.start {
        Some(name) => g.id(name).ok_or_else(|| CliError::Domain(format!("unknown start node {name:?}")))?,
        None => inst
            .start
            .or(inst.start_a)
            .ok_or_else(|| CliError::Usage("the instance declares no start; pass --start".into()))?,
    };
    let order = match &a.order {
        Some(p) => Some(load_order(&read(p)?, g).map_err(domain)?),
        None => None,
    };
    let r = solve(g, start, a.method, order.as_ref(), inst.clique.as_deref(), a.budget).map_err(|e| match e {
        SolveError::BudgetExceeded { ref incumbent, .. } if !incumbent.is_empty() => {
            CliError::Domain(format!("{e}; incumbent {incumbent:?}"))
        }
        e => domain(e),
    })?;
    if json {
        emit(out, &r.to_json())
    } else {
        let calls: Vec<String> = r.sequence.iter().map(u32::to_string).collect();
        emit(
            out,
            &format!(
                "{} from {}: length {} (essential {})\ncalls: {}",
                r.method.as_str(),
                g.name(start),
                r.length,
                r.essential_length,
                calls.join(" ")
            ),
        )
    }
}

fn game_source(b: &BoardArgs, seed: u64) -> Result<GameSource, CliError> {
    match &b.input {
        Some(p) => load_game_source(&read(p)?).map_err(domain),
        None => {
            let board = random_duel_board(b.rows, b.cols, b.k, seed, b.symmetric, b.holes).map_err(domain)?;
            Ok(GameSource {
                instance: hex_to_graph(&board),
                board: Some(board),
            })
        }
    }
}

fn game_of(inst: &Instance) -> Result<Game, CliError> {
    let (Some(a0), Some(b0)) = (inst.start_a, inst.start_b) else {
        return Err(CliError::Domain("the instance needs start_a and start_b".into()));
    };
    Game::new(inst.graph.clone(), a0, b0).map_err(domain)
}

fn cmd_play(a: PlayArgs, json: bool, input: &mut dyn BufRead, out: &mut dyn Write) -> Result<(), CliError> {
    let src = game_source(&a.board, a.seed)?;
    let game = game_of(&src.instance)?;
    let g = &game.graph;
    let mut s = game.initial();
    let mut moves: Vec<MoveRecord> = Vec::new();
    let verdict = loop {
        if let Some(v) = game.winner(&s) {
            break v;
        }
        let legal = game.legal_colors(&s).map_err(domain)?;
        let color = if s.to_move == a.human {
            if !json {
                emit(
                    out,
                    &format!(
                        "round {}: A {} / B {}; your colors {:?}",
                        s.round,
                        g.set_weight(&s.w_a),
                        g.set_weight(&s.w_b),
                        legal
                    ),
                )?;
            }
            let mut line = String::new();
            if input.read_line(&mut line).map_err(domain)? == 0 {
                return Err(CliError::Domain("input ended before the game finished".into()));
            }
            let Ok(c) = line.trim().parse::<u32>() else {
                emit(out, &format!("not a color: {:?}", line.trim()))?;
                continue;
            };
            if let Err(e) = game.check_move(&s, c) {
                emit(out, &e.to_string())?;
                continue;
            }
            c
        } else {
            let (c, notice) = strategy_move(&game, &s, &a.policy, a.seed.wrapping_add(moves.len() as u64)).map_err(domain)?;
            if let (Some(n), false) = (notice, json) {
                emit(out, &n)?;
            }
            c
        };
        let (next, gained) = game.apply_move(&s, color).map_err(domain)?;
        let rec = MoveRecord {
            round: s.round,
            player: s.to_move,
            color,
            gained,
        };
        if !json {
            emit(out, &format!("{} calls {} (+{})", rec.player, rec.color, rec.gained))?;
        }
        moves.push(rec);
        s = next;
    };
    if let Some(p) = &a.transcript {
        fs::write(p, transcript_jsonl(&moves)).map_err(domain)?;
    }
    if json {
        emit(out, &json!({"moves": moves, "winner": verdict.winner, "reason": verdict.reason, "weight_a": verdict.weight_a, "weight_b": verdict.weight_b}).to_string())
    } else {
        emit(
            out,
            &format!("{} wins {} to {} ({:?})", verdict.winner, verdict.weight_a.max(verdict.weight_b), verdict.weight_a.min(verdict.weight_b), verdict.reason),
        )
    }
}

fn generate(kind: GenKind, text: &str, expand: bool) -> Result<ReductionArtifact, CliError> {
    Ok(match kind {
        GenKind::Fvs => gen_fvs_split(&Digraph::from_json(text).map_err(domain)?),
        GenKind::ScsTree => gen_mscs_tree(&scs_to_mscs(&BinarySequences::from_json(text).map_err(domain)?)),
        GenKind::MscsTree => gen_mscs_tree(&TernarySequences::from_json(text).map_err(domain)?),
        GenKind::ScsSp => gen_scs_sp(&BinarySequences::from_json(text).map_err(domain)?, expand),
        GenKind::Qbf => gen_qbf(&QbfFormula::from_json(text).map_err(domain)?, expand),
    })
}

fn cmd_gen(a: GenArgs, json: bool, out: &mut dyn Write) -> Result<(), CliError> {
    let art = generate(a.kind, &read(&a.input)?, a.expand_pots)?;
    fs::create_dir_all(&a.out).map_err(domain)?;
    fs::write(a.out.join("instance.json"), write_instance(&art.instance)).map_err(domain)?;
    fs::write(a.out.join("provenance.json"), art.provenance_json()).map_err(domain)?;
    let g = &art.instance.graph;
    if json {
        emit(out, &json!({"nodes": g.len(), "edges": g.edge_count(), "total_weight": g.total_weight(), "bound": art.bound, "out": a.out}).to_string())
    } else {
        let bound = art.bound.map(|b| format!(", bound {b}")).unwrap_or_default();
        emit(
            out,
            &format!("{} nodes, {} edges, total weight {}{bound} -> {}", g.len(), g.edge_count(), g.total_weight(), a.out.display()),
        )
    }
}

fn cmd_simulate(a: SimulateArgs, json: bool, out: &mut dyn Write) -> Result<(), CliError> {
    if a.games == 0 {
        return Err(CliError::Usage("--games must be positive".into()));
    }
    let fixed = match &a.board.input {
        Some(_) => Some(game_of(&game_source(&a.board, a.seed)?.instance)?),
        None => None,
    };
    let (mut a_wins, mut adjudicated, mut total_moves) = (0u64, 0u64, 0usize);
    for i in 0..a.games {
        let seed = a.seed.wrapping_add(i);
        let game = match &fixed {
            Some(g) => g.clone(),
            None => game_of(&game_source(&a.board, seed)?.instance)?,
        };
        let (moves, v) = game.play_out([&a.policy_a, &a.policy_b], seed);
        a_wins += u64::from(v.winner == Player::A);
        adjudicated += u64::from(v.reason == VerdictReason::StallAdjudication);
        total_moves += moves.len();
    }
    let mean = total_moves as f64 / a.games as f64;
    if json {
        emit(
            out,
            &json!({
                "games": a.games,
                "policy_a": a.policy_a,
                "policy_b": a.policy_b,
                "a_wins": a_wins,
                "b_wins": a.games - a_wins,
                "adjudicated": adjudicated,
                "mean_moves": mean,
            })
            .to_string(),
        )
    } else {
        emit(
            out,
            &format!(
                "{} (A) vs {} (B): A {a_wins}, B {} of {} games; {adjudicated} adjudicated; {mean:.2} moves per game",
                a.policy_a.as_str(),
                a.policy_b.as_str(),
                a.games - a_wins,
                a.games
            ),
        )
    }
}

fn cmd_serve(a: ServeArgs) -> Result<(), CliError> {
    let port = match std::env::var(PORT_ENV) {
        Ok(v) => v.parse::<u16>().map_err(|_| CliError::Usage(format!("{PORT_ENV}={v:?} is not a port")))?,
        Err(_) => a.port,
    };
    let config = ServiceConfig {
        node_cap: a.node_cap,
        transcripts: a.transcripts,
        ..ServiceConfig::default()
    };
    let addr = SocketAddr::from(([0, 0, 0, 0], port));
    let rt = tokio::runtime::Runtime::new().map_err(domain)?;
    rt.block_on(service::serve(addr, config, a.static_dir)).map_err(domain)
}
