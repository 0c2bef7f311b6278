//! HTTP/JSON game service.
//!
//! | route | body | reply |
//! |---|---|---|
//! | `POST /games` | `board`, `random_board` or `instance`; `human`, `policy`, `seed` | 201, session |
//! | `GET /games/{id}` | | session |
//! | `POST /games/{id}/moves` | `{"color": c}` | the human move, the reply, the session |
//! | `POST /solve` | `instance`, `start`, `method`, `order`, `budget` | solve result |
//! | `GET /healthz` | | `{"status": "ok"}` |
//!
//! Errors are `{"code", "message"}`. Illegal calls answer 409 with the
//! violated rule leading the message.

use std::collections::HashMap;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, RwLock};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use honeybee::duel::{strategy_move, Game, GameState, MoveRecord, Player, Policy, RuleError, Verdict, VerdictReason};
use honeybee::graph::{Color, Weight};
use honeybee::hexboard::{hex_to_graph, random_duel_board, HexBoard};
use honeybee::solitaire::{order::load_order, solve, SolveError, SolveResult};
use honeybee::{load_instance, write_instance, Instance, Method, NodeSet};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tokio::sync::{Mutex, Semaphore};

pub const DEFAULT_NODE_CAP: usize = 2_000;

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub node_cap: usize,
    /// Per-session JSONL transcripts are appended here when set.
    pub transcripts: Option<PathBuf>,
    /// Concurrent `/solve` computations.
    pub solve_workers: usize,
    /// Upper limit on the state budget a `/solve` request may ask for.
    pub max_budget: usize,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            node_cap: DEFAULT_NODE_CAP,
            transcripts: None,
            solve_workers: std::thread::available_parallelism().map_or(2, |n| n.get()),
            max_budget: 2_000_000,
        }
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    code: &'static str,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            code,
            message: message.into(),
        }
    }

    fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "bad_request", message)
    }

    fn unprocessable(message: impl Into<String>) -> Self {
        Self::new(StatusCode::UNPROCESSABLE_ENTITY, "invalid_instance", message)
    }

    fn internal(message: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({"code": self.code, "message": self.message}))).into_response()
    }
}

impl From<RuleError> for ApiError {
    fn from(e: RuleError) -> Self {
        match e {
            RuleError::GameOver => ApiError::new(StatusCode::CONFLICT, "game_over", e.to_string()),
            RuleError::ColorOutOfRange { .. } => ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "invalid_color", e.to_string()),
            _ => ApiError::new(StatusCode::CONFLICT, "rule_violation", e.to_string()),
        }
    }
}

type ApiResult<T> = Result<T, ApiError>;

fn parse<T: DeserializeOwned>(body: &[u8]) -> ApiResult<T> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(e.to_string()))
}

struct Session {
    id: String,
    game: Arc<Game>,
    instance: Value,
    board: Option<HexBoard>,
    human: Player,
    policy: Policy,
    seed: u64,
    transcript: Vec<MoveRecord>,
    state: GameState,
    verdict: Option<Verdict>,
}

struct Inner {
    config: ServiceConfig,
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
    solve_slots: Semaphore,
}

#[derive(Clone)]
pub struct AppState(Arc<Inner>);

impl AppState {
    pub fn new(config: ServiceConfig) -> Self {
        let workers = config.solve_workers.max(1);
        AppState(Arc::new(Inner {
            config,
            sessions: RwLock::new(HashMap::new()),
            solve_slots: Semaphore::new(workers),
        }))
    }

    fn session(&self, id: &str) -> ApiResult<Arc<Mutex<Session>>> {
        self.0
            .sessions
            .read()
            .expect("session map lock")
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, "not_found", format!("no game with id {id:?}")))
    }

    fn too_large(&self, nodes: usize) -> ApiResult<()> {
        let cap = self.0.config.node_cap;
        if nodes > cap {
            return Err(ApiError::new(
                StatusCode::PAYLOAD_TOO_LARGE,
                "too_large",
                format!("{nodes} nodes exceed the service cap of {cap}"),
            ));
        }
        Ok(())
    }

    fn persist(&self, id: &str, line: &str, suffix: &str) -> ApiResult<()> {
        let Some(dir) = &self.0.config.transcripts else {
            return Ok(());
        };
        let io = |e: std::io::Error| ApiError::internal(format!("transcript write failed: {e}"));
        fs::create_dir_all(dir).map_err(io)?;
        let mut f = OpenOptions::new().create(true).append(true).open(dir.join(format!("{id}.{suffix}"))).map_err(io)?;
        writeln!(f, "{line}").map_err(io)
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/healthz", get(healthz))
        .route("/games", post(create_game))
        .route("/games/{id}", get(get_game))
        .route("/games/{id}/moves", post(post_move))
        .route("/solve", post(post_solve))
        .with_state(state)
}

/// The API plus, when given, the web client served from `static_dir`.
pub fn app(config: ServiceConfig, static_dir: Option<PathBuf>) -> Router {
    let r = router(AppState::new(config));
    match static_dir {
        Some(dir) => r.fallback_service(tower_http::services::ServeDir::new(dir)),
        None => r,
    }
}

pub async fn serve(addr: SocketAddr, config: ServiceConfig, static_dir: Option<PathBuf>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, app(config, static_dir)).await
}

async fn healthz(State(app): State<AppState>) -> Json<Value> {
    let n = app.0.sessions.read().expect("session map lock").len();
    Json(json!({"status": "ok", "sessions": n}))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoardParams {
    rows: usize,
    cols: usize,
    k: u32,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    symmetric: bool,
    #[serde(default)]
    holes: f64,
}

fn default_human() -> Player {
    Player::A
}

fn default_policy() -> Policy {
    Policy::Greedy
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CreateGame {
    #[serde(default)]
    board: Option<HexBoard>,
    #[serde(default)]
    random_board: Option<BoardParams>,
    #[serde(default)]
    instance: Option<Value>,
    #[serde(default = "default_human")]
    human: Player,
    #[serde(default = "default_policy")]
    policy: Policy,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    stall_cap: Option<usize>,
}

#[derive(Serialize)]
struct StateView {
    territory_a: Vec<String>,
    territory_b: Vec<String>,
    last_a: Option<Color>,
    last_b: Option<Color>,
    to_move: Player,
    round: usize,
    stall: usize,
}

#[derive(Serialize)]
struct VerdictView {
    winner: Player,
    reason: VerdictReason,
    weight_a: Weight,
    weight_b: Weight,
}

#[derive(Serialize)]
struct SessionView<'a> {
    id: &'a str,
    instance: &'a Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    board: Option<&'a HexBoard>,
    human: Player,
    policy: Policy,
    seed: u64,
    transcript: &'a [MoveRecord],
    state: StateView,
    legal_colors: Vec<Color>,
    scores: Value,
    status: &'static str,
    verdict: Option<VerdictView>,
}

impl Session {
    fn names(&self, set: &NodeSet) -> Vec<String> {
        let g = &self.game.graph;
        let mut v: Vec<String> = set.iter().map(|i| g.name(i).to_string()).collect();
        v.sort();
        v
    }

    fn view(&self) -> SessionView<'_> {
        let s = &self.state;
        let g = &self.game.graph;
        SessionView {
            id: &self.id,
            instance: &self.instance,
            board: self.board.as_ref(),
            human: self.human,
            policy: self.policy,
            seed: self.seed,
            transcript: &self.transcript,
            state: StateView {
                territory_a: self.names(&s.w_a),
                territory_b: self.names(&s.w_b),
                last_a: s.last_a,
                last_b: s.last_b,
                to_move: s.to_move,
                round: s.round,
                stall: s.stall,
            },
            legal_colors: self.game.legal_colors(s).unwrap_or_default(),
            scores: json!({"a": g.set_weight(&s.w_a), "b": g.set_weight(&s.w_b), "total": g.total_weight()}),
            status: if self.verdict.is_some() { "finished" } else { "in_progress" },
            verdict: self.verdict.as_ref().map(|v| VerdictView {
                winner: v.winner,
                reason: v.reason,
                weight_a: v.weight_a,
                weight_b: v.weight_b,
            }),
        }
    }

    /// Debug builds re-derive the state from the transcript before answering.
    fn checked_view(&self) -> ApiResult<Value> {
        if cfg!(debug_assertions) {
            let s = &self.state;
            let replayed = self.game.replay(&self.transcript).map_err(|e| ApiError::internal(e.to_string()))?;
            if !s.w_a.is_disjoint(&s.w_b) || replayed != *s {
                return Err(ApiError::internal("session state failed its invariants"));
            }
        }
        serde_json::to_value(self.view()).map_err(|e| ApiError::internal(e.to_string()))
    }

    fn record(&mut self, app: &AppState, color: Color) -> ApiResult<MoveRecord> {
        let (next, gained) = self.game.apply_move(&self.state, color)?;
        let rec = MoveRecord {
            round: self.state.round,
            player: self.state.to_move,
            color,
            gained,
        };
        app.persist(&self.id, &serde_json::to_string(&rec).expect("move serializes"), "jsonl")?;
        self.transcript.push(rec.clone());
        self.state = next;
        self.verdict = self.game.winner(&self.state);
        Ok(rec)
    }

    /// The computer's call, computed off the async workers.
    async fn ai_reply(&mut self, app: &AppState) -> ApiResult<Option<(MoveRecord, Option<String>)>> {
        if self.verdict.is_some() || self.state.to_move == self.human {
            return Ok(None);
        }
        let (game, state, policy) = (self.game.clone(), self.state.clone(), self.policy);
        let seed = self.seed.wrapping_add(self.transcript.len() as u64);
        let (color, notice) = tokio::task::spawn_blocking(move || strategy_move(&game, &state, &policy, seed))
            .await
            .map_err(|e| ApiError::internal(e.to_string()))??;
        Ok(Some((self.record(app, color)?, notice)))
    }
}

fn instance_from_value(v: &Value) -> ApiResult<Instance> {
    load_instance(&v.to_string()).map_err(|e| ApiError::unprocessable(e.to_string()))
}

fn node_count(v: &Value) -> usize {
    v.get("nodes").and_then(Value::as_array).map_or(0, Vec::len)
}

async fn create_game(State(app): State<AppState>, body: Bytes) -> ApiResult<(StatusCode, Json<Value>)> {
    let req: CreateGame = parse(&body)?;
    let given = [req.board.is_some(), req.random_board.is_some(), req.instance.is_some()];
    if given.iter().filter(|&&b| b).count() != 1 {
        return Err(ApiError::bad_request("give exactly one of board, random_board and instance"));
    }
    let (inst, board) = if let Some(b) = req.board {
        app.too_large(b.len())?;
        b.validate().map_err(|e| ApiError::unprocessable(e.to_string()))?;
        (hex_to_graph(&b), Some(b))
    } else if let Some(p) = req.random_board {
        app.too_large(p.rows.saturating_mul(p.cols))?;
        let b = random_duel_board(p.rows, p.cols, p.k, p.seed, p.symmetric, p.holes).map_err(|e| ApiError::unprocessable(e.to_string()))?;
        (hex_to_graph(&b), Some(b))
    } else {
        let v = req.instance.expect("one source is present");
        app.too_large(node_count(&v))?;
        (instance_from_value(&v)?, None)
    };
    let (Some(a0), Some(b0)) = (inst.start_a, inst.start_b) else {
        return Err(ApiError::unprocessable("the instance needs start_a and start_b"));
    };
    let mut game = Game::new(inst.graph.clone(), a0, b0).map_err(|e| ApiError::unprocessable(e.to_string()))?;
    if let Some(cap) = req.stall_cap {
        game = game.with_stall_cap(cap);
    }
    let id = uuid::Uuid::new_v4().simple().to_string();
    let canonical = write_instance(&inst);
    app.persist(&id, canonical.trim_end(), "instance.json")?;
    let mut session = Session {
        id: id.clone(),
        state: game.initial(),
        game: Arc::new(game),
        instance: serde_json::from_str(&canonical).expect("canonical instance is JSON"),
        board,
        human: req.human,
        policy: req.policy,
        seed: req.seed,
        transcript: Vec::new(),
        verdict: None,
    };
    session.ai_reply(&app).await?;
    let view = session.checked_view()?;
    app.0.sessions.write().expect("session map lock").insert(id, Arc::new(Mutex::new(session)));
    Ok((StatusCode::CREATED, Json(view)))
}

async fn get_game(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    let session = app.session(&id)?;
    let s = session.lock().await;
    Ok(Json(s.checked_view()?))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MoveRequest {
    color: Color,
}

async fn post_move(State(app): State<AppState>, Path(id): Path<String>, body: Bytes) -> ApiResult<Json<Value>> {
    let session = app.session(&id)?;
    let req: MoveRequest = parse(&body)?;
    // one move in flight per session
    let Ok(mut s) = session.try_lock() else {
        return Err(ApiError::new(StatusCode::CONFLICT, "busy", "another move for this game is in progress"));
    };
    if s.verdict.is_some() {
        return Err(RuleError::GameOver.into());
    }
    if s.state.to_move != s.human {
        return Err(ApiError::new(StatusCode::CONFLICT, "not_your_turn", format!("{} is to move", s.state.to_move)));
    }
    let human_move = s.record(&app, req.color)?;
    let reply = s.ai_reply(&app).await?;
    let (ai_move, notice) = match reply {
        Some((m, n)) => (Some(m), n),
        None => (None, None),
    };
    Ok(Json(json!({
        "human_move": human_move,
        "ai_move": ai_move,
        "notice": notice,
        "session": s.checked_view()?,
    })))
}

fn default_method() -> Method {
    Method::Exact
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SolveRequest {
    instance: Value,
    #[serde(default)]
    start: Option<String>,
    #[serde(default = "default_method")]
    method: Method,
    #[serde(default)]
    order: Option<Value>,
    #[serde(default)]
    budget: Option<usize>,
}

async fn post_solve(State(app): State<AppState>, body: Bytes) -> ApiResult<Json<SolveResult>> {
    let req: SolveRequest = parse(&body)?;
    app.too_large(node_count(&req.instance))?;
    let inst = instance_from_value(&req.instance)?;
    let g = &inst.graph;
    let start = match &req.start {
        Some(n) => g.id(n).ok_or_else(|| ApiError::unprocessable(format!("unknown start node {n:?}")))?,
        None => inst.start.or(inst.start_a).ok_or_else(|| ApiError::unprocessable("no start given"))?,
    };
    let order = match &req.order {
        Some(v) => Some(load_order(&v.to_string(), g).map_err(|e| ApiError::unprocessable(e.to_string()))?),
        None => None,
    };
    let budget = req.budget.unwrap_or(app.0.config.max_budget).min(app.0.config.max_budget);
    let _slot = app.0.solve_slots.acquire().await.map_err(|e| ApiError::internal(e.to_string()))?;
    let method = req.method;
    let result = tokio::task::spawn_blocking(move || solve(&inst.graph, start, method, order.as_ref(), inst.clique.as_deref(), budget))
        .await
        .map_err(|e| ApiError::internal(e.to_string()))?;
    match result {
        Ok(r) => Ok(Json(r)),
        Err(e @ SolveError::BudgetExceeded { .. }) => Err(ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "budget_exceeded", e.to_string())),
        Err(e) => Err(ApiError::unprocessable(e.to_string())),
    }
}
