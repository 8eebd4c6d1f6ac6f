//! JSON API for interactive game sessions.
//!
//! Sessions live in memory and expire after an idle timeout. Each session
//! sits behind its own lock, so moves on one session are applied one at a
//! time while different sessions proceed independently.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use apart_core::session::{EndReason, MoveOption};
use apart_core::{
    fixtures, parse_aut_with, AutOptions, GameKind, Lts, Player, ProofDocument, Session, SessionError, SessionStatus,
};
use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};

use crate::render;

#[derive(Clone)]
pub struct AppState {
    inner: Arc<Store>,
}

struct Store {
    ttl: Duration,
    sessions: Mutex<HashMap<String, Entry>>,
}

struct Entry {
    session: Arc<Mutex<Session>>,
    touched: Instant,
}

impl AppState {
    pub fn new(ttl: Duration) -> Self {
        AppState { inner: Arc::new(Store { ttl, sessions: Mutex::new(HashMap::new()) }) }
    }

    fn insert(&self, session: Session) -> (String, Arc<Mutex<Session>>) {
        let id = uuid::Uuid::new_v4().simple().to_string();
        let session = Arc::new(Mutex::new(session));
        let mut map = self.inner.sessions.lock().unwrap();
        self.sweep(&mut map);
        map.insert(id.clone(), Entry { session: session.clone(), touched: Instant::now() });
        (id, session)
    }

    fn get(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        let mut map = self.inner.sessions.lock().unwrap();
        self.sweep(&mut map);
        let entry = map.get_mut(id).ok_or_else(|| ApiError::not_found(id))?;
        entry.touched = Instant::now();
        Ok(entry.session.clone())
    }

    fn remove(&self, id: &str) -> bool {
        let mut map = self.inner.sessions.lock().unwrap();
        self.sweep(&mut map);
        map.remove(id).is_some()
    }

    fn sweep(&self, map: &mut HashMap<String, Entry>) {
        let ttl = self.inner.ttl;
        map.retain(|_, e| e.touched.elapsed() < ttl);
    }

    pub fn len(&self) -> usize {
        self.inner.sessions.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session).delete(delete_session))
        .route("/sessions/{id}/moves", post(play_move))
        .with_state(state)
}

pub async fn serve(port: u16, ttl: Duration) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("0.0.0.0", port)).await?;
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(AppState::new(ttl))).await
}

#[derive(Debug, Serialize)]
pub struct ErrorBody {
    pub code: &'static str,
    pub message: String,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: ErrorBody,
}

impl ApiError {
    fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        ApiError { status, body: ErrorBody { code, message: message.into() } }
    }

    fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "bad_request", message)
    }

    fn not_found(id: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, "not_found", format!("no session {id}"))
    }
}

impl From<JsonRejection> for ApiError {
    fn from(r: JsonRejection) -> Self {
        ApiError::bad_request(r.body_text())
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        let (status, code) = match e {
            SessionError::Lts(_) => (StatusCode::UNPROCESSABLE_ENTITY, "unknown_state"),
            SessionError::NotHumansTurn => (StatusCode::CONFLICT, "not_your_turn"),
            SessionError::Finished => (StatusCode::CONFLICT, "game_over"),
            SessionError::InvalidMove { .. } => (StatusCode::UNPROCESSABLE_ENTITY, "invalid_move"),
        };
        ApiError::new(status, code, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateRequest {
    #[serde(default)]
    pub aut: Option<String>,
    #[serde(default)]
    pub fixture: Option<String>,
    #[serde(default = "default_kind")]
    pub kind: GameKind,
    pub human_role: Player,
    pub start: [String; 2],
    #[serde(default)]
    pub tau: Option<String>,
}

fn default_kind() -> GameKind {
    GameKind::Strong
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoveRequest {
    pub move_index: usize,
}

#[derive(Debug, Serialize)]
pub struct ConfigView {
    pub id: usize,
    pub config: String,
    pub owner: Player,
    pub in_spoiler_region: bool,
    pub rank: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct HistoryView {
    pub from: String,
    pub to: String,
    pub mover: Player,
    pub by_human: bool,
    pub kind: apart_core::MoveKind,
    pub description: String,
}

#[derive(Debug, Serialize)]
pub struct SessionSummary {
    pub id: String,
    pub kind: GameKind,
    pub human_role: Player,
    pub status: SessionStatus,
    pub end_reason: Option<EndReason>,
    pub start: ConfigView,
    pub current: ConfigView,
    pub to_move: Player,
    pub human_to_move: bool,
    pub legal_moves: Vec<MoveOption>,
    pub history: Vec<HistoryView>,
    pub rounds: usize,
    pub start_in_spoiler_region: bool,
    pub rank: Option<usize>,
    pub dot: String,
    pub proof: Option<ProofDocument>,
}

fn config_view(s: &Session, c: apart_core::ConfigId) -> ConfigView {
    ConfigView {
        id: c.0,
        config: s.game().config(c).describe(s.lts()),
        owner: s.game().owner(c),
        in_spoiler_region: s.solution().spoiler_wins(c),
        rank: s.solution().rank(c),
    }
}

pub fn summarize(id: &str, s: &Session) -> SessionSummary {
    let in_progress = s.status() == SessionStatus::InProgress;
    let human_to_move = in_progress && s.to_move() == s.human();
    let history = s
        .history()
        .iter()
        .map(|h| HistoryView {
            from: s.game().config(h.from).describe(s.lts()),
            to: s.game().config(h.to).describe(s.lts()),
            mover: h.mover,
            by_human: h.by_human,
            kind: h.kind,
            description: s.describe_move(h.from, h.to),
        })
        .collect();
    SessionSummary {
        id: id.to_string(),
        kind: s.kind(),
        human_role: s.human(),
        status: s.status(),
        end_reason: s.end_reason(),
        start: config_view(s, s.start()),
        current: config_view(s, s.current()),
        to_move: s.to_move(),
        human_to_move,
        legal_moves: if human_to_move { s.legal_moves().unwrap_or_default() } else { Vec::new() },
        history,
        rounds: s.rounds(),
        start_in_spoiler_region: s.start_in_spoiler_region(),
        rank: s.current_rank(),
        dot: render::session_dot(s),
        proof: s.proof().map(|p| ProofDocument::new(s.lts(), s.kind(), &p)),
    }
}

fn load(req: &CreateRequest) -> Result<Lts, ApiError> {
    match (&req.aut, &req.fixture) {
        (Some(text), None) => {
            let options = req.tau.as_deref().map(AutOptions::with_tau).unwrap_or_default();
            parse_aut_with(text, &options).map_err(|e| ApiError::bad_request(format!("aut: {e}")))
        }
        (None, Some(name)) => {
            fixtures::by_name(name).ok_or_else(|| ApiError::bad_request(format!("unknown fixture {name:?}")))
        }
        _ => Err(ApiError::bad_request("give exactly one of aut and fixture")),
    }
}

async fn create_session(
    State(state): State<AppState>,
    body: Result<Json<CreateRequest>, JsonRejection>,
) -> Result<(StatusCode, Json<SessionSummary>), ApiError> {
    let Json(req) = body?;
    let lts = load(&req)?;
    let resolve = |name: &str| {
        lts.resolve_state(name)
            .map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "unknown_state", e.to_string()))
    };
    let (x, y) = (resolve(&req.start[0])?, resolve(&req.start[1])?);
    let session = Session::new(Arc::new(lts), req.kind, req.human_role, x, y)?;
    let (id, session) = state.insert(session);
    log::debug!("created session {id}");
    let s = session.lock().unwrap();
    Ok((StatusCode::CREATED, Json(summarize(&id, &s))))
}

async fn get_session(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<SessionSummary>, ApiError> {
    let session = state.get(&id)?;
    let s = session.lock().unwrap();
    Ok(Json(summarize(&id, &s)))
}

async fn play_move(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<MoveRequest>, JsonRejection>,
) -> Result<Json<SessionSummary>, ApiError> {
    let session = state.get(&id)?;
    let Json(req) = body?;
    let mut s = session.lock().unwrap();
    s.play(req.move_index)?;
    Ok(Json(summarize(&id, &s)))
}

async fn delete_session(State(state): State<AppState>, Path(id): Path<String>) -> Result<StatusCode, ApiError> {
    if state.remove(&id) {
        Ok(StatusCode::NO_CONTENT)
    } else {
        Err(ApiError::not_found(&id))
    }
}
