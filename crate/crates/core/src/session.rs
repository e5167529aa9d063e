//! Interactive game sessions: one side is a human acting through
//! [`SessionManager::submit`], the other an engine policy that replies
//! synchronously.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, TryLockError};
use std::time::{Duration, Instant};

use rand::RngCore;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{BuilderPolicy, GameConfig, GameState, GameStatus, PainterPolicy, Transcript};
use crate::graph::{Color, Pair};
use crate::painters::{RemoteHandle, RemotePainter};
use crate::policy::{BuilderSpec, PainterSpec, PolicyError};

/// Version of the JSON message schema.
pub const PROTOCOL_VERSION: u32 = 1;

pub const DEFAULT_IDLE_TIMEOUT: Duration = Duration::from_secs(30 * 60);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SessionError {
    #[error("unknown policy: {0}")]
    UnknownPolicy(String),
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("wrong turn: {0}")]
    WrongTurn(String),
    #[error("illegal edge: {0}")]
    IllegalEdge(String),
    #[error("session is finished")]
    SessionFinished,
    #[error("unknown session {0:?}")]
    UnknownSession(String),
    #[error("session is not finished")]
    NotFinished,
    #[error("bad request: {0}")]
    BadRequest(String),
    #[error("engine failure: {0}")]
    Engine(String),
}

impl SessionError {
    /// Stable machine-readable name.
    pub fn code(&self) -> &'static str {
        match self {
            SessionError::UnknownPolicy(_) => "UnknownPolicy",
            SessionError::InvalidConfig(_) => "InvalidConfig",
            SessionError::WrongTurn(_) => "WrongTurn",
            SessionError::IllegalEdge(_) => "IllegalEdge",
            SessionError::SessionFinished => "SessionFinished",
            SessionError::UnknownSession(_) => "UnknownSession",
            SessionError::NotFinished => "NotFinished",
            SessionError::BadRequest(_) => "BadRequest",
            SessionError::Engine(_) => "Engine",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HumanRole {
    Painter,
    Builder,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SessionState {
    AwaitingBuilderMove,
    AwaitingPainterChoice,
    Finished,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CreateRequest {
    #[serde(default)]
    pub v: Option<u32>,
    pub config: GameConfig,
    pub human_role: HumanRole,
    pub engine_policy: String,
    /// Seed for an unseeded `random` engine painter.
    #[serde(default)]
    pub seed: Option<u64>,
}

/// Exactly one of `color` (`"R"`/`"B"`) and `edge` must be present.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct ActionRequest {
    #[serde(default)]
    pub v: Option<u32>,
    #[serde(default)]
    pub color: Option<String>,
    #[serde(default)]
    pub edge: Option<[usize; 2]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Action {
    Paint(Color),
    Build(Pair),
}

impl ActionRequest {
    pub fn parse(&self) -> Result<Action, SessionError> {
        check_version(self.v)?;
        match (&self.color, self.edge) {
            (Some(c), None) => Color::from_letter(c)
                .map(Action::Paint)
                .ok_or_else(|| SessionError::BadRequest(format!("color must be \"R\" or \"B\", got {c:?}"))),
            (None, Some([u, v])) => Ok(Action::Build(Pair::new(u, v))),
            _ => Err(SessionError::BadRequest("exactly one of `color` and `edge` is required".into())),
        }
    }
}

fn check_version(v: Option<u32>) -> Result<(), SessionError> {
    match v {
        None | Some(PROTOCOL_VERSION) => Ok(()),
        Some(other) => Err(SessionError::BadRequest(format!(
            "unsupported protocol version {other}, expected {PROTOCOL_VERSION}"
        ))),
    }
}

/// What a client may see: the graph, whose turn it is, and the outcome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicState {
    pub v: u32,
    pub id: String,
    pub config: GameConfig,
    pub human_role: HumanRole,
    pub edges: Vec<(usize, usize, String)>,
    pub state: SessionState,
    pub pending_edge: Option<[usize; 2]>,
    pub moves: usize,
    pub savings: usize,
    pub status: String,
    pub witness: Option<Vec<usize>>,
}

enum Engine {
    /// Human paints; colors reach the game through a remote painter.
    Builder { builder: Box<dyn BuilderPolicy>, painter: RemotePainter, handle: RemoteHandle },
    Painter(Box<dyn PainterPolicy>),
}

struct Session {
    id: String,
    game: GameState,
    role: HumanRole,
    engine: Engine,
    pending: Option<Pair>,
    finished: bool,
    last_active: Instant,
}

impl Session {
    fn state(&self) -> SessionState {
        if self.finished {
            SessionState::Finished
        } else if self.pending.is_some() {
            SessionState::AwaitingPainterChoice
        } else {
            SessionState::AwaitingBuilderMove
        }
    }

    fn public(&self) -> PublicState {
        let g = self.game.graph();
        PublicState {
            v: PROTOCOL_VERSION,
            id: self.id.clone(),
            config: *self.game.config(),
            human_role: self.role,
            edges: g.edges().map(|(u, v, c)| (u, v, c.letter().to_string())).collect(),
            state: self.state(),
            pending_edge: self.pending.map(|p| [p.lo, p.hi]),
            moves: self.game.moves_made(),
            savings: self.game.savings(),
            status: self.game.status().tag().to_string(),
            witness: match self.game.status() {
                GameStatus::BuilderWon { clique, .. } => Some(clique.clone()),
                _ => None,
            },
        }
    }

    /// Lets the engine builder propose its next pair, or marks the game
    /// finished when it is over.
    fn advance(&mut self) -> Result<(), SessionError> {
        if self.game.status().is_over() {
            self.finished = true;
            self.pending = None;
            return Ok(());
        }
        if let Engine::Builder { builder, .. } = &mut self.engine {
            let pair = builder
                .next_edge(&self.game)
                .ok_or_else(|| SessionError::Engine("builder has no move".into()))?;
            self.game
                .check_proposal(pair)
                .map_err(|e| SessionError::Engine(e.to_string()))?;
            self.pending = Some(pair);
        }
        Ok(())
    }

    fn act(&mut self, action: Action) -> Result<(), SessionError> {
        if self.finished {
            return Err(SessionError::SessionFinished);
        }
        match (action, &mut self.engine) {
            (Action::Paint(c), Engine::Builder { painter, handle, .. }) => {
                let pair = self.pending.expect("pending pair while unfinished");
                handle.push(c);
                let color = painter
                    .paint(&self.game, pair)
                    .map_err(|e| SessionError::Engine(e.to_string()))?;
                self.game.apply(pair, color).map_err(|e| SessionError::Engine(e.to_string()))?;
                self.pending = None;
            }
            (Action::Build(pair), Engine::Painter(painter)) => {
                self.game
                    .check_proposal(pair)
                    .map_err(|e| SessionError::IllegalEdge(e.to_string()))?;
                let color = painter
                    .paint(&self.game, pair)
                    .map_err(|e| SessionError::Engine(e.to_string()))?;
                self.game.apply(pair, color).map_err(|e| SessionError::Engine(e.to_string()))?;
            }
            (Action::Paint(_), Engine::Painter(_)) => {
                return Err(SessionError::WrongTurn("awaiting a builder move, not a color".into()))
            }
            (Action::Build(_), Engine::Builder { .. }) => {
                return Err(SessionError::WrongTurn("awaiting a color for the pending edge".into()))
            }
        }
        self.advance()
    }
}

/// In-memory session store with idle expiry.
pub struct SessionManager {
    sessions: Mutex<HashMap<String, Arc<Mutex<Session>>>>,
    idle_timeout: Duration,
    transcript_dir: Option<PathBuf>,
}

impl Default for SessionManager {
    fn default() -> Self {
        SessionManager::new(DEFAULT_IDLE_TIMEOUT, None)
    }
}

impl SessionManager {
    /// Finished games are written to `transcript_dir/<id>.txt` when set.
    pub fn new(idle_timeout: Duration, transcript_dir: Option<PathBuf>) -> Self {
        SessionManager { sessions: Mutex::new(HashMap::new()), idle_timeout, transcript_dir }
    }

    pub fn create(&self, req: &CreateRequest) -> Result<PublicState, SessionError> {
        check_version(req.v)?;
        let c = req.config;
        let config = GameConfig::new(c.m, c.n, c.vertices)
            .map_err(|e| SessionError::InvalidConfig(e.to_string()))?;
        let id = new_id();
        let policy_err = |e: PolicyError| match e {
            PolicyError::UnknownPolicy(name) => SessionError::UnknownPolicy(name),
            other => SessionError::UnknownPolicy(other.to_string()),
        };
        let engine = match req.human_role {
            HumanRole::Painter => {
                let spec: BuilderSpec = req.engine_policy.parse().map_err(policy_err)?;
                let builder = spec.build(&config).map_err(policy_err)?;
                let (painter, handle) = RemotePainter::new(id.clone());
                Engine::Builder { builder, painter, handle }
            }
            HumanRole::Builder => {
                let spec: PainterSpec = req.engine_policy.parse().map_err(policy_err)?;
                Engine::Painter(spec.build(&config, req.seed.unwrap_or(0)).map_err(policy_err)?)
            }
        };
        let mut session = Session {
            id: id.clone(),
            game: GameState::new(config, None).map_err(|e| SessionError::InvalidConfig(e.to_string()))?,
            role: req.human_role,
            engine,
            pending: None,
            finished: false,
            last_active: Instant::now(),
        };
        session.advance()?;
        let public = session.public();
        if session.finished {
            self.write_transcript(&session);
        }
        self.purge(Instant::now());
        self.lock_map().insert(id, Arc::new(Mutex::new(session)));
        Ok(public)
    }

    pub fn get(&self, id: &str) -> Result<PublicState, SessionError> {
        self.with_session(id, |s| Ok(s.public()))
    }

    pub fn submit(&self, id: &str, action: &ActionRequest) -> Result<PublicState, SessionError> {
        let action = action.parse()?;
        self.with_session(id, |s| {
            s.act(action)?;
            Ok(s.public())
        })
    }

    /// The transcript of a finished session.
    pub fn transcript(&self, id: &str) -> Result<Transcript, SessionError> {
        self.with_session(id, |s| {
            if !s.finished {
                return Err(SessionError::NotFinished);
            }
            Ok(Transcript::of(&s.game, None))
        })
    }

    pub fn len(&self) -> usize {
        self.lock_map().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Drops sessions idle for longer than the timeout as of `now`.
    pub fn purge(&self, now: Instant) {
        let timeout = self.idle_timeout;
        self.lock_map().retain(|_, s| match s.try_lock() {
            Ok(s) => now.saturating_duration_since(s.last_active) <= timeout,
            Err(_) => true,
        });
    }

    fn lock_map(&self) -> std::sync::MutexGuard<'_, HashMap<String, Arc<Mutex<Session>>>> {
        self.sessions.lock().unwrap_or_else(|e| e.into_inner())
    }

    /// Runs `f` on the session; a session already busy with another action
    /// is reported as `WrongTurn`.
    fn with_session<T>(
        &self,
        id: &str,
        f: impl FnOnce(&mut Session) -> Result<T, SessionError>,
    ) -> Result<T, SessionError> {
        self.purge(Instant::now());
        let session = self
            .lock_map()
            .get(id)
            .cloned()
            .ok_or_else(|| SessionError::UnknownSession(id.to_string()))?;
        let mut guard = match session.try_lock() {
            Ok(g) => g,
            Err(TryLockError::WouldBlock) => {
                return Err(SessionError::WrongTurn("another action is in progress".into()))
            }
            Err(TryLockError::Poisoned(e)) => e.into_inner(),
        };
        let was_finished = guard.finished;
        guard.last_active = Instant::now();
        let out = f(&mut guard);
        if !was_finished && guard.finished {
            self.write_transcript(&guard);
        }
        out
    }

    fn write_transcript(&self, s: &Session) {
        if let Some(dir) = &self.transcript_dir {
            let text = Transcript::of(&s.game, None).to_text();
            // persistence is best effort; the transcript stays available in memory
            let _ = std::fs::create_dir_all(dir)
                .and_then(|_| std::fs::write(dir.join(format!("{}.txt", s.id)), text));
        }
    }
}

fn new_id() -> String {
    format!("{:016x}", rand::rng().next_u64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::replay;

    fn create(m: &SessionManager, role: HumanRole, policy: &str) -> Result<PublicState, SessionError> {
        m.create(&CreateRequest {
            v: Some(1),
            config: GameConfig::new(3, 3, 6).unwrap(),
            human_role: role,
            engine_policy: policy.into(),
            seed: None,
        })
    }

    fn paint(c: &str) -> ActionRequest {
        ActionRequest { color: Some(c.into()), ..Default::default() }
    }

    fn build(u: usize, v: usize) -> ActionRequest {
        ActionRequest { edge: Some([u, v]), ..Default::default() }
    }

    #[test]
    fn human_painter_gets_a_pending_edge() {
        let m = SessionManager::default();
        let s = create(&m, HumanRole::Painter, "paper").unwrap();
        assert_eq!(s.state, SessionState::AwaitingPainterChoice);
        assert!(s.pending_edge.is_some());
        assert_eq!(m.submit(&s.id, &build(0, 1)).unwrap_err().code(), "WrongTurn");
        let after = m.submit(&s.id, &paint("R")).unwrap();
        assert_eq!(after.moves, 1);
        assert_eq!(after.edges.len(), 1);
        assert_eq!(after.edges[0].2, "R");
    }

    #[test]
    fn human_builder_and_illegal_edges() {
        let m = SessionManager::default();
        let s = create(&m, HumanRole::Builder, "blue").unwrap();
        assert_eq!(s.state, SessionState::AwaitingBuilderMove);
        assert_eq!(s.pending_edge, None);
        let s1 = m.submit(&s.id, &build(0, 1)).unwrap();
        let err = m.submit(&s.id, &build(1, 0)).unwrap_err();
        assert_eq!(err.code(), "IllegalEdge");
        assert_eq!(m.get(&s.id).unwrap(), s1);
        assert_eq!(m.submit(&s.id, &paint("B")).unwrap_err().code(), "WrongTurn");
        assert_eq!(m.submit(&s.id, &build(0, 9)).unwrap_err().code(), "IllegalEdge");
        assert_eq!(m.transcript(&s.id).unwrap_err(), SessionError::NotFinished);
    }

    #[test]
    fn blue_triangle_finishes_and_replays() {
        let dir = std::env::temp_dir().join(format!("ramsey-session-{}", new_id()));
        let m = SessionManager::new(DEFAULT_IDLE_TIMEOUT, Some(dir.clone()));
        let s = create(&m, HumanRole::Builder, "blue").unwrap();
        m.submit(&s.id, &build(0, 1)).unwrap();
        m.submit(&s.id, &build(1, 2)).unwrap();
        let done = m.submit(&s.id, &build(0, 2)).unwrap();
        assert_eq!(done.state, SessionState::Finished);
        assert_eq!(done.witness, Some(vec![0, 1, 2]));
        assert_eq!(done.status, "BLUE_WIN");
        assert_eq!(m.submit(&s.id, &build(3, 4)).unwrap_err(), SessionError::SessionFinished);
        let t = m.transcript(&s.id).unwrap();
        assert_eq!(replay(&t).unwrap().graph().edges().count(), 3);
        let saved = std::fs::read_to_string(dir.join(format!("{}.txt", s.id))).unwrap();
        assert_eq!(Transcript::from_text(&saved).unwrap(), t);
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn creation_errors() {
        let m = SessionManager::default();
        assert_eq!(create(&m, HumanRole::Painter, "nope").unwrap_err().code(), "UnknownPolicy");
        assert_eq!(create(&m, HumanRole::Builder, "remote:x").unwrap_err().code(), "UnknownPolicy");
        let bad = m.create(&CreateRequest {
            v: None,
            config: GameConfig { m: 3, n: 3, vertices: 1 },
            human_role: HumanRole::Builder,
            engine_policy: "greedy".into(),
            seed: None,
        });
        assert_eq!(bad.unwrap_err().code(), "InvalidConfig");
        assert_eq!(m.get("missing").unwrap_err().code(), "UnknownSession");
        let v2 = ActionRequest { v: Some(2), color: Some("R".into()), edge: None };
        assert_eq!(v2.parse().unwrap_err().code(), "BadRequest");
    }

    #[test]
    fn idle_sessions_expire() {
        let m = SessionManager::new(Duration::from_secs(60), None);
        let s = create(&m, HumanRole::Builder, "greedy").unwrap();
        m.purge(Instant::now() + Duration::from_secs(30));
        assert_eq!(m.len(), 1);
        m.purge(Instant::now() + Duration::from_secs(120));
        assert!(m.is_empty());
        assert_eq!(m.get(&s.id).unwrap_err().code(), "UnknownSession");
    }

    #[test]
    fn public_state_replays_step_by_step() {
        let m = SessionManager::default();
        let s = create(&m, HumanRole::Painter, "naive").unwrap();
        let mut states = vec![s.clone()];
        let mut k = 0;
        while states.last().unwrap().state != SessionState::Finished {
            let c = if k % 3 == 0 { "R" } else { "B" };
            states.push(m.submit(&s.id, &paint(c)).unwrap());
            k += 1;
        }
        let t = m.transcript(&s.id).unwrap();
        let mut game = GameState::new(t.config, None).unwrap();
        for (mv, public) in t.moves.iter().zip(&states[1..]) {
            game.apply(mv.pair, mv.color).unwrap();
            let edges: Vec<_> = game.graph().edges().map(|(u, v, c)| (u, v, c.letter().to_string())).collect();
            assert_eq!(edges, public.edges);
            assert_eq!(game.moves_made(), public.moves);
        }
    }
}
