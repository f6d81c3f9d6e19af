//! Single-session state machine. Purely synchronous and driven by explicit
//! clock values, so a recorded inbound log replays to identical output.

use std::collections::BTreeMap;

use chairplay_catalog::{
    default_catalog, recommend, GameProfile, Layout, MeetingContext, MeetingPhase, StartTime,
};
use chairplay_games::{
    episode_seed, GameConfig, GameError, GameKind, GameResults, GameState, Player, TickInput,
    TICK_MS,
};
use chairplay_gesture::{
    GestureEvent, KeypointSet, ParticipantId, PoseFrame, RepCounts, Tracker, TrackerParams,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::protocol::{RosterEntry, ServerBody, Trigger};
use crate::store::{ResultsRecord, Store};

/// Most ticks a single `advance` call will run; older backlog is dropped.
pub const MAX_CATCH_UP_TICKS: u64 = 10;
pub const MAX_NICKNAME_CHARS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Lobby,
    Meeting,
    Break,
    InGame,
    Ended,
}

/// Context used to rank games for break prompts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BreakContext {
    pub layout: Layout,
    pub privacy: f64,
    pub attention_budget: f64,
}

impl Default for BreakContext {
    fn default() -> Self {
        Self {
            layout: Layout::Symmetric,
            privacy: 0.5,
            attention_budget: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SessionConfig {
    pub break_interval_s: f64,
    pub break_length_s: f64,
    pub tick_ms: u64,
    pub seed: u64,
    pub games: GameConfig,
    pub tracker: TrackerParams,
    pub break_context: BreakContext,
}

impl Default for SessionConfig {
    fn default() -> Self {
        Self {
            break_interval_s: 1200.0,
            break_length_s: 300.0,
            tick_ms: TICK_MS,
            seed: 0,
            games: GameConfig::default(),
            tracker: TrackerParams::default(),
            break_context: BreakContext::default(),
        }
    }
}

impl SessionConfig {
    pub fn validate(&self) -> Result<(), SessionError> {
        let invalid = |m: String| Err(SessionError::InvalidConfig(m));
        if self.tick_ms != TICK_MS {
            return invalid(format!("tick_ms must be {TICK_MS}, got {}", self.tick_ms));
        }
        if !(self.break_length_s > 0.0) {
            return invalid("break_length_s must be positive".into());
        }
        if !(self.break_interval_s > self.break_length_s) {
            return invalid("break_interval_s must exceed break_length_s".into());
        }
        self.games
            .validate()
            .map_err(|e| SessionError::InvalidConfig(e.to_string()))?;
        self.tracker
            .validate()
            .map_err(|e| SessionError::InvalidConfig(e.to_string()))?;
        let ctx = self.break_context_query();
        ctx.validate()
            .map_err(|e| SessionError::InvalidConfig(e.to_string()))
    }

    fn break_context_query(&self) -> MeetingContext {
        let b = &self.break_context;
        MeetingContext::new(MeetingPhase::Break, b.layout, b.privacy, b.attention_budget)
    }

    fn ticks(&self, secs: f64) -> u64 {
        ((secs * 1000.0 / self.tick_ms as f64).round() as u64).max(1)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SessionError {
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("no such session {0:?}")]
    NoSuchSession(String),
    #[error("session has ended")]
    SessionEnded,
    #[error("invalid nickname: {0}")]
    InvalidNickname(String),
    #[error("a game is already running")]
    GameActive,
    #[error("no game is running")]
    NoActiveGame,
    #[error("{game} needs at least {needed} participants, have {got}")]
    TooFewParticipants {
        game: GameKind,
        needed: usize,
        got: usize,
    },
    #[error("at most {max} participants supported, have {got}")]
    TooManyParticipants { max: usize, got: usize },
    #[error("cannot do that during {0:?}")]
    WrongPhase(Phase),
    #[error("participant {0} is not in this session")]
    UnknownParticipant(ParticipantId),
    #[error("frame at {t_ms} ms is not after {last_t_ms} ms")]
    StaleFrame { t_ms: u64, last_t_ms: u64 },
    #[error("game error: {0}")]
    Game(String),
}

impl SessionError {
    /// Kebab-case code sent in `error` messages.
    pub fn code(&self) -> &'static str {
        match self {
            SessionError::InvalidConfig(_) => "invalid-config",
            SessionError::NoSuchSession(_) => "no-such-session",
            SessionError::SessionEnded => "session-ended",
            SessionError::InvalidNickname(_) => "invalid-nickname",
            SessionError::GameActive => "game-active",
            SessionError::NoActiveGame => "no-active-game",
            SessionError::TooFewParticipants { .. } => "too-few-participants",
            SessionError::TooManyParticipants { .. } => "too-many-participants",
            SessionError::WrongPhase(_) => "wrong-phase",
            SessionError::UnknownParticipant(_) => "unknown-participant",
            SessionError::StaleFrame { .. } => "stale-frame",
            SessionError::Game(_) => "game-error",
        }
    }

    pub fn to_body(&self) -> ServerBody {
        ServerBody::error(self.code(), self.to_string())
    }
}

impl From<GameError> for SessionError {
    fn from(e: GameError) -> Self {
        match e {
            GameError::TooFewParticipants { game, needed, got } => {
                SessionError::TooFewParticipants { game, needed, got }
            }
            GameError::TooManyParticipants { max, got } => {
                SessionError::TooManyParticipants { max, got }
            }
            other => SessionError::Game(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recipient {
    All,
    One(ParticipantId),
}

/// A message the session wants delivered.
#[derive(Debug, Clone, PartialEq)]
pub struct Outbound {
    pub to: Recipient,
    pub body: ServerBody,
}

impl Outbound {
    fn all(body: ServerBody) -> Self {
        Self {
            to: Recipient::All,
            body,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Participant {
    pub pid: ParticipantId,
    pub nickname: String,
    pub join_seq: u64,
}

#[derive(Debug)]
struct ActiveGame {
    state: GameState,
    /// Phase to return to once the game ends.
    resume: Phase,
    reps: BTreeMap<ParticipantId, RepCounts>,
}

/// Trims and checks a requested nickname.
pub fn normalize_nickname(raw: &str) -> Result<String, SessionError> {
    let name = raw.trim();
    let chars = name.chars().count();
    if chars == 0 || chars > MAX_NICKNAME_CHARS {
        return Err(SessionError::InvalidNickname(format!(
            "must be 1-{MAX_NICKNAME_CHARS} characters after trimming"
        )));
    }
    if name.chars().any(char::is_control) {
        return Err(SessionError::InvalidNickname(
            "control characters are not allowed".into(),
        ));
    }
    Ok(name.to_string())
}

/// Whether starting `profile` at `trigger` goes against its preferred start
/// time.
pub fn start_time_conflict(profile: &GameProfile, trigger: Trigger) -> bool {
    matches!(
        (profile.start_time, trigger),
        (StartTime::MidMeeting, MeetingPhase::Break) | (StartTime::Break, MeetingPhase::MidMeeting)
    )
}

pub struct Session {
    id: String,
    config: SessionConfig,
    catalog: Vec<GameProfile>,
    phase: Phase,
    roster: Vec<Participant>,
    next_pid: u32,
    next_join_seq: u64,
    tracker: Tracker,
    last_frame_t: BTreeMap<ParticipantId, u64>,
    pending: Vec<PoseFrame>,
    game: Option<ActiveGame>,
    episode: u64,
    tick: u64,
    next_break_at: u64,
    break_ends_at: u64,
    clock_ms: Option<u64>,
    backlog_ms: u64,
    store: Option<Store>,
    store_errors: u64,
}

impl Session {
    pub fn new(id: impl Into<String>, config: SessionConfig) -> Result<Self, SessionError> {
        config.validate()?;
        let tracker =
            Tracker::new(config.tracker).map_err(|e| SessionError::InvalidConfig(e.to_string()))?;
        Ok(Self {
            id: id.into(),
            catalog: default_catalog(),
            phase: Phase::Lobby,
            roster: Vec::new(),
            next_pid: 1,
            next_join_seq: 0,
            tracker,
            last_frame_t: BTreeMap::new(),
            pending: Vec::new(),
            game: None,
            episode: 0,
            tick: 0,
            next_break_at: 0,
            break_ends_at: 0,
            clock_ms: None,
            backlog_ms: 0,
            store: None,
            store_errors: 0,
            config,
        })
    }

    /// Persists finished episodes into `store`.
    pub fn with_store(mut self, store: Store) -> Self {
        self.store = Some(store);
        self
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn config(&self) -> &SessionConfig {
        &self.config
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn tick(&self) -> u64 {
        self.tick
    }

    pub fn next_break_at(&self) -> u64 {
        self.next_break_at
    }

    pub fn roster(&self) -> &[Participant] {
        &self.roster
    }

    pub fn game(&self) -> Option<&GameState> {
        self.game.as_ref().map(|g| &g.state)
    }

    /// Number of results that could not be written to the store.
    pub fn store_errors(&self) -> u64 {
        self.store_errors
    }

    fn ensure_open(&self) -> Result<(), SessionError> {
        if self.phase == Phase::Ended {
            Err(SessionError::SessionEnded)
        } else {
            Ok(())
        }
    }

    fn roster_body(&self) -> ServerBody {
        ServerBody::Roster {
            participants: self
                .roster
                .iter()
                .map(|p| RosterEntry {
                    pid: p.pid,
                    nickname: p.nickname.clone(),
                    join_seq: p.join_seq,
                })
                .collect(),
        }
    }

    fn unique_nickname(&self, name: &str) -> String {
        let taken = |n: &str| self.roster.iter().any(|p| p.nickname == n);
        if !taken(name) {
            return name.to_string();
        }
        (2..)
            .map(|k| format!("{name}#{k}"))
            .find(|n| !taken(n))
            .expect("some suffix is free")
    }

    /// Adds a participant. The first join opens the meeting and starts the
    /// break clock.
    pub fn join(&mut self, nickname: &str) -> Result<(Participant, Vec<Outbound>), SessionError> {
        self.ensure_open()?;
        let name = self.unique_nickname(&normalize_nickname(nickname)?);
        let p = Participant {
            pid: ParticipantId(self.next_pid),
            nickname: name,
            join_seq: self.next_join_seq,
        };
        self.next_pid += 1;
        self.next_join_seq += 1;
        self.tracker.register(p.pid);
        self.roster.push(p.clone());
        if self.phase == Phase::Lobby {
            self.phase = Phase::Meeting;
            self.next_break_at = self.tick + self.config.ticks(self.config.break_interval_s);
        }
        Ok((p, vec![Outbound::all(self.roster_body())]))
    }

    pub fn leave(&mut self, pid: ParticipantId) -> Result<Vec<Outbound>, SessionError> {
        self.ensure_open()?;
        let idx = self
            .roster
            .iter()
            .position(|p| p.pid == pid)
            .ok_or(SessionError::UnknownParticipant(pid))?;
        self.roster.remove(idx);
        self.tracker.unregister(pid);
        self.last_frame_t.remove(&pid);
        self.pending.retain(|f| f.participant_id != pid);
        Ok(vec![Outbound::all(self.roster_body())])
    }

    /// Queues a pose frame for the next tick.
    pub fn submit_pose(
        &mut self,
        pid: ParticipantId,
        t_ms: u64,
        keypoints: KeypointSet,
    ) -> Result<(), SessionError> {
        self.ensure_open()?;
        if !self.roster.iter().any(|p| p.pid == pid) {
            return Err(SessionError::UnknownParticipant(pid));
        }
        if let Some(&last) = self.last_frame_t.get(&pid) {
            if t_ms <= last {
                return Err(SessionError::StaleFrame {
                    t_ms,
                    last_t_ms: last,
                });
            }
        }
        self.last_frame_t.insert(pid, t_ms);
        self.pending.push(PoseFrame {
            participant_id: pid,
            t_ms,
            keypoints,
        });
        Ok(())
    }

    pub fn start_game(
        &mut self,
        kind: GameKind,
        trigger: Trigger,
    ) -> Result<Vec<Outbound>, SessionError> {
        self.ensure_open()?;
        if self.game.is_some() {
            return Err(SessionError::GameActive);
        }
        if !matches!(self.phase, Phase::Meeting | Phase::Break) {
            return Err(SessionError::WrongPhase(self.phase));
        }
        let players: Vec<Player> = self
            .roster
            .iter()
            .map(|p| Player::new(p.pid, p.nickname.clone()))
            .collect();
        if players.len() < kind.min_players() {
            return Err(SessionError::TooFewParticipants {
                game: kind,
                needed: kind.min_players(),
                got: players.len(),
            });
        }
        let seed = episode_seed(self.config.seed, self.episode);
        let state = GameState::new(kind, &players, &self.config.games, seed)?;
        let warning = self
            .catalog
            .iter()
            .find(|p| p.game == kind.id())
            .is_some_and(|p| start_time_conflict(p, trigger));
        self.episode += 1;
        self.game = Some(ActiveGame {
            state,
            resume: self.phase,
            reps: BTreeMap::new(),
        });
        self.phase = Phase::InGame;
        Ok(vec![Outbound::all(ServerBody::GameStarted {
            game: kind,
            seed,
            config: self.config.games.clone(),
            warning,
        })])
    }

    /// Finishes the running episode (terminal or host-aborted), persists it
    /// and returns to the phase the game was started from.
    pub fn end_game(&mut self) -> Result<(GameResults, Vec<Outbound>), SessionError> {
        self.ensure_open()?;
        let game = self.game.take().ok_or(SessionError::NoActiveGame)?;
        let results = game.state.results(&game.reps);
        self.phase = game.resume;
        let mut out = Vec::new();
        if let Some(store) = &self.store {
            let record = ResultsRecord {
                timestamp_ms: self.clock_ms.unwrap_or(0),
                session_id: self.id.clone(),
                results: results.clone(),
            };
            if let Err(e) = store.append(&record) {
                tracing::error!(session = %self.id, error = %e, "failed to persist results");
                self.store_errors += 1;
                out.push(Outbound::all(ServerBody::error("io-error", e.to_string())));
            }
        }
        out.push(Outbound::all(ServerBody::GameOver {
            results: results.clone(),
        }));
        Ok((results, out))
    }

    /// Ends the session for good; all later calls fail with `SessionEnded`.
    pub fn close(&mut self) -> Vec<Outbound> {
        let mut out = Vec::new();
        if self.game.is_some() {
            if let Ok((_, o)) = self.end_game() {
                out.extend(o);
            }
        }
        self.phase = Phase::Ended;
        out
    }

    /// Runs the ticks owed since the previous call. The first call only
    /// anchors the clock. At most [`MAX_CATCH_UP_TICKS`] run per call and
    /// any further backlog is discarded.
    pub fn advance(&mut self, now_ms: u64) -> (u64, Vec<Outbound>) {
        if self.phase == Phase::Ended {
            return (0, Vec::new());
        }
        let Some(prev) = self.clock_ms else {
            self.clock_ms = Some(now_ms);
            return (0, Vec::new());
        };
        self.clock_ms = Some(now_ms.max(prev));
        self.backlog_ms += now_ms.saturating_sub(prev);
        let mut ticks = self.backlog_ms / self.config.tick_ms;
        if ticks > MAX_CATCH_UP_TICKS {
            ticks = MAX_CATCH_UP_TICKS;
            self.backlog_ms = 0;
        } else {
            self.backlog_ms -= ticks * self.config.tick_ms;
        }
        let mut out = Vec::new();
        for _ in 0..ticks {
            out.extend(self.step());
        }
        (ticks, out)
    }

    /// Runs exactly one 50 ms tick.
    pub fn step(&mut self) -> Vec<Outbound> {
        if self.phase == Phase::Ended {
            return Vec::new();
        }
        self.tick += 1;
        let mut frames = std::mem::take(&mut self.pending);
        let order: BTreeMap<ParticipantId, u64> =
            self.roster.iter().map(|p| (p.pid, p.join_seq)).collect();
        frames.sort_by_key(|f| (f.t_ms, order.get(&f.participant_id).copied()));
        let mut events: Vec<GestureEvent> = Vec::new();
        for f in &frames {
            // frames were validated on submit; a participant may have left since
            if let Ok(ev) = self.tracker.ingest_frame(f) {
                events.extend(ev);
            }
        }

        let mut out = Vec::new();
        match self.phase {
            Phase::InGame => {
                let game = self.game.as_mut().expect("in_game implies an active game");
                for e in &events {
                    game.reps
                        .entry(e.participant_id)
                        .or_default()
                        .record(e.kind);
                }
                if game
                    .state
                    .tick(TickInput {
                        events: &events,
                        frames: &frames,
                    })
                    .is_ok()
                {
                    out.push(Outbound::all(ServerBody::Snapshot {
                        tick: game.state.tick_count(),
                        game: game.state.kind(),
                        state: game.state.snapshot(),
                    }));
                }
                if game.state.is_terminal() {
                    if let Ok((_, o)) = self.end_game() {
                        out.extend(o);
                    }
                }
            }
            Phase::Meeting if self.tick >= self.next_break_at => {
                self.phase = Phase::Break;
                self.break_ends_at = self.tick + self.config.ticks(self.config.break_length_s);
                let suggestions = recommend(&self.config.break_context_query(), &self.catalog)
                    .unwrap_or_default();
                out.push(Outbound::all(ServerBody::BreakPrompt { suggestions }));
            }
            Phase::Break if self.tick >= self.break_ends_at => {
                self.phase = Phase::Meeting;
                self.next_break_at = self.tick + self.config.ticks(self.config.break_interval_s);
            }
            _ => {}
        }
        out
    }
}
