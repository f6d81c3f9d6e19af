//! WebSocket front end. Each session runs as one actor task that owns the
//! [`Session`] and serializes every mutation; connection tasks only decode
//! and forward.

use std::collections::{BTreeMap, HashMap};
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use axum::body::Bytes;
use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use chairplay_gesture::ParticipantId;
use futures_util::{SinkExt, StreamExt};
use serde_json::json;
use tokio::sync::mpsc;
use tokio::task::JoinHandle;
use tokio::time::MissedTickBehavior;

use crate::protocol::{ClientBody, ClientMessage, ServerBody, ServerMessage};
use crate::session::{
    normalize_nickname, Outbound, Recipient, Session, SessionConfig, SessionError,
};
use crate::store::{Store, StoreError};

pub const DEFAULT_SESSION: &str = "main";

#[derive(Debug, Clone)]
pub struct ServerConfig {
    pub addr: SocketAddr,
    pub data_dir: PathBuf,
    pub session: SessionConfig,
}

#[derive(Debug, thiserror::Error)]
pub enum ServerError {
    #[error(transparent)]
    Config(#[from] SessionError),
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error("cannot bind {addr}: {source}")]
    Bind {
        addr: SocketAddr,
        #[source]
        source: std::io::Error,
    },
}

fn now_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_millis() as u64)
}

enum Command {
    Attach {
        conn: u64,
        nickname: String,
        tx: mpsc::UnboundedSender<ServerBody>,
    },
    Message {
        conn: u64,
        body: ClientBody,
    },
    Detach {
        conn: u64,
    },
}

struct Registry {
    sessions: Mutex<HashMap<String, mpsc::UnboundedSender<Command>>>,
    next_session: AtomicU64,
    next_conn: AtomicU64,
    store: Store,
    defaults: SessionConfig,
}

impl Registry {
    fn create(&self, id: Option<String>, config: SessionConfig) -> Result<String, SessionError> {
        let id = id.unwrap_or_else(|| {
            format!("s{}", self.next_session.fetch_add(1, Ordering::Relaxed) + 1)
        });
        let session = Session::new(id.clone(), config)?.with_store(self.store.clone());
        let (tx, rx) = mpsc::unbounded_channel();
        tokio::spawn(run_session(session, rx));
        self.sessions
            .lock()
            .expect("registry lock")
            .insert(id.clone(), tx);
        Ok(id)
    }

    fn lookup(&self, id: &str) -> Option<mpsc::UnboundedSender<Command>> {
        let id = if id.is_empty() { DEFAULT_SESSION } else { id };
        self.sessions
            .lock()
            .expect("registry lock")
            .get(id)
            .cloned()
    }
}

struct Conn {
    tx: mpsc::UnboundedSender<ServerBody>,
    pid: Option<ParticipantId>,
}

async fn run_session(mut session: Session, mut inbox: mpsc::UnboundedReceiver<Command>) {
    let mut conns: BTreeMap<u64, Conn> = BTreeMap::new();
    let mut ticker = tokio::time::interval(Duration::from_millis(session.config().tick_ms));
    ticker.set_missed_tick_behavior(MissedTickBehavior::Skip);

    fn deliver(conns: &BTreeMap<u64, Conn>, out: Vec<Outbound>) {
        for o in out {
            for c in conns.values() {
                let wanted = match o.to {
                    Recipient::All => c.pid.is_some(),
                    Recipient::One(pid) => c.pid == Some(pid),
                };
                if wanted {
                    let _ = c.tx.send(o.body.clone());
                }
            }
        }
    }

    loop {
        tokio::select! {
            _ = ticker.tick() => {
                let (_, out) = session.advance(now_ms());
                deliver(&conns, out);
            }
            cmd = inbox.recv() => {
                let Some(cmd) = cmd else { break };
                match cmd {
                    Command::Attach { conn, nickname, tx } => match session.join(&nickname) {
                        Ok((p, out)) => {
                            let _ = tx.send(ServerBody::Welcome { pid: p.pid, sid: session.id().to_string() });
                            conns.insert(conn, Conn { tx, pid: Some(p.pid) });
                            deliver(&conns, out);
                        }
                        Err(e) => {
                            let _ = tx.send(e.to_body());
                        }
                    },
                    Command::Message { conn, body } => {
                        let Some(c) = conns.get(&conn) else { continue };
                        let Some(pid) = c.pid else {
                            let _ = c.tx.send(ServerBody::error("not-joined", "join a session first"));
                            continue;
                        };
                        let result = match body {
                            ClientBody::Pose { t_ms, keypoints } => {
                                session.submit_pose(pid, t_ms, keypoints).map(|()| Vec::new())
                            }
                            ClientBody::StartGame { game, trigger } => session.start_game(game, trigger),
                            ClientBody::EndGame {} => session.end_game().map(|(_, out)| out),
                            ClientBody::Leave {} => {
                                let r = session.leave(pid);
                                if let Some(c) = conns.get_mut(&conn) {
                                    c.pid = None;
                                }
                                r
                            }
                            ClientBody::Hello { .. } | ClientBody::Join { .. } => {
                                let _ = c.tx.send(ServerBody::error("already-joined", "already in a session"));
                                continue;
                            }
                        };
                        match result {
                            Ok(out) => deliver(&conns, out),
                            Err(e) => {
                                if let Some(c) = conns.get(&conn) {
                                    let _ = c.tx.send(e.to_body());
                                }
                            }
                        }
                    }
                    Command::Detach { conn } => {
                        if let Some(Conn { pid: Some(pid), .. }) = conns.remove(&conn) {
                            if let Ok(out) = session.leave(pid) {
                                deliver(&conns, out);
                            }
                        }
                    }
                }
            }
        }
    }
}

async fn ws_handler(ws: WebSocketUpgrade, State(reg): State<Arc<Registry>>) -> Response {
    ws.on_upgrade(move |socket| handle_socket(socket, reg))
}

async fn handle_socket(socket: WebSocket, reg: Arc<Registry>) {
    let conn = reg.next_conn.fetch_add(1, Ordering::Relaxed);
    let (mut sink, mut stream) = socket.split();
    let (tx, mut rx) = mpsc::unbounded_channel::<ServerBody>();
    let mut seq = 0u64;
    let mut sid = String::new();
    let mut nickname: Option<String> = None;
    let mut attached: Option<mpsc::UnboundedSender<Command>> = None;

    macro_rules! send {
        ($body:expr) => {{
            seq += 1;
            let text = ServerMessage::new(seq, now_ms(), sid.clone(), $body).encode();
            sink.send(Message::Text(text.into())).await.is_ok()
        }};
    }

    loop {
        tokio::select! {
            body = rx.recv() => {
                let Some(body) = body else { break };
                if let ServerBody::Welcome { sid: s, .. } = &body {
                    sid = s.clone();
                }
                if !send!(body) {
                    break;
                }
            }
            msg = stream.next() => {
                let text = match msg {
                    Some(Ok(Message::Text(t))) => t.to_string(),
                    Some(Ok(Message::Binary(_))) => {
                        if !send!(ServerBody::error("malformed-json", "binary frames are not supported")) {
                            break;
                        }
                        continue;
                    }
                    Some(Ok(Message::Close(_))) | None | Some(Err(_)) => break,
                    Some(Ok(_)) => continue,
                };
                let body = match ClientMessage::decode(&text) {
                    Ok(m) => m.body,
                    Err(e) => {
                        let ok = send!(ServerBody::error(e.code(), e.to_string()));
                        if e.closes_connection() || !ok {
                            let _ = sink.send(Message::Close(None)).await;
                            break;
                        }
                        continue;
                    }
                };
                let reply = match (&attached, body) {
                    (Some(actor), body) => {
                        let _ = actor.send(Command::Message { conn, body });
                        None
                    }
                    (None, ClientBody::Hello { nickname: n }) => match normalize_nickname(&n) {
                        Ok(n) => {
                            nickname = Some(n);
                            None
                        }
                        Err(e) => Some(e.to_body()),
                    },
                    (None, ClientBody::Join { sid: wanted }) => match (reg.lookup(&wanted), &nickname) {
                        (None, _) => Some(SessionError::NoSuchSession(wanted).to_body()),
                        (Some(_), None) => Some(ServerBody::error("no-nickname", "send hello first")),
                        (Some(actor), Some(n)) => {
                            let _ = actor.send(Command::Attach { conn, nickname: n.clone(), tx: tx.clone() });
                            attached = Some(actor);
                            None
                        }
                    },
                    (None, _) => Some(ServerBody::error("not-joined", "join a session first")),
                };
                if let Some(reply) = reply {
                    if !send!(reply) {
                        break;
                    }
                }
            }
        }
    }
    if let Some(actor) = attached {
        let _ = actor.send(Command::Detach { conn });
    }
}

async fn create_session(State(reg): State<Arc<Registry>>, body: Bytes) -> Response {
    let config = if body.iter().all(u8::is_ascii_whitespace) {
        Ok(reg.defaults.clone())
    } else {
        serde_json::from_slice::<SessionConfig>(&body)
            .map_err(|e| SessionError::InvalidConfig(e.to_string()))
    };
    match config.and_then(|c| reg.create(None, c)) {
        Ok(sid) => (StatusCode::CREATED, Json(json!({ "sid": sid }))).into_response(),
        Err(e) => (
            StatusCode::BAD_REQUEST,
            Json(json!({ "code": e.code(), "msg": e.to_string() })),
        )
            .into_response(),
    }
}

/// Binds the listener, creates the default session and spawns the server.
/// Returns the bound address (useful with port 0).
pub async fn start(config: ServerConfig) -> Result<(SocketAddr, JoinHandle<()>), ServerError> {
    config.session.validate()?;
    let reg = Arc::new(Registry {
        sessions: Mutex::new(HashMap::new()),
        next_session: AtomicU64::new(0),
        next_conn: AtomicU64::new(0),
        store: Store::open(&config.data_dir)?,
        defaults: config.session.clone(),
    });
    reg.create(Some(DEFAULT_SESSION.to_string()), config.session.clone())?;
    let app = Router::new()
        .route("/ws", get(ws_handler))
        .route("/sessions", post(create_session))
        .with_state(reg);
    let listener = tokio::net::TcpListener::bind(config.addr)
        .await
        .map_err(|source| ServerError::Bind {
            addr: config.addr,
            source,
        })?;
    let addr = listener.local_addr().map_err(|source| ServerError::Bind {
        addr: config.addr,
        source,
    })?;
    tracing::info!(%addr, "listening");
    let handle = tokio::spawn(async move {
        if let Err(e) = axum::serve(listener, app).await {
            tracing::error!(error = %e, "server stopped");
        }
    });
    Ok((addr, handle))
}

/// Runs the server until it fails.
pub async fn serve(config: ServerConfig) -> Result<(), ServerError> {
    let (_, handle) = start(config).await?;
    let _ = handle.await;
    Ok(())
}
