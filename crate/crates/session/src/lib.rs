//! Authoritative meeting-game session server.
//!
//! [`Session`] is the synchronous core: roster and nicknames, the
//! lobby/meeting/break/in-game phase machine, the fixed 50 ms tick with
//! bounded catch-up, and episode bookkeeping. [`server`] wraps it in an axum
//! WebSocket service, and [`store`] persists results as flat files.

pub mod protocol;
pub mod server;
mod session;
pub mod store;

pub use protocol::{
    ClientBody, ClientMessage, Envelope, ProtocolError, RosterEntry, ServerBody, ServerMessage,
    Trigger, PROTOCOL_VERSION,
};
pub use server::{serve, start, ServerConfig, ServerError, DEFAULT_SESSION};
pub use session::{
    normalize_nickname, start_time_conflict, BreakContext, Outbound, Participant, Phase, Recipient,
    Session, SessionConfig, SessionError, MAX_CATCH_UP_TICKS, MAX_NICKNAME_CHARS,
};
pub use store::{CumulativeLeaderboard, ResultsRecord, Store, StoreError, Totals};
