//! Versioned JSON envelope: `{"v":1,"type":..,"seq":..,"ts":..,"sid":..,"payload":{..}}`.

use chairplay_catalog::{MeetingPhase, Recommendation};
use chairplay_games::{GameConfig, GameKind, GameResults, GameSnapshot};
use chairplay_gesture::{KeypointSet, ParticipantId};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

pub const PROTOCOL_VERSION: u64 = 1;

/// What the session should do with a game start request's timing.
pub type Trigger = MeetingPhase;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "payload", rename_all = "snake_case")]
pub enum ClientBody {
    Hello {
        nickname: String,
    },
    Join {
        sid: String,
    },
    Pose {
        t_ms: u64,
        keypoints: KeypointSet,
    },
    StartGame {
        game: GameKind,
        trigger: Trigger,
    },
    /// Ends the running episode early; the only way to finish Frost.
    EndGame {},
    Leave {},
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RosterEntry {
    pub pid: ParticipantId,
    pub nickname: String,
    pub join_seq: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "payload", rename_all = "snake_case")]
pub enum ServerBody {
    Welcome {
        pid: ParticipantId,
        sid: String,
    },
    Roster {
        participants: Vec<RosterEntry>,
    },
    BreakPrompt {
        suggestions: Vec<Recommendation>,
    },
    GameStarted {
        game: GameKind,
        seed: u64,
        config: GameConfig,
        warning: bool,
    },
    Snapshot {
        tick: u64,
        game: GameKind,
        state: GameSnapshot,
    },
    GameOver {
        results: GameResults,
    },
    Error {
        code: String,
        msg: String,
    },
}

impl ServerBody {
    pub fn error(code: &str, msg: impl Into<String>) -> Self {
        ServerBody::Error {
            code: code.to_string(),
            msg: msg.into(),
        }
    }
}

/// Message bodies that can travel inside an [`Envelope`].
pub trait Body: Serialize + DeserializeOwned {
    const TYPES: &'static [&'static str];
}

impl Body for ClientBody {
    const TYPES: &'static [&'static str] =
        &["hello", "join", "pose", "start_game", "end_game", "leave"];
}

impl Body for ServerBody {
    const TYPES: &'static [&'static str] = &[
        "welcome",
        "roster",
        "break_prompt",
        "game_started",
        "snapshot",
        "game_over",
        "error",
    ];
}

#[derive(Debug, Clone, PartialEq)]
pub struct Envelope<B> {
    pub v: u64,
    pub seq: u64,
    pub ts: u64,
    pub sid: String,
    pub body: B,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProtocolError {
    #[error("malformed JSON: {0}")]
    MalformedJson(String),
    #[error("unsupported protocol version {0}")]
    BadVersion(u64),
    #[error("unknown message type {0:?}")]
    UnknownType(String),
    #[error("bad payload: {0}")]
    BadPayload(String),
}

impl ProtocolError {
    pub fn code(&self) -> &'static str {
        match self {
            ProtocolError::MalformedJson(_) => "malformed-json",
            ProtocolError::BadVersion(_) => "bad-version",
            ProtocolError::UnknownType(_) => "unknown-type",
            ProtocolError::BadPayload(_) => "bad-payload",
        }
    }

    /// Only a version mismatch ends the connection.
    pub fn closes_connection(&self) -> bool {
        matches!(self, ProtocolError::BadVersion(_))
    }
}

#[derive(Deserialize)]
struct RawEnvelope {
    #[serde(rename = "type")]
    kind: String,
    #[serde(default)]
    seq: u64,
    #[serde(default)]
    ts: u64,
    #[serde(default)]
    sid: String,
    #[serde(default)]
    payload: Option<Value>,
}

impl<B: Body> Envelope<B> {
    pub fn new(seq: u64, ts: u64, sid: impl Into<String>, body: B) -> Self {
        Self {
            v: PROTOCOL_VERSION,
            seq,
            ts,
            sid: sid.into(),
            body,
        }
    }

    pub fn to_value(&self) -> Value {
        let tagged = serde_json::to_value(&self.body).expect("message bodies serialize");
        let Value::Object(mut tagged) = tagged else {
            unreachable!("adjacently tagged enums serialize to objects")
        };
        let mut m = Map::new();
        m.insert("v".into(), self.v.into());
        m.insert("type".into(), tagged.remove("type").unwrap_or(Value::Null));
        m.insert("seq".into(), self.seq.into());
        m.insert("ts".into(), self.ts.into());
        m.insert("sid".into(), self.sid.clone().into());
        m.insert(
            "payload".into(),
            tagged
                .remove("payload")
                .unwrap_or_else(|| Value::Object(Map::new())),
        );
        Value::Object(m)
    }

    pub fn encode(&self) -> String {
        self.to_value().to_string()
    }

    /// Staged decode: JSON, then version, then type, then payload.
    pub fn decode(raw: &str) -> Result<Self, ProtocolError> {
        let value: Value =
            serde_json::from_str(raw).map_err(|e| ProtocolError::MalformedJson(e.to_string()))?;
        let Value::Object(obj) = &value else {
            return Err(ProtocolError::MalformedJson(
                "envelope is not an object".into(),
            ));
        };
        let v = obj
            .get("v")
            .and_then(Value::as_u64)
            .ok_or_else(|| ProtocolError::MalformedJson("missing or invalid `v`".into()))?;
        if v != PROTOCOL_VERSION {
            return Err(ProtocolError::BadVersion(v));
        }
        let raw: RawEnvelope = serde_json::from_value(value)
            .map_err(|e| ProtocolError::MalformedJson(e.to_string()))?;
        if !B::TYPES.contains(&raw.kind.as_str()) {
            return Err(ProtocolError::UnknownType(raw.kind));
        }
        let payload = raw.payload.unwrap_or_else(|| Value::Object(Map::new()));
        let mut tagged = Map::new();
        tagged.insert("type".into(), Value::String(raw.kind));
        tagged.insert("payload".into(), payload);
        let body = serde_json::from_value(Value::Object(tagged))
            .map_err(|e| ProtocolError::BadPayload(e.to_string()))?;
        Ok(Self {
            v,
            seq: raw.seq,
            ts: raw.ts,
            sid: raw.sid,
            body,
        })
    }
}

pub type ClientMessage = Envelope<ClientBody>;
pub type ServerMessage = Envelope<ServerBody>;

#[cfg(test)]
mod tests {
    use super::*;
    use chairplay_gesture::Keypoint;

    fn pose() -> ClientBody {
        let k = Keypoint::new(0.25, 0.5, 0.9);
        ClientBody::Pose {
            t_ms: 1234,
            keypoints: KeypointSet {
                nose: k,
                left_eye: k,
                right_eye: k,
                left_shoulder: k,
                right_shoulder: k,
                mouth_left: k,
                mouth_right: k,
                mouth_top: k,
                mouth_bottom: k,
            },
        }
    }

    #[test]
    fn wire_shape() {
        let m = ClientMessage::new(
            3,
            99,
            "s1",
            ClientBody::Hello {
                nickname: "Ana".into(),
            },
        );
        let v = m.to_value();
        assert_eq!(v["v"], 1);
        assert_eq!(v["type"], "hello");
        assert_eq!(v["payload"]["nickname"], "Ana");
        let p = ClientMessage::new(4, 100, "s1", pose()).to_value();
        assert_eq!(
            p["payload"]["keypoints"]["nose"],
            serde_json::json!([0.25, 0.5, 0.9])
        );
        let leave = ClientMessage::new(5, 0, "s1", ClientBody::Leave {}).to_value();
        assert_eq!(leave["payload"], serde_json::json!({}));
    }

    #[test]
    fn round_trip() {
        for body in [
            ClientBody::Hello {
                nickname: "Bo".into(),
            },
            ClientBody::Join { sid: "main".into() },
            pose(),
            ClientBody::StartGame {
                game: GameKind::Frost,
                trigger: MeetingPhase::MidMeeting,
            },
            ClientBody::EndGame {},
            ClientBody::Leave {},
        ] {
            let m = ClientMessage::new(1, 2, "x", body);
            assert_eq!(ClientMessage::decode(&m.encode()).unwrap(), m);
        }
    }

    #[test]
    fn unknown_payload_fields_are_ignored() {
        let raw = r#"{"v":1,"type":"hello","seq":1,"ts":0,"sid":"","payload":{"nickname":"Ana","avatar":"cat"},"extra":true}"#;
        let m = ClientMessage::decode(raw).unwrap();
        assert_eq!(
            m.body,
            ClientBody::Hello {
                nickname: "Ana".into()
            }
        );
    }

    #[test]
    fn missing_payload_means_empty() {
        let m =
            ClientMessage::decode(r#"{"v":1,"type":"leave","seq":1,"ts":0,"sid":"s"}"#).unwrap();
        assert_eq!(m.body, ClientBody::Leave {});
    }

    #[test]
    fn error_codes() {
        let cases = [
            ("not json", "malformed-json"),
            ("[1,2]", "malformed-json"),
            (r#"{"type":"hello"}"#, "malformed-json"),
            (r#"{"v":2,"type":"hello","payload":{}}"#, "bad-version"),
            (r#"{"v":1,"type":"dance","payload":{}}"#, "unknown-type"),
            (r#"{"v":1,"type":"welcome","payload":{}}"#, "unknown-type"),
            (r#"{"v":1,"type":"hello","payload":{}}"#, "bad-payload"),
            (
                r#"{"v":1,"type":"pose","payload":{"t_ms":-1}}"#,
                "bad-payload",
            ),
        ];
        for (raw, code) in cases {
            let err = ClientMessage::decode(raw).unwrap_err();
            assert_eq!(err.code(), code, "{raw}");
            assert_eq!(err.closes_connection(), code == "bad-version");
        }
    }
}
