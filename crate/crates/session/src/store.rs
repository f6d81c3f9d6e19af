//! Flat-file persistence: an append-only `results.jsonl` log and a
//! `leaderboard.json` snapshot that can always be rebuilt from the log.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use chairplay_games::GameResults;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const RESULTS_FILE: &str = "results.jsonl";
pub const LEADERBOARD_FILE: &str = "leaderboard.json";

/// One completed episode, as stored on one log line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultsRecord {
    pub timestamp_ms: u64,
    pub session_id: String,
    #[serde(flatten)]
    pub results: GameResults,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Totals {
    pub score: i64,
    pub episodes: u32,
}

/// Cumulative per-nickname standing across episodes.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CumulativeLeaderboard(pub BTreeMap<String, Totals>);

impl CumulativeLeaderboard {
    pub fn apply(&mut self, record: &ResultsRecord) {
        for p in &record.results.participants {
            let t = self.0.entry(p.nickname.clone()).or_default();
            t.score += p.score;
            t.episodes += 1;
        }
    }

    pub fn from_records<'a>(records: impl IntoIterator<Item = &'a ResultsRecord>) -> Self {
        let mut board = Self::default();
        for r in records {
            board.apply(r);
        }
        board
    }

    pub fn get(&self, nickname: &str) -> Option<Totals> {
        self.0.get(nickname).copied()
    }
}

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path} line {line}: {source}")]
    Corrupt {
        path: PathBuf,
        line: usize,
        #[source]
        source: serde_json::Error,
    },
}

#[derive(Debug, Clone)]
pub struct Store {
    dir: PathBuf,
}

impl Store {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, StoreError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|source| StoreError::Io {
            path: dir.clone(),
            source,
        })?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn results_path(&self) -> PathBuf {
        self.dir.join(RESULTS_FILE)
    }

    pub fn leaderboard_path(&self) -> PathBuf {
        self.dir.join(LEADERBOARD_FILE)
    }

    /// Appends one log line and rewrites the leaderboard snapshot from the
    /// whole log.
    pub fn append(&self, record: &ResultsRecord) -> Result<CumulativeLeaderboard, StoreError> {
        let path = self.results_path();
        let io_err = |source| StoreError::Io {
            path: path.clone(),
            source,
        };
        let mut line = serde_json::to_string(record).expect("records serialize");
        line.push('\n');
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(io_err)?;
        f.write_all(line.as_bytes()).map_err(io_err)?;
        f.sync_data().map_err(io_err)?;

        // the log is the source of truth; the snapshot is derived from it
        let board = self.rebuild_leaderboard()?;
        self.write_leaderboard(&board)?;
        Ok(board)
    }

    pub fn load_results(&self) -> Result<Vec<ResultsRecord>, StoreError> {
        let path = self.results_path();
        let f = match File::open(&path) {
            Ok(f) => f,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(source) => return Err(StoreError::Io { path, source }),
        };
        let mut out = Vec::new();
        for (i, line) in BufReader::new(f).lines().enumerate() {
            let line = line.map_err(|source| StoreError::Io {
                path: path.clone(),
                source,
            })?;
            if line.trim().is_empty() {
                continue;
            }
            out.push(
                serde_json::from_str(&line).map_err(|source| StoreError::Corrupt {
                    path: path.clone(),
                    line: i + 1,
                    source,
                })?,
            );
        }
        Ok(out)
    }

    /// Reads `leaderboard.json`; empty when the file does not exist yet.
    pub fn load_leaderboard(&self) -> Result<CumulativeLeaderboard, StoreError> {
        let path = self.leaderboard_path();
        match fs::read_to_string(&path) {
            Ok(text) => serde_json::from_str(&text).map_err(|source| StoreError::Corrupt {
                path,
                line: 1,
                source,
            }),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(CumulativeLeaderboard::default()),
            Err(source) => Err(StoreError::Io { path, source }),
        }
    }

    pub fn rebuild_leaderboard(&self) -> Result<CumulativeLeaderboard, StoreError> {
        Ok(CumulativeLeaderboard::from_records(&self.load_results()?))
    }

    fn write_leaderboard(&self, board: &CumulativeLeaderboard) -> Result<(), StoreError> {
        let path = self.leaderboard_path();
        let tmp = self.dir.join(format!("{LEADERBOARD_FILE}.tmp"));
        let text = serde_json::to_string_pretty(board).expect("leaderboard serializes");
        fs::write(&tmp, text + "\n")
            .and_then(|()| fs::rename(&tmp, &path))
            .map_err(|source| StoreError::Io { path, source })
    }
}
