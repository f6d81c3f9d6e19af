use chairplay_catalog::MeetingPhase;
use chairplay_games::{GameKind, GameResults, Outcome, ParticipantResult};
use chairplay_gesture::{Keypoint, KeypointSet, ParticipantId, RepCounts};
use chairplay_session::{
    CumulativeLeaderboard, Phase, ResultsRecord, ServerBody, ServerMessage, Session, SessionConfig,
    SessionError, Store,
};
use proptest::prelude::*;

fn pose(nose_x: f64) -> KeypointSet {
    KeypointSet {
        nose: Keypoint::at(nose_x, 0.4),
        left_eye: Keypoint::at(0.45, 0.36),
        right_eye: Keypoint::at(0.55, 0.36),
        left_shoulder: Keypoint::at(0.35, 0.55),
        right_shoulder: Keypoint::at(0.65, 0.55),
        mouth_left: Keypoint::at(0.46, 0.47),
        mouth_right: Keypoint::at(0.54, 0.47),
        mouth_top: Keypoint::at(0.5, 0.465),
        mouth_bottom: Keypoint::at(0.5, 0.475),
    }
}

fn short_breaks() -> SessionConfig {
    SessionConfig {
        break_interval_s: 2.0,
        break_length_s: 1.0,
        ..SessionConfig::default()
    }
}

fn bodies(out: &[chairplay_session::Outbound]) -> Vec<&ServerBody> {
    out.iter().map(|o| &o.body).collect()
}

#[test]
fn break_prompt_fires_once_and_break_ends() {
    let mut s = Session::new("s", short_breaks()).unwrap();
    s.join("Ana").unwrap();
    let mut prompts = 0;
    for tick in 1..=40 {
        let out = s.step();
        for b in bodies(&out) {
            if let ServerBody::BreakPrompt { suggestions } = b {
                prompts += 1;
                assert_eq!(tick, 40);
                // symmetric break context admits Food Rain only
                assert_eq!(suggestions.len(), 1);
                assert_eq!(suggestions[0].game, "food_rain");
            }
        }
    }
    assert_eq!(prompts, 1);
    assert_eq!(s.phase(), Phase::Break);
    for _ in 0..20 {
        assert!(s.step().is_empty());
    }
    assert_eq!(s.phase(), Phase::Meeting);
    assert_eq!(s.next_break_at(), 100);
}

#[test]
fn one_snapshot_per_tick_until_game_over() {
    let mut cfg = SessionConfig::default();
    cfg.games.food_rain.duration_s = 3.0;
    let mut s = Session::new("s", cfg).unwrap();
    let (a, _) = s.join("Ana").unwrap();
    s.join("Bo").unwrap();
    s.start_game(GameKind::FoodRain, MeetingPhase::Break)
        .unwrap();
    assert_eq!(s.phase(), Phase::InGame);
    let mut snapshots = Vec::new();
    let mut game_over = None;
    for tick in 1..=60u64 {
        s.submit_pose(a.pid, tick * 50, pose(0.5)).unwrap();
        let out = s.step();
        let snaps: Vec<_> = out
            .iter()
            .filter_map(|o| match &o.body {
                ServerBody::Snapshot { tick, .. } => Some(*tick),
                _ => None,
            })
            .collect();
        assert_eq!(snaps.len(), 1);
        snapshots.extend(snaps);
        for o in out {
            if let ServerBody::GameOver { results } = o.body {
                game_over = Some((tick, results));
            }
        }
    }
    assert_eq!(snapshots, (1..=60).collect::<Vec<_>>());
    let (tick, results) = game_over.unwrap();
    assert_eq!(tick, 60);
    assert_eq!(results.outcome, Outcome::Completed);
    assert_eq!(results.participants.len(), 2);
    assert_eq!(s.phase(), Phase::Meeting);
    assert!(s.step().is_empty());
}

#[test]
fn frost_runs_until_ended_and_is_persisted() {
    let dir = tempfile::tempdir().unwrap();
    let store = Store::open(dir.path()).unwrap();
    let mut s = Session::new("s", SessionConfig::default())
        .unwrap()
        .with_store(store.clone());
    let (a, _) = s.join("Ana").unwrap();
    s.advance(1_000_000);
    s.start_game(GameKind::Frost, MeetingPhase::MidMeeting)
        .unwrap();
    for t in 1..=200u64 {
        s.submit_pose(a.pid, t * 50, pose(0.5)).unwrap();
        s.advance(1_000_000 + t * 50);
    }
    assert_eq!(s.phase(), Phase::InGame);
    let (results, out) = s.end_game().unwrap();
    assert!(matches!(
        out.last().unwrap().body,
        ServerBody::GameOver { .. }
    ));
    assert_eq!(results.game, GameKind::Frost);
    assert!(results.participants[0].final_coverage.unwrap() > 0.0);

    let log = store.load_results().unwrap();
    assert_eq!(log.len(), 1);
    assert_eq!(log[0].timestamp_ms, 1_010_000);
    assert_eq!(log[0].session_id, "s");
    assert_eq!(log[0].results, results);
    assert_eq!(
        store
            .load_leaderboard()
            .unwrap()
            .get("Ana")
            .unwrap()
            .episodes,
        1
    );
}

fn record(scores: &[(&str, i64)]) -> ResultsRecord {
    ResultsRecord {
        timestamp_ms: 7,
        session_id: "s".into(),
        results: GameResults {
            game: GameKind::FoodRain,
            outcome: Outcome::Completed,
            duration_ms: 90_000,
            participants: scores
                .iter()
                .enumerate()
                .map(|(i, &(n, score))| ParticipantResult {
                    participant: ParticipantId(i as u32),
                    nickname: n.into(),
                    score,
                    role: None,
                    final_coverage: None,
                    clear_count: None,
                    fruits_caught: Some(score.max(0) as u32),
                    desserts_caught: Some(0),
                    missed: Some(1),
                    bombs_loaded: None,
                    launches: None,
                    reps: RepCounts::default(),
                })
                .collect(),
        },
    }
}

#[test]
fn cumulative_scores_sum_and_rebuild_from_log() {
    let dir = tempfile::tempdir().unwrap();
    let store = Store::open(dir.path()).unwrap();
    store.append(&record(&[("A", 3), ("B", 1)])).unwrap();
    let board = store.append(&record(&[("A", 2)])).unwrap();
    assert_eq!(board.get("A").unwrap().score, 5);
    assert_eq!(board.get("A").unwrap().episodes, 2);
    assert_eq!(board.get("B").unwrap().score, 1);

    let lines = std::fs::read_to_string(store.results_path()).unwrap();
    assert_eq!(lines.lines().count(), 2);
    let first: serde_json::Value = serde_json::from_str(lines.lines().next().unwrap()).unwrap();
    assert_eq!(first["participants"][0]["score"], 3);
    assert_eq!(first["game"], "food_rain");

    assert_eq!(
        store.load_leaderboard().unwrap(),
        store.rebuild_leaderboard().unwrap()
    );
    // losing the snapshot loses nothing
    std::fs::remove_file(store.leaderboard_path()).unwrap();
    assert_eq!(store.rebuild_leaderboard().unwrap(), board);
}

#[test]
fn log_is_append_only() {
    let dir = tempfile::tempdir().unwrap();
    let store = Store::open(dir.path()).unwrap();
    let mut prefix = String::new();
    for i in 0..5 {
        store.append(&record(&[("A", i)])).unwrap();
        let now = std::fs::read_to_string(store.results_path()).unwrap();
        assert!(now.starts_with(&prefix));
        prefix = now;
    }
    let board = CumulativeLeaderboard::from_records(&store.load_results().unwrap());
    assert_eq!(board.get("A").unwrap().score, 10);
}

#[test]
fn unwritable_store_reports_but_still_ends_the_game() {
    let dir = tempfile::tempdir().unwrap();
    let store = Store::open(dir.path()).unwrap();
    // a directory where the log file should be
    std::fs::create_dir(store.results_path()).unwrap();
    let mut s = Session::new("s", SessionConfig::default())
        .unwrap()
        .with_store(store);
    s.join("Ana").unwrap();
    s.start_game(GameKind::Frost, MeetingPhase::MidMeeting)
        .unwrap();
    let (_, out) = s.end_game().unwrap();
    assert!(matches!(&out[0].body, ServerBody::Error { code, .. } if code == "io-error"));
    assert_eq!(s.store_errors(), 1);
    assert_eq!(s.phase(), Phase::Meeting);
}

#[derive(Debug, Clone)]
enum Op {
    Join(String),
    Leave(usize),
    Pose(usize, f64),
    Start(GameKind, MeetingPhase),
    End,
    Advance(u64),
    Close,
}

fn op() -> impl Strategy<Value = Op> {
    prop_oneof![
        2 => prop::sample::select(vec!["Ana", "Bo", "Cy", "Ana"]).prop_map(|s| Op::Join(s.to_string())),
        1 => (0usize..4).prop_map(Op::Leave),
        6 => ((0usize..4), 0.2f64..0.8).prop_map(|(i, x)| Op::Pose(i, x)),
        2 => (
            prop_oneof![Just(GameKind::Frost), Just(GameKind::FoodRain), Just(GameKind::VirusHitter)],
            prop_oneof![Just(MeetingPhase::Break), Just(MeetingPhase::MidMeeting)],
        ).prop_map(|(k, p)| Op::Start(k, p)),
        1 => Just(Op::End),
        6 => (0u64..3000).prop_map(Op::Advance),
        1 => Just(Op::Close),
    ]
}

/// Applies `ops` and returns every outbound body as JSON plus the phase
/// trail.
fn run(ops: &[Op]) -> (Vec<String>, Vec<Phase>) {
    let mut cfg = short_breaks();
    cfg.games.food_rain.duration_s = 2.0;
    cfg.games.virus_hitter.duration_s = 2.0;
    let mut s = Session::new("s", cfg).unwrap();
    let mut now = 0u64;
    let mut t = 0u64;
    let mut log = Vec::new();
    let mut phases = vec![s.phase()];
    for op in ops {
        let out = match op {
            Op::Join(n) => s.join(n).map(|(_, o)| o),
            Op::Leave(i) => match s.roster().get(*i) {
                Some(p) => s.leave(p.pid),
                None => Ok(Vec::new()),
            },
            Op::Pose(i, x) => match s.roster().get(*i) {
                Some(p) => {
                    t += 50;
                    s.submit_pose(p.pid, t, pose(*x)).map(|()| Vec::new())
                }
                None => Ok(Vec::new()),
            },
            Op::Start(k, p) => s.start_game(*k, *p),
            Op::End => s.end_game().map(|(_, o)| o),
            Op::Advance(dt) => {
                now += dt;
                Ok(s.advance(now).1)
            }
            Op::Close => Ok(s.close()),
        };
        match out {
            Ok(out) => log.extend(out.iter().map(|o| serde_json::to_string(&o.body).unwrap())),
            Err(e) => log.push(format!("err {}", e.code())),
        }
        phases.push(s.phase());
    }
    (log, phases)
}

fn allowed(from: Phase, to: Phase) -> bool {
    use Phase::*;
    from == to
        || to == Ended
        || matches!(
            (from, to),
            (Lobby, Meeting)
                | (Meeting, Break)
                | (Break, Meeting)
                | (Meeting, InGame)
                | (Break, InGame)
                | (InGame, Meeting)
                | (InGame, Break)
        )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn replaying_an_inbound_log_is_byte_identical(ops in prop::collection::vec(op(), 1..150)) {
        let (a, _) = run(&ops);
        let (b, _) = run(&ops);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn phases_follow_the_graph(ops in prop::collection::vec(op(), 1..150)) {
        let (_, phases) = run(&ops);
        for w in phases.windows(2) {
            prop_assert!(allowed(w[0], w[1]), "{:?} -> {:?}", w[0], w[1]);
        }
    }

    #[test]
    fn raw_garbage_never_disturbs_a_session(raws in prop::collection::vec(any::<String>(), 1..50)) {
        let mut s = Session::new("s", SessionConfig::default()).unwrap();
        let (a, _) = s.join("Ana").unwrap();
        for raw in &raws {
            if let Ok(m) = chairplay_session::ClientMessage::decode(raw) {
                if let chairplay_session::ClientBody::Pose { t_ms, keypoints } = m.body {
                    let _ = s.submit_pose(a.pid, t_ms, keypoints);
                }
            }
            s.step();
        }
        prop_assert_eq!(s.phase(), Phase::Meeting);
    }
}

#[test]
fn outbound_bodies_encode_as_envelopes() {
    let mut s = Session::new("s", SessionConfig::default()).unwrap();
    let (_, out) = s.join("Ana").unwrap();
    let text = ServerMessage::new(1, 0, "s", out[0].body.clone()).encode();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["type"], "roster");
    assert_eq!(v["payload"]["participants"][0]["nickname"], "Ana");
    assert_eq!(v["payload"]["participants"][0]["join_seq"], 0);
}

#[test]
fn ended_session_rejects_everything() {
    let mut s = Session::new("s", SessionConfig::default()).unwrap();
    let (a, _) = s.join("Ana").unwrap();
    s.close();
    assert_eq!(s.phase(), Phase::Ended);
    assert_eq!(s.leave(a.pid), Err(SessionError::SessionEnded));
    assert_eq!(
        s.start_game(GameKind::Frost, MeetingPhase::MidMeeting),
        Err(SessionError::SessionEnded)
    );
    assert_eq!(s.advance(10_000), (0, Vec::new()));
}
