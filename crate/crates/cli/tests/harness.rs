use chairplay::{
    report_json, run_scenario, snapshots_jsonl, synth_frames, ParticipantSpec, Scenario,
    SegmentKind, TraceSegment,
};
use chairplay_games::{FoodKind, GameConfig, GameKind, GameOutput, GameSnapshot};
use chairplay_gesture::{GestureKind, ParticipantId, RepCounts};
use proptest::prelude::*;

fn seg(kind: SegmentKind, start_s: f64, len_s: f64) -> TraceSegment {
    TraceSegment::new(kind, start_s, len_s)
}

fn scenario(
    game: GameKind,
    seed: u64,
    duration_s: f64,
    participants: Vec<ParticipantSpec>,
) -> Scenario {
    Scenario {
        seed,
        game,
        duration_s,
        participants,
        config: GameConfig::default(),
    }
}

fn chaser(name: &str, secs: f64) -> ParticipantSpec {
    ParticipantSpec::new(name, vec![seg(SegmentKind::ChaseItems {}, 0.0, secs)])
}

#[test]
fn sinusoid_sway_counts_through_the_harness() {
    let trace = vec![
        seg(SegmentKind::Still, 0.0, 2.0),
        seg(
            SegmentKind::Sway {
                amplitude: 0.1,
                period_s: 2.0,
            },
            2.0,
            10.0,
        ),
    ];
    let run = run_scenario(&scenario(
        GameKind::Frost,
        1,
        12.0,
        vec![ParticipantSpec::new("a", trace)],
    ))
    .unwrap();
    let reps = run.report.participants[0].reps;
    assert_eq!((reps.sway_left, reps.sway_right), (5, 5));
    assert!(run.report.participants[0].movement_s > 0.0);
}

#[test]
fn sub_threshold_nod_is_silent() {
    let trace = vec![seg(
        SegmentKind::Nod {
            amplitude: 0.02,
            period_s: 2.0,
        },
        0.0,
        20.0,
    )];
    let run = run_scenario(&scenario(
        GameKind::Frost,
        1,
        20.0,
        vec![ParticipantSpec::new("a", trace)],
    ))
    .unwrap();
    assert_eq!(run.report.participants[0].reps.nod, 0);
}

#[test]
fn full_nod_and_twist_count_once_per_period() {
    let nod = vec![
        seg(SegmentKind::Still, 0.0, 2.0),
        seg(
            SegmentKind::Nod {
                amplitude: 0.1,
                period_s: 2.0,
            },
            2.0,
            10.0,
        ),
    ];
    let twist = vec![seg(SegmentKind::Twist { period_s: 2.0 }, 0.0, 12.0)];
    let run = run_scenario(&scenario(
        GameKind::Frost,
        1,
        12.0,
        vec![
            ParticipantSpec::new("n", nod),
            ParticipantSpec::new("t", twist),
        ],
    ))
    .unwrap();
    let nods = run.report.participants[0].reps.nod;
    let twists = run.report.participants[1].reps.twist;
    assert!((4..=10).contains(&nods), "{nods}");
    assert!((4..=5).contains(&twists), "{twists}");
}

#[test]
fn still_frost_only_grows() {
    let run = run_scenario(&scenario(
        GameKind::Frost,
        1,
        60.0,
        vec![ParticipantSpec::new("a", vec![])],
    ))
    .unwrap();
    let series = &run.report.frost_coverage["a"];
    assert_eq!(series.len(), 1200);
    assert!(series.windows(2).all(|w| w[1] >= w[0]));
    assert!(*series.last().unwrap() > 0.0);
    assert_eq!(run.report.participants[0].movement_s, 0.0);
    assert_eq!(run.report.participants[0].reps, RepCounts::default());
}

#[test]
fn food_rain_scores_match_the_event_log() {
    let mouth = ParticipantSpec::new(
        "m",
        vec![seg(
            SegmentKind::Mouth {
                open_s: 0.7,
                closed_s: 0.9,
            },
            2.0,
            88.0,
        )],
    );
    let run = run_scenario(&scenario(
        GameKind::FoodRain,
        21,
        90.0,
        vec![chaser("c", 90.0), mouth],
    ))
    .unwrap();
    for (i, p) in run.report.results.participants.iter().enumerate() {
        let id = ParticipantId(i as u32 + 1);
        let (mut fruits, mut desserts) = (0i64, 0i64);
        for s in &run.snapshots {
            for o in &s.outputs {
                if let GameOutput::ItemCaught {
                    participant, kind, ..
                } = o
                {
                    if *participant == id {
                        match kind {
                            FoodKind::Fruit => fruits += 1,
                            FoodKind::Dessert => desserts += 1,
                        }
                    }
                }
            }
        }
        assert_eq!(p.score, fruits - desserts, "{}", p.nickname);
        assert_eq!(p.fruits_caught, Some(fruits as u32));
        assert_eq!(p.desserts_caught, Some(desserts as u32));
    }
}

#[test]
fn gesture_counts_match_the_event_log() {
    let s = scenario(
        GameKind::FoodRain,
        3,
        30.0,
        vec![
            chaser("c", 30.0),
            ParticipantSpec::new(
                "s",
                vec![
                    seg(
                        SegmentKind::Sway {
                            amplitude: 0.15,
                            period_s: 1.5,
                        },
                        0.0,
                        10.0,
                    ),
                    seg(
                        SegmentKind::Mouth {
                            open_s: 0.5,
                            closed_s: 0.5,
                        },
                        10.0,
                        10.0,
                    ),
                    seg(SegmentKind::Twist { period_s: 1.0 }, 20.0, 10.0),
                ],
            ),
        ],
    );
    let run = run_scenario(&s).unwrap();
    for p in &run.report.participants {
        let mut counts = RepCounts::default();
        for snap in &run.snapshots {
            for e in snap
                .gestures
                .iter()
                .filter(|e| e.participant_id == p.participant)
            {
                counts.record(e.kind);
            }
        }
        assert_eq!(counts, p.reps, "{}", p.name);
        assert_eq!(
            p.reps,
            run.report
                .results
                .participants
                .iter()
                .find(|r| r.participant == p.participant)
                .unwrap()
                .reps
        );
    }
    assert!(run.report.participants[1].reps.get(GestureKind::TwistRep) > 0);
}

#[test]
fn chasing_beats_sitting_still() {
    let (mut chase, mut still) = (0i64, 0i64);
    for seed in 0..20 {
        let s = scenario(
            GameKind::FoodRain,
            seed,
            90.0,
            vec![
                chaser("c", 90.0),
                ParticipantSpec::new("s", vec![seg(SegmentKind::Still, 0.0, 90.0)]),
            ],
        );
        let r = run_scenario(&s).unwrap().report.results;
        chase += r.participants[0].score;
        still += r.participants[1].score;
    }
    assert!(chase > still, "chase {chase} vs still {still}");
}

#[test]
fn virus_hitter_runs_are_identical() {
    let twist = vec![seg(SegmentKind::Twist { period_s: 2.0 }, 0.0, 120.0)];
    let sway = vec![seg(
        SegmentKind::Sway {
            amplitude: 0.4,
            period_s: 6.0,
        },
        0.0,
        120.0,
    )];
    let players: Vec<ParticipantSpec> = ["a", "b", "c"]
        .iter()
        .map(|n| ParticipantSpec {
            name: n.to_string(),
            trace: twist.clone(),
            hitter_trace: Some(sway.clone()),
        })
        .collect();
    let s = scenario(GameKind::VirusHitter, 9, 120.0, players);
    let hp = |run: &chairplay::Run| -> Vec<u32> {
        run.snapshots
            .iter()
            .map(|s| match s.state {
                GameSnapshot::VirusHitter { hp, .. } => hp,
                _ => unreachable!(),
            })
            .collect()
    };
    let (a, b) = (run_scenario(&s).unwrap(), run_scenario(&s).unwrap());
    assert_eq!(a.report.results.outcome, b.report.results.outcome);
    assert_eq!(hp(&a), hp(&b));
    assert_eq!(report_json(&a.report), report_json(&b.report));

    // the hitter followed the sway trace, so only assistants twisted
    let GameSnapshot::VirusHitter { hitter, .. } = a.snapshots[0].state else {
        unreachable!()
    };
    for p in &a.report.participants {
        assert_eq!(p.reps.twist == 0, p.participant == hitter, "{}", p.name);
    }
}

#[test]
fn invalid_segments_are_rejected() {
    let bad = seg(
        SegmentKind::Sway {
            amplitude: 0.7,
            period_s: 1.0,
        },
        0.0,
        1.0,
    );
    assert_eq!(
        synth_frames(&bad, ParticipantId(1)).unwrap_err().code(),
        "invalid-segment"
    );
    let s = scenario(
        GameKind::Frost,
        1,
        5.0,
        vec![ParticipantSpec::new("a", vec![bad])],
    );
    assert_eq!(run_scenario(&s).unwrap_err().code(), "invalid-segment");
}

fn segment_kind() -> impl Strategy<Value = SegmentKind> {
    prop_oneof![
        Just(SegmentKind::Still),
        (0.01f64..=0.5, 0.2f64..5.0).prop_map(|(amplitude, period_s)| SegmentKind::Sway {
            amplitude,
            period_s
        }),
        (0.2f64..5.0).prop_map(|period_s| SegmentKind::Twist { period_s }),
        (0.01f64..=0.5, 0.2f64..5.0).prop_map(|(amplitude, period_s)| SegmentKind::Nod {
            amplitude,
            period_s
        }),
        (0.1f64..2.0, 0.1f64..2.0)
            .prop_map(|(open_s, closed_s)| SegmentKind::Mouth { open_s, closed_s }),
        Just(SegmentKind::ChaseItems {}),
        (0.5f64..3.0).prop_map(|period_s| SegmentKind::Sweep { period_s }),
    ]
}

fn trace() -> impl Strategy<Value = Vec<TraceSegment>> {
    prop::collection::vec((segment_kind(), 0.0f64..2.0, 0.5f64..5.0), 0..4).prop_map(|parts| {
        let mut t = 0.0;
        parts
            .into_iter()
            .map(|(kind, gap, len)| {
                let s = TraceSegment::new(kind, t + gap, len);
                t = s.end_s();
                s
            })
            .collect()
    })
}

fn arb_scenario() -> impl Strategy<Value = Scenario> {
    (
        any::<u64>(),
        prop::sample::select(GameKind::ALL.to_vec()),
        1.0f64..12.0,
        prop::collection::vec((trace(), prop::option::of(trace())), 2..4),
    )
        .prop_map(|(seed, game, duration_s, parts)| Scenario {
            seed,
            game,
            duration_s,
            participants: parts
                .into_iter()
                .enumerate()
                .map(|(i, (trace, hitter_trace))| ParticipantSpec {
                    name: format!("p{i}"),
                    trace,
                    hitter_trace,
                })
                .collect(),
            config: GameConfig::default(),
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn runs_are_byte_identical(s in arb_scenario()) {
        let a = run_scenario(&s).unwrap();
        let b = run_scenario(&s).unwrap();
        prop_assert_eq!(report_json(&a.report), report_json(&b.report));
        prop_assert_eq!(snapshots_jsonl(&a.snapshots), snapshots_jsonl(&b.snapshots));
        prop_assert_eq!(a.snapshots.len() as u64, a.report.ticks);
        for p in &a.report.participants {
            prop_assert!(p.movement_s >= 0.0 && p.movement_s <= s.duration_s + 0.05);
        }
        if s.game == GameKind::Frost {
            for series in a.report.frost_coverage.values() {
                prop_assert_eq!(series.len() as u64, a.report.ticks);
            }
        } else {
            prop_assert!(a.report.frost_coverage.is_empty());
        }
    }

    #[test]
    fn scenarios_round_trip_through_json(s in arb_scenario()) {
        let text = serde_json::to_string(&s).unwrap();
        let back: Scenario = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, s);
    }
}
