use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeaderboardEntry {
    pub rank: u32,
    pub nickname: String,
    pub score: i64,
}

/// Standard competition ranking ("1-2-2-4"). `scores` must be in join order;
/// equal scores keep that order.
pub fn leaderboard(scores: &[(String, i64)]) -> Vec<LeaderboardEntry> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    // stable: ties stay in join order
    order.sort_by(|&a, &b| scores[b].1.cmp(&scores[a].1));
    let mut out: Vec<LeaderboardEntry> = Vec::with_capacity(scores.len());
    for (pos, &i) in order.iter().enumerate() {
        let (nickname, score) = &scores[i];
        let rank = match out.last() {
            Some(prev) if prev.score == *score => prev.rank,
            _ => pos as u32 + 1,
        };
        out.push(LeaderboardEntry {
            rank,
            nickname: nickname.clone(),
            score: *score,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[(&str, i64)]) -> Vec<(String, i64)> {
        v.iter().map(|(n, x)| (n.to_string(), *x)).collect()
    }

    fn e(rank: u32, nickname: &str, score: i64) -> LeaderboardEntry {
        LeaderboardEntry {
            rank,
            nickname: nickname.into(),
            score,
        }
    }

    #[test]
    fn distinct_scores() {
        assert_eq!(
            leaderboard(&s(&[("A", 3), ("B", 1)])),
            vec![e(1, "A", 3), e(2, "B", 1)]
        );
    }

    #[test]
    fn ties_share_rank_and_skip() {
        assert_eq!(
            leaderboard(&s(&[("A", 2), ("B", 2), ("C", 0)])),
            vec![e(1, "A", 2), e(1, "B", 2), e(3, "C", 0)]
        );
        assert_eq!(
            leaderboard(&s(&[("C", 0), ("A", 5), ("B", 2), ("D", 2)])),
            vec![e(1, "A", 5), e(2, "B", 2), e(2, "D", 2), e(4, "C", 0)]
        );
    }

    #[test]
    fn empty() {
        assert!(leaderboard(&[]).is_empty());
    }

    #[test]
    fn negative_scores_rank_last() {
        assert_eq!(
            leaderboard(&s(&[("A", -1), ("B", 0)])),
            vec![e(1, "B", 0), e(2, "A", -1)]
        );
    }
}
