use serde::{Deserialize, Serialize};

use crate::dimension::Dimension;
use crate::error::CatalogError;

pub const RATINGS_HEADER: [&str; 4] = ["participant_id", "game_id", "dimension", "value"];

/// One rater's position of one game on one dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatingRecord {
    pub participant_id: String,
    pub game: String,
    pub dimension: Dimension,
    pub value: f64,
}

/// Parses `participant_id,game_id,dimension,value` rows. Fields are trimmed
/// and blank lines skipped; errors carry the 1-based file line.
pub fn parse_ratings_csv(text: &str) -> Result<Vec<RatingRecord>, CatalogError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = reader.records();

    match rows.next() {
        Some(Ok(h)) if h.iter().eq(RATINGS_HEADER) => {}
        _ => return Err(CatalogError::MissingHeader),
    }

    let mut records = Vec::new();
    for row in rows {
        let row = row.map_err(|e| CatalogError::BadRow {
            line: e.position().map_or(0, |p| p.line()),
            reason: e.to_string(),
        })?;
        let line = row.position().map_or(0, |p| p.line());
        let bad = |reason: String| CatalogError::BadRow { line, reason };
        if row.len() != 4 {
            return Err(bad(format!("expected 4 fields, found {}", row.len())));
        }
        if row[0].is_empty() || row[1].is_empty() {
            return Err(bad("empty participant_id or game_id".into()));
        }
        let dimension: Dimension = row[2]
            .parse()
            .map_err(|_| bad(format!("unknown dimension {:?}", &row[2])))?;
        let value: f64 = row[3]
            .parse()
            .map_err(|_| bad(format!("value {:?} is not a number", &row[3])))?;
        if !(0.0..=1.0).contains(&value) {
            return Err(bad(format!("value {value} out of range [0, 1]")));
        }
        records.push(RatingRecord {
            participant_id: row[0].to_string(),
            game: row[1].to_string(),
            dimension,
            value,
        });
    }
    Ok(records)
}

/// Inverse of [`parse_ratings_csv`].
pub fn write_ratings_csv(records: &[RatingRecord]) -> String {
    let mut out = RATINGS_HEADER.join(",");
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.participant_id, r.game, r.dimension, r.value
        ));
    }
    out
}
