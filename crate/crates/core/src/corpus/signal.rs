//! Weekly binning.

use std::collections::BTreeSet;
use std::io::{Read, Write};

use chrono::{DateTime, Duration, NaiveDate, Utc};
use serde::{Deserialize, Serialize};

use super::{CorpusError, TweetRecord};

const WEEK_SECONDS: i64 = 7 * 86_400;

/// Fixed 7-day bins anchored at midnight of `week_start` in a fixed UTC offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeekGrid {
    pub week_start: NaiveDate,
    pub n_weeks: usize,
    #[serde(default)]
    pub utc_offset_seconds: i32,
}

impl WeekGrid {
    pub fn new(week_start: NaiveDate, n_weeks: usize) -> Self {
        Self { week_start, n_weeks, utc_offset_seconds: 0 }
    }

    pub fn with_utc_offset(mut self, seconds: i32) -> Self {
        self.utc_offset_seconds = seconds;
        self
    }

    /// Instant at which bin 0 opens.
    pub fn start(&self) -> DateTime<Utc> {
        self.week_start.and_hms_opt(0, 0, 0).expect("midnight").and_utc() - Duration::seconds(i64::from(self.utc_offset_seconds))
    }

    /// Exclusive end of the last bin.
    pub fn end(&self) -> DateTime<Utc> {
        self.start() + Duration::seconds(WEEK_SECONDS * self.n_weeks as i64)
    }

    pub fn bin_of(&self, t: DateTime<Utc>) -> Option<usize> {
        let offset = (t - self.start()).num_seconds();
        if offset < 0 {
            return None;
        }
        let bin = (offset / WEEK_SECONDS) as usize;
        (bin < self.n_weeks).then_some(bin)
    }

    pub fn week_date(&self, w: usize) -> NaiveDate {
        self.week_start + Duration::days(7 * w as i64)
    }

    pub fn contains(&self, t: DateTime<Utc>) -> bool {
        self.bin_of(t).is_some()
    }
}

/// A contiguous non-negative weekly series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeeklySignal {
    pub week_start: NaiveDate,
    pub values: Vec<f64>,
}

impl WeeklySignal {
    pub fn new(week_start: NaiveDate, values: Vec<f64>) -> Result<Self, CorpusError> {
        if values.is_empty() {
            return Err(CorpusError::InvalidSignal("signal must contain at least one week".into()));
        }
        if let Some((w, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < 0.0) {
            return Err(CorpusError::InvalidSignal(format!("week {w} has invalid value {v}")));
        }
        Ok(Self { week_start, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Same start and length.
    pub fn aligned_with(&self, other: &WeeklySignal) -> bool {
        self.week_start == other.week_start && self.values.len() == other.values.len()
    }

    pub fn scaled(&self, c: f64) -> Result<Self, CorpusError> {
        Self::new(self.week_start, self.values.iter().map(|v| v * c).collect())
    }
}

/// Number of distinct authors with at least one record in each week.
pub fn weekly_unique_user_counts(records: &[TweetRecord], grid: &WeekGrid) -> Result<WeeklySignal, CorpusError> {
    let mut bins: Vec<BTreeSet<&str>> = vec![BTreeSet::new(); grid.n_weeks];
    for r in records {
        let w = grid.bin_of(r.created_at).ok_or_else(|| CorpusError::OutOfRange { tweet_id: r.tweet_id.clone() })?;
        bins[w].insert(&r.author_id);
    }
    WeeklySignal::new(grid.week_start, bins.iter().map(|b| b.len() as f64).collect())
}

#[derive(Serialize, Deserialize)]
struct SignalRow {
    week_start: NaiveDate,
    value: f64,
}

/// CSV with header `week_start,value`.
pub fn write_signal_csv<W: Write>(signal: &WeeklySignal, writer: W) -> Result<(), CorpusError> {
    let mut w = csv::Writer::from_writer(writer);
    for (i, v) in signal.values.iter().enumerate() {
        w.serialize(SignalRow { week_start: signal.week_start + Duration::days(7 * i as i64), value: *v })?;
    }
    w.flush()?;
    Ok(())
}

/// Read a `week_start,value` CSV; rows must be consecutive weeks.
pub fn read_signal_csv<R: Read>(reader: R) -> Result<WeeklySignal, CorpusError> {
    let mut rdr = csv::Reader::from_reader(reader);
    let mut start = None;
    let mut values = Vec::new();
    for row in rdr.deserialize::<SignalRow>() {
        let row = row?;
        let first = *start.get_or_insert(row.week_start);
        let expected = first + Duration::days(7 * values.len() as i64);
        if row.week_start != expected {
            return Err(CorpusError::InvalidSignal(format!("expected week {expected}, found {}", row.week_start)));
        }
        values.push(row.value);
    }
    let start = start.ok_or_else(|| CorpusError::InvalidSignal("no rows".into()))?;
    WeeklySignal::new(start, values)
}
