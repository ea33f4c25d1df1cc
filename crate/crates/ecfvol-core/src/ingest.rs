//! Tick data to equispaced log-price paths.
//!
//! Raw trades are resampled with the previous-tick rule: each grid point of a
//! trading session takes the log of the last traded price at or before it.
//! Sessions are calendar dates carrying ticks (minus configured exclusions
//! such as half-days); overnight and weekend gaps never produce a return
//! because only within-session increments survive. The per-session segments
//! are re-packed into one equispaced [`PricePath`] plus a session-boundary
//! index list, so estimators may optionally restrict windows to sessions.
//!
//! Timestamps are interpreted in UTC. A session with both endpoints included
//! has `session_length/grid_step + 1` grid points (131 for a 09:30–16:00
//! session on a 3-minute grid), and the default time unit is one month of
//! 21 sessions × 130 intervals, i.e. `Δn = 1/2730`.

use std::collections::BTreeSet;
use std::io::Read;

use chrono::{DateTime, NaiveDate, NaiveTime, TimeZone, Timelike, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::path::{PathError, PricePath};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("tick file is empty")]
    EmptySeries,
    #[error("line {line}: malformed row: {reason}")]
    MalformedRow { line: u64, reason: String },
    #[error("line {line}: non-positive price {price}")]
    NonPositivePrice { line: u64, price: f64 },
    #[error("line {line}: timestamps not strictly increasing ({prev} >= {current})")]
    NonMonotoneTimestamps { line: u64, prev: i64, current: i64 },
    #[error("session spec invalid: {0}")]
    BadSessionSpec(String),
    #[error("no sessions left after exclusions")]
    NoSessions,
    #[error("session {date}: no tick at or before the session open")]
    NoTickBeforeOpen { date: NaiveDate },
    #[error(transparent)]
    Path(#[from] PathError),
}

/// Validated tick-by-tick trades for one symbol.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TickSeries {
    pub timestamps: Vec<i64>,
    pub prices: Vec<f64>,
    pub symbol: String,
}

impl TickSeries {
    pub fn len(&self) -> usize {
        self.timestamps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.timestamps.is_empty()
    }
}

/// Trading-session layout and grid geometry.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SessionSpec {
    pub open_time: NaiveTime,
    pub close_time: NaiveTime,
    pub grid_step_secs: u32,
    /// Dates dropped entirely (half-days and other irregular sessions).
    pub exclusions: BTreeSet<NaiveDate>,
    /// Grid intervals that make up one unit of estimation time; `Δn` of the
    /// output path is the reciprocal. Default 2730 = 21 sessions × 130.
    pub grid_intervals_per_unit: f64,
}

impl Default for SessionSpec {
    fn default() -> Self {
        Self {
            open_time: NaiveTime::from_hms_opt(9, 30, 0).unwrap(),
            close_time: NaiveTime::from_hms_opt(16, 0, 0).unwrap(),
            grid_step_secs: 180,
            exclusions: BTreeSet::new(),
            grid_intervals_per_unit: 21.0 * 130.0,
        }
    }
}

impl SessionSpec {
    fn session_secs(&self) -> Result<i64, IngestError> {
        let secs = self.close_time.num_seconds_from_midnight() as i64
            - self.open_time.num_seconds_from_midnight() as i64;
        if secs <= 0 {
            return Err(IngestError::BadSessionSpec(format!(
                "open {} must precede close {}",
                self.open_time, self.close_time
            )));
        }
        if self.grid_step_secs == 0 || secs % self.grid_step_secs as i64 != 0 {
            return Err(IngestError::BadSessionSpec(format!(
                "grid step {}s does not divide session length {}s",
                self.grid_step_secs, secs
            )));
        }
        if !(self.grid_intervals_per_unit > 0.0) {
            return Err(IngestError::BadSessionSpec(
                "grid_intervals_per_unit must be positive".into(),
            ));
        }
        Ok(secs)
    }

    /// Grid points per session, both endpoints included.
    pub fn points_per_session(&self) -> Result<usize, IngestError> {
        Ok((self.session_secs()? / self.grid_step_secs as i64) as usize + 1)
    }
}

/// A resampled path plus the index (into `log_prices`) where each session's
/// first grid point landed.
#[derive(Debug, Clone)]
pub struct ResampledPath {
    pub path: PricePath,
    pub session_starts: Vec<usize>,
    pub sessions: Vec<NaiveDate>,
}

/// Parses `timestamp,price` rows (optional header). Timestamps are either
/// integer epoch-seconds or RFC-3339; rows must already be in strictly
/// increasing time order — out-of-order input is an error, never sorted away.
pub fn load_ticks<R: Read>(reader: R, symbol: &str) -> Result<TickSeries, IngestError> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);
    let mut timestamps: Vec<i64> = Vec::new();
    let mut prices: Vec<f64> = Vec::new();
    let mut record = csv::StringRecord::new();
    let mut line: u64 = 0;
    loop {
        match csv_reader.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {}
            Err(e) => {
                return Err(IngestError::MalformedRow {
                    line: line + 1,
                    reason: e.to_string(),
                })
            }
        }
        line += 1;
        if record.len() < 2 {
            // Tolerate a single trailing empty line.
            if record.len() == 1 && record[0].trim().is_empty() {
                continue;
            }
            return Err(IngestError::MalformedRow {
                line,
                reason: format!("expected 2 fields, got {}", record.len()),
            });
        }
        let ts_field = record[0].trim();
        let price_field = record[1].trim();
        if line == 1 && ts_field.parse::<i64>().is_err() && parse_rfc3339(ts_field).is_none() {
            // Header row.
            continue;
        }
        let ts = match ts_field.parse::<i64>() {
            Ok(t) => t,
            Err(_) => parse_rfc3339(ts_field).ok_or_else(|| IngestError::MalformedRow {
                line,
                reason: format!("unparseable timestamp '{ts_field}'"),
            })?,
        };
        let price: f64 = price_field.parse().map_err(|_| IngestError::MalformedRow {
            line,
            reason: format!("unparseable price '{price_field}'"),
        })?;
        if !(price > 0.0) || !price.is_finite() {
            return Err(IngestError::NonPositivePrice { line, price });
        }
        if let Some(&prev) = timestamps.last() {
            if ts <= prev {
                return Err(IngestError::NonMonotoneTimestamps {
                    line,
                    prev,
                    current: ts,
                });
            }
        }
        timestamps.push(ts);
        prices.push(price);
    }
    if timestamps.is_empty() {
        return Err(IngestError::EmptySeries);
    }
    Ok(TickSeries {
        timestamps,
        prices,
        symbol: symbol.to_string(),
    })
}

fn parse_rfc3339(s: &str) -> Option<i64> {
    DateTime::parse_from_rfc3339(s).ok().map(|dt| dt.timestamp())
}

/// Previous-tick resampling onto the session grids.
pub fn previous_tick_resample(
    ticks: &TickSeries,
    spec: &SessionSpec,
) -> Result<ResampledPath, IngestError> {
    if ticks.is_empty() {
        return Err(IngestError::EmptySeries);
    }
    let session_secs = spec.session_secs()?;
    let points = (session_secs / spec.grid_step_secs as i64) as usize + 1;
    let delta_n = 1.0 / spec.grid_intervals_per_unit;

    // Sessions = distinct tick dates, minus exclusions.
    let mut dates: Vec<NaiveDate> = Vec::new();
    for &ts in &ticks.timestamps {
        let date = Utc.timestamp_opt(ts, 0).unwrap().date_naive();
        if spec.exclusions.contains(&date) {
            continue;
        }
        if dates.last() != Some(&date) {
            dates.push(date);
        }
    }
    if dates.is_empty() {
        return Err(IngestError::NoSessions);
    }

    let mut log_prices: Vec<f64> = Vec::with_capacity(dates.len() * points);
    let mut session_starts: Vec<usize> = Vec::with_capacity(dates.len());
    let mut cursor = 0usize; // index into ticks, advanced monotonically

    for &date in &dates {
        let day_start = Utc
            .from_utc_datetime(&date.and_time(NaiveTime::from_hms_opt(0, 0, 0).unwrap()))
            .timestamp();
        let open_ts = day_start + spec.open_time.num_seconds_from_midnight() as i64;

        // Previous-tick candidates are scoped to the session's own date.
        while cursor < ticks.len() && ticks.timestamps[cursor] < day_start {
            cursor += 1;
        }
        let day_end = day_start + 86_400;
        let mut last: Option<f64> = None;
        let mut scan = cursor;
        let mut grid_logs = Vec::with_capacity(points);
        for k in 0..points {
            let grid_ts = open_ts + k as i64 * spec.grid_step_secs as i64;
            while scan < ticks.len()
                && ticks.timestamps[scan] <= grid_ts
                && ticks.timestamps[scan] < day_end
            {
                last = Some(ticks.prices[scan]);
                scan += 1;
            }
            match last {
                Some(price) => grid_logs.push(price.ln()),
                None => return Err(IngestError::NoTickBeforeOpen { date }),
            }
        }
        cursor = scan;

        // Re-pack: the first session keeps its levels; each later session is
        // chained onto the previous close so no overnight return exists. The
        // session's first grid point shares the array slot with the previous
        // session's last one.
        if log_prices.is_empty() {
            session_starts.push(0);
            log_prices.extend_from_slice(&grid_logs);
        } else {
            let prev_level = *log_prices.last().unwrap();
            session_starts.push(log_prices.len() - 1);
            let base = grid_logs[0];
            for &lp in &grid_logs[1..] {
                log_prices.push(prev_level + (lp - base));
            }
        }
    }

    let path = PricePath::new(log_prices, delta_n)?;
    Ok(ResampledPath {
        path,
        session_starts,
        sessions: dates,
    })
}
