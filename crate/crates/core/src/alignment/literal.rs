use chrono::{Datelike, NaiveDate};

use super::{normalize_label, AlignmentConfig};
use crate::graph::Literal;

/// `≈_L`: exact, normalized-string, numeric and calendar-date branches.
///
/// Reflexive and symmetric. Not transitive across branches.
pub fn literal_equivalent(a: &Literal, b: &Literal, cfg: &AlignmentConfig) -> bool {
    if a == b || a.lexical() == b.lexical() {
        return true;
    }
    if normalize_label(a.lexical()) == normalize_label(b.lexical()) {
        return true;
    }
    if let (Some(x), Some(y)) = (parse_number(a.lexical()), parse_number(b.lexical())) {
        return numbers_close(x, y, cfg.numeric_rel_tolerance);
    }
    match (
        parse_date(a.lexical(), &cfg.date_formats),
        parse_date(b.lexical(), &cfg.date_formats),
    ) {
        (Some(x), Some(y)) => x.same_as(y),
        _ => false,
    }
}

fn parse_number(s: &str) -> Option<f64> {
    let s = s.trim();
    if s.is_empty() || !s.bytes().any(|b| b.is_ascii_digit()) {
        return None;
    }
    let v: f64 = s.parse().ok()?;
    v.is_finite().then_some(v)
}

fn numbers_close(x: f64, y: f64, tol: f64) -> bool {
    if x == y {
        return true;
    }
    (x - y).abs() <= tol * x.abs().max(y.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum DateValue {
    Day(NaiveDate),
    Year(i32),
}

impl DateValue {
    fn year(self) -> i32 {
        match self {
            DateValue::Day(d) => d.year(),
            DateValue::Year(y) => y,
        }
    }

    /// Full dates compare by day; a bare year matches any date in that year.
    fn same_as(self, other: DateValue) -> bool {
        match (self, other) {
            (DateValue::Day(a), DateValue::Day(b)) => a == b,
            _ => self.year() == other.year(),
        }
    }
}

fn parse_date(s: &str, formats: &[String]) -> Option<DateValue> {
    let s = s.trim();
    let s = s.strip_suffix('Z').unwrap_or(s);
    let bytes = s.as_bytes();
    let year_like = (bytes.len() == 4 && bytes.iter().all(u8::is_ascii_digit))
        || (bytes.len() == 5 && bytes[0] == b'-' && bytes[1..].iter().all(u8::is_ascii_digit));
    if year_like {
        return s.parse().ok().map(DateValue::Year);
    }
    formats
        .iter()
        .find_map(|f| NaiveDate::parse_from_str(s, f).ok())
        .map(DateValue::Day)
}
