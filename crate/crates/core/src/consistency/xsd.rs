//! Lexical-space validators for the XSD datatypes used by attribute
//! declarations.

use std::sync::LazyLock;

use chrono::NaiveDate;
use regex::Regex;

use crate::graph::{vocab::xsd, Iri};

static INTEGER: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^[+-]?[0-9]+$").unwrap());
static DECIMAL: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^[+-]?([0-9]+(\.[0-9]*)?|\.[0-9]+)$").unwrap());
static DOUBLE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^([+-]?([0-9]+(\.[0-9]*)?|\.[0-9]+)([eE][+-]?[0-9]+)?|[+-]?INF|NaN)$").unwrap()
});
static DATE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^(-?[0-9]{4,})-([0-9]{2})-([0-9]{2})(Z|[+-][0-9]{2}:[0-9]{2})?$").unwrap()
});
static G_YEAR: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^-?[0-9]{4,}(Z|[+-][0-9]{2}:[0-9]{2})?$").unwrap());

/// Outcome of validating a lexical form against a datatype.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Validity {
    Valid,
    Invalid,
    /// No validator for this datatype; treated as valid.
    Unchecked,
}

pub fn validate_lexical(lexical: &str, datatype: &Iri) -> Validity {
    let ok = if *datatype == xsd::string() {
        true
    } else if *datatype == xsd::integer() {
        INTEGER.is_match(lexical)
    } else if *datatype == xsd::non_negative_integer() {
        INTEGER.is_match(lexical) && lexical.parse::<i128>().is_ok_and(|v| v >= 0)
    } else if *datatype == xsd::decimal() {
        DECIMAL.is_match(lexical)
    } else if *datatype == xsd::double() {
        DOUBLE.is_match(lexical)
    } else if *datatype == xsd::date() {
        valid_date(lexical)
    } else if *datatype == xsd::g_year() {
        G_YEAR.is_match(lexical)
    } else if *datatype == xsd::boolean() {
        matches!(lexical, "true" | "false" | "1" | "0")
    } else {
        return Validity::Unchecked;
    };
    if ok {
        Validity::Valid
    } else {
        Validity::Invalid
    }
}

fn valid_date(lexical: &str) -> bool {
    let Some(caps) = DATE.captures(lexical) else {
        return false;
    };
    let (Ok(y), Ok(m), Ok(d)) = (caps[1].parse::<i32>(), caps[2].parse(), caps[3].parse()) else {
        return false;
    };
    NaiveDate::from_ymd_opt(y, m, d).is_some()
}
