use std::collections::HashSet;

use unicode_normalization::UnicodeNormalization;

/// NFKC, trim, strip surrounding quotes and trailing parenthesized
/// disambiguators, lowercase, collapse whitespace.
pub fn normalize_label(s: &str) -> String {
    let nfkc: String = s.nfkc().collect();
    let mut current = nfkc.trim();
    loop {
        let before = current;
        current = strip_quotes(current).trim();
        current = strip_disambiguator(current).trim();
        if current == before {
            break;
        }
    }
    current
        .to_lowercase()
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
}

fn strip_quotes(s: &str) -> &str {
    for (open, close) in [('"', '"'), ('\'', '\''), ('“', '”'), ('‘', '’')] {
        if s.len() >= 2 && s.starts_with(open) && s.ends_with(close) {
            let inner = &s[open.len_utf8()..s.len() - close.len_utf8()];
            return inner;
        }
    }
    s
}

/// "Titanic (film)" -> "Titanic". A label that is only a parenthesis is kept.
fn strip_disambiguator(s: &str) -> &str {
    if !s.ends_with(')') {
        return s;
    }
    let mut depth = 0usize;
    for (i, c) in s.char_indices().rev() {
        match c {
            ')' => depth += 1,
            '(' => {
                depth -= 1;
                if depth == 0 {
                    let head = s[..i].trim_end();
                    return if head.is_empty() { s } else { head };
                }
            }
            _ => {}
        }
    }
    s
}

/// Character trigrams of `" " + s + " "`; strings too short for a trigram
/// yield the padded string itself.
pub fn trigrams(s: &str) -> HashSet<String> {
    let padded: Vec<char> = std::iter::once(' ')
        .chain(s.chars())
        .chain(std::iter::once(' '))
        .collect();
    if padded.len() < 3 {
        return HashSet::from([padded.into_iter().collect()]);
    }
    padded.windows(3).map(|w| w.iter().collect()).collect()
}

/// 1.0 for equal strings, otherwise the Dice coefficient of the trigram sets.
pub fn label_similarity(a: &str, b: &str) -> f64 {
    if a == b {
        return 1.0;
    }
    let (ta, tb) = (trigrams(a), trigrams(b));
    dice(ta.intersection(&tb).count(), ta.len(), tb.len())
}

pub(crate) fn dice(shared: usize, len_a: usize, len_b: usize) -> f64 {
    if len_a + len_b == 0 {
        return 0.0;
    }
    2.0 * shared as f64 / (len_a + len_b) as f64
}
