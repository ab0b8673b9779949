use rug::Integer;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BfileError {
    #[error("line {line}: malformed entry {text:?}")]
    MalformedLine { line: usize, text: String },
    #[error("line {line}: index {got} does not follow {prev}")]
    NonConsecutiveIndex { line: usize, prev: i64, got: i64 },
    #[error("b-file has no entries")]
    Empty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Network,
    Fixture,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OeisEntry {
    pub anum: String,
    /// Index of the first value.
    pub offset: i64,
    pub values: Vec<Integer>,
    pub source: Source,
}

/// `A` followed by exactly six digits.
pub fn valid_anum(s: &str) -> bool {
    s.len() == 7 && s.starts_with('A') && s[1..].bytes().all(|b| b.is_ascii_digit())
}

/// Parses `index value` lines; blank lines and `#` comments are skipped.
/// The returned entry has an empty `anum` and [`Source::Fixture`].
pub fn parse_bfile(text: &str) -> Result<OeisEntry, BfileError> {
    let mut values = Vec::new();
    let mut offset = 0;
    let mut prev: Option<i64> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || BfileError::MalformedLine { line: i + 1, text: raw.to_string() };
        let mut it = line.split_whitespace();
        let (Some(idx), Some(val), None) = (it.next(), it.next(), it.next()) else {
            return Err(bad());
        };
        let idx: i64 = idx.parse().map_err(|_| bad())?;
        let val: Integer = val.parse().map_err(|_| bad())?;
        match prev {
            None => offset = idx,
            Some(p) if idx != p + 1 => return Err(BfileError::NonConsecutiveIndex { line: i + 1, prev: p, got: idx }),
            Some(_) => {}
        }
        prev = Some(idx);
        values.push(val);
    }
    if values.is_empty() {
        return Err(BfileError::Empty);
    }
    Ok(OeisEntry { anum: String::new(), offset, values, source: Source::Fixture })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_values() {
        let e = parse_bfile("0 1\n1 1\n2 1\n").unwrap();
        assert_eq!(e.values, vec![1, 1, 1]);
        assert_eq!(e.offset, 0);
    }

    #[test]
    fn comments_and_big_values() {
        let e = parse_bfile("# header\n\n5 -3\n6 123456789012345678901234567890\n").unwrap();
        assert_eq!(e.offset, 5);
        assert_eq!(e.values[0], -3);
        assert_eq!(e.values[1].to_string(), "123456789012345678901234567890");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_bfile("abc"), Err(BfileError::MalformedLine { line: 1, .. })));
        assert!(matches!(parse_bfile("0 1 2"), Err(BfileError::MalformedLine { .. })));
        assert!(matches!(parse_bfile("0 1\n2 1\n"), Err(BfileError::NonConsecutiveIndex { prev: 0, got: 2, .. })));
        assert_eq!(parse_bfile("# nothing\n"), Err(BfileError::Empty));
    }

    #[test]
    fn anum_grammar() {
        assert!(valid_anum("A007318"));
        assert!(!valid_anum("A07318"));
        assert!(!valid_anum("B007318"));
        assert!(!valid_anum("A00731x"));
    }
}
