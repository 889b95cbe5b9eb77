//! Permutation files: one integer per line, or a JSON array.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::Permutation;

/// Parses either format. Distinct keys outside `1..=n` are normalized to ranks.
pub fn parse_permutation(text: &str) -> Result<Permutation> {
    let trimmed = text.trim_start_matches('\u{feff}').trim();
    let keys: Vec<i64> = if trimmed.starts_with('[') {
        serde_json::from_str(trimmed).map_err(|e| Error::Malformed(e.to_string()))?
    } else {
        trimmed
            .lines()
            .enumerate()
            .map(|(i, line)| (i, line.trim()))
            .filter(|(_, line)| !line.is_empty())
            .map(|(i, line)| {
                line.parse::<i64>()
                    .map_err(|_| Error::Malformed(format!("line {}: {line:?} is not an integer", i + 1)))
            })
            .collect::<Result<_>>()?
    };
    Permutation::from_keys(&keys)
}

pub fn format_permutation_lines(perm: &Permutation) -> String {
    let mut out = String::with_capacity(perm.len() * 6);
    for x in perm.iter() {
        writeln!(out, "{x}").unwrap();
    }
    out
}

pub fn format_permutation_json(perm: &Permutation) -> String {
    serde_json::to_string(perm).expect("a Vec<u32> always serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_format() {
        let p = parse_permutation("3\n1\n\n2\n").unwrap();
        assert_eq!(p.as_slice(), &[3, 1, 2]);
        assert_eq!(format_permutation_lines(&p), "3\n1\n2\n");
    }

    #[test]
    fn json_format() {
        let p = parse_permutation(" [2, 3, 1]\n").unwrap();
        assert_eq!(p.as_slice(), &[2, 3, 1]);
        assert_eq!(format_permutation_json(&p), "[2,3,1]");
    }

    #[test]
    fn keys_are_ranked() {
        assert_eq!(parse_permutation("10\n-4\n7").unwrap().as_slice(), &[3, 1, 2]);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_permutation("1\nx\n"), Err(Error::Malformed(_))));
        assert!(parse_permutation("1\n1\n").is_err());
        assert!(parse_permutation("[1, ").is_err());
    }
}
