//! Plain-text codebooks: one q-ary word per line.
//!
//! For `q ≤ 10` a word may be written as contiguous digits (`0121`); any
//! alphabet also accepts symbols separated by whitespace or commas
//! (`0 12 3`). Blank lines and `#` comments are ignored.

use std::fs;
use std::path::Path;

use fbbounds_core::Codebook;

use crate::error::{CliError, Result};

pub fn parse_codebook(text: &str, q: u32, path: &Path) -> Result<Codebook> {
    let err = |line: usize, msg: String| CliError::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut words: Vec<Vec<u8>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let separated = line.contains(|c: char| c.is_whitespace() || c == ',');
        let symbols: Vec<u32> = if separated {
            line.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<u32>().map_err(|_| err(lineno, format!("invalid symbol `{t}`"))))
                .collect::<Result<_>>()?
        } else {
            line.chars()
                .map(|c| c.to_digit(10).ok_or_else(|| err(lineno, format!("invalid symbol `{c}`"))))
                .collect::<Result<_>>()?
        };
        if let Some(bad) = symbols.iter().find(|&&s| s >= q) {
            return Err(err(lineno, format!("symbol {bad} is not below q={q}")));
        }
        if let Some(first) = words.first() {
            if first.len() != symbols.len() {
                return Err(err(
                    lineno,
                    format!("word has length {}, expected {}", symbols.len(), first.len()),
                ));
            }
        }
        let word: Vec<u8> = symbols.into_iter().map(|s| s as u8).collect();
        if words.contains(&word) {
            return Err(err(lineno, "duplicate codeword".into()));
        }
        words.push(word);
    }
    if words.is_empty() {
        return Err(err(0, "no codewords".into()));
    }
    Ok(Codebook::new(q, words)?)
}

pub fn read_codebook(path: &Path, q: u32) -> Result<Codebook> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_codebook(&text, q, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str, q: u32) -> Result<Codebook> {
        parse_codebook(text, q, Path::new("words.txt"))
    }

    #[test]
    fn digit_and_separated_forms() {
        let c = parse("# repetition\n000\n\n111  # ones\n", 2).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.word(1), [1, 1, 1]);
        let c = parse("0 11 3\n12,0,4\n", 13).unwrap();
        assert_eq!(c.word(0), [0, 11, 3]);
        assert_eq!(c.word(1), [12, 0, 4]);
    }

    #[test]
    fn reports_line_numbers() {
        let e = parse("00\n01\n0x\n", 2).unwrap_err();
        assert_eq!(e.to_string(), "words.txt:3: invalid symbol `x`");
        let e = parse("00\n012\n", 3).unwrap_err();
        assert!(e.to_string().starts_with("words.txt:2:"));
        let e = parse("00\n02\n", 2).unwrap_err();
        assert!(e.to_string().contains("not below q=2"));
        let e = parse("01\n# c\n01\n", 2).unwrap_err();
        assert_eq!(e.to_string(), "words.txt:3: duplicate codeword");
        assert!(parse("# nothing\n", 2).is_err());
    }
}
