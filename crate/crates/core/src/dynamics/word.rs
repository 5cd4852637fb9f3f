use crate::error::{Error, Result};

pub type Symbol = u8;
pub type Word = Vec<Symbol>;

const DIGITS: &[u8; 36] = b"0123456789abcdefghijklmnopqrstuvwxyz";

/// Parses a word written with one base-36 digit per symbol (`"0110"`).
pub fn parse_word(text: &str) -> Result<Word> {
    text.chars()
        .map(|c| {
            c.to_digit(36)
                .map(|d| d as Symbol)
                .ok_or(Error::SymbolOutOfRange {
                    symbol: c as usize,
                    alphabet: 36,
                })
        })
        .collect()
}

/// Inverse of [`parse_word`]; symbols above 35 are written as `[n]`.
pub fn format_word(word: &[Symbol]) -> String {
    let mut out = String::with_capacity(word.len());
    for &s in word {
        if (s as usize) < DIGITS.len() {
            out.push(DIGITS[s as usize] as char);
        } else {
            out.push_str(&format!("[{s}]"));
        }
    }
    out
}

/// Shortest word `r` with `word = r^k`.
pub fn primitive_root(word: &[Symbol]) -> &[Symbol] {
    let n = word.len();
    for p in 1..n {
        if n % p == 0 && (p..n).all(|i| word[i] == word[i - p]) {
            return &word[..p];
        }
    }
    word
}

pub fn is_primitive(word: &[Symbol]) -> bool {
    primitive_root(word).len() == word.len()
}

pub fn rotate_left(word: &[Symbol], by: usize) -> Word {
    if word.is_empty() {
        return Word::new();
    }
    let by = by % word.len();
    let mut out = word[by..].to_vec();
    out.extend_from_slice(&word[..by]);
    out
}

/// Lexicographically least rotation.
pub fn least_rotation(word: &[Symbol]) -> Word {
    (0..word.len().max(1))
        .map(|r| rotate_left(word, r))
        .min()
        .unwrap_or_default()
}
