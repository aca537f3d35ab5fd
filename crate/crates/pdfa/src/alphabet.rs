use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Reserved terminal symbol. Never a member of the alphabet itself; it marks
/// the end-of-string outcome in every per-state distribution.
pub const TERMINAL: &str = "$";

/// Index of a symbol within an [`Alphabet`] (excludes the terminal).
pub type Sym = usize;

/// A string over the alphabet, as symbol indices.
pub type Word = Vec<Sym>;

/// An ordered alphabet of distinct textual symbols.
///
/// The order is fixed and defines the layout of every probability vector:
/// position 0 is the terminal `$`, position `i + 1` is `symbols[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<String>,
    index: HashMap<String, Sym>,
}

impl Alphabet {
    pub fn new<S: Into<String>, I: IntoIterator<Item = S>>(symbols: I) -> Result<Self> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(symbols.len());
        for (i, s) in symbols.iter().enumerate() {
            if s == TERMINAL {
                return Err(Error::InvalidAlphabet(format!(
                    "{TERMINAL:?} is reserved for the terminal"
                )));
            }
            if s.is_empty() {
                return Err(Error::InvalidAlphabet("empty symbol".into()));
            }
            if index.insert(s.clone(), i).is_some() {
                return Err(Error::InvalidAlphabet(format!("duplicate symbol {s:?}")));
            }
        }
        Ok(Alphabet { symbols, index })
    }

    /// Alphabet `"0", "1", ..., "<m-1>"` as used by the random generator.
    pub fn numeric(m: usize) -> Self {
        Alphabet::new((0..m).map(|i| i.to_string())).expect("numeric symbols are distinct")
    }

    /// Number of symbols, excluding the terminal.
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Length of a probability vector over this alphabet: `|Σ| + 1`.
    pub fn dist_len(&self) -> usize {
        self.symbols.len() + 1
    }

    pub fn symbols(&self) -> impl Iterator<Item = Sym> + Clone {
        0..self.symbols.len()
    }

    pub fn name(&self, sym: Sym) -> &str {
        &self.symbols[sym]
    }

    /// Name at a probability-vector position: 0 is the terminal.
    pub fn layout_name(&self, pos: usize) -> &str {
        if pos == 0 {
            TERMINAL
        } else {
            &self.symbols[pos - 1]
        }
    }

    pub fn lookup(&self, token: &str) -> Result<Sym> {
        self.index
            .get(token)
            .copied()
            .ok_or_else(|| Error::UnknownSymbol(token.to_string()))
    }

    /// Parses a whitespace-free string where every char is a symbol, or a
    /// whitespace-separated token list for multi-char symbols.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        if text.is_empty() {
            return Ok(Vec::new());
        }
        if text.contains(char::is_whitespace) {
            text.split_whitespace().map(|t| self.lookup(t)).collect()
        } else if self.symbols.iter().all(|s| s.chars().count() == 1) {
            text.chars().map(|c| self.lookup(&c.to_string())).collect()
        } else {
            self.lookup(text).map(|s| vec![s])
        }
    }

    pub fn format_word(&self, word: &[Sym]) -> String {
        if word.is_empty() {
            return "λ".to_string();
        }
        let sep = if self.symbols.iter().all(|s| s.chars().count() == 1) {
            ""
        } else {
            " "
        };
        word.iter()
            .map(|&s| self.name(s))
            .collect::<Vec<_>>()
            .join(sep)
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.symbols.join(", "))
    }
}
