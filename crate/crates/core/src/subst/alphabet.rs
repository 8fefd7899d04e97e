use std::fmt;

use crate::error::{Error, Result};

/// A letter, stored as its 0-based index into the alphabet.
pub type Letter = u8;

/// Largest supported alphabet. Letters are stored in a `u8`.
pub const MAX_LETTERS: usize = 64;

/// A finite alphabet of `d >= 2` letters with distinct ASCII display symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: &str) -> Result<Self> {
        let symbols: Vec<char> = symbols.chars().collect();
        if symbols.len() < 2 {
            return Err(Error::Input("alphabet needs at least two letters".into()));
        }
        if symbols.len() > MAX_LETTERS {
            return Err(Error::Input(format!(
                "alphabet has {} letters, at most {MAX_LETTERS} supported",
                symbols.len()
            )));
        }
        for (i, c) in symbols.iter().enumerate() {
            if !c.is_ascii_graphic() {
                return Err(Error::Input(format!("symbol {c:?} is not printable ASCII")));
            }
            if symbols[..i].contains(c) {
                return Err(Error::Input(format!("duplicate symbol {c:?}")));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// The alphabet `1, 2, ..., d` (digits, then lowercase letters).
    pub fn numbered(d: usize) -> Result<Self> {
        let pool: Vec<char> = ('1'..='9').chain('a'..='z').chain('A'..='Z').collect();
        if d > pool.len() {
            return Err(Error::Input(format!("no default symbols for d = {d}")));
        }
        Alphabet::new(&pool[..d].iter().collect::<String>())
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbol(&self, letter: Letter) -> char {
        self.symbols[letter as usize]
    }

    pub fn letter(&self, symbol: char) -> Option<Letter> {
        self.symbols
            .iter()
            .position(|&c| c == symbol)
            .map(|i| i as Letter)
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..self.symbols.len()).map(|i| i as Letter)
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.symbols {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
