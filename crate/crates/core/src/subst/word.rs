use std::fmt;
use std::ops::Deref;

use super::alphabet::{Alphabet, Letter};
use crate::error::{Error, Result};

/// A finite word, stored as a flat array of letter indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    /// Parses a word written with the alphabet's display symbols.
    pub fn parse(alphabet: &Alphabet, text: &str) -> Result<Self> {
        text.chars()
            .map(|c| {
                alphabet
                    .letter(c)
                    .ok_or_else(|| Error::Input(format!("unknown letter {c:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    pub fn extend_from(&mut self, other: &[Letter]) {
        self.0.extend_from_slice(other);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n].to_vec())
    }

    pub fn is_prefix_of(&self, other: &[Letter]) -> bool {
        other.starts_with(&self.0)
    }

    /// Checks that every letter is below `d`.
    pub fn check(&self, d: usize) -> Result<()> {
        match self.0.iter().find(|&&a| a as usize >= d) {
            Some(a) => Err(Error::Input(format!(
                "letter index {a} out of range for alphabet of size {d}"
            ))),
            None => Ok(()),
        }
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        DisplayWord {
            word: self,
            alphabet,
        }
    }
}

impl Deref for Word {
    type Target = [Letter];

    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

struct DisplayWord<'a> {
    word: &'a Word,
    alphabet: &'a Alphabet,
}

impl fmt::Display for DisplayWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "ε");
        }
        for &a in self.word.iter() {
            write!(f, "{}", self.alphabet.symbol(a))?;
        }
        Ok(())
    }
}

/// Letter counts of a word: the abelianization `l(w)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbelianVector(pub Vec<i64>);

impl AbelianVector {
    pub fn zero(d: usize) -> Self {
        AbelianVector(vec![0; d])
    }

    pub fn unit(d: usize, letter: Letter) -> Self {
        let mut v = vec![0; d];
        v[letter as usize] = 1;
        AbelianVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.0.iter().map(|&x| x as f64).collect()
    }

    pub fn checked_add(&self, other: &AbelianVector) -> Result<AbelianVector> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| {
                a.checked_add(*b)
                    .ok_or_else(|| Error::Overflow("vector addition".into()))
            })
            .collect::<Result<Vec<_>>>()
            .map(AbelianVector)
    }
}

impl Deref for AbelianVector {
    type Target = [i64];

    fn deref(&self) -> &[i64] {
        &self.0
    }
}

/// Counts the letters of `w` over an alphabet of size `d`.
pub fn abelianize(w: &[Letter], d: usize) -> Result<AbelianVector> {
    let mut counts = vec![0i64; d];
    for &a in w {
        let slot = counts
            .get_mut(a as usize)
            .ok_or_else(|| Error::Input(format!("letter index {a} out of range for d = {d}")))?;
        *slot += 1;
    }
    Ok(AbelianVector(counts))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abelianize_examples() {
        let abc = Alphabet::new("abc").unwrap();
        assert_eq!(abelianize(&[], 3).unwrap().0, vec![0, 0, 0]);
        let w = Word::parse(&abc, "abacaba").unwrap();
        assert_eq!(abelianize(&w, 3).unwrap().0, vec![4, 2, 1]);
        assert!(abelianize(&[0, 3], 3).is_err());
    }

    #[test]
    fn parse_rejects_unknown() {
        let abc = Alphabet::new("abc").unwrap();
        assert!(Word::parse(&abc, "abd").is_err());
        assert_eq!(Word::parse(&abc, "cab").unwrap().letters(), &[2, 0, 1]);
    }

    #[test]
    fn display_roundtrip() {
        let abc = Alphabet::new("abc").unwrap();
        let w = Word::parse(&abc, "abacaba").unwrap();
        assert_eq!(w.display(&abc).to_string(), "abacaba");
        assert_eq!(Word::empty().display(&abc).to_string(), "ε");
    }
}
