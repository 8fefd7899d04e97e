//! Words, substitutions, abelianization and incidence matrices.
//!
//! Everything here is exact integer algebra. Letters are 0-based indices
//! internally; display symbols only matter when parsing or printing.

mod alphabet;
mod matrix;
mod parse;
mod word;

pub use alphabet::{Alphabet, Letter, MAX_LETTERS};
pub use matrix::{primitivity_exponent, wielandt_bound, IntMatrix};
pub use parse::{parse_substitution_set, SubstitutionFile};
pub use word::{abelianize, AbelianVector, Word};

use crate::error::{Error, Result};

/// A nonerasing substitution: one nonempty image per letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    name: String,
    images: Vec<Word>,
}

/// One row of the prefix-suffix decomposition `σ(j) = P · w_k · S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixSuffixEntry {
    pub letter_in: Letter,
    /// 1-based position of the pivot inside `σ(letter_in)`.
    pub position: usize,
    pub prefix: Word,
    pub pivot: Letter,
    pub suffix: Word,
}

impl Substitution {
    pub fn new(name: impl Into<String>, images: Vec<Word>) -> Result<Self> {
        let name = name.into();
        let d = images.len();
        if d < 2 {
            return Err(Error::Input(format!(
                "substitution {name}: alphabet needs at least two letters"
            )));
        }
        for (a, img) in images.iter().enumerate() {
            if img.is_empty() {
                return Err(Error::Input(format!(
                    "substitution {name}: erasing substitution (image of letter {} is empty)",
                    a + 1
                )));
            }
            img.check(d)?;
        }
        Ok(Substitution { name, images })
    }

    /// Builds a substitution from display-symbol images, e.g. `["ab", "ac", "a"]`.
    pub fn from_strs(name: &str, alphabet: &Alphabet, images: &[&str]) -> Result<Self> {
        if images.len() != alphabet.len() {
            return Err(Error::Input(format!(
                "substitution {name}: expected {} images, got {}",
                alphabet.len(),
                images.len()
            )));
        }
        let words = images
            .iter()
            .map(|s| Word::parse(alphabet, s))
            .collect::<Result<Vec<_>>>()?;
        Substitution::new(name, words)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet_size(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, letter: Letter) -> &Word {
        &self.images[letter as usize]
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image_lengths(&self) -> Vec<usize> {
        self.images.iter().map(|w| w.len()).collect()
    }

    /// Applies the substitution letter by letter and concatenates.
    pub fn apply(&self, w: &[Letter]) -> Word {
        let len = w.iter().map(|&a| self.images[a as usize].len()).sum();
        let mut out = Vec::with_capacity(len);
        for &a in w {
            out.extend_from_slice(&self.images[a as usize]);
        }
        Word::from_letters(out)
    }

    /// `M[i][j] = |σ(j)|_i`.
    pub fn incidence_matrix(&self) -> IntMatrix {
        let d = self.images.len();
        let mut m = IntMatrix::zeros(d);
        for (j, img) in self.images.iter().enumerate() {
            for &i in img.iter() {
                m.set(i as usize, j, m.get(i as usize, j) + 1);
            }
        }
        m
    }

    /// Maps each letter to the first letter of its image.
    pub fn first_letter_map(&self) -> Vec<Letter> {
        self.images.iter().map(|w| w[0]).collect()
    }

    pub fn prefix_suffix_table(&self) -> Vec<PrefixSuffixEntry> {
        let mut table = Vec::with_capacity(self.images.iter().map(|w| w.len()).sum());
        for (j, img) in self.images.iter().enumerate() {
            for k in 0..img.len() {
                table.push(PrefixSuffixEntry {
                    letter_in: j as Letter,
                    position: k + 1,
                    prefix: img.prefix(k),
                    pivot: img[k],
                    suffix: Word::from_letters(img[k + 1..].to_vec()),
                });
            }
        }
        table
    }
}
