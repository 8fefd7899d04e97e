//! Line-based substitution-set files:
//!
//! ```text
//! # comment
//! alphabet: abc
//! [sub trib]
//! a -> ab
//! b -> ac
//! c -> a
//! ```

use super::{Alphabet, Substitution, Word};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct SubstitutionFile {
    pub alphabet: Alphabet,
    pub subs: Vec<Substitution>,
}

struct Block {
    name: String,
    header_line: usize,
    images: Vec<Option<Word>>,
}

pub fn parse_substitution_set(text: &str) -> Result<SubstitutionFile> {
    let mut alphabet: Option<Alphabet> = None;
    let mut blocks: Vec<Block> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }

        let Some(alpha) = &alphabet else {
            let rest = line
                .strip_prefix("alphabet:")
                .ok_or_else(|| Error::parse(lineno, "expected `alphabet: <symbols>` first"))?;
            let a = Alphabet::new(rest.trim()).map_err(|e| Error::parse(lineno, e.to_string()))?;
            alphabet = Some(a);
            continue;
        };

        if let Some(header) = line.strip_prefix('[') {
            let name = header
                .strip_suffix(']')
                .and_then(|h| h.trim().strip_prefix("sub"))
                .map(str::trim)
                .filter(|n| !n.is_empty() && !n.contains(char::is_whitespace))
                .ok_or_else(|| {
                    Error::parse(lineno, "malformed block header, expected `[sub NAME]`")
                })?;
            if blocks.iter().any(|b| b.name == name) {
                return Err(Error::parse(
                    lineno,
                    format!("duplicate substitution name `{name}`"),
                ));
            }
            blocks.push(Block {
                name: name.to_string(),
                header_line: lineno,
                images: vec![None; alpha.len()],
            });
            continue;
        }

        if line.starts_with("alphabet:") {
            return Err(Error::parse(lineno, "alphabet declared twice"));
        }

        let (lhs, rhs) = line
            .split_once("->")
            .or_else(|| line.split_once('→'))
            .ok_or_else(|| Error::parse(lineno, "expected `x -> word`"))?;
        let block = blocks
            .last_mut()
            .ok_or_else(|| Error::parse(lineno, "image line outside a `[sub NAME]` block"))?;
        let lhs = lhs.trim();
        let mut chars = lhs.chars();
        let (Some(sym), None) = (chars.next(), chars.next()) else {
            return Err(Error::parse(
                lineno,
                format!("left side `{lhs}` is not a single letter"),
            ));
        };
        let letter = alpha
            .letter(sym)
            .ok_or_else(|| Error::parse(lineno, format!("unknown letter {sym:?}")))?;
        let rhs = rhs.trim();
        if rhs.is_empty() {
            return Err(Error::parse(lineno, "erasing substitution (empty image)"));
        }
        let image = Word::parse(alpha, rhs).map_err(|e| Error::parse(lineno, e.to_string()))?;
        let slot = &mut block.images[letter as usize];
        if slot.is_some() {
            return Err(Error::parse(
                lineno,
                format!("image of {sym:?} defined twice"),
            ));
        }
        *slot = Some(image);
    }

    let alphabet =
        alphabet.ok_or_else(|| Error::parse(last_line.max(1), "missing `alphabet:` line"))?;
    if blocks.is_empty() {
        return Err(Error::parse(last_line.max(1), "no `[sub NAME]` blocks"));
    }
    let mut subs = Vec::with_capacity(blocks.len());
    for block in blocks {
        let mut images = Vec::with_capacity(alphabet.len());
        for (a, img) in block.images.into_iter().enumerate() {
            match img {
                Some(w) => images.push(w),
                None => {
                    return Err(Error::parse(
                        block.header_line,
                        format!(
                            "substitution `{}` has no image for {:?}",
                            block.name,
                            alphabet.symbol(a as u8)
                        ),
                    ))
                }
            }
        }
        subs.push(
            Substitution::new(block.name, images)
                .map_err(|e| Error::parse(block.header_line, e.to_string()))?,
        );
    }
    Ok(SubstitutionFile { alphabet, subs })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIB: &str = "# tribonacci pair\nalphabet: abc\n\n[sub s1]\na -> ab\nb -> ac\nc -> a\n[sub s2]\na -> ab\nb -> ca # flipped\nc -> a\n";

    #[test]
    fn parses_pair() {
        let f = parse_substitution_set(TRIB).unwrap();
        assert_eq!(f.alphabet.len(), 3);
        assert_eq!(f.subs.len(), 2);
        assert_eq!(f.subs[0].name(), "s1");
        assert_eq!(f.subs[1].image(1).display(&f.alphabet).to_string(), "ca");
        assert_eq!(f.subs[0].incidence_matrix(), f.subs[1].incidence_matrix());
    }

    fn err_line(text: &str) -> (usize, String) {
        match parse_substitution_set(text).unwrap_err() {
            Error::Parse { line, msg } => (line, msg),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn erasing_image() {
        let (line, msg) = err_line("alphabet: ab\n[sub x]\na -> \nb -> a\n");
        assert_eq!(line, 3);
        assert!(msg.contains("erasing substitution"));
    }

    #[test]
    fn unknown_letter() {
        let (line, _) = err_line("alphabet: abc\n[sub x]\na -> ab\nb -> ad\nc -> a\n");
        assert_eq!(line, 4);
        let (line, _) = err_line("alphabet: abc\n[sub x]\nd -> ab\n");
        assert_eq!(line, 3);
    }

    #[test]
    fn structural_errors() {
        assert_eq!(err_line("").0, 1);
        assert_eq!(err_line("# only a comment\n").0, 1);
        assert_eq!(err_line("[sub x]\n").0, 1);
        let (line, msg) =
            err_line("alphabet: ab\n[sub x]\na -> b\nb -> a\n[sub x]\na -> a\nb -> b\n");
        assert_eq!(line, 5);
        assert!(msg.contains("duplicate"));
        let (line, msg) = err_line("alphabet: ab\n[sub x]\na -> b\n");
        assert_eq!(line, 2);
        assert!(msg.contains("no image"));
        assert_eq!(err_line("alphabet: ab\na -> b\n").0, 2);
        assert_eq!(err_line("alphabet: ab\n[sub x]\na -> b\na -> a\n").0, 4);
        assert_eq!(err_line("alphabet: aa\n").0, 1);
    }
}
