//! Letter chains and the prefix-suffix derivation of limit-point prefixes.

use super::directive::{DirectiveSequence, SubstitutionSet};
use crate::error::{Error, Result};
use crate::subst::{
    abelianize, primitivity_exponent, wielandt_bound, AbelianVector, IntMatrix, Letter, Word,
};

/// How far past the requested depth the chain search looks to discard
/// letters that cannot be continued.
pub const CHAIN_LOOKAHEAD: usize = 64;
/// Deepest derivation the library will build.
pub const MAX_DEPTH: usize = 4096;

/// `(a_0, ..., a_n)` with `a_k = f_{σ_k}(a_{k+1})`, where `f_σ` maps a letter
/// to the first letter of its image. `subs[k]` is the index of `σ_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LetterChain {
    pub letters: Vec<Letter>,
    pub subs: Vec<usize>,
}

impl LetterChain {
    pub fn depth(&self) -> usize {
        self.subs.len()
    }

    pub fn head(&self) -> Letter {
        self.letters[0]
    }

    pub fn top(&self) -> Letter {
        *self.letters.last().unwrap()
    }

    /// The chain of the shifted sequence: `(a_1, ..., a_n)`.
    pub fn tail(&self) -> LetterChain {
        LetterChain {
            letters: self.letters[1..].to_vec(),
            subs: self.subs[1..].to_vec(),
        }
    }

    pub fn is_valid(&self, set: &SubstitutionSet) -> bool {
        self.letters.len() == self.subs.len() + 1
            && self
                .subs
                .iter()
                .enumerate()
                .all(|(k, &s)| set.get(s).image(self.letters[k + 1])[0] == self.letters[k])
    }
}

/// `f_σ`: each letter to the first letter of `σ(letter)`.
pub fn first_letter_map(set: &SubstitutionSet, index: usize) -> Vec<Letter> {
    set.get(index).first_letter_map()
}

/// Smallest `k <= horizon` such that `σ_n σ_{n+1} ... σ_{n+k}` has a
/// positive incidence matrix.
pub fn is_primitive_sequence(
    seq: &DirectiveSequence,
    set: &SubstitutionSet,
    start: usize,
    horizon: usize,
) -> Result<Option<usize>> {
    seq.validate(set)?;
    if let Some(m) = set.shared_matrix() {
        // Every product is a power of the shared matrix.
        if let Some(e) = primitivity_exponent(m, wielandt_bound(m.dim()))? {
            return Ok((e - 1 <= horizon).then_some(e - 1));
        }
    }
    let mut prod: IntMatrix = set.matrix(seq.get(start)?).clone();
    for k in 0..=horizon {
        if prod.is_positive() {
            return Ok(Some(k));
        }
        if k < horizon {
            if seq.len().is_some_and(|len| start + k + 1 >= len) {
                return Ok(None);
            }
            prod = prod.checked_mul(set.matrix(seq.get(start + k + 1)?))?;
        }
    }
    Ok(None)
}

/// Letters at level `level` from which the chain can be continued for
/// `lookahead` further levels.
fn extendable_letters(
    seq: &DirectiveSequence,
    set: &SubstitutionSet,
    level: usize,
    lookahead: usize,
) -> Result<Vec<bool>> {
    let d = set.d();
    let available = seq
        .len()
        .map_or(lookahead, |len| len.saturating_sub(level).min(lookahead));
    let mut reach = vec![true; d];
    for k in (level..level + available).rev() {
        let f = set.get(seq.get(k)?).first_letter_map();
        let mut next = vec![false; d];
        for (b, &ok) in reach.iter().enumerate() {
            if ok {
                next[f[b] as usize] = true;
            }
        }
        reach = next;
    }
    Ok(reach)
}

/// All chains of depth `depth` whose top letter can be continued for
/// [`CHAIN_LOOKAHEAD`] more levels, in lexicographic order.
///
/// There are at most `d` of them. For a primitive sequence their heads are
/// the possible first letters of limit points.
pub fn limit_letter_chains(
    seq: &DirectiveSequence,
    set: &SubstitutionSet,
    depth: usize,
) -> Result<Vec<LetterChain>> {
    seq.validate(set)?;
    let subs = seq.take(depth)?;
    let maps: Vec<Vec<Letter>> = subs
        .iter()
        .map(|&s| set.get(s).first_letter_map())
        .collect();
    let tops = extendable_letters(seq, set, depth, CHAIN_LOOKAHEAD)?;
    let mut chains: Vec<LetterChain> = tops
        .iter()
        .enumerate()
        .filter(|(_, &ok)| ok)
        .map(|(top, _)| {
            let mut letters = vec![0 as Letter; depth + 1];
            letters[depth] = top as Letter;
            for k in (0..depth).rev() {
                letters[k] = maps[k][letters[k + 1] as usize];
            }
            LetterChain {
                letters,
                subs: subs.clone(),
            }
        })
        .collect();
    chains.sort_by(|a, b| a.letters.cmp(&b.letters));
    Ok(chains)
}

/// A chain together with the length table `|σ_0 ... σ_{j-1}(b)|`, from which
/// the word `U_n = σ_0 ... σ_{n-1}(a_n)` and its prefixes can be produced
/// without materializing intermediate levels.
#[derive(Debug, Clone)]
pub struct Derivation {
    pub chain: LetterChain,
    /// `lengths[j][b] = |σ_0 ... σ_{j-1}(b)|`, for `j = 0..=depth`.
    lengths: Vec<Vec<u64>>,
    images: Vec<Vec<Word>>,
    d: usize,
}

/// One level of a telescoping decomposition: `prefix` is a proper prefix of
/// `σ_level(letter)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixPiece {
    pub level: usize,
    pub letter: Letter,
    pub prefix: Word,
}

fn level_lengths(set: &SubstitutionSet, subs: &[usize]) -> Result<Vec<Vec<u64>>> {
    let d = set.d();
    let mut lengths = Vec::with_capacity(subs.len() + 1);
    lengths.push(vec![1u64; d]);
    for &s in subs {
        let prev: &Vec<u64> = lengths.last().unwrap();
        let next = set
            .get(s)
            .images()
            .iter()
            .map(|img| {
                img.iter()
                    .try_fold(0u64, |acc, &b| acc.checked_add(prev[b as usize]))
                    .ok_or_else(|| {
                        Error::Resource("limit-point prefix length overflows u64".into())
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        lengths.push(next);
    }
    Ok(lengths)
}

impl Derivation {
    pub fn new(set: &SubstitutionSet, chain: LetterChain) -> Result<Self> {
        if !chain.is_valid(set) {
            return Err(Error::Input(
                "letter chain violates the first-letter condition".into(),
            ));
        }
        let lengths = level_lengths(set, &chain.subs)?;
        let images = chain
            .subs
            .iter()
            .map(|&s| set.get(s).images().to_vec())
            .collect();
        Ok(Derivation {
            chain,
            lengths,
            images,
            d: set.d(),
        })
    }

    pub fn depth(&self) -> usize {
        self.chain.depth()
    }

    /// `|U_n|`.
    pub fn len(&self) -> u64 {
        self.lengths[self.depth()][self.chain.top() as usize]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `U_n = σ_0 ... σ_{n-1}(a_n)`.
    pub fn word(&self) -> Word {
        let mut w = vec![self.chain.top()];
        for level in (0..self.depth()).rev() {
            let imgs = &self.images[level];
            let mut next = Vec::with_capacity(self.lengths[level + 1][0] as usize * w.len());
            for &a in &w {
                next.extend_from_slice(&imgs[a as usize]);
            }
            w = next;
        }
        Word::from_letters(w)
    }

    /// Writes the prefix of length `m < |U_n|` as
    /// `σ_0…σ_{k-1}(P_k) σ_0…σ_{k-2}(P_{k-1}) ⋯ σ_0(P_1) P_0`
    /// with each `P_j` a proper prefix of `σ_j(i_j)`.
    ///
    /// Returns the pieces from the highest nonempty level down to level 0 and
    /// the letter at position `m` of `U_n`.
    pub fn decompose(&self, m: u64) -> Result<(Vec<PrefixPiece>, Letter)> {
        if m >= self.len() {
            return Err(Error::Domain(format!(
                "prefix length {m} is not below the derived length {}",
                self.len()
            )));
        }
        let mut rest = m;
        let mut current = self.chain.top();
        let mut pieces = Vec::with_capacity(self.depth());
        for level in (0..self.depth()).rev() {
            let lens = &self.lengths[level];
            let image = &self.images[level][current as usize];
            let mut t = 0;
            while rest >= lens[image[t] as usize] {
                rest -= lens[image[t] as usize];
                t += 1;
            }
            if !pieces.is_empty() || t > 0 || level == 0 {
                pieces.push(PrefixPiece {
                    level,
                    letter: current,
                    prefix: image.prefix(t),
                });
            }
            current = image[t];
        }
        debug_assert_eq!(rest, 0);
        Ok((pieces, current))
    }

    /// `Σ_j M_0 ⋯ M_{j-1} · l(P_j)` in exact integers.
    pub fn abelian_sum(
        &self,
        set: &SubstitutionSet,
        pieces: &[PrefixPiece],
    ) -> Result<AbelianVector> {
        // Process from the top level down, Horner style:
        // acc_j = M_j acc_{j+1} + l(P_j).
        let mut acc = AbelianVector::zero(self.d);
        let mut level_iter = pieces.iter().peekable();
        let top = pieces.first().map_or(0, |p| p.level);
        for level in (0..=top).rev() {
            if level < top {
                acc = set.matrix(self.chain.subs[level]).checked_mul_vec(&acc)?;
            }
            if let Some(p) = level_iter.next_if(|p| p.level == level) {
                acc = acc.checked_add(&abelianize(&p.prefix, self.d)?)?;
            }
        }
        Ok(acc)
    }
}

/// Builds the derivation of depth `depth` along chain number `chain_index`.
pub fn derivation_at_depth(
    seq: &DirectiveSequence,
    set: &SubstitutionSet,
    depth: usize,
    chain_index: usize,
) -> Result<Derivation> {
    let chains = limit_letter_chains(seq, set, depth)?;
    let count = chains.len();
    let chain = chains.into_iter().nth(chain_index).ok_or_else(|| {
        Error::Input(format!(
            "chain index {chain_index} out of range ({count} chains)"
        ))
    })?;
    Derivation::new(set, chain)
}

/// Smallest-depth derivation along chain `chain_index` with `|U_n| >= min_len`.
pub fn derivation_for_length(
    seq: &DirectiveSequence,
    set: &SubstitutionSet,
    min_len: u64,
    chain_index: usize,
) -> Result<Derivation> {
    seq.validate(set)?;
    let mut lengths = vec![1u64; set.d()];
    for depth in 0..=MAX_DEPTH {
        if depth > 0 {
            let s = seq.get(depth - 1).map_err(|_| {
                Error::Resource(format!(
                    "directive sequence ends after {} terms before reaching length {min_len}",
                    depth - 1
                ))
            })?;
            // |σ_0 ... σ_{n-1}(b)| = Σ over c in σ_{n-1}(b) of |σ_0 ... σ_{n-2}(c)|.
            let sub = set.get(s);
            let mut next = vec![0u64; set.d()];
            for (b, slot) in next.iter_mut().enumerate() {
                *slot = sub.image(b as Letter).iter().try_fold(0u64, |acc, &c| {
                    acc.checked_add(lengths[c as usize])
                        .ok_or_else(|| Error::Resource("prefix length overflows u64".into()))
                })?;
            }
            lengths = next;
        }
        if lengths.iter().all(|&l| l < min_len) && depth < MAX_DEPTH {
            continue;
        }
        let derivation = derivation_at_depth(seq, set, depth, chain_index)?;
        if derivation.len() >= min_len {
            return Ok(derivation);
        }
    }
    Err(Error::Resource(format!(
        "no prefix of length {min_len} within depth {MAX_DEPTH} (is the sequence primitive?)"
    )))
}

/// The prefix `U_n` of the limit point along chain `chain_index`, for the
/// smallest `n` with `|U_n| >= min_len`. Checks that `U_{n-1}` is a prefix
/// of `U_n`.
pub fn limit_point_prefix(
    seq: &DirectiveSequence,
    set: &SubstitutionSet,
    min_len: u64,
    chain_index: usize,
) -> Result<Word> {
    let der = derivation_for_length(seq, set, min_len, chain_index)?;
    let word = der.word();
    if der.depth() > 0 {
        let mut shorter = der.chain.clone();
        shorter.letters.pop();
        shorter.subs.pop();
        let prev = Derivation::new(set, shorter)?.word();
        if !prev.is_prefix_of(&word) {
            return Err(Error::Domain("limit-point prefixes are not nested".into()));
        }
    }
    Ok(word)
}

/// Telescoping decomposition of a prefix `u` of a limit point of `seq`.
///
/// Tries the limit points in chain order and uses the first one that starts
/// with `u`. The returned pieces satisfy
/// `l(u) = Σ_j M_0 ⋯ M_{j-1} l(P_j)` exactly, which is checked before
/// returning.
pub fn telescoping_decomposition(
    seq: &DirectiveSequence,
    set: &SubstitutionSet,
    u: &[Letter],
) -> Result<Vec<PrefixPiece>> {
    if u.is_empty() {
        return Err(Error::Input("empty prefix".into()));
    }
    let target = u.len() as u64 + 1;
    let first = derivation_for_length(seq, set, target, 0)?;
    let chain_count = limit_letter_chains(seq, set, first.depth())?.len();
    for index in 0..chain_count {
        let der = derivation_at_depth(seq, set, first.depth(), index)?;
        if der.len() < target {
            continue;
        }
        let word = der.word();
        if !word.starts_with(u) {
            continue;
        }
        let (pieces, _) = der.decompose(u.len() as u64)?;
        let lhs = abelianize(u, set.d())?;
        let rhs = der.abelian_sum(set, &pieces)?;
        if lhs != rhs {
            return Err(Error::Domain(format!(
                "telescoping identity failed: {:?} != {:?}",
                lhs.0, rhs.0
            )));
        }
        return Ok(pieces);
    }
    Err(Error::Domain(
        "word is not a prefix of a limit point of the sequence".into(),
    ))
}
