use crate::error::{Error, Result};
use crate::rng::{splitmix_at, unit_f64};
use crate::subst::{Alphabet, IntMatrix, Substitution, SubstitutionFile};

/// Substitutions over one alphabet, with their common incidence matrix when
/// they all share one.
#[derive(Debug, Clone)]
pub struct SubstitutionSet {
    alphabet: Alphabet,
    subs: Vec<Substitution>,
    matrices: Vec<IntMatrix>,
    shared_matrix: Option<IntMatrix>,
}

impl SubstitutionSet {
    pub fn new(alphabet: Alphabet, subs: Vec<Substitution>) -> Result<Self> {
        if subs.is_empty() {
            return Err(Error::Input("substitution set is empty".into()));
        }
        if let Some(s) = subs.iter().find(|s| s.alphabet_size() != alphabet.len()) {
            return Err(Error::Input(format!(
                "substitution {} is over {} letters, alphabet has {}",
                s.name(),
                s.alphabet_size(),
                alphabet.len()
            )));
        }
        let matrices: Vec<IntMatrix> = subs.iter().map(|s| s.incidence_matrix()).collect();
        let shared_matrix = matrices
            .iter()
            .all(|m| *m == matrices[0])
            .then(|| matrices[0].clone());
        Ok(SubstitutionSet {
            alphabet,
            subs,
            matrices,
            shared_matrix,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn d(&self) -> usize {
        self.alphabet.len()
    }

    pub fn len(&self) -> usize {
        self.subs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subs.is_empty()
    }

    pub fn get(&self, i: usize) -> &Substitution {
        &self.subs[i]
    }

    pub fn subs(&self) -> &[Substitution] {
        &self.subs
    }

    pub fn matrix(&self, i: usize) -> &IntMatrix {
        &self.matrices[i]
    }

    pub fn shared_matrix(&self) -> Option<&IntMatrix> {
        self.shared_matrix.as_ref()
    }

    pub fn require_shared_matrix(&self) -> Result<&IntMatrix> {
        self.shared_matrix
            .as_ref()
            .ok_or_else(|| Error::Domain("substitutions do not share one incidence matrix".into()))
    }
}

impl From<SubstitutionFile> for SubstitutionSet {
    fn from(f: SubstitutionFile) -> Self {
        // The parser already guarantees a nonempty list over one alphabet.
        SubstitutionSet::new(f.alphabet, f.subs).expect("parsed file is a valid set")
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Mode {
    /// Finite list; indexing past the end is an error.
    Explicit(Vec<usize>),
    EventuallyPeriodic {
        preperiod: Vec<usize>,
        period: Vec<usize>,
    },
    /// Independent draws with the given weights, SplitMix64 seeded.
    Random { seed: u64, cumulative: Vec<f64> },
    /// A finite head followed by another sequence.
    Splice {
        head: Vec<usize>,
        tail: Box<DirectiveSequence>,
    },
}

/// An infinite (or explicitly finite) sequence of substitution indices.
///
/// Indices are 0-based positions in a [`SubstitutionSet`]. The accessor is a
/// pure function of the index, so shifted copies are cheap.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectiveSequence {
    mode: Mode,
    offset: usize,
}

fn check_nonempty(v: &[usize], what: &str) -> Result<()> {
    if v.is_empty() {
        Err(Error::Input(format!("{what} must be nonempty")))
    } else {
        Ok(())
    }
}

impl DirectiveSequence {
    pub fn explicit(list: Vec<usize>) -> Self {
        DirectiveSequence {
            mode: Mode::Explicit(list),
            offset: 0,
        }
    }

    pub fn constant(i: usize) -> Self {
        Self::periodic(Vec::new(), vec![i]).expect("nonempty period")
    }

    pub fn periodic(preperiod: Vec<usize>, period: Vec<usize>) -> Result<Self> {
        check_nonempty(&period, "period")?;
        Ok(DirectiveSequence {
            mode: Mode::EventuallyPeriodic { preperiod, period },
            offset: 0,
        })
    }

    pub fn random(seed: u64, weights: &[f64]) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Input("random mode needs at least one weight".into()));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::Input(
                "weights must be finite and nonnegative".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::Input("weights sum to zero".into()));
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Input(format!("weights sum to {total}, expected 1")));
        }
        let mut acc = 0.0;
        let cumulative = weights
            .iter()
            .map(|w| {
                acc += w / total;
                acc
            })
            .collect();
        Ok(DirectiveSequence {
            mode: Mode::Random { seed, cumulative },
            offset: 0,
        })
    }

    pub fn uniform_random(seed: u64, count: usize) -> Self {
        let w = vec![1.0 / count as f64; count];
        Self::random(seed, &w).expect("uniform weights are valid")
    }

    /// `head` followed by `tail`.
    pub fn splice(head: Vec<usize>, tail: DirectiveSequence) -> Self {
        DirectiveSequence {
            mode: Mode::Splice {
                head,
                tail: Box::new(tail),
            },
            offset: 0,
        }
    }

    /// The shifted sequence `(σ_{n+k})_n`.
    pub fn shift(&self, k: usize) -> Self {
        DirectiveSequence {
            mode: self.mode.clone(),
            offset: self.offset + k,
        }
    }

    /// Number of available terms, `None` when infinite.
    pub fn len(&self) -> Option<usize> {
        match &self.mode {
            Mode::Explicit(v) => Some(v.len().saturating_sub(self.offset)),
            Mode::Splice { head, tail } => tail
                .len()
                .map(|t| (head.len() + t).saturating_sub(self.offset)),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    pub fn get(&self, n: usize) -> Result<usize> {
        let idx = n + self.offset;
        match &self.mode {
            Mode::Explicit(v) => v.get(idx).copied().ok_or_else(|| {
                Error::Input(format!(
                    "explicit directive sequence has {} terms, index {idx} requested",
                    v.len()
                ))
            }),
            Mode::EventuallyPeriodic { preperiod, period } => Ok(if idx < preperiod.len() {
                preperiod[idx]
            } else {
                period[(idx - preperiod.len()) % period.len()]
            }),
            Mode::Random { seed, cumulative } => {
                let x = unit_f64(splitmix_at(*seed, idx as u64));
                Ok(cumulative
                    .iter()
                    .position(|&c| x < c)
                    .unwrap_or(cumulative.len() - 1))
            }
            Mode::Splice { head, tail } => {
                if idx < head.len() {
                    Ok(head[idx])
                } else {
                    tail.get(idx - head.len())
                }
            }
        }
    }

    /// The first `n` terms.
    pub fn take(&self, n: usize) -> Result<Vec<usize>> {
        (0..n).map(|i| self.get(i)).collect()
    }

    /// Largest substitution index the sequence can produce.
    fn max_index(&self) -> usize {
        match &self.mode {
            Mode::Explicit(v) => v.iter().copied().max().unwrap_or(0),
            Mode::EventuallyPeriodic { preperiod, period } => {
                preperiod.iter().chain(period).copied().max().unwrap_or(0)
            }
            Mode::Random { cumulative, .. } => cumulative.len() - 1,
            Mode::Splice { head, tail } => head
                .iter()
                .copied()
                .max()
                .unwrap_or(0)
                .max(tail.max_index()),
        }
    }

    /// Checks that every index refers to a substitution of `set`.
    pub fn validate(&self, set: &SubstitutionSet) -> Result<()> {
        if let Mode::Random { cumulative, .. } = &self.mode {
            if cumulative.len() != set.len() {
                return Err(Error::Input(format!(
                    "{} weights given for {} substitutions",
                    cumulative.len(),
                    set.len()
                )));
            }
        }
        if self.max_index() >= set.len() {
            return Err(Error::Input(format!(
                "sequence refers to substitution {} but the set has {}",
                self.max_index() + 1,
                set.len()
            )));
        }
        Ok(())
    }

    /// Parses the command-line syntax:
    ///
    /// - `"122"`: explicit finite list (1-based substitution numbers);
    /// - `"12(21)"`: preperiod `12`, then `21` repeated;
    /// - `"random:SEED"` or `"random:SEED:w1,w2,..."`.
    pub fn parse(spec: &str, count: usize) -> Result<Self> {
        let spec = spec.trim();
        if let Some(rest) = spec.strip_prefix("random:") {
            let (seed, weights) = match rest.split_once(':') {
                Some((s, w)) => (s, Some(w)),
                None => (rest, None),
            };
            let seed: u64 = seed
                .trim()
                .parse()
                .map_err(|_| Error::Input(format!("bad seed `{seed}`")))?;
            let seq = match weights {
                None => Self::uniform_random(seed, count),
                Some(w) => {
                    let w = w
                        .split(',')
                        .map(|x| {
                            x.trim()
                                .parse::<f64>()
                                .map_err(|_| Error::Input(format!("bad weight `{x}`")))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    if w.len() != count {
                        return Err(Error::Input(format!(
                            "{} weights given for {count} substitutions",
                            w.len()
                        )));
                    }
                    Self::random(seed, &w)?
                }
            };
            return Ok(seq);
        }

        let digits = |s: &str| -> Result<Vec<usize>> {
            s.chars()
                .map(|c| match c.to_digit(10) {
                    Some(k) if k >= 1 && (k as usize) <= count => Ok(k as usize - 1),
                    _ => Err(Error::Input(format!(
                        "`{c}` is not a substitution number in 1..={count}"
                    ))),
                })
                .collect()
        };
        match spec.split_once('(') {
            Some((pre, rest)) => {
                let period = rest
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Input(format!("unbalanced parenthesis in `{spec}`")))?;
                Self::periodic(digits(pre)?, digits(period)?)
            }
            None => {
                let list = digits(spec)?;
                check_nonempty(&list, "sequence")?;
                Ok(Self::explicit(list))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        let s = DirectiveSequence::parse("12(21)", 2).unwrap();
        assert_eq!(s.take(8).unwrap(), vec![0, 1, 1, 0, 1, 0, 1, 0]);
        let s = DirectiveSequence::parse("(1)", 2).unwrap();
        assert_eq!(s.take(3).unwrap(), vec![0, 0, 0]);
        let s = DirectiveSequence::parse("122", 2).unwrap();
        assert_eq!(s.len(), Some(3));
        assert!(s.get(3).is_err());
        assert!(DirectiveSequence::parse("13", 2).is_err());
        assert!(DirectiveSequence::parse("1(2", 2).is_err());
        assert!(DirectiveSequence::parse("1()", 2).is_err());
        assert!(DirectiveSequence::parse("", 2).is_err());
        let r = DirectiveSequence::parse("random:42:0.25,0.75", 2).unwrap();
        assert!(r.len().is_none());
        assert!(DirectiveSequence::parse("random:42:0.5", 2).is_err());
        assert!(DirectiveSequence::parse("random:x", 2).is_err());
        assert!(DirectiveSequence::parse("random:1:0.5,0.6", 2).is_err());
    }

    #[test]
    fn random_is_deterministic() {
        let a = DirectiveSequence::parse("random:7", 2).unwrap();
        let b = DirectiveSequence::uniform_random(7, 2);
        assert_eq!(a.take(500).unwrap(), b.take(500).unwrap());
        let c = DirectiveSequence::uniform_random(8, 2);
        assert_ne!(a.take(500).unwrap(), c.take(500).unwrap());
        let ones = a.take(10_000).unwrap().iter().filter(|&&x| x == 1).count();
        assert!((4_500..5_500).contains(&ones));
        let skewed = DirectiveSequence::random(3, &[0.9, 0.1]).unwrap();
        let ones = skewed
            .take(10_000)
            .unwrap()
            .iter()
            .filter(|&&x| x == 1)
            .count();
        assert!((800..1_200).contains(&ones));
    }

    #[test]
    fn shift_and_splice() {
        let base = DirectiveSequence::parse("12(21)", 2).unwrap();
        let shifted = base.shift(3);
        assert_eq!(
            shifted.take(4).unwrap(),
            base.take(7).unwrap()[3..].to_vec()
        );
        let sp = DirectiveSequence::splice(vec![0, 0, 0], DirectiveSequence::constant(1));
        assert_eq!(sp.take(5).unwrap(), vec![0, 0, 0, 1, 1]);
        assert_eq!(sp.shift(2).take(3).unwrap(), vec![0, 1, 1]);
        let r = DirectiveSequence::uniform_random(1, 2);
        assert_eq!(
            r.shift(10).take(5).unwrap(),
            r.take(15).unwrap()[10..].to_vec()
        );
    }
}
