//! Combinatorial statistics of finite words: return gaps and balance.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::subst::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapReport {
    pub factor_len: usize,
    /// Distinct factors starting in the first half.
    pub factors: usize,
    /// Largest distance between consecutive occurrences of any such factor,
    /// counting the open gap after its last occurrence.
    pub max_gap: usize,
    pub worst_factor: Word,
}

/// Return gaps of the length-`factor_len` factors occurring in the first
/// half of `u`.
pub fn factor_gap_check(u: &[Letter], factor_len: usize) -> Result<GapReport> {
    if factor_len == 0 || factor_len > u.len() / 2 {
        return Err(Error::Input(format!(
            "factor length {factor_len} must be in 1..={}",
            u.len() / 2
        )));
    }
    let positions = u.len() - factor_len + 1;
    // factor -> (last occurrence, max gap so far)
    let mut stats: HashMap<&[Letter], (usize, usize)> = HashMap::new();
    for i in 0..positions {
        let f = &u[i..i + factor_len];
        match stats.get_mut(f) {
            Some((last, gap)) => {
                *gap = (*gap).max(i - *last);
                *last = i;
            }
            None if i < u.len() / 2 => {
                stats.insert(f, (i, 0));
            }
            None => {}
        }
    }
    let (worst, max_gap) = stats
        .iter()
        .map(|(f, &(last, gap))| (*f, gap.max(positions - last)))
        .max_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.cmp(a.0)))
        .expect("first half is nonempty");
    Ok(GapReport {
        factor_len,
        factors: stats.len(),
        max_gap,
        worst_factor: Word::from_letters(worst.to_vec()),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceReport {
    pub window: usize,
    /// `max - min` of the letter count over all windows, per letter.
    pub per_letter: Vec<usize>,
    pub c: usize,
}

/// Sliding-window balance of `u` over an alphabet of `d` letters.
pub fn balance(u: &[Letter], d: usize, k: usize) -> Result<BalanceReport> {
    if k == 0 || k > u.len() {
        return Err(Error::Input(format!(
            "window {k} must be in 1..={}",
            u.len()
        )));
    }
    if let Some(&b) = u.iter().find(|&&b| b as usize >= d) {
        return Err(Error::Input(format!(
            "letter {b} outside alphabet of size {d}"
        )));
    }
    let mut count = vec![0usize; d];
    for &b in &u[..k] {
        count[b as usize] += 1;
    }
    let mut lo = count.clone();
    let mut hi = count.clone();
    for i in k..u.len() {
        count[u[i] as usize] += 1;
        count[u[i - k] as usize] -= 1;
        for a in [u[i] as usize, u[i - k] as usize] {
            lo[a] = lo[a].min(count[a]);
            hi[a] = hi[a].max(count[a]);
        }
    }
    let per_letter: Vec<usize> = hi.iter().zip(&lo).map(|(h, l)| h - l).collect();
    let c = per_letter.iter().copied().max().unwrap_or(0);
    Ok(BalanceReport {
        window: k,
        per_letter,
        c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_balance(u: &[Letter], d: usize, k: usize) -> usize {
        (0..d)
            .map(|a| {
                let counts: Vec<usize> = u
                    .windows(k)
                    .map(|w| w.iter().filter(|&&b| b as usize == a).count())
                    .collect();
                counts.iter().max().unwrap() - counts.iter().min().unwrap()
            })
            .max()
            .unwrap()
    }

    #[test]
    fn balance_examples() {
        assert_eq!(balance(&[0, 0, 1, 1], 2, 2).unwrap().c, 2);
        assert_eq!(balance(&[0, 1, 0, 1], 2, 2).unwrap().c, 0);
        assert!(balance(&[0, 1], 2, 3).is_err());
        assert!(balance(&[0, 1], 2, 0).is_err());
    }

    #[test]
    fn balance_matches_brute_force() {
        let mut rng = crate::rng::SplitMix64::new(11);
        for _ in 0..200 {
            let n = 1 + rng.below(40) as usize;
            let u: Vec<Letter> = (0..n).map(|_| rng.below(3) as Letter).collect();
            for k in 1..=n {
                assert_eq!(balance(&u, 3, k).unwrap().c, brute_balance(&u, 3, k));
            }
        }
    }

    #[test]
    fn gaps() {
        let u = [0, 1, 0, 1, 0, 1, 0, 1];
        let r = factor_gap_check(&u, 2).unwrap();
        assert_eq!(r.factors, 2);
        assert_eq!(r.max_gap, 2);
        // 00 occurs once, at position 0; the open gap runs to the end.
        let u = [0, 0, 1, 1, 1, 1, 1, 1];
        let r = factor_gap_check(&u, 2).unwrap();
        assert_eq!(r.max_gap, 7);
        assert_eq!(r.worst_factor.letters(), &[0, 0][..]);
    }
}
