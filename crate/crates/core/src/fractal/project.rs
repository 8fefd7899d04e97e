use crate::adic::{derivation_for_length, Derivation, DirectiveSequence, SubstitutionSet};
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::spectral::{SpectralData, PISOT_BAND};
use crate::subst::{abelianize, AbelianVector, Letter};

use super::points::{max_adapted_norm, PointSet, Provenance, RauzyApprox};

/// Lattice path of a word: the abelianizations of its prefixes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SteppedLine {
    pub vertices: Vec<AbelianVector>,
    pub letters: Vec<Letter>,
}

pub fn stepped_line(u: &[Letter], d: usize) -> SteppedLine {
    let mut vertices = Vec::with_capacity(u.len() + 1);
    let mut x = AbelianVector::zero(d);
    vertices.push(x.clone());
    for &a in u {
        x.0[a as usize] += 1;
        vertices.push(x.clone());
    }
    SteppedLine {
        vertices,
        letters: u.to_vec(),
    }
}

/// Checks that `set` shares the matrix of `spectral` and that the matrix is
/// contracting on its stable space.
pub fn require_fractal_setting(set: &SubstitutionSet, spectral: &SpectralData) -> Result<()> {
    let m = set.require_shared_matrix()?;
    if m != spectral.matrix() {
        return Err(Error::Input(
            "spectral data was computed for a different matrix".into(),
        ));
    }
    let report = spectral.pisot(PISOT_BAND)?;
    if !report.contracting {
        return Err(Error::Domain(format!(
            "matrix is not Pisot (non-Perron modulus {:.6} >= 1): the projection is unbounded",
            report.moduli.first().copied().unwrap_or(f64::NAN)
        )));
    }
    Ok(())
}

/// `C`: the largest adapted norm of `π(l(P))` over proper prefixes `P` of
/// the images of every substitution in the set.
pub fn prefix_constant(set: &SubstitutionSet, spectral: &SpectralData) -> Result<f64> {
    let d = set.d();
    let mut c: f64 = 0.0;
    for sub in set.subs() {
        for img in sub.images() {
            for k in 0..img.len() {
                let l = abelianize(&img[..k], d)?;
                c = c.max(spectral.adapted_norm(&spectral.project_int(&l.0)));
            }
        }
    }
    Ok(c)
}

const PROJECT_CHUNK: usize = 8192;

/// Projects the first `n` vertices of the stepped line of `word`; vertex `k`
/// goes to the subtile of the letter `word[k]`.
pub fn project_word_with(
    exec: Exec,
    spectral: &SpectralData,
    word: &[Letter],
    n: usize,
) -> Vec<PointSet> {
    let d = spectral.alphabet_size();
    let dim = spectral.stable_dim();
    let n = n.min(word.len());
    // Exact abelianization at each chunk start.
    let mut starts = Vec::with_capacity(n.div_ceil(PROJECT_CHUNK));
    let mut x = vec![0i64; d];
    for (k, &a) in word[..n].iter().enumerate() {
        if k % PROJECT_CHUNK == 0 {
            starts.push(x.clone());
        }
        x[a as usize] += 1;
    }
    let parts = par::chunked(exec, n, PROJECT_CHUNK, |range| {
        let mut x = starts[range.start / PROJECT_CHUNK].clone();
        let mut tiles = vec![PointSet::new(dim); d];
        let mut y = vec![0.0; dim];
        for k in range {
            let a = word[k] as usize;
            spectral.project_int_into(&x, &mut y);
            tiles[a].push(&y);
            x[a] += 1;
        }
        tiles
    });
    let mut tiles = vec![PointSet::new(dim); d];
    for part in parts {
        for (t, p) in tiles.iter_mut().zip(part) {
            t.extend(&p);
        }
    }
    tiles
}

/// Projected cloud of every prefix of the derived word `U_n`.
pub fn derivation_cloud(spectral: &SpectralData, der: &Derivation) -> Vec<PointSet> {
    let word = der.word();
    project_word_with(Exec::default(), spectral, &word, word.len())
}

/// Projection of the first `n` prefixes of the limit point along chain
/// `chain_index`.
pub fn project_prefixes(
    seq: &DirectiveSequence,
    set: &SubstitutionSet,
    spectral: &SpectralData,
    n: usize,
    chain_index: usize,
) -> Result<RauzyApprox> {
    project_prefixes_with(Exec::default(), seq, set, spectral, n, chain_index)
}

pub fn project_prefixes_with(
    exec: Exec,
    seq: &DirectiveSequence,
    set: &SubstitutionSet,
    spectral: &SpectralData,
    n: usize,
    chain_index: usize,
) -> Result<RauzyApprox> {
    if n == 0 {
        return Err(Error::Input("point count must be at least 1".into()));
    }
    require_fractal_setting(set, spectral)?;
    let der = derivation_for_length(seq, set, n as u64, chain_index)?;
    let word = der.word();
    let tiles = project_word_with(exec, spectral, &word, n);
    let c = prefix_constant(set, spectral)?;
    Ok(RauzyApprox {
        max_adapted_norm: max_adapted_norm(spectral, &tiles),
        tiles,
        provenance: Provenance::Projection,
        depth: der.depth(),
        bound: c / (1.0 - spectral.lambda),
        thinned: false,
    })
}
