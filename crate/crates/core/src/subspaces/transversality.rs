use nalgebra::DMatrix;
use serde::Serialize;

use super::{SubspaceError, UnionOfLinear};
use crate::numerics::{self, ToleranceConfig};

/// Subsets are enumerated exhaustively, so the union size is capped.
pub const MAX_TRANSVERSALITY_SUBSPACES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessReason {
    /// `rank(B_J) < min(D, sum of codimensions)`.
    RankDeficit,
    /// A member has codimension `0` or `D`.
    DegenerateCodimension,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransversalityWitness {
    /// Zero-based member indices, ascending.
    pub subset: Vec<usize>,
    pub rank: usize,
    pub expected: usize,
    pub reason: WitnessReason,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransversalityReport {
    pub transversal: bool,
    pub witness: Option<TransversalityWitness>,
}

/// Visits the nonempty subsets of `0..n` by size, then lexicographically, until `f`
/// returns `Some`.
fn find_subset<T, E>(
    n: usize,
    mut f: impl FnMut(&[usize]) -> Result<Option<T>, E>,
) -> Result<Option<T>, E> {
    for size in 1..=n {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            if let Some(hit) = f(&idx)? {
                return Ok(Some(hit));
            }
            // Advance to the next combination.
            let mut i = size;
            while i > 0 && idx[i - 1] == n - size + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    Ok(None)
}

/// Checks that every intersection of members has the smallest dimension its
/// codimensions allow: `rank(B_J) == min(D, sum_{i in J} c_i)` for every nonempty
/// subset `J`. Reports the first violating subset.
pub fn check_transversality(
    union: &UnionOfLinear,
    tol: &ToleranceConfig,
) -> Result<TransversalityReport, SubspaceError> {
    let n = union.len();
    if n > MAX_TRANSVERSALITY_SUBSPACES {
        return Err(SubspaceError::TooManySubspaces {
            n,
            cap: MAX_TRANSVERSALITY_SUBSPACES,
        });
    }
    let dim = union.ambient_dim();
    for (i, s) in union.iter().enumerate() {
        if s.codim() == 0 || s.codim() == dim {
            return Ok(TransversalityReport {
                transversal: false,
                witness: Some(TransversalityWitness {
                    subset: vec![i],
                    rank: s.codim(),
                    expected: s.codim(),
                    reason: WitnessReason::DegenerateCodimension,
                }),
            });
        }
    }

    let witness = find_subset(n, |subset| {
        let total: usize = subset.iter().map(|&i| union.subspaces[i].codim()).sum();
        let mut b = DMatrix::zeros(dim, total);
        let mut col = 0;
        for &i in subset {
            let c = union.subspaces[i].complement();
            b.view_mut((0, col), (dim, c.ncols())).copy_from(c);
            col += c.ncols();
        }
        let rank = numerics::rank_with_tol(&b, tol)?;
        let expected = dim.min(total);
        Ok::<_, SubspaceError>((rank != expected).then(|| TransversalityWitness {
            subset: subset.to_vec(),
            rank,
            expected,
            reason: WitnessReason::RankDeficit,
        }))
    })?;
    Ok(TransversalityReport {
        transversal: witness.is_none(),
        witness,
    })
}
