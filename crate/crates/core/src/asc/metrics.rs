use super::AscError;

/// Largest number of distinct labels on either side accepted by
/// [`best_label_matching`]; the matching is exact and exponential in this.
pub const MAX_MATCHED_LABELS: usize = 16;

/// Maps each predicted label to the truth label it is matched with, so that the
/// number of points whose labels agree under the map is maximal. Labels left
/// unmatched map to `None`.
pub fn best_label_matching(
    predicted: &[usize],
    truth: &[usize],
) -> Result<Vec<Option<usize>>, AscError> {
    if predicted.len() != truth.len() {
        return Err(AscError::DimensionMismatch {
            expected: truth.len(),
            found: predicted.len(),
        });
    }
    let kp = predicted.iter().max().map_or(0, |m| m + 1);
    let kt = truth.iter().max().map_or(0, |m| m + 1);
    if kp > MAX_MATCHED_LABELS || kt > MAX_MATCHED_LABELS {
        return Err(AscError::InvalidConfig("too many labels for exact matching"));
    }
    let mut overlap = vec![vec![0usize; kt]; kp];
    for (&p, &t) in predicted.iter().zip(truth) {
        overlap[p][t] += 1;
    }

    // best[i][mask]: most agreements using predicted labels i.. and truth labels
    // outside `mask`.
    let full = 1usize << kt;
    let mut best = vec![vec![0usize; full]; kp + 1];
    for i in (0..kp).rev() {
        for mask in 0..full {
            let mut v = best[i + 1][mask];
            for t in (0..kt).filter(|t| mask & (1 << t) == 0) {
                v = v.max(overlap[i][t] + best[i + 1][mask | (1 << t)]);
            }
            best[i][mask] = v;
        }
    }

    let mut map = vec![None; kp];
    let mut mask = 0;
    for (i, slot) in map.iter_mut().enumerate() {
        if best[i][mask] == best[i + 1][mask] {
            continue;
        }
        let t = (0..kt)
            .filter(|t| mask & (1 << t) == 0)
            .find(|&t| best[i][mask] == overlap[i][t] + best[i + 1][mask | (1 << t)])
            .expect("the optimum is attained by some truth label");
        *slot = Some(t);
        mask |= 1 << t;
    }
    Ok(map)
}

/// Fraction of points misassigned under the best one-to-one matching of labels.
pub fn clustering_error(predicted: &[usize], truth: &[usize]) -> Result<f64, AscError> {
    if truth.is_empty() {
        return Ok(0.0);
    }
    let map = best_label_matching(predicted, truth)?;
    let agree = predicted
        .iter()
        .zip(truth)
        .filter(|&(&p, &t)| map[p] == Some(t))
        .count();
    Ok((truth.len() - agree) as f64 / truth.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_invariant() {
        let truth = [0, 0, 1, 1, 2, 2];
        assert_eq!(clustering_error(&truth, &truth).unwrap(), 0.0);
        assert_eq!(clustering_error(&[2, 2, 0, 0, 1, 1], &truth).unwrap(), 0.0);
        assert_eq!(
            best_label_matching(&[2, 2, 0, 0, 1, 1], &truth).unwrap(),
            vec![Some(1), Some(2), Some(0)]
        );
    }

    #[test]
    fn one_in_a_hundred() {
        let truth: Vec<usize> = (0..100).map(|i| usize::from(i >= 50)).collect();
        let mut pred: Vec<usize> = truth.iter().map(|&t| 1 - t).collect();
        pred[7] = 0;
        assert!((clustering_error(&pred, &truth).unwrap() - 0.01).abs() < 1e-15);
    }

    #[test]
    fn unequal_label_counts() {
        // Everything in one predicted cluster: only the larger truth class matches.
        assert!((clustering_error(&[0, 0, 0, 0], &[0, 0, 0, 1]).unwrap() - 0.25).abs() < 1e-15);
        assert!(clustering_error(&[0, 1], &[0]).is_err());
    }
}
