//! Which hybrids get built: the best classifier of every (model,
//! preprocessing) subspace, combined in pairs and quads within a model, plus
//! all of them together.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{ClassifierConfig, ModelKind};
use crate::textprep::PreprocessConfig;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombinationSpec {
    /// 1-based.
    pub comb_id: usize,
    pub members: Vec<ClassifierConfig>,
}

/// Best config of each of the 12 (model, preprocessing) subspaces, by
/// top-K. Ties go to the canonically first config. Output is in canonical
/// (model, preprocessing) order.
pub fn select_subspace_toppers(
    results: &[(ClassifierConfig, f64)],
) -> Result<Vec<ClassifierConfig>> {
    let mut best: BTreeMap<(ModelKind, PreprocessConfig), (ClassifierConfig, f64)> =
        BTreeMap::new();
    for &(config, score) in results {
        let key = (config.model(), config.prep());
        match best.get(&key) {
            Some(&(current, s)) if s > score || (s == score && current < config) => {}
            _ => {
                best.insert(key, (config, score));
            }
        }
    }
    let mut toppers = Vec::with_capacity(12);
    for model in ModelKind::ALL {
        for prep in PreprocessConfig::all() {
            let (config, _) = best
                .get(&(model, prep))
                .ok_or_else(|| Error::Config(format!("no results for subspace {model}/{prep}")))?;
            toppers.push(*config);
        }
    }
    Ok(toppers)
}

/// The 22 hybrids: per model its six pairs then its quad (vsm, lsi, lda),
/// then all twelve toppers together. Input order does not matter.
pub fn build_combinations(toppers: &[ClassifierConfig]) -> Result<Vec<CombinationSpec>> {
    let mut sorted = toppers.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != 12 || toppers.len() != 12 {
        return Err(Error::Config(format!(
            "expected 12 distinct subspace toppers, got {} ({} distinct)",
            toppers.len(),
            sorted.len()
        )));
    }

    let mut specs: Vec<Vec<ClassifierConfig>> = Vec::with_capacity(22);
    for model in ModelKind::ALL {
        let group: Vec<ClassifierConfig> = sorted
            .iter()
            .copied()
            .filter(|c| c.model() == model)
            .collect();
        if group.len() != 4 {
            return Err(Error::Config(format!(
                "expected 4 toppers for {model}, got {}",
                group.len()
            )));
        }
        for i in 0..4 {
            for j in i + 1..4 {
                specs.push(vec![group[i], group[j]]);
            }
        }
        specs.push(group);
    }
    specs.push(sorted);

    Ok(specs
        .into_iter()
        .enumerate()
        .map(|(i, members)| CombinationSpec {
            comb_id: i + 1,
            members,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::enumerate_grid;

    #[test]
    fn ties_choose_canonical_first() {
        let results: Vec<_> = enumerate_grid().into_iter().map(|c| (c, 0.5)).collect();
        let toppers = select_subspace_toppers(&results).unwrap();
        assert_eq!(toppers.len(), 12);
        for t in &toppers {
            let first = enumerate_grid()
                .into_iter()
                .find(|c| c.model() == t.model() && c.prep() == t.prep())
                .unwrap();
            assert_eq!(*t, first);
        }
    }

    #[test]
    fn strict_maxima_are_found() {
        let grid = enumerate_grid();
        // Last config of each subspace gets the highest score.
        let results: Vec<_> = grid
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, i as f64))
            .collect();
        let toppers = select_subspace_toppers(&results).unwrap();
        for t in &toppers {
            let last = grid
                .iter()
                .rev()
                .find(|c| c.model() == t.model() && c.prep() == t.prep())
                .unwrap();
            assert_eq!(t, last);
        }
    }

    #[test]
    fn missing_subspace_is_an_error() {
        let results: Vec<_> = enumerate_grid()
            .into_iter()
            .filter(|c| c.model() != ModelKind::Lda)
            .map(|c| (c, 1.0))
            .collect();
        assert!(select_subspace_toppers(&results).is_err());
    }

    #[test]
    fn twenty_two_combinations() {
        let results: Vec<_> = enumerate_grid().into_iter().map(|c| (c, 1.0)).collect();
        let toppers = select_subspace_toppers(&results).unwrap();
        let combos = build_combinations(&toppers).unwrap();
        assert_eq!(combos.len(), 22);
        let sizes: Vec<usize> = combos.iter().map(|c| c.members.len()).collect();
        assert_eq!(sizes.iter().filter(|&&s| s == 2).count(), 18);
        assert_eq!(sizes.iter().filter(|&&s| s == 4).count(), 3);
        assert_eq!(sizes.iter().filter(|&&s| s == 12).count(), 1);
        assert_eq!(&sizes[..7], [2, 2, 2, 2, 2, 2, 4]);
        assert_eq!(sizes[21], 12);
        for (i, c) in combos.iter().enumerate() {
            assert_eq!(c.comb_id, i + 1);
            let mut m = c.members.clone();
            m.dedup();
            assert_eq!(m.len(), c.members.len());
            assert!(c.members.iter().all(|x| toppers.contains(x)));
        }
        assert!(combos[..7]
            .iter()
            .all(|c| c.members.iter().all(|m| m.model() == ModelKind::Vsm)));

        let mut shuffled = toppers.clone();
        shuffled.reverse();
        assert_eq!(build_combinations(&shuffled).unwrap(), combos);
    }

    #[test]
    fn malformed_toppers_rejected() {
        let grid = enumerate_grid();
        assert!(build_combinations(&grid[..11]).is_err());
        // Twelve VSM configs: wrong per-model split.
        assert!(build_combinations(&grid[..12]).is_err());
        let mut dup = grid[..11].to_vec();
        dup.push(grid[0]);
        assert!(build_combinations(&dup).is_err());
    }
}
