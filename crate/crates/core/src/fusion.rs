//! Rank fusion of several classifiers' result lists.
//!
//! Items missing from a member's list get nothing from that member.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ranking::RankedList;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FusionMethod {
    Borda,
    ScoreAddition,
}

impl FusionMethod {
    pub const ALL: [Self; 2] = [Self::ScoreAddition, Self::Borda];

    pub fn fuse(self, lists: &[&RankedList]) -> Result<RankedList> {
        match self {
            Self::Borda => borda_fuse(lists),
            Self::ScoreAddition => score_addition_fuse(lists),
        }
    }
}

impl fmt::Display for FusionMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Borda => "borda",
            Self::ScoreAddition => "scoreadd",
        })
    }
}

impl FromStr for FusionMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "borda" => Ok(Self::Borda),
            "scoreadd" | "score_addition" => Ok(Self::ScoreAddition),
            _ => Err(Error::Config(format!(
                "unknown fusion method `{s}` (expected borda or scoreadd)"
            ))),
        }
    }
}

fn require_ensemble(lists: &[&RankedList]) -> Result<()> {
    if lists.len() < 2 {
        return Err(Error::Config(format!(
            "fusion needs at least 2 member lists, got {}",
            lists.len()
        )));
    }
    Ok(())
}

fn accumulate<'a>(
    lists: &[&'a RankedList],
    contribution: impl Fn(&RankedList, usize) -> f64,
) -> RankedList {
    let mut totals: HashMap<&'a str, f64> = HashMap::new();
    for list in lists {
        for (i, item) in list.items().iter().enumerate() {
            *totals.entry(item.doc_id.as_str()).or_insert(0.0) += contribution(list, i);
        }
    }
    RankedList::from_scores(totals)
}

/// Borda count: each member contributes `M − rank + 1` for an item it
/// retrieved, where `M` is that member's list length.
pub fn borda_fuse(lists: &[&RankedList]) -> Result<RankedList> {
    require_ensemble(lists)?;
    Ok(accumulate(lists, |list, i| {
        let item = &list.items()[i];
        (list.m() - item.rank + 1) as f64
    }))
}

/// Min–max rescaling onto `[0, 1]`. A list whose scores are all equal maps
/// every item to 1.0. Order and ranks are unchanged.
pub fn normalize_scores(list: &RankedList) -> RankedList {
    let Some(first) = list.items().first() else {
        return list.clone();
    };
    let max = first.score;
    let min = list.items().last().map_or(max, |it| it.score);
    if max == min {
        return list.map_scores(|_| 1.0);
    }
    let range = max - min;
    list.map_scores(|s| (s - min) / range)
}

/// Score addition: each member's list is min–max normalized, then an
/// item's scores are summed across members.
pub fn score_addition_fuse(lists: &[&RankedList]) -> Result<RankedList> {
    require_ensemble(lists)?;
    let normalized: Vec<RankedList> = lists.iter().map(|l| normalize_scores(l)).collect();
    let refs: Vec<&RankedList> = normalized.iter().collect();
    Ok(accumulate(&refs, |list, i| list.items()[i].score))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn list(pairs: &[(&str, f64)]) -> RankedList {
        RankedList::from_scores(pairs.iter().map(|&(id, s)| (id, s)))
    }

    fn ids(l: &RankedList) -> Vec<&str> {
        l.doc_ids().collect()
    }

    #[test]
    fn borda_hand_example() {
        let l1 = list(&[("A", 0.9), ("B", 0.5), ("C", 0.1)]);
        let l2 = list(&[("B", 0.7), ("A", 0.6)]);
        let fused = borda_fuse(&[&l1, &l2]).unwrap();
        assert_eq!(ids(&fused), ["A", "B", "C"]);
        let scores: Vec<f64> = fused.items().iter().map(|i| i.score).collect();
        assert_eq!(scores, [4.0, 4.0, 1.0]);
    }

    #[test]
    fn borda_self_fusion_doubles() {
        let l = list(&[("x", 3.0), ("y", 2.0), ("z", 1.0)]);
        let fused = borda_fuse(&[&l, &l]).unwrap();
        assert_eq!(ids(&fused), ids(&l));
        let scores: Vec<f64> = fused.items().iter().map(|i| i.score).collect();
        assert_eq!(scores, [6.0, 4.0, 2.0]);
    }

    #[test]
    fn empty_member_contributes_nothing() {
        let l = list(&[("q", 0.3), ("p", 0.2), ("r", 0.8)]);
        let e = RankedList::empty();
        assert_eq!(ids(&borda_fuse(&[&e, &l]).unwrap()), ids(&l));
        // The minimum normalizes to 0 and a zero total is not retained.
        assert_eq!(ids(&score_addition_fuse(&[&e, &l]).unwrap()), ["r", "q"]);
    }

    #[test]
    fn needs_two_members() {
        let l = list(&[("a", 1.0)]);
        assert!(matches!(borda_fuse(&[&l]), Err(Error::Config(_))));
        assert!(matches!(score_addition_fuse(&[]), Err(Error::Config(_))));
    }

    #[test]
    fn normalization_cases() {
        let n = normalize_scores(&list(&[("a", 10.0), ("b", 5.0), ("c", 0.1)]));
        let s: Vec<f64> = n.items().iter().map(|i| i.score).collect();
        assert_eq!(s[0], 1.0);
        assert!((s[1] - 4.9 / 9.9).abs() < 1e-15);
        assert!((s[1] - 0.494949).abs() < 1e-6);
        assert_eq!(s[2], 0.0);

        let flat = normalize_scores(&list(&[("a", 0.3), ("b", 0.3)]));
        assert!(flat.items().iter().all(|i| i.score == 1.0));
        assert_eq!(
            normalize_scores(&list(&[("a", 0.01)])).items()[0].score,
            1.0
        );
        assert!(normalize_scores(&RankedList::empty()).is_empty());
    }

    #[test]
    fn score_addition_hand_example() {
        let l1 = list(&[("A", 0.9), ("B", 0.1)]);
        let l2 = list(&[("B", 0.8), ("A", 0.2)]);
        let fused = score_addition_fuse(&[&l1, &l2]).unwrap();
        assert_eq!(ids(&fused), ["A", "B"]);
        assert!(fused.items().iter().all(|i| i.score == 1.0));
    }

    #[test]
    fn score_addition_self_fusion_and_single_contribution() {
        let l = list(&[("x", 3.0), ("y", 2.0), ("z", 1.0)]);
        let fused = score_addition_fuse(&[&l, &l]).unwrap();
        assert_eq!(ids(&fused), ["x", "y"]);
        assert_eq!(fused.items()[0].score, 2.0);
        assert_eq!(fused.items()[1].score, 1.0);

        let other = list(&[("p", 5.0), ("q", 1.0)]);
        let third = list(&[("q", 2.0), ("r", 1.0)]);
        let fused = score_addition_fuse(&[&l, &other, &third]).unwrap();
        assert_eq!(fused.get("x").unwrap().score, 1.0);
    }

    #[test]
    fn method_names() {
        assert_eq!(
            "borda".parse::<FusionMethod>().unwrap(),
            FusionMethod::Borda
        );
        assert_eq!(
            "scoreadd".parse::<FusionMethod>().unwrap(),
            FusionMethod::ScoreAddition
        );
        assert!("rrf".parse::<FusionMethod>().is_err());
    }
}
