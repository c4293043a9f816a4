//! The common output type of every classifier and fuser.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedItem {
    pub doc_id: String,
    pub score: f64,
    /// 1-based position in the list.
    pub rank: usize,
}

/// Items with a strictly positive score, ordered by descending score with
/// ties broken by ascending `doc_id`. Ranks run `1..=len` without gaps.
///
/// The list length is the `M` of a Borda count: the number of items that
/// received a non-zero score.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RankedList {
    items: Vec<RankedItem>,
}

/// Canonical ordering: score descending, then doc id ascending.
pub fn rank_order(a: (&str, f64), b: (&str, f64)) -> Ordering {
    b.1.partial_cmp(&a.1)
        .unwrap_or(Ordering::Equal)
        .then_with(|| a.0.cmp(b.0))
}

impl RankedList {
    /// Builds a list from unordered `(doc_id, score)` pairs. Pairs whose score
    /// is not strictly positive (or not finite) are dropped.
    pub fn from_scores<I, S>(scores: I) -> Self
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        Self::from_scores_above(scores, 0.0)
    }

    /// Like [`RankedList::from_scores`] but retains only scores `> threshold`.
    pub fn from_scores_above<I, S>(scores: I, threshold: f64) -> Self
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        let mut pairs: Vec<(String, f64)> = scores
            .into_iter()
            .map(|(id, s)| (id.into(), s))
            .filter(|(_, s)| s.is_finite() && *s > threshold)
            .collect();
        pairs.sort_by(|a, b| rank_order((&a.0, a.1), (&b.0, b.1)));
        let items = pairs
            .into_iter()
            .enumerate()
            .map(|(i, (doc_id, score))| RankedItem {
                doc_id,
                score,
                rank: i + 1,
            })
            .collect();
        RankedList { items }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn items(&self) -> &[RankedItem] {
        &self.items
    }

    /// Number of retrieved items.
    pub fn m(&self) -> usize {
        self.items.len()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn top(&self, k: usize) -> &[RankedItem] {
        &self.items[..k.min(self.items.len())]
    }

    pub fn doc_ids(&self) -> impl Iterator<Item = &str> {
        self.items.iter().map(|it| it.doc_id.as_str())
    }

    pub fn get(&self, doc_id: &str) -> Option<&RankedItem> {
        self.items.iter().find(|it| it.doc_id == doc_id)
    }

    /// Replaces every score via `f`, keeping the existing order and ranks.
    /// `f` must preserve positivity.
    pub(crate) fn map_scores(&self, f: impl Fn(f64) -> f64) -> RankedList {
        RankedList {
            items: self
                .items
                .iter()
                .map(|it| RankedItem {
                    score: f(it.score),
                    ..it.clone()
                })
                .collect(),
        }
    }

    /// Checks the ordering invariants. Used by tests and cache loading.
    pub fn is_well_formed(&self) -> bool {
        self.items
            .iter()
            .enumerate()
            .all(|(i, it)| it.rank == i + 1 && it.score > 0.0 && it.score.is_finite())
            && self.items.windows(2).all(|w| {
                rank_order((&w[0].doc_id, w[0].score), (&w[1].doc_id, w[1].score)) == Ordering::Less
            })
    }
}
