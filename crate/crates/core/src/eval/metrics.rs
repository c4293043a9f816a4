use crate::corpus::RelevanceJudgments;
use crate::error::{Error, Result};
use crate::ranking::RankedList;

/// Number of queries whose first `k` items contain at least one relevant
/// lesson.
pub fn top_k_hits<'a, I>(
    results: I,
    judgments: &RelevanceJudgments,
    k: usize,
) -> Result<(usize, usize)>
where
    I: IntoIterator<Item = (&'a str, &'a RankedList)>,
{
    if k == 0 {
        return Err(Error::Config("top-K cutoff must be at least 1".into()));
    }
    let mut hits = 0;
    let mut total = 0;
    for (artifact_id, list) in results {
        let relevant = judgments
            .relevant(artifact_id)
            .ok_or_else(|| Error::UnknownArtifact(artifact_id.to_string()))?;
        total += 1;
        if list.top(k).iter().any(|it| relevant.contains(&it.doc_id)) {
            hits += 1;
        }
    }
    Ok((hits, total))
}

/// Fraction of queries with a relevant lesson in the top `k`. Queries with
/// no relevant lessons count in the denominator.
pub fn top_k_accuracy<'a, I>(results: I, judgments: &RelevanceJudgments, k: usize) -> Result<f64>
where
    I: IntoIterator<Item = (&'a str, &'a RankedList)>,
{
    let (hits, total) = top_k_hits(results, judgments, k)?;
    if total == 0 {
        return Err(Error::UndefinedMetric("top-K over zero queries".into()));
    }
    Ok(hits as f64 / total as f64)
}

/// Relative improvement of a hybrid over the best of its members, in
/// percent: `100 · (hybrid − best) / best`.
pub fn relative_improvement(p_hybrid: f64, p_best_individual: f64) -> Result<f64> {
    if p_best_individual <= 0.0 {
        return Err(Error::UndefinedMetric(
            "relative improvement over a best member with zero accuracy".into(),
        ));
    }
    Ok(100.0 * (p_hybrid - p_best_individual) / p_best_individual)
}

/// Percent rounded to the nearest integer, halves away from zero.
pub fn round_percent(percent: f64) -> i64 {
    percent.round() as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn judged() -> RelevanceJudgments {
        let mut j = RelevanceJudgments::new();
        j.add("q1", "L1");
        j.add("q2", "L2");
        j
    }

    #[test]
    fn all_and_none() {
        let j = judged();
        let hit1 = RankedList::from_scores([("L1", 1.0)]);
        let hit2 = RankedList::from_scores([("L3", 2.0), ("L2", 1.0)]);
        let miss = RankedList::from_scores([("L3", 1.0)]);
        assert_eq!(
            top_k_accuracy([("q1", &hit1), ("q2", &hit2)], &j, 20).unwrap(),
            1.0
        );
        assert_eq!(
            top_k_accuracy([("q1", &miss), ("q2", &miss)], &j, 20).unwrap(),
            0.0
        );
        assert_eq!(
            top_k_accuracy([("q1", &hit1), ("q2", &hit2)], &j, 1).unwrap(),
            0.5
        );
    }

    #[test]
    fn errors() {
        let j = judged();
        let l = RankedList::empty();
        assert!(matches!(
            top_k_accuracy(std::iter::empty(), &j, 20),
            Err(Error::UndefinedMetric(_))
        ));
        assert!(top_k_accuracy([("q1", &l)], &j, 0).is_err());
        assert!(matches!(
            top_k_accuracy([("zz", &l)], &j, 5),
            Err(Error::UnknownArtifact(_))
        ));
        assert!(relative_improvement(0.5, 0.0).is_err());
    }

    #[test]
    fn thirty_eight_of_fifty_four() {
        let mut j = RelevanceJudgments::new();
        let hit = RankedList::from_scores([("L", 1.0)]);
        let ids: Vec<String> = (0..54).map(|i| format!("q{i}")).collect();
        for id in ids.iter().take(38) {
            j.add(id.as_str(), "L");
        }
        for id in ids.iter().skip(38) {
            j.add(id.as_str(), "other");
        }
        let acc = top_k_accuracy(ids.iter().map(|id| (id.as_str(), &hit)), &j, 20).unwrap();
        assert!((acc - 0.70370).abs() < 5e-6);
    }

    #[test]
    fn ri_values() {
        assert_eq!(
            round_percent(relative_improvement(0.7407, 0.7037).unwrap()),
            5
        );
        assert_eq!(relative_improvement(0.4, 0.4).unwrap(), 0.0);
        assert_eq!(
            round_percent(relative_improvement(30.0 / 54.0, 25.0 / 54.0).unwrap()),
            20
        );
        assert_eq!(
            round_percent(relative_improvement(27.0 / 54.0, 25.0 / 54.0).unwrap()),
            8
        );
        assert!(relative_improvement(0.3, 0.4).unwrap() < 0.0);
    }
}
